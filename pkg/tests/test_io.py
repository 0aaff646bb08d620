import pytest

from cutkit.errors import ParseError
from cutkit.forge import gen_random
from cutkit.io import (
    format_instance_json,
    format_instance_text,
    parse_3dm,
    parse_instance,
)
from cutkit.matroid import (
    ExplicitMatroid,
    GraphicMatroid,
    PartitionMatroid,
    UniformMatroid,
)


def roundtrip(inst, matroid=None):
    text = format_instance_text(inst, matroid)
    parsed, m = parse_instance(text)
    assert parsed.graph.n == inst.graph.n
    assert parsed.graph.edges == inst.graph.edges
    assert parsed.parts == inst.parts
    assert parsed.budgets == inst.budgets
    return m


def test_text_roundtrip_plain():
    inst = gen_random(7, 0.5, "uniform", 2, "uniform", seed=5)
    assert roundtrip(inst) is None


def test_text_roundtrip_uniform_matroid():
    inst = gen_random(6, 0.5, "unit", 1, "uniform", seed=6)
    m = roundtrip(inst, UniformMatroid(6, 2))
    assert m.kind == "uniform" and m.k == 2


def test_text_roundtrip_partition_matroid():
    inst = gen_random(6, 0.5, "unit", 2, "uniform", seed=7)
    m = roundtrip(inst, PartitionMatroid(6, inst.parts, inst.budgets))
    assert m.kind == "partition"
    assert m.parts == inst.parts and m.budgets == inst.budgets


def test_text_roundtrip_graphic_matroid():
    inst = gen_random(4, 0.9, "unit", 1, "uniform", seed=8)
    aux = [(0, 1), (1, 2), (2, 3), (0, 3)]
    m = roundtrip(inst, GraphicMatroid(4, aux))
    assert m.kind == "graphic" and m.aux_edges == tuple(aux)


def test_text_roundtrip_explicit_matroid():
    inst = gen_random(4, 0.9, "unit", 1, "uniform", seed=9)
    m = roundtrip(inst, ExplicitMatroid(4, [[0, 2], [0, 3], [1, 2], [1, 3]]))
    assert m.kind == "explicit"
    assert m.is_independent({0, 2}) and not m.is_independent({0, 1})


def test_json_roundtrip():
    inst = gen_random(7, 0.5, "uniform", 2, "uniform", seed=10)
    text = format_instance_json(inst, UniformMatroid(7, 3))
    parsed, m = parse_instance(text)
    assert parsed.graph.edges == inst.graph.edges
    assert m.kind == "uniform" and m.k == 3


def test_json_schema_checked():
    with pytest.raises(ParseError):
        parse_instance('{"schema": "other/9", "n": 1, "edges": [], "parts": []}')


def test_parse_error_carries_line():
    bad = "2 1 1\n0 1 notaweight\n2 1 0 1\n"
    with pytest.raises(ParseError) as exc_info:
        parse_instance(bad)
    assert exc_info.value.line == 2


def test_parse_part_size_mismatch():
    bad = "2 1 1\n0 1 1.0\n3 1 0 1\n"
    with pytest.raises(ParseError):
        parse_instance(bad)


def test_parse_trailing_garbage():
    bad = "2 1 1\n0 1 1.0\n2 1 0 1\nwhat is this\n"
    with pytest.raises(ParseError):
        parse_instance(bad)


def test_parse_comments_and_blanks():
    text = "# instance\n2 1 1\n\n0 1 1.0  # the only edge\n2 1 0 1\n"
    inst, m = parse_instance(text)
    assert inst.graph.edges == ((0, 1, 1.0),)


def test_parse_3dm():
    tdm = parse_3dm("0 0 0\n1 1 1\n# done\n")
    assert tdm.size == 2 and len(tdm.triples) == 2
    with pytest.raises(ParseError):
        parse_3dm("0 0\n")
    with pytest.raises(ParseError):
        parse_3dm("")
