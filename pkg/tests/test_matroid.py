import numpy as np
import pytest

from cutkit.errors import InfeasibleError, InputError
from cutkit.forge import gen_random
from cutkit.graph import WeightedGraph, cut_value
from cutkit.matroid import (
    ExplicitMatroid,
    GraphicMatroid,
    PartitionMatroid,
    UniformMatroid,
    check_sandwich,
    in_base_polytope,
    pipage_round,
    quad_value,
    solve_lp,
    solve_matroid,
    spot_check_axioms,
)
from cutkit.oracle import oracle_matroid


def k3():
    return WeightedGraph(3, [(0, 1, 1 / 3), (0, 2, 1 / 3), (1, 2, 1 / 3)])


def single_edge():
    return WeightedGraph(2, [(0, 1, 1.0)])


# ---------------------------------------------------------------------------
# oracles


def test_uniform_matroid_basics():
    m = UniformMatroid(4, 2)
    assert m.is_independent({0, 1}) and not m.is_independent({0, 1, 2})
    assert m.rank() == 2
    assert spot_check_axioms(m)


def test_partition_matroid_basics():
    m = PartitionMatroid(4, [{0, 1}, {2, 3}], [1, 1])
    assert m.is_independent({0, 2}) and not m.is_independent({0, 1})
    assert m.rank() == 2
    assert spot_check_axioms(m)


def test_partition_matroid_infeasible_budget():
    with pytest.raises(InfeasibleError):
        PartitionMatroid(2, [{0}, {1}], [2, 0])


def test_graphic_matroid_basics():
    m = GraphicMatroid(3, [(0, 1), (1, 2), (0, 2)])
    assert m.rank() == 2
    assert m.is_independent({0, 1}) and not m.is_independent({0, 1, 2})
    assert spot_check_axioms(m)


def test_explicit_matroid_closure():
    m = ExplicitMatroid(4, [[0, 2], [0, 3], [1, 2], [1, 3]])
    assert m.is_independent({0}) and m.is_independent({1, 3})
    assert not m.is_independent({0, 1})
    assert m.rank() == 2
    assert spot_check_axioms(m)


def test_spot_check_flags_non_matroid():
    bad = ExplicitMatroid(4, [[0, 1], [1, 2], [2, 3]])
    assert not spot_check_axioms(bad)


# ---------------------------------------------------------------------------
# LP


def test_lp_single_edge():
    fp = solve_lp(single_edge(), UniformMatroid(2, 1))
    assert fp.value == pytest.approx(1.0, abs=1e-7)


def test_lp_k3_rank1():
    fp = solve_lp(k3(), UniformMatroid(3, 1))
    assert fp.value >= 2 / 3 - 1e-7


def test_lp_edgeless():
    g = WeightedGraph(3, [])
    fp = solve_lp(g, UniformMatroid(3, 1))
    assert fp.value == pytest.approx(0.0, abs=1e-9)


def test_lp_edge_caps_respected():
    rng = np.random.default_rng(31)
    for s in range(8):
        inst = gen_random(7, 0.6, "unit", 2, "uniform", seed=400 + s)
        g = inst.graph
        if not g.edges:
            continue
        m = PartitionMatroid(7, inst.parts, inst.budgets)
        fp = solve_lp(g, m)
        assert in_base_polytope(m, fp.x)
        for e, (u, v, _) in enumerate(g.edges):
            cap = min(fp.x[u] + fp.x[v], 2 - fp.x[u] - fp.x[v])
            assert fp.y[e] <= cap + 1e-9


def test_lp_integrality_gap_chain():
    # LP value never exceeds twice the quadratic value at its own optimum
    for s in range(8):
        inst = gen_random(8, 0.7, "unit", 1, "uniform", seed=420 + s)
        g = inst.graph
        if not g.edges:
            continue
        m = UniformMatroid(8, inst.budgets[0])
        fp = solve_lp(g, m)
        assert fp.value <= 2 * quad_value(g, fp.x) + 1e-6


# ---------------------------------------------------------------------------
# quadratic proxy


def test_quad_integral_coincides():
    g = single_edge()
    assert quad_value(g, [1.0, 0.0]) == pytest.approx(cut_value(g, {0}), abs=1e-12)


def test_quad_half_half():
    assert quad_value(single_edge(), [0.5, 0.5]) == pytest.approx(0.5, abs=1e-12)


def test_quad_zeros():
    assert quad_value(single_edge(), [0.0, 0.0]) == 0.0


def test_quad_range_validation():
    with pytest.raises(InputError):
        quad_value(single_edge(), [1.5, 0.0])


# ---------------------------------------------------------------------------
# sandwich


@pytest.mark.parametrize(
    "x,y,expect",
    [
        (0.0, 0.0, (0.0, 0.0, 0.0, True)),
        (1.0, 0.0, (1.0, 1.0, 2.0, True)),
        (0.5, 0.5, (0.5, 1.0, 1.0, True)),
    ],
)
def test_sandwich_examples(x, y, expect):
    lhs, mid, rhs, ok = check_sandwich(x, y)
    assert (lhs, mid, rhs, ok) == pytest.approx(expect)


def test_sandwich_range_validation():
    with pytest.raises(InputError):
        check_sandwich(1.5, 0.0)


def test_sandwich_random_pairs():
    rng = np.random.default_rng(33)
    for _ in range(2000):
        _, _, _, ok = check_sandwich(float(rng.random()), float(rng.random()))
        assert ok


# ---------------------------------------------------------------------------
# pipage


def test_pipage_integral_noop():
    m = UniformMatroid(2, 1)
    out = pipage_round(single_edge(), m, [1.0, 0.0])
    assert out == {0}


def test_pipage_half_half_edge():
    m = UniformMatroid(2, 1)
    out = pipage_round(single_edge(), m, [0.5, 0.5])
    assert out in ({0}, {1})
    assert cut_value(single_edge(), out) == 1.0


def test_pipage_outside_polytope_rejected():
    m = UniformMatroid(2, 1)
    with pytest.raises(InputError):
        pipage_round(single_edge(), m, [0.9, 0.9])


def test_pipage_partition_random_points():
    rng = np.random.default_rng(35)
    for s in range(10):
        inst = gen_random(8, 0.6, "unit", 2, "uniform", seed=440 + s)
        g = inst.graph
        if not g.edges:
            continue
        m = PartitionMatroid(8, inst.parts, inst.budgets)
        # random base-polytope point: mix of random base indicators
        bases = []
        for _ in range(4):
            chosen = []
            for part, k in zip(inst.parts, inst.budgets):
                chosen.extend(rng.choice(sorted(part), size=k, replace=False))
            x = np.zeros(8)
            x[chosen] = 1.0
            bases.append(x)
        weights = rng.dirichlet(np.ones(len(bases)))
        x = np.einsum("i,ij->j", weights, np.array(bases))
        before = quad_value(g, x)
        out = pipage_round(g, m, x)
        assert m.is_independent(out) and len(out) == m.rank()
        assert cut_value(g, out) >= before - 1e-7


def test_pipage_graphic():
    g = k3()
    m = GraphicMatroid(3, [(0, 1), (1, 2), (0, 2)])
    x = np.array([2 / 3, 2 / 3, 2 / 3])
    out = pipage_round(g, m, x)
    assert m.is_independent(out) and len(out) == 2
    assert cut_value(g, out) >= quad_value(g, x) - 1e-7


# ---------------------------------------------------------------------------
# end-to-end


def test_solve_matroid_single_edge():
    sol = solve_matroid(single_edge(), UniformMatroid(2, 1))
    assert sol.value == 1.0 and sol.feasible
    assert sol.stage_trace == ("lp", "pipage")


def test_solve_matroid_star():
    star = WeightedGraph(5, [(0, i, 0.25) for i in range(1, 5)])
    sol = solve_matroid(star, UniformMatroid(5, 1))
    assert sol.set == {0}
    assert sol.value == pytest.approx(1.0, abs=1e-9)


def test_solve_matroid_corpus_half_guarantee():
    for s in range(12):
        inst = gen_random(8, 0.5, "unit", 2, "uniform", seed=460 + s)
        g = inst.graph
        if not g.edges:
            continue
        m = PartitionMatroid(8, inst.parts, inst.budgets)
        lp = solve_lp(g, m)
        sol = solve_matroid(g, m)
        opt = oracle_matroid(g, m)
        assert sol.feasible
        assert sol.value >= 0.5 * lp.value - 1e-6
        assert sol.value >= 0.5 * opt.opt_value - 1e-9


def test_solve_matroid_infeasible():
    with pytest.raises(InfeasibleError):
        solve_lp(single_edge(), ExplicitMatroid(2, []))


def test_pipage_stalls_on_non_matroid():
    # exchange fails for this listed family, so the tight-set walk has no
    # valid partner at the LP optimum and stops with a stall error instead
    # of silently emitting a non-base
    from cutkit.errors import StallError

    bad = ExplicitMatroid(4, [[0, 1], [1, 2], [2, 3]])
    g = WeightedGraph(4, [(0, 1, 0.25), (1, 2, 0.25), (2, 3, 0.25), (0, 3, 0.25)])
    with pytest.raises(StallError):
        solve_matroid(g, bad)
