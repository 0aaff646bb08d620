import numpy as np
import pytest

from cutkit.config import Config
from cutkit.errors import (
    CapacityError,
    DegenerateEventError,
    InfeasibleError,
    InputError,
    SearchFailureError,
)
from cutkit.forge import gen_random
from cutkit.graph import ConstrainedInstance, WeightedGraph
from cutkit.kernel import kernelize_multi, kernelize_single
from cutkit.moments import (
    MomentVector,
    block_independence_score,
    build_program,
    condition,
    integral_moment_vector,
    make_block_independent,
    marginals,
    mutual_information,
    solve,
    subset_basis,
)
from cutkit.oracle import oracle_constrained


def mv_from_dist(n, level, weighted_points):
    """Moment vector of an explicit distribution over +-1 assignments."""
    basis = subset_basis(n, 2 * level)
    y = np.zeros(basis.masks.size)
    for prob, assign in weighted_points:
        for pos, mask in enumerate(basis.masks):
            prod = 1.0
            m = int(mask)
            while m:
                v = (m & -m).bit_length() - 1
                prod *= assign[v]
                m &= m - 1
            y[pos] += prob * prod
    return MomentVector(n, level, y)


def product_uniform(n, level):
    basis = subset_basis(n, 2 * level)
    y = np.zeros(basis.masks.size)
    y[basis.position(())] = 1.0
    return MomentVector(n, level, y)


def perfectly_correlated_pair(level=3):
    return mv_from_dist(2, level, [(0.5, (1, 1)), (0.5, (-1, -1))])


def k3():
    return WeightedGraph(3, [(0, 1, 1 / 3), (0, 2, 1 / 3), (1, 2, 1 / 3)])


# ---------------------------------------------------------------------------
# program construction and solving


def test_program_single_edge():
    g = WeightedGraph(2, [(0, 1, 1.0)])
    ker = kernelize_single(g, 1, 0.5)
    prog = build_program(ker, 2)
    assert len(prog.edges) == 1
    mv = solve(prog)
    assert mv.objective_value(prog.edges) == pytest.approx(1.0, abs=1e-6)
    assert mv.bias(0) + mv.bias(1) == pytest.approx(0.0, abs=1e-6)


def test_program_k3_reaches_integral_optimum():
    ker = kernelize_single(k3(), 1, 0.5)
    prog = build_program(ker, 2)
    assert len(prog.edges) == 3
    mv = solve(prog)
    assert mv.objective_value(prog.edges) >= 2 / 3 - 1e-6


def test_super_vertex_never_selected():
    ker = kernelize_single(k3(), 1, 0.5)
    prog = build_program(ker, 2)
    mv = solve(prog)
    (s,) = ker.forbidden
    assert mv.bias(s) == pytest.approx(-1.0, abs=1e-6)


def test_k4_relaxation_dominates():
    g = WeightedGraph(4, [(u, v, 1 / 6) for u in range(4) for v in range(u + 1, 4)])
    ker = kernelize_single(g, 2, 0.5)
    prog = build_program(ker, 2)
    mv = solve(prog)
    assert mv.objective_value(prog.edges) >= 4 / 6 - 1e-6


def test_level_validation():
    ker = kernelize_single(k3(), 1, 0.5)
    with pytest.raises(InputError):
        build_program(ker, 1)


def test_capacity_validation():
    g = WeightedGraph(16, [(0, 1, 1.0)])
    ker = kernelize_single(g, 8, 0.5)  # identity kernel keeps all 16 vertices
    with pytest.raises(CapacityError):
        build_program(ker, 2, Config(n_max_sdp=14))


def test_infeasible_budget_detected():
    g = WeightedGraph(4, [(0, 1, 1.0)])
    inst = ConstrainedInstance(g, [{0, 1}, {2, 3}], [1, 1])
    ker = kernelize_multi(inst, 0.5)
    bad = type(ker)(
        reduced=ker.reduced,
        forbidden=ker.forbidden,
        parts=ker.parts,
        budgets=(2, 3),
        epsilon=ker.epsilon,
        orig_to_reduced=ker.orig_to_reduced,
        super_sources=ker.super_sources,
    )
    with pytest.raises(InfeasibleError):
        build_program(bad, 2)


def test_moment_matrix_psd_invariant():
    ker = kernelize_single(k3(), 1, 0.5)
    mv = solve(build_program(ker, 3))
    assert mv.min_eigenvalue() >= -1e-7
    assert mv.moment(()) == pytest.approx(1.0, abs=1e-9)


# ---------------------------------------------------------------------------
# marginals and conditioning


def test_marginal_unbiased_single():
    mv = product_uniform(2, 2)
    mu = marginals(mv, [0])
    assert mu.prob((1,)) == pytest.approx(0.5, abs=1e-12)


def test_marginal_perfect_correlation():
    mv = perfectly_correlated_pair()
    mu = marginals(mv, [0, 1])
    assert mu.prob((1, 1)) == pytest.approx(0.5, abs=1e-12)
    assert mu.prob((-1, -1)) == pytest.approx(0.5, abs=1e-12)
    assert mu.prob((1, -1)) == pytest.approx(0.0, abs=1e-12)


def test_marginal_independent_pair():
    mv = product_uniform(2, 2)
    mu = marginals(mv, [0, 1])
    for assign in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
        assert mu.prob(assign) == pytest.approx(0.25, abs=1e-12)


def test_marginal_support_capped_by_level():
    mv = product_uniform(4, 2)
    with pytest.raises(InputError):
        marginals(mv, [0, 1, 2])


def test_marginals_sum_to_one_on_solver_output():
    ker = kernelize_single(k3(), 1, 0.5)
    mv = solve(build_program(ker, 2))
    mu = marginals(mv, [0, 1])
    assert mu.total() == pytest.approx(1.0, abs=1e-7)
    assert all(-1e-7 <= p <= 1 + 1e-7 for p in mu.probs.values())


def test_condition_deterministic_variable():
    mv = mv_from_dist(2, 2, [(1.0, (1, -1))])
    child, lam = condition(mv, 0, 1)
    assert lam == pytest.approx(1.0, abs=1e-12)
    assert child.level == 1
    assert child.bias(1) == pytest.approx(-1.0, abs=1e-12)


def test_condition_perfect_correlation_forces_partner():
    mv = perfectly_correlated_pair()
    child, lam = condition(mv, 0, 1)
    assert lam == pytest.approx(0.5, abs=1e-12)
    assert child.bias(1) == pytest.approx(1.0, abs=1e-12)


def test_condition_product_leaves_marginals():
    mv = mv_from_dist(
        3,
        2,
        [
            (p0 * p1 * p2, (s0, s1, s2))
            for p0, s0 in ((0.7, 1), (0.3, -1))
            for p1, s1 in ((0.4, 1), (0.6, -1))
            for p2, s2 in ((0.5, 1), (0.5, -1))
        ],
    )
    child, lam = condition(mv, 0, 1)
    assert lam == pytest.approx(0.7, abs=1e-12)
    assert child.bias(1) == pytest.approx(mv.bias(1), abs=1e-12)
    assert child.bias(2) == pytest.approx(mv.bias(2), abs=1e-12)


def test_condition_degenerate_event():
    mv = mv_from_dist(2, 2, [(1.0, (1, -1))])
    with pytest.raises(DegenerateEventError):
        condition(mv, 0, -1)


def test_condition_level_floor():
    mv = product_uniform(2, 1)
    with pytest.raises(InputError):
        condition(mv, 0, 1)


def test_condition_convex_split():
    mv = mv_from_dist(2, 3, [(0.4, (1, 1)), (0.35, (1, -1)), (0.25, (-1, -1))])
    plus, lp = condition(mv, 0, 1)
    minus, lm = condition(mv, 0, -1)
    assert lp + lm == pytest.approx(1.0, abs=1e-12)
    recon = lp * plus.y + lm * minus.y
    parent = mv.y[mv.basis.pos[plus.basis.masks]]
    assert np.abs(recon - parent).max() <= 1e-12


# ---------------------------------------------------------------------------
# information quantities


def test_mi_independent_zero():
    assert mutual_information(product_uniform(2, 2), 0, 1) == 0.0


def test_mi_perfect_correlation_one_bit():
    assert mutual_information(perfectly_correlated_pair(2), 0, 1) == pytest.approx(
        1.0, abs=1e-12
    )


def test_mi_half_correlation_value():
    mv = mv_from_dist(2, 2, [(3 / 8, (1, 1)), (1 / 8, (1, -1)), (1 / 8, (-1, 1)), (3 / 8, (-1, -1))])
    assert mv.corr(0, 1) == pytest.approx(0.5, abs=1e-12)
    # independent evaluation of I = 2 H(1/2) - H(joint)
    joint = np.array([3 / 8, 1 / 8, 1 / 8, 3 / 8])
    expect = 2.0 - float(-(joint * np.log2(joint)).sum())
    assert mutual_information(mv, 0, 1) == pytest.approx(expect, abs=1e-12)
    assert expect == pytest.approx(0.18872, abs=5e-6)


def test_mi_requires_distinct():
    with pytest.raises(InputError):
        mutual_information(product_uniform(2, 2), 1, 1)


def test_block_score_product_zero():
    per_part, cross = block_independence_score(product_uniform(4, 2), [[0, 1], [2, 3]])
    assert per_part == [0.0, 0.0]
    assert cross == 0.0


def test_block_score_correlated_pair():
    per_part, cross = block_independence_score(perfectly_correlated_pair(2), [[0, 1]])
    assert per_part[0] == pytest.approx(1.0, abs=1e-12)
    assert cross == 0.0


def test_block_score_singleton_parts():
    mv = perfectly_correlated_pair(2)
    per_part, cross = block_independence_score(mv, [[0], [1]])
    assert per_part == [0.0, 0.0]
    assert cross == pytest.approx(mutual_information(mv, 0, 1), abs=1e-12)


# ---------------------------------------------------------------------------
# block-independence search


def test_make_block_independent_early_exit():
    mv = product_uniform(3, 3)
    out = make_block_independent(mv, [[0, 1, 2]], 0.05, 1, rng_seed=0)
    assert out is mv


def test_make_block_independent_conditions_away_correlation():
    mv = perfectly_correlated_pair(3)
    out = make_block_independent(mv, [[0, 1]], 0.1, 1, rng_seed=1)
    assert mutual_information(out, 0, 1) <= 0.1
    assert out.level == 2


def test_make_block_independent_budget_validation():
    mv = perfectly_correlated_pair(2)
    with pytest.raises(InputError):
        make_block_independent(mv, [[0, 1]], 0.1, 1, rng_seed=0)


def test_make_block_independent_failure_carries_candidate():
    # budget 0 on a correlated input cannot succeed
    mv = perfectly_correlated_pair(2)
    with pytest.raises(SearchFailureError) as exc_info:
        make_block_independent(mv, [[0, 1]], 0.1, 0, rng_seed=0)
    assert exc_info.value.best is not None


def test_relaxation_dominance_small_corpus():
    cfg = Config()
    checked = 0
    for s in range(12):
        inst = gen_random(6, 0.6, "unit", 1, "uniform", seed=300 + s)
        if not inst.graph.edges or not inst.has_half_budgets():
            continue
        ker = kernelize_multi(inst, 0.5)
        prog = build_program(ker, 0, cfg)
        mv = solve(prog, config=cfg)
        reduced_inst = ConstrainedInstance(ker.reduced, ker.parts, ker.budgets)
        opt = oracle_constrained(reduced_inst, forbidden=ker.forbidden)
        assert mv.objective_value(prog.edges) >= opt.opt_value - 1e-6
        checked += 1
    assert checked >= 8


def test_integral_moment_vector_matches_cut():
    g = k3()
    mv = integral_moment_vector(3, 2, {0})
    assert mv.objective_value(g.edges) == pytest.approx(2 / 3, abs=1e-12)
    assert mv.min_eigenvalue() >= -1e-9


def test_moment_vector_json_map():
    mv = perfectly_correlated_pair(2)
    obj = mv.to_json_dict()
    assert obj["level"] == 2 and obj["n"] == 2
    assert obj["y"][""] == 1.0
    assert obj["y"]["0,1"] == pytest.approx(1.0)
    assert obj["y"]["0"] == pytest.approx(0.0)


def test_mi_symmetry_and_nonnegativity():
    rng = np.random.default_rng(51)
    ker = kernelize_single(k3(), 1, 0.5)
    mv = solve(build_program(ker, 2))
    for i in range(3):
        for j in range(i + 1, 3):
            a = mutual_information(mv, i, j)
            b = mutual_information(mv, j, i)
            assert a == pytest.approx(b, abs=1e-12)
            assert a >= 0.0


def test_conditioned_children_stay_psd():
    # conditioning corresponds to localizing the moment matrix with the
    # indicator (1 +- x_i)/2; on solver output both branches must remain
    # PSD within tolerance one level down
    ker = kernelize_single(k3(), 1, 0.5)
    mv = solve(build_program(ker, 3))
    for i in range(3):
        b = mv.bias(i)
        for v in (1, -1):
            if (1 + v * b) / 2 < 1e-6:
                continue
            child, _ = condition(mv, i, v)
            assert child.min_eigenvalue() >= -1e-6
