"""Half-approximate Max-Cut over matroid bases: LP relaxation plus pipage.

The LP maximizes sum_e w_e y_e with y_e capped by both x_u + x_v and
2 - (x_u + x_v) over the base polytope.  Pipage rounding then walks the
fractional optimum along two-coordinate directions, using the convexity of
the quadratic cut proxy sum_e w_e (x_u + x_v - 2 x_u x_v) so its value
never drops, until the point is integral.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np
from scipy.optimize import linprog

from .config import Config
from .errors import CapacityError, InfeasibleError, InputError, StallError
from .graph import CutSolution, WeightedGraph, cut_value

_FEAS_TOL = 1e-7
_STEP_TOL = 1e-9


# ---------------------------------------------------------------------------
# matroid oracles


class MatroidOracle:
    """Independence-query abstraction over ground set [n]."""

    kind = "abstract"

    def __init__(self, n: int):
        self.n = int(n)

    def is_independent(self, s) -> bool:
        raise NotImplementedError

    def rank(self) -> int:
        raise NotImplementedError

    def rank_of(self, s) -> int:
        """Rank of an arbitrary subset (max independent subset size)."""
        s = sorted(set(s))
        for size in range(len(s), -1, -1):
            for c in combinations(s, size):
                if self.is_independent(frozenset(c)):
                    return size
        return 0

    def any_base(self) -> frozenset:
        """Greedy base through the exchange property."""
        cur = set()
        for v in range(self.n):
            if self.is_independent(frozenset(cur | {v})):
                cur.add(v)
        return frozenset(cur)

    def polytope_constraints(self):
        """(masks, bounds) rows x(A) <= bound defining the independence part
        of the base polytope, plus the implicit box [0,1]^n; together with
        x(V) = rank they carve out the base polytope exactly."""
        raise NotImplementedError


class UniformMatroid(MatroidOracle):
    kind = "uniform"

    def __init__(self, n: int, k: int):
        super().__init__(n)
        self.k = int(k)
        if not 0 <= self.k <= self.n:
            raise InfeasibleError(f"uniform rank {k} out of range for n={n}")

    def is_independent(self, s) -> bool:
        return len(frozenset(s)) <= self.k

    def rank(self) -> int:
        return self.k

    def polytope_constraints(self):
        return [(frozenset(range(self.n)), float(self.k))]


class PartitionMatroid(MatroidOracle):
    kind = "partition"

    def __init__(self, n: int, parts, budgets):
        super().__init__(n)
        self.parts = tuple(frozenset(int(v) for v in p) for p in parts)
        self.budgets = tuple(int(k) for k in budgets)
        covered = set()
        for p in self.parts:
            if covered & p:
                raise InputError("partition matroid parts must be disjoint")
            covered |= p
        if covered != set(range(n)):
            raise InputError("partition matroid parts must cover the ground set")
        for p, k in zip(self.parts, self.budgets):
            if k < 0:
                raise InputError("budgets must be nonnegative")
            if k > len(p):
                raise InfeasibleError(f"budget {k} exceeds part size {len(p)}")

    def is_independent(self, s) -> bool:
        s = frozenset(s)
        return all(len(s & p) <= k for p, k in zip(self.parts, self.budgets))

    def rank(self) -> int:
        return sum(self.budgets)

    def polytope_constraints(self):
        return [(p, float(k)) for p, k in zip(self.parts, self.budgets)]


class GraphicMatroid(MatroidOracle):
    """Ground-set elements are the edges of an auxiliary graph; a subset is
    independent when those edges are acyclic."""

    kind = "graphic"

    def __init__(self, aux_vertices: int, aux_edges):
        super().__init__(len(aux_edges))
        self.aux_vertices = int(aux_vertices)
        self.aux_edges = tuple((int(a), int(b)) for a, b in aux_edges)
        for a, b in self.aux_edges:
            if not (0 <= a < aux_vertices and 0 <= b < aux_vertices):
                raise InputError("auxiliary edge endpoint out of range")

    def _acyclic_rank(self, s):
        parent = list(range(self.aux_vertices))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        count = 0
        acyclic = True
        for idx in sorted(s):
            a, b = self.aux_edges[idx]
            ra, rb = find(a), find(b)
            if ra == rb:
                acyclic = False
            else:
                parent[ra] = rb
                count += 1
        return count, acyclic

    def is_independent(self, s) -> bool:
        return self._acyclic_rank(frozenset(s))[1]

    def rank_of(self, s) -> int:
        return self._acyclic_rank(frozenset(s))[0]

    def rank(self) -> int:
        return self.rank_of(range(self.n))

    def polytope_constraints(self, config: Config | None = None):
        return _enumerated_constraints(self, config)


class ExplicitMatroid(MatroidOracle):
    """Independence given by the downward closure of explicitly listed sets."""

    kind = "explicit"

    def __init__(self, n: int, independent_sets):
        super().__init__(n)
        sets = [frozenset(int(v) for v in s) for s in independent_sets]
        for s in sets:
            for v in s:
                if not 0 <= v < n:
                    raise InputError(f"element {v} out of range")
        if not sets:
            raise InfeasibleError("explicit matroid needs at least one set")
        # keep only maximal sets; the closure is unchanged
        self.maximal = tuple(
            s for s in sets if not any(s < t for t in sets)
        )
        self._masks = np.asarray(
            [sum(1 << v for v in s) for s in self.maximal], dtype=np.int64
        )

    def is_independent(self, s) -> bool:
        s = frozenset(s)
        return any(s <= t for t in self.maximal)

    def rank_of(self, s) -> int:
        mask = 0
        for v in s:
            mask |= 1 << v
        inter = self._masks & mask
        return max(int(m).bit_count() for m in inter)

    def rank(self) -> int:
        return max(len(s) for s in self.maximal)

    def polytope_constraints(self, config: Config | None = None):
        return _enumerated_constraints(self, config)


def _enumerated_constraints(m: MatroidOracle, config: Config | None = None):
    """All rank constraints x(A) <= rank(A), enumerated over subsets."""
    config = config or Config()
    if m.n > config.matroid_enum_cap:
        raise CapacityError(
            f"ground set {m.n} exceeds enumerated-constraint cap "
            f"{config.matroid_enum_cap}"
        )
    out = []
    for mask in range(1, 1 << m.n):
        subset = frozenset(v for v in range(m.n) if (mask >> v) & 1)
        out.append((subset, float(m.rank_of(subset))))
    return out


def spot_check_axioms(m: MatroidOracle, rng_seed=0, rounds=200) -> bool:
    """Hereditary + exchange checks; returns True when clean.

    Exhaustive over all independent-set pairs for n <= 12, randomized
    sampling beyond that.
    """
    if m.n <= 12:
        independents = []
        for mask in range(1 << m.n):
            s = frozenset(v for v in range(m.n) if (mask >> v) & 1)
            if m.is_independent(s):
                if s and any(not m.is_independent(s - {v}) for v in s):
                    return False
                independents.append(s)
        for s in independents:
            for b in independents:
                if len(s) < len(b):
                    if not any(m.is_independent(s | {v}) for v in b - s):
                        return False
        return True

    rng = np.random.default_rng(rng_seed)
    universe = list(range(m.n))
    for _ in range(rounds):
        size = int(rng.integers(0, m.n + 1))
        s = frozenset(rng.choice(universe, size=size, replace=False).tolist())
        if m.is_independent(s):
            if s and any(not m.is_independent(s - {v}) for v in s):
                return False
        size_b = int(rng.integers(0, m.n + 1))
        b = frozenset(rng.choice(universe, size=size_b, replace=False).tolist())
        if m.is_independent(s) and m.is_independent(b) and len(s) < len(b):
            if not any(m.is_independent(s | {v}) for v in b - s):
                return False
    return True


# ---------------------------------------------------------------------------
# LP relaxation


@dataclass(frozen=True)
class FractionalPoint:
    x: np.ndarray
    y: np.ndarray  # per-edge, aligned with g.edges
    value: float


def _base_polytope_rows(m: MatroidOracle, config: Config):
    if isinstance(m, (GraphicMatroid, ExplicitMatroid)):
        return m.polytope_constraints(config)
    return m.polytope_constraints()


def _constraint_matrix(m: MatroidOracle, n: int, config: Config):
    """Boolean membership matrix and bounds for the rank constraints."""
    rows = _base_polytope_rows(m, config)
    mat = np.zeros((len(rows), n), dtype=bool)
    bounds = np.zeros(len(rows))
    for r, (subset, bound) in enumerate(rows):
        mat[r, sorted(subset)] = True
        bounds[r] = bound
    return mat, bounds


def in_base_polytope(m: MatroidOracle, x, tol: float = _FEAS_TOL, config=None) -> bool:
    """Membership in the base polytope, via the kind's constraint rows."""
    config = config or Config()
    x = np.asarray(x, dtype=np.float64)
    if x.min(initial=0.0) < -tol or x.max(initial=0.0) > 1.0 + tol:
        return False
    if abs(x.sum() - m.rank()) > tol * max(1, m.n):
        return False
    mat, bounds = _constraint_matrix(m, m.n, config)
    if mat.size and (mat @ x > bounds + tol * np.maximum(1, mat.sum(axis=1))).any():
        return False
    return True


def solve_lp(
    g: WeightedGraph, m: MatroidOracle, config: Config | None = None
) -> FractionalPoint:
    """Optimal fractional point of the edge-capped cut relaxation."""
    config = config or Config()
    if g.n != m.n:
        raise InputError("graph and matroid ground sets differ")
    rank = m.rank()
    if not m.is_independent(m.any_base()) or len(m.any_base()) < rank:
        raise InfeasibleError("matroid has no base")

    n, edges = g.n, g.edges
    nv = n + len(edges)
    cost = np.zeros(nv)
    for e, (u, v, w) in enumerate(edges):
        cost[n + e] = -w  # linprog minimizes

    a_ub = []
    b_ub = []
    for e, (u, v, _) in enumerate(edges):
        row = np.zeros(nv)
        row[n + e] = 1.0
        row[u] -= 1.0
        row[v] -= 1.0
        a_ub.append(row)
        b_ub.append(0.0)
        row = np.zeros(nv)
        row[n + e] = 1.0
        row[u] += 1.0
        row[v] += 1.0
        a_ub.append(row)
        b_ub.append(2.0)
    for subset, bound in _base_polytope_rows(m, config):
        if len(subset) == n:
            continue  # covered by the x(V) = rank equality
        row = np.zeros(nv)
        row[sorted(subset)] = 1.0
        a_ub.append(row)
        b_ub.append(bound)
    a_eq = [np.zeros(nv)]
    a_eq[0][:n] = 1.0
    b_eq = [float(rank)]

    res = linprog(
        cost,
        A_ub=np.asarray(a_ub) if a_ub else None,
        b_ub=np.asarray(b_ub) if b_ub else None,
        A_eq=np.asarray(a_eq),
        b_eq=np.asarray(b_eq),
        bounds=[(0.0, 1.0)] * nv,
        method="highs",
    )
    if not res.success:
        raise InfeasibleError(f"LP failed: {res.message}")
    x = np.clip(res.x[:n], 0.0, 1.0)
    y = res.x[n:]
    return FractionalPoint(x=x, y=y, value=float(-res.fun))


def quad_value(g: WeightedGraph, x) -> float:
    """Quadratic cut proxy; equals the cut value at integral points."""
    x = np.asarray(x, dtype=np.float64)
    if x.min(initial=0.0) < -_FEAS_TOL or x.max(initial=0.0) > 1.0 + _FEAS_TOL:
        raise InputError("coordinates must lie in [0, 1]")
    total = 0.0
    for u, v, w in g.edges:
        total += w * (x[u] + x[v] - 2.0 * x[u] * x[v])
    return float(total)


def check_sandwich(x: float, y: float):
    """Evaluate q <= min(x+y, 2-x-y) <= 2q with q = x + y - 2xy on [0,1]^2."""
    if not (0.0 <= x <= 1.0 and 0.0 <= y <= 1.0):
        raise InputError("inputs must lie in [0, 1]")
    lhs = x + y - 2.0 * x * y
    mid = min(x + y, 2.0 - x - y)
    rhs = 2.0 * lhs
    ok = lhs <= mid + 1e-12 and mid <= rhs + 1e-12
    return lhs, mid, rhs, ok


# ---------------------------------------------------------------------------
# pipage rounding


def _max_step(x, u, v, mat, bounds):
    """Largest t >= 0 with x + t(e_u - e_v) inside the polytope."""
    t = min(1.0 - x[u], x[v])
    if mat.size:
        sel = mat[:, u] & ~mat[:, v]
        if sel.any():
            slack = bounds[sel] - mat[sel] @ x
            t = min(t, float(slack.min()))
    return max(t, 0.0)


def pipage_round(
    g: WeightedGraph, m: MatroidOracle, x, config: Config | None = None
) -> frozenset:
    """Round a base-polytope point to a base without losing quad value.

    Repeatedly picks the lowest-index fractional coordinate u, finds the
    minimal tight constraint set containing u (its partner pool), then moves
    along +-(e_u - e_v) to whichever reachable endpoint has the larger quad
    value.  Each move makes a coordinate integral or tightens a new
    constraint, so the walk ends in a bounded number of steps.
    """
    config = config or Config()
    x = np.asarray(x, dtype=np.float64).copy()
    if x.shape != (g.n,):
        raise InputError("fractional point has wrong dimension")
    if not in_base_polytope(m, x, tol=_FEAS_TOL, config=config):
        raise InputError("point is outside the base polytope")

    mat, bounds = _constraint_matrix(m, g.n, config)

    def snap(vec):
        vec[np.abs(vec) < _STEP_TOL] = 0.0
        vec[np.abs(vec - 1.0) < _STEP_TOL] = 1.0

    snap(x)
    max_steps = 10 * g.n * g.n + 50
    for _ in range(max_steps):
        frac = np.nonzero((x > 0.0) & (x < 1.0))[0]
        if frac.size == 0:
            break
        u = int(frac[0])
        # minimal tight set containing u (x(V) = rank is always tight)
        tight = np.ones(g.n, dtype=bool)
        if mat.size:
            is_tight = (mat @ x >= bounds - _STEP_TOL) & mat[:, u]
            if is_tight.any():
                tight = mat[is_tight].all(axis=0)
        partners = [int(v) for v in frac if v != u and tight[v]]
        if not partners:
            raise StallError("no fractional partner inside the tight set")
        v = partners[0]
        t_up = _max_step(x, u, v, mat, bounds)
        t_dn = _max_step(x, v, u, mat, bounds)
        d = np.zeros_like(x)
        d[u], d[v] = 1.0, -1.0
        cand_up = np.clip(x + t_up * d, 0.0, 1.0)
        cand_dn = np.clip(x - t_dn * d, 0.0, 1.0)
        q_up = quad_value(g, cand_up)
        q_dn = quad_value(g, cand_dn)
        base_q = quad_value(g, x)
        x = cand_up if q_up >= q_dn else cand_dn
        if max(q_up, q_dn) < base_q - 1e-9:
            raise StallError("quadratic value decreased during pipage")
        snap(x)
    else:
        raise StallError(f"pipage made no progress within {max_steps} steps")

    chosen = frozenset(int(v) for v in np.nonzero(x > 0.5)[0])
    if len(chosen) != m.rank() or not m.is_independent(chosen):
        raise StallError("pipage endpoint is not a matroid base")
    return chosen


def solve_matroid(
    g: WeightedGraph, m: MatroidOracle, config: Config | None = None
) -> CutSolution:
    """LP + pipage; the result cuts at least half of the LP optimum."""
    config = config or Config()
    frac = solve_lp(g, m, config)
    chosen = pipage_round(g, m, frac.x, config)
    return CutSolution(
        set=chosen,
        value=cut_value(g, chosen),
        feasible=m.is_independent(chosen) and len(chosen) == m.rank(),
        stage_trace=("lp", "pipage"),
    )
