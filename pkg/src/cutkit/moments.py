"""Moment-vector machinery for small conditioned cut relaxations.

A level-L vector stores pseudo-moments of all +-1 monomials on subsets of
size <= 2L.  The moment matrix indexed by subsets of size <= L has entry
(I, J) equal to the moment of the symmetric difference I ^ J, so PSD-ness,
marginal extraction, and conditioning are all cheap index arithmetic on
bitmasks.  The program solver is a first-order ADMM loop alternating an
eigendecomposition-based projection onto the PSD cone with an exact
projection onto the affine constraint set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product

import numpy as np

from .config import Config, PSD_TOL
from .errors import (
    CapacityError,
    ConvergenceError,
    DegenerateEventError,
    InfeasibleError,
    InputError,
    SearchFailureError,
)
from .kernel import KernelResult

_LUT_N_MAX = 20  # mask lookup tables get size 2^n


# ---------------------------------------------------------------------------
# subset bases and moment-matrix structure


def basis_dim(n: int, max_size: int) -> int:
    return sum(math.comb(n, i) for i in range(min(max_size, n) + 1))


@dataclass(frozen=True)
class SubsetBasis:
    """All subsets of [n] with size <= max_size, as sorted bitmasks."""

    n: int
    max_size: int
    masks: np.ndarray  # int64, sorted by (popcount, value)
    pos: np.ndarray  # int32 lookup table of size 2^n; -1 for absent masks

    def position(self, subset) -> int:
        mask = 0
        for v in subset:
            mask |= 1 << v
        p = int(self.pos[mask])
        if p < 0:
            raise InputError(f"subset {sorted(subset)} outside basis")
        return p


@lru_cache(maxsize=64)
def subset_basis(n: int, max_size: int) -> SubsetBasis:
    if n > _LUT_N_MAX:
        raise CapacityError(f"n={n} exceeds moment-basis cap {_LUT_N_MAX}")
    max_size = min(max_size, n)
    masks = []
    for size in range(max_size + 1):
        masks.extend(
            sorted(sum(1 << v for v in c) for c in combinations(range(n), size))
        )
    masks = np.asarray(masks, dtype=np.int64)
    pos = np.full(1 << n, -1, dtype=np.int32)
    pos[masks] = np.arange(masks.size, dtype=np.int32)
    pos.flags.writeable = False
    masks.flags.writeable = False
    return SubsetBasis(n, max_size, masks, pos)


@dataclass(frozen=True)
class MomentStructure:
    """Index plumbing tying a moment matrix to its moment vector."""

    n: int
    level: int
    basis: SubsetBasis  # subsets up to 2*level
    row_masks: np.ndarray  # subsets up to level, the matrix index
    class_idx: np.ndarray  # (N, N) -> position in basis of I ^ J
    class_count: np.ndarray  # multiplicity of each basis subset in the matrix

    @property
    def dim_y(self) -> int:
        return self.basis.masks.size

    @property
    def dim_mat(self) -> int:
        return self.row_masks.size


@lru_cache(maxsize=32)
def moment_structure(n: int, level: int) -> MomentStructure:
    basis = subset_basis(n, 2 * level)
    rows = subset_basis(n, level).masks
    class_idx = basis.pos[rows[:, None] ^ rows[None, :]].astype(np.int64)
    class_count = np.bincount(class_idx.ravel(), minlength=basis.masks.size).astype(
        np.float64
    )
    class_idx.flags.writeable = False
    class_count.flags.writeable = False
    return MomentStructure(n, level, basis, rows, class_idx, class_count)


# ---------------------------------------------------------------------------
# moment vectors


@dataclass(frozen=True)
class MomentVector:
    """Pseudo-moments E[prod_{i in S} x_i] for |S| <= 2*level over {-1,1}^n."""

    n: int
    level: int
    y: np.ndarray  # aligned with subset_basis(n, 2*level).masks

    def __post_init__(self):
        self.y.flags.writeable = False

    @property
    def basis(self) -> SubsetBasis:
        return subset_basis(self.n, 2 * self.level)

    def moment(self, subset) -> float:
        return float(self.y[self.basis.position(subset)])

    def bias(self, i: int) -> float:
        return self.moment([i])

    def corr(self, i: int, j: int) -> float:
        if i == j:
            return 1.0
        return self.moment([i, j])

    def moment_matrix(self) -> np.ndarray:
        ms = moment_structure(self.n, self.level)
        return self.y[ms.class_idx]

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.moment_matrix())[0])

    def objective_value(self, edges) -> float:
        """Expected cut weight sum_e w_e * P(endpoints disagree)."""
        total = 0.0
        for u, v, w in edges:
            total += w * (1.0 - self.corr(u, v)) / 2.0
        return total

    def to_json_dict(self):
        out = {}
        for mask, val in zip(self.basis.masks, self.y):
            key = ",".join(str(v) for v in range(self.n) if (int(mask) >> v) & 1)
            out[key] = float(val)
        return {"n": self.n, "level": self.level, "y": out}


def integral_moment_vector(n: int, level: int, s) -> MomentVector:
    """Moment vector of the point distribution on the indicator of s."""
    basis = subset_basis(n, 2 * level)
    x = np.full(n, -1.0)
    for v in s:
        x[int(v)] = 1.0
    y = np.ones(basis.masks.size)
    for p, mask in enumerate(basis.masks):
        prod = 1.0
        m = int(mask)
        while m:
            v = (m & -m).bit_length() - 1
            prod *= x[v]
            m &= m - 1
        y[p] = prod
    return MomentVector(n, level, y)


# ---------------------------------------------------------------------------
# local distributions and information quantities


@dataclass(frozen=True)
class LocalDistribution:
    """Distribution over +-1 assignments of a small support set."""

    support: tuple
    probs: dict  # assignment tuple -> probability

    def prob(self, assignment) -> float:
        return self.probs.get(tuple(assignment), 0.0)

    def total(self) -> float:
        return float(sum(self.probs.values()))

    def marginalize(self, sub) -> "LocalDistribution":
        sub = tuple(sorted(sub))
        idx = [self.support.index(v) for v in sub]
        out = {}
        for assign, p in self.probs.items():
            key = tuple(assign[i] for i in idx)
            out[key] = out.get(key, 0.0) + p
        return LocalDistribution(sub, out)


def marginals(m: MomentVector, s) -> LocalDistribution:
    """Local distribution on s recovered by inverting the moment map."""
    s = tuple(sorted(int(v) for v in s))
    if len(set(s)) != len(s):
        raise InputError("duplicate vertices in support")
    if len(s) > m.level:
        raise InputError(f"support size {len(s)} exceeds level {m.level}")
    k = len(s)
    subsets = []
    for r in range(k + 1):
        for c in combinations(range(k), r):
            subsets.append((c, m.moment([s[i] for i in c])))
    probs = {}
    scale = 2.0 ** (-k)
    for assign in product((1, -1), repeat=k):
        val = 0.0
        for idx, mom in subsets:
            sign = 1
            for i in idx:
                sign *= assign[i]
            val += sign * mom
        probs[assign] = min(max(val * scale, 0.0), 1.0)
    return LocalDistribution(s, probs)


def _entropy_bits(probs) -> float:
    p = np.asarray(probs, dtype=np.float64)
    p = np.clip(p, 0.0, None)
    t = p.sum()
    if t <= 0.0:
        return 0.0
    p = p / t
    nz = p[p > 0.0]
    return float(-(nz * np.log2(nz)).sum())


def _pair_joint(m: MomentVector, i: int, j: int) -> np.ndarray:
    """2x2 joint of (x_i, x_j) in order (++, +-, -+, --), clipped."""
    b_i, b_j, r = m.bias(i), m.bias(j), m.corr(i, j)
    joint = np.array(
        [
            (1 + b_i + b_j + r),
            (1 + b_i - b_j - r),
            (1 - b_i + b_j - r),
            (1 - b_i - b_j + r),
        ]
    ) / 4.0
    return np.clip(joint, 0.0, 1.0)


def mutual_information(m: MomentVector, i: int, j: int) -> float:
    """I(X_i; X_j) in bits under the pairwise local distribution."""
    if i == j:
        raise InputError("mutual information needs two distinct vertices")
    if m.level < 2:
        raise InputError("mutual information needs level >= 2")
    joint = _pair_joint(m, i, j)
    t = joint.sum()
    if t <= 0.0:
        return 0.0
    joint = joint / t
    h_i = _entropy_bits([joint[0] + joint[1], joint[2] + joint[3]])
    h_j = _entropy_bits([joint[0] + joint[2], joint[1] + joint[3]])
    h_ij = _entropy_bits(joint)
    return min(max(h_i + h_j - h_ij, 0.0), 1.0)


def entropy_of_vertex(m: MomentVector, i: int) -> float:
    b = m.bias(i)
    return _entropy_bits([(1 + b) / 2.0, (1 - b) / 2.0])


def block_independence_score(m: MomentVector, parts):
    """Average pairwise MI inside each part plus the cross-part total.

    Per-part scores average over unordered distinct pairs; parts with fewer
    than two vertices score 0.  The cross term sums, over unordered part
    pairs, the average MI between vertices drawn from the two parts.
    """
    parts = [sorted(p) for p in parts]
    per_part = []
    for p in parts:
        if len(p) < 2:
            per_part.append(0.0)
            continue
        tot = 0.0
        cnt = 0
        for a, b in combinations(p, 2):
            tot += mutual_information(m, a, b)
            cnt += 1
        per_part.append(tot / cnt)
    cross = 0.0
    for pa, pb in combinations(range(len(parts)), 2):
        a_list, b_list = parts[pa], parts[pb]
        if not a_list or not b_list:
            continue
        tot = 0.0
        for a in a_list:
            for b in b_list:
                tot += mutual_information(m, a, b)
        cross += tot / (len(a_list) * len(b_list))
    return per_part, cross


def iid_pair_information_sum(m: MomentVector, parts) -> float:
    """Sum over ordered part pairs of E_{i,j}[I(X_i;X_j)] with i, j drawn
    independently (so coinciding draws contribute the vertex entropy).

    This is the exact quantity telescoped by the conditioning potential.
    """
    parts = [sorted(p) for p in parts]
    total = 0.0
    for pa in parts:
        if not pa:
            continue
        block = 0.0
        for a in pa:
            block += entropy_of_vertex(m, a)
        for a, b in combinations(pa, 2):
            block += 2.0 * mutual_information(m, a, b)
        total += block / (len(pa) ** 2)
    for pa, pb in combinations(parts, 2):
        if not pa or not pb:
            continue
        cross = 0.0
        for a in pa:
            for b in pb:
                cross += mutual_information(m, a, b)
        total += 2.0 * cross / (len(pa) * len(pb))
    return total


# ---------------------------------------------------------------------------
# conditioning


def condition(m: MomentVector, i: int, value: int, tol: float = 1e-9):
    """Split on X_i = value; returns the conditioned vector and its weight.

    Drops one level.  Expectations are preserved as the convex combination
    of the two branches with weight P(X_i = value).
    """
    if m.level < 2:
        raise InputError("conditioning needs level >= 2")
    if value not in (1, -1):
        raise InputError("value must be +1 or -1")
    i = int(i)
    if not 0 <= i < m.n:
        raise InputError(f"vertex {i} out of range")
    lam = (1.0 + value * m.bias(i)) / 2.0
    if lam < tol:
        raise DegenerateEventError(
            f"P(X_{i} = {value:+d}) = {lam:.3e} below tolerance"
        )
    child = subset_basis(m.n, 2 * (m.level - 1))
    parent = m.basis
    child_masks = child.masks
    pos_u = parent.pos[child_masks]
    pos_ui = parent.pos[child_masks ^ (1 << i)]
    y = (m.y[pos_u] + value * m.y[pos_ui]) / (2.0 * lam)
    return MomentVector(m.n, m.level - 1, y), float(lam)


def sample_value(m: MomentVector, i: int, rng) -> int:
    """Draw +-1 from the marginal of X_i."""
    p_plus = (1.0 + m.bias(i)) / 2.0
    return 1 if rng.random() < p_plus else -1


def make_block_independent(
    m: MomentVector,
    parts,
    alpha: float,
    budget_L: int,
    rng_seed: int,
    restarts: int = 64,
    edges=None,
):
    """Search sampled conditioning paths for an alpha-block-independent vector.

    Each restart walks up to budget_L conditioning steps: sample a part, a
    vertex within it, and a value from the vertex's marginal, then condition.
    A candidate qualifies when every per-part average MI is at most alpha
    and, if `edges` is supplied, its objective is within alpha of the
    starting objective.  The best-objective qualifier wins; exhausting all
    restarts raises SearchFailureError carrying the closest candidate.
    """
    parts = [sorted(p) for p in parts if len(p) > 0]
    if not parts:
        raise InputError("need at least one nonempty part")
    if budget_L < 0:
        raise InputError("budget must be nonnegative")
    if m.level < budget_L + 2:
        raise InputError(
            f"level {m.level} cannot support {budget_L} conditioning steps"
        )
    start_obj = m.objective_value(edges) if edges is not None else None

    def qualifies(mv: MomentVector) -> bool:
        scores, _ = block_independence_score(mv, parts)
        if max(scores) > alpha:
            return False
        if start_obj is not None:
            if mv.objective_value(edges) < start_obj - alpha - 1e-9:
                return False
        return True

    if qualifies(m):
        return m

    best_candidate = None  # (max_part_score, restart, MomentVector)
    winners = []  # (negative objective or score, restart, MomentVector)
    for r in range(restarts):
        rng = np.random.default_rng(np.random.SeedSequence((rng_seed, r)))
        cur = m
        for _ in range(budget_L):
            if cur.level < 3:
                break
            for _ in range(16):  # resample degenerate events
                block = parts[rng.integers(len(parts))]
                vertex = int(block[rng.integers(len(block))])
                value = sample_value(cur, vertex, rng)
                try:
                    nxt, _ = condition(cur, vertex, value)
                except DegenerateEventError:
                    continue
                break
            else:
                break
            cur = nxt
            scores, _ = block_independence_score(cur, parts)
            worst = max(scores)
            if best_candidate is None or worst < best_candidate[0]:
                best_candidate = (worst, r, cur)
            if qualifies(cur):
                key = -cur.objective_value(edges) if edges is not None else worst
                winners.append((key, r, cur))
                break
    if winners:
        winners.sort(key=lambda t: (t[0], t[1]))
        return winners[0][2]
    raise SearchFailureError(
        f"no alpha={alpha} block-independent conditioning found in "
        f"{restarts} restarts of {budget_L} steps",
        best=best_candidate[2] if best_candidate else m,
    )


# ---------------------------------------------------------------------------
# program construction


@dataclass(frozen=True)
class SdpProgram:
    """Cut objective plus cardinality and super-vertex constraints."""

    n: int
    level: int
    edges: tuple
    parts: tuple  # frozensets, including super vertices
    budgets: tuple
    forbidden: frozenset
    depth_cap: int

    def kept_parts(self):
        return tuple(p - self.forbidden for p in self.parts)


def auto_level(n: int, config: Config | None = None) -> int:
    config = config or Config()
    if basis_dim(n, 4) <= config.auto_level4_dim:
        return 4
    if basis_dim(n, 3) <= config.auto_level3_dim:
        return 3
    return 2


def build_program(
    kernel: KernelResult, level: int, config: Config | None = None
) -> SdpProgram:
    """Assemble the conditioned relaxation for a kernelized instance."""
    config = config or Config()
    g = kernel.reduced
    if level == 0:
        level = auto_level(g.n, config)
    if level < 2:
        raise InputError(f"level must be >= 2, got {level}")
    if g.n > config.n_max_sdp:
        raise CapacityError(f"n={g.n} exceeds configured cap {config.n_max_sdp}")
    dim = basis_dim(g.n, level)
    if dim > max(config.auto_level3_dim, config.auto_level4_dim) * 3:
        raise CapacityError(
            f"moment matrix side {dim} too large for n={g.n}, level={level}"
        )
    for part, k in zip(kernel.parts, kernel.budgets):
        avail = len(part - kernel.forbidden)
        if k > avail:
            raise InfeasibleError(
                f"budget {k} exceeds the {avail} selectable vertices of a part"
            )
    return SdpProgram(
        n=g.n,
        level=level,
        edges=g.edges,
        parts=kernel.parts,
        budgets=kernel.budgets,
        forbidden=kernel.forbidden,
        depth_cap=config.depth_cap,
    )


def _affine_rows(program: SdpProgram, basis: SubsetBasis):
    """Dense equality system B y = d encoding the program's constraints.

    Monomial depths T avoid super vertices: rows containing a super are
    exact sign-flips of super-free rows, so skipping them removes the
    redundancy without changing the feasible set.
    """
    n = program.n
    supers = program.forbidden
    free = [v for v in range(n) if v not in supers]
    dim = basis.masks.size
    rows = []
    rhs = []

    def depth_subsets(max_depth):
        for r in range(max_depth + 1):
            yield from combinations(free, r)

    # normalization
    row = np.zeros(dim)
    row[basis.position(())] = 1.0
    rows.append(row)
    rhs.append(1.0)

    # super vertices are never selected: moments flip sign under xor with s
    for s in sorted(supers):
        for t in depth_subsets(program.level - 1):
            row = np.zeros(dim)
            row[basis.position(t)] += 1.0
            row[basis.position(tuple(sorted(set(t) ^ {s})))] += 1.0
            rows.append(row)
            rhs.append(0.0)

    # cardinality per part, at every depth up to the cap
    depth = min(program.level - 1, program.depth_cap)
    for part, k in zip(program.parts, program.budgets):
        kept = sorted(part - supers)
        target = 2.0 * k - len(kept)
        for t in depth_subsets(depth):
            row = np.zeros(dim)
            for i in kept:
                row[basis.position(tuple(sorted(set(t) ^ {i})))] += 1.0
            row[basis.position(t)] -= target
            rows.append(row)
            rhs.append(0.0)

    return np.asarray(rows), np.asarray(rhs)


def _objective_vector(program: SdpProgram, basis: SubsetBasis):
    """Linear part of the cut objective; value = const + c . y."""
    c = np.zeros(basis.masks.size)
    const = 0.0
    for u, v, w in program.edges:
        const += w / 2.0
        c[basis.position((u, v) if u < v else (v, u))] -= w / 2.0
    return c, const


# ---------------------------------------------------------------------------
# first-order solver


class _AffineProjector:
    """Projection onto {y : By = d} in the class-count-weighted norm."""

    def __init__(self, B, d, weights):
        self.B = B
        self.d = d
        self.WBt = (B / weights[None, :]).T  # dim_y x rows
        G = B @ self.WBt
        try:
            import scipy.linalg as sla

            self._cho = sla.cho_factor(G)
            self._solve = lambda r: sla.cho_solve(self._cho, r)
        except Exception:
            Gp = np.linalg.pinv(G, rcond=1e-12)
            self._solve = lambda r: Gp @ r

    def __call__(self, y):
        return y - self.WBt @ self._solve(self.B @ y - self.d)


def solve(
    program: SdpProgram,
    tol: float | None = None,
    max_iter: int | None = None,
    config: Config | None = None,
) -> MomentVector:
    """Solve the relaxation to a feasible near-optimal moment vector.

    ADMM splitting: the moment vector carries the affine constraints, a
    matrix copy carries the PSD cone, and scaled dual ascent ties them
    together.  Stops when primal and dual residuals drop below `tol` and
    the assembled moment matrix is PSD within tolerance.
    """
    config = config or Config()
    tol = config.sdp_tol if tol is None else tol
    max_iter = config.sdp_max_iter if max_iter is None else max_iter

    ms = moment_structure(program.n, program.level)
    basis = ms.basis
    counts = ms.class_count
    cvec, const = _objective_vector(program, basis)
    B, d = _affine_rows(program, basis)
    project_affine = _AffineProjector(B, d, counts)

    def to_matrix(y):
        return y[ms.class_idx]

    def to_classes(X):
        return np.bincount(ms.class_idx.ravel(), weights=X.ravel(), minlength=basis.masks.size)

    y = project_affine(np.zeros(basis.masks.size))
    X = _psd_projection(to_matrix(y))
    Z = np.zeros_like(X)
    rho = 1.0
    prim = dual = np.inf

    for it in range(1, max_iter + 1):
        x_cls = to_classes(X)
        z_cls = to_classes(Z)
        y_hat = (cvec - z_cls + rho * x_cls) / (rho * counts)
        y = project_affine(y_hat)
        M = to_matrix(y)
        X_prev = X
        X = _psd_projection(M + Z / rho)
        R = M - X
        Z = Z + rho * R

        prim_abs = np.linalg.norm(R)
        prim = prim_abs / max(1.0, np.linalg.norm(M))
        dual = (
            rho
            * np.linalg.norm(to_classes(X - X_prev) / counts)
            / max(1.0, np.linalg.norm(y))
        )
        # the absolute gate keeps the assembled matrix PSD within PSD_TOL
        if prim < tol and dual < tol and prim_abs < 0.5 * PSD_TOL:
            break
        if it % 20 == 0:
            if prim > 10.0 * dual:
                rho *= 2.0
            elif dual > 10.0 * prim:
                rho /= 2.0
    else:
        raise ConvergenceError(
            f"no convergence after {max_iter} iterations "
            f"(primal {prim:.2e}, dual {dual:.2e})",
            primal=prim,
            dual=dual,
            iterations=max_iter,
        )

    mv = MomentVector(program.n, program.level, y)
    if mv.min_eigenvalue() < -PSD_TOL:
        raise ConvergenceError(
            f"moment matrix not PSD within tolerance "
            f"(min eigenvalue {mv.min_eigenvalue():.2e})",
            primal=prim,
            dual=dual,
        )
    return mv


def _psd_projection(M):
    vals, vecs = np.linalg.eigh((M + M.T) / 2.0)
    vals = np.clip(vals, 0.0, None)
    return (vecs * vals) @ vecs.T
