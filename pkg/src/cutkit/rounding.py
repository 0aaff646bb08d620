"""Bias-preserving rounding, balance checks, random correction, and the
end-to-end kernel -> relaxation -> conditioning -> rounding -> correction
pipelines for single and multi-part instances.

Rounding draws one shared Gaussian vector and thresholds each vertex's
centered unit component at the Gaussian quantile of its inclusion
probability, so every marginal P(i selected) = (1 + b_i)/2 is preserved
exactly while pairwise correlations carry over from the relaxation.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.stats import norm

from .config import Config
from .errors import InfeasibleError, InputError, SearchFailureError
from .graph import ConstrainedInstance, CutSolution, WeightedGraph, cut_value
from .kernel import KernelResult, kernelize_multi, kernelize_single
from .moments import (
    MomentVector,
    build_program,
    make_block_independent,
    solve,
)

_PAIR_TOL = 1e-6


@dataclass
class RoundingParams:
    """Knobs for the randomized stages of the pipeline."""

    eps: float = 0.5
    alpha: float | None = None  # independence target; defaults to eps**6
    trials: int = 8
    rng_seed: int = 7
    restarts: int = 64
    level: int = 0  # 0 = auto from reduced size

    def __post_init__(self):
        if not 0.0 < self.eps <= 0.5:
            raise InputError(f"eps must lie in (0, 1/2], got {self.eps}")
        if self.trials < 1:
            raise InputError("need at least one rounding trial")
        if self.alpha is None:
            self.alpha = self.eps**6


@dataclass(frozen=True)
class BalanceReport:
    """Per-part sizes of a rounded set against the allowed windows."""

    sizes: tuple
    flags: tuple
    joint: bool


class BiasProfile:
    """Per-vertex bias and pairwise correlation extracted from a relaxation.

    The Gram factor and thresholds are cached so repeated rounding draws
    are cheap.
    """

    def __init__(self, biases, correlations):
        self.b = np.asarray(biases, dtype=np.float64)
        self.rho = np.asarray(correlations, dtype=np.float64)
        n = self.b.size
        if self.rho.shape != (n, n):
            raise InputError("correlation matrix shape mismatch")
        if np.abs(self.b).max(initial=0.0) > 1.0 + _PAIR_TOL:
            raise InputError("biases must lie in [-1, 1]")
        # Every pairwise 2x2 local distribution must be nonnegative.
        for si in (1.0, -1.0):
            for sj in (1.0, -1.0):
                q = 1.0 + si * self.b[:, None] + sj * self.b[None, :] + si * sj * self.rho
                np.fill_diagonal(q, 1.0)
                if q.min(initial=1.0) < -4.0 * _PAIR_TOL:
                    raise InputError("inconsistent bias profile: negative pair mass")

    @classmethod
    def from_moment_vector(cls, m: MomentVector) -> "BiasProfile":
        n = m.n
        b = np.array([m.bias(i) for i in range(n)])
        rho = np.eye(n)
        for i in range(n):
            for j in range(i + 1, n):
                rho[i, j] = rho[j, i] = m.corr(i, j)
        return cls(b, rho)

    @property
    def n(self) -> int:
        return self.b.size

    @cached_property
    def thresholds(self) -> np.ndarray:
        p = np.clip((1.0 + self.b) / 2.0, 0.0, 1.0)
        return norm.ppf(p)  # -inf / +inf for deterministic vertices

    @cached_property
    def factor(self) -> np.ndarray:
        """Unit-row Gram factor of the centered correlations.

        Negative eigenvalues (solver tolerance) are zeroed; rows are
        renormalized so marginals stay exact; degenerate rows fall back to
        fresh independent coordinates.
        """
        n = self.n
        s = np.sqrt(np.clip(1.0 - self.b**2, 0.0, None))
        centered = self.rho - np.outer(self.b, self.b)
        denom = np.outer(s, s)
        r = np.divide(centered, denom, out=np.zeros((n, n)), where=denom > 1e-12)
        np.fill_diagonal(r, 1.0)
        vals, vecs = np.linalg.eigh((r + r.T) / 2.0)
        f = vecs * np.sqrt(np.clip(vals, 0.0, None))
        norms = np.linalg.norm(f, axis=1)
        degenerate = norms <= 1e-9
        f[~degenerate] /= norms[~degenerate, None]
        if degenerate.any():
            extra = np.zeros((n, int(degenerate.sum())))
            extra[degenerate] = np.eye(int(degenerate.sum()))
            f = np.hstack([f, extra])
        return f


def round_biased(bias: BiasProfile, rng_seed) -> frozenset:
    """One randomized rounding draw; P(i selected) = (1 + b_i)/2 exactly."""
    rng = np.random.default_rng(rng_seed)
    g = rng.standard_normal(bias.factor.shape[1])
    with np.errstate(invalid="ignore"):
        chosen = (bias.factor @ g) <= bias.thresholds
    return frozenset(int(v) for v in np.nonzero(chosen)[0])


def check_balance(s_hat, parts, budgets, eps: float) -> BalanceReport:
    """Whether each |s_hat intersect part| sits within eps^2 * |part| of its budget."""
    s_hat = frozenset(s_hat)
    sizes = []
    flags = []
    for part, k in zip(parts, budgets):
        size = len(s_hat & frozenset(part))
        sizes.append(size)
        flags.append(abs(size - k) <= eps * eps * len(part) + 1e-12)
    return BalanceReport(tuple(sizes), tuple(flags), all(flags))


def random_correct(
    g: WeightedGraph, s_hat, part, k: int, forbidden=frozenset(), rng_seed=0
) -> frozenset:
    """Uniformly add or delete vertices inside one part to hit its budget.

    Additions are drawn from the part's unselected, non-forbidden vertices;
    deletions from the selected ones.  In the balanced regime (per-element
    probability at most eps) the expected cut value loses at most an eps
    fraction.
    """
    s_hat = frozenset(s_hat)
    part = frozenset(part)
    forbidden = frozenset(forbidden)
    rng = np.random.default_rng(rng_seed)
    cur = sorted(s_hat & part)
    if len(cur) == k:
        return s_hat
    if len(cur) > k:
        drop = rng.choice(cur, size=len(cur) - k, replace=False)
        return s_hat - frozenset(int(v) for v in drop)
    pool = sorted(part - s_hat - forbidden)
    need = k - len(cur)
    if need > len(pool):
        raise InfeasibleError(
            f"cannot reach budget {k}: only {len(pool)} selectable vertices remain"
        )
    add = rng.choice(pool, size=need, replace=False)
    return s_hat | frozenset(int(v) for v in add)


def realized_correction_prob(s_hat, part, k: int, forbidden=frozenset()) -> float:
    """Per-element add/delete probability the correction step will use."""
    s_hat = frozenset(s_hat)
    part = frozenset(part)
    cur = len(s_hat & part)
    if cur == k:
        return 0.0
    if cur > k:
        return (cur - k) / cur
    pool = len(part - s_hat - frozenset(forbidden))
    if pool <= 0:
        return 1.0
    return (k - cur) / pool


def sampled_union_bound_check(
    g: WeightedGraph,
    s,
    inclusion_prob: float,
    trials: int,
    rng_seed=0,
    law: str = "uniform",
):
    """Monte Carlo estimate of E[cut(S u R)] / cut(S) under a random fill-in.

    `law` picks how R is drawn from V \\ S with per-element inclusion
    probability at most p: "uniform" draws a fixed-size uniform subset of
    floor(p * |V \\ S|) elements (the correction step's law); "all_or_nothing"
    takes the whole complement with probability p (the coupling that makes
    the (1-p) lower bound tight).  Returns (ratio_estimate, stderr); a zero
    base cut makes the bound vacuous, signalled by the certified-pass ratio
    1.0 (also the right answer for S = V, whose complement is empty).
    """
    p = float(inclusion_prob)
    if not 0.0 <= p <= 1.0:
        raise InputError(f"probability {p} outside [0, 1]")
    if law not in ("uniform", "all_or_nothing"):
        raise InputError(f"unknown law {law!r}")
    s = frozenset(int(v) for v in s)
    base = cut_value(g, s)
    if base <= 0.0:
        return 1.0, 0.0
    complement = sorted(set(range(g.n)) - s)
    rng = np.random.default_rng(rng_seed)
    ratios = np.empty(trials)
    r_size = int(np.floor(p * len(complement)))
    for t in range(trials):
        if law == "uniform":
            picked = rng.choice(complement, size=r_size, replace=False) if r_size else []
        else:
            picked = complement if rng.random() < p else []
        ratios[t] = cut_value(g, s | frozenset(int(v) for v in picked)) / base
    stderr = float(ratios.std(ddof=1) / np.sqrt(trials)) if trials > 1 else 0.0
    return float(ratios.mean()), stderr


def greedy_feasible(g: WeightedGraph, parts, budgets, forbidden=frozenset(), start=None):
    """Per-part completion toward the budgets, guided by weighted degree.

    Starts from `start` (clipped to allowed vertices), drops lowest-degree
    surplus and adds highest-degree missing vertices.  Deterministic.
    """
    deg = g.degrees
    forbidden = frozenset(forbidden)
    chosen = set() if start is None else set(frozenset(start) - forbidden)
    out = set()
    for part, k in zip(parts, budgets):
        allowed = sorted(frozenset(part) - forbidden, key=lambda v: (-deg[v], v))
        if k > len(allowed):
            raise InfeasibleError(f"budget {k} exceeds part capacity {len(allowed)}")
        cur = [v for v in allowed if v in chosen]
        if len(cur) >= k:
            out.update(cur[:k])
        else:
            out.update(cur)
            missing = k - len(cur)
            for v in allowed:
                if missing == 0:
                    break
                if v not in chosen:
                    out.add(v)
                    missing -= 1
    return frozenset(out)


# ---------------------------------------------------------------------------
# end-to-end pipelines


def _pipeline(kernel: KernelResult, g: WeightedGraph, params: RoundingParams, config: Config):
    """Shared solve/condition/round/correct machinery on a kernelized instance."""
    trace = ["kernel"]
    program = build_program(kernel, params.level, config)
    mv = solve(program, config=config)
    trace.append("sdp")

    kept_parts = tuple(p - kernel.forbidden for p in kernel.parts)
    c = len(kept_parts)
    budget = min(
        int(np.ceil(4.0 * c * c / (params.alpha**2))),
        config.independence_budget,
        mv.level - 2,
    )
    try:
        mv = make_block_independent(
            mv,
            kept_parts,
            params.alpha,
            budget,
            params.rng_seed,
            restarts=params.restarts,
            edges=program.edges,
        )
        trace.append("independence")
    except SearchFailureError as exc:
        mv = exc.best if exc.best is not None else mv
        trace.append("independence:best-effort")

    bias = BiasProfile.from_moment_vector(mv)
    reduced = kernel.reduced
    seedseq = np.random.SeedSequence((params.rng_seed, 1))
    trial_seeds = seedseq.spawn(params.trials)

    best = None  # (value, trial_index, reduced-id set)
    fallback_hat = None  # (reduced cut value, trial, s_hat) best raw rounding
    for t in range(params.trials):
        child = trial_seeds[t].spawn(1 + c)
        s_hat = round_biased(bias, child[0])
        hat_val = cut_value(reduced, s_hat)
        if fallback_hat is None or hat_val > fallback_hat[0]:
            fallback_hat = (hat_val, t, s_hat)
        report = check_balance(s_hat, kernel.parts, kernel.budgets, params.eps)
        if not report.joint:
            continue
        s = s_hat
        for j, (part, k) in enumerate(zip(kept_parts, kernel.budgets)):
            s = random_correct(reduced, s, part, k, kernel.forbidden, child[1 + j])
        val = cut_value(reduced, s)
        if best is None or val > best[0]:
            best = (val, t, s)

    if best is not None:
        trace.extend(["rounding", "correction"])
        reduced_set = best[2]
    else:
        # Balance never held: greedily complete the best raw rounding.
        trace.extend(["rounding", "correction:fallback"])
        reduced_set = greedy_feasible(
            reduced,
            kept_parts,
            kernel.budgets,
            kernel.forbidden,
            start=fallback_hat[2],
        )

    for part, k in zip(kept_parts, kernel.budgets):
        if len(reduced_set & part) != k:
            raise AssertionError("pipeline produced an infeasible set")
    if reduced_set & kernel.forbidden:
        raise AssertionError("pipeline selected a super vertex")

    original_set = kernel.lift(reduced_set)
    return CutSolution(
        set=original_set,
        value=cut_value(g, original_set),
        feasible=True,
        stage_trace=tuple(trace),
    )


def solve_single(
    g: WeightedGraph,
    k: int,
    eps: float,
    params: RoundingParams | None = None,
    config: Config | None = None,
) -> CutSolution:
    """Full pipeline for a single cardinality constraint |S| = k."""
    config = config or Config()
    if params is None:
        params = RoundingParams(eps=eps, rng_seed=config.seed)
    elif params.eps != eps:
        raise InputError("eps argument disagrees with params.eps")
    kernel = kernelize_single(g, k, eps)
    return _pipeline(kernel, g, params, config)


def solve_multi(
    inst: ConstrainedInstance,
    eps: float,
    params: RoundingParams | None = None,
    config: Config | None = None,
) -> CutSolution:
    """Full pipeline for a partitioned instance with per-part budgets."""
    config = config or Config()
    if params is None:
        params = RoundingParams(eps=eps, rng_seed=config.seed)
    elif params.eps != eps:
        raise InputError("eps argument disagrees with params.eps")
    if inst.c > config.c_cap:
        raise InputError(f"{inst.c} parts exceed the configured cap {config.c_cap}")
    kernel = kernelize_multi(inst, eps)
    return _pipeline(kernel, inst.graph, params, config)
