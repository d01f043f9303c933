"""Seeded sampling of random s-uniform hypergraphs.

Each potential edge gets one uniform from a counter-based Philox stream
keyed by (seed, trial_index); the uniform at position r belongs to the
edge of colex rank r.  Thresholding the same uniforms at several edge
probabilities yields nested (monotone-coupled) samples for free.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from .errors import BudgetExceeded, DEFAULT_EDGE_BUDGET
from .hypergraph import Hypergraph


def p_from_alpha(n: int, alpha: Fraction | float) -> float:
    """n^{-alpha} via exp(-alpha ln n); relative error well under 1e-12."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    a = float(alpha)
    if a <= 0:
        raise ValueError(f"need alpha > 0, got {alpha}")
    return math.exp(-a * math.log(n))


@dataclass(frozen=True)
class ModelParams:
    """Parameters of one G^s(n, p) draw; p may be given as alpha with p = n^{-alpha}."""

    s: int
    n: int
    p: float | None = None
    alpha: Fraction | None = None
    seed: int = 0
    trial_index: int = 0

    def __post_init__(self):
        if self.s < 2:
            raise ValueError(f"uniformity must be at least 2, got {self.s}")
        if self.n < self.s:
            raise ValueError(f"need n >= s, got n={self.n}, s={self.s}")
        if (self.p is None) == (self.alpha is None):
            raise ValueError("give exactly one of p and alpha")
        if self.p is not None and not 0.0 <= self.p <= 1.0:
            raise ValueError(f"edge probability must be in [0, 1], got {self.p}")
        if self.alpha is not None and self.alpha <= 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 bits")
        if self.trial_index < 0:
            raise ValueError(f"trial_index must be nonnegative, got {self.trial_index}")

    @property
    def effective_p(self) -> float:
        if self.p is not None:
            return self.p
        return p_from_alpha(self.n, self.alpha)

    def with_trial(self, trial_index: int) -> "ModelParams":
        return ModelParams(self.s, self.n, self.p, self.alpha, self.seed, trial_index)


_table_cache: dict[tuple[int, int], np.ndarray] = {}


def colex_edge_table(n: int, s: int, budget: int | None = None) -> np.ndarray:
    """All s-subsets of range(n) as an array, row r = edge of colex rank r.

    Built bottom-up: the colex list of k-subsets of range(n) is, for each
    top element m, the colex list of (k-1)-subsets of range(m) with m
    appended, and that sublist is a prefix of the full (k-1)-level table.
    """
    limit = DEFAULT_EDGE_BUDGET if budget is None else budget
    total = comb(n, s)
    if total > limit:
        raise BudgetExceeded(
            f"C({n},{s}) = {total} potential edges exceeds budget {limit}")
    key = (n, s)
    if key in _table_cache:
        return _table_cache[key]
    level = np.arange(n, dtype=np.int64).reshape(-1, 1)
    for k in range(2, s + 1):
        blocks = []
        for m in range(k - 1, n):
            prefix = level[: comb(m, k - 1)]
            tops = np.full((len(prefix), 1), m, dtype=np.int64)
            blocks.append(np.hstack([prefix, tops]))
        level = np.vstack(blocks)
    assert len(level) == total
    _table_cache[key] = level
    level.setflags(write=False)
    return level


def colex_rank(edge: tuple[int, ...]) -> int:
    """Position of a sorted edge in the colex enumeration of its s-level."""
    return sum(comb(x, i + 1) for i, x in enumerate(sorted(edge)))


def edge_uniforms(params: ModelParams, budget: int | None = None) -> np.ndarray:
    """The trial's uniforms, one per potential edge, in colex rank order."""
    total = comb(params.n, params.s)
    limit = DEFAULT_EDGE_BUDGET if budget is None else budget
    if total > limit:
        raise BudgetExceeded(
            f"C({params.n},{params.s}) = {total} potential edges exceeds budget {limit}")
    key = np.array([params.seed, params.trial_index], dtype=np.uint64)
    gen = np.random.Generator(np.random.Philox(key=key))
    return gen.random(total)


def sample(params: ModelParams, budget: int | None = None) -> Hypergraph:
    """One draw of G^s(n, p): keep each potential edge independently."""
    p = params.effective_p
    if p == 0.0:
        return Hypergraph(params.s, params.n, [])
    table = colex_edge_table(params.n, params.s, budget=budget)
    if p == 1.0:
        return Hypergraph(params.s, params.n, table.tolist())
    u = edge_uniforms(params, budget=budget)
    return Hypergraph(params.s, params.n, table[u < p].tolist())


def sample_coupled(params: ModelParams, ps, budget: int | None = None) -> list[Hypergraph]:
    """Samples at several probabilities from one uniform stream.

    The draws are monotone-coupled: whenever ps[i] <= ps[j], the i-th edge
    set is a subset of the j-th.
    """
    ps = list(ps)
    for q in ps:
        if not 0.0 <= q <= 1.0:
            raise ValueError(f"edge probability must be in [0, 1], got {q}")
    table = colex_edge_table(params.n, params.s, budget=budget)
    u = edge_uniforms(params, budget=budget)
    return [Hypergraph(params.s, params.n, table[u < q].tolist()) for q in ps]
