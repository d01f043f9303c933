"""Ehrenfeucht game engine.

Two boards, k rounds.  Each round Spoiler picks a vertex on either board
and Duplicator answers on the other.  Duplicator wins when the chosen
tuples induce partially isomorphic substructures after every round: the
correspondence must preserve equalities and edge membership in both
directions.

The optimal solver memoizes on the *set* of chosen pairs rather than the
ordered tuples, since the win condition only depends on the
correspondence.  ``solve_unmemoized`` keeps the raw-tuple recursion as a
cross-check oracle.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Optional

from .errors import BudgetExceeded, NoWitness, DEFAULT_EVAL_BUDGET
from .hypergraph import Hypergraph
from .logic import Formula, evaluate, quantifier_depth

DUPLICATOR = "duplicator"
SPOILER = "spoiler"

# A strategy maps (position, spoiler's side, spoiler's vertex) to
# Duplicator's reply on the other board.  side is 1 or 2.
Strategy = Callable[["GamePosition", int, int], int]


@dataclass(frozen=True)
class GamePosition:
    g1: Hypergraph
    g2: Hypergraph
    chosen1: tuple[int, ...]
    chosen2: tuple[int, ...]
    rounds_left: int

    def __post_init__(self):
        if len(self.chosen1) != len(self.chosen2):
            raise ValueError("chosen tuples must have equal length")
        if self.rounds_left < 0:
            raise ValueError("rounds_left must be nonnegative")
        for v, g, tag in ((self.chosen1, self.g1, "chosen1"),
                          (self.chosen2, self.g2, "chosen2")):
            for x in v:
                if not 0 <= x < g.n:
                    raise ValueError(f"{tag} vertex {x} outside board")


def _position_budget(g1: Hypergraph, g2: Hypergraph, k: int) -> int:
    return (g1.n + 1) ** k * (g2.n + 1) ** k


def _check_budget(g1: Hypergraph, g2: Hypergraph, k: int, budget: Optional[int]):
    limit = DEFAULT_EVAL_BUDGET if budget is None else budget
    need = _position_budget(g1, g2, k)
    if need > limit:
        raise BudgetExceeded(
            f"{need} potential positions exceed budget {limit}")


def extends_partial_iso(g1: Hypergraph, g2: Hypergraph,
                        pairs, a: int, b: int) -> bool:
    """Can the correspondence ``pairs`` absorb the new pair (a, b)?

    Checks the equality pattern (the extended map stays a well-defined
    bijection) and the edge pattern over every s-subset of the mapped
    vertices that involves ``a``.  Earlier subsets were checked when
    their own last vertex arrived, so the incremental test is complete.
    """
    mapping = {}
    for c1, c2 in pairs:
        if (c1 == a) != (c2 == b):
            return False
        mapping[c1] = c2
    if mapping.get(a, b) != b:
        return False
    mapping[a] = b
    s = g1.s
    support = [x for x in mapping if x != a]
    if len(support) + 1 < s:
        return True
    for rest in combinations(support, s - 1):
        sub1 = rest + (a,)
        sub2 = tuple(mapping[x] for x in sub1)
        if len(set(sub2)) < s:
            # injectivity already holds, so this cannot happen; guard anyway
            return False
        if g1.has_edge(sub1) != g2.has_edge(sub2):
            return False
    return True


def _wins(g1: Hypergraph, g2: Hypergraph, pairs: frozenset,
          rounds_left: int, memo: dict) -> bool:
    if rounds_left == 0:
        return True
    key = (rounds_left, pairs)
    cached = memo.get(key)
    if cached is not None:
        return cached
    result = True
    for side in (1, 2):
        ga, gb = (g1, g2) if side == 1 else (g2, g1)
        for x in range(ga.n):
            survived = False
            for y in range(gb.n):
                a, b = (x, y) if side == 1 else (y, x)
                if not extends_partial_iso(g1, g2, pairs, a, b):
                    continue
                if _wins(g1, g2, pairs | {(a, b)}, rounds_left - 1, memo):
                    survived = True
                    break
            if not survived:
                result = False
                break
        if not result:
            break
    memo[key] = result
    return result


def solve(g1: Hypergraph, g2: Hypergraph, k: int,
          budget: Optional[int] = None) -> str:
    """Winner of the k-round game under optimal play."""
    if g1.s != g2.s:
        raise ValueError("boards must share the same uniformity")
    if k < 0:
        raise ValueError("k must be nonnegative")
    _check_budget(g1, g2, k, budget)
    return DUPLICATOR if _wins(g1, g2, frozenset(), k, {}) else SPOILER


def solve_unmemoized(g1: Hypergraph, g2: Hypergraph, k: int,
                     budget: Optional[int] = None) -> str:
    """Reference solver on raw ordered tuples, no memo table."""
    if g1.s != g2.s:
        raise ValueError("boards must share the same uniformity")
    _check_budget(g1, g2, k, budget)

    def rec(chosen1: tuple, chosen2: tuple, rounds_left: int) -> bool:
        if rounds_left == 0:
            return True
        pairs = tuple(zip(chosen1, chosen2))
        for side in (1, 2):
            ga, gb = (g1, g2) if side == 1 else (g2, g1)
            for x in range(ga.n):
                ok = False
                for y in range(gb.n):
                    a, b = (x, y) if side == 1 else (y, x)
                    if not extends_partial_iso(g1, g2, pairs, a, b):
                        continue
                    if rec(chosen1 + (a,), chosen2 + (b,), rounds_left - 1):
                        ok = True
                        break
                if not ok:
                    return False
        return True

    return DUPLICATOR if rec((), (), k) else SPOILER


def mirror_strategy(pos: GamePosition, side: int, vertex: int) -> int:
    """Answer with the same vertex id; sound only on identical boards."""
    other = pos.g2 if side == 1 else pos.g1
    if vertex >= other.n:
        raise NoWitness(f"vertex {vertex} missing from the other board")
    return vertex


def extension_strategy(k: int) -> Strategy:
    """Greedy Duplicator: copy the equality and adjacency pattern.

    Sound whenever both boards have the full extension property at level
    k - 1; the reply is the smallest vertex id realizing the pattern.
    """

    def strat(pos: GamePosition, side: int, vertex: int) -> int:
        if side == 1:
            pairs = tuple(zip(pos.chosen1, pos.chosen2))
        else:
            pairs = tuple(zip(pos.chosen2, pos.chosen1))
        ga, gb = (pos.g1, pos.g2) if side == 1 else (pos.g2, pos.g1)
        for y in range(gb.n):
            if extends_partial_iso(ga, gb, pairs, vertex, y):
                return y
        raise NoWitness(
            f"no vertex matches the pattern of {vertex} on side {side}")

    return strat


def verify_strategy(g1: Hypergraph, g2: Hypergraph, k: int,
                    strat: Strategy, budget: Optional[int] = None) -> bool:
    """True iff Duplicator following ``strat`` beats every Spoiler line."""
    if g1.s != g2.s:
        raise ValueError("boards must share the same uniformity")
    _check_budget(g1, g2, k, budget)

    def rec(chosen1: tuple, chosen2: tuple, rounds_left: int) -> bool:
        if rounds_left == 0:
            return True
        pos = GamePosition(g1, g2, chosen1, chosen2, rounds_left)
        pairs = tuple(zip(chosen1, chosen2))
        for side in (1, 2):
            ga = g1 if side == 1 else g2
            for x in range(ga.n):
                try:
                    y = strat(pos, side, x)
                except NoWitness:
                    return False
                a, b = (x, y) if side == 1 else (y, x)
                if not 0 <= y < (g2.n if side == 1 else g1.n):
                    return False
                if not extends_partial_iso(g1, g2, pairs, a, b):
                    return False
                if not rec(chosen1 + (a,), chosen2 + (b,), rounds_left - 1):
                    return False
        return True

    return rec((), (), k)


def agreement_check(g1: Hypergraph, g2: Hypergraph, k: int,
                    corpus, budget: Optional[int] = None) -> list[Formula]:
    """Cross-check the solver against the evaluator.

    When the solver declares Duplicator the winner, every sentence of
    quantifier depth <= k must take the same truth value on both boards.
    Returns the list of sentences violating that (always empty unless the
    engine is broken).  Spoiler verdicts assert nothing.
    """
    corpus = list(corpus)
    for f in corpus:
        d = quantifier_depth(f)
        if d > k:
            raise ValueError(f"corpus sentence has depth {d} > k = {k}")
    if solve(g1, g2, k, budget) != DUPLICATOR:
        return []
    return [f for f in corpus
            if evaluate(g1, f) != evaluate(g2, f)]
