"""Deliberately naive reference implementations used as test oracles.

Everything here favors obviousness over speed: exhaustive subset and
permutation scans, no pruning, no memoization.  Tests compare the real
code against these on small instances.
"""

import itertools
from fractions import Fraction

from hyperspectra.hypergraph import Hypergraph


def brute_max_density(g: Hypergraph) -> Fraction:
    best = Fraction(0)
    for size in range(1, g.n + 1):
        for subset in itertools.combinations(range(g.n), size):
            inside = set(subset)
            e = sum(1 for f in g.edges if inside.issuperset(f))
            best = max(best, Fraction(e, size))
    return best


def brute_embedding_count(host: Hypergraph, pattern: Hypergraph) -> int:
    count = 0
    for perm in itertools.permutations(range(host.n), pattern.n):
        if all(tuple(sorted(perm[x] for x in e)) in host.edge_set
               for e in pattern.edges):
            count += 1
    return count


def brute_automorphisms(g: Hypergraph) -> list[tuple[int, ...]]:
    out = []
    for perm in itertools.permutations(range(g.n)):
        if {tuple(sorted(perm[x] for x in e)) for e in g.edges} == set(g.edges):
            out.append(perm)
    return out


def bfs_distance(g: Hypergraph, x: int, y: int):
    # one hop = sharing at least one edge
    if x == y:
        return 0
    seen = {x}
    frontier = [x]
    hops = 0
    while frontier:
        hops += 1
        nxt = []
        for u in frontier:
            for e in g.edges:
                if u in e:
                    for w in e:
                        if w == y:
                            return hops
                        if w not in seen:
                            seen.add(w)
                            nxt.append(w)
        frontier = nxt
    return None


def random_hypergraph(rng, s: int, n: int, p: float) -> Hypergraph:
    edges = [e for e in itertools.combinations(range(n), s) if rng.random() < p]
    return Hypergraph(s, n, edges)


def random_formula(rng, s: int, depth: int, pool=("x", "y", "z", "u", "v")):
    """Random AST with quantifier depth <= depth over the given name pool."""
    from hyperspectra.logic import (
        And, EdgeAtom, Equal, Exists, Forall, Implies, Not, Or)

    def atom():
        if rng.random() < 0.4:
            return Equal(rng.choice(pool), rng.choice(pool))
        return EdgeAtom(tuple(rng.choice(pool) for _ in range(s)))

    def build(budget):
        roll = rng.random()
        if budget == 0 or roll < 0.25:
            return atom()
        if roll < 0.40:
            return Not(build(budget))
        if roll < 0.55:
            return And(tuple(build(budget) for _ in range(rng.randint(1, 3))))
        if roll < 0.70:
            return Or(tuple(build(budget) for _ in range(rng.randint(1, 3))))
        if roll < 0.80:
            return Implies(build(budget), build(budget))
        var = rng.choice(pool)
        body = build(budget - 1)
        return Exists(var, body) if rng.random() < 0.5 else Forall(var, body)

    return build(depth)


def close_formula(f, pool=("x", "y", "z", "u", "v")):
    """Wrap free variables in existential quantifiers to get a sentence."""
    from hyperspectra.logic import Exists, free_vars

    for name in sorted(free_vars(f)):
        f = Exists(name, f)
    return f


def bfs_distance_avoiding(g: Hypergraph, avoid: int, x: int, y: int):
    """Distance using only edges that miss `avoid`; endpoints must differ from it."""
    if x == avoid or y == avoid:
        return None
    if x == y:
        return 0
    live = [e for e in g.edges if avoid not in e]
    seen = {x}
    frontier = [x]
    hops = 0
    while frontier:
        hops += 1
        nxt = []
        for u in frontier:
            for e in live:
                if u in e:
                    for w in e:
                        if w == y:
                            return hops
                        if w not in seen:
                            seen.add(w)
                            nxt.append(w)
        frontier = nxt
    return None


def on_odd_cycle(g: Hypergraph, a: int, i: int) -> bool:
    """Midpoint-split reading of "a lies on a cycle of length 2i + 1"."""
    for b in range(g.n):
        if bfs_distance(g, a, b) != i:
            continue
        for c in range(g.n):
            if c == a or c == b:
                continue
            if bfs_distance(g, a, c) != (i + 1) // 2:
                continue
            if bfs_distance(g, c, b) != (i + 2) // 2:
                continue
            detour = bfs_distance_avoiding(g, c, a, b)
            if detour is not None and detour <= i:
                return True
    return False


def structural_two_cycle_property(g: Hypergraph, a1: int, a2: int, a3: int) -> bool:
    """BFS checker for the mixed-midpoint sentence: some pair at distance a1
    has one split midpoint that reaches an odd (2·a2+1)-cycle in exactly a3
    steps and another that does not."""

    def reaches_cycle(v):
        return any(bfs_distance(g, v, r) == a3 and on_odd_cycle(g, r, a2)
                   for r in range(g.n))

    for x1 in range(g.n):
        for x2 in range(g.n):
            if bfs_distance(g, x1, x2) != a1:
                continue
            mids = [m for m in range(g.n)
                    if bfs_distance(g, x1, m) == a1 // 2
                    and bfs_distance(g, m, x2) == (a1 + 1) // 2]
            flags = [reaches_cycle(m) for m in mids]
            if any(flags) and not all(flags):
                return True
    return False


def brute_strict_extensions(host, roots, pair, forbidden=()):
    """Permutation-scan reference for strict extension placement."""
    roots = tuple(roots)
    pattern = pair.pattern_edges
    if any(e[-1] < pair.roots for e in pattern):
        return []
    if pair.v_diff == 0:
        return [()] if not pattern else []
    blocked = set(forbidden) | set(roots)
    added = pair.added_vertices
    pool = [w for w in range(host.n) if w not in blocked]
    out = []
    for placement in itertools.permutations(pool, len(added)):
        image = {i: r for i, r in enumerate(roots)}
        image.update(zip(added, placement))
        landed = {tuple(sorted(image[x] for x in e)) for e in pattern}
        if not landed <= host.edge_set:
            continue
        combined = sorted(image.values())
        root_images = set(roots)
        ok = True
        for f in itertools.combinations(combined, host.s):
            if set(f) <= root_images:
                continue
            if (f in host.edge_set) != (f in landed):
                ok = False
                break
        if ok:
            out.append(placement)
    return sorted(out)


def brute_kt_maximal(host, gtilde, htilde, k_pair):
    """Quantifier-by-quantifier transcription of (K, T)-maximality."""
    g_set = frozenset(gtilde)
    h_set = frozenset(htilde)
    for t_set in itertools.combinations(sorted(g_set), k_pair.roots):
        if set(t_set) <= h_set:
            continue
        removed = g_set - set(t_set)
        for ordering in itertools.permutations(t_set):
            for placement in brute_strict_extensions(
                    host, ordering, k_pair, forbidden=removed):
                zone = set(placement) | removed
                straddle = any(
                    zone.issuperset(e) and set(e) & set(placement)
                    and set(e) & removed
                    for e in host.edges)
                if not straddle:
                    return False
    return True
