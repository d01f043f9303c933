"""Uniform hypergraphs with exact rational density machinery.

Vertices are dense 0-based ids.  Edges are s-element subsets stored as
sorted tuples; the edge list itself is sorted and deduplicated, so equal
hypergraphs compare and hash equal.  All densities are `fractions.Fraction`.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import comb, factorial, perm

from .errors import CapExceeded, FormatError, enum_cap, DEFAULT_ENUM_CAP
from .maxflow import FlowNetwork

Edge = tuple[int, ...]


@dataclass(frozen=True)
class Hypergraph:
    """An s-uniform hypergraph on vertex set {0, ..., n-1}."""

    s: int
    n: int
    edges: tuple[Edge, ...]

    def __init__(self, s: int, n: int, edges=()):
        if s < 2:
            raise ValueError(f"uniformity must be at least 2, got {s}")
        if n < 0:
            raise ValueError(f"vertex count must be nonnegative, got {n}")
        canon = set()
        for e in edges:
            t = tuple(sorted(e))
            if len(t) != s or len(set(t)) != s:
                raise ValueError(f"edge {tuple(e)} is not a set of {s} distinct vertices")
            if t[0] < 0 or t[-1] >= n:
                raise ValueError(f"edge {t} has vertices outside 0..{n - 1}")
            canon.add(t)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", tuple(sorted(canon)))

    @property
    def v(self) -> int:
        return self.n

    @property
    def e(self) -> int:
        return len(self.edges)

    @cached_property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    @cached_property
    def incident(self) -> tuple[tuple[Edge, ...], ...]:
        """incident[x] = edges containing x."""
        by_vertex: list[list[Edge]] = [[] for _ in range(self.n)]
        for e in self.edges:
            for x in e:
                by_vertex[x].append(e)
        return tuple(tuple(b) for b in by_vertex)

    @cached_property
    def neighbors(self) -> tuple[frozenset[int], ...]:
        """neighbors[x] = vertices sharing an edge with x (x excluded)."""
        adj: list[set[int]] = [set() for _ in range(self.n)]
        for e in self.edges:
            for x in e:
                adj[x].update(e)
        return tuple(frozenset(a - {x}) for x, a in enumerate(adj))

    def degree(self, x: int) -> int:
        return len(self.incident[x])

    def has_edge(self, vertices) -> bool:
        t = tuple(sorted(vertices))
        return len(set(t)) == self.s and t in self.edge_set

    def induced(self, vertices) -> "Hypergraph":
        """Sub-hypergraph on the given vertices, relabeled to 0..|W|-1."""
        w = sorted(set(vertices))
        if not w:
            raise ValueError("induced subhypergraph needs a nonempty vertex set")
        if w[0] < 0 or w[-1] >= self.n:
            raise ValueError(f"vertices {w} not all inside 0..{self.n - 1}")
        pos = {x: i for i, x in enumerate(w)}
        keep = set(w)
        edges = [tuple(pos[x] for x in e) for e in self.edges if keep.issuperset(e)]
        return Hypergraph(self.s, len(w), edges)

    def edges_inside(self, vertices) -> int:
        keep = set(vertices)
        return sum(1 for e in self.edges if keep.issuperset(e))

    def to_json_dict(self) -> dict:
        return {"s": self.s, "n": self.n, "edges": [list(e) for e in self.edges]}

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())


def from_json_dict(doc: object) -> Hypergraph:
    """Parse the interchange dict; violations get positional messages."""
    if not isinstance(doc, dict):
        raise FormatError("top level: expected an object")
    for key in ("s", "n", "edges"):
        if key not in doc:
            raise FormatError(f"top level: missing key {key!r}")
    s, n, edges = doc["s"], doc["n"], doc["edges"]
    if not isinstance(s, int) or isinstance(s, bool) or s < 2:
        raise FormatError("s: expected an integer >= 2")
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise FormatError("n: expected a nonnegative integer")
    if not isinstance(edges, list):
        raise FormatError("edges: expected a list")
    seen: list[Edge] = []
    for i, raw in enumerate(edges):
        if not isinstance(raw, list):
            raise FormatError(f"edges[{i}]: expected a list")
        if len(raw) != s:
            raise FormatError(f"edges[{i}]: expected {s} vertices, got {len(raw)}")
        for j, x in enumerate(raw):
            if not isinstance(x, int) or isinstance(x, bool):
                raise FormatError(f"edges[{i}][{j}]: expected an integer")
            if not 0 <= x < n:
                raise FormatError(f"edges[{i}][{j}]: vertex {x} outside 0..{n - 1}")
        t = tuple(raw)
        if list(t) != sorted(set(t)):
            raise FormatError(f"edges[{i}]: vertices must be strictly ascending")
        if seen and t <= seen[-1]:
            msg = "duplicate edge" if t == seen[-1] or t in seen else "edges not sorted"
            raise FormatError(f"edges[{i}]: {msg}")
        seen.append(t)
    return Hypergraph(s, n, seen)


def from_json(text: str) -> Hypergraph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from exc
    return from_json_dict(doc)


def density(g: Hypergraph) -> Fraction:
    """e(G)/v(G), exact."""
    if g.n == 0:
        raise ValueError("density undefined on the empty vertex set")
    return Fraction(g.e, g.n)


def _denser_subset(g: Hypergraph, q: Fraction, forbidden=frozenset(), allow_ties=False):
    """Vertex set W (nonempty, avoiding `forbidden`) with rho(W) > q, or None.

    With allow_ties, rho(W) >= q counts.  One integer min-cut either way.
    """
    verts = [x for x in range(g.n) if x not in forbidden]
    edges = [e for e in g.edges if forbidden.isdisjoint(e)]
    if not edges:
        return None
    a, b = q.numerator, q.denominator
    if allow_ties:
        m = g.n + 1
        cap_edge, cap_vertex = m * b, m * a - 1
    else:
        cap_edge, cap_vertex = b, a
    src, snk = 0, 1
    net = FlowNetwork(2 + len(edges) + len(verts))
    vnode = {x: 2 + len(edges) + i for i, x in enumerate(verts)}
    inf = cap_edge * len(edges) + cap_vertex * len(verts) + 1
    for i, e in enumerate(edges):
        net.add_edge(src, 2 + i, cap_edge)
        for x in e:
            net.add_edge(2 + i, vnode[x], inf)
    for x in verts:
        net.add_edge(vnode[x], snk, cap_vertex)
    flow = net.max_flow(src, snk)
    if flow >= cap_edge * len(edges):
        return None
    side = net.source_side(src)
    witness = frozenset(x for x in verts if vnode[x] in side)
    return witness or None


def max_density(g: Hypergraph) -> tuple[Fraction, tuple[int, ...]]:
    """Max of e(W)/|W| over nonempty W, with a maximizing witness.

    Exact: repeatedly asks a min-cut oracle for a strictly denser subset
    and re-measures the returned witness with integer arithmetic.
    """
    if g.n == 0:
        raise ValueError("max_density undefined on the empty vertex set")
    if g.e == 0:
        return Fraction(0), (0,)
    best = density(g)
    witness = tuple(range(g.n))
    while True:
        w = _denser_subset(g, best)
        if w is None:
            return best, witness
        got = Fraction(g.edges_inside(w), len(w))
        assert got > best, "min-cut oracle returned a non-improving subset"
        best, witness = got, tuple(sorted(w))


def is_strictly_balanced(g: Hypergraph) -> bool:
    """True iff every proper nonempty W has e(W)/|W| < e(G)/v(G)."""
    if g.e == 0:
        raise ValueError("strict balance undefined without edges")
    rho = density(g)
    # any proper subset avoids some vertex, so one tie-tolerant min-cut
    # query per excluded vertex covers them all
    for x in range(g.n):
        if _denser_subset(g, rho, forbidden=frozenset([x]), allow_ties=True):
            return False
    return True


def _matching_order(g: Hypergraph) -> list[int]:
    """Vertex order for backtracking: connected-first, rare degrees early."""
    degs = [g.degree(x) for x in range(g.n)]
    remaining = set(range(g.n))
    order: list[int] = []
    frontier: set[int] = set()
    while remaining:
        if frontier:
            nxt = max(frontier, key=lambda x: (degs[x], -x))
        else:
            nxt = max(remaining, key=lambda x: (degs[x], -x))
        order.append(nxt)
        remaining.discard(nxt)
        frontier.discard(nxt)
        frontier |= g.neighbors[nxt] & remaining
    return order


def _complement(g: Hypergraph) -> Hypergraph:
    full = combinations(range(g.n), g.s)
    return Hypergraph(g.s, g.n, [e for e in full if e not in g.edge_set])


def automorphism_count(g: Hypergraph, cap: int | None = None) -> int:
    """Number of edge-preserving vertex permutations, by pruned search."""
    limit = enum_cap(DEFAULT_ENUM_CAP, cap)
    if g.n > limit:
        raise CapExceeded(f"automorphism search on {g.n} vertices exceeds cap {limit}")
    isolated = [x for x in range(g.n) if g.degree(x) == 0]
    core_verts = [x for x in range(g.n) if g.degree(x) > 0]
    if not core_verts:
        return factorial(g.n)
    core = g.induced(core_verts)
    if core.e > comb(core.n, core.s) // 2:
        core = _complement(core)  # same symmetry group, sparser search
    return factorial(len(isolated)) * _count_core_automorphisms(core)


def _count_core_automorphisms(g: Hypergraph) -> int:
    order = _matching_order(g)
    degs = [g.degree(x) for x in range(g.n)]
    edge_set = g.edge_set
    placed_pos = {}
    image = {}
    used = set()
    s = g.s

    # edges checked as soon as their last source vertex is placed
    edges_ready: list[list[Edge]] = [[] for _ in range(g.n)]
    pos_of = {x: i for i, x in enumerate(order)}
    for e in g.edges:
        edges_ready[max(pos_of[x] for x in e)].append(e)

    def extend(i: int) -> int:
        if i == len(order):
            return 1
        u = order[i]
        total = 0
        for w in range(g.n):
            if w in used or degs[w] != degs[u]:
                continue
            ok = True
            for e in edges_ready[i]:
                mapped = tuple(sorted(image[x] if x != u else w for x in e))
                if mapped not in edge_set:
                    ok = False
                    break
            if ok:
                # reverse direction: edges at w fully inside the image must
                # pull back to edges, otherwise the leaf is not a bijection
                # on edge sets
                inv = {img: src for src, img in image.items()}
                inv[w] = u
                for f in g.incident[w]:
                    if all(y in inv for y in f):
                        if tuple(sorted(inv[y] for y in f)) not in edge_set:
                            ok = False
                            break
            if ok:
                image[u] = w
                used.add(w)
                total += extend(i + 1)
                used.discard(w)
                del image[u]
        return total

    return extend(0)


def _embedding_search(host: Hypergraph, pattern: Hypergraph, *, count_all: bool,
                      induced: bool = False) -> int:
    """Backtracking count of injective edge-preserving maps pattern -> host.

    With count_all False, stops at the first embedding (returns 0/1).
    """
    if pattern.s != host.s:
        raise ValueError("pattern and host must share the same uniformity")
    isolated = [x for x in range(pattern.n) if pattern.degree(x) == 0]
    core_verts = [x for x in range(pattern.n) if pattern.degree(x) > 0]
    free_slots = host.n - len(core_verts)
    if free_slots < len(isolated):
        return 0

    def isolated_placements(core_image: set[int]) -> int:
        """Ways to drop the degree-0 pattern vertices into the host.

        Non-induced embeddings never care where they land; induced ones
        must keep the full image edge count at exactly pattern.e.
        """
        k = len(isolated)
        if not induced:
            return perm(host.n - len(core_image), k)
        if k == 0:
            inside = sum(1 for f in host.edges if core_image.issuperset(f))
            return 1 if inside == pattern.e else 0
        avail = [w for w in range(host.n) if w not in core_image]
        good = 0
        for extra in combinations(avail, k):
            img = core_image | set(extra)
            inside = sum(1 for f in host.edges if img.issuperset(f))
            if inside == pattern.e:
                good += 1
        return good * factorial(k)

    if not core_verts:
        total = isolated_placements(set())
        return total if count_all else (1 if total else 0)

    # order pattern edges so each one touches previously covered vertices
    # whenever its component allows
    edges_left = list(pattern.edges)
    ordered: list[Edge] = []
    covered: set[int] = set()
    while edges_left:
        pick = next((e for e in edges_left if covered & set(e)), edges_left[0])
        edges_left.remove(pick)
        ordered.append(pick)
        covered |= set(pick)

    host_deg = [host.degree(x) for x in range(host.n)]
    pat_deg = [pattern.degree(x) for x in range(pattern.n)]
    image: dict[int, int] = {}
    used: set[int] = set()

    def place(edge_idx: int) -> int:
        if edge_idx == len(ordered):
            return isolated_placements(set(image.values()))
        pe = ordered[edge_idx]
        mapped = [x for x in pe if x in image]
        unmapped = [x for x in pe if x not in image]
        if mapped:
            anchor = min((image[x] for x in mapped), key=lambda w: host_deg[w])
            candidates = [f for f in host.incident[anchor]
                          if all(image[x] in f for x in mapped)]
        else:
            candidates = list(host.edges)
        total = 0
        for f in candidates:
            slots = [w for w in f if w not in (image[x] for x in mapped)]
            if len(slots) != len(unmapped):
                continue
            total += assign(unmapped, slots, edge_idx)
            if total and not count_all:
                return total
        return total

    def assign(unmapped: list[int], slots: list[int], edge_idx: int) -> int:
        if not unmapped:
            return place(edge_idx + 1)
        x, rest = unmapped[0], unmapped[1:]
        total = 0
        for w in slots:
            if w in used or host_deg[w] < pat_deg[x]:
                continue
            # every pattern edge through x that is already fully mapped
            # must land on a host edge
            ok = True
            for e in pattern.incident[x]:
                if all(y == x or y in image for y in e):
                    landed = tuple(sorted(w if y == x else image[y] for y in e))
                    if landed not in host.edge_set:
                        ok = False
                        break
            if not ok:
                continue
            image[x] = w
            used.add(w)
            total += assign(rest, [u for u in slots if u != w], edge_idx)
            used.discard(w)
            del image[x]
            if total and not count_all:
                return total
        return total

    core_count = place(0)
    if not count_all:
        return 1 if core_count else 0
    return core_count


def count_embeddings(host: Hypergraph, pattern: Hypergraph, cap: int | None = None,
                     induced: bool = False) -> int:
    limit = enum_cap(DEFAULT_ENUM_CAP, cap)
    if pattern.n > limit:
        raise CapExceeded(f"pattern on {pattern.n} vertices exceeds cap {limit}")
    return _embedding_search(host, pattern, count_all=True, induced=induced)


def count_copies(host: Hypergraph, pattern: Hypergraph, cap: int | None = None,
                 induced: bool = False) -> int:
    """Distinct sub-hypergraphs of host isomorphic to pattern.

    Copies are not induced unless asked: extra host edges among the image
    vertices are allowed.
    """
    emb = count_embeddings(host, pattern, cap=cap, induced=induced)
    aut = automorphism_count(pattern, cap=cap)
    assert emb % aut == 0, "embedding count must be divisible by automorphisms"
    return emb // aut


def contains_copy(host: Hypergraph, pattern: Hypergraph) -> bool:
    """Early-exit containment check with a component-size prefilter."""
    if pattern.e == 0:
        return host.n >= pattern.n
    if pattern.e > host.e or pattern.n > host.n:
        return False
    if _is_connected_pattern(pattern):
        need_v = sum(1 for x in range(pattern.n) if pattern.degree(x) > 0)
        if not _has_component_at_least(host, pattern.e, need_v):
            return False
        if host.n - pattern.n < 0:
            return False
    return _embedding_search(host, pattern, count_all=False) > 0


def _is_connected_pattern(pattern: Hypergraph) -> bool:
    core = [x for x in range(pattern.n) if pattern.degree(x) > 0]
    if not core:
        return False
    seen = {core[0]}
    stack = [core[0]]
    while stack:
        x = stack.pop()
        for y in pattern.neighbors[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(core)


def _has_component_at_least(host: Hypergraph, min_edges: int, min_verts: int) -> bool:
    parent = list(range(host.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in host.edges:
        r = find(e[0])
        for y in e[1:]:
            ry = find(y)
            if ry != r:
                parent[ry] = r
    edge_count: dict[int, int] = {}
    vert_count: dict[int, int] = {}
    for e in host.edges:
        edge_count[find(e[0])] = edge_count.get(find(e[0]), 0) + 1
    for x in range(host.n):
        if host.degree(x) > 0:
            vert_count[find(x)] = vert_count.get(find(x), 0) + 1
    return any(edge_count.get(r, 0) >= min_edges and c >= min_verts
               for r, c in vert_count.items())


def is_isomorphic(g1: Hypergraph, g2: Hypergraph, cap: int | None = None) -> bool:
    if g1.s != g2.s or g1.n != g2.n or g1.e != g2.e:
        return False
    if sorted(g1.degree(x) for x in range(g1.n)) != sorted(g2.degree(x) for x in range(g2.n)):
        return False
    limit = enum_cap(DEFAULT_ENUM_CAP, cap)
    if g1.n > limit:
        raise CapExceeded(f"isomorphism search on {g1.n} vertices exceeds cap {limit}")
    # injective edge-preserving map with equal edge counts is onto the edges
    return _embedding_search(g2, g1, count_all=False) > 0


def distance(g: Hypergraph, x: int, y: int) -> int | None:
    """Hop count where one hop is sharing an edge; None when unreachable."""
    for z in (x, y):
        if not 0 <= z < g.n:
            raise ValueError(f"vertex {z} outside 0..{g.n - 1}")
    if x == y:
        return 0
    dist = {x: 0}
    frontier = [x]
    while frontier:
        nxt = []
        for u in frontier:
            for w in g.neighbors[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    if w == y:
                        return dist[w]
                    nxt.append(w)
        frontier = nxt
    return None
