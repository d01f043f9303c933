"""Rooted-pair calculus: densities, f_alpha classification, strict
extensions and their maximality filters.

A RootedPair is a hypergraph G whose first `roots` vertices form the base
part H.  H's edge set is stored explicitly because the extension
machinery quantifies only over E(G) minus E(H); edges of G inside the
root set need not belong to H.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations

from .errors import (
    CapExceeded,
    DegeneratePair,
    FormatError,
    enum_cap,
    DEFAULT_EXTENSION_CAP,
    DEFAULT_PAIR_CAP,
)
from .hypergraph import Edge, Hypergraph, from_json_dict


@dataclass(frozen=True)
class RootedPair:
    """Pair (G, H): vertices 0..roots-1 of g are H, with explicit H-edges."""

    g: Hypergraph
    roots: int
    h_edges: tuple[Edge, ...] = ()

    def __init__(self, g: Hypergraph, roots: int, h_edges=()):
        if not 0 <= roots <= g.n:
            raise ValueError(f"roots must lie in 0..{g.n}, got {roots}")
        canon = set()
        for e in h_edges:
            t = tuple(sorted(e))
            if t not in g.edge_set:
                raise ValueError(f"H-edge {t} is not an edge of G")
            if t[-1] >= roots:
                raise ValueError(f"H-edge {t} leaves the root set 0..{roots - 1}")
            canon.add(t)
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "roots", roots)
        object.__setattr__(self, "h_edges", tuple(sorted(canon)))

    @property
    def v_diff(self) -> int:
        return self.g.n - self.roots

    @property
    def e_diff(self) -> int:
        return self.g.e - len(self.h_edges)

    @property
    def added_vertices(self) -> tuple[int, ...]:
        return tuple(range(self.roots, self.g.n))

    @property
    def pattern_edges(self) -> tuple[Edge, ...]:
        h = set(self.h_edges)
        return tuple(e for e in self.g.edges if e not in h)

    def to_json_dict(self) -> dict:
        return {"g": self.g.to_json_dict(), "roots": self.roots,
                "h_edges": [list(e) for e in self.h_edges]}

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())


def pair_from_json_dict(doc: object) -> RootedPair:
    if not isinstance(doc, dict):
        raise FormatError("top level: expected an object")
    for key in ("g", "roots", "h_edges"):
        if key not in doc:
            raise FormatError(f"top level: missing key {key!r}")
    try:
        g = from_json_dict(doc["g"])
    except FormatError as exc:
        raise FormatError(f"g.{exc}") from exc
    roots = doc["roots"]
    if not isinstance(roots, int) or isinstance(roots, bool) or not 0 <= roots <= g.n:
        raise FormatError(f"roots: expected an integer in 0..{g.n}")
    raw = doc["h_edges"]
    if not isinstance(raw, list):
        raise FormatError("h_edges: expected a list")
    h_edges = []
    for i, item in enumerate(raw):
        if not isinstance(item, list) or not all(
                isinstance(x, int) and not isinstance(x, bool) for x in item):
            raise FormatError(f"h_edges[{i}]: expected a list of integers")
        t = tuple(item)
        if tuple(sorted(set(t))) != t:
            raise FormatError(f"h_edges[{i}]: vertices must be strictly ascending")
        if t not in g.edge_set:
            raise FormatError(f"h_edges[{i}]: {list(t)} is not an edge of g")
        if t[-1] >= roots:
            raise FormatError(f"h_edges[{i}]: edge leaves the root set 0..{roots - 1}")
        h_edges.append(t)
    return RootedPair(g, roots, h_edges)


def pair_from_json(text: str) -> RootedPair:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from exc
    return pair_from_json_dict(doc)


def pair_density(pair: RootedPair) -> Fraction:
    """rho(G, H) = added edges over added vertices, exact."""
    if pair.v_diff == 0:
        raise DegeneratePair("pair adds no vertices, rho(G, H) undefined")
    return Fraction(pair.e_diff, pair.v_diff)


def _intermediate_sets(pair: RootedPair, cap: int | None):
    """Vertex sets W of induced intermediates, roots <= W <= V(G).

    Yields (W sorted tuple, edge count of G inside W).  The W = roots
    entry is skipped when the induced root edges equal E(H) exactly
    (that K would be H itself, excluded everywhere).
    """
    limit = enum_cap(DEFAULT_PAIR_CAP, cap)
    if pair.v_diff > limit:
        raise CapExceeded(
            f"pair adds {pair.v_diff} vertices, intermediate cap is {limit}")
    base = tuple(range(pair.roots))
    added = pair.added_vertices
    for size in range(len(added) + 1):
        for extra in combinations(added, size):
            w = base + extra
            inside = pair.g.edges_inside(w)
            if size == 0 and inside == len(pair.h_edges):
                continue
            yield w, inside


def pair_max_density(pair: RootedPair, cap: int | None = None) -> Fraction:
    """Max of rho(K, H) over intermediates H < K <= G with added vertices."""
    if pair.v_diff == 0:
        raise DegeneratePair("pair adds no vertices, rho^max(G, H) undefined")
    e_h = len(pair.h_edges)
    best = None
    for w, inside in _intermediate_sets(pair, cap):
        if len(w) == pair.roots:
            continue
        rho = Fraction(inside - e_h, len(w) - pair.roots)
        if best is None or rho > best:
            best = rho
    assert best is not None
    return best


def f_alpha(pair: RootedPair, alpha: Fraction) -> Fraction:
    """v(G, H) - alpha * e(G, H), exact."""
    return Fraction(pair.v_diff) - Fraction(alpha) * pair.e_diff


@dataclass(frozen=True)
class PairClass:
    """Classification at a fixed alpha with the deciding intermediate."""

    kind: str  # "safe" | "rigid" | "neutral" | "none"
    witness_vertices: tuple[int, ...]
    witness_value: Fraction


def classify_pair(pair: RootedPair, alpha: Fraction, cap: int | None = None) -> PairClass:
    """Safe, rigid, neutral, or none at this alpha, by exact arithmetic.

    Quantifiers run over induced intermediates only: for each vertex set
    the induced K extremizes both f_alpha(K, H) and f_alpha(G, K), so the
    sub-edge-set choices the definitions allow can never flip an answer.
    """
    alpha = Fraction(alpha)
    v_g, e_g = pair.g.n, pair.g.e
    e_h = len(pair.h_edges)
    full = tuple(range(v_g))

    f_kh = {}   # W -> f_alpha(K_W, H), K ranging over H < K <= G
    f_gk = {}   # W -> f_alpha(G, K_W), K ranging over H <= K < G
    f_gk[tuple(range(pair.roots))] = (Fraction(pair.v_diff)
                                      - alpha * Fraction(pair.e_diff))
    for w, inside in _intermediate_sets(pair, cap):
        f_kh[w] = Fraction(len(w) - pair.roots) - alpha * (inside - e_h)
        if w != full:
            f_gk[w] = Fraction(v_g - len(w)) - alpha * (e_g - inside)

    if f_kh and all(v > 0 for v in f_kh.values()):
        worst = min(f_kh, key=lambda w: (f_kh[w], w))
        return PairClass("safe", worst, f_kh[worst])
    if all(v < 0 for v in f_gk.values()):
        worst = max(f_gk, key=lambda w: (f_gk[w], w))
        return PairClass("rigid", worst, f_gk[worst])
    whole = f_kh.get(full)
    propers = {w: v for w, v in f_kh.items() if w != full}
    if whole == 0 and all(v > 0 for v in propers.values()):
        return PairClass("neutral", full, Fraction(0))
    # report the inequality that broke the best remaining candidate
    if whole is not None and whole > 0:
        bad = min(propers, key=lambda w: (propers[w], w))
        return PairClass("none", bad, propers[bad])
    bad = max(f_gk, key=lambda w: (f_gk[w], w))
    return PairClass("none", bad, f_gk[bad])


def is_strictly_balanced_pair(pair: RootedPair, cap: int | None = None) -> bool:
    """rho(K, H) < rho(G, H) for every proper intermediate K."""
    rho = pair_density(pair)
    e_h = len(pair.h_edges)
    full_size = pair.g.n
    for w, inside in _intermediate_sets(pair, cap):
        if len(w) in (pair.roots, full_size):
            continue
        if Fraction(inside - e_h, len(w) - pair.roots) >= rho:
            return False
    return True


def strict_extensions(host: Hypergraph, root_tuple, pair: RootedPair,
                      cap: int | None = None, forbidden=frozenset()) -> list[tuple[int, ...]]:
    """All strict placements of the pair's added part over the given roots.

    A placement maps added vertex (roots + i) to result[i], injectively,
    avoiding roots and `forbidden`.  Strictness is two-sided: every
    pattern edge lands on a host edge, and every host edge inside the
    combined vertex set that touches an added image is such a landing.
    Pattern edges wholly inside the root set can never satisfy the
    second direction, so those pairs admit no extensions at all.
    """
    if host.s != pair.g.s:
        raise ValueError("host and pair must share the same uniformity")
    root_tuple = tuple(root_tuple)
    if len(root_tuple) != pair.roots:
        raise ValueError(f"expected {pair.roots} roots, got {len(root_tuple)}")
    if len(set(root_tuple)) != len(root_tuple):
        raise ValueError("root vertices must be distinct")
    for x in root_tuple:
        if not 0 <= x < host.n:
            raise ValueError(f"root {x} outside the host")
    limit = enum_cap(DEFAULT_EXTENSION_CAP, cap)
    if pair.v_diff > limit:
        raise CapExceeded(f"pair adds {pair.v_diff} vertices, extension cap is {limit}")
    forbidden = frozenset(forbidden) | set(root_tuple)

    pattern = pair.pattern_edges
    if any(e[-1] < pair.roots for e in pattern):
        return []
    if pair.v_diff == 0:
        return [()] if not pattern else []

    image = {i: x for i, x in enumerate(root_tuple)}
    added = pair.added_vertices
    # pattern edges drive the search: an edge with a placed vertex only
    # ranges over host edges incident to it, a detached edge over all
    # host edges; added vertices in no pattern edge range over everything
    pat_incident: dict[int, list[Edge]] = {v: [] for v in added}
    for e in pattern:
        for x in e:
            if x >= pair.roots:
                pat_incident[x].append(e)
    edges_left = list(pattern)
    ordered: list[Edge] = []
    covered: set[int] = set(range(pair.roots))
    while edges_left:
        pick = next((e for e in edges_left if covered & set(e)), edges_left[0])
        edges_left.remove(pick)
        ordered.append(pick)
        covered |= set(pick)
    loose = [v for v in added if v not in covered]
    used: set[int] = set()
    out: list[tuple[int, ...]] = []

    def landed_ok(x: int, w: int) -> bool:
        for e in pat_incident[x]:
            if all(y == x or y in image for y in e):
                landed = tuple(sorted(w if y == x else image[y] for y in e))
                if landed not in host.edge_set:
                    return False
        return True

    def place(idx: int):
        if idx == len(ordered):
            place_loose(0)
            return
        pe = ordered[idx]
        mapped = [x for x in pe if x in image]
        unmapped = [x for x in pe if x not in image]
        if mapped:
            candidates = [f for f in host.incident[image[mapped[0]]]
                          if all(image[x] in f for x in mapped)]
        else:
            candidates = host.edges
        taken = {image[x] for x in mapped}
        for f in candidates:
            slots = [w for w in f if w not in taken]
            if len(slots) == len(unmapped):
                assign(unmapped, slots, idx)

    def assign(unmapped: list[int], slots: list[int], idx: int):
        if not unmapped:
            place(idx + 1)
            return
        x, rest = unmapped[0], unmapped[1:]
        for w in slots:
            if w in forbidden or w in used or not landed_ok(x, w):
                continue
            image[x] = w
            used.add(w)
            assign(rest, [u for u in slots if u != w], idx)
            used.discard(w)
            del image[x]

    def place_loose(i: int):
        if i == len(loose):
            if _no_spurious_edges(host, image, pair):
                out.append(tuple(image[v] for v in added))
            return
        x = loose[i]
        for w in range(host.n):
            if w in forbidden or w in used:
                continue
            image[x] = w
            used.add(w)
            place_loose(i + 1)
            used.discard(w)
            del image[x]

    place(0)
    out.sort()
    return out


def _no_spurious_edges(host: Hypergraph, image: dict[int, int], pair: RootedPair) -> bool:
    combined = sorted(image.values())
    root_images = {image[i] for i in range(pair.roots)}
    landed = {tuple(sorted(image[x] for x in e)) for e in pair.pattern_edges}
    for f in combinations(combined, host.s):
        if set(f) <= root_images:
            continue
        if (f in host.edge_set) != (f in landed):
            return False
    return True


def is_kt_maximal(host: Hypergraph, gtilde_vertices, htilde_vertices,
                  k_pair: RootedPair, cap: int | None = None) -> bool:
    """No sub-tuple of the copy admits a further strict K-extension.

    Checks every |V(T)|-subset of the copy's vertices not fully inside
    the base part.  The candidate extension must live outside the rest of
    the copy, and no host edge may straddle the new extension vertices
    and the removed part.
    """
    g_set = frozenset(gtilde_vertices)
    h_set = frozenset(htilde_vertices)
    if not h_set <= g_set:
        raise ValueError("base vertices must lie inside the copy")
    t = k_pair.roots
    if t > len(g_set):
        raise ValueError(f"K-pair wants {t} roots, copy has {len(g_set)} vertices")
    for t_set in combinations(sorted(g_set), t):
        if set(t_set) <= h_set:
            continue
        removed = g_set - set(t_set)
        for ordering in permutations(t_set):
            for placement in strict_extensions(host, ordering, k_pair,
                                               cap=cap, forbidden=removed):
                if not _straddles(host, set(placement), removed):
                    return False
    return True


def _straddles(host: Hypergraph, new_vertices: set[int], removed: set[int]) -> bool:
    """Does some host edge inside new+removed touch both parts?"""
    if not new_vertices or not removed:
        return False
    zone = new_vertices | removed
    for e in host.edges:
        if zone.issuperset(e):
            picked = set(e)
            if picked & new_vertices and picked & removed:
                return True
    return False


@lru_cache(maxsize=64)
def enumerate_blocking_pairs(s: int, alpha: Fraction, t_max: int, r: int,
                             cap: int | None = None) -> tuple[RootedPair, ...]:
    """All rigid and neutral pairs adding at most r vertices, up to iso.

    These are the pairs whose further extensions a maximal copy must not
    admit.  Pairs adding no vertices are omitted: they never have strict
    extensions, so they block nothing.  Pattern edges inside the root set
    are omitted for the same reason.  Deduplication is up to relabelings
    that fix the root set and the added set setwise.
    """
    alpha = Fraction(alpha)
    found: list[RootedPair] = []
    seen: set[tuple] = set()
    for t in range(1, t_max + 1):
        for q in range(1, r + 1):
            n = t + q
            candidates = [e for e in combinations(range(n), s) if e[-1] >= t]
            for picked in _edge_subsets_covering(candidates, range(t, n)):
                g = Hypergraph(s, n, picked)
                pair = RootedPair(g, t, ())
                verdict = classify_pair(pair, alpha, cap=cap)
                if verdict.kind not in ("rigid", "neutral"):
                    continue
                key = _pair_canon(g, t)
                if key in seen:
                    continue
                seen.add(key)
                found.append(pair)
    return tuple(found)


def _edge_subsets_covering(candidates: list[Edge], must_cover):
    must = set(must_cover)
    for k in range(1, len(candidates) + 1):
        for picked in combinations(candidates, k):
            covered = set()
            for e in picked:
                covered.update(e)
            if must <= covered:
                yield picked


def _pair_canon(g: Hypergraph, roots: int) -> tuple:
    added = range(roots, g.n)
    best = None
    for rp in permutations(range(roots)):
        for ap in permutations(added):
            relabel = {**{i: rp[i] for i in range(roots)},
                       **{x: ap[i] for i, x in enumerate(added)}}
            edges = tuple(sorted(tuple(sorted(relabel[x] for x in e)) for e in g.edges))
            if best is None or edges < best:
                best = edges
    return (g.s, g.n, roots, best)


def count_maximal_extensions(host: Hypergraph, root_tuple, pair: RootedPair,
                             r: int, alpha: Fraction, cap: int | None = None) -> int:
    """Number of strict extensions that stay maximal against every
    rigid/neutral pair adding at most r vertices."""
    placements = strict_extensions(host, root_tuple, pair, cap=cap)
    if r <= 0:
        return len(placements)
    blockers = enumerate_blocking_pairs(pair.g.s, Fraction(alpha), pair.g.n, r, cap)
    root_set = frozenset(root_tuple)
    total = 0
    for placement in placements:
        copy = root_set | set(placement)
        if all(is_kt_maximal(host, copy, root_set, kp, cap=cap) for kp in blockers):
            total += 1
    return total
