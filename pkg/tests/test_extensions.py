"""Rooted pairs: densities, alpha classification, strict extensions, N^r."""

import itertools
import json
import random
import statistics
from fractions import Fraction

import pytest

from hyperspectra.errors import CapExceeded, DegeneratePair, FormatError
from hyperspectra.extensions import (
    RootedPair,
    classify_pair,
    count_maximal_extensions,
    f_alpha,
    is_kt_maximal,
    is_strictly_balanced_pair,
    pair_density,
    pair_from_json,
    pair_max_density,
    strict_extensions,
)
from hyperspectra.hypergraph import Hypergraph, density

import oracles


def complete(s, n):
    return Hypergraph(s, n, list(itertools.combinations(range(n), s)))


# two roots, one added vertex closing a single edge
VERTEX_EDGE = RootedPair(Hypergraph(3, 3, [(0, 1, 2)]), 2)


class TestRootedPair:
    def test_h_edge_must_be_g_edge(self):
        with pytest.raises(ValueError):
            RootedPair(Hypergraph(3, 4, [(0, 1, 2)]), 3, [(0, 1, 3)])

    def test_h_edge_must_sit_in_roots(self):
        g = Hypergraph(3, 4, [(0, 1, 3)])
        with pytest.raises(ValueError):
            RootedPair(g, 3, [(0, 1, 3)])

    def test_roots_range(self):
        with pytest.raises(ValueError):
            RootedPair(Hypergraph(3, 2, []), 3)

    def test_counts(self):
        g = Hypergraph(3, 6, [(0, 1, 2), (2, 3, 4), (2, 4, 5)])
        pair = RootedPair(g, 3, [(0, 1, 2)])
        assert pair.v_diff == 3
        assert pair.e_diff == 2
        assert pair.pattern_edges == ((2, 3, 4), (2, 4, 5))

    def test_json_round_trip(self):
        g = Hypergraph(3, 5, [(0, 1, 2), (1, 3, 4)])
        pair = RootedPair(g, 3, [(0, 1, 2)])
        assert pair_from_json(pair.to_json()) == pair

    def test_json_errors(self):
        with pytest.raises(FormatError, match="missing key"):
            pair_from_json(json.dumps({"g": {"s": 3, "n": 3, "edges": []}}))
        with pytest.raises(FormatError, match=r"h_edges\[0\]"):
            pair_from_json(json.dumps({
                "g": {"s": 3, "n": 3, "edges": [[0, 1, 2]]},
                "roots": 2, "h_edges": [[0, 1, 2]]}))


class TestPairDensities:
    def test_one_vertex_one_edge(self):
        assert pair_density(VERTEX_EDGE) == 1

    def test_closed_path_over_one_root(self):
        # k chain edges from the root plus a closing edge that reuses an
        # interior vertex: k(s-1) added vertices, k+1 edges
        k = 2
        g = Hypergraph(3, 5, [(0, 1, 2), (2, 3, 4), (0, 1, 4)])
        pair = RootedPair(g, 1)
        assert pair.v_diff == k * 2 and pair.e_diff == k + 1
        assert pair_density(pair) == Fraction(k + 1, 2 * k)

    def test_unextendable_hypothesis_pair(self):
        # base = one edge, whole = two disjoint edges: rho(H) = rho(G, H)
        g = Hypergraph(3, 6, [(0, 1, 2), (3, 4, 5)])
        pair = RootedPair(g, 3, [(0, 1, 2)])
        h = g.induced([0, 1, 2])
        assert pair_density(pair) == density(h) == Fraction(1, 3)
        assert is_strictly_balanced_pair(pair)

    def test_degenerate(self):
        pair = RootedPair(Hypergraph(3, 3, [(0, 1, 2)]), 3, [(0, 1, 2)])
        with pytest.raises(DegeneratePair):
            pair_density(pair)
        with pytest.raises(DegeneratePair):
            pair_max_density(pair)

    def test_max_density_dominates(self):
        rng = random.Random(8)
        for _ in range(30):
            g = oracles.random_hypergraph(rng, 3, rng.randint(3, 8), rng.random())
            roots = rng.randint(0, g.n - 1)
            pair = RootedPair(g, roots,
                              [e for e in g.edges if e[-1] < roots])
            assert pair_max_density(pair) >= pair_density(pair)

    def test_cap(self):
        pair = RootedPair(Hypergraph(3, 18, []), 1)
        with pytest.raises(CapExceeded):
            pair_max_density(pair)


class TestFAlpha:
    def test_no_added_edges(self):
        pair = RootedPair(Hypergraph(3, 3, []), 1)
        for alpha in (Fraction(1, 7), Fraction(5), Fraction(99)):
            assert f_alpha(pair, alpha) == 2

    def test_zero(self):
        g = Hypergraph(3, 4, [(0, 1, 3), (1, 2, 3)])
        pair = RootedPair(g, 3)
        assert f_alpha(pair, Fraction(1, 2)) == 0

    def test_fractional(self):
        base = [(0, 1, 2), (0, 1, 3), (0, 1, 4), (0, 2, 3),
                (0, 2, 4), (0, 3, 4), (1, 2, 3)]
        pair = RootedPair(Hypergraph(3, 5, base), 2)
        assert (pair.v_diff, pair.e_diff) == (3, 7)
        assert f_alpha(pair, Fraction(2, 5)) == Fraction(1, 5)


class TestClassify:
    def test_lone_vertex_safe_everywhere(self):
        pair = RootedPair(Hypergraph(3, 2, []), 1)
        for alpha in (Fraction(1, 9), Fraction(1), Fraction(7)):
            assert classify_pair(pair, alpha).kind == "safe"

    def test_vertex_edge_sweep(self):
        assert classify_pair(VERTEX_EDGE, Fraction(1, 2)).kind == "safe"
        neutral = classify_pair(VERTEX_EDGE, Fraction(1))
        assert neutral.kind == "neutral"
        assert neutral.witness_value == 0
        rigid = classify_pair(VERTEX_EDGE, Fraction(2))
        assert rigid.kind == "rigid"
        assert rigid.witness_value == -1

    def test_none_kind(self):
        # one added vertex carries both edges, the other is bare
        g = Hypergraph(3, 5, [(0, 1, 3), (1, 2, 3)])
        pair = RootedPair(g, 3)
        got = classify_pair(pair, Fraction(1, 2))
        assert got.kind == "none"

    def test_safe_monotone_downward(self):
        rng = random.Random(13)
        checked = 0
        for _ in range(60):
            g = oracles.random_hypergraph(rng, 3, rng.randint(3, 7), rng.random())
            roots = rng.randint(1, g.n - 1)
            pair = RootedPair(g, roots, [e for e in g.edges if e[-1] < roots])
            a_small = Fraction(rng.randint(1, 6), rng.randint(4, 9))
            a_big = a_small + Fraction(rng.randint(1, 5), 3)
            small = classify_pair(pair, a_small).kind
            big = classify_pair(pair, a_big).kind
            if big == "safe":
                assert small == "safe"
            if small == "rigid":
                assert big == "rigid"
            checked += 1
        assert checked == 60

    def test_neutral_pins_alpha(self):
        rng = random.Random(14)
        for _ in range(60):
            g = oracles.random_hypergraph(rng, 3, rng.randint(3, 7), rng.random())
            roots = rng.randint(1, g.n - 1)
            pair = RootedPair(g, roots, [e for e in g.edges if e[-1] < roots])
            if pair.e_diff == 0:
                continue
            breakpoint_alpha = Fraction(pair.v_diff, pair.e_diff)
            got = classify_pair(pair, breakpoint_alpha)
            assert f_alpha(pair, breakpoint_alpha) == 0
            assert got.kind in ("neutral", "none")
            # neutral demands every proper intermediate stay positive
            if got.kind == "neutral":
                assert classify_pair(pair, breakpoint_alpha / 2).kind == "safe"


class TestStrictExtensions:
    def test_complete_host(self):
        got = strict_extensions(complete(3, 5), (0, 1), VERTEX_EDGE)
        assert got == [(2,), (3,), (4,)]

    def test_edgeless_host(self):
        assert strict_extensions(Hypergraph(3, 5, []), (0, 1), VERTEX_EDGE) == []

    def test_single_edge_host(self):
        host = Hypergraph(3, 3, [(0, 1, 2)])
        assert strict_extensions(host, (0, 1), VERTEX_EDGE) == [(2,)]

    def test_forbidden_vertices(self):
        got = strict_extensions(complete(3, 5), (0, 1), VERTEX_EDGE,
                                forbidden={2, 3})
        assert got == [(4,)]

    def test_pattern_edge_inside_roots(self):
        g = Hypergraph(3, 4, [(0, 1, 2)])
        pair = RootedPair(g, 3)  # the edge is not an H-edge yet sits in roots
        assert strict_extensions(complete(3, 6), (0, 1, 2), pair) == []

    def test_no_added_vertices(self):
        pair = RootedPair(Hypergraph(3, 3, [(0, 1, 2)]), 3, [(0, 1, 2)])
        assert strict_extensions(complete(3, 5), (0, 1, 2), pair) == [()]

    def test_strictness_excludes_denser_landings(self):
        # pair adds an edge vertex plus a bare vertex; landing the bare
        # vertex on 3 would pick up the spurious host edge {0,2,3}
        pair = RootedPair(Hypergraph(3, 4, [(0, 1, 2)]), 2)
        host = Hypergraph(3, 5, [(0, 1, 2), (0, 2, 3)])
        got = strict_extensions(host, (0, 1), pair)
        assert got == [(2, 4)]

    def test_matches_bruteforce(self):
        rng = random.Random(17)
        for _ in range(120):
            host = oracles.random_hypergraph(rng, 3, rng.randint(3, 7), rng.random())
            n_pair = rng.randint(2, 5)
            roots = rng.randint(1, n_pair - 1)
            g = oracles.random_hypergraph(rng, 3, n_pair, rng.random())
            pair = RootedPair(g, roots, [e for e in g.edges if e[-1] < roots])
            tuple_choices = list(itertools.permutations(range(host.n), roots))
            root_tuple = rng.choice(tuple_choices)
            got = strict_extensions(host, root_tuple, pair)
            want = oracles.brute_strict_extensions(host, root_tuple, pair)
            assert got == want

    def test_isomorphism_equivariant(self):
        rng = random.Random(18)
        for _ in range(25):
            host = oracles.random_hypergraph(rng, 3, rng.randint(3, 7), rng.random())
            g = oracles.random_hypergraph(rng, 3, 4, rng.random())
            pair = RootedPair(g, 2, [e for e in g.edges if e[-1] < 2])
            roots = (0, 1) if host.n >= 2 else None
            perm = list(range(host.n))
            rng.shuffle(perm)
            relabeled = Hypergraph(3, host.n,
                                   [tuple(sorted(perm[x] for x in e))
                                    for e in host.edges])
            base = strict_extensions(host, roots, pair)
            moved = strict_extensions(relabeled,
                                      tuple(perm[x] for x in roots), pair)
            assert sorted(tuple(perm[w] for w in t) for t in base) == moved


class TestMaximality:
    def test_isolated_copy_is_maximal(self):
        host = Hypergraph(3, 6, [(0, 1, 2)])
        assert is_kt_maximal(host, (0, 1, 2), (0, 1), VERTEX_EDGE)

    def test_complete_host_never_maximal(self):
        assert not is_kt_maximal(complete(3, 7), (0, 1, 2), (0, 1), VERTEX_EDGE)

    def test_matches_bruteforce(self):
        rng = random.Random(19)
        for _ in range(80):
            host = oracles.random_hypergraph(rng, 3, rng.randint(4, 7), rng.random())
            copy = tuple(rng.sample(range(host.n), 3))
            base = tuple(copy[:rng.randint(0, 2)])
            got = is_kt_maximal(host, copy, base, VERTEX_EDGE)
            assert got == oracles.brute_kt_maximal(host, copy, base, VERTEX_EDGE)


class TestCountMaximal:
    def test_r0_equals_plain_count(self):
        rng = random.Random(23)
        for _ in range(40):
            host = oracles.random_hypergraph(rng, 3, rng.randint(3, 7), rng.random())
            got = count_maximal_extensions(host, (0, 1), VERTEX_EDGE, 0, Fraction(1))
            assert got == len(strict_extensions(host, (0, 1), VERTEX_EDGE))

    def test_single_edge_host(self):
        host = Hypergraph(3, 3, [(0, 1, 2)])
        assert count_maximal_extensions(host, (0, 1), VERTEX_EDGE, 0,
                                        Fraction(1, 3)) == 1

    def test_r1_blocks_crowded_roots(self):
        # with r=1 at alpha=1, the one-vertex/one-edge pair is neutral, so
        # a maximal copy must not extend further over any sub-tuple
        host = Hypergraph(3, 5, [(0, 1, 2), (0, 1, 3)])
        plain = strict_extensions(host, (0, 1), VERTEX_EDGE)
        assert plain == [(2,), (3,)]
        kept = count_maximal_extensions(host, (0, 1), VERTEX_EDGE, 1, Fraction(1))
        assert kept == 0


def test_median_extension_count_growth():
    """N^0 for the codegree pair grows like n^(2/3) at alpha = 1/3."""
    from hyperspectra.sampling import ModelParams, p_from_alpha, sample

    alpha = Fraction(1, 3)

    def median_count(n, seed):
        counts = []
        for i in range(50):
            host = sample(ModelParams(s=3, n=n, p=p_from_alpha(n, alpha),
                                      seed=seed, trial_index=i))
            counts.append(len(strict_extensions(host, (0, 1), VERTEX_EDGE)))
        return statistics.median(counts)

    small = median_count(40, seed=2024)
    large = median_count(80, seed=2025)
    assert small > 0
    ratio = large / small
    assert 1.3 <= ratio <= 2.3  # ideal 2^(2/3) = 1.587
