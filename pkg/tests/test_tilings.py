from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from helpers import brute_tilings, colored_graphs, complete_tiling_count
from tilescope.constructions import tightness_example
from tilescope.errors import NoTilingError, PreconditionError
from tilescope.graph import build_graph, complete_graph, complete_multipartite
from tilescope.tilings import (Tiling, check_tiling, count_tilings, enumerate_tilings, find_tiling,
                               induced_fraction, induced_fraction_bound, minimize_crossing,
                               sample_tilings, tiling_discrepancy, x_induced_edges)


@pytest.mark.parametrize("n,r", [(3, 3), (6, 3), (9, 3), (12, 3), (4, 2), (8, 2), (8, 4), (12, 4)])
def test_complete_graph_counts(n, r):
    # [DERIVED] n! / ((r!)^(n/r) (n/r)!)
    assert count_tilings(complete_graph(n), r) == complete_tiling_count(n, r)


@settings(max_examples=60, deadline=None)
@given(colored_graphs(max_n=9, max_q=2), st.sampled_from([2, 3]))
def test_enumeration_matches_brute_force(g, r):
    if g.n % r:
        with pytest.raises(PreconditionError):
            list(enumerate_tilings(g, r))
        return
    ts = list(enumerate_tilings(g, r))
    assert [t.blocks for t in ts] == brute_tilings(g, r)
    for t in ts:
        check_tiling(g, t, r)
    assert (find_tiling(g, r) is None) == (not ts)


@settings(max_examples=40, deadline=None)
@given(colored_graphs(min_n=6, max_n=9, max_q=3, density=0.9), st.integers(0, 1000))
def test_samples_are_valid_tilings(g, seed):
    if g.n % 3:
        return
    oracle = set(brute_tilings(g, 3))
    if not oracle:
        with pytest.raises(NoTilingError):
            sample_tilings(g, 3, 1, seed)
        return
    for t in sample_tilings(g, 3, 5, seed):
        assert t.blocks in oracle


def test_sampling_is_seeded():
    g = complete_graph(12, 2, 1)
    assert sample_tilings(g, 3, 10, 7) == sample_tilings(g, 3, 10, 7)
    assert sample_tilings(g, 3, 10, 7) != sample_tilings(g, 3, 10, 8)
    assert sample_tilings(g, 3, 0, 7) == []


def test_limit_and_canonical_order():
    g = complete_graph(6)
    ts = list(enumerate_tilings(g, 3))
    assert ts[0].blocks == ((0, 1, 2), (3, 4, 5))
    assert [t.blocks for t in ts] == sorted(t.blocks for t in ts)
    assert list(enumerate_tilings(g, 3, limit=3)) == ts[:3]
    assert list(enumerate_tilings(g, 3, limit=0)) == []


@pytest.mark.parametrize("n,r", [(6, 3), (9, 3), (12, 3), (8, 4), (12, 4), (15, 5)])
def test_tightness_graph_has_no_tiling(n, r):
    g, _ = tightness_example(n, r)
    assert find_tiling(g, r) is None


def test_balanced_multipartite_has_exactly_the_transversal_tilings():
    g, parts = complete_multipartite([3, 3, 3])
    assert count_tilings(g, 3) == 6 * 6  # two bijections between three parts of size 3


def test_check_tiling_rejects():
    g = build_graph(6, 1, [(u, v, 1) for u, v in combinations(range(6), 2) if (u, v) != (0, 1)])
    for bad in [Tiling(((0, 1, 2), (3, 4, 5))), Tiling(((0, 2, 3), (0, 4, 5))),
                Tiling(((0, 2, 3),)), Tiling(((0, 2), (1, 3, 4, 5)))]:
        with pytest.raises(PreconditionError):
            check_tiling(g, bad)
    check_tiling(g, Tiling(((0, 2, 3), (1, 4, 5))), 3)


def test_discrepancy_of_a_tiling():
    g = build_graph(6, 2, [(u, v, 1 if u < 3 and v < 3 else 2) for u, v in combinations(range(6), 2)])
    t = Tiling(((0, 1, 2), (3, 4, 5)))
    assert tiling_discrepancy(g, t) == 0
    assert tiling_discrepancy(g, Tiling(((0, 1, 3), (2, 4, 5)))) == 2 * 5 - 6  # one edge of color 1, five of color 2


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([(6, 3), (9, 3), (8, 4), (8, 2), (12, 3)]), st.data())
def test_minimize_crossing_is_the_exhaustive_minimum(nr, data):
    n, r = nr
    X = data.draw(st.sets(st.integers(0, n - 1)))
    t = minimize_crossing(n, r, X)
    check_tiling(complete_graph(n), t, r)
    if n <= 9:
        best = min(x_induced_edges(Tiling(b), X) for b in brute_tilings(complete_graph(n), r))
        assert x_induced_edges(t, X) == best
    # balanced loads: every block meets X in k or k+1 vertices
    loads = {len(set(b) & X) for b in t.blocks}
    assert max(loads) - min(loads) <= 1
    if r * len(X) > (r - 1) * n:
        assert induced_fraction(t, X) >= induced_fraction_bound(n, r, X)


def test_induced_fraction_bound_tight_at_n_minus_1():
    for n in (6, 9, 12):
        X = range(n - 1)
        assert induced_fraction(minimize_crossing(n, 3, X), X) == induced_fraction_bound(n, 3, X)
        assert induced_fraction_bound(n, 3, X) == Fraction(2 * (n - 1), n) - 1


def test_bound_precondition():
    with pytest.raises(PreconditionError):
        induced_fraction_bound(9, 3, range(6))
    with pytest.raises(PreconditionError):
        minimize_crossing(7, 3, [])
    with pytest.raises(PreconditionError):
        minimize_crossing(6, 3, [9])
