from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from klcube.decomp import canonical_L
from klcube.graph import SymmetricGroup, build_interval
from klcube.hypercube import (
    EHypercube,
    count_embeddings,
    greedy_decreasing,
    maximal_edges,
    spans_cluster,
    spans_hypercube,
    theta,
    theta_corner_rank,
    theta_explicit,
)
from klcube.perm import Permutation, bruhat_leq, compose, identity, longest, transposition

P = Permutation.parse
S3 = {"id": "012", "s": "102", "t": "021", "st": "120", "ts": "201", "sts": "210"}


@pytest.fixture(scope="module")
def s3():
    return build_interval(identity(3), longest(3))


def v(g, name):
    return g.index(P(S3[name]))


def subsets(xs):
    xs = list(xs)
    for k in range(len(xs) + 1):
        yield from combinations(xs, k)


def test_e_hypercube():
    h = EHypercube(("a", "b", "c"))
    assert h.dimension == 3
    assert len(h.vertices()) == 8 and len(h.edges()) == 12
    assert h.subset(0b101) == {"a", "c"}


# -- spanning


def test_single_edge_spans(s3):
    emb = spans_hypercube(s3, v(s3, "id"), [(v(s3, "s"), v(s3, "id"))])
    assert emb is not None
    assert emb.assignment == {0: v(s3, "id"), 1: v(s3, "s")}
    assert emb.crown == v(s3, "s")


def test_red_pair_does_not_span(s3):
    base = v(s3, "id")
    red = [(v(s3, "s"), base), (v(s3, "t"), base)]
    assert spans_hypercube(s3, base, red) is None
    assert count_embeddings(s3, base, red) == 2
    assert not spans_cluster(s3, base, red)


def test_blue_pair_spans(s3):
    base = v(s3, "s")
    blue = [(v(s3, "st"), base), (v(s3, "ts"), base)]
    emb = spans_hypercube(s3, base, blue)
    assert emb is not None and emb.crown == v(s3, "sts")
    assert emb.image([blue[0]]) == v(s3, "st")
    assert spans_cluster(s3, base, blue)


def test_cluster_with_comparable_sources(s3):
    base = v(s3, "id")
    chain = [(v(s3, "s"), base), (v(s3, "sts"), base)]
    assert spans_cluster(s3, base, chain)
    assert spans_cluster(s3, base, [])


def test_edge_validation(s3):
    base = v(s3, "id")
    with pytest.raises(ValueError):
        spans_hypercube(s3, base, [(v(s3, "st"), base)])  # not an edge
    with pytest.raises(ValueError):
        spans_hypercube(s3, base, [(v(s3, "st"), v(s3, "s"))])  # wrong base
    with pytest.raises(ValueError):
        spans_hypercube(s3, base, [(v(s3, "s"), base), (v(s3, "s"), base)])


def test_maximal_edges(s3):
    base = v(s3, "id")
    chain = [(v(s3, "s"), base), (v(s3, "sts"), base)]
    assert maximal_edges(s3, chain) == [chain[1]]
    anti = [(v(s3, "s"), base), (v(s3, "t"), base)]
    assert maximal_edges(s3, anti) == anti
    mixed = [(v(s3, "s"), 0), (v(s3, "st"), 0)]
    assert maximal_edges(s3, mixed) == [mixed[1]]


def test_theta_basics(s3):
    base = v(s3, "id")
    E = [(v(s3, "s"), base), (v(s3, "sts"), base)]
    assert theta(s3, base, E, []) == base
    assert theta(s3, base, E, E[:1]) == v(s3, "s")
    assert theta(s3, base, E, E) == v(s3, "sts")
    with pytest.raises(ValueError):
        theta(s3, base, E[:1], E)


def test_theta_on_crown4():
    g = build_interval(P("0213"), P("2301"))
    D = canonical_L(g)
    E = [(u, g.bottom) for u in D.base_sources]
    assert len(E) == 2
    crowns = {theta(g, g.bottom, E, F) for F in subsets(E) if F}
    # the two singletons and one crown vertex of the square they span
    assert len(crowns) == 3
    top = theta(g, g.bottom, E, E)
    assert g.levels[top] == 2


# -- explicit descriptions


def test_greedy_decreasing():
    assert greedy_decreasing((0, 1, 2, 3), {1, 2, 3}) == (3,)
    assert greedy_decreasing((0, 3, 2, 1), {1, 2, 3}) == (3, 2, 1)
    assert greedy_decreasing((0, 3, 2, 1), set()) == ()
    assert greedy_decreasing((1, 0, 4, 2, 3), {2, 3, 4}) == (4, 3)
    with pytest.raises(ValueError):
        greedy_decreasing((1, 0, 2), {1})  # 1 is left of 0


@pytest.mark.parametrize(
    "x, I, expected",
    [
        ("0123", {3}, "3120"),
        ("0321", {3}, "3021"),
        ("0321", {1, 2, 3}, "3210"),
        ("0123", set(), "0123"),
    ],
)
def test_theta_explicit(x, I, expected):
    assert theta_explicit(P(x), I) == P(expected)


@pytest.mark.parametrize(
    "x, I, expected",
    [("0123", {1, 2, 3}, "3120"), ("0321", {1, 2, 3}, "3210"), ("2013", set(), "2013")],
)
def test_theta_corner_rank(x, I, expected):
    assert theta_corner_rank(P(x), I) == P(expected)


def test_identity_base_law():
    for n in range(2, 7):
        x = identity(n)
        for I in subsets(range(1, n)):
            if I:
                want = compose(transposition(n, 0, max(I)), x)
                assert theta_explicit(x, I) == want == theta_corner_rank(x, I)


def test_reverse_base_is_injective():
    for n in range(2, 7):
        x = Permutation((0,) + tuple(range(n - 1, 0, -1)))
        images = {theta_explicit(x, I) for I in subsets(range(1, n))}
        assert len(images) == 2 ** (n - 1)


def _random_x(n, rnd):
    p = list(range(n))
    rnd.shuffle(p)
    return Permutation(p)


@settings(max_examples=200)
@given(st.integers(3, 7), st.randoms(use_true_random=False))
def test_singletons_order(n, rnd):
    x = _random_x(n, rnd)
    m = x.index(0)
    right = list(x[m + 1:])
    for a, b in combinations(right, 2):  # a left of b
        ta, tb = theta_explicit(x, {a}), theta_explicit(x, {b})
        if a > b:
            assert not bruhat_leq(ta, tb) and not bruhat_leq(tb, ta)
        else:
            assert bruhat_leq(ta, tb) and ta != tb


@settings(max_examples=100, deadline=None)
@given(st.integers(3, 6), st.randoms(use_true_random=False))
def test_decreasing_sets_map_hypercubes(n, rnd):
    x = _random_x(n, rnd)
    m = x.index(0)
    right = list(x[m + 1:])
    if not right:
        return
    I = set(rnd.sample(right, rnd.randint(1, len(right))))
    dec = greedy_decreasing(x, I)
    top = theta_explicit(x, dec)
    g = build_interval(x, top)
    base = g.index(x)
    edges = [(g.index(theta_explicit(x, {i})), base) for i in dec]
    emb = spans_hypercube(g, base, edges)
    assert emb is not None
    for sub in subsets(range(len(dec))):
        mask = sum(1 << k for k in sub)
        assert g.labels[emb.assignment[mask]] == theta_explicit(x, {dec[k] for k in sub})


@settings(max_examples=200)
@given(st.integers(2, 8), st.randoms(use_true_random=False))
def test_explicit_and_corner_rank_agree(n, rnd):
    x = _random_x(n, rnd)
    m = x.index(0)
    right = list(x[m + 1:])
    I = {i for i in right if rnd.random() < 0.5}
    assert theta_explicit(x, I) == theta_corner_rank(x, I)


def test_triple_agreement_s4():
    G = SymmetricGroup(4)
    checked = 0
    for yi in range(len(G)):
        for xi in range(yi):
            if not G.leq(xi, yi):
                continue
            g = G.interval(xi, yi)
            D = canonical_L(g)
            if D.degenerate:
                continue
            x = g.labels[g.bottom]
            m = x.index(0)
            E = [(u, g.bottom) for u in D.base_sources]
            for F in subsets(E):
                values = {g.labels[u][m] for u, _ in F}
                a = g.labels[theta(g, g.bottom, E, F)]
                assert a == theta_explicit(x, values) == theta_corner_rank(x, values)
                checked += 1
    assert checked > 200
