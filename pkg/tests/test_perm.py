import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from klcube.perm import (
    MAX_SIZE,
    Permutation,
    all_permutations,
    bruhat_leq,
    compose,
    corner_rank_matrix,
    identity,
    inverse,
    left_descents,
    length,
    longest,
    pattern_restriction,
    transposition,
    upper_transpositions,
)

import oracles


def perms(max_size=7):
    return st.integers(1, max_size).flatmap(lambda n: st.permutations(list(range(n)))).map(Permutation)


def same_size_pairs(max_size=6):
    def pair(n):
        p = st.permutations(list(range(n))).map(Permutation)
        return st.tuples(p, p)

    return st.integers(1, max_size).flatmap(pair)


# -- construction and parsing


def test_parse_forms():
    assert Permutation.parse("2031") == (2, 0, 3, 1)
    assert Permutation.parse("2,0,3,1") == (2, 0, 3, 1)
    assert Permutation.parse("(2, 0, 3, 1)") == (2, 0, 3, 1)
    assert str(Permutation((2, 0, 3, 1))) == "2031"


def test_large_windows_print_with_commas():
    p = Permutation(range(12))
    assert str(p) == ",".join(map(str, range(12)))
    assert Permutation.parse(str(p)) == p


@pytest.mark.parametrize("bad", ["0023", "123", "", "0,1,x", "(0,1"])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        Permutation.parse(bad)


def test_size_limit():
    Permutation(range(MAX_SIZE))
    with pytest.raises(ValueError):
        Permutation(range(MAX_SIZE + 1))


def test_pickle_roundtrip():
    import pickle

    p = Permutation.parse("3021")
    q = pickle.loads(pickle.dumps(p))
    assert q == p and isinstance(q, Permutation)


# -- group operations


def test_compose_examples():
    p = Permutation.parse("2031")
    assert compose(identity(4), p) == p
    assert compose((1, 0, 2), (0, 2, 1)) == (1, 2, 0)
    assert compose(p, inverse(p)) == identity(4)


def test_compose_size_mismatch():
    with pytest.raises(ValueError):
        compose((0, 1), (0, 1, 2))


def test_left_transposition_swaps_values():
    x = Permutation.parse("0213")
    assert compose(transposition(4, 0, 2), x) == Permutation.parse("2013")


@given(same_size_pairs())
def test_inverse_of_product(ab):
    a, b = ab
    assert inverse(compose(a, b)) == compose(inverse(b), inverse(a))


@pytest.mark.parametrize("p, expected", [("0123", 0), ("2031", 3), ("3210", 6)])
def test_length_examples(p, expected):
    assert length(Permutation.parse(p)) == expected


@given(perms(9))
def test_length_counts_inversions(p):
    assert length(p) == oracles.inversions(p)
    assert length(inverse(p)) == length(p)


def test_longest_length():
    for n in range(1, 8):
        assert length(longest(n)) == n * (n - 1) // 2


# -- corner ranks


def test_corner_rank_displays():
    assert corner_rank_matrix((1, 2, 3, 0)) == (
        (1, 2, 3, 4),
        (1, 2, 3, 3),
        (0, 1, 2, 2),
        (0, 0, 1, 1),
    )
    assert corner_rank_matrix((2, 3, 0, 1)) == (
        (1, 2, 3, 4),
        (1, 2, 2, 3),
        (1, 2, 2, 2),
        (0, 1, 1, 1),
    )
    assert corner_rank_matrix((0, 1)) == ((1, 2), (0, 1))


@settings(max_examples=200)
@given(st.integers(1, 10).flatmap(lambda n: st.permutations(list(range(n)))))
def test_corner_rank_shape(p):
    m = corner_rank_matrix(p)
    n = len(p)
    assert m[0][n - 1] == n
    for r in range(n):
        for c in range(n):
            if c:
                assert m[r][c] - m[r][c - 1] in (0, 1)
            if r:
                assert m[r - 1][c] - m[r][c] in (0, 1)


# -- Bruhat order


def test_bruhat_examples():
    assert bruhat_leq(Permutation.parse("0213"), Permutation.parse("2301"))
    p = Permutation.parse("3102")
    assert bruhat_leq(p, p)
    assert not bruhat_leq((1, 0, 2), (0, 2, 1))


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_bruhat_matches_downward_paths(n):
    group = oracles.group(n)
    for v in group:
        below = oracles.lower_set(v)
        for u in group:
            assert bruhat_leq(u, v) == (u in below)


@given(same_size_pairs(7))
def test_bruhat_antisymmetric_and_graded(uv):
    u, v = uv
    if bruhat_leq(u, v) and u != v:
        assert length(u) < length(v)
        assert not bruhat_leq(v, u)


@settings(max_examples=300)
@given(st.integers(2, 7), st.randoms(use_true_random=False))
def test_subword_condition(n, rnd):
    # u and v agree off D, so Bruhat comparison reduces to the patterns on D
    u = list(range(n))
    rnd.shuffle(u)
    k = rnd.randint(1, n)
    d = sorted(rnd.sample(range(n), k))
    vals = [u[i] for i in d]
    rnd.shuffle(vals)
    v = list(u)
    for i, val in zip(d, vals):
        v[i] = val
    assert bruhat_leq(u, v) == bruhat_leq(pattern_restriction(u, d), pattern_restriction(v, d))


def test_bruhat_size_mismatch():
    with pytest.raises(ValueError):
        bruhat_leq((0, 1), (0, 1, 2))


# -- patterns and transpositions


def test_pattern_restriction_examples():
    assert pattern_restriction((2, 0, 3, 1), [0, 2]) == (0, 1)
    assert pattern_restriction((0, 3, 2, 1), [1, 3]) == (1, 0)
    u = Permutation.parse("31420")
    assert pattern_restriction(u, range(5)) == u
    with pytest.raises(ValueError):
        pattern_restriction(u, [])
    with pytest.raises(ValueError):
        pattern_restriction(u, [0, 5])


def test_upper_transpositions():
    assert upper_transpositions(identity(3)) == {(0, 1), (0, 2), (1, 2)}
    assert upper_transpositions(longest(4)) == set()
    x = Permutation.parse("0213")
    brute = {
        (i, j)
        for i in range(4)
        for j in range(i + 1, 4)
        if length(compose(transposition(4, i, j), x)) > length(x)
    }
    assert upper_transpositions(x) == brute
    assert (0, 2) in brute


def test_left_descents():
    for p in all_permutations(4):
        brute = [i for i in range(3) if length(compose(transposition(4, i, i + 1), p)) < length(p)]
        assert left_descents(p) == brute


def test_all_permutations_order():
    ps = all_permutations(4)
    assert len(ps) == 24
    assert ps[0] == identity(4) and ps[-1] == longest(4)
    assert [length(p) for p in ps] == sorted(length(p) for p in ps)
