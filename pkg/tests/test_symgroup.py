import itertools
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from properad.symgroup import (Permutation, all_permutations, block_permutation, compose,
                               count_connected, enumerate_connected, is_connected,
                               permutation_sign)


def perms(n):
    return st.permutations(range(1, n + 1)).map(lambda p: Permutation(tuple(p)))


def profiles(total):
    # random composition of total
    return st.lists(st.booleans(), min_size=total - 1, max_size=total - 1).map(
        lambda cuts: tuple(len(b) for b in "".join("x|" if c else "x" for c in cuts + [False])
                           .split("|")))


def test_parse_and_text():
    p = Permutation.parse("(1 3 2 4)")
    assert p.images == (1, 3, 2, 4)
    assert Permutation.parse("(1324)") == p
    assert str(p) == "(1 3 2 4)"


def test_compose_by_evaluation():
    p = Permutation.parse("(1 3 2 4)")
    q = compose(p, p)
    assert all(q(s) == p(p(s)) for s in range(1, 5))
    assert q == Permutation.identity(4)
    with pytest.raises(ValueError):
        compose(p, Permutation.identity(3))


def test_block_permutation_example():
    assert block_permutation(Permutation((2, 1)), (1, 2)).images == (2, 3, 1)


def test_connected_examples():
    s = Permutation.parse("(1 3 2 4)")
    assert is_connected(s, (2, 2), (2, 2))
    assert not is_connected(s, (1, 1, 2), (2, 1, 1))
    assert s in enumerate_connected((2, 2), (2, 2))


def test_count_matches_brute_force():
    for k in [(2, 2), (1, 3), (2, 1, 1), (4,)]:
        for j in [(2, 2), (1, 1, 2), (4,), (3, 1)]:
            brute = sum(1 for p in all_permutations(4) if is_connected(p, k, j))
            assert count_connected(k, j) == brute == len(enumerate_connected(k, j))


@pytest.mark.parametrize("N", range(1, 6))
def test_single_block_all_connected(N):
    for j in itertools.product(range(1, N + 1), repeat=N):
        for r in range(1, N + 1):
            jb = j[:r]
            if sum(jb) == N:
                assert count_connected((N,), jb) == math.factorial(N)


def test_profile_errors():
    with pytest.raises(ValueError):
        count_connected((2,), (1,))
    with pytest.raises(ValueError):
        is_connected(Permutation.identity(2), (0, 2), (2,))


@given(perms(5), perms(5))
def test_sign_is_multiplicative(p, q):
    assert compose(p, q).sign() == p.sign() * q.sign()
    assert permutation_sign(p.images) == p.sign()


@given(perms(4))
def test_inverse(p):
    assert compose(p, p.inverse()) == Permutation.identity(4)


@given(perms(5), profiles(5), profiles(5))
def test_connectivity_symmetric_under_inverse(p, k, j):
    assert is_connected(p, k, j) == is_connected(p.inverse(), j, k)


@given(profiles(5), profiles(5))
def test_count_depends_on_block_multisets(k, j):
    assert count_connected(k, j) == count_connected(tuple(sorted(k)), tuple(sorted(j)[::-1]))
