from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from properad.ratlin import (Echelon, RatMatrix, kernel_basis, orthogonal_complement, rank,
                             sparse_kernel, sparse_rank, to_fraction)

small = st.integers(-3, 3)
matrices = st.integers(1, 5).flatmap(lambda r: st.integers(1, 5).flatmap(
    lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)))


def test_rank_examples():
    assert rank(RatMatrix.from_rows([[1, 2], [2, 4]])) == 1
    assert rank(RatMatrix.identity(3)) == 3
    assert rank(RatMatrix.zeros(2, 3)) == 0


def test_orthogonal_complement_example():
    comp = orthogonal_complement([[1, 1, 0]], 3)
    assert len(comp) == 2
    for w in comp:
        assert w[0] + w[1] == 0
    with pytest.raises(ValueError):
        orthogonal_complement([[1, 2]], 3)


def test_echelon_reduce_tracks_combination():
    e = Echelon()
    e.add({0: 1, 1: 1}, {"a": 1})
    e.add({1: 1, 2: 1}, {"b": 1})
    rem, tag = e.reduce({0: 1, 2: -1}, {})
    assert rem == {}
    assert {k: to_fraction(v) for k, v in tag.items()} == {"a": -1, "b": 1}
    assert e.contains({0: 2, 1: 3, 2: 1})


@given(matrices)
def test_rank_nullity(rows):
    M = RatMatrix.from_rows(rows)
    ker = kernel_basis(M)
    assert rank(M) + len(ker) == M.ncols
    for v in ker:
        assert all(x == 0 for x in M.apply(v))


@given(matrices)
def test_rank_of_transpose(rows):
    M = RatMatrix.from_rows(rows)
    T = RatMatrix.from_rows([list(c) for c in zip(*M.entries)])
    assert rank(M) == rank(T)


@given(matrices)
def test_sparse_kernel_of_columns(rows):
    M = RatMatrix.from_rows(rows)
    cols = M.sparse_cols()
    ker = sparse_kernel(cols)
    assert len(ker) + sparse_rank(cols) == len(cols)
    for v in ker:
        acc = {}
        for j, c in v.items():
            for i, x in cols[j].items():
                acc[i] = acc.get(i, 0) + c * x
        assert all(x == 0 for x in acc.values())


def test_exactness_no_float_drift():
    M = RatMatrix.from_rows([[Fraction(1, 3), Fraction(1, 7)], [Fraction(2, 3), Fraction(2, 7)]])
    assert rank(M) == 1
