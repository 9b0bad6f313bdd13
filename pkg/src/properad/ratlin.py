"""Exact rational linear algebra.

Two layers share one elimination routine:

* ``RatMatrix`` is a small dense carrier with ``rank``, ``kernel_basis`` and
  ``orthogonal_complement`` for direct use and tests.
* ``Echelon`` keeps sparse rows (``dict`` column -> ``mpq``) in echelon form with
  the pivot at the smallest column.  It supports normal-form reduction, which is
  how quotients by ideals are computed, and incremental kernel extraction.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence

from gmpy2 import mpq

Vec = dict  # column -> mpq, no zero entries


def to_q(x) -> mpq:
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    return mpq(x)


def to_fraction(x) -> Fraction:
    q = mpq(x)
    return Fraction(int(q.numerator), int(q.denominator))


def clean(vec: Mapping) -> Vec:
    return {k: to_q(v) for k, v in vec.items() if v != 0}


def axpy(target: Vec, coef, src: Mapping) -> None:
    """target += coef * src, in place, dropping zeros."""
    if coef == 0:
        return
    for k, v in src.items():
        nv = target.get(k, 0) + coef * v
        if nv == 0:
            target.pop(k, None)
        else:
            target[k] = nv


class Echelon:
    """Sparse row echelon form over Q with optional tracked combinations.

    Columns must be mutually comparable (ints or tuples).  Each stored row is
    normalised so its smallest column has coefficient 1.
    """

    __slots__ = ("rows", "tags")

    def __init__(self) -> None:
        self.rows: dict[Hashable, Vec] = {}
        self.tags: dict[Hashable, Vec] = {}

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def pivots(self) -> set:
        return set(self.rows)

    def reduce(self, vec: Mapping, tag: Mapping | None = None) -> tuple[Vec, Vec | None]:
        """Fully reduce ``vec`` against the stored rows; returns (remainder, tag)."""
        v = dict(vec)
        t = dict(tag) if tag is not None else None
        if not self.rows or not v:
            return v, t
        heap = list(v)
        heapq.heapify(heap)
        seen = set()
        rows = self.rows
        while heap:
            c = heapq.heappop(heap)
            if c in seen:
                continue
            seen.add(c)
            coef = v.get(c)
            if coef is None:
                continue
            row = rows.get(c)
            if row is None:
                continue
            for k, x in row.items():
                nv = v.get(k, 0) - coef * x
                if nv == 0:
                    v.pop(k, None)
                else:
                    if k not in v and k not in seen:
                        heapq.heappush(heap, k)
                    v[k] = nv
            if t is not None:
                axpy(t, -coef, self.tags[c])
        return v, t

    def add(self, vec: Mapping, tag: Mapping | None = None) -> tuple[bool, Vec | None]:
        """Insert a row.  Returns (independent, tag); when dependent the tag
        is the tracked combination that reduced to zero."""
        v, t = self.reduce(vec, tag)
        if not v:
            return False, t
        piv = min(v)
        inv = 1 / v[piv]
        if inv != 1:
            v = {k: x * inv for k, x in v.items()}
            if t is not None:
                t = {k: x * inv for k, x in t.items()}
        self.rows[piv] = v
        if t is not None:
            self.tags[piv] = t
        return True, t

    def contains(self, vec: Mapping) -> bool:
        r, _ = self.reduce(vec)
        return not r


def span_echelon(vectors: Iterable[Mapping]) -> Echelon:
    e = Echelon()
    for v in vectors:
        e.add(v)
    return e


def sparse_rank(vectors: Iterable[Mapping]) -> int:
    return span_echelon(vectors).rank


def sparse_kernel(images: Sequence[Mapping]) -> list[Vec]:
    """Basis of {c : Σ c_i images[i] = 0}; vectors keyed by index i."""
    e = Echelon()
    out: list[Vec] = []
    for i, img in enumerate(images):
        ok, t = e.add(img, {i: mpq(1)})
        if not ok:
            out.append(t)
    return out


def sparse_kernel_and_rank(images: Sequence[Mapping]) -> tuple[list[Vec], int]:
    e = Echelon()
    out: list[Vec] = []
    for i, img in enumerate(images):
        ok, t = e.add(img, {i: mpq(1)})
        if not ok:
            out.append(t)
    return out, e.rank


@dataclass(frozen=True)
class RatMatrix:
    """Dense exact rational matrix."""

    nrows: int
    ncols: int
    entries: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], ncols: int | None = None) -> "RatMatrix":
        rows = [tuple(Fraction(x) for x in r) for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix rows")
        return cls(len(rows), ncols, tuple(rows))

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "RatMatrix":
        return cls(nrows, ncols, tuple((Fraction(0),) * ncols for _ in range(nrows)))

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls(n, n, tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)))

    def sparse_rows(self) -> list[Vec]:
        return [clean({j: x for j, x in enumerate(r)}) for r in self.entries]

    def sparse_cols(self) -> list[Vec]:
        return [clean({i: self.entries[i][j] for i in range(self.nrows)}) for j in range(self.ncols)]

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.ncols != other.nrows:
            raise ValueError("dimension mismatch")
        cols = list(zip(*other.entries)) if other.nrows else [()] * other.ncols
        return RatMatrix(self.nrows, other.ncols, tuple(
            tuple(sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in cols)
            for r in self.entries))

    def apply(self, v: Sequence) -> list[Fraction]:
        return [sum((a * Fraction(b) for a, b in zip(r, v)), Fraction(0)) for r in self.entries]

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.entries for x in r)


def rank(M: RatMatrix) -> int:
    return sparse_rank(M.sparse_rows())


def kernel_basis(M: RatMatrix) -> list[list[Fraction]]:
    """Basis of the right null space of M."""
    ker = sparse_kernel(M.sparse_cols())
    return [[to_fraction(v.get(j, 0)) for j in range(M.ncols)] for v in ker]


def orthogonal_complement(S: Iterable[Sequence], dim: int) -> list[list[Fraction]]:
    """Basis of {w : Σ_i w_i s_i = 0 for all s in S} under the coordinate pairing."""
    rows = [list(s) for s in S]
    if any(len(s) != dim for s in rows):
        raise ValueError("vector length differs from ambient dimension")
    return kernel_basis(RatMatrix.from_rows(rows, dim)) if rows else [
        [Fraction(int(i == j)) for j in range(dim)] for i in range(dim)]
