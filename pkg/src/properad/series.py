"""Truncated Poincaré series with the Psi functional, plus the functional equations built on them.

Coefficients are exact ``Fraction``s.  A three-variable series stores
c[m, n, d] (y^m x^n z^d) for 1 <= m <= M, 1 <= n <= N, 0 <= d <= D; reading
outside the box raises unless the series is flagged complete in that
direction (all coefficients beyond the box vanish, e.g. by an arity bound).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Mapping

from . import sbimod
from .barkoszul import koszul_dual_dim
from .quadratic import QuadraticPresentation, quotient_dim
from .symgroup import count_connected


class TruncationError(ValueError):
    """A coefficient outside the truncation box was requested."""


# ---------------------------------------------------------------- series types

@dataclass
class TruncatedSeries3:
    M: int
    N: int
    D: int
    coeffs: dict = field(default_factory=dict)
    complete_m: bool = False
    complete_n: bool = False

    def __post_init__(self) -> None:
        self.coeffs = {k: Fraction(c) for k, c in self.coeffs.items() if c != 0}
        for m, n, d in self.coeffs:
            if not (1 <= m <= self.M and 1 <= n <= self.N and 0 <= d <= self.D):
                raise TruncationError(f"coefficient ({m},{n},{d}) outside bounds")

    def __getitem__(self, key: tuple) -> Fraction:
        m, n, d = key
        if d < 0 or m < 1 or n < 1:
            return Fraction(0)
        if d > self.D or (m > self.M and not self.complete_m) or (n > self.N and not self.complete_n):
            raise TruncationError(f"coefficient ({m},{n},{d}) outside bounds {self.bounds}")
        return self.coeffs.get((m, n, d), Fraction(0))

    @property
    def bounds(self) -> tuple:
        return (self.M, self.N, self.D)

    def nonzero(self) -> list:
        return sorted(self.coeffs.items())

    def twist_z(self) -> "TruncatedSeries3":
        """z -> -z."""
        return TruncatedSeries3(self.M, self.N, self.D,
                                {k: c * (-1) ** k[2] for k, c in self.coeffs.items()},
                                self.complete_m, self.complete_n)

    def restrict(self, M: int, N: int, D: int) -> "TruncatedSeries3":
        if M > self.M or N > self.N or D > self.D:
            raise TruncationError("restriction must shrink the box")
        return TruncatedSeries3(M, N, D, {k: c for k, c in self.coeffs.items()
                                          if k[0] <= M and k[1] <= N and k[2] <= D})

    def to_json(self) -> dict:
        return {"bounds": list(self.bounds),
                "coefficients": [[m, n, d, str(c)] for (m, n, d), c in self.nonzero()]}


@dataclass
class TruncatedSeries1:
    D: int
    coeffs: list

    def __post_init__(self) -> None:
        if len(self.coeffs) != self.D + 1:
            raise TruncationError("coefficient list must have length D + 1")
        self.coeffs = [Fraction(c) for c in self.coeffs]

    def __getitem__(self, d: int) -> Fraction:
        if d < 0:
            return Fraction(0)
        if d > self.D:
            raise TruncationError(f"coefficient {d} beyond order {self.D}")
        return self.coeffs[d]

    def __mul__(self, other: "TruncatedSeries1") -> "TruncatedSeries1":
        D = min(self.D, other.D)
        return TruncatedSeries1(D, [sum(self[i] * other[d - i] for i in range(d + 1))
                                    for d in range(D + 1)])

    def to_json(self) -> list:
        return [str(c) for c in self.coeffs]


# ---------------------------------------------------------------- from presentations

def arity_support(pres: QuadraticPresentation, d: int) -> tuple[int, int]:
    """Largest (m, n) with a possibly nonzero weight-d cell (connected graphs)."""
    if d == 0:
        return (1, 1)
    if not pres.types:
        return (0, 0)
    mo = max(t.outs for t in pres.types)
    mi = max(t.ins for t in pres.types)
    return (d * (mo - 1) + 1, d * (mi - 1) + 1)


def _series(pres: QuadraticPresentation, D: int, dim: Callable, M: int | None,
            N: int | None, total: int | None) -> TruncatedSeries3:
    sup = [arity_support(pres, d) for d in range(D + 1)]
    fullM = max(s[0] for s in sup)
    fullN = max(s[1] for s in sup)
    M = fullM if M is None else M
    N = fullN if N is None else N
    coeffs = {}
    for d in range(D + 1):
        for m in range(1, min(M, sup[d][0]) + 1):
            for n in range(1, min(N, sup[d][1]) + 1):
                if total is not None and m + n > total:
                    continue
                if d >= 1 and m + n > sup[d][0] + sup[d][1]:
                    continue
                c = dim(pres, d, m, n)
                if c:
                    coeffs[(m, n, d)] = Fraction(c, math.factorial(m) * math.factorial(n))
    complete = total is None
    return TruncatedSeries3(M, N, D, coeffs, complete and M >= fullM, complete and N >= fullN)


def series_of(pres: QuadraticPresentation, D: int, M: int | None = None, N: int | None = None,
              total: int | None = None) -> TruncatedSeries3:
    """f_P: dim P_(d)(m, n) / (m! n!).  Default box = full arity support (complete)."""
    return _series(pres, D, quotient_dim, M, N, total)


def dual_series_of(pres: QuadraticPresentation, D: int, M: int | None = None,
                   N: int | None = None, total: int | None = None) -> TruncatedSeries3:
    """f_{P^i} from the kernel route."""
    return _series(pres, D, koszul_dual_dim, M, N, total)


def series_of_sbimodule(mod: sbimod.SBimodule, D: int) -> TruncatedSeries3:
    tab = mod.table()
    coeffs: dict = {}
    for (m, n, w, _deg), c in tab.items():
        if w <= D and c:
            k = (m, n, w)
            coeffs[k] = coeffs.get(k, 0) + Fraction(c, math.factorial(m) * math.factorial(n))
    M = max((k[0] for k in tab), default=1)
    N = max((k[1] for k in tab), default=1)
    return TruncatedSeries3(M, N, D, coeffs, True, True)


# ---------------------------------------------------------------- Psi

@lru_cache(maxsize=None)
def _connected(kbar: tuple, jbar: tuple) -> int:
    # the count only depends on the block multisets
    return count_connected(kbar, jbar)


def _levels(series: TruncatedSeries3, outer: int, dmax: int, outer_is_m: bool) -> list:
    """Ordered tuples of (outer arity, inner arity, weight, coefficient) whose outer
    arities sum to ``outer`` and weights to at most dmax."""
    if outer_is_m and not series.complete_n:
        raise TruncationError("top series must be complete in its input arity")
    if not outer_is_m and not series.complete_m:
        raise TruncationError("bottom series must be complete in its output arity")
    if dmax > series.D or (outer > series.M and not series.complete_m if outer_is_m
                           else outer > series.N and not series.complete_n):
        raise TruncationError("Psi output box exceeds the input series")
    items = []
    for (m, n, d), c in series.nonzero():
        o, i = (m, n) if outer_is_m else (n, m)
        if o <= outer and d <= dmax:
            items.append((o, i, d, c))
    out = []

    def rec(rest: int, wleft: int, acc: list) -> None:
        if rest == 0:
            out.append(tuple(acc))
            return
        for it in items:
            if it[0] <= rest and it[2] <= wleft:
                acc.append(it)
                rec(rest - it[0], wleft - it[2], acc)
                acc.pop()
    rec(outer, dmax, [])
    return out


def psi_coefficient(g: TruncatedSeries3, f: TruncatedSeries3, m: int, n: int, d: int,
                    literal: bool = False, top_weight: int | None = None) -> Fraction:
    """Coefficient of y^m x^n z^d in Psi(g, f); g is the top level, f the bottom.

    ``literal`` drops the 1/(b! a!) factor for reordering the b top and a bottom
    vertices, which the composite count needs when profiles are ordered tuples.
    ``top_weight`` keeps only terms whose top level has that total weight.
    """
    tops = _levels(g, m, d, True)
    bottoms: dict = {}
    for bot in _levels(f, n, d, False):
        bottoms.setdefault((sum(x[1] for x in bot), sum(x[2] for x in bot)), []).append(bot)
    total = Fraction(0)
    for top in tops:
        N = sum(x[1] for x in top)
        wt = sum(x[2] for x in top)
        if top_weight is not None and wt != top_weight:
            continue
        ct = math.prod((x[3] for x in top), start=Fraction(1))
        kbar = tuple(sorted(x[1] for x in top))
        for bot in bottoms.get((N, d - wt), ()):
            jbar = tuple(sorted(x[1] for x in bot))
            c = _connected(kbar, jbar)
            if not c:
                continue
            term = c * ct * math.prod((x[3] for x in bot), start=Fraction(1))
            if not literal:
                term /= math.factorial(len(top)) * math.factorial(len(bot))
            total += term
    return total


def psi(g: TruncatedSeries3, f: TruncatedSeries3, M: int, N: int, D: int,
        total: int | None = None, literal: bool = False) -> TruncatedSeries3:
    coeffs = {}
    for m in range(1, M + 1):
        for n in range(1, N + 1):
            if total is not None and m + n > total:
                continue
            for d in range(D + 1):
                c = psi_coefficient(g, f, m, n, d, literal)
                if c:
                    coeffs[(m, n, d)] = c
    return TruncatedSeries3(M, N, D, coeffs)


# ---------------------------------------------------------------- Koszul equation

def _residual_report(lhs: TruncatedSeries3, target: Mapping, M: int, N: int, D: int,
                     total: int | None) -> dict:
    cells = []
    worst = Fraction(0)
    for m in range(1, M + 1):
        for n in range(1, N + 1):
            if total is not None and m + n > total:
                continue
            for d in range(D + 1):
                r = lhs.coeffs.get((m, n, d), Fraction(0)) - target.get((m, n, d), Fraction(0))
                if r:
                    cells.append({"m": m, "n": n, "d": d, "residual": str(r)})
                    worst = max(worst, abs(r))
    return {"deviation": str(worst), "ok": worst == 0, "cells": cells}


def verify_koszul_equation(pres: QuadraticPresentation, total: int = 5, D: int = 3,
                           literal: bool = False,
                           dual_pres: QuadraticPresentation | None = None) -> dict:
    """Psi(f_{P^i}(y, X, -z), f_P(Y, x, z)) - xy on m + n <= total, d <= D.

    ``dual_pres`` takes P^i from another presentation (negative controls).
    """
    M = N = total - 1
    g = dual_series_of(dual_pres or pres, D).twist_z()
    f = series_of(pres, D)
    lhs = psi(g, f, M, N, D, total, literal)
    rep = _residual_report(lhs, {(1, 1, 0): Fraction(1)}, M, N, D, total)
    rep.update({"preset": pres.name, "bounds": {"m+n": total, "d": D}, "literal": literal})
    return rep


# ---------------------------------------------------------------- algebras and operads

def _check_algebra(pres: QuadraticPresentation) -> None:
    if any((t.outs, t.ins) != (1, 1) for t in pres.types):
        raise ValueError(f"{pres.name} is not concentrated in arity (1, 1)")


def algebra_series(pres: QuadraticPresentation, D: int) -> tuple[TruncatedSeries1, TruncatedSeries1]:
    _check_algebra(pres)
    fa = TruncatedSeries1(D, [quotient_dim(pres, d, 1, 1) for d in range(D + 1)])
    fi = TruncatedSeries1(D, [koszul_dual_dim(pres, d, 1, 1) for d in range(D + 1)])
    return fa, fi


def algebra_equation(pres: QuadraticPresentation, D: int = 8) -> dict:
    """f_A(x) f_{A^i}(-x) = 1 to order D."""
    fa, fi = algebra_series(pres, D)
    neg = TruncatedSeries1(D, [c * (-1) ** d for d, c in enumerate(fi.coeffs)])
    prod = fa * neg
    target = [1] + [0] * D
    bad = [d for d in range(D + 1) if prod[d] != target[d]]
    return {"preset": pres.name, "order": D, "f_A": fa.to_json(), "f_Ai": fi.to_json(),
            "product": prod.to_json(), "ok": not bad, "bad_orders": bad}


def _check_operad(pres: QuadraticPresentation) -> None:
    if any(t.outs != 1 or t.ins < 2 for t in pres.types):
        raise ValueError(f"{pres.name} is not an operad with generators of arity >= 2")


# two-variable series in x (order <= X) and z: dict (n, d) -> Fraction

def _mul2(a: Mapping, b: Mapping, X: int) -> dict:
    out: dict = {}
    for (n1, d1), c1 in a.items():
        for (n2, d2), c2 in b.items():
            if n1 + n2 <= X:
                k = (n1 + n2, d1 + d2)
                out[k] = out.get(k, 0) + c1 * c2
    return {k: c for k, c in out.items() if c}


def operad_series(pres: QuadraticPresentation, X: int, dual: bool) -> dict:
    _check_operad(pres)
    dim = koszul_dual_dim if dual else quotient_dim
    out = {}
    for n in range(1, X + 1):
        for d in range(n):  # weight d needs at least d + 1 leaves
            c = dim(pres, d, 1, n)
            if c:
                out[(n, d)] = Fraction(c, math.factorial(n))
    return out


def compose_operad_series(outer: Mapping, inner: Mapping, X: int, outer_z_sign: int = 1) -> dict:
    """outer(inner(x, z), s z) to x-order X; inner has no constant term in x."""
    if any(n < 1 for n, _ in inner):
        raise ValueError("inner series must vanish at x = 0")
    result: dict = {}
    power = {(0, 0): Fraction(1)}
    for k in range(1, X + 1):
        power = _mul2(power, inner, X)
        for (n, d), c in outer.items():
            if n == k:
                for (pn, pd), pc in power.items():
                    key = (pn, pd + d)
                    result[key] = result.get(key, 0) + c * pc * outer_z_sign ** d
    return {k: c for k, c in result.items() if c}


def operad_equation(pres: QuadraticPresentation, X: int = 6) -> dict:
    """f_{P^i}(f_P(x, z), -z) = x to x-order X."""
    fp = operad_series(pres, X, dual=False)
    fi = operad_series(pres, X, dual=True)
    comp = compose_operad_series(fi, fp, X, -1)
    residual = dict(comp)
    residual[(1, 0)] = residual.get((1, 0), 0) - 1
    residual = {k: c for k, c in residual.items() if c}
    return {"preset": pres.name, "order": X,
            "f_P": {f"{n},{d}": str(c) for (n, d), c in sorted(fp.items())},
            "f_Pi": {f"{n},{d}": str(c) for (n, d), c in sorted(fi.items())},
            "residual": {f"{n},{d}": str(c) for (n, d), c in sorted(residual.items())},
            "ok": not residual}


# ---------------------------------------------------------------- associahedra

def free_operad_counts(cap: int, X: int) -> dict:
    """dim F(V)_(d)(n) / n! for V(k) = k[S_k], 2 <= k <= cap, n <= X.

    An element is a root corolla of arity k with k subtrees; since V(k) is
    free, V(k) ⊗_{S_k} F^{⊗k}(n) has dimension dim F^{⊗k}(n), where
    F^{⊗k}(n) sums n!/(n_1!...n_k!) prod dim F(n_i) over ordered splits.
    """
    dims: dict = {(1, 0): 1}
    for n in range(2, X + 1):
        # tensor powers over leaf counts < n
        for k in range(2, min(cap, n) + 1):
            for split in _compositions(n, k):
                for ws in itertools.product(*[[d for (nn, d) in dims if nn == p] for p in split]):
                    c = math.factorial(n)
                    for p, w in zip(split, ws):
                        c = c * dims[(p, w)] // math.factorial(p)
                    key = (n, 1 + sum(ws))
                    dims[key] = dims.get(key, 0) + c
    return {k: Fraction(v, math.factorial(k[0])) for k, v in dims.items()}


def _compositions(n: int, k: int):
    if k == 1:
        yield (n,)
        return
    for first in range(1, n - k + 2):
        for rest in _compositions(n - first, k - 1):
            yield (first,) + rest


def planar_tree_counts(leaves: int) -> dict:
    """Oracle: explicit enumeration of planar trees (internal vertices of arity >= 2)
    with the given number of leaves; returns {vertex count: number of trees}."""
    @lru_cache(maxsize=None)
    def trees(n: int) -> tuple:
        if n == 1:
            return ("|",)
        out = []
        for k in range(2, n + 1):
            for split in _compositions(n, k):
                for kids in itertools.product(*[trees(p) for p in split]):
                    out.append(kids)
        return tuple(out)

    def verts(t) -> int:
        return 0 if t == "|" else 1 + sum(verts(c) for c in t)

    counts: dict = {}
    for t in trees(leaves):
        v = verts(t)
        counts[v] = counts.get(v, 0) + 1
    return counts


def _poly_mul(a: list, b: list) -> list:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _poly_add(a: list, b: list, s: int = 1) -> list:
    out = [Fraction(0)] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] += x
    for i, y in enumerate(b):
        out[i] += s * y
    return out


def _poly_div_exact(a: list, b: list) -> list:
    a = list(a)
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    q = [Fraction(0)] * max(1, len(a) - len(b) + 1)
    for i in range(len(a) - len(b), -1, -1):
        q[i] = a[i + len(b) - 1] / b[-1]
        for j, y in enumerate(b):
            a[i + j] -= q[i] * y
    if any(a):
        raise ArithmeticError("polynomial division is not exact")
    return q


def _trim(p: list) -> list:
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def closed_form_fK(order: int, sign: int = -1) -> list:
    """Coefficients (polynomials in z) of x^0..x^order of

        (1 - (2+z)x + sign * sqrt(1 - 2(2+z)x + z^2 x^2)) / (2 (1+z) x^2).

    sign = -1 is the power-series root; the other sign leaves a pole and raises.
    """
    X = order + 2
    u = {1: [Fraction(-4), Fraction(-2)], 2: [Fraction(0), Fraction(0), Fraction(1)]}
    # sqrt(1 + u) = sum binom(1/2, k) u^k, u = O(x)
    sq = [[Fraction(0)] for _ in range(X + 1)]
    sq[0] = [Fraction(1)]
    upow = [[Fraction(1)]] + [[Fraction(0)] for _ in range(X)]
    binom = Fraction(1)
    for k in range(1, X + 1):
        new = [[Fraction(0)] for _ in range(X + 1)]
        for i, p in enumerate(upow):
            for j, q in u.items():
                if i + j <= X:
                    new[i + j] = _poly_add(new[i + j], _poly_mul(p, q))
        upow = new
        binom = binom * (Fraction(1, 2) - (k - 1)) / k
        for i in range(X + 1):
            sq[i] = _poly_add(sq[i], [binom * c for c in upow[i]])
    num = [[Fraction(0)] for _ in range(X + 1)]
    num[0] = [Fraction(1)]
    num[1] = [Fraction(-2), Fraction(-1)]
    for i in range(X + 1):
        num[i] = _poly_add(num[i], sq[i], sign)
    if _trim(num[0]) != [0] or _trim(num[1]) != [0]:
        raise ArithmeticError("numerator does not vanish to order x^2: not a power series")
    return [_trim(_poly_div_exact(num[i + 2], [Fraction(2), Fraction(2)])) for i in range(order + 1)]


def associahedra(D: int = 8) -> dict:
    """Free operad with one regular n-ary generator per n >= 2 (arity cap D + 2).

    Checks (z+1) f^2 - (1+x) f + x = 0 to x^D, extracts P_n(z) for n <= D - 2
    (cells of the n-dimensional associahedron), and compares with planar-tree
    enumeration and the closed form of f_K.
    """
    if not 1 <= D <= 10:
        raise ValueError("associahedra order must be in 1..10")
    cap = D + 2
    f = free_operad_counts(cap, D)
    # the dual is k ⊕ V: x + z sum_{n>=2} x^n; composition check
    fi = {(1, 0): Fraction(1)}
    fi.update({(n, 1): Fraction(1) for n in range(2, D + 1)})
    comp = compose_operad_series(fi, f, D, -1)
    comp[(1, 0)] = comp.get((1, 0), 0) - 1
    operad_residual = {k: c for k, c in comp.items() if c}
    # (z+1) f^2 - (1+x) f + x
    f2 = _mul2(f, f, D)
    rel: dict = {}
    for (n, d), c in f2.items():
        for dz in (0, 1):
            rel[(n, d + dz)] = rel.get((n, d + dz), 0) + c
    for (n, d), c in f.items():
        rel[(n, d)] = rel.get((n, d), 0) - c
        if n + 1 <= D:
            rel[(n + 1, d)] = rel.get((n + 1, d), 0) - c
    rel[(1, 0)] = rel.get((1, 0), 0) + 1
    relation_residual = {k: c for k, c in rel.items() if c}
    # f_P = x + z x^2 f_K(xz, 1/z): coefficient of x^{n+2} z^{n+1-k} is #cells_k^n
    polys = {}
    for n in range(0, D - 1):
        p = [Fraction(0)] * (n + 2)
        for (nn, d), c in f.items():
            if nn == n + 2:
                p[n + 1 - d] += c
        polys[n] = _trim(p)
    oracle = {}
    for n in range(0, min(D - 2, 5) + 1):
        cnt = planar_tree_counts(n + 2)
        p = [Fraction(0)] * (n + 2)
        for v, c in cnt.items():
            p[n + 1 - v] += c
        oracle[n] = _trim(p)
    # f_K(x, z) = sum_n P_n(z) x^n
    fk = closed_form_fK(D - 2)
    closed_ok = all(_trim(fk[n]) == polys[n] for n in range(D - 1))
    try:
        closed_form_fK(D - 2, sign=+1)
        printed_sign_ok = True
    except ArithmeticError:
        printed_sign_ok = False
    oracle_ok = all(oracle[n] == polys[n] for n in oracle)
    return {"order": D,
            "P": {n: [int(c) for c in p] for n, p in polys.items()},
            "relation_residual": {f"{n},{d}": str(c) for (n, d), c in sorted(relation_residual.items())},
            "operad_residual": {f"{n},{d}": str(c) for (n, d), c in sorted(operad_residual.items())},
            "oracle_ok": oracle_ok, "closed_form_ok": closed_ok,
            "plus_sign_closed_form_is_series": printed_sign_ok,
            "ok": not relation_residual and not operad_residual and oracle_ok and closed_ok}


# ---------------------------------------------------------------- Psi oracle

def psi_vs_compose(Q: sbimod.SBimodule, P: sbimod.SBimodule, max_total: int, D: int,
                   literal: bool = False) -> dict:
    """Compare Psi(f_Q, f_P) with dims of Q ⊠_c P / (m! n!) on m + n <= max_total."""
    g = series_of_sbimodule(Q, D)
    f = series_of_sbimodule(P, D)
    cells = []
    for m in range(1, max_total):
        for n in range(1, max_total - m + 1):
            true = {}
            for (w, _deg), keys in sbimod.compose_connected_table(Q, P, m, n).items():
                if w <= D:
                    true[w] = true.get(w, 0) + len(keys)
            for d in range(D + 1):
                want = Fraction(true.get(d, 0), math.factorial(m) * math.factorial(n))
                got = psi_coefficient(g, f, m, n, d, literal)
                if got != want:
                    cells.append({"m": m, "n": n, "d": d, "psi": str(got), "compose": str(want)})
    return {"ok": not cells, "mismatches": cells}
