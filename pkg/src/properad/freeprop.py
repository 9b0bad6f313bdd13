"""Free properads: graph bases and substitution, plus the admissible-cut coproduct."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from . import graphcore as gc
from .graphcore import Graph, VertexType

Combo = dict  # canonical key -> Fraction


def add_into(target: dict, key, coef) -> None:
    if coef == 0:
        return
    v = target.get(key, 0) + coef
    if v == 0:
        target.pop(key, None)
    else:
        target[key] = v


def canonical_combo(terms: Iterable[tuple[Graph, object]]) -> Combo:
    """Sum of coef * graph, expressed on canonical keys (zero classes dropped)."""
    out: Combo = {}
    for g, c in terms:
        key, s = gc.canonicalize(g)
        if s:
            add_into(out, key, Fraction(c) * s)
    return out


@dataclass(frozen=True)
class FreeBasis:
    """Canonical basis of F_(d)(V)(m, n)."""

    types: tuple
    m: int
    n: int
    d: int
    keys: tuple

    @property
    def dim(self) -> int:
        return len(self.keys)

    def index(self) -> dict:
        return {k: i for i, k in enumerate(self.keys)}


def _as_types(V) -> tuple:
    if hasattr(V, "types"):
        V = V.types
    return tuple(sorted(set(V)))


_FREE_CACHE: dict = {}


def free_basis(V, d: int, m: int, n: int) -> FreeBasis:
    """Basis of the weight-d part of the free properad on V at (m, n)."""
    types = _as_types(V)
    ck = (tuple(t.name for t in types), d, m, n)
    hit = _FREE_CACHE.get(ck)
    if hit is not None:
        return hit
    if any(t.weight < 1 for t in types):
        raise ValueError("generators must have positive weight")
    if d == 0:
        keys = (gc.IDENTITY_KEY,) if (m, n) == (1, 1) else ()
    else:
        keys = []
        for sk in gc.all_structures(types, d, m, n):
            if gc.canonicalize(gc.decode(sk))[1]:
                keys.append(sk)
        keys = tuple(sorted(keys))
    fb = FreeBasis(types, m, n, d, keys)
    _FREE_CACHE[ck] = fb
    return fb


def substitute(outer: Graph, vertex: int, inner: Mapping) -> Combo:
    """Substitute a linear combination of canonical keys into ``vertex`` of ``outer``."""
    t = outer.types[vertex]
    out: Combo = {}
    for key, coef in inner.items():
        if (key[0], key[1]) != (t.outs, t.ins):
            raise ValueError("arity mismatch in substitution")
        g, s = gc.substitute_vertex(outer, vertex, gc.decode(key))
        k2, s2 = gc.canonicalize(g)
        if s2:
            add_into(out, k2, Fraction(coef) * s * s2)
    return out


def corolla(t: VertexType) -> Graph:
    """Single-vertex graph with legs attached in port order."""
    return Graph((t,), (tuple(-(p + 1) for p in range(t.outs)),),
                 (tuple(-(q + 1) for q in range(t.ins)),), t.outs, t.ins, (-1,),
                 (0,) if t.parity else ())


def admissible_cuts(g: Graph) -> list[tuple[frozenset, frozenset, int]]:
    """Cuts (upper, lower, sign): lower runs over order ideals of the flow poset.

    The sign reorders the odd items into upper-then-lower tensor order.
    """
    from .symgroup import permutation_sign
    out = []
    for lower in gc.down_closed_subsets(g):
        upper = frozenset(range(g.nv)) - lower
        keys = [(0 if (c >> 1) in upper else 1, i) for i, c in enumerate(g.items) if not c & 1]
        out.append((upper, lower, permutation_sign(keys)))
    return out
