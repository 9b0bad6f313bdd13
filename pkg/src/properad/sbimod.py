"""S-bimodules with signed-permutation actions and their products.

A component is a finite basis with S_m x S_n acting by signed permutations,
given on the adjacent transpositions.  Each orbit of basis lines becomes one
graph vertex type (stabiliser H with its sign character), which lets the
connected composition reuse the canonical graph engine.  An independent
configuration count (orbits of labelled wirings) serves as the oracle.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from . import graphcore as gc
from .graphcore import VertexType
from .ratlin import RatMatrix, rank

SignedPerm = tuple  # (images, signs): e_k -> signs[k] * e_images[k]

MAX_GROUP_ORDER = 50000
_UID = itertools.count()


# ---------------------------------------------------------------- signed permutations

def _sp_identity(d: int) -> SignedPerm:
    return tuple(range(d)), (1,) * d


def _sp_compose(f: SignedPerm, g: SignedPerm) -> SignedPerm:
    """f after g."""
    gi, gs = g
    fi, fs = f
    return tuple(fi[gi[k]] for k in range(len(gi))), tuple(gs[k] * fs[gi[k]] for k in range(len(gi)))


def _sp_check(sp: SignedPerm, d: int) -> SignedPerm:
    imgs, sgns = tuple(int(x) for x in sp[0]), tuple(int(x) for x in sp[1])
    if sorted(imgs) != list(range(d)) or len(sgns) != d or any(s not in (1, -1) for s in sgns):
        raise ValueError("not a signed permutation of the basis")
    return imgs, sgns


def close_signed_group(dim: int, generators: Iterable[SignedPerm],
                       limit: int = MAX_GROUP_ORDER) -> list[SignedPerm]:
    gens = [_sp_check(g, dim) for g in generators]
    ident = _sp_identity(dim)
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for el in frontier:
            for g in gens:
                h = _sp_compose(g, el)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
                    if len(seen) > limit:
                        raise ValueError("group closure failure: group too large")
        frontier = nxt
    return sorted(seen)


def averaging_projector_dim(dim: int, generators: Iterable[SignedPerm]) -> int:
    """Rank of the average of the group generated by signed permutations of k^dim."""
    group = close_signed_group(dim, generators)
    acc: dict = {}
    for imgs, sgns in group:
        for k in range(dim):
            acc[(imgs[k], k)] = acc.get((imgs[k], k), 0) + sgns[k]
    rows = [[acc.get((i, j), 0) for j in range(dim)] for i in range(dim)]
    return rank(RatMatrix.from_rows(rows)) if dim else 0


def coinvariant_dim(points: Sequence, moves) -> int:
    """Coinvariants of a signed-permutation action on the span of ``points``.

    ``moves(p)`` yields (q, sign) for each generator.  The answer counts orbits
    whose stabiliser acts trivially, which equals the projector rank.
    """
    index = {p: i for i, p in enumerate(points)}
    parent = list(range(len(points)))
    rel = [1] * len(points)  # sign of point relative to its parent
    bad = [False] * len(points)

    def find(i: int) -> tuple[int, int]:
        s = 1
        path = []
        while parent[i] != i:
            path.append(i)
            s *= rel[i]
            i = parent[i]
        root = i
        # path compression
        acc = s
        for j in path:
            r = acc
            acc *= rel[j]
            parent[j], rel[j] = root, r
        return root, s

    for i, p in enumerate(points):
        for q, sg in moves(p):
            j = index[q]
            ri, si = find(i)
            rj, sj = find(j)
            # e_p = sg * e_q in coinvariants
            if ri == rj:
                if si != sg * sj:
                    bad[ri] = True
            else:
                parent[ri] = rj
                rel[ri] = si * sg * sj
                bad[rj] = bad[rj] or bad[ri]
    return sum(1 for i in range(len(points)) if parent[i] == i and not bad[i])


# ---------------------------------------------------------------- components

def _transposition(k: int, i: int) -> tuple:
    t = list(range(k))
    t[i], t[i + 1] = t[i + 1], t[i]
    return tuple(t)


@dataclass
class SBimodComponent:
    """Basis of size ``basis_size`` in arity (m, n) with signed generator actions.

    ``left_action[i]`` is the action of the transposition (i, i+1) of outputs,
    ``right_action[i]`` that of inputs (0-based).
    """

    m: int
    n: int
    weight: int
    degree: int
    basis_size: int
    left_action: dict = field(default_factory=dict)
    right_action: dict = field(default_factory=dict)
    name: str = "x"

    def __post_init__(self) -> None:
        d = self.basis_size
        ident = _sp_identity(d)
        self.left_action = {i: _sp_check(self.left_action.get(i, ident), d) for i in range(max(self.m - 1, 0))}
        self.right_action = {i: _sp_check(self.right_action.get(i, ident), d)
                             for i in range(max(self.n - 1, 0))}
        self.check()

    def check(self) -> None:
        d = self.basis_size
        ident = _sp_identity(d)

        def power(x: SignedPerm, k: int) -> SignedPerm:
            r = ident
            for _ in range(k):
                r = _sp_compose(x, r)
            return r

        for acts in (self.left_action, self.right_action):
            for i, s in acts.items():
                if power(s, 2) != ident:
                    raise ValueError("generator action is not an involution")
                for j, t in acts.items():
                    if j == i + 1 and power(_sp_compose(s, t), 3) != ident:
                        raise ValueError("braid relation fails")
                    if j > i + 1 and _sp_compose(s, t) != _sp_compose(t, s):
                        raise ValueError("distant generators do not commute")
        for s in self.left_action.values():
            for t in self.right_action.values():
                if _sp_compose(s, t) != _sp_compose(t, s):
                    raise ValueError("left and right actions do not commute")

    @property
    def key(self) -> tuple:
        return (self.m, self.n, self.weight, self.degree)

    def generators(self) -> list[tuple[tuple, tuple, SignedPerm]]:
        """(alpha, beta, action) for each adjacent transposition."""
        out = []
        for i, sp in self.left_action.items():
            out.append((_transposition(self.m, i), tuple(range(self.n)), sp))
        for i, sp in self.right_action.items():
            out.append((tuple(range(self.m)), _transposition(self.n, i), sp))
        return out

    def group_action(self) -> dict:
        """(alpha, beta) -> signed permutation for every element of S_m x S_n."""
        ident = ((tuple(range(self.m)), tuple(range(self.n))), _sp_identity(self.basis_size))
        found = {ident[0]: ident[1]}
        frontier = [ident[0]]
        gens = self.generators()
        while frontier:
            nxt = []
            for el in frontier:
                for al, be, sp in gens:
                    new = (gc._compose(al, el[0]), gc._compose(be, el[1]))
                    if new not in found:
                        found[new] = _sp_compose(sp, found[el])
                        nxt.append(new)
            frontier = nxt
        return found

    def vertex_types(self, prefix: str) -> list[VertexType]:
        """One monomial vertex type per orbit of basis lines."""
        if self.m < 1 or self.n < 1:
            raise ValueError("only reduced components become vertex types")
        act = self.group_action()
        done = set()
        out = []
        for k in range(self.basis_size):
            if k in done:
                continue
            gens = []
            for (al, be), (imgs, sgns) in act.items():
                done.add(imgs[k])
                if imgs[k] == k:
                    gens.append((al, be, sgns[k]))
            grp = gc.close_group(gens, self.m, self.n)
            out.append(VertexType(f"{prefix}{self.name}[{self.m},{self.n},{self.weight},{self.degree}]#{k}",
                                  self.m, self.n, self.degree % 2, self.weight, grp,
                                  ("component", self.name, k), self.degree))
        return out

    @classmethod
    def from_vertex_type(cls, t: VertexType) -> "SBimodComponent":
        """Induced representation Ind_H^G chi on cosets of the stabiliser."""
        H = {(al, be): chi for al, be, chi, _, _ in t.group}
        reps: list = []
        where: dict = {}
        for al in itertools.permutations(range(t.outs)):
            for be in itertools.permutations(range(t.ins)):
                if (al, be) in where:
                    continue
                idx = len(reps)
                reps.append((al, be))
                for (ha, hb), chi in H.items():
                    where[(gc._compose(al, ha), gc._compose(be, hb))] = (idx, chi)

        def action(al: tuple, be: tuple) -> SignedPerm:
            imgs, sgns = [], []
            for ra, rb in reps:
                j, chi = where[(gc._compose(al, ra), gc._compose(be, rb))]
                imgs.append(j)
                sgns.append(chi)
            return tuple(imgs), tuple(sgns)

        left = {i: action(_transposition(t.outs, i), tuple(range(t.ins))) for i in range(t.outs - 1)}
        right = {i: action(tuple(range(t.outs)), _transposition(t.ins, i)) for i in range(t.ins - 1)}
        return cls(t.outs, t.ins, t.weight, t.degree, len(reps), left, right, t.name)

    def reversed(self) -> "SBimodComponent":
        return SBimodComponent(self.n, self.m, self.weight, self.degree, self.basis_size,
                               dict(self.right_action), dict(self.left_action), f"{self.name}^op")


@dataclass
class SBimodule:
    components: tuple = ()
    reduced: bool = True

    def __post_init__(self) -> None:
        self.components = tuple(self.components)
        self.uid = next(_UID)
        if self.reduced and any(c.m == 0 or c.n == 0 for c in self.components):
            raise ValueError("reduced S-bimodule has a component with m = 0 or n = 0")

    def dim(self, m: int, n: int, weight: int | None = None, degree: int | None = None) -> int:
        return sum(c.basis_size for c in self.components if (c.m, c.n) == (m, n)
                   and (weight is None or c.weight == weight) and (degree is None or c.degree == degree))

    def table(self) -> dict:
        out: dict = {}
        for c in self.components:
            out[c.key] = out.get(c.key, 0) + c.basis_size
        return out

    def reversed(self) -> "SBimodule":
        return SBimodule(tuple(c.reversed() for c in self.components), self.reduced)

    def vertex_types(self, prefix: str) -> list[VertexType]:
        out = []
        for i, c in enumerate(self.components):
            tag = f"{prefix}{i}:"
            out.extend(c.vertex_types(tag))
        return out

    @classmethod
    def unit(cls) -> "SBimodule":
        return cls((SBimodComponent(1, 1, 0, 0, 1, name="I"),))

    @classmethod
    def ground(cls) -> "SBimodule":
        """The unit k for the concatenation product, concentrated in (0, 0)."""
        return cls((SBimodComponent(0, 0, 0, 0, 1, name="k"),), reduced=False)

    @classmethod
    def from_types(cls, types: Iterable[VertexType]) -> "SBimodule":
        return cls(tuple(SBimodComponent.from_vertex_type(t) for t in types))


def _require_reduced(*mods: SBimodule) -> None:
    for M in mods:
        if not M.reduced or any(c.m == 0 or c.n == 0 for c in M.components):
            raise ValueError("connected composition needs reduced S-bimodules")


# ---------------------------------------------------------------- connected composition

def _level_multisets(top: Sequence[VertexType], bottom: Sequence[VertexType], m: int, n: int):
    """(top, bottom) multisets of a 2-level graph: every output is a top output,
    every input a bottom input, and the bottom outputs feed exactly the top inputs."""
    def multisets(types: Sequence[VertexType], cap: int):
        for k in range(1, cap + 1):
            yield from itertools.combinations_with_replacement(types, k)

    for T in multisets(sorted(top), m):
        if sum(t.outs for t in T) != m:
            continue
        ti = sum(t.ins for t in T)
        for B in multisets(sorted(bottom), n):
            if sum(t.ins for t in B) != n or sum(t.outs for t in B) != ti:
                continue
            if ti < len(T) + len(B) - 1:
                continue
            yield T, B


_CONN_CACHE: dict = {}


def compose_connected_table(Q: SBimodule, P: SBimodule, m: int, n: int) -> dict:
    """(weight, degree) -> sorted canonical keys of (Q ⊠_c P)(m, n), nonzero classes only."""
    _require_reduced(Q, P)
    top = Q.vertex_types(f"Q{Q.uid}.")
    bottom = P.vertex_types(f"P{P.uid}.")
    ck = (tuple(t.name for t in top), tuple(t.name for t in bottom), m, n)
    hit = _CONN_CACHE.get(ck)
    if hit is not None:
        return hit
    top_set = set(top)

    def forbid(src: VertexType, dst: VertexType) -> bool:
        return src in top_set or dst not in top_set

    fk = ("levels",) + ck[:2]
    out: dict = {}
    for T, B in _level_multisets(top, bottom, m, n):
        for key in gc.structures(T + B, m, n, forbid, fk):
            g = gc.decode(key)
            if not gc.canonicalize(g)[1]:
                continue
            w = sum(t.weight for t in g.types)
            d = sum(t.degree for t in g.types)
            out.setdefault((w, d), []).append(key)
    out = {k: sorted(v) for k, v in out.items()}
    _CONN_CACHE[ck] = out
    return out


def compose_connected(Q: SBimodule, P: SBimodule, m: int, n: int,
                      weight: int | None = None, degree: int | None = None) -> tuple[list, int]:
    """Basis (canonical keys) and dimension of (Q ⊠_c P)(m, n): Q on top, P below.

    Levels are full: pass-through strands need a unit component in Q or P."""
    table = compose_connected_table(Q, P, m, n)
    keys = []
    for (w, d), ks in sorted(table.items()):
        if (weight is None or w == weight) and (degree is None or d == degree):
            keys.extend(ks)
    return keys, len(keys)


# ---------------------------------------------------------------- saturation and concatenation

def _graded_product(x: Mapping, y: Mapping) -> dict:
    out: dict = {}
    for (w1, d1), a in x.items():
        for (w2, d2), b in y.items():
            k = (w1 + w2, d1 + d2)
            out[k] = out.get(k, 0) + a * b
    return out


def saturate(table: Mapping, m: int, n: int) -> dict:
    """Graded dims of S(X)(m, n) from connected graded dims table[(a, b)] = {(w, d): dim}.

    Pieces are listed by their smallest output leg, which fixes the order of the
    k! reorderings of a concatenation.
    """
    memo: dict = {}

    def rec(mm: int, nn: int) -> dict:
        if (mm, nn) in memo:
            return memo[(mm, nn)]
        if mm == 0:
            res = {(0, 0): 1} if nn == 0 else {}
        else:
            res = {}
            for a in range(1, mm + 1):
                for b in range(0, nn + 1):
                    piece = table.get((a, b))
                    if not piece:
                        continue
                    mult = math.comb(mm - 1, a - 1) * math.comb(nn, b)
                    for k, v in _graded_product(piece, rec(mm - a, nn - b)).items():
                        res[k] = res.get(k, 0) + mult * v
        memo[(mm, nn)] = res
        return res

    return rec(m, n)


def _select(graded: Mapping, weight: int | None, degree: int | None) -> int:
    return sum(v for (w, d), v in graded.items()
               if (weight is None or w == weight) and (degree is None or d == degree))


def compose_full(Q: SBimodule, P: SBimodule, m: int, n: int,
                 weight: int | None = None, degree: int | None = None) -> int:
    """dim (Q ⊠ P)(m, n) as concatenations of connected pieces."""
    table = {}
    for a in range(1, m + 1):
        for b in range(1, n + 1):
            t = compose_connected_table(Q, P, a, b)
            table[(a, b)] = {k: len(v) for k, v in t.items()}
    return _select(saturate(table, m, n), weight, degree)


def concatenate(P: SBimodule, Q: SBimodule, m: int, n: int,
                weight: int | None = None, degree: int | None = None) -> int:
    """dim (P ⊗ Q)(m, n) = sum of binomial-induced products of component dims."""
    tp, tq = P.table(), Q.table()
    graded: dict = {}
    for (m1, n1, w1, d1), a in tp.items():
        for (m2, n2, w2, d2), b in tq.items():
            if m1 + m2 != m or n1 + n2 != n:
                continue
            k = (w1 + w2, d1 + d2)
            graded[k] = graded.get(k, 0) + math.comb(m, m1) * math.comb(n, n1) * a * b
    return _select(graded, weight, degree)


# ---------------------------------------------------------------- configuration oracle

def configuration_dim(Q: SBimodule, P: SBimodule, m: int, n: int, weight: int | None = None,
                      degree: int | None = None, connected: bool = True) -> int:
    """dim (Q ⊠_c P)(m, n) (or Q ⊠ P) by orbits of labelled 2-level wirings.

    A configuration lists top and bottom vertices with a basis vector each, the
    internal edges and the leg labels.  Moves: adjacent transpositions at a
    vertex (acting on ports and decoration) and swaps of equal-component
    neighbours in a level (Koszul sign on degrees).
    """
    _require_reduced(Q, P)
    qc = [c for c in Q.components]
    pc = [c for c in P.components]
    total = 0
    for T in _comp_multisets(qc, m):
        for B in _comp_multisets(pc, n):
            w = sum(qc[i].weight for i in T) + sum(pc[i].weight for i in B)
            d = sum(qc[i].degree for i in T) + sum(pc[i].degree for i in B)
            if (weight is not None and w != weight) or (degree is not None and d != degree):
                continue
            comps = [qc[i] for i in T] + [pc[i] for i in B]
            total += _configs_for(comps, len(T), m, n, connected)
    return total


def _comp_multisets(comps: Sequence[SBimodComponent], cap: int):
    idx = range(len(comps))
    for k in range(1, cap + 1):
        yield from itertools.combinations_with_replacement(idx, k)


def _configs_for(comps: list, ntop: int, m: int, n: int, connected: bool) -> int:
    nv = len(comps)
    if nv == 0:
        return 0
    top_out = [(v, p) for v in range(ntop) for p in range(comps[v].m)]
    top_in = [(v, q) for v in range(ntop) for q in range(comps[v].n)]
    bot_out = [(v, p) for v in range(ntop, nv) for p in range(comps[v].m)]
    bot_in = [(v, q) for v in range(ntop, nv) for q in range(comps[v].n)]
    e = len(bot_out)
    if len(top_out) != m or len(bot_in) != n or len(top_in) != e:
        return 0
    points = []
    for src in itertools.combinations(bot_out, e):
        for dst in itertools.permutations(top_in, e):
            edges = frozenset(zip(src, dst))
            if connected and not _wiring_connected(nv, edges):
                continue
            for olab in itertools.permutations(top_out):
                for ilab in itertools.permutations(bot_in):
                    for dec in itertools.product(*(range(c.basis_size) for c in comps)):
                        points.append((dec, edges, olab, ilab))

    def moves(pt):
        dec, edges, olab, ilab = pt
        for v, c in enumerate(comps):
            for al, be, sp in c.generators():
                # relabel ports of v by the transposition and move the decoration
                def mo(x):
                    return (v, al[x[1]]) if x[0] == v else x

                def mi(x):
                    return (v, be[x[1]]) if x[0] == v else x
                nd = list(dec)
                nd[v] = sp[0][dec[v]]
                yield ((tuple(nd), frozenset((mo(a), mi(b)) for a, b in edges),
                        tuple(mo(x) for x in olab), tuple(mi(x) for x in ilab)), sp[1][dec[v]])
        for v in range(nv - 1):
            if v == ntop - 1 or comps[v] is not comps[v + 1]:
                continue
            swap = {v: v + 1, v + 1: v}

            def sw(x):
                return (swap.get(x[0], x[0]), x[1])
            nd = list(dec)
            nd[v], nd[v + 1] = nd[v + 1], nd[v]
            sgn = -1 if comps[v].degree % 2 and comps[v + 1].degree % 2 else 1
            yield ((tuple(nd), frozenset((sw(a), sw(b)) for a, b in edges),
                    tuple(sw(x) for x in olab), tuple(sw(x) for x in ilab)), sgn)

    return coinvariant_dim(points, moves)


def _wiring_connected(nv: int, edges) -> bool:
    parent = list(range(nv))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (a, _), (b, _) in edges:
        parent[find(a)] = find(b)
    return len({find(v) for v in range(nv)}) == 1


_KINDS = ("trivial", "sgn", "regular")


def random_monomial(rng, tag: str, arities=((1, 1), (1, 2), (2, 1), (2, 2)),
                    max_components: int = 2, kinds: Sequence[str] = _KINDS,
                    with_unit: bool = True) -> SBimodule:
    """Random weight-one monomial S-bimodule (plus the unit), for oracle tests."""
    comps = [SBimodComponent(1, 1, 0, 0, 1, name="I")] if with_unit else []
    for i in range(rng.randint(1, max_components)):
        a, b = rng.choice(arities)
        ok, ik = rng.choice(kinds), rng.choice(kinds)
        t = gc.make_type(f"{tag}.{i}.{a}{b}{ok[0]}{ik[0]}", a, b, ok, ik)
        comps.append(SBimodComponent.from_vertex_type(t))
    return SBimodule(tuple(comps))
