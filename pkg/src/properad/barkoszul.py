"""Bar, cobar, Koszul and augmented bar complexes of quadratic presentations.

Chains are tagged graphs over the generators.  A bar vertex is a block of
generator vertices carrying one odd marker (its suspension); a region is a
set of vertices forming the P-level of a composite.  Blocks and regions are
taken modulo the relations of the presentation.  Every differential removes
or inserts markers, so its sign is (-1)^(position of the marker) in the odd
item order; d^2 = 0 is checked on every assembled slice.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from gmpy2 import mpq

from . import graphcore as gc
from .freeprop import add_into
from .graphcore import Graph, VertexType
from .quadratic import Cell, QuadraticPresentation, build_cell, plain_graphs
from .ratlin import Echelon, RatMatrix, sparse_kernel, sparse_rank, to_fraction

REGION = -1


# ---------------------------------------------------------------- chain complexes

@dataclass
class ChainComplexSlice:
    """Finite complex: ``dims[k]`` and sparse differentials ``d[k]`` from degree k
    to k + step (a list of columns, one per source basis vector)."""

    name: str
    dims: dict
    d: dict
    step: int = -1
    meta: dict = field(default_factory=dict)

    @property
    def degrees(self) -> list[int]:
        return sorted(self.dims, reverse=self.step < 0)

    def matrix(self, k: int) -> RatMatrix:
        cols = self.d.get(k, [])
        rows = self.dims.get(k + self.step, 0)
        dense = [[to_fraction(c.get(i, 0)) for c in cols] for i in range(rows)]
        return RatMatrix(rows, len(cols), tuple(tuple(r) for r in dense))

    def rank(self, k: int) -> int:
        return sparse_rank(self.d.get(k, []))

    def d_squared_zero(self) -> bool:
        for k, cols in self.d.items():
            nxt = self.d.get(k + self.step)
            if nxt is None:
                continue
            for c in cols:
                acc: dict = {}
                for j, x in c.items():
                    for i, y in nxt[j].items():
                        v = acc.get(i, 0) + x * y
                        if v == 0:
                            acc.pop(i, None)
                        else:
                            acc[i] = v
                if acc:
                    return False
        return True

    def euler_characteristic(self) -> int:
        return sum((-1) ** abs(k) * v for k, v in self.dims.items())

    def to_json(self, with_matrices: bool = False) -> dict:
        out = {"name": self.name, "dims": {str(k): v for k, v in sorted(self.dims.items())},
               "step": self.step, **self.meta}
        if with_matrices:
            out["differentials"] = {str(k): [[str(to_fraction(x)) for x in r] for r in
                                             self.matrix(k).entries] for k in sorted(self.d)}
        return out


def homology_dims(cx: ChainComplexSlice) -> dict:
    """dim H_k = dim C_k - rank(d out of k) - rank(d into k); raises unless d^2 = 0."""
    if not cx.d_squared_zero():
        raise ValueError(f"d^2 != 0 in {cx.name}: sign convention broken")
    ranks = {k: cx.rank(k) for k in cx.d}
    return {k: cx.dims[k] - ranks.get(k, 0) - ranks.get(k - cx.step, 0) for k in cx.degrees}


class Subspace:
    """Span of vectors in an ambient index space, with coordinates."""

    def __init__(self, vectors: Iterable[Mapping]) -> None:
        self.ech = Echelon()
        self.basis: list[dict] = []
        for v in vectors:
            ok, _ = self.ech.add(v)
        for piv in sorted(self.ech.rows):
            self.basis.append(self.ech.rows[piv])
        self._coord = Echelon()
        for i, b in enumerate(self.basis):
            self._coord.add(b, {i: mpq(1)})

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coords(self, vec: Mapping) -> dict:
        r, t = self._coord.reduce(vec, {})
        if r:
            raise ValueError("vector leaves the subspace: differential does not preserve the complex")
        return {i: -c for i, c in t.items()}


# ---------------------------------------------------------------- tagged graph helpers

def _check_even(pres: QuadraticPresentation) -> None:
    if any(t.parity for t in pres.types):
        raise ValueError("generators must be even")


def _tagged(g: Graph, tags: Sequence[int]) -> Graph:
    blocks = sorted({t for t in tags if t >= 0})
    items = [2 * b + 1 for b in blocks] + [2 * v for v, t in enumerate(g.types) if t.parity]
    return Graph(g.types, g.outp, g.inp, g.m, g.n, tuple(tags), tuple(items))


def _block_tags(nv: int, blocks: Sequence[Sequence[int]], region: Iterable[int] = ()) -> list[int]:
    tags = [REGION] * nv
    for b, vs in enumerate(blocks):
        for v in vs:
            tags[v] = b
    return tags


def _partitions(g: Graph, verts: Sequence[int], s: int) -> Iterable[list[list[int]]]:
    for part in gc.set_partitions(list(verts)):
        if len(part) == s and gc.valid_block_partition(g, part):
            yield part


def _rels(pres: QuadraticPresentation):
    return lambda tag, a, b: pres.closure(a, b)


def _remove_marker(g: Graph, b: int) -> tuple[list, int]:
    c = 2 * b + 1
    pos = g.items.index(c)
    return [x for x in g.items if x != c], (-1 if pos % 2 else 1)


def merge_terms(g: Graph) -> list[tuple[Graph, int]]:
    """d_theta: compose each adjacent block pair; the upper marker is removed."""
    out = []
    for lo, up in gc.block_adjacent_pairs(g):
        items, s = _remove_marker(g, up)
        tags = tuple(lo if t == up else t for t in g.tags)
        out.append((Graph(g.types, g.outp, g.inp, g.m, g.n, tags, tuple(items)), s))
    return out


def absorb_terms(g: Graph, which: str) -> list[tuple[Graph, int]]:
    """Move a block into the region: ``min`` blocks (no block feeds them) for the
    Koszul differential, ``max`` blocks (they feed no block) for the augmented bar."""
    succ = g.successors()
    out = []
    for b in g.blocks():
        vs = [v for v in range(g.nv) if g.tags[v] == b]
        if which == "max":
            ok = all(g.tags[w] in (b, REGION) for v in vs for w in succ[v])
        else:
            ok = all(g.tags[u] in (b, REGION) for u in range(g.nv) for w in succ[u] if w in vs)
        if not ok:
            continue
        items, s = _remove_marker(g, b)
        tags = tuple(REGION if t == b else t for t in g.tags)
        out.append((Graph(g.types, g.outp, g.inp, g.m, g.n, tags, tuple(items)), s))
    return out


def _apply(cell_src: Cell, cell_tgt: Cell, op: Callable[[Graph], list]) -> list[dict]:
    """Matrix of ``op`` between quotient cells, columns in quotient coordinates."""
    cols = []
    for i in cell_src.free:
        g = gc.decode(cell_src.keys[i])
        combo: dict = {}
        for h, s in op(g):
            k, s2 = gc.canonicalize(h)
            if s2:
                add_into(combo, k, s * s2)
        cols.append(cell_tgt.coords(combo) if combo else {})
    return cols


# ---------------------------------------------------------------- bar construction

_CACHE: dict = {}
_PIDS = itertools.count()


def _pid(pres: QuadraticPresentation) -> int:
    # stable cache identity; id() can be reused after garbage collection
    if "_pid" not in pres.__dict__:
        pres.__dict__["_pid"] = next(_PIDS)
    return pres.__dict__["_pid"]


def clear_caches() -> None:
    """Drop cached cells (bar, Koszul, cobar and quotient cells)."""
    from . import freeprop, graphcore, quadratic
    _CACHE.clear()
    quadratic._QCELL.clear()
    quadratic._FREE_KEYS.clear()
    freeprop._FREE_CACHE.clear()
    graphcore._STRUCT_CACHE.clear()


def _cached(key, build):
    hit = _CACHE.get(key)
    if hit is None:
        hit = _CACHE[key] = build()
    return hit


def bar_cell(pres: QuadraticPresentation, rho: int, m: int, n: int, s: int) -> Cell:
    """B_(s)(P)^(rho)(m, n): s blocks of total weight rho, each modulo the ideal."""
    _check_even(pres)

    def build() -> Cell:
        graphs = []
        for g in plain_graphs(pres.types, rho, m, n):
            for part in _partitions(g, range(g.nv), s):
                graphs.append(_tagged(g, _block_tags(g.nv, part)))
        return build_cell(graphs, _rels(pres))
    return _cached(("bar", _pid(pres), rho, m, n, s), build)


def bar_slice(pres: QuadraticPresentation, rho: int, m: int, n: int) -> ChainComplexSlice:
    cells = {s: bar_cell(pres, rho, m, n, s) for s in range(rho, 0, -1)}
    d = {s: _apply(cells[s], cells[s - 1], merge_terms) for s in range(rho, 1, -1)}
    return ChainComplexSlice(f"bar({pres.name})^({rho})({m},{n})",
                             {s: c.dim for s, c in cells.items()}, d, -1,
                             {"rho": rho, "m": m, "n": n})


def koszul_dual_basis(pres: QuadraticPresentation, rho: int, m: int, n: int) -> list[dict]:
    """P^i_(rho)(m, n) = ker(d_theta) on the top bar term; combos of canonical keys."""
    def build():
        if rho == 0:
            return [{gc.IDENTITY_KEY: mpq(1)}] if (m, n) == (1, 1) else []
        top = bar_cell(pres, rho, m, n, rho)
        if rho == 1:
            return [{top.keys[i]: mpq(1)} for i in top.free]
        below = bar_cell(pres, rho, m, n, rho - 1)
        cols = _apply(top, below, merge_terms)
        return [{top.keys[top.free[j]]: c for j, c in v.items()} for v in sparse_kernel(cols)]
    return _cached(("pi", _pid(pres), rho, m, n), build)


def koszul_dual_dim(pres: QuadraticPresentation, rho: int, m: int, n: int) -> int:
    return len(koszul_dual_basis(pres, rho, m, n))


# ---------------------------------------------------------------- Koszul complex

def _koszul_ambient(pres, d, m, n, k) -> Cell:
    """k upper singleton blocks (an up-closed set) over a lower region."""
    def build():
        graphs = []
        for g in plain_graphs(pres.types, d, m, n):
            for U in gc.up_closed_subsets(g, k):
                graphs.append(_tagged(g, _block_tags(g.nv, [[v] for v in sorted(U)])))
        return build_cell(graphs, _rels(pres))
    return _cached(("kamb", _pid(pres), d, m, n, k), build)


def _koszul_merged(pres, d, m, n, k) -> Cell:
    """Targets of the upper merges: one adjacent upper pair fused into a block."""
    def build():
        graphs = []
        for g in plain_graphs(pres.types, d, m, n):
            for U in gc.up_closed_subsets(g, k):
                for lo, up in gc.adjacent_pairs(g):
                    if lo in U and up in U:
                        blocks = [[lo, up]] + [[v] for v in sorted(U) if v not in (lo, up)]
                        graphs.append(_tagged(g, _block_tags(g.nv, blocks)))
        return build_cell(graphs, _rels(pres))
    return _cached(("kmerge", _pid(pres), d, m, n, k), build)


def koszul_complex(pres: QuadraticPresentation, d: int, m: int, n: int) -> ChainComplexSlice:
    """(P^i ⊠_c P)_(d)(m, n) graded by the weight k of the P^i factor."""
    _check_even(pres)
    if d == 0:
        dim = 1 if (m, n) == (1, 1) else 0
        return ChainComplexSlice(f"koszul({pres.name})_(0)({m},{n})", {0: dim}, {}, -1,
                                 {"d": 0, "m": m, "n": n})
    amb = {k: _koszul_ambient(pres, d, m, n, k) for k in range(d + 1)}
    subs = {}
    for k in range(d + 1):
        if k >= 2:
            cols = _apply(amb[k], _koszul_merged(pres, d, m, n, k), merge_terms)
            subs[k] = Subspace(sparse_kernel(cols))
        else:
            subs[k] = Subspace({i: mpq(1)} for i in range(amb[k].dim))
    diff = {}
    for k in range(d, 0, -1):
        cols = _apply(amb[k], amb[k - 1], lambda g: absorb_terms(g, "min"))
        out = []
        for b in subs[k].basis:
            img: dict = {}
            for j, c in b.items():
                for i, x in cols[j].items():
                    add_into(img, i, c * x)
            out.append(subs[k - 1].coords(img) if img else {})
        diff[k] = out
    return ChainComplexSlice(f"koszul({pres.name})_({d})({m},{n})",
                             {k: subs[k].dim for k in range(d + 1)}, diff, -1,
                             {"d": d, "m": m, "n": n})


def koszul_euler(pres: QuadraticPresentation, d: int, m: int, n: int) -> int:
    """Euler characteristic of K_(d)(m, n) computed from dimensions only."""
    total = 0
    for k in range(d + 1):
        total += (-1) ** k * _koszul_cell_dim(pres, d, m, n, k)
    return total


def _koszul_cell_dim(pres, d, m, n, k) -> int:
    amb = _koszul_ambient(pres, d, m, n, k)
    if k < 2:
        return amb.dim
    cols = _apply(amb, _koszul_merged(pres, d, m, n, k), merge_terms)
    return len(sparse_kernel(cols))


# ---------------------------------------------------------------- augmented bar

def _aug_cell(pres, rho, m, n, s) -> Cell:
    """P ⊠_c B(P): an up-closed region over s bar blocks."""
    def build():
        graphs = []
        if rho == 0:
            return build_cell([], None)
        for g in plain_graphs(pres.types, rho, m, n):
            for k in range(g.nv + 1):
                for R in gc.up_closed_subsets(g, k):
                    rest = [v for v in range(g.nv) if v not in R]
                    for part in _partitions(g, rest, s):
                        graphs.append(_tagged(g, _block_tags(g.nv, part)))
        return build_cell(graphs, _rels(pres))
    return _cached(("aug", _pid(pres), rho, m, n, s), build)


def augmented_bar_slice(pres: QuadraticPresentation, rho: int, m: int, n: int) -> ChainComplexSlice:
    _check_even(pres)
    if rho == 0:
        dim = 1 if (m, n) == (1, 1) else 0
        return ChainComplexSlice(f"augbar({pres.name})^(0)({m},{n})", {0: dim}, {}, -1,
                                 {"rho": 0, "m": m, "n": n})
    cells = {s: _aug_cell(pres, rho, m, n, s) for s in range(rho + 1)}

    def op(g: Graph) -> list:
        # merging Y into X then absorbing XY removes the same markers in the same
        # order as absorbing Y then X, so the two parts need opposite signs
        return merge_terms(g) + [(h, -s) for h, s in absorb_terms(g, "max")]

    d = {s: _apply(cells[s], cells[s - 1], op) for s in range(rho, 0, -1)}
    return ChainComplexSlice(f"augbar({pres.name})^({rho})({m},{n})",
                             {s: c.dim for s, c in cells.items()}, d, -1,
                             {"rho": rho, "m": m, "n": n})


# ---------------------------------------------------------------- cobar construction

def suspended_type(t: VertexType) -> VertexType:
    name = f"s({t.name})"
    try:
        return gc.lookup_type(name)
    except KeyError:
        return t.suspended()


def _odd_form(key: tuple) -> dict:
    """A bar top-term graph (singleton blocks) as a graph of odd suspended vertices."""
    g = gc.decode(key)
    if any(t < 0 for t in g.tags) or len(set(g.tags)) != g.nv:
        raise ValueError("expected singleton blocks")
    owner = {g.tags[v]: v for v in range(g.nv)}
    items = tuple(2 * owner[c >> 1] for c in g.items if c & 1)
    types = tuple(suspended_type(t) for t in g.types)
    h = Graph(types, g.outp, g.inp, g.m, g.n, (REGION,) * g.nv, items)
    k, s = gc.canonicalize(h)
    return {k: s} if s else {}


def coproperad_basis(pres: QuadraticPresentation, w: int, a: int, b: int) -> list[dict]:
    """P^i_(w)(a, b) with each element written on odd suspended generators."""
    def build():
        out = []
        for vec in koszul_dual_basis(pres, w, a, b):
            combo: dict = {}
            for key, c in vec.items():
                for k2, s in _odd_form(key).items():
                    add_into(combo, k2, c * s)
            out.append(combo)
        return out
    return _cached(("coprop", _pid(pres), w, a, b), build)


def _hole_types(pres: QuadraticPresentation, rho: int) -> list[tuple[VertexType, list]]:
    max_out = max(t.outs for t in pres.types)
    max_in = max(t.ins for t in pres.types)
    out = []
    for w in range(1, rho + 1):
        for a in range(1, max_out * w + 1):
            for b in range(1, max_in * w + 1):
                if a + b > w * (max_out + max_in) - 2 * (w - 1):
                    continue
                basis = coproperad_basis(pres, w, a, b)
                if basis:
                    hole = gc.rigid_type(f"chole{a}_{b}_{w}", a, b, w % 2, w)
                    out.append((hole, basis))
    return out


def _cobar_cell(pres, rho, m, n, s) -> tuple[Subspace, dict]:
    """Span of fillings of s-hole skeletons; returns (subspace, ambient key index)."""
    def build():
        holes = _hole_types(pres, rho)
        basis_of = {h.name: bs for h, bs in holes}
        index: dict = {}
        vectors = []
        for ms in gc.type_multisets([h for h, _ in holes], rho, m, n, count=s):
            for sk in gc.structures(ms, m, n):
                skel = gc.decode(sk)
                tags = list(range(skel.nv))
                items = []
                for v, t in enumerate(skel.types):
                    items.append(2 * v + 1)
                    if t.parity:
                        items.append(2 * v)
                base = Graph(skel.types, skel.outp, skel.inp, m, n, tuple(tags), tuple(items))
                choices = [range(len(basis_of[t.name])) for t in skel.types]
                for pick in itertools.product(*choices):
                    terms = [(base, mpq(1))]
                    for v, j in enumerate(pick):
                        content = basis_of[skel.types[v].name][j]
                        nxt = []
                        for g, c in terms:
                            hv = next(x for x in range(g.nv) if g.tags[x] == v
                                      and g.types[x].name.startswith("chole"))
                            for ck, cc in content.items():
                                g2, s2 = gc.substitute_vertex(g, hv, gc.decode(ck), tag=v)
                                nxt.append((g2, c * cc * s2))
                        terms = nxt
                    vec: dict = {}
                    for g, c in terms:
                        k, sg = gc.canonicalize(g)
                        if sg:
                            i = index.setdefault(k, len(index))
                            add_into(vec, i, c * sg)
                    if vec:
                        vectors.append(vec)
        return Subspace(vectors), index
    return _cached(("cobar", _pid(pres), rho, m, n, s), build)


def split_terms(g: Graph) -> list[tuple[Graph, int]]:
    """d_theta': split a block M into an upper part (keeps M's id) and a lower,
    down-closed part (new marker right after M); sign -(-1)^pos(M)."""
    out = []
    succ = g.successors()
    nb = max(g.blocks()) + 1
    for b in g.blocks():
        vs = [v for v in range(g.nv) if g.tags[v] == b]
        if len(vs) < 2:
            continue
        adj = gc.undirected_adjacency(g)
        pos = g.items.index(2 * b + 1)
        sign = 1 if pos % 2 else -1
        for k in range(1, len(vs)):
            for L in itertools.combinations(vs, k):
                Ls = set(L)
                U = [v for v in vs if v not in Ls]
                # L down-closed inside the block: nothing in U feeds L
                if any(w in Ls for u in U for w in succ[u]):
                    continue
                if len(gc._components(L, adj)) != 1 or len(gc._components(U, adj)) != 1:
                    continue
                tags = tuple(nb if v in Ls else t for v, t in enumerate(g.tags))
                items = []
                for c in g.items:
                    items.append(c)
                    if c == 2 * b + 1:
                        items.append(2 * nb + 1)
                out.append((Graph(g.types, g.outp, g.inp, g.m, g.n, tags, tuple(items)), sign))
    return out


def cobar_slice(pres: QuadraticPresentation, rho: int, m: int, n: int) -> ChainComplexSlice:
    """Cobar construction on the coproperad P^i, weight rho, graded by vertex count."""
    _check_even(pres)
    cells = {s: _cobar_cell(pres, rho, m, n, s) for s in range(1, rho + 1)}
    d = {}
    for s in range(1, rho):
        src, sidx = cells[s]
        tgt, tidx = cells[s + 1]
        keys = {i: k for k, i in sidx.items()}
        cols = []
        for b in src.basis:
            img: dict = {}
            for i, c in b.items():
                for h, sg in split_terms(gc.decode(keys[i])):
                    k, s2 = gc.canonicalize(h)
                    if s2:
                        if k not in tidx:
                            raise ValueError("cobar differential leaves the span of fillings")
                        add_into(img, tidx[k], c * sg * s2)
            cols.append(tgt.coords(img) if img else {})
        d[s] = cols
    return ChainComplexSlice(f"cobar({pres.name}^i)^({rho})({m},{n})",
                             {s: c[0].dim for s, c in cells.items()}, d, +1,
                             {"rho": rho, "m": m, "n": n})
