"""Quadratic presentations, ideals and quotients, Koszul dual presentations, reversal,
and the replacement-rule model A ⊠_c B.

Every space handled here is spanned by tagged graphs (see ``graphcore``) modulo
the ideal generated by relations substituted into adjacent vertex pairs that
share a tag.  ``Cell`` stores such a space: its nonzero canonical keys, the
ideal in echelon form, and the quotient coordinates.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence


from . import graphcore as gc
from .freeprop import canonical_combo
from .graphcore import PORT, Graph, VertexType
from .ratlin import Echelon, to_fraction, to_q
from .symgroup import permutation_sign

Combo = dict


# ---------------------------------------------------------------- presentations

@dataclass
class QuadraticPresentation:
    """Generators (weight-one vertex types) and relations in weight two."""

    name: str
    types: tuple
    relations: tuple = ()
    meta: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.types = tuple(sorted(set(self.types)))
        self.relations = tuple({k: Fraction(c) for k, c in r.items() if c != 0} for r in self.relations)
        for r in self.relations:
            cells = {(k[0], k[1]) for k in r}
            if len(cells) > 1:
                raise ValueError("relation spans several (m, n) cells")
            for k in r:
                if gc.key_weight(k) != 2 or any(t not in self.types for t in gc.key_types(k)):
                    raise ValueError("relations must be weight-two graphs in the generators")
        self._closure: dict = {}

    def generator_dim(self, m: int, n: int) -> int:
        return sum(t.dim for t in self.types if (t.outs, t.ins) == (m, n))

    def closure(self, a: int, b: int) -> list[Combo]:
        """Basis of the S_a x S_b-stable span of the relations in cell (a, b)."""
        hit = self._closure.get((a, b))
        if hit is not None:
            return hit
        rels = [r for r in self.relations if r and next(iter(r))[:2] == (a, b)]
        basis: list[Combo] = []
        if rels:
            keys = free_cell_keys(self.types, 2, a, b)
            idx = {k: i for i, k in enumerate(keys)}
            ech = Echelon()
            for r in rels:
                graphs = [(gc.decode(k), c) for k, c in r.items()]
                for op in itertools.permutations(range(a)):
                    for ip in itertools.permutations(range(b)):
                        combo = canonical_combo((gc.relabel_legs(g, op, ip), c) for g, c in graphs)
                        vec = {idx[k]: to_q(c) for k, c in combo.items()}
                        ok, _ = ech.add(vec)
                        if ok:
                            basis.append(combo)
        self._closure[(a, b)] = basis
        return basis

    def relation_cells(self) -> list[tuple[int, int]]:
        return sorted({next(iter(r))[:2] for r in self.relations if r})

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "generators": [generator_to_json(t) for t in self.types],
            "relations": [[{"coef": str(c), "graph": graph_to_json(gc.decode(k))}
                           for k, c in sorted(r.items())] for r in self.relations],
            "meta": self.meta,
        }


def generator_to_json(t: VertexType) -> dict:
    d = {"name": t.name, "outs": t.outs, "ins": t.ins, "degree": t.degree}
    if len(t.origin) == 3 and t.origin[0] == "action":
        d["out_action"], d["in_action"] = t.origin[1], t.origin[2]
    else:
        d["group"] = [[list(al), list(be), chi] for al, be, chi, _, _ in t.group]
    return d


def generator_from_json(d: dict) -> VertexType:
    deg = int(d.get("degree", 0))
    if "group" in d:
        grp = gc.close_group([(tuple(a), tuple(b), c) for a, b, c in d["group"]], d["outs"], d["ins"])
        return VertexType(d["name"], d["outs"], d["ins"], deg % 2, 1, grp, ("group",), deg)
    return gc.make_type(d["name"], d["outs"], d["ins"], d.get("out_action", "regular"),
                        d.get("in_action", "regular"), deg % 2, 1, deg)


def graph_to_json(g: Graph) -> dict:
    def port(t: int, out_side: bool):
        if t < 0:
            return ["leg", -t]
        return ["v", t // PORT, t % PORT]

    return {"m": g.m, "n": g.n,
            "vertices": [{"type": t.name, "out": [port(x, True) for x in g.outp[v]],
                          "in": [port(x, False) for x in g.inp[v]]}
                         for v, t in enumerate(g.types)]}


def graph_from_json(d: dict, types: Mapping[str, VertexType]) -> Graph:
    def code(e) -> int:
        if e[0] == "leg":
            return -int(e[1])
        return int(e[1]) * PORT + int(e[2])

    vs = d["vertices"]
    tl = tuple(types[v["type"]] for v in vs)
    g = Graph(tl, tuple(tuple(code(e) for e in v["out"]) for v in vs),
              tuple(tuple(code(e) for e in v["in"]) for v in vs), d["m"], d["n"],
              tuple(-1 for _ in vs), tuple(2 * i for i, t in enumerate(tl) if t.parity))
    g.validate()
    return g


def presentation_from_json(d: dict) -> QuadraticPresentation:
    types = [generator_from_json(x) for x in d["generators"]]
    tmap = {t.name: t for t in types}
    rels = []
    for r in d["relations"]:
        rels.append(canonical_combo((graph_from_json(t["graph"], tmap), Fraction(t["coef"])) for t in r))
    return QuadraticPresentation(d["name"], tuple(types), tuple(rels), dict(d.get("meta", {})))


def load_presentation(path: str) -> QuadraticPresentation:
    with open(path) as fh:
        return presentation_from_json(json.load(fh))


# ---------------------------------------------------------------- free cells

_FREE_KEYS: dict = {}


def free_cell_keys(types: Sequence[VertexType], d: int, m: int, n: int) -> tuple:
    """Nonzero canonical keys of F_(d)(types)(m, n) (untagged)."""
    types = tuple(sorted(set(types)))
    ck = (tuple(t.name for t in types), d, m, n)
    hit = _FREE_KEYS.get(ck)
    if hit is None:
        if d == 0:
            hit = (gc.IDENTITY_KEY,) if (m, n) == (1, 1) else ()
        elif not types:
            hit = ()
        else:
            hit = tuple(k for k in gc.all_structures(types, d, m, n)
                        if gc.canonicalize(gc.decode(k))[1])
        _FREE_KEYS[ck] = hit
    return hit


# ---------------------------------------------------------------- tagged cells

RelLookup = Callable[[int, int, int], list]  # (tag, a, b) -> relation basis combos


def hole_context(g: Graph, lo: int, up: int) -> Graph:
    """Replace the adjacent pair (lo, up) by one rigid hole vertex.

    Hole ports are numbered by (pair position, port) with ``lo`` first, which is
    the leg numbering of the corresponding two-vertex subgraph.
    """
    pair = (lo, up)
    out_map, in_map = {}, {}
    for v in pair:
        for p, t in enumerate(g.outp[v]):
            if not (t >= 0 and t // PORT in pair):
                out_map[(v, p)] = len(out_map)
    for v in pair:
        for q, t in enumerate(g.inp[v]):
            if not (t >= 0 and t // PORT in pair):
                in_map[(v, q)] = len(in_map)
    par = (g.types[lo].parity + g.types[up].parity) % 2
    a, b = len(out_map), len(in_map)
    hole = gc.rigid_type(f"hole{a}_{b}_{par}", a, b, par, 2)
    keep = [w for w in range(g.nv) if w not in pair]
    nidx = {w: i for i, w in enumerate(keep)}
    h = len(keep)

    def rm_out(t: int) -> int:  # target of an out port of a kept vertex
        if t < 0:
            return t
        w, q = divmod(t, PORT)
        if w in pair:
            return h * PORT + in_map[(w, q)]
        return nidx[w] * PORT + q

    def rm_in(t: int) -> int:
        if t < 0:
            return t
        w, p = divmod(t, PORT)
        if w in pair:
            return h * PORT + out_map[(w, p)]
        return nidx[w] * PORT + p

    outp = [tuple(rm_out(t) for t in g.outp[w]) for w in keep]
    inp = [tuple(rm_in(t) for t in g.inp[w]) for w in keep]
    hout = [0] * a
    for (v, p), j in out_map.items():
        t = g.outp[v][p]
        hout[j] = t if t < 0 else nidx[t // PORT] * PORT + t % PORT
    hin = [0] * b
    for (v, q), j in in_map.items():
        t = g.inp[v][q]
        hin[j] = t if t < 0 else nidx[t // PORT] * PORT + t % PORT
    outp.append(tuple(hout))
    inp.append(tuple(hin))
    items = []
    placed = False
    for c in g.items:
        if c & 1:
            items.append(c)
        elif (c >> 1) in pair:
            if par and not placed:
                items.append(2 * h)
                placed = True
        else:
            items.append(2 * nidx[c >> 1])
    if par and not placed:
        items.append(2 * h)
    return Graph(tuple(g.types[w] for w in keep) + (hole,), tuple(outp), tuple(inp), g.m, g.n,
                 tuple(g.tags[w] for w in keep) + (g.tags[lo],), tuple(items))


@dataclass
class Cell:
    """Span of tagged graphs modulo an ideal, with quotient coordinates."""

    keys: tuple
    index: dict
    ideal: Echelon
    free: tuple  # indices of keys that are not ideal pivots
    qindex: dict  # key index -> quotient coordinate

    @property
    def ambient_dim(self) -> int:
        return len(self.keys)

    @property
    def dim(self) -> int:
        return len(self.free)

    def vector(self, combo: Mapping) -> dict:
        return {self.index[k]: to_q(c) for k, c in combo.items()}

    def reduce_combo(self, combo: Mapping) -> dict:
        """Normal form (dict key index -> mpq) of a combo of canonical keys."""
        v, _ = self.ideal.reduce(self.vector(combo))
        return v

    def coords(self, combo: Mapping) -> dict:
        return {self.qindex[i]: c for i, c in self.reduce_combo(combo).items()}

    def basis_keys(self) -> list:
        return [self.keys[i] for i in self.free]


def build_cell(tagged: Iterable[Graph], rel_lookup: RelLookup | None,
               scope_ok: Callable[[Graph, int, int], bool] | None = None) -> Cell:
    """Cell spanned by ``tagged`` graphs (any representatives, zero classes allowed)
    modulo relations substituted in adjacent same-tag pairs."""
    reps: dict = {}
    nonzero = set()
    for g in tagged:
        key, s = gc.canonicalize(g)
        if key not in reps:
            reps[key] = g
        if s:
            nonzero.add(key)
    keys = tuple(sorted(nonzero))
    index = {k: i for i, k in enumerate(keys)}
    ech = Echelon()
    if rel_lookup is not None:
        contexts: dict = {}
        for key, g in reps.items():
            for lo, up in gc.adjacent_pairs(g):
                if g.tags[lo] != g.tags[up]:
                    continue
                if scope_ok is not None and not scope_ok(g, lo, up):
                    continue
                ctx = hole_context(g, lo, up)
                ck = gc.canonical_key(ctx)
                if ck not in contexts:
                    contexts[ck] = ctx
        for ck in sorted(contexts):
            ctx = gc.decode(ck)
            hv = next(v for v, t in enumerate(ctx.types) if t.name.startswith("hole"))
            hole = ctx.types[hv]
            for r in rel_lookup(ctx.tags[hv], hole.outs, hole.ins):
                vec: dict = {}
                for rk, rc in r.items():
                    inner = gc.decode(rk)
                    if sum(t.parity for t in inner.types) % 2 != hole.parity:
                        continue
                    g2, s = gc.substitute_vertex(ctx, hv, inner)
                    k2, s2 = gc.canonicalize(g2)
                    if s2:
                        i = index[k2]
                        nv = vec.get(i, 0) + to_q(rc) * s * s2
                        if nv == 0:
                            vec.pop(i, None)
                        else:
                            vec[i] = nv
                if vec:
                    ech.add(vec)
    free = tuple(i for i in range(len(keys)) if i not in ech.rows)
    return Cell(keys, index, ech, free, {i: j for j, i in enumerate(free)})


def plain_graphs(types: Sequence[VertexType], d: int, m: int, n: int) -> list[Graph]:
    if d == 0:
        return []
    return [gc.decode(k) for k in gc.all_structures(types, d, m, n)]


_QCELL: dict = {}


def _rels_of(pres: QuadraticPresentation) -> RelLookup:
    return lambda tag, a, b: pres.closure(a, b)


def quotient_cell(pres: QuadraticPresentation, d: int, m: int, n: int) -> Cell:
    ck = (id(pres), d, m, n)
    hit = _QCELL.get(ck)
    if hit is not None and hit[0] is pres:
        return hit[1]
    if d == 0:
        keys = (gc.IDENTITY_KEY,) if (m, n) == (1, 1) else ()
        cell = Cell(keys, {k: i for i, k in enumerate(keys)}, Echelon(), tuple(range(len(keys))),
                    {i: i for i in range(len(keys))})
    else:
        cell = build_cell(plain_graphs(pres.types, d, m, n), _rels_of(pres) if d >= 2 else None)
    _QCELL[ck] = (pres, cell)
    return cell


def ideal_basis(pres: QuadraticPresentation, d: int, m: int, n: int) -> list[Combo]:
    """Echelon basis of the ideal (R) inside F_(d)(V)(m, n), as combos of canonical keys."""
    cell = quotient_cell(pres, d, m, n)
    return [{cell.keys[i]: to_fraction(c) for i, c in row.items()}
            for _, row in sorted(cell.ideal.rows.items())]


def quotient_dim(pres: QuadraticPresentation, d: int, m: int, n: int) -> int:
    return quotient_cell(pres, d, m, n).dim


# ---------------------------------------------------------------- Koszul dual presentation

def _two_vertex_orientation(g: Graph) -> tuple[int, int, int]:
    """(lower, upper, s) for a two-vertex graph; s = sign of the flag permutation.

    Flags are listed per vertex (outputs then inputs), lower vertex first, and
    sorted into all outputs then all inputs. Legs keep their labels; internal
    edges get labels after the legs, shared by both ends.
    """
    lo = 0 if any(t >= 0 for t in g.outp[0]) else 1
    up = 1 - lo
    edge_of = {}
    for p, t in enumerate(g.outp[lo]):
        if t >= 0:
            edge_of[(lo, p)] = len(edge_of)
    e = len(edge_of)
    labels = []
    for v in (lo, up):
        for p, t in enumerate(g.outp[v]):
            labels.append(-t - 1 if t < 0 else g.m + edge_of[(v, p)])
        for q, t in enumerate(g.inp[v]):
            labels.append(g.m + e + (-t - 1 if t < 0 else g.n + edge_of[(t // PORT, t % PORT)]))
    return lo, up, permutation_sign(labels)


def _ordered_item_sign(g: Graph, lo: int, up: int) -> int:
    """Sign relating g's item order to the order (lower, upper)."""
    odd = [c >> 1 for c in g.items if not c & 1]
    if len(odd) < 2:
        return 1
    return 1 if odd == [lo, up] else -1


def dual_pairing(types: Sequence[VertexType], dual_of: Mapping[VertexType, VertexType],
                 a: int, b: int) -> tuple[tuple, tuple, dict]:
    """Primal keys, dual keys and the pairing {(dual index, primal index): ±1} on F_(2)(a, b)."""
    primal = free_cell_keys(types, 2, a, b)
    dual_types = [dual_of[t] for t in types]
    dual = free_cell_keys(dual_types, 2, a, b)
    didx = {k: i for i, k in enumerate(dual)}
    pairing = {}
    for j, k in enumerate(primal):
        g = gc.decode(k)
        lo, up, s = _two_vertex_orientation(g)
        eps_p = _ordered_item_sign(g, lo, up)
        dtypes = tuple(dual_of[t] for t in g.types)
        items = tuple(2 * v for v in (lo, up) if dtypes[v].parity)
        dg = Graph(dtypes, g.outp, g.inp, g.m, g.n, g.tags, items)
        dk, ds = gc.canonicalize(dg)
        if not ds:
            raise ValueError("dual graph class vanishes; pairing is degenerate")
        pairing[(didx[dk], j)] = ds * s * eps_p
    if len(dual) != len(primal) or len({i for i, _ in pairing}) != len(dual):
        raise ValueError("primal and dual two-vertex bases do not match")
    return primal, dual, pairing


def koszul_dual_presentation(pres: QuadraticPresentation) -> QuadraticPresentation:
    """Generators: suspended Czech duals; relations: annihilator of R under the graph pairing."""
    dual_of = {t: t.czech_dual() for t in pres.types}
    cells = set()
    for t1, t2 in itertools.product(pres.types, repeat=2):
        for e in range(1, min(t1.outs, t2.ins) + 1):
            cells.add((t1.outs + t2.outs - e, t1.ins + t2.ins - e))
    rels = []
    for a, b in sorted(cells):
        primal, dual, pairing = dual_pairing(pres.types, dual_of, a, b)
        if not dual:
            continue
        R = pres.closure(a, b)
        # w in dual coordinates with sum_{i,j} w_i P_ij r_j = 0 for every r in R
        cols = []
        for i in range(len(dual)):
            cols.append({})
        for (i, j), s in pairing.items():
            for ri, r in enumerate(R):
                c = r.get(primal[j])
                if c is not None:
                    cols[i][ri] = cols[i].get(ri, 0) + to_q(c) * s
        cols = [{k: v for k, v in c.items() if v != 0} for c in cols]
        from .ratlin import sparse_kernel
        for vec in sparse_kernel(cols):
            rels.append({dual[i]: to_fraction(c) for i, c in vec.items()})
    meta = dict(pres.meta)
    meta["dual_of"] = pres.name
    return QuadraticPresentation(f"{pres.name}!", tuple(dual_of.values()), tuple(rels), meta)


# ---------------------------------------------------------------- reversal

def reverse_graph(g: Graph, mapping: Mapping[VertexType, VertexType] | None = None) -> Graph:
    types = tuple((mapping or {}).get(t, t.reversed()) for t in g.types)
    return Graph(types, g.inp, g.outp, g.n, g.m, g.tags, g.items)


def reverse(obj):
    """Swap inputs and outputs of a presentation, a vertex type or a list of types."""
    if isinstance(obj, VertexType):
        return obj.reversed()
    if isinstance(obj, QuadraticPresentation):
        mapping = {t: t.reversed() for t in obj.types}
        rels = [canonical_combo((reverse_graph(gc.decode(k), mapping), c) for k, c in r.items())
                for r in obj.relations]
        name = obj.name[:-3] if obj.name.endswith("^op") else f"{obj.name}^op"
        return QuadraticPresentation(name, tuple(mapping.values()), tuple(rels), dict(obj.meta))
    return tuple(t.reversed() for t in obj)


# ---------------------------------------------------------------- two-region composites

TOP, BOTTOM = -1, -2


def two_region_graphs(top_types: Sequence[VertexType], bottom_types: Sequence[VertexType],
                      d: int, m: int, n: int, top_weight: int | None = None) -> list[Graph]:
    """Graphs with top-region and bottom-region vertices and no edge from top to bottom."""
    top_set, bot_set = set(top_types), set(bottom_types)
    if top_set & bot_set:
        raise ValueError("top and bottom generator names must differ")
    types = tuple(sorted(top_set | bot_set))

    def forbid(src: VertexType, dst: VertexType) -> bool:
        return src in top_set and dst in bot_set

    fk = ("two-region", tuple(sorted(t.name for t in top_set)), tuple(sorted(t.name for t in bot_set)))
    out = []
    for ms in gc.type_multisets(types, d, m, n):
        if top_weight is not None and sum(t.weight for t in ms if t in top_set) != top_weight:
            continue
        for k in gc.structures(ms, m, n, forbid, fk):
            g = gc.decode(k)
            tags = tuple(TOP if t in top_set else BOTTOM for t in g.types)
            out.append(gc.Graph(g.types, g.outp, g.inp, m, n, tags, g.items))
    return out


def replacement_model_dim(A: QuadraticPresentation, B: QuadraticPresentation,
                          d: int, m: int, n: int) -> int:
    """dim (A ⊠_c B)_(d)(m, n): operations A on top, cooperations B below."""
    if any(t.outs != 1 for t in A.types):
        raise ValueError("A must be generated by operations (one output)")
    if any(t.ins != 1 for t in B.types):
        raise ValueError("B must be generated by cooperations (one input)")
    if d == 0:
        return 1 if (m, n) == (1, 1) else 0

    def rels(tag: int, a: int, b: int) -> list:
        return (A if tag == TOP else B).closure(a, b)

    cell = build_cell(two_region_graphs(A.types, B.types, d, m, n), rels)
    return cell.dim
