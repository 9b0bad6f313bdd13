"""Directed connected graphs with labelled legs, plus their signed canonical forms and enumeration.

Encoding
--------
A graph has vertices ``0..N-1``.  Vertex ``v`` has a ``VertexType`` with
``outs`` output ports and ``ins`` input ports.  ``outp[v][p]`` is either
``w * PORT + q`` (an edge from output ``p`` of ``v`` to input ``q`` of ``w``)
or ``-(j + 1)`` (global output leg ``j``, 0-based).  ``inp[v][q]`` is
``w * PORT + p`` (an edge from output ``p`` of ``w``) or ``-(j + 1)`` (global
input leg ``j``).  Data flows along edges from outputs to inputs, so the source
of an edge sits below its target.

Each vertex carries a tag: ``tag >= 0`` names a block (a suspended group of
vertices with an odd marker), ``tag < 0`` names a region (no marker).  The
tensor order of odd items is the tuple ``items``: vertex ``v`` is ``2 * v`` and
the marker of block ``b`` is ``2 * b + 1``.  Only odd items are listed.

Vertex types carry monomial decorations: a subgroup ``H`` of ``S_outs x S_ins``
with a sign character.  Relabelling the ports of a vertex by ``h`` in ``H``
multiplies the graph by ``chi(h)``; this is the induced representation
``Ind_H chi`` realised on wirings.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .symgroup import permutation_sign

PORT = 64
REGION_KEY = 1 << 20
IDENTITY_KEY = (1, 1, ())

# H element: (alpha, beta, chi, alpha_inverse, beta_inverse); new port p <-> old port alpha[p]
GroupElem = tuple


def _compose(a: tuple, b: tuple) -> tuple:
    return tuple(a[i] for i in b)


def _inverse(a: tuple) -> tuple:
    inv = [0] * len(a)
    for i, x in enumerate(a):
        inv[x] = i
    return tuple(inv)


def _sign(a: tuple) -> int:
    return permutation_sign(a)


def close_group(gens: Iterable[tuple[tuple, tuple, int]], a: int, b: int) -> tuple[GroupElem, ...]:
    """Close signed generators (alpha, beta, chi) into a group; ValueError on inconsistent signs."""
    ident = (tuple(range(a)), tuple(range(b)))
    found = {ident: 1}
    frontier = [ident]
    gens = [(tuple(x), tuple(y), int(c)) for x, y, c in gens]
    for x, y, _ in gens:
        if sorted(x) != list(range(a)) or sorted(y) != list(range(b)):
            raise ValueError("group generator is not a port permutation")
    while frontier:
        nxt = []
        for el in frontier:
            chi = found[el]
            for x, y, c in gens:
                prod = (_compose(el[0], x), _compose(el[1], y))
                val = chi * c
                if prod in found:
                    if found[prod] != val:
                        raise ValueError("group closure failure: character is not well defined")
                else:
                    found[prod] = val
                    nxt.append(prod)
        frontier = nxt
    return tuple(sorted((al, be, chi, _inverse(al), _inverse(be)) for (al, be), chi in found.items()))


def _side_gens(kind: str, k: int) -> list[tuple[tuple, int]]:
    if kind == "regular" or k < 2:
        return []
    sgn = -1 if kind == "sgn" else 1
    if kind not in ("trivial", "sgn"):
        raise ValueError(f"unknown action kind {kind!r}")
    gens = []
    for i in range(k - 1):
        t = list(range(k))
        t[i], t[i + 1] = t[i + 1], t[i]
        gens.append((tuple(t), sgn))
    return gens


def action_group(out_kind: str, in_kind: str, a: int, b: int) -> tuple[GroupElem, ...]:
    """H and chi for an S_a x S_b action given per side as trivial | sgn | regular."""
    gens = [(t, tuple(range(b)), c) for t, c in _side_gens(out_kind, a)]
    gens += [(tuple(range(a)), t, c) for t, c in _side_gens(in_kind, b)]
    return close_group(gens, a, b)


_REGISTRY: dict[str, "VertexType"] = {}


@dataclass(frozen=True, eq=False)
class VertexType:
    """A monomial generator orbit: dimension ``outs! ins! / |H|``."""

    name: str
    outs: int
    ins: int
    parity: int = 0
    weight: int = 1
    group: tuple = field(default=(), repr=False)
    origin: tuple = field(default=(), repr=False)
    degree: int | None = None

    def __post_init__(self) -> None:
        if self.degree is None:
            object.__setattr__(self, "degree", self.parity)
        elif self.degree % 2 != self.parity:
            raise ValueError("degree and parity disagree")
        if self.outs < 1 or self.ins < 1:
            raise ValueError("vertex types must have at least one input and one output")
        if self.outs >= PORT or self.ins >= PORT:
            raise ValueError("arity too large")
        if not self.group:
            object.__setattr__(self, "group", close_group([], self.outs, self.ins))
        old = _REGISTRY.get(self.name)
        if old is not None and not old.same_as(self):
            raise ValueError(f"vertex type name {self.name!r} already registered differently")
        _REGISTRY.setdefault(self.name, self)

    def same_as(self, other: "VertexType") -> bool:
        return (self.outs, self.ins, self.parity, self.weight, self.group, self.degree) == (
            other.outs, other.ins, other.parity, other.weight, other.group, other.degree)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, VertexType) and other.name == self.name

    def __hash__(self) -> int:
        return hash(self.name)

    def __lt__(self, other: "VertexType") -> bool:
        return self.name < other.name

    @property
    def dim(self) -> int:
        import math
        return math.factorial(self.outs) * math.factorial(self.ins) // len(self.group)

    @property
    def rigid(self) -> bool:
        return len(self.group) == 1

    def suspended(self) -> "VertexType":
        return VertexType(f"s({self.name})", self.outs, self.ins, self.parity ^ 1, self.weight,
                          self.group, ("suspend", self.name), self.degree + 1)

    def czech_dual(self) -> "VertexType":
        """Czech dual: character twisted by sgn on both sides; same parity (the
        suspension is bookkept by the presentation)."""
        grp = tuple(sorted((al, be, chi * _sign(al) * _sign(be), ai, bi)
                           for al, be, chi, ai, bi in self.group))
        name = self.name[:-1] if self.name.endswith("!") else f"{self.name}!"
        return VertexType(name, self.outs, self.ins, self.parity, self.weight,
                          grp, ("dual", self.name), self.degree)

    def reversed(self) -> "VertexType":
        grp = tuple(sorted((be, al, chi, bi, ai) for al, be, chi, ai, bi in self.group))
        name = self.name[:-3] if self.name.endswith("^op") else f"{self.name}^op"
        return VertexType(name, self.ins, self.outs, self.parity, self.weight, grp,
                          ("reverse", self.name), self.degree)

    def renamed(self, name: str) -> "VertexType":
        return VertexType(name, self.outs, self.ins, self.parity, self.weight, self.group,
                          ("copy", self.name), self.degree)

    def to_json(self) -> dict:
        return {"name": self.name, "outs": self.outs, "ins": self.ins, "parity": self.parity,
                "weight": self.weight,
                "group": [[list(al), list(be), chi] for al, be, chi, _, _ in self.group]}


def make_type(name: str, outs: int, ins: int, out_kind: str = "regular", in_kind: str = "regular",
              parity: int = 0, weight: int = 1, degree: int | None = None) -> VertexType:
    return VertexType(name, outs, ins, parity, weight, action_group(out_kind, in_kind, outs, ins),
                      ("action", out_kind, in_kind), degree)


def lookup_type(name: str) -> VertexType:
    return _REGISTRY[name]


def rigid_type(name: str, outs: int, ins: int, parity: int = 0, weight: int = 1) -> VertexType:
    return VertexType(name, outs, ins, parity, weight)


def shape_type(outs: int, ins: int) -> VertexType:
    """Abstract vertex with fully symmetric ports, used for shape enumeration."""
    return make_type(f"shape{outs}_{ins}", outs, ins, "trivial", "trivial")


@dataclass(frozen=True)
class Graph:
    types: tuple
    outp: tuple
    inp: tuple
    m: int
    n: int
    tags: tuple = ()
    items: tuple = ()

    def __post_init__(self) -> None:
        if not self.tags:
            object.__setattr__(self, "tags", (-1,) * len(self.types))

    @property
    def nv(self) -> int:
        return len(self.types)

    @property
    def weight(self) -> int:
        return sum(t.weight for t in self.types)

    def blocks(self) -> list[int]:
        return sorted({t for t in self.tags if t >= 0})

    def edges(self) -> list[tuple[int, int, int, int]]:
        """(source, out port, target, in port)."""
        out = []
        for v, ports in enumerate(self.outp):
            for p, t in enumerate(ports):
                if t >= 0:
                    out.append((v, p, t // PORT, t % PORT))
        return out

    def successors(self) -> list[set]:
        succ = [set() for _ in range(self.nv)]
        for v, ports in enumerate(self.outp):
            for t in ports:
                if t >= 0:
                    succ[v].add(t // PORT)
        return succ

    def out_leg_site(self, j: int) -> tuple[int, int]:
        for v, ports in enumerate(self.outp):
            for p, t in enumerate(ports):
                if t == -(j + 1):
                    return v, p
        raise ValueError(f"output leg {j} missing")

    def expected_items(self) -> set:
        its = {2 * v for v, t in enumerate(self.types) if t.parity}
        its |= {2 * b + 1 for b in self.blocks()}
        return its

    def validate(self) -> None:
        nv = self.nv
        if len(self.outp) != nv or len(self.inp) != nv or len(self.tags) != nv:
            raise ValueError("inconsistent vertex arrays")
        outs_seen, ins_seen = set(), set()
        for v, t in enumerate(self.types):
            if len(self.outp[v]) != t.outs or len(self.inp[v]) != t.ins:
                raise ValueError(f"vertex {v} port count mismatch")
            for p, x in enumerate(self.outp[v]):
                if x < 0:
                    if -x - 1 in outs_seen or -x - 1 >= self.m:
                        raise ValueError("bad output leg")
                    outs_seen.add(-x - 1)
                else:
                    w, q = divmod(x, PORT)
                    if w == v or w >= nv or q >= self.types[w].ins or self.inp[w][q] != v * PORT + p:
                        raise ValueError(f"edge mismatch at vertex {v} out {p}")
            for q, x in enumerate(self.inp[v]):
                if x < 0:
                    if -x - 1 in ins_seen or -x - 1 >= self.n:
                        raise ValueError("bad input leg")
                    ins_seen.add(-x - 1)
                else:
                    w, p = divmod(x, PORT)
                    if w >= nv or p >= self.types[w].outs or self.outp[w][p] != v * PORT + q:
                        raise ValueError(f"edge mismatch at vertex {v} in {q}")
        if len(outs_seen) != self.m or len(ins_seen) != self.n:
            raise ValueError("legs are not 0..m-1 / 0..n-1")
        if not is_acyclic(self):
            raise ValueError("directed cycle")
        if nv and not is_connected_graph(self):
            raise ValueError("graph is not connected")
        if len(set(self.items)) != len(self.items) or set(self.items) != self.expected_items():
            raise ValueError("odd item order does not match odd vertices and block markers")

    def to_json(self) -> dict:
        return {"m": self.m, "n": self.n,
                "vertices": [{"type": t.name, "tag": self.tags[v],
                              "out": list(self.outp[v]), "in": list(self.inp[v])}
                             for v, t in enumerate(self.types)],
                "items": list(self.items)}


def is_acyclic(g: Graph) -> bool:
    succ = g.successors()
    indeg = [0] * g.nv
    for s in succ:
        for w in s:
            indeg[w] += 1
    stack = [v for v in range(g.nv) if indeg[v] == 0]
    seen = 0
    while stack:
        v = stack.pop()
        seen += 1
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                stack.append(w)
    return seen == g.nv


def _components(nodes: Iterable[int], adj: Sequence[set]) -> list[set]:
    nodes = set(nodes)
    comps = []
    while nodes:
        start = nodes.pop()
        comp = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w in nodes:
                    nodes.discard(w)
                    comp.add(w)
                    stack.append(w)
        comps.append(comp)
    return comps


def undirected_adjacency(g: Graph) -> list[set]:
    adj = [set() for _ in range(g.nv)]
    for v, s in enumerate(g.successors()):
        for w in s:
            adj[v].add(w)
            adj[w].add(v)
    return adj


def is_connected_graph(g: Graph) -> bool:
    return len(_components(range(g.nv), undirected_adjacency(g))) <= 1


def components_of(g: Graph, subset: Iterable[int]) -> list[set]:
    return _components(subset, undirected_adjacency(g))


def reachability(g: Graph) -> list[set]:
    """reach[v] = vertices reachable from v by a directed path of length >= 1."""
    succ = g.successors()
    reach: list[set | None] = [None] * g.nv

    def visit(v: int) -> set:
        if reach[v] is None:
            r = set()
            for w in succ[v]:
                r.add(w)
                r |= visit(w)
            reach[v] = r
        return reach[v]

    for v in range(g.nv):
        visit(v)
    return reach  # type: ignore[return-value]


def adjacent_pairs(g: Graph) -> list[tuple[int, int]]:
    """Pairs (lower, upper) joined by an edge with no directed path through a third vertex."""
    succ = g.successors()
    reach = reachability(g)
    out = []
    for lo in range(g.nv):
        for up in sorted(succ[lo]):
            if not any(up in reach[x] for x in succ[lo] if x != up):
                out.append((lo, up))
    return out


def quotient_order(g: Graph, groups: dict) -> tuple[dict, dict]:
    """Successor/reach relations between vertex groups (label -> set of vertices)."""
    owner = {}
    for lab, vs in groups.items():
        for v in vs:
            owner[v] = lab
    succ = {lab: set() for lab in groups}
    for v, s in enumerate(g.successors()):
        if v not in owner:
            continue
        for w in s:
            if w in owner and owner[w] != owner[v]:
                succ[owner[v]].add(owner[w])
    reach: dict = {}

    def visit(x):
        if x not in reach:
            reach[x] = set()
            r = set()
            for y in succ[x]:
                r.add(y)
                r |= visit(y)
            reach[x] = r
        return reach[x]

    for lab in groups:
        visit(lab)
    return succ, reach


def block_adjacent_pairs(g: Graph) -> list[tuple[int, int]]:
    """Adjacent block pairs (lower block, upper block) in the block-contracted graph."""
    groups: dict = {}
    for v, t in enumerate(g.tags):
        if t >= 0:
            groups.setdefault(t, set()).add(v)
    succ, reach = quotient_order(g, groups)
    out = []
    for lo in sorted(groups):
        for up in sorted(succ[lo]):
            if not any(up in reach[x] for x in succ[lo] if x != up):
                out.append((lo, up))
    return out


# ---------------------------------------------------------------- canonical form

def _encode(g: Graph, combo: Sequence[GroupElem], v0: int, best):
    """Traversal encoding under fixed port relabellings; None when it exceeds ``best``."""
    types, outp, inp, tags = g.types, g.outp, g.inp, g.tags
    new = [-1] * len(types)
    new[v0] = 0
    order = [v0]
    blockmap: dict = {}
    recs = []
    less = best is None
    i = 0
    while i < len(order):
        v = order[i]
        al, be, _, _, _ = combo[v]
        tag = tags[v]
        if tag >= 0:
            code = blockmap.get(tag)
            if code is None:
                code = blockmap[tag] = len(blockmap)
        else:
            code = tag
        rec = [types[v].name, code]
        ov, iv = outp[v], inp[v]
        for p in al:
            t = ov[p]
            if t < 0:
                rec.append(t)
            else:
                w, q = divmod(t, PORT)
                if new[w] < 0:
                    new[w] = len(order)
                    order.append(w)
                rec.append(new[w] * PORT + combo[w][4][q])
        for q in be:
            t = iv[q]
            if t < 0:
                rec.append(t)
            else:
                w, p = divmod(t, PORT)
                if new[w] < 0:
                    new[w] = len(order)
                    order.append(w)
                rec.append(new[w] * PORT + combo[w][3][p])
        rec = tuple(rec)
        if not less:
            b = best[i]
            if rec > b:
                return None
            if rec < b:
                less = True
        recs.append(rec)
        i += 1
    if len(order) != len(types):
        raise ValueError("graph is not connected")
    return tuple(recs), new, blockmap


def _item_sign(g: Graph, new: Sequence[int], blockmap: dict) -> int:
    if len(g.items) < 2:
        return 1
    keys = []
    for c in g.items:
        if c & 1:
            keys.append((blockmap[c >> 1], 0, 0))
        else:
            v = c >> 1
            t = g.tags[v]
            keys.append((blockmap[t] if t >= 0 else REGION_KEY, 1, new[v]))
    return permutation_sign(keys)


def canonicalize(g: Graph) -> tuple[tuple, int]:
    """Return (key, sign) with g = sign * decode(key); sign 0 marks a zero class."""
    if g.nv == 0:
        if (g.m, g.n) != (1, 1):
            raise ValueError("empty graph must be the identity strand")
        return IDENTITY_KEY, 1
    v0 = g.out_leg_site(0)[0]
    best = None
    signs: set = set()
    for combo in itertools.product(*(t.group for t in g.types)):
        res = _encode(g, combo, v0, best)
        if res is None:
            continue
        recs, new, blockmap = res
        chi = 1
        for el in combo:
            chi *= el[2]
        sign = chi * _item_sign(g, new, blockmap)
        if best is None or recs < best:
            best = recs
            signs = {sign}
        else:
            signs.add(sign)
    key = (g.m, g.n, best)
    return key, (signs.pop() if len(signs) == 1 else 0)


def canonical_key(g: Graph) -> tuple:
    """Canonical key ignoring signs and zero classes."""
    if g.nv == 0:
        return IDENTITY_KEY
    v0 = g.out_leg_site(0)[0]
    best = None
    for combo in itertools.product(*(t.group for t in g.types)):
        res = _encode(g, combo, v0, best)
        if res is not None and (best is None or res[0] < best):
            best = res[0]
    return (g.m, g.n, best)


def decode(key: tuple) -> Graph:
    """Graph represented by a canonical key, with items in canonical order."""
    m, n, recs = key
    types, outp, inp, tags = [], [], [], []
    for rec in recs:
        t = _REGISTRY[rec[0]]
        types.append(t)
        tags.append(rec[1])
        outp.append(tuple(rec[2:2 + t.outs]))
        inp.append(tuple(rec[2 + t.outs:2 + t.outs + t.ins]))
    items = []
    blocks = sorted({x for x in tags if x >= 0})
    for b in blocks:
        items.append(2 * b + 1)
        items.extend(2 * v for v in range(len(types)) if tags[v] == b and types[v].parity)
    items.extend(2 * v for v in range(len(types)) if tags[v] < 0 and types[v].parity)
    return Graph(tuple(types), tuple(outp), tuple(inp), m, n, tuple(tags), tuple(items))


def key_weight(key: tuple) -> int:
    return sum(_REGISTRY[r[0]].weight for r in key[2])


def key_types(key: tuple) -> list[VertexType]:
    return [_REGISTRY[r[0]] for r in key[2]]


# ---------------------------------------------------------------- graph surgery

def retag(g: Graph, tags: Sequence[int], items: Sequence[int] | None = None) -> Graph:
    if items is None:
        items = [c for c in g.items if not c & 1]
        items = [2 * b + 1 for b in sorted({t for t in tags if t >= 0})] + items
    return Graph(g.types, g.outp, g.inp, g.m, g.n, tuple(tags), tuple(items))


def relabel_legs(g: Graph, out_perm: Sequence[int], in_perm: Sequence[int]) -> Graph:
    """Output leg j becomes out_perm[j], input leg j becomes in_perm[j] (0-based)."""
    outp = tuple(tuple(-(out_perm[-t - 1] + 1) if t < 0 else t for t in ports) for ports in g.outp)
    inp = tuple(tuple(-(in_perm[-t - 1] + 1) if t < 0 else t for t in ports) for ports in g.inp)
    return Graph(g.types, outp, inp, g.m, g.n, g.tags, g.items)


def replace_types(g: Graph, mapping: dict, items: Sequence[int] | None = None) -> Graph:
    types = tuple(mapping.get(t, t) for t in g.types)
    if items is None:
        odd = {v for v, t in enumerate(types) if t.parity}
        items = [c for c in g.items if c & 1 or (c >> 1) in odd]
        items += [2 * v for v in sorted(odd) if 2 * v not in items]
    return Graph(types, g.outp, g.inp, g.m, g.n, g.tags, tuple(items))


def induced_subgraph(g: Graph, verts: Sequence[int]) -> tuple[Graph, list, list]:
    """Subgraph on ``verts`` (kept in the given order) with fresh legs.

    External ports are numbered by (vertex position, port).  Returns the graph and
    the lists of original attachments of its output and input legs.
    """
    pos = {v: i for i, v in enumerate(verts)}
    out_ext, in_ext = [], []
    outp, inp = [], []
    for v in verts:
        row = []
        for p, t in enumerate(g.outp[v]):
            if t >= 0 and t // PORT in pos:
                row.append(pos[t // PORT] * PORT + t % PORT)
            else:
                out_ext.append(t)
                row.append(-len(out_ext))
        outp.append(tuple(row))
    for v in verts:
        row = []
        for q, t in enumerate(g.inp[v]):
            if t >= 0 and t // PORT in pos:
                row.append(pos[t // PORT] * PORT + t % PORT)
            else:
                in_ext.append(t)
                row.append(-len(in_ext))
        inp.append(tuple(row))
    sub = Graph(tuple(g.types[v] for v in verts), tuple(outp), tuple(inp),
                len(out_ext), len(in_ext), tuple(-1 for _ in verts),
                tuple(2 * pos[c >> 1] for c in g.items if not c & 1 and (c >> 1) in pos))
    return sub, out_ext, in_ext


def substitute_vertex(g: Graph, v: int, inner: Graph, tag: int | None = None) -> tuple[Graph, int]:
    """Insert ``inner`` in place of vertex ``v``; returns (graph, sign).

    Output leg j of ``inner`` takes over output port j of ``v``, likewise for
    inputs.  Inner odd items are placed at the item position of ``v`` (or at the
    end when ``v`` is even, which requires the inner item block to be even).
    The new vertices receive ``tag`` (default: the tag of ``v``).
    """
    old = g.types[v]
    if (inner.m, inner.n) != (old.outs, old.ins):
        raise ValueError("arity mismatch in substitution")
    inner_par = sum(t.parity for t in inner.types) % 2
    if inner_par != old.parity and inner.nv:
        raise ValueError("parity mismatch in substitution")
    tag = g.tags[v] if tag is None else tag
    if inner.nv == 0:
        return _contract_identity(g, v), 1
    keep = [w for w in range(g.nv) if w != v]
    base = len(keep)
    newidx = {w: i for i, w in enumerate(keep)}

    def remap(t: int, side_out: bool) -> int:
        # t is a port target in g (not involving v); re-index
        if t < 0:
            return t
        w, q = divmod(t, PORT)
        return newidx[w] * PORT + q

    types = [g.types[w] for w in keep] + list(inner.types)
    tags = [g.tags[w] for w in keep] + [tag] * inner.nv
    outp = [list(g.outp[w]) for w in keep] + [list(r) for r in inner.outp]
    inp = [list(g.inp[w]) for w in keep] + [list(r) for r in inner.inp]
    for i, w in enumerate(keep):
        for p, t in enumerate(g.outp[w]):
            if t >= 0 and t // PORT == v:
                q = t % PORT
                # inner input leg q sits at some inner vertex port
                iv, iq = _inner_in_leg_site(inner, q)
                outp[i][p] = (base + iv) * PORT + iq
            else:
                outp[i][p] = remap(t, True)
        for q, t in enumerate(g.inp[w]):
            if t >= 0 and t // PORT == v:
                p = t % PORT
                iv, ip = inner.out_leg_site(p)
                inp[i][q] = (base + iv) * PORT + ip
            else:
                inp[i][q] = remap(t, False)
    for iv in range(inner.nv):
        for p, t in enumerate(inner.outp[iv]):
            if t >= 0:
                outp[base + iv][p] = (base + t // PORT) * PORT + t % PORT
            else:
                ext = g.outp[v][-t - 1]
                outp[base + iv][p] = ext if ext < 0 else newidx[ext // PORT] * PORT + ext % PORT
        for q, t in enumerate(inner.inp[iv]):
            if t >= 0:
                inp[base + iv][q] = (base + t // PORT) * PORT + t % PORT
            else:
                ext = g.inp[v][-t - 1]
                inp[base + iv][q] = ext if ext < 0 else newidx[ext // PORT] * PORT + ext % PORT
    inner_items = [2 * (base + (c >> 1)) for c in inner.items]
    items: list[int] = []
    placed = False
    for c in g.items:
        if c == 2 * v:
            items.extend(inner_items)
            placed = True
        elif c & 1:
            items.append(c)
        else:
            items.append(2 * newidx[c >> 1])
    if not placed:
        items.extend(inner_items)
    out = Graph(tuple(types), tuple(tuple(r) for r in outp), tuple(tuple(r) for r in inp),
                g.m, g.n, tuple(tags), tuple(items))
    return out, 1


def _inner_in_leg_site(inner: Graph, q: int) -> tuple[int, int]:
    for v, ports in enumerate(inner.inp):
        for p, t in enumerate(ports):
            if t == -(q + 1):
                return v, p
    raise ValueError(f"input leg {q} missing")


def _contract_identity(g: Graph, v: int) -> Graph:
    t = g.types[v]
    if (t.outs, t.ins) != (1, 1):
        raise ValueError("identity substitution needs a (1,1) vertex")
    src, dst = g.inp[v][0], g.outp[v][0]
    keep = [w for w in range(g.nv) if w != v]
    newidx = {w: i for i, w in enumerate(keep)}

    def rm(x: int) -> int:
        return x if x < 0 else newidx[x // PORT] * PORT + x % PORT

    outp, inp = [], []
    for w in keep:
        row = []
        for p, x in enumerate(g.outp[w]):
            row.append(rm(dst) if x >= 0 and x // PORT == v else rm(x))
        outp.append(tuple(row))
        row = []
        for q, x in enumerate(g.inp[w]):
            row.append(rm(src) if x >= 0 and x // PORT == v else rm(x))
        inp.append(tuple(row))
    items = tuple(c if c & 1 else 2 * newidx[c >> 1] for c in g.items if c != 2 * v)
    if not keep:
        return Graph((), (), (), g.m, g.n, (), ())
    return Graph(tuple(g.types[w] for w in keep), tuple(outp), tuple(inp), g.m, g.n,
                 tuple(g.tags[w] for w in keep), items)


# ---------------------------------------------------------------- enumeration

def type_multisets(types: Sequence[VertexType], weight: int, m: int, n: int,
                   count: int | None = None) -> list[tuple]:
    """Multisets of types with total weight ``weight`` compatible with (m, n) legs."""
    types = sorted(set(types))
    out = []

    def rec(i: int, w: int, chosen: list) -> None:
        if w == weight:
            if count is not None and len(chosen) != count:
                return
            so = sum(t.outs for t in chosen)
            si = sum(t.ins for t in chosen)
            edges = so - m
            if edges != si - n or edges < len(chosen) - 1:
                return
            out.append(tuple(chosen))
            return
        if i == len(types):
            return
        t = types[i]
        if t.weight == 0:
            raise ValueError("weight-zero types cannot be enumerated by weight")
        k = 0
        while w + k * t.weight <= weight:
            rec(i + 1, w + k * t.weight, chosen + [t] * k)
            k += 1

    rec(0, 0, [])
    return out


def _rigid_graphs(multiset: Sequence[VertexType], m: int, n: int,
                  forbid=None) -> Iterator[tuple[list, list, list, list, list]]:
    """Rigid graphs built in traversal order from output leg 0.

    Yields (types, outp, inp, out_slots, in_slots) where leg slots still need labels;
    output leg 0 is already attached.  ``forbid(src_type, dst_type)`` rejects edges.
    """
    remaining: dict = {}
    for t in multiset:
        remaining[t] = remaining.get(t, 0) + 1
    kinds = sorted(remaining)
    verts: list = []
    outp: list = []
    inp: list = []
    out_slots: list = []
    in_slots: list = []
    LEG = -1
    state = {"open_out": 0, "open_in": 0}

    def budget_ok() -> bool:
        rem_out = sum(t.outs * c for t, c in remaining.items())
        rem_in = sum(t.ins * c for t, c in remaining.items())
        need_out = m - 1 - len(out_slots)
        need_in = n - len(in_slots)
        return need_out <= state["open_out"] + rem_out and need_in <= state["open_in"] + rem_in

    def add_vertex(t: VertexType) -> int:
        verts.append(t)
        outp.append([None] * t.outs)
        inp.append([None] * t.ins)
        remaining[t] -= 1
        state["open_out"] += t.outs
        state["open_in"] += t.ins
        return len(verts) - 1

    def pop_vertex() -> None:
        t = verts.pop()
        outp.pop()
        inp.pop()
        remaining[t] += 1
        state["open_out"] -= t.outs
        state["open_in"] -= t.ins

    def rec(i: int, k: int):
        while i < len(verts):
            t = verts[i]
            if k < t.outs:
                if outp[i][k] is None:
                    break
            elif k < t.outs + t.ins:
                if inp[i][k - t.outs] is None:
                    break
            else:
                i, k = i + 1, 0
                continue
            k += 1
        if i == len(verts):
            if len(out_slots) == m - 1 and len(in_slots) == n and not any(remaining.values()):
                yield (list(verts), [list(r) for r in outp], [list(r) for r in inp],
                       list(out_slots), list(in_slots))
            return
        if not budget_ok():
            return
        t = verts[i]
        if k < t.outs:
            p = k
            state["open_out"] -= 1
            if len(out_slots) < m - 1:
                outp[i][p] = LEG
                out_slots.append((i, p))
                yield from rec(i, k + 1)
                out_slots.pop()
            for w in range(i + 1, len(verts)):
                if forbid is not None and forbid(t, verts[w]):
                    continue
                for q in range(verts[w].ins):
                    if inp[w][q] is None:
                        outp[i][p] = w * PORT + q
                        inp[w][q] = i * PORT + p
                        state["open_in"] -= 1
                        yield from rec(i, k + 1)
                        state["open_in"] += 1
                        inp[w][q] = None
            for t2 in kinds:
                if remaining[t2] == 0 or (forbid is not None and forbid(t, t2)):
                    continue
                w = add_vertex(t2)
                for q in range(t2.ins):
                    outp[i][p] = w * PORT + q
                    inp[w][q] = i * PORT + p
                    state["open_in"] -= 1
                    yield from rec(i, k + 1)
                    state["open_in"] += 1
                    inp[w][q] = None
                pop_vertex()
            outp[i][p] = None
            state["open_out"] += 1
        else:
            q = k - t.outs
            state["open_in"] -= 1
            if len(in_slots) < n:
                inp[i][q] = LEG
                in_slots.append((i, q))
                yield from rec(i, k + 1)
                in_slots.pop()
            for w in range(i + 1, len(verts)):
                if forbid is not None and forbid(verts[w], t):
                    continue
                for p in range(verts[w].outs):
                    if outp[w][p] is None:
                        inp[i][q] = w * PORT + p
                        outp[w][p] = i * PORT + q
                        state["open_out"] -= 1
                        yield from rec(i, k + 1)
                        state["open_out"] += 1
                        outp[w][p] = None
            for t2 in kinds:
                if remaining[t2] == 0 or (forbid is not None and forbid(t2, t)):
                    continue
                w = add_vertex(t2)
                for p in range(t2.outs):
                    inp[i][q] = w * PORT + p
                    outp[w][p] = i * PORT + q
                    state["open_out"] -= 1
                    yield from rec(i, k + 1)
                    state["open_out"] += 1
                    outp[w][p] = None
                pop_vertex()
            inp[i][q] = None
            state["open_in"] += 1

    for t0 in kinds:
        w = add_vertex(t0)
        for p0 in range(t0.outs):
            outp[w][p0] = -1
            state["open_out"] -= 1
            yield from rec(0, 0)
            state["open_out"] += 1
            outp[w][p0] = None
        pop_vertex()


_STRUCT_CACHE: dict = {}


def structures(multiset: Sequence[VertexType], m: int, n: int, forbid=None,
               forbid_key=None) -> list[tuple]:
    """Canonical keys (sign ignored) of all connected acyclic graphs with the given
    vertex multiset, m labelled outputs and n labelled inputs."""
    ms = tuple(sorted(multiset))
    ck = (ms, m, n, forbid_key)
    if forbid is None or forbid_key is not None:
        hit = _STRUCT_CACHE.get(ck)
        if hit is not None:
            return hit
    if not ms:
        res = [IDENTITY_KEY] if (m, n) == (1, 1) else []
        return res
    keys = set()
    for types, outp, inp, oslots, islots in _rigid_graphs(ms, m, n, forbid):
        tmp = Graph(tuple(types), tuple(tuple(x if x is not None else -1 for x in r) for r in outp),
                    tuple(tuple(x if x is not None else -1 for x in r) for r in inp), 0, 0)
        if not is_acyclic(tmp):
            continue
        for operm in itertools.permutations(range(1, m)):
            for (v, p), j in zip(oslots, operm):
                outp[v][p] = -(j + 1)
            for iperm in itertools.permutations(range(n)):
                for (v, q), j in zip(islots, iperm):
                    inp[v][q] = -(j + 1)
                g = Graph(tuple(types), tuple(tuple(r) for r in outp), tuple(tuple(r) for r in inp),
                          m, n, tuple(-1 for _ in types),
                          tuple(2 * v for v, t in enumerate(types) if t.parity))
                keys.add(canonical_key(g))
    res = sorted(keys)
    if forbid is None or forbid_key is not None:
        _STRUCT_CACHE[ck] = res
    return res


def all_structures(types: Sequence[VertexType], weight: int, m: int, n: int,
                   forbid=None, forbid_key=None) -> list[tuple]:
    out = []
    for ms in type_multisets(types, weight, m, n):
        out.extend(structures(ms, m, n, forbid, forbid_key))
    return sorted(out)


def enumerate_graphs(vertex_profiles: Sequence[tuple[int, int]], m: int, n: int) -> list[tuple]:
    """Isomorphism classes of shapes with the given (outs, ins) multiset.

    Vertices are abstract with unordered ports; the result lists canonical keys.
    """
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive")
    ms = [shape_type(a, b) for a, b in vertex_profiles]
    return structures(ms, m, n)


def plain_graph_from_key(key: tuple) -> Graph:
    return decode(key)


# ---------------------------------------------------------------- tag enumeration

def set_partitions(elems: Sequence[int]) -> Iterator[list[list[int]]]:
    elems = list(elems)
    if not elems:
        yield []
        return
    first, rest = elems[0], elems[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def valid_block_partition(g: Graph, blocks: Sequence[Sequence[int]]) -> bool:
    """Each block induces a connected subgraph and the block-contracted graph is acyclic."""
    adj = undirected_adjacency(g)
    for b in blocks:
        if len(_components(b, adj)) != 1:
            return False
    groups = {i: set(b) for i, b in enumerate(blocks)}
    succ, reach = quotient_order(g, groups)
    return all(i not in reach[i] for i in groups)


def up_closed_subsets(g: Graph, size: int | None = None) -> list[frozenset]:
    """Subsets U with no edge leaving U towards a vertex outside U."""
    succ = g.successors()
    out = []
    for k in range(g.nv + 1):
        if size is not None and k != size:
            continue
        for sub in itertools.combinations(range(g.nv), k):
            s = set(sub)
            if all(succ[v] <= s for v in s):
                out.append(frozenset(s))
    return out


def down_closed_subsets(g: Graph) -> list[frozenset]:
    """Order ideals of the flow poset (lower sets)."""
    succ = g.successors()
    pred = [set() for _ in range(g.nv)]
    for v, s in enumerate(succ):
        for w in s:
            pred[w].add(v)
    out = []
    for k in range(g.nv + 1):
        for sub in itertools.combinations(range(g.nv), k):
            s = set(sub)
            if all(pred[v] <= s for v in s):
                out.append(frozenset(s))
    return out
