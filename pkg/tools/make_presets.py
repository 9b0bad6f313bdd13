"""Regenerate the preset JSON files in src/properad/data.

Leg numbering: inputs and outputs of each generator are numbered left to right
as drawn; global legs are 1-based in the JSON files.  A two-vertex graph is
described by its lower vertex (fed by inputs), its upper vertex (feeding
outputs) and the internal edges (lower output port -> upper input port).
"""

from __future__ import annotations

import json
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from properad import graphcore as gc  # noqa: E402
from properad.graphcore import PORT, Graph  # noqa: E402
from properad.quadratic import QuadraticPresentation, reverse_graph  # noqa: E402
from properad.freeprop import canonical_combo  # noqa: E402

DATA = pathlib.Path(__file__).resolve().parents[1] / "src" / "properad" / "data"


def two(lo, up, edges, lo_out, up_out, lo_in, up_in):
    """lo/up types; edges [(lo out port, up in port)]; *_out/*_in map port -> 1-based leg."""
    outs = {0: [None] * up.outs, 1: [None] * lo.outs}
    ins = {0: [None] * up.ins, 1: [None] * lo.ins}
    for p, q in edges:
        outs[1][p] = 0 * PORT + q
        ins[0][q] = 1 * PORT + p
    for p, j in up_out.items():
        outs[0][p] = -j
    for p, j in lo_out.items():
        outs[1][p] = -j
    for q, j in up_in.items():
        ins[0][q] = -j
    for q, j in lo_in.items():
        ins[1][q] = -j
    m = len(up_out) + len(lo_out)
    n = len(up_in) + len(lo_in)
    g = Graph((up, lo), (tuple(outs[0]), tuple(outs[1])), (tuple(ins[0]), tuple(ins[1])), m, n,
              (-1, -1), tuple(2 * v for v, t in enumerate((up, lo)) if t.parity))
    g.validate()
    return g


def tree(op, lo, slot, leaves):
    """op(..., lo(...), ...) with lo plugged into input ``slot`` of op; leaves lists the
    1-based input labels read left to right over the flattened tree."""
    ins_up, ins_lo = {}, {}
    it = iter(leaves)
    for q in range(op.ins):
        if q == slot:
            for r in range(lo.ins):
                ins_lo[r] = next(it)
        else:
            ins_up[q] = next(it)
    return two(lo, op, [(0, slot)], {}, {0: 1}, ins_lo, ins_up)


def combo(terms):
    return canonical_combo(terms)


def co(rel_terms, mapping):
    return [(reverse_graph(g, mapping), c) for g, c in rel_terms]


def jacobi(b):
    return [(tree(b, b, 0, [1, 2, 3]), 1), (tree(b, b, 0, [2, 3, 1]), 1), (tree(b, b, 0, [3, 1, 2]), 1)]


def assoc(m):
    return [(tree(m, m, 0, [1, 2, 3]), 1), (tree(m, m, 1, [1, 2, 3]), -1)]


def com_assoc(c):
    return [(tree(c, c, 0, [1, 2, 3]), 1), (tree(c, c, 0, [2, 3, 1]), -1)]


def write(pres: QuadraticPresentation, meta: dict) -> None:
    pres.meta.update(meta)
    DATA.mkdir(parents=True, exist_ok=True)
    (DATA / f"{pres.name}.json").write_text(json.dumps(pres.to_json(), indent=1) + "\n")


def main() -> None:
    l = gc.make_type("l", 1, 2, "trivial", "sgn")
    write(QuadraticPresentation("lie", (l,), (combo(jacobi(l)),)),
          {"koszul": True, "dual_partner": "com", "shape": "operad"})

    c = gc.make_type("c", 1, 2, "trivial", "trivial")
    write(QuadraticPresentation("com", (c,), (combo(com_assoc(c)),)),
          {"koszul": True, "dual_partner": "lie", "shape": "operad"})

    a = gc.make_type("a", 1, 2, "regular", "regular")
    write(QuadraticPresentation("as", (a,), (combo(assoc(a)),)),
          {"koszul": True, "dual_partner": "as", "shape": "operad"})

    lam = gc.make_type("lam", 1, 2, "trivial", "sgn")
    dl = gc.make_type("del", 2, 1, "sgn", "trivial")
    # delta[a, b] = a.delta(b) - b.delta(a), with a.(x ⊗ y) = [a, x] ⊗ y + x ⊗ [a, y]
    lhs = two(lam, dl, [(0, 0)], {}, {0: 1, 1: 2}, {0: 1, 1: 2}, {})
    t1 = two(dl, lam, [(0, 1)], {1: 2}, {0: 1}, {0: 2}, {0: 1})
    t2 = two(dl, lam, [(1, 1)], {0: 1}, {0: 2}, {0: 2}, {0: 1})
    t3 = two(dl, lam, [(0, 1)], {1: 2}, {0: 1}, {0: 1}, {0: 2})
    t4 = two(dl, lam, [(1, 1)], {0: 1}, {0: 2}, {0: 1}, {0: 2})
    cocycle = combo([(lhs, 1), (t1, -1), (t2, -1), (t3, 1), (t4, 1)])
    bilie_rels = (combo(jacobi(lam)), combo(co(jacobi(lam), {lam: dl})), cocycle)
    write(QuadraticPresentation("bilie", (lam, dl), bilie_rels),
          {"koszul": True, "dual_partner": "frob", "shape": "properad",
           "replacement": ["lie", "lie^op"]})
    loop = two(dl, lam, [(0, 0), (1, 1)], {}, {0: 1}, {0: 1}, {})
    write(QuadraticPresentation("bilie0", (lam, dl), bilie_rels + (combo([(loop, 1)]),)),
          {"koszul": None, "shape": "properad"})

    m = gc.make_type("m", 1, 2, "regular", "regular")
    D = gc.make_type("Dl", 2, 1, "regular", "regular")
    lhs = two(m, D, [(0, 0)], {}, {0: 1, 1: 2}, {0: 1, 1: 2}, {})
    # Delta(ab) = a b(1) ⊗ b(2) + a(1) ⊗ a(2) b
    ta = two(D, m, [(0, 1)], {1: 2}, {0: 1}, {0: 2}, {0: 1})
    tb = two(D, m, [(1, 0)], {0: 1}, {0: 2}, {0: 1}, {1: 2})
    common = (combo(assoc(m)), combo(co(assoc(m), {m: D})))
    write(QuadraticPresentation("epsbi", (m, D), common + (combo([(lhs, 1), (ta, -1), (tb, -1)]),)),
          {"koszul": True, "dual_partner": None, "shape": "properad",
           "replacement": ["as", "as^op"]})
    write(QuadraticPresentation("halfbi", (m, D), common + (combo([(lhs, 1)]),)),
          {"koszul": None, "shape": "properad"})

    fm = gc.make_type("fm", 1, 2, "trivial", "trivial")
    fD = gc.make_type("fD", 2, 1, "trivial", "trivial")
    lhs = two(fm, fD, [(0, 0)], {}, {0: 1, 1: 2}, {0: 1, 1: 2}, {})
    frob_terms = []
    for lo_in in (1, 2):
        for up_out in (1, 2):
            frob_terms.append(two(fD, fm, [(0, 1)], {1: 3 - up_out}, {0: up_out},
                                  {0: lo_in}, {0: 3 - lo_in}))
    frob_rels = [combo(com_assoc(fm)), combo(co(com_assoc(fm), {fm: fD}))]
    frob_rels += [combo([(lhs, 1), (t, -1)]) for t in frob_terms]
    frob_rels.append(combo([(two(fD, fm, [(0, 0), (1, 1)], {}, {0: 1}, {0: 1}, {}), 1)]))
    write(QuadraticPresentation("frob", (fm, fD), tuple(frob_rels)),
          {"koszul": True, "dual_partner": "bilie", "shape": "properad"})

    x = gc.make_type("x", 1, 1)
    xx = two(x, x, [(0, 0)], {}, {0: 1}, {0: 1}, {})
    write(QuadraticPresentation("dualnumbers", (x,), (combo([(xx, 1)]),)),
          {"koszul": True, "shape": "algebra"})
    write(QuadraticPresentation("free_algebra", (x,), ()), {"koszul": True, "shape": "algebra"})
    write(QuadraticPresentation("trivial_algebra", (), ()), {"koszul": True, "shape": "algebra"})

    gens = tuple(gc.make_type(f"p{k}", 1, k, "regular", "regular") for k in range(2, 6))
    write(QuadraticPresentation("free_polyadic", gens, ()),
          {"koszul": True, "shape": "operad", "arity_cap": 5})


if __name__ == "__main__":
    main()
