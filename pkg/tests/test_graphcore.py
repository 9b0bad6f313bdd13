import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from properad import graphcore as gc
from properad import presets
from properad.graphcore import PORT, Graph


def permute_vertices(g: Graph, pi) -> Graph:
    """Renumber vertex v as pi[v]; the odd item sequence keeps its order."""
    inv = [0] * g.nv
    for v, w in enumerate(pi):
        inv[w] = v

    def edge(t):
        return t if t < 0 else pi[t // PORT] * PORT + t % PORT
    types = tuple(g.types[inv[w]] for w in range(g.nv))
    outp = tuple(tuple(edge(t) for t in g.outp[inv[w]]) for w in range(g.nv))
    inp = tuple(tuple(edge(t) for t in g.inp[inv[w]]) for w in range(g.nv))
    tags = tuple(g.tags[inv[w]] for w in range(g.nv))
    items = tuple(c if c & 1 else 2 * pi[c >> 1] for c in g.items)
    return Graph(types, outp, inp, g.m, g.n, tags, items)


def sample_graphs():
    out = []
    for name, d, m, n in [("as", 2, 1, 3), ("lie", 3, 1, 4), ("bilie", 2, 2, 2), ("epsbi", 2, 1, 1),
                          ("frob", 3, 2, 3)]:
        p = presets.get(name)
        out.extend(gc.decode(k) for k in gc.all_structures(p.types, d, m, n))
    return out


GRAPHS = sample_graphs()


def test_type_dimensions():
    assert gc.make_type("tst_l", 1, 2, "trivial", "sgn").dim == 1
    assert gc.make_type("tst_m", 1, 2, "regular", "regular").dim == 2
    assert gc.make_type("tst_x", 2, 2, "regular", "regular").dim == 4


def test_type_name_clash_rejected():
    gc.make_type("tst_clash", 1, 2, "trivial", "trivial")
    with pytest.raises(ValueError):
        gc.make_type("tst_clash", 1, 2, "trivial", "sgn")


def test_bad_types():
    with pytest.raises(ValueError):
        gc.rigid_type("tst_bad", 0, 2)


def test_decoded_graphs_validate():
    for g in GRAPHS:
        g.validate()
        assert gc.is_acyclic(g) and gc.is_connected_graph(g)


def test_decode_is_canonical():
    for g in GRAPHS:
        key, s = gc.canonicalize(g)
        if s:
            assert gc.canonicalize(gc.decode(key)) == (key, 1)


def test_structure_counts():
    # free operad on one commutative binary operation: 3 trees with 3 leaves
    c = presets.get("com").types
    assert len(gc.all_structures(c, 2, 1, 3)) == 3
    # planar binary trees with labelled leaves: 2 * 3! = 12
    a = presets.get("as").types
    assert sum(t.dim for t in a) == 2
    keys = gc.all_structures(a, 2, 1, 3)
    assert sum(1 for k in keys if gc.canonicalize(gc.decode(k))[1]) == 12


def test_genus_one_loop_present():
    p = presets.get("bilie")
    keys = gc.all_structures(p.types, 2, 1, 1)
    assert len(keys) == 1
    g = gc.decode(keys[0])
    assert len(g.edges()) == 2


@given(st.sampled_from(GRAPHS), st.randoms())
def test_canonical_form_ignores_vertex_numbering(g, rnd):
    pi = list(range(g.nv))
    rnd.shuffle(pi)
    h = permute_vertices(g, pi)
    h.validate()
    assert gc.canonicalize(h) == gc.canonicalize(g)


@given(st.sampled_from(GRAPHS), st.randoms())
def test_leg_relabelling_changes_key_consistently(g, rnd):
    po = list(range(g.m))
    pi = list(range(g.n))
    rnd.shuffle(po)
    rnd.shuffle(pi)
    h = gc.relabel_legs(g, po, pi)
    back = gc.relabel_legs(h, [po.index(j) for j in range(g.m)], [pi.index(j) for j in range(g.n)])
    assert gc.canonicalize(back) == gc.canonicalize(g)


def test_odd_item_swap_flips_sign():
    t = gc.make_type("tst_odd", 1, 2, "regular", "regular", parity=1)
    keys = gc.all_structures([t], 2, 1, 3)
    for k in keys:
        g = gc.decode(k)
        key, s = gc.canonicalize(g)
        swapped = Graph(g.types, g.outp, g.inp, g.m, g.n, g.tags, tuple(reversed(g.items)))
        key2, s2 = gc.canonicalize(swapped)
        assert key2 == key and s2 == -s


def test_up_and_down_closed_subsets_complement():
    for g in GRAPHS[:20]:
        ups = set(gc.up_closed_subsets(g))
        downs = set(gc.down_closed_subsets(g))
        full = frozenset(range(g.nv))
        assert {full - d for d in downs} == ups


def test_set_partitions_count():
    bell = [1, 1, 2, 5, 15, 52]
    for n in range(1, 6):
        assert sum(1 for _ in gc.set_partitions(list(range(n)))) == bell[n]


def test_all_adjacent_pairs_are_edges():
    for g in GRAPHS:
        edges = {(v, w) for v, _, w, _ in g.edges()}
        for lo, up in gc.adjacent_pairs(g):
            assert (lo, up) in edges or (up, lo) in edges


def test_product_group_orbits():
    # regular x regular: 2! * 2! distinct port arrangements
    t = gc.make_type("tst_reg22", 2, 2, "regular", "regular")
    assert len(t.group) == 1
    s = gc.make_type("tst_sym22", 2, 2, "trivial", "trivial")
    assert len(s.group) == 4 and s.dim == 1
    assert list(itertools.islice(gc.set_partitions([0]), 5)) == [[[0]]]
