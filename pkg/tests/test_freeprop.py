import pytest

from properad import graphcore as gc
from properad import presets
from properad.freeprop import admissible_cuts, canonical_combo, corolla, free_basis, substitute


def test_weight_zero_is_identity():
    V = presets.get("lie")
    assert free_basis(V, 0, 1, 1).dim == 1
    assert free_basis(V, 0, 1, 2).dim == 0


def test_generators_are_weight_one():
    V = presets.get("bilie")
    assert free_basis(V, 1, 1, 2).dim == 1
    assert free_basis(V, 1, 2, 1).dim == 1
    E = presets.get("epsbi")
    assert free_basis(E, 1, 1, 2).dim == 2


def test_free_operad_counts():
    # binary trees with 3 labelled leaves
    assert free_basis(presets.get("com"), 2, 1, 3).dim == 3
    assert free_basis(presets.get("lie"), 2, 1, 3).dim == 3
    assert free_basis(presets.get("as"), 2, 1, 3).dim == 12
    assert free_basis(presets.get("com"), 3, 1, 4).dim == 15


def test_genus_one_composite_survives_signs():
    # lambda on top of delta along two edges: sign twists cancel
    assert free_basis(presets.get("bilie"), 2, 1, 1).dim == 1
    # trivial x sgn twist kills it
    l = gc.make_type("fp_l", 1, 2, "trivial", "trivial")
    d = gc.make_type("fp_d", 2, 1, "sgn", "trivial")
    assert free_basis([l, d], 2, 1, 1).dim == 0


def test_bigrading():
    fb = free_basis(presets.get("epsbi"), 3, 2, 2)
    assert all(gc.key_weight(k) == 3 for k in fb.keys)


def test_substituting_a_corolla_is_identity():
    lie = presets.get("lie")
    t = lie.types[0]
    key, sign = gc.canonicalize(corolla(t))
    inner = {key: sign}
    for k in free_basis(lie, 2, 1, 3).keys:
        g = gc.decode(k)
        for v in range(g.nv):
            assert substitute(g, v, inner) == {k: 1}
    with pytest.raises(ValueError):
        substitute(corolla(t), 0, {gc.IDENTITY_KEY: 1})


def test_canonical_combo_cancels():
    g = corolla(presets.get("as").types[0])
    assert canonical_combo([(g, 1), (g, -1)]) == {}


def test_admissible_cuts_count_order_ideals():
    fb = free_basis(presets.get("com"), 2, 1, 3)
    for k in fb.keys:
        cuts = admissible_cuts(gc.decode(k))
        # chain of two vertices: empty, bottom, both
        assert len(cuts) == 3
