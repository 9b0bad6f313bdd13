import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from properad import graphcore as gc
from properad import presets, sbimod, series
from properad.sbimod import SBimodComponent, SBimodule

I = SBimodule.unit()


def test_series_examples():
    f = series.series_of(presets.get("bilie"), 2)
    assert f[1, 1, 0] == 1
    assert f[1, 2, 1] == Fraction(1, 2)
    assert series.series_of(presets.get("epsbi"), 1)[1, 2, 1] == 1


def test_truncation_is_loud():
    f = series.series_of(presets.get("lie"), 2, M=1, N=2, total=3)
    with pytest.raises(series.TruncationError):
        f[1, 3, 2]
    with pytest.raises(series.TruncationError):
        f[1, 2, 3]
    with pytest.raises(series.TruncationError):
        series.psi(f, f, 1, 2, 2)
    with pytest.raises(series.TruncationError):
        series.TruncatedSeries1(2, [1, 2])[3]


def test_psi_of_units():
    f = series.series_of_sbimodule(I, 0)
    assert series.psi_coefficient(f, f, 1, 1, 0) == 1


def test_psi_with_unit_is_identity():
    e = series.series_of(presets.get("epsbi"), 2)
    u = series.series_of_sbimodule(I, 2)
    for m, n, d in [(1, 2, 1), (2, 2, 2), (1, 3, 2), (2, 1, 1)]:
        assert series.psi_coefficient(u, e, m, n, d) == e[m, n, d]
        assert series.psi_coefficient(e, u, m, n, d) == e[m, n, d]


@given(st.integers(0, 10 ** 6))
def test_psi_equals_composite_for_free_actions(seed):
    rng = random.Random(seed)
    Q = sbimod.random_monomial(rng, f"srQ{seed}", kinds=("regular",))
    P = sbimod.random_monomial(rng, f"srP{seed}", kinds=("regular",))
    assert series.psi_vs_compose(Q, P, 4, 2)["ok"]


def test_literal_display_overcounts():
    rng = random.Random(1)
    Q = sbimod.random_monomial(rng, "litQ", kinds=("regular",), max_components=1, arities=((1, 2),))
    rep = series.psi_vs_compose(Q, Q, 4, 2, literal=True)
    assert not rep["ok"]


def test_dims_alone_cannot_determine_the_composite():
    # same dimensions, different characters, different composite dims
    d = SBimodComponent.from_vertex_type(gc.make_type("ch.d", 2, 1, "trivial", "trivial"))
    lt = SBimodComponent.from_vertex_type(gc.make_type("ch.lt", 1, 2, "trivial", "trivial"))
    ls = SBimodComponent.from_vertex_type(gc.make_type("ch.ls", 1, 2, "trivial", "sgn"))
    P = SBimodule((I.components[0], d))
    Qt = SBimodule((I.components[0], lt))
    Qs = SBimodule((I.components[0], ls))
    assert series.series_of_sbimodule(Qt, 2).coeffs == series.series_of_sbimodule(Qs, 2).coeffs
    assert sbimod.compose_connected(Qt, P, 1, 1, weight=2)[1] == 1
    assert sbimod.compose_connected(Qs, P, 1, 1, weight=2)[1] == 0


@pytest.mark.parametrize("name", ["epsbi", "as", "lie", "com"])
def test_koszul_equation_free_cases(name):
    rep = series.verify_koszul_equation(presets.get(name), 5, 3)
    assert rep["ok"], rep["cells"]


def test_koszul_equation_bilie_genus_one_residual():
    rep = series.verify_koszul_equation(presets.get("bilie"), 5, 3)
    assert not rep["ok"]
    assert {"m": 1, "n": 1, "d": 2, "residual": "1/2"} in rep["cells"]


def test_negative_control():
    rep = series.verify_koszul_equation(presets.broken("epsbi"), 5, 3, dual_pres=presets.get("epsbi"))
    assert not rep["ok"] and rep["deviation"] != "0"


@pytest.mark.parametrize("name", ["dualnumbers", "free_algebra", "trivial_algebra"])
def test_algebra_equation(name):
    assert series.algebra_equation(presets.get(name), 8)["ok"]


def test_algebra_shape_enforced():
    with pytest.raises(ValueError):
        series.algebra_equation(presets.get("lie"), 3)
    with pytest.raises(ValueError):
        series.operad_equation(presets.get("bilie"), 3)


@pytest.mark.parametrize("name", ["com", "lie", "as", "trivial_algebra"])
def test_operad_equation_low_order(name):
    assert series.operad_equation(presets.get(name), 4)["ok"]


def test_associahedra():
    rep = series.associahedra(8)
    assert rep["P"][1] == [2, 1]
    assert rep["P"][2] == [5, 5, 1]
    assert rep["ok"] and not rep["relation_residual"]
    assert rep["plus_sign_closed_form_is_series"] is False


@pytest.mark.parametrize("leaves", range(2, 7))
def test_planar_tree_oracle_vs_recursion(leaves):
    counts = series.free_operad_counts(leaves, leaves)
    oracle = series.planar_tree_counts(leaves)
    assert {d: int(c) for (n, d), c in counts.items() if n == leaves} == oracle


def test_top_cell_of_associahedron_is_one():
    rep = series.associahedra(10)
    for n, p in rep["P"].items():
        assert p[-1] == 1 and p[0] == math.comb(2 * n + 2, n + 1) // (n + 2)
