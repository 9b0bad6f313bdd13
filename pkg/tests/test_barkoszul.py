import math

import pytest

from properad import barkoszul as bk
from properad import presets
from properad.quadratic import koszul_dual_presentation, quotient_dim

SMALL = [(1, 1, 2), (2, 1, 3), (2, 2, 2), (3, 1, 4), (2, 2, 1), (3, 2, 3)]


@pytest.mark.parametrize("name", ["lie", "com", "as", "bilie", "epsbi", "halfbi", "frob", "bilie0"])
def test_d_squared_zero_small(name):
    p = presets.get(name)
    for rho, m, n in SMALL:
        for build in (bk.bar_slice, bk.cobar_slice, bk.koszul_complex):
            assert build(p, rho, m, n).d_squared_zero()


@pytest.mark.parametrize("name,dims", [("lie", [1, 1, 1]), ("com", [1, 2, 6]), ("as", [2, 6, 24])])
def test_kernel_route_operads(name, dims):
    p = presets.get(name)
    assert [bk.koszul_dual_dim(p, n - 1, 1, n) for n in (2, 3, 4)] == dims


def test_kernel_route_properads():
    b, e = presets.get("bilie"), presets.get("epsbi")
    for m, n in [(1, 2), (2, 2), (1, 3), (2, 3)]:
        assert bk.koszul_dual_dim(b, m + n - 2, m, n) == 1
        assert bk.koszul_dual_dim(e, m + n - 2, m, n) == math.factorial(m) * math.factorial(n)
    assert bk.koszul_dual_dim(b, 2, 1, 1) == 0


def test_kernel_route_equals_presentation_route():
    for name in ("bilie", "halfbi", "bilie0"):
        p = presets.get(name)
        q = koszul_dual_presentation(p)
        for d, m, n in [(2, 1, 1), (2, 2, 2), (3, 2, 3), (2, 1, 3)]:
            assert bk.koszul_dual_dim(p, d, m, n) == quotient_dim(q, d, m, n)


@pytest.mark.parametrize("name", ["as", "bilie", "epsbi"])
def test_koszul_complex_acyclic(name):
    p = presets.get(name)
    for d, m, n in [(1, 1, 2), (2, 1, 1), (2, 2, 2), (3, 1, 3), (2, 1, 3)]:
        h = bk.homology_dims(bk.koszul_complex(p, d, m, n))
        assert not any(h.values())


def test_koszul_euler_matches_complex():
    p = presets.get("epsbi")
    cx = bk.koszul_complex(p, 2, 2, 2)
    assert cx.euler_characteristic() == bk.koszul_euler(p, 2, 2, 2) == 0


def test_augmented_bar_homology_is_unit():
    p = presets.get("as")
    assert bk.homology_dims(bk.augmented_bar_slice(p, 0, 1, 1)) == {0: 1}
    for rho, m, n in [(1, 1, 2), (2, 1, 3), (3, 1, 4)]:
        cx = bk.augmented_bar_slice(p, rho, m, n)
        assert sum(cx.dims.values()) > 0
        assert not any(bk.homology_dims(cx).values())


def test_bar_top_cohomology_is_dual():
    p = presets.get("lie")
    cx = bk.bar_slice(p, 3, 1, 4)
    assert cx.dims[3] - cx.rank(3) == bk.koszul_dual_dim(p, 3, 1, 4)


@pytest.mark.parametrize("name", ["lie", "com", "as", "bilie"])
def test_cobar_top_cokernel_recovers_p(name):
    p = presets.get(name)
    for rho, m, n in [(2, 1, 3), (2, 2, 2), (3, 1, 4)]:
        cx = bk.cobar_slice(p, rho, m, n)
        top = max(cx.dims)
        assert cx.dims[top] - cx.rank(top - 1) == quotient_dim(p, rho, m, n)


def test_homology_refuses_broken_differential():
    cx = bk.ChainComplexSlice("bad", {2: 1, 1: 1, 0: 1}, {2: [{0: 1}], 1: [{0: 1}]})
    with pytest.raises(ValueError):
        bk.homology_dims(cx)


def test_subspace_coordinates():
    s = bk.Subspace([{0: 1, 1: 1}, {1: 1}])
    assert s.dim == 2
    with pytest.raises(ValueError):
        s.coords({2: 1})


def test_dump_format():
    cx = bk.bar_slice(presets.get("as"), 2, 1, 3)
    js = cx.to_json(True)
    assert js["dims"] and js["differentials"]["2"]
