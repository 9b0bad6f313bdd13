import math

import pytest

from properad import presets
from properad.quadratic import (ideal_basis, koszul_dual_presentation, quotient_dim,
                                replacement_model_dim, reverse)


@pytest.mark.parametrize("n", range(1, 6))
def test_classical_operads(n):
    d = n - 1
    assert quotient_dim(presets.get("com"), d, 1, n) == 1
    assert quotient_dim(presets.get("lie"), d, 1, n) == math.factorial(n - 1)
    assert quotient_dim(presets.get("as"), d, 1, n) == math.factorial(n)


def test_lie_ideal_rank():
    assert len(ideal_basis(presets.get("lie"), 2, 1, 3)) == 1


def test_bilie_low_cells():
    b = presets.get("bilie")
    assert quotient_dim(b, 2, 1, 1) == 1
    assert quotient_dim(b, 2, 2, 2) == 4
    assert len(ideal_basis(b, 2, 2, 2)) == 1
    assert quotient_dim(presets.get("bilie0"), 2, 1, 1) == 0


def test_dual_presentation_of_classical_operads():
    for name, partner in (("lie", "com"), ("com", "lie"), ("as", "as")):
        q = koszul_dual_presentation(presets.get(name))
        for n in range(1, 5):
            assert quotient_dim(q, n - 1, 1, n) == quotient_dim(presets.get(partner), n - 1, 1, n)


def test_bilie_dual_matches_frob():
    q = koszul_dual_presentation(presets.get("bilie"))
    f = presets.get("frob")
    for d in range(0, 4):
        for s in range(2, 6):
            for m in range(1, s):
                assert quotient_dim(q, d, m, s - m) == quotient_dim(f, d, m, s - m)


def test_reverse_transposes_dims():
    e = presets.get("epsbi")
    r = reverse(e)
    for d, m, n in [(1, 1, 2), (2, 1, 3), (2, 2, 2), (3, 1, 3)]:
        assert quotient_dim(r, d, n, m) == quotient_dim(e, d, m, n)


def test_replacement_model_low_weight():
    lie = presets.get("lie")
    assert replacement_model_dim(lie, reverse(lie), 2, 2, 2) == 4
    assert replacement_model_dim(lie, reverse(lie), 0, 1, 1) == 1
    with pytest.raises(ValueError):
        replacement_model_dim(reverse(lie), lie, 1, 1, 2)


def test_halfbi_dual_well_formed():
    q = koszul_dual_presentation(presets.get("halfbi"))
    assert q.types and all(len(r) for r in q.relations)
