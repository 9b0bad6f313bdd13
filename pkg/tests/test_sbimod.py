import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from properad import graphcore as gc
from properad import sbimod
from properad.sbimod import (SBimodComponent, SBimodule, averaging_projector_dim,
                             coinvariant_dim, compose_connected, compose_full, concatenate,
                             configuration_dim)

I = SBimodule.unit()


def lie_module(tag):
    l = gc.make_type(f"{tag}.l", 1, 2, "trivial", "sgn")
    return SBimodule((I.components[0], SBimodComponent.from_vertex_type(l)))


def test_unit_compositions():
    assert compose_connected(I, I, 1, 1)[1] == 1
    assert compose_full(I, I, 2, 2) == 2
    assert compose_full(I, I, 3, 3) == 6
    assert configuration_dim(I, I, 2, 2, connected=False) == 2


def test_coinvariants():
    swap = ((1, 0), (1, 1))
    signed = ((1, 0), (-1, -1))
    assert averaging_projector_dim(2, [swap]) == 1
    assert averaging_projector_dim(2, [signed]) == 1
    assert averaging_projector_dim(3, []) == 3
    pts = [0, 1]
    assert coinvariant_dim(pts, lambda p: [(1 - p, 1)]) == 1
    assert coinvariant_dim([0], lambda p: [(0, -1)]) == 0


def test_component_checks():
    with pytest.raises(ValueError):
        # not an involution
        SBimodComponent(1, 2, 1, 0, 3, {}, {0: ((1, 2, 0), (1, 1, 1))})
    with pytest.raises(ValueError):
        SBimodule((SBimodComponent(0, 1, 1, 0, 1),))


def test_induced_representation_dim():
    for kinds, dim in [(("trivial", "sgn"), 1), (("regular", "regular"), 2)]:
        t = gc.make_type(f"sb.ind.{kinds[0]}{kinds[1]}", 1, 2, *kinds)
        assert SBimodComponent.from_vertex_type(t).basis_size == dim


def test_lie_lieop_graph_route_equals_configuration_route():
    L = lie_module("sbA")
    R = L.reversed()
    for m, n in [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3), (3, 1)]:
        for w in range(0, 3):
            assert compose_connected(L, R, m, n, weight=w)[1] == configuration_dim(L, R, m, n, weight=w)
    assert compose_connected(L, R, 2, 2, weight=2)[1] == 4


def test_full_product_matches_disconnected_configurations():
    L = lie_module("sbB")
    R = L.reversed()
    for m, n in [(2, 2), (2, 1), (1, 2)]:
        assert compose_full(L, R, m, n) == configuration_dim(L, R, m, n, connected=False)


def test_concatenation_binomial():
    assert concatenate(I, I, 2, 2) == 4
    k = SBimodule.ground()
    assert concatenate(k, k, 0, 0) == 1


def test_operadic_degeneration():
    # one output throughout: classical composition of S-modules
    L = lie_module("sbC")
    # (L ∘ L)(1, 3) weight 2 = 3 trees
    assert compose_connected(L, L, 1, 3, weight=2)[1] == 3


@given(st.integers(0, 10 ** 6))
def test_random_pairs_two_routes_agree(seed):
    rng = random.Random(seed)
    Q = sbimod.random_monomial(rng, f"sbh{seed}Q", arities=((1, 2), (2, 1), (1, 1)), max_components=1)
    P = sbimod.random_monomial(rng, f"sbh{seed}P", arities=((1, 2), (2, 1), (1, 1)), max_components=1)
    for m, n in [(1, 1), (1, 2), (2, 1)]:
        assert compose_connected(Q, P, m, n)[1] == configuration_dim(Q, P, m, n)
