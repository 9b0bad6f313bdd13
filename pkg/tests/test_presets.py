import pytest

from properad import graphcore as gc
from properad import presets
from properad.quadratic import QuadraticPresentation


@pytest.mark.parametrize("name", presets.CATALOG)
def test_roundtrip(name):
    p = presets.get(name)
    q = presets.roundtrip(p)
    assert q.types == p.types
    assert q.relations == p.relations


@pytest.mark.parametrize("name", presets.CATALOG)
def test_relations_are_quadratic(name):
    for r in presets.get(name).relations:
        assert all(gc.key_weight(k) == 2 for k in r)


def test_generator_dims():
    b = presets.get("bilie")
    assert b.generator_dim(1, 2) == 1 and b.generator_dim(2, 1) == 1
    e = presets.get("epsbi")
    assert e.generator_dim(1, 2) == 2 and e.generator_dim(2, 1) == 2


def test_bilie0_adds_the_loop():
    b, b0 = presets.get("bilie"), presets.get("bilie0")
    extra = [r for r in b0.relations if r not in b.relations]
    assert len(extra) == 1
    assert {k[:2] for k in extra[0]} == {(1, 1)}


def test_unknown_name():
    with pytest.raises(KeyError):
        presets.get("bi")


def test_broken_drops_one_relation():
    p = presets.broken("epsbi")
    assert len(p.relations) == len(presets.get("epsbi").relations) - 1
    with pytest.raises(ValueError):
        presets.broken("free_algebra")


def test_relation_validation():
    lie = presets.get("lie")
    g = next(iter(lie.relations[0]))
    with pytest.raises(ValueError):
        QuadraticPresentation("bad", (), ({g: 1},))
