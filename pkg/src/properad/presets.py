"""Built-in quadratic presentations, stored as JSON under ``data/``.

``tools/make_presets.py`` regenerates the files.  Leg convention: inputs and
outputs of each generator are numbered left to right as drawn.
"""

from __future__ import annotations

import json
from importlib import resources

from .quadratic import QuadraticPresentation, presentation_from_json

CATALOG = ("lie", "com", "as", "bilie", "bilie0", "epsbi", "halfbi", "frob",
           "dualnumbers", "free_algebra", "trivial_algebra", "free_polyadic")

_LOADED: dict = {}


def _read(name: str) -> dict:
    return json.loads(resources.files(__package__).joinpath("data", f"{name}.json").read_text())


def get(name: str) -> QuadraticPresentation:
    """The named preset; unknown names raise ``KeyError``."""
    if name not in CATALOG:
        raise KeyError(f"unknown preset {name!r}; known: {', '.join(CATALOG)}")
    hit = _LOADED.get(name)
    if hit is None:
        hit = _LOADED[name] = presentation_from_json(_read(name))
    return hit


def broken(name: str, drop: int = -1) -> QuadraticPresentation:
    """Copy of a preset with relation ``drop`` removed (negative controls)."""
    p = get(name)
    if not p.relations:
        raise ValueError(f"preset {name!r} has no relation to drop")
    rels = list(p.relations)
    del rels[drop]
    return QuadraticPresentation(f"{name}-broken", p.types, tuple(rels),
                                 {**p.meta, "koszul": None, "broken_from": name})


def roundtrip(p: QuadraticPresentation) -> QuadraticPresentation:
    return presentation_from_json(json.loads(json.dumps(p.to_json())))
