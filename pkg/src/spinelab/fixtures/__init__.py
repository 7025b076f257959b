"""Loaders for the shipped JSON fixtures: algebras, morphisms, rules."""

from __future__ import annotations

import json
from importlib import resources

from spinelab.algebra import AlgebraMorphism, GradedAlgebra, parse_element


class FixtureError(RuntimeError):
    """A fixture file is missing or malformed (configuration error)."""


def _load(name: str) -> dict:
    try:
        path = resources.files("spinelab.fixtures").joinpath(name)
        return json.loads(path.read_text())
    except (FileNotFoundError, ModuleNotFoundError) as exc:
        raise FixtureError(f"fixture {name} not found") from exc
    except json.JSONDecodeError as exc:
        raise FixtureError(f"fixture {name} is not valid JSON") from exc


def load_algebras() -> dict:
    data = _load("algebras.json")
    return {name: GradedAlgebra.from_json(cfg) for name, cfg in data.items()}


def load_algebra(name: str) -> GradedAlgebra:
    algebras = load_algebras()
    if name not in algebras:
        raise FixtureError(f"no algebra fixture named {name}")
    return algebras[name]


def load_morphism(name: str, algebras: dict | None = None) -> AlgebraMorphism:
    data = _load("morphisms.json")
    if name not in data:
        raise FixtureError(f"no morphism fixture named {name}")
    cfg = data[name]
    algebras = algebras or load_algebras()
    source = algebras[cfg["source"]]
    target = algebras[cfg["target"]]
    images = {
        gen: parse_element(target, expr) for gen, expr in cfg["images"].items()
    }
    return AlgebraMorphism(source, target, images)


def load_coefficient_rule() -> dict:
    return _load("coefficient_rule.json")


def load_expected_tables() -> dict:
    return _load("expected_tables.json")


def load_thm_input(p: int):
    """Pluggable recursion input: (algebra, restriction images as strings)."""
    data = _load(f"thm_input_p{p}.json")
    algebra = GradedAlgebra.from_json(data["algebra"])
    return algebra, data["restriction_images"]
