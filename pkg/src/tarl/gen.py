"""Seeded random formula generation for round-trip and agreement testing."""

from __future__ import annotations

import random
from typing import Sequence

from .formulas import And, Formula, Fusion, Imp, Neg, Or, Var

__all__ = ["random_formula", "random_core_formula"]

_BINARY = (And, Or, Imp, Fusion)


def random_formula(rng: random.Random, size: int, variables: Sequence[str],
                   allow_fusion: bool = True) -> Formula:
    """A uniform-ish random formula with exactly `size` connective/leaf nodes."""
    if size <= 1:
        return Var(rng.choice(list(variables)))
    if size == 2 or rng.random() < 0.25:
        return Neg(random_formula(rng, size - 1, variables, allow_fusion))
    ops = _BINARY if allow_fusion else _BINARY[:3]
    op = rng.choice(ops)
    left = rng.randint(1, size - 2)
    return op(random_formula(rng, left, variables, allow_fusion),
              random_formula(rng, size - 1 - left, variables, allow_fusion))


def random_core_formula(rng: random.Random, size: int,
                        variables: Sequence[str]) -> Formula:
    return random_formula(rng, size, variables, allow_fusion=False)
