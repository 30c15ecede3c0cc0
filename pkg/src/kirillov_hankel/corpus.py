"""Seeded random profiles used by the verification suites and tests."""
from __future__ import annotations

import numpy as np

from .function_model import Atom, Profile, Side
from .special_functions import as_order


def random_atom(rng: np.random.Generator, *, max_degree: int = 2, real: bool = False,
                modulated: bool = False, complex_rate: bool = False) -> Atom:
    degree = int(rng.integers(0, max_degree + 1))
    coeffs = rng.normal(size=degree + 1)
    if not real:
        coeffs = coeffs + 1j * rng.normal(size=degree + 1)
    coeffs[-1] = coeffs[-1] if abs(coeffs[-1]) > 0.1 else 1.0
    rate = complex(rng.uniform(0.5, 3.0))
    if complex_rate and not real:
        rate += 1j * rng.uniform(-1.0, 1.0)
    modulation = float(rng.uniform(-2.0, 2.0)) if modulated else 0.0
    return Atom(tuple(complex(c) for c in coeffs), rate, modulation)


def random_profile(rng: np.random.Generator, nu, *, atoms: int | None = None,
                   side: Side = Side.POSITIVE, **kwargs) -> Profile:
    """A sum of 1-3 random atoms (rates in [0.5, 3], degrees <= 2 by default)."""
    count = int(rng.integers(1, 4)) if atoms is None else atoms
    return Profile(as_order(nu), tuple(random_atom(rng, **kwargs) for _ in range(count)),
                   side).merged()


def corpus(nu, size: int = 10, seed: int = 0, **kwargs) -> list[Profile]:
    rng = np.random.default_rng(seed)
    return [random_profile(rng, nu, **kwargs) for _ in range(size)]


__all__ = ["random_atom", "random_profile", "corpus"]
