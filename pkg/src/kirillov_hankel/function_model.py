"""Closed-form one-sided profiles x**((nu+1)/2) * sum_k p_k(x) exp((-a_k + i b_k) x).

A :class:`Profile` lives on the positive half-line, or on the negative
half-line in ``|x|`` coordinates. The family is closed under the Euler
operator ``x d/dx``, under multiplication by ``exp(i y x)``, under positive
dilations and (see :mod:`kirillov_hankel.hankel`) under the Hankel
transform, which is what makes exact oracles possible.

Profiles are entered through a small text format, for example::

    (2,0)*x^1*exp(-0.5x) + exp(-2x)
    -1.5*x^2*exp(-(1,0.25)x)*osc(3x)

Each term is ``[coeff *] [x^k *] exp(-RATE x) [* osc(b x)]``; complex
numbers are written ``(re,im)``.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, SpecSemanticError, SpecSyntaxError
from .special_functions import ComplexOrder, as_order

DEFAULT_GRID = "log:1e-4:50:512"


class Side(enum.Enum):
    POSITIVE = "+"
    NEGATIVE = "-"

    @property
    def sign(self) -> int:
        return 1 if self is Side.POSITIVE else -1

    def flipped(self) -> "Side":
        return Side.NEGATIVE if self is Side.POSITIVE else Side.POSITIVE


@dataclass(frozen=True)
class Atom:
    """Polynomial times ``exp(-rate*x + i*modulation*x)``; trailing zeros are trimmed."""

    coefficients: tuple[complex, ...]
    rate: complex
    modulation: float = 0.0

    def __post_init__(self):
        coeffs = [complex(c) for c in self.coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        if not coeffs:
            raise DomainError("an atom needs a nonzero polynomial")
        if not all(np.isfinite(c.real) and np.isfinite(c.imag) for c in coeffs):
            raise DomainError("atom coefficients must be finite")
        rate = complex(self.rate)
        if not rate.real > 0 or not np.isfinite(rate.imag) or not np.isfinite(rate.real):
            raise DomainError(f"atom rate needs Re > 0, got {rate}")
        modulation = float(self.modulation)
        if not np.isfinite(modulation):
            raise DomainError("modulation must be finite")
        object.__setattr__(self, "coefficients", tuple(coeffs))
        object.__setattr__(self, "rate", rate)
        object.__setattr__(self, "modulation", modulation)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def exponent(self) -> complex:
        """lambda with the atom equal to p(x) exp(lambda x)."""
        return -self.rate + 1j * self.modulation

    def polynomial(self, x):
        x = np.asarray(x)
        acc = np.zeros(x.shape, dtype=complex)
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return self.polynomial(x) * np.exp(self.exponent * x)


def _atom_or_none(coefficients, rate, modulation=0.0):
    if not any(c != 0 for c in coefficients):
        return None
    return Atom(tuple(coefficients), rate, modulation)


@dataclass(frozen=True)
class Profile:
    """Element of the Schwartz-type space on one half-line, as an atom sum."""

    order: ComplexOrder
    atoms: tuple[Atom, ...] = ()
    side: Side = Side.POSITIVE

    def __post_init__(self):
        object.__setattr__(self, "order", as_order(self.order))
        object.__setattr__(self, "atoms", tuple(self.atoms))
        object.__setattr__(self, "side", Side(self.side))

    # -- construction helpers
    @classmethod
    def zero(cls, order, side: Side = Side.POSITIVE) -> "Profile":
        return cls(as_order(order), (), side)

    @classmethod
    def single(cls, order, coefficients: Sequence[complex], rate: complex,
               modulation: float = 0.0, side: Side = Side.POSITIVE) -> "Profile":
        return cls(as_order(order), (Atom(tuple(coefficients), rate, modulation),), side)

    @property
    def exponent(self) -> complex:
        """The power (nu+1)/2 multiplying the atom sum."""
        return self.order.half_weight

    @property
    def is_zero(self) -> bool:
        return not self.atoms

    @property
    def min_rate(self) -> float:
        return min((a.rate.real for a in self.atoms), default=np.inf)

    @property
    def max_frequency(self) -> float:
        return max((abs(a.rate.imag) + abs(a.modulation) for a in self.atoms), default=0.0)

    def merged(self) -> "Profile":
        """Combine atoms sharing rate and modulation; drop cancelled ones."""
        groups: dict[tuple[complex, float], list[complex]] = {}
        for atom in self.atoms:
            key = (atom.rate, atom.modulation)
            acc = groups.setdefault(key, [])
            for k, c in enumerate(atom.coefficients):
                if k < len(acc):
                    acc[k] += c
                else:
                    acc.append(c)
        atoms = [a for (rate, mod), cs in groups.items() if (a := _atom_or_none(cs, rate, mod))]
        return Profile(self.order, tuple(atoms), self.side)

    # -- evaluation
    def __call__(self, x):
        return evaluate(self, x)

    def local(self, t):
        """Value at |x| = t >= 0 regardless of side (vectorised, no checks)."""
        t = np.asarray(t, dtype=float)
        total = np.zeros(t.shape, dtype=complex)
        for atom in self.atoms:
            total = total + atom(t)
        with np.errstate(divide="ignore", invalid="ignore"):
            power = np.where(t > 0, np.exp(self.exponent * np.log(np.where(t > 0, t, 1.0))), 0)
        return power * total

    # -- algebra
    def _like(self, atoms: Iterable[Atom | None]) -> "Profile":
        return Profile(self.order, tuple(a for a in atoms if a is not None), self.side)

    def __add__(self, other: "Profile") -> "Profile":
        if not isinstance(other, Profile):
            return NotImplemented
        if other.order != self.order or other.side != self.side:
            raise DomainError("profiles of different order or side cannot be added")
        return Profile(self.order, self.atoms + other.atoms, self.side).merged()

    def __neg__(self) -> "Profile":
        return self.scaled(-1)

    def __sub__(self, other: "Profile") -> "Profile":
        return self + (-other)

    def scaled(self, c: complex) -> "Profile":
        c = complex(c)
        if c == 0:
            return Profile.zero(self.order, self.side)
        return self._like(Atom(tuple(c * a for a in atom.coefficients), atom.rate, atom.modulation)
                          for atom in self.atoms)

    def modulated(self, y: float) -> "Profile":
        """Multiply by exp(i*y*x) (x is the signed coordinate)."""
        shift = self.side.sign * float(y)
        return self._like(Atom(a.coefficients, a.rate, a.modulation + shift) for a in self.atoms)

    def dilated(self, c: float) -> "Profile":
        """x -> f(c*x) for c > 0."""
        c = float(c)
        if not c > 0:
            raise DomainError("dilation factor must be positive")
        lead = c ** self.exponent
        return self._like(
            Atom(tuple(lead * coef * c ** k for k, coef in enumerate(a.coefficients)),
                 a.rate * c, a.modulation * c)
            for a in self.atoms)

    def mirrored(self) -> "Profile":
        """x -> f(-x): the same atoms read on the other half-line."""
        return Profile(self.order, self.atoms, self.side.flipped())

    def conjugate(self) -> "Profile":
        """Pointwise complex conjugate (order conjugated too)."""
        order = ComplexOrder(self.order.value.conjugate())
        atoms = tuple(Atom(tuple(c.conjugate() for c in a.coefficients), a.rate.conjugate(),
                           -a.modulation) for a in self.atoms)
        return Profile(order, atoms, self.side)

    def times_power(self, k: int) -> "Profile":
        """Multiply by |x|**k for a nonnegative integer k."""
        return self._like(Atom((0,) * k + a.coefficients, a.rate, a.modulation)
                          for a in self.atoms)

    def __str__(self):
        return format_spec(self)


@dataclass(frozen=True)
class SampledFunction:
    """Complex samples on a strictly increasing positive grid."""

    grid: np.ndarray
    values: np.ndarray
    order: ComplexOrder
    descriptor: str = field(default="", compare=False)

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=complex)
        _check_grid(grid)
        if values.shape != grid.shape:
            raise DomainError("values and grid differ in length")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "order", as_order(self.order))

    def __len__(self):
        return self.grid.size

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values)))

    def relative_error(self, reference) -> float:
        """sup |self - reference| / sup |reference| over the grid."""
        ref = reference.values if isinstance(reference, SampledFunction) else np.asarray(reference)
        return float(np.max(np.abs(self.values - ref)) / np.max(np.abs(ref)))


def _check_grid(grid: np.ndarray):
    if grid.ndim != 1 or grid.size < 2:
        raise DomainError("a grid needs at least two points")
    if not np.all(np.isfinite(grid)) or grid[0] <= 0:
        raise DomainError("grid points must be positive and finite")
    if np.any(np.diff(grid) <= 0):
        raise DomainError("grid must be strictly increasing")


def make_grid(descriptor) -> np.ndarray:
    """Grid from ``log:a:b:n``, ``lin:a:b:n`` or an explicit sequence of points."""
    if isinstance(descriptor, str):
        parts = descriptor.split(":")
        if len(parts) != 4 or parts[0] not in ("log", "lin"):
            raise DomainError(f"grid descriptor must look like log:a:b:n, got {descriptor!r}")
        try:
            a, b, n = float(parts[1]), float(parts[2]), int(parts[3])
        except ValueError as exc:
            raise DomainError(f"bad grid descriptor {descriptor!r}") from exc
        if n < 2 or not 0 < a < b:
            raise DomainError("grid needs 0 < a < b and n >= 2")
        grid = np.geomspace(a, b, n) if parts[0] == "log" else np.linspace(a, b, n)
    else:
        grid = np.asarray(descriptor, dtype=float)
        if grid.size == 0:
            raise DomainError("empty grid")
    _check_grid(grid)
    return grid


def evaluate(f: Profile, x):
    """Value of the profile at signed x (0 allowed, giving the limit 0)."""
    x_arr = np.asarray(x, dtype=float)
    wrong = (f.side.sign * x_arr) < 0
    if np.any(wrong):
        raise DomainError(f"{'positive' if f.side is Side.POSITIVE else 'negative'}-side "
                          f"profile evaluated at x = {x_arr[wrong].ravel()[0]}")
    out = f.local(np.abs(x_arr))
    return out[()] if out.ndim == 0 else out


def euler_derivative(f: Profile) -> Profile:
    """D f = x f'(x), again a profile of the same order.

    For one atom: D(x^s p e^{lx}) = x^s (s p + x p' + l x p) e^{lx}; on the
    negative side the same identity holds in |x| since x d/dx = |x| d/d|x|.
    """
    s = f.exponent
    atoms = []
    for a in f.atoms:
        lam = a.exponent
        cs = a.coefficients
        new = [(s + k) * cs[k] for k in range(len(cs))] + [0j]
        for k in range(len(cs)):
            new[k + 1] += lam * cs[k]
        atoms.append(_atom_or_none(new, a.rate, a.modulation))
    return f._like(atoms)


def sample(f: Profile, grid=DEFAULT_GRID) -> SampledFunction:
    """Evaluate on a grid of |x| values (negative-side profiles at -grid)."""
    points = make_grid(grid)
    values = f.local(points)
    descriptor = grid if isinstance(grid, str) else ""
    return SampledFunction(points, values, f.order, descriptor)


# ------------------------------------------------------------------ text format

_NUMBER = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")
_INT = re.compile(r"\d+")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def offset(self, pos: int | None = None) -> int:
        return len(self.text[: self.pos if pos is None else pos].encode("utf-8"))

    def fail(self, what: str, pos: int | None = None):
        raise SpecSyntaxError(f"expected {what}", self.offset(pos))

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self, literal: str) -> bool:
        self.skip()
        return self.text.startswith(literal, self.pos)

    def accept(self, literal: str) -> bool:
        if self.peek(literal):
            self.pos += len(literal)
            return True
        return False

    def expect(self, literal: str):
        if not self.accept(literal):
            self.fail(repr(literal))

    def number(self, signed: bool = True) -> float:
        self.skip()
        m = _NUMBER.match(self.text, self.pos)
        if not m or (not signed and m.group(0)[0] in "+-"):
            self.fail("a number")
        self.pos = m.end()
        return float(m.group(0))

    def scalar(self) -> complex:
        """Real literal or (re,im)."""
        if self.accept("("):
            re_part = self.number()
            self.expect(",")
            im_part = self.number()
            self.expect(")")
            return complex(re_part, im_part)
        return complex(self.number())

    def term(self, sign: float):
        coeff = 1 + 0j
        power = 0
        self.skip()
        if not self.peek("exp(") and not self.peek("x"):
            coeff = self.scalar()
            self.expect("*")
        if self.accept("x"):
            power = 1
            if self.accept("^"):
                self.skip()
                m = _INT.match(self.text, self.pos)
                if not m:
                    self.fail("an integer exponent")
                self.pos = m.end()
                power = int(m.group(0))
            self.expect("*")
        self.expect("exp(")
        self.expect("-")
        self.skip()
        rate_pos = self.pos
        if self.peek("x"):
            rate = 1 + 0j
        else:
            rate = self.scalar()
        self.expect("x")
        self.expect(")")
        if not rate.real > 0:
            raise SpecSemanticError(f"rate {rate} does not decay (need Re > 0)", self.offset(rate_pos))
        modulation = 0.0
        if self.accept("*"):
            self.expect("osc(")
            modulation = self.number()
            self.expect("x")
            self.expect(")")
        return sign * coeff, power, rate, modulation

    def parse(self):
        terms = []
        self.skip()
        if self.text.strip() == "0":
            return terms
        sign = -1.0 if self.accept("-") else 1.0
        while True:
            terms.append(self.term(sign))
            self.skip()
            if self.pos >= len(self.text):
                return terms
            if self.accept("+"):
                sign = 1.0
            elif self.accept("-"):
                sign = -1.0
            else:
                self.fail("'+', '-' or end of input")


def parse_spec(text: str, nu=0.0, side: Side = Side.POSITIVE) -> Profile:
    """Parse the text format into a profile of order ``nu``.

    Terms sharing rate and modulation are collected into one atom, in order
    of first appearance.
    """
    groups: dict[tuple[complex, float], dict[int, complex]] = {}
    for coeff, power, rate, modulation in _Parser(text).parse():
        poly = groups.setdefault((rate, modulation), {})
        poly[power] = poly.get(power, 0) + coeff
    atoms = []
    for (rate, modulation), poly in groups.items():
        coeffs = [poly.get(k, 0j) for k in range(max(poly) + 1)]
        atom = _atom_or_none(coeffs, rate, modulation)
        if atom is not None:
            atoms.append(atom)
    return Profile(as_order(nu), tuple(atoms), Side(side))


def _fmt_scalar(c: complex) -> str:
    c = complex(c)
    if c.imag == 0 and not np.signbit(c.imag):
        return repr(c.real)
    return f"({c.real!r},{c.imag!r})"


def format_spec(f: Profile) -> str:
    """Canonical text for a profile; ``parse_spec`` reads it back exactly."""
    terms = []
    for a in f.atoms:
        rate = _fmt_scalar(a.rate)
        tail = f"exp(-{rate}x)" + (f"*osc({a.modulation!r}x)" if a.modulation != 0 else "")
        for k, c in enumerate(a.coefficients):
            if c == 0:
                continue
            power = f"x^{k}*" if k else ""
            terms.append(f"{_fmt_scalar(c)}*{power}{tail}")
    return " + ".join(terms) if terms else "0"


__all__ = [
    "Atom", "Profile", "Side", "SampledFunction", "DEFAULT_GRID", "make_grid", "evaluate",
    "euler_derivative", "sample", "parse_spec", "format_spec",
]
