"""SL(2,R) and GL(2,R) elements and their actions on the two function models.

Generators::

    n(y) = [[1, y], [0, 1]]    s(z) = [[z, 0], [0, 1/z]]
    w    = [[0, -1], [1, 0]]   r(t) = [[cos t, sin t], [-sin t, cos t]]

The induced model acts on functions phi of the line,
``(g phi)(x) = (rx+p)^{-d-1} phi((sx+q)/(rx+p))`` for ``g = [[p, q], [r, s]]``.
The Kirillov model acts on half-line profiles generator by generator:

* ``n(y)``: multiplication by ``exp(i y x)`` (x signed),
* ``s(z)``: ``sgn(z)^{d+1} f(z^2 x)``,
* ``w``: ``i^{-(d+1)} H_d`` on the positive side, ``i^{d+1} H_d`` on the negative side.

Every generator maps the atom family to itself, so the action is exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, SingularPointError
from .function_model import Atom, Profile, Side
from .hankel import hankel_profile
from .intertwiners import InducedFunction, induced_from_phi
from .quadrature import DEFAULT_BUDGET, integrate_halfline_family
from .special_functions import bessel_j_array

_DET_TOL = 1e-12


# ------------------------------------------------------------------ group elements

@dataclass(frozen=True)
class GroupElement:
    """[[p, q], [r, s]] with determinant one (normalised on construction)."""

    p: float
    q: float
    r: float
    s: float

    def __post_init__(self):
        vals = [float(v) for v in (self.p, self.q, self.r, self.s)]
        if not all(math.isfinite(v) for v in vals):
            raise DomainError("matrix entries must be finite")
        det = vals[0] * vals[3] - vals[1] * vals[2]
        if not det > 0:
            raise DomainError(f"SL2 element needs a positive determinant, got {det}")
        if abs(det - 1) > _DET_TOL:
            scale = 1 / math.sqrt(det)
            vals = [v * scale for v in vals]
        for name, v in zip("pqrs", vals):
            object.__setattr__(self, name, v)

    # -- constructors
    @classmethod
    def identity(cls) -> "GroupElement":
        return cls(1.0, 0.0, 0.0, 1.0)

    @classmethod
    def n(cls, y: float) -> "GroupElement":
        return cls(1.0, y, 0.0, 1.0)

    @classmethod
    def s(cls, z: float) -> "GroupElement":
        if z == 0:
            raise DomainError("s(z) needs z != 0")
        return cls(z, 0.0, 0.0, 1 / z)

    @classmethod
    def w(cls) -> "GroupElement":
        return cls(0.0, -1.0, 1.0, 0.0)

    @classmethod
    def r(cls, theta: float) -> "GroupElement":
        c, sn = math.cos(theta), math.sin(theta)
        return cls(c, sn, -sn, c)

    @classmethod
    def from_array(cls, m) -> "GroupElement":
        m = np.asarray(m, dtype=float)
        return cls(m[0, 0], m[0, 1], m[1, 0], m[1, 1])

    # -- algebra
    def as_array(self) -> np.ndarray:
        return np.array([[self.p, self.q], [self.r, self.s]])

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement.from_array(self.as_array() @ other.as_array())

    def inverse(self) -> "GroupElement":
        return GroupElement(self.s, -self.q, -self.r, self.p)

    def close_to(self, other: "GroupElement", tol: float = 1e-12) -> bool:
        return bool(np.max(np.abs(self.as_array() - other.as_array())) <= tol)


@dataclass(frozen=True)
class IwasawaForm:
    """g = n(y) s(a) r(theta) with a != 0 and theta in (0, pi]."""

    y: float
    a: float
    theta: float

    def __post_init__(self):
        if self.a == 0:
            raise DomainError("a must be nonzero")
        if not 0 < self.theta <= math.pi:
            raise DomainError("theta must lie in (0, pi]")

    def to_element(self) -> GroupElement:
        return GroupElement.n(self.y) @ GroupElement.s(self.a) @ GroupElement.r(self.theta)


def iwasawa(g: GroupElement) -> IwasawaForm:
    """The unique n(y) s(a) r(theta) factorisation with theta in (0, pi]."""
    if g.r != 0:
        a = -math.copysign(1.0, g.r) / math.hypot(g.r, g.s)
        sin_t, cos_t = -g.r * a, g.s * a
        theta = math.atan2(sin_t, cos_t)
    else:
        a = -1.0 / g.s
        theta = math.pi
        sin_t, cos_t = 0.0, -1.0
    y = a * (g.q * cos_t - g.p * sin_t) + 0.0
    return IwasawaForm(y, a, theta)


@dataclass(frozen=True)
class Generator:
    """One of n(param), s(param), w."""

    kind: str
    param: float = 0.0

    def __post_init__(self):
        if self.kind not in ("n", "s", "w"):
            raise DomainError(f"unknown generator {self.kind!r}")

    def element(self) -> GroupElement:
        if self.kind == "n":
            return GroupElement.n(self.param)
        if self.kind == "s":
            return GroupElement.s(self.param)
        return GroupElement.w()

    def __str__(self):
        return "w" if self.kind == "w" else f"{self.kind}({self.param!r})"


def bruhat(g: GroupElement) -> list[Generator]:
    """g = n(qp) s(p) if r = 0, else n(p/r) w s(r) n(s/r); trivial factors dropped."""
    if g.r == 0:
        seq = [Generator("n", g.q * g.p), Generator("s", g.p)]
    else:
        seq = [Generator("n", g.p / g.r), Generator("w"), Generator("s", g.r),
               Generator("n", g.s / g.r)]
    return [t for t in seq if not ((t.kind == "n" and t.param == 0) or
                                   (t.kind == "s" and t.param == 1))]


def compose(seq: Iterable[Generator | GroupElement]) -> GroupElement:
    out = GroupElement.identity()
    for t in seq:
        out = out @ (t.element() if isinstance(t, Generator) else t)
    return out


def random_sl2(rng: np.random.Generator) -> GroupElement:
    """Draw from the Iwasawa chart: |y| <= 3, |a| in [1/3, 3], theta in (0, pi]."""
    y = rng.uniform(-3, 3)
    a = rng.choice([-1.0, 1.0]) * math.exp(rng.uniform(math.log(1 / 3), math.log(3)))
    theta = math.pi - rng.uniform(0, math.pi)
    if theta <= 0:
        theta = math.pi
    return IwasawaForm(y, a, theta).to_element()


# ------------------------------------------------------------------ induced model

def act_induced(g: GroupElement, phi, x, d: int | None = None):
    """(g phi)(x) = (rx+p)^{-d-1} phi((sx+q)/(rx+p))."""
    if d is None:
        d = phi.weight
    x_arr = np.asarray(x, dtype=float)
    denom = g.r * x_arr + g.p
    if np.any(denom == 0):
        raise SingularPointError(f"rx + p vanishes at x = {x_arr[denom == 0].ravel()[0]}")
    out = denom ** (-(d + 1)) * np.asarray(phi((g.s * x_arr + g.q) / denom), dtype=complex)
    return out[()] if out.ndim == 0 else out


def induced_action(g: GroupElement, phi: InducedFunction) -> InducedFunction:
    """g phi as a new induced function (evaluation may raise at singular points)."""
    return InducedFunction(lambda x: act_induced(g, phi, x), phi.weight, phi.provenance,
                           label=f"g.{phi.label}")


def induced_on_group(phi: InducedFunction, g: GroupElement) -> complex:
    """F_phi(g) = a^{d+1} F_phi(r(theta)) for g = n(y) s(a) r(theta)."""
    form = iwasawa(g)
    return form.a ** (phi.weight + 1) * complex(induced_from_phi(phi, form.theta))


# ------------------------------------------------------------------ Kirillov model

def _weight(f: Profile) -> int:
    d = f.order.value
    if d.imag != 0 or d.real != round(d.real) or d.real < 1:
        raise DomainError(f"Kirillov actions need a positive integer weight, got {f.order}")
    return int(round(d.real))


def _apply_generator(t: Generator, f: Profile) -> Profile:
    d = _weight(f)
    if t.kind == "n":
        return f.modulated(t.param)
    if t.kind == "s":
        z = t.param
        sign = -1.0 if (z < 0 and (d + 1) % 2) else 1.0
        return f.dilated(z * z).scaled(sign)
    phase = (1j) ** (-(d + 1) * f.side.sign)
    return hankel_profile(f).scaled(phase)


def act_kirillov(g: GroupElement | Sequence[Generator], f: Profile,
                 sign: Side | str | None = None) -> Profile:
    """R_d(g) f, exact on the atom family.

    ``g`` may be a group element (factored with :func:`bruhat`) or an
    explicit generator word, applied right to left. ``sign`` if given must
    match the side of ``f``.
    """
    if sign is not None and Side(sign) is not f.side:
        raise DomainError("sign does not match the side of the profile")
    word = bruhat(g) if isinstance(g, GroupElement) else list(g)
    for t in reversed(word):
        f = _apply_generator(t, f)
    return f


@dataclass(frozen=True)
class KirillovPair:
    """A function on the line split as (positive-side, negative-side) profiles."""

    plus: Profile
    minus: Profile

    def __post_init__(self):
        if self.plus.side is not Side.POSITIVE or self.minus.side is not Side.NEGATIVE:
            raise DomainError("pair needs a positive-side and a negative-side profile")
        if self.plus.order != self.minus.order:
            raise DomainError("both halves need the same order")

    @classmethod
    def from_profile(cls, f: Profile) -> "KirillovPair":
        zero = Profile.zero(f.order, f.side.flipped())
        return cls(f, zero) if f.side is Side.POSITIVE else cls(zero, f)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.where(x > 0, self.plus.local(np.abs(x)), self.minus.local(np.abs(x)))
        return out[()] if out.ndim == 0 else out

    def scaled(self, c: complex) -> "KirillovPair":
        return KirillovPair(self.plus.scaled(c), self.minus.scaled(c))

    def map(self, fn) -> "KirillovPair":
        return KirillovPair(fn(self.plus), fn(self.minus))


def act_kirillov_pair(g, pair: KirillovPair) -> KirillovPair:
    return pair.map(lambda f: act_kirillov(g, f))


# ------------------------------------------------------------------ Lie algebra

@dataclass(frozen=True)
class LieElement:
    """c_X X + c_H H + c_Y Y with X = [[0,1],[0,0]], H = [[1,0],[0,-1]], Y = [[0,0],[1,0]]."""

    cX: float = 0.0
    cH: float = 0.0
    cY: float = 0.0

    def as_array(self) -> np.ndarray:
        return np.array([[self.cH, self.cX], [self.cY, -self.cH]])

    def exp(self, t: float = 1.0) -> GroupElement:
        """exp(t Z) via the closed form for traceless 2x2 matrices."""
        m = t * self.as_array()
        delta = -np.linalg.det(m)
        if delta > 0:
            k = math.sqrt(delta)
            c, sh = math.cosh(k), math.sinh(k) / k
        elif delta < 0:
            k = math.sqrt(-delta)
            c, sh = math.cos(k), math.sin(k) / k
        else:
            c, sh = 1.0, 1.0
        return GroupElement.from_array(c * np.eye(2) + sh * m)


X = LieElement(cX=1.0)
H = LieElement(cH=1.0)
Y = LieElement(cY=1.0)


def _poly_derivative(cs: Sequence[complex]) -> list[complex]:
    return [k * cs[k] for k in range(1, len(cs))] or [0j]


def _poly_add(*polys: Sequence[complex]) -> list[complex]:
    out = [0j] * max(len(p) for p in polys)
    for p in polys:
        for k, c in enumerate(p):
            out[k] += c
    return out


def _poly_scale(p: Sequence[complex], c: complex) -> list[complex]:
    return [c * v for v in p]


def _shift(p: Sequence[complex]) -> list[complex]:
    return [0j] + list(p)


def _lie_y(f: Profile) -> Profile:
    # f = t^s A with A = p e^{lt}: Y f = +-i t^s (t A'' + 2 s A'), the 1/t terms cancel
    s = f.exponent
    unit = 1j * f.side.sign
    atoms = []
    for a in f.atoms:
        lam = a.exponent
        p = list(a.coefficients)
        dp = _poly_derivative(p)
        ddp = _poly_derivative(dp)
        first = _poly_add(dp, _poly_scale(p, lam))
        second = _poly_add(ddp, _poly_scale(dp, 2 * lam), _poly_scale(p, lam * lam))
        total = _poly_add(_shift(second), _poly_scale(first, 2 * s))
        coeffs = _poly_scale(total, unit)
        if any(c != 0 for c in coeffs):
            atoms.append(Atom(tuple(coeffs), a.rate, a.modulation))
    return Profile(f.order, tuple(atoms), f.side)


def act_lie(el: LieElement, f: Profile, sign: Side | str | None = None) -> Profile:
    """dR(el) f in closed form.

    X multiplies by i x and H is 2 x d/dx. Y is the second-order operator
    i x^{-s} d/dx x^{2s+1} d/dx x^{-s}... expanded atomwise, with s = (d+1)/2.
    On the negative side the X and Y parts change sign in |x| coordinates.
    """
    from .function_model import euler_derivative

    if sign is not None and Side(sign) is not f.side:
        raise DomainError("sign does not match the side of the profile")
    _weight(f)
    out = Profile.zero(f.order, f.side)
    if el.cX:
        out = out + f.times_power(1).scaled(1j * f.side.sign * el.cX)
    if el.cH:
        out = out + euler_derivative(f).scaled(2 * el.cH)
    if el.cY:
        out = out + _lie_y(f).scaled(el.cY)
    return out


# ------------------------------------------------------------------ GL(2, R)

@dataclass(frozen=True)
class Character:
    """t -> |t|^s sgn(t)^m."""

    s: complex
    m: int

    def __post_init__(self):
        if self.m not in (0, 1):
            raise DomainError("m must be 0 or 1")
        object.__setattr__(self, "s", complex(self.s))

    def __call__(self, t: float) -> complex:
        return abs(t) ** self.s * (-1.0 if (t < 0 and self.m) else 1.0)


@dataclass(frozen=True)
class CharacterPair:
    """(chi1, chi2) with chi1/chi2 = t^d sgn(t): s1 - s2 = d, m1 - m2 = d + 1 mod 2."""

    chi1: Character
    chi2: Character

    def __post_init__(self):
        diff = self.chi1.s - self.chi2.s
        if abs(diff.imag) > 1e-9 or abs(diff.real - round(diff.real)) > 1e-9 or diff.real < 0.5:
            raise DomainError(f"s1 - s2 must be a positive integer, got {diff}")
        if (self.chi1.m - self.chi2.m - int(round(diff.real)) - 1) % 2:
            raise DomainError("m1 - m2 must have the parity of d + 1")

    @property
    def d(self) -> int:
        return int(round((self.chi1.s - self.chi2.s).real))

    def central(self, b: float) -> complex:
        """omega(b) = |b|^{s1+s2+1} sgn(b)^{m1+m2}."""
        sign = -1.0 if (b < 0 and (self.chi1.m + self.chi2.m) % 2) else 1.0
        return abs(b) ** (self.chi1.s + self.chi2.s + 1) * sign


@dataclass(frozen=True)
class GL2Element:
    """An invertible real matrix together with the character data."""

    p: float
    q: float
    r: float
    s: float
    characters: CharacterPair

    def __post_init__(self):
        if self.det == 0:
            raise DomainError("GL2 element must be invertible")

    @property
    def det(self) -> float:
        return self.p * self.s - self.q * self.r

    def as_array(self) -> np.ndarray:
        return np.array([[self.p, self.q], [self.r, self.s]], dtype=float)

    def sl2_part(self) -> GroupElement:
        """h in SL2 with self = diag(det, 1) h."""
        return GroupElement(self.p / self.det, self.q / self.det, self.r, self.s)


def j_kernel(d: int, x):
    """j_d(x) = i^{-(d+1)} sqrt(x) J_d(2 sqrt(x)) for x > 0 and 0 for x < 0."""
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr == 0):
        raise DomainError("j_d is evaluated at x != 0")
    pos = np.maximum(x_arr, 0)
    val = (1j) ** (-(d + 1)) * np.sqrt(pos) * bessel_j_array(d, 2 * np.sqrt(pos))
    out = np.where(x_arr > 0, val, 0)
    return out[()] if out.ndim == 0 else out


def _diag_action(a: float, pair: KirillovPair, chars: CharacterPair) -> KirillovPair:
    # diag(a, 1): f -> omega(|a|^{1/2}) f(a x); a < 0 swaps the half-lines
    factor = chars.central(math.sqrt(abs(a)))
    plus = pair.plus.dilated(abs(a)).scaled(factor)
    minus = pair.minus.dilated(abs(a)).scaled(factor)
    if a > 0:
        return KirillovPair(plus, minus)
    return KirillovPair(minus.mirrored(), plus.mirrored())


def _gl2_generator(t: Generator, pair: KirillovPair, chars: CharacterPair) -> KirillovPair:
    d = chars.d
    if t.kind == "n":
        return pair.map(lambda f: f.modulated(t.param))
    if t.kind == "s":
        z = t.param
        sign = -1.0 if (z < 0 and (chars.chi1.m + chars.chi2.m) % 2) else 1.0
        return pair.map(lambda f: f.dilated(z * z).scaled(sign))
    # w: sgn(y)^{d+1} int f(x) j_d(xy) dx/|x|; j_d selects the half-line of y
    phase = (1j) ** (-(d + 1))
    neg = (-1.0) ** (d + 1)
    return KirillovPair(hankel_profile(pair.plus).scaled(phase),
                        hankel_profile(pair.minus).scaled(phase * neg))


def gl2_act(g: GL2Element, pair: KirillovPair) -> KirillovPair:
    """R_{chi1,chi2}(g) on a pair of half-line profiles (exact)."""
    chars = g.characters
    if pair.plus.order.value != chars.d:
        raise DomainError("profile order must equal d = s1 - s2")
    out = pair
    for t in reversed(bruhat(g.sl2_part())):
        out = _gl2_generator(t, out, chars)
    return _diag_action(g.det, out, chars)


def gl2_central(b: float, pair: KirillovPair, chars: CharacterPair) -> KirillovPair:
    """The centre b*I acts by omega(b)."""
    return pair.scaled(chars.central(b))


def gl2_weyl_quadrature(pair: KirillovPair, chars: CharacterPair, y, tol: float = 1e-12):
    """The w-action evaluated pointwise by integrating against j_d.

    ``(w f)(y) = sgn(y)^{d+1} int f(x) j_d(xy) dx/|x|``; the integral runs
    over the half-line where xy > 0 (elsewhere j_d vanishes).
    """
    d = chars.d
    ys = np.atleast_1d(np.asarray(y, dtype=float))
    if np.any(ys == 0):
        raise DomainError("evaluate at y != 0")
    out = np.zeros(ys.size, dtype=complex)
    for sign, f in ((1.0, pair.plus), (-1.0, pair.minus)):
        idx = np.nonzero(np.sign(ys) == sign)[0]
        if idx.size == 0 or f.is_zero:
            continue
        ay = np.abs(ys[idx])

        def integrand(u, m, ay=ay, sign=sign, f=f):
            # x = sign*u^2, dx/|x| = 2 du/u; the kernel argument xy = u^2 |y|
            prod = u * u * ay[m]
            return 2 * f.local(u * u) * j_kernel(d, np.maximum(prod, 1e-300)) / u

        rate = max(f.min_rate, 1e-3)
        res = integrate_halfline_family(integrand, idx.size, rate, 2 * np.sqrt(ay), tol,
                                        budget=DEFAULT_BUDGET * idx.size)
        out[idx] = (sign ** (d + 1)) * res.values
    return out if np.ndim(y) else complex(out[0])


__all__ = [
    "GroupElement", "IwasawaForm", "Generator", "iwasawa", "bruhat", "compose", "random_sl2",
    "act_induced", "induced_action", "induced_on_group", "act_kirillov", "KirillovPair",
    "act_kirillov_pair", "LieElement", "X", "H", "Y", "act_lie", "Character", "CharacterPair",
    "GL2Element", "j_kernel", "gl2_act", "gl2_central", "gl2_weyl_quadrature",
]
