import math

import mpmath
import numpy as np
import pytest

from kirillov_hankel.corpus import corpus, random_profile
from kirillov_hankel.errors import DomainError, SingularPointError
from kirillov_hankel.function_model import DEFAULT_GRID, Profile, Side, make_grid, parse_spec
from kirillov_hankel.hankel import inner_product
from kirillov_hankel.intertwiners import InducedFunction, m_transform, t_image
from kirillov_hankel.representation import (H, X, Y, Character, CharacterPair, GL2Element,
                                            Generator, GroupElement, IwasawaForm, KirillovPair,
                                            LieElement, act_induced, act_kirillov, act_lie,
                                            bruhat, compose, gl2_act, gl2_central,
                                            gl2_weyl_quadrature, induced_action,
                                            induced_on_group, iwasawa, j_kernel, random_sl2)

GRID = make_grid(DEFAULT_GRID)
W = GroupElement.w()


def sup_rel(a, b):
    return np.max(np.abs(a - b)) / max(np.max(np.abs(b)), 1e-300)


class TestGroupElement:
    def test_normalises_determinant(self):
        g = GroupElement(2, 0, 0, 2)
        assert g.p * g.s - g.q * g.r == pytest.approx(1, abs=1e-12)

    def test_rejects_bad_input(self):
        with pytest.raises(DomainError):
            GroupElement(1, 0, 0, -1)
        with pytest.raises(DomainError):
            GroupElement(math.inf, 0, 0, 1)

    def test_w_squared(self):
        assert (W @ W).close_to(GroupElement(-1, 0, 0, -1))

    def test_inverse(self, rng):
        g = random_sl2(rng)
        assert (g @ g.inverse()).close_to(GroupElement.identity())


class TestIwasawa:
    def test_w(self):
        form = iwasawa(W)
        assert (form.y, form.a, form.theta) == pytest.approx((0, -1, math.pi / 2))
        assert form.to_element().close_to(W)

    def test_identity(self):
        form = iwasawa(GroupElement.identity())
        assert (form.y, form.a, form.theta) == pytest.approx((0, -1, math.pi))

    def test_translation(self):
        form = iwasawa(GroupElement.n(5))
        assert (form.y, form.a, form.theta) == pytest.approx((5, -1, math.pi))

    def test_round_trip(self, rng):
        for _ in range(1000):
            g = GroupElement.from_array(_random_matrix(rng))
            form = iwasawa(g)
            assert 0 < form.theta <= math.pi
            assert form.to_element().close_to(g, 1e-12)

    def test_form_validation(self):
        with pytest.raises(DomainError):
            IwasawaForm(0, 0, 1)
        with pytest.raises(DomainError):
            IwasawaForm(0, 1, 0)


def _random_matrix(rng):
    while True:
        m = rng.uniform(-2, 2, size=(2, 2))
        det = np.linalg.det(m)
        if abs(det) > 0.1:
            if det < 0:
                m[0] = -m[0]
            return m


class TestBruhat:
    def test_diagonal(self):
        assert [str(t) for t in bruhat(GroupElement.s(2))] == ["s(2.0)"]

    def test_w(self):
        assert [str(t) for t in bruhat(W)] == ["w"]

    def test_lower_unipotent(self):
        g = GroupElement(1, 0, 1, 1)
        word = bruhat(g)
        # n(1) w s(1) n(1) with the trivial s(1) dropped
        assert [str(t) for t in word] == ["n(1.0)", "w", "n(1.0)"]
        assert compose(word).close_to(g)
        assert compose([Generator("n", 1), Generator("w"), Generator("s", 1),
                        Generator("n", 1)]).close_to(g)

    def test_round_trip(self, rng):
        for _ in range(1000):
            g = GroupElement.from_array(_random_matrix(rng))
            assert compose(bruhat(g)).close_to(g, 1e-12)

    def test_unknown_generator(self):
        with pytest.raises(DomainError):
            Generator("r", 1)


class TestInducedAction:
    phi = InducedFunction(lambda x: (1 + 0.5j * x) / (1 + x * x) ** 2, 2)

    def test_identity(self):
        xs = np.linspace(-3, 3, 7)
        assert np.allclose(act_induced(GroupElement.identity(), self.phi, xs), self.phi(xs))

    def test_translation(self):
        xs = np.linspace(-3, 3, 7)
        assert np.allclose(act_induced(GroupElement.n(0.7), self.phi, xs), self.phi(xs + 0.7))

    def test_group_law(self, rng):
        count = 0
        while count < 30:
            g1, g2 = random_sl2(rng), random_sl2(rng)
            x = rng.uniform(-3, 3)
            try:
                lhs = act_induced(g1 @ g2, self.phi, x)
                rhs = induced_action(g1, induced_action(g2, self.phi))(x)
            except SingularPointError:
                continue
            if min(abs(g1.r * x + g1.p), abs((g1 @ g2).r * x + (g1 @ g2).p)) < 1e-3:
                continue
            assert abs(lhs - rhs) <= 1e-9 * max(1, abs(rhs))
            count += 1

    def test_singular_point(self):
        with pytest.raises(SingularPointError):
            act_induced(W, self.phi, 0.0)

    def test_group_function(self, rng):
        # F(w n(x) g) = (g phi)(x) ties the induced picture to the action
        for _ in range(10):
            g = random_sl2(rng)
            x = rng.uniform(-2, 2)
            if abs(g.r * x + g.p) < 1e-3:
                continue
            lhs = induced_on_group(self.phi, W @ GroupElement.n(x) @ g)
            assert lhs == pytest.approx(act_induced(g, self.phi, x), rel=1e-10)


class TestKirillov:
    @pytest.mark.parametrize("d", [1, 2, 3, 4])
    def test_w_fixes_lowest_profile(self, d):
        f = Profile.single(d, [1.0], 1.0)
        out = act_kirillov(W, f)
        assert sup_rel(out.local(GRID), (1j) ** (-(d + 1)) * f.local(GRID)) <= 1e-14

    @pytest.mark.parametrize("d", [1, 2, 3])
    @pytest.mark.parametrize("side", [Side.POSITIVE, Side.NEGATIVE])
    def test_w_squared(self, d, side):
        for f in corpus(d, 3, seed=d, side=side):
            twice = act_kirillov(W, act_kirillov(W, f))
            assert sup_rel(twice.local(GRID), (-1) ** (d + 1) * f.local(GRID)) <= 1e-8

    def test_translation_is_modulation(self):
        f = parse_spec("x^1*exp(-1x)", nu=2)
        out = act_kirillov(GroupElement.n(0.8), f)
        assert out.atoms[0].modulation == pytest.approx(0.8)
        assert np.allclose(out.local(GRID), np.exp(0.8j * GRID) * f.local(GRID))

    def test_negative_dilation_sign(self):
        f = parse_spec("exp(-1x)", nu=2)
        out = act_kirillov([Generator("s", -2.0)], f)
        assert np.allclose(out.local(GRID), -f.local(4 * GRID))

    def test_group_law(self, rng):
        for _ in range(20):
            d = int(rng.integers(1, 4))
            f = random_profile(rng, d, side=Side(rng.choice(["+", "-"])))
            g1, g2 = random_sl2(rng), random_sl2(rng)
            lhs = act_kirillov(g1 @ g2, f).local(GRID)
            rhs = act_kirillov(g1, act_kirillov(g2, f)).local(GRID)
            assert sup_rel(lhs, rhs) <= 1e-6

    @pytest.mark.parametrize("d", [1, 2, 3])
    def test_intertwining(self, d):
        ys = GRID[(GRID > 0.01) & (GRID < 20)][::16]
        f = parse_spec("x^1*exp(-1x) + (0.5,1)*exp(-2x)", nu=d)
        phi = t_image(f, None, d=d)
        for g in (GroupElement.n(1), GroupElement.s(2), GroupElement.s(-2), W):
            lhs = m_transform(induced_action(g, phi), ys)
            rhs = act_kirillov(g, f).local(ys)
            assert np.max(np.abs(lhs - rhs)) <= 1e-6

    def test_sign_mismatch(self):
        with pytest.raises(DomainError):
            act_kirillov(W, parse_spec("exp(-1x)", nu=1), sign="-")

    def test_non_integer_weight(self):
        with pytest.raises(DomainError):
            act_kirillov(W, parse_spec("exp(-1x)", nu=1.5))

    def test_pair(self):
        f = parse_spec("exp(-1x)", nu=1)
        pair = KirillovPair.from_profile(f)
        assert pair(-1.0) == 0
        assert pair(1.0) == pytest.approx(math.exp(-1))


class TestLie:
    def test_x_multiplies(self):
        f = parse_spec("x^1*exp(-1x)", nu=2)
        assert np.allclose(act_lie(X, f).local(GRID), 1j * GRID * f.local(GRID))
        g = f.mirrored()
        assert np.allclose(act_lie(X, g).local(GRID), -1j * GRID * g.local(GRID))

    def test_brackets(self, rng):
        for _ in range(10):
            d = int(rng.integers(1, 4))
            f = random_profile(rng, d, modulated=True)

            def br(a, b):
                return act_lie(a, act_lie(b, f)) - act_lie(b, act_lie(a, f))

            scale = np.max(np.abs(f.local(GRID))) + 1
            assert np.max(np.abs((br(X, Y) - act_lie(H, f)).local(GRID))) <= 1e-8 * scale
            assert np.max(np.abs((br(H, X) - act_lie(X, f).scaled(2)).local(GRID))) <= 1e-8 * scale
            assert np.max(np.abs((br(H, Y) + act_lie(Y, f).scaled(2)).local(GRID))) <= 1e-8 * scale

    @pytest.mark.parametrize("el", [X, H, Y], ids=["X", "H", "Y"])
    @pytest.mark.parametrize("d", [1, 2, 3])
    def test_one_parameter(self, el, d):
        t = 1e-4
        f = Profile.single(d, [1.0, 0.5], 1.0)
        f = f.scaled(1 / math.sqrt(inner_product(f, f).real))
        up = act_kirillov(el.exp(t), f).local(GRID)
        down = act_kirillov(el.exp(-t), f).local(GRID)
        assert np.max(np.abs((up - down) / (2 * t) - act_lie(el, f).local(GRID))) <= 1e-5

    def test_exp_matches_generators(self):
        assert X.exp(0.3).close_to(GroupElement.n(0.3))
        assert H.exp(0.3).close_to(GroupElement.s(math.exp(0.3)))
        assert LieElement(cY=1).exp(0.3).close_to(GroupElement(1, 0, 0.3, 1))


class TestJKernel:
    def test_negative(self):
        assert j_kernel(2, -3.0) == 0

    def test_value(self):
        want = -float(mpmath.besselj(1, 2))
        assert j_kernel(1, 1.0) == pytest.approx(want, rel=1e-13)
        assert j_kernel(1, 1.0) == pytest.approx(-0.57672480775687, rel=1e-12)

    def test_modulus(self):
        xs = np.linspace(0.1, 30, 50)
        want = [abs(float(mpmath.sqrt(x) * mpmath.besselj(3, 2 * mpmath.sqrt(x)))) for x in xs]
        assert np.allclose(np.abs(j_kernel(3, xs)), want, rtol=1e-12, atol=1e-300)

    def test_zero(self):
        with pytest.raises(DomainError):
            j_kernel(1, 0.0)


def _chars(d, s2=None, m2=0):
    s2 = -(d + 1) / 2 if s2 is None else s2
    m1 = (m2 + d + 1) % 2
    return CharacterPair(Character(s2 + d, m1), Character(s2, m2))


class TestGL2:
    def test_character_validation(self):
        with pytest.raises(DomainError):
            CharacterPair(Character(1.5, 0), Character(0, 0))
        with pytest.raises(DomainError):
            CharacterPair(Character(1, 1), Character(0, 0))
        with pytest.raises(DomainError):
            Character(0, 2)

    def test_central_minus_one(self):
        chars = _chars(2)
        assert chars.chi1.m + chars.chi2.m == 1
        f = KirillovPair.from_profile(parse_spec("x^1*exp(-1x)", nu=2))
        out = gl2_central(-1.0, f, chars)
        assert np.allclose(out(GRID), -f(GRID))
        via_matrix = gl2_act(GL2Element(-1, 0, 0, -1, chars), f)
        assert np.allclose(via_matrix(GRID), -f(GRID))

    def test_diagonal(self):
        chars = _chars(2)
        f = KirillovPair.from_profile(parse_spec("x^1*exp(-1x)", nu=2))
        out = gl2_act(GL2Element(4, 0, 0, 1, chars), f)
        assert np.allclose(out(GRID), f(4 * GRID))

    def test_reflection_swaps_halves(self):
        chars = _chars(1)
        f = KirillovPair.from_profile(parse_spec("exp(-1x)", nu=1))
        out = gl2_act(GL2Element(-1, 0, 0, 1, chars), f)
        assert np.allclose(out(-GRID), f(GRID))
        assert np.allclose(out(GRID), 0)

    @pytest.mark.parametrize("m2", [0, 1])
    def test_w_quadrature(self, m2):
        d = 2
        chars = _chars(d, m2=m2)
        pair = KirillovPair(parse_spec("x^1*exp(-1x) + exp(-2x)", nu=d),
                            parse_spec("(0,1)*exp(-1.5x)", nu=d, side=Side.NEGATIVE))
        ys = np.concatenate([-GRID[::32], GRID[::32]])
        exact = gl2_act(GL2Element(0, -1, 1, 0, chars), pair)(ys)
        assert np.max(np.abs(gl2_weyl_quadrature(pair, chars, ys) - exact)) <= 1e-7
        sl2 = act_kirillov(W, pair.plus).local(GRID[::32])
        assert np.max(np.abs(exact[ys > 0] - sl2)) <= 1e-7

    def test_group_law(self, rng):
        for _ in range(20):
            d = int(rng.integers(1, 4))
            chars = _chars(d, s2=rng.uniform(-2, 1), m2=int(rng.integers(0, 2)))
            pair = KirillovPair(random_profile(rng, d), random_profile(rng, d, side=Side.NEGATIVE))
            a, b = _random_gl2(rng), _random_gl2(rng)
            ab = a @ b
            g_ab = GL2Element(*ab.ravel(), chars)
            lhs = gl2_act(g_ab, pair)(GRID)
            rhs = gl2_act(GL2Element(*a.ravel(), chars),
                          gl2_act(GL2Element(*b.ravel(), chars), pair))(GRID)
            assert sup_rel(lhs, rhs) <= 1e-6

    def test_order_mismatch(self):
        with pytest.raises(DomainError):
            gl2_act(GL2Element(1, 0, 0, 1, _chars(2)),
                    KirillovPair.from_profile(parse_spec("exp(-1x)", nu=1)))


def _random_gl2(rng):
    while True:
        m = rng.uniform(-2, 2, size=(2, 2))
        if abs(np.linalg.det(m)) > 0.2:
            return m
