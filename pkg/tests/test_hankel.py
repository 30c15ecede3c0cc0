import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import mp_hankel
from kirillov_hankel.corpus import corpus, random_profile
from kirillov_hankel.errors import DomainError, UnsupportedAtomError
from kirillov_hankel.function_model import (DEFAULT_GRID, Atom, Profile, Side, euler_derivative,
                                            make_grid, parse_spec)
from kirillov_hankel.hankel import (HankelKernelPoint, bilinear_product, hankel_closed_form,
                                    hankel_kernel, hankel_profile, hankel_transform,
                                    hankel_values, inner_product, weber_terms)

GRID = make_grid(DEFAULT_GRID)


def test_kernel_point():
    p = HankelKernelPoint(1, 2.0, 0.5)
    assert p.value == pytest.approx(float(mpmath.besselj(1, 2)), rel=1e-14)
    with pytest.raises(DomainError):
        HankelKernelPoint(1, 0.0, 1.0)
    assert hankel_kernel(1, 2.0, 0.5) == pytest.approx(p.value)


class TestClosedForm:
    def test_exponential(self):
        nu, a = 0.4, 2.5
        img = hankel_closed_form(Atom((1,), a), nu)
        assert img.atoms[0].coefficients[0] == pytest.approx(a ** -(nu + 1))
        assert img.atoms[0].rate == pytest.approx(1 / a)

    def test_linear_monomial(self):
        nu = 1.3
        img = hankel_closed_form(Atom((0, 1), 1.0), nu)
        assert img.atoms[0].coefficients == pytest.approx((nu + 1, -1))

    def test_involution(self):
        f = Profile.single(0.7, [1.0], 2.0)
        back = hankel_profile(hankel_profile(f))
        assert back.atoms[0].rate == pytest.approx(2.0)
        assert back.atoms[0].coefficients == pytest.approx((1.0,))

    def test_modulated_atom_refused(self):
        with pytest.raises(UnsupportedAtomError):
            hankel_closed_form(Atom((1,), 1.0, 0.5), 1)

    def test_weber_terms_degree_two(self):
        # (-d/db)^2 [b^-s e^{-y/b}] = [s(s+1) b^{-s-2} - 2(s+1) y b^{-s-3} + y^2 b^{-s-4}] e^{-y/b}
        s = 2.5
        t = weber_terms(2, s)
        assert t[(2, 0)] == pytest.approx(s * (s + 1))
        assert t[(3, 1)] == pytest.approx(-2 * (s + 1))
        assert t[(4, 2)] == pytest.approx(1)

    @pytest.mark.parametrize("nu", [0, 1, 0.7 + 0.3j, -0.5])
    def test_against_mpmath(self, nu):
        f = parse_spec("(1,0.5)*exp(-1.5x) + x^2*exp(-0.7x)*osc(1.5x)", nu=nu)
        img = hankel_profile(f)
        for y in (0.05, 1.3, 7.0):
            mpf = lambda x: (x ** ((mpmath.mpmathify(nu) + 1) / 2)
                             * ((1 + 0.5j) * mpmath.exp(-1.5 * x)
                                + x ** 2 * mpmath.exp(-0.7 * x + 1.5j * x)))
            want = mp_hankel(mpf, nu, y)
            assert abs(img.local(y) - want) <= 1e-10 * max(1, abs(want))


class TestQuadrature:
    def test_fixed_point(self):
        f = parse_spec("exp(-1x)", nu=2)
        s = hankel_transform(f)
        assert np.max(np.abs(s.values - f.local(GRID))) <= 1e-9

    def test_rate_two(self):
        nu = 1
        f = parse_spec("exp(-2x)", nu=nu)
        s = hankel_transform(f)
        want = 2.0 ** -2 * GRID ** ((nu + 1) / 2) * np.exp(-GRID / 2)
        assert np.max(np.abs(s.values - want)) <= 1e-9

    @pytest.mark.parametrize("nu", [-0.5, 0, 1, 3, 0.7 + 0.3j])
    def test_matches_closed_form(self, nu):
        for f in corpus(nu, 4, seed=3):
            values, _ = hankel_values(f, GRID[::16])
            exact = hankel_profile(f).local(GRID[::16])
            assert np.max(np.abs(values - exact)) <= 1e-9 * np.max(np.abs(exact))

    def test_modulated_quadrature(self):
        f = parse_spec("x^1*exp(-1x)*osc(3x)", nu=1)
        values, _ = hankel_values(f, GRID[::32])
        assert np.max(np.abs(values - hankel_profile(f).local(GRID[::32]))) <= 1e-7

    def test_domain(self):
        with pytest.raises(DomainError):
            hankel_values(parse_spec("exp(-1x)"), [0.0, 1.0])

    def test_negative_side_reuses_engine(self):
        f = parse_spec("x^1*exp(-1x)", nu=2, side=Side.NEGATIVE)
        img = hankel_profile(f)
        assert img.side is Side.NEGATIVE
        assert np.allclose(img.local(GRID), hankel_profile(f.mirrored()).local(GRID))


class TestInvariants:
    @pytest.mark.parametrize("nu", [-0.5, 0, 0.7 + 0.3j, 1, 2, 3])
    def test_inversion(self, nu):
        for f in corpus(nu, 10, seed=11, complex_rate=True):
            back = hankel_profile(hankel_profile(f)).local(GRID)
            ref = f.local(GRID)
            assert np.max(np.abs(back - ref)) <= 1e-8 * np.max(np.abs(ref))

    def test_derivative_intertwining(self):
        ys = GRID[(GRID >= 0.1) & (GRID <= 10)][::6]
        h = 1e-5
        for f in corpus(1.5, 3, seed=5):
            left, _ = hankel_values(euler_derivative(f), ys, tol=1e-13)
            up, _ = hankel_values(f, ys * (1 + h), tol=1e-13)
            down, _ = hankel_values(f, ys * (1 - h), tol=1e-13)
            assert np.max(np.abs(left + (up - down) / (2 * h))) <= 1e-6

    # H maps rate a to 1/a, so y^4 e^{-50/a} at y = 50 is only below 1e-6 for a up to about 1.2
    @settings(max_examples=60, deadline=None)
    @given(st.lists(st.floats(0.1, 2.0), min_size=1, max_size=3), st.floats(0.5, 1.2),
           st.floats(0, 3))
    def test_rapid_decrease(self, coeffs, rate, nu):
        g = hankel_profile(Profile.single(nu, coeffs, rate))
        assert abs(g.local(50.0)) * 50 ** 4 <= 1e-6 * abs(g.local(1.0))


class TestInnerProduct:
    def test_example(self):
        f = parse_spec("exp(-1x)", nu=1)
        assert inner_product(f, f) == pytest.approx(0.25, rel=1e-15)

    def test_hermitian(self, rng):
        for _ in range(10):
            f = random_profile(rng, 1.5, modulated=True)
            g = random_profile(rng, 1.5, modulated=True)
            assert inner_product(f, g) == pytest.approx(inner_product(g, f).conjugate(), rel=1e-12)

    def test_against_quadrature(self, rng):
        f = random_profile(rng, 2, modulated=True, complex_rate=True)
        g = random_profile(rng, 2)
        want = complex(mpmath.quad(lambda x: complex(f.local(float(x)) *
                                                     np.conj(g.local(float(x)))) / x,
                                   [0, 1, 5, 20, mpmath.inf]))
        assert inner_product(f, g) == pytest.approx(want, rel=1e-10)

    def test_isometry(self, rng):
        for _ in range(20):
            f = random_profile(rng, 0.8, real=True)
            g = random_profile(rng, 0.8, real=True)
            lhs = inner_product(hankel_profile(f), hankel_profile(g))
            assert abs(lhs - inner_product(f, g)) <= 1e-8

    def test_bilinear_for_complex_order(self, rng):
        for _ in range(10):
            f = random_profile(rng, 0.7 + 0.3j)
            g = random_profile(rng, 0.7 + 0.3j)
            lhs = bilinear_product(hankel_profile(f), hankel_profile(g))
            assert abs(lhs - bilinear_product(f, g)) <= 1e-8 * max(1, abs(lhs))

    def test_sides_must_match(self):
        f = parse_spec("exp(-1x)", nu=1)
        with pytest.raises(DomainError):
            inner_product(f, f.mirrored())
