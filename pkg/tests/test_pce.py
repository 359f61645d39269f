"""Tests for the polynomial chaos expansion machinery."""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from bifuq.distributions import Beta, Uniform
from bifuq.pce import (
    PowerPolynomial,
    chat_coefficients,
    collect_powers,
    germ_gauss_rule,
    make_basis,
    mellin_of_pce,
    project,
)

U01 = Uniform(0.0, 1.0)


class TestOrthoBasis:
    @pytest.mark.parametrize(
        "germ", [U01, Uniform(-1.0, 1.0), Beta(2.0, 2.0), Beta(2.0, 5.0)],
        ids=lambda d: repr(d),
    )
    def test_orthonormality(self, germ):
        N = 12
        basis = make_basis(germ, N)
        nodes, weights = germ_gauss_rule(germ, 2 * N + 2)
        for m in range(N + 1):
            for n in range(m, N + 1):
                inner = np.sum(weights * basis.eval(m, nodes) * basis.eval(n, nodes))
                assert inner == pytest.approx(1.0 if m == n else 0.0, abs=1e-10)

    def test_kinds(self):
        assert make_basis(U01, 2).kind == "shifted_legendre"
        assert make_basis(Uniform(-1.0, 1.0), 2).kind == "legendre"
        assert make_basis(Beta(2.0, 2.0), 2).kind == "jacobi"

    def test_unsupported_germ(self):
        with pytest.raises(ValueError):
            make_basis(Uniform(4.0, 6.0), 2)


class TestProject:
    def test_lorenz_factor_beta22(self):
        coeffs, _ = project(lambda r: r / (1.0 + r), Beta(2.0, 2.0), U01, 2)
        np.testing.assert_allclose(
            coeffs, [0.3188, 0.1002, -0.0130], atol=2e-3
        )

    def test_identity_exact(self):
        coeffs, _ = project(lambda r: r, U01, U01, 1, n_quad=16)
        assert coeffs[0] == pytest.approx(0.5, abs=1e-12)
        assert coeffs[1] == pytest.approx(1.0 / (2.0 * math.sqrt(3.0)), abs=1e-12)

    def test_constant(self):
        coeffs, _ = project(lambda r: 0.0 * r + 4.2, Beta(2.0, 5.0), U01, 3)
        np.testing.assert_allclose(coeffs, [4.2, 0.0, 0.0, 0.0], atol=1e-12)

    def test_degree_guard(self):
        with pytest.raises(ValueError):
            project(lambda r: r, U01, U01, 17)


class TestCollectPowers:
    def test_lorenz_factor_powers(self):
        coeffs, basis = project(lambda r: r / (1.0 + r), Beta(2.0, 2.0), U01, 2)
        poly = collect_powers(coeffs, basis)
        np.testing.assert_allclose(
            poly.coeffs, [0.1163, 0.5210, -0.1739], atol=5e-3
        )

    def test_degree_zero(self):
        basis = make_basis(U01, 0)
        poly = collect_powers([3.0], basis)
        assert poly.coeffs == (3.0,)

    def test_representation_identity(self):
        coeffs, basis = project(lambda r: np.sin(r), Beta(2.0, 5.0), U01, 4)
        poly = collect_powers(coeffs, basis)
        x = np.linspace(0.0, 1.0, 11)
        direct = sum(c * basis.eval(n, x) for n, c in enumerate(coeffs))
        np.testing.assert_allclose(poly(x), direct, atol=1e-12)


class TestChatCoefficients:
    def test_s2_is_identity(self):
        p = PowerPolynomial((0.3, -0.7, 1.1), U01)
        np.testing.assert_array_equal(chat_coefficients(p, 2), p.coeffs)

    def test_s3_relations(self):
        c0, c1, c2 = 0.4, -1.3, 0.8
        p = PowerPolynomial((c0, c1, c2), U01)
        expected = [c0**2, 2 * c0 * c1, 2 * c0 * c2 + c1**2, 2 * c1 * c2, c2**2]
        np.testing.assert_allclose(chat_coefficients(p, 3), expected, atol=1e-12)

    def test_s4_cubic_term(self):
        c0, c1, c2 = 0.9, 0.5, -0.2
        p = PowerPolynomial((c0, c1, c2), U01)
        chat = chat_coefficients(p, 4)
        assert chat[3] == pytest.approx(c1**3 + 6 * c0 * c1 * c2, abs=1e-12)

    @given(
        st.lists(
            st.floats(min_value=-2.0, max_value=2.0), min_size=3, max_size=3
        ),
        st.integers(min_value=2, max_value=4),
    )
    def test_symbolic_relations_random(self, c, s):
        # the cumulated coefficients are the power coefficients of the
        # (s-1)-th polynomial power; verify against direct evaluation
        p = PowerPolynomial(tuple(c), U01)
        chat = chat_coefficients(p, s)
        for x in (-1.0, 0.3, 1.7):
            direct = p(x) ** (s - 1)
            via_chat = sum(ci * x**i for i, ci in enumerate(chat))
            assert via_chat == pytest.approx(direct, rel=1e-10, abs=1e-9)

    def test_sum_identity(self):
        p = PowerPolynomial((0.25, 0.5, 0.125), U01)
        for s in range(1, 7):
            assert np.sum(chat_coefficients(p, s)) == pytest.approx(
                np.sum(p.coeffs) ** (s - 1), rel=1e-12
            )

    def test_guards(self):
        p = PowerPolynomial((1.0, 1.0), U01)
        with pytest.raises(ValueError):
            chat_coefficients(p, 13)
        big = PowerPolynomial(tuple([1.0] * 11), U01)
        with pytest.raises(ValueError):
            chat_coefficients(big, 8)
        huge = PowerPolynomial((1e5, 1e5), U01)
        from bifuq.pce import OverflowGuardError

        with pytest.raises(OverflowGuardError):
            chat_coefficients(huge, 5)


class TestMellinOfPce:
    def test_identity_reduces_to_germ(self):
        p = PowerPolynomial((0.0, 1.0), U01)
        assert mellin_of_pce(p, 3) == pytest.approx(1.0 / 3.0, rel=1e-12)

    def test_constant(self):
        p = PowerPolynomial((2.5,), Beta(2.0, 2.0))
        for s in range(1, 6):
            assert mellin_of_pce(p, s) == pytest.approx(2.5 ** (s - 1), rel=1e-12)

    def test_lorenz_factor_mean(self):
        coeffs, basis = project(lambda r: r / (1.0 + r), Beta(2.0, 2.0), U01, 2)
        poly = collect_powers(coeffs, basis)
        # MC oracle of E[r/(1+r)], r ~ Beta(2,2), frozen from a 10^6 draw
        assert mellin_of_pce(poly, 2) == pytest.approx(0.3188, abs=2e-3)
        assert mellin_of_pce(poly, 2) == pytest.approx(coeffs[0], rel=1e-12)

    @pytest.mark.parametrize(
        "germ", [U01, Uniform(-1.0, 1.0), Beta(2.0, 5.0)], ids=lambda d: repr(d)
    )
    @pytest.mark.parametrize("N", [1, 2, 4])
    def test_quadrature_identity(self, germ, N):
        # the transform of the collected polynomial equals the germ-space
        # integral of p(x)^(s-1), end to end
        coeffs, basis = project(
            lambda r: 1.0 / (2.0 + r), germ, germ, N, n_quad=32
        )
        poly = collect_powers(coeffs, basis)
        nodes, weights = germ_gauss_rule(germ, 64)
        for s in range(1, 7):
            direct = np.sum(weights * poly(nodes) ** (s - 1))
            assert mellin_of_pce(poly, s) == pytest.approx(direct, rel=1e-9)

    def test_json_round_trip(self):
        p = PowerPolynomial((0.1, 0.2), U01)
        j = p.to_json()
        assert j["coeffs"] == [0.1, 0.2]
        assert j["germ"] == {"kind": "uniform", "a": 0.0, "b": 1.0}
