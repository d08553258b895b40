import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gaussbath.errors import InvalidArgument
from gaussbath.oracle import quadrature_moments
from gaussbath.states import (
    InitialState,
    initial_characteristic_function,
    initial_covariance,
    initial_form,
    wavefunction,
)
from gaussbath.symplectic import is_physical, log_negativity, symplectic_eigenvalues

RATIOS = [0.25, 0.5, 1.0, 2.0, 4.0]


def characteristic_by_quadrature(state, q, z, hbar=1.0, n=401):
    """Direct integral of Psi(u + hbar z) Psi(u - hbar z) exp(-i q.u) over u."""
    half = 10 * max(state.s, 2 * state.d)
    u = np.linspace(-half, half, n)
    u1, u2 = np.meshgrid(u, u, indexing="ij")
    plus = wavefunction(state, u1 + hbar * z[0], u2 + hbar * z[1])
    minus = wavefunction(state, u1 - hbar * z[0], u2 - hbar * z[1])
    integrand = plus * minus * np.exp(-1j * (q[0] * u1 + q[1] * u2))
    norm = np.sum(wavefunction(state, u1, u2) ** 2)
    return np.sum(integrand) / norm


class TestInitialState:
    def test_epsilons(self):
        st_ = InitialState(s=1.0, d=1.0)
        assert st_.eps_plus == pytest.approx(0.3125)
        assert st_.eps_minus == pytest.approx(0.1875)

    def test_product_state(self):
        st_ = InitialState(s=2.0, d=1.0)
        assert st_.eps_minus == 0
        assert st_.is_product

    @pytest.mark.parametrize("s,d", [(0, 1), (1, -1), (math.nan, 1), (1, math.inf)])
    def test_invalid(self, s, d):
        with pytest.raises(InvalidArgument):
            InitialState(s, d)

    def test_wavefunction_normalised(self):
        st_ = InitialState(0.7, 1.3)
        x = np.linspace(-30, 30, 1201)
        x1, x2 = np.meshgrid(x, x, indexing="ij")
        h = x[1] - x[0]
        assert np.sum(wavefunction(st_, x1, x2) ** 2) * h * h == pytest.approx(1.0, rel=1e-10)


class TestCharacteristicFunction:
    def test_origin(self):
        assert initial_characteristic_function(InitialState(), (0, 0), (0, 0)) == 1.0

    def test_product_state_has_no_z_coupling(self):
        st_ = InitialState(s=2.0, d=1.0)
        f = initial_characteristic_function
        both = f(st_, (0, 0), (0.3, 0.4))
        assert both == pytest.approx(f(st_, (0, 0), (0.3, 0)) * f(st_, (0, 0), (0, 0.4)), rel=1e-14)

    @pytest.mark.parametrize(
        "s,d,q,z,hbar",
        [
            (1.0, 1.0, (0.5, 0.0), (0.0, 0.0), 1.0),
            (1.0, 1.0, (0.3, -0.7), (0.2, 0.1), 1.0),
            (0.5, 1.5, (0.2, 0.4), (0.3, -0.4), 1.0),
            (2.0, 0.5, (-0.6, 0.1), (0.25, 0.5), 0.7),
        ],
    )
    def test_matches_quadrature(self, s, d, q, z, hbar):
        st_ = InitialState(s, d)
        expected = characteristic_by_quadrature(st_, q, z, hbar)
        assert abs(expected.imag) < 1e-12
        assert initial_characteristic_function(st_, q, z, hbar) == pytest.approx(expected.real, rel=1e-9, abs=1e-14)

    def test_form_agrees(self, rng):
        for _ in range(20):
            st_ = InitialState(*rng.uniform(0.2, 3, 2))
            q, z = rng.normal(size=2), rng.normal(size=2)
            hbar = rng.uniform(0.5, 2)
            assert initial_form(st_, hbar)(q, z) == pytest.approx(
                initial_characteristic_function(st_, q, z, hbar), rel=1e-12, abs=1e-300
            )

    @pytest.mark.parametrize("s,d", [(1.0, 1.0), (0.5, 1.0), (2.0, 1.0), (1.0, 0.25)])
    @pytest.mark.parametrize("h", [1e-5, 1e-4])
    def test_second_derivatives_give_covariance(self, s, d, h):
        st_ = InitialState(s, d)
        g = initial_covariance(st_)
        # second differences of values near 1 carry rounding noise of a few ulp / h^2
        tol = 1e-6 + 4 * np.finfo(float).eps / h**2

        def f(q1=0.0, q2=0.0, z1=0.0, z2=0.0):
            return initial_characteristic_function(st_, (q1, q2), (z1, z2))

        def second(name):
            return (f(**{name: h}) - 2 * f() + f(**{name: -h})) / h**2

        def mixed(a, b):
            return (f(**{a: h, b: h}) - f(**{a: h, b: -h}) - f(**{a: -h, b: h}) + f(**{a: -h, b: -h})) / (4 * h * h)

        # P(q, z) = <exp(-i(q.X - 2 z.P))> and g = 2 <RR>, so at the origin
        # d2P/dq_i dq_j = -g_xx / 2 and d2P/dz_i dz_j = -2 g_pp
        assert second("q1") == pytest.approx(-g[0, 0] / 2, abs=tol)
        assert mixed("q1", "q2") == pytest.approx(-g[0, 2] / 2, abs=tol)
        assert second("z1") == pytest.approx(-2 * g[1, 1], abs=tol)
        assert mixed("z1", "z2") == pytest.approx(-2 * g[1, 3], abs=tol)
        assert mixed("q1", "z1") == pytest.approx(0.0, abs=tol)


class TestInitialCovariance:
    @pytest.mark.parametrize("s,d", [(1.0, 1.0), (0.25, 1.0), (2.0, 1.0), (0.7, 2.3)])
    def test_matches_quadrature(self, s, d):
        st_ = InitialState(s, d)
        np.testing.assert_allclose(quadrature_moments(st_), initial_covariance(st_), atol=1e-8)

    def test_matches_quadrature_hbar(self):
        st_ = InitialState(1.0, 1.0)
        np.testing.assert_allclose(quadrature_moments(st_, hbar=0.5), initial_covariance(st_, 0.5), atol=1e-8)

    def test_momenta_anticorrelated_when_s_small(self):
        g = initial_covariance(InitialState(0.5, 1.0))
        assert g[1, 3] < 0 < g[0, 2]

    @given(st.floats(0.2, 3), st.floats(0.2, 3), st.floats(0.1, 3))
    def test_pure(self, s, d, hbar):
        g = initial_covariance(InitialState(s, d), hbar)
        np.testing.assert_allclose(symplectic_eigenvalues(g), [hbar, hbar], rtol=1e-9)
        assert is_physical(g, hbar).physical

    @pytest.mark.parametrize("s_over_d", RATIOS)
    def test_entangled_unless_product(self, s_over_d):
        en = log_negativity(initial_covariance(InitialState(s_over_d, 1.0)))
        if s_over_d == 2.0:
            assert en == 0.0
        else:
            assert en > 0.1

    def test_initial_log_negativity_closed_form(self):
        # pure two-mode state: E_N = 2 |log2(s / 2d)|
        for s in RATIOS:
            en = log_negativity(initial_covariance(InitialState(s, 1.0)))
            assert en == pytest.approx(2 * abs(math.log2(s / 2)), abs=1e-9)
