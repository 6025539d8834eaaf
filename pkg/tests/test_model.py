from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qreg import model
from qreg.errors import DomainError
from qreg.model import Geometry, GridSpec, PhysicalParams, PotentialKind, QuantumNumbers, SampledField, SystemSpec

from .conftest import ALL_SYSTEMS, ground


class TestTypes:
    @pytest.mark.parametrize("m,mu", [(0, 1), (1, 0), (-1, 1), (math.inf, 1), (1, math.nan)])
    def test_params_positive(self, m, mu):
        with pytest.raises(DomainError):
            PhysicalParams(m, mu)

    def test_supported_pairs(self):
        assert {s.name for s in ALL_SYSTEMS} == set(model.SYSTEM_NAMES)
        for geometry, kind in [
            (Geometry.ONE_D, PotentialKind.CONSTANT),
            (Geometry.POLAR_2D, PotentialKind.FREE),
        ]:
            with pytest.raises(DomainError):
                SystemSpec(geometry, kind)

    def test_positive_strength(self):
        with pytest.raises(DomainError):
            SystemSpec.harmonic1d(0.0)
        with pytest.raises(DomainError):
            SystemSpec.coulomb2d(-1.0)
        with pytest.raises(DomainError):
            SystemSpec.from_name("hydrogen")

    def test_quantum_numbers(self):
        with pytest.raises(DomainError, match="n must be non-negative"):
            QuantumNumbers(-1)
        with pytest.raises(DomainError):
            QuantumNumbers(0, -2)
        with pytest.raises(DomainError):
            SystemSpec.coulomb2d().check(QuantumNumbers(0))
        with pytest.raises(DomainError):
            SystemSpec.coulomb1d().check(QuantumNumbers(0, 1))
        assert SystemSpec.free1d().check(None) == QuantumNumbers(0)

    def test_grid_spec(self):
        g = GridSpec.box(1.0, 99)
        assert g.h == pytest.approx(0.01)
        assert g.lower == pytest.approx(0.0, abs=1e-15)
        assert g.upper == pytest.approx(1.0)
        r = g.refined()
        assert r.n == 199 and r.h == pytest.approx(g.h / 2)
        assert r.upper == pytest.approx(g.upper) and r.lower == pytest.approx(g.lower, abs=1e-15)
        with pytest.raises(DomainError):
            GridSpec(0.001, 1.0, 11)  # q_min < h/2
        with pytest.raises(DomainError):
            GridSpec(1.0, 0.5, 10)

    def test_sampled_field(self):
        q = np.linspace(0.1, 1.0, 10)
        f = SampledField(q, q**2)
        assert len(f) == 10 and f.h == pytest.approx(0.1)
        with pytest.raises(DomainError):
            SampledField(np.array([0.1, 0.2, 0.4]), np.ones(3))
        with pytest.raises(DomainError):
            SampledField(q, np.full(10, np.nan))
        with pytest.raises(DomainError):
            SampledField(np.linspace(0.0, 1.0, 10), np.ones(10))


class TestPotentials:
    def test_examples(self, unit):
        assert model.effective_potential(unit, SystemSpec.free1d(), None, 1.0) == pytest.approx(0.125)
        assert model.effective_potential(unit, SystemSpec.harmonic1d(1.0), None, 2.0) == pytest.approx(2.03125)
        qn = QuantumNumbers(0, 0)
        assert model.effective_potential(unit, SystemSpec.coulomb2d(1.0), qn, 1.0) == pytest.approx(-0.875)

    def test_reduced_form(self, unit):
        # u = sqrt(r) rho removes 1/(8 r^2): the reduced barrier is l(l+1)/(2 r^2).
        for l in range(4):
            w = model.reduced_potential(unit, SystemSpec.coulomb2d(), QuantumNumbers(0, l), 2.0)
            assert w == pytest.approx(l * (l + 1) / 8.0 - 0.5)
        assert model.reduced_potential(unit, SystemSpec.coulomb1d(), None, 2.0) == model.effective_potential(
            unit, SystemSpec.coulomb1d(), None, 2.0
        )

    def test_barrier_switch(self, unit):
        assert model.effective_potential(unit, SystemSpec.free1d(), None, 1.0, barrier=False) == 0.0

    def test_domain(self, unit):
        with pytest.raises(DomainError):
            model.effective_potential(unit, SystemSpec.free1d(), None, 0.0)
        with pytest.raises(DomainError):
            model.potential(SystemSpec.free1d(), -1.0)

    @pytest.mark.parametrize("system", ALL_SYSTEMS, ids=lambda s: s.name)
    def test_barrier_diverges_at_origin(self, unit, system):
        q = np.array([1e-6, 1e-4, 1e-2])
        w = model.effective_potential(unit, system, ground(system), q)
        assert np.all(np.diff(w) < 0) and w[0] > 1e10

    @given(q=st.lists(st.floats(1e-3, 1e3), min_size=2, max_size=20, unique=True))
    def test_free_decreasing(self, q):
        q = np.sort(np.array(q))
        w = model.effective_potential(PhysicalParams(), SystemSpec.free1d(), None, q)
        assert np.all(np.diff(w) < 0)


class TestGuidance:
    def test_examples(self):
        assert model.guidance_momentum(PhysicalParams(1, 1), 0.5) == 1.0
        assert model.guidance_momentum(PhysicalParams(1, 2), 1.0) == 1.0
        assert model.guidance_momentum(PhysicalParams(1, 1), 1e8) == pytest.approx(5e-9)

    @given(q=st.floats(1e-3, 1e3), mu=st.floats(0.1, 10.0))
    def test_el_closure_pointwise(self, q, mu):
        params = PhysicalParams(1.0, mu)
        p = model.guidance_momentum(params, q)
        dp = -mu / (2 * q**2)
        # d/dq (p'/p) with p'/p = -1/q
        rhs = mu**2 / 4 * (1.0 / q**2)
        assert p**2 == pytest.approx(rhs, rel=1e-12)
        assert dp / p == pytest.approx(-1.0 / q, rel=1e-12)

    @given(c=st.floats(0.1, 10.0), q=st.floats(1e-2, 1e2))
    def test_flux_constant_for_linear_density(self, c, q):
        params = PhysicalParams()
        assert c * q * model.guidance_momentum(params, q) == pytest.approx(c * params.mu / 2, rel=1e-14)


class TestPhase:
    def test_examples(self):
        assert model.phase_action(PhysicalParams(1, 1), 2.0, 2.0, 7.0, 0.0) == 0.0
        assert model.phase_action(PhysicalParams(1, 2), math.e * 3.0, 3.0, 0.0, 0.0) == pytest.approx(1.0)

    def test_derivatives(self):
        params = PhysicalParams(1, 1.3)
        h = 1e-4
        ds = (model.phase_action(params, 1 + h, 0.4, 2.0, 0.5) - model.phase_action(params, 1 - h, 0.4, 2.0, 0.5)) / (2 * h)
        assert ds == pytest.approx(model.guidance_momentum(params, 1.0), abs=1e-8)
        dt = (model.phase_action(params, 1.0, 0.4, 2.0, 0.5 + h) - model.phase_action(params, 1.0, 0.4, 2.0, 0.5 - h)) / (2 * h)
        assert dt == pytest.approx(-2.0, abs=1e-9)

    def test_domain(self):
        with pytest.raises(DomainError):
            model.phase_action(PhysicalParams(), 1.0, 0.0, 0.0, 0.0)

    def test_compose(self):
        params = PhysicalParams()
        grid = np.linspace(1.0, 3.0, 5)
        field = SampledField(grid, np.linspace(0.5, 2.5, 5))
        psi = model.compose_wavefunction(field, params, E=1.5, q0=1.0, t=0.7)
        assert np.allclose(np.abs(psi) ** 2, field.values**2, rtol=0, atol=1e-14)
        one = SampledField(np.array([1.0, 2.0]), np.ones(2))
        assert model.compose_wavefunction(one, params, 0.0, 1.0, 0.0)[0] == pytest.approx(1.0 + 0j)
        # S/mu = pi/2 at q/q0 = e^pi with mu = 1
        qe = math.exp(math.pi)
        field = SampledField(np.array([qe, 2 * qe]), np.array([0.7, 0.7]))
        psi = model.compose_wavefunction(field, params, 0.0, 1.0, 0.0)
        assert psi[0].real == pytest.approx(0.0, abs=1e-12) and psi[0].imag == pytest.approx(0.7, abs=1e-12)
