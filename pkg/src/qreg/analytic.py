"""Closed-form regularized amplitudes and spectra for the six systems.

Formulas follow the printed solutions with three conventions made explicit:

* 1D Coulomb energies are negative, E_n = -m alpha^2 / (2 mu^2 (n + 1/sqrt2 + 1/2)^2),
  matching the decay constant kappa = sqrt(-2 m E / mu^2) used to build the
  state. :func:`printed_energy` returns the positive value as printed.
* The 1D Coulomb amplitude is X = C1 M_{kappa_W, 1/sqrt2}(2 kappa x) without an
  extra sqrt(x); ``sqrt_prefactor=True`` gives the alternative for comparison.
* The 2D Coulomb radial Laguerre polynomial has degree n: L_n^(2l+1)(2 lambda r).

Polar amplitudes returned by :func:`eigenfunction` are the radial rho(r);
:func:`sample` converts them to the reduced amplitude u = sqrt(r) rho.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from . import specfun
from ._numerics import integrate
from .errors import ContinuousSpectrumError, ConventionError, DegenerateFieldError, DomainError
from .model import GridSpec, PhysicalParams, PotentialKind, QuantumNumbers, SampledField, SystemSpec
from .specfun import BesselKind

__all__ = [
    "MU_W",
    "SpectrumEntry",
    "ClosedFormState",
    "closed_form_state",
    "energy",
    "printed_energy",
    "box_energy",
    "spectrum",
    "eigenfunction",
    "reduced_amplitude",
    "sample",
    "angular_amplitude",
    "normalize",
    "count_nodes",
]

MU_W = 1.0 / math.sqrt(2.0)
COULOMB_SHIFT = MU_W + 0.5


@dataclass(frozen=True)
class SpectrumEntry:
    qn: QuantumNumbers
    energy_paper: float
    degeneracy_label: str


@dataclass(frozen=True)
class ClosedFormState:
    """Derived constants of one closed-form state; unset fields are None."""

    system: SystemSpec
    qn: Optional[QuantumNumbers]
    k: Optional[float] = None
    kappa: Optional[float] = None
    gamma: Optional[float] = None
    lam: Optional[float] = None
    beta: Optional[float] = None
    kappa_w: Optional[float] = None
    mu_w: Optional[float] = None
    nu: Optional[float] = None
    omega: Optional[float] = None


def _omega(params: PhysicalParams, system: SystemSpec) -> float:
    return math.sqrt(system.strength / params.m)


def closed_form_state(
    params: PhysicalParams,
    system: SystemSpec,
    qn: Optional[QuantumNumbers] = None,
    *,
    k: Optional[float] = None,
) -> ClosedFormState:
    """Collect the constants a closed form needs (wavenumber for Free/Constant)."""
    kind = system.kind
    m, mu = params.m, params.mu
    angular = MU_W if system.polar else None
    if kind in (PotentialKind.FREE, PotentialKind.CONSTANT):
        if k is None or not (math.isfinite(k) and k >= 0):
            raise DomainError(f"{system.name} needs a non-negative wavenumber k")
        if system.polar:
            l = system.check(qn).ell
            return ClosedFormState(system, qn, k=k, nu=l + 0.5, mu_w=angular)
        return ClosedFormState(system, qn, k=k, nu=MU_W, mu_w=MU_W)

    qn = system.check(qn)
    n, l = qn.n, qn.ell
    if kind is PotentialKind.HARMONIC:
        omega = _omega(params, system)
        if system.polar:
            return ClosedFormState(system, qn, gamma=m * omega / mu, omega=omega, mu_w=angular)
        return ClosedFormState(system, qn, kappa=m * system.strength / mu**2, omega=omega)

    alpha = system.strength
    beta = 2.0 * m * alpha / mu**2
    if system.polar:
        lam = m * alpha / (mu**2 * (n + l + 1))
        return ClosedFormState(system, qn, lam=lam, beta=beta, mu_w=angular)
    kappa = m * alpha / (mu**2 * (n + COULOMB_SHIFT))
    return ClosedFormState(system, qn, kappa=kappa, beta=beta, kappa_w=m * alpha / (mu**2 * kappa), mu_w=MU_W)


def energy(params: PhysicalParams, system: SystemSpec, qn: QuantumNumbers) -> float:
    """Closed-form bound-state energy for (n, l)."""
    if not system.bound:
        raise ContinuousSpectrumError(f"{system.name} has no discrete closed-form spectrum")
    qn = system.check(qn)
    m, mu = params.m, params.mu
    n, l = qn.n, qn.ell
    if system.kind is PotentialKind.HARMONIC:
        omega = _omega(params, system)
        return mu * omega * (2 * n + l + 1) if system.polar else mu * omega * (n + 0.5)
    alpha = system.strength
    shift = n + l + 1 if system.polar else n + COULOMB_SHIFT
    return -m * alpha**2 / (2.0 * mu**2 * shift**2)


def printed_energy(params: PhysicalParams, system: SystemSpec, qn: QuantumNumbers) -> float:
    """The energy exactly as printed (positive for the 1D Coulomb case)."""
    e = energy(params, system, qn)
    if system.kind is PotentialKind.COULOMB and not system.polar:
        return -e
    return e


def _box_order(system: SystemSpec, qn: Optional[QuantumNumbers]) -> float:
    if system.polar:
        return system.check(qn).ell + 0.5
    return MU_W


def box_energy(params: PhysicalParams, system: SystemSpec, index: int, length: float, qn=None) -> float:
    """Energy of the ``index``-th (1-based) Dirichlet state of a Free/Constant box (0, length).

    The regular branch vanishes at the box wall when k = j_{nu,index}/length.
    """
    if system.bound:
        raise DomainError(f"{system.name} is not a box system")
    k = specfun.bessel_zero(_box_order(system, qn), index) / length
    offset = -system.strength if system.kind is PotentialKind.CONSTANT else 0.0
    return params.kinetic * k**2 + offset


def box_wavenumber(system: SystemSpec, index: int, length: float, qn=None) -> float:
    return specfun.bessel_zero(_box_order(system, qn), index) / length


def _label(system: SystemSpec, qn: QuantumNumbers) -> str:
    if system.kind is PotentialKind.HARMONIC and system.polar:
        return f"2n+l={2 * qn.n + qn.ell}"
    if system.kind is PotentialKind.COULOMB and system.polar:
        return f"n+l+1={qn.n + qn.ell + 1}"
    if system.kind is PotentialKind.COULOMB:
        return f"n+{COULOMB_SHIFT:.6f}"
    if system.polar:
        return f"l={qn.ell}"
    return f"n={qn.n}"


def spectrum(
    params: PhysicalParams,
    system: SystemSpec,
    states: Sequence[QuantumNumbers],
    *,
    box_length: Optional[float] = None,
) -> list[SpectrumEntry]:
    """Spectrum entries for the given states.

    Free/Constant systems have no discrete spectrum of their own; pass
    ``box_length`` to list Dirichlet-box levels instead (n counts from 0).
    """
    out = []
    for qn in states:
        if system.bound:
            out.append(SpectrumEntry(qn, energy(params, system, qn), _label(system, qn)))
        elif box_length is None:
            raise ContinuousSpectrumError(f"{system.name} has no discrete closed-form spectrum")
        else:
            e = box_energy(params, system, qn.n + 1, box_length, qn)
            out.append(SpectrumEntry(qn, e, f"box L={box_length:g} {_label(system, qn)}"))
    return out


def _coeff_pair(coeffs) -> tuple[float, float]:
    c1, c2 = coeffs
    return float(c1), float(c2)


def eigenfunction(
    params: PhysicalParams,
    system: SystemSpec,
    qn_or_k: Union[QuantumNumbers, float],
    q,
    coeffs=(1.0, 0.0),
    *,
    l: Optional[int] = None,
    evanescent: bool = False,
    sqrt_prefactor: bool = False,
):
    """Un-normalized closed-form amplitude at q > 0.

    Free/Constant take a wavenumber (``l`` required for const2d) and allow both
    branches; ``evanescent=True`` switches to I_nu/K_nu.  Bound systems take
    quantum numbers and only the regular branch (c2 == 0).
    """
    arr = np.asarray(q, dtype=float)
    scalar = arr.ndim == 0
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
        raise DomainError("coordinate must be positive and finite")
    c1, c2 = _coeff_pair(coeffs)

    if not system.bound:
        if isinstance(qn_or_k, QuantumNumbers):
            raise DomainError(f"{system.name} takes a wavenumber, not quantum numbers")
        qn = QuantumNumbers(0, l) if system.polar else None
        st = closed_form_state(params, system, qn, k=float(qn_or_k))
        first, second = (
            (BesselKind.MODIFIED_FIRST, BesselKind.MODIFIED_SECOND) if evanescent else (BesselKind.FIRST, BesselKind.SECOND)
        )
        kx = st.k * arr
        val = c1 * np.asarray(specfun.bessel(first, st.nu, kx))
        if c2 != 0.0:
            val = val + c2 * np.asarray(specfun.bessel(second, st.nu, kx))
        if not system.polar:
            val = np.sqrt(arr) * val
        return float(val) if scalar else val

    if not isinstance(qn_or_k, QuantumNumbers):
        raise DomainError(f"{system.name} takes quantum numbers")
    if c2 != 0.0:
        raise ConventionError("bound states keep only the regular branch; c2 must be 0")
    st = closed_form_state(params, system, qn_or_k)
    n, ell = st.qn.n, st.qn.ell

    if system.kind is PotentialKind.HARMONIC and not system.polar:
        root = math.sqrt(st.kappa)
        val = np.sqrt(arr) * np.exp(-0.5 * root * arr**2) * np.asarray(specfun.hermite(n, st.kappa**0.25 * arr))
    elif system.kind is PotentialKind.COULOMB and not system.polar:
        val = np.asarray(specfun.whittaker_m(st.kappa_w, st.mu_w, 2.0 * st.kappa * arr))
        if sqrt_prefactor:
            val = np.sqrt(arr) * val
    elif system.kind is PotentialKind.HARMONIC:
        s = st.gamma * arr**2
        val = arr ** (ell + 0.5) * np.exp(-0.5 * s) * np.asarray(specfun.laguerre(n, ell, s))
    else:
        z = 2.0 * st.lam * arr
        val = arr ** (ell + 0.5) * np.exp(-st.lam * arr) * np.asarray(specfun.laguerre(n, 2 * ell + 1, z))
    val = c1 * val
    return float(val) if scalar else val


def reduced_amplitude(params, system, qn_or_k, q, coeffs=(1.0, 0.0), **kwargs):
    """Amplitude in Sturm-Liouville form: X in 1D, u = sqrt(r) rho in 2D."""
    val = np.asarray(eigenfunction(params, system, qn_or_k, q, coeffs, **kwargs))
    if system.polar:
        val = np.sqrt(np.asarray(q, dtype=float)) * val
    return float(val) if val.ndim == 0 else val


def sample(
    params: PhysicalParams,
    system: SystemSpec,
    qn_or_k,
    grid: GridSpec,
    coeffs=(1.0, 0.0),
    *,
    normalized: bool = True,
    **kwargs,
) -> SampledField:
    """Reduced closed-form amplitude sampled on ``grid``."""
    field = SampledField.on(grid, reduced_amplitude(params, system, qn_or_k, grid.points(), coeffs, **kwargs))
    return normalize(field) if normalized else field


def angular_amplitude(l: int, theta, coeffs=(1.0, 0.0)):
    """Theta(theta) solving Theta'' + (l(l+1) - 1/(4 theta^2)) Theta = 0.

    For l >= 1 this is sqrt(theta)(C J_{1/sqrt2}(sqrt(l(l+1)) theta) + D Y_{1/sqrt2}(...)).
    For l = 0 the Bessel argument vanishes and the equation is of Euler type
    with indicial roots (1 +- sqrt2)/2: Theta = C theta^{(1+sqrt2)/2} + D theta^{(1-sqrt2)/2}.
    """
    if int(l) != l or l < 0:
        raise DomainError(f"l must be a non-negative integer, got {l}")
    arr = np.asarray(theta, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
        raise DomainError("theta must be positive and finite")
    c, d = _coeff_pair(coeffs)
    if l == 0:
        root = math.sqrt(2.0)
        val = c * arr ** ((1 + root) / 2)
        if d != 0.0:
            val = val + d * arr ** ((1 - root) / 2)
    else:
        a = math.sqrt(l * (l + 1)) * arr
        val = c * np.asarray(specfun.bessel(BesselKind.FIRST, MU_W, a))
        if d != 0.0:
            val = val + d * np.asarray(specfun.bessel(BesselKind.SECOND, MU_W, a))
        val = np.sqrt(arr) * val
    return float(val) if arr.ndim == 0 else val


def normalize(field: SampledField) -> SampledField:
    """Rescale so that the quadrature of X^2 equals one."""
    norm = integrate(field.values**2, field.h)
    if not (math.isfinite(norm) and norm > 0):
        raise DegenerateFieldError(f"cannot normalize a field with norm {norm}")
    return field.with_values(field.values / math.sqrt(norm))


def count_nodes(field: SampledField, rel_floor: float = 1e-12) -> int:
    """Strict sign changes, ignoring samples below rel_floor * max|X|."""
    v = field.values
    peak = np.max(np.abs(v))
    if peak == 0:
        return 0
    signs = np.sign(v[np.abs(v) >= rel_floor * peak])
    return int(np.count_nonzero(signs[1:] != signs[:-1]))
