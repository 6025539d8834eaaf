"""Information-theoretic and field-equation diagnostics on sampled amplitudes.

Derivatives use centred stencils and integrals the h*sum rule of
:mod:`qreg._numerics`, the same inner product the oracle operator is
symmetric under.  Nothing is smoothed: the diagnostics are meant to expose
discretization behaviour, not hide it.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from ._numerics import central_difference, gradient_energy, integrate
from .errors import DegenerateFieldError, DomainError, FitError
from .model import (
    PhysicalParams,
    QuantumNumbers,
    SampledField,
    SystemSpec,
    guidance_momentum,
    potential,
    reduced_potential,
)

__all__ = [
    "IdentityReport",
    "MaskedField",
    "ActionTerms",
    "StationarityResult",
    "fisher_information",
    "quantum_potential",
    "energy_identity_residual",
    "continuity_residual",
    "el_condition_residual",
    "action_terms",
    "action_per_unit_time",
    "action_variation",
    "action_stationarity_test",
    "smooth_perturbation",
    "variance",
    "cramer_rao_product",
    "DEFAULT_EPS",
]

DEFAULT_EPS = (1e-2, 1e-3, 1e-4)
MASK_FLOOR = 1e-12
NORM_TOLERANCE = 1e-10


@dataclass(frozen=True)
class IdentityReport:
    identity_name: str
    max_abs: float
    rms: float
    grid_used: dict = field(default_factory=dict)

    @classmethod
    def from_residual(cls, name: str, residual, grid_used: dict) -> "IdentityReport":
        r = np.abs(np.asarray(residual, dtype=float))
        r = r[np.isfinite(r)]
        if r.size == 0:
            return cls(name, math.nan, math.nan, grid_used)
        return cls(name, float(np.max(r)), float(np.sqrt(np.mean(r**2))), grid_used)


@dataclass(frozen=True, eq=False)
class MaskedField:
    """Samples with undefined points marked: ``mask`` is True where ``values`` is valid (NaN elsewhere)."""

    grid: np.ndarray
    values: np.ndarray
    mask: np.ndarray

    @property
    def masked_count(self) -> int:
        return int(np.count_nonzero(~self.mask))


def _normalized(field: SampledField, what: str) -> SampledField:
    norm = integrate(field.values**2, field.h)
    if not (math.isfinite(norm) and norm > 0):
        raise DegenerateFieldError(f"{what} of a field with zero norm")
    if abs(norm - 1.0) > NORM_TOLERANCE:
        warnings.warn(f"{what}: field norm {norm:.6g} != 1, normalizing", RuntimeWarning, stacklevel=3)
        return field.with_values(field.values / math.sqrt(norm))
    return field


def fisher_information(field: SampledField, *, boundary: str = "dirichlet") -> float:
    """I[P] = 4 * int (X')^2 dq for P = X^2.

    ``boundary="dirichlet"`` treats the field as zero just outside the grid
    (appropriate for bound states); ``"open"`` differentiates only between
    samples.
    """
    field = _normalized(field, "fisher_information")
    return 4.0 * gradient_energy(field.values, field.h, boundary)


def quantum_potential(field: SampledField, params: PhysicalParams) -> MaskedField:
    """Q = -mu^2/(2m) X''/X with the three-point stencil.

    Endpoints and points with |X| <= 1e-12 max|X| are masked (NaN).
    """
    x = field.values
    second = central_difference(x, field.h, 2, 2)
    peak = np.max(np.abs(x))
    mask = np.isfinite(second) & (np.abs(x) > MASK_FLOOR * peak)
    q = np.full(x.shape, np.nan)
    q[mask] = -params.kinetic * second[mask] / x[mask]
    return MaskedField(field.grid, q, mask)


def energy_identity_residual(
    field: SampledField,
    E: float,
    params: PhysicalParams,
    system: SystemSpec,
    qn: Optional[QuantumNumbers] = None,
    *,
    barrier: bool = True,
) -> IdentityReport:
    """Pointwise |W + Q - E| where W is the reduced effective potential."""
    qp = quantum_potential(field, params)
    w = np.asarray(reduced_potential(params, system, system.check(qn), field.grid, barrier=barrier))
    residual = np.where(qp.mask, w + qp.values - E, np.nan)
    return IdentityReport.from_residual("energy_identity", residual, field.summary())


def continuity_residual(field: SampledField, params: PhysicalParams) -> IdentityReport:
    """d/dq (P p) / m with p = mu/(2q); vanishes only when P is proportional to q."""
    flux = field.values**2 * np.asarray(guidance_momentum(params, field.grid))
    residual = central_difference(flux, field.h, 1, 4) / params.m
    return IdentityReport.from_residual("continuity", residual, field.summary())


def el_condition_residual(p: SampledField, params: PhysicalParams, *, accuracy: int = 6) -> IdentityReport:
    """Pointwise |p^2 - (mu^2/4) (p'/p)'| for positive momentum samples.

    (p'/p)' is evaluated as p''/p - (p'/p)^2 so each derivative uses a
    single centred stencil.  The truncation error grows like (h/q)^accuracy,
    so grids should start several steps away from the origin.
    """
    values = p.values
    if np.any(values <= 0):
        raise DomainError("momentum samples must be positive")
    d1 = central_difference(values, p.h, 1, accuracy)
    d2 = central_difference(values, p.h, 2, accuracy)
    ratio = d1 / values
    residual = values**2 - 0.25 * params.mu**2 * (d2 / values - ratio**2)
    return IdentityReport.from_residual("el_condition", residual, p.summary())


@dataclass(frozen=True)
class ActionTerms:
    """Per-unit-time action split into its pieces (density normalized to one).

    fisher:    mu^2/(2m) int (sqrt P)'^2 = mu^2/(8m) I[P]
    barrier:   int P (W_red - V), the guidance/centrifugal barrier
    potential: int P V
    energy:    -E int P
    """

    fisher: float
    barrier: float
    potential: float
    energy: float

    @property
    def total(self) -> float:
        return self.fisher + self.barrier + self.potential + self.energy


def _amplitude(P: SampledField) -> np.ndarray:
    if np.any(P.values < 0):
        raise DomainError("density must be non-negative")
    if not np.any(P.values > 0):
        raise DegenerateFieldError("density vanishes identically")
    return np.sqrt(P.values)


def action_terms(
    P: SampledField,
    params: PhysicalParams,
    system: SystemSpec,
    E: float,
    *,
    qn: Optional[QuantumNumbers] = None,
) -> ActionTerms:
    """Stationary action per unit time with dS/dt = -E and dS/dq = mu/(2q).

    Evaluated on the reduced amplitude sqrt(P) with zero ghost values, so for
    P = X^2 of unit norm the total equals the Rayleigh quotient minus E.
    """
    x = _amplitude(P)
    qn = system.check(qn)
    w = np.asarray(reduced_potential(params, system, qn, P.grid))
    v = np.asarray(potential(system, P.grid))
    h = P.h
    return ActionTerms(
        fisher=params.kinetic * gradient_energy(x, h, "dirichlet"),
        barrier=integrate(P.values * (w - v), h),
        potential=integrate(P.values * v, h),
        energy=-E * integrate(P.values, h),
    )


def action_per_unit_time(
    P: SampledField,
    params: PhysicalParams,
    system: SystemSpec,
    E: float,
    *,
    qn: Optional[QuantumNumbers] = None,
) -> float:
    return action_terms(P, params, system, E, qn=qn).total


def action_variation(P, params, system, E, perturbation: SampledField, eps: float, *, qn=None) -> float:
    """A[P + eps*delta] - A[P]."""
    if perturbation.values.shape != P.values.shape:
        raise DomainError("perturbation must live on the density's grid")
    moved = P.with_values(P.values + eps * perturbation.values)
    return action_per_unit_time(moved, params, system, E, qn=qn) - action_per_unit_time(P, params, system, E, qn=qn)


@dataclass(frozen=True)
class StationarityResult:
    linear: float
    quadratic: float
    ratio: float
    eps: tuple[float, ...]
    deltas: tuple[float, ...]
    threshold: float = 1e-2

    @property
    def stationary(self) -> bool:
        return self.ratio < self.threshold


def action_stationarity_test(
    P: SampledField,
    params: PhysicalParams,
    system: SystemSpec,
    E: float,
    perturbation: SampledField,
    eps_list: Sequence[float] = DEFAULT_EPS,
    *,
    qn: Optional[QuantumNumbers] = None,
    threshold: float = 1e-2,
) -> StationarityResult:
    """Fit dA(eps) = a eps + b eps^2 and report |a| / (|b| max eps).

    The perturbation must vanish at both grid ends and have zero integral,
    so it preserves normalization to first order.
    """
    delta = perturbation.values
    scale = np.max(np.abs(delta))
    if scale > 0:
        if max(abs(delta[0]), abs(delta[-1])) > 1e-8 * scale:
            raise DomainError("perturbation must vanish at the grid endpoints")
        if abs(integrate(delta, perturbation.h)) > 1e-10 * integrate(np.abs(delta), perturbation.h):
            raise DomainError("perturbation must integrate to zero")
    eps = np.asarray(eps_list, dtype=float)
    if eps.size < 2:
        raise DomainError("need at least two step sizes")
    dA = np.array([action_variation(P, params, system, E, perturbation, e, qn=qn) for e in eps])
    if np.all(np.abs(dA) < 1e-14):
        raise FitError("action changes are below the 1e-14 noise floor; fit is ill-conditioned")
    design = np.column_stack([eps, eps**2])
    (a, b), *_ = np.linalg.lstsq(design, dA, rcond=None)
    denom = abs(b) * float(np.max(eps))
    ratio = abs(a) / denom if denom > 0 else math.inf
    return StationarityResult(float(a), float(b), float(ratio), tuple(eps.tolist()), tuple(dA.tolist()), threshold)


def smooth_perturbation(P: SampledField, seed: int = 0, modes: int = 4, relative: float = 0.1) -> SampledField:
    """Zero-mean, endpoint-vanishing perturbation delta = P * r.

    r = s * bump * (g - c): g is a seeded random combination of low sine
    modes, the sin^2 bump pins the ends, c removes the integral and s scales
    max|r| to ``relative``.  P + eps*delta stays positive for eps < 1/relative.
    Modes are functions of the cumulative distribution of P, so they vary
    where the density lives however wide the grid is.
    """
    cdf = np.cumsum(P.values)
    if not cdf[-1] > 0:
        raise DegenerateFieldError("density has no interior support")
    t = (cdf - cdf[0]) / (cdf[-1] - cdf[0])
    rng = np.random.default_rng(seed)
    amp = rng.uniform(-1.0, 1.0, modes)
    phase = rng.uniform(0.0, 2.0 * math.pi, modes)
    g = sum(amp[j] * np.sin((j + 1) * math.pi * t + phase[j]) for j in range(modes))
    bump = np.sin(math.pi * t) ** 2
    weight = P.values * bump
    total = np.sum(weight)
    if not total > 0:
        raise DegenerateFieldError("density has no interior support")
    c = np.sum(weight * g) / total
    r = bump * (g - c)
    r *= relative / np.max(np.abs(r))
    delta = P.values * r
    delta[0] = delta[-1] = 0.0
    return P.with_values(delta)


def variance(field: SampledField) -> float:
    """Variance of the density X^2 (normalized internally)."""
    p = field.values**2
    norm = integrate(p, field.h)
    if not norm > 0:
        raise DegenerateFieldError("variance of a field with zero norm")
    mean = integrate(field.grid * p, field.h) / norm
    return integrate((field.grid - mean) ** 2 * p, field.h) / norm


def cramer_rao_product(field: SampledField) -> float:
    """variance * Fisher information for a location family; >= 1 with equality for Gaussians."""
    return variance(field) * fisher_information(_normalized_quiet(field))


def _normalized_quiet(field: SampledField) -> SampledField:
    norm = integrate(field.values**2, field.h)
    if not norm > 0:
        raise DegenerateFieldError("zero norm")
    return field.with_values(field.values / math.sqrt(norm))
