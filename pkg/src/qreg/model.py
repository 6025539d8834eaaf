"""Physical parameterization shared by the closed forms, the oracle and the diagnostics.

Two forms of the stationary equation appear throughout the package:

* the *printed* form, where the coefficient multiplying the amplitude is
  ``effective_potential``: mu^2/(8 m q^2) + V(q) in one dimension, and
  mu^2 (l(l+1) + 1/4)/(2 m r^2) + V(r) for the polar radial equation, which
  still carries the rho'/r term;
* the *reduced* (Sturm-Liouville) form  -mu^2/(2m) u'' + W_red u = E u,
  obtained in 2D by u = sqrt(r) rho.  The first-derivative elimination
  subtracts mu^2/(8 m r^2), so W_red = mu^2 l(l+1)/(2 m r^2) + V(r).  In 1D
  the two forms coincide.

Every sampled field in the package holds the reduced amplitude (X in 1D,
u = sqrt(r) rho in 2D).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError

__all__ = [
    "PhysicalParams",
    "Geometry",
    "PotentialKind",
    "SystemSpec",
    "SYSTEM_NAMES",
    "QuantumNumbers",
    "GridSpec",
    "SampledField",
    "potential",
    "effective_potential",
    "reduced_potential",
    "guidance_momentum",
    "phase_action",
    "compose_wavefunction",
]


def _positive(name, value):
    if not (isinstance(value, (int, float, np.floating, np.integer)) and math.isfinite(value) and value > 0):
        raise DomainError(f"{name} must be a positive finite number, got {value!r}")


@dataclass(frozen=True)
class PhysicalParams:
    """Mass ``m`` and information coupling ``mu`` (action units)."""

    m: float = 1.0
    mu: float = 1.0

    def __post_init__(self):
        _positive("m", self.m)
        _positive("mu", self.mu)

    @property
    def kinetic(self) -> float:
        """mu^2 / (2 m), the coefficient of -d^2/dq^2."""
        return self.mu**2 / (2.0 * self.m)


class Geometry(enum.Enum):
    ONE_D = "1d"
    POLAR_2D = "2d-polar"


class PotentialKind(enum.Enum):
    FREE = "free"
    CONSTANT = "constant"
    HARMONIC = "harmonic"
    COULOMB = "coulomb"


_SUPPORTED = {
    (Geometry.ONE_D, PotentialKind.FREE): "free1d",
    (Geometry.ONE_D, PotentialKind.HARMONIC): "harmonic1d",
    (Geometry.ONE_D, PotentialKind.COULOMB): "coulomb1d",
    (Geometry.POLAR_2D, PotentialKind.CONSTANT): "const2d",
    (Geometry.POLAR_2D, PotentialKind.HARMONIC): "harmonic2d",
    (Geometry.POLAR_2D, PotentialKind.COULOMB): "coulomb2d",
}
SYSTEM_NAMES = tuple(_SUPPORTED.values())


@dataclass(frozen=True)
class SystemSpec:
    """One of the six supported (geometry, potential) pairs.

    ``strength`` is the spring constant k_s (harmonic), the coupling alpha
    (Coulomb, V = -alpha/q) or the depth V0 (constant, V = -V0); unused for
    the free particle.
    """

    geometry: Geometry
    kind: PotentialKind
    strength: float = 0.0

    def __post_init__(self):
        if (self.geometry, self.kind) not in _SUPPORTED:
            raise DomainError(f"unsupported system: {self.kind.value} in {self.geometry.value}")
        if not math.isfinite(self.strength):
            raise DomainError("potential parameter must be finite")
        if self.kind in (PotentialKind.HARMONIC, PotentialKind.COULOMB) and self.strength <= 0:
            raise DomainError(f"{self.kind.value} potential needs a positive parameter, got {self.strength}")

    @classmethod
    def free1d(cls):
        return cls(Geometry.ONE_D, PotentialKind.FREE)

    @classmethod
    def harmonic1d(cls, ks: float = 1.0):
        return cls(Geometry.ONE_D, PotentialKind.HARMONIC, ks)

    @classmethod
    def coulomb1d(cls, alpha: float = 1.0):
        return cls(Geometry.ONE_D, PotentialKind.COULOMB, alpha)

    @classmethod
    def const2d(cls, v0: float = 0.0):
        return cls(Geometry.POLAR_2D, PotentialKind.CONSTANT, v0)

    @classmethod
    def harmonic2d(cls, ks: float = 1.0):
        return cls(Geometry.POLAR_2D, PotentialKind.HARMONIC, ks)

    @classmethod
    def coulomb2d(cls, alpha: float = 1.0):
        return cls(Geometry.POLAR_2D, PotentialKind.COULOMB, alpha)

    @classmethod
    def from_name(cls, name: str, *, ks: float = 1.0, alpha: float = 1.0, v0: float = 0.0):
        factories = {
            "free1d": lambda: cls.free1d(),
            "harmonic1d": lambda: cls.harmonic1d(ks),
            "coulomb1d": lambda: cls.coulomb1d(alpha),
            "const2d": lambda: cls.const2d(v0),
            "harmonic2d": lambda: cls.harmonic2d(ks),
            "coulomb2d": lambda: cls.coulomb2d(alpha),
        }
        try:
            return factories[name]()
        except KeyError:
            raise DomainError(f"unknown system {name!r}; expected one of {', '.join(SYSTEM_NAMES)}") from None

    @property
    def name(self) -> str:
        return _SUPPORTED[(self.geometry, self.kind)]

    @property
    def polar(self) -> bool:
        return self.geometry is Geometry.POLAR_2D

    @property
    def bound(self) -> bool:
        """True when the printed solution has a discrete spectrum."""
        return self.kind in (PotentialKind.HARMONIC, PotentialKind.COULOMB)

    def check(self, qn: Optional["QuantumNumbers"]) -> "QuantumNumbers":
        """Validate quantum numbers against the geometry (l present iff polar)."""
        if qn is None:
            if self.polar:
                raise DomainError(f"{self.name} needs an angular index l")
            return QuantumNumbers(0)
        if self.polar and qn.l is None:
            raise DomainError(f"{self.name} needs an angular index l")
        if not self.polar and qn.l is not None:
            raise DomainError(f"{self.name} is one-dimensional; l must be omitted")
        return qn


@dataclass(frozen=True)
class QuantumNumbers:
    n: int
    l: Optional[int] = None

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 0:
            raise DomainError(f"n must be non-negative, got {self.n}")
        if self.l is not None and (int(self.l) != self.l or self.l < 0):
            raise DomainError(f"l must be non-negative, got {self.l}")

    @property
    def ell(self) -> int:
        return 0 if self.l is None else int(self.l)


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid q_min, q_min + h, ..., q_max with ``n`` points.

    The discrete problems put Dirichlet zeros on the ghost nodes q_min - h and
    q_max + h, so ``GridSpec.box(L, n)`` (q_min = h, q_max = L - h) encloses
    the interval (0, L).
    """

    q_min: float
    q_max: float
    n: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 3:
            raise DomainError(f"grid needs at least 3 points, got {self.n}")
        if not (math.isfinite(self.q_min) and math.isfinite(self.q_max) and self.q_max > self.q_min):
            raise DomainError("grid bounds must be finite with q_max > q_min")
        if self.q_min < 0.5 * self.h * (1 - 1e-12):
            raise DomainError(f"q_min = {self.q_min} is closer to the origin than h/2 = {0.5 * self.h}")

    @classmethod
    def box(cls, upper: float, n: int, lower: float = 0.0) -> "GridSpec":
        """Interior points of the Dirichlet box (lower, upper)."""
        h = (upper - lower) / (n + 1)
        return cls(lower + h, upper - h, n)

    @property
    def h(self) -> float:
        return (self.q_max - self.q_min) / (self.n - 1)

    @property
    def lower(self) -> float:
        return self.q_min - self.h

    @property
    def upper(self) -> float:
        return self.q_max + self.h

    def points(self) -> np.ndarray:
        return self.q_min + self.h * np.arange(self.n)

    def refined(self) -> "GridSpec":
        """Halve h while keeping the Dirichlet box (n -> 2n + 1)."""
        return GridSpec.box(self.upper, 2 * self.n + 1, lower=self.lower)

    def summary(self) -> dict:
        return {"q_min": self.q_min, "q_max": self.q_max, "n": self.n, "h": self.h}


@dataclass(frozen=True, eq=False)
class SampledField:
    """Real samples on a uniform positive grid (amplitude, density or momentum)."""

    grid: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if grid.ndim != 1 or grid.shape != values.shape or grid.size < 2:
            raise DomainError("grid and values must be 1-D arrays of equal length >= 2")
        if not (np.all(np.isfinite(grid)) and np.all(np.isfinite(values))):
            raise DomainError("sampled field must be finite")
        steps = np.diff(grid)
        h = (grid[-1] - grid[0]) / (grid.size - 1)
        if h <= 0 or np.max(np.abs(steps - h)) > 1e-9 * max(h, abs(grid[-1])):
            raise DomainError("grid must be strictly increasing with uniform spacing")
        if grid[0] < 0.5 * h * (1 - 1e-9):
            raise DomainError("grid must stay at least h/2 away from the origin")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)

    @classmethod
    def on(cls, grid: GridSpec, values) -> "SampledField":
        return cls(grid.points(), values)

    @property
    def h(self) -> float:
        return float((self.grid[-1] - self.grid[0]) / (self.grid.size - 1))

    def __len__(self):
        return self.grid.size

    def with_values(self, values) -> "SampledField":
        return SampledField(self.grid, values)

    def summary(self) -> dict:
        return {"q_min": float(self.grid[0]), "q_max": float(self.grid[-1]), "n": int(self.grid.size), "h": self.h}


def _coords(q):
    arr = np.asarray(q, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
        raise DomainError("coordinate must be positive and finite")
    return arr, arr.ndim == 0


def _out(values, scalar):
    return float(values) if scalar else values


def potential(system: SystemSpec, q):
    """External potential V(q)."""
    q, scalar = _coords(q)
    kind = system.kind
    if kind is PotentialKind.FREE:
        v = np.zeros_like(q)
    elif kind is PotentialKind.CONSTANT:
        v = np.full_like(q, -system.strength)
    elif kind is PotentialKind.HARMONIC:
        v = 0.5 * system.strength * q**2
    else:
        v = -system.strength / q
    return _out(v, scalar)


def _angular_index(system: SystemSpec, qn) -> int:
    if system.polar:
        return system.check(qn).ell
    return 0


def effective_potential(params: PhysicalParams, system: SystemSpec, qn: Optional[QuantumNumbers], q, *, barrier=True):
    """Coefficient of the amplitude in the printed stationary equation.

    1D:  mu^2/(8 m q^2) + V(q).
    2D:  mu^2 (l(l+1) + 1/4)/(2 m r^2) + V(r) = mu^2 (l+1/2)^2/(2 m r^2) + V(r),
         the form that multiplies rho next to -mu^2/(2m)(rho'' + rho'/r).

    ``barrier=False`` drops the mu^2/(8 m q^2) information term for comparison
    with the unregularized problem.
    """
    q, scalar = _coords(q)
    l = _angular_index(system, qn)
    info = 0.25 if barrier else 0.0
    centrifugal = l * (l + 1) + info if system.polar else info
    w = params.kinetic * centrifugal / q**2 + np.asarray(potential(system, q))
    return _out(w, scalar)


def reduced_potential(params: PhysicalParams, system: SystemSpec, qn: Optional[QuantumNumbers], q, *, barrier=True):
    """Potential of the Sturm-Liouville form -mu^2/(2m) u'' + W u = E u.

    Identical to :func:`effective_potential` in 1D; in 2D the substitution
    u = sqrt(r) rho removes mu^2/(8 m r^2), leaving mu^2 l(l+1)/(2 m r^2) + V.
    """
    w = np.asarray(effective_potential(params, system, qn, q, barrier=barrier))
    if system.polar:
        w = w - params.kinetic * 0.25 / np.asarray(q, dtype=float) ** 2
    return _out(w, np.ndim(q) == 0)


def guidance_momentum(params: PhysicalParams, q):
    """Stationary guidance momentum p = mu/(2q) (origin-centred, positive branch)."""
    q, scalar = _coords(q)
    return _out(0.5 * params.mu / q, scalar)


def phase_action(params: PhysicalParams, q, q0: float, E: float, t: float):
    """S(q, t) = (mu/2) ln(q/q0) - E t, so that dS/dq = mu/(2q) and dS/dt = -E."""
    q, scalar = _coords(q)
    if not (math.isfinite(q0) and q0 > 0):
        raise DomainError(f"reference coordinate q0 must be positive, got {q0}")
    return _out(0.5 * params.mu * np.log(q / q0) - E * t, scalar)


def compose_wavefunction(field: SampledField, params: PhysicalParams, E: float, q0: float, t: float) -> np.ndarray:
    """Psi = X exp(i S/mu) on the field's grid, as a complex array."""
    phase = np.asarray(phase_action(params, field.grid, q0, E, t)) / params.mu
    return field.values * np.exp(1j * phase)
