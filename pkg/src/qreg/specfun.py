"""Real-order special functions on the positive real axis.

Cylinder functions are evaluated through :mod:`scipy.special` (AMOS/Cephes);
everything else here (Kummer series, Whittaker M, Pochhammer products, the
three-term polynomial recurrences and Bessel zeros) is computed directly.

All public functions accept scalars or numpy arrays for the argument and
return a float for scalar input.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Union

import numpy as np
from scipy import optimize, special

from .errors import DomainError

__all__ = [
    "BesselKind",
    "Hermite",
    "GeneralizedLaguerre",
    "OrthoPolyKind",
    "bessel",
    "bessel_derivative",
    "bessel_zero",
    "orthopoly",
    "hermite",
    "laguerre",
    "pochhammer",
    "kummer_m",
    "whittaker_m",
]


class BesselKind(enum.Enum):
    FIRST = "J"
    SECOND = "Y"
    MODIFIED_FIRST = "I"
    MODIFIED_SECOND = "K"


_BESSEL_IMPL = {
    BesselKind.FIRST: special.jv,
    BesselKind.SECOND: special.yv,
    BesselKind.MODIFIED_FIRST: special.iv,
    BesselKind.MODIFIED_SECOND: special.kv,
}


@dataclass(frozen=True)
class Hermite:
    """Physicists' Hermite polynomials H_n."""


@dataclass(frozen=True)
class GeneralizedLaguerre:
    """Generalized Laguerre polynomials L_n^(a), a > -1."""

    a: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and self.a > -1.0):
            raise DomainError(f"Laguerre parameter must exceed -1, got {self.a}")


OrthoPolyKind = Union[Hermite, GeneralizedLaguerre]


def _scalar_or_array(x):
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def _unwrap(values, scalar):
    return float(values) if scalar else values


def _require_finite(name, value):
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value}")


def bessel(kind: BesselKind, nu: float, x):
    """J_nu, Y_nu, I_nu or K_nu evaluated at x > 0.

    The second-kind functions diverge as x -> 0+ and are returned as computed
    (possibly +-inf after underflow of the argument power) rather than clipped.
    """
    _require_finite("nu", nu)
    arr, scalar = _scalar_or_array(x)
    if not np.all(np.isfinite(arr)):
        raise DomainError("Bessel argument must be finite")
    if np.any(arr <= 0):
        raise DomainError("Bessel argument must be positive")
    return _unwrap(_BESSEL_IMPL[kind](nu, arr), scalar)


def bessel_derivative(kind: BesselKind, nu: float, x):
    """d/dx of a cylinder function, from the order-raising recurrence.

    Uses Z'_nu = (nu/x) Z_nu - Z_{nu+1} (J, Y), I'_nu = I_{nu+1} + (nu/x) I_nu
    and K'_nu = (nu/x) K_nu - K_{nu+1}; no finite differences.
    """
    arr, scalar = _scalar_or_array(x)
    this = np.asarray(bessel(kind, nu, arr))
    upper = np.asarray(bessel(kind, nu + 1.0, arr))
    if kind is BesselKind.MODIFIED_FIRST:
        out = upper + nu / arr * this
    else:
        out = nu / arr * this - upper
    return _unwrap(out, scalar)


@lru_cache(maxsize=512)
def _bessel_zeros(nu: float, count: int) -> tuple[float, ...]:
    # Consecutive zeros of J_nu (nu >= 0) are more than 3 apart, and J_nu > 0
    # on (0, j_{nu,1}) with j_{nu,1} > nu, so a unit-step scan from x = nu
    # brackets every root exactly once.
    step = 1.0
    x = max(nu, 0.5)
    fx = special.jv(nu, x)
    roots: list[float] = []
    while len(roots) < count:
        x_next = x + step
        f_next = special.jv(nu, x_next)
        if fx == 0.0:
            roots.append(x)
        elif fx * f_next < 0.0:
            roots.append(
                optimize.brentq(
                    lambda t: special.jv(nu, t), x, x_next, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200
                )
            )
        x, fx = x_next, f_next
    return tuple(roots)


def bessel_zero(nu: float, k: int) -> float:
    """k-th positive zero j_{nu,k} of J_nu (k = 1, 2, ...)."""
    _require_finite("nu", nu)
    if nu < 0:
        raise DomainError(f"Bessel zero requires nu >= 0, got {nu}")
    if int(k) != k or k < 1:
        raise DomainError(f"zero index must be a positive integer, got {k}")
    return _bessel_zeros(float(nu), int(k))[int(k) - 1]


def hermite(n: int, x):
    """H_n(x) by the recurrence H_{k+1} = 2x H_k - 2k H_{k-1}."""
    if int(n) != n or n < 0:
        raise DomainError(f"polynomial degree must be a non-negative integer, got {n}")
    arr, scalar = _scalar_or_array(x)
    prev = np.ones_like(arr)
    if n == 0:
        return _unwrap(prev, scalar)
    cur = 2.0 * arr
    for k in range(1, int(n)):
        prev, cur = cur, 2.0 * arr * cur - 2.0 * k * prev
    return _unwrap(cur, scalar)


def laguerre(n: int, a: float, x):
    """L_n^(a)(x) by (k+1) L_{k+1} = (2k+1+a-x) L_k - (k+a) L_{k-1}."""
    GeneralizedLaguerre(a)
    if int(n) != n or n < 0:
        raise DomainError(f"polynomial degree must be a non-negative integer, got {n}")
    arr, scalar = _scalar_or_array(x)
    prev = np.ones_like(arr)
    if n == 0:
        return _unwrap(prev, scalar)
    cur = 1.0 + a - arr
    for k in range(1, int(n)):
        prev, cur = cur, ((2 * k + 1 + a - arr) * cur - (k + a) * prev) / (k + 1)
    return _unwrap(cur, scalar)


def orthopoly(kind: OrthoPolyKind, n: int, x):
    if isinstance(kind, Hermite):
        return hermite(n, x)
    if isinstance(kind, GeneralizedLaguerre):
        return laguerre(n, kind.a, x)
    raise TypeError(f"unknown polynomial family {kind!r}")


def pochhammer(a: float, n: int) -> float:
    """Rising factorial (a)_n = a (a+1) ... (a+n-1) by direct product."""
    if int(n) != n or n < 0:
        raise DomainError(f"Pochhammer length must be a non-negative integer, got {n}")
    out = 1.0
    for k in range(int(n)):
        out *= a + k
    return out


def _nonpositive_integer(v: float) -> bool:
    return v <= 0 and float(v).is_integer()


_MAX_TERMS = 100_000


def _kummer_series(a: float, b: float, z: np.ndarray) -> np.ndarray:
    total = np.ones_like(z)
    term = np.ones_like(z)
    terminating = _nonpositive_integer(a)
    last = int(-a) if terminating else None
    k = 0
    while True:
        if terminating and k == last:
            break
        with np.errstate(over="ignore", invalid="ignore"):
            term = term * ((a + k) / (b + k)) * z / (k + 1)
            total = total + term
        k += 1
        if not np.all(np.isfinite(total)):
            raise OverflowError(f"confluent hypergeometric series overflowed (a={a}, b={b})")
        if terminating:
            continue
        # Tail is geometric once the term ratio drops below 1/2.
        ratio = np.abs((a + k) / (b + k) * z / (k + 1))
        if k > -a and np.all(ratio < 0.5) and np.all(np.abs(term) <= 1e-17 * np.abs(total)):
            break
        if k >= _MAX_TERMS:
            raise OverflowError(f"confluent hypergeometric series did not settle (a={a}, b={b})")
    return total


def kummer_m(a: float, b: float, z):
    """Kummer's confluent hypergeometric function M(a; b; z) = 1F1(a; b; z).

    Negative arguments of non-terminating series go through Kummer's
    transformation M(a; b; z) = e^z M(b - a; b; -z) so the summed terms keep
    one sign. Terminating series (a a non-positive integer) are summed exactly.
    """
    _require_finite("a", a)
    _require_finite("b", b)
    arr, scalar = _scalar_or_array(z)
    if not np.all(np.isfinite(arr)):
        raise DomainError("Kummer argument must be finite")
    if _nonpositive_integer(b):
        if not (_nonpositive_integer(a) and -a < -b):
            raise DomainError(f"M(a; b; z) undefined for b = {b} unless the series terminates first")
    if _nonpositive_integer(a):
        return _unwrap(_kummer_series(a, b, arr), scalar)

    out = np.empty_like(arr)
    pos = arr >= 0
    if np.any(pos):
        out[pos] = _kummer_series(a, b, arr[pos])
    if np.any(~pos):
        neg = arr[~pos]
        with np.errstate(over="raise"):
            out[~pos] = np.exp(neg) * _kummer_series(b - a, b, -neg)
    return _unwrap(out, scalar)


def whittaker_m(kappa_w: float, mu_w: float, z):
    """Whittaker function M_{kappa,mu}(z) = e^{-z/2} z^{mu+1/2} M(mu - kappa + 1/2; 1 + 2 mu; z)."""
    arr, scalar = _scalar_or_array(z)
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
        raise DomainError("Whittaker argument must be positive and finite")
    b = 1.0 + 2.0 * mu_w
    if _nonpositive_integer(b):
        raise DomainError(f"1 + 2 mu must not be a non-positive integer (mu = {mu_w})")
    series = np.asarray(kummer_m(mu_w - kappa_w + 0.5, b, arr))
    return _unwrap(np.exp(-0.5 * arr) * arr ** (mu_w + 0.5) * series, scalar)
