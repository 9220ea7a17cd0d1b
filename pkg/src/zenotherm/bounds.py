"""Analytic bounds and threshold temperatures.

Closed forms for: the survival floor (2 chi - 1)^2 of a dominant-overlap
eigenstate, the eigenvalue window and overlap lower bound of a strongly
coupled block, the critical coupling c_eps, the single-mode threshold
temperature, the hypercube and hypersphere partition-function thresholds,
and the orthant-ball geometric factor 1 / (2^D D!).
"""

import enum
import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .errors import (BudgetExceeded, ChiOutOfRange, EpsOutOfRange,
                     InadmissibleC, NonpositiveTemperature, ZeroCoupling)
from .model import BandSide, BandStats, band_stats

_DIRECT_FACTORIAL_MAX = 140


def survival_floor(chi):
    """Worst-case survival probability (2 chi - 1)^2 when the dominant
    eigenstate overlap squared is chi > 1/2 (vacuous otherwise)."""
    if not (0.5 < chi <= 1.0):
        raise ChiOutOfRange(f"chi must be in (1/2, 1], got {chi}")
    return (2.0 * chi - 1.0) ** 2


def overlap_lower_bound(c, m, M, Omega):
    """Lower bound on |<1,n|lambda_1>| for coupling norm c.

    Admissible only for c^2 > 4 M Omega^2 / m; monotone increasing in c
    and approaching 1 as c -> infinity.
    """
    if not (0 < m <= M):
        raise ValueError(f"need 0 < m <= M, got m={m}, M={M}")
    if not c * c > 4.0 * M * Omega * Omega / m:
        raise InadmissibleC(
            f"c^2 = {c*c} must exceed 4 M Omega^2 / m = {4*M*Omega**2/m}"
        )
    c2 = c * c
    den = math.sqrt(m * m * c2 * c2 + 16.0 * M * M * Omega * Omega * c2
                    + 4.0 * m * m * M * M * Omega * Omega)
    return m * c2 / den


class CEpsilon(NamedTuple):
    exact: float
    asymptotic: float


def _check_eps(eps):
    if not (0.0 < eps < 1.0):
        raise EpsOutOfRange(f"eps must be in (0, 1), got {eps}")


def chi_of_eps(eps):
    """chi = ((1 - eps)^{1/4} + 1) / 2, evaluated without cancellation."""
    _check_eps(eps)
    q = math.exp(0.25 * math.log1p(-eps))
    return 0.5 * (q + 1.0)


def alpha_of_eps(eps):
    """alpha = 1 - sqrt(1 - eps), evaluated without cancellation."""
    _check_eps(eps)
    return -math.expm1(0.5 * math.log1p(-eps))


def c_epsilon(eps, m, M, Omega):
    """Critical coupling norm: blocks with c >= c_eps keep the squared
    dominant overlap above chi(eps), hence survival above sqrt(1 - eps)."""
    _check_eps(eps)
    if not (0 < m <= M):
        raise ValueError(f"need 0 < m <= M, got m={m}, M={M}")
    q = math.exp(0.25 * math.log1p(-eps))
    one_minus_q = -math.expm1(0.25 * math.log1p(-eps))
    exact = 4.0 * M * Omega / m * math.sqrt((1.0 + q) / one_minus_q)
    asymptotic = 8.0 * math.sqrt(2.0) * Omega * M / (m * math.sqrt(eps))
    return CEpsilon(exact=exact, asymptotic=asymptotic)


def n_epsilon(c_eps, g_min):
    """Smallest integer strictly larger than c_eps^2 / g_min^2."""
    if g_min <= 0:
        raise ZeroCoupling("n_epsilon needs g_min > 0")
    return int(math.floor(c_eps * c_eps / (g_min * g_min))) + 1


def threshold_single(eps, omega, n_eps):
    """Single-mode threshold temperature T_eps = -2 omega n_eps / log(1 - eps)."""
    _check_eps(eps)
    return 2.0 * omega * n_eps / (-math.log1p(-eps))


class HypercubeThreshold(NamedTuple):
    exact: float
    asymptotic: float


def threshold_hypercube(eps, band, Omega, D):
    """Sufficient temperature from the hypercube partition-function bound.

    The exact form inverts (1 - x^{n_eps})^D < alpha; the asymptotic form
    is the small-eps expansion (valid when alpha^{1/D} << 1).
    """
    _check_eps(eps)
    if D < 1:
        raise ValueError(f"D must be >= 1, got {D}")
    c_eps = c_epsilon(eps, band.m, band.M, Omega).exact
    n_eps = n_epsilon(c_eps, band.g_min)
    alpha = alpha_of_eps(eps)
    a1d = alpha ** (1.0 / D)
    if a1d > 0.1:
        warnings.warn(
            f"alpha^(1/D) = {a1d:.3g} is not small; the asymptotic "
            "hypercube threshold is unreliable here", stacklevel=2)
    exact = band.omega_max * n_eps / (-math.log1p(-a1d))
    asymptotic = (64.0 * band.M ** 2 * Omega ** 2 * band.omega_max
                  / (band.m ** 2 * band.g_min ** 2)
                  * (2.0 / eps) ** ((D + 1.0) / D) * D)
    return HypercubeThreshold(exact=exact, asymptotic=asymptotic)


class HypersphereThreshold(NamedTuple):
    value: float
    # continuum approximation needs k_B T >> max mode frequency
    high_temperature_valid: bool


def threshold_hypersphere(eps, band, Omega, D, validity_factor=10.0):
    """Sufficient temperature from the hypersphere continuum estimate.

    T_s = 2^7 e M^2 Omega^2 omega_av / (m^2 g_av^2 D eps); only meaningful
    in the high-temperature regime, flagged via T_s >= validity_factor *
    omega_max.
    """
    _check_eps(eps)
    if D < 1:
        raise ValueError(f"D must be >= 1, got {D}")
    if band.g_av <= 0:
        raise ZeroCoupling("hypersphere threshold needs g_av > 0")
    value = (128.0 * math.e * band.M ** 2 * Omega ** 2 * band.omega_av
             / (band.m ** 2 * band.g_av ** 2 * D * eps))
    return HypersphereThreshold(
        value=value,
        high_temperature_valid=value >= validity_factor * band.omega_max,
    )


def geometric_factor(D):
    """Orthant-ball integral constant G_D = 1 / (2^D D!)."""
    if D < 1:
        raise ValueError(f"D must be >= 1, got {D}")
    if D <= _DIRECT_FACTORIAL_MAX:
        return 1.0 / (2 ** D * math.factorial(D))
    return math.exp(-D * math.log(2.0) - math.lgamma(D + 1.0))


def geometric_factor_stirling(D):
    """Stirling form (2 pi D)^{-1/2} 2^{-D} D^{-D} e^D of G_D."""
    if D < 1:
        raise ValueError(f"D must be >= 1, got {D}")
    return math.exp(-0.5 * math.log(2.0 * math.pi * D)
                    - D * math.log(2.0) - D * math.log(D) + D)


@dataclass(frozen=True)
class EigenWindow:
    """Predicted eigenvalue window next to delta_1 = omega1 + delta.

    When ``holds``, an eigenvalue lies strictly between delta_1 and
    delta_1 + xi (xi is signed: positive when the band sits above the
    1<->3 Bohr frequency, negative below).
    """

    xi: float
    c_required: float
    holds: bool
    thresholds: dict


def eigenvalue_window(block, band, sys):
    """Admissibility check and window width for one block.

    Enforces the union of the admissibility conditions (eigenvalue
    existence, sign change of the secular polynomial, overlap denominator
    control); the per-condition breakdown is reported in ``thresholds``.
    """
    m, M = band.m, band.M
    Om = sys.Omega
    c = block.coupling_norm
    d21 = sys.omega2 - sys.omega1

    thresholds = {
        "eigenvalue_existence": Om * math.sqrt(2.0 * M / m),
        "overlap_denominator": 2.0 * Om * math.sqrt(M / m),
    }
    # the sign-change condition only binds when delta2 - delta1 points the
    # same way as the band; otherwise the secular polynomial flips sign for
    # any admissible c
    if band.band_side is BandSide.ABOVE and d21 > 0:
        thresholds["sign_change"] = math.sqrt(2.0 * d21 * M)
    elif band.band_side is BandSide.BELOW and d21 < 0:
        thresholds["sign_change"] = math.sqrt(2.0 * (-d21) * M)
    else:
        thresholds["sign_change"] = 0.0

    c_required = max(thresholds.values())
    holds = c > c_required
    if c > 0:
        xi_mag = 2.0 * M * Om * Om / (c * c)
    else:
        xi_mag = math.inf
    xi = xi_mag if band.band_side is BandSide.ABOVE else -xi_mag
    return EigenWindow(xi=xi, c_required=c_required, holds=holds,
                       thresholds=thresholds)


class PartitionMode(enum.Enum):
    EXACT_ENUMERATION = "exact"
    CUBE_BOUND = "cube"
    SPHERE_APPROX = "sphere"


def partition_ratio(bath, T, c_eps, mode, budget=10_000_000):
    """Relative thermal weight Z_eps / Z_tot of the weakly coupled region
    {sum_k |g_k|^2 n_k < c_eps^2}.

    Exact enumeration and the cube bound certify; the sphere form is the
    continuum approximation and may exceed 1 outside its regime.
    """
    if T <= 0:
        raise NonpositiveTemperature(f"T must be > 0, got {T}")
    gabs = np.abs(bath.couplings)
    x = np.exp(-bath.freqs / T)
    D = bath.D

    if mode is PartitionMode.CUBE_BOUND:
        n_eps = n_epsilon(c_eps, float(gabs.min()))
        return float(np.prod(1.0 - x ** n_eps))

    if mode is PartitionMode.SPHERE_APPROX:
        if np.any(gabs == 0.0):
            raise ZeroCoupling("sphere approximation needs every |g_k| > 0")
        log_r = (2.0 * D * math.log(c_eps) - math.lgamma(D + 1.0)
                 + float(np.sum(np.log(bath.freqs / (gabs ** 2 * T)))))
        ratio = math.exp(log_r)
        if T < 10.0 * float(bath.freqs.max()) or ratio > 1.0:
            warnings.warn(
                "sphere approximation outside its high-temperature "
                f"validity regime (T={T}, ratio={ratio:.3g})", stacklevel=2)
        return ratio

    if mode is not PartitionMode.EXACT_ENUMERATION:
        raise ValueError(f"unknown mode {mode!r}")
    if np.any(gabs == 0.0):
        raise ZeroCoupling("exact enumeration needs every |g_k| > 0 "
                           "(the region would be infinite)")
    c2 = c_eps * c_eps
    norm = np.prod(1.0 - x)
    visited = 0

    def rec(k, remaining, wk):
        nonlocal visited
        if k == D:
            visited += 1
            if visited > budget:
                raise BudgetExceeded(
                    f"exact enumeration exceeded budget of {budget} tuples")
            return wk
        g2 = gabs[k] ** 2
        total = 0.0
        n = 0
        while n * g2 < remaining:
            total += rec(k + 1, remaining - n * g2, wk * x[k] ** n)
            n += 1
        return total

    return float(norm * rec(0, c2, 1.0))


@dataclass(frozen=True)
class ThresholdReport:
    """All threshold quantities for one system/bath/eps instance."""

    epsilon: float
    chi: float
    alpha: float
    c_eps_exact: float
    c_eps_asymptotic: float
    n_eps: int
    T_single: Optional[float]       # D = 1 only
    T_cube_exact: float
    T_cube_asymptotic: float
    T_sphere: float
    T_sphere_valid: bool
    band: BandStats


def threshold_report(sys, bath, eps):
    """Compute the full threshold report (band stats plus every formula)."""
    _check_eps(eps)
    band = band_stats(sys, bath)
    ce = c_epsilon(eps, band.m, band.M, sys.Omega)
    n_eps = n_epsilon(ce.exact, band.g_min)
    t_single = None
    if bath.D == 1:
        t_single = threshold_single(eps, float(bath.freqs[0]), n_eps)
    cube = threshold_hypercube(eps, band, sys.Omega, bath.D)
    sphere = threshold_hypersphere(eps, band, sys.Omega, bath.D)
    return ThresholdReport(
        epsilon=eps,
        chi=chi_of_eps(eps),
        alpha=alpha_of_eps(eps),
        c_eps_exact=ce.exact,
        c_eps_asymptotic=ce.asymptotic,
        n_eps=n_eps,
        T_single=t_single,
        T_cube_exact=cube.exact,
        T_cube_asymptotic=cube.asymptotic,
        T_sphere=sphere.value,
        T_sphere_valid=sphere.high_temperature_valid,
        band=band,
    )
