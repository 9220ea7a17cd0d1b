"""Thermal ensemble over occupation tuples and the survival curve P(t).

P(t) = sum_n p_n |<1,n| U_n(t) |1,n>|^2 with geometric (Boltzmann) weights
p_n = prod_k (1 - x_k) x_k^{n_k}, x_k = exp(-freq_k / T).  The sum is
truncated to a per-mode box whose discarded weight is bounded rigorously;
that bound doubles as the curve's error bound, since every omitted term
is nonnegative and no larger than its Boltzmann weight.
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _kernel
from .errors import ConvergenceFailure, NonpositiveTemperature, PlanTooLarge
from .evolution import DEFAULT_TOL, block_survival_series
from .model import build_block, _validate_occupations

DEFAULT_BLOCK_BUDGET = 10_000_000

# Fixed chunk size for the deterministic reduction: workers process disjoint
# lexicographic chunks and the partial sums are combined in chunk order, so
# the result is bitwise independent of the worker count.
CHUNK = 1024


@dataclass(frozen=True)
class TruncationPlan:
    """Per-mode occupation cutoffs with a rigorous discarded-weight bound."""

    cutoffs: tuple            # max occupation N_k per mode
    tail_bound: float         # 1 - prod_k (1 - x_k^{N_k + 1})
    block_count: int          # prod_k (N_k + 1)


@dataclass(frozen=True)
class SurvivalCurve:
    """Truncated thermal survival curve with its pointwise error bracket.

    The true curve satisfies values <= P_true <= values + error_bound.
    """

    times: np.ndarray
    values: np.ndarray
    error_bound: float
    temperature: float
    metadata: dict = field(default_factory=dict)


def _mode_x(bath, T):
    return np.exp(-bath.freqs / T)


def boltzmann_weight(occupations, bath, T):
    """Normalized thermal weight of one occupation tuple."""
    occ = _validate_occupations(occupations, bath.D)
    if T < 0:
        raise NonpositiveTemperature(f"T must be >= 0, got {T}")
    if T == 0:
        return 1.0 if all(n == 0 for n in occ) else 0.0
    x = _mode_x(bath, T)
    w = 1.0
    for k in range(bath.D):
        w *= (1.0 - x[k]) * x[k] ** occ[k]
    return w


def plan_truncation(bath, T, tail_tol, block_budget=DEFAULT_BLOCK_BUDGET):
    """Smallest per-mode cutoffs with tail_bound <= tail_tol.

    Grown greedily on the mode with the largest marginal tail term
    x_k^{N_k + 1}; the resulting plans are nested in tail_tol, so
    refining the tolerance only ever adds tuples.
    """
    if T < 0:
        raise NonpositiveTemperature(f"T must be >= 0, got {T}")
    if not (0 < tail_tol < 1):
        raise ValueError(f"tail_tol must be in (0, 1), got {tail_tol}")
    D = bath.D
    if T == 0:
        return TruncationPlan(cutoffs=(0,) * D, tail_bound=0.0, block_count=1)

    x = _mode_x(bath, T)
    cutoffs = np.zeros(D, dtype=np.int64)

    def tail(cut):
        kept = 1.0
        for k in range(D):
            kept *= 1.0 - x[k] ** (cut[k] + 1)
        return 1.0 - kept

    count = 1
    while tail(cutoffs) > tail_tol:
        marg = x ** (cutoffs + 1)
        k = int(np.argmax(marg))
        cutoffs[k] += 1
        count = int(np.prod(cutoffs + 1))
        if count > block_budget:
            raise PlanTooLarge(count, block_budget)
    return TruncationPlan(
        cutoffs=tuple(int(n) for n in cutoffs),
        tail_bound=float(tail(cutoffs)),
        block_count=count,
    )


def _decode(idx, radix):
    occ = [0] * len(radix)
    for k in range(len(radix) - 1, -1, -1):
        occ[k] = int(idx % radix[k])
        idx //= radix[k]
    return tuple(occ)


def _is_uniform(times):
    if times.size < 3:
        return True, float(times[0]), float(times[-1] - times[0])
    t0 = float(times[0])
    dt = float((times[-1] - times[0]) / (times.size - 1))
    ref = t0 + dt * np.arange(times.size)
    scale = max(1.0, float(np.max(np.abs(times))))
    return bool(np.max(np.abs(times - ref)) <= 1e-12 * scale), t0, dt


def thermal_survival(sys, bath, T, times, tail_tol,
                     block_budget=DEFAULT_BLOCK_BUDGET, threads=1,
                     tol=DEFAULT_TOL):
    """Thermal survival curve P(t) over a truncated occupation box.

    Deterministic: identical inputs yield bitwise-identical curves for
    any ``threads`` (0 = one worker per CPU).
    """
    times = np.asarray(times, dtype=float)
    if times.size == 0:
        raise ValueError("time grid must be nonempty")
    if not np.all(np.isfinite(times)):
        raise ValueError("time grid must be finite")
    if T < 0:
        raise NonpositiveTemperature(f"T must be >= 0, got {T}")

    meta = {
        "omega1": sys.omega1, "omega2": sys.omega2, "omega3": sys.omega3,
        "Omega": sys.Omega,
        "modes": tuple((f, complex(g)) for f, g in bath.modes),
        "tail_tol": tail_tol,
    }

    if T == 0:
        # zero-temperature path: all weight on the zero tuple
        block = build_block(sys, bath, (0,) * bath.D)
        values = block_survival_series(block, times, tol=tol)
        meta["cutoffs"] = (0,) * bath.D
        return SurvivalCurve(times=times, values=values, error_bound=0.0,
                             temperature=0.0, metadata=meta)

    plan = plan_truncation(bath, T, tail_tol, block_budget=block_budget)
    meta["cutoffs"] = plan.cutoffs

    radix = np.array(plan.cutoffs, dtype=np.int64) + 1
    x = _mode_x(bath, T)
    log_x = -bath.freqs / T
    norm_w = float(np.prod(1.0 - x))
    freqs = bath.freqs
    gabs = np.abs(bath.couplings)
    uniform, t0, dt = _is_uniform(times)

    nblocks = plan.block_count
    starts = list(range(0, nblocks, CHUNK))

    def run(start):
        return _kernel.survival_chunk(
            start, min(CHUNK, nblocks - start), radix, freqs, gabs,
            sys.omega1, sys.omega2, sys.omega3, sys.Omega,
            log_x, norm_w, times, uniform, t0, dt, tol)

    if threads == 0:
        threads = os.cpu_count() or 1
    if threads > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            partials = ex.map(run, starts)
            total, comp, fail = _combine(partials, times.size)
    else:
        total, comp, fail = _combine(map(run, starts), times.size)

    if fail >= 0:
        raise ConvergenceFailure(_decode(fail, radix))
    values = total + comp
    return SurvivalCurve(times=times, values=values,
                         error_bound=plan.tail_bound, temperature=float(T),
                         metadata=meta)


def _combine(partials, nt):
    """Kahan-combine chunk partial sums in chunk order."""
    total = np.zeros(nt)
    comp = np.zeros(nt)
    fail = -1
    for psum, pcomp, pfail in partials:
        if pfail >= 0 and fail < 0:
            fail = int(pfail)
        # refined chunk partial is psum - pcomp (Kahan convention)
        for term in (psum, -pcomp):
            y = term - comp
            t = total + y
            comp = (t - total) - y
            total = t
    return total, -comp, fail
