"""Randomized verification suites for the analytic bounds.

Each suite draws deterministic instances from a seeded generator, checks
the corresponding closed-form bound against exact numerics, and returns a
list of violation records (empty on success).
"""

import math
from dataclasses import dataclass

import numpy as np

from . import bounds
from .evolution import eigendecompose
from .model import BandSide, BathSpec, SystemParams, band_stats, build_block
from .thermal import plan_truncation, thermal_survival


def floor_suite(rng, trials, dim_max=8, grid_points=600, t_max=60.0):
    """Survival floor check on random spectra with a dominant weight.

    For weights with chi_1 = max_k w_k > 1/2 the grid minimum of
    |sum_k w_k exp(-i lam_k t)|^2 must stay above (2 chi_1 - 1)^2.
    """
    violations = []
    times = np.linspace(0.0, t_max, grid_points)
    for trial in range(trials):
        dim = int(rng.integers(2, dim_max + 1))
        chi1 = float(rng.uniform(0.5 + 1e-6, 1.0))
        rest = rng.random(dim - 1)
        rest *= (1.0 - chi1) / rest.sum()
        weights = np.concatenate(([chi1], rest))
        lams = rng.uniform(-10.0, 10.0, dim)
        amps = np.exp(-1j * np.outer(times, lams)) @ weights
        grid_min = float(np.min(np.abs(amps) ** 2))
        floor = bounds.survival_floor(chi1)
        if grid_min < floor - 1e-12:
            violations.append({
                "suite": "floor", "trial": trial, "chi1": chi1,
                "weights": weights.tolist(), "eigenvalues": lams.tolist(),
                "grid_min": grid_min, "floor": floor,
            })
    return violations


def random_admissible_instance(rng):
    """System, bath and occupations with the eigenvalue window admissible.

    Both band sides are exercised; couplings get random phases to cover
    the complex-coupling gauge.
    """
    D = int(rng.integers(1, 5))
    side = BandSide.ABOVE if rng.random() < 0.5 else BandSide.BELOW
    Omega = float(rng.uniform(0.2, 2.0))
    omega13 = float(rng.uniform(5.0, 15.0))
    sys = SystemParams(omega1=omega13, omega2=omega13 + float(rng.uniform(-3.0, 3.0)),
                       omega3=0.0, Omega=Omega)
    if side is BandSide.ABOVE:
        freqs = omega13 + rng.uniform(0.5, 5.0, D)
    else:
        freqs = rng.uniform(0.5, omega13 - 0.5, D)
    gmag = rng.uniform(0.3, 2.0, D)
    phases = np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, D))
    bath = BathSpec(modes=tuple(zip(freqs, gmag * phases)))
    band = band_stats(sys, bath)

    # grow occupations until the admissibility thresholds hold with margin
    block = build_block(sys, bath, (0,) * D)
    window = bounds.eigenvalue_window(block, band, sys)
    target = window.c_required * float(rng.uniform(1.3, 3.0))
    occ = [max(0, int(math.ceil(target * target / (D * g * g))) - 1)
           for g in gmag]
    while True:
        block = build_block(sys, bath, occ)
        window = bounds.eigenvalue_window(block, band, sys)
        if window.holds:
            break
        occ = [n + 1 for n in occ]
    return sys, bath, band, block, window


def localization_suite(rng, trials):
    """Eigenvalue localization and overlap bound on admissible blocks.

    Checks that an eigenvalue lies strictly inside the signed window next
    to delta_1 and that its measured first-basis overlap respects the
    closed-form lower bound.
    """
    violations = []
    for trial in range(trials):
        sys, bath, band, block, window = random_admissible_instance(rng)
        spec = eigendecompose(block)
        delta1 = sys.omega1 + block.delta
        eta = spec.eigenvalues - delta1
        if window.xi > 0:
            inside = (eta > 0.0) & (eta < window.xi)
        else:
            inside = (eta < 0.0) & (eta > window.xi)
        record = {
            "suite": "localization", "trial": trial,
            "occupations": block.occupations, "xi": window.xi,
            "coupling_norm": block.coupling_norm,
            "band_side": band.band_side.value,
        }
        if not np.any(inside):
            record["reason"] = "no eigenvalue inside window"
            record["eta"] = eta.tolist()
            violations.append(record)
            continue
        bound = bounds.overlap_lower_bound(block.coupling_norm, band.m,
                                           band.M, sys.Omega)
        overlap = float(np.sqrt(np.max(spec.weights[inside])))
        if overlap < bound - 1e-12:
            record["reason"] = "overlap below lower bound"
            record["overlap"] = overlap
            record["bound"] = bound
            violations.append(record)
    return violations


def mc_orthant_ball(rng, D, samples, c=1.0, batch=1_000_000):
    """Monte-Carlo estimate of the orthant-ball integral of prod_j y_j.

    The exact value is c^{2D} / (2^D D!), i.e. c^{2D} * G_D.
    """
    remaining = samples
    total = 0.0
    while remaining > 0:
        n = min(batch, remaining)
        y = rng.uniform(0.0, c, size=(n, D))
        f = np.prod(y, axis=1)
        f[np.sum(y * y, axis=1) >= c * c] = 0.0
        total += float(np.sum(f))
        remaining -= n
    estimate = total / samples * c ** D
    exact = c ** (2 * D) * bounds.geometric_factor(D)
    return estimate, exact


def geometric_factor_suite(rng, dims=(2, 3), samples=1_000_000, rtol=0.05):
    """Cross-check G_D against the Monte-Carlo orthant-ball integral."""
    violations = []
    for D in dims:
        estimate, exact = mc_orthant_ball(rng, D, samples)
        rel = abs(estimate / exact - 1.0)
        if rel > rtol:
            violations.append({
                "suite": "geometric_factor", "D": D, "samples": samples,
                "estimate": estimate, "exact": exact, "rel_error": rel,
            })
    return violations


@dataclass(frozen=True)
class SingleModeChain:
    """Instrumented single-mode inequality chain at one temperature."""

    n_eps: int
    floor: float                  # x^{n_eps} * sqrt(1 - eps)
    min_block_survival: float     # grid min over blocks with n >= n_eps
    blocks_ok: bool
    pointwise_ok: bool
    curve_min: float


def single_mode_chain(sys, bath, T, eps, times, tail_tol,
                      block_budget=None, threads=1):
    """Verify the single-oscillator survival chain at temperature T.

    Checks (a) every truncated block with n >= n_eps keeps its survival
    above sqrt(1 - eps) on the grid, and (b) the assembled curve respects
    P(t) >= x^{n_eps} sqrt(1 - eps) - tail_bound pointwise.
    """
    if bath.D != 1:
        raise ValueError("the instrumented chain is a single-mode statement")
    band = band_stats(sys, bath)
    c_eps = bounds.c_epsilon(eps, band.m, band.M, sys.Omega).exact
    n_eps = bounds.n_epsilon(c_eps, band.g_min)

    kwargs = {} if block_budget is None else {"block_budget": block_budget}
    plan = plan_truncation(bath, T, tail_tol, **kwargs)
    curve = thermal_survival(sys, bath, T, times, tail_tol,
                             threads=threads, **kwargs)

    omega = float(bath.freqs[0])
    g = float(np.abs(bath.couplings[0]))
    sqrt1me = math.sqrt(1.0 - eps)
    floor = math.exp(-omega * n_eps / T) * sqrt1me

    # grid minimum of |a(t)|^2 over every retained block with n >= n_eps,
    # via an independent LAPACK eigensolve
    cutoff = plan.cutoffs[0]
    min_surv = 1.0
    ns = np.arange(n_eps, cutoff + 1)
    for lo in range(0, ns.size, 2000):
        chunk = ns[lo:lo + 2000]
        mats = np.zeros((chunk.size, 3, 3))
        mats[:, 0, 0] = sys.omega1
        mats[:, 1, 1] = sys.omega2
        mats[:, 2, 2] = sys.omega3 + omega
        mats[:, 0, 1] = mats[:, 1, 0] = sys.Omega
        ck = g * np.sqrt(chunk + 1.0)
        mats[:, 1, 2] = mats[:, 2, 1] = ck
        lam, vec = np.linalg.eigh(mats)
        w = vec[:, 0, :] ** 2
        amps = np.einsum("bk,btk->bt", w,
                         np.exp(-1j * lam[:, None, :] * times[None, :, None]))
        min_surv = min(min_surv, float(np.min(np.abs(amps) ** 2)))

    blocks_ok = bool(ns.size == 0 or min_surv >= sqrt1me - 1e-10)
    pointwise_ok = bool(np.all(curve.values >= floor - curve.error_bound - 1e-12))
    return SingleModeChain(
        n_eps=n_eps, floor=floor, min_block_survival=min_surv,
        blocks_ok=blocks_ok, pointwise_ok=pointwise_ok,
        curve_min=float(np.min(curve.values)),
    )


def run_all(seed, trials, mc_samples=1_000_000):
    """Run every randomized suite; returns (report_lines, violations)."""
    rng = np.random.default_rng(seed)
    lines = []
    violations = []
    for name, suite in (
        ("survival-floor", lambda: floor_suite(rng, trials)),
        ("eigenvalue-localization", lambda: localization_suite(rng, trials)),
        ("geometric-factor-mc",
         lambda: geometric_factor_suite(rng, samples=mc_samples)),
    ):
        v = suite()
        lines.append(f"{name}: {'PASS' if not v else 'FAIL'} "
                     f"({len(v)} violation(s))")
        violations.extend(v)
    return lines, violations
