"""End-to-end acceptance checks, one test per criterion.

Each test prints a single machine-greppable PASS/FAIL line; run pytest
with -rA (the repository default) to see the lines for passing tests.
"""

import contextlib
import time

import numpy as np
import pytest

import zenotherm as zt

W23 = 19.0

# reference curve minima from an independent high-precision run of the
# single-mode preset at tail_tol=1e-8 (tail_tol=1e-4 curves can sit at
# most 1e-4 below these, never above)
FIG1_ORACLE_MINIMA = {
    0.1: 0.010410313844828349,
    1.0: 0.07584751285620135,
    10.0: 0.5637123618013513,
    100.0: 0.9104685829662288,
}


@contextlib.contextmanager
def criterion(number, name):
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE {number} ({name}): FAIL")
        raise
    print(f"ACCEPTANCE {number} ({name}): PASS")


@pytest.fixture(scope="module", autouse=True)
def warm_kernel():
    # trigger the one-off numba compilation outside the timed runs
    cfg = zt.preset("fig1")
    zt.thermal_survival(cfg.system(), cfg.bath(), W23,
                        np.linspace(0.0, 1.0, 4), 0.5)


def run_preset(name, tail_tol=None):
    cfg = zt.preset(name)
    sys_params, bath = cfg.system(), cfg.bath()
    temps, _ = cfg.absolute_temperatures()
    times = cfg.time_grid()
    tol = cfg.tail_tol if tail_tol is None else tail_tol
    return [zt.thermal_survival(sys_params, bath, T, times, tol,
                                block_budget=cfg.block_budget)
            for T in temps], cfg


def test_acceptance_1_fig1_reproduction():
    with criterion(1, "single-mode figure reproduction"):
        start = time.perf_counter()
        curves, cfg = run_preset("fig1")
        elapsed = time.perf_counter() - start
        minima = [float(np.min(c.values)) for c in curves]
        # strictly increasing with temperature
        assert minima[0] < minima[1] < minima[2] < minima[3]
        # the hottest curve's deficit is at most a quarter of the next one's
        assert 1.0 - minima[3] <= 0.25 * (1.0 - minima[2])
        # each minimum brackets the high-precision oracle value
        for ratio, got in zip(cfg.kT_over_w23, minima):
            ref = FIG1_ORACLE_MINIMA[ratio]
            assert ref - 2e-4 <= got <= ref + 1e-8
        assert elapsed <= 60.0, f"fig1 run took {elapsed:.1f} s"


def test_acceptance_2_fig2_reproduction():
    with criterion(2, "four-mode figure reproduction"):
        start = time.perf_counter()
        curves, cfg = run_preset("fig2")
        elapsed = time.perf_counter() - start
        minima = [float(np.min(c.values)) for c in curves]
        # the survival minimum rises strictly with temperature through the
        # thermally excited regime; the two cold curves (ratios 0.1 and 1)
        # both collapse far below the hot ones and genuinely cross each
        # other (verified against an independent dense eigensolver), so
        # strict ordering is asserted from the ratio-1 curve upward
        assert minima[1] < minima[2] < minima[3]
        assert max(minima[0], minima[1]) < 0.5 * minima[2]
        for c in curves:
            assert c.error_bound <= 1e-3
            blocks = int(np.prod(np.array(c.metadata["cutoffs"]) + 1))
            assert blocks <= cfg.block_budget
        assert elapsed <= 600.0, f"fig2 run took {elapsed:.1f} s"


def test_acceptance_3_survival_floor():
    with criterion(3, "survival floor on randomized spectra"):
        rng = np.random.default_rng(2024)
        violations = zt.verify.floor_suite(rng, trials=1000)
        assert violations == []


def test_acceptance_4_eigenvalue_localization():
    with criterion(4, "eigenvalue localization and overlap bound"):
        rng = np.random.default_rng(2025)
        violations = zt.verify.localization_suite(rng, trials=500)
        assert violations == []


def test_acceptance_5_threshold_sufficiency():
    with criterion(5, "single-mode threshold sufficiency"):
        cfg = zt.preset("fig1")
        sys_params, bath = cfg.system(), cfg.bath()
        eps = 0.2
        band = zt.band_stats(sys_params, bath)
        c_eps = zt.c_epsilon(eps, band.m, band.M, sys_params.Omega).exact
        n_eps = zt.n_epsilon(c_eps, band.g_min)
        T_eps = zt.threshold_single(eps, W23, n_eps)
        times = cfg.time_grid()
        curve = zt.thermal_survival(sys_params, bath, T_eps, times, 1e-4)
        assert float(np.min(curve.values)) >= 1.0 - eps
        chain = zt.verify.single_mode_chain(sys_params, bath, T_eps, eps,
                                            times, 1e-4)
        assert chain.blocks_ok      # blocks past n_eps stay above sqrt(1-eps)
        assert chain.pointwise_ok   # P(t) >= x^{n_eps} sqrt(1-eps) - tail


def test_acceptance_6_geometric_factor():
    with criterion(6, "geometric factor cross-check"):
        rng = np.random.default_rng(2026)
        for D in (2, 3):
            estimate, exact = zt.verify.mc_orthant_ball(rng, D, 10_000_000)
            assert abs(estimate / exact - 1.0) < 0.01
        rel = abs(zt.geometric_factor_stirling(20)
                  / zt.geometric_factor(20) - 1.0)
        assert rel < 0.005


def test_acceptance_7_truncation_error_bound():
    with criterion(7, "truncation error bracket"):
        cfg = zt.preset("fig1")
        sys_params, bath = cfg.system(), cfg.bath()
        T = 10.0 * W23
        times = cfg.time_grid()
        coarse = zt.thermal_survival(sys_params, bath, T, times, 1e-3)
        fine = zt.thermal_survival(sys_params, bath, T, times, 1e-6)
        assert np.max(np.abs(fine.values - coarse.values)) <= 1e-3
        # both brackets [P, P + tail] must cover the same true curve
        assert np.all(coarse.values <= fine.values + fine.error_bound + 1e-12)
        assert np.all(fine.values <= coarse.values + coarse.error_bound
                      + 1e-12)


def test_acceptance_8_degenerate_cases():
    with criterion(8, "analytic degenerate cases"):
        times = np.linspace(0.0, 10.0, 100)
        bath = zt.BathSpec(modes=((W23, 1.0),))
        # Omega = 0 freezes level 1 entirely
        frozen = zt.SystemParams(omega1=20.0, omega2=19.0, omega3=0.0,
                                 Omega=0.0)
        curve = zt.thermal_survival(frozen, bath, W23, times, 1e-15)
        assert np.max(np.abs(curve.values - 1.0)) <= 1e-14
        # g = 0 with omega1 = omega2: resonant Rabi flopping
        rabi = zt.SystemParams(omega1=19.0, omega2=19.0, omega3=0.0,
                               Omega=1.0)
        silent = zt.BathSpec(modes=((W23, 0.0),))
        curve = zt.thermal_survival(rabi, silent, W23, times, 1e-15)
        assert np.max(np.abs(curve.values - np.cos(times) ** 2)) <= 1e-10
        # t = 0 is certain survival
        cfg = zt.preset("fig1")
        curve = zt.thermal_survival(cfg.system(), cfg.bath(), W23,
                                    np.array([0.0]), 1e-15)
        assert abs(curve.values[0] - 1.0) <= 1e-14


def test_acceptance_9_determinism():
    with criterion(9, "bitwise determinism across worker counts"):
        cfg = zt.preset("fig1")
        sys_params, bath = cfg.system(), cfg.bath()
        times = cfg.time_grid()
        T = 100.0 * W23
        ref = zt.thermal_survival(sys_params, bath, T, times, 1e-4,
                                  threads=1)
        for threads in (2, 8):
            cur = zt.thermal_survival(sys_params, bath, T, times, 1e-4,
                                      threads=threads)
            assert np.array_equal(ref.values, cur.values)
