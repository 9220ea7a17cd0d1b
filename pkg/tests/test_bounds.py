import math

import numpy as np
import pytest

from zenotherm import (BandSide, BandStats, BathSpec, BudgetExceeded,
                       ChiOutOfRange, EpsOutOfRange, InadmissibleC,
                       PartitionMode, SystemParams, ZeroCoupling,
                       alpha_of_eps, band_stats, build_block, c_epsilon,
                       chi_of_eps, eigendecompose, eigenvalue_window,
                       geometric_factor, geometric_factor_stirling, n_epsilon,
                       overlap_lower_bound, partition_ratio, survival_floor,
                       threshold_hypercube, threshold_hypersphere,
                       threshold_report, threshold_single)

from test_model import fig1_bath, fig1_system


def unit_band(band_side=BandSide.BELOW, m=1.0, M=1.0, g=1.0, omega=1.0):
    return BandStats(m=m, M=M, g_min=g, g_av=g, omega_max=omega,
                     omega_av=omega, band_side=band_side)


def test_survival_floor():
    assert survival_floor(1.0) == 1.0
    assert survival_floor(0.75) == pytest.approx(0.25, rel=1e-14)
    assert survival_floor(0.5 + 1e-9) == pytest.approx(4e-18, rel=1e-6)
    for bad in (0.5, 0.2, 1.0 + 1e-12):
        with pytest.raises(ChiOutOfRange):
            survival_floor(bad)


def test_overlap_lower_bound_values():
    # m = M = Omega = 1, c = 10: 100 / sqrt(11604), 50-digit oracle
    assert overlap_lower_bound(10.0, 1.0, 1.0, 1.0) == pytest.approx(
        0.928316650085848408, rel=1e-14)
    # c -> infinity approaches 1
    assert overlap_lower_bound(1e12, 1.0, 1.0, 1.0) == pytest.approx(
        1.0, abs=1e-12)
    with pytest.raises(InadmissibleC):
        overlap_lower_bound(1.9, 1.0, 1.0, 1.0)  # c^2 < 4 M Omega^2 / m
    with pytest.raises(ValueError):
        overlap_lower_bound(10.0, 2.0, 1.0, 1.0)  # m > M


def test_overlap_lower_bound_monotonicity():
    cs = np.linspace(3.0, 50.0, 40)
    vals = [overlap_lower_bound(c, 1.0, 2.0, 1.0) for c in cs]
    assert np.all(np.diff(vals) > 0)
    # nonincreasing in Omega and in M
    v1 = overlap_lower_bound(30.0, 1.0, 2.0, 1.0)
    assert overlap_lower_bound(30.0, 1.0, 2.0, 1.5) < v1
    assert overlap_lower_bound(30.0, 1.0, 3.0, 1.0) < v1


def test_chi_alpha_of_eps():
    assert chi_of_eps(15.0 / 16.0) == pytest.approx(0.75, rel=1e-14)
    assert alpha_of_eps(0.75) == pytest.approx(0.5, rel=1e-14)
    # cancellation-free near zero: chi - 1 ~ -eps/8, alpha ~ eps/2
    eps = 1e-14
    assert chi_of_eps(eps) - 1.0 == pytest.approx(-eps / 8.0, rel=1e-6)
    assert alpha_of_eps(eps) == pytest.approx(eps / 2.0, rel=1e-6)
    for f in (chi_of_eps, alpha_of_eps):
        with pytest.raises(EpsOutOfRange):
            f(0.0)
        with pytest.raises(EpsOutOfRange):
            f(1.0)


def test_c_epsilon_values():
    # (1 - eps)^{1/4} = 1/2 makes the radical collapse to sqrt(3)
    ce = c_epsilon(15.0 / 16.0, 1.0, 1.0, 1.0)
    assert ce.exact == pytest.approx(4.0 * math.sqrt(3.0), rel=1e-14)
    # small-eps asymptotics: 8 sqrt(2) Omega M / (m sqrt(eps))
    ce = c_epsilon(1e-4, 1.0, 1.0, 1.0)
    assert ce.asymptotic == pytest.approx(800.0 * math.sqrt(2.0), rel=1e-14)
    assert ce.asymptotic / ce.exact == pytest.approx(1.0, abs=1e-4)
    assert ce.exact == pytest.approx(1131.342564831691461, rel=1e-13)
    with pytest.raises(EpsOutOfRange):
        c_epsilon(0.0, 1.0, 1.0, 1.0)


def test_n_epsilon_strict():
    assert n_epsilon(2.0, 1.0) == 5        # ratio exactly 4 -> strictly above
    assert n_epsilon(2.1, 1.0) == 5        # 4.41 -> 5
    assert n_epsilon(1.0, 1.0) == 2        # ratio 1 -> 2
    with pytest.raises(ZeroCoupling):
        n_epsilon(2.0, 0.0)


def test_threshold_single():
    assert threshold_single(0.5, 1.0, 10) == pytest.approx(
        20.0 / math.log(2.0), rel=1e-14)
    assert threshold_single(0.5, 1.0, 10) == pytest.approx(28.8539008,
                                                           rel=1e-8)
    # eps = 1 - 1/e: log(1 - eps) = -1, so T = 2 omega n
    eps = -math.expm1(-1.0)
    assert threshold_single(eps, 3.0, 7) == pytest.approx(42.0, rel=1e-12)


def test_threshold_hypercube():
    band = unit_band()
    # asymptotic form at D=1, eps=0.02: 64 * (2/0.02)^2 = 64e4
    cube = threshold_hypercube(0.02, band, 1.0, 1)
    assert cube.asymptotic == pytest.approx(64.0e4, rel=1e-12)
    # exact D=1 form: -omega_max n_eps / log(1 - alpha)
    ce = c_epsilon(0.02, 1.0, 1.0, 1.0).exact
    n_eps = n_epsilon(ce, 1.0)
    alpha = alpha_of_eps(0.02)
    assert cube.exact == pytest.approx(
        -band.omega_max * n_eps / math.log1p(-alpha), rel=1e-12)
    # the asymptotic and exact forms track each other at small eps
    for eps in (1e-3, 1e-4, 1e-5):
        c = threshold_hypercube(eps, band, 1.0, 2)
        assert 0.1 < c.asymptotic / c.exact < 10.0
    with pytest.warns(UserWarning):
        threshold_hypercube(0.9, band, 1.0, 1)  # alpha^{1/D} not small


def test_threshold_hypercube_matches_single_at_d1():
    # ln(1 - alpha) = ln(sqrt(1-eps)) = ln(1-eps)/2, so the D=1 hypercube
    # temperature equals the single-mode threshold exactly
    band = unit_band(omega=3.0)
    for eps in (0.1, 0.3, 0.6):
        ce = c_epsilon(eps, band.m, band.M, 1.0).exact
        n_eps = n_epsilon(ce, band.g_min)
        single = threshold_single(eps, band.omega_max, n_eps)
        cube = threshold_hypercube(eps, band, 1.0, 1).exact
        assert cube == pytest.approx(single, rel=1e-12)


def test_threshold_hypersphere():
    band = unit_band()
    # all parameters 1, D=1, formal eps -> 1: 2^7 e
    t = threshold_hypersphere(1.0 - 1e-15, band, 1.0, 1)
    assert t.value == pytest.approx(128.0 * math.e, rel=1e-12)
    # explicit 1/D scaling at fixed band stats
    t1 = threshold_hypersphere(0.1, band, 1.0, 1).value
    t2 = threshold_hypersphere(0.1, band, 1.0, 2).value
    assert t2 == pytest.approx(t1 / 2.0, rel=1e-14)
    assert threshold_hypersphere(0.1, band, 1.0, 1).high_temperature_valid
    # a band whose top frequency dwarfs the predicted temperature is out
    # of the continuum regime
    cold = BandStats(m=1.0, M=1.0, g_min=1.0, g_av=1.0, omega_max=1e6,
                     omega_av=1.0, band_side=BandSide.BELOW)
    assert not threshold_hypersphere(0.1, cold, 1.0, 1).high_temperature_valid


def test_geometric_factor():
    assert geometric_factor(1) == 0.5
    assert geometric_factor(2) == 0.125
    assert geometric_factor(3) == pytest.approx(1.0 / 48.0, rel=1e-15)
    # Stirling form within 0.5% at D=20
    assert abs(geometric_factor_stirling(20) / geometric_factor(20) - 1.0) \
        < 0.005
    # log-space branch agrees with the direct one across the switchover
    # (kept below D ~ 150, where the value itself underflows a double)
    for D in (139, 140, 141, 150):
        logv = -D * math.log(2.0) - math.lgamma(D + 1.0)
        assert math.log(geometric_factor(D)) == pytest.approx(logv,
                                                              rel=1e-12)
    with pytest.raises(ValueError):
        geometric_factor(0)


def test_eigenvalue_window_fig1_block():
    sys = fig1_system()
    bath = fig1_bath()
    band = band_stats(sys, bath)
    block = build_block(sys, bath, (99,))   # c = 10
    window = eigenvalue_window(block, band, sys)
    assert window.holds
    # |xi| = 2 M Omega^2 / c^2 = 0.02, negative side (band below)
    assert window.xi == pytest.approx(-0.02, rel=1e-14)
    assert window.thresholds["eigenvalue_existence"] == pytest.approx(
        math.sqrt(2.0), rel=1e-14)
    # delta2 - delta1 = -1 < 0 with the band below: condition binds
    assert window.thresholds["sign_change"] == pytest.approx(math.sqrt(2.0),
                                                             rel=1e-14)
    # exact eigensolve confirms an eigenvalue inside the signed window
    spec = eigendecompose(block)
    eta = spec.eigenvalues - (sys.omega1 + block.delta)
    assert np.any((eta < 0.0) & (eta > window.xi))


def test_eigenvalue_window_inadmissible():
    sys = fig1_system()
    bath = fig1_bath()
    band = band_stats(sys, bath)
    block = build_block(sys, bath, (0,))    # c = 1 < sqrt(2)
    window = eigenvalue_window(block, band, sys)
    assert not window.holds


def test_partition_ratio_geometric():
    # D=1, x=1/2, region n < 3 (c_eps^2 = 3, g = 1): 1 - x^3 = 7/8
    bath = BathSpec(modes=((math.log(2.0), 1.0),))
    c_eps = math.sqrt(3.0)
    exact = partition_ratio(bath, 1.0, c_eps, PartitionMode.EXACT_ENUMERATION)
    assert exact == pytest.approx(7.0 / 8.0, rel=1e-12)
    cube = partition_ratio(bath, 1.0, c_eps, PartitionMode.CUBE_BOUND)
    assert cube == pytest.approx(7.0 / 8.0, rel=1e-12)


def test_partition_ratio_cube_dominates_exact():
    rng = np.random.default_rng(53)
    for _ in range(20):
        D = int(rng.integers(1, 4))
        bath = BathSpec(modes=tuple(
            (float(f), float(g)) for f, g in zip(rng.uniform(0.5, 3.0, D),
                                                 rng.uniform(0.4, 2.0, D))))
        T = float(rng.uniform(1.0, 10.0))
        c_eps = float(rng.uniform(1.0, 4.0))
        exact = partition_ratio(bath, T, c_eps,
                                PartitionMode.EXACT_ENUMERATION)
        cube = partition_ratio(bath, T, c_eps, PartitionMode.CUBE_BOUND)
        assert 0.0 <= exact <= 1.0
        assert cube >= exact - 1e-12


def test_partition_ratio_sphere_regime():
    bath = BathSpec(modes=((1.0, 1.0), (1.3, 1.0)))
    T = 100.0 * 1.3
    c_eps = 3.0
    exact = partition_ratio(bath, T, c_eps, PartitionMode.EXACT_ENUMERATION)
    sphere = partition_ratio(bath, T, c_eps, PartitionMode.SPHERE_APPROX)
    assert sphere == pytest.approx(exact, rel=0.10)


def test_partition_ratio_budget_and_errors():
    bath = BathSpec(modes=((1.0, 0.1),))
    with pytest.raises(BudgetExceeded):
        partition_ratio(bath, 5.0, 10.0, PartitionMode.EXACT_ENUMERATION,
                        budget=10)
    with pytest.raises(ZeroCoupling):
        partition_ratio(BathSpec(modes=((1.0, 0.0),)), 5.0, 1.0,
                        PartitionMode.EXACT_ENUMERATION)


def test_overlap_round_trip():
    # plugging c = c_eps into the overlap bound keeps the squared overlap
    # above 2 chi - 1 = (1 - eps)^{1/4}, hence the survival floor above
    # sqrt(1 - eps)
    for eps in (1e-6, 1e-3, 0.05, 0.2, 0.5, 0.9):
        for (m, M, Om) in ((1.0, 1.0, 1.0), (0.5, 2.0, 0.8), (2.0, 9.0, 1.7)):
            chi = chi_of_eps(eps)
            ce = c_epsilon(eps, m, M, Om).exact
            f = overlap_lower_bound(ce, m, M, Om)
            assert f * f >= 2.0 * chi - 1.0 - 1e-12
            # ... and the floor at chi equals sqrt(1 - eps) identically
            assert survival_floor(chi) == pytest.approx(
                math.sqrt(1.0 - eps), rel=1e-12)


def test_threshold_report_fig1():
    rep = threshold_report(fig1_system(), fig1_bath(), 0.2)
    assert rep.epsilon == 0.2
    assert rep.band.band_side is BandSide.BELOW
    assert rep.n_eps == int(rep.c_eps_exact ** 2) + 1
    assert rep.T_single == pytest.approx(
        threshold_single(0.2, 19.0, rep.n_eps), rel=1e-14)
    assert rep.T_cube_exact > 0
    assert rep.T_sphere > 0
    assert rep.chi == pytest.approx(chi_of_eps(0.2), rel=1e-15)


def test_threshold_report_multimode_has_no_single():
    sys = fig1_system()
    bath = BathSpec(modes=((19.0, 0.5), (18.5, 0.5)))
    rep = threshold_report(sys, bath, 0.1)
    assert rep.T_single is None
