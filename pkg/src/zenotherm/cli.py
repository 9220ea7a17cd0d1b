"""Command-line experiment runner.

Subcommands:
  simulate      thermal survival curves -> CSV (optionally an SVG figure)
  thresholds    band statistics and every threshold temperature
  check-bounds  randomized verification of the analytic bounds
  preset        emit a built-in figure configuration as config text

Exit codes: 0 success, 2 config/usage error, 3 truncation plan over
budget, 4 band straddles the 1<->3 Bohr frequency, 5 bound violation.
"""

import argparse
import os
import sys

from . import verify
from .bounds import threshold_report
from .config import ConfigError, parse_config, preset, serialize_config
from .errors import BandStraddle, PlanTooLarge, ZenothermError
from .thermal import thermal_survival

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PLAN_TOO_LARGE = 3
EXIT_BAND_STRADDLE = 4
EXIT_BOUND_VIOLATION = 5


def _load_config(args, parser):
    if getattr(args, "preset", None):
        cfg = preset(args.preset)
    elif getattr(args, "config", None):
        try:
            with open(args.config) as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
        cfg = parse_config(text)
    else:
        parser.error("give --config PATH or --preset {fig1,fig2}")
    budget_env = os.environ.get("ZENO_BLOCK_BUDGET")
    if budget_env is not None:
        try:
            cfg = type(cfg)(**{**cfg.__dict__, "block_budget": int(budget_env)})
        except ValueError as exc:
            raise ConfigError(
                f"ZENO_BLOCK_BUDGET={budget_env!r} is not an integer") from exc
    return cfg


def _write_out(text, out_path):
    if out_path and out_path != "-":
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_simulate(args, parser):
    cfg = _load_config(args, parser)
    sys_params = cfg.system()
    bath = cfg.bath()
    temps, labels = cfg.absolute_temperatures()
    times = cfg.time_grid()
    curves = []
    for T in temps:
        curves.append(thermal_survival(
            sys_params, bath, T, times, cfg.tail_tol,
            block_budget=cfg.block_budget, threads=cfg.threads))
    from .report import csv_text, render_figure
    _write_out(csv_text(curves, labels, config=cfg), args.out)
    if args.svg:
        render_figure(args.svg, curves, labels,
                      ratio_labels=bool(cfg.kT_over_w23))
    return EXIT_OK


def _report_lines(rep, D):
    band = rep.band
    lines = [
        f"epsilon = {rep.epsilon:.17g}",
        f"chi = {rep.chi:.17g}",
        f"alpha = {rep.alpha:.17g}",
        f"m = {band.m:.17g}",
        f"M = {band.M:.17g}",
        f"g_min = {band.g_min:.17g}",
        f"g_av = {band.g_av:.17g}",
        f"omega_max = {band.omega_max:.17g}",
        f"omega_av = {band.omega_av:.17g}",
        f"band_side = {band.band_side.value}",
        f"c_eps_exact = {rep.c_eps_exact:.17g}",
        f"c_eps_asymptotic = {rep.c_eps_asymptotic:.17g}",
        f"n_eps = {rep.n_eps}",
    ]
    if rep.T_single is not None:
        lines.append(f"T_single = {rep.T_single:.17g}")
    lines += [
        f"T_cube_exact = {rep.T_cube_exact:.17g}",
        f"T_cube_asymptotic = {rep.T_cube_asymptotic:.17g}",
        f"T_sphere = {rep.T_sphere:.17g}",
        f"T_sphere_high_temperature_valid = {rep.T_sphere_valid}",
    ]
    return lines


def cmd_thresholds(args, parser):
    cfg = _load_config(args, parser)
    rep = threshold_report(cfg.system(), cfg.bath(), args.eps)
    _write_out("\n".join(_report_lines(rep, len(cfg.modes))) + "\n", args.out)
    return EXIT_OK


def cmd_check_bounds(args, parser):
    if args.trials < 1:
        parser.error("--trials must be >= 1")
    lines, violations = verify.run_all(args.seed, args.trials)
    print("\n".join(lines))
    if violations:
        print("counterexamples:")
        for v in violations[:10]:
            print(f"  {v}")
        return EXIT_BOUND_VIOLATION
    return EXIT_OK


def cmd_preset(args, parser):
    _write_out(serialize_config(preset(args.name)), args.out)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="zenotherm",
        description="Thermal Zeno-subspace simulator for a three-level "
                    "system coupled to thermalized harmonic modes.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_preset=True):
        p.add_argument("--config", help="experiment config file")
        if with_preset:
            p.add_argument("--preset", choices=("fig1", "fig2"),
                           help="use a built-in figure preset")
        p.add_argument("--out", default="-", help="output path (default stdout)")

    p_sim = sub.add_parser("simulate", help="run survival curves, emit CSV")
    add_common(p_sim)
    p_sim.add_argument("--svg", help="also render a figure to this path")
    p_sim.set_defaults(func=cmd_simulate)

    p_thr = sub.add_parser("thresholds", help="threshold temperature report")
    add_common(p_thr)
    p_thr.add_argument("--eps", type=float, default=0.1,
                       help="target survival deficit (default 0.1)")
    p_thr.set_defaults(func=cmd_thresholds)

    p_chk = sub.add_parser("check-bounds",
                           help="randomized verification of the bounds")
    p_chk.add_argument("--seed", type=int, default=42)
    p_chk.add_argument("--trials", type=int, default=100)
    p_chk.set_defaults(func=cmd_check_bounds)

    p_pre = sub.add_parser("preset", help="emit a built-in config")
    p_pre.add_argument("name", choices=("fig1", "fig2"))
    p_pre.add_argument("--out", default="-")
    p_pre.set_defaults(func=cmd_preset)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except PlanTooLarge as exc:
        print(f"error: {exc} (raise block_budget or ZENO_BLOCK_BUDGET)",
              file=sys.stderr)
        return EXIT_PLAN_TOO_LARGE
    except BandStraddle as exc:
        print("error: the oscillator band intersects the Bohr frequency of "
              f"the 1<->3 transition; the threshold formulas require every "
              f"mode strictly above or strictly below it. ({exc})",
              file=sys.stderr)
        return EXIT_BAND_STRADDLE
    except ZenothermError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def entry():
    raise SystemExit(main())


if __name__ == "__main__":
    raise SystemExit(main())
