"""Experiment configuration: a flat, sectioned key=value text format.

Grammar (documented in the README):

    # comment lines and blank lines are ignored
    [system]
    omega1 = 20.0        # level energies and the 1<->2 drive
    omega2 = 19.0
    omega3 = 0.0
    Omega  = 1.0
    [bath]
    mode = 19.0, 1.0, 0.0    # freq, g_re, g_im -- repeat once per mode
    [run]
    kT_over_w23 = 0.1, 1, 10, 100   # or: temperatures = ... (absolute)
    t_max = 10.0
    n_times = 400
    tail_tol = 1e-4
    block_budget = 10000000
    threads = 0

Unknown sections or keys are rejected.  ``temperatures`` and
``kT_over_w23`` are mutually exclusive.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError
from .model import BathSpec, SystemParams

_RUN_DEFAULTS = {
    "t_max": None,          # defaults to 10 / Omega
    "n_times": 400,
    "tail_tol": 1e-4,
    "block_budget": 10_000_000,
    "threads": 0,
}

_SYSTEM_KEYS = ("omega1", "omega2", "omega3", "Omega")


@dataclass(frozen=True)
class ExperimentConfig:
    omega1: float
    omega2: float
    omega3: float
    Omega: float
    modes: tuple                      # of (freq, g_re, g_im)
    temperatures: tuple = ()          # absolute k_B T values
    kT_over_w23: tuple = ()           # ratios to omega2 - omega3
    t_max: float = None
    n_times: int = 400
    tail_tol: float = 1e-4
    block_budget: int = 10_000_000
    threads: int = 0
    labels: tuple = field(default=(), repr=False)

    def system(self):
        try:
            return SystemParams(self.omega1, self.omega2, self.omega3,
                                self.Omega)
        except ValueError as exc:
            raise ConfigError(f"[system] {exc}") from exc

    def bath(self):
        try:
            return BathSpec(modes=tuple(
                (f, complex(re, im)) for f, re, im in self.modes))
        except ValueError as exc:
            raise ConfigError(f"[bath] {exc}") from exc

    def absolute_temperatures(self):
        """Temperatures in energy units, and display labels.

        Ratios are labelled by the ratio itself (as in the figure
        captions); absolute temperatures by their value.
        """
        if self.kT_over_w23:
            w23 = self.omega2 - self.omega3
            if w23 <= 0:
                raise ConfigError(
                    "kT_over_w23 needs omega2 - omega3 > 0, got "
                    f"{w23}")
            return (tuple(r * w23 for r in self.kT_over_w23),
                    tuple(_fmt(r) for r in self.kT_over_w23))
        return (self.temperatures, tuple(_fmt(t) for t in self.temperatures))

    def effective_t_max(self):
        if self.t_max is not None:
            return self.t_max
        if self.Omega <= 0:
            raise ConfigError("t_max must be given explicitly when Omega = 0")
        return 10.0 / self.Omega

    def time_grid(self):
        return np.linspace(0.0, self.effective_t_max(), self.n_times)


def _fmt(x):
    return f"{x:g}"


def _parse_number(key, text):
    try:
        return float(text)
    except ValueError as exc:
        raise ConfigError(f"key '{key}': cannot parse number {text!r}") from exc


def _parse_list(key, text):
    items = [s.strip() for s in text.split(",") if s.strip()]
    if not items:
        raise ConfigError(f"key '{key}': empty list")
    return tuple(_parse_number(key, s) for s in items)


def parse_config(text):
    """Parse the sectioned key=value format into an ExperimentConfig."""
    sections = {"system": {}, "bath": [], "run": {}}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            name = line[1:-1].strip()
            if name not in sections:
                raise ConfigError(f"line {lineno}: unknown section [{name}]")
            current = name
            continue
        if current is None:
            raise ConfigError(f"line {lineno}: key outside any section")
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if current == "system":
            if key not in _SYSTEM_KEYS:
                raise ConfigError(f"line {lineno}: unknown [system] key '{key}'")
            if key in sections["system"]:
                raise ConfigError(f"line {lineno}: duplicate key '{key}'")
            sections["system"][key] = _parse_number(key, value)
        elif current == "bath":
            if key != "mode":
                raise ConfigError(f"line {lineno}: unknown [bath] key '{key}'")
            nums = _parse_list(key, value)
            if len(nums) == 2:
                nums = nums + (0.0,)
            if len(nums) != 3:
                raise ConfigError(
                    f"line {lineno}: mode takes 'freq, g_re[, g_im]'")
            sections["bath"].append(nums)
        else:
            known = set(_RUN_DEFAULTS) | {"temperatures", "kT_over_w23"}
            if key not in known:
                raise ConfigError(f"line {lineno}: unknown [run] key '{key}'")
            if key in sections["run"]:
                raise ConfigError(f"line {lineno}: duplicate key '{key}'")
            if key in ("temperatures", "kT_over_w23"):
                sections["run"][key] = _parse_list(key, value)
            elif key in ("n_times", "block_budget", "threads"):
                sections["run"][key] = int(_parse_number(key, value))
            else:
                sections["run"][key] = _parse_number(key, value)

    for key in _SYSTEM_KEYS:
        if key not in sections["system"]:
            raise ConfigError(f"missing [system] key '{key}'")
    if not sections["bath"]:
        raise ConfigError("the [bath] section needs at least one 'mode' line")
    run = dict(_RUN_DEFAULTS)
    run.update(sections["run"])
    has_abs = "temperatures" in sections["run"]
    has_ratio = "kT_over_w23" in sections["run"]
    if has_abs == has_ratio:
        raise ConfigError(
            "give exactly one of 'temperatures' or 'kT_over_w23'")
    cfg = ExperimentConfig(
        omega1=sections["system"]["omega1"],
        omega2=sections["system"]["omega2"],
        omega3=sections["system"]["omega3"],
        Omega=sections["system"]["Omega"],
        modes=tuple(sections["bath"]),
        temperatures=sections["run"].get("temperatures", ()),
        kT_over_w23=sections["run"].get("kT_over_w23", ()),
        t_max=run["t_max"],
        n_times=run["n_times"],
        tail_tol=run["tail_tol"],
        block_budget=run["block_budget"],
        threads=run["threads"],
    )
    # fail early on invalid physics, naming the offending section
    cfg.system()
    cfg.bath()
    if cfg.n_times < 1:
        raise ConfigError("n_times must be >= 1")
    if not (0 < cfg.tail_tol < 1):
        raise ConfigError("tail_tol must be in (0, 1)")
    if cfg.threads < 0:
        raise ConfigError("threads must be >= 0")
    return cfg


def serialize_config(cfg):
    """Inverse of parse_config (round-trips exactly for preset configs)."""
    lines = ["[system]"]
    for key in _SYSTEM_KEYS:
        lines.append(f"{key} = {getattr(cfg, key)!r}")
    lines.append("")
    lines.append("[bath]")
    for f, re, im in cfg.modes:
        lines.append(f"mode = {f!r}, {re!r}, {im!r}")
    lines.append("")
    lines.append("[run]")
    if cfg.kT_over_w23:
        lines.append("kT_over_w23 = " + ", ".join(repr(r) for r in cfg.kT_over_w23))
    else:
        lines.append("temperatures = " + ", ".join(repr(t) for t in cfg.temperatures))
    if cfg.t_max is not None:
        lines.append(f"t_max = {cfg.t_max!r}")
    lines.append(f"n_times = {cfg.n_times}")
    lines.append(f"tail_tol = {cfg.tail_tol!r}")
    lines.append(f"block_budget = {cfg.block_budget}")
    lines.append(f"threads = {cfg.threads}")
    return "\n".join(lines) + "\n"


# Figure presets: the published single-oscillator (D=1, g/Omega=1, mode on
# the 2<->3 transition) and four-oscillator (D=4, g/Omega=0.5, modes at
# {1, 0.996, 0.992, 0.987} of the transition) parameter sets.
def preset(name):
    w23 = 19.0
    if name == "fig1":
        return ExperimentConfig(
            omega1=20.0, omega2=19.0, omega3=0.0, Omega=1.0,
            modes=((w23, 1.0, 0.0),),
            kT_over_w23=(0.1, 1.0, 10.0, 100.0),
            t_max=10.0, n_times=400, tail_tol=1e-4,
            block_budget=10_000_000, threads=0,
        )
    if name == "fig2":
        ratios = (1.0, 0.996, 0.992, 0.987)
        return ExperimentConfig(
            omega1=20.0, omega2=19.0, omega3=0.0, Omega=1.0,
            modes=tuple((r * w23, 0.5, 0.0) for r in ratios),
            kT_over_w23=(0.1, 1.0, 5.0, 10.0),
            t_max=10.0, n_times=400, tail_tol=1e-3,
            # the 1e-3 tail at kT/w23 = 10 needs ~5e7 blocks
            block_budget=80_000_000, threads=0,
        )
    raise ConfigError(f"unknown preset '{name}' (expected fig1 or fig2)")
