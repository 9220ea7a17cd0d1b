"""CSV and figure output for survival-curve runs.

CSV schema: '# key=value' comment header lines (full parameter echo plus
the per-temperature tail bound and cutoffs), then a header row
't,P_T<label>,...' and the data printed with 17 significant digits so a
round-trip recovers the curve bit-exactly.
"""

import io

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def csv_text(curves, labels, config=None):
    """Render a set of survival curves (shared grid) to CSV text."""
    times = curves[0].times
    out = io.StringIO()
    if config is not None:
        for key in ("omega1", "omega2", "omega3", "Omega"):
            out.write(f"# {key}={getattr(config, key):.17g}\n")
        for i, (f, re, im) in enumerate(config.modes, start=1):
            out.write(f"# mode_{i}={f:.17g},{re:.17g},{im:.17g}\n")
        out.write(f"# tail_tol={config.tail_tol:.17g}\n")
        out.write(f"# n_times={config.n_times}\n")
        out.write(f"# block_budget={config.block_budget}\n")
    for curve, label in zip(curves, labels):
        out.write(f"# temperature_{label}={curve.temperature:.17g}\n")
        out.write(f"# tail_bound_{label}={curve.error_bound:.17g}\n")
        cut = ",".join(str(n) for n in curve.metadata.get("cutoffs", ()))
        out.write(f"# cutoffs_{label}={cut}\n")
    out.write("t," + ",".join(f"P_T{label}" for label in labels) + "\n")
    cols = [curve.values for curve in curves]
    for j in range(times.size):
        row = [f"{times[j]:.17g}"] + [f"{col[j]:.17g}" for col in cols]
        out.write(",".join(row) + "\n")
    return out.getvalue()


def read_csv_text(text):
    """Parse CSV text back into (times, columns dict, header dict)."""
    header = {}
    labels = []
    rows = []
    for line in text.splitlines():
        if not line.strip():
            continue
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition("=")
            header[key.strip()] = value.strip()
            continue
        if line.startswith("t,"):
            labels = [c[len("P_T"):] for c in line.split(",")[1:]]
            continue
        rows.append([float(v) for v in line.split(",")])
    data = np.array(rows)
    times = data[:, 0]
    columns = {label: data[:, i + 1] for i, label in enumerate(labels)}
    return times, columns, header


def render_figure(path, curves, labels, ratio_labels=True):
    """Static survival-probability figure, one line per temperature."""
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for curve, label in zip(curves, labels):
        name = (f"$k_B T/\\omega_{{23}} = {label}$" if ratio_labels
                else f"$k_B T = {label}$")
        ax.plot(curve.times, curve.values, lw=1.2, label=name)
    ax.set_xlabel(r"$t$  (units of $\Omega^{-1}$)")
    ax.set_ylabel(r"$P(t)$")
    ax.set_ylim(-0.02, 1.02)
    ax.legend(loc="lower right", fontsize=9)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
