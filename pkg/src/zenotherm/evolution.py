"""Exact spectral propagation of a single invariant block.

Blocks are tiny (D + 2 rows), so a cyclic Jacobi sweep is used instead of
an iterative large-scale solver.  Complex couplings are gauged away by a
diagonal phase transformation that leaves the first basis component -- and
therefore the survival amplitude -- untouched.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._kernel import MAX_SWEEPS, jacobi_eigh
from .errors import ConvergenceFailure

DEFAULT_TOL = 1e-13


@dataclass(frozen=True)
class BlockSpectrum:
    """Spectral decomposition of one block, seen from basis state |1,n>.

    ``weights[k]`` is |<1,n|phi_k>|^2 for the eigenvector phi_k belonging
    to ``eigenvalues[k]`` (ascending).  Eigenvectors are kept as columns
    for bound verification.
    """

    eigenvalues: np.ndarray
    weights: np.ndarray
    eigenvectors: np.ndarray


def _gauge_real(matrix):
    """Real symmetric copy of an arrowhead block plus the gauge phases.

    The block couples index 1 to every other index; a diagonal unitary
    diag(1, 1, phases) makes those couplings real without changing
    eigenvalues or first components of eigenvectors.
    """
    dim = matrix.shape[0]
    phases = np.ones(dim, dtype=complex)
    a = np.zeros((dim, dim))
    for i in range(dim):
        a[i, i] = matrix[i, i].real
    a[0, 1] = a[1, 0] = matrix[0, 1].real
    for k in range(2, dim):
        h = matrix[1, k]
        r = abs(h)
        if r > 0.0:
            phases[k] = h / r
        a[1, k] = a[k, 1] = r
    return a, phases


def eigendecompose(block, tol=DEFAULT_TOL):
    """Full spectral decomposition of a block.

    Raises ConvergenceFailure if the Jacobi sweep budget is exhausted
    before the off-diagonal norm drops below tol * ||H||_F.
    """
    if not tol > 0:
        raise ValueError(f"tol must be > 0, got {tol}")
    a, phases = _gauge_real(block.matrix)
    lam, v, converged = jacobi_eigh(a, tol, MAX_SWEEPS)
    if not converged:
        raise ConvergenceFailure(block.occupations)
    order = np.argsort(lam, kind="stable")
    lam = lam[order]
    v = v[:, order]
    weights = v[0, :] ** 2
    # undo the gauge: H = U^dag A U with U = diag(phases)
    vectors = np.conj(phases)[:, None] * v.astype(complex)
    return BlockSpectrum(eigenvalues=lam, weights=weights, eigenvectors=vectors)


def survival_amplitude(spec, t):
    """Amplitude a(t) = sum_k w_k exp(-i lam_k t); |a| <= 1."""
    if not math.isfinite(t):
        raise ValueError(f"t must be finite, got {t!r}")
    return complex(np.dot(spec.weights, np.exp(-1j * spec.eigenvalues * t)))


def block_survival_series(block, times, tol=DEFAULT_TOL):
    """|a(t)|^2 on a time grid, via one eigendecomposition."""
    times = np.asarray(times, dtype=float)
    if times.size == 0:
        raise ValueError("time grid must be nonempty")
    if not np.all(np.isfinite(times)):
        raise ValueError("time grid must be finite")
    spec = eigendecompose(block, tol=tol)
    amps = np.exp(-1j * np.outer(times, spec.eigenvalues)) @ spec.weights
    return np.abs(amps) ** 2
