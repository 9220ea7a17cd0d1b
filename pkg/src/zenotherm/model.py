"""Physical parameter types and construction of the invariant Hamiltonian blocks.

A three-level system (levels 1, 2, 3) is driven between 1 and 2 with
strength Omega while level 2 exchanges quanta with D harmonic modes.
The full Hamiltonian splits into (D+2)-dimensional invariant blocks
labelled by a boson occupation tuple (n_1, ..., n_D), spanned by
|1,n>, |2,n>, |3,n+1_1>, ..., |3,n+1_D>.

Units: hbar = k_B = 1; every input is an energy, temperatures included.
"""

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BandStraddle, ZeroCoupling


class BandSide(enum.Enum):
    """Which side of the 1<->3 Bohr frequency the whole mode band sits on."""

    ABOVE = "above"   # every mode frequency > omega1 - omega3
    BELOW = "below"   # every mode frequency < omega1 - omega3


@dataclass(frozen=True)
class SystemParams:
    """Three-level system energies plus the 1<->2 drive strength.

    Omega >= 0 by convention: a global phase redefinition of level 2
    absorbs its sign.
    """

    omega1: float
    omega2: float
    omega3: float
    Omega: float

    def __post_init__(self):
        for name in ("omega1", "omega2", "omega3", "Omega"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v!r}")
        if self.Omega < 0:
            raise ValueError(f"Omega must be >= 0, got {self.Omega}")

    @property
    def omega23(self):
        """Bohr frequency of the 2<->3 transition, the caption unit."""
        return self.omega2 - self.omega3


@dataclass(frozen=True)
class BathSpec:
    """Ordered set of harmonic modes, each a (frequency, complex coupling) pair."""

    modes: tuple  # of (freq, complex g)

    def __post_init__(self):
        modes = tuple((float(f), complex(g)) for f, g in self.modes)
        object.__setattr__(self, "modes", modes)
        if len(modes) < 1:
            raise ValueError("bath needs at least one mode")
        for i, (f, _) in enumerate(modes):
            if not (math.isfinite(f) and f > 0):
                raise ValueError(f"mode {i}: frequency must be > 0, got {f!r}")

    @property
    def D(self):
        return len(self.modes)

    @property
    def freqs(self):
        return np.array([f for f, _ in self.modes])

    @property
    def couplings(self):
        return np.array([g for _, g in self.modes], dtype=complex)


@dataclass(frozen=True)
class HermitianBlock:
    """One invariant block of the full Hamiltonian.

    ``matrix`` is (D+2) x (D+2), Hermitian by construction, with
    arrowhead-plus-corner sparsity: index 0 couples only to index 1
    (strength Omega) and index 1 couples to index k+1 with strength
    g_k * sqrt(n_k + 1).
    """

    matrix: np.ndarray
    occupations: tuple
    delta: float            # sum_k n_k * freq_k, the common diagonal shift
    coupling_norm: float    # c = sqrt(sum_k |g_k|^2 (n_k + 1))
    basis_labels: tuple = field(repr=False, default=())

    @property
    def dim(self):
        return self.matrix.shape[0]


@dataclass(frozen=True)
class BandStats:
    """Mode-band summary feeding the analytic threshold formulas."""

    m: float           # min_k |omega3 - omega1 + freq_k|
    M: float           # max_k |omega3 - omega1 + freq_k|
    g_min: float
    g_av: float        # geometric mean of |g_k|
    omega_max: float
    omega_av: float    # geometric mean of the mode frequencies
    band_side: BandSide


def _validate_occupations(occupations, D):
    occ = tuple(int(n) for n in occupations)
    if len(occ) != D:
        raise ValueError(
            f"occupation tuple has length {len(occ)}, bath has {D} modes"
        )
    if any(n < 0 for n in occ):
        raise ValueError(f"occupations must be >= 0, got {occ}")
    return occ


def build_block(sys, bath, occupations):
    """Construct the invariant Hermitian block for one occupation tuple.

    Diagonal: (omega1 + delta, omega2 + delta, omega3 + delta + freq_1, ...,
    omega3 + delta + freq_D) with delta = sum_k n_k freq_k.  The complex
    coupling g_k sits at entry (1, k+1) with its conjugate mirrored below;
    every analytic bound consumes |g_k| only.
    """
    occ = _validate_occupations(occupations, bath.D)
    D = bath.D
    dim = D + 2
    freqs = bath.freqs
    gs = bath.couplings

    delta = float(np.dot(occ, freqs))
    H = np.zeros((dim, dim), dtype=complex)
    H[0, 0] = sys.omega1 + delta
    H[1, 1] = sys.omega2 + delta
    H[0, 1] = sys.Omega
    H[1, 0] = sys.Omega
    for k in range(D):
        H[k + 2, k + 2] = sys.omega3 + delta + freqs[k]
        ck = gs[k] * math.sqrt(occ[k] + 1)
        H[1, k + 2] = ck
        H[k + 2, 1] = np.conj(ck)

    cnorm = math.sqrt(sum(abs(gs[k]) ** 2 * (occ[k] + 1) for k in range(D)))
    labels = ("|1,n>", "|2,n>") + tuple(f"|3,n+1_{k+1}>" for k in range(D))
    return HermitianBlock(
        matrix=H,
        occupations=occ,
        delta=delta,
        coupling_norm=cnorm,
        basis_labels=labels,
    )


def band_stats(sys, bath, for_thresholds=True):
    """Band statistics (m, M, g_min, g_av, ...) of the bath.

    Raises BandStraddle when the mode band straddles or touches the
    1<->3 Bohr frequency (the bounds pipeline excludes that scenario),
    and ZeroCoupling when some |g_k| = 0 while the stats are meant for
    threshold formulas.
    """
    freqs = bath.freqs
    gabs = np.abs(bath.couplings)
    bohr13 = sys.omega1 - sys.omega3

    offsets = sys.omega3 - sys.omega1 + freqs
    if np.any(offsets == 0.0):
        raise BandStraddle(
            f"some mode frequency equals omega1 - omega3 = {bohr13} (m = 0)"
        )
    above = np.all(freqs > bohr13)
    below = np.all(freqs < bohr13)
    if not (above or below):
        raise BandStraddle(
            "mode frequencies straddle the 1<->3 Bohr frequency "
            f"omega1 - omega3 = {bohr13}"
        )
    if for_thresholds and np.any(gabs == 0.0):
        raise ZeroCoupling("threshold formulas require every |g_k| > 0")

    absoff = np.abs(offsets)
    return BandStats(
        m=float(absoff.min()),
        M=float(absoff.max()),
        g_min=float(gabs.min()),
        g_av=float(np.exp(np.mean(np.log(gabs)))) if np.all(gabs > 0) else 0.0,
        omega_max=float(freqs.max()),
        omega_av=float(np.exp(np.mean(np.log(freqs)))),
        band_side=BandSide.ABOVE if above else BandSide.BELOW,
    )
