"""Decoherence coefficients n, m, l, k from nested correlation integrals.

All four are double time integrals of Re[kappa] (or Re[kappa~], the
drive-demodulated correlation) against trigonometric factors at the spin
splitting, which is approximated by the field magnitude B inside every
integrand.  For a constant-angle drive the inner primitives are shared, so
the whole set costs O(N); the general-path variants couple the two time
arguments and cost O(N^2).
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import cumulative_simpson

from .bath import BathSpec, correlation
from .frames import DriveParams, frame_angles
from .paths import PathSpec


class ResolutionError(ValueError):
    """Time grid too coarse for the requested drive/bath."""


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid on [0, t_max] with an even number of intervals."""

    t_max: float
    samples: int

    def __post_init__(self):
        if self.t_max <= 0:
            raise ValueError(f"t_max must be > 0, got {self.t_max}")
        if self.samples < 3 or self.samples % 2 == 0:
            raise ValueError("samples must be odd and >= 3 (even interval count)")

    @property
    def dt(self) -> float:
        return self.t_max / (self.samples - 1)

    @property
    def ts(self) -> np.ndarray:
        return np.linspace(0.0, self.t_max, self.samples)

    def require_resolution(self, field: float, cutoff: float) -> None:
        """Enforce dt <= min(pi/(20 B), 1/(20 Omega))."""
        bound = min(np.pi / (20.0 * field), 1.0 / (20.0 * cutoff))
        if self.dt > bound * (1.0 + 1e-12):
            raise ResolutionError(
                f"dt={self.dt:.3e} violates dt <= min(pi/(20*B), 1/(20*cutoff)) = {bound:.3e}")

    def refined(self, factor: int) -> "TimeGrid":
        return TimeGrid(self.t_max, (self.samples - 1) * factor + 1)

    @classmethod
    def for_params(cls, field: float, cutoff: float, t_max: float, refine: int = 1) -> "TimeGrid":
        dt_max = min(np.pi / (20.0 * field), 1.0 / (20.0 * cutoff)) / refine
        n = int(np.ceil(t_max / dt_max))
        n += n % 2
        return cls(t_max, n + 1)


@dataclass
class CoefficientSet:
    """Sampled n(t), m(t), l(t), k(t) plus the inputs that produced them."""

    grid: TimeGrid
    n: np.ndarray
    m: np.ndarray
    l: np.ndarray
    k: np.ndarray
    provenance: dict

    def at(self, t: float):
        """Linearly interpolated (n, m, l, k) at time t."""
        ts = self.grid.ts
        return tuple(float(np.interp(t, ts, c)) for c in (self.n, self.m, self.l, self.k))

    def final(self):
        """(n, m, l, k) at t_max."""
        return float(self.n[-1]), float(self.m[-1]), float(self.l[-1]), float(self.k[-1])


@lru_cache(maxsize=32)
def correlation_kernel(bath: BathSpec, grid: TimeGrid) -> np.ndarray:
    """kappa sampled on the grid (cached: it is reused across drive angles)."""
    kappa = np.asarray(correlation(bath, grid.ts), dtype=complex)
    kappa.setflags(write=False)
    return kappa


def _cumulative(y: np.ndarray, dx: float) -> np.ndarray:
    """Cumulative Simpson primitive with F(0) = 0."""
    return cumulative_simpson(y, dx=dx, initial=0.0)


def _zero_set(grid: TimeGrid, provenance: dict) -> CoefficientSet:
    z = np.zeros(grid.samples)
    return CoefficientSet(grid, z, z.copy(), z.copy(), z.copy(), provenance)


def compute_coefficients(drive: DriveParams, bath: BathSpec, grid: TimeGrid,
                         kernel: np.ndarray = None) -> CoefficientSet:
    """Constant-angle coefficient set.

        n(t) = 4 sin^2(a) II cos(B s) Re[kappa]
        m(t) = 2 sin^2(a) int_0^t dt1 e^{n(t1)} int_0^{t1} Re[kappa~]
        l(t) = II (4 cos^2(a) + 2 sin^2(a) cos(B s)) Re[kappa]
        k(t) = 2 sin^2(a) II sin(B s) Re[kappa]

    with a the mixing angle of the drive and kappa~(s) = e^{-iBs} kappa(s).
    Inner primitives are built once by cumulative Simpson, so the cost is
    O(N).  A decoupled bath (coupling = 0) short-circuits to zeros.
    """
    prov = {"drive": drive, "bath": bath, "variant": "single-bath"}
    if bath.coupling == 0:
        return _zero_set(grid, prov)
    grid.require_resolution(drive.field, bath.cutoff)
    angles = frame_angles(drive)
    sin2, cos2 = np.sin(angles.alpha) ** 2, np.cos(angles.alpha) ** 2

    ts = grid.ts
    kappa = correlation_kernel(bath, grid) if kernel is None else kernel
    re_k = kappa.real
    b = drive.field
    re_kt = np.cos(b * ts) * re_k + np.sin(b * ts) * kappa.imag  # Re[kappa~]

    i_c = _cumulative(np.cos(b * ts) * re_k, grid.dt)
    i_s = _cumulative(np.sin(b * ts) * re_k, grid.dt)
    i_0 = _cumulative(re_k, grid.dt)
    i_t = _cumulative(re_kt, grid.dt)

    n = 4.0 * sin2 * _cumulative(i_c, grid.dt)
    l = _cumulative(4.0 * cos2 * i_0 + 2.0 * sin2 * i_c, grid.dt)
    k = 2.0 * sin2 * _cumulative(i_s, grid.dt)
    m = 2.0 * sin2 * _cumulative(i_t * np.exp(n), grid.dt)  # n finalized first
    return CoefficientSet(grid, n, m, l, k, prov)


def compute_coefficients_multinoise(drive: DriveParams, bath: BathSpec, grid: TimeGrid,
                                    kernel: np.ndarray = None) -> CoefficientSet:
    """Two independent baths with identical kappa on the static and rotating
    field components.  Channel sums cancel the mixing-angle dependence:

        n = 4 II cos(B s) Re[kappa]          l = II (4 + 2 cos(B s)) Re[kappa]
        k = 2 II sin(B s) Re[kappa]          m = 2 int e^{n} int Re[kappa~]

    so the output is independent of theta, and k is the same for both cycle
    directions (zero spectrum-induced phase shift in the echo).
    """
    prov = {"drive": drive, "bath": bath, "variant": "multi-noise"}
    if bath.coupling == 0:
        return _zero_set(grid, prov)
    grid.require_resolution(drive.field, bath.cutoff)
    ts = grid.ts
    kappa = correlation_kernel(bath, grid) if kernel is None else kernel
    re_k = kappa.real
    b = drive.field
    re_kt = np.cos(b * ts) * re_k + np.sin(b * ts) * kappa.imag

    i_c = _cumulative(np.cos(b * ts) * re_k, grid.dt)
    i_s = _cumulative(np.sin(b * ts) * re_k, grid.dt)
    i_0 = _cumulative(re_k, grid.dt)
    i_t = _cumulative(re_kt, grid.dt)

    n = 4.0 * _cumulative(i_c, grid.dt)
    l = _cumulative(4.0 * i_0 + 2.0 * i_c, grid.dt)
    k = 2.0 * _cumulative(i_s, grid.dt)
    m = 2.0 * _cumulative(i_t * np.exp(n), grid.dt)
    return CoefficientSet(grid, n, m, l, k, prov)


def _row_weights(npts: int, dx: float) -> np.ndarray:
    """Simpson weights for npts uniform samples, Cartwright-corrected when the
    interval count is odd (matches scipy's simpson)."""
    if npts == 1:
        return np.zeros(1)
    if npts == 2:
        return np.full(2, 0.5 * dx)
    w = np.zeros(npts)
    if npts % 2 == 1:
        w[0] = w[-1] = 1.0
        w[1:-1:2] = 4.0
        w[2:-1:2] = 2.0
        w *= dx / 3.0
    else:
        w[: npts - 1] = _row_weights(npts - 1, dx)
        w[-3] += -dx / 12.0
        w[-2] += 8.0 * dx / 12.0
        w[-1] += 5.0 * dx / 12.0
    return w


@lru_cache(maxsize=4)
def _row_weight_table(samples: int, dt: float) -> np.ndarray:
    """Stacked per-row Simpson weights W[i, :i+1] for inner integrals."""
    table = np.zeros((samples, samples))
    for i in range(samples):
        table[i, : i + 1] = _row_weights(i + 1, dt)
    return table


def mixing_angle_profile(path: PathSpec, field: float, ts: np.ndarray) -> np.ndarray:
    """First-order mixing angle along a path,
    alpha(t) = atan2(B sin(theta), B cos(theta) - phi_dot)."""
    th = np.asarray(path.theta(ts), dtype=float)
    pd = np.asarray(path.phi_dot(ts), dtype=float)
    return np.arctan2(field * np.sin(th), field * np.cos(th) - pd)


def compute_coefficients_path(path: PathSpec, bath: BathSpec, grid: TimeGrid,
                              field: float, kernel: np.ndarray = None) -> CoefficientSet:
    """General-path coefficient set with angle factors inside the integrals:

        n'(t) = 4 II sin a(t1) sin a(t1-s) cos(B s) Re[kappa]            etc.

    The angle profile a(t) is the first-order mixing angle along the loop
    (for a constant-angle loop this reduces exactly to
    :func:`compute_coefficients`).  Inner integrals couple both time
    arguments, so the cost is O(N^2); the kernel is precomputed on the grid.
    """
    prov = {"path": path.label, "bath": bath, "variant": "general-path", "field": field}
    if bath.coupling == 0:
        return _zero_set(grid, prov)
    grid.require_resolution(field, bath.cutoff)
    ts = grid.ts
    kappa = correlation_kernel(bath, grid) if kernel is None else kernel
    re_k = kappa.real
    re_kt = np.cos(field * ts) * re_k + np.sin(field * ts) * kappa.imag

    alpha = mixing_angle_profile(path, field, ts)
    sa, ca = np.sin(alpha), np.cos(alpha)
    cos_b, sin_b = np.cos(field * ts), np.sin(field * ts)

    nsamp = grid.samples
    table = _row_weight_table(nsamp, grid.dt)
    g_n = np.empty(nsamp)
    g_l = np.empty(nsamp)
    g_k = np.empty(nsamp)
    g_m = np.empty(nsamp)
    for i in range(nsamp):
        w = table[i, : i + 1]
        sa_lag = sa[i::-1]          # sin a(t1 - s) on the s grid
        ca_lag = ca[i::-1]
        ss = sa[i] * sa_lag
        cc = ca[i] * ca_lag
        g_n[i] = w @ (4.0 * ss * cos_b[: i + 1] * re_k[: i + 1])
        g_l[i] = w @ ((4.0 * cc + 2.0 * ss * cos_b[: i + 1]) * re_k[: i + 1])
        g_k[i] = w @ (2.0 * ss * sin_b[: i + 1] * re_k[: i + 1])
        g_m[i] = w @ (2.0 * ss * re_kt[: i + 1])

    n = _cumulative(g_n, grid.dt)
    l = _cumulative(g_l, grid.dt)
    k = _cumulative(g_k, grid.dt)
    m = _cumulative(g_m * np.exp(n), grid.dt)
    return CoefficientSet(grid, n, m, l, k, prov)
