"""Ohmic bath: spectral density, Bose occupation and the force autocorrelation.

Units: hbar = k_B = 1, so coupling strength, cutoff, temperature and all
drive frequencies share a single frequency unit.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np


class QuadratureError(RuntimeError):
    """Quadrature failed to converge; carries the error estimate."""

    def __init__(self, message: str, estimate: float):
        super().__init__(message)
        self.estimate = estimate


@dataclass(frozen=True)
class BathSpec:
    """Ohmic environment J(w) = (coupling/2) w exp(-w/cutoff) at a temperature.

    ``coupling`` is the dimensionless strength (lambda), ``cutoff`` the angular
    cutoff frequency (Omega).  The integrated spectrum is coupling*cutoff^2/2.
    """

    coupling: float
    cutoff: float
    temperature: float = 0.0

    def __post_init__(self):
        if self.coupling < 0:
            raise ValueError(f"coupling must be >= 0, got {self.coupling}")
        if self.cutoff <= 0:
            raise ValueError(f"cutoff must be > 0, got {self.cutoff}")
        if self.temperature < 0:
            raise ValueError(f"temperature must be >= 0, got {self.temperature}")

    @classmethod
    def from_power(cls, power: float, cutoff: float, temperature: float = 0.0) -> "BathSpec":
        """Build from the integrated spectrum power = coupling*cutoff^2/2."""
        return cls(coupling=2.0 * power / cutoff**2, cutoff=cutoff, temperature=temperature)

    @property
    def power(self) -> float:
        """Integrated spectrum, int_0^inf J(w) dw = coupling*cutoff^2/2."""
        return 0.5 * self.coupling * self.cutoff**2

    @property
    def correlation_time(self) -> float:
        """Memory time scale of the noise, 1/cutoff."""
        return 1.0 / self.cutoff


def spectral_density(spec: BathSpec, omega):
    """Ohmic spectrum J(w) = (coupling/2) w exp(-w/cutoff); w >= 0."""
    omega = np.asarray(omega, dtype=float)
    if np.any(omega < 0):
        raise ValueError("spectral_density requires omega >= 0")
    out = 0.5 * spec.coupling * omega * np.exp(-omega / spec.cutoff)
    return out if out.ndim else float(out)


def bose_occupation(spec: BathSpec, omega):
    """Mean occupation N(w) = 1/(exp(w/T) - 1); exactly 0 at T = 0.

    Requires omega > 0: the w -> 0 divergence must be handled analytically
    inside integrands (N*J is finite for an Ohmic spectrum), not here.
    """
    omega = np.asarray(omega, dtype=float)
    if np.any(omega <= 0):
        raise ValueError("bose_occupation requires omega > 0")
    if spec.temperature == 0:
        out = np.zeros_like(omega)
    else:
        out = 1.0 / np.expm1(omega / spec.temperature)
    return out if out.ndim else float(out)


def _simpson_weights(n: int, dx: float) -> np.ndarray:
    """Composite Simpson weights for n nodes (n odd) with spacing dx."""
    if n < 3 or n % 2 == 0:
        raise ValueError("need an odd number of nodes >= 3")
    w = np.ones(n)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w * (dx / 3.0)


def _nested_node_count(n_min: int) -> int:
    """Smallest node count >= n_min with n % 4 == 1, so every other node is
    again a valid Simpson grid (used for the embedded error estimate)."""
    n = max(int(n_min), 5)
    return n + (1 - n) % 4


def _thermal_integrand(spec: BathSpec, omega: np.ndarray) -> np.ndarray:
    """2 J(w) N(w), with the w->0 limit coupling*T evaluated analytically."""
    out = np.empty_like(omega)
    small = omega < 1e-12 * spec.temperature
    x = omega[~small]
    out[~small] = spec.coupling * x * np.exp(-x / spec.cutoff) / np.expm1(x / spec.temperature)
    out[small] = spec.coupling * spec.temperature
    return out


@lru_cache(maxsize=64)
def _thermal_nodes(spec: BathSpec, s_scale: float):
    """Simpson nodes and weighted integrand samples, cached per (bath, span)."""
    # effective decay rate of J(w)N(w) is 1/cutoff + 1/T for large w
    w_max = 40.0 / (1.0 / spec.cutoff + 1.0 / spec.temperature)
    n = _nested_node_count(max(4001, 20 * w_max * s_scale / (2 * np.pi)))
    omega = np.linspace(0.0, w_max, n)
    dx = omega[1] - omega[0]
    f = _thermal_integrand(spec, omega)
    fine = _simpson_weights(n, dx) * f
    coarse = _simpson_weights((n + 1) // 2, 2 * dx) * f[::2]
    return omega, fine, coarse


def _thermal_correlation(spec: BathSpec, s: np.ndarray, rel_tol: float = 1e-6) -> np.ndarray:
    """int_0^inf 2 J(w) N(w) cos(w s) dw by deterministic Simpson quadrature."""
    s = np.atleast_1d(np.asarray(s, dtype=float))
    s_scale = float(2.0 ** np.ceil(np.log2(max(np.max(np.abs(s)), spec.correlation_time))))
    omega, fine, coarse = _thermal_nodes(spec, s_scale)
    scale = spec.power + spec.coupling * spec.temperature  # ~ size of kappa(0)
    out = np.empty(s.shape)
    for i0 in range(0, s.size, 256):
        chunk = s[i0:i0 + 256, None]
        cos_tab = np.cos(omega[None, :] * chunk)
        full = cos_tab @ fine
        est = np.max(np.abs(full - cos_tab[:, ::2] @ coarse))
        if est > rel_tol * scale:
            raise QuadratureError(
                f"thermal correlation quadrature error estimate {est:.3e} "
                f"exceeds {rel_tol:.1e} * {scale:.3e}", est)
        out[i0:i0 + 256] = full
    return out


def correlation(spec: BathSpec, s):
    """Force autocorrelation kappa(s) = int J(w)[2N(w)cos(ws) + exp(-iws)] dw.

    The vacuum part has the closed form (coupling/2)*cutoff^2/(1+i*cutoff*s)^2
    for the Ohmic spectrum and is always evaluated that way; the temperature
    part (a real, even cosine transform) is added by quadrature when T > 0.
    Satisfies kappa(-s) = conj(kappa(s)).
    """
    s_arr = np.asarray(s, dtype=float)
    vac = 0.5 * spec.coupling * spec.cutoff**2 / (1.0 + 1j * spec.cutoff * s_arr) ** 2
    if spec.temperature > 0 and spec.coupling > 0:
        vac = vac + _thermal_correlation(spec, s_arr).reshape(s_arr.shape)
    return vac if vac.ndim else complex(vac)


def correlation_quadrature(spec: BathSpec, s, rel_tol: float = 1e-6):
    """kappa(s) by direct quadrature of the full defining integral.

    Independent cross-check of :func:`correlation`; validates the closed-form
    vacuum part.  Deterministic composite Simpson on
    [0, cutoff * max(40, 10 ln(1/eps))] with eps = 1e-8.
    """
    s_arr = np.atleast_1d(np.asarray(s, dtype=float))
    w_max = spec.cutoff * max(40.0, 10.0 * np.log(1e8))
    s_scale = max(np.max(np.abs(s_arr)), spec.correlation_time)
    # kappa(s) decays like 1/s^2 while the integrand does not, so pointwise
    # relative accuracy at large s needs a dense oscillation sampling
    n = _nested_node_count(max(8001, 120 * w_max * s_scale / (2 * np.pi)))
    omega = np.linspace(0.0, w_max, n)
    dx = omega[1] - omega[0]
    f = spectral_density(spec, omega)
    if spec.temperature > 0:
        f_therm = _thermal_integrand(spec, omega)
    else:
        f_therm = np.zeros_like(f)
    w_fine = _simpson_weights(n, dx)
    w_coarse = _simpson_weights((n + 1) // 2, 2 * dx)
    out = np.empty(s_arr.shape, dtype=complex)
    for i, si in enumerate(s_arr):
        phase = np.exp(-1j * omega * si)
        cos_t = np.cos(omega * si)
        full = (w_fine * f) @ phase + (w_fine * f_therm) @ cos_t
        half = (w_coarse * f[::2]) @ phase[::2] + (w_coarse * f_therm[::2]) @ cos_t[::2]
        est = abs(full - half)
        if est > rel_tol * max(spec.power, 1e-300):
            raise QuadratureError(
                f"correlation quadrature error estimate {est:.3e} at s={si:g}", est)
        out[i] = full
    return out if np.asarray(s).ndim else complex(out[0])
