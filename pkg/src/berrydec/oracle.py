"""Brute-force validators, independent of the coefficient machinery.

Two instruments: a non-secular TCL2 integro-differential solver that keeps
every oscillating term of the double-commutator master equation, and an
exact unitary propagator for the spin coupled to a handful of discrete
boson modes.  Both exist purely to cross-check the secular solution.
"""

from dataclasses import dataclass
from itertools import product

import numpy as np
from scipy.integrate import cumulative_simpson
from scipy.optimize import brentq

from .bath import BathSpec, correlation
from .coefficients import ResolutionError, TimeGrid
from .frames import SIGMA_X, SIGMA_Z, DriveParams, frame_angles

SIGMA_PLUS = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
SIGMA_MINUS = SIGMA_PLUS.T.copy()


def tcl2_nonsecular(drive: DriveParams, bath: BathSpec, rho0_tilde: np.ndarray,
                    grid: TimeGrid, trace_tol: float = 1e-8) -> np.ndarray:
    """Full TCL2 trajectory in the tilted interaction frame, no secular step.

        d rho/dt = -[sigma(t), C(t) rho - rho C(t)^dag],
        C(t) = int_0^t kappa(s) sigma(t-s) ds,

    with sigma(t) the interaction-picture coupling
    cos(a) sigma_z - sin(a)(sigma_+ e^{iEt} + sigma_- e^{-iEt}).  The memory
    integrals reduce to three scalar cumulatives K0, K+, K- built once on a
    half-step grid, so RK4 stepping costs O(N).  Returns the trajectory
    sampled on the grid, shape (samples, 2, 2).
    """
    grid.require_resolution(drive.field, bath.cutoff)
    a = frame_angles(drive)
    ca, sa = np.cos(a.alpha), np.sin(a.alpha)
    e = a.gap

    half = grid.refined(2)
    th = half.ts
    kappa = np.asarray(correlation(bath, th), dtype=complex)

    def cum(y):  # cumulative_simpson casts complex to real; split explicitly
        return (cumulative_simpson(y.real, dx=half.dt, initial=0.0)
                + 1j * cumulative_simpson(y.imag, dx=half.dt, initial=0.0))

    k0 = cum(kappa)
    kp = cum(kappa * np.exp(1j * e * th))
    km = cum(kappa * np.exp(-1j * e * th))

    def sigma_of(t):
        ph = np.exp(1j * e * t)
        return ca * SIGMA_Z - sa * (SIGMA_PLUS * ph + SIGMA_MINUS / ph)

    def rhs(j, rho):
        # j indexes the half-step grid
        t = th[j]
        ph = np.exp(1j * e * t)
        c = ca * SIGMA_Z * k0[j] - sa * (SIGMA_PLUS * ph * km[j] + SIGMA_MINUS / ph * kp[j])
        x = c @ rho - rho @ c.conj().T
        s = sigma_of(t)
        return -(s @ x - x @ s)

    out = np.empty((grid.samples, 2, 2), dtype=complex)
    rho = np.array(rho0_tilde, dtype=complex)
    out[0] = rho
    dt = grid.dt
    for i in range(grid.samples - 1):
        j = 2 * i
        k1 = rhs(j, rho)
        k2 = rhs(j + 1, rho + 0.5 * dt * k1)
        k3 = rhs(j + 1, rho + 0.5 * dt * k2)
        k4 = rhs(j + 2, rho + dt * k3)
        rho = rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        tr_err = abs(np.trace(rho).real - 1.0) + abs(np.trace(rho).imag)
        if tr_err > trace_tol * max(grid.ts[i + 1], 1.0):
            raise ResolutionError(
                f"trace drift {tr_err:.2e} at t={grid.ts[i + 1]:g}: step too large")
        out[i + 1] = rho
    return out


def trace_distance(rho: np.ndarray, sigma: np.ndarray) -> float:
    """(1/2)||rho - sigma||_1 for 2x2 Hermitian arguments."""
    ev = np.linalg.eigvalsh(rho - sigma)
    return 0.5 * float(np.sum(np.abs(ev)))


@dataclass(frozen=True)
class FewModeBath:
    """Discrete stand-in for the continuum: M modes with couplings g_k."""

    frequencies: tuple
    couplings: tuple
    n_max: int
    temperature: float = 0.0

    def __post_init__(self):
        if len(self.frequencies) != len(self.couplings):
            raise ValueError("frequencies and couplings must have equal length")
        if any(w <= 0 for w in self.frequencies):
            raise ValueError("mode frequencies must be positive")
        if self.n_max < 1:
            raise ValueError("n_max must be >= 1")
        if self.dimension > 4096:
            raise ValueError(f"Hilbert dimension {self.dimension} exceeds the 4096 bound")

    @property
    def modes(self) -> int:
        return len(self.frequencies)

    @property
    def dimension(self) -> int:
        return 2 * (self.n_max + 1) ** self.modes

    @property
    def total_weight(self) -> float:
        """Sum g_k^2, approximating int J(w) dw."""
        return float(sum(g * g for g in self.couplings))


def discretize_ohmic(bath: BathSpec, modes: int, n_max: int = 2,
                     w_max_factor: float = 5.0) -> FewModeBath:
    """Equal-weight discretization of the Ohmic spectrum over [0, 5*cutoff]:
    bin edges split int J dw evenly, g_k^2 is the bin weight, and w_k the
    bin centroid of J."""
    lam, cut = bath.coupling, bath.cutoff
    w_max = w_max_factor * cut

    def cdf(w):  # int_0^w J = (lam/2) cut^2 [1 - e^{-x}(1+x)], x = w/cut
        x = w / cut
        return 0.5 * lam * cut**2 * (1.0 - np.exp(-x) * (1.0 + x))

    def first_moment(w):  # int_0^w w' J dw' closed form
        x = w / cut
        return 0.5 * lam * cut**3 * (2.0 - np.exp(-x) * (x * x + 2.0 * x + 2.0))

    total = cdf(w_max)
    edges = [0.0]
    for j in range(1, modes):
        target = total * j / modes
        edges.append(brentq(lambda w: cdf(w) - target, edges[-1] + 1e-12, w_max))
    edges.append(w_max)
    freqs, gs = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        weight = cdf(hi) - cdf(lo)
        freqs.append((first_moment(hi) - first_moment(lo)) / weight)
        gs.append(np.sqrt(weight))
    return FewModeBath(tuple(freqs), tuple(gs), n_max, bath.temperature)


def _mode_operators(fm: FewModeBath):
    """Annihilation operators on the truncated product space (bath part only)."""
    d = fm.n_max + 1
    a_single = np.diag(np.sqrt(np.arange(1, d)), k=1)
    eye = np.eye(d)
    ops = []
    for k in range(fm.modes):
        factors = [a_single if j == k else eye for j in range(fm.modes)]
        op = factors[0]
        for f in factors[1:]:
            op = np.kron(op, f)
        ops.append(op)
    return ops


def rotating_hamiltonian(drive: DriveParams, fm: FewModeBath) -> np.ndarray:
    """Time-independent total Hamiltonian in the frame co-rotating with the
    drive: static spin part + sigma_z force coupling + free modes."""
    a = frame_angles(drive)
    h_spin = 0.5 * (drive.field * np.sin(drive.theta) * SIGMA_X
                    + (drive.field * np.cos(drive.theta) - drive.omega0) * SIGMA_Z)
    assert abs(np.linalg.eigvalsh(h_spin)[1] - 0.5 * a.gap) < 1e-9 * a.gap

    ops = _mode_operators(fm)
    dim_b = (fm.n_max + 1) ** fm.modes
    h_bath = np.zeros((dim_b, dim_b))
    force = np.zeros((dim_b, dim_b))
    for w, g, op in zip(fm.frequencies, fm.couplings, ops):
        h_bath += w * (op.conj().T @ op)
        force += g * (op + op.conj().T)
    return (np.kron(h_spin, np.eye(dim_b))
            + np.kron(SIGMA_Z, force)
            + np.kron(np.eye(2), h_bath))


def thermal_bath_state(fm: FewModeBath) -> np.ndarray:
    """Product thermal state of the truncated modes (vacuum projector at T=0)."""
    d = fm.n_max + 1
    dim_b = d ** fm.modes
    if fm.temperature == 0:
        rho = np.zeros((dim_b, dim_b))
        rho[0, 0] = 1.0
        return rho
    diag = np.ones(1)
    for w in fm.frequencies:
        p = np.exp(-w * np.arange(d) / fm.temperature)
        diag = np.kron(diag, p / p.sum())
    return np.diag(diag)


def few_mode_exact(drive: DriveParams, fm: FewModeBath, rho_spin: np.ndarray,
                   times) -> np.ndarray:
    """Exact reduced spin dynamics: diagonalize the rotating-frame Hamiltonian
    once, evolve spin (x) thermal bath, partial-trace, and undo the frame
    rotation.  Returns lab-frame states, shape (len(times), 2, 2)."""
    times = np.atleast_1d(np.asarray(times, dtype=float))
    h = rotating_hamiltonian(drive, fm)
    evals, vecs = np.linalg.eigh(h)
    rho0 = np.kron(np.asarray(rho_spin, dtype=complex), thermal_bath_state(fm))
    rho0_e = vecs.conj().T @ rho0 @ vecs  # eigenbasis

    dim_b = (fm.n_max + 1) ** fm.modes
    out = np.empty((times.size, 2, 2), dtype=complex)
    for i, t in enumerate(times):
        ph = np.exp(-1j * evals * t)
        rho_t = vecs @ (ph[:, None] * rho0_e * ph.conj()[None, :]) @ vecs.conj().T
        red = rho_t.reshape(2, dim_b, 2, dim_b)
        rho_rot = np.trace(red, axis1=1, axis2=3)
        u1 = np.diag([np.exp(0.5j * drive.omega0 * t), np.exp(-0.5j * drive.omega0 * t)])
        out[i] = u1.conj().T @ rho_rot @ u1
    return out
