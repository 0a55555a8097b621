"""Frame transformations for a spin-1/2 in a uniformly rotating field.

The lab Hamiltonian B(t).sigma/2 with B(t) = B(sin(theta)cos(w0 t),
sin(theta)sin(w0 t), cos(theta)) becomes time independent after rotating
about z with the drive (U1) and tilting about y by the mixing angle alpha
(U2); the residual gap is E.  Density matrices are plain 2x2 complex numpy
arrays throughout.
"""

from dataclasses import dataclass

import numpy as np

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
IDENTITY = np.eye(2, dtype=complex)


class DegenerateFrameError(ValueError):
    """Raised when the rotating-frame gap vanishes (resonant degeneracy)."""


@dataclass(frozen=True)
class DriveParams:
    """Rotating field: magnitude, polar angle and signed rotation rate."""

    field: float       # B
    theta: float       # polar angle in [0, pi]
    omega0: float      # signed angular frequency of the rotation

    def __post_init__(self):
        if self.field <= 0:
            raise ValueError(f"field must be > 0, got {self.field}")
        if not 0.0 <= self.theta <= np.pi:
            raise ValueError(f"theta must lie in [0, pi], got {self.theta}")
        if self.omega0 == 0:
            raise ValueError("omega0 must be nonzero (period undefined)")

    @property
    def period(self) -> float:
        """Cycle duration 2*pi/|omega0|."""
        return 2.0 * np.pi / abs(self.omega0)

    @property
    def adiabatic_time(self) -> float:
        return 1.0 / abs(self.omega0)

    def reversed(self) -> "DriveParams":
        """Same loop traversed the other way (omega0 -> -omega0)."""
        return DriveParams(self.field, self.theta, -self.omega0)


@dataclass(frozen=True)
class FrameAngles:
    alpha: float   # tilt angle of the rotating-frame axis
    gap: float     # energy splitting E in the tilted frame
    zeta: float    # alpha - theta


def frame_angles(drive: DriveParams) -> FrameAngles:
    """Mixing angle alpha = atan2(B sin(theta), B cos(theta) - omega0), gap E.

    atan2 keeps alpha continuous through B cos(theta) = omega0 (alpha = pi/2),
    where the bare tangent formula is branch-ambiguous.
    """
    x = drive.field * np.cos(drive.theta) - drive.omega0
    y = drive.field * np.sin(drive.theta)
    gap = float(np.hypot(x, y))
    if gap == 0.0:
        raise DegenerateFrameError("zero gap: drive resonant with the field")
    return FrameAngles(alpha=float(np.arctan2(y, x)), gap=gap,
                       zeta=float(np.arctan2(y, x)) - drive.theta)


def rotation_z(angle: float) -> np.ndarray:
    """exp(i sigma_z angle / 2)."""
    return np.array([[np.exp(0.5j * angle), 0.0], [0.0, np.exp(-0.5j * angle)]])


def rotation_y(angle: float) -> np.ndarray:
    """exp(i sigma_y angle / 2) (real rotation matrix)."""
    c, s = np.cos(0.5 * angle), np.sin(0.5 * angle)
    return np.array([[c, s], [-s, c]], dtype=complex)


def eigenstate_pair(theta: float, phi: float):
    """Eigenstates of (B-hat . sigma)/2 for the direction (theta, phi), with
    the fixed phase convention

        |e> = (cos(theta/2), sin(theta/2) e^{i phi}),
        |g> = (sin(theta/2) e^{-i phi}, -cos(theta/2)).

    Returns (g, e).
    """
    c, s = np.cos(0.5 * theta), np.sin(0.5 * theta)
    e = np.array([c, s * np.exp(1j * phi)])
    g = np.array([s * np.exp(-1j * phi), -c])
    return g, e


def instantaneous_eigenstates(drive: DriveParams, t: float, phi: float = None):
    """Eigenstates (g, e) of H_s(t) for the rotating drive; phi = omega0*t
    unless given explicitly."""
    if phi is None:
        phi = drive.omega0 * t
    return eigenstate_pair(drive.theta, phi)


def initial_state(drive: DriveParams) -> np.ndarray:
    """Equal superposition (|e(0)> + |g(0)>)/sqrt(2) as a lab-frame projector."""
    g, e = instantaneous_eigenstates(drive, 0.0)
    psi = (e + g) / np.sqrt(2.0)
    return np.outer(psi, psi.conj())


def to_tilted_frame(rho_lab: np.ndarray, drive: DriveParams, t: float) -> np.ndarray:
    """Map a lab-frame state into the rotated interaction frame at time t."""
    a = frame_angles(drive)
    w = rotation_z(a.gap * t) @ rotation_y(a.alpha) @ rotation_z(drive.omega0 * t)
    return w @ rho_lab @ w.conj().T


def to_original_frame(rho_tilde: np.ndarray, drive: DriveParams, t: float) -> np.ndarray:
    """Inverse of :func:`to_tilted_frame`: interaction-frame state back to lab."""
    a = frame_angles(drive)
    w = rotation_z(a.gap * t) @ rotation_y(a.alpha) @ rotation_z(drive.omega0 * t)
    return w.conj().T @ rho_tilde @ w


def validate_density_matrix(rho: np.ndarray, atol: float = 1e-9) -> None:
    """Check Hermiticity, unit trace and eigenvalues >= -atol."""
    if rho.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {rho.shape}")
    if not np.allclose(rho, rho.conj().T, atol=atol):
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > atol or abs(np.trace(rho).imag) > atol:
        raise ValueError(f"trace is {np.trace(rho)}, expected 1")
    ev = np.linalg.eigvalsh(rho)
    if ev.min() < -atol:
        raise ValueError(f"negative eigenvalue {ev.min():.3e}")


def purity(rho: np.ndarray) -> float:
    return float(np.trace(rho @ rho).real)
