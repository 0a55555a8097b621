"""Adiabatic field loops on the sphere and their geometric phase.

A path is the pair of angle functions (theta(t), phi(t)) over one period,
with phi unwrapped by continuity.  Built-in constructors cover the uniform
circle and the tilted circle obtained by rotating a constant-latitude cone
about the x axis.
"""

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import simpson


class InvalidPathError(ValueError):
    """The loop is not closed (or otherwise unusable)."""


class PoleCrossingError(ValueError):
    """The loop passes through a pole, where phi is undefined."""


@dataclass
class PathSpec:
    """Closed field loop: callables theta(t), phi(t) on [0, period].

    ``phi`` must be continuous (unwrapped); ``phi_dot`` is its derivative.
    Both accept numpy arrays.
    """

    theta: Callable
    phi: Callable
    phi_dot: Callable
    period: float
    label: str = "custom"

    def __post_init__(self):
        if self.period <= 0:
            raise InvalidPathError(f"period must be > 0, got {self.period}")

    def check_closed(self, atol: float = 1e-9) -> None:
        t0, t1 = 0.0, self.period
        if abs(float(self.theta(t0)) - float(self.theta(t1))) > atol:
            raise InvalidPathError("theta(0) != theta(period): open path")
        dphi = float(self.phi(t1)) - float(self.phi(t0))
        if abs(dphi - 2.0 * np.pi * round(dphi / (2.0 * np.pi))) > atol:
            raise InvalidPathError("phi winding is not a multiple of 2*pi: open path")


@dataclass(frozen=True)
class TiltedCircle:
    """Constant cone angle theta' about an axis tilted from z by gamma in the
    yz plane, traversed at angular speed omega0 (phi' = omega0*t)."""

    theta_prime: float
    gamma: float
    omega0: float

    def __post_init__(self):
        if not 0.0 < self.theta_prime < np.pi:
            raise ValueError("theta_prime must lie in (0, pi)")
        if not 0.0 <= self.gamma <= np.pi:
            raise ValueError("gamma must lie in [0, pi]")
        if self.omega0 == 0:
            raise ValueError("omega0 must be nonzero")


def uniform_circle(theta: float, omega0: float) -> PathSpec:
    """Constant-latitude circle phi = omega0*t."""
    return PathSpec(
        theta=lambda t: np.broadcast_to(theta, np.shape(t)).astype(float) if np.ndim(t) else float(theta),
        phi=lambda t: omega0 * np.asarray(t, dtype=float) if np.ndim(t) else omega0 * t,
        phi_dot=lambda t: np.broadcast_to(omega0, np.shape(t)).astype(float) if np.ndim(t) else float(omega0),
        period=2.0 * np.pi / abs(omega0),
        label=f"circle(theta={theta:g}, omega0={omega0:g})",
    )


def _tilted_xyz(tc: TiltedCircle, t):
    """Cartesian components of the tilted-circle field direction."""
    wt = tc.omega0 * np.asarray(t, dtype=float)
    sp, cp = np.sin(tc.theta_prime), np.cos(tc.theta_prime)
    sg, cg = np.sin(tc.gamma), np.cos(tc.gamma)
    x = sp * np.cos(wt)
    y = cg * sp * np.sin(wt) + sg * cp
    z = -sg * sp * np.sin(wt) + cg * cp
    return x, y, z


def tilted_circle_path(tc: TiltedCircle) -> PathSpec:
    """PathSpec for the rotated cone; raises PoleCrossingError when the loop
    touches a pole (|cos(theta)| = 1 at some t, i.e. gamma = theta' or
    gamma + theta' = pi)."""
    tol = 1e-12
    if np.cos(tc.gamma - tc.theta_prime) >= 1.0 - tol or np.cos(tc.gamma + tc.theta_prime) <= -1.0 + tol:
        raise PoleCrossingError(
            f"loop with theta'={tc.theta_prime:g}, gamma={tc.gamma:g} passes through a pole")

    period = 2.0 * np.pi / abs(tc.omega0)

    def theta(t):
        _, _, z = _tilted_xyz(tc, t)
        out = np.arccos(np.clip(z, -1.0, 1.0))
        return out if np.ndim(t) else float(out)

    # dense reference for branch selection of the unwrapped phi
    t_ref = np.linspace(0.0, period, 8193)
    x_r, y_r, _ = _tilted_xyz(tc, t_ref)
    phi_ref = np.unwrap(np.arctan2(y_r, x_r))

    def phi(t):
        x, y, _ = _tilted_xyz(tc, t)
        raw = np.arctan2(y, x)
        guess = np.interp(np.asarray(t, dtype=float), t_ref, phi_ref)
        out = raw + 2.0 * np.pi * np.round((guess - raw) / (2.0 * np.pi))
        return out if np.ndim(t) else float(out)

    def phi_dot(t):
        # d/dt atan2(y, x) = (x y' - y x')/(x^2 + y^2), all analytic
        wt = tc.omega0 * np.asarray(t, dtype=float)
        sp, cp = np.sin(tc.theta_prime), np.cos(tc.theta_prime)
        sg, cg = np.sin(tc.gamma), np.cos(tc.gamma)
        x = sp * np.cos(wt)
        y = cg * sp * np.sin(wt) + sg * cp
        xd = -tc.omega0 * sp * np.sin(wt)
        yd = tc.omega0 * cg * sp * np.cos(wt)
        out = (x * yd - y * xd) / (x * x + y * y)
        return out if np.ndim(t) else float(out)

    return PathSpec(theta=theta, phi=phi, phi_dot=phi_dot, period=period,
                    label=f"tilted(theta'={tc.theta_prime:g}, gamma={tc.gamma:g})")


def berry_phase(path: PathSpec, samples: int = 4096, rel_tol: float = 1e-7) -> float:
    """Geometric phase of the lower eigenstate: (1/2) oint (1 - cos theta) dphi.

    Composite Simpson over the unwrapped loop; a halved-resolution estimate
    guards the sampling density.  No modular reduction is applied.
    """
    path.check_closed()
    n = max(int(samples), 64)
    n += n % 2  # even interval count
    ts = np.linspace(0.0, path.period, n + 1)
    integrand = 0.5 * (1.0 - np.cos(path.theta(ts))) * path.phi_dot(ts)
    full = simpson(integrand, dx=ts[1] - ts[0])
    half = simpson(integrand[::2], dx=2.0 * (ts[1] - ts[0]))
    if abs(full - half) > rel_tol * max(1.0, abs(full)):
        raise InvalidPathError(
            f"line integral not converged at {n} samples (delta={abs(full - half):.2e})")
    return float(full)


def reversed_path(path: PathSpec) -> PathSpec:
    """Time-reversed loop theta(T0 - t), phi(T0 - t); flips the Berry phase."""
    t0 = path.period
    return PathSpec(
        theta=lambda t: path.theta(t0 - np.asarray(t)) if np.ndim(t) else path.theta(t0 - t),
        phi=lambda t: path.phi(t0 - np.asarray(t)) if np.ndim(t) else path.phi(t0 - t),
        phi_dot=lambda t: -path.phi_dot(t0 - np.asarray(t)) if np.ndim(t) else -path.phi_dot(t0 - t),
        period=t0,
        label=f"reversed[{path.label}]",
    )
