"""Fidelity loss over a single drive cycle.

A spin-1/2 rides a magnetic field of magnitude B = 100 sweeping a cone of
polar angle theta at rate omega0 = 2, while an Ohmic bath with cutoff Omega
kicks the field magnitude.  The closed-form F(t) shows the two regimes
discussed in the library docs: a slow bath (Omega = 2, comparable to the
drive) decoheres the superposition much faster than a quasi-Markovian one
(Omega = 20) of equal integrated power.

Run:  python3 demos/single_cycle_fidelity.py
Writes single_cycle_fidelity.png next to this script.
"""

import pathlib

import matplotlib
import numpy as np

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from berrydec import (BathSpec, DriveParams, TimeGrid, compute_coefficients,
                      fidelity_single_cycle)

HERE = pathlib.Path(__file__).resolve().parent

B = 100.0
OMEGA0 = 2.0
POWER = 2.0  # lambda * Omega^2 / 2, held fixed across cutoffs


def curve(theta: float, cutoff: float, n_times: int = 301):
    drive = DriveParams(B, theta, OMEGA0)
    bath = BathSpec.from_power(POWER, cutoff)
    grid = TimeGrid.for_params(B, cutoff, drive.period)
    coeffs = compute_coefficients(drive, bath, grid)
    ts = np.linspace(0.0, drive.period, n_times)
    return ts, np.array([fidelity_single_cycle(drive, coeffs, t) for t in ts])


def main():
    fig, axes = plt.subplots(1, 2, figsize=(9, 3.6), sharey=True)
    for ax, cutoff in zip(axes, (2.0, 20.0)):
        for theta, label in ((np.pi / 6, "pi/6"), (np.pi / 4, "pi/4"),
                             (np.pi / 3, "pi/3")):
            ts, f = curve(theta, cutoff)
            ax.plot(ts / ts[-1], f, label=f"theta = {label}")
        ax.set_title(f"cutoff = {cutoff:g}")
        ax.set_xlabel("t / T0")
        ax.grid(alpha=0.3)
    axes[0].set_ylabel("F(t)")
    axes[0].legend()
    fig.tight_layout()
    out = HERE / "single_cycle_fidelity.png"
    fig.savefig(out, dpi=150)

    print(f"wrote {out}")
    print("\nend-of-cycle fidelities (power = 2):")
    print(f"{'theta':>8} {'F(T0), cutoff=2':>16} {'F(T0), cutoff=20':>17}")
    for theta, label in ((np.pi / 6, "pi/6"), (np.pi / 4, "pi/4"),
                         (np.pi / 3, "pi/3")):
        f_slow = curve(theta, 2.0)[1][-1]
        f_fast = curve(theta, 20.0)[1][-1]
        print(f"{label:>8} {f_slow:16.6f} {f_fast:17.6f}")


if __name__ == "__main__":
    main()
