"""Decoherence of the spin-1/2 Berry phase in a rotating magnetic field.

Secular TCL2 dynamics for a two-level system coupled to an Ohmic bosonic
bath while its field sweeps a closed loop, plus the two-cycle echo that
isolates the geometric phase, and brute-force oracles for validation.
"""

__version__ = "0.1.0"

from .bath import BathSpec, QuadratureError, bose_occupation, correlation, spectral_density
from .coefficients import (CoefficientSet, ResolutionError, TimeGrid,
                           compute_coefficients, compute_coefficients_multinoise,
                           compute_coefficients_path)
from .evolution import (CycleResult, EchoResult, PhaseCorrection, PositivityWarning,
                        adiabatic_echo_state, fidelity, fidelity_single_cycle,
                        fidelity_two_cycle_adiabatic, fidelity_two_cycle_closed_form,
                        fidelity_two_cycle_printed, isolated_adiabatic, isolated_exact,
                        markovian_dephasing_limit, phase_correction, propagate_reduced,
                        run_echo, run_echo_path)
from .frames import (DegenerateFrameError, DriveParams, FrameAngles, eigenstate_pair,
                     frame_angles, initial_state, instantaneous_eigenstates, purity,
                     to_original_frame, to_tilted_frame, validate_density_matrix)
from .oracle import (FewModeBath, discretize_ohmic, few_mode_exact, rotating_hamiltonian,
                     tcl2_nonsecular, trace_distance)
from .paths import (InvalidPathError, PathSpec, PoleCrossingError, TiltedCircle,
                    berry_phase, reversed_path, tilted_circle_path, uniform_circle)

__all__ = [name for name in dir() if not name.startswith("_")]
