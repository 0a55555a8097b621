"""Experiment runner: figure reproductions, sweeps and single-shot echoes.

Every experiment writes a CSV with `#`-prefixed provenance lines (tool
version + full config echo) followed by a header row; numbers use 12
significant digits so reruns are byte-identical.  Exit codes: 0 ok,
2 config error, 3 numerical-accuracy failure.
"""

import argparse
import dataclasses
import json
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import __version__
from .bath import BathSpec, QuadratureError
from .coefficients import ResolutionError, TimeGrid, compute_coefficients
from .evolution import (PositivityWarning, fidelity_single_cycle, run_echo,
                        run_echo_path)
from .frames import DriveParams
from .paths import InvalidPathError, PoleCrossingError, TiltedCircle, tilted_circle_path

EXPERIMENTS = ("fig1", "fig2", "fig3", "fig4", "fig6", "sweep", "single")

CONFIG_ERROR, NUMERICAL_ERROR = 2, 3


class ConfigError(ValueError):
    """Invalid experiment configuration."""


@dataclass
class ExperimentConfig:
    """Flat experiment description; defaults match the built-in figure runs."""

    experiment: str
    B: float = 100.0
    theta: float = np.pi / 4
    omega0: float = 2.0
    cutoff: float = 2.0
    lambda_norm: float = 2.0       # integrated spectrum lambda*cutoff^2/2
    coupling: float = None         # raw lambda, overrides lambda_norm when set
    temperature: float = 0.0
    theta_prime: float = np.pi / 4
    gamma_list: tuple = (0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5)
    t0_list: tuple = tuple(np.linspace(2.0, 12.0, 11))
    theta_list: tuple = ()
    sweep_param: str = "theta"
    sweep_values: tuple = ()
    multinoise: bool = False
    path_echo: bool = False        # single: use the tilted-circle path echo
    workers: int = 1
    out: str = None

    def bath(self, cutoff: float = None, temperature: float = None) -> BathSpec:
        cut = self.cutoff if cutoff is None else cutoff
        temp = self.temperature if temperature is None else temperature
        if self.coupling is not None:
            return BathSpec(self.coupling, cut, temp)
        return BathSpec.from_power(self.lambda_norm, cut, temp)

    def drive(self, theta: float = None, omega0: float = None) -> DriveParams:
        return DriveParams(self.B,
                           self.theta if theta is None else theta,
                           self.omega0 if omega0 is None else omega0)

    def as_dict(self) -> dict:
        d = dataclasses.asdict(self)
        for key, val in d.items():
            if isinstance(val, (tuple, list)):
                d[key] = [float(x) for x in val]
            elif isinstance(val, (np.floating, np.integer)):
                d[key] = float(val)
        return d


_FIELDS = {f.name: f for f in dataclasses.fields(ExperimentConfig)}
_LIST_KEYS = {"gamma_list", "t0_list", "theta_list", "sweep_values"}


def build_config(experiment: str, file_values: dict, flag_values: dict) -> ExperimentConfig:
    """Merge config-file values and command-line flags (flags win)."""
    merged = {}
    for source in (file_values, flag_values):
        for key, val in source.items():
            if key == "experiment":
                continue
            if key not in _FIELDS:
                raise ConfigError(f"unknown config key {key!r}")
            if key in _LIST_KEYS:
                val = tuple(float(x) for x in val)
            merged[key] = val
    if experiment not in EXPERIMENTS:
        raise ConfigError(f"unknown experiment {experiment!r}")
    try:
        cfg = ExperimentConfig(experiment=experiment, **merged)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
    _validate(cfg)
    return cfg


def _validate(cfg: ExperimentConfig) -> None:
    try:
        cfg.bath()
        cfg.drive()
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if cfg.experiment == "sweep" and not cfg.sweep_values:
        raise ConfigError("sweep requires a non-empty sweep_values list")
    if cfg.experiment == "fig6" and not cfg.gamma_list:
        raise ConfigError("fig6 requires a non-empty gamma_list")
    if cfg.workers < 1:
        raise ConfigError("workers must be >= 1")
    if cfg.sweep_param not in ("theta", "omega0", "cutoff", "temperature", "lambda_norm"):
        raise ConfigError(f"unsupported sweep parameter {cfg.sweep_param!r}")


def _fmt(x) -> str:
    return f"{x:.12g}"


def write_csv(path, header, rows, cfg: ExperimentConfig) -> None:
    echo = cfg.as_dict()
    echo.pop("out", None)      # run-location keys would break byte-identical
    echo.pop("workers", None)  # reruns without changing any physics
    lines = [f"# berrydec {__version__}",
             f"# config: {json.dumps(echo, sort_keys=True)}",
             ",".join(header)]
    lines += [",".join(_fmt(v) for v in row) for row in rows]
    text = "\n".join(lines) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _echo_grid(field_b: float, cutoff: float, t0: float) -> TimeGrid:
    return TimeGrid.for_params(field_b, cutoff, t0)


def _echo_for(cfg, theta=None, omega0=None, cutoff=None, temperature=None):
    drive = cfg.drive(theta=theta, omega0=omega0)
    bath = cfg.bath(cutoff=cutoff, temperature=temperature)
    grid = _echo_grid(drive.field, bath.cutoff, drive.period)
    variant = "multi-noise" if cfg.multinoise else "single-bath"
    return run_echo(drive, bath, grid, variant=variant)


def run_fig1(cfg: ExperimentConfig):
    """F(t) over one cycle for theta in {pi/6, pi/4, pi/3} and two cutoffs."""
    rows = []
    for cutoff in (2.0, 20.0):
        bath = cfg.bath(cutoff=cutoff)
        for theta in (np.pi / 6, np.pi / 4, np.pi / 3):
            drive = cfg.drive(theta=theta)
            grid = _echo_grid(drive.field, bath.cutoff, drive.period)
            coeffs = compute_coefficients(drive, bath, grid)
            for t in np.linspace(0.0, drive.period, 201):
                rows.append((t, theta, cutoff, fidelity_single_cycle(drive, coeffs, t)))
    return ["t", "theta", "cutoff", "F"], rows, {}


def _fig2_point(args):
    cfg_dict, t0, cutoff, temperature = args
    cfg = ExperimentConfig(**cfg_dict)
    omega0 = 2.0 * np.pi / t0
    res = _echo_for(cfg, omega0=omega0, cutoff=cutoff, temperature=temperature)
    iso = _isolated_echo_fidelity(cfg.drive(omega0=omega0))
    return (t0, cutoff, temperature, res.fidelity, iso)


def _isolated_echo_fidelity(drive: DriveParams) -> float:
    grid = TimeGrid(drive.period, 101)
    res = run_echo(drive, BathSpec(0.0, 1.0), grid)
    return res.fidelity


def run_fig2(cfg: ExperimentConfig):
    """F(2 T0) vs cycle duration for cutoffs {200, 20, 2} and T {0, 1, 5}."""
    points = [(cfg.as_dict(), t0, cutoff, temp)
              for cutoff in (200.0, 20.0, 2.0)
              for temp in (0.0, 1.0, 5.0)
              for t0 in cfg.t0_list]
    rows = _dispatch(_fig2_point, points, cfg.workers)
    return ["T0", "cutoff", "temperature", "F_2T0", "F_isolated"], sorted(rows), {}


def run_fig3(cfg: ExperimentConfig):
    """Coefficient growth with the cycle duration, per cutoff."""
    rows = []
    for cutoff in (2.0, 20.0, 200.0):
        bath = cfg.bath(cutoff=cutoff)
        for t0 in cfg.t0_list:
            omega0 = 2.0 * np.pi / t0
            drive = cfg.drive(omega0=omega0)
            grid = _echo_grid(drive.field, bath.cutoff, drive.period)
            c1 = compute_coefficients(drive, bath, grid)
            c2 = compute_coefficients(drive.reversed(), bath, grid)
            rows.append((t0, cutoff, c1.n[-1], c1.l[-1], c1.k[-1],
                         c1.k[-1] - c2.k[-1]))
    return ["T0", "cutoff", "n1", "l1", "k1", "k1_minus_k2"], rows, {}


def _fig4_point(args):
    cfg_dict, theta, cutoff, temperature = args
    cfg = ExperimentConfig(**cfg_dict)
    res = _echo_for(cfg, theta=theta, cutoff=cutoff, temperature=temperature)
    return (theta, cutoff, temperature, res.fidelity)


def run_fig4(cfg: ExperimentConfig):
    """F(2 T0) vs the drive angle for non-Markovian and Markovian spectra."""
    thetas = cfg.theta_list or tuple(np.linspace(0.1, np.pi / 2, 20))
    points = [(cfg.as_dict(), th, cutoff, temp)
              for cutoff in (2.0, 200.0)
              for temp in (0.0, 1.0)
              for th in thetas]
    rows = _dispatch(_fig4_point, points, cfg.workers)
    return ["theta", "cutoff", "temperature", "F_2T0"], sorted(rows), {}


def _fig6_point(args):
    cfg_dict, gamma = args
    cfg = ExperimentConfig(**cfg_dict)
    tc = TiltedCircle(cfg.theta_prime, gamma, cfg.omega0)
    path = tilted_circle_path(tc)
    bath = cfg.bath()
    grid = _echo_grid(cfg.B, bath.cutoff, path.period)
    res = run_echo_path(path, bath, grid, cfg.B)
    return (gamma, cfg.theta_prime, res.fidelity)


def run_fig6(cfg: ExperimentConfig):
    """F(2 T0) vs the loop orientation gamma for a tilted circle."""
    points = [(cfg.as_dict(), g) for g in cfg.gamma_list]
    rows = _dispatch(_fig6_point, points, cfg.workers)
    return ["gamma", "theta_prime", "F_2T0"], sorted(rows), {}


def _sweep_point(args):
    cfg_dict, param, value = args
    cfg = ExperimentConfig(**cfg_dict)
    kwargs = {}
    if param in ("theta", "omega0"):
        kwargs[param] = value
    elif param in ("cutoff", "temperature"):
        kwargs[param] = value
    else:  # lambda_norm
        cfg = dataclasses.replace(cfg, lambda_norm=value, coupling=None)
    res = _echo_for(cfg, **kwargs)
    s = res.summary()
    return (value, s["F_2T0"], s["Phi"], s["delta_Phi"], s["dephasing"],
            s["eta1"], s["eta2"])


def run_sweep(cfg: ExperimentConfig):
    points = [(cfg.as_dict(), cfg.sweep_param, v) for v in cfg.sweep_values]
    rows = _dispatch(_sweep_point, points, cfg.workers)
    header = [cfg.sweep_param, "F_2T0", "Phi", "delta_Phi", "dephasing", "eta1", "eta2"]
    return header, sorted(rows), {}


def run_single(cfg: ExperimentConfig):
    if cfg.path_echo:
        tc = TiltedCircle(cfg.theta_prime, cfg.gamma_list[0], cfg.omega0)
        path = tilted_circle_path(tc)
        bath = cfg.bath()
        grid = _echo_grid(cfg.B, bath.cutoff, path.period)
        res = run_echo_path(path, bath, grid, cfg.B)
    else:
        res = _echo_for(cfg)
    s = res.summary()
    c1, c2 = res.cycles
    n1, m1, l1, k1 = c1.coeffs.final()
    n2, m2, l2, k2 = c2.coeffs.final()
    row = (s["F_2T0"], s["Phi"], s["delta_Phi"], s["dephasing"],
           s["eta1"], s["eta2"], n1, m1, l1, k1, n2, m2, l2, k2)
    header = ["F_2T0", "Phi", "delta_Phi", "dephasing", "eta1", "eta2",
              "n1", "m1", "l1", "k1", "n2", "m2", "l2", "k2"]
    return header, [row], s


def _dispatch(fn, points, workers: int):
    if workers <= 1 or len(points) <= 1:
        return [fn(p) for p in points]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, points))


_RUNNERS = {"fig1": run_fig1, "fig2": run_fig2, "fig3": run_fig3,
            "fig4": run_fig4, "fig6": run_fig6, "sweep": run_sweep,
            "single": run_single}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="berrydec",
        description="Berry-phase decoherence experiments (CSV output)")
    parser.add_argument("experiment", choices=EXPERIMENTS)
    parser.add_argument("--config", help="JSON config file (flat key/value)")
    parser.add_argument("--B", type=float, dest="B")
    parser.add_argument("--theta", type=float)
    parser.add_argument("--omega0", type=float)
    parser.add_argument("--cutoff", type=float)
    parser.add_argument("--lambda-norm", type=float, dest="lambda_norm",
                        help="integrated spectrum lambda*cutoff^2/2")
    parser.add_argument("--coupling", type=float, help="raw lambda (overrides --lambda-norm)")
    parser.add_argument("--temp", type=float, dest="temperature")
    parser.add_argument("--theta-prime", type=float, dest="theta_prime")
    parser.add_argument("--gamma-list", dest="gamma_list",
                        help="comma-separated loop orientations for fig6")
    parser.add_argument("--t0-list", dest="t0_list", help="comma-separated cycle durations")
    parser.add_argument("--sweep-param", dest="sweep_param")
    parser.add_argument("--sweep-values", dest="sweep_values", help="comma-separated values")
    parser.add_argument("--multinoise", action="store_true", default=None)
    parser.add_argument("--path-echo", action="store_true", default=None, dest="path_echo")
    parser.add_argument("--workers", type=int)
    parser.add_argument("--out", help="output CSV path (default: stdout)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        file_values = {}
        if args.config:
            with open(args.config, encoding="utf-8") as fh:
                file_values = json.load(fh)
            if not isinstance(file_values, dict):
                raise ConfigError("config file must hold a JSON object")
        flag_values = {k: v for k, v in vars(args).items()
                       if k not in ("experiment", "config") and v is not None}
        for key in _LIST_KEYS & set(flag_values):
            if isinstance(flag_values[key], str):
                flag_values[key] = [x for x in flag_values[key].split(",") if x]
        cfg = build_config(args.experiment, file_values, flag_values)
    except (ConfigError, OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return CONFIG_ERROR

    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", PositivityWarning)
            header, rows, summary = _RUNNERS[cfg.experiment](cfg)
    except (QuadratureError, ResolutionError, InvalidPathError, PoleCrossingError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return NUMERICAL_ERROR

    write_csv(cfg.out, header, rows, cfg)
    for w in caught:
        if issubclass(w.category, PositivityWarning):
            print(f"positivity warning: {w.message}", file=sys.stderr)
    if summary:
        for key, val in summary.items():
            print(f"{key} = {_fmt(val)}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
