"""Command-line sweep runner.

Usage::

    softmeas <command> [--config FILE] [--param name=value ...]
                       [--out FILE] [--format csv|json]
                       [--kappa-convention gram|paper] [--jobs N]

Commands: ``single``, ``repeat``, ``continuous``, ``fig2a``, ``fig2b``,
``fig3``, ``isweep``. Parameters come from built-in defaults, overridden by
a flat ``key = value`` config file, overridden by ``--param`` flags. Grid
parameters use ``start:stop:points``; complex scalars use ``re,im``.

Exit codes: 0 success, 2 configuration error, 3 invariant violation while
computing or emitting rows.
"""

from __future__ import annotations

import argparse
import cmath
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from functools import partial

import numpy as np

from .errors import ConfigError, SoftMeasError
from .information import (
    CompetitionParams,
    StateEnsemble,
    coherent_info_soft,
    coherent_info_two_level,
    compete_two_level,
    eve_bob_semiclassical,
    holevo_info,
    meter_ensemble,
    semiclassical_info_continuous,
)
from .matcore import partial_trace, von_neumann_entropy
from .measurement import SoftMeasurement, TwoLevelMeterParams, apply_soft, two_level_gram
from .repeated import (
    ContinuousLimitParams,
    RepeatedMeasurement,
    gram_power,
    joint_dm_continuous,
    joint_dm_repeated,
    meter_dm_continuous,
    meter_dm_repeated,
    two_level_gram_sqrt,
)

HALF_PI = math.pi / 2.0

# Built-in parameter defaults per command, as config-file strings.
_DEFAULTS: dict[str, dict[str, str]] = {
    "fig2a": {"q": "0:1:51", "mu": "0:1:51", "p": "0.5"},
    "fig2b": {"q_E": "0:1:51", "q_B": "0:1:51", "mu": "1.0"},
    "fig3": {"q": "0:1:51", "theta": f"0:{HALF_PI!r}:51"},
    "continuous": {
        "t": "0:5:51",
        "kappa": "1.0",
        "chi_dot": "0.0",
        "r_dot": "0,0",
        "rho_p": "0.5",
        "rho_mu": "1.0",
        "rho_phase": "0.0",
    },
    "repeat": {
        "n": "1:10:10",
        "theta": repr(math.pi / 3.0),
        "chi": "0.0",
        "r12": "1,0",
        "rho_p": "0.5",
        "rho_mu": "1.0",
        "rho_phase": "0.0",
    },
    "single": {
        "theta": repr(math.pi / 3.0),
        "chi": "0.0",
        "r12": "1,0",
        "rho_p": "0.5",
        "rho_mu": "1.0",
        "rho_phase": "0.0",
    },
    "isweep": {"q": "0:1:51", "p": "0.5", "mu": "1.0"},
}

# Which of the parameters above are sweep grids, in emission order.
_GRIDS: dict[str, tuple[str, ...]] = {
    "fig2a": ("q", "mu"),
    "fig2b": ("q_E", "q_B"),
    "fig3": ("q", "theta"),
    "continuous": ("t",),
    "repeat": ("n",),
    "single": (),
    "isweep": ("q",),
}

_COLUMNS: dict[str, tuple[str, ...]] = {
    "fig2a": ("q", "mu", "I_c"),
    "fig2b": ("q_E", "q_B", "I_c_E", "I_c_B"),
    "fig3": ("q", "theta", "I_s"),
    "continuous": (
        "t",
        "meter_00",
        "meter_01_re",
        "meter_01_im",
        "meter_11",
        "joint_entropy",
        "meter_entropy",
        "I_s",
    ),
    "repeat": (
        "n",
        "psi_00",
        "psi_01_re",
        "psi_01_im",
        "psi_11",
        "meter_entropy",
        "joint_entropy",
        "I_c",
    ),
    "single": (
        "q",
        "input_entropy",
        "object_entropy",
        "meter_entropy",
        "joint_entropy",
        "I_c",
        "I_s",
    ),
    "isweep": ("q", "I_c", "I_s"),
}


def _parse_float(raw: str, name: str) -> float:
    try:
        return float(raw)
    except ValueError as exc:
        raise ConfigError(f"parameter {name}: expected a number, got {raw!r}") from exc


def _parse_complex(raw: str, name: str) -> complex:
    parts = raw.split(",")
    if len(parts) != 2:
        raise ConfigError(f"parameter {name}: expected 're,im', got {raw!r}")
    return complex(_parse_float(parts[0], name), _parse_float(parts[1], name))


def _parse_grid(raw: str, name: str) -> np.ndarray:
    parts = raw.split(":")
    if len(parts) != 3:
        raise ConfigError(f"parameter {name}: expected 'start:stop:points', got {raw!r}")
    start = _parse_float(parts[0], name)
    stop = _parse_float(parts[1], name)
    try:
        points = int(parts[2])
    except ValueError as exc:
        raise ConfigError(f"parameter {name}: points must be an integer, got {parts[2]!r}") from exc
    if points < 1:
        raise ConfigError(f"parameter {name}: points must be >= 1, got {points}")
    if start > stop:
        raise ConfigError(f"parameter {name}: start {start} exceeds stop {stop}")
    if points == 1:
        return np.array([start])
    return np.linspace(start, stop, points)


def _read_config_file(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    try:
        with open(path, "r", encoding="utf-8") as handle:
            for lineno, line in enumerate(handle, start=1):
                stripped = line.split("#", 1)[0].strip()
                if not stripped:
                    continue
                if "=" not in stripped:
                    raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
                key, _, value = stripped.partition("=")
                values[key.strip()] = value.strip()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    return values


def _resolve_config(command: str, args: argparse.Namespace) -> dict[str, str]:
    config = dict(_DEFAULTS[command])
    config["kappa_convention"] = "gram"
    overrides: dict[str, str] = {}
    if args.config:
        overrides.update(_read_config_file(args.config))
    for item in args.param or []:
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"--param expects name=value, got {item!r}")
        overrides[key.strip()] = value.strip()
    for key, value in overrides.items():
        if key not in config:
            raise ConfigError(f"unknown parameter {key!r} for command {command!r}")
        config[key] = value
    if args.kappa_convention:
        config["kappa_convention"] = args.kappa_convention
    if config["kappa_convention"] not in ("gram", "paper"):
        raise ConfigError(
            f"kappa_convention must be 'gram' or 'paper', got {config['kappa_convention']!r}"
        )
    return config


def _unit_interval(value: float, name: str) -> float:
    if not 0.0 <= value <= 1.0:
        raise ConfigError(f"parameter {name} must lie in [0, 1], got {value}")
    return value


def _rho_from_config(config: dict[str, str]) -> np.ndarray:
    p = _unit_interval(_parse_float(config["rho_p"], "rho_p"), "rho_p")
    mu = _unit_interval(_parse_float(config["rho_mu"], "rho_mu"), "rho_mu")
    phase = _parse_float(config["rho_phase"], "rho_phase")
    off = mu * math.sqrt(p * (1.0 - p)) * cmath.exp(1j * phase)
    return np.array([[p, off], [np.conj(off), 1.0 - p]])


def _entanglement_from_r12(r12: complex) -> np.ndarray:
    if abs(r12) > 1.0 + 1e-12:
        raise ConfigError(f"parameter r12 must have modulus <= 1, got {r12}")
    return np.array([[1.0, r12], [np.conj(r12), 1.0]])


def _grid_points(command: str, config: dict[str, str]) -> list[tuple[float, ...]]:
    axes = []
    for name in _GRIDS[command]:
        grid = _parse_grid(config[name], name)
        if command == "repeat" and name == "n":
            grid = np.unique(np.rint(grid).astype(int))
            if grid.size and grid[0] < 1:
                raise ConfigError("parameter n: repetition counts must be >= 1")
        axes.append(grid)
    if not axes:
        return [()]
    mesh = np.meshgrid(*axes, indexing="ij")
    return list(zip(*(m.ravel() for m in mesh)))


def _compute_row(command: str, config: dict[str, str], point: tuple[float, ...]) -> list[float]:
    if command == "fig2a":
        q, mu = point
        p = _unit_interval(_parse_float(config["p"], "p"), "p")
        return [q, mu, coherent_info_two_level(q, p, mu)]

    if command == "fig2b":
        q_eve, q_bob = point
        mu = _unit_interval(_parse_float(config["mu"], "mu"), "mu")
        info_eve, info_bob = compete_two_level(
            CompetitionParams(q_eve=q_eve, q_bob=q_bob, mu=mu)
        )
        return [q_eve, q_bob, info_eve, info_bob]

    if command == "fig3":
        q, theta = point
        ensemble = StateEnsemble(
            probs=np.array([0.5, 0.5]),
            states=(np.diag([1.0, 0.0]).astype(complex), np.diag([0.0, 1.0]).astype(complex)),
        )
        rigid_bob = SoftMeasurement(entanglement=np.eye(2), gram=np.eye(2))
        dephase = np.array([[1.0, q], [q, 1.0]])
        return [q, theta, eve_bob_semiclassical(ensemble, theta, dephase, rigid_bob)]

    if command == "continuous":
        (t,) = point
        params = ContinuousLimitParams(
            kappa=_parse_float(config["kappa"], "kappa"),
            t=float(t),
            chi_dot=_parse_float(config["chi_dot"], "chi_dot"),
            r_dot=_parse_complex(config["r_dot"], "r_dot"),
        )
        rho = _rho_from_config(config)
        meter = meter_dm_continuous(rho, params)
        joint = joint_dm_continuous(rho, params)
        info = semiclassical_info_continuous(
            params.kappa, params.t, convention=config["kappa_convention"]
        )
        return [
            t,
            meter[0, 0].real,
            meter[0, 1].real,
            meter[0, 1].imag,
            meter[1, 1].real,
            von_neumann_entropy(joint),
            von_neumann_entropy(meter),
            info,
        ]

    if command == "repeat":
        (n,) = point
        n = int(n)
        params = TwoLevelMeterParams(
            theta=_parse_float(config["theta"], "theta"),
            chi=_parse_float(config["chi"], "chi"),
        )
        measurement = SoftMeasurement(
            entanglement=_entanglement_from_r12(_parse_complex(config["r12"], "r12")),
            gram=two_level_gram(params),
        )
        rho = _rho_from_config(config)
        vectors = two_level_gram_sqrt(params, n)
        joint = joint_dm_repeated(rho, RepeatedMeasurement(base=measurement, n=n))
        meter = meter_dm_repeated(rho, measurement.gram, n)
        info = coherent_info_soft(
            rho, measurement.entanglement**n, gram_power(measurement.gram, n)
        )
        return [
            float(n),
            vectors[0, 0].real,
            vectors[0, 1].real,
            vectors[0, 1].imag,
            vectors[1, 1].real,
            von_neumann_entropy(meter),
            von_neumann_entropy(joint),
            info,
        ]

    if command == "single":
        params = TwoLevelMeterParams(
            theta=_parse_float(config["theta"], "theta"),
            chi=_parse_float(config["chi"], "chi"),
        )
        measurement = SoftMeasurement(
            entanglement=_entanglement_from_r12(_parse_complex(config["r12"], "r12")),
            gram=two_level_gram(params),
        )
        rho = _rho_from_config(config)
        q = abs(measurement.entanglement[0, 1] * measurement.gram[0, 1])
        joint = apply_soft(measurement, rho)
        meter = partial_trace(joint, [2, 2], keep=1)
        obj = partial_trace(joint, [2, 2], keep=0)
        populations = np.diag(rho).real
        basis_ensemble = StateEnsemble(
            probs=populations,
            states=(np.diag([1.0, 0.0]).astype(complex), np.diag([0.0, 1.0]).astype(complex)),
        )
        info_s = holevo_info(meter_ensemble(basis_ensemble, measurement.gram))
        info_c = coherent_info_soft(rho, measurement.entanglement, measurement.gram)
        return [
            q,
            von_neumann_entropy(rho),
            von_neumann_entropy(obj),
            von_neumann_entropy(meter),
            von_neumann_entropy(joint),
            info_c,
            info_s,
        ]

    if command == "isweep":
        (q,) = point
        p = _unit_interval(_parse_float(config["p"], "p"), "p")
        mu = _unit_interval(_parse_float(config["mu"], "mu"), "mu")
        basis_ensemble = StateEnsemble(
            probs=np.array([p, 1.0 - p]),
            states=(np.diag([1.0, 0.0]).astype(complex), np.diag([0.0, 1.0]).astype(complex)),
        )
        gram = np.array([[1.0, q], [q, 1.0]])
        info_s = holevo_info(meter_ensemble(basis_ensemble, gram))
        return [q, coherent_info_two_level(q, p, mu), info_s]

    raise ConfigError(f"unknown command {command!r}")


def _format_value(value: float) -> str:
    text = format(float(value), ".12g")
    return "0" if text == "-0" else text


def _emit_csv(columns: tuple[str, ...], rows: list[list[float]]) -> str:
    lines = [",".join(columns)]
    lines.extend(",".join(_format_value(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _emit_json(
    command: str, config: dict[str, str], columns: tuple[str, ...], rows: list[list[float]]
) -> str:
    payload = {
        "command": command,
        "config": config,
        "columns": list(columns),
        "rows": [[float(v) for v in row] for row in rows],
    }
    return json.dumps(payload, indent=2) + "\n"


def _check_finite(columns: tuple[str, ...], rows: list[list[float]]) -> None:
    for i, row in enumerate(rows):
        for name, value in zip(columns, row):
            if not math.isfinite(value):
                raise SoftMeasError(
                    f"invariant violation: non-finite value in column {name!r}, row {i}"
                )


def run_sweep(
    command: str, config: dict[str, str], jobs: int = 1
) -> tuple[tuple[str, ...], list[list[float]]]:
    """Compute all rows of a sweep, ordered by grid index."""
    points = _grid_points(command, config)
    worker = partial(_compute_row, command, config)
    if jobs > 1 and len(points) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunk = max(1, len(points) // (jobs * 4))
            rows = list(pool.map(worker, points, chunksize=chunk))
    else:
        rows = [worker(point) for point in points]
    columns = _COLUMNS[command]
    _check_finite(columns, rows)
    return columns, rows


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="softmeas",
        description="Soft-measurement channel sweeps: information quantities to CSV/JSON.",
    )
    parser.add_argument("command", choices=sorted(_DEFAULTS))
    parser.add_argument("--config", help="flat key = value config file")
    parser.add_argument(
        "--param",
        action="append",
        metavar="NAME=VALUE",
        help="override one parameter (repeatable)",
    )
    parser.add_argument("--out", help="output path (default: stdout)")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--kappa-convention", choices=("gram", "paper"))
    parser.add_argument("--jobs", type=int, default=1, help="parallel workers (default 1)")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = _resolve_config(args.command, args)
        if args.jobs < 1:
            raise ConfigError(f"--jobs must be >= 1, got {args.jobs}")
    except ConfigError as exc:
        print(f"softmeas: config error: {exc}", file=sys.stderr)
        return 2
    try:
        columns, rows = run_sweep(args.command, config, jobs=args.jobs)
    except ConfigError as exc:
        print(f"softmeas: config error: {exc}", file=sys.stderr)
        return 2
    except SoftMeasError as exc:
        print(f"softmeas: {exc}", file=sys.stderr)
        return 3
    if args.format == "csv":
        text = _emit_csv(columns, rows)
    else:
        text = _emit_json(args.command, config, columns, rows)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
