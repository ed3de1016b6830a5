"""Command-line interface: configuration loading and CSV/JSON emission.

Subcommands
-----------
roots   Locate the characteristic zero pair for given (alpha, tau, theta).
kernel  Regularized solution kernel K_eps on a space-time grid.
solve   Displacement field from configured initial data.
limits  General assembly next to a closed-form limit, side by side.
oracle  Spectral kernel value vs. independent Bromwich inversion at (rho, t).

Exit codes: 0 success, 2 validation/usage failure, 3 numerical
non-convergence. Data goes to --out (or stdout); diagnostics go to stderr
only, so redirected output stays machine-readable. Field CSV uses the header
``x,t,u``, one row per sample, row-major in t then x, values printed with 17
significant digits (which round-trip float64 exactly). Running the same
configuration twice produces byte-identical files regardless of
FZWAVE_THREADS.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict, dataclass

import numpy as np

from .charfun import CharParams, theta_of_rho
from .errors import NumericsError, ValidationError
from .kernel import (
    Field,
    QuadratureConfig,
    delta_eps,
    kernel_classical,
    kernel_eps,
    kernel_time_fractional,
    spectral_kernel,
    spectral_kernel_alpha0,
)
from .laplace_oracle import BromwichConfig, bromwich_invert
from .params import DEFAULT_EPSILON, ModelParams, validate_model
from .rootfinder import find_zero_pair
from .solver import InitialData, solve_field

__all__ = ["RunConfig", "run_command", "main"]

# near-limit probe orders used by `limits` when not overridden
_BETA_PROBE = 0.99
_ALPHA_PROBE = 1e-3

_MODEL_KEYS = ("alpha", "beta", "tau", "epsilon")
_GRID_KEYS = ("x_min", "x_max", "nx", "t_list")
_OUTPUT_KEYS = ("path", "format")
_INITIAL_KEYS = ("u0", "v0")
_DATA_KEYS = ("kind", "center", "width", "height", "samples")


@dataclass(frozen=True)
class GridSpec:
    """Uniform x-grid plus output times."""

    x_min: float = -4.0
    x_max: float = 4.0
    nx: int = 801
    t_list: tuple = (1.0,)

    def __post_init__(self) -> None:
        if not isinstance(self.nx, int) or isinstance(self.nx, bool) or self.nx < 3:
            raise ValidationError("nx", self.nx, "an integer >= 3")
        if not (math.isfinite(self.x_min) and math.isfinite(self.x_max)
                and self.x_min < self.x_max):
            raise ValidationError(
                "x_min/x_max", (self.x_min, self.x_max), "finite with x_min < x_max"
            )
        ts = tuple(float(t) for t in self.t_list)
        if len(ts) == 0 or any(not math.isfinite(t) or t <= 0.0 for t in ts):
            raise ValidationError("t_list", self.t_list, "positive finite times")
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise ValidationError("t_list", self.t_list, "strictly increasing")
        object.__setattr__(self, "t_list", ts)

    def x_grid(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.nx)


@dataclass(frozen=True)
class OutputSpec:
    path: str | None = None
    format: str = "csv"

    def __post_init__(self) -> None:
        if self.format not in ("csv", "json"):
            raise ValidationError("format", self.format, "one of {'csv', 'json'}")
        if self.path is not None and not isinstance(self.path, str):
            raise ValidationError("path", self.path, "a file path string or null")


@dataclass(frozen=True)
class RunConfig:
    """Everything one invocation needs: model, quadrature, grid, data, output."""

    model: ModelParams
    quadrature: QuadratureConfig
    grid: GridSpec
    initial: dict
    output: OutputSpec

    def __post_init__(self) -> None:
        validate_model(self.model)
        u0 = self.initial.get("u0")
        v0 = self.initial.get("v0")
        if set(self.initial) != {"u0", "v0"} or not all(
            isinstance(d, InitialData) for d in (u0, v0)
        ):
            raise ValidationError(
                "initial", sorted(self.initial), "a dict {'u0': InitialData, 'v0': InitialData}"
            )


def _require_keys(section: str, mapping: dict, allowed: tuple) -> None:
    unknown = sorted(set(mapping) - set(allowed))
    if unknown:
        raise ValidationError(section, unknown, f"keys from {sorted(allowed)}")


def _initial_from_mapping(name: str, d: dict | None) -> InitialData:
    if d is None:
        return InitialData.zero()
    if not isinstance(d, dict):
        raise ValidationError(name, d, "an object with an initial-data description")
    _require_keys(name, d, _DATA_KEYS)
    kwargs = {k: d[k] for k in ("center", "width", "height") if k in d}
    kind = d.get("kind")
    if kind == "sampled":
        s = d.get("samples")
        if not isinstance(s, dict) or set(s) - {"grid", "values"}:
            raise ValidationError(
                f"{name}.samples", s, "an object {'grid': [...], 'values': [...]}"
            )
        return InitialData.sampled(
            s.get("grid"), s.get("values"), height=kwargs.get("height", 1.0)
        )
    return InitialData(kind=kind, samples=None, **kwargs)


def _config_from_sources(file_cfg: dict, args: argparse.Namespace) -> RunConfig:
    """Merge config-file values with flag overrides and fill defaults."""
    _require_keys("config", file_cfg, ("model", "quadrature", "grid", "initial", "output"))
    model_d = dict(file_cfg.get("model", {}))
    _require_keys("model", model_d, _MODEL_KEYS)
    for flag, key in (("alpha", "alpha"), ("beta", "beta"), ("tau", "tau"), ("eps", "epsilon")):
        v = getattr(args, flag, None)
        if v is not None:
            model_d[key] = v
    model = ModelParams(
        alpha=model_d.get("alpha", 0.25),
        beta=model_d.get("beta", 0.45),
        tau=model_d.get("tau", 0.1),
        epsilon=model_d.get("epsilon", DEFAULT_EPSILON),
    )

    quad_d = dict(file_cfg.get("quadrature", {}))
    _require_keys("quadrature", quad_d, tuple(QuadratureConfig.__dataclass_fields__))
    quadrature = QuadratureConfig.for_model(model, **quad_d)

    grid_d = dict(file_cfg.get("grid", {}))
    _require_keys("grid", grid_d, _GRID_KEYS)
    for flag, key in (("x_min", "x_min"), ("x_max", "x_max"), ("nx", "nx")):
        v = getattr(args, flag, None)
        if v is not None:
            grid_d[key] = v
    t_flag = getattr(args, "t_list", None)
    if t_flag is not None:
        grid_d["t_list"] = _parse_t_list(t_flag)
    grid = GridSpec(**grid_d)

    initial_d = file_cfg.get("initial", {})
    if not isinstance(initial_d, dict):
        raise ValidationError("initial", initial_d, "an object with u0/v0 entries")
    _require_keys("initial", initial_d, _INITIAL_KEYS)
    initial = {
        "u0": _initial_from_mapping("u0", initial_d.get("u0", {"kind": "dirac"})),
        "v0": _initial_from_mapping("v0", initial_d.get("v0")),
    }

    output_d = dict(file_cfg.get("output", {}))
    _require_keys("output", output_d, _OUTPUT_KEYS)
    if getattr(args, "out", None) is not None:
        output_d["path"] = args.out
    if getattr(args, "format", None) is not None:
        output_d["format"] = args.format
    output = OutputSpec(**output_d)

    return RunConfig(model, quadrature, grid, initial, output)


def _load_config_file(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            cfg = json.load(fh)
    except FileNotFoundError:
        raise ValidationError("config", path, f"an existing JSON file ({path} not found)")
    except json.JSONDecodeError as e:
        raise ValidationError("config", path, f"valid JSON ({e})")
    if not isinstance(cfg, dict):
        raise ValidationError("config", path, "a JSON object at the top level")
    return cfg


def _parse_t_list(text: str) -> tuple:
    try:
        return tuple(float(tok) for tok in text.split(",") if tok.strip() != "")
    except ValueError:
        raise ValidationError("t_list", text, "comma-separated numbers, e.g. '0.5,1,2'")


# ---------------------------------------------------------------------------
# Output writers
# ---------------------------------------------------------------------------


def _fmt(v: float) -> str:
    return f"{float(v):.17g}"


def _field_csv(field: Field) -> str:
    lines = ["x,t,u"]
    for i, t in enumerate(field.t_list):
        row = field.values[i]
        ts = _fmt(t)
        for j, x in enumerate(field.x_grid):
            lines.append(f"{_fmt(x)},{ts},{_fmt(row[j])}")
    return "\n".join(lines) + "\n"


def _field_json(field: Field) -> str:
    doc = {
        "x": [float(v) for v in field.x_grid],
        "t": [float(t) for t in field.t_list],
        "u": [[float(v) for v in row] for row in field.values],
        "meta": field.meta,
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _table_csv(header: str, columns: list) -> str:
    lines = [header]
    for row in zip(*columns):
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _emit_field(field: Field, output: OutputSpec) -> None:
    text = _field_csv(field) if output.format == "csv" else _field_json(field)
    _emit(text, output.path)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def _fmt_root_part(v: float) -> str:
    s = f"{v:.6f}"
    return "0" if s in ("0.000000", "-0.000000") else s


def _cmd_roots(args: argparse.Namespace) -> int:
    alpha = args.alpha if args.alpha is not None else 0.25
    tau = args.tau if args.tau is not None else 0.1
    if args.theta is not None:
        theta = args.theta
    elif args.rho is not None:
        beta = args.beta if args.beta is not None else 0.45
        theta = float(theta_of_rho(args.rho, beta))
    else:
        theta = 1.0
    pair = find_zero_pair(CharParams(alpha=alpha, tau=tau, theta=theta))
    s = pair.s_z
    print(f"s_z = {_fmt_root_part(s.real)} + {s.imag:.6f}i")
    print(f"conjugate = {_fmt_root_part(s.real)} - {s.imag:.6f}i", file=sys.stderr)
    return 0


def _cmd_kernel(args: argparse.Namespace) -> int:
    cfg = _config_from_sources(_load_config_file(args.config), args)
    field = kernel_eps(cfg.grid.x_grid(), cfg.grid.t_list, cfg.model, cfg.quadrature)
    _emit_field(field, cfg.output)
    return 0


def _cmd_solve(args: argparse.Namespace) -> int:
    cfg = _config_from_sources(_load_config_file(args.config), args)
    field = solve_field(
        cfg.initial["u0"], cfg.initial["v0"],
        cfg.grid.x_grid(), cfg.grid.t_list, cfg.model, cfg.quadrature,
    )
    _emit_field(field, cfg.output)
    return 0


def _cmd_limits(args: argparse.Namespace) -> int:
    cfg = _config_from_sources(_load_config_file(args.config), args)
    m, grid = cfg.model, cfg.grid
    x = grid.x_grid()
    ts = grid.t_list
    # each case runs the general assembly at a near-limit order next to the
    # dedicated closed form / limit route
    if args.case == "beta0":
        beta = m.beta if args.beta is not None else 1e-3
        gen = kernel_eps(x, ts, ModelParams(m.alpha, beta, m.tau, m.epsilon), None)
        row = np.asarray(delta_eps(x, m.epsilon))
        limit = np.vstack([row for _ in ts])
    elif args.case == "beta1":
        beta = m.beta if args.beta is not None else _BETA_PROBE
        gen = kernel_eps(x, ts, ModelParams(m.alpha, beta, m.tau, m.epsilon), None)
        limit = kernel_time_fractional(x, ts, m.alpha, m.tau, m.epsilon).values
    elif args.case == "alpha0":
        alpha = m.alpha if args.alpha is not None else _ALPHA_PROBE
        gen = kernel_eps(x, ts, ModelParams(alpha, m.beta, m.tau, m.epsilon), None)
        limit = kernel_eps(x, ts, ModelParams(0.0, m.beta, m.tau, m.epsilon), None).values
    elif args.case == "classical":
        alpha = m.alpha if args.alpha is not None else _ALPHA_PROBE
        beta = m.beta if args.beta is not None else _BETA_PROBE
        gen = kernel_eps(x, ts, ModelParams(alpha, beta, m.tau, m.epsilon), None)
        limit = kernel_classical(x, ts, m.tau, m.epsilon).values
    else:  # pragma: no cover - argparse restricts choices
        raise ValidationError("case", args.case, "beta0|beta1|alpha0|classical")

    xs_col, t_col, g_col, l_col = [], [], [], []
    for i, t in enumerate(ts):
        xs_col.extend(float(v) for v in x)
        t_col.extend([float(t)] * x.size)
        g_col.extend(float(v) for v in gen.values[i])
        l_col.extend(float(v) for v in limit[i])
    d_col = [abs(a - b) for a, b in zip(g_col, l_col)]
    text = _table_csv("x,t,u_general,u_limit,abs_diff", [xs_col, t_col, g_col, l_col, d_col])
    _emit(text, cfg.output.path)
    return 0


def _cmd_oracle(args: argparse.Namespace) -> int:
    cfg = _config_from_sources(_load_config_file(args.config), args)
    rho = args.rho if args.rho is not None else 1.0
    t = args.t if args.t is not None else 1.0
    m, q = cfg.model, cfg.quadrature
    if m.alpha == 0.0:
        spectral = float(spectral_kernel_alpha0(rho, t, m.beta, m.tau))
    else:
        spectral = spectral_kernel(rho, t, m, q).total
    oracle = bromwich_invert(
        rho, t, m, BromwichConfig(s0=q.bromwich_s0, p_max=q.bromwich_p_max)
    )
    text = _table_csv(
        "rho,t,s_spectral,s_oracle,abs_diff",
        [[rho], [t], [spectral], [oracle], [abs(spectral - oracle)]],
    )
    _emit(text, cfg.output.path)
    return 0


# ---------------------------------------------------------------------------
# Parser and entry point
# ---------------------------------------------------------------------------


def _add_model_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--alpha", type=float, default=None, help="time-memory order in [0, 1)")
    sp.add_argument("--beta", type=float, default=None, help="space-memory order in [0, 1]")
    sp.add_argument("--tau", type=float, default=None, help="relaxation ratio in (0, 1)")
    sp.add_argument("--eps", type=float, default=None, help="regularization width (default 0.01)")


def _add_grid_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--x-min", dest="x_min", type=float, default=None)
    sp.add_argument("--x-max", dest="x_max", type=float, default=None)
    sp.add_argument("--nx", type=int, default=None, help="number of x samples (>= 3)")
    sp.add_argument("--t-list", dest="t_list", type=str, default=None,
                    help="comma-separated output times, e.g. '0.5,1,2'")


def _add_io_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--config", type=str, default=None, help="JSON run configuration")
    sp.add_argument("--out", type=str, default=None, help="output file (default: stdout)")
    sp.add_argument("--format", type=str, default=None, choices=("csv", "json"))


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fzwave",
        description="Wave fields with fractional time and space memory.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("roots", help="characteristic zero pair for (alpha, tau, theta)")
    sp.add_argument("--alpha", type=float, default=None)
    sp.add_argument("--tau", type=float, default=None)
    sp.add_argument("--theta", type=float, default=None, help="spectral weight (default 1)")
    sp.add_argument("--rho", type=float, default=None, help="wave number: derive theta via beta")
    sp.add_argument("--beta", type=float, default=None)
    sp.set_defaults(func=_cmd_roots)

    sp = sub.add_parser("kernel", help="regularized kernel K_eps on a grid")
    _add_model_flags(sp)
    _add_grid_flags(sp)
    _add_io_flags(sp)
    sp.set_defaults(func=_cmd_kernel)

    sp = sub.add_parser("solve", help="displacement field from initial data")
    _add_model_flags(sp)
    _add_grid_flags(sp)
    _add_io_flags(sp)
    sp.set_defaults(func=_cmd_solve)

    sp = sub.add_parser("limits", help="general assembly next to a closed-form limit")
    sp.add_argument("--case", required=True, choices=("beta0", "beta1", "alpha0", "classical"))
    _add_model_flags(sp)
    _add_grid_flags(sp)
    _add_io_flags(sp)
    sp.set_defaults(func=_cmd_limits)

    sp = sub.add_parser("oracle", help="spectral kernel vs Bromwich inversion at (rho, t)")
    _add_model_flags(sp)
    sp.add_argument("--rho", type=float, default=None, help="wave number (default 1)")
    sp.add_argument("--t", type=float, default=None, help="time (default 1)")
    _add_io_flags(sp)
    sp.set_defaults(func=_cmd_oracle)

    return parser


def run_command(argv) -> int:
    """Parse ``argv`` (no program name) and execute; returns the exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as e:
        # argparse already printed usage/help; 2 for bad usage, 0 for --help
        return int(e.code) if e.code is not None else 0
    try:
        return args.func(args)
    except ValidationError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except NumericsError as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return 3


def main() -> None:  # pragma: no cover - thin wrapper
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":  # pragma: no cover - python -m fzwave.cli
    main()
