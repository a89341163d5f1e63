"""Command line front end: build, certify, verify, integrate and export.

Jobs are described by a JSON config (schema_version 1) or by per-mode flags.
Reports are deterministic JSON keyed by the config and seed; point clouds go
to CSV with 17-significant-digit floats, optionally projected to OBJ.

Exit codes: 0 ok, 2 config error, 3 chart breakdown, 4 blow-up,
5 positivity violation.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import entire, geodesic, graph, lorentz, matlin, ode

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CHART_BREAKDOWN = 3
EXIT_BLOW_UP = 4
EXIT_POSITIVITY = 5

MODES = ("example", "solve", "verify", "entire-check", "integrate", "export")

_TWO_PI = 2.0 * math.pi


class ConfigError(ValueError):
    """Invalid job configuration; message is anchored to its source."""


@dataclass
class JobConfig:
    mode: str
    n: int = 0
    m: int = 0
    lambdas: tuple = ()
    rational_lambdas: tuple | None = None
    blocks: tuple | None = None
    b: list | None = None
    t_range: tuple = (0.0, _TWO_PI)
    grid: int = 256
    box: tuple = (-1.0, 1.0)
    samples: int = 16
    points: int = 100
    projection: tuple | None = None
    faces: bool = False
    which: str = "rotation"
    rhs: str = "euclidean"
    step: float = 1e-3
    t_end: float = _TWO_PI
    out: str = "out"
    seed: int = 0
    quiet: bool = False
    source: str = "<flags>"

    def anchored(self, field_name: str, problem: str) -> ConfigError:
        return ConfigError(f"{self.source}: {field_name}: {problem}")


_CONFIG_FIELDS = {
    "schema_version",
    "mode",
    "n",
    "m",
    "lambdas",
    "rational_lambdas",
    "blocks",
    "b",
    "t_range",
    "grid",
    "box",
    "samples",
    "points",
    "projection",
    "faces",
    "which",
    "rhs",
    "step",
    "t_end",
    "out",
    "seed",
    "quiet",
}


def load_config(path: str) -> JobConfig:
    """Read and validate a JSON job config."""
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"{path}: file not found") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")
    unknown = set(raw) - _CONFIG_FIELDS
    if unknown:
        raise ConfigError(f"{path}: unknown field(s): {', '.join(sorted(unknown))}")
    if raw.get("schema_version") != SCHEMA_VERSION:
        raise ConfigError(
            f"{path}: schema_version: must be {SCHEMA_VERSION}, "
            f"got {raw.get('schema_version')!r}"
        )
    if "mode" not in raw:
        raise ConfigError(f"{path}: mode: required")
    cfg = JobConfig(mode=str(raw["mode"]), source=path)
    for key, value in raw.items():
        if key in ("schema_version", "mode"):
            continue
        setattr(cfg, key, _coerce(cfg, key, value))
    return cfg


def _coerce(cfg: JobConfig, key: str, value):
    try:
        if key in ("n", "m", "grid", "samples", "points", "seed"):
            return int(value)
        if key in ("step", "t_end"):
            return float(value)
        if key in ("faces", "quiet"):
            return bool(value)
        if key in ("which", "rhs", "out"):
            return str(value)
        if key == "lambdas":
            return tuple(float(v) for v in value)
        if key == "rational_lambdas":
            return None if value is None else tuple((int(p), int(q)) for p, q in value)
        if key == "blocks":
            return None if value is None else tuple(
                (float(lam), tuple((float(a), float(b)) for a, b in pairs))
                for lam, pairs in value
            )
        if key == "b":
            return None if value is None else [[float(v) for v in row] for row in value]
        if key in ("t_range", "box"):
            lo, hi = value
            return (float(lo), float(hi))
        if key == "projection":
            if value is None:
                return None
            idx = tuple(int(v) for v in value)
            if len(idx) != 3:
                raise ValueError("need exactly 3 coordinate indices")
            return idx
    except (TypeError, ValueError) as exc:
        raise cfg.anchored(key, f"cannot parse {value!r} ({exc})") from None
    raise cfg.anchored(key, "unsupported field")


def _json_ready(obj):
    if isinstance(obj, dict):
        return {k: _json_ready(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_ready(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _json_ready(obj.tolist())
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    return obj


def _write_json(path: Path, payload: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    text = json.dumps(_json_ready(payload), sort_keys=True, indent=2) + "\n"
    path.write_text(text, encoding="utf-8", newline="\n")


def _config_dict(cfg: JobConfig) -> dict:
    return _json_ready(
        {
            "schema_version": SCHEMA_VERSION,
            "mode": cfg.mode,
            "n": cfg.n,
            "m": cfg.m,
            "lambdas": list(cfg.lambdas),
            "rational_lambdas": cfg.rational_lambdas,
            "blocks": cfg.blocks,
            "b": cfg.b,
            "t_range": list(cfg.t_range),
            "grid": cfg.grid,
            "box": list(cfg.box),
            "samples": cfg.samples,
            "points": cfg.points,
            "projection": cfg.projection,
            "faces": cfg.faces,
            "which": cfg.which,
            "rhs": cfg.rhs,
            "step": cfg.step,
            "t_end": cfg.t_end,
            "seed": cfg.seed,
        }
    )


def _build_pair(cfg: JobConfig) -> tuple[geodesic.SpectralBlock, np.ndarray]:
    """Resolve the (frequencies, B) pair from blocks or lambdas + b."""
    if cfg.blocks is not None:
        try:
            bs = entire.BlockSpec(cfg.n, cfg.m, cfg.blocks)
            return entire.build_odd_pair(bs)
        except ValueError as exc:
            raise cfg.anchored("blocks", str(exc)) from None
    if cfg.n < 2 or cfg.m < 1:
        raise cfg.anchored("n/m", f"need n >= 2 and m >= 1, got n={cfg.n}, m={cfg.m}")
    try:
        spec = geodesic.SpectralBlock(cfg.n, cfg.m, cfg.lambdas)
    except ValueError as exc:
        raise cfg.anchored("lambdas", str(exc)) from None
    if cfg.b is None:
        b = np.zeros((cfg.n - 1, cfg.m))
    else:
        try:
            b = matlin.as_matrix(cfg.b)
        except ValueError as exc:
            raise cfg.anchored("b", str(exc)) from None
        if b.shape != (cfg.n - 1, cfg.m):
            raise cfg.anchored(
                "b", f"expected shape {(cfg.n - 1, cfg.m)}, got {b.shape}"
            )
    return spec, b


def _say(cfg: JobConfig, msg: str) -> None:
    if not cfg.quiet:
        print(msg)


# ---------------------------------------------------------------------------
# mode handlers


def _run_example(cfg: JobConfig, out_dir: Path) -> int:
    which = cfg.which
    if which not in ("rotation", "tan", "both"):
        raise cfg.anchored("which", f"must be rotation, tan or both, got {which!r}")
    code = EXIT_OK
    if which in ("rotation", "both"):
        code = max(code, _example_rotation(cfg, out_dir))
    if which in ("tan", "both"):
        code = max(code, _example_tan(cfg, out_dir))
    return code


def _example_rotation(cfg: JobConfig, out_dir: Path) -> int:
    spec = geodesic.SpectralBlock(3, 2, (0.5, 0.5))
    b = np.array([[0.0, 1.0], [-1.0, 0.0]])
    g = geodesic.closed_form_build(spec, b)

    ts = np.linspace(-10.0, 10.0, 1000)
    max_dev = 0.0
    max_res = 0.0
    for t in ts:
        jet = geodesic.closed_form_eval(g, t)
        expect = np.array(
            [[math.sin(t), -math.cos(t)], [math.cos(t), math.sin(t)]]
        )
        max_dev = max(max_dev, float(np.max(np.abs(jet.z - expect))))
        max_res = max(max_res, float(np.linalg.norm(geodesic.affine_residual(jet))))

    rng = np.random.default_rng(cfg.seed)
    max_mss = 0.0
    max_fd = 0.0
    for _ in range(100):
        x = rng.uniform(-5.0, 5.0, size=2)
        t = float(rng.uniform(-5.0, 5.0))
        jet = geodesic.closed_form_eval(g, t)
        point = graph.AnsatzPoint(x, t)
        max_mss = max(max_mss, float(np.max(np.abs(graph.mss_residual(jet, point)))))
        fd = graph.fd_oracle_residual(lambda tau: geodesic.closed_form_eval(g, tau).z, point)
        max_fd = max(max_fd, float(np.max(np.abs(fd))))

    scan = entire.positivity_scan(spec, b, rational_lambdas=((1, 2), (1, 2)))
    report = {
        "schema_version": SCHEMA_VERSION,
        "mode": "example",
        "which": "rotation",
        "config": _config_dict(cfg),
        "n": 3,
        "m": 2,
        "max_closed_form_deviation": max_dev,
        "max_affine_residual": max_res,
        "max_mss_residual": max_mss,
        "max_fd_oracle_residual": max_fd,
        "positivity": {
            "min_det": scan.min_det,
            "argmin_t": scan.argmin_t,
            "interval": list(scan.scanned_interval),
            "periodic": scan.periodic,
            "verdict": scan.verdict,
        },
    }
    _write_json(out_dir / "example_rotation.json", report)
    _say(cfg, f"rotation example: max MSS residual {max_mss:.3e} over 100 seeded points")
    return EXIT_OK


def _example_tan(cfg: JobConfig, out_dir: Path) -> int:
    spec = geodesic.SpectralBlock(2, 1, (1.0,))
    b = np.zeros((1, 1))
    g = geodesic.closed_form_build(spec, b)
    t_star = entire.tan_blow_up_time(spec)

    ts = np.linspace(-1.4, 1.4, 512)  # stays inside (-pi/2, pi/2)
    max_dev = 0.0
    max_res = 0.0
    for t in ts:
        jet = geodesic.closed_form_eval(g, t)
        max_dev = max(max_dev, float(abs(jet.z[0, 0] - math.tan(t))))
        max_res = max(max_res, float(np.linalg.norm(geodesic.affine_residual(jet))))

    scan = entire.positivity_scan(spec, b, rational_lambdas=((1, 1),))
    report = {
        "schema_version": SCHEMA_VERSION,
        "mode": "example",
        "which": "tan",
        "config": _config_dict(cfg),
        "n": 2,
        "m": 1,
        "blow_up_time": t_star,
        "max_closed_form_deviation": max_dev,
        "max_affine_residual": max_res,
        "positivity": {
            "min_det": scan.min_det,
            "argmin_t": scan.argmin_t,
            "interval": list(scan.scanned_interval),
            "periodic": scan.periodic,
            "verdict": scan.verdict,
        },
    }
    _write_json(out_dir / "example_tan.json", report)
    _say(
        cfg,
        f"tan example: blow-up at t={t_star:.6f}, positivity verdict {scan.verdict}",
    )
    return EXIT_OK


def _run_solve(cfg: JobConfig, out_dir: Path) -> int:
    spec, b = _build_pair(cfg)
    g = geodesic.closed_form_build(spec, b)
    lo, hi = cfg.t_range
    ts = np.linspace(lo, hi, cfg.grid)
    rows = []
    for t in ts:
        jet = geodesic.closed_form_eval(g, float(t))
        rows.append({"t": float(t), "z": jet.z.tolist()})
    report = {
        "schema_version": SCHEMA_VERSION,
        "mode": "solve",
        "config": _config_dict(cfg),
        "initial_slope": (-b).tolist(),
        "samples": rows,
    }
    _write_json(out_dir / "solve.json", report)
    _say(cfg, f"solved closed form on {cfg.grid} samples over [{lo}, {hi}]")
    return EXIT_OK


def _run_verify(cfg: JobConfig, out_dir: Path) -> int:
    spec, b = _build_pair(cfg)
    g = geodesic.closed_form_build(spec, b)
    lo, hi = cfg.t_range
    ts = np.linspace(lo, hi, cfg.grid)

    max_res = 0.0
    max_res_rel = 0.0
    max_c1 = max_c2 = max_acc = 0.0
    max_chart_gap = 0.0
    for t in ts:
        jet = geodesic.closed_form_eval(g, float(t))
        res = float(np.linalg.norm(geodesic.affine_residual(jet)))
        max_res = max(max_res, res)
        max_res_rel = max(max_res_rel, res / (1.0 + float(np.linalg.norm(jet.zdd))))
        frame, vd, vdd = geodesic.closed_form_lift(g, float(t))
        c1, c2, acc = geodesic.stiefel_residual(frame, vd, vdd)
        max_c1 = max(max_c1, c1)
        max_c2 = max(max_c2, c2)
        max_acc = max(max_acc, float(np.linalg.norm(acc)))
        z_chart = geodesic.stiefel_to_affine(frame)
        max_chart_gap = max(max_chart_gap, float(np.max(np.abs(z_chart - jet.z))))

    rng = np.random.default_rng(cfg.seed)
    box_lo, box_hi = cfg.box
    max_mss = 0.0
    max_fd = 0.0
    for _ in range(cfg.points):
        x = rng.uniform(box_lo, box_hi, size=spec.n - 1)
        t = float(rng.uniform(lo, hi))
        jet = geodesic.closed_form_eval(g, t)
        point = graph.AnsatzPoint(x, t)
        max_mss = max(max_mss, float(np.max(np.abs(graph.mss_residual(jet, point)))))
        fd = graph.fd_oracle_residual(lambda tau: geodesic.closed_form_eval(g, tau).z, point)
        max_fd = max(max_fd, float(np.max(np.abs(fd))))

    report = {
        "schema_version": SCHEMA_VERSION,
        "mode": "verify",
        "config": _config_dict(cfg),
        "grid_points": cfg.grid,
        "random_points": cfg.points,
        "max_affine_residual": max_res,
        "max_affine_residual_rel": max_res_rel,
        "max_mss_residual": max_mss,
        "max_fd_oracle_residual": max_fd,
        "max_frame_orthogonality_defect": max_c1,
        "max_frame_horizontality_defect": max_c2,
        "max_frame_acceleration_defect": max_acc,
        "max_chart_transport_gap": max_chart_gap,
    }
    _write_json(out_dir / "verify.json", report)
    _say(
        cfg,
        f"verify: affine residual {max_res:.3e}, MSS {max_mss:.3e}, "
        f"FD oracle {max_fd:.3e}",
    )
    return EXIT_OK


def _run_entire_check(cfg: JobConfig, out_dir: Path) -> int:
    spec, b = _build_pair(cfg)
    if cfg.rational_lambdas is not None or spec.r == 0:
        scan = entire.positivity_scan(
            spec, b, grid_points=max(16, cfg.grid), rational_lambdas=cfg.rational_lambdas
        )
    else:
        scan = entire.positivity_scan(
            spec, b, interval=cfg.t_range, grid_points=max(16, cfg.grid)
        )
    report = {
        "schema_version": SCHEMA_VERSION,
        "mode": "entire-check",
        "config": _config_dict(cfg),
        "min_det": scan.min_det,
        "argmin_t": scan.argmin_t,
        "scanned_interval": list(scan.scanned_interval),
        "periodic": scan.periodic,
        "verdict": scan.verdict,
    }
    _write_json(out_dir / "entire_check.json", report)
    _say(cfg, f"entire-check: min det {scan.min_det:.6g}, verdict {scan.verdict}")
    return EXIT_OK if scan.verdict == entire.CERTIFIED else EXIT_POSITIVITY


def _run_integrate(cfg: JobConfig, out_dir: Path) -> int:
    spec, b = _build_pair(cfg)
    if cfg.rhs not in ("euclidean", "lorentzian"):
        raise cfg.anchored("rhs", f"must be euclidean or lorentzian, got {cfg.rhs!r}")
    if cfg.rhs == "euclidean":
        g = geodesic.closed_form_build(spec, b)
        start = geodesic.closed_form_eval(g, 0.0)
        z0, zd0 = start.z, start.zd
        reference = lambda t: geodesic.closed_form_eval(g, t).z
    else:
        if np.any(b != 0.0):
            raise cfg.anchored(
                "b", "the Minkowski-base closed form is only available for b = 0"
            )
        start = lorentz.tanh_family_eval(spec, 0.0)
        z0, zd0 = start.z, start.zd
        reference = lambda t: lorentz.tanh_family_eval(spec, t).z

    run = ode.integrate(z0, zd0, cfg.t_end, cfg.step, cfg.rhs)
    max_err = None
    if run.status == ode.COMPLETED:
        max_err = 0.0
        for t, z, _ in run.samples[:: max(1, len(run.samples) // 256)]:
            try:
                max_err = max(max_err, float(np.max(np.abs(z - reference(t)))))
            except geodesic.ChartBreakdownError:
                max_err = None
                break
    report = {
        "schema_version": SCHEMA_VERSION,
        "mode": "integrate",
        "config": _config_dict(cfg),
        "status": run.status,
        "stop_time": run.stop_time,
        "steps": len(run.samples) - 1,
        "final_t": run.final[0],
        "final_slope_norm": float(np.linalg.norm(run.final[1])),
        "max_closed_form_error": max_err,
    }
    _write_json(out_dir / "integrate.json", report)
    _say(cfg, f"integrate: status {run.status} after {len(run.samples) - 1} steps")
    if run.status == ode.BLOW_UP:
        return EXIT_BLOW_UP
    if run.status == ode.CHART_BREAKDOWN:
        return EXIT_CHART_BREAKDOWN
    return EXIT_OK


def _run_export(cfg: JobConfig, out_dir: Path) -> int:
    spec, b = _build_pair(cfg)
    g = geodesic.closed_form_build(spec, b)
    nm1, m = spec.n - 1, spec.m
    s = cfg.samples
    if s < 2:
        raise cfg.anchored("samples", f"need at least 2 samples per axis, got {s}")
    box_lo, box_hi = cfg.box
    t_lo, t_hi = cfg.t_range
    axes = [np.linspace(box_lo, box_hi, s) for _ in range(nm1)] + [
        np.linspace(t_lo, t_hi, s)
    ]
    slopes = [geodesic.closed_form_eval(g, float(t)).z for t in axes[-1]]

    header = (
        ",".join(f"x{i + 1}" for i in range(nm1))
        + ",t,"
        + ",".join(f"y{a + 1}" for a in range(m))
    )
    lines = [header]
    vertices = []
    idx = np.zeros(nm1 + 1, dtype=int)
    total = s ** (nm1 + 1)
    for flat in range(total):
        rem = flat
        for axis in range(nm1, -1, -1):  # row-major: t varies fastest
            idx[axis] = rem % s
            rem //= s
        x = np.array([axes[i][idx[i]] for i in range(nm1)])
        t = float(axes[-1][idx[-1]])
        y = slopes[idx[-1]].T @ x
        coords = np.concatenate([x, [t], y])
        lines.append(",".join(f"{v:.17g}" for v in coords))
        vertices.append(coords)

    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / "points.csv"
    csv_path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
    written = [str(csv_path)]

    if cfg.projection is not None:
        ambient = nm1 + 1 + m
        for i in cfg.projection:
            if not 0 <= i < ambient:
                raise cfg.anchored(
                    "projection", f"index {i} outside ambient range 0..{ambient - 1}"
                )
        obj_lines = []
        for coords in vertices:
            a, bb, c = (coords[i] for i in cfg.projection)
            obj_lines.append(f"v {a:.17g} {bb:.17g} {c:.17g}")
        if cfg.faces:
            if spec.n != 3:
                raise cfg.anchored("faces", "quad faces are defined for n = 3 only")
            # one quad sheet per x1 slice, over the (x2, t) grid
            for i1 in range(s):
                for i2 in range(s - 1):
                    for it in range(s - 1):
                        v00 = (i1 * s + i2) * s + it + 1
                        v01 = v00 + 1
                        v10 = v00 + s
                        v11 = v10 + 1
                        obj_lines.append(f"f {v00} {v10} {v11} {v01}")
        obj_path = out_dir / "points.obj"
        obj_path.write_text("\n".join(obj_lines) + "\n", encoding="utf-8", newline="\n")
        written.append(str(obj_path))

    _say(cfg, f"exported {total} vertices -> {', '.join(written)}")
    return EXIT_OK


_HANDLERS = {
    "example": _run_example,
    "solve": _run_solve,
    "verify": _run_verify,
    "entire-check": _run_entire_check,
    "integrate": _run_integrate,
    "export": _run_export,
}


def run(cfg: JobConfig) -> int:
    """Execute a job; returns the process exit code."""
    if cfg.mode not in MODES:
        raise cfg.anchored("mode", f"unknown mode {cfg.mode!r}; expected one of {MODES}")
    out_dir = Path(cfg.out)
    try:
        return _HANDLERS[cfg.mode](cfg, out_dir)
    except geodesic.ChartBreakdownError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CHART_BREAKDOWN
    except lorentz.SpacelikeBreakdownError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CHART_BREAKDOWN


# ---------------------------------------------------------------------------
# argument parsing


def _parse_float_pair(text: str, flag: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise ConfigError(f"<flags>: {flag}: expected 'lo,hi', got {text!r}")
    return float(parts[0]), float(parts[1])


def _parse_json_flag(text: str, flag: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"<flags>: {flag}: invalid JSON ({exc})") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="grassmin",
        description="Closed-form minimal graphs from evolving planes: "
        "build, certify, verify, integrate, export.",
    )
    parser.add_argument("--config", help="JSON job config (overrides mode flags)")
    parser.add_argument("--out", default=None, help="output directory (default: out)")
    parser.add_argument("--seed", type=int, default=None, help="seed for random sampling")
    parser.add_argument("--quiet", action="store_true", help="suppress stdout chatter")
    sub = parser.add_subparsers(dest="mode")

    def output_flags(p):
        # SUPPRESS keeps subparser defaults from clobbering values parsed
        # before the subcommand.
        p.add_argument("--out", default=argparse.SUPPRESS)
        p.add_argument("--seed", type=int, default=argparse.SUPPRESS)
        p.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS)

    def common(p):
        output_flags(p)
        p.add_argument("--n", type=int, default=0)
        p.add_argument("--m", type=int, default=0)
        p.add_argument("--lambdas", help="comma list, e.g. '0.5,0.5'")
        p.add_argument(
            "--rational-lambdas",
            help="JSON integer pairs, e.g. '[[1,2],[1,2]]' for 1/2,1/2",
        )
        p.add_argument("--blocks", help="JSON block recipe, e.g. '[[0.5,[[0,1]]]]'")
        p.add_argument("--b", help="JSON row-major matrix, e.g. '[[0,1],[-1,0]]'")
        p.add_argument("--t-range", help="'lo,hi'")
        p.add_argument("--grid", type=int)

    p = sub.add_parser("example", help="emit the two worked instances")
    output_flags(p)
    p.add_argument("--which", choices=("rotation", "tan", "both"), default="rotation")

    p = sub.add_parser("solve", help="closed form sampled over a t grid")
    common(p)

    p = sub.add_parser("verify", help="residual and frame reports")
    common(p)
    p.add_argument("--points", type=int, help="random verification points")
    p.add_argument("--box", help="'lo,hi' spatial sampling box")

    p = sub.add_parser("entire-check", help="positivity certification")
    common(p)

    p = sub.add_parser("integrate", help="fixed-step RK4 run")
    common(p)
    p.add_argument("--rhs", choices=("euclidean", "lorentzian"), default="euclidean")
    p.add_argument("--step", type=float, default=1e-3)
    p.add_argument("--t-end", type=float, default=_TWO_PI)

    p = sub.add_parser("export", help="CSV point cloud and optional OBJ")
    common(p)
    p.add_argument("--box", help="'lo,hi' spatial box")
    p.add_argument("--samples", type=int, help="grid samples per axis")
    p.add_argument("--projection", help="3 ambient coordinate indices, e.g. '0,1,3'")
    p.add_argument("--faces", action="store_true", help="add quad faces (n = 3)")

    return parser


def _config_from_args(args) -> JobConfig:
    if args.config:
        cfg = load_config(args.config)
    else:
        if not args.mode:
            raise ConfigError("<flags>: mode: give a subcommand or --config")
        cfg = JobConfig(mode=args.mode)
        if args.mode != "example":
            if args.lambdas:
                cfg.lambdas = tuple(float(v) for v in args.lambdas.split(","))
            if getattr(args, "rational_lambdas", None):
                cfg.rational_lambdas = tuple(
                    (int(p), int(q))
                    for p, q in _parse_json_flag(args.rational_lambdas, "--rational-lambdas")
                )
            if getattr(args, "blocks", None):
                cfg.blocks = tuple(
                    (float(lam), tuple((float(a), float(b)) for a, b in pairs))
                    for lam, pairs in _parse_json_flag(args.blocks, "--blocks")
                )
            if getattr(args, "b", None):
                cfg.b = _parse_json_flag(args.b, "--b")
            if getattr(args, "t_range", None):
                cfg.t_range = _parse_float_pair(args.t_range, "--t-range")
            for key in ("n", "m", "grid", "points", "samples", "step", "rhs", "which", "faces"):
                val = getattr(args, key, None)
                if val not in (None, 0):
                    setattr(cfg, key, val)
            if getattr(args, "t_end", None) is not None:
                cfg.t_end = args.t_end
            if getattr(args, "box", None):
                cfg.box = _parse_float_pair(args.box, "--box")
            if getattr(args, "projection", None):
                idx = tuple(int(v) for v in args.projection.split(","))
                if len(idx) != 3:
                    raise ConfigError("<flags>: --projection: need 3 indices")
                cfg.projection = idx
        else:
            cfg.which = args.which
    if args.out:
        cfg.out = args.out
    if args.seed is not None:
        cfg.seed = args.seed
    if args.quiet:
        cfg.quiet = True
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _config_from_args(args)
        return run(cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
