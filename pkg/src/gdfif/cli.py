"""Config-driven command line: validate, run, eval, and render subcommands.

Configs are YAML (schema documented in the README). Exit codes: 0 success,
1 validation violations, 2 structural or parse errors, 3 solver
non-convergence. All emitted artifacts are deterministic, so running the
same config twice produces byte-identical files.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import os
import sys
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import yaml

from .attractor import chaos_game, hausdorff_distance, iterate_attractor
from .funcspace import ConvergenceError, evaluate_exact, fixed_point, interpolation_residual
from .maps import build_system
from .model import CONDITION3_MODES, STRICT_MODE, DataSet, WiringPlan, validate
from .render import PlotSpec, export_csv, render_pgm, render_svg

OUTDIR_ENV = "GDFIF_OUTDIR"
OUTPUT_KEYS = ("csv", "cloud_csv", "chaos_csv", "svg", "pgm", "summary")


class ConfigError(Exception):
    """Unreadable, unparsable, or structurally invalid configuration."""


@dataclass(frozen=True)
class ProjectConfig:
    name: str
    datasets: tuple[DataSet, ...]
    plan: WiringPlan
    resolution: int = 64
    tol: float = 1e-9
    max_iters: int = 200
    generations: int = 12
    dedup_tol: float = 1e-3
    chaos_points: int = 0
    burn_in: int = 100
    seed: int = 7
    condition3_mode: str = STRICT_MODE
    outputs: tuple[tuple[str, str], ...] = ()
    outdir: str | None = None

    def output_path(self, key: str) -> str | None:
        for k, v in self.outputs:
            if k == key:
                return v
        return None


def bundled_config_path(name: str) -> Path | None:
    """Path of a config shipped with the package, or None."""
    candidate = resources.files("gdfif") / "configs" / f"{name}.yaml"
    if candidate.is_file():
        return Path(os.fspath(candidate))
    return None


def resolve_config_arg(arg: str) -> Path:
    """Treat the argument as a path first, then as a bundled config name."""
    path = Path(arg)
    if path.is_file():
        return path
    bundled = bundled_config_path(arg)
    if bundled is not None:
        return bundled
    raise ConfigError(f"no config file at {arg!r} and no bundled config of that name")


def _number(value, what: str) -> float:
    """Accept YAML numbers plus "p/q" fraction strings (exact float division)."""
    if isinstance(value, bool):
        raise ConfigError(f"{what}: expected a number, got a boolean")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        text = value.strip()
        if "/" in text:
            num, _, den = text.partition("/")
            try:
                return float(num) / float(den)
            except (ValueError, ZeroDivisionError) as exc:
                raise ConfigError(f"{what}: bad fraction {value!r} ({exc})") from None
        try:
            return float(text)
        except ValueError:
            raise ConfigError(f"{what}: cannot parse number {value!r}") from None
    raise ConfigError(f"{what}: expected a number, got {type(value).__name__}")


def _integer(value, what: str, minimum: int) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{what}: expected an integer, got {value!r}")
    if value < minimum:
        raise ConfigError(f"{what}: {value} is below the minimum {minimum}")
    return value


def _section(raw: dict, key: str) -> dict:
    section = raw.get(key) or {}
    if not isinstance(section, dict):
        raise ConfigError(f"section {key!r} must be a mapping")
    return section


def read_points_csv(path) -> list[tuple[int, float, float]]:
    """Read exported samples back: `vertex,x,y` rows (header optional).

    Two-column `x,y` files are accepted too and get vertex 1. Together with
    the 17-significant-digit export format this round-trips floats exactly.
    """
    rows: list[tuple[int, float, float]] = []
    try:
        with open(path, newline="") as fh:
            for lineno, rec in enumerate(csv.reader(fh), start=1):
                if not rec:
                    continue
                if lineno == 1 and not _is_number(rec[-1]):
                    continue  # header row
                try:
                    if len(rec) == 3:
                        rows.append((int(rec[0]), float(rec[1]), float(rec[2])))
                    elif len(rec) == 2:
                        rows.append((1, float(rec[0]), float(rec[1])))
                    else:
                        raise ValueError(f"{len(rec)} columns")
                except ValueError as exc:
                    raise ConfigError(f"{path}: bad row {lineno}: {exc}") from None
    except OSError as exc:
        raise ConfigError(f"cannot read data file {path}: {exc}") from None
    if not rows:
        raise ConfigError(f"{path}: no data rows")
    return rows


def _is_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def _parse_datasets(raw, base_dir: Path) -> tuple[DataSet, ...]:
    if not isinstance(raw, list) or not raw:
        raise ConfigError("'datasets' must be a nonempty list, one entry per vertex")
    datasets = []
    for k, entry in enumerate(raw, start=1):
        if not isinstance(entry, dict) or len(entry.keys() & {"points", "csv"}) != 1:
            raise ConfigError(f"dataset {k}: give exactly one of 'points' or 'csv'")
        if "points" in entry:
            pts = entry["points"]
            if not isinstance(pts, list) or not pts:
                raise ConfigError(f"dataset {k}: 'points' must be a nonempty list of [x, y]")
            parsed = []
            for j, pair in enumerate(pts):
                if not isinstance(pair, list) or len(pair) != 2:
                    raise ConfigError(f"dataset {k}: point {j} must be a [x, y] pair")
                parsed.append((
                    _number(pair[0], f"dataset {k} point {j} x"),
                    _number(pair[1], f"dataset {k} point {j} y"),
                ))
            datasets.append(DataSet(tuple(parsed)))
        else:
            rows = read_points_csv(base_dir / str(entry["csv"]))
            datasets.append(DataSet(tuple((x, y) for _, x, y in rows)))
    return tuple(datasets)


def _parse_wiring(raw) -> WiringPlan:
    if not isinstance(raw, list) or not raw:
        raise ConfigError("'wiring' must be a nonempty list, one entry per vertex")
    per_vertex = []
    for k, entry in enumerate(raw, start=1):
        if not isinstance(entry, dict) or len(entry.keys() & {"intervals", "blocks"}) != 1:
            raise ConfigError(f"wiring {k}: give exactly one of 'intervals' or 'blocks'")
        pairs: list[tuple[int, float]] = []
        if "intervals" in entry:
            items = entry["intervals"]
            if not isinstance(items, list) or not items:
                raise ConfigError(f"wiring {k}: 'intervals' must be a nonempty list")
            for i, item in enumerate(items, start=1):
                if not isinstance(item, dict):
                    raise ConfigError(f"wiring {k} interval {i}: expected a mapping")
                pairs.append((
                    _integer(item.get("source"), f"wiring {k} interval {i} source", 1),
                    _number(item.get("d"), f"wiring {k} interval {i} d"),
                ))
        else:
            items = entry["blocks"]
            if not isinstance(items, list) or not items:
                raise ConfigError(f"wiring {k}: 'blocks' must be a nonempty list")
            for b, item in enumerate(items, start=1):
                if not isinstance(item, dict):
                    raise ConfigError(f"wiring {k} block {b}: expected a mapping")
                count = _integer(item.get("count"), f"wiring {k} block {b} count", 1)
                source = _integer(item.get("source"), f"wiring {k} block {b} source", 1)
                d = _number(item.get("d"), f"wiring {k} block {b} d")
                pairs.extend([(source, d)] * count)
        per_vertex.append(pairs)
    return WiringPlan.from_pairs(per_vertex)


def load_config(path) -> ProjectConfig:
    """Parse and structurally check a YAML config; see the README for the schema.

    Raises ConfigError with line and column for parse errors, and for missing
    files, unknown keys, bad types, or a dataset/wiring count mismatch.
    Mathematical violations are left to `validate`.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f" at line {mark.line + 1}, column {mark.column + 1}" if mark else ""
        problem = getattr(exc, "problem", None) or str(exc)
        raise ConfigError(f"parse error in {path}{where}: {problem}") from None
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: top level must be a mapping")

    known = {"name", "datasets", "wiring", "solver", "attractor",
             "condition3_mode", "outputs", "outdir"}
    unknown = sorted(set(raw) - known)
    if unknown:
        raise ConfigError(f"{path}: unknown keys {unknown}; known keys are {sorted(known)}")

    datasets = _parse_datasets(raw.get("datasets"), path.parent)
    plan = _parse_wiring(raw.get("wiring"))
    if plan.n != len(datasets):
        raise ConfigError(
            f"{path}: {len(datasets)} datasets but wiring for {plan.n} vertices"
        )

    solver = _section(raw, "solver")
    attractor = _section(raw, "attractor")
    for section_name, section, allowed in (
        ("solver", solver, {"resolution", "tol", "max_iters"}),
        ("attractor", attractor,
         {"generations", "dedup_tol", "chaos_points", "burn_in", "seed"}),
    ):
        bad = sorted(set(section) - allowed)
        if bad:
            raise ConfigError(f"{path}: unknown {section_name} keys {bad}")

    mode = raw.get("condition3_mode", STRICT_MODE)
    if mode not in CONDITION3_MODES:
        raise ConfigError(
            f"{path}: condition3_mode must be one of {list(CONDITION3_MODES)}, got {mode!r}"
        )

    outputs_raw = raw.get("outputs") or {}
    if not isinstance(outputs_raw, dict):
        raise ConfigError(f"{path}: 'outputs' must be a mapping")
    bad = sorted(set(outputs_raw) - set(OUTPUT_KEYS))
    if bad:
        raise ConfigError(f"{path}: unknown output keys {bad}; known keys are {list(OUTPUT_KEYS)}")
    outputs = tuple((k, str(outputs_raw[k])) for k in OUTPUT_KEYS if k in outputs_raw)

    tol = _number(solver.get("tol", 1e-9), "solver.tol")
    if tol <= 0:
        raise ConfigError("solver.tol must be positive")
    dedup_tol = _number(attractor.get("dedup_tol", 1e-3), "attractor.dedup_tol")
    if dedup_tol < 0:
        raise ConfigError("attractor.dedup_tol must be nonnegative")

    return ProjectConfig(
        name=str(raw.get("name", path.stem)),
        datasets=datasets,
        plan=plan,
        resolution=_integer(solver.get("resolution", 64), "solver.resolution", 2),
        tol=tol,
        max_iters=_integer(solver.get("max_iters", 200), "solver.max_iters", 1),
        generations=_integer(attractor.get("generations", 12), "attractor.generations", 1),
        dedup_tol=dedup_tol,
        chaos_points=_integer(attractor.get("chaos_points", 0), "attractor.chaos_points", 0),
        burn_in=_integer(attractor.get("burn_in", 100), "attractor.burn_in", 0),
        seed=_integer(attractor.get("seed", 7), "attractor.seed", 0),
        condition3_mode=str(mode),
        outputs=outputs,
        outdir=str(raw["outdir"]) if "outdir" in raw else None,
    )


def _report_dict(report) -> dict:
    return {
        "ok": report.ok,
        "strongly_connected": report.strongly_connected,
        "condition3_mode": report.condition3_mode,
        "violations": [
            {"code": v.code, "message": v.message, "indices": list(v.indices)}
            for v in report.violations
        ],
    }


def _emit_json(obj, stream=None) -> str:
    text = json.dumps(obj, sort_keys=True, indent=2)
    print(text, file=stream or sys.stdout)
    return text


def cmd_validate(cfg: ProjectConfig, outdir: Path, args) -> int:
    report = validate(cfg.datasets, cfg.plan, cfg.condition3_mode)
    _emit_json(_report_dict(report))
    return 0 if report.ok else 1


def _solve(cfg: ProjectConfig):
    system = build_system(cfg.datasets, cfg.plan, cfg.condition3_mode)
    result = fixed_point(system, cfg.resolution, cfg.tol, cfg.max_iters)
    clouds = iterate_attractor(system, cfg.generations, cfg.dedup_tol)
    chaos = None
    if cfg.chaos_points > 0:
        chaos = chaos_game(system, cfg.chaos_points, cfg.burn_in, cfg.seed)
    return system, result, clouds, chaos


def _emit_artifacts(cfg: ProjectConfig, outdir: Path, system, result, clouds, chaos,
                    keys) -> None:
    spec = PlotSpec()
    for key in keys:
        rel = cfg.output_path(key)
        if rel is None:
            continue
        target = outdir / rel
        target.parent.mkdir(parents=True, exist_ok=True)
        if key == "csv":
            export_csv(target, family=result.family)
        elif key == "cloud_csv":
            export_csv(target, clouds=clouds)
        elif key == "chaos_csv" and chaos is not None:
            export_csv(target, clouds=chaos)
        elif key == "svg":
            render_svg(target, spec, datasets=cfg.datasets, family=result.family,
                       clouds=clouds)
        elif key == "pgm":
            render_pgm(target, spec, clouds=clouds)


def _summary(cfg: ProjectConfig, system, result, clouds) -> dict:
    per_vertex = []
    worst_h = 0.0
    for alpha in range(1, system.n + 1):
        fn = result.family.get(alpha)
        h = hausdorff_distance(clouds[alpha - 1].points, fn.as_points())
        worst_h = max(worst_h, h)
        ds = system.dataset(alpha)
        residual = float(max(abs(fn.evaluate(x) - F) for x, F in ds.points))
        per_vertex.append({
            "vertex": alpha,
            "knots": len(ds.points),
            "samples": int(fn.grid.size),
            "cloud_points": len(clouds[alpha - 1]),
            "hausdorff": h,
            "interpolation_residual": residual,
        })
    return {
        "name": cfg.name,
        "r": system.r,
        "iterations": result.iterations,
        "final_delta": result.final_delta,
        "error_bound": result.error_bound,
        "interpolation_residual": interpolation_residual(system, result.family),
        "hausdorff": worst_h,
        "per_vertex": per_vertex,
    }


def cmd_run(cfg: ProjectConfig, outdir: Path, args) -> int:
    report = validate(cfg.datasets, cfg.plan, cfg.condition3_mode)
    if not report.ok:
        _emit_json(_report_dict(report))
        return 1
    system, result, clouds, chaos = _solve(cfg)
    _emit_artifacts(cfg, outdir, system, result, clouds, chaos,
                    ("csv", "cloud_csv", "chaos_csv", "svg", "pgm"))
    summary = _summary(cfg, system, result, clouds)
    text = json.dumps(summary, sort_keys=True, indent=2)
    rel = cfg.output_path("summary")
    if rel is not None:
        target = outdir / rel
        target.parent.mkdir(parents=True, exist_ok=True)
        with open(target, "w", newline="\n") as fh:
            fh.write(text)
            fh.write("\n")
    print(text)
    return 0


def cmd_render(cfg: ProjectConfig, outdir: Path, args) -> int:
    report = validate(cfg.datasets, cfg.plan, cfg.condition3_mode)
    if not report.ok:
        _emit_json(_report_dict(report))
        return 1
    system, result, clouds, chaos = _solve(cfg)
    _emit_artifacts(cfg, outdir, system, result, clouds, chaos,
                    ("csv", "cloud_csv", "chaos_csv", "svg", "pgm"))
    return 0


def cmd_eval(cfg: ProjectConfig, outdir: Path, args) -> int:
    report = validate(cfg.datasets, cfg.plan, cfg.condition3_mode)
    if not report.ok:
        _emit_json(_report_dict(report))
        return 1
    system = build_system(cfg.datasets, cfg.plan, cfg.condition3_mode)
    try:
        value = evaluate_exact(system, args.vertex, args.x, args.depth)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    _emit_json({"vertex": args.vertex, "x": args.x, "depth": args.depth, "value": value})
    return 0


def _apply_overrides(cfg: ProjectConfig, args) -> ProjectConfig:
    changes = {}
    for field in ("resolution", "tol", "max_iters", "generations", "dedup_tol",
                  "chaos_points", "burn_in", "seed", "condition3_mode"):
        value = getattr(args, field, None)
        if value is not None:
            changes[field] = value
    return dataclasses.replace(cfg, **changes) if changes else cfg


def _resolve_outdir(cfg: ProjectConfig, args) -> Path:
    if getattr(args, "outdir", None):
        chosen = args.outdir
    elif os.environ.get(OUTDIR_ENV):
        chosen = os.environ[OUTDIR_ENV]
    elif cfg.outdir:
        chosen = cfg.outdir
    else:
        chosen = "."
    outdir = Path(chosen)
    outdir.mkdir(parents=True, exist_ok=True)
    return outdir


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gdfif",
        description="Graph-directed fractal interpolation pipeline",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("config", help="config file path or bundled config name")
    common.add_argument("--outdir", help=f"output directory (overrides ${OUTDIR_ENV})")
    common.add_argument("--resolution", type=int)
    common.add_argument("--tol", type=float)
    common.add_argument("--max-iters", dest="max_iters", type=int)
    common.add_argument("--generations", type=int)
    common.add_argument("--dedup-tol", dest="dedup_tol", type=float)
    common.add_argument("--chaos-points", dest="chaos_points", type=int)
    common.add_argument("--burn-in", dest="burn_in", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--condition3-mode", dest="condition3_mode",
                        choices=CONDITION3_MODES)

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", parents=[common],
                   help="check the construction hypotheses").set_defaults(handler=cmd_validate)
    sub.add_parser("run", parents=[common],
                   help="solve, iterate the attractor, emit artifacts and a summary"
                   ).set_defaults(handler=cmd_run)
    p_eval = sub.add_parser("eval", parents=[common],
                            help="evaluate the interpolant at one abscissa")
    p_eval.add_argument("--vertex", type=int, default=1)
    p_eval.add_argument("--x", type=float, required=True)
    p_eval.add_argument("--depth", type=int, default=30)
    p_eval.set_defaults(handler=cmd_eval)
    sub.add_parser("render", parents=[common],
                   help="emit plot artifacts only").set_defaults(handler=cmd_render)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = load_config(resolve_config_arg(args.config))
        cfg = _apply_overrides(cfg, args)
        outdir = _resolve_outdir(cfg, args)
        return args.handler(cfg, outdir, args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        _emit_json({
            "error": "no-convergence",
            "iterations": exc.iterations,
            "final_delta": exc.final_delta,
            "tol": exc.tol,
        }, stream=sys.stderr)
        return 3


def entry():
    raise SystemExit(main())
