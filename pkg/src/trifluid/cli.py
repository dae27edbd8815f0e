"""Command-line front end: reproducible experiments over the library.

Usage: ``trifluid COMMAND [--config PATH] [--out DIR] [--seed N] [--quiet]``
with COMMAND one of ``tensions``, ``fermat``, ``cones``, ``energy``,
``minimize``, ``blowup``, ``monotonicity``, ``variation``, ``scan``.

Configuration is a flat text file, one ``key = value`` per line with ``#``
comments.  Constitutive constants use the keys ``sigma01 sigma02 sigma12``
(default 1), ``beta0..beta2``, ``rho0..rho2`` and ``g`` (default 0).
Geometry comes from exactly one of:

* ``grid = PATH``       — a label grid (binary ``.tfl`` or text ``.pgm``);
* ``polyline = PATH``   — an interface-set JSON file;
* ``cone = L:DEG,...``  — sector labels and openings in degrees;
* ``scenario = NAME``   — a built-in: ``disk_dirichlet``, ``twisted_cone``,
  ``vertical_split`` or ``disk_speck`` (sized by ``n``, default 256).

Every run writes ``run_config.txt`` (the resolved configuration including
the effective seed) into the output directory next to its results, and
identical configuration plus seed yields byte-identical outputs.  Exit
codes: 0 success, 2 validation error (bad config, missing file, violated
precondition), 3 numerical failure (non-convergence, failed quadrature).

The environment variables ``TFL_BACKEND`` (sweep kernel: ``numba`` or
``numpy``) and ``TFL_THREADS`` (worker cap for multi-restart estimates) are
honored by the underlying modules.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import gridmin, svg
from .cones import ConeConfig, Sector, classify_cone
from .fermat import (
    FermatWeights,
    NoInteriorMinimum,
    NonConvergence,
    fermat_solve,
    junction_angles,
)
from .geometry import QuadratureFailure
from .polyconfig import (
    PolyConfig,
    TestField,
    compute_monotonicity_trace,
    config_from_json,
    energy_FSWP,
    first_variation_residual,
    stationarity_battery,
)
from .tensions import EnergyParams, SurfaceTensions, alphas_from_sigmas, neumann_angles

COMMANDS = (
    "tensions",
    "fermat",
    "cones",
    "energy",
    "minimize",
    "blowup",
    "monotonicity",
    "variation",
    "scan",
)

_GEOMETRY_KEYS = ("grid", "polyline", "cone", "scenario")
_SCENARIOS = ("disk_dirichlet", "twisted_cone", "vertical_split", "disk_speck")

_NUMERICAL_ERRORS = (
    NonConvergence,
    QuadratureFailure,
    FloatingPointError,
    np.linalg.LinAlgError,
)


class ConfigError(ValueError):
    """A malformed or inconsistent experiment configuration."""


# -- config ----------------------------------------------------------------


def parse_config_text(text: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"config line {lineno}: expected 'key = value'")
        key, value = body.split("=", 1)
        key = key.strip()
        if not key:
            raise ConfigError(f"config line {lineno}: empty key")
        if key in out:
            raise ConfigError(f"config line {lineno}: duplicate key {key!r}")
        out[key] = value.strip()
    return out


_MISSING = object()


def _bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(t) for t in text.split(","))


def _point(text: str) -> tuple[float, float]:
    vals = _floats(text)
    if len(vals) != 2:
        raise ValueError(f"expected 'x,y', got {text!r}")
    return vals


class ExperimentConfig:
    """Typed access to the flat key-value configuration."""

    def __init__(self, raw: dict[str, str], base_dir: Path):
        self.raw = dict(raw)
        self.base_dir = base_dir
        # "seed" is owned by the runner: always recorded in run_config.txt,
        # read by the commands that draw random numbers, legal everywhere.
        self.used: set[str] = {"seed"}

    def get(self, key: str, cast=str, default=_MISSING):
        if key not in self.raw:
            if default is _MISSING:
                raise ConfigError(f"missing required config key {key!r}")
            return default
        self.used.add(key)
        text = self.raw[key]
        try:
            return cast(text)
        except ConfigError:
            raise
        except Exception as exc:
            raise ConfigError(f"config key {key!r}: {exc}") from exc

    def path(self, key: str) -> Path:
        rel = self.get(key)
        p = (self.base_dir / rel).resolve() if not Path(rel).is_absolute() else Path(rel)
        if not p.is_file():
            raise ConfigError(f"config key {key!r}: file not found: {p}")
        return p

    def geometry_kind(self, allowed) -> str:
        present = [k for k in _GEOMETRY_KEYS if k in self.raw]
        if len(present) != 1:
            raise ConfigError(
                f"exactly one geometry source of {_GEOMETRY_KEYS} is required, "
                f"found {present or 'none'}"
            )
        kind = present[0]
        if kind not in allowed:
            raise ConfigError(
                f"geometry source {kind!r} is not usable here; allowed: {allowed}"
            )
        return kind

    def finish(self) -> None:
        unknown = sorted(set(self.raw) - self.used)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")

    def resolved_lines(self, command: str) -> str:
        lines = [f"command = {command}"]
        for key in sorted(self.raw):
            lines.append(f"{key} = {self.raw[key]}")
        return "\n".join(lines) + "\n"


def read_tensions(cfg: ExperimentConfig) -> SurfaceTensions:
    return SurfaceTensions(
        cfg.get("sigma01", float, 1.0),
        cfg.get("sigma02", float, 1.0),
        cfg.get("sigma12", float, 1.0),
    )


def read_energy_params(cfg: ExperimentConfig) -> EnergyParams:
    return EnergyParams(
        sigmas=read_tensions(cfg),
        betas=(
            cfg.get("beta0", float, 0.0),
            cfg.get("beta1", float, 0.0),
            cfg.get("beta2", float, 0.0),
        ),
        rhos=(
            cfg.get("rho0", float, 0.0),
            cfg.get("rho1", float, 0.0),
            cfg.get("rho2", float, 0.0),
        ),
        g=cfg.get("g", float, 0.0),
    )


def read_minimize_options(cfg: ExperimentConfig) -> gridmin.MinimizeOptions:
    schedule = gridmin.AnnealSchedule(
        t0=cfg.get("t0", float, None) or None,
        cooling=cfg.get("cooling", float, 0.95),
        sweeps=cfg.get("sweeps", int, 400),
        greedy_quiet_sweeps=cfg.get("greedy_quiet_sweeps", int, 3),
    )
    mode = cfg.get("mode", str, "D")
    targets = None
    if "target_volumes" in cfg.raw:
        targets = cfg.get("target_volumes", _floats)
        if len(targets) != 3:
            raise ConfigError("target_volumes needs three comma-separated areas")
    return gridmin.MinimizeOptions(
        mode=mode,
        target_volumes=targets,
        volume_penalty_C=cfg.get("volume_penalty_C", float, None) or None,
        schedule=schedule,
        crofton_directions=cfg.get("crofton_directions", int, 8),
        seed=cfg.get("seed", int, 0),
    )


# -- geometry loading -------------------------------------------------------


def load_grid(cfg: ExperimentConfig) -> gridmin.LabelGrid:
    return gridmin.LabelGrid.load(cfg.path("grid"))


def load_polyline(cfg: ExperimentConfig) -> PolyConfig:
    text = cfg.path("polyline").read_text(encoding="utf-8")
    return config_from_json(text, read_tensions(cfg))


def parse_cone(cfg: ExperimentConfig) -> ConeConfig:
    text = cfg.get("cone")
    theta = cfg.get("theta0", float, 0.0)
    sectors = []
    for part in text.split(","):
        try:
            label_text, opening_text = part.split(":")
            label = int(label_text)
            opening = math.radians(float(opening_text))
        except Exception as exc:
            raise ConfigError(
                f"cone sector {part!r}: expected 'label:opening_degrees'"
            ) from exc
        sectors.append(Sector(label, theta, theta + opening))
        theta += opening
    return ConeConfig(tuple(sectors))


def build_scenario(cfg: ExperimentConfig) -> gridmin.LabelGrid:
    name = cfg.get("scenario")
    n = cfg.get("n", int, 256)
    if name == "disk_dirichlet":
        return gridmin.make_disk_dirichlet_grid(
            n,
            read_tensions(cfg),
            theta0=cfg.get("theta0", float, 0.0),
            ring_cells=cfg.get("ring_cells", int, 3),
        )
    if name == "twisted_cone":
        twists = cfg.get("twists_deg", _floats, (30.0, -20.0, 10.0))
        if len(twists) != 3:
            raise ConfigError("twists_deg needs three comma-separated degrees")
        return gridmin.make_twisted_cone_grid(
            n,
            read_tensions(cfg),
            twists_deg=twists,
            theta0=cfg.get("theta0", float, 0.0),
            ring_cells=cfg.get("ring_cells", int, 3),
        )
    if name == "vertical_split":
        return gridmin.make_vertical_split_grid(n)
    if name == "disk_speck":
        return gridmin.make_disk_speck_grid(n, cfg.get("radius", float, 0.3))
    raise ConfigError(f"unknown scenario {name!r}; available: {_SCENARIOS}")


# -- output helpers ---------------------------------------------------------


def _to_plain(value):
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, np.ndarray):
        return [_to_plain(v) for v in value.tolist()]
    if isinstance(value, dict):
        return {k: _to_plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_to_plain(v) for v in value]
    return value


def write_json(path: Path, payload: dict) -> None:
    path.write_text(
        json.dumps(_to_plain(payload), indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )


def _cell(value) -> str:
    if isinstance(value, (np.floating, np.integer)):
        value = value.item()
    return repr(value) if isinstance(value, float) else str(value)


def write_csv(path: Path, header: str, rows) -> None:
    lines = [header]
    for row in rows:
        lines.append(",".join(_cell(v) for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="ascii")


def _junction_summary(grid, tensions, window: float):
    points = gridmin.detect_triple_points(grid)
    summary = {"triple_points": [list(tp) for tp in points], "junction": None}
    if len(points) == 1:
        try:
            rep = gridmin.junction_angle_extract(grid, points[0], window, tensions)
        except (gridmin.BallOutsideDomain, gridmin.NoJunctionInWindow,
                gridmin.MultipleJunctions):
            return summary
        summary["junction"] = {
            "location": list(rep.location),
            "angles_deg": list(rep.angles_deg),
            "residual_vs_neumann": rep.residual_vs_neumann,
        }
    return summary


# -- command handlers -------------------------------------------------------


def cmd_tensions(cfg: ExperimentConfig, out: Path, say) -> None:
    s = read_tensions(cfg)
    alphas = alphas_from_sigmas(s)
    gammas = neumann_angles(s)
    cfg.finish()
    payload = {
        "sigmas": [s.sigma01, s.sigma02, s.sigma12],
        "alphas": list(alphas.as_tuple()),
        "gammas_deg": list(gammas.degrees()),
    }
    write_json(out / "tensions.json", payload)
    say(
        "alphas = (%.6g, %.6g, %.6g); sector openings (deg) = (%.4f, %.4f, %.4f)"
        % (*alphas.as_tuple(), *gammas.degrees())
    )


def cmd_fermat(cfg: ExperimentConfig, out: Path, say) -> None:
    s = read_tensions(cfg)
    verts = np.array(
        [
            cfg.get("vertex0", _point),
            cfg.get("vertex1", _point),
            cfg.get("vertex2", _point),
        ]
    )
    weights = FermatWeights(
        cfg.get("zeta0", float, s.sigma12),
        cfg.get("zeta1", float, s.sigma02),
        cfg.get("zeta2", float, s.sigma01),
    )
    tol = cfg.get("tol", float, 1e-10)
    cfg.finish()
    try:
        sol = fermat_solve(verts, weights, tol=tol)
    except NoInteriorMinimum as exc:
        payload = {"absorbed_vertex": exc.vertex, "interior_minimum": False}
        write_json(out / "fermat.json", payload)
        say(f"no interior minimum: vertex {exc.vertex} absorbs the junction")
        return
    angles = junction_angles(sol.point, verts)
    payload = {
        "interior_minimum": True,
        "point": list(sol.point),
        "cost": sol.cost,
        "iterations": sol.iterations,
        "gradient_norm": sol.gradient_norm,
        "angles_deg": [math.degrees(a) for a in angles],
    }
    write_json(out / "fermat.json", payload)
    r = float(np.abs(verts).max()) * 1.2
    body_cfg = PolyConfig(
        domain_radius=max(r, 1e-6),
        tensions=s,
        interfaces=(),
    )
    doc = svg.render_polyconfig(body_cfg, markers=[tuple(sol.point)])
    # splice the triangle legs in as plain lines for context
    legs = "\n".join(
        '<line x1="%s" y1="%s" x2="%s" y2="%s" stroke="#3b6fb3" stroke-width="%s"/>'
        % (
            svg._fmt(sol.point[0]),
            svg._fmt(-sol.point[1]),
            svg._fmt(v[0]),
            svg._fmt(-v[1]),
            svg._fmt(r / 120.0),
        )
        for v in verts
    )
    (out / "fermat.svg").write_text(doc.replace("</svg>", legs + "\n</svg>"), "ascii")
    say(
        "junction at (%.8g, %.8g), cost %.10g, %d iterations"
        % (sol.point[0], sol.point[1], sol.cost, sol.iterations)
    )


def cmd_cones(cfg: ExperimentConfig, out: Path, say) -> None:
    cone = parse_cone(cfg)
    s = read_tensions(cfg)
    disk = cfg.get("disk_radius", float, 1.0)
    cfg.finish()
    report = classify_cone(cone, s, disk_radius=disk)
    payload = {
        "labels": list(cone.labels),
        "openings_deg": [math.degrees(sec.end - sec.start) for sec in cone.sectors],
        "improvable": report.improvable,
        "mechanism": report.mechanism.value if report.mechanism else None,
        "energy_delta": report.energy_delta,
        "sector_index": report.sector_index,
        "disk_radius": report.disk_radius,
    }
    write_json(out / "cones.json", payload)
    (out / "cones.svg").write_text(svg.render_cone(cone, disk), "ascii")
    if report.competitor is not None:
        from .polyconfig import config_to_json

        (out / "competitor.json").write_text(config_to_json(report.competitor), "ascii")
    if report.improvable:
        say(
            "improvable via %s in sector %s: delta = %.6g"
            % (payload["mechanism"], report.sector_index, report.energy_delta)
        )
    else:
        say("not improvable by either mechanism (cone is locally minimal)")


def cmd_energy(cfg: ExperimentConfig, out: Path, say) -> None:
    kind = cfg.geometry_kind(("grid", "polyline"))
    p = read_energy_params(cfg)
    if kind == "grid":
        grid = load_grid(cfg)
        opts = None
        if cfg.get("mode", str, "D") in ("V", "DV") and "target_volumes" in cfg.raw:
            opts = read_minimize_options(cfg)
        cfg.finish()
        br = gridmin.grid_energy(grid, p, opts)
        payload = {
            "surface": br.surface,
            "wetting": br.wetting,
            "gravity": br.gravity,
            "volume_penalty": br.volume_penalty,
            "total": br.total,
            "volumes": list(grid.fluid_volumes()),
        }
        (out / "energy.svg").write_text(svg.render_grid(grid), "ascii")
    else:
        poly = load_polyline(cfg)
        cfg.finish()
        br = energy_FSWP(poly, p)
        payload = {
            "surface": br.surface,
            "wetting": br.wetting,
            "gravity": br.gravity,
            "total": br.total,
        }
        (out / "energy.svg").write_text(svg.render_polyconfig(poly), "ascii")
    write_json(out / "energy.json", payload)
    say("total energy %.10g (surface %.10g)" % (payload["total"], payload["surface"]))


def cmd_minimize(cfg: ExperimentConfig, out: Path, say) -> None:
    kind = cfg.geometry_kind(("grid", "scenario"))
    grid = load_grid(cfg) if kind == "grid" else build_scenario(cfg)
    p = read_energy_params(cfg)
    opts = read_minimize_options(cfg)
    window = cfg.get("window", float, 0.45 * grid.extent)
    cfg.finish()

    result, trace = gridmin.minimize(grid, p, opts)
    result.save(out / "result.tfl")
    write_csv(
        out / "trace.csv",
        "sweep,temperature,energy,accepted",
        ((row.sweep, row.temperature, row.energy, row.accepted) for row in trace),
    )
    summary = {
        "mode": opts.mode,
        "seed": opts.seed,
        "sweeps_run": trace[-1].sweep,
        "initial_energy": trace[0].energy,
        "final_energy": trace[-1].energy,
        "final_volumes": list(result.fluid_volumes()),
    }
    summary.update(_junction_summary(result, p.sigmas, window))
    write_json(out / "minimize.json", summary)
    tps = [tuple(tp) for tp in summary["triple_points"]]
    (out / "minimize.svg").write_text(svg.render_grid(result, tps), "ascii")
    say(
        "energy %.8g -> %.8g over %d sweeps; %d triple point(s)"
        % (
            summary["initial_energy"],
            summary["final_energy"],
            summary["sweeps_run"],
            len(tps),
        )
    )
    if summary["junction"]:
        say(
            "junction angles (deg): (%.2f, %.2f, %.2f), residual %.2f"
            % (*summary["junction"]["angles_deg"], summary["junction"]["residual_vs_neumann"])
        )


def cmd_blowup(cfg: ExperimentConfig, out: Path, say) -> None:
    cfg.geometry_kind(("grid",))
    grid = load_grid(cfg)
    s = read_tensions(cfg)
    lam = cfg.get("lambda", float, 0.5)
    window_frac = cfg.get("window_frac", float, 0.45)
    center_text = cfg.get("center", str, "auto")
    if center_text == "auto":
        points = gridmin.detect_triple_points(grid)
        if len(points) != 1:
            raise ConfigError(
                f"center = auto needs exactly one triple point, found {len(points)}"
            )
        center = points[0]
    else:
        center = _point(center_text)
    cfg.finish()

    blown = gridmin.blowup_rescale(grid, center, lam)
    blown.save(out / "result.tfl")
    payload = {
        "center": list(center),
        "lambda": lam,
        "before": _junction_summary(grid, s, window_frac * grid.extent),
        "after": _junction_summary(blown, s, window_frac * blown.extent),
    }
    write_json(out / "blowup.json", payload)
    tps = [tuple(tp) for tp in payload["after"]["triple_points"]]
    (out / "blowup.svg").write_text(svg.render_grid(blown, tps), "ascii")
    before = payload["before"]["junction"]
    after = payload["after"]["junction"]
    if before and after:
        say(
            "residual vs target angles: %.3f deg -> %.3f deg at lambda %.3g"
            % (before["residual_vs_neumann"], after["residual_vs_neumann"], lam)
        )
    else:
        say("blow-up written; junction report unavailable at one of the scales")


def cmd_monotonicity(cfg: ExperimentConfig, out: Path, say) -> None:
    cfg.geometry_kind(("polyline",))
    poly = load_polyline(cfg)
    radii = np.array(cfg.get("radii", _floats, ()))
    if radii.size == 0:
        radii = np.linspace(0.1, 1.0, 10) * poly.domain_radius
    c_const = cfg.get("correction_c", float, 0.0)
    cfg.finish()
    trace = compute_monotonicity_trace(poly, radii, C=c_const)
    write_csv(
        out / "monotonicity.csv",
        "r,scaled_energy,gamma,fourth_power,correction",
        zip(
            (float(r) for r in trace.radii),
            (float(v) for v in trace.scaled_energy),
            (float(v) for v in trace.gamma),
            (float(v) for v in trace.fourth_power),
            (float(v) for v in trace.correction),
        ),
    )
    doc = svg.render_curves(
        trace.radii,
        [
            ("scaled_energy", trace.scaled_energy, "#3b6fb3"),
            ("gamma", trace.gamma, "#c23b3b"),
        ],
        "r",
        "value",
    )
    (out / "monotonicity.svg").write_text(doc, "ascii")
    say(
        "scaled energy spans [%.8g, %.8g] over %d radii"
        % (trace.scaled_energy.min(), trace.scaled_energy.max(), len(trace.radii))
    )


def cmd_variation(cfg: ExperimentConfig, out: Path, say) -> None:
    cfg.geometry_kind(("polyline",))
    poly = load_polyline(cfg)
    battery = cfg.get("battery", _bool, True)
    if battery:
        cfg.finish()
        residual = stationarity_battery(poly)
        payload = {"battery": True, "max_residual": residual}
    else:
        center = cfg.get("field_center", _point, (0.0, 0.0))
        radius = cfg.get("field_radius", float, 0.9 * poly.domain_radius)
        cfg.finish()
        field = TestField(center=np.array(center), radius=radius)
        residual = first_variation_residual(poly, field)
        payload = {
            "battery": False,
            "field_center": list(center),
            "field_radius": radius,
            "residual": residual,
        }
    write_json(out / "variation.json", payload)
    say("first-variation residual: %.6g" % residual)


def cmd_scan(cfg: ExperimentConfig, out: Path, say) -> None:
    cfg.geometry_kind(("grid",))
    grid = load_grid(cfg)
    eta = cfg.get("eta", float, 0.05)
    radii = cfg.get("radii", _floats, ())
    cfg.finish()
    violations = gridmin.elimination_scan(grid, eta, radii or None)
    write_csv(
        out / "scan.csv",
        "x,y,radius,fluid,area_fraction",
        (
            (v.center[0], v.center[1], v.radius, v.fluid, v.area_fraction)
            for v in violations
        ),
    )
    write_json(out / "scan.json", {"eta": eta, "violations": len(violations)})
    say(f"{len(violations)} elimination violation(s) at eta = {eta:g}")


_HANDLERS = {
    "tensions": cmd_tensions,
    "fermat": cmd_fermat,
    "cones": cmd_cones,
    "energy": cmd_energy,
    "minimize": cmd_minimize,
    "blowup": cmd_blowup,
    "monotonicity": cmd_monotonicity,
    "variation": cmd_variation,
    "scan": cmd_scan,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trifluid",
        description="Three-fluid energy experiments: junctions, cones, grids.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for name in COMMANDS:
        cmd = sub.add_parser(name, help=f"run the {name} experiment")
        cmd.add_argument("--config", help="flat key = value configuration file")
        cmd.add_argument("--out", default="trifluid-out", help="output directory")
        cmd.add_argument("--seed", type=int, help="override the config seed")
        cmd.add_argument("--quiet", action="store_true", help="suppress progress text")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)

    def say(message: str) -> None:
        if not args.quiet:
            print(message)

    try:
        if args.config:
            config_path = Path(args.config)
            if not config_path.is_file():
                raise ConfigError(f"config file not found: {config_path}")
            raw = parse_config_text(config_path.read_text(encoding="utf-8"))
            base_dir = config_path.parent
        else:
            raw = {}
            base_dir = Path.cwd()
        if args.seed is not None:
            raw["seed"] = str(args.seed)
        cfg = ExperimentConfig(raw, base_dir)

        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "run_config.txt").write_text(
            cfg.resolved_lines(args.command), encoding="utf-8"
        )
        _HANDLERS[args.command](cfg, out, say)
        return 0
    except _NUMERICAL_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
