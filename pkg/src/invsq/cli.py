"""Command-line front end: sweep orchestration and table emission.

Each subcommand resolves a RunConfig (JSON config file plus flag
overrides, flags win), runs the corresponding sweep, and writes one
table to stdout or --out.  CSV is the primary format; every file starts
with '#' metadata lines carrying the tool version and the full resolved
config so a run can be reproduced from its output alone.

Exit codes: 0 success, 2 configuration error, 3 solver/convergence
error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from .bound_states import find_spectrum, fit_tower
from .discretization import build_mesh, min_points
from .errors import ConfigurationError, DomainError, InvsqError
from .potential import PotentialParams
from .rg import (
    CountertermSchedule,
    beta_extremum,
    beta_function,
    coupling_h,
    pole_distance,
    vanishing_cutoffs,
)
from .scattering import solve_onshell
from .zero_energy import threshold_mesh, threshold_solution, zero_crossing_spacings

WORKERS_ENV = "INVSQ_WORKERS"

# Phase distance (in nu*ln(cutoff/lambda_star) units) below which a row
# is flagged pole-adjacent in rgflow output.
POLE_ADJACENT_WINDOW = 0.05


@dataclass
class RunConfig:
    """Resolved parameters of one CLI invocation."""

    nu: float = 1.0
    lambda_star: float = 1.0
    cutoff: float = 100.0
    cutoff_range: tuple[float, float, int] | None = None
    mesh_points: int = 256
    k_min: float | None = None
    h_range: tuple[float, float, int] = (-5.0, 5.0, 201)
    b_window: tuple[float, float] | None = None
    k_range: tuple[float, float, int] | None = None
    fmt: str = "csv"
    out: str | None = None
    unrenormalized: bool = False
    compare: bool = False
    workers: int = 1

    def validate(self) -> None:
        if self.nu <= 0:
            raise ConfigurationError(f"nu must be positive, got {self.nu}")
        if self.lambda_star <= 0:
            raise ConfigurationError(f"lambda-star must be positive, got {self.lambda_star}")
        if self.cutoff <= 0:
            raise ConfigurationError(f"cutoff must be positive, got {self.cutoff}")
        if self.k_min is not None and self.k_min <= 0:
            raise ConfigurationError(f"k-min must be positive, got {self.k_min}")
        if self.mesh_points < 16:
            raise ConfigurationError(f"mesh-points must be >= 16, got {self.mesh_points}")
        if self.fmt not in ("csv", "json"):
            raise ConfigurationError(f"format must be csv or json, got {self.fmt!r}")
        if self.workers < 1:
            raise ConfigurationError(f"workers must be >= 1, got {self.workers}")
        for name, rng in (("cutoff-range", self.cutoff_range), ("k-range", self.k_range)):
            if rng is not None:
                lo, hi, n = rng
                if not (0 < lo < hi) or n < 1:
                    raise ConfigurationError(f"{name} needs 0 < LO < HI and N >= 1, got {rng}")
        lo, hi, n = self.h_range
        if not (lo < hi) or n < 2:
            raise ConfigurationError(f"h-range needs LO < HI and N >= 2, got {self.h_range}")
        if self.b_window is not None and not (0 < self.b_window[0] < self.b_window[1]):
            raise ConfigurationError(f"b-window needs 0 < LO < HI, got {self.b_window}")

    def params(self) -> PotentialParams:
        return PotentialParams(nu=self.nu)

    def schedule(self) -> CountertermSchedule:
        return CountertermSchedule(lambda_star=self.lambda_star, params=self.params())

    def cutoffs(self) -> list[float]:
        if self.cutoff_range is None:
            return [self.cutoff]
        lo, hi, n = self.cutoff_range
        return list(np.geomspace(lo, hi, n))


def _parse_range(text: str, n_fields: int) -> tuple:
    parts = text.split(":")
    if len(parts) != n_fields:
        raise argparse.ArgumentTypeError(f"expected LO:HI{':N' * (n_fields - 2)}, got {text!r}")
    try:
        vals = [float(p) for p in parts]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc
    if n_fields == 3:
        return vals[0], vals[1], int(vals[2])
    return tuple(vals)


def _range3(text: str):
    return _parse_range(text, 3)


def _range2(text: str):
    return _parse_range(text, 2)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="invsq",
        description="Renormalization of the attractive 1/r^2 potential in momentum space")
    parser.add_argument("--version", action="version", version=f"invsq {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", metavar="FILE", help="JSON config file; flags override it")
        p.add_argument("--nu", type=float, help="coupling strength parameter (default 1)")
        p.add_argument("--lambda-star", type=float, dest="lambda_star",
                       help="RG scale fixing the counterterm phase (default 1)")
        p.add_argument("--cutoff", type=float, help="momentum cutoff (default 100)")
        p.add_argument("--cutoff-range", type=_range3, dest="cutoff_range", metavar="LO:HI:N",
                       help="log-spaced cutoff sweep")
        p.add_argument("--mesh-points", type=int, dest="mesh_points",
                       help="quadrature points (default 256)")
        p.add_argument("--k-min", type=float, dest="k_min",
                       help="infrared floor (default cutoff*1e-6)")
        p.add_argument("--format", dest="fmt", choices=("csv", "json"),
                       help="output format (default csv)")
        p.add_argument("--out", help="output path (default stdout)")
        p.add_argument("--unrenormalized", action="store_true", default=None,
                       help="force h = 0 instead of the running counterterm")
        p.add_argument("--workers", type=int,
                       help=f"sweep worker processes (default 1; env {WORKERS_ENV})")

    p = sub.add_parser("rgflow", help="running coupling H over a cutoff sweep")
    common(p)
    p = sub.add_parser("beta", help="beta function over an h grid")
    common(p)
    p.add_argument("--h-range", type=_range3, dest="h_range", metavar="LO:HI:N",
                   help="h grid (default -5:5:201)")
    p = sub.add_parser("spectrum", help="bound-state tower per cutoff")
    common(p)
    p.add_argument("--b-window", type=_range2, dest="b_window", metavar="LO:HI",
                   help="binding-energy window (default [1e3*k_min^2, 1e-2*cutoff^2])")
    p.add_argument("--compare", action="store_true", default=None,
                   help="emit both the renormalized and the h = 0 tower")
    p = sub.add_parser("phase", help="phase shifts over a k sweep")
    common(p)
    p.add_argument("--k-range", type=_range3, dest="k_range", metavar="LO:HI:N",
                   help="log-spaced k sweep (default spans the validity band)")
    p = sub.add_parser("xsec", help="total cross section over a k sweep")
    common(p)
    p.add_argument("--k-range", type=_range3, dest="k_range", metavar="LO:HI:N",
                   help="log-spaced k sweep (default spans the validity band)")
    p = sub.add_parser("zeroenergy", help="threshold solution and its phase")
    common(p)
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Config file values overlaid with explicitly passed flags."""
    cfg = RunConfig()
    if getattr(args, "config", None):
        try:
            with open(args.config) as fh:
                data = json.load(fh)
        except OSError as exc:
            raise ConfigurationError(f"cannot read config {args.config}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"config {args.config} is not valid JSON: {exc}") from exc
        for key, value in data.items():
            if not hasattr(cfg, key):
                raise ConfigurationError(f"unknown config key {key!r} in {args.config}")
            if key in ("cutoff_range", "h_range", "k_range", "b_window") and value is not None:
                value = tuple(value)
            setattr(cfg, key, value)
    for key in vars(cfg):
        flag = getattr(args, key, None)
        if flag is not None:
            setattr(cfg, key, flag)
    if getattr(args, "workers", None) is None and WORKERS_ENV in os.environ:
        try:
            cfg.workers = int(os.environ[WORKERS_ENV])
        except ValueError as exc:
            raise ConfigurationError(f"{WORKERS_ENV} must be an integer: {exc}") from exc
    cfg.validate()
    return cfg


def _metadata(cfg: RunConfig, command: str) -> dict:
    resolved = asdict(cfg)
    return {"tool": "invsq", "version": __version__, "command": command, "config": resolved}


def _format_value(v) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def emit(columns: list[str], rows: list[tuple], cfg: RunConfig, command: str,
         extra_meta: dict | None = None) -> None:
    meta = _metadata(cfg, command)
    if extra_meta:
        meta.update(extra_meta)
    if cfg.fmt == "json":
        payload = {"meta": meta,
                   "columns": columns,
                   "rows": [list(r) for r in rows]}
        text = json.dumps(payload, indent=2, sort_keys=True, default=float) + "\n"
    else:
        buf = io.StringIO()
        for key, value in meta.items():
            buf.write(f"# {key} = {json.dumps(value, sort_keys=True, default=float)}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_format_value(v) for v in row])
        text = buf.getvalue()
    if cfg.out is None:
        sys.stdout.write(text)
    else:
        with open(cfg.out, "w") as fh:
            fh.write(text)


def cmd_rgflow(cfg: RunConfig) -> None:
    sched = cfg.schedule()
    if cfg.cutoff_range is None:
        # Default sweep: two full periods centered on the configured cutoff.
        period = math.exp(math.pi / cfg.nu)
        cfg.cutoff_range = (cfg.cutoff / period, cfg.cutoff * period, 401)
    rows = []
    for lam in cfg.cutoffs():
        h = coupling_h(lam, sched)
        if h is None:
            continue  # pole window: marked by the row gap, never interpolated
        phase = (cfg.nu * math.log(lam / cfg.lambda_star)) % math.pi
        adjacent = pole_distance(lam, sched) < POLE_ADJACENT_WINDOW
        rows.append((lam, phase, h, adjacent))
    lo, hi, _ = cfg.cutoff_range
    n_lo = math.floor(cfg.nu * math.log(lo / cfg.lambda_star) / math.pi) - 1
    n_hi = math.ceil(cfg.nu * math.log(hi / cfg.lambda_star) / math.pi) + 1
    extra = {
        # Cutoffs where H actually vanishes (located numerically) next to
        # the naive period anchors lambda_star*e^{n*pi/nu}, where H = 1.
        # The two families are distinct; both are surfaced on purpose.
        "h_zero_cutoffs": [float(x) for x in vanishing_cutoffs(sched, n_lo, n_hi)],
        "period_anchor_cutoffs": [float(cfg.lambda_star * math.exp(n * math.pi / cfg.nu))
                                  for n in range(n_lo, n_hi + 1)],
    }
    emit(["cutoff", "phase_mod_pi", "h", "is_pole_adjacent"], rows, cfg, "rgflow", extra)


def cmd_beta(cfg: RunConfig) -> None:
    params = cfg.params()
    lo, hi, n = cfg.h_range
    h_max, beta_max = beta_extremum(params)
    rows = [(h, beta_function(h, params), False) for h in np.linspace(lo, hi, n)]
    rows.append((h_max, beta_max, True))
    rows.sort(key=lambda r: (r[0], not r[2]))
    emit(["h", "beta", "is_extremum"], rows, cfg, "beta")


def _spectrum_task(task: tuple) -> list[tuple]:
    cutoff, renormalized, cfg_dict = task
    cfg = RunConfig(**cfg_dict)
    params = cfg.params()
    mesh = build_mesh(cutoff, n_points=max(cfg.mesh_points, min_points(
        cutoff, cfg.k_min or cutoff * 1e-6, params)), k_min=cfg.k_min, params=params)
    window = cfg.b_window or (1e3 * mesh.k_min**2, 1e-2 * cutoff**2)
    h_source = cfg.schedule() if renormalized else 0.0
    spec = find_spectrum(window, h_source, cutoff, mesh, params)
    ratios = spec.ratios() + [float("nan")]
    rows = [(cutoff, renormalized, i, b, math.log(b), ratios[i],
             spec.regulator_dominated(b))
            for i, b in enumerate(spec.binding_energies)]
    return rows


def cmd_spectrum(cfg: RunConfig) -> None:
    modes = [not cfg.unrenormalized]
    if cfg.compare:
        modes = [True, False]
    tasks = [(lam, ren, asdict(cfg)) for lam in cfg.cutoffs() for ren in modes]
    chunks = _pmap(_spectrum_task, tasks, cfg.workers)
    rows = [r for chunk in chunks for r in chunk]
    rows.sort(key=lambda r: (r[0], not r[1], r[2]))
    fits = {}
    for lam, ren, _ in tasks:
        tower = [r[3] for r in rows if r[0] == lam and r[1] == ren]
        if len(tower) >= 3:
            fit = fit_tower(_SpectrumView(tuple(tower), lam))
            fits[f"fit cutoff={lam:.12g} renormalized={str(ren).lower()}"] = {
                "c1": fit.c1, "slope": fit.slope, "residual": fit.residual}
    emit(["cutoff", "renormalized", "n", "binding_energy", "ln_binding_energy",
          "ratio_to_next", "regulator_dominated"], rows, cfg, "spectrum", fits)


class _SpectrumView:
    """Just enough of a Spectrum for fit_tower on already-collected rows."""

    def __init__(self, binding_energies: tuple[float, ...], cutoff: float):
        self.binding_energies = binding_energies
        self.cutoff = cutoff


def _phase_task(task: tuple) -> tuple:
    k, cutoff, cfg_dict = task
    cfg = RunConfig(**cfg_dict)
    params = cfg.params()
    mesh = build_mesh(cutoff, n_points=cfg.mesh_points, k_min=cfg.k_min, params=params)
    h = 0.0 if cfg.unrenormalized else coupling_h(cutoff, cfg.schedule())
    if h is None:
        raise DomainError(f"cutoff {cutoff} sits on a coupling pole; perturb the cutoff")
    pt = solve_onshell(k, h, mesh, params)
    return (cutoff, k, pt.big_t.real, pt.big_t.imag, pt.delta_mod_pi, pt.cot_delta,
            pt.sigma_tot, pt.sigma_over_unitarity)


def _k_sweep(cfg: RunConfig) -> list[tuple]:
    if cfg.k_range is None:
        k_min = cfg.k_min if cfg.k_min is not None else min(cfg.cutoffs()) * 1e-6
        lo = 10.0 * k_min * 1.5
        hi = min(cfg.cutoffs()) * 0.5 / 1.5
        cfg.k_range = (lo, hi, 40)
    lo, hi, n = cfg.k_range
    ks = np.geomspace(lo, hi, n)
    tasks = [(float(k), lam, asdict(cfg)) for lam in cfg.cutoffs() for k in ks]
    rows = _pmap(_phase_task, tasks, cfg.workers)
    rows.sort(key=lambda r: (r[0], r[1]))
    return rows


def cmd_phase(cfg: RunConfig) -> None:
    rows = _k_sweep(cfg)
    emit(["cutoff", "k", "re_t", "im_t", "delta_mod_pi", "cot_delta",
          "sigma_tot", "sigma_over_unitarity"], rows, cfg, "phase")


def cmd_xsec(cfg: RunConfig) -> None:
    rows = [(r[0], r[1], r[6], r[7]) for r in _k_sweep(cfg)]
    emit(["cutoff", "k", "sigma_tot", "sigma_over_unitarity"], rows, cfg, "xsec")


def cmd_zeroenergy(cfg: RunConfig) -> None:
    params = cfg.params()
    h = 0.0 if cfg.unrenormalized else coupling_h(cfg.cutoff, cfg.schedule())
    if h is None:
        raise DomainError(f"cutoff {cfg.cutoff} sits on a coupling pole; perturb the cutoff")
    mesh = threshold_mesh(h, cfg.cutoff, params, n_points=cfg.mesh_points,
                          k_min_hint=cfg.k_min)
    sol = threshold_solution(h, mesh, params)
    p = mesh.nodes
    envelope = sol.amplitude * np.cos(params.nu * np.log(p) + sol.alpha)
    rows = [(float(pi), float(v), float(v * math.sqrt(pi)), float(env))
            for pi, v, env in zip(p, sol.values, envelope)]
    spacings = zero_crossing_spacings(sol)
    extra = {"alpha": sol.alpha, "fit_residual": sol.fit_residual,
             "amplitude": sol.amplitude, "k_min_used": mesh.k_min,
             "mean_crossing_spacing": float(np.mean(spacings)) if len(spacings) else None}
    emit(["p", "phi0", "phi0_scaled", "fitted_envelope"], rows, cfg, "zeroenergy", extra)


def _pmap(fn, tasks: list, workers: int) -> list:
    """Map over sweep tasks, optionally on a process pool; order preserved."""
    if workers <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks))


COMMANDS = {
    "rgflow": cmd_rgflow,
    "beta": cmd_beta,
    "spectrum": cmd_spectrum,
    "phase": cmd_phase,
    "xsec": cmd_xsec,
    "zeroenergy": cmd_zeroenergy,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        COMMANDS[args.command](cfg)
    except (ConfigurationError, DomainError) as exc:
        print(f"invsq: config error: {exc}", file=sys.stderr)
        return 2
    except InvsqError as exc:
        print(f"invsq: solver error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"invsq: i/o error: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
