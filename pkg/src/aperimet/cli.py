"""Command-line front end.

Every command writes into ``--out`` with fixed file names and a ``meta.txt``
recording the version, the configuration and any derived cutoffs.  Outputs
carry no timestamps, so reruns are byte-identical.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

from . import __version__
from .autocorr import eta_coefficients, empirical_autocorrelation, homometric
from .cutproject import density_estimate, generate_patch, genericity_check, patch_difference
from .diffraction import peak_list
from .errors import AperimetError
from .formats import (autocorr_csv, certificate_text, fmt, grid_csv, parse_window, patch_csv,
                      peaks_csv, write_window)
from .search import (minkowski_candidates, reconstruct_paper_pair, search_1d_pairs,
                     search_polyomino_pairs)
from .svg import covariogram_svg, emit_difference_plot, patch_svg, peaks_svg
from .window import congruent, covariogram_grid, difference_body, discrete_autocorrelation

COMMANDS = ("covariogram", "patch", "autocorr", "diffract", "homometry", "search", "reconstruct")


@dataclass
class RunConfig:
    command: str
    out: Path = Path(".")
    window: Path | None = None
    window2: Path | None = None
    radius: float = 20.0
    kmax: float = 3.0
    imin: float = 1e-3
    step: Fraction = Fraction(1, 4)
    threads: int = 1
    max_length: float = 4.0
    cells: int = 4
    box: tuple[int, int] = (4, 4)
    minkowski: tuple[int, int] | None = None
    points: int | None = None
    max_coord: int = 12
    allow_disconnected: bool = False
    derived: dict = field(default_factory=dict, repr=False)

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        for name in ("radius", "kmax", "imin", "step", "threads", "max_length", "cells", "max_coord"):
            if getattr(self, name) <= 0:
                raise ValueError(f"--{name.replace('_', '-')} must be positive")
        if min(self.box) <= 0:
            raise ValueError("--box dimensions must be positive")
        needs = {"covariogram": 1, "patch": 1, "autocorr": 1, "diffract": 1, "homometry": 2}
        if needs.get(self.command, 0) >= 1 and self.window is None:
            raise ValueError(f"{self.command} needs --window")
        if needs.get(self.command, 0) == 2 and self.window2 is None:
            raise ValueError(f"{self.command} needs --window2")


def _load(cfg: RunConfig, path):
    return parse_window(path, require_connected=not cfg.allow_disconnected)


def _write(cfg: RunConfig, name: str, text: str) -> None:
    (cfg.out / name).write_text(text)


def _meta(cfg: RunConfig, lines: list[str]) -> None:
    head = [f"aperimet {__version__}"]
    skip = {"derived", "out"}
    for k, v in asdict(cfg).items():
        if k in skip:
            continue
        head.append(f"config.{k} = {'' if v is None else v}")
    for k, v in cfg.derived.items():
        head.append(f"derived.{k} = {v}")
    _write(cfg, "meta.txt", "\n".join(head + lines) + "\n")


def _covariogram(cfg: RunConfig) -> list[str]:
    w = _load(cfg, cfg.window)
    grid = covariogram_grid(w, cfg.step)
    _write(cfg, "grid.csv", grid_csv(grid))
    _write(cfg, "covariogram.svg", covariogram_svg(grid, difference_body(w)))
    cfg.derived["grid_points"] = len(grid.xs) * len(grid.ys)
    return []


def _patch(cfg: RunConfig) -> list[str]:
    w = _load(cfg, cfg.window)
    patch = generate_patch(w, cfg.radius)
    _write(cfg, "patch.csv", patch_csv(patch))
    _write(cfg, "patch.svg", patch_svg(patch))
    cfg.derived["points"] = len(patch)
    cfg.derived["density"] = fmt(density_estimate(patch)) if len(patch) else "nan"
    cfg.derived["generic_bound_20"] = genericity_check(w, 20)
    if cfg.window2 is not None:
        other = generate_patch(_load(cfg, cfg.window2), cfg.radius)
        _write(cfg, "patch2.csv", patch_csv(other))
        _write(cfg, "difference.svg", emit_difference_plot(patch, other))
        cfg.derived["only_first"] = len(patch_difference(patch, other))
        cfg.derived["only_second"] = len(patch_difference(other, patch))
    return []


def _autocorr(cfg: RunConfig) -> list[str]:
    w = _load(cfg, cfg.window)
    patch = generate_patch(w, cfg.radius)
    emp = empirical_autocorrelation(patch, max_length=cfg.max_length)
    coeffs = eta_coefficients(w, sorted(emp.weights))
    _write(cfg, "autocorr.csv", autocorr_csv(coeffs, emp))
    cfg.derived["differences"] = len(coeffs)
    cfg.derived["max_deviation"] = fmt(max((abs(c.value - emp[c.location]) for c in coeffs), default=0.0))
    return []


def _diffract(cfg: RunConfig) -> list[str]:
    w = _load(cfg, cfg.window)
    peaks = peak_list(w, cfg.kmax, cfg.imin)
    _write(cfg, "peaks.csv", peaks_csv(peaks))
    _write(cfg, "peaks.svg", peaks_svg(peaks))
    for k, v in peaks.metadata().items():
        cfg.derived[k] = fmt(v) if isinstance(v, float) else v
    return []


def _homometry(cfg: RunConfig) -> list[str]:
    a, b = _load(cfg, cfg.window), _load(cfg, cfg.window2)
    same = homometric(a, b)
    cfg.derived["homometric"] = same
    cfg.derived["congruent"] = congruent(a, b)
    _write(cfg, "certificate.txt", certificate_text(discrete_autocorrelation(a)))
    print(f"homometric: {str(same).lower()}")
    return []


def _search(cfg: RunConfig) -> list[str]:
    lines = []
    if cfg.points is not None:
        pairs = search_1d_pairs(cfg.points, cfg.max_coord)
        lines = [" ".join(map(str, a)) + " | " + " ".join(map(str, b)) for a, b in pairs]
    else:
        w, h = cfg.box
        pool = minkowski_candidates(*cfg.minkowski, w, h) if cfg.minkowski else None
        reports = search_polyomino_pairs(cfg.cells, w, h, pool)
        for r in reports:
            lines.append(" ".join(f"{x},{y}" for x, y in r.left.sorted_cells())
                         + " | " + " ".join(f"{x},{y}" for x, y in r.right.sorted_cells()))
        pairs = reports
    cfg.derived["pairs"] = len(pairs)
    _write(cfg, "pairs.txt", "".join(line + "\n" for line in lines))
    print(f"{len(pairs)} pairs")
    return []


def _reconstruct(cfg: RunConfig) -> list[str]:
    rep = reconstruct_paper_pair()
    write_window(rep.left, cfg.out / "left.win")
    write_window(rep.right, cfg.out / "right.win")
    _write(cfg, "certificate.txt", certificate_text(rep.certificate))
    for side, check in zip(("left", "right"), rep.closed_form):
        cfg.derived[f"{side}_placement"] = check.placement
        cfg.derived[f"{side}_max_relative_error"] = fmt(check.max_relative_error)
    cfg.derived["congruent"] = rep.congruent
    return []


HANDLERS = {
    "covariogram": _covariogram,
    "patch": _patch,
    "autocorr": _autocorr,
    "diffract": _diffract,
    "homometry": _homometry,
    "search": _search,
    "reconstruct": _reconstruct,
}


def run(cfg: RunConfig) -> int:
    """Execute one command; library and input errors give status 1."""
    try:
        cfg.validate()
        cfg.out.mkdir(parents=True, exist_ok=True)
        extra = HANDLERS[cfg.command](cfg)
        _meta(cfg, extra)
    except (AperimetError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="aperimet", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, windows: int = 1):
        p.add_argument("--out", type=Path, default=Path("."))
        p.add_argument("--threads", type=int, default=1)
        if windows:
            p.add_argument("--window", type=Path, required=True)
            p.add_argument("--allow-disconnected", action="store_true")
        if windows == 2:
            p.add_argument("--window2", "--compare", dest="window2", type=Path, required=True)
        return p

    p = common(sub.add_parser("covariogram", help="covariogram grid and heat map"))
    p.add_argument("--step", type=_fraction, default=Fraction(1, 4))

    p = common(sub.add_parser("patch", help="model set patch"))
    p.add_argument("--radius", type=float, default=20.0)
    p.add_argument("--window2", "--compare", dest="window2", type=Path)

    p = common(sub.add_parser("autocorr", help="exact versus empirical autocorrelation"))
    p.add_argument("--radius", type=float, default=20.0)
    p.add_argument("--max-length", type=float, default=4.0)

    p = common(sub.add_parser("diffract", help="Bragg peak list"))
    p.add_argument("--kmax", type=float, default=3.0)
    p.add_argument("--imin", type=float, default=1e-3)

    common(sub.add_parser("homometry", help="compare two windows"), windows=2)

    p = common(sub.add_parser("search", help="search for homometric pairs"), windows=0)
    p.add_argument("--cells", type=int, default=4)
    p.add_argument("--box", type=int, nargs=2, default=(4, 4), metavar=("W", "H"))
    p.add_argument("--minkowski", type=int, nargs=2, metavar=("NU", "NV"),
                   help="restrict to sums of NU- and NV-point sets")
    p.add_argument("--points", type=int, help="1D search with this many points")
    p.add_argument("--max-coord", type=int, default=12)

    common(sub.add_parser("reconstruct", help="rebuild the 15-cell homometric pair"), windows=0)
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=ns.command)
    for name in ("out", "window", "window2", "radius", "kmax", "imin", "step", "threads",
                 "max_length", "cells", "minkowski", "points", "max_coord", "allow_disconnected"):
        if hasattr(ns, name) and getattr(ns, name) is not None:
            setattr(cfg, name, getattr(ns, name))
    if hasattr(ns, "box"):
        cfg.box = tuple(ns.box)
    if cfg.minkowski is not None:
        cfg.minkowski = tuple(cfg.minkowski)
    env = os.environ.get("APERIMET_THREADS")
    if env:
        try:
            cfg.threads = int(env)
        except ValueError:
            raise ValueError(f"APERIMET_THREADS must be an integer, got {env!r}") from None
    return cfg


def main(argv: list[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(ns)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
