"""Window text files and CSV tables."""

from __future__ import annotations

import csv
import io
from fractions import Fraction
from pathlib import Path
from typing import Iterable

from .autocorr import AutocorrCoefficient, EmpiricalAutocorrelation
from .cutproject import S, ModelSetPatch
from .diffraction import PeakList
from .errors import DuplicateCell, EmptyWindow, ParseError
from .window import DEFAULT_ANCHOR, CovariogramGrid, DiscreteAutocorrelation, Polyomino


def _parse_rational(token: str, line: int) -> Fraction:
    if any(ch in token for ch in ".eE"):
        raise ParseError(f"anchor coordinates must be p/q rationals, got {token!r}", line)
    try:
        return Fraction(token)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational {token!r}", line) from exc


def _parse_int(token: str, line: int) -> int:
    try:
        return int(token)
    except ValueError as exc:
        raise ParseError(f"bad integer {token!r}", line) from exc


def parse_window_text(text: str, require_connected: bool = True) -> Polyomino:
    anchor = None
    cells: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].split()
        if not body:
            continue
        key, args = body[0], body[1:]
        if key == "anchor":
            if anchor is not None:
                raise ParseError("anchor given twice", lineno)
            if len(args) != 2:
                raise ParseError("anchor needs two coordinates", lineno)
            anchor = (_parse_rational(args[0], lineno), _parse_rational(args[1], lineno))
        elif key == "cell":
            if len(args) != 2:
                raise ParseError("cell needs two integers", lineno)
            c = (_parse_int(args[0], lineno), _parse_int(args[1], lineno))
            if c in seen:
                raise DuplicateCell(f"cell {c} listed twice", lineno)
            seen.add(c)
            cells.append(c)
        else:
            raise ParseError(f"unknown keyword {key!r}", lineno)
    if not cells:
        raise EmptyWindow("window has no cells")
    try:
        return Polyomino(frozenset(cells), anchor or DEFAULT_ANCHOR, require_connected)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def parse_window(path, require_connected: bool = True) -> Polyomino:
    return parse_window_text(Path(path).read_text(), require_connected)


def format_window(w: Polyomino) -> str:
    ax, ay = w.anchor
    lines = [f"anchor {ax.numerator}/{ax.denominator} {ay.numerator}/{ay.denominator}"]
    lines += [f"cell {x} {y}" for x, y in w.sorted_cells()]
    return "\n".join(lines) + "\n"


def write_window(w: Polyomino, path) -> None:
    Path(path).write_text(format_window(w))


def fmt(x: float) -> str:
    return f"{float(x):.17g}"


def _table(header: list[str], rows: Iterable[Iterable]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def patch_csv(patch: ModelSetPatch) -> str:
    pos, star = patch.positions, patch.star_positions
    rows = ([*n, fmt(pos[i, 0]), fmt(pos[i, 1]), fmt(star[i, 0]), fmt(star[i, 1])]
            for i, n in enumerate(patch.vectors))
    return _table(["n1", "n2", "n3", "n4", "x", "y", "xstar", "ystar"], rows)


def grid_csv(grid: CovariogramGrid) -> str:
    rows = ([fmt(v[0]), fmt(v[1]), fmt(g), str(g)] for v, g in grid.samples())
    return _table(["x", "y", "g", "g_exact"], rows)


def autocorr_csv(coeffs: list[AutocorrCoefficient], empirical: EmpiricalAutocorrelation) -> str:
    rows = []
    for c in coeffs:
        n1, n2, n3, n4 = c.location
        dx = n1 + (n2 - n4) * S
        dy = n3 + (n2 + n4) * S
        rows.append([*c.location, fmt(dx), fmt(dy), fmt(c.value), fmt(empirical[c.location])])
    return _table(["n1", "n2", "n3", "n4", "dx", "dy", "eta", "empirical"], rows)


def peaks_csv(peaks: PeakList) -> str:
    rows = ([*p.module_vector, fmt(p.position[0]), fmt(p.position[1]), fmt(p.intensity)] for p in peaks)
    return _table(["n1", "n2", "n3", "n4", "kx", "ky", "intensity"], rows)


def certificate_text(cert: DiscreteAutocorrelation) -> str:
    lines = ["# dx dy count"]
    lines += [f"{d[0]} {d[1]} {n}" for d, n in cert.fingerprint()]
    return "\n".join(lines) + "\n"

