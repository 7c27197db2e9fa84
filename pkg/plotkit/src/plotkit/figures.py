"""Figure rendering for the pauliconj CLI output files.

Reads only the CSV/JSON files the CLI emits; never recomputes any physics.
Schema validation is strict: a file whose ``# schema=...`` header does not
match the figure kind fails with :class:`SchemaVersionError` instead of
being coerced.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
from matplotlib.ticker import FuncFormatter, MultipleLocator

EXPECTED_SCHEMAS = {
    "sweep": "pauliconj.sweep.v1",
    "threshold": "pauliconj.threshold.v1",
    "multiround": "pauliconj.multiround.v1",
    "noisy": "pauliconj.noisy.v1",
}

STYLE = {
    "figsize": (6.4, 4.2),
    "dpi": 120,
    "grid_alpha": 0.3,
}


class SchemaVersionError(ValueError):
    """Input file schema does not match the requested figure kind."""

    def __init__(self, expected: str, found: str):
        super().__init__(f"schema mismatch: expected {expected!r}, found {found!r}")
        self.expected = expected
        self.found = found


@dataclass(frozen=True)
class FigureSpec:
    """One figure: input file(s), kind, output image path, style options."""

    kind: str
    csv_path: str
    out_path: str
    report_path: str | None = None  # threshold JSON with crossing markers
    title: str | None = None
    theta_in_pi: bool = True

    def __post_init__(self):
        if self.kind not in EXPECTED_SCHEMAS:
            raise ValueError(f"unknown figure kind {self.kind!r}; know {sorted(EXPECTED_SCHEMAS)}")

    @staticmethod
    def from_json(data: dict) -> "FigureSpec":
        return FigureSpec(
            kind=data["kind"],
            csv_path=data["csv"],
            out_path=data["out"],
            report_path=data.get("report"),
            title=data.get("title"),
            theta_in_pi=bool(data.get("theta_in_pi", True)),
        )


def read_rows(path: str, kind: str) -> list[dict]:
    """Parse a CLI CSV after checking its schema header."""
    expected = EXPECTED_SCHEMAS[kind]
    with open(path, encoding="utf-8") as f:
        header = f.readline().strip()
        if not header.startswith("# schema="):
            raise SchemaVersionError(expected, "<missing header>")
        found = header.removeprefix("# schema=")
        if found != expected:
            raise SchemaVersionError(expected, found)
        return list(csv.DictReader(f))


def _new_axes(title: str | None):
    fig, ax = plt.subplots(figsize=STYLE["figsize"], dpi=STYLE["dpi"])
    ax.grid(True, alpha=STYLE["grid_alpha"])
    if title:
        ax.set_title(title)
    ax.set_ylabel("average logical fidelity")
    return fig, ax


def _theta_axis(ax, in_pi: bool):
    if in_pi:
        ax.set_xlabel(r"rotation angle $\theta$ (units of $\pi$)")
        ax.xaxis.set_major_locator(MultipleLocator(math.pi / 8))
        ax.xaxis.set_major_formatter(FuncFormatter(lambda x, _: f"{x / math.pi:.3g}"))
    else:
        ax.set_xlabel(r"rotation angle $\theta$ (rad)")


def _groups(rows, keys):
    out: dict[tuple, list[dict]] = {}
    for r in rows:
        out.setdefault(tuple(r[k] for k in keys), []).append(r)
    return dict(sorted(out.items()))


def render(spec: FigureSpec) -> str:
    """Render one figure; returns the output path."""
    rows = read_rows(spec.csv_path, spec.kind)
    fig, ax = _new_axes(spec.title)
    try:
        if spec.kind == "sweep":
            _render_sweep(ax, rows)
        elif spec.kind == "threshold":
            _render_threshold(ax, rows, spec.report_path)
        elif spec.kind == "multiround":
            _render_multiround(ax, rows)
        else:
            _render_noisy(ax, rows)
        _theta_axis(ax, spec.theta_in_pi)
        if rows:
            ax.legend(fontsize=8)
        fig.savefig(spec.out_path, metadata=_no_metadata(spec.out_path))
    finally:
        plt.close(fig)
    return spec.out_path


def _no_metadata(path: str) -> dict:
    # strip creation timestamps etc. so identical inputs give identical files
    suffix = Path(path).suffix.lower()
    if suffix == ".png":
        return {"Software": None}
    if suffix == ".svg":
        return {"Date": None}
    return {}


def _render_sweep(ax, rows):
    for (scheme,), pts in _groups(rows, ["scheme"]).items():
        xs = [float(r["theta"]) for r in pts]
        ys = [float(r["fidelity"]) for r in pts]
        ax.plot(xs, ys, marker=".", label=scheme)


def _render_threshold(ax, rows, report_path):
    for (scheme, level), pts in _groups(rows, ["scheme", "level"]).items():
        xs = [float(r["theta"]) for r in pts]
        ys = [float(r["fidelity"]) for r in pts]
        ax.plot(xs, ys, marker=".", label=f"{scheme} L{level}")
    if report_path:
        with open(report_path, encoding="utf-8") as f:
            for entry in json.load(f):
                if entry.get("theta_star") is not None:
                    x = float(entry["theta_star"])
                    y = float(entry["f_star"])
                    ax.plot([x], [y], marker="x", ms=10, color="black")
                    ax.annotate(
                        f"{entry['scheme']}: {x:.3f}",
                        (x, y),
                        textcoords="offset points",
                        xytext=(4, -10),
                        fontsize=7,
                    )


def _render_multiround(ax, rows):
    for (scheme, k), pts in _groups(rows, ["scheme", "k"]).items():
        xs = [float(r["theta"]) for r in pts]
        ys = [float(r["fidelity"]) for r in pts]
        errs = [float(r["stderr"]) for r in pts]
        if any(errs):
            ax.errorbar(xs, ys, yerr=errs, marker=".", capsize=2, label=f"{scheme} (k={k})")
        else:
            ax.plot(xs, ys, marker=".", label=f"{scheme} (k={k})")


def _render_noisy(ax, rows):
    for (scheme, p), pts in _groups(rows, ["scheme", "p_gate"]).items():
        xs = [float(r["theta"]) for r in pts]
        ys = [float(r["fidelity"]) for r in pts]
        errs = [float(r["stderr"]) for r in pts]
        ax.errorbar(xs, ys, yerr=errs, marker=".", capsize=2, label=f"{scheme} p={float(p):g}")


def render_batch(directory: str) -> list[str]:
    """Render every ``*.figspec.json`` found under ``directory``."""
    outputs = []
    for path in sorted(Path(directory).glob("*.figspec.json")):
        with open(path, encoding="utf-8") as f:
            spec = FigureSpec.from_json(json.load(f))
        outputs.append(render(spec))
    return outputs
