"""Command-line interface.

Commands: ``codes``, ``sweep``, ``search``, ``threshold``, ``multiround``,
``noisy``.  Every command is deterministic given its full configuration
(stochastic ones require a seed), floats are printed with 17 significant
digits, and each CSV starts with a schema-version comment line.

Exit status: 0 on success (including a no-crossing threshold), 1 for usage
errors, 2 for internal tolerance or structure violations.
"""

from __future__ import annotations

import json
import math
import sys

import click
import numpy as np

from . import __version__
from .channel import StructureError, ToleranceError, format_float
from .circuits import DepolarizingModel, noisy_fidelity
from .codes import CodeError, dump_code, registry, registry_names
from .concatenation import find_threshold, iterate_levels, threshold_reports_to_json
from .multiround import RoundSpec, scenario_fidelity
from .pauli import PauliError, PauliOp
from .tailoring import default_classes, search_optimal

SCHEMAS = {
    "sweep": "pauliconj.sweep.v1",
    "threshold": "pauliconj.threshold.v1",
    "multiround": "pauliconj.multiround.v1",
    "noisy": "pauliconj.noisy.v1",
}


def parse_angle(text: str) -> float:
    """Radians, either numeric or a textual multiple of pi like ``pi/4`` or ``3*pi/8``."""
    t = text.strip().lower().replace(" ", "")
    try:
        if "pi" in t:
            coeff, _, rest = t.partition("pi")
            coeff = coeff.rstrip("*")
            num = float(coeff) if coeff not in ("", "+", "-") else float(coeff + "1")
            den = 1.0
            if rest:
                if not rest.startswith("/"):
                    raise ValueError
                den = float(rest[1:])
            return num * math.pi / den
        return float(t)
    except ValueError:
        raise click.UsageError(f"cannot parse angle {text!r}") from None


def _theta_grid(start: str, stop: str, points: int) -> np.ndarray:
    lo, hi = parse_angle(start), parse_angle(stop)
    if points < 1:
        raise click.UsageError("--theta-points must be >= 1")
    for v in (lo, hi):
        if not 0.0 <= v <= math.pi / 2 + 1e-12:
            raise click.UsageError("theta grid must lie within [0, pi/2]")
    return np.linspace(lo, hi, points)


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    with open(path, encoding="utf-8") as f:
        return json.load(f)


def _merged(config_file: str | None, **flags) -> dict:
    merged = _load_config(config_file)
    for k, v in flags.items():
        if v is not None:
            merged[k] = v
    return merged


def _get_code(cfg: dict):
    name = cfg.get("code")
    if not name:
        raise click.UsageError("a code name is required (--code)")
    try:
        return registry(name)
    except CodeError as exc:
        raise click.UsageError(str(exc)) from exc


def _write_lines(path: str | None, lines: list[str]):
    text = "\n".join(lines) + "\n"
    if path is None or path == "-":
        click.echo(text, nl=False)
    else:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)


@click.group()
@click.version_option(version=__version__, prog_name="pauliconj")
def cli():
    """Logical-fidelity toolkit for Pauli-conjugation noise tailoring."""


@cli.command(name="codes")
@click.option("--name", default=None, help="dump one code as JSON instead of listing all")
def cmd_codes(name):
    """List registry codes (or dump one definition as JSON)."""
    if name:
        try:
            click.echo(dump_code(registry(name)))
        except CodeError as exc:
            raise click.UsageError(str(exc)) from exc
        return
    for n in registry_names():
        code = registry(n)
        click.echo(f"{n}: [[{code.n},1]] with {code.num_checks} checks")


@cli.command(name="sweep")
@click.option("--code", "code_name", default=None)
@click.option("--theta-start", default=None)
@click.option("--theta-stop", default=None)
@click.option("--theta-points", type=int, default=None)
@click.option("--out", default=None, help="output CSV path (default stdout)")
@click.option("--config", "config_file", type=click.Path(exists=True), default=None)
def cmd_sweep(code_name, theta_start, theta_stop, theta_points, out, config_file):
    """Fidelity of every scheme (none, twirl, one per class) over a theta grid."""
    cfg = _merged(
        config_file,
        code=code_name,
        theta_start=theta_start,
        theta_stop=theta_stop,
        theta_points=theta_points,
        out=out,
    )
    code = _get_code(cfg)
    grid = _theta_grid(
        cfg.get("theta_start", "0"), cfg.get("theta_stop", "pi/4"), cfg.get("theta_points", 25)
    )
    classes = default_classes(code)
    lines = [f"# schema={SCHEMAS['sweep']}", "code,theta,scheme,fidelity"]
    for theta in grid:
        rep = search_optimal(code, float(theta), classes)
        rows = [("none", rep.fidelity_original), ("twirl", rep.fidelity_twirled)]
        rows += [(f"conj:{c.representative}", c.fidelity) for c in rep.classes]
        for scheme, f in rows:
            lines.append(f"{code.name},{format_float(theta)},{scheme},{format_float(f)}")
    _write_lines(cfg.get("out"), lines)


@cli.command(name="search")
@click.option("--code", "code_name", default=None)
@click.option("--theta", default=None)
@click.option("--out", default=None)
@click.option("--config", "config_file", type=click.Path(exists=True), default=None)
def cmd_search(code_name, theta, out, config_file):
    """Optimal-conjugation search report (JSON)."""
    cfg = _merged(config_file, code=code_name, theta=theta, out=out)
    code = _get_code(cfg)
    theta_v = parse_angle(str(cfg.get("theta", "0.3")))
    report = search_optimal(code, theta_v, default_classes(code))
    _write_lines(cfg.get("out"), [report.to_json()])


@cli.command(name="threshold")
@click.option("--code", "code_name", default=None)
@click.option("--scheme", default=None, help="none|twirl|conj|all (default all)")
@click.option("--theta-start", default=None)
@click.option("--theta-stop", default=None)
@click.option("--theta-points", type=int, default=None)
@click.option("--levels", type=int, default=None, help="levels for the CSV curves (default 3)")
@click.option("--out", default=None, help="CSV path; the JSON report goes to <out>.json")
@click.option("--config", "config_file", type=click.Path(exists=True), default=None)
def cmd_threshold(code_name, scheme, theta_start, theta_stop, theta_points, levels, out, config_file):
    """Concatenation-level fidelity curves plus threshold crossings."""
    cfg = _merged(
        config_file,
        code=code_name,
        scheme=scheme,
        theta_start=theta_start,
        theta_stop=theta_stop,
        theta_points=theta_points,
        levels=levels,
        out=out,
    )
    code = _get_code(cfg)
    schemes = [cfg.get("scheme") or "all"]
    if schemes == ["all"]:
        schemes = ["none", "twirl", "conj"]
    levels_n = cfg.get("levels", 3)
    grid = _theta_grid(
        cfg.get("theta_start", "0.02"),
        cfg.get("theta_stop", str(math.pi / 4 - 0.02)),
        cfg.get("theta_points", 13),
    )
    conj = _best_conj(code)
    lines = [f"# schema={SCHEMAS['threshold']}", "code,scheme,theta,level,fidelity"]
    reports = []
    for s in schemes:
        w = conj if s == "conj" else None
        for theta in grid:
            for level, f in iterate_levels(code, float(theta), s, levels_n, w):
                lines.append(
                    f"{code.name},{s},{format_float(theta)},{level},{format_float(f)}"
                )
        reports.append(
            find_threshold(code, s, w, bracket=(float(grid[0]), float(grid[-1])))
        )
    out_path = cfg.get("out")
    _write_lines(out_path, lines)
    report_json = threshold_reports_to_json(reports)
    if out_path and out_path != "-":
        with open(out_path + ".json", "w", encoding="utf-8") as f:
            f.write(report_json + "\n")
    else:
        click.echo(report_json)


def _best_conj(code) -> PauliOp:
    report = search_optimal(code, 0.3, default_classes(code))
    return PauliOp.from_string(report.w_max, code.n)


@cli.command(name="multiround")
@click.option("--code", "code_name", default=None)
@click.option("--theta-start", default=None)
@click.option("--theta-stop", default=None)
@click.option("--theta-points", type=int, default=None)
@click.option("--k", type=int, default=None, help="number of cycles (default 100)")
@click.option("--direction", type=click.Choice(["walk", "fixed"]), default=None)
@click.option("--trials", type=int, default=None, help="trials for the sampled scheme")
@click.option("--seed", type=int, default=None)
@click.option("--out", default=None)
@click.option("--config", "config_file", type=click.Path(exists=True), default=None)
def cmd_multiround(code_name, theta_start, theta_stop, theta_points, k, direction, trials, seed, out, config_file):
    """Multi-cycle fidelity for none/twirl/conj (+ logical twirling when sampled)."""
    cfg = _merged(
        config_file,
        code=code_name,
        theta_start=theta_start,
        theta_stop=theta_stop,
        theta_points=theta_points,
        k=k,
        direction=direction,
        trials=trials,
        seed=seed,
        out=out,
    )
    code = _get_code(cfg)
    k_v = cfg.get("k", 100)
    direction_v = cfg.get("direction", "fixed")
    trials_v = cfg.get("trials", 0)
    seed_v = cfg.get("seed")
    if trials_v and seed_v is None:
        raise click.UsageError("--seed is required when --trials > 0")
    grid = _theta_grid(
        cfg.get("theta_start", "0.01"),
        cfg.get("theta_stop", str(math.pi / 4)),
        cfg.get("theta_points", 13),
    )
    conj = _best_conj(code)
    lines = [f"# schema={SCHEMAS['multiround']}", "code,scheme,theta,k,fidelity,stderr"]
    for theta in grid:
        rows = [
            ("none", RoundSpec(k=k_v, theta=float(theta), direction=direction_v, scheme="none")),
            ("twirl", RoundSpec(k=k_v, theta=float(theta), direction=direction_v, scheme="twirl")),
            (
                f"conj:{conj.to_index_string()}",
                RoundSpec(k=k_v, theta=float(theta), direction=direction_v, scheme="conj", conj=conj),
            ),
        ]
        if trials_v:
            rows.append(
                (
                    f"conj-lt:{conj.to_index_string()}",
                    RoundSpec(k=k_v, theta=float(theta), direction=direction_v, scheme="conj-lt", conj=conj),
                )
            )
        for label, spec in rows:
            f, se = scenario_fidelity(code, spec, trials=trials_v, seed=seed_v or 0)
            lines.append(
                f"{code.name},{label},{format_float(theta)},{k_v},{format_float(f)},{format_float(se)}"
            )
    _write_lines(cfg.get("out"), lines)


@cli.command(name="noisy")
@click.option("--code", "code_name", default=None)
@click.option("--theta-start", default=None)
@click.option("--theta-stop", default=None)
@click.option("--theta-points", type=int, default=None)
@click.option("--p-gate", default=None, help="comma-separated depolarizing rates (default 0,0.005,0.01)")
@click.option("--scheme", default=None, help="none|conj (default both)")
@click.option("--trials", type=int, default=None)
@click.option("--seed", type=int, default=None)
@click.option("--out", default=None)
@click.option("--config", "config_file", type=click.Path(exists=True), default=None)
def cmd_noisy(code_name, theta_start, theta_stop, theta_points, p_gate, scheme, trials, seed, out, config_file):
    """Monte Carlo fidelity with depolarizing gate errors in the circuits."""
    cfg = _merged(
        config_file,
        code=code_name,
        theta_start=theta_start,
        theta_stop=theta_stop,
        theta_points=theta_points,
        p_gate=p_gate,
        scheme=scheme,
        trials=trials,
        seed=seed,
        out=out,
    )
    code = _get_code(cfg)
    if cfg.get("seed") is None:
        raise click.UsageError("--seed is required for the noisy command")
    trials_v = cfg.get("trials", 1000)
    if trials_v < 100:
        raise click.UsageError("--trials must be >= 100")
    rates = [float(x) for x in str(cfg.get("p_gate", "0,0.005,0.01")).split(",")]
    schemes = [cfg.get("scheme")] if cfg.get("scheme") else ["none", "conj"]
    grid = _theta_grid(
        cfg.get("theta_start", "0.1"), cfg.get("theta_stop", "0.5"), cfg.get("theta_points", 5)
    )
    conj = _best_conj(code)
    lines = [f"# schema={SCHEMAS['noisy']}", "code,scheme,theta,p_gate,trials,fidelity,stderr"]
    seed_v = int(cfg["seed"])
    for s in schemes:
        w = conj if s == "conj" else None
        label = f"conj:{conj.to_index_string()}" if s == "conj" else "none"
        for p in rates:
            model = DepolarizingModel(p, p)
            for i, theta in enumerate(grid):
                f, se = noisy_fidelity(code, float(theta), w, model, trials_v, seed_v + i)
                lines.append(
                    f"{code.name},{label},{format_float(theta)},{format_float(p)},"
                    f"{trials_v},{format_float(f)},{format_float(se)}"
                )
    _write_lines(cfg.get("out"), lines)


def main(argv=None) -> int:
    """Entry point with the documented exit-status contract."""
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.UsageError as exc:
        click.echo(f"usage error: {exc.format_message()}", err=True)
        return 1
    except click.ClickException as exc:
        exc.show()
        return 1
    except (ToleranceError, StructureError, CodeError, PauliError) as exc:
        click.echo(f"error: {exc}", err=True)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
