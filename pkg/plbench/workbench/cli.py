"""
Typer-based CLI entrypoint for the Phragmén–Lindelöf workbench.
"""

from __future__ import annotations

import time
from contextlib import contextmanager
from dataclasses import replace
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterator, List, Optional, Sequence

import numpy as np
import typer
from rich.console import Console
from rich.markup import escape
from rich.table import Table

from plbench.workbench.algebra.grammar import render
from plbench.workbench.algebra.poly import Polynomial
from plbench.workbench.algebra.resolution import (
    annihilator,
    characteristic_variety,
    dual_complex_homology,
    hilbert_resolution,
    overdetermination_report,
)
from plbench.workbench.bounds.constants import lemma_constants, reverse_direction_check
from plbench.workbench.bounds.convex import Exhaustion
from plbench.workbench.bounds.paley_wiener import paley_wiener_experiment
from plbench.workbench.bounds.psi import PsiBound, shift_stability_check
from plbench.workbench.config import WorkbenchConfig, load_config
from plbench.workbench.core.exceptions import InputError, WorkbenchError
from plbench.workbench.core.logging import configure_logging
from plbench.workbench.probe.candidates import candidate_from_spec, default_candidates
from plbench.workbench.probe.phragmen import probe, uniqueness_probe
from plbench.workbench.probe.sampler import sample_curve
from plbench.workbench.reports.manifest import RunManifest
from plbench.workbench.reports.writer import render_report, write_csv, write_report
from plbench.workbench.system.models import WorkbenchDocument, WeightSpec
from plbench.workbench.system.parser import parse_document, parse_weight, region_payload, weight_payload
from plbench.workbench.utils import json
from plbench.workbench.utils.parsing import format_rational
from plbench.workbench.variety.factor import factor, minimal_primes_if_principal
from plbench.workbench.variety.puiseux import curve_expansion, residual_exponent
from plbench.workbench.variety.report import branch_report
from plbench.workbench.weights.axioms import axiom_grid, check_axioms, check_gamma_prime, estimate_dilation_constant
from plbench.workbench.weights.compare import equivalence_check, subadditivity_check
from plbench.workbench.weights.conjugate import biconjugate_check, find_shift_constant, young_conjugate
from plbench.workbench.weights.families import weight_function

console = Console(stderr=True)
app = typer.Typer(help="Phragmén–Lindelöf workbench CLI", no_args_is_help=True)
config_app = typer.Typer(help="Inspect resolved configuration.")
weights_app = typer.Typer(help="Weight function axioms and conjugates.")

CONJUGATE_GRID = np.logspace(-1, 4, 26)


def _get_config(ctx: typer.Context) -> WorkbenchConfig:
    if ctx.obj is None or "config" not in ctx.obj:
        raise typer.BadParameter("Configuration was not initialized. Ensure the CLI callback executed.")
    return ctx.obj["config"]


@app.callback()
def main(
    ctx: typer.Context,
    config_file: Optional[Path] = typer.Option(
        None,
        "--config",
        "-c",
        help="Optional path to plbench.toml. Defaults to ./plbench.toml if present.",
    ),
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Log progress at INFO level to stderr."),
) -> None:
    configure_logging("INFO" if verbose else None)
    try:
        config = load_config(config_file)
    except ValueError as exc:
        raise typer.BadParameter(str(exc))
    ctx.obj = {"config": config}


@contextmanager
def _guard() -> Iterator[None]:
    try:
        yield
    except WorkbenchError as exc:
        console.print(f"[red]error:[/] {escape(str(exc))}")
        raise typer.Exit(exc.exit_code) from exc


def _read_input(path: Path) -> bytes:
    try:
        return path.read_bytes()
    except OSError as exc:
        raise InputError(f"Cannot read {path}: {exc.strerror or exc}") from exc


def _emit(
    config: WorkbenchConfig,
    payload: dict[str, Any],
    manifest: RunManifest,
    output: Path | None,
    started: float,
) -> Path | None:
    manifest = replace(manifest, wall_time_seconds=round(time.perf_counter() - started, 6))
    output = _resolve_output(config, output, manifest.subcommand)
    if output is None:
        typer.echo(render_report(payload, manifest).decode("utf-8"), nl=False)
        return None
    digest = write_report(output, payload, manifest)
    console.print(f"[green]Report written to {output} (sha256 {digest[:12]}).[/]")
    return output


def _csv_path(output: Path | None, suffix: str) -> Path:
    if output is None:
        raise InputError("--csv needs --output (or output.directory) to place the tables.")
    return output.with_name(f"{output.stem}.{suffix}.csv")


def _resolve_output(config: WorkbenchConfig, output: Path | None, subcommand: str) -> Path | None:
    if output is None and config.output.directory is not None:
        return config.output.directory / f"{subcommand}.json"
    return output


def _dropped_primes(kept: Polynomial, dropped: Sequence[Polynomial], names: Sequence[str], source: str) -> str:
    listed = ", ".join(render(p, names) for p in dropped)
    return f"{source} has {len(dropped) + 1} minimal primes; using {render(kept, names)} and dropping {listed}."


def _curve_for(document: WorkbenchDocument, config: WorkbenchConfig) -> tuple[Polynomial, str, list[str]]:
    """Explicit curve, else the first supplied prime, else the first prime of a principal annihilator, sign-flipped."""
    names = document.variables
    if document.curve is not None:
        notices = []
        if document.primes:
            listed = ", ".join(render(p, names) for p in document.primes)
            notices.append(f"An explicit curve was given; ignoring primes {listed}.")
        return document.curve, "curve", notices
    if document.primes:
        first, *rest = document.primes
        notices = [_dropped_primes(first, rest, names, "The document")] if rest else []
        return first.sign_flip(), "primes", notices
    if document.system is None:
        raise InputError("Provide an explicit 'curve', a 'primes' entry or an operator 'matrix'.")
    ann = annihilator(document.system, limits=config.limits)
    if not ann.principal:
        raise InputError(
            "The annihilator of the system is not principal; supply the curve explicitly with the "
            "'curve' field (or an entry in 'primes')."
        )
    primes = minimal_primes_if_principal(ann.generators)
    if len(primes) > 1:
        first, *rest = primes
        return first.sign_flip(), "annihilator", [_dropped_primes(first, rest, names, "The annihilator")]
    return ann.generators[0].sign_flip(), "annihilator", []


def _print_notices(notices: Sequence[str]) -> None:
    for notice in notices:
        console.print(f"[yellow]notice:[/] {escape(notice)}")


def _weights(document: WorkbenchDocument | None, compact: list[str] | None) -> list[WeightSpec]:
    specs = [parse_weight(text) for text in compact or []]
    if document is not None:
        specs.extend(document.weights)
    if not specs:
        raise InputError("No weights given; pass --weight 'gevrey 1/2' or a document with 'weights'.")
    return specs


@config_app.command("show")
def config_show(ctx: typer.Context) -> None:
    """Print the resolved configuration values."""
    config = _get_config(ctx)
    table = Table(title="plbench Configuration", show_header=True, header_style="bold magenta")
    table.add_column("Key", style="cyan")
    table.add_column("Value", overflow="fold")
    for key, value in config.as_rows():
        table.add_row(key, value)
    Console().print(table)


@app.command("resolve")
def resolve(
    ctx: typer.Context,
    input_path: Path = typer.Option(..., "--input", "-i", help="System document (JSON)."),
    output: Optional[Path] = typer.Option(None, "--output", "-o", help="Report path; stdout when omitted."),
    lenient: bool = typer.Option(False, "--lenient", help="Ignore unknown fields in the document."),
) -> None:
    """Hilbert resolution, integrability conditions, annihilator and Ext presentations."""
    config = _get_config(ctx)
    started = time.perf_counter()
    with _guard():
        data = _read_input(input_path)
        document = parse_document(data, lenient=lenient, limits=config.limits)
        if document.system is None:
            raise InputError("The document has no operator 'matrix' to resolve.")
        system = document.system
        names = system.variables
        res = hilbert_resolution(system, limits=config.limits)
        ann = annihilator(system, limits=config.limits)
        variety = characteristic_variety(ann.generators, system.label)
        payload = {
            "label": system.label,
            "variables": list(names),
            "system": system.matrix.render(names),
            "resolution": {
                "ranks": list(res.ranks),
                "length": res.length,
                "free_module": res.free_module,
                "maps": [m.render(names) for m in res.maps],
                "certificates": [c.as_dict() for c in res.certificates],
                "notes": list(res.notes),
            },
            "overdetermination": overdetermination_report(res).as_dict(),
            "annihilator": {"generators": [render(g, names) for g in ann.generators], "principal": ann.principal},
            "characteristic_variety": [render(g, names) for g in variety.generators],
            "minimal_primes": [render(p, names) for p in minimal_primes_if_principal(ann.generators)],
            "ext": [
                {"degree": e.degree, "presentation": e.summary(names), "is_zero": e.is_zero}
                for e in dual_complex_homology(res, limits=config.limits)
            ],
        }
        manifest = RunManifest.for_input("resolve", data, parameters={"lenient": lenient})
        _emit(config, payload, manifest, output, started)


@app.command("variety")
def variety(
    ctx: typer.Context,
    input_path: Path = typer.Option(..., "--input", "-i", help="System or curve document (JSON)."),
    output: Optional[Path] = typer.Option(None, "--output", "-o", help="Report path; stdout when omitted."),
    puiseux_order: Optional[int] = typer.Option(None, "--puiseux-order", help="Number of Puiseux terms per branch."),
    normalize: bool = typer.Option(False, "--normalize", help="Apply z1 -> z1 + c z2 so the curve is monic in z2."),
    lenient: bool = typer.Option(False, "--lenient", help="Ignore unknown fields in the document."),
) -> None:
    """Factors of the curve and its Puiseux branches at infinity."""
    config = _get_config(ctx)
    started = time.perf_counter()
    order = puiseux_order or config.numerics.puiseux_order
    with _guard():
        data = _read_input(input_path)
        document = parse_document(data, lenient=lenient, limits=config.limits)
        curve, origin, notices = _curve_for(document, config)
        _print_notices(notices)
        names = document.variables
        char_variety = characteristic_variety([curve.sign_flip()], document.label)
        payload: dict[str, Any] = {
            "label": document.label,
            "variables": list(names),
            "curve": render(curve, names),
            "curve_origin": origin,
            "prime": [render(p, names) for p in char_variety.source],
            "characteristic_variety": [render(g, names) for g in char_variety.generators],
            "factors": factor(curve).as_dict(),
            "notices": notices,
        }
        if curve.nvars == 2:
            expansion = curve_expansion(curve, order, normalize=normalize)
            payload["expansion"] = expansion.as_dict()
            payload["residual_exponents"] = [
                _rational(residual_exponent(expansion.curve, b)) for b in expansion.branches
            ]
            payload["branch_reports"] = [
                branch_report(expansion.branches, spec).as_dict() for spec in document.weights
            ]
        else:
            notices.append(f"Puiseux branches need a plane curve; this one has {curve.nvars} variables.")
        manifest = RunManifest.for_input(
            "variety", data, parameters={"puiseux_order": order, "normalize": normalize, "lenient": lenient}
        )
        _emit(config, payload, manifest, output, started)


def _rational(value: Fraction | None) -> str | None:
    return None if value is None else format_rational(value)


@weights_app.command("report")
def weights_report(
    ctx: typer.Context,
    input_path: Optional[Path] = typer.Option(None, "--input", "-i", help="Document with a 'weights' list."),
    weight: Optional[List[str]] = typer.Option(None, "--weight", "-w", help="Compact weight such as 'gevrey 1/2'."),
    output: Optional[Path] = typer.Option(None, "--output", "-o", help="Report path; stdout when omitted."),
    horizon: Optional[float] = typer.Option(None, "--horizon", help="Right end of the axiom grids."),
    numeric: bool = typer.Option(False, "--numeric", help="Use the numeric conjugate for Gevrey weights too."),
    csv: bool = typer.Option(False, "--csv", help="Also write flat CSV tables next to the report."),
    lenient: bool = typer.Option(False, "--lenient", help="Ignore unknown fields in the document."),
) -> None:
    """Axiom checks, Young conjugate tables and pairwise equivalence for each weight."""
    config = _get_config(ctx)
    started = time.perf_counter()
    horizon = horizon or config.numerics.horizon
    with _guard():
        data = _read_input(input_path) if input_path else "\n".join(weight or []).encode("utf-8")
        document = parse_document(data, lenient=lenient, limits=config.limits) if input_path else None
        specs = _weights(document, weight)
        functions = [weight_function(spec) for spec in specs]
        entries = []
        conjugate_rows: list[tuple[str, float, float]] = []
        axiom_rows = []
        for function in functions:
            axioms = check_axioms(function, horizon)
            entry: dict[str, Any] = {
                "weight": weight_payload(function.spec),
                "axioms": axioms.as_dict(),
                "subadditivity": subadditivity_check(function, axioms.alpha.K, horizon).as_dict(),
                "dilation_constant_n2": estimate_dilation_constant(function, 2, horizon),
            }
            if axioms.delta.holds:
                conjugate = young_conjugate(function, numeric=numeric, horizon=horizon)
                ys = CONJUGATE_GRID[CONJUGATE_GRID <= conjugate.slope_limit]
                values = conjugate.evaluate(ys)
                entry["conjugate"] = {
                    "method": conjugate.method,
                    "table": [[float(y), float(v)] for y, v in zip(ys, values)],
                    "biconjugate_gap": biconjugate_check(conjugate),
                    "shift_constant_L": find_shift_constant(conjugate),
                }
                conjugate_rows.extend((function.describe(), float(y), float(v)) for y, v in zip(ys, values))
            entries.append(entry)
            axiom_rows.append(
                (
                    function.describe(),
                    axioms.alpha.holds,
                    axioms.alpha.K,
                    axioms.beta.verdict,
                    axioms.gamma_prime.holds,
                    axioms.gamma_prime.a,
                    axioms.gamma_prime.b,
                    axioms.gamma.holds,
                    axioms.delta.holds,
                )
            )
        comparisons = [
            {
                "w1": functions[i].describe(),
                "w2": functions[j].describe(),
                **equivalence_check(functions[i], functions[j], horizon).as_dict(),
            }
            for i in range(len(functions))
            for j in range(i + 1, len(functions))
        ]
        payload = {"weights": entries, "comparisons": comparisons}
        target = _resolve_output(config, output, "weights")
        if csv or config.output.csv:
            write_csv(
                _csv_path(target, "axioms"),
                ("weight", "alpha", "K", "beta", "gamma_prime", "a", "b", "gamma", "delta"),
                axiom_rows,
            )
            write_csv(_csv_path(target, "conjugate"), ("weight", "y", "phi_star"), conjugate_rows)
        manifest = RunManifest.for_input(
            "weights", data, parameters={"horizon": horizon, "numeric": numeric, "csv": csv}
        )
        _emit(config, payload, manifest, target, started)


@app.command("pw-check")
def pw_check(
    ctx: typer.Context,
    s: float = typer.Option(2.0, "--s", help="Gevrey order s > 1; the weight is t^(1/s)."),
    epsilon: float = typer.Option(1.0, "--epsilon", help="Bound on the sum of the widths."),
    factors: int = typer.Option(2000, "--factors", "-m", help="Number of convolution factors."),
    scale: Optional[float] = typer.Option(None, "--scale", help="Width constant c; rescaled if too large."),
    lam: float = typer.Option(0.0, "--lambda", help="Shift lambda in the reverse-direction threshold."),
    dimension: int = typer.Option(1, "--dimension", "-n", help="Dimension N in the reverse-direction threshold."),
    decay_b: Optional[float] = typer.Option(
        None, "--decay-b", help="B with a finite integral of |f^| e^(B omega); defaults to the achieved k."
    ),
    output: Optional[Path] = typer.Option(None, "--output", "-o", help="Report path; stdout when omitted."),
    csv: bool = typer.Option(False, "--csv", help="Also write the envelope table as CSV."),
) -> None:
    """Decay of a convolution of indicators against exp(-k omega)."""
    config = _get_config(ctx)
    started = time.perf_counter()
    with _guard():
        if s <= 1:
            raise InputError(f"--s must exceed 1; got {s}.")
        if decay_b is not None and decay_b <= 0:
            raise InputError(f"--decay-b must be positive; got {decay_b}.")
        alpha = 1 / Fraction(str(s))
        spec = parse_weight(f"gevrey {format_rational(alpha)}")
        record = paley_wiener_experiment(spec, epsilon, factors, scale=scale)
        payload: dict[str, Any] = {"experiment": record.as_dict()}
        function = weight_function(spec)
        grid = axiom_grid(config.numerics.horizon)
        gamma_prime = check_gamma_prime(function, grid, function(grid))
        if gamma_prime.holds and gamma_prime.b:
            a, b = gamma_prime.a or 0.0, gamma_prime.b
            payload["reverse_direction"] = reverse_direction_check(a, b, record.k_achieved, lam, dimension).as_dict()
            dilation = estimate_dilation_constant(function, dimension, config.numerics.horizon)
            weight_b = record.k_achieved if decay_b is None else decay_b
            constants = lemma_constants(a, b, dilation, weight_b)
            payload["lemma_constants"] = {**constants.as_dict(), "L": dilation, "B": weight_b}
        target = _resolve_output(config, output, "pw-check")
        if csv or config.output.csv:
            write_csv(_csv_path(target, "envelope"), ("t", "log_envelope"), record.envelope)
        parameters = {
            "s": s,
            "epsilon": epsilon,
            "factors": factors,
            "scale": scale,
            "lambda": lam,
            "dimension": dimension,
            "decay_b": decay_b,
        }
        manifest = RunManifest.for_input("pw-check", json.dumps(parameters), parameters=parameters)
        _emit(config, payload, manifest, target, started)


@app.command("pl-probe")
def pl_probe(
    ctx: typer.Context,
    input_path: Path = typer.Option(..., "--input", "-i", help="Document with a curve, regions and a weight."),
    output: Optional[Path] = typer.Option(None, "--output", "-o", help="Report path; stdout when omitted."),
    rmax: Optional[float] = typer.Option(None, "--rmax", help="Largest sampling radius."),
    radii: Optional[int] = typer.Option(None, "--radii", help="Number of log-spaced radii."),
    angles: Optional[int] = typer.Option(None, "--angles", help="Angles per radius."),
    seed: Optional[int] = typer.Option(None, "--seed", help="Seed for the shift-stability directions."),
    k0: float = typer.Option(1.0, "--k0", help="Shift radius for the stability check."),
    uniqueness: bool = typer.Option(False, "--uniqueness", help="Run the uniqueness variant."),
    csv: bool = typer.Option(False, "--csv", help="Also write the per-radius table as CSV."),
    lenient: bool = typer.Option(False, "--lenient", help="Ignore unknown fields in the document."),
) -> None:
    """Empirical Phragmén–Lindelöf probe; exit 0 stable, 2 growing, 3 vacuous."""
    config = _get_config(ctx)
    started = time.perf_counter()
    numerics = config.numerics
    r_max = rmax or numerics.rmax
    seed = numerics.seed if seed is None else seed
    with _guard():
        data = _read_input(input_path)
        document = parse_document(data, lenient=lenient, limits=config.limits)
        if document.regions is None:
            raise InputError("pl-probe needs 'regions' with K1 and K2.")
        if not document.weights:
            raise InputError("pl-probe needs a weight in 'weights'.")
        curve, origin, notices = _curve_for(document, config)
        _print_notices(notices)
        K1, K2 = document.regions
        function = weight_function(document.weights[0])
        settings = document.probe
        uniqueness = uniqueness or settings.uniqueness
        sampler = sample_curve(curve, r_max, radii or numerics.radii, angles or numerics.angles)
        candidates = [candidate_from_spec(c, curve.nvars) for c in settings.candidates]
        if not candidates:
            candidates = [c for c in default_candidates(curve.nvars) if c.holomorphic or not uniqueness]
        if uniqueness:
            verdict = uniqueness_probe(
                sampler, K1, K2, function, settings.alpha, candidates,
                c_max=settings.c_max, beta_max=settings.beta_max,
            )
        else:
            verdict = probe(
                sampler, K1, K2, function, settings.alpha, candidates,
                c_max=settings.c_max, beta_max=settings.beta_max, alpha_u_max=settings.alpha_u_max,
            )
        stability = shift_stability_check(
            PsiBound(Exhaustion(K1), function, settings.alpha), k0, r_max=r_max, seed=seed
        )
        payload = {
            "label": document.label,
            "curve": render(curve, document.variables),
            "curve_origin": origin,
            "notices": notices,
            "weight": weight_payload(function.spec),
            "regions": {"K1": region_payload(K1), "K2": region_payload(K2)},
            "sampler": sampler.as_dict(),
            "verdict": verdict.as_dict(),
            "shift_stability": stability.as_dict(),
        }
        target = _resolve_output(config, output, "pl-probe")
        if csv or config.output.csv:
            write_csv(
                _csv_path(target, "radii"),
                ("radius", "beta_empirical", "C_empirical"),
                zip(verdict.radii, verdict.beta_empirical, verdict.c_empirical),
            )
        parameters = {
            "rmax": r_max,
            "radii": len(sampler.radii),
            "angles": sampler.angles,
            "k0": k0,
            "uniqueness": uniqueness,
            "lenient": lenient,
        }
        manifest = RunManifest.for_input("pl-probe", data, parameters=parameters, seed=seed, verdict=verdict.trend)
        _emit(config, payload, manifest, target, started)
    if verdict.exit_code:
        console.print(f"[yellow]verdict: {verdict.trend}[/]")
        raise typer.Exit(verdict.exit_code)


app.add_typer(config_app, name="config")
app.add_typer(weights_app, name="weights")


if __name__ == "__main__":
    app()
