"""Command-line front end.

Subcommands orchestrate the experiments: extreme-point sampling with
rank histograms, coatom certification of matrices or classical support
sets, the exhaustive three-bit enumerations, factorization checks, and
the family verification.  Runs are seedable and reproducible; reports
embed the configuration, version, and duration, and are written as
JSON plus CSV with a rendered PNG figure alongside.

Exit codes: 0 on success, 2 on usage/config errors, 3 when a quality
gate fails (solver failure fraction above one percent).
"""

from __future__ import annotations

import math
import os
import re
import time

import click
import numpy as np

from . import __version__, report, sdp, spectra
from .classical import (
    ClassicalModel,
    SupportSet,
    enumerate_coatoms,
    ff_ground_projector_form,
    is_m_feasible,
    pair_pauli_form,
)
from .family import (
    A_GRID_DEFAULT,
    T_GRID_DEFAULT,
    certify_family,
    special_values_report,
)
from .hermitian import Projector, as_hermitian, ground_projector, matrix_from_file
from .local_space import MODEL_NAMES, model_space
from .search import (
    KERNEL_TOL,
    SAMPLER_GAP_TOL,
    Verdict,
    coatom_certificate,
    sample_extreme_points,
)

SAMPLE_MODELS = MODEL_NAMES + ("cayley",)

#: solid-angle fraction of the four pairwise tangent caps of directions
#: leading to a vertex of the tetrahedron inside the cubic-surface
#: spectrahedron: 4 * (1 - cos(theta_c)) / 2 with cos(theta_c) = 1/sqrt(3)
CAYLEY_CAP_FRACTION = 2.0 * (1.0 - 1.0 / math.sqrt(3.0))

_ANGLE_RE = re.compile(r"^\s*(\d+(?:\.\d+)?)?\s*\*?\s*pi\s*(?:/\s*(\d+(?:\.\d+)?))?\s*$")


def _default_seed() -> int:
    return int(os.environ.get("COATOM_FORGE_SEED", "0"))


def _parse_angle(tok: str) -> float:
    tok = tok.strip().lower()
    m = _ANGLE_RE.match(tok)
    if m:
        num = float(m.group(1)) if m.group(1) else 1.0
        den = float(m.group(2)) if m.group(2) else 1.0
        return num * math.pi / den
    return float(tok)


def _parse_grid(text: str, angle: bool = False) -> tuple:
    vals = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        try:
            vals.append(_parse_angle(tok) if angle else float(tok))
        except ValueError:
            raise click.UsageError(f"cannot parse grid value {tok!r}") from None
    if not vals:
        raise click.UsageError("empty grid")
    return tuple(vals)


def _spectrahedron_for(model: str):
    if model == "cayley":
        return spectra.cayley_cubic(), None
    basis = model_space(model)
    return spectra.from_local_space(basis, model), basis


def _emit(fmt: str, report_dict: dict, table_lines, csv_rows, csv_fields) -> None:
    if fmt == "json":
        click.echo(report.dump_json(report_dict), nl=False)
    elif fmt == "csv" and csv_rows is not None:
        click.echo(",".join(map(str, csv_fields)))
        for row in csv_rows:
            click.echo(",".join(map(str, row)))
    else:
        for line in table_lines:
            click.echo(line)


def _out_options(fn):
    fn = click.option("--out", type=click.Path(), default=None,
                      help="Base path for the report files (.json/.csv/.png).")(fn)
    fn = click.option("--format", "fmt", type=click.Choice(["table", "json", "csv"]),
                      default="table", show_default=True, help="Stdout format.")(fn)
    fn = click.option("--figures/--no-figures", default=True, show_default=True,
                      help="Render the PNG figure next to the report files.")(fn)
    return fn


@click.group()
@click.version_option(version=__version__)
def main():
    """Search and certify coatoms of ground-projector lattices via
    extreme points of the dual spectrahedron."""


def _sample_records_rows(rep, m):
    fields = (
        ["seed_index", "status", "optimum_rank", "projector_rank",
         "certificate_dim", "certificate_verdict"]
        + [f"d_{i}" for i in range(m)]
        + [f"x_{i}" for i in range(m)]
    )
    rows = []
    for rec in rep.records:
        rows.append(
            [rec.seed_index, rec.status.value, rec.optimum_rank, rec.projector_rank,
             "" if rec.certificate_dim is None else rec.certificate_dim,
             "" if rec.certificate_verdict is None else rec.certificate_verdict.value]
            + report.round_floats(rec.direction)
            + report.round_floats(rec.x_star)
        )
    return fields, rows


def _record_payload(rep):
    out = []
    for rec in rep.records:
        entry = {
            "seed_index": rec.seed_index,
            "status": rec.status.value,
            "optimum_rank": rec.optimum_rank,
            "projector_rank": rec.projector_rank,
            "direction": report.round_floats(rec.direction),
            "x_star": report.round_floats(rec.x_star),
        }
        if rec.certificate_dim is not None:
            entry["certificate_dim"] = rec.certificate_dim
            entry["certificate_verdict"] = rec.certificate_verdict.value
        out.append(entry)
    return out


def _run_sampling(model, trials, seed, workers, gap_tol, rank_tol, certify,
                  mu, max_outer, max_newton):
    spec, basis = _spectrahedron_for(model)
    opts = sdp.SdpOptions(gap_tol=gap_tol, mu=mu, max_outer=max_outer,
                          max_newton=max_newton)
    t0 = time.perf_counter()
    rep = sample_extreme_points(
        spec, trials, seed=seed, certify=certify, basis=basis,
        rank_tol=rank_tol, opts=opts, workers=workers,
    )
    return spec, rep, time.perf_counter() - t0


def _histogram_lines(rep, model):
    done = rep.trials - rep.failures
    lines = [f"model {model}: {rep.trials} trials, {rep.failures} failures"]
    lines.append("rank   count   frequency")
    for rank, count in sorted(rep.histogram.items()):
        lines.append(f"{rank:4d}  {count:6d}   {100.0 * count / max(1, done):6.2f}%")
    return lines


@main.command()
@click.option("--model", type=click.Choice(SAMPLE_MODELS), required=True)
@click.option("--trials", type=int, default=1000, show_default=True)
@click.option("--seed", type=int, default=_default_seed,
              help="RNG seed [default: 0, or COATOM_FORGE_SEED].")
@click.option("--workers", type=int, default=0, show_default=True,
              help="Sampling processes; 0 means one per CPU.")
@click.option("--gap-tol", type=float, default=SAMPLER_GAP_TOL, show_default=True)
@click.option("--rank-tol", type=float, default=KERNEL_TOL, show_default=True)
@click.option("--mu", type=float, default=4.0, show_default=True)
@click.option("--max-outer", type=int, default=60, show_default=True)
@click.option("--max-newton", type=int, default=50, show_default=True)
@click.option("--certify", is_flag=True, default=False,
              help="Attach a coatom certificate to every converged record.")
@_out_options
@click.pass_context
def sample(ctx, model, trials, seed, workers, gap_tol, rank_tol, mu, max_outer,
           max_newton, certify, out, fmt, figures):
    """Sample extreme points in random directions and record ranks."""
    if trials < 1:
        raise click.UsageError("--trials must be at least 1")
    config = {
        "command": "sample", "model": model, "trials": trials, "seed": seed,
        "workers": workers, "gap_tol": gap_tol, "rank_tol": rank_tol,
        "mu": mu, "max_outer": max_outer, "max_newton": max_newton,
        "certify": certify,
    }
    spec, rep, duration = _run_sampling(model, trials, seed, workers, gap_tol,
                                        rank_tol, certify, mu, max_outer, max_newton)
    done = rep.trials - rep.failures
    payload = {
        "trials": rep.trials,
        "seed": rep.seed,
        "histogram": {str(k): v for k, v in rep.histogram.items()},
        "frequencies": {
            str(k): round(100.0 * v / max(1, done), 4) for k, v in rep.histogram.items()
        },
        "failures": rep.failures,
        "records": _record_payload(rep),
    }
    report_dict = report.build_report(config, payload, duration)
    fields, rows = _sample_records_rows(rep, spec.m)
    figure = report.histogram_figure(
        rep.histogram, done, f"{model}: optimum rank distribution ({trials} trials)"
    )
    if out:
        report.write_outputs(out, report_dict, rows, fields, figure, figures)
    _emit(fmt, report_dict, _histogram_lines(rep, model), rows, fields)
    if rep.failures > 0.01 * rep.trials:
        click.echo(f"quality gate: failure fraction {rep.failures / rep.trials:.2%} exceeds 1%",
                   err=True)
        ctx.exit(3)


@main.command("cayley-demo")
@click.option("--trials", type=int, default=10000, show_default=True)
@click.option("--seed", type=int, default=_default_seed)
@click.option("--workers", type=int, default=0, show_default=True)
@click.option("--gap-tol", type=float, default=SAMPLER_GAP_TOL, show_default=True)
@_out_options
@click.pass_context
def cayley_demo(ctx, trials, seed, workers, gap_tol, out, fmt, figures):
    """Sample the cubic-surface spectrahedron and locate the four
    rank-one vertices of the inscribed tetrahedron."""
    config = {"command": "cayley-demo", "trials": trials, "seed": seed,
              "workers": workers, "gap_tol": gap_tol}
    spec, rep, duration = _run_sampling("cayley", trials, seed, workers, gap_tol,
                                        KERNEL_TOL, False, 4.0, 60, 50)
    verts = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=float)
    clusters = {}
    worst = 0.0
    for rec in rep.records:
        if rec.optimum_rank != 1:
            continue
        dists = np.abs(verts - rec.x_star).max(axis=1)
        k = int(np.argmin(dists))
        worst = max(worst, float(dists[k]))
        clusters[k] = clusters.get(k, 0) + 1
    done = rep.trials - rep.failures
    rank1 = rep.histogram.get(1, 0)
    payload = {
        "trials": rep.trials,
        "seed": rep.seed,
        "histogram": {str(k): v for k, v in rep.histogram.items()},
        "failures": rep.failures,
        "rank_one_fraction": round(rank1 / max(1, done), 6),
        "cap_fraction_reference": round(CAYLEY_CAP_FRACTION, 6),
        "vertices": [
            {"vertex": report.round_floats(verts[k]), "hits": clusters.get(k, 0)}
            for k in range(4)
        ],
        "max_vertex_distance": worst,
    }
    report_dict = report.build_report(config, payload, duration)
    fields, rows = _sample_records_rows(rep, spec.m)
    figure = report.histogram_figure(
        rep.histogram, done, f"cubic surface: rank distribution ({trials} trials)",
        reference={1: 100.0 * CAYLEY_CAP_FRACTION},
    )
    if out:
        report.write_outputs(out, report_dict, rows, fields, figure, figures)
    lines = _histogram_lines(rep, "cayley")
    lines.append(f"rank-1 fraction {rank1 / max(1, done):.4f} "
                 f"(tangent-cap reference {CAYLEY_CAP_FRACTION:.4f})")
    lines.append(f"distinct vertices hit: {len(clusters)}, "
                 f"max distance to a vertex {worst:.2e}")
    _emit(fmt, report_dict, lines, rows, fields)
    if rep.failures > 0.01 * rep.trials:
        ctx.exit(3)


def _coordinate_summary(basis, coords, tol=1e-9):
    return {
        basis.labels[i]: round(float(c), 9)
        for i, c in enumerate(coords)
        if abs(c) > tol
    }


@main.command()
@click.option("--model", type=click.Choice(MODEL_NAMES), default="c3-qubit",
              show_default=True)
@click.option("--matrix-file", type=click.Path(exists=True, dir_okay=False),
              default=None, help="JSON matrix {dim, re, im}; its ground projector is certified.")
@click.option("--support", default=None,
              help="Indicator string or comma list of configurations; the diagonal projector is certified.")
@click.option("--gap-tol", type=float, default=1e-8, show_default=True,
              help="Spectral gap tolerance of the ground projector.")
@_out_options
@click.pass_context
def certify(ctx, model, matrix_file, support, gap_tol, out, fmt, figures):
    """Certify the coatom property of a ground projector."""
    if (matrix_file is None) == (support is None):
        raise click.UsageError("provide exactly one of --matrix-file or --support")
    basis = model_space(model)
    config = {"command": "certify", "model": model, "matrix_file": matrix_file,
              "support": support, "gap_tol": gap_tol}
    t0 = time.perf_counter()
    input_trace = None
    if matrix_file is not None:
        try:
            a = as_hermitian(matrix_from_file(matrix_file))
        except (OSError, ValueError, KeyError) as err:
            raise click.UsageError(f"cannot read matrix: {err}") from None
        if a.shape != (basis.d, basis.d):
            raise click.UsageError(
                f"matrix dimension {a.shape[0]} does not match model dimension {basis.d}"
            )
        input_trace = float(np.trace(a).real)
        proj = ground_projector(a, gap_tol)
        source = f"ground projector of {matrix_file}"
    else:
        try:
            sup = SupportSet.from_string(3, support)
        except ValueError as err:
            raise click.UsageError(str(err)) from None
        cols = np.eye(basis.d, dtype=complex)[:, list(sup.configs())]
        proj = Projector(matrix=sup.to_diag(), rank=sup.size, range_basis=cols)
        source = f"diagonal projector of support {sup.label()}"
    if not 0 < proj.rank < basis.d:
        raise click.UsageError(
            f"projector rank {proj.rank} is trivial; nothing to certify"
        )
    cert = coatom_certificate(proj, basis)
    duration = time.perf_counter() - t0
    payload = {
        "source": source,
        "projector_rank": proj.rank,
        "dimension": cert.dimension,
        "nullspace_dimension": cert.nullspace_dimension,
        "verdict": cert.verdict.value,
    }
    if input_trace is not None:
        payload["input_trace"] = round(input_trace, 9)
        if abs(input_trace) > 1e-7:
            payload["traceless_check"] = f"input trace {input_trace:.3e} is nonzero"
    if cert.generator_coordinates is not None:
        payload["generator"] = _coordinate_summary(basis, cert.generator_coordinates)
    report_dict = report.build_report(config, payload, duration)
    lines = [
        source,
        f"projector rank {proj.rank}",
        f"certificate dimension {cert.dimension} -> {cert.verdict.value}",
    ]
    if "traceless_check" in payload:
        lines.append(payload["traceless_check"])
    if cert.generator_coordinates is not None:
        lines.append(f"intersection generator: {payload['generator']}")
    if out:
        report.write_outputs(out, report_dict, None, None, None, figures)
    _emit(fmt, report_dict, lines, None, None)


@main.command("enumerate-classical")
@click.option("--model", type=click.Choice([m.value for m in ClassicalModel]),
              default="c3", show_default=True)
@_out_options
def enumerate_classical(model, out, fmt, figures):
    """List the classical coatoms (complements of allowed parity-graph
    edges) in the table layout."""
    coatoms = enumerate_coatoms(ClassicalModel(model))
    rows = []
    for i, coatom in enumerate(coatoms, start=1):
        edge = coatom.complement()
        x, y = edge.configs()
        rows.append([i, edge.label(), "diag(" + ",".join(edge.indicator_string()) + ")",
                     pair_pauli_form(x, y), coatom.indicator_string()])
    fields = ["row", "edge", "edge_diag", "edge_form", "coatom_indicator"]
    payload = {
        "model": model,
        "count": len(coatoms),
        "coatoms": [
            {"row": r[0], "edge": r[1], "edge_diag": r[2], "edge_form": r[3],
             "coatom_indicator": r[4]}
            for r in rows
        ],
    }
    report_dict = report.build_report({"command": "enumerate-classical", "model": model},
                                      payload, 0.0)
    lines = [f"model {model}: {len(coatoms)} coatoms (complements of listed edges)"]
    for r in rows:
        lines.append(f"{r[0]:3d}  {r[1]:14s} {r[2]}  = {r[3]}")
    if out:
        report.write_outputs(out, report_dict, rows, fields, None, figures)
    _emit(fmt, report_dict, lines, rows, fields)


@main.command("factor-check")
@click.option("--support", required=True,
              help="Indicator string (e.g. 11111100) or comma list of configurations.")
@click.option("--graph", type=click.Choice(["c3", "p3"]), default="c3", show_default=True)
@_out_options
def factor_check(support, graph, out, fmt, figures):
    """Check the support condition for factoring distributions and print
    the cylinder decomposition of the ground projector when it exists."""
    from .local_space import Hypergraph

    try:
        sup = SupportSet.from_string(3, support)
    except ValueError as err:
        raise click.UsageError(str(err)) from None
    g = Hypergraph.cycle3() if graph == "c3" else Hypergraph.path3()
    feasible = is_m_feasible(sup, g)
    decomposition = ff_ground_projector_form(sup, g)
    payload = {
        "support": sup.indicator_string(),
        "configs": sup.label(),
        "graph": graph,
        "feasible": feasible,
        "decomposition": None,
    }
    lines = [f"support {sup.label()} on graph {graph}: "
             f"{'feasible' if feasible else 'not feasible'}"]
    if decomposition is not None:
        factors = []
        for nu, allowed in decomposition.proper_factors():
            allowed_str = sorted("".join(map(str, cfg)) for cfg in allowed)
            factors.append({"units": list(nu), "allowed": allowed_str})
            lines.append(f"  units {nu}: allowed patterns {{{','.join(allowed_str)}}}")
        payload["decomposition"] = factors
        if not factors:
            lines.append("  (no constraints: full space)")
    report_dict = report.build_report(
        {"command": "factor-check", "support": support, "graph": graph}, payload, 0.0
    )
    if out:
        report.write_outputs(out, report_dict, None, None, None, figures)
    _emit(fmt, report_dict, lines, None, None)


@main.command("verify-family")
@click.option("--a-grid", default=None, help="Comma list of a values.")
@click.option("--t-grid", default=None, help="Comma list of t values (accepts pi/8 style).")
@click.option("--include-special", is_flag=True, default=False,
              help="Append the special-slice classification (a in {0,2}, t in {0,pi/2}).")
@_out_options
def verify_family(a_grid, t_grid, include_special, out, fmt, figures):
    """Certify the rank-five coatom family over a parameter grid."""
    a_vals = _parse_grid(a_grid) if a_grid else A_GRID_DEFAULT
    t_vals = _parse_grid(t_grid, angle=True) if t_grid else T_GRID_DEFAULT
    config = {
        "command": "verify-family",
        "a_grid": report.round_floats(a_vals),
        "t_grid": report.round_floats(t_vals),
        "include_special": include_special,
    }
    t0 = time.perf_counter()
    rows = certify_family(a_vals, t_vals)
    table = [
        {
            "a": round(r.a, 10),
            "t": round(r.t, 10),
            "rank": r.rank,
            "projector_rank": r.projector_rank,
            "certificate_dim": r.certificate.dimension,
            "verdict": r.verdict.value,
            "generator_residual": float(f"{r.generator_residual:.3e}"),
            "min_eigenvalue": float(f"{r.min_eigenvalue:.3e}"),
        }
        for r in rows
    ]
    payload = {"grid": table}
    lines = ["   a        t      rank  P-rank  cert-dim  verdict      residual"]
    for r in table:
        lines.append(
            f"{r['a']:6.3f}  {r['t']:7.4f}   {r['rank']:3d}   {r['projector_rank']:4d}"
            f"     {r['certificate_dim']:3d}    {r['verdict']:12s} {r['generator_residual']:.1e}"
        )
    if include_special:
        special = special_values_report(t_vals, a_vals)
        payload["special_values"] = [
            {
                "case": s.case,
                "a": round(s.a, 10),
                "t": round(s.t, 10),
                "rank": s.rank,
                "extreme": s.extreme,
                "certificate_dim": s.certificate_dim,
            }
            for s in special
        ]
        lines.append("special slices:")
        for s in payload["special_values"]:
            lines.append(
                f"  {s['case']:7s} a={s['a']:6.3f} t={s['t']:7.4f}  rank {s['rank']}  "
                f"{'extreme' if s['extreme'] else 'not extreme'}"
            )
    duration = time.perf_counter() - t0
    report_dict = report.build_report(config, payload, duration)
    fields = ["a", "t", "rank", "projector_rank", "certificate_dim", "verdict",
              "generator_residual", "min_eigenvalue"]
    csv_rows = [[r[k] for k in fields] for r in table]
    figure = report.family_figure(table)
    if out:
        report.write_outputs(out, report_dict, csv_rows, fields, figure, figures)
    _emit(fmt, report_dict, lines, csv_rows, fields)


if __name__ == "__main__":
    main()
