"""Report writing: machine-readable JSON/CSV plus rendered figures.

Every report embeds the run configuration, a version string, and the
wall-clock duration.  JSON bodies are emitted with sorted keys so two
runs with identical configuration are byte-identical apart from the
duration field.  Figures are rendered to PNG next to the delimited
output with the headless matplotlib backend.
"""

from __future__ import annotations

import csv
import json
import subprocess
from functools import lru_cache
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from . import __version__

__all__ = [
    "version_string",
    "build_report",
    "dump_json",
    "write_outputs",
    "round_floats",
    "histogram_figure",
    "family_figure",
]


@lru_cache(maxsize=1)
def version_string() -> str:
    """Package version, suffixed with the source revision when available."""
    try:
        rev = subprocess.run(
            ["git", "describe", "--always", "--dirty"],
            cwd=Path(__file__).parent,
            capture_output=True,
            text=True,
            timeout=5,
        )
        if rev.returncode == 0 and rev.stdout.strip():
            return f"{__version__}+g{rev.stdout.strip()}"
    except (OSError, subprocess.SubprocessError):
        pass
    return __version__


def round_floats(values, digits: int = 10):
    return [round(float(v), digits) for v in values]


def build_report(config: dict, payload: dict, duration_s: float) -> dict:
    report = {
        "config": dict(config),
        "version": version_string(),
        "duration_s": round(float(duration_s), 3),
    }
    report.update(payload)
    return report


def dump_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, separators=(",", ":")) + "\n"


def _strip_suffix(base: Path) -> Path:
    if base.suffix in {".json", ".csv", ".png"}:
        return base.with_suffix("")
    return base


def write_outputs(
    out_base,
    report: dict,
    csv_rows=None,
    csv_fields=None,
    figure=None,
    figures: bool = True,
) -> dict:
    """Write <base>.json (always), <base>.csv (when rows are given) and
    <base>.png (when a figure callback is given and figures are on).
    Returns the paths written."""
    base = _strip_suffix(Path(out_base))
    base.parent.mkdir(parents=True, exist_ok=True)
    paths = {}
    json_path = base.with_suffix(".json")
    json_path.write_text(dump_json(report))
    paths["json"] = json_path
    if csv_rows is not None:
        csv_path = base.with_suffix(".csv")
        with open(csv_path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(csv_fields)
            writer.writerows(csv_rows)
        paths["csv"] = csv_path
    if figure is not None and figures:
        png_path = base.with_suffix(".png")
        figure(png_path)
        paths["png"] = png_path
    return paths


def histogram_figure(histogram: dict, total: int, title: str, reference: dict | None = None):
    """Bar chart of the optimum-rank distribution; optional reference
    percentages are drawn as markers on top of the bars."""

    def render(path):
        ranks = sorted(int(r) for r in histogram)
        counts = [histogram[r] for r in ranks]
        pct = [100.0 * c / max(1, total) for c in counts]
        fig, ax = plt.subplots(figsize=(5.0, 3.4))
        bars = ax.bar([str(r) for r in ranks], pct, color="#4878a8")
        for bar, c in zip(bars, counts):
            ax.annotate(
                f"{c}",
                (bar.get_x() + bar.get_width() / 2, bar.get_height()),
                ha="center",
                va="bottom",
                fontsize=8,
            )
        if reference:
            xs = [str(r) for r in ranks]
            for i, r in enumerate(ranks):
                if r in reference:
                    ax.plot(xs[i], reference[r], "k_", markersize=18)
        ax.set_xlabel("optimum matrix rank")
        ax.set_ylabel("frequency [%]")
        ax.set_title(title)
        fig.tight_layout()
        fig.savefig(path, dpi=150)
        plt.close(fig)

    return render


def family_figure(rows):
    """Scatter of the (a, t) grid colored by certificate outcome."""

    def render(path):
        fig, ax = plt.subplots(figsize=(5.0, 3.6))
        for verdict, color, marker in (
            ("coatom", "#2a7a2a", "o"),
            ("not_coatom", "#b03030", "x"),
            ("inconclusive", "#c08a00", "s"),
        ):
            xs = [r["a"] for r in rows if r["verdict"] == verdict]
            ys = [r["t"] for r in rows if r["verdict"] == verdict]
            if xs:
                ax.scatter(xs, ys, c=color, marker=marker, label=verdict.replace("_", " "))
        ax.set_xlabel("a")
        ax.set_ylabel("t [rad]")
        ax.set_title("family certification over the parameter grid")
        ax.legend(loc="best", fontsize=8)
        fig.tight_layout()
        fig.savefig(path, dpi=150)
        plt.close(fig)

    return render
