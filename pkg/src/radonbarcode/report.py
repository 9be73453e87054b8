"""Report artifacts: text table, JSON-lines records, chart, barcode strips.

Numeric formatting follows the evaluation table convention: rates and
total error with 2 decimals, suitability with 3.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Optional, Sequence

import matplotlib
import numpy as np
from PIL import Image

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .barcode import Barcode
from .evaluation import RunResult, suitability

REPORT_COLUMNS = ("method", "n_wrong_pct", "e_total", "l_code", "eta", "rank")


def ranked_runs(runs: Sequence[RunResult]) -> list[dict]:
    """Attach eta and rank to each run; rows ordered by rank."""
    scores = suitability(runs)
    by_name = {run.method_name: run for run in runs}
    rows = []
    for name, eta, rank in scores:
        run = by_name[name]
        rows.append(
            {
                "method": name,
                "n_wrong_pct": run.n_wrong_rate,
                "e_total": run.e_total,
                "l_code": run.code_length,
                "eta": eta,
                "rank": rank,
            }
        )
    return rows


def format_text_table(rows: Sequence[dict]) -> str:
    header = f"{'Method':<10} {'n_wrong [%]':>12} {'E_total':>10} {'L_code':>8} {'eta':>8} {'Rank':>5}"
    out = [header, "-" * len(header)]
    for row in rows:
        out.append(
            f"{row['method']:<10} {row['n_wrong_pct']:>12.2f} {row['e_total']:>10.2f} "
            f"{row['l_code']:>8d} {row['eta']:>8.3f} {row['rank']:>5d}"
        )
    return "\n".join(out)


def write_jsonl(rows: Sequence[dict], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for row in rows:
            handle.write(json.dumps({key: row[key] for key in REPORT_COLUMNS}) + "\n")


def read_runs_jsonl(path: str | Path) -> list[RunResult]:
    """Load saved run summaries; eta/rank fields, if present, are ignored."""
    runs = []
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
                runs.append(
                    RunResult(
                        method_name=str(record["method"]),
                        n_wrong_rate=float(record["n_wrong_pct"]),
                        e_total=float(record["e_total"]),
                        code_length=int(record["l_code"]),
                    )
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise ValueError(f"{path}: line {lineno}: bad run record ({exc})") from exc
    return runs


def save_suitability_figure(rows: Sequence[dict], path: str | Path) -> None:
    """Bar chart of eta and wrong-digit rate per method, best-ranked first."""
    methods = [row["method"] for row in rows]
    positions = np.arange(len(rows))

    fig, (ax_eta, ax_wrong) = plt.subplots(1, 2, figsize=(9, 3.2))
    ax_eta.bar(positions, [row["eta"] for row in rows], color="#33658a")
    ax_eta.set_ylabel(r"suitability $\eta$")
    ax_wrong.bar(positions, [row["n_wrong_pct"] for row in rows], color="#f6ae2d")
    ax_wrong.set_ylabel("wrong digits [%]")
    for ax in (ax_eta, ax_wrong):
        ax.set_xticks(positions)
        ax.set_xticklabels(methods, rotation=45, ha="right")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def write_report_files(
    runs: Sequence[RunResult],
    out_dir: str | Path,
    basename: str = "report",
) -> tuple[Path, Path, Path]:
    """Emit <basename>.txt / .jsonl / .png into out_dir; returns the paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = ranked_runs(runs)
    text_path = out_dir / f"{basename}.txt"
    jsonl_path = out_dir / f"{basename}.jsonl"
    figure_path = out_dir / f"{basename}.png"
    text_path.write_text(format_text_table(rows) + "\n", encoding="utf-8")
    write_jsonl(rows, jsonl_path)
    save_suitability_figure(rows, figure_path)
    return text_path, jsonl_path, figure_path


def render_barcode_strip(
    barcode: Barcode,
    path: str | Path,
    stripe_width: int = 2,
    height: Optional[int] = None,
) -> None:
    """Write a 1-bit PNG with one vertical stripe per bit (1 = black).

    The image is stripe_width * bit_length pixels wide.
    """
    if stripe_width < 1:
        raise ValueError("stripe width must be at least 1")
    bits = barcode.bits()
    if height is None:
        height = max(32, barcode.bit_length // 16)
    row = np.repeat(np.where(bits == 1, 0, 255).astype(np.uint8), stripe_width)
    strip = np.tile(row, (height, 1))
    Image.fromarray(strip, mode="L").convert("1", dither=Image.Dither.NONE).save(path)
