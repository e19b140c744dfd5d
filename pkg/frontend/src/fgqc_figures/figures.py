"""Render fgqc sweep CSVs as fidelity-vs-parameter figures.

The input contract is the sweep CSV written by ``fgqc sweep``: a header
row ``gate,scheme,param,value,fidelity,leakage,runtime_ms`` followed by
one data row per grid point.  Rendering groups rows by (gate, scheme)
and draws one curve per group, in the order the groups first appear.
No numerical processing happens here beyond reading the columns, so
re-rendering identical CSVs yields identical plotted series.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import matplotlib

matplotlib.use("svg")

from matplotlib.figure import Figure  # noqa: E402  (backend pinned first)

CSV_HEADER = "gate,scheme,param,value,fidelity,leakage,runtime_ms"

#: figure id -> (swept parameter, x-axis label, title)
FIGURES = {
    "fig2": ("rabi", "relative Rabi amplitude error", "CNOT under Rabi amplitude error"),
    "fig3": ("rabi", "relative Rabi amplitude error", "controlled-T under Rabi amplitude error"),
    "fig4": ("detuning", "relative detuning error", "detuning-error robustness"),
    "fig5": ("decay", "Rydberg decay rate (1/us)", "CNOT under Rydberg decay"),
    "fig6": ("decay", "Rydberg decay rate (1/us)", "Rydberg-decay robustness"),
}


@dataclass(frozen=True)
class FigureSpec:
    """One figure request: which CSVs to read and where to render them."""

    figure_id: str
    csv_paths: tuple[str, ...]
    out_path: str
    xlim: tuple[float, float] | None = None
    ylim: tuple[float, float] | None = None

    def __post_init__(self):
        if self.figure_id not in FIGURES:
            raise ValueError(
                f"unknown figure id {self.figure_id!r}; "
                f"expected one of {sorted(FIGURES)}"
            )
        if not self.csv_paths:
            raise ValueError("at least one CSV path is required")

    @property
    def param(self) -> str:
        return FIGURES[self.figure_id][0]

    @property
    def xlabel(self) -> str:
        return FIGURES[self.figure_id][1]

    @property
    def title(self) -> str:
        return FIGURES[self.figure_id][2]


def read_sweep(path: str) -> list[dict]:
    """Read one sweep CSV, enforcing the header contract."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file, expected header {CSV_HEADER!r}")
        if header != CSV_HEADER.split(","):
            raise ValueError(
                f"{path}: header {','.join(header)!r} does not match the "
                f"sweep contract {CSV_HEADER!r}"
            )
        rows = []
        for lineno, record in enumerate(reader, start=2):
            if len(record) != 7:
                raise ValueError(f"{path}:{lineno}: expected 7 fields, got {len(record)}")
            try:
                rows.append(
                    {
                        "gate": record[0],
                        "scheme": record[1],
                        "param": record[2],
                        "value": float(record[3]),
                        "fidelity": float(record[4]),
                    }
                )
            except ValueError:
                raise ValueError(f"{path}:{lineno}: non-numeric value/fidelity fields")
    if not rows:
        raise ValueError(f"{path}: no data rows")
    return rows


def group_series(rows: list[dict]) -> dict[tuple[str, str], tuple[list, list]]:
    """Split rows into one (values, fidelities) series per (gate, scheme)."""
    series: dict[tuple[str, str], tuple[list, list]] = {}
    for row in rows:
        xs, ys = series.setdefault((row["gate"], row["scheme"]), ([], []))
        xs.append(row["value"])
        ys.append(row["fidelity"])
    return series


def render(spec: FigureSpec) -> None:
    """Render the figure; reads everything before touching the output path."""
    rows: list[dict] = []
    for path in spec.csv_paths:
        for row in read_sweep(path):
            if row["param"] != spec.param:
                raise ValueError(
                    f"{path}: {spec.figure_id} plots param {spec.param!r} "
                    f"but found {row['param']!r}"
                )
            rows.append(row)

    matplotlib.rcParams["svg.fonttype"] = "none"
    matplotlib.rcParams["svg.hashsalt"] = "fgqc-figures"

    fig = Figure(figsize=(6.4, 4.2))
    ax = fig.add_subplot()
    for (gate, scheme), (xs, ys) in group_series(rows).items():
        (line,) = ax.plot(xs, ys, label=f"{gate.upper()} ({scheme})")
        line.set_gid(f"curve-{gate}-{scheme}")
    ax.set_xlabel(spec.xlabel)
    ax.set_ylabel("average gate fidelity")
    ax.set_title(spec.title)
    if spec.xlim is not None:
        ax.set_xlim(*spec.xlim)
    if spec.ylim is not None:
        ax.set_ylim(*spec.ylim)
    ax.grid(True, alpha=0.3)
    ax.legend()

    has_extension = "." in spec.out_path.rsplit("/", 1)[-1]
    if has_extension:
        fig.savefig(spec.out_path, metadata=_stable_metadata(spec.out_path))
    else:
        fig.savefig(spec.out_path, format="svg", metadata={"Date": None})


def _stable_metadata(out_path: str) -> dict | None:
    """Drop the SVG creation date so identical inputs give identical bytes."""
    if out_path.lower().endswith(".svg"):
        return {"Date": None}
    return None
