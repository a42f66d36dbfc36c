"""Tabular result emitters: CSV, JSON and a minimal SVG plot.

Every table carries the normalised parameter set of the run that produced
it.  CSV files put that set in ``#``-prefixed header lines; JSON files keep
it under ``"params"``.  Floats are written with ``repr`` so that reading a
file back reproduces the values bit for bit, and unknown cells are empty
in CSV and ``null`` in JSON.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

FORMATS = ("csv", "json", "svg")


@dataclass
class Table:
    """Named columns of equal length plus the parameters that produced them."""

    command: str
    columns: list
    rows: list
    params: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def __post_init__(self):
        width = len(self.columns)
        for i, row in enumerate(self.rows):
            if len(row) != width:
                raise ValueError(f"row {i} has {len(row)} cells, expected {width}")

    def column(self, name: str) -> list:
        j = self.columns.index(name)
        return [row[j] for row in self.rows]

    def records(self) -> list[dict]:
        return [dict(zip(self.columns, row)) for row in self.rows]


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if not math.isfinite(value):
            return ""
        return repr(value)
    return str(value)


def _clean(value):
    """JSON-safe value: non-finite floats become ``null``."""
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    return value


def params_stamp(params: dict) -> str:
    return json.dumps(_clean(params), sort_keys=True, separators=(",", ":"))


def to_csv(table: Table) -> str:
    out = io.StringIO()
    out.write(f"# springlinkage {table.command}\n")
    out.write(f"# params: {params_stamp(table.params)}\n")
    for note in table.notes:
        out.write(f"# {note}\n")
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([_cell(v) for v in row])
    return out.getvalue()


def to_json(table: Table) -> str:
    doc = {
        "command": table.command,
        "params": _clean(table.params),
        "notes": list(table.notes),
        "columns": list(table.columns),
        "rows": [_clean(list(r)) for r in table.rows],
    }
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def from_json(text: str) -> Table:
    doc = json.loads(text)
    return Table(doc["command"], doc["columns"], [list(r) for r in doc["rows"]],
                 doc.get("params", {}), doc.get("notes", []))


def from_csv(text: str) -> Table:
    """Parse a CSV written by :func:`to_csv`; numeric cells come back as floats."""
    lines = text.split("\n")
    command, params, notes = "", {}, []
    body = []
    for line in lines:
        if line.startswith("# springlinkage "):
            command = line[len("# springlinkage "):]
        elif line.startswith("# params: "):
            params = json.loads(line[len("# params: "):])
        elif line.startswith("# "):
            notes.append(line[2:])
        elif line:
            body.append(line)
    reader = csv.reader(body)
    columns = next(reader)
    rows = []
    for cells in reader:
        row = []
        for c in cells:
            if c == "":
                row.append(None)
                continue
            try:
                row.append(float(c))
            except ValueError:
                row.append(c)
        rows.append(row)
    return Table(command, columns, rows, params, notes)


def to_svg(table: Table, x: str, ys, xlabel: str | None = None, ylabel: str | None = None) -> str:
    """Line plot of columns ``ys`` against ``x``; gaps (``None``) break the lines."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    ys = [ys] if isinstance(ys, str) else list(ys)
    with matplotlib.rc_context({"svg.hashsalt": "springlinkage", "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(6.0, 4.0))
        xs = [math.nan if v is None else float(v) for v in table.column(x)]
        for name in ys:
            vals = [math.nan if v is None else float(v) for v in table.column(name)]
            ax.plot(xs, vals, label=name)
        ax.set_xlabel(xlabel or x)
        ax.set_ylabel(ylabel or ", ".join(ys))
        ax.set_title(f"springlinkage {table.command}")
        if len(ys) > 1:
            ax.legend()
        ax.grid(True, linewidth=0.3)
        buf = io.StringIO()
        fig.savefig(buf, format="svg", metadata={"Date": None})
        plt.close(fig)
    text = buf.getvalue()
    stamp = params_stamp(table.params).replace("--", "- -")
    return text.replace("\n", f"\n<!-- params: {stamp} -->\n", 1)


def render(table: Table, fmt: str, plot=None) -> str:
    """Serialise ``table`` as ``fmt``; ``plot`` is the ``(x, ys)`` pair used for SVG."""
    if fmt == "csv":
        return to_csv(table)
    if fmt == "json":
        return to_json(table)
    if fmt == "svg":
        if plot is None:
            raise ValueError(f"{table.command} output has no plot layout")
        return to_svg(table, *plot)
    raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")
