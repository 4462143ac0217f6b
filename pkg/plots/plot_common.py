"""Shared plumbing for the figure scripts.

Each script is a pure view of one CSV schema: it parses the file, draws,
and writes an image. Exit code 2 signals a schema violation; malformed
numbers are schema violations too. No statistics are recomputed here - the
only numeric transform allowed is unit scaling (fractions to percentages).
"""

from __future__ import annotations

import csv
import sys

import matplotlib

matplotlib.use("Agg")

# Keep PNG output byte-reproducible for identical inputs.
PNG_METADATA = {"Software": "infotree-plots"}


class SchemaError(Exception):
    pass


def read_table(path, required_columns):
    """Parse a CSV with optional '#' comments into per-column float lists."""
    header = None
    rows = []
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise SchemaError(f"{path}: {exc}") from exc
    with fh:
        for record in csv.reader(fh):
            if not record or record[0].lstrip().startswith("#"):
                continue
            if header is None:
                header = [c.strip() for c in record]
            else:
                rows.append([c.strip() for c in record])
    if header is None:
        raise SchemaError(f"{path}: no header row")
    missing = [c for c in required_columns if c not in header]
    if missing:
        raise SchemaError(f"{path}: missing column(s) {', '.join(missing)}")
    columns = {c: [] for c in header}
    for i, row in enumerate(rows):
        if len(row) != len(header):
            raise SchemaError(f"{path}: row {i + 1} has {len(row)} fields")
        for name, cell in zip(header, row):
            columns[name].append(cell)
    return columns


def float_column(columns, name, path):
    try:
        return [float(v) for v in columns[name]]
    except ValueError as exc:
        raise SchemaError(f"{path}: column {name!r} has a non-numeric cell") from exc


def save(fig, out_path):
    fig.savefig(out_path, dpi=110, metadata=PNG_METADATA)


def run_script(render, argv, usage):
    """Common entry point: IN.csv OUT.png arguments, 0/2 exit codes."""
    argv = sys.argv[1:] if argv is None else argv
    if len(argv) != 2:
        print(usage, file=sys.stderr)
        return 2
    try:
        render(argv[0], argv[1])
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0
