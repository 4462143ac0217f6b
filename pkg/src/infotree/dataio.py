"""CSV ingestion and emission shared by the CLI and the experiment runners.

One interchange format: CSV. Emitted files may carry '#'-prefixed comment
lines (before the header and, for coefficient dumps, after the rows);
readers here skip them. Numbers are written with 12 significant digits.
"""

from __future__ import annotations

import csv
import os

import numpy as np

DEFAULT_SEED = 12345
SEED_ENV_VAR = "INFOTREE_SEED"


def resolve_seed(explicit=None):
    """--seed beats the INFOTREE_SEED environment variable beats the default."""
    if explicit is not None:
        return int(explicit)
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        return int(env)
    return DEFAULT_SEED


def format_value(v):
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.12g}"
    return str(v)


def emit_csv(rows, schema, path, header_comments=(), trailing_comments=()):
    """Write header + rows; every row must match the schema's width."""
    rows = [tuple(r) for r in rows]
    width = len(schema)
    for i, r in enumerate(rows):
        if len(r) != width:
            raise ValueError(f"row {i} has {len(r)} fields, schema has {width}")
    with open(path, "w", newline="") as fh:
        for c in header_comments:
            fh.write(f"# {c}\n")
        fh.write(",".join(schema) + "\n")
        for r in rows:
            fh.write(",".join(format_value(v) for v in r) + "\n")
        for c in trailing_comments:
            fh.write(f"# {c}\n")


def read_csv_rows(path):
    """(header, rows) with comment lines skipped; all cells kept as strings."""
    header = None
    rows = []
    with open(path, newline="") as fh:
        for record in csv.reader(fh):
            if not record or record[0].lstrip().startswith("#"):
                continue
            if header is None:
                header = [c.strip() for c in record]
            else:
                rows.append([c.strip() for c in record])
    if header is None:
        raise ValueError(f"{path}: no header found")
    return header, rows


def load_count_file(path):
    """Count file -> ('hist', counts) or ('joint', matrix).

    Rows are ``symbol,count`` (1-D) or ``row,col,count`` (2-D); a non-numeric
    first row is treated as a header. Alphabet size is the max index + 1.
    """
    records = []
    with open(path, newline="") as fh:
        for record in csv.reader(fh):
            if not record or record[0].lstrip().startswith("#"):
                continue
            records.append([c.strip() for c in record])
    if not records:
        raise ValueError(f"{path}: empty count file")
    try:
        [int(c) for c in records[0]]
    except ValueError:
        records = records[1:]
        if not records:
            raise ValueError(f"{path}: only a header found") from None
    widths = {len(r) for r in records}
    if widths == {2}:
        size = max(int(r[0]) for r in records) + 1
        counts = np.zeros(size, dtype=np.int64)
        for r in records:
            counts[int(r[0])] += int(r[1])
        return "hist", counts
    if widths == {3}:
        s1 = max(int(r[0]) for r in records) + 1
        s2 = max(int(r[1]) for r in records) + 1
        counts = np.zeros((s1, s2), dtype=np.int64)
        for r in records:
            counts[int(r[0]), int(r[1])] += int(r[2])
        return "joint", counts
    raise ValueError(f"{path}: rows must have 2 (symbol,count) or 3 (row,col,count) fields")


def load_samples_matrix(path):
    """n x d integer symbol matrix from CSV (optional header auto-skipped)."""
    header, rows = _rows_with_optional_header(path)
    if not rows:
        raise ValueError(f"{path}: no data rows")
    width = len(rows[0])
    out = np.empty((len(rows), width), dtype=np.int64)
    for i, r in enumerate(rows):
        if len(r) != width:
            raise ValueError(f"{path}: row {i + 1} has {len(r)} fields, expected {width}")
        out[i] = [int(c) for c in r]
    if (out < 0).any():
        raise ValueError(f"{path}: symbols must be non-negative")
    return out


def _rows_with_optional_header(path):
    records = []
    with open(path, newline="") as fh:
        for record in csv.reader(fh):
            if not record or record[0].lstrip().startswith("#"):
                continue
            records.append([c.strip() for c in record])
    if not records:
        raise ValueError(f"{path}: empty file")
    header = None
    try:
        [int(c) for c in records[0]]
    except ValueError:
        header = records[0]
        records = records[1:]
    return header, records


def load_dataset(path, label_col, quantize_bins=10, cluster=None):
    """CSV with header -> LabeledDataset.

    Columns whose every value parses as a number are uniformly quantized
    into ``quantize_bins`` symbols; other columns are encoded by first
    appearance. ``cluster`` optionally merges attribute groups afterwards.
    """
    from .tan import LabeledDataset, cluster_attributes, quantize_uniform

    header, rows = read_csv_rows(path)
    if label_col not in header:
        raise ValueError(f"{path}: label column {label_col!r} not in header {header}")
    width = len(header)
    for i, r in enumerate(rows):
        if len(r) != width:
            raise ValueError(f"{path}: row {i + 2} has {len(r)} fields, expected {width}")
    if not rows:
        raise ValueError(f"{path}: no data rows")

    label_idx = header.index(label_col)
    columns = list(zip(*rows))
    attr_names = [h for i, h in enumerate(header) if i != label_idx]

    encoded = []
    alphabets = []
    for i, col in enumerate(columns):
        if i == label_idx:
            continue
        values = _maybe_numeric(col)
        if values is not None:
            bad = [j for j, v in enumerate(values) if not np.isfinite(v)]
            if bad:
                raise ValueError(
                    f"{path}: non-finite value in numeric column {header[i]!r}, "
                    f"row {bad[0] + 2}"
                )
            symbols, _ = quantize_uniform(np.asarray(values), bins=quantize_bins)
            encoded.append(symbols)
            alphabets.append(int(symbols.max()) + 1 if len(symbols) else 1)
        else:
            symbols, size = _first_appearance(col)
            encoded.append(symbols)
            alphabets.append(size)

    labels, n_classes = _first_appearance(columns[label_idx])
    data = LabeledDataset(
        attributes=np.stack(encoded, axis=1),
        labels=labels,
        attribute_alphabets=tuple(alphabets),
        n_classes=n_classes,
        attribute_names=tuple(attr_names),
    )
    if cluster is not None:
        data = cluster_attributes(data, cluster)
    return data


def _maybe_numeric(col):
    try:
        return [float(c) for c in col]
    except ValueError:
        return None


def _first_appearance(col):
    mapping = {}
    out = np.empty(len(col), dtype=np.int64)
    for i, c in enumerate(col):
        if c not in mapping:
            mapping[c] = len(mapping)
        out[i] = mapping[c]
    return out, len(mapping)


def parse_cluster_spec(spec):
    """'0,1|2,3,4' -> [[0, 1], [2, 3, 4]]."""
    groups = []
    for part in spec.split("|"):
        part = part.strip()
        if part:
            groups.append([int(x) for x in part.split(",")])
    return groups
