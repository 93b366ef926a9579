"""Reading and writing point sets, coresets and JSON reports.

Floats are written with repr(), Python's shortest round-trip formatting, so a
file read back reproduces the coordinates bit-exactly.
"""

import csv
import json
import logging
import math
import os
import tempfile

import numpy as np

from .core import Dataset, WeightedCoreset, WeightVector

logger = logging.getLogger(__name__)

COORD_PREFIX = "coord_"


class CsvFormatError(ValueError):
    def __init__(self, path, row, message):
        self.path = str(path)
        self.row = row
        super().__init__(f"{path}, row {row}: {message}")


def _parse_float(path, row, field):
    try:
        value = float(field)
    except ValueError:
        raise CsvFormatError(path, row, f"not a number: {field!r}") from None
    if not math.isfinite(value):
        raise CsvFormatError(path, row, f"non-finite value: {field!r}")
    return value


def _is_header(fields):
    try:
        float(fields[0])
    except ValueError:
        return True
    return False


def _read_rows(path):
    """Non-blank CSV rows with 1-based row numbers, header row dropped."""
    with open(path, newline="") as f:
        rows = [(i, [x.strip() for x in fields])
                for i, fields in enumerate(csv.reader(f), start=1)
                if fields and any(x.strip() for x in fields)]
    if rows and _is_header(rows[0][1]):
        rows = rows[1:]
    if not rows:
        raise CsvFormatError(path, 1, "file contains no points")
    return rows


def _parse_matrix(path, rows):
    width = len(rows[0][1])
    out = np.empty((len(rows), width))
    for i, (row, fields) in enumerate(rows):
        if len(fields) != width:
            raise CsvFormatError(path, row, f"expected {width} fields, got {len(fields)}")
        out[i] = [_parse_float(path, row, x) for x in fields]
    return out


def ingest_csv(path):
    """One point per row; the dimension comes from the first data row."""
    points = _parse_matrix(path, _read_rows(path))
    logger.info("Read %d points in R^%d from %s", points.shape[0], points.shape[1], path)
    return Dataset(points)


def _atomic_write(path, text):
    """Write text to path via a temporary file in the same directory."""
    directory = os.path.dirname(os.path.abspath(path))
    tmp_path = None
    try:
        with tempfile.NamedTemporaryFile("w", dir=directory, suffix=".tmp",
                                         delete=False, newline="") as tmp:
            tmp_path = tmp.name
            tmp.write(text)
        os.replace(tmp_path, path)
        tmp_path = None
    finally:
        if tmp_path and os.path.exists(tmp_path):
            os.unlink(tmp_path)


def _format_rows(rows):
    return "".join(",".join(fields) + "\n" for fields in rows)


def write_points_csv(path, data):
    header = [f"{COORD_PREFIX}{j + 1}" for j in range(data.dimension)]
    rows = [header] + [[repr(float(v)) for v in point] for point in data.expanded()]
    _atomic_write(path, _format_rows(rows))


def write_coreset_csv(path, coreset):
    """Columns weight,coord_1,...,coord_d; weight is a positive integer."""
    header = ["weight"] + [f"{COORD_PREFIX}{j + 1}" for j in range(coreset.dimension)]
    rows = [header]
    for point, weight in zip(coreset.points, coreset.weights):
        rows.append([str(int(weight))] + [repr(float(v)) for v in point])
    _atomic_write(path, _format_rows(rows))
    logger.info("Wrote coreset of %d points (total weight %d) to %s",
                coreset.size, coreset.n, path)


def read_coreset_csv(path):
    rows = _read_rows(path)
    matrix = _parse_matrix(path, rows)
    if matrix.shape[1] < 2:
        raise CsvFormatError(path, rows[0][0], "coreset rows need a weight and coordinates")
    for (row, _), weight in zip(rows, matrix[:, 0]):
        if weight <= 0 or weight != int(weight):
            raise CsvFormatError(path, row, f"weight must be a positive integer, got {weight!r}")
    return WeightedCoreset(matrix[:, 1:], matrix[:, 0].astype(np.int64))


def load_weight_vector(path):
    """A weight vector file: one entry per row, non-increasing."""
    matrix = _parse_matrix(path, _read_rows(path))
    if matrix.shape[1] != 1:
        raise CsvFormatError(path, 1, f"expected one value per row, got {matrix.shape[1]}")
    return WeightVector(matrix[:, 0])


def _json_default(value):
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f"cannot serialize {type(value).__name__}")


def _finite_or_none(value):
    if isinstance(value, dict):
        return {key: _finite_or_none(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_finite_or_none(item) for item in value]
    if isinstance(value, np.ndarray):
        return _finite_or_none(value.tolist())
    if isinstance(value, (float, np.floating)) and not math.isfinite(value):
        return None
    return value


def format_report(report):
    """Sorted JSON; non-finite numbers become null."""
    return json.dumps(_finite_or_none(report), sort_keys=True, indent=2,
                      allow_nan=False, default=_json_default) + "\n"


def write_report_json(path, report):
    _atomic_write(path, format_report(report))
    logger.info("Wrote report to %s", path)
