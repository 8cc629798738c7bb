"""Dataset ingestion, the retention report pipeline, and table writers.

CSV files are read with rows as observations and columns as variables, the
usual export layout. Internally the data is transposed to the p x n
(variables x observations) convention used by :mod:`mpstop.linalg`.
"""
from __future__ import annotations

import csv
import json
import math
import re
from dataclasses import asdict, dataclass, fields

import numpy as np

from . import linalg
from .mp import gk_limit
from .spectral import cpv_fraction, gk_fraction

_DECIMAL = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")


class DataError(ValueError):
    pass


class ParseError(DataError):
    def __init__(self, row, col, text):
        super().__init__(f"cannot parse {text!r} as a number at row {row}, column {col}")
        self.row, self.col = row, col


class MissingValueError(DataError):
    def __init__(self, row, col):
        super().__init__(f"missing value at row {row}, column {col}")
        self.row, self.col = row, col


class ShapeError(DataError):
    pass


@dataclass(frozen=True)
class Dataset:
    name: str
    observations: np.ndarray  # n x p
    labels: tuple

    def __post_init__(self):
        obs = np.asarray(self.observations, dtype=float)
        if obs.ndim != 2:
            raise ShapeError(f"observations must be a 2-d table, got shape {obs.shape}")
        n, p = obs.shape
        if n < 2 or p < 1:
            raise ShapeError(f"need at least 2 observations and 1 variable, got {n} x {p}")
        if len(self.labels) != p:
            raise ShapeError(f"{len(self.labels)} labels for {p} columns")
        if not np.all(np.isfinite(obs)):
            raise DataError("observations must be finite")
        object.__setattr__(self, "observations", obs)
        object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def n(self) -> int:
        return self.observations.shape[0]

    @property
    def p(self) -> int:
        return self.observations.shape[1]

    def data_matrix(self) -> np.ndarray:
        """The p x n matrix (variables as rows)."""
        return self.observations.T


@dataclass(frozen=True)
class RetentionReport:
    name: str
    p: int
    n: int
    p_over_n: float
    rho_hat: float
    gk_empirical: float
    gk_plugin_limit: float
    cpv_empirical: float
    t: float


REPORT_FIELDS = tuple(f.name for f in fields(RetentionReport))

REPORT_SCHEMA = {
    "type": "array",
    "items": {
        "type": "object",
        "properties": {
            "name": {"type": "string"},
            "p": {"type": "integer", "minimum": 1},
            "n": {"type": "integer", "minimum": 2},
            "p_over_n": {"type": "number", "exclusiveMinimum": 0},
            "rho_hat": {"type": "number", "minimum": 0, "maximum": 1},
            "gk_empirical": {"type": "number", "minimum": 0, "maximum": 1},
            "gk_plugin_limit": {"type": "number", "minimum": 0, "maximum": 1},
            "cpv_empirical": {"type": "number", "minimum": 0, "maximum": 1},
            "t": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
        },
        "required": list(REPORT_FIELDS),
        "additionalProperties": False,
    },
}


def _parse_cell(text, row, col):
    s = text.strip()
    if s == "":
        raise MissingValueError(row, col)
    if not _DECIMAL.match(s):
        raise ParseError(row, col, text)
    value = float(s)
    if not math.isfinite(value):
        raise ParseError(row, col, text)
    return value


def read_csv(path, delimiter: str = ",", header: bool = True, name: str | None = None) -> Dataset:
    """Read a numeric CSV table (rows = observations).

    Row and column positions in errors are 1-based and count the header line.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh, delimiter=delimiter))
    rows = [r for r in rows if r]  # tolerate a trailing blank line
    if not rows:
        raise ShapeError(f"{path}: empty file")
    first = 1
    if header:
        labels, rows = tuple(c.strip() for c in rows[0]), rows[1:]
        first = 2
    else:
        labels = tuple(f"V{j + 1}" for j in range(len(rows[0])))
    width = len(labels)
    values = []
    for i, r in enumerate(rows):
        if len(r) != width:
            raise ShapeError(f"{path}: row {i + first} has {len(r)} fields, expected {width}")
        values.append([_parse_cell(cell, i + first, j + 1) for j, cell in enumerate(r)])
    if len(values) < 2:
        raise ShapeError(f"{path}: need at least 2 data rows")
    stem = name if name is not None else str(path).rsplit("/", 1)[-1].rsplit(".", 1)[0]
    return Dataset(stem, np.array(values, dtype=float), labels)


def write_dataset_csv(ds: Dataset, path, delimiter: str = ",") -> None:
    """Write with shortest round-trip decimals, so :func:`read_csv` gets the same bits."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, delimiter=delimiter, lineterminator="\n")
        w.writerow(ds.labels)
        for row in ds.observations:
            w.writerow([repr(float(v)) for v in row])


def analyze(ds: Dataset, t: float = 0.7) -> RetentionReport:
    """GK and CPV fractions of the sample correlation matrix, plus the plug-in limit.

    The plug-in limit is the GK limit at ``c = p/n`` and ``rho = lambda_1/p``.
    """
    X = ds.data_matrix()
    try:
        R = linalg.sample_correlation(X)
    except linalg.ConstantRowError as exc:
        raise DataError(
            f"{ds.name}: column {exc.row + 1} ({ds.labels[exc.row]!r}) is constant"
        ) from exc
    spec = linalg.symmetric_eigenvalues(R)
    rho = float(spec.eigenvalues[0]) / ds.p
    c = ds.p / ds.n
    # rho_hat = 1 only when p = 1 or all columns are collinear; the limit there is 0
    plugin = gk_limit(c, rho) if rho < 1.0 else 0.0
    return RetentionReport(
        name=ds.name,
        p=ds.p,
        n=ds.n,
        p_over_n=c,
        rho_hat=rho,
        gk_empirical=gk_fraction(spec),
        gk_plugin_limit=plugin,
        cpv_empirical=cpv_fraction(spec, t),
        t=t,
    )


def _fmt(value):
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def write_report(reports, fmt: str, path) -> None:
    """Write reports as CSV or JSON, columns in RetentionReport field order.

    ``path`` may also be an open text file.
    """
    if fmt not in ("csv", "json"):
        raise ValueError(f"unknown report format {fmt!r}")
    if hasattr(path, "write"):
        _dump_report(reports, fmt, path)
    else:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            _dump_report(reports, fmt, fh)


def _dump_report(reports, fmt, fh):
    if fmt == "csv":
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(REPORT_FIELDS)
        for r in reports:
            w.writerow([_fmt(getattr(r, k)) for k in REPORT_FIELDS])
        return
    out = []
    for r in reports:
        d = asdict(r)
        out.append({k: float(_fmt(v)) if isinstance(v, float) else v for k, v in d.items()})
    json.dump(out, fh, indent=2)
    fh.write("\n")


def read_report_csv(path) -> list[RetentionReport]:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    out = []
    for r in rows:
        kw = {}
        for f in fields(RetentionReport):
            v = r[f.name]
            kw[f.name] = v if f.type in ("str", str) else (int(v) if f.type in ("int", int) else float(v))
        out.append(RetentionReport(**kw))
    return out


def write_table(rows, columns, path_or_file) -> None:
    """Write sweep rows as CSV. Floats use 12 significant digits; None is blank."""

    def cell(v):
        if v is None:
            return ""
        if isinstance(v, float):
            return f"{v:.12g}"
        return str(v)

    def dump(fh):
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([cell(r.get(k)) for k in columns])

    if hasattr(path_or_file, "write"):
        dump(path_or_file)
    else:
        with open(path_or_file, "w", newline="", encoding="utf-8") as fh:
            dump(fh)
