"""CSV ingestion, type inference, imputation, equal-frequency discretization.

A fitted preprocessor carries only training statistics (means, bin edges,
symbol dictionaries), so applying it to new data never peeks at that
data's distribution. Numeric columns are binned by equal-frequency cut
points placed midway between adjacent distinct training values; repeated
values never straddle an edge, so a value always maps to one code.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import ParseError, SchemaError, UnusableColumnError
from .table import DiscreteTable

DEFAULT_MISSING = ("", "?")

NUMERIC = "numeric"
CATEGORICAL = "categorical"


@dataclass
class RawColumn:
    name: str
    kind: str
    # numeric: float values with NaN for missing
    # categorical: object array of str, None for missing
    values: np.ndarray


@dataclass
class RawTable:
    columns: list[RawColumn]

    @property
    def n_rows(self) -> int:
        return int(self.columns[0].values.shape[0]) if self.columns else 0

    @property
    def n_attrs(self) -> int:
        return len(self.columns)

    @property
    def names(self) -> list[str]:
        return [c.name for c in self.columns]

    def column(self, name_or_index) -> RawColumn:
        if isinstance(name_or_index, str):
            for c in self.columns:
                if c.name == name_or_index:
                    return c
            raise KeyError(f"no column named {name_or_index!r}")
        return self.columns[int(name_or_index)]

    def take_rows(self, rows) -> "RawTable":
        idx = np.asarray(rows, dtype=np.intp)
        return RawTable([RawColumn(c.name, c.kind, c.values[idx]) for c in self.columns])

    def drop_column(self, name_or_index) -> "RawTable":
        target = self.column(name_or_index)
        return RawTable([c for c in self.columns if c is not target])


def _parse_number(text: str) -> float | None:
    try:
        value = float(text)
    except ValueError:
        return None
    return value if math.isfinite(value) else None


def load_csv(
    path,
    delimiter: str = ",",
    missing_markers=DEFAULT_MISSING,
    header: bool = True,
) -> RawTable:
    """Read a CSV file into typed columns.

    A column is numeric iff every non-missing cell parses as a finite
    real number; otherwise it is categorical. Missing markers (defaults:
    empty cell and "?") become NaN / None.
    """
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh, delimiter=delimiter)
            rows = list(reader)
    except OSError:
        raise
    if not rows:
        raise ParseError(f"{path}: empty file")
    if header:
        names = [h.strip() for h in rows[0]]
        data_rows = rows[1:]
    else:
        names = [f"c{i}" for i in range(len(rows[0]))]
        data_rows = rows
    n_cols = len(names)
    for i, row in enumerate(data_rows):
        if len(row) != n_cols:
            line = i + (2 if header else 1)
            raise ParseError(f"{path}: row {line} has {len(row)} fields, expected {n_cols}")
    if not data_rows:
        raise ParseError(f"{path}: no data rows")

    missing = set(missing_markers)
    columns = []
    for j, name in enumerate(names):
        cells = [row[j].strip() for row in data_rows]
        non_missing = [c for c in cells if c not in missing]
        numeric = bool(non_missing) and all(_parse_number(c) is not None for c in non_missing)
        if numeric:
            values = np.array(
                [math.nan if c in missing else _parse_number(c) for c in cells], dtype=np.float64
            )
            columns.append(RawColumn(name, NUMERIC, values))
        else:
            values = np.array([None if c in missing else c for c in cells], dtype=object)
            columns.append(RawColumn(name, CATEGORICAL, values))
    return RawTable(columns)


@dataclass
class ColumnModel:
    name: str
    kind: str
    # numeric
    mean: float | None = None
    edges: list[float] | None = None
    # categorical
    mode: str | None = None
    symbols: list[str] | None = None

    @property
    def arity(self) -> int:
        if self.kind == NUMERIC:
            return len(self.edges) + 1
        # one reserved slot for symbols unseen at fit time
        return len(self.symbols) + 1


@dataclass
class PreprocessModel:
    columns: list[ColumnModel]
    bins: int

    def to_json_dict(self) -> dict:
        cols = []
        for c in self.columns:
            if c.kind == NUMERIC:
                cols.append({"name": c.name, "kind": c.kind, "mean": c.mean, "edges": c.edges})
            else:
                cols.append({"name": c.name, "kind": c.kind, "mode": c.mode, "symbols": c.symbols})
        return {"bins": self.bins, "columns": cols}

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json_dict(cls, doc: dict) -> "PreprocessModel":
        cols = []
        for c in doc["columns"]:
            if c["kind"] == NUMERIC:
                cols.append(ColumnModel(c["name"], NUMERIC, mean=float(c["mean"]),
                                        edges=[float(e) for e in c["edges"]]))
            else:
                cols.append(ColumnModel(c["name"], CATEGORICAL, mode=c["mode"],
                                        symbols=list(c["symbols"])))
        return cls(columns=cols, bins=int(doc["bins"]))

    @classmethod
    def from_json(cls, text: str) -> "PreprocessModel":
        return cls.from_json_dict(json.loads(text))


def _equal_frequency_edges(values: np.ndarray, bins: int) -> list[float]:
    """Interior cut points between distinct sorted values.

    With at most ``bins`` distinct values every value gets its own bin.
    Otherwise cut after the distinct value whose cumulative count first
    reaches each quantile boundary; duplicate cuts collapse, so heavy
    duplication can yield fewer bins than requested.
    """
    distinct, counts = np.unique(values, return_counts=True)
    m = distinct.size
    if m <= 1:
        return []
    if m <= bins:
        return [float((distinct[i] + distinct[i + 1]) / 2.0) for i in range(m - 1)]
    n = values.size
    cumulative = np.cumsum(counts)
    edges: list[float] = []
    for k in range(1, bins):
        target = k * n / bins
        split = int(np.searchsorted(cumulative, target))
        if split >= m - 1:
            continue
        edge = float((distinct[split] + distinct[split + 1]) / 2.0)
        if not edges or edge > edges[-1]:
            edges.append(edge)
    return edges


def fit_preprocessor(train: RawTable, bins: int = 10) -> PreprocessModel:
    """Learn imputation statistics and discretization from training data.

    Numeric columns get their training mean and equal-frequency edges;
    categorical columns get their mode (first-occurrence tie break) and a
    dense symbol dictionary in first-occurrence order.
    """
    if train.n_rows == 0:
        raise ValueError("training table is empty")
    if bins < 2:
        raise ValueError("bins must be at least 2")
    models = []
    for col in train.columns:
        if col.kind == NUMERIC:
            present = col.values[~np.isnan(col.values)]
            if present.size == 0:
                raise UnusableColumnError(f"column {col.name!r} has no usable values")
            models.append(ColumnModel(
                col.name, NUMERIC,
                mean=float(present.mean()),
                edges=_equal_frequency_edges(present, bins),
            ))
        else:
            present = [v for v in col.values if v is not None]
            if not present:
                raise UnusableColumnError(f"column {col.name!r} has no usable values")
            symbols: list[str] = []
            counts: dict[str, int] = {}
            for v in present:
                if v not in counts:
                    counts[v] = 0
                    symbols.append(v)
                counts[v] += 1
            mode = max(symbols, key=lambda s: counts[s])  # first occurrence wins ties
            models.append(ColumnModel(col.name, CATEGORICAL, mode=mode, symbols=symbols))
    return PreprocessModel(columns=models, bins=bins)


def apply_preprocessor(model: PreprocessModel, data: RawTable) -> DiscreteTable:
    """Impute with training statistics and map values to symbol codes.

    Numeric: value <= edge_k selects bin k; above the last edge selects
    the last bin. Categorical symbols unseen at fit time map to the
    reserved unknown code (the slot past the training dictionary) rather
    than being laundered into the mode.
    """
    if data.n_attrs != len(model.columns):
        raise SchemaError(
            f"expected {len(model.columns)} columns, got {data.n_attrs}"
        )
    for cm, col in zip(model.columns, data.columns):
        if cm.name != col.name:
            raise SchemaError(f"column mismatch: expected {cm.name!r}, got {col.name!r}")
        if cm.kind != col.kind:
            raise SchemaError(f"column {col.name!r}: expected {cm.kind} values, got {col.kind}")
    coded = np.empty((data.n_rows, data.n_attrs), dtype=np.int64)
    names = []
    for j, (cm, col) in enumerate(zip(model.columns, data.columns)):
        if cm.kind == NUMERIC:
            values = col.values.copy()
            values[np.isnan(values)] = cm.mean
            coded[:, j] = np.searchsorted(np.asarray(cm.edges), values, side="left")
            names.append([f"bin{k}" for k in range(cm.arity)])
        else:
            lookup = {s: i for i, s in enumerate(cm.symbols)}
            unknown = len(cm.symbols)
            mode_code = lookup[cm.mode]
            out = np.empty(data.n_rows, dtype=np.int64)
            for r, v in enumerate(col.values):
                if v is None:
                    out[r] = mode_code
                else:
                    out[r] = lookup.get(v, unknown)
            coded[:, j] = out
            names.append(list(cm.symbols) + ["<unknown>"])
    return DiscreteTable(coded, symbol_names=names)
