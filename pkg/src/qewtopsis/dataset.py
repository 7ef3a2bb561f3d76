"""
Supplier data ingestion and indicator derivation.

Raw data is one row per supplier with one column per period (supply
quantity), optionally paired with the matching order quantities. Four
indicators are derived per supplier:

=====  ===========================  =========
name   meaning                      direction
=====  ===========================  =========
EV     variance of supply           min
S      total supply                 max
L      number of periods supplied   max
T      sum of (supply - order)      max
=====  ===========================  =========
"""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "Direction",
    "SupplierSeries",
    "RawSupplyData",
    "IndicatorMatrix",
    "SupplyCsvSchema",
    "ParseError",
    "parse_supply_csv",
    "attach_orders",
    "format_supply_csv",
    "parse_indicator_csv",
    "format_indicator_csv",
    "supply_stability",
    "supply_quantity",
    "supply_continuity",
    "ambiguous_capacity",
    "derive_indicators",
    "INDICATOR_NAMES",
]

INDICATOR_NAMES = ("EV", "S", "L", "T")


class Direction(str, enum.Enum):
    MIN = "min"
    MAX = "max"

    @classmethod
    def parse(cls, text: str) -> "Direction":
        key = text.strip().lower()
        aliases = {"min": cls.MIN, "cost": cls.MIN, "max": cls.MAX, "benefit": cls.MAX}
        if key not in aliases:
            raise ValueError(f"unknown direction {text!r} (expected 'min' or 'max')")
        return aliases[key]


class ParseError(ValueError):
    """Malformed input data. ``row`` is the 1-based line number, if known."""

    def __init__(self, message: str, row: int | None = None):
        self.row = row
        super().__init__(f"row {row}: {message}" if row is not None else message)


def _as_quantities(values, what: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"{what} must be one-dimensional")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{what} contains non-finite values")
    if np.any(arr < 0):
        raise ValueError(f"{what} contains negative values")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class SupplierSeries:
    id: str
    supply: np.ndarray
    order: np.ndarray | None = None

    def __post_init__(self):
        object.__setattr__(self, "supply", _as_quantities(self.supply, f"supply of {self.id}"))
        if self.order is not None:
            order = _as_quantities(self.order, f"order of {self.id}")
            if order.shape != self.supply.shape:
                raise ValueError(f"order and supply lengths differ for supplier {self.id}")
            object.__setattr__(self, "order", order)


@dataclass(frozen=True)
class RawSupplyData:
    suppliers: tuple[SupplierSeries, ...]
    period_count: int

    def __post_init__(self):
        object.__setattr__(self, "suppliers", tuple(self.suppliers))
        if self.period_count < 1:
            raise ValueError("period_count must be positive")
        seen = set()
        for s in self.suppliers:
            if len(s.supply) != self.period_count:
                raise ValueError(
                    f"supplier {s.id} has {len(s.supply)} periods, expected {self.period_count}"
                )
            if s.id in seen:
                raise ValueError(f"duplicate supplier id {s.id!r}")
            seen.add(s.id)

    @property
    def ids(self) -> list[str]:
        return [s.id for s in self.suppliers]

    @property
    def has_orders(self) -> bool:
        return bool(self.suppliers) and all(s.order is not None for s in self.suppliers)

    def subset(self, indices: Iterable[int]) -> "RawSupplyData":
        return RawSupplyData(tuple(self.suppliers[i] for i in indices), self.period_count)

    def __len__(self):
        return len(self.suppliers)


@dataclass(frozen=True)
class IndicatorMatrix:
    """Decision matrix: rows are alternatives, columns are indicators."""

    ids: tuple[str, ...]
    values: np.ndarray
    directions: tuple[Direction, ...]
    names: tuple[str, ...] = field(default=())

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 2:
            raise ValueError("indicator values must be a 2-D matrix")
        m, n = values.shape
        if m < 2 or n < 1:
            raise ValueError(f"need at least 2 rows and 1 column, got {m}x{n}")
        if not np.all(np.isfinite(values)):
            raise ValueError("indicator matrix contains NaN or infinite entries")
        values.setflags(write=False)
        ids = tuple(str(i) for i in self.ids)
        if len(ids) != m:
            raise ValueError(f"{len(ids)} ids for {m} rows")
        dirs = tuple(d if isinstance(d, Direction) else Direction.parse(d) for d in self.directions)
        if len(dirs) != n:
            raise ValueError(f"{len(dirs)} directions for {n} columns")
        names = tuple(self.names) or tuple(f"c{j + 1}" for j in range(n))
        if len(names) != n:
            raise ValueError(f"{len(names)} names for {n} columns")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "ids", ids)
        object.__setattr__(self, "directions", dirs)
        object.__setattr__(self, "names", names)

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    def take_rows(self, indices: Sequence[int]) -> "IndicatorMatrix":
        idx = list(indices)
        return IndicatorMatrix(
            tuple(self.ids[i] for i in idx), self.values[idx], self.directions, self.names
        )


# -- indicators ---------------------------------------------------------------


def supply_stability(series: SupplierSeries) -> float:
    """Population variance of the supply series, ``E[X^2] - E[X]^2``."""
    x = series.supply
    if x.size == 0:
        raise ValueError("supply series is empty")
    mu = x.mean()
    # E[X^2] - mu^2 can go slightly negative through cancellation
    return max(float(np.mean(x * x) - mu * mu), 0.0)


def supply_quantity(series: SupplierSeries) -> float:
    return float(math.fsum(series.supply))


def supply_continuity(series: SupplierSeries) -> int:
    return int(np.count_nonzero(series.supply > 0))


def ambiguous_capacity(series: SupplierSeries) -> float:
    """Signed total of over/under delivery, ``sum(supply - order)``."""
    if series.order is None:
        raise ValueError(f"supplier {series.id} has no order data")
    return float(math.fsum(series.supply - series.order))


def derive_indicators(data: RawSupplyData) -> IndicatorMatrix:
    if not data.has_orders:
        missing = [s.id for s in data.suppliers if s.order is None]
        raise ValueError(f"order data missing for suppliers: {', '.join(missing[:5])}")
    rows = [
        (
            supply_stability(s),
            supply_quantity(s),
            supply_continuity(s),
            ambiguous_capacity(s),
        )
        for s in data.suppliers
    ]
    return IndicatorMatrix(
        ids=tuple(data.ids),
        values=np.array(rows, dtype=float),
        directions=(Direction.MIN, Direction.MAX, Direction.MAX, Direction.MAX),
        names=INDICATOR_NAMES,
    )


# -- CSV ------------------------------------------------------------------------


@dataclass(frozen=True)
class SupplyCsvSchema:
    """Column mapping for a supply CSV.

    ``period_columns=None`` means every column except the id column (and the
    order columns, if any), in file order.
    """

    id_column: str = "id"
    period_columns: tuple[str, ...] | None = None
    order_columns: tuple[str, ...] | None = None
    delimiter: str = ","


def _parse_quantity(text: str, row: int, column: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ParseError(f"column {column!r}: not a number: {text!r}", row) from None
    if not math.isfinite(value):
        raise ParseError(f"column {column!r}: non-finite quantity {text!r}", row)
    if value < 0:
        raise ParseError(f"column {column!r}: negative quantity {text!r}", row)
    return value


def _read_table(text: str, delimiter: str) -> tuple[list[str], list[tuple[int, list[str]]]]:
    reader = csv.reader(io.StringIO(text), delimiter=delimiter)
    rows = [(reader.line_num, r) for r in reader if any(cell.strip() for cell in r)]
    if not rows:
        raise ParseError("input is empty (header row required)")
    header = [h.strip() for h in rows[0][1]]
    if len(set(header)) != len(header):
        raise ParseError("duplicate column names in header", rows[0][0])
    return header, rows[1:]


def _column_index(header: list[str], names: Sequence[str]) -> list[int]:
    missing = [c for c in names if c not in header]
    if missing:
        raise ParseError(f"missing columns: {', '.join(missing)}", 1)
    return [header.index(c) for c in names]


def parse_supply_csv(text: str, schema: SupplyCsvSchema = SupplyCsvSchema()) -> RawSupplyData:
    """Parse one-row-per-supplier CSV text into :class:`RawSupplyData`."""
    header, rows = _read_table(text, schema.delimiter)
    (id_idx,) = _column_index(header, [schema.id_column])
    order_cols = list(schema.order_columns or ())
    if schema.period_columns is None:
        period_cols = [h for h in header if h != schema.id_column and h not in order_cols]
    else:
        period_cols = list(schema.period_columns)
    if not period_cols:
        raise ParseError("no period columns", 1)
    if order_cols and len(order_cols) != len(period_cols):
        raise ParseError(
            f"{len(order_cols)} order columns for {len(period_cols)} period columns", 1
        )
    p_idx = _column_index(header, period_cols)
    o_idx = _column_index(header, order_cols)

    suppliers = []
    seen: set[str] = set()
    for line, cells in rows:
        if len(cells) != len(header):
            raise ParseError(f"expected {len(header)} fields, found {len(cells)}", line)
        sid = cells[id_idx].strip()
        if not sid:
            raise ParseError("empty supplier id", line)
        if sid in seen:
            raise ParseError(f"duplicate supplier id {sid!r}", line)
        seen.add(sid)
        supply = [_parse_quantity(cells[k], line, header[k]) for k in p_idx]
        order = [_parse_quantity(cells[k], line, header[k]) for k in o_idx] if o_idx else None
        suppliers.append(SupplierSeries(sid, np.array(supply), None if order is None else np.array(order)))
    if not suppliers:
        raise ParseError("no supplier rows")
    return RawSupplyData(tuple(suppliers), len(period_cols))


def attach_orders(
    data: RawSupplyData, order_text: str, schema: SupplyCsvSchema = SupplyCsvSchema()
) -> RawSupplyData:
    """Merge a parallel order-quantity CSV (same ids, same row order) into ``data``."""
    orders = parse_supply_csv(order_text, schema)
    if orders.period_count != data.period_count:
        raise ParseError(
            f"order file has {orders.period_count} periods, supply file has {data.period_count}"
        )
    if orders.ids != data.ids:
        for k, (a, b) in enumerate(zip(data.ids, orders.ids)):
            if a != b:
                # +2: header line plus 1-based rows
                raise ParseError(f"order file id {b!r} does not match supply id {a!r}", k + 2)
        raise ParseError(f"order file has {len(orders)} suppliers, supply file has {len(data)}")
    merged = tuple(
        SupplierSeries(s.id, s.supply, o.supply) for s, o in zip(data.suppliers, orders.suppliers)
    )
    return RawSupplyData(merged, data.period_count)


def format_supply_csv(data: RawSupplyData, delimiter: str = ",", include_orders: bool = True) -> str:
    """Inverse of :func:`parse_supply_csv`; orders go in ``o1..oN`` columns."""
    periods = [f"p{t + 1}" for t in range(data.period_count)]
    with_orders = include_orders and data.has_orders
    header = ["id", *periods] + ([f"o{t + 1}" for t in range(data.period_count)] if with_orders else [])
    buf = io.StringIO()
    writer = csv.writer(buf, delimiter=delimiter, lineterminator="\n")
    writer.writerow(header)
    for s in data.suppliers:
        row = [s.id, *map(repr, s.supply.tolist())]
        if with_orders:
            row += list(map(repr, s.order.tolist()))
        writer.writerow(row)
    return buf.getvalue()


def parse_indicator_csv(text: str, delimiter: str = ",") -> IndicatorMatrix:
    """Parse a pre-derived indicator table.

    Layout::

        id,EV,S,L,T
        direction,min,max,max,max
        S001,0.5,120,48,3
        ...
    """
    header, rows = _read_table(text, delimiter)
    if len(header) < 2:
        raise ParseError("need an id column and at least one indicator column", 1)
    if not rows:
        raise ParseError("missing direction row", 2)
    line, drow = rows[0]
    if len(drow) != len(header):
        raise ParseError(f"expected {len(header)} fields, found {len(drow)}", line)
    try:
        directions = tuple(Direction.parse(d) for d in drow[1:])
    except ValueError as exc:
        raise ParseError(str(exc), line) from None

    ids, values = [], []
    for line, cells in rows[1:]:
        if len(cells) != len(header):
            raise ParseError(f"expected {len(header)} fields, found {len(cells)}", line)
        row = []
        for name, cell in zip(header[1:], cells[1:]):
            try:
                v = float(cell)
            except ValueError:
                raise ParseError(f"column {name!r}: not a number: {cell!r}", line) from None
            if not math.isfinite(v):
                raise ParseError(f"column {name!r}: non-finite value {cell!r}", line)
            row.append(v)
        ids.append(cells[0].strip())
        values.append(row)
    if len(set(ids)) != len(ids):
        raise ParseError("duplicate ids")
    try:
        return IndicatorMatrix(tuple(ids), np.array(values, dtype=float).reshape(len(ids), -1),
                               directions, tuple(header[1:]))
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def format_indicator_csv(matrix: IndicatorMatrix, delimiter: str = ",") -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, delimiter=delimiter, lineterminator="\n")
    writer.writerow(["id", *matrix.names])
    writer.writerow(["direction", *(d.value for d in matrix.directions)])
    for sid, row in zip(matrix.ids, matrix.values):
        writer.writerow([sid, *map(repr, row.tolist())])
    return buf.getvalue()
