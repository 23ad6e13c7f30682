"""Deterministic CSV/JSON rendering of result tables."""

from __future__ import annotations

import json
from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal
from typing import Sequence, Union

Cell = Union[float, int, bool]

_QUANTUM = Decimal("0.000001")


@dataclass(frozen=True)
class OutputTable:
    header: tuple[str, ...]
    rows: tuple[tuple[Cell, ...], ...]

    def __post_init__(self) -> None:
        width = len(self.header)
        for row in self.rows:
            if len(row) != width:
                raise ValueError(f"row {row!r} does not match header of width {width}")


def make_table(header: Sequence[str], rows: Sequence[Sequence[Cell]]) -> OutputTable:
    return OutputTable(tuple(header), tuple(tuple(r) for r in rows))


def format_real(x: float) -> str:
    """Six fractional digits, round-half-even on the exact binary value."""
    text = str(Decimal(float(x)).quantize(_QUANTUM, rounding=ROUND_HALF_EVEN))
    return "0.000000" if text == "-0.000000" else text


def _csv_cell(v: Cell) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    return format_real(v)


def _json_cell(v: Cell):
    if isinstance(v, (bool, int)):
        return v
    v = float(v)
    return 0.0 if v == 0 else v


def to_csv(table: OutputTable) -> str:
    lines = [",".join(table.header)]
    lines += [",".join(_csv_cell(v) for v in row) for row in table.rows]
    return "\n".join(lines) + "\n"


def to_json(table: OutputTable) -> str:
    records = [dict(zip(table.header, map(_json_cell, row))) for row in table.rows]
    return json.dumps(records, indent=2) + "\n"


def render(table: OutputTable, fmt: str = "csv") -> str:
    if fmt == "csv":
        return to_csv(table)
    if fmt == "json":
        return to_json(table)
    raise ValueError(f"unknown format {fmt!r}")
