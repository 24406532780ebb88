"""Readers for the CSV and JSON files written by the ``rulenet`` command.

Each CSV starts with a metadata comment::

    # schema_version=1 table=levels config_hash=0123456789abcdef

followed by a header row. Readers reject any schema version other than
``SCHEMA_VERSION`` and check that the columns a consumer needs are present.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

SCHEMA_VERSION = 1

# Columns each table is guaranteed to carry, in file order.
COLUMNS = {
    "levels": ["level", "mean_V", "mean_prim", "mean_logV", "surviving_runs", "log_mean_V",
               "sd_V", "sd_prim", "log_mean_V_surviving", "extinction_cdf"],
    "heights": ["height", "count", "censored"],
    "phases": ["z", "psi", "phi", "dphi", "phase", "boundary", "n0", "n0p", "m0", "m0p",
               "empty_network_prob", "empty_network_diverges"],
    "predictions": ["level", "plain", "k0", "k1", "prim", "log_k0", "log_prim"],
    "extinction": ["n", "u0n", "lower", "upper", "regime", "monte_carlo", "stderr"],
    "logsize": ["n", "expected_log", "log_expected", "relative_gap", "harmonic", "survival"],
    "components": ["level", "words", "isolated", "two_molecule", "open_flagged",
                   "isolated_closed_form", "two_molecule_closed_form"],
    "ratios": ["label", "level", "empirical", "predicted", "ratio", "log_ratio"],
    "scan": ["z", "outcome", "runs", "extinct", "censored", "budget_exceeded"],
}


class SchemaError(ValueError):
    """A file whose version, table name or columns do not match."""


@dataclass
class Table:
    name: str
    config_hash: str
    columns: list[str]
    rows: list[dict[str, str]] = field(default_factory=list)

    def numbers(self, column: str) -> list[float]:
        """The column as floats; empty cells become NaN."""
        if column not in self.columns:
            raise SchemaError(f"table {self.name} has no column {column!r}")
        return [float(r[column]) if r[column] != "" else math.nan for r in self.rows]


def _parse_metadata(line: str) -> dict[str, str]:
    if not line.startswith("#"):
        raise SchemaError("missing schema_version metadata line")
    fields = {}
    for item in line[1:].split():
        key, _, value = item.partition("=")
        fields[key] = value
    version = fields.get("schema_version")
    if version is None:
        raise SchemaError("missing schema_version")
    if version != str(SCHEMA_VERSION):
        raise SchemaError(f"unknown schema_version {version}")
    return fields


def read_table(path: str | Path, expected: str | None = None) -> Table:
    """Reads a CSV table, checking its version, name and required columns."""
    with open(path, newline="") as f:
        meta = _parse_metadata(f.readline())
        name = meta.get("table", "")
        if expected is not None and name != expected:
            raise SchemaError(f"expected table {expected}, found {name!r}")
        reader = csv.reader(f)
        try:
            columns = next(reader)
        except StopIteration:
            raise SchemaError(f"table {name} has no header") from None
        missing = [c for c in COLUMNS.get(name, []) if c not in columns]
        if missing:
            raise SchemaError(f"table {name} lacks columns {missing}")
        rows = []
        for cells in reader:
            if not cells:
                continue
            if len(cells) != len(columns):
                raise SchemaError(f"table {name} has a row of {len(cells)} cells")
            rows.append(dict(zip(columns, cells)))
    return Table(name, meta.get("config_hash", ""), columns, rows)


def read_json(path: str | Path, expected: str | None = None) -> dict:
    """Reads a JSON summary, checking its version and table name."""
    with open(path) as f:
        doc = json.load(f)
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise SchemaError(f"unknown schema_version {doc.get('schema_version')!r}")
    if expected is not None and doc.get("table") != expected:
        raise SchemaError(f"expected {expected}, found {doc.get('table')!r}")
    return doc
