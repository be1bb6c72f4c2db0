"""Versioned CSV/JSON tables emitted by the command-line tools.

CSV files start with ``#``-prefixed metadata lines (schema, command, config,
summary; the last three as JSON) followed by a header row and data rows.
JSON files hold the same four fields plus ``columns`` and ``rows``. Floats
are written with 9 significant digits in both.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

SCHEMA = "pascs-qkd/1"


class FormatError(ValueError):
    pass


@dataclass
class Table:
    command: str
    columns: list[str]
    rows: list[list]
    config: dict = field(default_factory=dict)
    summary: dict = field(default_factory=dict)
    schema: str = SCHEMA

    def column(self, name: str) -> list:
        i = self.columns.index(name)
        return [row[i] for row in self.rows]

    def records(self) -> list[dict]:
        return [dict(zip(self.columns, row)) for row in self.rows]


def _fmt(v):
    if isinstance(v, bool) or v is None:
        return v
    if isinstance(v, float):
        if math.isnan(v) or math.isinf(v):
            return v
        return float(f"{v:.9g}")
    if isinstance(v, dict):
        return {k: _fmt(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_fmt(x) for x in v]
    if hasattr(v, "item"):  # numpy scalar
        return _fmt(v.item())
    return v


def _cell(v) -> str:
    v = _fmt(v)
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return ""
    if isinstance(v, float):
        return f"{v:.9g}"
    return str(v)


def _parse_cell(s: str):
    if s == "":
        return None
    if s in ("true", "false"):
        return s == "true"
    try:
        return int(s)
    except ValueError:
        pass
    try:
        return float(s)
    except ValueError:
        return s


def dumps(table: Table, fmt: str) -> str:
    if fmt == "json":
        doc = {
            "schema": table.schema,
            "command": table.command,
            "config": _fmt(table.config),
            "summary": _fmt(table.summary),
            "columns": table.columns,
            "rows": [_fmt(list(r)) for r in table.rows],
        }
        return json.dumps(doc, sort_keys=True, indent=1, allow_nan=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        buf.write(f"# schema: {table.schema}\n")
        buf.write(f"# command: {table.command}\n")
        buf.write(f"# config: {json.dumps(_fmt(table.config), sort_keys=True)}\n")
        buf.write(f"# summary: {json.dumps(_fmt(table.summary), sort_keys=True)}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(table.columns)
        for row in table.rows:
            w.writerow([_cell(v) for v in row])
        return buf.getvalue()
    raise FormatError(f"unknown format {fmt!r}")


def loads(text: str) -> Table:
    if text.lstrip().startswith("{"):
        doc = json.loads(text)
        if doc.get("schema") != SCHEMA:
            raise FormatError(f"unsupported schema {doc.get('schema')!r}")
        return Table(doc["command"], doc["columns"], [list(r) for r in doc["rows"]], doc["config"], doc["summary"])
    meta = {}
    body = []
    for line in text.splitlines():
        if line.startswith("# "):
            key, _, value = line[2:].partition(": ")
            meta[key] = value
        else:
            body.append(line)
    if meta.get("schema") != SCHEMA:
        raise FormatError(f"unsupported schema {meta.get('schema')!r}")
    reader = csv.reader(body)
    columns = next(reader)
    rows = [[_parse_cell(c) for c in r] for r in reader]
    return Table(meta["command"], columns, rows, json.loads(meta["config"]), json.loads(meta["summary"]))


def write_table(table: Table, path: str | Path | None, fmt: str) -> str:
    text = dumps(table, fmt)
    if path is not None:
        Path(path).write_text(text)
    return text


def read_table(path: str | Path) -> Table:
    return loads(Path(path).read_text())
