"""Byte-stable CSV/JSON artifact emission.

Identical inputs produce identical bytes: fixed field order (dataclass /
dict insertion order), floats as ``%.17g`` (exact float64 round-trip), LF
line endings, UTF-8, one trailing newline.  The resolved run configuration
is echoed into every artifact -- as a ``# config=...`` preamble line in CSV
and a top-level ``"config"`` key in JSON.
"""

from __future__ import annotations

import dataclasses
import json
import re
from typing import Iterable, List, Optional, Sequence, Tuple

__all__ = [
    "ReportWriteError",
    "emit_report",
    "emit_json",
    "read_report_csv",
]


class ReportWriteError(RuntimeError):
    """I/O failure while writing an artifact; message carries the path."""


def _fmt_scalar(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".17g")
    if isinstance(v, int):
        return str(v)
    if v is None:
        return ""
    s = str(v)
    if "," in s or "\n" in s or '"' in s:
        raise ValueError(f"CSV field value needs quoting, refusing: {s!r}")
    return s


def _record_fields(rec) -> List[Tuple[str, object]]:
    if dataclasses.is_dataclass(rec) and not isinstance(rec, type):
        return [(f.name, getattr(rec, f.name)) for f in dataclasses.fields(rec)]
    if isinstance(rec, dict):
        return list(rec.items())
    raise TypeError(f"records must be dataclasses or dicts, got {type(rec)!r}")


def _config_json(config) -> str:
    if dataclasses.is_dataclass(config) and not isinstance(config, type):
        config = dataclasses.asdict(config)
    return json.dumps(config, sort_keys=True, separators=(",", ":"))


def _write_text(path: str, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as e:
        raise ReportWriteError(f"cannot write report to {path}: {e}") from e


def emit_report(records: Iterable, format: str, path: str, config=None) -> None:
    """Write a table of records as CSV or JSON.  Empty input is an error and
    creates no file."""
    records = list(records)
    if not records:
        raise ValueError(f"no records to emit; refusing to create {path}")
    fields = [name for name, _ in _record_fields(records[0])]

    if format == "csv":
        lines = []
        if config is not None:
            lines.append("# config=" + _config_json(config))
        lines.append(",".join(fields))
        for rec in records:
            items = _record_fields(rec)
            if [name for name, _ in items] != fields:
                raise ValueError("all records must share one field set")
            lines.append(",".join(_fmt_scalar(v) for _, v in items))
        _write_text(path, "\n".join(lines) + "\n")
    elif format == "json":
        payload = {
            "config": dataclasses.asdict(config)
            if dataclasses.is_dataclass(config) and not isinstance(config, type)
            else config,
            "records": [dict(_record_fields(rec)) for rec in records],
        }
        _write_text(path, json.dumps(payload, indent=2) + "\n")
    else:
        raise ValueError(f"format must be 'csv' or 'json', got {format!r}")


def emit_json(payload: dict, path: str, config=None) -> None:
    """Write a summary object (config echoed as the first key)."""
    body = {"config": None, **payload}
    body["config"] = (
        dataclasses.asdict(config)
        if dataclasses.is_dataclass(config) and not isinstance(config, type)
        else config
    )
    _write_text(path, json.dumps(body, indent=2) + "\n")


_INT_RE = re.compile(r"[+-]?\d+\Z")


def _parse_cell(s: str):
    if _INT_RE.match(s):
        return int(s)
    try:
        return float(s)
    except ValueError:
        pass
    if s == "true":
        return True
    if s == "false":
        return False
    if s == "":
        return None
    return s


def read_report_csv(path: str):
    """Parse an emitted CSV back into (config, rows-as-dicts).

    Ints, floats (17-significant-digit, exact round-trip), booleans, and
    empty cells are restored to Python values.
    """
    with open(path, "r", encoding="utf-8", newline="") as fh:
        text = fh.read()
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    config = None
    i = 0
    while i < len(lines) and lines[i].startswith("#"):
        if lines[i].startswith("# config="):
            config = json.loads(lines[i][len("# config="):])
        i += 1
    header = lines[i].split(",")
    rows = []
    for line in lines[i + 1:]:
        cells = line.split(",")
        if len(cells) != len(header):
            raise ValueError(f"malformed CSV row in {path}: {line!r}")
        rows.append({k: _parse_cell(c) for k, c in zip(header, cells)})
    return config, rows
