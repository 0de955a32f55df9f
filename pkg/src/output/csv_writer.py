"""CSV files with `# key=value` header comments.

Every file written here starts with comment lines recording seeds, config
hash and units; readers skip them and return them as a dict.
"""

from __future__ import annotations

import csv
from collections.abc import Iterable, Mapping, Sequence
from pathlib import Path
from typing import Any

import numpy as np

from ..errors import FormatError

FLOAT_FORMAT = "%.12g"


def format_value(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, (float, np.floating)):
        return FLOAT_FORMAT % value
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    return str(value)


def write_csv(
    path: Path,
    header: Sequence[str],
    rows: Iterable[Sequence[Any]],
    meta: Mapping[str, Any] | None = None,
    footer: Mapping[str, Any] | None = None,
) -> Path:
    """Write rows under `header`, preceded by `# key=value` comment lines.

    `footer` entries are appended after the rows in the same comment form.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        for key, value in (meta or {}).items():
            f.write(f"# {key}={format_value(value)}\n")
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_value(v) for v in row])
        for key, value in (footer or {}).items():
            f.write(f"# {key}={format_value(value)}\n")
    return path


def read_csv(path: Path) -> tuple[dict[str, str], list[str], list[list[str]]]:
    """Return (comment meta, header, rows as strings)."""
    path = Path(path)
    if not path.exists():
        raise FormatError(f"file not found: {path}")
    meta: dict[str, str] = {}
    lines: list[str] = []
    with open(path, encoding="utf-8") as f:
        for line in f:
            if line.startswith("#"):
                key, sep, value = line[1:].strip().partition("=")
                if sep:
                    meta[key.strip()] = value.strip()
            elif line.strip():
                lines.append(line)
    if not lines:
        raise FormatError(f"{path} has no header row")
    reader = csv.reader(lines)
    header = next(reader)
    rows = [row for row in reader]
    for i, row in enumerate(rows):
        if len(row) != len(header):
            raise FormatError(f"{path}: row {i + 1} has {len(row)} fields, expected {len(header)}")
    return meta, header, rows


def column_floats(header: list[str], rows: list[list[str]], name: str) -> np.ndarray:
    """One named column as floats."""
    try:
        j = header.index(name)
        return np.array([float(r[j]) for r in rows], dtype=float)
    except ValueError as e:
        raise FormatError(f"bad or missing column {name!r}: {e}") from e
