"""Deterministic file output: fixed float formatting, CSV, JSON, SVG."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Sequence

__all__ = ["fmt_float", "write_csv", "write_json"]


def fmt_float(x) -> str:
    """17-significant-digit decimal rendering; round-trips every double."""
    if x is None:
        return ""
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, int):
        return str(x)
    return format(float(x), ".17g")


def _cell(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, (int, bool)):
        return str(x)
    return fmt_float(x)


def write_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(_cell(x) for x in row) for row in rows)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def _render(obj) -> str:
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int,)):
        return str(obj)
    if isinstance(obj, float):
        return fmt_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        inner = ", ".join(f"{json.dumps(str(k))}: {_render(v)}" for k, v in obj.items())
        return "{" + inner + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_render(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj)}")


def write_json(path: str | Path, obj) -> None:
    """UTF-8 JSON with insertion-ordered keys and 17-digit floats."""
    Path(path).write_text(_render(obj) + "\n", encoding="utf-8", newline="\n")
