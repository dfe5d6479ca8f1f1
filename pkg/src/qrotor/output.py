"""Deterministic CSV/JSON emission and the worker-pool map helper.

Every float is rendered with nine significant digits in scientific notation,
and orderings are fixed by construction, so identical configurations produce
byte-identical artifacts regardless of platform or parallelism.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from pathlib import Path


def fmt_float(x: float) -> str:
    """Nine significant digits, scientific notation."""
    return f"{float(x):.8e}"


def _fmt_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return fmt_float(value)
    return str(value)


def write_csv(path, header, rows) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt_cell(c) for c in row) for row in rows)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def render_json(obj, indent: int = 0) -> str:
    """Minimal JSON renderer with controlled float formatting.

    The standard encoder prints shortest-roundtrip floats, which is
    deterministic but not the fixed nine-digit convention; rendering by hand
    keeps both the float format and the key order under our control.
    """
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            f'{inner}"{k}": {render_json(v, indent + 1)}' for k, v in obj.items()
        ]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        seq = list(obj)
        if not seq:
            return "[]"
        flat = all(not isinstance(v, (dict, list, tuple)) for v in seq)
        if flat:
            return "[" + ", ".join(render_json(v) for v in seq) + "]"
        items = [f"{inner}{render_json(v, indent + 1)}" for v in seq]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return fmt_float(obj)
    escaped = str(obj).replace("\\", "\\\\").replace('"', '\\"')
    return f'"{escaped}"'


def write_json(path, obj) -> None:
    Path(path).write_text(render_json(obj) + "\n", encoding="utf-8")


def parallel_map(fn, items, workers: int = 1) -> list:
    """Order-preserving map over items, optionally on a thread pool.

    Each item is computed independently with identical arithmetic, so results
    do not depend on the worker count.
    """
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
