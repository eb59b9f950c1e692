"""Ordered parallel map and atomic report writing.

Jobs are pure functions of their arguments, so results do not depend on the
number of worker processes; they are always returned in submission order.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Callable, Iterable, Sequence


def run_ordered(fn: Callable, args: Sequence, threads: int = 1) -> list:
    if threads < 1:
        raise ValueError("threads must be positive")
    if threads == 1 or len(args) <= 1:
        return [fn(a) for a in args]
    with ProcessPoolExecutor(max_workers=min(threads, len(args))) as pool:
        return list(pool.map(fn, args))


def chunks(items: Sequence, size: int) -> list:
    return [items[k:k + size] for k in range(0, len(items), size)]


def atomic_write(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":"), sort_keys=False)


def jsonl_text(header: dict | None, records: Iterable[dict]) -> str:
    lines = [dumps({"config": header})] if header is not None else []
    lines.extend(dumps(r) for r in records)
    return "".join(line + "\n" for line in lines)


def csv_text(header: dict | None, records: Sequence[dict], footer: Sequence[str] = ()) -> str:
    buf = io.StringIO()
    if header is not None:
        buf.write("# config: " + dumps(header) + "\n")
    cols: list[str] = []
    for r in records:
        for k in r:
            if k not in cols:
                cols.append(k)
    w = csv.writer(buf, lineterminator="\n")
    if cols:
        w.writerow(cols)
    for r in records:
        w.writerow([_cell(r.get(c, "")) for c in cols])
    for line in footer:
        buf.write(f"# {line}\n")
    return buf.getvalue()


def _cell(v):
    if isinstance(v, (list, tuple, dict)):
        return dumps(v)
    if isinstance(v, bool):
        return "true" if v else "false"
    return v
