# services/storage/files.py
"""
Atomic output files: everything is written to a temp file in the target
directory and renamed over the destination, so readers never see a
half-written output.
"""

from __future__ import annotations
import json
import os
import tempfile
from pathlib import Path
from typing import Any, Callable, Dict


def atomic_write(path: str | Path, writer: Callable[[Any], None], mode: str = "wb") -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    kwargs = {} if "b" in mode else {"encoding": "utf-8", "newline": ""}
    fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, mode, **kwargs) as f:
            writer(f)
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise
    return path


def write_json(path: str | Path, data: Dict[str, Any]) -> Path:
    """Sorted-key, indented JSON with a trailing newline."""
    text = json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    return atomic_write(path, lambda f: f.write(text), mode="w")
