"""Small shared helpers."""

from __future__ import annotations

import os
import tempfile
from contextlib import contextmanager
from pathlib import Path


@contextmanager
def atomic_write(path, mode: str = "w", encoding: str | None = None):
    """Write to a temp file in the target directory, rename into place on success.

    Nothing appears at `path` unless the whole write completes, so consumers
    never observe partial output.
    """
    path = Path(path)
    if "w" not in mode:
        raise ValueError("atomic_write requires a write mode")
    kwargs = {"encoding": encoding or "utf-8"} if "b" not in mode else {}
    fd, tmp_name = tempfile.mkstemp(dir=path.parent or Path("."), prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, mode, **kwargs) as handle:
            yield handle
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise
