"""Write-then-rename helpers and fixed float formatting for artifacts."""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from pathlib import Path

FLOAT_FORMAT = "%.17g"


def fmt(value):
    """Round-trippable text for a number; other values pass through ``str``."""
    if isinstance(value, float):
        return FLOAT_FORMAT % value
    return str(value)


def atomic_write_text(path, text):
    """Write ``text`` next to ``path`` and rename over it, so readers never see a partial file."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def csv_text(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def json_text(data):
    """Sorted-key JSON; floats use Python's shortest round-trip repr."""
    return json.dumps(data, indent=2, sort_keys=True) + "\n"
