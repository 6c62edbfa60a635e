"""SeriesFile reading/writing and JSON encoding."""

import hashlib
import json
import math
from pathlib import Path

import numpy as np

from .core import ParseError


def _is_number(token: str) -> bool:
    try:
        float(token)
    except ValueError:
        return False
    return True


def read_series_file(path) -> np.ndarray:
    """One decimal value per line, LF or CRLF endings.

    A single header line is allowed when its first token is not numeric
    (so a one-column CSV with a header reads as-is).  Blank lines are
    ignored.  Any other unparsable or non-finite line raises ParseError
    naming the 1-based line number.
    """
    text = Path(path).read_bytes().decode("utf-8-sig")
    values = []
    seen_data = False
    header_used = False
    for lineno, line in enumerate(text.splitlines(), start=1):
        token = line.strip().split(",")[0].strip().strip('"')
        if not token:
            continue
        if not _is_number(token):
            if not seen_data and not header_used:
                header_used = True
                continue
            raise ParseError(f"{path}:{lineno}: cannot parse {line.strip()!r} as a number")
        val = float(token)
        if not math.isfinite(val):
            raise ParseError(f"{path}:{lineno}: non-finite value {token!r}")
        values.append(val)
        seen_data = True
    return np.array(values, dtype=float)


def write_series_file(path, values) -> None:
    # repr round-trips doubles exactly
    Path(path).write_text("".join(repr(float(v)) + "\n" for v in values))


def file_digest(path) -> str:
    return "sha256:" + hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _default(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, tuple):
        return list(obj)
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def _clean(obj):
    # JSON has no NaN/inf
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, np.generic):
        return _clean(obj.item())
    return obj


def dumps(doc) -> str:
    return json.dumps(_clean(doc), indent=2, sort_keys=True, default=_default) + "\n"
