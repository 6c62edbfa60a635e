"""Access to the example series.

Files are looked up first in ``$SUBSETAR_DATA`` and then in the package's
``data`` directory.  See ``data/PROVENANCE.md`` for sources.
"""

import os
from pathlib import Path

from .core import DatasetUnavailable

DATA_DIR = Path(__file__).resolve().parent / "data"

FILES = {
    "sunspots": "sunspots.txt",
    "seriesA": "seriesA.txt",
    "ninemile": "ninemile.txt",
}

#: Expected lengths, used to reject truncated drop-in files.
LENGTHS = {"sunspots": 2820, "seriesA": 197, "ninemile": 771}


def dataset_path(name: str) -> Path:
    if name not in FILES:
        raise DatasetUnavailable(f"unknown dataset {name!r}; known: {sorted(FILES)}")
    dirs = []
    if os.environ.get("SUBSETAR_DATA"):
        dirs.append(Path(os.environ["SUBSETAR_DATA"]))
    dirs.append(DATA_DIR)
    for d in dirs:
        path = d / FILES[name]
        if path.is_file():
            return path
    raise DatasetUnavailable(
        f"dataset {name!r} not found; put {FILES[name]} in $SUBSETAR_DATA or {DATA_DIR}")


def available(name: str) -> bool:
    try:
        dataset_path(name)
    except DatasetUnavailable:
        return False
    return True


def load(name: str):
    """Raw values of a named dataset as a float array."""
    from .io import read_series_file

    values = read_series_file(dataset_path(name))
    if name in LENGTHS and values.size != LENGTHS[name]:
        raise DatasetUnavailable(
            f"dataset {name!r} has {values.size} values, expected {LENGTHS[name]}")
    return values
