import hashlib
import json
import math
from datetime import datetime
from pathlib import Path
from typing import Any, Iterable, Sequence, Union

import numpy as np
import pandas as pd


class DateTimeEncoder(json.JSONEncoder):
    """JSON encoder that handles datetime objects and numpy scalars/arrays"""
    def default(self, obj: Any) -> Any:
        if isinstance(obj, datetime):
            return obj.isoformat()
        if isinstance(obj, np.integer):
            return int(obj)
        if isinstance(obj, np.floating):
            return float(obj)
        if isinstance(obj, np.ndarray):
            return obj.tolist()
        return super().default(obj)


def format_real(value: float) -> str:
    """Shortest repr that round-trips a float; 'nan'/'inf' spelled out"""
    if value is None:
        return ""
    value = float(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return repr(value)


def _tsv_cell(value: Any) -> str:
    if isinstance(value, (float, np.floating)):
        return format_real(value)
    if value is None:
        return ""
    return str(value)


def write_tsv(path: Union[str, Path], header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    """Write a tab separated table; floats keep full precision, cells holding a tab are quoted"""
    path = Path(path)
    frame = pd.DataFrame([[_tsv_cell(cell) for cell in row] for row in rows], columns=list(header))
    frame.to_csv(path, sep="\t", index=False, lineterminator="\n", encoding="utf-8")
    return path


def write_json(path: Union[str, Path], content: Any) -> Path:
    path = Path(path)
    path.write_text(json.dumps(content, indent=2, cls=DateTimeEncoder) + "\n", encoding="utf-8")
    return path


def file_digest(path: Union[str, Path]) -> str:
    """sha256 of a file's bytes"""
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()
