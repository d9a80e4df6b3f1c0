"""JSON encoding helpers.

Complex matrices are nested row-major lists whose entries are ``[re, im]``
pairs. Floats are written with ``repr`` so they round-trip exactly.
"""
from __future__ import annotations

import json
from typing import Any

import numpy as np


def encode_matrix(m: np.ndarray) -> list:
    m = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def decode_matrix(data: Any) -> np.ndarray:
    """Accept ``[re, im]`` pairs or plain real numbers as entries."""
    rows = []
    for row in data:
        out = []
        for z in row:
            if isinstance(z, (list, tuple)):
                if len(z) != 2:
                    raise ValueError(f"complex entry must be [re, im], got {z!r}")
                out.append(complex(float(z[0]), float(z[1])))
            else:
                out.append(complex(float(z)))
        rows.append(out)
    m = np.array(rows, dtype=complex)
    if m.ndim != 2:
        raise ValueError("matrix must be a rectangular 2-D list")
    return m


def to_plain(obj: Any) -> Any:
    """Recursively convert numpy scalars/arrays into JSON-native types."""
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_plain(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def dumps(obj: Any, human: bool = False) -> str:
    plain = to_plain(obj)
    if human:
        return json.dumps(plain, indent=2, sort_keys=False)
    return json.dumps(plain, separators=(",", ":"), sort_keys=False)
