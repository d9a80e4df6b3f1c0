"""Small dense linear algebra helpers shared across modules.

Vectorization is row-major throughout: ``vec(|i><j|) = |i>|j>``, which is
``M.reshape(-1)`` for a C-ordered numpy array.
"""
from __future__ import annotations

import numpy as np

from .errors import DomainError

PSD_TOL = 1e-9


def vec(m: np.ndarray) -> np.ndarray:
    return np.asarray(m).reshape(-1)


def unvec(v: np.ndarray, rows: int, cols: int) -> np.ndarray:
    return np.asarray(v).reshape(rows, cols)


def dag(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def hermiticity_violation(m: np.ndarray) -> float:
    m = np.asarray(m)
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def is_hermitian(m: np.ndarray, tol: float = 1e-10) -> bool:
    return hermiticity_violation(m) <= tol * max(1.0, float(np.max(np.abs(m))))


def psd_check(h: np.ndarray, tol: float = PSD_TOL) -> tuple[bool, float]:
    """Scale-aware PSD test: ``min eig >= -tol * dim * max|eig|``.

    Returns the verdict together with the smallest eigenvalue.
    """
    h = np.asarray(h)
    w = np.linalg.eigvalsh((h + h.conj().T) / 2)
    scale = float(np.max(np.abs(w))) if w.size else 0.0
    lo = float(w[0]) if w.size else 0.0
    return lo >= -tol * h.shape[0] * scale, lo


def is_psd(h: np.ndarray, tol: float = PSD_TOL) -> bool:
    return psd_check(h, tol)[0]


def sqrtm_psd(h: np.ndarray, tol: float = PSD_TOL) -> np.ndarray:
    """Square root of a PSD matrix by Hermitian eigendecomposition.

    Slightly negative eigenvalues (above the scale-aware threshold) are
    clamped to zero; anything more negative raises :class:`DomainError`.
    """
    h = np.asarray(h, dtype=complex)
    w, u = np.linalg.eigh((h + h.conj().T) / 2)
    scale = float(np.max(np.abs(w))) if w.size else 0.0
    if w.size and w[0] < -tol * h.shape[0] * scale:
        raise DomainError(f"matrix is not positive semidefinite (min eigenvalue {w[0]:.3e})")
    w = np.where(w > noise_floor(w, h.shape[0]), w, 0.0)
    return (u * np.sqrt(w)) @ u.conj().T


def noise_floor(w: np.ndarray, d: int, scale: float | None = None) -> float:
    """Eigenvalues below this are rounding noise of a ``d x d`` eigensolve.

    Zeroing them keeps square roots from amplifying ``1e-17`` into ``3e-9``.
    ``scale`` defaults to the largest ``|w|``; pass the norm of the factors
    when the matrix may vanish exactly.
    """
    if scale is None:
        scale = float(np.max(np.abs(w))) if np.size(w) else 0.0
    return 8 * d * np.finfo(float).eps * scale


def ptrace_first(m: np.ndarray, d1: int, d2: int) -> np.ndarray:
    """Trace out the first factor of an operator on C^d1 (x) C^d2."""
    return np.trace(np.asarray(m).reshape(d1, d2, d1, d2), axis1=0, axis2=2)


def ptrace_second(m: np.ndarray, d1: int, d2: int) -> np.ndarray:
    """Trace out the second factor of an operator on C^d1 (x) C^d2."""
    return np.trace(np.asarray(m).reshape(d1, d2, d1, d2), axis1=1, axis2=3)


def kron_all(mats) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for m in mats:
        out = np.kron(out, m)
    return out


def integer_root(value: int, n: int) -> int | None:
    """Return ``r`` with ``r**n == value`` or None."""
    r = int(round(value ** (1.0 / n)))
    for cand in (r - 1, r, r + 1):
        if cand > 0 and cand**n == value:
            return cand
    return None
