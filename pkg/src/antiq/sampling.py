"""Seeded random states, unitaries and antilinear channels."""
from __future__ import annotations

import numpy as np

from ._linalg import ptrace_first
from .antilinear import AntilinearSuperOp, ChoiMatrix, kraus_from_choi
from .errors import InvalidDimensionError


def rng_from(seed: int | np.random.Generator | None) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _ginibre(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return rng.normal(size=(rows, cols)) + 1j * rng.normal(size=(rows, cols))


def haar_state(dim: int, rng) -> np.ndarray:
    """Haar-random pure state vector: normalized complex Gaussian."""
    if dim < 1:
        raise InvalidDimensionError(f"dimension must be positive, got {dim}")
    rng = rng_from(rng)
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def haar_density(dim: int, rng) -> np.ndarray:
    psi = haar_state(dim, rng)
    return np.outer(psi, psi.conj())


def random_unitary(dim: int, rng) -> np.ndarray:
    """Haar unitary from the QR decomposition of a Ginibre matrix."""
    rng = rng_from(rng)
    q, r = np.linalg.qr(_ginibre(rng, dim, dim))
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def random_density(dim: int, rng, rank: int | None = None) -> np.ndarray:
    """Mixed state ``G G^dag / Tr`` with ``G`` of shape ``dim x rank``."""
    rng = rng_from(rng)
    g = _ginibre(rng, dim, dim if rank is None else rank)
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_trace_one_hermitian(dim: int, rng, scale: float = 1.0) -> np.ndarray:
    """Trace-one Hermitian matrix, usually not positive."""
    rng = rng_from(rng)
    g = _ginibre(rng, dim, dim) * scale
    h = (g + g.conj().T) / 2
    return h - (np.trace(h).real - 1.0) / dim * np.eye(dim)


def random_antilinear(dim_in: int, dim_out: int, pairs: int, rng) -> AntilinearSuperOp:
    """Antilinear superoperator with independent Ginibre pairs (no CP/TP structure)."""
    rng = rng_from(rng)
    A = [_ginibre(rng, dim_out, dim_in) for _ in range(pairs)]
    B = [_ginibre(rng, dim_out, dim_in) for _ in range(pairs)]
    return AntilinearSuperOp(dim_in, dim_out, A, B)


def random_antilinear_channel(dim_in: int, dim_out: int, rng,
                              rank: int | None = None) -> AntilinearSuperOp:
    """Antilinear CPTP map from a Ginibre Choi matrix.

    ``J = G G^dag`` on ``Y (x) X``, then ``J -> (I (x) T^{-1/2}) J (I (x) T^{-1/2})``
    with ``T = Tr_Y J`` so that ``Tr_Y J = I``.
    """
    rng = rng_from(rng)
    D = dim_in * dim_out
    g = _ginibre(rng, D, D if rank is None else rank)
    J = g @ g.conj().T
    T = ptrace_first(J, dim_out, dim_in)
    w, u = np.linalg.eigh(T)
    t_inv = (u / np.sqrt(w)) @ u.conj().T
    S = np.kron(np.eye(dim_out), t_inv)
    J = S @ J @ S
    J = (J + J.conj().T) / 2
    return kraus_from_choi(ChoiMatrix(J, dim_in, dim_out))


__all__ = ["rng_from", "haar_state", "haar_density", "random_unitary", "random_density",
           "random_trace_one_hermitian", "random_antilinear", "random_antilinear_channel"]
