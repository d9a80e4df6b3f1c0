"""Antilinear superoperators and their representations.

An antilinear superoperator is stored by Kraus pairs ``(A_j, B_j)`` acting as
``rho -> sum_j A_j conj(rho) B_j^dag``. Complex conjugation is always taken
entrywise in the computational basis ``{|i><j|}``, so every representation
below depends on that choice of basis.

Conventions:

* ``vec(|i><j|) = |i>|j>`` (row-major, ``M.reshape(-1)``).
* The Choi matrix lives on ``Y (x) X`` (output first):
  ``J = sum_j vec(A_j) vec(B_j)^dag = sum_ij M_L(E_ij) (x) E_ij``.
* The Stinespring operators map ``X -> Y (x) Z`` (environment last).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from . import jsonio
from ._linalg import PSD_TOL, dag, psd_check, ptrace_first, ptrace_second, vec
from .errors import DimensionMismatchError, InvalidDistributionError, NonUnitaryError

DEFAULT_TOL = 1e-9
RANK_CUTOFF = 1e-10


def _stack(mats, rows: int, cols: int) -> np.ndarray:
    arr = np.array([np.asarray(m, dtype=complex) for m in mats], dtype=complex)
    if arr.size == 0:
        arr = np.zeros((0, rows, cols), dtype=complex)
    if arr.shape[1:] != (rows, cols):
        raise DimensionMismatchError(f"Kraus operators must be {rows}x{cols}, got {arr.shape[1:]}")
    arr.setflags(write=False)
    return arr


class _PairOp:
    """Shared storage for pair-list superoperators."""

    antilinear = False

    def __init__(self, dim_in: int, dim_out: int, A, B):
        self.dim_in = int(dim_in)
        self.dim_out = int(dim_out)
        self.A = _stack(A, self.dim_out, self.dim_in)
        self.B = _stack(B, self.dim_out, self.dim_in)
        if len(self.A) != len(self.B):
            raise DimensionMismatchError("A and B lists differ in length")

    @classmethod
    def from_pairs(cls, pairs: Sequence[tuple[np.ndarray, np.ndarray]],
                   dim_in: int | None = None, dim_out: int | None = None):
        pairs = list(pairs)
        if pairs:
            dim_out, dim_in = np.asarray(pairs[0][0]).shape
        if dim_in is None or dim_out is None:
            raise DimensionMismatchError("dimensions are required for an empty pair list")
        return cls(dim_in, dim_out, [p[0] for p in pairs], [p[1] for p in pairs])

    @property
    def kraus_pairs(self) -> list[tuple[np.ndarray, np.ndarray]]:
        return list(zip(self.A, self.B))

    def __len__(self) -> int:
        return len(self.A)

    def _check_input(self, rho: np.ndarray) -> np.ndarray:
        rho = np.asarray(rho, dtype=complex)
        if rho.shape != (self.dim_in, self.dim_in):
            raise DimensionMismatchError(
                f"input of shape {rho.shape}, expected ({self.dim_in}, {self.dim_in})")
        return rho

    def _sandwich(self, x: np.ndarray) -> np.ndarray:
        if len(self.A) == 0:
            return np.zeros((self.dim_out, self.dim_out), dtype=complex)
        return np.sum(self.A @ x @ dag(self.B), axis=0)

    @cached_property
    def choi(self) -> "ChoiMatrix":
        vA = self.A.reshape(len(self.A), -1)
        vB = self.B.reshape(len(self.B), -1)
        J = vA.T @ vB.conj()
        return ChoiMatrix(J, self.dim_in, self.dim_out)

    def to_json(self) -> dict:
        return {"dim_in": self.dim_in, "dim_out": self.dim_out,
                "antilinear": self.antilinear,
                "pairs": [{"A": jsonio.encode_matrix(a), "B": jsonio.encode_matrix(b)}
                          for a, b in self.kraus_pairs]}


class LinearSuperOp(_PairOp):
    """``rho -> sum_j A_j rho B_j^dag``."""

    def __call__(self, rho: np.ndarray) -> np.ndarray:
        return self._sandwich(self._check_input(rho))

    def __repr__(self) -> str:
        return f"LinearSuperOp(dim_in={self.dim_in}, dim_out={self.dim_out}, pairs={len(self)})"


class AntilinearSuperOp(_PairOp):
    """``rho -> sum_j A_j conj(rho) B_j^dag``.

    Representations (natural, Choi, Stinespring) are computed lazily and
    cached on first access.
    """

    antilinear = True

    def __call__(self, rho: np.ndarray) -> np.ndarray:
        return self._sandwich(self._check_input(rho).conj())

    def __repr__(self) -> str:
        return f"AntilinearSuperOp(dim_in={self.dim_in}, dim_out={self.dim_out}, pairs={len(self)})"

    @property
    def linearization(self) -> LinearSuperOp:
        """Left linearization ``M_L`` with ``M = M_L o K``."""
        return LinearSuperOp(self.dim_in, self.dim_out, self.A, self.B)

    @property
    def right_linearization(self) -> LinearSuperOp:
        """``M_L^*`` with ``M = K o M_L^*``."""
        return LinearSuperOp(self.dim_in, self.dim_out, self.A.conj(), self.B.conj())

    @cached_property
    def natural(self) -> np.ndarray:
        return natural_rep(self)

    @cached_property
    def stinespring(self) -> "StinespringPair":
        return stinespring(self)

    @classmethod
    def from_json(cls, data: dict) -> "AntilinearSuperOp":
        pairs = [(jsonio.decode_matrix(p["A"]), jsonio.decode_matrix(p["B"]))
                 for p in data["pairs"]]
        return cls.from_pairs(pairs, data.get("dim_in"), data.get("dim_out"))


@dataclass(frozen=True, eq=False)
class ChoiMatrix:
    J: np.ndarray
    dim_in: int
    dim_out: int

    def to_json(self) -> dict:
        return {"dim_in": self.dim_in, "dim_out": self.dim_out,
                "ordering": "output (x) input", "J": jsonio.encode_matrix(self.J)}


@dataclass(frozen=True, eq=False)
class StinespringPair:
    U: np.ndarray
    V: np.ndarray
    env: int

    def apply(self, rho: np.ndarray) -> np.ndarray:
        dim_out = self.U.shape[0] // self.env
        big = self.U @ np.asarray(rho, dtype=complex).conj() @ self.V.conj().T
        return ptrace_second(big, dim_out, self.env)


# ---------------------------------------------------------------------------
# standard maps

def conjugation(d: int) -> AntilinearSuperOp:
    """Complex conjugation ``K(rho) = conj(rho)``."""
    return AntilinearSuperOp(d, d, [np.eye(d)], [np.eye(d)])


def antiunitary(U: np.ndarray) -> AntilinearSuperOp:
    U = np.asarray(U, dtype=complex)
    return AntilinearSuperOp(U.shape[1], U.shape[0], [U], [U])


def hill_wootters() -> AntilinearSuperOp:
    """Qubit spin flip ``rho -> Y conj(rho) Y``."""
    return antiunitary(np.array([[0, -1j], [1j, 0]]))


def identity_superop(d: int) -> LinearSuperOp:
    return LinearSuperOp(d, d, [np.eye(d)], [np.eye(d)])


# ---------------------------------------------------------------------------
# algebra

def apply(M: _PairOp, rho: np.ndarray) -> np.ndarray:
    return M(rho)


def antilinear_adjoint(M: AntilinearSuperOp) -> AntilinearSuperOp:
    """``M^ddag`` with pairs ``(A_j^T, B_j^T)``: ``sigma -> sum A^T conj(sigma) conj(B)``.

    Defined by ``conj(<M^ddag(s), r>) = <s, M(r)>`` for the Hilbert-Schmidt product.
    """
    return AntilinearSuperOp(M.dim_out, M.dim_in, np.swapaxes(M.A, 1, 2),
                             np.swapaxes(M.B, 1, 2))


def hermitian_adjoint(L: LinearSuperOp) -> LinearSuperOp:
    """Ordinary adjoint ``L^dag(s) = sum A^dag s B`` of a linear superoperator."""
    return LinearSuperOp(L.dim_out, L.dim_in, dag(L.A), dag(L.B))


def adjoint(M: _PairOp) -> _PairOp:
    """Adjoint matching the map's type: ``ddag`` for antilinear, ``dag`` for linear.

    With this pairing ``adjoint(M o N) == adjoint(N) o adjoint(M)`` holds for
    every mix of linear and antilinear factors.
    """
    if M.antilinear:
        return antilinear_adjoint(M)
    return hermitian_adjoint(M)


def _pair_products(A1, A2):
    return np.einsum("iab,jbc->ijac", A1, A2).reshape(-1, A1.shape[1], A2.shape[2])


def compose(M: _PairOp, N: _PairOp) -> _PairOp:
    """``M o N`` (apply N first).

    Two antilinear maps give a :class:`LinearSuperOp` with pairs
    ``(A_i conj(A'_j), B_i conj(B'_j))``; a linear and an antilinear factor
    (either order) give an :class:`AntilinearSuperOp`.
    """
    if M.dim_in != N.dim_out:
        raise DimensionMismatchError(f"cannot compose: {N.dim_out} -> {M.dim_in}")
    A2, B2 = (N.A.conj(), N.B.conj()) if M.antilinear else (N.A, N.B)
    A = _pair_products(M.A, A2)
    B = _pair_products(M.B, B2)
    cls = AntilinearSuperOp if (M.antilinear != N.antilinear) else LinearSuperOp
    return cls(N.dim_in, M.dim_out, A, B)


def compose_linear_antilinear(M: _PairOp, N: _PairOp) -> AntilinearSuperOp:
    """Composition of one linear and one antilinear map, in either order."""
    if M.antilinear == N.antilinear:
        raise TypeError("exactly one factor must be antilinear")
    return compose(M, N)


def tensor(M: AntilinearSuperOp, N: AntilinearSuperOp) -> AntilinearSuperOp:
    """``(M (x) N)(rho (x) sigma) = M(rho) (x) N(sigma)`` with pairs ``(A (x) A', B (x) B')``.

    Only defined for two antilinear maps; a linear factor raises ``TypeError``.
    """
    if not (M.antilinear and N.antilinear):
        raise TypeError("tensor product of a linear and an antilinear superoperator is not defined")
    A = np.einsum("iab,jcd->ijacbd", M.A, N.A).reshape(
        len(M) * len(N), M.dim_out * N.dim_out, M.dim_in * N.dim_in)
    B = np.einsum("iab,jcd->ijacbd", M.B, N.B).reshape(A.shape)
    return AntilinearSuperOp(M.dim_in * N.dim_in, M.dim_out * N.dim_out, A, B)


def apply_local(ops: Sequence[AntilinearSuperOp], rho: np.ndarray) -> np.ndarray:
    """Apply ``ops[0] (x) ... (x) ops[-1]`` without forming the product pair list."""
    rho = np.asarray(rho, dtype=complex)
    n = len(ops)
    din = [op.dim_in for op in ops]
    if rho.shape != (int(np.prod(din)),) * 2:
        raise DimensionMismatchError("input does not match the product of local dimensions")
    t = rho.conj().reshape(din + din)
    for k, op in enumerate(ops):
        # t[..., a_k, ..., b_k, ...] -> sum_j A_j[a', a_k] t B_j^*[b', b_k]
        t = np.moveaxis(t, (k, n + k), (0, 1))
        t = np.einsum("jpa,ab...,jqb->pq...", op.A, t, op.B.conj())
        t = np.moveaxis(t, (0, 1), (k, n + k))
    dout = int(np.prod([op.dim_out for op in ops]))
    return t.reshape(dout, dout)


# ---------------------------------------------------------------------------
# representations

def natural_rep(M: AntilinearSuperOp) -> np.ndarray:
    """Linearization ``A(M)_L = sum_j A_j (x) conj(B_j)``; ``A(M)_L vec(conj rho) = vec(M(rho))``."""
    if len(M) == 0:
        return np.zeros((M.dim_out**2, M.dim_in**2), dtype=complex)
    return np.einsum("jab,jcd->acbd", M.A, M.B.conj()).reshape(M.dim_out**2, M.dim_in**2)


def apply_natural(M: AntilinearSuperOp, rho: np.ndarray) -> np.ndarray:
    v = M.natural @ vec(np.asarray(rho, dtype=complex).conj())
    return v.reshape(M.dim_out, M.dim_out)


def natural_antilinear_adjoint(L: np.ndarray) -> np.ndarray:
    """Linearization of the antilinear adjoint of the antilinear operator ``L K``.

    From ``conj(<B K y, x>) = <y, L K x>`` one gets ``B = L^T``.
    """
    return np.asarray(L).T


def choi(M: _PairOp) -> ChoiMatrix:
    return M.choi


def apply_choi(J: ChoiMatrix, rho: np.ndarray) -> np.ndarray:
    """Retrieval ``M(rho) = Tr_X[J (I_Y (x) rho^dag)]``."""
    rho = np.asarray(rho, dtype=complex)
    big = J.J @ np.kron(np.eye(J.dim_out), rho.conj().T)
    return ptrace_second(big, J.dim_out, J.dim_in)


def kraus_from_choi(J: ChoiMatrix, cutoff: float = RANK_CUTOFF,
                    hermitian_tol: float = 1e-12) -> AntilinearSuperOp:
    """Kraus pairs reproducing ``J``.

    Hermitian ``J``: eigendecomposition, pairs
    ``(sqrt|l| U, sign(l) sqrt|l| U)``. Otherwise an SVD ``J = sum s u w^dag``
    gives ``(sqrt(s) U, sqrt(s) W)``. Values below ``cutoff`` times the
    largest are dropped.
    """
    m = np.asarray(J.J, dtype=complex)
    shape = (J.dim_out, J.dim_in)
    scale = float(np.max(np.abs(m))) if m.size else 0.0
    if scale == 0.0:
        return AntilinearSuperOp(J.dim_in, J.dim_out, [], [])
    if np.max(np.abs(m - m.conj().T)) <= hermitian_tol * max(1.0, scale):
        w, u = np.linalg.eigh((m + m.conj().T) / 2)
        keep = np.abs(w) > cutoff * np.max(np.abs(w))
        A = [np.sqrt(abs(l)) * u[:, i].reshape(shape) for i, l in enumerate(w) if keep[i]]
        B = [np.sign(l) * np.sqrt(abs(l)) * u[:, i].reshape(shape)
             for i, l in enumerate(w) if keep[i]]
    else:
        u, s, wh = np.linalg.svd(m)
        keep = s > cutoff * s[0]
        A = [np.sqrt(s[i]) * u[:, i].reshape(shape) for i in range(len(s)) if keep[i]]
        B = [np.sqrt(s[i]) * wh[i].conj().reshape(shape) for i in range(len(s)) if keep[i]]
    return AntilinearSuperOp(J.dim_in, J.dim_out, A, B)


def stinespring(M: AntilinearSuperOp) -> StinespringPair:
    """``U = sum_j A_j (x) e_j``, ``V = sum_j B_j (x) e_j`` with ``M(rho) = Tr_Z(U conj(rho) V^dag)``."""
    env = max(len(M), 1)
    U = np.zeros((M.dim_out * env, M.dim_in), dtype=complex)
    V = np.zeros_like(U)
    for j, (a, b) in enumerate(M.kraus_pairs):
        e = np.zeros((env, 1))
        e[j] = 1.0
        U += np.kron(a, e)
        V += np.kron(b, e)
    return StinespringPair(U, V, env)


# ---------------------------------------------------------------------------
# properties

def tp_violation(M: _PairOp) -> tuple[float, float]:
    """``(||sum A^dag B - I||_F, ||Tr_Y J - I||_F)``."""
    eye = np.eye(M.dim_in)
    kraus = float(np.linalg.norm(np.sum(dag(M.A) @ M.B, axis=0) - eye)) if len(M) else float(np.sqrt(M.dim_in))
    part = ptrace_first(M.choi.J, M.dim_out, M.dim_in)
    # Tr_Y J equals conj(sum A^dag B)
    choi_side = float(np.linalg.norm(part - eye))
    return kraus, choi_side


def is_antilinear_TP(M: _PairOp, tol: float = DEFAULT_TOL) -> bool:
    """``sum_j A_j^dag B_j = I`` and, equivalently, ``Tr_Y J(M) = I``.

    Both are evaluated; they agree up to rounding because ``Tr_Y J`` is the
    entrywise conjugate of ``sum A^dag B``.
    """
    kraus, choi_side = tp_violation(M)
    return kraus < tol and choi_side < tol


@dataclass(frozen=True)
class CPWitness:
    hermitian: bool
    hermiticity_violation: float
    min_eigenvalue: float
    passed: bool


def cp_witness(M: _PairOp, tol: float = PSD_TOL) -> CPWitness:
    J = M.choi.J
    scale = max(1.0, float(np.max(np.abs(J)))) if J.size else 1.0
    herm_v = float(np.max(np.abs(J - J.conj().T))) if J.size else 0.0
    herm = herm_v <= tol * scale
    ok, lo = psd_check(J, tol)
    return CPWitness(herm, herm_v, lo, herm and ok)


def is_antilinear_CP(M: _PairOp, tol: float = PSD_TOL) -> bool:
    """Choi matrix Hermitian and PSD (scale-aware)."""
    return cp_witness(M, tol).passed


def is_linear_CP(L: LinearSuperOp, tol: float = PSD_TOL) -> bool:
    return cp_witness(L, tol).passed


def is_antilinear_channel(M: AntilinearSuperOp, tol: float = DEFAULT_TOL) -> bool:
    return is_antilinear_CP(M, tol) and is_antilinear_TP(M, tol)


def unital_violation(M: _PairOp) -> float:
    if M.dim_in != M.dim_out:
        raise DimensionMismatchError("unitality needs dim_in == dim_out")
    return float(np.linalg.norm(M(np.eye(M.dim_in)) - np.eye(M.dim_out)))


def is_unital(M: _PairOp, tol: float = DEFAULT_TOL) -> bool:
    return unital_violation(M) < tol


def is_doubly_stochastic(M: _PairOp, tol: float = DEFAULT_TOL) -> bool:
    return is_unital(M, tol) and is_antilinear_TP(M, tol)


def is_antiunitary(M: AntilinearSuperOp, tol: float = DEFAULT_TOL) -> tuple[bool, np.ndarray | None]:
    """Rank-one PSD Choi matrix whose Kraus operator is unitary.

    Returns ``(True, U)`` with ``M(rho) = U conj(rho) U^dag`` or ``(False, None)``.
    """
    if M.dim_in != M.dim_out or not is_antilinear_CP(M, tol):
        return False, None
    J = M.choi.J
    w, u = np.linalg.eigh((J + J.conj().T) / 2)
    if w[-1] <= 0 or np.any(np.abs(w[:-1]) > RANK_CUTOFF * w[-1]):
        return False, None
    U = np.sqrt(w[-1]) * u[:, -1].reshape(M.dim_out, M.dim_in)
    if np.linalg.norm(U.conj().T @ U - np.eye(M.dim_in)) >= tol:
        return False, None
    return True, U


def _check_distribution(ps, tol: float = 1e-12) -> np.ndarray:
    ps = np.asarray(ps, dtype=float)
    if np.any(ps < -tol) or abs(ps.sum() - 1.0) > tol:
        raise InvalidDistributionError(f"not a probability vector (sum {ps.sum()!r})")
    return np.clip(ps, 0.0, None)


def mixed_antiunitary(ps: Sequence[float], Us: Sequence[np.ndarray],
                      tol: float = 1e-10) -> AntilinearSuperOp:
    """``rho -> sum_j p_j U_j conj(rho) U_j^dag``."""
    ps = _check_distribution(ps)
    Us = [np.asarray(U, dtype=complex) for U in Us]
    if len(Us) != len(ps):
        raise InvalidDistributionError("need one probability per unitary")
    for U in Us:
        if np.linalg.norm(U.conj().T @ U - np.eye(U.shape[1])) > tol:
            raise NonUnitaryError("mixture member is not unitary")
    ops = [np.sqrt(p) * U for p, U in zip(ps, Us) if p > 0]
    return AntilinearSuperOp(Us[0].shape[1], Us[0].shape[0], ops, ops)


def weyl_operators(N: int) -> dict[tuple[int, int], np.ndarray]:
    """``W_ij = X^i Z^j`` with ``X|k> = |k+1>`` and ``Z|k> = w^k |k>``."""
    X = np.roll(np.eye(N), 1, axis=0).astype(complex)
    Z = np.diag(np.exp(2j * np.pi * np.arange(N) / N))
    return {(i, j): np.linalg.matrix_power(X, i) @ np.linalg.matrix_power(Z, j)
            for i in range(N) for j in range(N)}


def weyl_covariant(p: np.ndarray, N: int) -> AntilinearSuperOp:
    """``rho -> sum_ij p(i,j) W_ij conj(rho) W_ij^dag`` for ``p`` an ``N x N`` distribution."""
    p = np.asarray(p, dtype=float)
    if p.shape != (N, N):
        raise InvalidDistributionError(f"distribution must have shape ({N}, {N})")
    flat = _check_distribution(p.reshape(-1))
    W = weyl_operators(N)
    keys = [(i, j) for i in range(N) for j in range(N)]
    return mixed_antiunitary(flat, [W[k] for k in keys])


def channel_report(M: AntilinearSuperOp, tol: float = DEFAULT_TOL) -> dict:
    """Property flags with numeric witnesses, for reporting."""
    cp = cp_witness(M, tol)
    tp_k, tp_c = tp_violation(M)
    rep = {
        "dim_in": M.dim_in, "dim_out": M.dim_out, "pairs": len(M),
        "CP": cp.passed, "choi_min_eigenvalue": cp.min_eigenvalue,
        "choi_hermiticity_violation": cp.hermiticity_violation,
        "TP": tp_k < tol and tp_c < tol, "tp_violation": tp_k, "tp_violation_choi": tp_c,
    }
    if M.dim_in == M.dim_out:
        uv = unital_violation(M)
        au, U = is_antiunitary(M, tol)
        rep.update({"unital": uv < tol, "unital_violation": uv,
                    "doubly_stochastic": uv < tol and rep["TP"],
                    "antiunitary": au,
                    "antiunitary_U": None if U is None else jsonio.encode_matrix(U)})
    rep["channel"] = rep["CP"] and rep["TP"]
    return rep
