"""Bloch vectors and tensors of qudit operators, Bloch-body membership and shrinking."""
from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Iterable

import numpy as np

from ._linalg import PSD_TOL, integer_root, psd_check
from .errors import DimensionMismatchError, DomainError, NotAStateError
from .hs_basis import HSBasis, product_basis

STATE_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class BlochVector:
    """Real coordinates ``x_mu = Tr(s_mu rho)``; ``x[0]`` is the time-like part."""

    d: int
    x: np.ndarray
    basis_tag: str = "ggm"

    def __post_init__(self):
        x = np.array(self.x, dtype=float).reshape(-1)
        if x.shape[0] != self.d**2:
            raise DimensionMismatchError(f"Bloch vector needs {self.d**2} entries, got {x.shape[0]}")
        x.setflags(write=False)
        object.__setattr__(self, "x", x)

    @property
    def spatial(self) -> np.ndarray:
        return self.x[1:]

    @property
    def norm_sq(self) -> float:
        """Squared length of the spatial part."""
        return float(self.spatial @ self.spatial)

    def to_json(self) -> dict:
        return {"n": 1, "d": self.d, "basis": self.basis_tag, "x": self.x.tolist(),
                "index_order": "row-major over (mu_1..mu_n)"}


@dataclass(frozen=True, eq=False)
class BlochTensor:
    """Coordinates ``x[mu_1, ..., mu_n] = Tr(rho s_mu_1 (x) ... (x) s_mu_n)``."""

    n: int
    d: int
    x: np.ndarray
    basis_tag: str = "ggm"

    def __post_init__(self):
        x = np.array(self.x, dtype=float).reshape((self.d**2,) * self.n)
        x.setflags(write=False)
        object.__setattr__(self, "x", x)

    def flat(self) -> np.ndarray:
        return self.x.reshape(-1)

    def as_vector(self) -> BlochVector:
        return BlochVector(self.d**self.n, self.flat(), f"{self.basis_tag}^{self.n}")

    def marginal(self, keep: Iterable[int]) -> "BlochTensor":
        """Tensor of the reduced state: complement indices fixed to 0."""
        keep = sorted(set(keep))
        idx = tuple(slice(None) if k in keep else 0 for k in range(self.n))
        return BlochTensor(len(keep), self.d, self.x[idx], self.basis_tag)

    def to_json(self) -> dict:
        return {"n": self.n, "d": self.d, "basis": self.basis_tag, "x": self.flat().tolist(),
                "index_order": "row-major over (mu_1..mu_n)"}


@dataclass(frozen=True, eq=False)
class CharPolyCoeffs:
    """Signed coefficients with ``det(t I - rho) = sum_j (-1)^j a_j t^(d-j)``."""

    a: np.ndarray

    def __post_init__(self):
        a = np.array(self.a, dtype=float)
        a.setflags(write=False)
        object.__setattr__(self, "a", a)


@dataclass(frozen=True)
class Membership:
    member: bool
    worst_index: int
    worst_value: float
    coeffs: CharPolyCoeffs

    def __bool__(self) -> bool:
        return self.member


def _check_dim(rho: np.ndarray, b: HSBasis) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (b.d, b.d):
        raise DimensionMismatchError(f"operator of shape {rho.shape} does not match basis d={b.d}")
    return rho


def to_bloch(rho: np.ndarray, b: HSBasis) -> BlochVector:
    rho = _check_dim(rho, b)
    x = np.einsum("kab,ba->k", b.elements, rho)
    return BlochVector(b.d, x.real, b.tag)


def from_bloch(x: BlochVector | np.ndarray, b: HSBasis) -> np.ndarray:
    vals = x.x if isinstance(x, BlochVector) else np.asarray(x, dtype=float).reshape(-1)
    if vals.shape[0] != b.d**2:
        raise DimensionMismatchError(f"need {b.d**2} coordinates for d={b.d}, got {vals.shape[0]}")
    return np.einsum("k,kab->ab", vals, b.elements) / b.d


def char_poly_coeffs(rho: np.ndarray) -> CharPolyCoeffs:
    """Characteristic-polynomial coefficients via the Newton identities.

    ``k a_k = sum_{j=1..k} (-1)^(j-1) N_j a_(k-j)`` with power sums
    ``N_j = Tr(rho^j)``; no eigendecomposition is used.
    """
    rho = np.asarray(rho, dtype=complex)
    d = rho.shape[0]
    power = np.eye(d, dtype=complex)
    sums = [float(d)]
    for _ in range(d):
        power = power @ rho
        sums.append(float(np.trace(power).real))
    a = [1.0]
    for k in range(1, d + 1):
        acc = sum((-1) ** (j - 1) * sums[j] * a[k - j] for j in range(1, k + 1))
        a.append(acc / k)
    return CharPolyCoeffs(np.array(a))


def _membership_from_matrix(rho: np.ndarray, tol: float) -> Membership:
    coeffs = char_poly_coeffs(rho)
    d = rho.shape[0]
    # bound on |a_j| is C(d, j) * s^j with s >= max|eigenvalue|
    s = float(np.linalg.norm(rho))
    scaled = np.array([coeffs.a[j] / (comb(d, j) * s**j) if s > 0 else coeffs.a[j]
                       for j in range(d + 1)])
    worst = int(np.argmin(scaled))
    return Membership(bool(scaled[worst] >= -tol), worst, float(coeffs.a[worst]), coeffs)


def is_bloch_body(x: BlochVector, b: HSBasis, tol: float = PSD_TOL) -> Membership:
    """Membership of ``x`` in the Bloch body via ``a_j(x) >= 0`` for all j.

    Each coefficient is compared against ``-tol * C(d, j) * ||rho||_F**j``.
    The result is truthy iff ``x`` is a state; ``worst_index`` names the most
    violated coefficient.
    """
    if abs(x.x[0] - 1.0) > STATE_TOL:
        raise NotAStateError(f"time component must be 1, got {x.x[0]!r}")
    return _membership_from_matrix(from_bloch(x, b), tol)


def eigen_membership(rho: np.ndarray, tol: float = PSD_TOL) -> bool:
    """Eigenvalue oracle: ``min eig >= -tol * d * max|eig|``."""
    return psd_check(rho, tol)[0]


@dataclass(frozen=True)
class AngleBound:
    cosine: float
    passed: bool


def pure_angle_bound(x: BlochVector, y: BlochVector, tol: float = STATE_TOL) -> AngleBound:
    d = x.d
    if y.d != d:
        raise DimensionMismatchError("Bloch vectors of different dimension")
    for v in (x, y):
        if abs(v.norm_sq - (d - 1)) > tol * (d - 1):
            raise DomainError(f"not a pure-state Bloch vector: |x|^2 = {v.norm_sq} != {d - 1}")
    cos = float(x.spatial @ y.spatial) / (d - 1)
    return AngleBound(cos, -1.0 / (d - 1) - tol <= cos <= 1.0 + tol)


def max_length_along(direction: np.ndarray, b: HSBasis, width: float = 1e-10,
                     max_iter: int = 200) -> float:
    """Largest ``t`` with ``(1, t * u)`` in the Bloch body, ``u`` the unit direction.

    Bisection on ``[0, sqrt(d-1)]``; the returned value is the inner end of
    the final bracket, so it is always a member.
    """
    u = np.asarray(direction, dtype=float)
    u = u / np.linalg.norm(u)
    d = b.d
    lo, hi = 0.0, float(np.sqrt(d - 1))
    base = np.concatenate(([1.0], np.zeros(d**2 - 1)))
    step = np.concatenate(([0.0], u))

    def inside(t: float) -> bool:
        return _membership_from_matrix(from_bloch(base + t * step, b), 0.0).member

    if inside(hi):
        return hi
    for _ in range(max_iter):
        if hi - lo <= width:
            break
        mid = 0.5 * (lo + hi)
        if inside(mid):
            lo = mid
        else:
            hi = mid
    return lo


def shrink_to_body(x: BlochVector, b: HSBasis, mode: str = "outside",
                   tol: float = PSD_TOL) -> BlochVector:
    """Pull a Bloch vector back into the body along its own ray.

    ``mode="outside"`` (default) leaves members untouched and otherwise
    rescales the spatial part to the boundary length along its direction.
    ``mode="literal"`` always rescales by ``a / sqrt(d-1)`` where ``a`` is the
    boundary length along the direction.
    """
    if abs(x.x[0] - 1.0) > STATE_TOL:
        raise NotAStateError(f"time component must be 1, got {x.x[0]!r}")
    if mode not in ("outside", "literal"):
        raise ValueError(f"unknown shrink mode {mode!r}")
    norm = float(np.linalg.norm(x.spatial))
    if norm == 0.0:
        return x
    if mode == "outside" and is_bloch_body(x, b, tol):
        return x
    a = max_length_along(x.spatial, b)
    if mode == "literal":
        new = x.spatial * a / np.sqrt(x.d - 1)
    else:
        new = x.spatial * (a / norm)
    return BlochVector(x.d, np.concatenate(([1.0], new)), x.basis_tag)


def bloch_tensor(rho: np.ndarray, n: int, b: HSBasis) -> BlochTensor:
    rho = np.asarray(rho, dtype=complex)
    d = b.d
    if rho.shape[0] != rho.shape[1] or integer_root(rho.shape[0], n) != d:
        raise DimensionMismatchError(f"operator of shape {rho.shape} is not on {n} qudits of d={d}")
    # rho[(a1..an),(b1..bn)] -> t[a1,b1,a2,b2,...]; contract pairs with s_mu[b,a]
    t = rho.reshape((d,) * (2 * n))
    perm = [i for k in range(n) for i in (k, n + k)]
    t = np.transpose(t, perm)
    for _ in range(n):
        # always contracts the leading (a, b) pair; results accumulate at the end
        t = np.tensordot(t, b.elements, axes=([0, 1], [2, 1]))
    return BlochTensor(n, d, t.real, b.tag)


def from_bloch_tensor(t: BlochTensor, b: HSBasis) -> np.ndarray:
    pb = product_basis(b, t.n)
    return from_bloch(t.flat(), pb)


def partial_trace(rho: np.ndarray, keep: Iterable[int], n: int, d: int) -> np.ndarray:
    """Reduced operator on the parties in ``keep`` (0-based, order preserved).

    An empty ``keep`` gives the 1x1 matrix ``[[Tr rho]]``.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (d**n, d**n):
        raise DimensionMismatchError(f"operator of shape {rho.shape} is not on {n} qudits of d={d}")
    keep = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= n for k in keep):
        raise DimensionMismatchError(f"parties {keep} out of range for n={n}")
    t = rho.reshape((d,) * (2 * n))
    letters = "abcdefghijklmnopqrstuvwxyz"
    row = list(letters[:n])
    col = list(letters[n:2 * n])
    for k in range(n):
        if k not in keep:
            col[k] = row[k]
    out = "".join(row[k] for k in keep) + "".join(col[k] for k in keep)
    m = len(keep)
    return np.einsum("".join(row) + "".join(col) + "->" + out, t).reshape(d**m, d**m)
