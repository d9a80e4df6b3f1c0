"""Generalized Theta-conjugations given as sign flips on a Hilbert-Schmidt basis.

A signature ``s`` (``s[0] = +1``) defines the antilinear map
``Theta(sum_mu c_mu s_mu) = sum_mu conj(c_mu) s[mu] s_mu``. On Hermitian input
this is the Bloch sign flip ``x_mu -> s[mu] x_mu``. Multipartite maps are
tensor products of single-site signatures.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from ._linalg import PSD_TOL, noise_floor, sqrtm_psd
from .antilinear import (AntilinearSuperOp, ChoiMatrix, adjoint, compose, is_unital,
                         kraus_from_choi)
from .bloch import BlochVector, is_bloch_body, shrink_to_body, to_bloch, from_bloch
from .errors import DimensionMismatchError, DomainError, InvalidDimensionError, InvalidSignatureError
from .hs_basis import HSBasis, product_basis


@dataclass(frozen=True)
class ThetaSignature:
    d: int
    s: tuple[int, ...]
    basis_tag: str = "ggm"

    def __post_init__(self):
        s = tuple(int(v) for v in self.s)
        if len(s) != self.d**2:
            raise InvalidDimensionError(f"signature needs {self.d**2} signs, got {len(s)}")
        if any(v not in (1, -1) for v in s):
            raise InvalidSignatureError("signature entries must be +1 or -1")
        if s[0] != 1:
            raise InvalidSignatureError("signature must keep the identity: s[0] = +1")
        object.__setattr__(self, "s", s)

    @property
    def signs(self) -> np.ndarray:
        return np.array(self.s, dtype=float)

    def to_json(self) -> dict:
        return {"d": self.d, "s": list(self.s), "basis": self.basis_tag}

    @classmethod
    def from_json(cls, data: dict) -> "ThetaSignature":
        return cls(int(data["d"]), tuple(data["s"]), data.get("basis", "ggm"))


Signatures = Union[ThetaSignature, Sequence[ThetaSignature]]


def full_parity(d: int, basis_tag: str = "ggm") -> ThetaSignature:
    """``s_0 -> s_0``, ``s_j -> -s_j`` for ``j >= 1``."""
    return ThetaSignature(d, (1,) + (-1,) * (d**2 - 1), basis_tag)


def all_plus(d: int, basis_tag: str = "ggm") -> ThetaSignature:
    return ThetaSignature(d, (1,) * d**2, basis_tag)


def partial_parity(d: int, flipped: Sequence[int], basis_tag: str = "ggm") -> ThetaSignature:
    """Flip only the basis indices in ``flipped`` (each >= 1)."""
    s = [1] * d**2
    for j in flipped:
        if not 1 <= j < d**2:
            raise InvalidSignatureError(f"index {j} cannot be flipped")
        s[j] = -1
    return ThetaSignature(d, tuple(s), basis_tag)


def product_signature(sigs: Sequence[ThetaSignature]) -> ThetaSignature:
    """Signature of ``Theta_1 (x) ... (x) Theta_n`` on the product basis."""
    s = np.array([1.0])
    for sig in sigs:
        s = np.kron(s, sig.signs)
    d = int(np.prod([sig.d for sig in sigs]))
    tag = sigs[0].basis_tag + f"^{len(sigs)}"
    return ThetaSignature(d, tuple(int(v) for v in s), tag)


def _resolve(sig: Signatures, b: HSBasis) -> tuple[ThetaSignature, HSBasis]:
    if isinstance(sig, ThetaSignature):
        sigs = [sig]
    else:
        sigs = list(sig)
    for s in sigs:
        if s.d != b.d:
            raise DimensionMismatchError(f"signature for d={s.d} used with basis d={b.d}")
    if len(sigs) == 1:
        return sigs[0], b
    return product_signature(sigs), product_basis(b, len(sigs))


def theta_apply(sig: Signatures, A: np.ndarray, b: HSBasis) -> np.ndarray:
    """Apply Theta (one signature, or one per site for multipartite input)."""
    s, pb = _resolve(sig, b)
    A = np.asarray(A, dtype=complex)
    if A.shape != (pb.d, pb.d):
        raise DimensionMismatchError(f"operator of shape {A.shape} does not match d={pb.d}")
    c = pb.coefficients(A)
    return pb.combine(np.conj(c) * s.signs)


def as_superop(sig: ThetaSignature, b: HSBasis) -> AntilinearSuperOp:
    """Kraus-pair form of Theta, read off from the Choi matrix of its linearization."""
    d = b.d
    J = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            E = np.zeros((d, d), dtype=complex)
            E[i, j] = 1.0
            # conj(E_ij) = E_ij, so Theta_L(E_ij) = Theta(E_ij)
            J += np.kron(theta_apply(sig, E, b), E)
    return kraus_from_choi(ChoiMatrix(J, d, d))


def is_generalized_theta(M: AntilinearSuperOp, tol: float = 1e-9) -> bool:
    """Unital and ``M^ddag o M`` is the identity (checked on every ``E_ij``)."""
    if M.dim_in != M.dim_out or not is_unital(M, tol):
        return False
    P = compose(adjoint(M), M)
    d = M.dim_in
    for i in range(d):
        for j in range(d):
            E = np.zeros((d, d), dtype=complex)
            E[i, j] = 1.0
            if np.linalg.norm(P(E) - E) >= tol:
                return False
    return True


@dataclass(frozen=True)
class MetricSignature:
    p: int
    q: int
    diag: tuple[int, ...]

    def to_json(self) -> dict:
        return {"p": self.p, "q": self.q, "diag": list(self.diag)}

    @property
    def eta(self) -> np.ndarray:
        return np.diag(np.array(self.diag, dtype=float))


def metric_of(sig: ThetaSignature) -> MetricSignature:
    p = sum(1 for v in sig.s if v == 1)
    return MetricSignature(p, len(sig.s) - p, tuple(sig.s))


def theta_inner(rho: np.ndarray, chi: np.ndarray, sig: Signatures, b: HSBasis) -> float:
    """``Tr(rho Theta(chi))`` for Hermitian arguments."""
    rho = np.asarray(rho, dtype=complex)
    val = np.trace(rho @ theta_apply(sig, chi, b))
    return float(val.real)


# ---------------------------------------------------------------------------
# fidelities and concurrences

def _root_product_singular_values(rho: np.ndarray, sigma: np.ndarray) -> np.ndarray:
    m = sqrtm_psd(rho) @ sqrtm_psd(sigma)
    return np.linalg.svd(m, compute_uv=False)


def schatten_fidelity(rho: np.ndarray, sigma: np.ndarray, p: float = 1.0) -> float:
    """``F_p = ||sqrt(rho) sqrt(sigma)||_p`` (Schatten p-norm); ``p = 1`` is the usual fidelity."""
    if p < 1:
        raise DomainError("p must be >= 1")
    s = _root_product_singular_values(rho, sigma)
    return float(np.sum(s**p) ** (1.0 / p))


def concurrence(rho: np.ndarray, sigma: np.ndarray, p: float = 1.0) -> float:
    """``max(0, l_1^p - sum_{j>=2} l_j^p)`` over singular values of ``sqrt(rho) sqrt(sigma)``."""
    s = np.sort(_root_product_singular_values(rho, sigma))[::-1] ** p
    return float(max(0.0, s[0] - s[1:].sum()))


@dataclass(frozen=True, eq=False)
class ThetaImage:
    raw: np.ndarray
    image: np.ndarray
    shrunk: bool


def theta_image(rho: np.ndarray, sig: Signatures, b: HSBasis, shrink: bool = True,
                tol: float = PSD_TOL) -> ThetaImage:
    """Theta(rho) together with its shrunk version when it leaves the Bloch body."""
    s, pb = _resolve(sig, b)
    raw = theta_apply(s, rho, pb)
    if not shrink:
        return ThetaImage(raw, raw, False)
    x = to_bloch(raw, pb)
    x = BlochVector(x.d, np.concatenate(([1.0], x.spatial / x.x[0])), x.basis_tag) \
        if x.x[0] > 0 else x
    if is_bloch_body(x, pb, tol):
        return ThetaImage(raw, raw, False)
    return ThetaImage(raw, from_bloch(shrink_to_body(x, pb, tol=tol), pb), True)


def theta_fidelity(rho: np.ndarray, sigma: np.ndarray | None, sig: Signatures, p: float,
                   b: HSBasis, shrink: bool = True) -> float:
    """``F_p(rho, Theta(sigma))``; ``sigma=None`` gives the one-argument form ``F_p(rho, Theta(rho))``."""
    target = rho if sigma is None else sigma
    img = theta_image(target, sig, b, shrink).image
    return schatten_fidelity(rho, img, p)


def theta_concurrence(rho: np.ndarray, sig: Signatures, p: float, b: HSBasis,
                      sigma: np.ndarray | None = None, shrink: bool = True) -> float:
    """Order-p Theta-concurrence from the spectrum of ``(sqrt(rho) Theta(sigma) sqrt(rho))^(p/2)``.

    Negative eigenvalues, possible only for an unshrunk indefinite image,
    are clipped to zero.
    """
    target = rho if sigma is None else sigma
    img = theta_image(target, sig, b, shrink).image
    r = sqrtm_psd(rho)
    w = np.linalg.eigvalsh(r @ img @ r)
    scale = np.linalg.norm(r, 2) ** 2 * np.linalg.norm(img, 2)
    w = np.where(w > noise_floor(w, len(w), scale), w, 0.0)
    lam = np.sort(w)[::-1] ** (p / 2)
    return float(max(0.0, lam[0] - lam[1:].sum()))
