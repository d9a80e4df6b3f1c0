"""Euclidean and Lorentzian geometry of Bloch space-time vectors and tensors."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._linalg import integer_root
from .antilinear import apply_local
from .bloch import (BlochTensor, BlochVector, bloch_tensor, from_bloch, is_bloch_body,
                    shrink_to_body)
from .errors import DimensionMismatchError, NotPureError, TransformError
from .hs_basis import HSBasis, ggm_basis, product_basis
from .theta import MetricSignature, ThetaSignature, as_superop, full_parity

PURE_TOL = 1e-9


def _parties(rho: np.ndarray, d: int) -> int:
    D = np.asarray(rho).shape[0]
    for n in range(1, 64):
        if d**n == D:
            return n
        if d**n > D:
            break
    raise DimensionMismatchError(f"dimension {D} is not a power of d={d}")


def euclidean_norm_sq(obj: np.ndarray | BlochTensor) -> float:
    """Purity ``Tr(rho^2)``, from the matrix or as ``sum x^2 / d^n`` from its tensor."""
    if isinstance(obj, BlochTensor):
        return float(np.sum(obj.x**2)) / obj.d**obj.n
    rho = np.asarray(obj, dtype=complex)
    return float(np.real(np.einsum("ab,ba->", rho, rho)))


def _site_signatures(sig: ThetaSignature | Sequence[ThetaSignature] | None, n: int,
                     d: int) -> list[ThetaSignature]:
    if sig is None:
        return [full_parity(d)] * n
    if isinstance(sig, ThetaSignature):
        return [sig] * n
    sigs = list(sig)
    if len(sigs) != n:
        raise DimensionMismatchError(f"need {n} site signatures, got {len(sigs)}")
    return sigs


def theta_tensor_image(rho: np.ndarray, sigs: Sequence[ThetaSignature], b: HSBasis) -> np.ndarray:
    """``Theta_1 (x) ... (x) Theta_n (rho)`` through each site's Kraus pairs."""
    ops = [as_superop(s, b) for s in sigs]
    return apply_local(ops, rho)


def lorentz_norm(rho: np.ndarray, sig=None, b: HSBasis | None = None) -> float:
    """``Tr(rho Theta^{(x)n}(rho))`` by matrix products (Kraus route).

    ``sig`` is one signature (reused on every site), one per site, or None
    for full parity everywhere.
    """
    rho = np.asarray(rho, dtype=complex)
    if b is None:
        d = sig.d if isinstance(sig, ThetaSignature) else (sig[0].d if sig else None)
        if d is None:
            raise DimensionMismatchError("need a basis or a signature to infer d")
        b = ggm_basis(d)
    n = _parties(rho, b.d)
    sigs = _site_signatures(sig, n, b.d)
    return float(np.real(np.trace(rho @ theta_tensor_image(rho, sigs, b))))


def lorentz_norm_bloch(t: BlochTensor, sig=None) -> float:
    """``(1/d^n) sum (prod_k s_k[mu_k]) x^2`` from the Bloch tensor."""
    sigs = _site_signatures(sig, t.n, t.d)
    w = np.array([1.0])
    for s in sigs:
        w = np.kron(w, s.signs)
    return float(w @ t.flat() ** 2) / t.d**t.n


def minkowski_form(x: np.ndarray, metric: MetricSignature) -> float:
    x = np.asarray(x, dtype=float)
    return float(np.sum(np.array(metric.diag) * x * x))


@dataclass(frozen=True, eq=False)
class LkDecomposition:
    n: int
    d: int
    values: np.ndarray

    def __getitem__(self, k: int) -> float:
        return float(self.values[k])

    def to_json(self) -> dict:
        return {"n": self.n, "d": self.d, "L": self.values.tolist()}


def spacelike_counts(n: int, d: int) -> np.ndarray:
    """Number of nonzero indices of every tuple, shaped like a Bloch tensor."""
    nz = (np.arange(d**2) > 0).astype(int)
    out = np.zeros((d**2,) * n, dtype=int)
    for k in range(n):
        shape = [1] * n
        shape[k] = d**2
        out = out + nz.reshape(shape)
    return out


def l_k(t: BlochTensor) -> LkDecomposition:
    """``L_k``: sum of ``x^2`` over index tuples with exactly k space-like indices."""
    counts = spacelike_counts(t.n, t.d)
    sq = t.x**2
    vals = np.array([float(sq[counts == k].sum()) for k in range(t.n + 1)])
    return LkDecomposition(t.n, t.d, vals)


@dataclass(frozen=True)
class EqRReport:
    n: int
    d: int
    lhs: float
    rhs: float
    residual: float


def _as_density(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    if psi.ndim == 1:
        return np.outer(psi, psi.conj())
    return psi


def verify_eq_R(psi: np.ndarray, n: int, d: int, sig=None,
                b: HSBasis | None = None) -> EqRReport:
    """Residual of ``(-1)^n d^n Tr R = d^n Tr rho^2 - 2 sum_k L_{2k - delta_n}``.

    ``Tr R = Tr(rho Theta^{(x)n}(rho))`` is computed by matrix products, the
    right-hand side from the Bloch tensor; ``k`` runs from ``delta_n`` to
    ``floor(n/2)`` with ``delta_n = (1 + (-1)^n) / 2``.
    """
    rho = _as_density(psi)
    if rho.shape != (d**n, d**n):
        raise DimensionMismatchError(f"state of shape {rho.shape} is not on {n} qudits of d={d}")
    if abs(np.real(np.trace(rho @ rho)) - 1.0) > PURE_TOL:
        raise NotPureError("verify_eq_R needs a pure state")
    b = ggm_basis(d) if b is None else b
    sigs = _site_signatures(sig, n, d)
    lhs = (-1) ** n * d**n * lorentz_norm(rho, sigs, b)
    t = bloch_tensor(rho, n, b)
    L = l_k(t)
    delta = (1 + (-1) ** n) // 2
    rhs = float(np.sum(t.x**2)) - 2 * sum(L[2 * k - delta] for k in range(delta, n // 2 + 1))
    return EqRReport(n, d, float(lhs), float(rhs), float(abs(lhs - rhs)))


# ---------------------------------------------------------------------------
# transforms

@dataclass(frozen=True, eq=False)
class GeometricTransform:
    """Orthogonal or Lorentz matrix acting on Bloch space-time coordinates.

    An orthogonal matrix of size ``D - 1`` acts on the spatial part only; a
    square matrix of size ``D`` acts on the whole vector. Lorentz matrices
    always have size ``D`` and preserve ``metric``.
    """

    matrix: np.ndarray
    kind: str
    metric: MetricSignature | None = None

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        if self.kind not in ("orthogonal", "lorentz"):
            raise TransformError(f"unknown transform kind {self.kind!r}")
        if self.kind == "lorentz" and self.metric is None:
            raise TransformError("a Lorentz transform needs a metric")

    def violation(self) -> float:
        m = self.matrix
        if self.kind == "orthogonal":
            return float(np.max(np.abs(m.T @ m - np.eye(m.shape[0]))))
        eta = self.metric.eta
        if eta.shape != m.shape:
            raise TransformError("metric and matrix sizes differ")
        return float(np.max(np.abs(m.T @ eta @ m - eta)))

    def to_json(self) -> dict:
        out = {"kind": self.kind, "matrix": self.matrix.tolist()}
        if self.metric is not None:
            out["metric"] = {"p": self.metric.p, "q": self.metric.q}
        return out

    @classmethod
    def from_json(cls, data: dict) -> "GeometricTransform":
        m = np.array(data["matrix"], dtype=float)
        metric = None
        if "metric" in data and data["metric"] is not None:
            p, q = int(data["metric"]["p"]), int(data["metric"]["q"])
            metric = MetricSignature(p, q, (1,) * p + (-1,) * q)
        return cls(m, data["kind"], metric)


def lorentz_metric(dim: int, p: int = 1) -> MetricSignature:
    """``diag(+ x p, - x (dim - p))``."""
    return MetricSignature(p, dim - p, (1,) * p + (-1,) * (dim - p))


def boost(metric: MetricSignature, time_index: int, space_index: int,
          rapidity: float) -> GeometricTransform:
    """Hyperbolic rotation mixing one time-like and one space-like axis."""
    diag = metric.diag
    if diag[time_index] != 1 or diag[space_index] != -1:
        raise TransformError("boost needs a time-like and a space-like axis")
    m = np.eye(len(diag))
    ch, sh = np.cosh(rapidity), np.sinh(rapidity)
    m[time_index, time_index] = m[space_index, space_index] = ch
    m[time_index, space_index] = m[space_index, time_index] = sh
    return GeometricTransform(m, "lorentz", metric)


def random_orthogonal(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random orthogonal matrix (QR of a Gaussian matrix with sign fix)."""
    q, r = np.linalg.qr(rng.normal(size=(dim, dim)))
    return q * np.sign(np.diag(r))


def random_rotation(dim: int, rng: np.random.Generator) -> GeometricTransform:
    """Random orthogonal transform of the spatial part of a ``dim``-vector."""
    return GeometricTransform(random_orthogonal(dim - 1, rng), "orthogonal")


def random_lorentz(metric: MetricSignature, rng: np.random.Generator, boosts: int = 2,
                   max_rapidity: float = 1.0) -> GeometricTransform:
    """Product of block rotations (within the +/- blocks) and single-axis boosts."""
    diag = np.array(metric.diag)
    plus = np.flatnonzero(diag == 1)
    minus = np.flatnonzero(diag == -1)
    m = np.eye(len(diag))

    def block_rotation():
        r = np.eye(len(diag))
        for idx in (plus, minus):
            if len(idx) > 1:
                r[np.ix_(idx, idx)] = random_orthogonal(len(idx), rng)
        return r

    m = block_rotation()
    for _ in range(boosts):
        t = int(rng.choice(plus))
        s = int(rng.choice(minus))
        phi = rng.uniform(-max_rapidity, max_rapidity)
        m = boost(metric, t, s, phi).matrix @ m
        m = block_rotation() @ m
    return GeometricTransform(m, "lorentz", metric)


@dataclass(frozen=True, eq=False)
class TransformResult:
    x: np.ndarray
    rescaled: bool
    reshrunk: bool


def apply_transform(T: GeometricTransform, x: np.ndarray | BlochVector | BlochTensor,
                    basis: HSBasis | None = None, physical: bool = False,
                    tol: float = 1e-10) -> TransformResult:
    """``x' = Lambda x``; with ``physical=True`` the result is mapped back to a state.

    For physical output a Lorentz image with ``x'_0 != 1`` is first rescaled
    by ``1 / x'_0``; then any vector outside the Bloch body is shrunk along
    its ray. ``basis`` is the Hilbert-Schmidt basis of the flattened vector
    (needed only for physical output).
    """
    if isinstance(x, BlochTensor):
        vals = x.flat()
    elif isinstance(x, BlochVector):
        vals = x.x
    else:
        vals = np.asarray(x, dtype=float).reshape(-1)
    if T.violation() > tol:
        raise TransformError(f"{T.kind} invariant violated by {T.violation():.3e}")
    m = T.matrix
    D = vals.shape[0]
    if T.kind == "orthogonal" and m.shape[0] == D - 1:
        out = np.concatenate(([vals[0]], m @ vals[1:]))
    elif m.shape[0] == D:
        out = m @ vals
    else:
        raise DimensionMismatchError(f"transform of size {m.shape[0]} for a vector of size {D}")
    rescaled = reshrunk = False
    if physical:
        if basis is None:
            dd = integer_root(D, 2)
            if dd is None:
                raise DimensionMismatchError("cannot infer a basis for physical output")
            basis = ggm_basis(dd)
        if basis.d**2 != D:
            raise DimensionMismatchError("basis does not match the vector length")
        if abs(out[0] - 1.0) > tol:
            if out[0] <= 0:
                raise TransformError("time component is not positive; cannot renormalize")
            out = out / out[0]
            rescaled = True
        v = BlochVector(basis.d, out, basis.tag)
        if not is_bloch_body(v, basis):
            out = shrink_to_body(v, basis).x.copy()
            reshrunk = True
    return TransformResult(out, rescaled, reshrunk)


def transform_state(T: GeometricTransform, rho: np.ndarray, b: HSBasis, n: int = 1) -> np.ndarray:
    """Transform a state through its Bloch tensor and return the physical operator."""
    pb = product_basis(b, n)
    t = bloch_tensor(rho, n, b)
    res = apply_transform(T, t, basis=pb, physical=True)
    return from_bloch(res.x, pb)
