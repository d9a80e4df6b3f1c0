"""Hilbert-Schmidt bases built from generalized Gell-Mann (GGM) matrices.

A basis is an ordered stack of ``d**2`` Hermitian ``d x d`` matrices with the
identity at index 0, traceless remaining elements and
``Tr(s_mu s_nu) = d delta_{mu nu}``.

Ordering of :func:`ggm_basis`: identity, then the symmetric matrices
``Lambda_s^{jk}`` for ``j < k`` in lexicographic order, then the
antisymmetric ``Lambda_a^{jk}`` in the same order, then the diagonal
``Lambda^l`` for ``l = 0..d-2``. For ``d = 3`` the familiar Gell-Mann order
is used instead (``s1..s8`` = sym01, asym01, diag0, sym02, asym02, sym12,
asym12, diag1). For ``d = 2`` both rules give ``(I, X, Y, Z)``. Every basis
carries its own ``labels`` so callers never have to assume an order.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from . import jsonio
from .errors import InvalidDimensionError, ProjectionError

EXACT_TOL = 1e-12
DERIVED_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class HSBasis:
    d: int
    elements: np.ndarray
    tag: str = "custom"
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self):
        els = np.array(self.elements, dtype=complex)
        if els.shape != (self.d**2, self.d, self.d):
            raise InvalidDimensionError(
                f"expected {self.d**2} matrices of shape {self.d}x{self.d}, got {els.shape}"
            )
        els.setflags(write=False)
        object.__setattr__(self, "elements", els)
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"s{i}" for i in range(self.d**2)))

    def __len__(self) -> int:
        return self.d**2

    def __getitem__(self, mu: int) -> np.ndarray:
        return self.elements[mu]

    def __iter__(self) -> Iterator[np.ndarray]:
        return iter(self.elements)

    def coefficients(self, m: np.ndarray) -> np.ndarray:
        """Complex coefficients ``c_mu = Tr(s_mu^dag M) / d`` with ``M = sum c_mu s_mu``."""
        m = np.asarray(m, dtype=complex)
        return np.einsum("kab,ab->k", self.elements.conj(), m) / self.d

    def combine(self, c: np.ndarray) -> np.ndarray:
        return np.einsum("k,kab->ab", np.asarray(c), self.elements)

    def to_json(self) -> dict:
        return {"d": self.d, "elements": [jsonio.encode_matrix(m) for m in self.elements]}

    @classmethod
    def from_json(cls, data: dict, tag: str = "custom") -> "HSBasis":
        els = np.array([jsonio.decode_matrix(m) for m in data["elements"]])
        return cls(int(data["d"]), els, tag=tag)


def _ket_bra(d: int, j: int, k: int) -> np.ndarray:
    m = np.zeros((d, d), dtype=complex)
    m[j, k] = 1.0
    return m


def _ggm_parts(d: int):
    scale = np.sqrt(d / 2)
    pairs = list(itertools.combinations(range(d), 2))
    sym = {(j, k): scale * (_ket_bra(d, j, k) + _ket_bra(d, k, j)) for j, k in pairs}
    asym = {(j, k): scale * (-1j * _ket_bra(d, j, k) + 1j * _ket_bra(d, k, j)) for j, k in pairs}
    diag = {}
    for l in range(d - 1):
        v = np.zeros(d)
        v[: l + 1] = 1.0
        v[l + 1] = -(l + 1)
        diag[l] = (1 / np.sqrt((l + 1) * (l + 2) / d)) * np.diag(v).astype(complex)
    return pairs, sym, asym, diag


def ggm_basis(d: int) -> HSBasis:
    """Generalized Gell-Mann basis of dimension ``d`` (see module docstring for order)."""
    if not isinstance(d, (int, np.integer)) or d < 2:
        raise InvalidDimensionError(f"dimension must be an integer >= 2, got {d!r}")
    d = int(d)
    pairs, sym, asym, diag = _ggm_parts(d)
    if d == 3:
        order = [("s", (0, 1)), ("a", (0, 1)), ("d", 0), ("s", (0, 2)), ("a", (0, 2)),
                 ("s", (1, 2)), ("a", (1, 2)), ("d", 1)]
    else:
        order = ([("s", p) for p in pairs] + [("a", p) for p in pairs]
                 + [("d", l) for l in range(d - 1)])
    els = [np.eye(d, dtype=complex)]
    labels = ["I"]
    for kind, key in order:
        if kind == "s":
            els.append(sym[key])
            labels.append(f"S{key[0]}{key[1]}")
        elif kind == "a":
            els.append(asym[key])
            labels.append(f"A{key[0]}{key[1]}")
        else:
            els.append(diag[key])
            labels.append(f"D{key}")
    return HSBasis(d, np.array(els), tag=f"ggm{d}", labels=tuple(labels))


def product_basis(b: HSBasis, n: int) -> HSBasis:
    """n-fold tensor product basis; index order is row-major over ``(mu_1..mu_n)``."""
    if n < 1:
        raise InvalidDimensionError("number of parties must be >= 1")
    if n == 1:
        return b
    els = b.elements
    labels = list(b.labels)
    for _ in range(n - 1):
        els = np.einsum("iab,jcd->ijacbd", els, b.elements).reshape(
            len(els) * b.d**2, els.shape[1] * b.d, els.shape[1] * b.d)
        labels = [f"{x}{y}" for x in labels for y in b.labels]
    return HSBasis(b.d**n, els, tag=f"{b.tag}^{n}", labels=tuple(labels))


def pauli_basis(n: int = 1) -> HSBasis:
    """n-qubit Pauli basis ``{I, X, Y, Z}^{(x) n}``."""
    b = ggm_basis(2)
    return product_basis(b, n) if n > 1 else b


@dataclass(frozen=True)
class BasisCheck:
    name: str
    passed: bool
    max_violation: float


@dataclass(frozen=True)
class BasisReport:
    checks: tuple[BasisCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def max_violation(self) -> float:
        return max(c.max_violation for c in self.checks)

    def failed(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]

    def to_json(self) -> dict:
        return {"passed": self.passed, "max_violation": self.max_violation,
                "checks": [{"name": c.name, "passed": c.passed,
                            "max_violation": c.max_violation} for c in self.checks]}


def verify_hs_basis(b: HSBasis, tol: float = EXACT_TOL) -> BasisReport:
    """Check every HSBasis invariant and report the largest violation of each."""
    d = b.d
    els = b.elements
    ident = float(np.max(np.abs(els[0] - np.eye(d))))
    traces = np.einsum("kaa->k", els)[1:]
    traceless = float(np.max(np.abs(traces))) if traces.size else 0.0
    gram = np.einsum("iab,jba->ij", els, els)
    ortho = float(np.max(np.abs(gram - d * np.eye(d**2))))
    herm = float(np.max(np.abs(els - np.conj(np.swapaxes(els, 1, 2)))))
    checks = (
        BasisCheck("identity", ident <= tol, ident),
        BasisCheck("traceless", traceless <= tol, traceless),
        BasisCheck("orthonormality", ortho <= tol, ortho),
        BasisCheck("hermiticity", herm <= tol, herm),
    )
    return BasisReport(checks)


@dataclass(frozen=True)
class StructureConstants:
    """Sparse structure constants of a Hilbert-Schmidt basis.

    ``[s_j, s_k] = 2i sqrt(d/2) sum_l f[j,k,l] s_l`` and
    ``{s_j, s_k} = 2 delta_jk I + sqrt(2d) sum_l g[j,k,l] s_l``.
    Indices run over ``1..d**2-1``; all permutations are stored.
    """

    d: int
    f: dict
    g: dict
    f_prefactor: complex
    g_prefactor: float

    def f_value(self, j: int, k: int, l: int) -> float:
        return self.f.get((j, k, l), 0.0)

    def g_value(self, j: int, k: int, l: int) -> float:
        return self.g.get((j, k, l), 0.0)

    def product(self, b: HSBasis, j: int, k: int) -> np.ndarray:
        """Rebuild ``s_j s_k`` from the constants alone."""
        out = (1.0 if j == k else 0.0) * np.eye(self.d, dtype=complex)
        for l in range(1, self.d**2):
            c = 0.5 * (self.f_prefactor * self.f_value(j, k, l)
                       + self.g_prefactor * self.g_value(j, k, l))
            if c != 0:
                out = out + c * b.elements[l]
        return out


def structure_constants(b: HSBasis, cutoff: float = EXACT_TOL) -> StructureConstants:
    report = verify_hs_basis(b, tol=DERIVED_TOL)
    if not report.passed:
        raise ProjectionError(f"basis fails {report.failed()}; trace projection is ill-defined")
    d = b.d
    els = b.elements[1:]
    n = len(els)
    fpre = 2j * np.sqrt(d / 2)
    gpre = np.sqrt(2 * d)
    prod = np.einsum("jab,kbc->jkac", els, els)
    comm = prod - np.swapaxes(prod, 0, 1)
    anti = prod + np.swapaxes(prod, 0, 1)
    # Tr(X s_l) / d projects X onto s_l
    fc = np.einsum("jkab,lba->jkl", comm, els) / (d * fpre)
    gc = np.einsum("jkab,lba->jkl", anti, els) / (d * gpre)
    f, g = {}, {}
    for j, k, l in itertools.product(range(n), repeat=3):
        fv, gv = fc[j, k, l], gc[j, k, l]
        if abs(fv) > cutoff:
            f[(j + 1, k + 1, l + 1)] = float(fv.real)
        if abs(gv) > cutoff:
            g[(j + 1, k + 1, l + 1)] = float(gv.real)
    return StructureConstants(d, f, g, fpre, float(gpre))
