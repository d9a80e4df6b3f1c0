"""Linear entropy, subset weights and the entanglement distribution equality.

Parties are labelled ``0 .. n-1``; a subset is a sorted tuple of labels and,
in JSON, the bitmask ``sum(1 << i for i in subset)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable

import numpy as np

from .bloch import bloch_tensor, partial_trace
from .errors import DimensionMismatchError, InvalidDimensionError, NotPureError
from .geometry import PURE_TOL, _as_density, lorentz_norm, spacelike_counts
from .hs_basis import HSBasis, ggm_basis
from .sampling import haar_state, rng_from
from .theta import full_parity

Subset = tuple[int, ...]


def subsets(n: int) -> list[Subset]:
    """All subsets of ``range(n)``, by size then lexicographically."""
    return [c for k in range(n + 1) for c in combinations(range(n), k)]


def bitmask(s: Iterable[int]) -> int:
    return sum(1 << i for i in s)


def complement(s: Subset, n: int) -> Subset:
    return tuple(i for i in range(n) if i not in s)


def linear_entropy(rho: np.ndarray) -> float:
    """``S_L = Tr rho - Tr rho^2``."""
    rho = np.asarray(rho, dtype=complex)
    return float(np.real(np.trace(rho) - np.einsum("ab,ba->", rho, rho)))


def marginal_purities(rho: np.ndarray, n: int, d: int) -> dict[Subset, float]:
    out = {}
    for s in subsets(n):
        r = partial_trace(rho, s, n, d)
        out[s] = float(np.real(np.einsum("ab,ba->", r, r))) if s else 1.0
    return out


@dataclass(frozen=True, eq=False)
class SubsetWeights:
    """``P_S`` from the Bloch tensor (``direct``) and by Moebius inversion."""

    n: int
    d: int
    direct: dict
    mobius: dict

    @property
    def max_difference(self) -> float:
        return max(abs(self.direct[s] - self.mobius[s]) for s in self.direct)

    def l_k(self, k: int) -> float:
        return sum(v for s, v in self.direct.items() if len(s) == k)


def subset_weights(psi: np.ndarray, n: int, d: int, b: HSBasis | None = None) -> SubsetWeights:
    rho = _as_density(psi)
    if rho.shape != (d**n, d**n):
        raise DimensionMismatchError(f"state of shape {rho.shape} is not on {n} qudits of d={d}")
    b = ggm_basis(d) if b is None else b
    sq = bloch_tensor(rho, n, b).x ** 2
    nz = np.arange(d**2) > 0
    direct = {}
    for s in subsets(n):
        mask = np.ones(sq.shape, dtype=bool)
        for k in range(n):
            shape = [1] * n
            shape[k] = d**2
            want = nz if k in s else ~nz
            mask = mask & want.reshape(shape)
        direct[s] = float(sq[mask].sum())
    pur = marginal_purities(rho, n, d)
    mobius = {}
    for s in subsets(n):
        mobius[s] = sum((-1) ** (len(s) - len(t)) * d ** len(t) * pur[t]
                        for k in range(len(s) + 1) for t in combinations(s, k))
    return SubsetWeights(n, d, direct, mobius)


@dataclass(frozen=True)
class Bipartition:
    """Cut ``A | A^c``; ``A`` is kept as given unless ``canonical`` is applied."""

    n: int
    A: Subset

    def __post_init__(self):
        a = tuple(sorted(set(self.A)))
        if any(i < 0 or i >= self.n for i in a):
            raise DimensionMismatchError(f"subset {self.A} is not inside range({self.n})")
        object.__setattr__(self, "A", a)

    @property
    def complement(self) -> Subset:
        return complement(self.A, self.n)

    def canonical(self) -> "Bipartition":
        return Bipartition(self.n, min(self.A, self.complement))

    @property
    def mask(self) -> int:
        return bitmask(self.A)


@dataclass(frozen=True, eq=False)
class DistributionCoefficients:
    """``Tr R = constant + sum_A a_A S_L(A)`` with exact rational coefficients.

    ``coeffs`` maps Bipartition to Fraction; the full party set appears only
    in the raw (non-canonical) form, where it carries ``S_L`` of the global
    state.
    """

    n: int
    d: int
    constant: Fraction
    coeffs: dict = field(default_factory=dict)
    canonical_form: bool = False

    def canonical(self) -> "DistributionCoefficients":
        """Gauge fixed for pure states.

        ``S_L(A) = S_L(A^c)`` merges each cut onto the lexicographically
        smaller side, and ``S_L`` of the global pure state vanishes.
        """
        merged: dict[Bipartition, Fraction] = {}
        full = tuple(range(self.n))
        for bp, a in self.coeffs.items():
            if bp.A == full:
                continue
            key = bp.canonical()
            merged[key] = merged.get(key, Fraction(0)) + a
        merged = {k: merged[k] for k in sorted(merged, key=lambda k: (len(k.A), k.A))}
        return DistributionCoefficients(self.n, self.d, self.constant, merged, True)

    @property
    def trivial(self) -> bool:
        """Whether the canonical equality reads ``0 = 0``."""
        c = self.canonical()
        return c.constant == 0 and all(v == 0 for v in c.coeffs.values())

    def evaluate(self, entropies: dict) -> float:
        """``constant + sum a S_L(A)``; ``entropies`` is keyed by subset tuple."""
        return float(self.constant) + sum(float(a) * entropies[bp.A] for bp, a in self.coeffs.items())

    def to_json(self) -> dict:
        return {
            "n": self.n, "d": self.d, "canonical": self.canonical_form,
            "constant": str(self.constant),
            "coefficients": {str(bp.mask): str(a) for bp, a in self.coeffs.items()},
            "trivial": self.trivial,
        }


def distribution_coefficients(n: int, d: int) -> DistributionCoefficients:
    """Exact coefficients of the equality for full-parity Theta on every site.

    With ``sign(S) = (-1)^{|S|}`` one has ``d^n Tr R = sum_S (-1)^{|S|} P_S``;
    substituting ``P_S = sum_{T <= S} (-1)^{|S|-|T|} d^{|T|} Tr rho_T^2`` gives
    ``Tr R = d^-n sum_T (-d)^{|T|} 2^{n-|T|} Tr rho_T^2``, and finally
    ``Tr rho_T^2 = 1 - S_L(T)``.
    """
    if n < 2 or d < 2:
        raise InvalidDimensionError(f"need n >= 2 and d >= 2, got n={n}, d={d}")
    norm = Fraction(1, d**n)
    constant = Fraction(0)
    coeffs: dict[Bipartition, Fraction] = {}
    for t in subsets(n):
        w = norm * (-d) ** len(t) * 2 ** (n - len(t))
        constant += w
        if t:
            coeffs[Bipartition(n, t)] = -w
    return DistributionCoefficients(n, d, constant, coeffs)


def _check_pure(rho: np.ndarray) -> None:
    if abs(np.real(np.einsum("ab,ba->", rho, rho)) - 1.0) > PURE_TOL:
        raise NotPureError("state is not pure")


def _infer_n(dim: int, d: int) -> int:
    n = int(round(np.log(dim) / np.log(d)))
    if d**n != dim:
        raise DimensionMismatchError(f"dimension {dim} is not a power of {d}")
    return n


def subset_entropies(rho: np.ndarray, n: int, d: int) -> dict[Subset, float]:
    return {s: linear_entropy(partial_trace(rho, s, n, d)) for s in subsets(n) if s}


def trace_R(rho: np.ndarray, n: int, d: int, b: HSBasis | None = None) -> float:
    """``Tr(rho Theta^{(x)n}(rho))`` for full parity on every site, by matrix products."""
    b = ggm_basis(d) if b is None else b
    return lorentz_norm(rho, [full_parity(d)] * n, b)


def verify_distribution(psi: np.ndarray, coeffs: DistributionCoefficients,
                        b: HSBasis | None = None) -> float:
    """``|Tr R - sum a S_L(A)|`` with ``Tr R`` from matrix products."""
    rho = _as_density(psi)
    n, d = coeffs.n, coeffs.d
    if rho.shape != (d**n, d**n):
        raise DimensionMismatchError(f"state of shape {rho.shape} is not on {n} qudits of d={d}")
    _check_pure(rho)
    return abs(trace_R(rho, n, d, b) - coeffs.evaluate(subset_entropies(rho, n, d)))


@dataclass(frozen=True)
class FormulaCheck:
    trace_R: float
    formula: float
    residuals: dict

    @property
    def residual(self) -> float:
        return self.residuals["1"]


def n_qubit_formula(entropies: dict, n: int) -> float:
    """``(-1)^{n+1} S_L(full) + sum_{A, A^c nonempty} (-1)^{|A^c|+n+1} S_L(A)``."""
    full = tuple(range(n))
    out = (-1) ** (n + 1) * entropies[full]
    for s in subsets(n):
        if s and s != full:
            out += (-1) ** (n - len(s) + n + 1) * entropies[s]
    return out


def n_qubit_formula_check(psi: np.ndarray, n: int) -> FormulaCheck:
    """Residual of the closed n-qubit formula, under normalizations 1 and ``2^{+-n}``."""
    rho = _as_density(psi)
    if rho.shape != (2**n, 2**n):
        raise DimensionMismatchError(f"expected an {n}-qubit state, got shape {rho.shape}")
    _check_pure(rho)
    tr = trace_R(rho, n, 2)
    f = n_qubit_formula(subset_entropies(rho, n, 2), n)
    res = {"1": abs(tr - f), "2^n": abs(tr - 2**n * f), "2^-n": abs(tr - f / 2**n)}
    return FormulaCheck(tr, f, res)


@dataclass(frozen=True)
class QutritL2Report:
    direct: float
    mobius: float
    no_constant: float

    @property
    def mobius_residual(self) -> float:
        return abs(self.direct - self.mobius)

    @property
    def no_constant_residual(self) -> float:
        return abs(self.direct - self.no_constant)

    @property
    def offset(self) -> float:
        """``direct - no_constant``; a missing constant shows up here."""
        return self.direct - self.no_constant


def qutrit_L2_check(psi: np.ndarray, b: HSBasis | None = None) -> QutritL2Report:
    """Weight on the first two parties of a 3-qutrit state, three ways."""
    rho = _as_density(psi)
    if rho.shape != (27, 27):
        raise DimensionMismatchError(f"expected a 3-qutrit state, got shape {rho.shape}")
    b = ggm_basis(3) if b is None else b
    t = bloch_tensor(rho, 3, b)
    direct = float(np.sum(t.x[1:, 1:, 0] ** 2))
    pur = marginal_purities(rho, 3, 3)
    no_constant = 9 * pur[(0, 1)] - 3 * pur[(0,)] - 3 * pur[(1,)]
    return QutritL2Report(direct, no_constant + 1.0, no_constant)


def distribution_report(n: int, d: int, samples: int, rng, tol: float = 1e-9) -> dict:
    """Batch check of the equality on Haar-random pure states."""
    rng = rng_from(rng)
    coeffs = distribution_coefficients(n, d)
    b = ggm_basis(d)
    residuals = [verify_distribution(haar_state(d**n, rng), coeffs, b) for _ in range(samples)]
    canon = coeffs.canonical()
    out = {
        "n": n, "d": d, "samples": samples,
        "coefficients": coeffs.to_json(),
        "canonical": canon.to_json(),
        "trivial": canon.trivial,
        "residuals": residuals,
        "max_residual": max(residuals) if residuals else 0.0,
        "mean_residual": float(np.mean(residuals)) if residuals else 0.0,
        "tol": tol,
    }
    if canon.trivial:
        out["note"] = "equality is trivial: S_L(A) = S_L(A^c) for pure states"
    out["passed"] = out["max_residual"] < tol
    return out


__all__ = [
    "Bipartition", "DistributionCoefficients", "FormulaCheck", "QutritL2Report", "SubsetWeights",
    "bitmask", "complement", "distribution_coefficients", "distribution_report", "linear_entropy",
    "marginal_purities", "n_qubit_formula", "n_qubit_formula_check", "qutrit_L2_check",
    "spacelike_counts", "subset_entropies", "subset_weights", "subsets", "trace_R",
    "verify_distribution",
]
