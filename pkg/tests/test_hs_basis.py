from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from antiq.errors import InvalidDimensionError, ProjectionError
from antiq.hs_basis import (HSBasis, ggm_basis, pauli_basis, product_basis, structure_constants,
                            verify_hs_basis)

R = np.sqrt(3 / 2)
# hand-entered d=3 Gell-Mann matrices scaled to Tr(s^2) = 3
GM3 = {
    1: R * np.array([[0, 1, 0], [1, 0, 0], [0, 0, 0]]),
    2: R * np.array([[0, -1j, 0], [1j, 0, 0], [0, 0, 0]]),
    3: R * np.diag([1, -1, 0]),
    4: R * np.array([[0, 0, 1], [0, 0, 0], [1, 0, 0]]),
    5: R * np.array([[0, 0, -1j], [0, 0, 0], [1j, 0, 0]]),
    6: R * np.array([[0, 0, 0], [0, 0, 1], [0, 1, 0]]),
    7: R * np.array([[0, 0, 0], [0, 0, -1j], [0, 1j, 0]]),
    8: np.diag([1, 1, -2]) / np.sqrt(2),
}

X = np.array([[0, 1], [1, 0]])
Y = np.array([[0, -1j], [1j, 0]])
Z = np.diag([1, -1])


def test_d3_matches_gell_mann_exactly():
    b = ggm_basis(3)
    assert np.array_equal(b.elements[0], np.eye(3))
    for k, m in GM3.items():
        assert np.array_equal(b.elements[k], m), k


def test_d2_is_pauli():
    b = ggm_basis(2)
    for got, want in zip(b.elements, [np.eye(2), X, Y, Z]):
        assert np.array_equal(got, want)
    assert b.labels[0] == "I"


@pytest.mark.parametrize("d", range(2, 9))
def test_verify_passes(d):
    rep = verify_hs_basis(ggm_basis(d))
    assert rep.passed and rep.max_violation < 1e-12
    assert len(ggm_basis(d).elements) == d * d


def test_d1_rejected():
    with pytest.raises(InvalidDimensionError):
        ggm_basis(1)


def test_elements_read_only():
    b = ggm_basis(3)
    with pytest.raises(ValueError):
        b.elements[0, 0, 0] = 2


def test_broken_basis_is_reported():
    els = ggm_basis(3).elements.copy()
    els[4] = els[4] * 1.01
    rep = verify_hs_basis(HSBasis(3, els, tag="bad"))
    assert not rep.passed
    assert "orthonormality" in rep.failed()
    with pytest.raises(ProjectionError):
        structure_constants(HSBasis(3, els, tag="bad"))


# nonzero f and g as listed for su(3) (1-based indices into the basis above)
F3 = {(1, 2, 3): 1, (1, 4, 7): 0.5, (2, 4, 6): 0.5, (2, 5, 7): 0.5, (3, 4, 5): 0.5,
      (1, 5, 6): -0.5, (3, 6, 7): -0.5, (4, 5, 8): np.sqrt(3) / 2, (6, 7, 8): np.sqrt(3) / 2}
G3 = {(1, 1, 8): 1 / np.sqrt(3), (2, 2, 8): 1 / np.sqrt(3), (3, 3, 8): 1 / np.sqrt(3),
      (8, 8, 8): -1 / np.sqrt(3),
      (4, 4, 8): -1 / (2 * np.sqrt(3)), (5, 5, 8): -1 / (2 * np.sqrt(3)),
      (6, 6, 8): -1 / (2 * np.sqrt(3)), (7, 7, 8): -1 / (2 * np.sqrt(3)),
      (1, 4, 6): 0.5, (1, 5, 7): 0.5, (2, 5, 6): 0.5, (3, 4, 4): 0.5, (3, 5, 5): 0.5,
      (2, 4, 7): -0.5, (3, 6, 6): -0.5, (3, 7, 7): -0.5}

def _perm_sign(p):
    p = list(p)
    s = 1
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                s = -s
    return s


def test_su3_f_constants():
    sc = structure_constants(ggm_basis(3))
    from itertools import permutations
    for key, val in F3.items():
        for perm in permutations(range(3)):
            k = tuple(key[i] for i in perm)
            assert abs(sc.f_value(*k) - _perm_sign(perm) * val) < 1e-12
    listed = {tuple(sorted(k)) for k in F3}
    extra = {tuple(sorted(k)) for k, v in sc.f.items() if abs(v) > 1e-12} - listed
    assert not extra


def test_su3_g_constants():
    sc = structure_constants(ggm_basis(3))
    from itertools import permutations
    for key, val in G3.items():
        for perm in permutations(range(3)):
            assert abs(sc.g_value(*(key[i] for i in perm)) - val) < 1e-12
    listed = {tuple(sorted(k)) for k in G3}
    extra = {tuple(sorted(k)) for k, v in sc.g.items() if abs(v) > 1e-12} - listed
    assert not extra


def test_pauli_constants():
    sc = structure_constants(ggm_basis(2))
    assert abs(sc.f_value(1, 2, 3) - 1) < 1e-12
    assert not any(abs(v) > 1e-12 for v in sc.g.values())


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_product_reconstruction(d):
    b = ggm_basis(d)
    sc = structure_constants(b)
    for j in range(1, d * d):
        for k in range(1, d * d):
            assert np.max(np.abs(sc.product(b, j, k) - b.elements[j] @ b.elements[k])) < 1e-10


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 6), st.integers(0, 2**32 - 1))
def test_coefficients_roundtrip(d, seed):
    rng = np.random.default_rng(seed)
    m = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    b = ggm_basis(d)
    c = b.coefficients(m)
    assert np.allclose(b.combine(c), m, atol=1e-12)
    h = m + m.conj().T
    assert np.max(np.abs(b.coefficients(h).imag)) < 1e-12


def test_product_basis_order():
    b = product_basis(ggm_basis(2), 2)
    assert np.array_equal(b.elements[1 * 4 + 3], np.kron(X, Z))
    assert verify_hs_basis(b).passed
    assert np.array_equal(pauli_basis(2).elements, b.elements)


def test_json_roundtrip():
    b = ggm_basis(4)
    back = HSBasis.from_json(b.to_json())
    assert np.array_equal(back.elements, b.elements)


def test_failure_modes_named():
    els = ggm_basis(2).elements.copy()
    els[0] = X
    assert "identity" in verify_hs_basis(HSBasis(2, els, tag="bad")).failed()
    els = ggm_basis(3).elements.copy()
    els[2] = 2 * els[2]
    assert "orthonormality" in verify_hs_basis(HSBasis(3, els, tag="bad")).failed()


@pytest.mark.parametrize("d", [2, 3, 4])
def test_f_antisymmetric(d):
    sc = structure_constants(ggm_basis(d))
    for (j, k, l), v in sc.f.items():
        assert j != k
        assert abs(sc.f_value(k, j, l) + v) < 1e-12
