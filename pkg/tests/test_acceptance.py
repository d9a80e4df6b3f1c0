"""Acceptance suite: one test per criterion, at the stated tolerances."""
from __future__ import annotations

import json
import time
from itertools import permutations

import numpy as np
import pytest

from antiq import jsonio
from antiq.antilinear import (AntilinearSuperOp, adjoint, antilinear_adjoint, apply_choi,
                              apply_natural, compose, hill_wootters, is_antilinear_CP,
                              kraus_from_choi, natural_antilinear_adjoint, natural_rep,
                              tp_violation)
from antiq.bloch import (BlochVector, eigen_membership, is_bloch_body, max_length_along,
                         partial_trace, shrink_to_body, to_bloch)
from antiq.cli import main
from antiq.distribution import (distribution_coefficients, linear_entropy, qutrit_L2_check,
                                trace_R, verify_distribution)
from antiq.geometry import (apply_transform, lorentz_metric, minkowski_form, random_lorentz,
                            random_rotation, verify_eq_R)
from antiq.hs_basis import ggm_basis, structure_constants, verify_hs_basis
from antiq.sampling import (haar_state, random_antilinear, random_antilinear_channel,
                            random_density, random_trace_one_hermitian)
from antiq.theta import full_parity, theta_concurrence

criterion = pytest.mark.criterion
Y = np.array([[0, -1j], [1j, 0]])
YY = np.kron(Y, Y)


def ginibre(rng, r, c):
    return rng.normal(size=(r, c)) + 1j * rng.normal(size=(r, c))


@criterion(1, "GGM validity for d = 2..8, exact d = 3 matrices, < 5 s")
def test_criterion_01():
    start = time.perf_counter()
    worst = 0.0
    for d in range(2, 9):
        rep = verify_hs_basis(ggm_basis(d))
        assert rep.passed
        worst = max(worst, rep.max_violation)
    assert worst < 1e-12
    r = np.sqrt(3 / 2)
    listed = [
        np.eye(3),
        r * np.array([[0, 1, 0], [1, 0, 0], [0, 0, 0]]),
        r * np.array([[0, -1j, 0], [1j, 0, 0], [0, 0, 0]]),
        r * np.diag([1, -1, 0]),
        r * np.array([[0, 0, 1], [0, 0, 0], [1, 0, 0]]),
        r * np.array([[0, 0, -1j], [0, 0, 0], [1j, 0, 0]]),
        r * np.array([[0, 0, 0], [0, 0, 1], [0, 1, 0]]),
        r * np.array([[0, 0, 0], [0, 0, -1j], [0, 1j, 0]]),
        np.diag([1, 1, -2]) / np.sqrt(2),
    ]
    b = ggm_basis(3)
    for k, m in enumerate(listed):
        assert np.array_equal(b.elements[k], m), k
    assert time.perf_counter() - start < 5.0


F3 = {(1, 2, 3): 1, (1, 4, 7): 0.5, (2, 4, 6): 0.5, (2, 5, 7): 0.5, (3, 4, 5): 0.5,
      (1, 5, 6): -0.5, (3, 6, 7): -0.5, (4, 5, 8): np.sqrt(3) / 2, (6, 7, 8): np.sqrt(3) / 2}
G3 = {(1, 1, 8): 1 / np.sqrt(3), (2, 2, 8): 1 / np.sqrt(3), (3, 3, 8): 1 / np.sqrt(3),
      (8, 8, 8): -1 / np.sqrt(3),
      (4, 4, 8): -1 / (2 * np.sqrt(3)), (5, 5, 8): -1 / (2 * np.sqrt(3)),
      (6, 6, 8): -1 / (2 * np.sqrt(3)), (7, 7, 8): -1 / (2 * np.sqrt(3)),
      (1, 4, 6): 0.5, (1, 5, 7): 0.5, (2, 5, 6): 0.5, (3, 4, 4): 0.5, (3, 5, 5): 0.5,
      (2, 4, 7): -0.5, (3, 6, 6): -0.5, (3, 7, 7): -0.5}


@criterion(2, "su(3) structure constants and product reconstruction")
def test_criterion_02():
    b = ggm_basis(3)
    sc = structure_constants(b)
    for key, val in F3.items():
        for p in permutations(range(3)):
            sign = 1 if p in ((0, 1, 2), (1, 2, 0), (2, 0, 1)) else -1
            assert abs(sc.f_value(*(key[i] for i in p)) - sign * val) < 1e-12
    for key, val in G3.items():
        for p in permutations(range(3)):
            assert abs(sc.g_value(*(key[i] for i in p)) - val) < 1e-12
    nz_f = {tuple(sorted(k)) for k, v in sc.f.items() if abs(v) > 1e-12}
    nz_g = {tuple(sorted(k)) for k, v in sc.g.items() if abs(v) > 1e-12}
    assert nz_f == {tuple(sorted(k)) for k in F3}
    assert nz_g == {tuple(sorted(k)) for k in G3}
    for j in range(9):
        for k in range(9):
            if j and k:
                err = np.max(np.abs(sc.product(b, j, k) - b.elements[j] @ b.elements[k]))
                assert err < 1e-10


@criterion(3, "Newton-identity membership equals eigenvalue oracle, 4000 cases, < 30 s")
def test_criterion_03():
    start = time.perf_counter()
    rng = np.random.default_rng(2024)
    disagreements = members = 0
    for d in (2, 3, 4, 5):
        b = ggm_basis(d)
        for i in range(1000):
            if i % 2:
                # mixture pulled toward the maximally mixed state: often a member
                h = random_density(d, rng) * rng.uniform(0.5, 1.3)
                h = h + (1 - np.trace(h).real) / d * np.eye(d)
            else:
                h = random_trace_one_hermitian(d, rng, rng.uniform(0.01, 1.0))
            newton = bool(is_bloch_body(to_bloch(h, b), b))
            oracle = eigen_membership(h)
            disagreements += newton != oracle
            members += oracle
    assert disagreements == 0
    assert 500 < members < 3500  # both outcomes exercised
    assert time.perf_counter() - start < 30.0


@criterion(4, "four application paths agree; CP and TP characterizations coincide")
def test_criterion_04():
    rng = np.random.default_rng(4)
    for _ in range(100):
        din, dout, k = (int(v) for v in rng.integers(1, [5, 5, 6]))
        M = random_antilinear(din, dout, k, rng)
        rho = ginibre(rng, din, din)
        ref = sum(a @ rho.conj() @ bb.conj().T for a, bb in M.kraus_pairs)
        for got in (M(rho), apply_natural(M, rho), apply_choi(M.choi, rho),
                    M.stinespring.apply(rho)):
            assert np.max(np.abs(got - ref)) < 1e-10
    cp_mismatch = tp_mismatch = 0
    for i in range(100):
        d = 2 + i % 3
        if i % 2:
            As = [ginibre(rng, d, d) for _ in range(1 + i % 4)]
            M = AntilinearSuperOp(d, d, As, As)
        else:
            M = random_antilinear(d, d, 1 + i % 4, rng)
        K = kraus_from_choi(M.choi)
        cp_form = np.allclose(K.A, K.B, atol=1e-8)
        cp_mismatch += is_antilinear_CP(M) != cp_form
        T = random_antilinear_channel(d, d, rng) if i % 3 == 0 else random_antilinear(d, d, 2, rng)
        kraus_v, choi_v = tp_violation(T)
        tp_mismatch += (kraus_v < 1e-9) != (choi_v < 1e-9)
    assert cp_mismatch == 0 and tp_mismatch == 0


@criterion(5, "antilinear adjoint laws")
def test_criterion_05():
    rng = np.random.default_rng(5)
    for _ in range(100):
        d = int(rng.integers(1, 5))
        M = random_antilinear(d, d, int(rng.integers(1, 4)), rng)
        N = random_antilinear(d, d, int(rng.integers(1, 4)), rng)
        rho = ginibre(rng, d, d)
        assert np.max(np.abs(antilinear_adjoint(antilinear_adjoint(M))(rho) - M(rho))) < 1e-10
        lhs = adjoint(compose(M, N))
        rhs = compose(antilinear_adjoint(N), antilinear_adjoint(M))
        assert np.max(np.abs(lhs(rho) - rhs(rho))) < 1e-10
        L = natural_rep(M)
        assert np.max(np.abs(natural_rep(antilinear_adjoint(M))
                             - natural_antilinear_adjoint(L))) < 1e-10


@criterion(6, "qubit identity 4 det rho = 2 Tr(rho rho~) = x0^2 - |x|^2")
def test_criterion_06():
    rng = np.random.default_rng(6)
    b = ggm_basis(2)
    for _ in range(1000):
        rho = random_density(2, rng, rank=int(rng.integers(1, 3)))
        x = to_bloch(rho, b).x
        det4 = 4 * np.linalg.det(rho).real
        flip = 2 * np.trace(rho @ Y @ rho.conj() @ Y).real
        mink = x[0] ** 2 - x[1:] @ x[1:]
        assert abs(det4 - flip) < 1e-12 and abs(flip - mink) < 1e-12


@criterion(7, "Lorentzian-norm identity, dual path, five (n, d) configurations")
def test_criterion_07():
    rng = np.random.default_rng(7)
    for n, d in [(2, 2), (3, 2), (4, 2), (2, 3), (3, 3)]:
        b = ggm_basis(d)
        worst = max(verify_eq_R(haar_state(d**n, rng), n, d, b=b).residual for _ in range(100))
        assert worst < 1e-10, (n, d, worst)


@criterion(8, "distribution equality with exact coefficients")
def test_criterion_08():
    rng = np.random.default_rng(8)
    for n, d in [(3, 2), (4, 2), (3, 3)]:
        c = distribution_coefficients(n, d)
        b = ggm_basis(d)
        worst = max(verify_distribution(haar_state(d**n, rng), c, b) for _ in range(200))
        assert worst < 1e-9, (n, d, worst)
    four = distribution_coefficients(4, 2).canonical()
    for bp, a in four.coeffs.items():
        assert a == (-2 if len(bp.A) == 2 else 2)
    assert distribution_coefficients(3, 2).trivial


def _wootters(rho):
    ev = np.linalg.eigvals(rho @ YY @ rho.conj() @ YY).real
    ev = np.where(ev > 1e-13 * ev.max(), ev, 0.0)
    lam = np.sort(np.sqrt(ev))[::-1]
    return max(0.0, lam[0] - lam[1:].sum())


@criterion(9, "two-qubit chain Tr R = 2 S_L = C^2 against the Wootters formula")
def test_criterion_09():
    rng = np.random.default_rng(9)
    b = ggm_basis(2)
    sigs = [full_parity(2)] * 2
    for _ in range(500):
        psi = haar_state(4, rng)
        rho = np.outer(psi, psi.conj())
        tr = trace_R(rho, 2, 2, b)
        sl = 2 * linear_entropy(partial_trace(rho, [0], 2, 2))
        c = theta_concurrence(rho, sigs, 1, b)
        assert abs(tr - sl) < 1e-10
        assert abs(tr - c**2) < 1e-10
        assert abs(c - _wootters(rho)) < 1e-10


@criterion(10, "qutrit L2: Moebius form holds, form without constant is off by +1")
def test_criterion_10():
    rng = np.random.default_rng(10)
    b = ggm_basis(3)
    worst = max(qutrit_L2_check(haar_state(27, rng), b).mobius_residual for _ in range(200))
    assert worst < 1e-10
    zero = np.zeros(27)
    zero[0] = 1
    rep = qutrit_L2_check(zero, b)
    assert abs(rep.direct - 4) < 1e-12 and abs(rep.no_constant - 3) < 1e-12
    assert abs(rep.offset - 1) < 1e-12


@criterion(11, "shrinking: member output, boundary within 1e-8, sigma_8 length, idempotent")
def test_criterion_11():
    rng = np.random.default_rng(11)
    for d in (2, 3, 4):
        b = ggm_basis(d)
        for _ in range(30):
            u = rng.normal(size=d * d - 1)
            u /= np.linalg.norm(u)
            # boundary oracle: rho(t) = (I + t sum u_k s_k) / d is PSD iff t <= -1/min eig
            H = np.einsum("k,kab->ab", u, b.elements[1:])
            t_star = -1 / np.linalg.eigvalsh(H)[0]
            assert abs(max_length_along(u, b) - t_star) < 1e-8
            x = BlochVector(d, np.concatenate(([1.0], 1.5 * t_star * u)))
            s = shrink_to_body(x, b)
            assert is_bloch_body(s, b)
            assert abs(np.linalg.norm(s.spatial) - t_star) < 1e-8
            assert np.array_equal(shrink_to_body(s, b).x, s.x)
    assert abs(max_length_along(np.eye(8)[7], ggm_basis(3)) - 1 / np.sqrt(2)) < 1e-8


@criterion(12, "orthogonal maps keep purity, Lorentz maps keep the Minkowski form")
def test_criterion_12():
    rng = np.random.default_rng(12)
    for i in range(500):
        d = 2 + i % 3
        b = ggm_basis(d)
        rho = random_density(d, rng)
        x = to_bloch(rho, b).x
        y = apply_transform(random_rotation(d * d, rng), x).x
        assert abs(y @ y / d - np.trace(rho @ rho).real) < 1e-10
        metric = lorentz_metric(d * d)
        z = apply_transform(random_lorentz(metric, rng), x).x
        assert abs(minkowski_form(z, metric) - minkowski_form(x, metric)) < 1e-9


@criterion(13, "CLI determinism and exit codes")
def test_criterion_13(capsys, tmp_path):
    def run(*argv):
        code = main(list(argv))
        return code, capsys.readouterr().out

    for kind in ("state", "channel"):
        a = run("sample", kind, "--d", "3", "--seed", "123")
        b = run("sample", kind, "--d", "3", "--seed", "123")
        assert a == b and a[0] == 0
    a = run("verify-distribution", "--n", "4", "--d", "2", "--samples", "200", "--seed", "1")
    assert a[0] == 0 and json.loads(a[1])["max_residual"] < 1e-10
    assert run("verify-distribution", "--n", "4", "--d", "2", "--samples", "200",
               "--seed", "1") == a
    assert run("basis", "--d", "3")[0] == 0
    assert run("basis", "--d", "1")[0] == 2
    bad = tmp_path / "pair.json"
    bad.write_text(json.dumps(AntilinearSuperOp(2, 2, [np.eye(2)], [2 * np.eye(2)]).to_json()))
    assert run("check-channel", str(bad))[0] == 1
    good = tmp_path / "k.json"
    good.write_text(json.dumps(hill_wootters().to_json()))
    assert run("check-channel", str(good))[0] == 0
    broken = tmp_path / "broken.json"
    broken.write_text('{"matrix": [[1, 0], [0, 0]')
    assert run("check-state", str(broken))[0] == 2
    st = tmp_path / "s.json"
    st.write_text(json.dumps({"matrix": jsonio.encode_matrix(np.eye(2) / 2)}))
    assert run("check-state", str(st))[0] == 0
