"""Cone verdicts: PSD/PPT, product see-saw, sum membership, extremality probe."""

import numpy as np
import pytest

from influencefree.choimaps import state_eval, swap_operator, unnormalized_q
from influencefree.cones import (
    decomposable_sum_membership,
    extremality_probe,
    is_popt,
    is_ppt,
    is_psd,
    popt_minimize,
)
from influencefree.linalg import frobenius, partial_transpose
from influencefree.sampling import random_hermitian


def boundary_member() -> np.ndarray:
    """PSD + (PSD)^Gamma rank-one pieces; neither PSD nor PPT itself."""
    psi = np.zeros(4)
    psi[0] = psi[3] = 1 / np.sqrt(2)
    phi = np.zeros(4)
    phi[1] = phi[2] = 1 / np.sqrt(2)
    return np.outer(psi, psi) + partial_transpose(np.outer(phi, phi), (2, 2), 1)


def test_is_psd_verdicts():
    member = is_psd(np.diag([1.0, 2.0]))
    assert bool(member) and member.status == "member"
    assert member.min_value == pytest.approx(1.0)
    refuted = is_psd(np.diag([1.0, -0.5]))
    assert not bool(refuted) and refuted.status == "refuted"
    assert refuted.min_value == pytest.approx(-0.5)
    v = refuted.witness
    assert np.real(v.conj() @ np.diag([1.0, -0.5]) @ v) == pytest.approx(-0.5)


def test_is_ppt_verdicts():
    # Q^Gamma is the swap, eigenvalue -1
    refuted = is_ppt(unnormalized_q(2), (2, 2))
    assert refuted.status == "refuted"
    assert refuted.min_value == pytest.approx(-1.0)
    assert "checked" in refuted.info
    product = np.kron(np.diag([1.0, 2.0]), np.diag([0.5, 3.0]))
    assert bool(is_ppt(product, (2, 2)))


def test_popt_minimize_deterministic_witness():
    rng = np.random.default_rng(42)
    w = random_hermitian(rng, 4)
    r1 = popt_minimize(w, (2, 2), seed=5, restarts=8)
    r2 = popt_minimize(w, (2, 2), seed=5, restarts=8)
    assert r1.min_value == r2.min_value
    assert np.array_equal(r1.witness_x, r2.witness_x)
    assert np.array_equal(r1.witness_y, r2.witness_y)
    assert 1 <= r1.restarts_used <= 8
    got = state_eval(w, (2, 2), r1.witness_x, r1.witness_y)
    assert got == pytest.approx(r1.min_value, abs=1e-12)
    with pytest.raises(ValueError):
        popt_minimize(w, (2, 3), seed=5)


def test_popt_minimize_swap_floor():
    r = popt_minimize(swap_operator(2), (2, 2), seed=3, restarts=16)
    assert abs(r.min_value) <= 1e-9


def test_is_popt_psd_branch():
    v = is_popt(np.eye(4), (2, 2), seed=1)
    assert bool(v) and v.status == "certified"
    assert v.info["branch"] == "psd" and v.info["psd"] is True


def test_is_popt_ppt_branch():
    v = is_popt(swap_operator(2), (2, 2), seed=1)
    assert v.status == "certified"
    assert v.info["branch"] == "ppt" and v.info["psd"] is False


def test_is_popt_refuted_with_witness():
    w = np.diag([1.0, 1.0, 1.0, -1.0])
    v = is_popt(w, (2, 2), seed=5)
    assert not bool(v) and v.status == "refuted"
    assert v.min_value == pytest.approx(-1.0)
    x, y = v.witness
    assert state_eval(w, (2, 2), x, y) == pytest.approx(v.min_value, abs=1e-12)
    assert v.info["restarts_used"] >= 1


def test_is_popt_decomposition_branch():
    w = boundary_member()
    assert np.linalg.eigvalsh(w).min() == pytest.approx(-0.5)
    assert np.linalg.eigvalsh(partial_transpose(w, (2, 2), 1)).min() == pytest.approx(-0.5)
    v = is_popt(w, (2, 2), seed=11)
    assert v.status == "certified"
    assert v.info["branch"] == "decomposition"
    cert = v.certificate
    assert frobenius(w - cert.p - cert.q) <= 1e-6


def test_is_popt_likely_when_membership_is_starved():
    # one Dykstra iteration cannot reach the boundary member, so the verdict
    # degrades to likely with the membership status recorded
    w = boundary_member()
    v = is_popt(w, (2, 2), seed=11, dykstra_max_iter=1)
    assert v.status == "likely"
    assert v.min_value >= -1e-9
    assert v.info["membership"] == "inconclusive"


def test_membership_psd_is_instant():
    rng = np.random.default_rng(77)
    g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    w = g @ g.conj().T
    v = decomposable_sum_membership(w, (2, 2))
    assert v.status == "member"
    assert v.info["iterations"] == 1
    assert v.certificate.residual <= 1e-7


def test_membership_refutes_at_an_exact_fixed_point():
    # diag(1,1,1,-1) sits at Frobenius distance exactly 1 from the cone sum:
    # <e1 e1|W|e1 e1> = -1 while every cone element is >= 0 there
    w = np.diag([1.0, 1.0, 1.0, -1.0])
    v = decomposable_sum_membership(w, (2, 2))
    assert v.status == "refuted"
    assert v.info["stalled"] is True
    assert v.residual == pytest.approx(1.0, abs=1e-9)
    _assert_cone_feasible(v.certificate, w)


def test_membership_inconclusive_carries_cone_feasible_pair():
    # the stall check first runs at iteration 500, so a 300-iteration budget
    # ends inconclusive; the reported pair must still sit exactly in the cones
    w = np.diag([1.0, 1.0, 1.0, -1.0])
    v = decomposable_sum_membership(w, (2, 2), max_iter=300)
    assert v.status == "inconclusive"
    assert v.residual >= 1.0 - 1e-9
    _assert_cone_feasible(v.certificate, w)


def _assert_cone_feasible(cert, w):
    assert np.linalg.eigvalsh((cert.p + cert.p.conj().T) / 2).min() >= -1e-10
    q_gamma = partial_transpose(cert.q, (2, 2), 1)
    assert np.linalg.eigvalsh((q_gamma + q_gamma.conj().T) / 2).min() >= -1e-10
    assert frobenius(w - cert.p - cert.q) == pytest.approx(cert.residual, abs=1e-12)


def test_extremality_rank_one_is_decomposable():
    a = 1.5 * np.outer([1.0, 0.0], [1.0, 0.0])
    v = extremality_probe(a)
    assert v.status == "decomposable_nontrivially"
    h = v.certificate
    from influencefree.choimaps import choi_from_conjugation

    c_a = choi_from_conjugation(a).choi
    assert np.trace(h).real == pytest.approx(1.0, abs=1e-6)
    assert np.linalg.eigvalsh(partial_transpose(h, (2, 2), 1)).min() >= -2e-7
    assert np.linalg.eigvalsh((c_a - h + (c_a - h).conj().T) / 2).min() >= -2e-7


def test_extremality_identity_conjugation_is_rigid():
    v = extremality_probe(np.eye(2), max_iter=200000)
    assert v.status == "rigid"
    assert v.residual > 1e-7
    with pytest.raises(ValueError):
        extremality_probe(np.ones((2, 3)))
