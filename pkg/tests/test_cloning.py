"""Cloning machine tests: parameters, outputs, distillation, dense coding."""
import json
import pathlib

import numpy as np
import pytest
from numpy.testing import assert_allclose

from entkit import cloning, measures, statezoo
from entkit.qcore import (
    DomainError,
    density,
    ket,
    partial_trace,
    partial_transpose,
    pure,
    tensor,
)
from util import random_pure

FIXTURE = json.loads(
    (pathlib.Path(__file__).parent / "fixtures" / "cloning_dense_coding.json").read_text())
D_OPT = np.sqrt(1.0 / 8.0)


# ---------------------------------------------------------------------------
# machine parameters and the isometry
# ---------------------------------------------------------------------------

def test_optimal_parameters_qutrit():
    p = cloning.uqcm_params(3)
    assert p.c ** 2 == pytest.approx(0.5, abs=1e-12)
    assert p.d ** 2 == pytest.approx(1.0 / 8.0, abs=1e-12)
    assert p.s == pytest.approx(5.0 / 8.0, abs=1e-12)
    assert p.is_optimal


def test_optimal_parameters_qubit_clone_fidelity():
    p = cloning.uqcm_params(2)
    assert p.s == pytest.approx(2.0 / 3.0, abs=1e-12)
    # fidelity of each clone with the input: s + (1 - s)/2 = 5/6
    assert p.s + (1 - p.s) / 2 == pytest.approx(5.0 / 6.0, abs=1e-12)


def test_wootters_zurek_limit():
    p = cloning.uqcm_params(2, d=0.0)
    assert p.c == pytest.approx(1.0)
    assert p.s == pytest.approx(1.0)
    psi = pure((2,), ket(1, 2))
    full, marginal = cloning.clone_pure(psi, p)
    # basis states are copied exactly: |1>|1>|X_1> has index 7
    assert_allclose(marginal.matrix, np.diag([0.0, 1.0]), atol=1e-12)
    assert abs(full.vector[7]) == pytest.approx(1.0)


def test_uqcm_params_range():
    with pytest.raises(DomainError):
        cloning.uqcm_params(2, d=0.8)
    with pytest.raises(DomainError):
        cloning.uqcm_params(1)


@pytest.mark.parametrize("n,d", [(2, None), (2, 0.3), (3, None), (3, 0.2), (3, 0.5)])
def test_cloning_transformation_is_an_isometry(n, d):
    v = cloning.cloning_isometry(cloning.uqcm_params(n, d))
    assert np.max(np.abs(v.conj().T @ v - np.eye(n))) <= 1e-10


# ---------------------------------------------------------------------------
# single-input cloning
# ---------------------------------------------------------------------------

def test_clone_marginal_qubit_basis_state():
    full, marginal = cloning.clone_pure(pure((2,), ket(0, 2)), cloning.uqcm_params(2))
    assert_allclose(marginal.matrix.real, np.diag([5.0 / 6.0, 1.0 / 6.0]), atol=1e-12)


def test_clone_marginal_qutrit_scaling_form():
    psi = pure((3,), np.ones(3) / np.sqrt(3))
    _, marginal = cloning.clone_pure(psi, cloning.uqcm_params(3))
    expected = 5.0 / 8.0 * np.outer(psi.vector, psi.vector.conj()) + np.eye(3) / 8.0
    assert np.max(np.abs(marginal.matrix - expected)) <= 1e-10


@pytest.mark.parametrize("n", [2, 3])
def test_clone_scaling_form_for_random_inputs(n):
    rng = np.random.default_rng(100 + n)
    params = cloning.uqcm_params(n)
    for _ in range(50):
        psi = random_pure(rng, (n,))
        full, marginal = cloning.clone_pure(psi, params)
        expected = params.s * np.outer(psi.vector, psi.vector.conj()) \
            + (1 - params.s) / n * np.eye(n)
        assert np.max(np.abs(marginal.matrix - expected)) <= 1e-10
        other = partial_trace(full.density(), keep=(1,))
        assert np.max(np.abs(marginal.matrix - other.matrix)) <= 1e-12


def test_clone_pure_dimension_mismatch():
    with pytest.raises(DomainError):
        cloning.clone_pure(pure((2,), ket(0, 2)), cloning.uqcm_params(3))


# ---------------------------------------------------------------------------
# two-qutrit clone pair
# ---------------------------------------------------------------------------

def test_clone_pair_marginals_equal_on_grid():
    for d in np.linspace(0.05, 0.5, 10):
        joint = cloning.qutrit_cloned_pair(d).joint
        a = partial_trace(joint, keep=(0,))
        b = partial_trace(joint, keep=(1,))
        assert np.max(np.abs(a.matrix - b.matrix)) <= 1e-12


def test_clone_pair_pt_eigenvalues_match_closed_forms():
    for d in np.linspace(0.01, 0.5, 50):
        joint = cloning.qutrit_cloned_pair(d).joint
        evals = np.linalg.eigvalsh(partial_transpose(joint, 0))
        for closed in (cloning.pt_eigenvalue_1(d), cloning.pt_eigenvalue_2(d)):
            assert np.min(np.abs(evals - closed)) <= 1e-9, d


def test_clone_pair_is_npt_everywhere():
    for d in np.linspace(0.01, 0.5, 50):
        joint = cloning.qutrit_cloned_pair(d).joint
        assert np.linalg.eigvalsh(partial_transpose(joint, 0)).min() < -1e-10


def test_clone_pair_optimal_flag_and_range():
    assert cloning.qutrit_cloned_pair(D_OPT).optimal
    assert not cloning.qutrit_cloned_pair(0.2).optimal
    with pytest.raises(DomainError):
        cloning.qutrit_cloned_pair(0.0)
    with pytest.raises(DomainError):
        cloning.qutrit_cloned_pair(0.51)


def test_reduced_clone_matches_closed_form():
    # single-clone marginal (1/3)[[1, k, k], [k, 1, k], [k, k, 1]] with
    # k = d (2 sqrt(1 - 4 d^2) + d)
    for d in (0.2, 0.35, 0.5):
        joint = cloning.qutrit_cloned_pair(d).joint
        k = d * (2 * np.sqrt(1 - 4 * d * d) + d)
        expected = (np.eye(3) * (1 - k) + k * np.ones((3, 3))) / 3.0
        got = partial_trace(joint, keep=(1,)).matrix
        assert np.max(np.abs(got - expected)) <= 1e-12


# ---------------------------------------------------------------------------
# reduction criterion and filters
# ---------------------------------------------------------------------------

def test_reduction_holds_for_separable_product():
    rng = np.random.default_rng(200)
    a = np.diag([0.6, 0.3, 0.1])
    b = np.diag([0.5, 0.25, 0.25])
    rho = density((3, 3), tensor(a, b))
    assert not cloning.reduction_check(rho).violated
    _ = rng


def test_reduction_violated_by_cloned_outputs():
    assert cloning.reduction_check(cloning.qutrit_cloned_pair(D_OPT).joint).violated
    for d in (0.45, 0.5):
        res = cloning.reduction_check(cloning.qutrit_cloned_pair(d).joint)
        assert res.violated
        assert res.eigenvalue == pytest.approx(
            cloning.reduction_eigenvalue_nonopt(d), abs=1e-9)


def test_reduction_eigenvalue_closed_form_on_grid():
    for d in np.linspace(cloning.NONOPT_FILTER_D_MIN + 1e-6, 0.5, 20):
        joint = cloning.qutrit_cloned_pair(d).joint
        rho_a = partial_trace(joint, keep=(0,)).matrix
        evals = np.linalg.eigvalsh(tensor(rho_a, np.eye(3)) - joint.matrix)
        assert np.min(np.abs(evals - cloning.reduction_eigenvalue_nonopt(d))) <= 1e-9


def test_identity_filter_leaves_state_unchanged():
    rho = cloning.qutrit_cloned_pair(0.3).joint
    filt = cloning.FilterMatrix(np.eye(3, dtype=complex))
    out = cloning.distill(rho, filt)
    assert np.max(np.abs(out.matrix - rho.matrix)) <= 1e-12


def test_filter_from_eigenvector_validation():
    with pytest.raises(DomainError):
        cloning.filter_from_eigenvector(np.zeros(9), 3)
    with pytest.raises(DomainError):
        cloning.filter_from_eigenvector(np.ones(8), 3)


def test_distill_annihilation():
    rho = pure((2, 2), ket(3, 4)).density()     # |11><11|
    filt = cloning.FilterMatrix(np.sqrt(2) * np.diag([1.0, 0.0]).astype(complex))
    with pytest.raises(DomainError):
        cloning.distill(rho, filt)


def test_published_optimal_filter_spans_the_negative_eigenspace():
    # the most negative reduction eigenvalue is doubly degenerate; the
    # published filter is one eigenvector of that subspace, and distilling
    # with it gives exactly the same state as the computed filter
    joint = cloning.qutrit_cloned_pair(D_OPT).joint
    rho_a = partial_trace(joint, keep=(0,)).matrix
    op = tensor(rho_a, np.eye(3)) - joint.matrix
    evals, _ = np.linalg.eigh(op)
    assert evals[0] == pytest.approx(evals[1], abs=1e-12)

    s29 = np.sqrt(29.0)
    published = np.sqrt(3) * np.array(
        [[1.5 - s29 / 2, -3.5 + s29 / 2, -1.0],
         [3.5 - s29 / 2, -1.5 + s29 / 2, 1.0],
         [2.5 - s29 / 2, -2.5 + s29 / 2, 0.0]])
    vec = published.reshape(-1) / np.linalg.norm(published)
    assert np.max(np.abs(op @ vec - evals[0] * vec)) <= 1e-12

    # any filter from the degenerate subspace distills to the same state up
    # to local rotations: identical spectrum, singlet fraction and advantage
    mine = cloning.distill(joint, cloning.distillation_filter(joint))
    theirs = cloning.distill(joint, cloning.FilterMatrix(published.astype(complex)))
    assert_allclose(np.linalg.eigvalsh(mine.matrix),
                    np.linalg.eigvalsh(theirs.matrix), atol=1e-10)
    assert measures.singlet_fraction(mine, restarts=0) == pytest.approx(
        measures.singlet_fraction(theirs, restarts=0), abs=1e-10)
    assert cloning.dense_coding_advantage(mine) == pytest.approx(
        cloning.dense_coding_advantage(theirs), abs=1e-10)


def test_distilled_optimal_chain_frozen_values():
    joint = cloning.qutrit_cloned_pair(D_OPT).joint
    dist = cloning.distill(joint, cloning.distillation_filter(joint))
    f = measures.singlet_fraction(dist, restarts=0)
    assert f == pytest.approx(FIXTURE["singlet_fraction_distilled_optimal"], abs=1e-12)
    assert f > 1.0 / 3.0
    assert (3 * f + 1) / 4 == pytest.approx(FIXTURE["fidelity_distilled_optimal"], abs=1e-12)
    assert cloning.dense_coding_advantage(dist) == pytest.approx(
        FIXTURE["advantage_distilled_optimal"], abs=1e-12)


def test_distillation_never_hurts_the_worked_cases():
    for d in (D_OPT, 0.45, 0.5):
        joint = cloning.qutrit_cloned_pair(d).joint
        dist = cloning.distill(joint, cloning.distillation_filter(joint))
        f_in = measures.singlet_fraction(joint, restarts=0)
        f_out = measures.singlet_fraction(dist, restarts=0)
        assert f_out >= f_in - 1e-10


def test_nonopt_filter_r_defined_only_on_published_window():
    with pytest.raises(DomainError):
        cloning.nonopt_filter_r(0.4)
    r = cloning.nonopt_filter_r(0.5)
    assert r == pytest.approx((11.0 / 4.0 + np.sqrt(57.0) / 4.0), abs=1e-12)


# ---------------------------------------------------------------------------
# dense coding and the teleportation witness
# ---------------------------------------------------------------------------

def test_dense_coding_capacity_maximally_entangled_qutrits():
    rho = statezoo.generalized_max_entangled(3).density()
    assert cloning.dense_coding_capacity(rho) == pytest.approx(
        2 * np.log2(3), abs=1e-10)


def test_optimal_output_is_not_dense_codeable():
    joint = cloning.qutrit_cloned_pair(D_OPT).joint
    adv = cloning.dense_coding_advantage(joint)
    assert adv == pytest.approx(FIXTURE["advantage_optimal"], abs=1e-12)
    assert adv < 0


def test_undistilled_advantage_sign_profile():
    # negative through most of the range, positive close to d = 1/2
    for d in (0.1, 0.3, D_OPT, 0.45):
        assert cloning.dense_coding_advantage(cloning.qutrit_cloned_pair(d).joint) < 0
    assert cloning.dense_coding_advantage(
        cloning.qutrit_cloned_pair(0.5).joint) == pytest.approx(
            FIXTURE["advantage_undistilled_d_half"], abs=1e-12)


def test_distilled_nonopt_at_half_is_dense_codeable():
    joint = cloning.qutrit_cloned_pair(0.5).joint
    dist = cloning.distill(joint, cloning.distillation_filter(joint))
    chi = cloning.dense_coding_capacity(dist)
    assert chi == pytest.approx(FIXTURE["chi_distilled_nonopt_d_half"], abs=1e-12)
    assert cloning.dense_coding_advantage(dist) > 0
    assert (chi > 2.0) == FIXTURE["chi_exceeds_two_at_d_half"]


def test_teleportation_witness_qutrit_values():
    phi = statezoo.generalized_max_entangled(3).density()
    assert cloning.teleportation_witness_qutrit(phi) == pytest.approx(-2.0 / 3.0, abs=1e-12)
    mixed = density((3, 3), np.eye(9) / 9)
    assert cloning.teleportation_witness_qutrit(mixed) == pytest.approx(2.0 / 9.0, abs=1e-12)
    for d in (0.2, 0.35, 0.5):
        got = cloning.teleportation_witness_qutrit(cloning.qutrit_cloned_pair(d).joint)
        assert got == pytest.approx(4.0 * d * d / 3.0, abs=1e-10)
        assert got >= -1e-12


def test_witness_dimension_check():
    with pytest.raises(DomainError):
        cloning.teleportation_witness_qutrit(statezoo.werner(0.9))


# ---------------------------------------------------------------------------
# bipartite cloning
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("lam,d", [(0.5, None), (0.3, 0.35), (0.8, 0.2), (1.0, None)])
def test_clone_bipartite_matches_closed_forms(lam, d):
    params = cloning.uqcm_params(2, d)
    local, nonlocal_, pqrs = cloning.clone_bipartite(lam, params)
    assert np.max(np.abs(local.matrix - cloning.local_closed_form(lam, params))) <= 1e-12
    assert np.max(np.abs(nonlocal_.matrix - cloning.nonlocal_closed_form(lam, params))) <= 1e-12
    p, q, r, s = pqrs
    assert p + s + 2 * r == pytest.approx(1.0, abs=1e-12)       # unit trace


def test_clone_bipartite_pair_symmetries():
    params = cloning.uqcm_params(2, 0.3)
    lam = 0.4
    iso = cloning.cloning_isometry(params)
    amp = np.diag([np.sqrt(lam), np.sqrt(1 - lam)])
    full = np.einsum("ai,bj,ij->ab", iso, iso, amp).reshape((2,) * 6)
    full = full.transpose(0, 3, 1, 4, 2, 5).reshape(-1)
    state = density((2,) * 6, np.outer(full, full.conj()))
    clones = partial_trace(state, keep=(0, 1, 2, 3))
    rho13 = partial_trace(clones, keep=(0, 2)).matrix
    rho24 = partial_trace(clones, keep=(1, 3)).matrix
    rho14 = partial_trace(clones, keep=(0, 3)).matrix
    rho23 = partial_trace(clones, keep=(1, 2)).matrix
    assert np.max(np.abs(rho13 - rho24)) <= 1e-12
    assert np.max(np.abs(rho14 - rho23)) <= 1e-12


def test_clone_bipartite_werner_family_point():
    c = np.sqrt(2.0 / 3.0)
    params = cloning.uqcm_params(2, np.sqrt((1 - c * c) / 2))
    _, nonlocal_, pqrs = cloning.clone_bipartite(0.5, params)
    assert np.max(np.abs(nonlocal_.matrix - statezoo.cloned_mems(2.0 / 3.0).matrix)) <= 1e-12
    assert pqrs[1] == pytest.approx(4.0 / 9.0, abs=1e-12)


def test_nonlocal_critical_concurrence():
    assert cloning.nonlocal_critical_concurrence(1.0) == pytest.approx(0.5)
    # towards c = 1/sqrt(3) only maximal input entanglement survives
    assert cloning.nonlocal_critical_concurrence(1 / np.sqrt(3) + 1e-9) == pytest.approx(
        1.0, abs=1e-6)
    with pytest.raises(DomainError):
        cloning.nonlocal_critical_concurrence(0.5)


def test_clone_bipartite_entanglement_threshold():
    # concurrence of the non-local output flips sign exactly at the critical
    # input concurrence
    c = 0.9
    params = cloning.uqcm_params(2, np.sqrt((1 - c * c) / 2))
    crit = cloning.nonlocal_critical_concurrence(c)
    lam_crit = 0.5 * (1 - np.sqrt(1 - crit * crit))
    for lam, expect in ((lam_crit - 0.02, False), (lam_crit + 0.02, True)):
        _, nonlocal_, _ = cloning.clone_bipartite(lam, params)
        assert (measures.concurrence(nonlocal_) > 1e-9) == expect


def test_local_output_witness_and_separability():
    params = cloning.uqcm_params(2)          # universal machine, d^2 = 1/6
    local, _, _ = cloning.clone_bipartite(0.5, params)
    from entkit.protocols import W_A1

    got = measures.witness_expectation(W_A1, local)
    assert got == pytest.approx(1.0 / (3.0 * np.sqrt(3.0)), abs=1e-12)
    assert measures.peres_horodecki(local) == "separable"
