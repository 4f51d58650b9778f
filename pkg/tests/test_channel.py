"""Channel analysis tests: correlation matrices, N/M, teleportation, CHSH."""
import numpy as np
import pytest
from numpy.testing import assert_allclose

from entkit import channel, measures, statezoo
from entkit.qcore import DomainError, density
from util import bisect_predicate, fef_closed_form, random_density

WERNER_BELL_BOUNDARY = (3.0 + np.sqrt(2.0)) / (4.0 * np.sqrt(2.0))


# ---------------------------------------------------------------------------
# correlation matrix and N/M
# ---------------------------------------------------------------------------

def test_correlation_matrix_maximally_mixed_is_zero():
    rho = density((2, 2), np.eye(4) / 4)
    assert_allclose(channel.correlation_matrix(rho), np.zeros((3, 3)), atol=1e-14)


@pytest.mark.parametrize("F", [0.4, 0.75, 1.0])
def test_correlation_matrix_werner_is_isotropic(F):
    t = channel.correlation_matrix(statezoo.werner(F))
    assert_allclose(t, -(4 * F - 1) / 3 * np.eye(3), atol=1e-12)


@pytest.mark.parametrize("C", [0.2, 0.5, 0.8])
def test_correlation_matrix_mjwk_diagonal(C):
    # t_xx picks up twice the real corner coherence, t_zz the populations
    h = statezoo.mjwk_h(C)
    t = channel.correlation_matrix(statezoo.mjwk(C))
    assert_allclose(t, np.diag([C, -C, 4 * h - 1]), atol=1e-12)


def test_n_and_m_values():
    assert channel.n_value(statezoo.werner(1.0)) == pytest.approx(3.0, abs=1e-12)
    assert channel.m_value(statezoo.werner(1.0)) == pytest.approx(2.0, abs=1e-12)
    assert channel.n_value(statezoo.nmems(0.0)) == pytest.approx(5 / 3, abs=1e-12)
    mixed = density((2, 2), np.eye(4) / 4)
    assert channel.n_value(mixed) == pytest.approx(0.0, abs=1e-12)
    assert channel.m_value(mixed) == pytest.approx(0.0, abs=1e-12)


def test_fidelity_closed_forms():
    assert channel.optimal_fidelity(statezoo.werner(0.75)) == pytest.approx(
        (2 * 0.75 + 1) / 3, abs=1e-12)
    mixed = density((2, 2), np.eye(4) / 4)
    assert channel.optimal_fidelity(mixed) == pytest.approx(0.5, abs=1e-12)


def test_optimal_fidelity_dimension_checks():
    with pytest.raises(DomainError):
        channel.optimal_fidelity(random_density(np.random.default_rng(0), (2, 3)))
    with pytest.raises(DomainError):
        channel.optimal_fidelity(statezoo.werner(0.9), n=3)


# ---------------------------------------------------------------------------
# explicit teleportation
# ---------------------------------------------------------------------------

def test_perfect_channels_teleport_exactly():
    rin = channel.input_qubit(0.7, 0.2 + 0.1j)
    for k in range(1, 5):
        for out in channel.teleport_through(rin, statezoo.bell(k).density()):
            assert out.hs_distance == pytest.approx(0.0, abs=1e-12)
            assert out.fidelity == pytest.approx(1.0, abs=1e-12)


def _mjwk_case1(x, y, C):
    n = x * (1 - C / 2) + (1 - x) * C / 2
    n1 = x * C / 2 + (1 - x) * (1 - C / 2)
    b1 = np.array([[x * C / (2 * n), y * C / (2 * n)],
                   [np.conj(y) * C / (2 * n), (x * (2 - 3 * C) + C) / (2 * n)]])
    b3 = np.array([[((3 * x - 2) * C + 2 * (1 - x)) / (2 * n1), y * C / (2 * n1)],
                   [np.conj(y) * C / (2 * n1), (1 - x) * C / (2 * n1)]])
    d1 = (x ** 2 * (1 - C / (2 * n)) ** 2 + 2 * abs(y) ** 2 * (1 - C / (2 * n)) ** 2
          + ((1 - x) - (x * (2 - 3 * C) + C) / (2 * n)) ** 2)
    d3 = ((x - ((3 * x - 2) * C + 2 * (1 - x)) / (2 * n1)) ** 2
          + 2 * abs(y) ** 2 * (1 - C / (2 * n1)) ** 2
          + (1 - x) ** 2 * (1 - C / (2 * n1)) ** 2)
    return b1, b3, d1, d3


def _mjwk_case2(x, y, C):
    n = (1 + x) / 3.0
    n1 = x / 3.0 + 2 * (1 - x) / 3.0
    b1 = np.array([[x / (3 * n), y * C / (2 * n)],
                   [np.conj(y) * C / (2 * n), 1 / (3 * n)]])
    b3 = np.array([[1 / (3 * n1), y * C / (2 * n1)],
                   [np.conj(y) * C / (2 * n1), (1 - x) / (3 * n1)]])
    d1 = (x ** 2 * (1 - 1 / (3 * n)) ** 2 + 2 * abs(y) ** 2 * (1 - C / (2 * n)) ** 2
          + ((1 - x) - 1 / (3 * n)) ** 2)
    return b1, b3, d1


@pytest.mark.parametrize("C,x,y", [(0.8, 1.0, 0.0), (0.9, 0.6, 0.3 + 0.2j),
                                   (0.7, 0.25, 0.1 - 0.35j)])
def test_mjwk_teleport_strong_coherence(C, x, y):
    outs = channel.teleport_through(channel.input_qubit(x, y), statezoo.mjwk(C))
    b1, b3, d1, d3 = _mjwk_case1(x, y, C)
    assert np.max(np.abs(outs[0].output_state.matrix - b1)) < 1e-12
    assert np.max(np.abs(outs[1].output_state.matrix - b1)) < 1e-12
    assert np.max(np.abs(outs[2].output_state.matrix - b3)) < 1e-12
    assert np.max(np.abs(outs[3].output_state.matrix - b3)) < 1e-12
    assert outs[0].hs_distance == pytest.approx(d1, abs=1e-10)
    assert outs[2].hs_distance == pytest.approx(d3, abs=1e-10)
    assert sum(o.probability for o in outs) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("C,x,y", [(0.5, 0.6, 0.3 + 0.2j), (0.3, 0.9, 0.2j)])
def test_mjwk_teleport_weak_coherence(C, x, y):
    outs = channel.teleport_through(channel.input_qubit(x, y), statezoo.mjwk(C))
    b1, b3, d1 = _mjwk_case2(x, y, C)
    assert np.max(np.abs(outs[0].output_state.matrix - b1)) < 1e-12
    assert np.max(np.abs(outs[2].output_state.matrix - b3)) < 1e-12
    assert outs[0].hs_distance == pytest.approx(d1, abs=1e-10)


def test_input_qubit_validation():
    with pytest.raises(DomainError):
        channel.input_qubit(1.2, 0.0)
    with pytest.raises(DomainError):
        channel.input_qubit(0.5, 0.6)          # coherence too large


# ---------------------------------------------------------------------------
# CHSH
# ---------------------------------------------------------------------------

STANDARD_SETTINGS = (
    np.array([1.0, 0.0, 0.0]),
    np.array([0.0, 1.0, 0.0]),
    np.array([1.0, 1.0, 0.0]) / np.sqrt(2),
    np.array([1.0, -1.0, 0.0]) / np.sqrt(2),
)


def test_chsh_bell_state_reaches_quantum_maximum():
    rho = statezoo.bell(3).density()
    assert channel.chsh_max(rho, STANDARD_SETTINGS) == pytest.approx(
        2 * np.sqrt(2), abs=1e-12)
    assert channel.chsh_supremum(rho) == pytest.approx(2 * np.sqrt(2), abs=1e-12)


def test_chsh_product_state_classical_bound():
    rng = np.random.default_rng(31)
    a = random_density(rng, (2,))
    b = random_density(rng, (2,))
    rho = density((2, 2), np.kron(a.matrix, b.matrix))
    for _ in range(20):
        settings = [v / np.linalg.norm(v) for v in rng.normal(size=(4, 3))]
        assert channel.chsh_max(rho, settings) <= 2.0 + 1e-9


def test_chsh_settings_validation():
    with pytest.raises(DomainError):
        channel.chsh_max(statezoo.werner(0.9),
                         (np.ones(3), *STANDARD_SETTINGS[1:]))


def test_werner_bell_violation_boundary_located_by_bisection():
    boundary = bisect_predicate(
        lambda F: channel.m_value(statezoo.werner(F)) <= 1.0, 0.6, 0.95, tol=1e-10)
    assert boundary == pytest.approx(WERNER_BELL_BOUNDARY, abs=1e-9)


def test_chsh_supremum_cirelson_random():
    rng = np.random.default_rng(37)
    for _ in range(200):
        rho = random_density(rng, (2, 2), rank=int(rng.integers(1, 5)))
        assert channel.chsh_supremum(rho) <= 2 * np.sqrt(2) + 1e-9


# ---------------------------------------------------------------------------
# family analyzers and their closed forms
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("family,grid,fixed", [
    ("werner", np.linspace(0.3, 1.0, 15), {}),
    ("mjwk", np.linspace(0.0, 1.0, 15), {}),
    ("nmems", np.linspace(0.0, 1.0, 15), {}),
    ("werner_derivative", np.linspace(0.5, 0.95, 10), {"F": 0.85}),
    ("wei", np.linspace(0.1, 0.6, 8), {"a": 0.2, "b": 0.2}),
])
def test_numeric_pipeline_matches_closed_forms(family, grid, fixed):
    for value, report, forms in channel.analyze_family(family, grid, **fixed):
        for key, expected in forms.items():
            if expected is None or key == "entangled_a_bound":
                continue
            got = getattr(report, key, None)
            if got is None:
                continue
            assert got == pytest.approx(expected, abs=1e-9), (family, value, key)


def test_mjwk_useful_iff_concurrence_above_one_third():
    rows = channel.analyze_family("mjwk", np.linspace(0.0, 1.0, 41))
    for c, report, _ in rows:
        assert report.useful_for_teleportation == (c > 1.0 / 3.0 + 1e-12) or \
            abs(c - 1.0 / 3.0) < 1e-9


def test_nmems_bounds():
    rows = channel.analyze_family("nmems", np.linspace(0.0, 1.0, 101))
    for p, report, _ in rows:
        assert report.m_value <= 1.0 + 1e-9
        assert report.useful_for_teleportation == (p < 0.25 - 1e-12) or \
            abs(p - 0.25) < 1e-9


def test_werner_beats_mjwk_at_equal_concurrence():
    for c in np.linspace(0.01, 1.0, 25):
        f_w = channel.closed_forms("werner", F=(1 + c) / 2)["fidelity_opt"]
        f_m = channel.closed_forms("mjwk", C=c)["fidelity_opt"]
        assert f_w >= f_m - 1e-12


def test_werner_beats_wei_at_equal_gamma():
    for g in np.linspace(0.1, 0.9, 9):
        a = b = (1 - g) / 4            # a + b > 0
        f_w = channel.closed_forms("werner", F=(1 + g) / 2)["fidelity_opt"]
        f_v = channel.closed_forms("wei", a=a, b=b, gamma=g)["fidelity_opt"]
        assert f_v < f_w


def test_werner_derivative_bell_violation_cases():
    F = 0.9                            # above the Bell boundary fraction
    root = np.sqrt(2 * (4 * F - 1) ** 2 - 9) / (4 * F - 1)
    gamma_bound = 0.5 * (1 + root)
    assert channel.m_value(statezoo.werner_derivative(F, 0.55)) > 1.0          # a < gamma
    above = min(gamma_bound + 0.02, 1.0)
    assert channel.m_value(statezoo.werner_derivative(F, above)) < 1.0


def test_singlet_fraction_relation_where_useful():
    for family, grid, fixed in (("werner", np.linspace(0.55, 1.0, 10), {}),
                                ("mjwk", np.linspace(0.4, 1.0, 10), {}),
                                ("nmems", np.linspace(0.0, 0.2, 6), {})):
        for value, report, _ in channel.analyze_family(family, grid, **fixed):
            if report.n_value > 1.0:
                assert report.singlet_fraction == pytest.approx(
                    (1.0 + report.n_value) / 4.0, abs=1e-8)


def test_usefulness_iff_fidelity_beats_classical():
    rng = np.random.default_rng(41)
    for _ in range(100):
        rho = random_density(rng, (2, 2), rank=int(rng.integers(1, 5)))
        rep = channel.analyze_channel(rho, restarts=0)
        assert rep.useful_for_teleportation == (rep.fidelity_opt > 2.0 / 3.0)
        assert rep.fidelity_opt == pytest.approx(0.5 * (1 + rep.n_value / 3), abs=1e-12)
        assert rep.violates_bell_chsh == (rep.m_value > 1.0)


def test_n_value_bounded_by_negativity():
    rng = np.random.default_rng(43)
    for _ in range(200):
        rho = random_density(rng, (2, 2), rank=int(rng.integers(1, 5)))
        assert channel.n_value(rho) <= 1.0 + 2.0 * measures.negativity(rho) + 1e-9


def test_nmems_linear_entropy_bounds_on_useful_window():
    # S_L = (2/27)(8 + 14p - 13p^2) rises from 16/27 at p = 0 towards
    # 19/24 as p -> 1/4; the closed form is cross-checked by direct purity
    for p in np.linspace(0.0, 0.2499, 20):
        rho = statezoo.nmems(p)
        s_l = measures.entropy(rho, "linear")
        assert s_l == pytest.approx(2.0 / 27.0 * (8 + 14 * p - 13 * p * p), abs=1e-12)
        assert 16.0 / 27.0 - 1e-12 <= s_l < 19.0 / 24.0


def test_optimal_fidelity_qutrit_route_on_distilled_clone():
    from entkit import cloning

    joint = cloning.qutrit_cloned_pair(np.sqrt(1 / 8)).joint
    dist = cloning.distill(joint, cloning.distillation_filter(joint))
    f = channel.optimal_fidelity(dist, n=3, restarts=0)
    assert f == pytest.approx(0.5409, abs=1e-3)


def test_report_singlet_fraction_against_oracle():
    rng = np.random.default_rng(47)
    for _ in range(20):
        rho = random_density(rng, (2, 2))
        rep = channel.analyze_channel(rho, restarts=0)
        assert rep.singlet_fraction <= fef_closed_form(rho) + 1e-9
