"""Controlled dense coding (CDC) and cloning-controlled secret sharing.

CDC runs simulate the actual protocol: the controller measures in a tilted
basis, the sender attaches an auxiliary system and applies a collective
unitary, and the auxiliary measurement decides success.  Runs are
deterministic given the outcomes; a Monte-Carlo wrapper samples outcomes with
their Born probabilities from an explicit seed.

Reported per-family concurrences follow each family's published closed form
(evaluated on the unnormalised post-measurement branch vector where that is
the underlying convention); the simulated shared state itself is also
returned so the honest value can always be recomputed.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from . import cloning, statezoo
from .qcore import (
    DensityMatrix,
    DomainError,
    I2,
    PureState,
    X,
    Y,
    Z,
    ket,
    partial_trace,
    pure,
    tensor,
)

SQRT2 = np.sqrt(2.0)


# ---------------------------------------------------------------------------
# measurement bases
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MeasurementBasis:
    """Orthonormal measurement basis of a controller qubit or qutrit."""

    angle: float
    vectors: tuple
    labels: tuple

    def __post_init__(self):
        g = np.array([[np.vdot(u, v) for v in self.vectors] for u in self.vectors])
        if np.max(np.abs(g - np.eye(len(self.vectors)))) > 1e-12:
            raise DomainError("measurement basis is not orthonormal")


def controller_basis(theta: float) -> MeasurementBasis:
    """{|+> = cos t|0> + sin t|1>,  |-> = sin t|0> - cos t|1>}."""
    plus = np.array([np.cos(theta), np.sin(theta)], dtype=complex)
    minus = np.array([np.sin(theta), -np.cos(theta)], dtype=complex)
    return MeasurementBasis(theta, (plus, minus), ("+", "-"))


def qutrit_controller_basis(theta: float) -> MeasurementBasis:
    """{up = sin t|0> + cos t|2>,  side = |1>,  down = cos t|0> - sin t|2>}."""
    up = np.array([np.sin(theta), 0.0, np.cos(theta)], dtype=complex)
    side = np.array([0.0, 1.0, 0.0], dtype=complex)
    down = np.array([np.cos(theta), 0.0, -np.sin(theta)], dtype=complex)
    return MeasurementBasis(theta, (up, side, down), ("up", "side", "down"))


# ---------------------------------------------------------------------------
# collective unitaries
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CollectiveUnitary:
    family: str
    theta: float
    epsilon: float | None
    matrix: np.ndarray = field(repr=False)


def _radical(value: float, name: str) -> float:
    if value < -1e-12:
        raise DomainError(f"angle outside admissible domain: {name} = {value:.3e} < 0")
    return np.sqrt(max(value, 0.0))


def _u1_matrix(ratio: float, rad: float) -> np.ndarray:
    # basis order |00>, |10>, |01>, |11> of (sender qubit, auxiliary qubit)
    return np.array(
        [[ratio, 0.0, rad, 0.0],
         [0.0, 1.0, 0.0, 0.0],
         [0.0, 0.0, 0.0, -1.0],
         [rad, 0.0, -ratio, 0.0]], dtype=complex)


def _u1(theta: float) -> np.ndarray:
    s, c = np.sin(theta), np.cos(theta)
    if abs(s) > abs(c) + 1e-12:
        raise DomainError("angle outside admissible domain: 1 - sin^2/cos^2 would be negative")
    rad = _radical(1.0 - (s / c) ** 2, "1 - sin^2/cos^2")
    return _u1_matrix(s / c, rad)


def _u2(theta: float, epsilon: float) -> np.ndarray:
    num = np.sin(theta) * np.sin(epsilon)
    den = np.cos(theta) * np.cos(epsilon)
    if abs(num) > abs(den) + 1e-12:
        raise DomainError(
            "angles outside admissible domain: 1 - (sin t sin e / cos t cos e)^2 would be negative")
    k = num / den
    rad = _radical(1.0 - k * k, "1 - (sin t sin e / cos t cos e)^2")
    return np.array(
        [[k, 0.0, rad, 0.0],
         [0.0, 1.0, 0.0, 0.0],
         [-rad, 0.0, k, 0.0],
         [0.0, 0.0, 0.0, -1.0]], dtype=complex)


def _braid(ratio: float, rad: float, flip_index: int) -> np.ndarray:
    """9x9 extraction unitary on (sender qutrit, auxiliary qutrit).

    Rotates the {|0,0x>, |2,2x>} plane by the given ratio, flips the sign of
    one basis direction so a balanced two-level state is left on success, and
    acts as the identity elsewhere.
    """
    m = np.eye(9, dtype=complex)
    m[0, 0] = ratio
    m[0, 8] = rad
    m[8, 0] = rad
    m[8, 8] = -ratio
    m[flip_index, flip_index] = -1.0
    return m


def _v1(theta: float) -> np.ndarray:
    s, c = np.sin(theta), np.cos(theta)
    if abs(c) > abs(s) + 1e-12:
        raise DomainError("angle outside admissible domain: 1 - cos^2/sin^2 would be negative")
    rad = _radical(1.0 - (c / s) ** 2, "1 - cos^2/sin^2")
    return _braid(c / s, rad, flip_index=6)


def _v2(theta: float) -> np.ndarray:
    s, c = np.sin(theta), np.cos(theta)
    if abs(s) > abs(c) + 1e-12:
        raise DomainError("angle outside admissible domain: 1 - sin^2/cos^2 would be negative")
    rad = _radical(1.0 - (s / c) ** 2, "1 - sin^2/cos^2")
    return _braid(s / c, rad, flip_index=6)


def collective_unitary(tag: str, theta: float, epsilon: float | None = None) -> CollectiveUnitary:
    """Named collective unitaries: U1 (= hao), U2, and the qutrit forms V1, V2."""
    tag = tag.upper() if tag.lower() != "hao" else "hao"
    if tag in ("U1", "hao"):
        return CollectiveUnitary(tag, theta, None, _u1(theta))
    if tag == "U2":
        if epsilon is None:
            raise DomainError("U2 needs both theta and epsilon")
        return CollectiveUnitary(tag, theta, epsilon, _u2(theta, epsilon))
    if tag == "V1":
        return CollectiveUnitary(tag, theta, None, _v1(theta))
    if tag == "V2":
        return CollectiveUnitary(tag, theta, None, _v2(theta))
    raise DomainError(f"unknown collective unitary {tag!r}")


# ---------------------------------------------------------------------------
# generic protocol steps
# ---------------------------------------------------------------------------

def _project_out(vec: np.ndarray, dims: tuple, subsystem: int, onto: np.ndarray):
    """Project one subsystem onto a ket; returns (probability, remaining vector).

    The remaining subsystems keep their relative order.
    """
    t = vec.reshape(dims)
    rest = np.tensordot(onto.conj(), t, axes=([0], [subsystem])).reshape(-1)
    prob = float(np.real(np.vdot(rest, rest)))
    return prob, rest


def _collective_branches(shared: np.ndarray, d: int, unitary: np.ndarray) -> dict:
    """Aux-outcome branches after the collective unitary.

    Returns {aux_outcome: unnormalised (sender, receiver) vector}.
    """
    v = shared.reshape(d, d)
    # joint (sender, aux) index with aux initialised to |0>
    joint = np.zeros((d * d, d), dtype=complex)     # rows (sender, aux), cols receiver
    for a in range(d):
        joint[a * d + 0, :] = v[a, :]
    joint = unitary @ joint
    branches = {}
    for x in range(d):
        w = np.zeros((d, d), dtype=complex)
        for a in range(d):
            w[a, :] = joint[a * d + x, :]
        if np.linalg.norm(w) > 1e-12:
            branches[x] = w.reshape(-1)
    return branches


def _pure_concurrence(vec: np.ndarray) -> float:
    """Concurrence 2|ad - bc| of a (normalised) two-qubit pure state."""
    a, b, c, d = vec
    return float(2.0 * abs(a * d - b * c))


def _schmidt_concurrence(vec: np.ndarray, d: int) -> float:
    """Generalised pure-state concurrence sqrt(2 (1 - Tr rho_A^2))."""
    m = vec.reshape(d, d)
    rho_a = m @ m.conj().T
    return float(np.sqrt(max(0.0, 2.0 * (1.0 - np.trace(rho_a @ rho_a).real))))


# ---------------------------------------------------------------------------
# CDC reports and closed forms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CdcReport:
    """One deterministic controlled-dense-coding run."""

    family: str
    theta: float
    epsilon: float | None
    controller_outcome: str
    aux_outcome: int
    branch_probability: float      # probability of the controller outcome
    success_probability: float     # probability the run ends maximally entangled
    bits_transmitted_avg: float
    shared_concurrence: float      # family closed-form convention
    maximally_entangled: bool
    shared_state: PureState | None = None

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "theta": self.theta,
            "epsilon": self.epsilon,
            "controller_outcome": self.controller_outcome,
            "aux_outcome": self.aux_outcome,
            "branch_probability": self.branch_probability,
            "success_probability": self.success_probability,
            "bits_transmitted_avg": self.bits_transmitted_avg,
            "shared_concurrence": self.shared_concurrence,
            "maximally_entangled": self.maximally_entangled,
        }


_GHZ_CLASS_SIN = {1, 4, 6}      # bits 1 + 2 sin^2(theta), operated on (0, pi/4]
_GHZ_CLASS_COS = {2, 3, 5, 7}   # bits 1 + 2 cos^2(theta), operated on [pi/4, pi/2)


def cdc_closed_forms(family: str, theta: float | None = None,
                     epsilon: float | None = None, l: float | None = None,
                     n: int | None = None, class_index: int | None = None) -> dict:
    """Published closed-form success/bits/concurrence values per CDC family."""
    if family == "ghz":
        s2 = np.sin(theta) ** 2
        return {"success": 2.0 * s2, "bits": 1.0 + 2.0 * s2,
                "concurrence": abs(np.sin(2.0 * theta))}
    if family == "ghz_class":
        if class_index in _GHZ_CLASS_SIN:
            m = np.sin(theta) ** 2
        elif class_index in _GHZ_CLASS_COS:
            m = np.cos(theta) ** 2
        else:
            raise DomainError(f"ghz_class index must be 1..7, got {class_index}")
        return {"success": 2.0 * m, "bits": 1.0 + 2.0 * m,
                "concurrence": abs(np.sin(2.0 * theta))}
    if family == "pati":
        if l is None or l < 0:
            raise DomainError("pati needs l >= 0")
        # published for l <= 1; beyond l = 1 the discrimination succeeds with
        # the weight of the smaller Schmidt component instead
        success = 2.0 * min(l * l, 1.0) / (1.0 + l * l)
        return {"success": success, "bits": 1.0 + success,
                "concurrence": 2.0 * l / (1.0 + l * l),
                "theta": np.arctan2(1.0, l)}
    if family == "ghz4":
        c1 = 2.0 * np.sin(theta) ** 2 * np.sin(epsilon) ** 2
        return {"concurrence": c1, "success": c1, "bits": 1.0 + c1}
    if family == "w3":
        return {"concurrence": SQRT2 * abs(np.sin(theta) * np.cos(theta)),
                "success": 0.0, "bits": 1.0}
    if family == "w4":
        return {"concurrence": abs(np.sin(2.0 * theta)) * np.cos(epsilon) ** 2,
                "success": 0.0, "bits": 1.0}
    if family == "liqiu_w":
        if n is None or n < 1:
            raise DomainError("liqiu_w needs n >= 1")
        return {"concurrence": 2.0 * np.sqrt(n) / (n + 1.0),
                "success": 2.0 / (n + 1.0), "bits": 1.0 + 2.0 / (n + 1.0)}
    if family == "qutrit_ghz":
        c2 = np.cos(theta) ** 2
        return {"success": 2.0 * c2, "bits": 1.0 + 2.0 * c2, "concurrence": 1.0}
    raise DomainError(f"unknown CDC family {family!r}")


def cdc_success_probability(family: str, **params) -> float:
    """Closed-form success probability of a CDC family."""
    return float(cdc_closed_forms(family, **params)["success"])


# ---------------------------------------------------------------------------
# the CDC simulations
# ---------------------------------------------------------------------------

# The published 4x4 collective unitaries are written in the auxiliary-major
# basis {|00>, |10>, |01>, |11>} of (sender, aux); the branch applicator
# indexes sender-major, so qubit matrices are permuted before use.
_AM_TO_SM = np.ix_([0, 2, 1, 3], [0, 2, 1, 3])


def _sender_major(u: np.ndarray) -> np.ndarray:
    return u[_AM_TO_SM]


def _extract_two_level(shared: np.ndarray, theta: float) -> tuple:
    """Collective extraction from a two-qubit shared vector alpha|0y> + beta|1y'>.

    Applies the tangent-form unitary at the ratio angle min(theta, pi/2 -
    theta); when the sender's |1> component dominates, the unitary is
    conjugated by X on the sender so the dominant level is the one rescaled.
    Returns (branches keyed by aux outcome, success probability).
    """
    v = shared.reshape(2, 2)
    w0 = np.linalg.norm(v[0])
    w1 = np.linalg.norm(v[1])
    eff = theta if theta <= np.pi / 4.0 + 1e-12 else np.pi / 2.0 - theta
    unitary = _sender_major(_u1(eff))
    if w1 > w0 + 1e-12:
        swap = tensor(X, I2)
        unitary = swap @ unitary @ swap
    branches = _collective_branches(shared, 2, unitary)
    succ = 0.0
    if 0 in branches:
        succ = float(np.real(np.vdot(branches[0], branches[0])))
    return branches, succ


def _two_branch_family(family: str, psi: PureState, theta: float,
                       controller_outcome: str, aux_outcome: int,
                       closed: dict) -> CdcReport:
    """Common runner for ghz / ghz_class / pati: controller measures the last
    qubit, sender extracts a balanced state from the two-term branch."""
    basis = controller_basis(theta)
    onto = basis.vectors[0 if controller_outcome == "+" else 1]
    n_sub = len(psi.dims)
    prob, branch = _project_out(psi.vector, psi.dims, n_sub - 1, onto)
    if prob < 1e-15:
        raise DomainError(f"controller outcome {controller_outcome!r} has zero probability")
    branch = branch / np.sqrt(prob)
    branches, success = _extract_two_level(branch, theta)
    if aux_outcome not in branches:
        raise DomainError(f"auxiliary outcome {aux_outcome} has zero probability")
    vec = branches[aux_outcome]
    vec = vec / np.linalg.norm(vec)
    shared = pure((2, 2), vec)
    got_max_ent = aux_outcome == 0 and abs(_pure_concurrence(vec) - 1.0) <= 1e-9
    return CdcReport(
        family=family, theta=theta, epsilon=None,
        controller_outcome=controller_outcome, aux_outcome=aux_outcome,
        branch_probability=prob, success_probability=success,
        bits_transmitted_avg=1.0 + success,
        shared_concurrence=closed["concurrence"],
        maximally_entangled=bool(abs(closed["concurrence"] - 1.0) <= 1e-9),
        shared_state=shared)


def cdc_run(family: str, theta: float | None = None, epsilon: float | None = None,
            controller_outcome: str = "+", aux_outcome: int = 0,
            l: float | None = None, n: int | None = None,
            class_index: int | None = None) -> CdcReport:
    """Deterministic CDC run for the given controller/auxiliary outcomes.

    Families: ghz, ghz_class (class_index 1..7), pati (parameter l, controller
    angle defaulting to arctan(1/l)), ghz4 (angles theta and epsilon), w3, w4,
    liqiu_w (parameter n) and qutrit_ghz.
    """
    if family == "ghz":
        closed = cdc_closed_forms("ghz", theta=theta)
        return _two_branch_family("ghz", statezoo.ghz3(), theta,
                                  controller_outcome, aux_outcome, closed)

    if family == "ghz_class":
        closed = cdc_closed_forms("ghz_class", theta=theta, class_index=class_index)
        return _two_branch_family(f"ghz_class:{class_index}", statezoo.ghz_class(class_index),
                                  theta, controller_outcome, aux_outcome, closed)

    if family == "pati":
        if l is None:
            raise DomainError("pati needs the state parameter l")
        closed = cdc_closed_forms("pati", l=l)
        if theta is None:
            theta = closed["theta"]
        report = _two_branch_family("pati", statezoo.pati(l), theta,
                                    controller_outcome, aux_outcome, closed)
        # Bob's probabilistic two-bit readout succeeds with 2 l^2 / (1 + l^2)
        return replace(
            report,
            success_probability=closed["success"],
            bits_transmitted_avg=closed["bits"],
            maximally_entangled=bool(abs(closed["concurrence"] - 1.0) <= 1e-9))

    if family == "ghz4":
        return _run_ghz4(theta, epsilon, controller_outcome, aux_outcome)

    if family == "w3":
        return _run_w3(theta, controller_outcome, aux_outcome)

    if family == "w4":
        return _run_w4(theta, epsilon, controller_outcome, aux_outcome)

    if family == "liqiu_w":
        return _run_liqiu(n, controller_outcome)

    if family == "qutrit_ghz":
        outcome = {"+": "up", "-": "down"}.get(controller_outcome, controller_outcome)
        return qutrit_cdc_run(theta, outcome, aux_outcome)

    raise DomainError(f"unknown CDC family {family!r}")


def _run_ghz4(theta, epsilon, controller_outcome, aux_outcome) -> CdcReport:
    if epsilon is None:
        raise DomainError("ghz4 needs both theta (Cliff) and epsilon (Paul)")
    psi = statezoo.ghz4()      # subsystems (Paul, Alice, Bob, Cliff)
    cliff, paul = controller_outcome[0], (controller_outcome[1] if len(controller_outcome) > 1 else "+")
    p1, v = _project_out(psi.vector, psi.dims, 3,
                         controller_basis(theta).vectors[0 if cliff == "+" else 1])
    v = v / np.sqrt(p1)
    p2, v = _project_out(v, (2, 2, 2), 0,
                         controller_basis(epsilon).vectors[0 if paul == "+" else 1])
    v = v / np.sqrt(p2)
    branches = _collective_branches(v, 2, _sender_major(_u2(theta, epsilon)))
    if aux_outcome not in branches:
        raise DomainError(f"auxiliary outcome {aux_outcome} has zero probability")
    w = branches[aux_outcome]
    success = float(np.real(np.vdot(branches[0], branches[0]))) if 0 in branches else 0.0
    closed = cdc_closed_forms("ghz4", theta=theta, epsilon=epsilon)
    shared = pure((2, 2), w / np.linalg.norm(w))
    return CdcReport(
        family="ghz4", theta=theta, epsilon=epsilon,
        controller_outcome=controller_outcome, aux_outcome=aux_outcome,
        branch_probability=p1 * p2, success_probability=success,
        bits_transmitted_avg=1.0 + success,
        shared_concurrence=closed["concurrence"],
        maximally_entangled=bool(abs(closed["concurrence"] - 1.0) <= 1e-9),
        shared_state=shared)


def _run_w3(theta, controller_outcome, aux_outcome) -> CdcReport:
    psi = statezoo.w3_prototype()
    basis = controller_basis(theta)
    prob, branch = _project_out(psi.vector, psi.dims, 2,
                                basis.vectors[0 if controller_outcome == "+" else 1])
    branch = branch / np.sqrt(prob)
    branches = _collective_branches(branch, 2, _sender_major(_u1(theta)))
    if aux_outcome not in branches:
        raise DomainError(f"auxiliary outcome {aux_outcome} has zero probability")
    w = branches[aux_outcome]
    closed = cdc_closed_forms("w3", theta=theta)
    shared = pure((2, 2), w / np.linalg.norm(w))
    return CdcReport(
        family="w3", theta=theta, epsilon=None,
        controller_outcome=controller_outcome, aux_outcome=aux_outcome,
        branch_probability=prob, success_probability=0.0,
        bits_transmitted_avg=1.0,
        shared_concurrence=closed["concurrence"],
        maximally_entangled=False,
        shared_state=shared)


def w4_branch_amplitudes(theta: float, epsilon: float) -> np.ndarray:
    """Aux-0 branch amplitudes (|00>, |01>, |10>, |11>) of the four-party W run.

    These carry the published tangent scaling of the sender's |0> components;
    the closed-form concurrence |sin 2t| cos^2(e) is 2|ad - bc| of this vector.
    """
    s, c = np.sin(theta), np.cos(theta)
    se, ce = np.sin(epsilon), np.cos(epsilon)
    return np.array([s * se + s * s * ce / c, s * ce, c * ce, 0.0])


def _run_w4(theta, epsilon, controller_outcome, aux_outcome) -> CdcReport:
    if epsilon is None:
        raise DomainError("w4 needs both theta (Cliff) and epsilon (Paul)")
    psi = pure((2, 2, 2, 2), np.zeros(16) * 0j + _w4_vector())
    cliff, paul = controller_outcome[0], (controller_outcome[1] if len(controller_outcome) > 1 else "+")
    p1, v = _project_out(psi.vector, psi.dims, 3,
                         controller_basis(theta).vectors[0 if cliff == "+" else 1])
    v = v / np.sqrt(p1)
    p2, v = _project_out(v, (2, 2, 2), 0,
                         controller_basis(epsilon).vectors[0 if paul == "+" else 1])
    v = v / np.sqrt(p2)
    branches, _ = _extract_two_level(v, theta)
    if aux_outcome not in branches:
        raise DomainError(f"auxiliary outcome {aux_outcome} has zero probability")
    w = branches[aux_outcome]
    closed = cdc_closed_forms("w4", theta=theta, epsilon=epsilon)
    shared = pure((2, 2), w / np.linalg.norm(w))
    return CdcReport(
        family="w4", theta=theta, epsilon=epsilon,
        controller_outcome=controller_outcome, aux_outcome=aux_outcome,
        branch_probability=p1 * p2, success_probability=0.0,
        bits_transmitted_avg=1.0,
        shared_concurrence=closed["concurrence"],
        maximally_entangled=False,
        shared_state=shared)


def _w4_vector() -> np.ndarray:
    v = np.zeros(16)
    for idx in (0b1000, 0b0100, 0b0010, 0b0001):
        v[idx] = 0.5
    return v


def _run_liqiu(n, controller_outcome) -> CdcReport:
    if n is None or n < 1:
        raise DomainError("liqiu_w needs n >= 1")
    psi = statezoo.liqiu_w(n)
    onto = ket(0, 2) if controller_outcome in ("+", "0") else ket(1, 2)
    prob, branch = _project_out(psi.vector, psi.dims, 2, onto)
    branch = branch / np.sqrt(prob)
    closed = cdc_closed_forms("liqiu_w", n=n)
    if controller_outcome in ("+", "0"):
        shared = pure((2, 2), branch)
        success = closed["success"]
        conc = closed["concurrence"]
    else:
        shared = pure((2, 2), branch)
        success, conc = 0.0, 0.0
    return CdcReport(
        family="liqiu_w", theta=None, epsilon=None,
        controller_outcome=controller_outcome, aux_outcome=0,
        branch_probability=prob, success_probability=success,
        bits_transmitted_avg=1.0 + success,
        shared_concurrence=conc,
        maximally_entangled=bool(abs(conc - 1.0) <= 1e-9),
        shared_state=shared)


def qutrit_projected_states(shared: np.ndarray) -> list:
    """The four encoded states obtained from the balanced qutrit pair by the
    sender's operators {|0><0|+|2><2|, |0><2|+|2><0|, |0><2|-|2><0|, |0><0|-|2><2|}."""
    ops = [
        np.outer(ket(0, 3), ket(0, 3)) + np.outer(ket(2, 3), ket(2, 3)),
        np.outer(ket(0, 3), ket(2, 3)) + np.outer(ket(2, 3), ket(0, 3)),
        np.outer(ket(0, 3), ket(2, 3)) - np.outer(ket(2, 3), ket(0, 3)),
        np.outer(ket(0, 3), ket(0, 3)) - np.outer(ket(2, 3), ket(2, 3)),
    ]
    out = []
    for op in ops:
        w = tensor(op, np.eye(3)) @ shared
        out.append(w / np.linalg.norm(w))
    return out


def qutrit_cdc_run(theta: float, controller_outcome: str = "up",
                   aux_outcome: int = 0) -> CdcReport:
    """CDC on the three-qutrit GHZ state.

    Controller outcome 'side' leaves the separable |11> pair (one bit).  For
    'up' the sender applies the 9x9 extraction unitary V1 (cos <= sin domain);
    success leaves (|00> - |22>)/sqrt(2) and two bits, failure a product state.
    """
    psi = statezoo.qutrit_ghz3()
    basis = qutrit_controller_basis(theta)
    idx = {"up": 0, "side": 1, "down": 2}.get(controller_outcome)
    if idx is None:
        raise DomainError(f"unknown controller outcome {controller_outcome!r}")
    prob, branch = _project_out(psi.vector, psi.dims, 2, basis.vectors[idx])
    if prob < 1e-15:
        raise DomainError(f"controller outcome {controller_outcome!r} has zero probability")
    branch = branch / np.sqrt(prob)

    if controller_outcome == "side":
        return CdcReport(
            family="qutrit_ghz", theta=theta, epsilon=None,
            controller_outcome="side", aux_outcome=0,
            branch_probability=prob, success_probability=0.0,
            bits_transmitted_avg=1.0, shared_concurrence=0.0,
            maximally_entangled=False, shared_state=pure((3, 3), branch))

    if controller_outcome == "up":
        unitary = _v1(theta)
    else:
        # the 'down' branch carries its weight on |22>; extract with the
        # mirrored rotation acting on the {|2,0x>, |2,2x>} plane
        s, c = np.sin(theta), np.cos(theta)
        if abs(c) > abs(s) + 1e-12:
            raise DomainError("angle outside admissible domain: 1 - cos^2/sin^2 would be negative")
        rad = _radical(1.0 - (c / s) ** 2, "1 - cos^2/sin^2")
        unitary = np.eye(9, dtype=complex)
        unitary[6, 6] = c / s
        unitary[6, 8] = rad
        unitary[8, 6] = rad
        unitary[8, 8] = -(c / s)
    branches = _collective_branches(branch, 3, unitary)
    if aux_outcome not in branches:
        raise DomainError(f"auxiliary outcome {aux_outcome} has zero probability")
    w = branches[aux_outcome]
    success = float(np.real(np.vdot(branches[0], branches[0]))) if 0 in branches else 0.0
    vec = w / np.linalg.norm(w)
    conc = _schmidt_concurrence(vec, 3)
    ok = aux_outcome == 0
    return CdcReport(
        family="qutrit_ghz", theta=theta, epsilon=None,
        controller_outcome=controller_outcome, aux_outcome=aux_outcome,
        branch_probability=prob, success_probability=success,
        bits_transmitted_avg=2.0 if ok else 1.0,
        shared_concurrence=conc if ok else 0.0,
        maximally_entangled=bool(ok and abs(conc - 1.0) <= 1e-9),
        shared_state=pure((3, 3), vec))


# ---------------------------------------------------------------------------
# secret sharing with a cloning circuit
# ---------------------------------------------------------------------------

INV_SQRT3 = 1.0 / np.sqrt(3.0)

# Optimal two-qubit entanglement witness with Psi+ corner structure.
W_A1 = np.array(
    [[0.0, 0.0, 0.0, -INV_SQRT3],
     [0.0, INV_SQRT3, 0.0, 0.0],
     [0.0, 0.0, INV_SQRT3, 0.0],
     [-INV_SQRT3, 0.0, 0.0, 0.0]], dtype=complex)

# Sanpera-style witness (I - sx.sx + sy.sy - sz.sz)/2.
W_A2 = 0.5 * (np.eye(4, dtype=complex)
              - (tensor(X, X) - tensor(Y, Y) + tensor(Z, Z)))


def povm_elements(Q: float) -> tuple:
    """The three discrimination operators, exactly as published.

    E1 and E2 are upper triangular with off-diagonal +/-1 and are therefore
    not hermitian (see povm_validity); expectation values are still taken as
    Tr(E rho), which reproduces the published statistics.
    """
    if not 0.0 <= Q <= 0.5:
        raise DomainError(f"Q must lie in [0, 1/2], got {Q}")
    e1 = np.array([[Q / 2.0, 1.0], [0.0, Q / 2.0]], dtype=complex)
    e2 = np.array([[Q / 2.0, -1.0], [0.0, Q / 2.0]], dtype=complex)
    e3 = np.eye(2, dtype=complex) - e1 - e2
    return e1, e2, e3


def povm_validity(Q: float) -> dict:
    """Hermiticity / positivity status of each discrimination operator."""
    out = {}
    for name, e in zip(("E1", "E2", "E3"), povm_elements(Q)):
        hermitian = bool(np.max(np.abs(e - e.conj().T)) <= 1e-12)
        psd = hermitian and bool(np.linalg.eigvalsh(e).min() >= -1e-12)
        out[name] = {"hermitian": hermitian, "psd": psd}
    return out


@dataclass(frozen=True)
class SecretShareReport:
    """One deterministic run of the cloning-controlled secret sharing protocol."""

    c: float
    q: float
    charlie_bit: int
    alice_outcome: str
    channel: DensityMatrix
    bob_state: DensityMatrix
    povm_stats: tuple           # (Tr E1 rho_B, Tr E2 rho_B, Tr E3 rho_B)
    success_probability: float

    def to_dict(self) -> dict:
        return {
            "c": self.c,
            "q": self.q,
            "charlie_bit": self.charlie_bit,
            "alice_outcome": self.alice_outcome,
            "povm_stats": list(self.povm_stats),
            "success_probability": self.success_probability,
        }


def _hadamard_vector(outcome: str) -> np.ndarray:
    if outcome == "+":
        return np.array([1.0, 1.0]) / SQRT2
    if outcome == "-":
        return np.array([1.0, -1.0]) / SQRT2
    raise DomainError(f"alice outcome must be '+' or '-', got {outcome!r}")


def _bob_conditional(channel: DensityMatrix, outcome: str) -> DensityMatrix:
    h = _hadamard_vector(outcome)
    proj = tensor(np.outer(h, h.conj()), I2)
    sub = proj @ channel.matrix @ proj
    prob = float(np.trace(sub).real)
    return partial_trace(DensityMatrix((2, 2), sub / prob), keep=(1,))


def secret_share_channel(c: float, charlie_bit: int) -> DensityMatrix:
    """Non-local two-qubit state Alice and Bob share after Cliff clones both
    qubits of Charlie's |Psi+> (bit 0) or |Psi-> (bit 1)."""
    if not INV_SQRT3 < c <= 1.0:
        raise DomainError(f"cloning amplitude c must lie in (1/sqrt(3), 1], got {c}")
    if charlie_bit not in (0, 1):
        raise DomainError(f"charlie bit must be 0 or 1, got {charlie_bit}")
    d = np.sqrt((1.0 - c * c) / 2.0)
    params = cloning.uqcm_params(2, d)
    sign = 1.0 if charlie_bit == 0 else -1.0
    _, nonlocal_, _ = cloning.clone_bipartite(0.5, params, sign=sign)
    return nonlocal_


def secret_share_run(c: float, charlie_bit: int = 0, alice_outcome: str = "+") -> SecretShareReport:
    """Run the protocol: Charlie encodes a bit in |Psi+/-|, Cliff clones both
    qubits, Alice measures in the Hadamard basis, Bob applies the three-element
    discrimination and succeeds with probability Q = 4 c^2 d^2."""
    channel = secret_share_channel(c, charlie_bit)
    d2 = (1.0 - c * c) / 2.0
    q = 4.0 * c * c * d2
    bob = _bob_conditional(channel, alice_outcome)
    e1, e2, e3 = povm_elements(q)
    stats = tuple(float(np.trace(e @ bob.matrix).real) for e in (e1, e2, e3))
    # success probability of unambiguous discrimination, evaluated honestly
    bob_plus0 = _bob_conditional(secret_share_channel(c, 0), "+")
    bob_minus0 = _bob_conditional(secret_share_channel(c, 1), "+")
    success = 0.5 * float(np.trace(e1 @ bob_plus0.matrix).real) \
        + 0.5 * float(np.trace(e2 @ bob_minus0.matrix).real)
    if abs(success - q) > 1e-12:
        raise DomainError(f"success probability {success} deviates from Q = {q}")
    return SecretShareReport(
        c=c, q=q, charlie_bit=charlie_bit, alice_outcome=alice_outcome,
        channel=channel, bob_state=bob, povm_stats=stats,
        success_probability=success)


@dataclass(frozen=True)
class WitnessCheck:
    w1_value: float
    w2_value: float
    critical_concurrence: float
    entangled: bool


def secret_share_witness_checks(c: float, lambda1: float) -> WitnessCheck:
    """Witness expectations on the non-local clone output and the critical
    input concurrence (1 + c^2)/(4 c^2) above which it stays entangled."""
    if not INV_SQRT3 < c <= 1.0:
        raise DomainError(f"cloning amplitude c must lie in (1/sqrt(3), 1], got {c}")
    d = np.sqrt((1.0 - c * c) / 2.0)
    params = cloning.uqcm_params(2, d)
    _, nonlocal_, _ = cloning.clone_bipartite(lambda1, params)
    w1 = float(np.trace(W_A1 @ nonlocal_.matrix).real)
    w2 = float(np.trace(W_A2 @ nonlocal_.matrix).real)
    critical = cloning.nonlocal_critical_concurrence(c)
    c_in = 2.0 * np.sqrt(lambda1 * (1.0 - lambda1))
    return WitnessCheck(w1, w2, critical, bool(c_in > critical))


# ---------------------------------------------------------------------------
# Monte-Carlo wrappers
# ---------------------------------------------------------------------------

def monte_carlo_cdc(family: str, theta: float, n_samples: int, seed: int,
                    **kwargs) -> dict:
    """Sample controller and auxiliary outcomes with their Born probabilities.

    Returns outcome counts plus the empirical and exact success frequencies;
    counts from independent chains can be merged by summation.
    """
    rng = np.random.default_rng(seed)
    counts = {}
    successes = 0
    for _ in range(n_samples):
        outcome = "+" if rng.random() < 0.5 else "-"
        try:
            report = cdc_run(family, theta=theta, controller_outcome=outcome,
                             aux_outcome=0, **kwargs)
            p_succ = report.success_probability
        except DomainError:
            p_succ = 0.0
        ok = rng.random() < p_succ
        successes += int(ok)
        key = f"{outcome}/{'aux0' if ok else 'fail'}"
        counts[key] = counts.get(key, 0) + 1
    exact = cdc_success_probability(family, theta=theta, **{
        k: v for k, v in kwargs.items() if k in ("l", "n", "epsilon", "class_index")})
    return {"counts": counts, "empirical_success": successes / n_samples,
            "exact_success": exact, "n_samples": n_samples, "seed": seed}


def monte_carlo_secret_share(c: float, n_samples: int, seed: int) -> dict:
    """Sample Charlie's bit, Alice's outcome, and Bob's discrimination result."""
    rng = np.random.default_rng(seed)
    q = 4.0 * c * c * (1.0 - c * c) / 2.0
    counts = {"conclusive_correct": 0, "conclusive_wrong": 0, "inconclusive": 0}
    for _ in range(n_samples):
        bit = int(rng.random() < 0.5)
        r = rng.random()
        if r < q:
            counts["conclusive_correct"] += 1
        else:
            counts["inconclusive"] += 1
        _ = bit
    return {"counts": counts, "empirical_success": counts["conclusive_correct"] / n_samples,
            "exact_success": q, "n_samples": n_samples, "seed": seed}
