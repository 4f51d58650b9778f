"""Buzek-Hillery universal quantum cloning machine and what its outputs are good for.

The machine acts on basis states as

    |i>_a |0>_b |X>_x  ->  c |i>_a |i>_b |X_i>_x
                           + d sum_{j != i} (|i>_a |j>_b + |j>_a |i>_b) |X_j>_x

with real amplitudes constrained by c^2 + 2(n-1) d^2 = 1.  This module builds
the two-clone outputs (single input system, and both halves of a bipartite
state), checks the reduction criterion, constructs distillation filters, and
evaluates dense-coding capacity and a qutrit teleportation witness.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import measures
from .qcore import (
    DensityMatrix,
    DomainError,
    PureState,
    ket,
    partial_trace,
    pure,
    tensor,
)


@dataclass(frozen=True)
class CloningParams:
    """Machine amplitudes (c, d) and the scaling factor s = c^2 + (n-2) d^2."""

    n: int
    c: float
    d: float
    s: float

    def __post_init__(self):
        if self.n < 2:
            raise DomainError(f"cloning dimension must be >= 2, got {self.n}")
        residual = self.c ** 2 + 2.0 * (self.n - 1) * self.d ** 2 - 1.0
        if abs(residual) > 1e-12:
            raise DomainError(f"c^2 + 2(n-1)d^2 = 1 violated by {residual:.3e}")

    @property
    def is_optimal(self) -> bool:
        return abs(self.d ** 2 - 1.0 / (2.0 * (self.n + 1))) <= 1e-12


def uqcm_params(n: int, d: float | None = None) -> CloningParams:
    """Machine parameters for dimension n; the optimal preset when d is omitted.

    Optimal: c^2 = 2/(n+1), d^2 = 1/(2(n+1)), s = (n+2)/(2(n+1)).
    d = 0 is the Wootters-Zurek limit (perfect on basis states only).
    """
    if n < 2:
        raise DomainError(f"cloning dimension must be >= 2, got {n}")
    if d is None:
        d = np.sqrt(1.0 / (2.0 * (n + 1)))
    d = float(d)
    c_sq = 1.0 - 2.0 * (n - 1) * d * d
    if d < 0.0 or c_sq < 0.0:
        raise DomainError(f"d = {d} outside [0, sqrt(1/(2(n-1)))] for n = {n}")
    c = np.sqrt(c_sq)
    return CloningParams(n, c, d, c * c + (n - 2) * d * d)


def cloning_isometry(params: CloningParams) -> np.ndarray:
    """(n^3 x n) isometry from the input system to (clone a, clone b, machine)."""
    n = params.n
    v = np.zeros((n ** 3, n), dtype=complex)
    for i in range(n):
        col = params.c * tensor(ket(i, n), ket(i, n), ket(i, n))
        for j in range(n):
            if j == i:
                continue
            col = col + params.d * tensor(
                tensor(ket(i, n), ket(j, n)) + tensor(ket(j, n), ket(i, n)),
                ket(j, n))
        v[:, i] = col
    return v


def clone_pure(psi: PureState, params: CloningParams) -> tuple:
    """Clone a single n-level pure state.

    Returns the full (a, b, machine) pure state and the single-clone marginal.
    At the optimal working point the marginal takes the universal scaling form
    s |psi><psi| + (1-s)/n I.
    """
    if psi.dims != (params.n,):
        raise DomainError(f"state dims {psi.dims} do not match machine dimension {params.n}")
    full = pure((params.n,) * 3, cloning_isometry(params) @ psi.vector)
    marginal = partial_trace(full.density(), keep=(0,))
    return full, marginal


@dataclass(frozen=True)
class ClonePairOutput:
    """Joint state of the two clones after the machine is traced out."""

    joint: DensityMatrix
    params: CloningParams
    optimal: bool


def qutrit_cloned_pair(d: float) -> ClonePairOutput:
    """Two-qutrit clone pair for input (|0> + |1> + |2>)/sqrt(3), d in (0, 1/2]."""
    if not 0.0 < d <= 0.5:
        raise DomainError(f"machine parameter d must lie in (0, 1/2], got {d}")
    params = uqcm_params(3, d)
    psi = pure((3,), np.ones(3) / np.sqrt(3.0))
    full, _ = clone_pure(psi, params)
    joint = partial_trace(full.density(), keep=(0, 1))
    return ClonePairOutput(joint, params, params.is_optimal)


# Closed forms for the two partial-transpose eigenvalues of the clone pair
# that go negative, and for the reduction-criterion eigenvalue used to build
# the non-optimal filter.

def pt_eigenvalue_1(d: float) -> float:
    r = np.sqrt(1.0 - 4.0 * d * d)
    return (1.0 + 4.0 * d * d) / 6.0 - np.sqrt(
        1.0 + 24.0 * d ** 2 - 104.0 * d ** 4 + 32.0 * r * d ** 3) / 6.0


def pt_eigenvalue_2(d: float) -> float:
    r = np.sqrt(1.0 - 4.0 * d * d)
    return (1.0 - 5.0 * d * d) / 6.0 - np.sqrt(
        1.0 - 6.0 * d ** 2 + 25.0 * d ** 4 - 16.0 * r * d ** 3) / 6.0


def reduction_eigenvalue_nonopt(d: float) -> float:
    r = np.sqrt(1.0 - 4.0 * d * d)
    inner = 1.0 - 18.0 * d ** 2 + 4.0 * r * d + 113.0 * d ** 4 - 44.0 * d ** 3 * r
    return (1.0 - 3.0 * d * d) / 6.0 + r * d / 3.0 - np.sqrt(inner) / 6.0


NONOPT_FILTER_D_MIN = (6.0 + np.sqrt(2.0)) / 17.0


def nonopt_filter_r(d: float) -> float:
    """Off-diagonal weight of the non-optimal distillation filter."""
    if not NONOPT_FILTER_D_MIN < d <= 0.5:
        raise DomainError(
            f"non-optimal filter defined for d in ((6+sqrt2)/17, 1/2], got {d}")
    t2 = d * np.sqrt(1.0 - 4.0 * d * d)
    inner = 1.0 - 18.0 * d ** 2 + 4.0 * t2 + 113.0 * d ** 4 - 44.0 * d ** 2 * t2
    return (11.0 * d * d - 2.0 * t2 + np.sqrt(inner)) / (4.0 * d * d)


# ---------------------------------------------------------------------------
# reduction criterion and distillation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ReductionResult:
    """Outcome of the reduction-criterion check rho_A x I - rho >= 0 (and mirrored)."""

    violated: bool
    side: str                 # 'A' or 'B': which operator carries the minimum
    eigenvalue: float         # most negative eigenvalue found
    eigenvector: np.ndarray


def reduction_check(rho: DensityMatrix, tol: float = 1e-10) -> ReductionResult:
    if len(rho.dims) != 2 or rho.dims[0] != rho.dims[1]:
        raise DomainError(f"reduction criterion needs an n x n state, got dims {rho.dims}")
    n = rho.dims[0]
    rho_a = partial_trace(rho, keep=(0,)).matrix
    rho_b = partial_trace(rho, keep=(1,)).matrix
    ops = {"A": tensor(rho_a, np.eye(n)) - rho.matrix,
           "B": tensor(np.eye(n), rho_b) - rho.matrix}
    best = None
    for side, op in ops.items():
        evals, evecs = np.linalg.eigh(op)
        if best is None or evals[0] < best[1]:
            best = (side, float(evals[0]), evecs[:, 0])
    side, eigenvalue, eigenvector = best
    return ReductionResult(eigenvalue < -tol, side, eigenvalue, eigenvector)


@dataclass(frozen=True)
class FilterMatrix:
    """Local filter A with A_ij = sqrt(n) a_ij built from an eigenvector sum a_ij |i>|j>."""

    matrix: np.ndarray

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


def filter_from_eigenvector(v, n: int) -> FilterMatrix:
    """Filter from an n^2-component eigenvector, phase-fixed and unit-normalised."""
    v = np.asarray(v, dtype=complex).reshape(-1)
    if v.size != n * n:
        raise DomainError(f"eigenvector length {v.size} does not match n^2 = {n * n}")
    nz = np.flatnonzero(np.abs(v) > 1e-12)
    if nz.size == 0:
        raise DomainError("cannot build a filter from a zero vector")
    v = v / (v[nz[0]] / abs(v[nz[0]]))
    v = v / np.linalg.norm(v)
    return FilterMatrix(np.sqrt(n) * v.reshape(n, n))


def distillation_filter(rho: DensityMatrix, tol: float = 1e-10) -> FilterMatrix:
    """Filter built from the most negative reduction-criterion eigenvector."""
    result = reduction_check(rho, tol=tol)
    if not result.violated:
        raise DomainError("state satisfies the reduction criterion; nothing to distill")
    return filter_from_eigenvector(result.eigenvector, rho.dims[0])


def distill(rho: DensityMatrix, filt: FilterMatrix) -> DensityMatrix:
    """Apply the local filter: (A^dag x I) rho (A x I) / Tr(rho A A^dag x I)."""
    if len(rho.dims) != 2 or rho.dims[0] != filt.n:
        raise DomainError(f"filter size {filt.n} does not match state dims {rho.dims}")
    a = filt.matrix
    eye = np.eye(rho.dims[1])
    denom = float(np.trace(rho.matrix @ tensor(a @ a.conj().T, eye)).real)
    if denom <= 1e-12:
        raise DomainError("filter annihilates state")
    num = tensor(a.conj().T, eye) @ rho.matrix @ tensor(a, eye)
    return DensityMatrix(rho.dims, num / denom)


# ---------------------------------------------------------------------------
# dense coding and the qutrit teleportation witness
# ---------------------------------------------------------------------------

def dense_coding_advantage(rho: DensityMatrix) -> float:
    """S(rho_b) - S(rho_ab) in bits; positive iff the state is dense-codeable."""
    if len(rho.dims) != 2:
        raise DomainError(f"dense coding needs a bipartite state, got dims {rho.dims}")
    s_b = measures.entropy(partial_trace(rho, keep=(1,)), "von_neumann", 2.0)
    s_ab = measures.entropy(rho, "von_neumann", 2.0)
    return float(s_b - s_ab)


def dense_coding_capacity(rho: DensityMatrix) -> float:
    """chi = log2(n) + S(rho_b) - S(rho_ab), in bits."""
    return float(np.log2(rho.dims[1]) + dense_coding_advantage(rho))


def max_entangled_ket(n: int) -> np.ndarray:
    v = np.zeros(n * n, dtype=complex)
    for i in range(n):
        v[i * n + i] = 1.0
    return v / np.sqrt(n)


def teleportation_witness_qutrit(rho: DensityMatrix) -> float:
    """Tr(W rho) for W = I/3 - |phi+><phi+|; >= 0 flags 'not useful' via this witness."""
    if rho.dims != (3, 3):
        raise DomainError(f"qutrit witness needs a 3x3 state, got dims {rho.dims}")
    phi = max_entangled_ket(3)
    return float(1.0 / 3.0 - np.real(phi.conj() @ rho.matrix @ phi))


# ---------------------------------------------------------------------------
# cloning both halves of a bipartite state
# ---------------------------------------------------------------------------

def pqrs(params: CloningParams) -> tuple:
    """Weights (P, Q, R, S) of the non-local two-clone output."""
    n, c, d = params.n, params.c, params.d
    P = (c * c + (n - 1) * d * d) ** 2
    Q = d * d * (4.0 * c * c + 4.0 * c * d * (n - 2) + (n - 2) * d * d)
    R = d * d * (c * c + (n - 1) * d * d)
    S = d ** 4
    return P, Q, R, S


def local_closed_form(lambda1: float, params: CloningParams) -> np.ndarray:
    """Two-qubit local output diag(c^2 l1, d^2, d^2, c^2 l2) + d^2 coherence block."""
    c2, d2 = params.c ** 2, params.d ** 2
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0] = c2 * lambda1
    m[3, 3] = c2 * (1.0 - lambda1)
    m[1, 1] = m[2, 2] = m[1, 2] = m[2, 1] = d2
    return m


def nonlocal_closed_form(lambda1: float, params: CloningParams) -> np.ndarray:
    """Two-qubit non-local output with corner coherence Q sqrt(l1 l2)."""
    P, Q, R, S = pqrs(params)
    l1, l2 = lambda1, 1.0 - lambda1
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0] = P * l1 + S * l2
    m[3, 3] = P * l2 + S * l1
    m[0, 3] = m[3, 0] = Q * np.sqrt(l1 * l2)
    m[1, 1] = m[2, 2] = R
    return m


def clone_bipartite(lambda1: float, params: CloningParams, sign: float = 1.0) -> tuple:
    """Clone both halves of sqrt(l1)|00> + sign sqrt(l2)|11> with identical machines.

    System layout: original qubits 1 and 2, clones 3 (of 1) and 4 (of 2).
    Returns (local rho_13 = rho_24, non-local rho_14 = rho_23, (P, Q, R, S)).
    The non-local pair is entangled iff 2 sqrt(l1 l2) exceeds the critical
    concurrence (1 + c^2)/(4 c^2), which needs c > 1/sqrt(3).
    """
    if not 0.0 <= lambda1 <= 1.0:
        raise DomainError(f"lambda1 must lie in [0, 1], got {lambda1}")
    if params.n != 2:
        raise DomainError("bipartite cloning is implemented for qubit machines (n = 2)")
    n = params.n
    iso = cloning_isometry(params)
    amp = np.zeros((n, n))
    amp[0, 0] = np.sqrt(lambda1)
    amp[1, 1] = sign * np.sqrt(1.0 - lambda1)
    # full[(1,3,x1),(2,4,x2)] = sum_ij amp_ij V[, i] V[, j]
    full = np.einsum("ai,bj,ij->ab", iso, iso, amp).reshape((n,) * 6)
    # reorder (1, 3, x1, 2, 4, x2) -> (1, 2, 3, 4, x1, x2)
    full = full.transpose(0, 3, 1, 4, 2, 5).reshape(-1)
    state = DensityMatrix((n,) * 6, np.outer(full, full.conj()))
    clones = partial_trace(state, keep=(0, 1, 2, 3))
    local = partial_trace(clones, keep=(0, 2))
    nonlocal_ = partial_trace(clones, keep=(0, 3))
    return local, nonlocal_, pqrs(params)


def nonlocal_critical_concurrence(c: float) -> float:
    """Input concurrence above which the non-local clone pair stays entangled."""
    if not 1.0 / np.sqrt(3.0) < c <= 1.0:
        raise DomainError(f"critical concurrence defined for c in (1/sqrt(3), 1], got {c}")
    return (1.0 + c * c) / (4.0 * c * c)
