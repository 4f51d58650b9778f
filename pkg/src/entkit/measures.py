"""Entanglement, mixedness and distance measures for small bipartite systems."""
from __future__ import annotations

import numpy as np
from scipy import optimize

from .qcore import (
    TOL_HERM,
    DensityMatrix,
    DomainError,
    Y,
    hermitian_eigen,
    partial_trace,
    partial_transpose,
    psd_sqrt,
    pure,
    tensor,
)


def _require_two_qubits(rho: DensityMatrix, what: str):
    if rho.dims != (2, 2):
        raise DomainError(f"{what} requires a 2x2-qubit state, got dims {rho.dims}")


def binary_entropy(x: float) -> float:
    """Shannon entropy of a bit, h(0) = h(1) = 0 by continuity."""
    if x < 0.0 or x > 1.0:
        if -1e-12 < x < 1.0 + 1e-12:
            x = min(max(x, 0.0), 1.0)
        else:
            raise DomainError(f"binary entropy argument must lie in [0, 1], got {x}")
    if x in (0.0, 1.0):
        return 0.0
    return float(-x * np.log2(x) - (1.0 - x) * np.log2(1.0 - x))


# ---------------------------------------------------------------------------
# two-qubit entanglement measures
# ---------------------------------------------------------------------------

def concurrence(rho: DensityMatrix) -> float:
    """Wootters concurrence max(0, sqrt(l1)-sqrt(l2)-sqrt(l3)-sqrt(l4)) where the
    l_i are the eigenvalues of rho (sy x sy) rho* (sy x sy), in decreasing order.

    The sqrt(l_i) are computed directly as the singular values of
    sqrt(rho) sqrt(rho~); diagonalising the non-hermitian product itself (or
    taking square roots of its near-zero eigenvalues) loses ~1e-8 of accuracy.
    """
    _require_two_qubits(rho, "concurrence")
    yy = tensor(Y, Y)
    rho_tilde = yy @ rho.matrix.conj() @ yy
    roots = np.linalg.svd(psd_sqrt(rho.matrix) @ psd_sqrt(rho_tilde),
                          compute_uv=False)
    return float(max(0.0, roots[0] - roots[1] - roots[2] - roots[3]))


def tangle(rho: DensityMatrix) -> float:
    """Concurrence squared."""
    c = concurrence(rho)
    return c * c


def x_form_matrix(a: float, b: float, c_offdiag: complex, d_entry: float,
                  e: float) -> DensityMatrix:
    """Assemble the X-form matrix diag(a, b, d, e) with coherence c on |01><10|."""
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0] = a
    m[1, 1] = b
    m[2, 2] = d_entry
    m[3, 3] = e
    m[1, 2] = c_offdiag
    m[2, 1] = np.conj(c_offdiag)
    return DensityMatrix((2, 2), m)


def concurrence_x_form(a: float, b: float, c_offdiag: complex, d_entry: float,
                       e: float) -> float:
    """Closed-form concurrence 2 max(|c| - sqrt(a e), 0) of the X-form state."""
    x_form_matrix(a, b, c_offdiag, d_entry, e)  # validates the density matrix
    return float(2.0 * max(abs(c_offdiag) - np.sqrt(a * e), 0.0))


def negativity(rho: DensityMatrix) -> float:
    """Negativity from the partial transpose.

    For two qubits this is 2 max(0, -lambda_neg); in n x n it generalises to
    (||rho^{T_A}||_1 - 1)/(n - 1), with the trace norm.
    """
    if len(rho.dims) != 2:
        raise DomainError(f"negativity requires a bipartite state, got dims {rho.dims}")
    n = min(rho.dims)
    pt = partial_transpose(rho, 0)
    trace_norm = float(np.sum(np.abs(np.linalg.eigvalsh(pt))))
    value = (trace_norm - 1.0) / (n - 1.0)
    return float(min(max(value, 0.0), 1.0))


def entanglement_of_formation(rho: DensityMatrix) -> float:
    """E_F = h((1 + sqrt(1 - C^2))/2) for two qubits."""
    _require_two_qubits(rho, "entanglement of formation")
    c = concurrence(rho)
    return binary_entropy((1.0 + np.sqrt(max(0.0, 1.0 - c * c))) / 2.0)


# ---------------------------------------------------------------------------
# entropies
# ---------------------------------------------------------------------------

def entropy(rho: DensityMatrix, kind: str = "von_neumann", base: float = 2.0) -> float:
    """von Neumann entropy -sum l_i log_base l_i, or the purity-based linear
    entropy n/(n-1) (1 - Tr rho^2)."""
    if base <= 1.0:
        raise DomainError(f"entropy base must be > 1, got {base}")
    if kind == "von_neumann":
        evals = np.clip(np.linalg.eigvalsh(rho.matrix), 0.0, None)
        evals = evals[evals > 1e-15]
        return float(-np.sum(evals * np.log(evals)) / np.log(base))
    if kind == "linear":
        n = rho.dim
        return float(n / (n - 1.0) * (1.0 - rho.purity()))
    raise DomainError(f"unknown entropy kind {kind!r}")


def entropy_of_entanglement(psi) -> float:
    """Marginal von Neumann entropy (base 2) of a bipartite pure state."""
    if isinstance(psi, DensityMatrix):
        if not psi.is_pure():
            raise DomainError("entropy of entanglement is defined for pure states only")
        evals, evecs = hermitian_eigen(psi.matrix)
        psi = pure(psi.dims, evecs[:, 0])
    if len(psi.dims) != 2:
        raise DomainError(f"need a bipartite pure state, got dims {psi.dims}")
    rho = psi.density()
    s_left = entropy(partial_trace(rho, keep=(0,)), "von_neumann", 2.0)
    s_right = entropy(partial_trace(rho, keep=(1,)), "von_neumann", 2.0)
    if abs(s_left - s_right) > 1e-10:
        raise DomainError(f"marginal entropies disagree: {s_left} vs {s_right}")
    return float(s_left)


# ---------------------------------------------------------------------------
# singlet fraction (fully entangled fraction)
# ---------------------------------------------------------------------------

def maximally_entangled_bases(n: int) -> list:
    """Reference maximally entangled vectors the optimizer starts from.

    n = 2: the four Bell states.  n >= 3: the generalised Bell family
    |phi_{x,y}> = sum_j xi^{jy} |j, j+x> / sqrt(n) with xi = exp(2 pi i / n).
    """
    if n == 2:
        from .statezoo import bell  # local import to avoid a cycle

        return [bell(k).vector for k in (1, 2, 3, 4)]
    xi = np.exp(2j * np.pi / n)
    out = []
    for x in range(n):
        for y in range(n):
            v = np.zeros(n * n, dtype=complex)
            for j in range(n):
                v[j * n + (j + x) % n] = xi ** (j * y)
            out.append(v / np.sqrt(n))
    return out


def _traceless_hermitian_basis(n: int) -> list:
    basis = []
    for j in range(n):
        for k in range(j + 1, n):
            s = np.zeros((n, n), dtype=complex)
            s[j, k] = s[k, j] = 1.0
            basis.append(s)
            a = np.zeros((n, n), dtype=complex)
            a[j, k] = -1j
            a[k, j] = 1j
            basis.append(a)
    for j in range(1, n):
        d = np.zeros((n, n), dtype=complex)
        d[:j, :j] = np.eye(j)
        d[j, j] = -j
        basis.append(d * np.sqrt(2.0 / (j * (j + 1))))
    return basis


def _local_unitary(params: np.ndarray, gens: list) -> np.ndarray:
    h = np.zeros_like(gens[0])
    for p, g in zip(params, gens):
        h = h + p * g
    evals, evecs = np.linalg.eigh(h)
    return (evecs * np.exp(1j * evals)) @ evecs.conj().T


def singlet_fraction(rho: DensityMatrix, seed: int = 0, restarts: int = 32) -> float:
    """Maximal overlap of rho with a maximally entangled state.

    The generalised Bell basis is enumerated exactly, then refined by a
    gradient-free ascent over local unitaries U_A x U_B (Nelder-Mead,
    multi-start, deterministic for a given seed).  The returned value is the
    best overlap found and is always a valid lower bound on the true maximum.
    """
    if len(rho.dims) != 2 or rho.dims[0] != rho.dims[1]:
        raise DomainError(f"singlet fraction needs an n x n bipartite state, got {rho.dims}")
    n = rho.dims[0]
    bases = maximally_entangled_bases(n)
    best = max(float(np.real(v.conj() @ rho.matrix @ v)) for v in bases)
    if restarts <= 0:
        return best

    gens = _traceless_hermitian_basis(n)
    npar = len(gens)
    rng = np.random.default_rng(seed)

    def objective(params, base_vec):
        ua = _local_unitary(params[:npar], gens)
        ub = _local_unitary(params[npar:], gens)
        v = tensor(ua, ub) @ base_vec
        return -float(np.real(v.conj() @ rho.matrix @ v))

    for r in range(restarts):
        base_vec = bases[r % len(bases)]
        if r < len(bases):
            start = np.zeros(2 * npar)
        else:
            start = rng.uniform(-np.pi, np.pi, size=2 * npar)
        res = optimize.minimize(
            objective, start, args=(base_vec,), method="Nelder-Mead",
            options={"fatol": 1e-12, "xatol": 1e-9, "maxiter": 300 * npar})
        best = max(best, -float(res.fun))
    return best


# ---------------------------------------------------------------------------
# distances
# ---------------------------------------------------------------------------

def fidelity(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Uhlmann fidelity Tr sqrt(sqrt(rho) sigma sqrt(rho))."""
    if rho.dims != sigma.dims:
        raise DomainError(f"dims mismatch: {rho.dims} vs {sigma.dims}")
    root = psd_sqrt(rho.matrix)
    inner = root @ sigma.matrix @ root
    evals = np.clip(np.linalg.eigvalsh((inner + inner.conj().T) / 2.0), 0.0, None)
    return float(min(np.sum(np.sqrt(evals)), 1.0))


def distance(rho: DensityMatrix, sigma: DensityMatrix, metric: str = "trace") -> float:
    """Distance between two states.

    trace:           (1/2) Tr|rho - sigma|
    fidelity:        Tr sqrt(sqrt(rho) sigma sqrt(rho))  (a closeness, not a distance)
    hilbert_schmidt: Tr (rho - sigma)^2
    bures:           sqrt(2) (1 - fidelity)^(1/2)
    """
    if rho.dims != sigma.dims:
        raise DomainError(f"dims mismatch: {rho.dims} vs {sigma.dims}")
    if metric == "trace":
        evals = np.linalg.eigvalsh(rho.matrix - sigma.matrix)
        return float(0.5 * np.sum(np.abs(evals)))
    if metric == "fidelity":
        return fidelity(rho, sigma)
    if metric == "hilbert_schmidt":
        delta = rho.matrix - sigma.matrix
        return float(np.trace(delta @ delta).real)
    if metric == "bures":
        return float(np.sqrt(2.0 * max(0.0, 1.0 - fidelity(rho, sigma))))
    raise DomainError(f"unknown metric {metric!r}")


# ---------------------------------------------------------------------------
# separability tests
# ---------------------------------------------------------------------------

def peres_horodecki(rho: DensityMatrix, tol: float = 1e-12) -> str:
    """Separability verdict for two qubits from the leading principal minors
    W2, W3, W4 of the partial transpose; entangled iff the transpose fails to
    stay positive."""
    _require_two_qubits(rho, "Peres-Horodecki test")
    pt = partial_transpose(rho, 1)
    w2 = float(np.linalg.det(pt[:2, :2]).real)
    w3 = float(np.linalg.det(pt[:3, :3]).real)
    w4 = float(np.linalg.det(pt).real)
    entangled = w4 < -tol or (abs(w4) <= tol and w3 < -tol) or w2 < -tol
    return "entangled" if entangled else "separable"


def witness_expectation(w, rho: DensityMatrix) -> float:
    """Real expectation Tr(W rho) of a hermitian witness; negative flags entanglement."""
    w = np.asarray(w, dtype=complex)
    if w.shape != rho.matrix.shape:
        raise DomainError(f"witness shape {w.shape} does not match state {rho.matrix.shape}")
    if np.max(np.abs(w - w.conj().T)) > TOL_HERM:
        raise DomainError("witness operator must be hermitian")
    return float(np.trace(w @ rho.matrix).real)
