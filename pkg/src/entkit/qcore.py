"""Dense complex linear algebra and density-operator primitives.

Everything downstream (state constructors, entanglement measures, channel
analysis, cloning, protocols) is built on the handful of operations in this
module.  All matrices are small (at most 81x81, two qutrits plus clones), so
plain dense numpy is used throughout.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Numerical tolerances, shared by the whole package.
TOL_NORM = 1e-10   # state normalisation / unit trace
TOL_HERM = 1e-10   # hermiticity
TOL_PSD = 1e-9     # how negative an "eigenvalue >= 0" may be
TOL_RECON = 1e-9   # decomposition round trips


class DomainError(ValueError):
    """Raised when an input lies outside the mathematical domain of an operation."""


def _as_complex(a) -> np.ndarray:
    return np.asarray(a, dtype=complex)


def ket(index: int, dim: int) -> np.ndarray:
    """Computational basis ket |index> of a dim-level system."""
    if not 0 <= index < dim:
        raise DomainError(f"basis index {index} outside 0..{dim - 1}")
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def basis_ket(labels, dims) -> np.ndarray:
    """Product basis ket, e.g. basis_ket((0, 1), (2, 2)) -> |01>."""
    out = np.array([1.0 + 0j])
    for lab, d in zip(labels, dims):
        out = np.kron(out, ket(lab, d))
    return out


@dataclass(frozen=True)
class PureState:
    """Normalised state vector with an explicit subsystem-dimension signature."""

    dims: tuple
    vector: np.ndarray = field(repr=False)

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        vec = _as_complex(self.vector).reshape(-1)
        object.__setattr__(self, "vector", vec)
        if any(d < 2 for d in dims):
            raise DomainError(f"subsystem dimensions must be >= 2, got {dims}")
        if vec.size != int(np.prod(dims)):
            raise DomainError(f"vector length {vec.size} does not match dims {dims}")
        norm = np.linalg.norm(vec)
        if abs(norm - 1.0) > TOL_NORM:
            raise DomainError(f"state vector not normalised: <psi|psi> = {norm**2:.3e}")

    @property
    def dim(self) -> int:
        return self.vector.size

    def density(self) -> "DensityMatrix":
        return DensityMatrix(self.dims, np.outer(self.vector, self.vector.conj()))


def pure(dims, amplitudes, normalise: bool = False) -> PureState:
    """Build a PureState, optionally normalising the amplitude vector first."""
    vec = _as_complex(amplitudes).reshape(-1)
    if normalise:
        n = np.linalg.norm(vec)
        if n < 1e-15:
            raise DomainError("cannot normalise a zero vector")
        vec = vec / n
    return PureState(tuple(dims), vec)


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite operator with dims signature."""

    dims: tuple
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        m = _as_complex(self.matrix)
        object.__setattr__(self, "matrix", m)
        d = int(np.prod(dims))
        if m.shape != (d, d):
            raise DomainError(f"matrix shape {m.shape} does not match dims {dims}")
        if np.max(np.abs(m - m.conj().T)) > TOL_HERM:
            raise DomainError("density matrix is not hermitian")
        tr = np.trace(m).real
        if abs(tr - 1.0) > TOL_NORM:
            raise DomainError(f"density matrix trace {tr} != 1")
        evals = np.linalg.eigvalsh(m)
        if evals.min() < -TOL_PSD:
            raise DomainError(f"density matrix has negative eigenvalue {evals.min():.3e}")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def purity(self) -> float:
        return float(np.trace(self.matrix @ self.matrix).real)

    def is_pure(self, tol: float = 1e-9) -> bool:
        return abs(self.purity() - 1.0) <= tol


def density(dims, matrix) -> DensityMatrix:
    return DensityMatrix(tuple(dims), matrix)


# ---------------------------------------------------------------------------
# tensor products and subsystem manipulation
# ---------------------------------------------------------------------------

def tensor(*factors) -> np.ndarray:
    """Kronecker product of one or more arrays (matrices or vectors)."""
    if not factors:
        raise DomainError("tensor() needs at least one factor")
    out = _as_complex(factors[0])
    for f in factors[1:]:
        out = np.kron(out, _as_complex(f))
    return out


def _check_subsystems(dims, subsystems) -> tuple:
    subs = tuple(int(s) for s in subsystems)
    for s in subs:
        if not 0 <= s < len(dims):
            raise DomainError(f"subsystem index {s} invalid for dims {dims}")
    if len(set(subs)) != len(subs):
        raise DomainError(f"repeated subsystem index in {subs}")
    return subs


def partial_trace(rho: DensityMatrix, keep) -> DensityMatrix:
    """Reduced density matrix on the listed subsystems (kept in original order)."""
    keep = sorted(_check_subsystems(rho.dims, keep))
    n = len(rho.dims)
    if not keep or len(keep) == n:
        raise DomainError("keep must be a non-empty proper subset of subsystems")
    t = rho.matrix.reshape(rho.dims + rho.dims)
    # trace out the complement, highest index first so axis numbers stay valid
    for s in sorted(set(range(n)) - set(keep), reverse=True):
        t = np.trace(t, axis1=s, axis2=s + (t.ndim // 2))
    kept_dims = tuple(rho.dims[s] for s in keep)
    d = int(np.prod(kept_dims))
    return DensityMatrix(kept_dims, t.reshape(d, d))


def partial_transpose(rho, subsystem: int, dims=None) -> np.ndarray:
    """Transpose one tensor factor; hermitian and trace preserving, not always PSD.

    Accepts a DensityMatrix, or a plain square matrix together with dims.
    """
    if isinstance(rho, DensityMatrix):
        matrix, dims = rho.matrix, rho.dims
    else:
        if dims is None:
            raise DomainError("partial_transpose of a raw matrix needs dims")
        matrix, dims = _as_complex(rho), tuple(int(d) for d in dims)
    (s,) = _check_subsystems(dims, [subsystem])
    n = len(dims)
    d = matrix.shape[0]
    t = matrix.reshape(dims + dims)
    t = np.swapaxes(t, s, s + n)
    return t.reshape(d, d)


def hermitian_eigen(m) -> tuple:
    """Eigenvalues (descending) and matching orthonormal eigenvector columns.

    Eigenvectors carry a fixed phase convention: the first component of
    magnitude above 1e-12 is made real and positive.
    """
    m = _as_complex(m)
    if np.max(np.abs(m - m.conj().T)) > TOL_HERM:
        raise DomainError("hermitian_eigen requires a hermitian matrix")
    evals, evecs = np.linalg.eigh(m)
    order = np.argsort(evals)[::-1]
    evals = evals[order]
    evecs = evecs[:, order]
    for k in range(evecs.shape[1]):
        col = evecs[:, k]
        nz = np.flatnonzero(np.abs(col) > 1e-12)
        if nz.size:
            phase = col[nz[0]] / abs(col[nz[0]])
            evecs[:, k] = col / phase
    return evals, evecs


def psd_sqrt(m) -> np.ndarray:
    """Principal square root of a positive-semidefinite matrix."""
    m = _as_complex(m)
    evals, evecs = hermitian_eigen(m)
    if evals.min() < -TOL_PSD:
        raise DomainError(f"matrix is not PSD (eigenvalue {evals.min():.3e})")
    root = evecs @ np.diag(np.sqrt(np.clip(evals, 0.0, None))) @ evecs.conj().T
    return root


@dataclass(frozen=True)
class SchmidtDecomposition:
    """Schmidt form of a bipartite pure state: sum_i lambda_i |i_A>|i_B>."""

    coefficients: np.ndarray   # non-negative, descending, sum of squares = 1
    left_basis: np.ndarray     # columns are |i_A>
    right_basis: np.ndarray    # columns are |i_B>
    rank: int

    def reconstruct(self) -> np.ndarray:
        da = self.left_basis.shape[0]
        db = self.right_basis.shape[0]
        out = np.zeros(da * db, dtype=complex)
        for lam, a, b in zip(self.coefficients, self.left_basis.T, self.right_basis.T):
            out += lam * np.kron(a, b)
        return out


def schmidt_decompose(psi: PureState) -> SchmidtDecomposition:
    """Schmidt decomposition of a two-subsystem pure state via SVD."""
    if len(psi.dims) != 2:
        raise DomainError(f"Schmidt decomposition needs exactly 2 subsystems, got {len(psi.dims)}")
    da, db = psi.dims
    amp = psi.vector.reshape(da, db)
    u, s, vh = np.linalg.svd(amp)
    rank = int(np.sum(s > 1e-12))
    dec = SchmidtDecomposition(s, u, vh.T, rank)
    err = np.linalg.norm(psi.vector - dec.reconstruct())
    if err > TOL_RECON:
        raise DomainError(f"Schmidt reconstruction error {err:.3e}")
    return dec


def purify(rho: DensityMatrix) -> PureState:
    """Pure state on system x reference whose reference-trace returns rho.

    The system keeps its subsystem signature; the reference is appended as a
    single subsystem of the full system dimension.
    """
    evals, evecs = hermitian_eigen(rho.matrix)
    evals = np.clip(evals, 0.0, None)
    d = rho.dim
    vec = np.zeros(d * d, dtype=complex)
    for i in range(d):
        vec += np.sqrt(evals[i]) * np.kron(evecs[:, i], ket(i, d))
    vec /= np.linalg.norm(vec)
    return PureState(rho.dims + (d,), vec)


# ---------------------------------------------------------------------------
# constant gates
# ---------------------------------------------------------------------------

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
CNOT = np.array(
    [[1, 0, 0, 0],
     [0, 1, 0, 0],
     [0, 0, 0, 1],
     [0, 0, 1, 0]], dtype=complex)
# Toffoli: doubly-controlled NOT, flips the target when both controls are set.
TOFFOLI = np.eye(8, dtype=complex)[:, [0, 1, 2, 3, 4, 5, 7, 6]]
# Fredkin: controlled swap, here with the control on the last qubit
# (exchanges |011> and |101>).
FREDKIN = np.eye(8, dtype=complex)[:, [0, 1, 2, 5, 4, 3, 6, 7]]

GATES = {
    "I": I2,
    "X": X,
    "Y": Y,
    "Z": Z,
    "H": HADAMARD,
    "CNOT": CNOT,
    "TOFFOLI": TOFFOLI,
    "FREDKIN": FREDKIN,
}

PAULIS = (X, Y, Z)


def is_unitary(u, tol: float = 1e-12) -> bool:
    u = _as_complex(u)
    return bool(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[1]))) <= tol)
