"""Constructors for the named pure and mixed state families used in the package.

Bell-state indexing used everywhere in this package (and documented once, here):

    bell(1) = |Psi+> = (|00> + |11>)/sqrt(2)
    bell(2) = |Psi-> = (|00> - |11>)/sqrt(2)
    bell(3) = |Phi+> = (|01> + |10>)/sqrt(2)
    bell(4) = |Phi-> = (|01> - |10>)/sqrt(2)   (the singlet)

All amplitudes are real unless a family definition carries an explicit phase.
"""
from __future__ import annotations

import numpy as np

from .qcore import (
    DensityMatrix,
    DomainError,
    PureState,
    basis_ket,
    ket,
    partial_trace,
    pure,
)

SQRT2 = np.sqrt(2.0)


# ---------------------------------------------------------------------------
# pure families
# ---------------------------------------------------------------------------

def bell(k: int) -> PureState:
    """Bell state k in the 1..4 = (Psi+, Psi-, Phi+, Phi-) indexing."""
    table = {
        1: (0, 3, +1.0),   # (|00> + |11>)/sqrt2
        2: (0, 3, -1.0),   # (|00> - |11>)/sqrt2
        3: (1, 2, +1.0),   # (|01> + |10>)/sqrt2
        4: (1, 2, -1.0),   # (|01> - |10>)/sqrt2
    }
    if k not in table:
        raise DomainError(f"bell index must be 1..4, got {k}")
    i, j, sign = table[k]
    v = np.zeros(4)
    v[i] = 1.0
    v[j] = sign
    return pure((2, 2), v / SQRT2)


def ghz3() -> PureState:
    """(|000> + |111>)/sqrt(2)."""
    v = np.zeros(8)
    v[0] = v[7] = 1.0
    return pure((2, 2, 2), v / SQRT2)


def ghz4() -> PureState:
    """(|0000> + |1111>)/sqrt(2)."""
    v = np.zeros(16)
    v[0] = v[15] = 1.0
    return pure((2, 2, 2, 2), v / SQRT2)


# Orthogonal three-qubit companions of the GHZ state, G1..G7.
_GHZ_CLASS = {
    1: ("010", "101", +1.0),
    2: ("010", "101", -1.0),
    3: ("001", "110", -1.0),
    4: ("001", "110", +1.0),
    5: ("100", "011", -1.0),
    6: ("100", "011", +1.0),
    7: ("000", "111", -1.0),
}


def ghz_class(i: int) -> PureState:
    """Member G_i of the GHZ class, (|a> +/- |b>)/sqrt(2) on three qubits."""
    if i not in _GHZ_CLASS:
        raise DomainError(f"ghz_class index must be 1..7, got {i}")
    a, b, sign = _GHZ_CLASS[i]
    v = basis_ket([int(c) for c in a], (2, 2, 2)) + sign * basis_ket(
        [int(c) for c in b], (2, 2, 2))
    return pure((2, 2, 2), v / SQRT2)


def w3_prototype() -> PureState:
    """(|100> + |010> + |001>)/sqrt(3)."""
    v = np.zeros(8)
    v[4] = v[2] = v[1] = 1.0
    return pure((2, 2, 2), v / np.sqrt(3))


def w3_nonprototype() -> PureState:
    """(|100> + |010> + sqrt(2)|001>)/2."""
    v = np.zeros(8)
    v[4] = v[2] = 1.0
    v[1] = SQRT2
    return pure((2, 2, 2), v / 2.0)


def pati(l: float) -> PureState:
    """GHZ-type state (|000> + l|111>)/sqrt(1 + l^2) for real l > 0."""
    if l <= 0:
        raise DomainError(f"pati parameter l must be > 0, got {l}")
    v = np.zeros(8)
    v[0] = 1.0
    v[7] = l
    return pure((2, 2, 2), v / np.sqrt(1.0 + l * l))


def liqiu_w(n: int) -> PureState:
    """Non-prototypical W state [ (|10>+sqrt(n)|01>)/sqrt(n+1) |0> + |00>|1> ] / sqrt(2)."""
    if n < 1:
        raise DomainError(f"liqiu_w parameter n must be >= 1, got {n}")
    phi = np.zeros(4)
    phi[2] = 1.0
    phi[1] = np.sqrt(n)
    phi /= np.sqrt(n + 1.0)
    v = (np.kron(phi, ket(0, 2)) + np.kron(basis_ket((0, 0), (2, 2)), ket(1, 2))) / SQRT2
    return pure((2, 2, 2), v)


def qutrit_ghz3() -> PureState:
    """(|000> + |111> + |222>)/sqrt(3) on three qutrits."""
    v = np.zeros(27)
    for i in range(3):
        v += basis_ket((i, i, i), (3, 3, 3)).real
    return pure((3, 3, 3), v / np.sqrt(3))


def generalized_max_entangled(n: int) -> PureState:
    """|psi+_n> = sum_i |ii> / sqrt(n)."""
    if n < 2:
        raise DomainError(f"dimension must be >= 2, got {n}")
    v = np.zeros(n * n)
    for i in range(n):
        v[i * n + i] = 1.0
    return pure((n, n), v / np.sqrt(n))


# ---------------------------------------------------------------------------
# mixed families
# ---------------------------------------------------------------------------

def werner(F: float) -> DensityMatrix:
    """Werner state (1-F)/3 I + (4F-1)/3 |Phi-><Phi-| with singlet fraction F.

    Accepts F in (1/4, 1]; the teleportation analysis of the family is only
    interesting on (1/2, 1], where the state is entangled.
    """
    if not 0.25 < F <= 1.0:
        raise DomainError(f"werner F must lie in (1/4, 1], got {F}")
    singlet = bell(4).density().matrix
    m = (1.0 - F) / 3.0 * np.eye(4) + (4.0 * F - 1.0) / 3.0 * singlet
    return DensityMatrix((2, 2), m)


def mjwk_h(C: float) -> float:
    """Corner weight h(C) of the Munro-James-White-Kwiat MEMS."""
    return C / 2.0 if C >= 2.0 / 3.0 else 1.0 / 3.0


def mjwk(C: float) -> DensityMatrix:
    """Munro-James-White-Kwiat maximally entangled mixed state of concurrence C."""
    if not 0.0 <= C <= 1.0:
        raise DomainError(f"mjwk concurrence must lie in [0, 1], got {C}")
    h = mjwk_h(C)
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0] = m[3, 3] = h
    m[1, 1] = 1.0 - 2.0 * h
    m[0, 3] = m[3, 0] = C / 2.0
    return DensityMatrix((2, 2), m)


def wei(x: float, y: float, a: float, b: float, gamma: float) -> DensityMatrix:
    """Wei et al. MEMS: Psi+ coherence gamma over a diagonal background."""
    params = {"x": x, "y": y, "a": a, "b": b, "gamma": gamma}
    for name, val in params.items():
        if val < 0:
            raise DomainError(f"wei parameter {name} must be >= 0, got {val}")
    total = x + y + a + b + gamma
    if abs(total - 1.0) > 1e-10:
        raise DomainError(f"wei parameters must sum to 1, got {total}")
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0] = x + gamma / 2.0
    m[1, 1] = a
    m[2, 2] = b
    m[3, 3] = y + gamma / 2.0
    m[0, 3] = m[3, 0] = gamma / 2.0
    return DensityMatrix((2, 2), m)


def werner_derivative(F: float, a: float) -> DensityMatrix:
    """Werner state rotated by a non-local unitary: (1-F)/3 I + (4F-1)/3 |psi><psi|,
    |psi> = sqrt(a)|00> + sqrt(1-a)|11>."""
    if not 0.5 < F <= 1.0:
        raise DomainError(f"werner_derivative F must lie in (1/2, 1], got {F}")
    if not 0.5 <= a <= 1.0:
        raise DomainError(f"werner_derivative a must lie in [1/2, 1], got {a}")
    psi = np.zeros(4)
    psi[0] = np.sqrt(a)
    psi[3] = np.sqrt(1.0 - a)
    m = (1.0 - F) / 3.0 * np.eye(4) + (4.0 * F - 1.0) / 3.0 * np.outer(psi, psi)
    return DensityMatrix((2, 2), m)


def werner_derivative_entangled_bound(F: float) -> float:
    """Upper limit on a below which the Werner derivative stays entangled."""
    return 0.5 * (1.0 + np.sqrt(3.0 * (4.0 * F * F - 1.0)) / (4.0 * F - 1.0))


def nmems(p: float) -> DensityMatrix:
    """Convex mixture p * Tr_C|GHZ><GHZ| + (1-p) * Tr_C|W><W| in closed form."""
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"nmems p must lie in [0, 1], got {p}")
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0] = (p + 2.0) / 6.0
    m[1, 1] = m[2, 2] = m[1, 2] = m[2, 1] = (1.0 - p) / 3.0
    m[3, 3] = p / 2.0
    return DensityMatrix((2, 2), m)


def nmems_from_reductions(p: float) -> DensityMatrix:
    """Same state as nmems(p), built by actually tracing the third qubit out of
    the GHZ and W states and mixing; structural cross-check of the closed form."""
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"nmems p must lie in [0, 1], got {p}")
    rho_g = partial_trace(ghz3().density(), keep=(0, 1)).matrix
    rho_w = partial_trace(w3_prototype().density(), keep=(0, 1)).matrix
    return DensityMatrix((2, 2), p * rho_g + (1.0 - p) * rho_w)


def ih_mems(p1: float, p2: float, p3: float, p4: float) -> DensityMatrix:
    """Ishizaka-Hiroshima MEMS p1|Phi-><Phi-| + p2|00><00| + p3|Phi+><Phi+| + p4|11><11|.

    The weights must already be ordered p1 >= p2 >= p3 >= p4.
    """
    ps = (p1, p2, p3, p4)
    if any(p < 0 for p in ps):
        raise DomainError(f"ih_mems weights must be >= 0, got {ps}")
    if abs(sum(ps) - 1.0) > 1e-10:
        raise DomainError(f"ih_mems weights must sum to 1, got {sum(ps)}")
    if not p1 >= p2 >= p3 >= p4:
        raise DomainError(f"ih_mems weights must be ordered p1 >= p2 >= p3 >= p4, got {ps}")
    m = (p1 * bell(4).density().matrix
         + p2 * np.outer(basis_ket((0, 0), (2, 2)), basis_ket((0, 0), (2, 2)))
         + p3 * bell(3).density().matrix
         + p4 * np.outer(basis_ket((1, 1), (2, 2)), basis_ket((1, 1), (2, 2))))
    return DensityMatrix((2, 2), m)


def cloned_mems(c2: float) -> DensityMatrix:
    """Non-local two-qubit output of cloning both halves of a Bell pair.

    Symmetric cloning of each qubit of |Psi+> with machine amplitude c
    (c^2 + 2 d^2 = 1) leaves the distant pair in
    (P+S)/2 (|00><00| + |11><11|) + Q/2 (|00><11| + h.c.) + R (|01><01| + |10><10|).
    At c^2 = 2/3 this is the Werner-family state 4/9 |Psi+><Psi+| + 5/36 I.
    """
    if not 0.0 <= c2 <= 1.0:
        raise DomainError(f"cloned_mems c2 must lie in [0, 1], got {c2}")
    d2 = (1.0 - c2) / 2.0
    P = (c2 + d2) ** 2
    Q = 4.0 * c2 * d2
    R = c2 * d2 + d2 * d2
    S = d2 * d2
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0] = m[3, 3] = (P + S) / 2.0
    m[0, 3] = m[3, 0] = Q / 2.0
    m[1, 1] = m[2, 2] = R
    return DensityMatrix((2, 2), m)


MIXED_FAMILIES = {
    "werner": werner,
    "mjwk": mjwk,
    "wei": wei,
    "werner_derivative": werner_derivative,
    "nmems": nmems,
    "ih_mems": ih_mems,
    "cloned_mems": cloned_mems,
}

PURE_FAMILIES = {
    "bell": bell,
    "ghz3": ghz3,
    "ghz4": ghz4,
    "ghz_class": ghz_class,
    "w3_prototype": w3_prototype,
    "w3_nonprototype": w3_nonprototype,
    "pati": pati,
    "liqiu_w": liqiu_w,
    "qutrit_ghz3": qutrit_ghz3,
    "generalized_max_entangled": generalized_max_entangled,
}


def make_mixed(family: str, **params) -> DensityMatrix:
    """Dispatch constructor for the mixed families, e.g. make_mixed('werner', F=0.8)."""
    if family not in MIXED_FAMILIES:
        raise DomainError(f"unknown mixed family {family!r}")
    return MIXED_FAMILIES[family](**params)


def make_pure(family: str, *args, **params) -> PureState:
    """Dispatch constructor for the pure families, e.g. make_pure('bell', 3)."""
    if family not in PURE_FAMILIES:
        raise DomainError(f"unknown pure family {family!r}")
    return PURE_FAMILIES[family](*args, **params)
