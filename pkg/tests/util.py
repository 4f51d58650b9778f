"""Shared helpers for the test suite: random states and independent oracles."""
from __future__ import annotations

import numpy as np

from entkit import channel
from entkit.qcore import DensityMatrix, PureState, density, pure


def random_density(rng, dims, rank=None) -> DensityMatrix:
    """Random full-rank (or fixed-rank) density matrix via a Ginibre factor."""
    d = int(np.prod(dims))
    k = rank or d
    g = rng.normal(size=(d, k)) + 1j * rng.normal(size=(d, k))
    m = g @ g.conj().T
    return density(dims, m / np.trace(m).real)


def random_pure(rng, dims) -> PureState:
    d = int(np.prod(dims))
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return pure(dims, v / np.linalg.norm(v))


def fef_closed_form(rho: DensityMatrix) -> float:
    """Independent oracle for the two-qubit fully entangled fraction.

    F = (1 + s1 + s2 - sign(det T) s3)/4 with s_i the singular values of the
    Pauli correlation matrix; exact for every two-qubit state, and derived by
    a completely different route than the enumeration-plus-ascent maximiser.
    """
    t = channel.correlation_matrix(rho)
    s = np.linalg.svd(t, compute_uv=False)
    return float(0.25 * (1.0 + s[0] + s[1] - np.sign(np.linalg.det(t)) * s[2]))


def bisect_predicate(pred, true_end: float, false_end: float, tol: float = 1e-9) -> float:
    """Boundary of a monotone boolean predicate between a true and a false end."""
    assert pred(true_end) and not pred(false_end)
    while abs(false_end - true_end) > tol:
        mid = 0.5 * (true_end + false_end)
        if pred(mid):
            true_end = mid
        else:
            false_end = mid
    return 0.5 * (true_end + false_end)
