"""Superoperator algebra on the doubled (vectorized) Hilbert space.

Operators on the N-dimensional impurity space are dense complex ndarrays.
Vectorization flattens |n><m| to the component n*N + m (row-major), under
which a map rho -> A rho B becomes the N^2 x N^2 matrix kron(A, B.T) acting
on the flattened operator.  All functions here are pure; returned arrays are
freshly allocated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DimensionError, DomainError, ModelError

# Contour branch labels: +1 acts to the left of the density operator,
# -1 to the right.
PLUS = 1
MINUS = -1

HERMITICITY_RTOL = 1e-12


def _as_square(m, name="operator"):
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise DimensionError(f"{name} must be a square matrix, got shape {a.shape}")
    return a


def vectorize(rho):
    """Flatten an N x N operator to the length-N^2 vector, |n><m| -> n*N + m."""
    return _as_square(rho, "rho").reshape(-1)


def unvectorize(v):
    """Inverse of :func:`vectorize`; the input length must be a perfect square."""
    a = np.asarray(v, dtype=complex)
    if a.ndim != 1:
        raise DimensionError(f"vectorized operator must be one-dimensional, got ndim={a.ndim}")
    n = math.isqrt(a.size)
    if n * n != a.size or a.size == 0:
        raise DimensionError(f"length {a.size} is not a positive perfect square")
    return a.reshape(n, n)


def left_mult(a):
    """Superoperator of rho -> A rho, i.e. A (x) 1."""
    a = _as_square(a, "A")
    return np.kron(a, np.eye(a.shape[0], dtype=complex))


def right_mult(b):
    """Superoperator of rho -> rho B, i.e. 1 (x) B^T."""
    b = _as_square(b, "B")
    return np.kron(np.eye(b.shape[0], dtype=complex), b.T)


def contour_superop(kind, branch, flavor_op):
    """Annihilation/creation superoperator attached to a contour branch.

    Branch +1 multiplies from the left, branch -1 from the right:

        (annihilate, +) -> d (x) 1        (create, +) -> d^dag (x) 1
        (annihilate, -) -> 1 (x) d^T      (create, -) -> 1 (x) d^*

    so the daggered variants are the conjugate transposes of the undaggered
    ones.  ``flavor_op`` is the annihilation matrix of the requested flavor.
    """
    if kind not in ("annihilate", "create"):
        raise ValueError(f"kind must be 'annihilate' or 'create', got {kind!r}")
    if branch not in (PLUS, MINUS):
        raise ValueError(f"branch must be +1 or -1, got {branch!r}")
    d = _as_square(flavor_op, "flavor_op")
    op = d if kind == "annihilate" else d.conj().T
    return left_mult(op) if branch == PLUS else right_mult(op)


@dataclass(frozen=True)
class LindbladModel:
    """Hamiltonian plus jump operators with nonnegative rates (hbar = 1).

    ``jumps`` is a sequence of ``(operator, rate)`` pairs; operator dimensions
    must match the Hamiltonian and the Hamiltonian must be Hermitian to
    1e-12 relative.
    """

    hamiltonian: np.ndarray
    jumps: tuple = ()

    def __post_init__(self):
        h = _as_square(self.hamiltonian, "hamiltonian")
        scale = np.abs(h).max()
        if scale > 0 and np.abs(h - h.conj().T).max() > HERMITICITY_RTOL * scale:
            raise ModelError("hamiltonian is not Hermitian")
        jumps = []
        for op, rate in self.jumps:
            op = _as_square(op, "jump operator")
            if op.shape != h.shape:
                raise ModelError(
                    f"jump operator shape {op.shape} does not match hamiltonian {h.shape}"
                )
            rate = float(rate)
            if rate < 0:
                raise ModelError(f"negative jump rate {rate}")
            jumps.append((op, rate))
        object.__setattr__(self, "hamiltonian", h)
        object.__setattr__(self, "jumps", tuple(jumps))

    @property
    def dim(self):
        return self.hamiltonian.shape[0]


def build_liouvillian(model):
    """Lindblad generator as an N^2 x N^2 matrix.

    L = -i (H (x) 1 - 1 (x) H^T)
        + sum_a gamma_a [ L_a (x) L_a^* - 1/2 (L_a^dag L_a (x) 1 + 1 (x) (L_a^dag L_a)^T) ]

    The vectorized identity is a left null vector of the result (trace
    conservation of the generator).
    """
    h = model.hamiltonian
    eye = np.eye(h.shape[0], dtype=complex)
    liou = -1j * (np.kron(h, eye) - np.kron(eye, h.T))
    for op, rate in model.jumps:
        opdop = op.conj().T @ op
        liou += rate * (
            np.kron(op, op.conj())
            - 0.5 * np.kron(opdop, eye)
            - 0.5 * np.kron(eye, opdop.T)
        )
    return liou


def matrix_exp(superop, t):
    """exp(S t) via scaling-and-squaring (Pade); exp(S * 0) is the exact identity."""
    s = _as_square(superop, "superop")
    if t < 0:
        raise DomainError(f"time must be nonnegative, got {t}")
    if t == 0:
        return np.eye(s.shape[0], dtype=complex)
    return scipy.linalg.expm(s * t)


def trace_functional(dim):
    """The row functional <<1|: contracting with a vectorized rho gives tr(rho)."""
    return np.eye(dim, dtype=complex).reshape(-1)


def trace_row_error(superop):
    """Trace-preservation defect max|<<1| S - <<1|| of a propagator superoperator."""
    s = np.asarray(superop)
    n = math.isqrt(s.shape[0])
    one = trace_functional(n)
    return float(np.abs(one @ s - one).max())
