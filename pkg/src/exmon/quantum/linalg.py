"""Small complex-Hermitian linear algebra, self-contained for d <= 4.

The eigensolver runs cyclic Jacobi sweeps: each off-diagonal pivot is
phased real and annihilated by a plane rotation.  At these dimensions a
handful of sweeps reaches machine precision, so there is no dependency on
an external decomposition routine (numpy is used only for array storage
and arithmetic).
"""
from __future__ import annotations

import math

import numpy as np


def hermitize(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    return (a + a.conj().T) / 2


def max_abs(a: np.ndarray) -> float:
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


def off_diagonal_norm(a: np.ndarray) -> float:
    n = a.shape[0]
    total = 0.0
    for p in range(n - 1):
        for q in range(p + 1, n):
            total += abs(a[p, q]) ** 2
    return math.sqrt(total)


def jacobi_eigh(
    a: np.ndarray, tol: float = 1e-13, max_sweeps: int = 100
) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Returns (eigenvalues, eigenvectors) with eigenvalues sorted descending
    and eigenvectors as the matching columns of a unitary matrix.
    """
    A = hermitize(a)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("matrix must be square")
    V = np.eye(n, dtype=complex)
    scale = max(1.0, max_abs(A))
    for _ in range(max_sweeps):
        if off_diagonal_norm(A) <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                r = abs(A[p, q])
                if r <= 1e-300:
                    continue
                phase = A[p, q] / r
                alpha = A[p, p].real
                beta = A[q, q].real
                # smaller-angle root of t^2 + 2*tau*t - 1 = 0
                tau = (beta - alpha) / (2 * r)
                if tau == 0:
                    t = 1.0
                else:
                    t = math.copysign(1.0, tau) / (abs(tau) + math.sqrt(1 + tau * tau))
                c = 1 / math.sqrt(1 + t * t)
                s = t * c
                J = np.eye(n, dtype=complex)
                J[p, p] = phase * c
                J[p, q] = phase * s
                J[q, p] = -s
                J[q, q] = c
                A = J.conj().T @ A @ J
                A = hermitize(A)  # keep rounding from drifting off symmetry
                V = V @ J
    else:
        raise RuntimeError("Jacobi sweeps did not converge")
    eigenvalues = np.diag(A).real.copy()
    order = np.argsort(-eigenvalues)
    return eigenvalues[order], V[:, order]


def random_hermitian(rng: np.random.Generator, dim: int) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return hermitize(g)


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Unitary from the eigenvector frame of a random Hermitian matrix."""
    _, v = jacobi_eigh(random_hermitian(rng, dim))
    return v


def random_density_matrix(rng: np.random.Generator, dim: int) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    m = g @ g.conj().T
    return m / np.trace(m).real


def random_effect_matrix(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Random Hermitian with its spectrum clamped into [0,1]."""
    h = random_hermitian(rng, dim) * 0.4 + 0.5 * np.eye(dim)
    w, v = jacobi_eigh(h)
    w = np.clip(w, 0.0, 1.0)
    return hermitize(v @ np.diag(w) @ v.conj().T)
