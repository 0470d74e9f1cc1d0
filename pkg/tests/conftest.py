"""Shared helpers for the test suite (imported, not fixtures)."""

from __future__ import annotations

import math

import numpy as np


def rand_density(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Random full-rank density matrix with complex coherences."""
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    m = a @ a.conj().T + 1e-3 * np.eye(dim)
    return m / np.trace(m).real


def rand_correlation(
    rng: np.random.Generator, dim: int, real: bool = False
) -> np.ndarray:
    """Random Hermitian PSD matrix with exactly unit diagonal.

    Built as the Gram matrix of random unit vectors, which also bounds
    every off-diagonal modulus by one.
    """
    a = rng.normal(size=(dim, dim))
    if not real:
        a = a + 1j * rng.normal(size=(dim, dim))
    a = a / np.linalg.norm(a, axis=0, keepdims=True)
    m = a.conj().T @ a
    np.fill_diagonal(m, 1.0)
    return m


def rand_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(a)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def swap_factors(matrix: np.ndarray, dim_first: int, dim_second: int) -> np.ndarray:
    """Reorder a bipartite operator from A(x)B to B(x)A."""
    m = matrix.reshape(dim_first, dim_second, dim_first, dim_second)
    return m.transpose(1, 0, 3, 2).reshape(
        dim_first * dim_second, dim_first * dim_second
    )


def binary_entropy(p: float) -> float:
    total = 0.0
    for value in (p, 1.0 - p):
        if value > 0.0:
            total -= value * math.log2(value)
    return total
