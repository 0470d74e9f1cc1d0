"""Dense complex linear-algebra kernel shared by the measurement modules.

Provides Hermitian eigendecomposition, principal and pseudo-inverse square
roots of PSD matrices, partial traces over tensor factors, and von Neumann
entropy in bits. All functions are pure; inputs are never mutated.

Working dimensions are small (<= 64), so everything is backed by dense
LAPACK routines through ``numpy.linalg``.
"""

from __future__ import annotations

from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import DimensionMismatch, InvalidState, NotHermitian, NotPSD, ZeroMatrix

# Tolerances, fixed once for the whole package. Double precision leaves a
# wide margin at these dimensions.
TAU_HERM = 1e-10
TAU_PSD = 1e-10
TAU_TRACE = 1e-9
TAU_RECON = 1e-9
RANK_TOL = 1e-10

# Entropy treats eigenvalues in [-ENTROPY_CLAMP, 0) as exact zeros; anything
# more negative is a genuine invariant violation.
ENTROPY_CLAMP = 1e-10


class Spectrum(NamedTuple):
    """Eigendecomposition of a Hermitian matrix.

    ``eigenvalues`` are real and ascending; column ``i`` of ``eigenvectors``
    is the unit eigenvector for ``eigenvalues[i]``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _as_square(matrix: np.ndarray, name: str = "matrix") -> np.ndarray:
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"{name} must be square, got shape {m.shape}")
    return m


def is_hermitian(matrix: np.ndarray, atol: float = TAU_HERM) -> bool:
    """True if ``matrix`` equals its conjugate transpose entrywise within ``atol``."""
    m = np.asarray(matrix)
    return bool(np.max(np.abs(m - m.conj().T), initial=0.0) <= atol)


def herm_eig(matrix: np.ndarray, atol: float = TAU_HERM) -> Spectrum:
    """Eigendecompose a Hermitian matrix.

    Raises :class:`NotHermitian` if any entry of ``matrix - matrix^dagger``
    exceeds ``atol`` in modulus. The decomposition itself runs on the
    Hermitian part, which makes results deterministic for inputs that are
    Hermitian only up to rounding.
    """
    m = _as_square(matrix)
    dev = float(np.max(np.abs(m - m.conj().T), initial=0.0))
    if dev > atol:
        raise NotHermitian(f"max |M - M^dagger| entry {dev:.3e} exceeds {atol:.1e}")
    w, v = np.linalg.eigh((m + m.conj().T) / 2.0)
    return Spectrum(eigenvalues=w, eigenvectors=v)


def matrix_sqrt_psd(matrix: np.ndarray, atol: float = TAU_PSD) -> np.ndarray:
    """Principal square root of a Hermitian PSD matrix.

    Eigenvalues in ``[-atol, 0)`` are clamped to zero; anything more negative
    raises :class:`NotPSD`. The result is Hermitian PSD and squares back to
    the input within reconstruction tolerance.
    """
    w, v = herm_eig(matrix)
    if w[0] < -atol:
        raise NotPSD(f"smallest eigenvalue {w[0]:.3e} below -{atol:.1e}")
    root = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    return (root + root.conj().T) / 2.0


def inv_sqrt_psd(
    matrix: np.ndarray, rank_tol: float = RANK_TOL, atol: float = TAU_PSD
) -> np.ndarray:
    """Pseudo-inverse square root of a Hermitian PSD matrix.

    Eigenvalues above ``rank_tol * max(eigenvalues)`` map to ``lambda**-0.5``;
    the rest map to zero, so the kernel of the input stays the kernel of the
    result. Raises :class:`ZeroMatrix` when no positive eigenvalue exists.
    """
    w, v = herm_eig(matrix)
    if w[0] < -atol:
        raise NotPSD(f"smallest eigenvalue {w[0]:.3e} below -{atol:.1e}")
    w = np.clip(w, 0.0, None)
    wmax = float(w[-1])
    if wmax <= 0.0:
        raise ZeroMatrix("matrix has no positive eigenvalue")
    inv = np.where(w > rank_tol * wmax, 1.0 / np.sqrt(np.where(w > 0, w, 1.0)), 0.0)
    out = (v * inv) @ v.conj().T
    return (out + out.conj().T) / 2.0


def partial_trace(
    rho: np.ndarray, dims: Sequence[int], keep: Iterable[int] | int
) -> np.ndarray:
    """Trace out all tensor factors of ``rho`` except those in ``keep``.

    ``dims`` lists the factor dimensions in tensor order (their product must
    equal the side of ``rho``); ``keep`` is a factor index or a collection of
    them. Kept factors retain their original relative order.
    """
    rho = _as_square(rho, "rho")
    dims = [int(d) for d in dims]
    if any(d < 1 for d in dims):
        raise DimensionMismatch(f"factor dimensions must be positive, got {dims}")
    total = int(np.prod(dims))
    if total != rho.shape[0]:
        raise DimensionMismatch(
            f"product of dims {dims} is {total}, but rho has side {rho.shape[0]}"
        )
    if isinstance(keep, (int, np.integer)):
        keep = [keep]
    keep_list = sorted({int(k) for k in keep})
    if not keep_list:
        raise DimensionMismatch("keep must name at least one factor")
    if keep_list[0] < 0 or keep_list[-1] >= len(dims):
        raise DimensionMismatch(f"keep indices {keep_list} out of range for {len(dims)} factors")

    n = len(dims)
    reshaped = rho.reshape(dims + dims)
    for idx in sorted(set(range(n)) - set(keep_list), reverse=True):
        m = reshaped.ndim // 2
        reshaped = np.trace(reshaped, axis1=idx, axis2=idx + m)
    side = int(np.prod([dims[k] for k in keep_list]))
    return reshaped.reshape(side, side)


def validate_density_matrix(
    rho: np.ndarray,
    name: str = "rho",
    atol_herm: float = TAU_HERM,
    atol_psd: float = TAU_PSD,
    atol_trace: float = TAU_TRACE,
) -> None:
    """Raise :class:`InvalidState` unless ``rho`` is a valid density matrix.

    Checks Hermiticity, positive semidefiniteness (up to ``atol_psd``) and
    unit trace, naming the violated invariant in the message.
    """
    m = _as_square(rho, name)
    dev = float(np.max(np.abs(m - m.conj().T), initial=0.0))
    if dev > atol_herm:
        raise InvalidState(f"{name} not Hermitian: deviation {dev:.3e} > {atol_herm:.1e}")
    tr = complex(np.trace(m))
    if abs(tr - 1.0) > atol_trace:
        raise InvalidState(f"{name} trace {tr:.12g} differs from 1 by more than {atol_trace:.1e}")
    w = np.linalg.eigvalsh((m + m.conj().T) / 2.0)
    if w[0] < -atol_psd:
        raise InvalidState(f"{name} not PSD: smallest eigenvalue {w[0]:.3e} < -{atol_psd:.1e}")


def von_neumann_entropy(rho: np.ndarray, validate: bool = True) -> float:
    """Von Neumann entropy of a density matrix, in bits.

    Eigenvalues are clamped to ``[0, 1]`` with the convention
    ``0 * log2(0) = 0``. Negative eigenvalues within ``ENTROPY_CLAMP`` are
    treated as zero; larger violations raise :class:`InvalidState`.
    """
    if validate:
        validate_density_matrix(rho)
    m = _as_square(rho, "rho")
    w = np.linalg.eigvalsh((m + m.conj().T) / 2.0)
    if w[0] < -ENTROPY_CLAMP:
        raise InvalidState(f"eigenvalue {w[0]:.3e} below -{ENTROPY_CLAMP:.1e}")
    w = np.clip(w, 0.0, 1.0)
    positive = w[w > 0.0]
    return float(-(positive * np.log2(positive)).sum()) + 0.0
