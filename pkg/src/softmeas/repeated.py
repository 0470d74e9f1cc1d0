"""Repeated soft measurements and their continuous diffusion limit.

Repeating a soft measurement ``n`` times with a fresh meter copy per step
multiplies the entanglement matrix entrywise (``R -> R**n``) and raises the
meter Gram matrix to the elementwise n-th power. Although the accumulated
meter lives in an n-fold tensor space, only a ``D``-dimensional collective
subspace is ever populated, so all joint states here are expressed in that
fixed basis.

For a two-level meter the elementwise Gram powers admit closed forms, and
letting the per-step angle shrink as the step count grows produces a
diffusion limit governed by a decay rate ``kappa`` (off-diagonal Gram
modulus ``exp(-kappa*t)``), a phase drift ``chi_dot`` and a complex external
dephasing rate ``r_dot``.

Index layout: ``joint_dm_repeated`` orders factors meter (x) object, while
``joint_dm_continuous`` orders them object (x) meter, matching the closed
4x4 form it implements. Both document this in their docstrings; the partial
trace helper in :mod:`softmeas.matcore` handles either layout.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidMeasurement, InvalidParams
from .matcore import (
    RANK_TOL,
    inv_sqrt_psd,
    matrix_sqrt_psd,
    validate_density_matrix,
)
from .measurement import (
    SoftMeasurement,
    TwoLevelMeterParams,
    _check_correlation_matrix,
    validate_soft,
)


@dataclass(frozen=True)
class RepeatedMeasurement:
    """A base soft measurement applied ``n`` times with result accumulation."""

    base: SoftMeasurement
    n: int = 1

    def __post_init__(self) -> None:
        if int(self.n) < 1:
            raise InvalidParams(f"repetition count must be >= 1, got {self.n}")
        object.__setattr__(self, "n", int(self.n))


@dataclass(frozen=True)
class CollectiveRepresentation:
    """Collective-basis description of ``n`` accumulated meter copies.

    ``gram_n`` is the elementwise n-th Gram power; column ``i`` of
    ``meter_vectors`` holds the collective-basis coordinates of the i-th
    accumulated meter state (``meter_vectors^dagger @ meter_vectors ==
    gram_n``); row ``k`` of ``basis_coeffs`` expands the k-th orthonormal
    collective basis vector over the accumulated meter states. For
    linearly dependent meter sets the expansion is restricted to the range
    of ``gram_n`` and ``active_dim`` may be smaller than the meter count.
    """

    gram_n: np.ndarray
    meter_vectors: np.ndarray
    basis_coeffs: np.ndarray
    active_dim: int


def gram_power(gram: np.ndarray, n: int) -> np.ndarray:
    """Elementwise n-th power of a Gram matrix.

    The Schur product of PSD matrices is PSD and the diagonal stays 1, so
    the result is again a valid Gram matrix.
    """
    if int(n) < 1:
        raise InvalidParams(f"power must be >= 1, got {n}")
    return np.asarray(gram, dtype=complex) ** int(n)


def collective_representation(
    gram: np.ndarray, n: int, rank_tol: float = RANK_TOL
) -> CollectiveRepresentation:
    """Collective-basis data for ``n`` repeated measurements."""
    failures = _check_correlation_matrix(np.asarray(gram, dtype=complex), "gram")
    if failures:
        raise InvalidMeasurement("; ".join(failures))
    gram_n = gram_power(gram, n)
    vectors = matrix_sqrt_psd(gram_n)
    coeffs = inv_sqrt_psd(gram_n, rank_tol=rank_tol).conj()
    eigs = np.linalg.eigvalsh(gram_n)
    active = int(np.sum(eigs > rank_tol * max(float(eigs[-1]), 0.0)))
    return CollectiveRepresentation(
        gram_n=gram_n, meter_vectors=vectors, basis_coeffs=coeffs, active_dim=active
    )


def joint_dm_repeated(
    rho: np.ndarray, repeated: RepeatedMeasurement, validate: bool = True
) -> np.ndarray:
    """Joint meter-object state after ``n`` accumulated measurements.

    Factor order is meter (x) object (row index ``k * D + i`` with ``k``
    collective-meter, ``i`` object). Entry ``((k,i),(l,j))`` is
    ``R[i,j]**n * rho[i,j] * V[k,i] * conj(V[l,j])`` with ``V`` the
    collective meter vectors.
    """
    rho = np.asarray(rho, dtype=complex)
    base = repeated.base
    if validate:
        report = validate_soft(base)
        if not report.ok:
            raise InvalidMeasurement("; ".join(report.failures))
        validate_density_matrix(rho)
    d = base.dim
    if rho.shape != (d, d):
        raise InvalidMeasurement(f"rho has shape {rho.shape}, measurement dim is {d}")
    weights = (base.entanglement ** repeated.n) * rho
    vectors = collective_representation(base.gram, repeated.n).meter_vectors
    joint = np.einsum("ij,ki,lj->kilj", weights, vectors, vectors.conj())
    return joint.reshape(d * d, d * d)


def meter_dm_repeated(rho: np.ndarray, gram: np.ndarray, n: int) -> np.ndarray:
    """Reduced meter state after ``n`` measurements, in the collective basis.

    Depends only on the object populations (the entanglement matrix drops
    out entirely): ``V @ diag(rho_kk) @ V^dagger``.
    """
    rho = np.asarray(rho, dtype=complex)
    vectors = collective_representation(gram, n).meter_vectors
    populations = np.diag(rho).real
    return (vectors * populations) @ vectors.conj().T


def two_level_gram_sqrt(params: TwoLevelMeterParams, n: int) -> np.ndarray:
    """Closed form of the principal square root of the two-level Gram power.

    With ``c = cos(theta/2)**n`` the diagonal is
    ``(sqrt(1+c) + sqrt(1-c)) / 2`` and the off-diagonal carries the
    accumulated phase ``exp(i*n*chi)`` times ``(sqrt(1+c) - sqrt(1-c)) / 2``.
    """
    if int(n) < 1:
        raise InvalidParams(f"repetition count must be >= 1, got {n}")
    c = math.cos(params.theta / 2.0) ** int(n)
    plus = 0.5 * (math.sqrt(1.0 + c) + math.sqrt(1.0 - c))
    minus = 0.5 * (math.sqrt(1.0 + c) - math.sqrt(1.0 - c))
    phase = cmath.exp(1j * int(n) * params.chi)
    return np.array([[plus, phase * minus], [np.conj(phase) * minus, plus]])


@dataclass(frozen=True)
class ContinuousLimitParams:
    """Rates and elapsed time of the continuous measurement limit.

    ``kappa`` is the Gram decay rate (off-diagonal modulus ``exp(-kappa*t)``),
    ``chi_dot`` the phase drift, ``r_dot`` the complex external dephasing
    rate and ``t`` the elapsed time.
    """

    kappa: float
    t: float
    chi_dot: float = 0.0
    r_dot: complex = 0j

    def __post_init__(self) -> None:
        if self.kappa < 0.0:
            raise InvalidParams(f"kappa must be >= 0, got {self.kappa}")
        if self.t < 0.0:
            raise InvalidParams(f"t must be >= 0, got {self.t}")
        if complex(self.r_dot).real < 0.0:
            raise InvalidParams(f"Re(r_dot) must be >= 0, got {self.r_dot}")


def continuous_gram_sqrt(params: ContinuousLimitParams) -> np.ndarray:
    """Collective meter vectors of the continuous limit.

    ``[[s_plus, e^{i chi_dot t} s_minus], [e^{-i chi_dot t} s_minus, s_plus]]``
    with ``s_pm = (sqrt(1 + e^{-kappa t}) +- sqrt(1 - e^{-kappa t})) / 2``;
    ``s_plus**2 + s_minus**2 == 1`` and the square of the matrix has
    off-diagonal ``exp(-kappa*t + i*chi_dot*t)``.
    """
    decay = math.exp(-params.kappa * params.t)
    s_plus = 0.5 * (math.sqrt(1.0 + decay) + math.sqrt(1.0 - decay))
    s_minus = 0.5 * (math.sqrt(1.0 + decay) - math.sqrt(1.0 - decay))
    phase = cmath.exp(1j * params.chi_dot * params.t)
    return np.array([[s_plus, phase * s_minus], [np.conj(phase) * s_minus, s_plus]])


def asymptotic_gram_sqrt(params: ContinuousLimitParams) -> np.ndarray:
    """Long-time expansion of :func:`continuous_gram_sqrt`.

    Valid for large ``kappa*t`` only: diagonal ``1 - exp(-2*kappa*t)/8``,
    off-diagonal ``exp(-kappa*t +- i*chi_dot*t)/2``.
    """
    kt = params.kappa * params.t
    diag = 1.0 - math.exp(-2.0 * kt) / 8.0
    off = 0.5 * cmath.exp(-kt + 1j * params.chi_dot * params.t)
    return np.array([[diag, off], [np.conj(off), diag]])


def meter_dm_continuous(
    rho: np.ndarray, params: ContinuousLimitParams, validate: bool = True
) -> np.ndarray:
    """Reduced meter state of the continuous measurement, collective basis.

    Starts at the pure state with coordinates ``(1/sqrt2, 1/sqrt2)`` at
    ``t = 0`` and diagonalizes onto the object populations as
    ``kappa * t -> inf``. Off-diagonal is
    ``exp(-kappa*t + i*chi_dot*t) / 2``.
    """
    rho = np.asarray(rho, dtype=complex)
    if validate:
        validate_density_matrix(rho)
    if rho.shape != (2, 2):
        raise InvalidParams(f"continuous limit is two-level, rho has shape {rho.shape}")
    vectors = continuous_gram_sqrt(params)
    return (vectors * np.diag(rho).real) @ vectors.conj().T


def _dephasing_matrix(params: ContinuousLimitParams) -> np.ndarray:
    off = cmath.exp(-complex(params.r_dot) * params.t)
    return np.array([[1.0, off], [np.conj(off), 1.0]])


def joint_dm_continuous(
    rho: np.ndarray, params: ContinuousLimitParams, validate: bool = True
) -> np.ndarray:
    """Joint object-meter state of the continuous measurement, as a 4x4.

    Factor order is object (x) meter: the ``(i, j)`` object block equals
    ``rho[i,j]`` times the external dephasing factor ``exp(-r_dot*t)`` (on
    off-diagonal blocks) times the meter component ``V[:,i] V[:,j]^dagger``
    built from :func:`continuous_gram_sqrt`. At ``t = 0`` this is
    ``rho (x) |u><u|`` with ``u = (1/sqrt2, 1/sqrt2)``.
    """
    rho = np.asarray(rho, dtype=complex)
    if validate:
        validate_density_matrix(rho)
    if rho.shape != (2, 2):
        raise InvalidParams(f"continuous limit is two-level, rho has shape {rho.shape}")
    vectors = continuous_gram_sqrt(params)
    weights = _dephasing_matrix(params) * rho
    joint = np.einsum("ij,ki,lj->ikjl", weights, vectors, vectors.conj())
    return joint.reshape(4, 4)


def discrete_step_params(
    kappa: float,
    chi_dot: float,
    r_dot: complex,
    dt: float,
    convention: str = "gram",
) -> tuple[TwoLevelMeterParams, complex]:
    """Per-step parameters whose n-fold repetition approaches the limit.

    Returns the two-level meter angles and the off-diagonal entanglement
    entry for one step of length ``dt``. Under the default ``gram``
    convention the step angle satisfies ``theta**2 = 8*kappa*dt`` so that
    the accumulated Gram off-diagonal decays as ``exp(-kappa*t)``; the
    alternative ``paper`` convention uses ``theta**2 = 4*kappa*dt`` (decay
    ``exp(-kappa*t/2)``).
    """
    if dt <= 0.0:
        raise InvalidParams(f"dt must be positive, got {dt}")
    if convention == "gram":
        theta = math.sqrt(8.0 * kappa * dt)
    elif convention == "paper":
        theta = math.sqrt(4.0 * kappa * dt)
    else:
        raise InvalidParams(f"unknown convention {convention!r}, expected 'gram' or 'paper'")
    params = TwoLevelMeterParams(theta=theta, chi=chi_dot * dt)
    return params, 1.0 - complex(r_dot) * dt
