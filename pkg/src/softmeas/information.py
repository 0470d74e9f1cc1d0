"""Information quantities of soft measurement channels.

Coherent information of a channel is the output entropy minus the exchange
entropy computed on a purification of the input; it may be negative and is
never clamped here. For the object-output channel of a soft measurement
(entrywise multiplication of the input by ``entanglement * gram``) both
terms collapse to entropies of small Hadamard products, and for two-level
systems to a closed form in the softness parameter ``q``, the population
``p`` and the coherence modulus ``mu``.

Semiclassical (Holevo) information quantifies the classical yield of a
labeled state ensemble; helpers here build the post-measurement meter
ensembles, including the eavesdropper-versus-receiver arrangement where a
dephasing in one basis competes with a soft projection in another.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    InvalidChannel,
    InvalidMeasurement,
    InvalidParams,
    OutOfRange,
)
from .matcore import (
    TAU_RECON,
    herm_eig,
    validate_density_matrix,
    von_neumann_entropy,
)
from .measurement import (
    SoftMeasurement,
    _check_correlation_matrix,
    meter_states_from_gram,
    validate_soft,
)

# Eigenvalues of a Choi matrix below this (relative) threshold are treated
# as numerically zero when extracting Kraus operators.
CHOI_RANK_TOL = 1e-12

# Input eigenvalues below this are dropped from the purification reference.
_PURIFY_TOL = 1e-15


@dataclass(frozen=True)
class KrausChannel:
    """Completely positive trace-preserving map given by Kraus operators.

    Every operator maps the input space to the output space; trace
    preservation requires ``sum_a K_a^dagger K_a == identity``.
    """

    kraus_ops: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        ops = tuple(np.asarray(k, dtype=complex) for k in self.kraus_ops)
        if not ops:
            raise InvalidChannel("channel needs at least one Kraus operator")
        if any(k.ndim != 2 or k.shape != ops[0].shape for k in ops):
            raise InvalidChannel("all Kraus operators must share one 2-D shape")
        object.__setattr__(self, "kraus_ops", ops)

    @property
    def in_dim(self) -> int:
        return int(self.kraus_ops[0].shape[1])

    @property
    def out_dim(self) -> int:
        return int(self.kraus_ops[0].shape[0])

    def validate(self, atol: float = TAU_RECON) -> None:
        total = sum(k.conj().T @ k for k in self.kraus_ops)
        dev = float(np.max(np.abs(total - np.eye(self.in_dim))))
        if dev > atol:
            raise InvalidChannel(
                f"sum K^dagger K deviates from identity by {dev:.3e} > {atol:.1e}"
            )

    def apply(self, rho: np.ndarray) -> np.ndarray:
        rho = np.asarray(rho, dtype=complex)
        if rho.shape != (self.in_dim, self.in_dim):
            raise DimensionMismatch(
                f"rho has shape {rho.shape}, channel input dim is {self.in_dim}"
            )
        return sum(k @ rho @ k.conj().T for k in self.kraus_ops)


def choi_matrix(channel: KrausChannel) -> np.ndarray:
    """Choi matrix of a channel, ordered output (x) input.

    ``J[(o,i),(p,j)] = sum_a K_a[o,i] * conj(K_a[p,j])``; Hermitian PSD with
    partial trace over the output equal to the identity.
    """
    d_in, d_out = channel.in_dim, channel.out_dim
    j = np.zeros((d_out * d_in, d_out * d_in), dtype=complex)
    for k in channel.kraus_ops:
        v = k.reshape(-1)
        j += np.outer(v, v.conj())
    return j


def kraus_from_choi(
    choi: np.ndarray, in_dim: int, out_dim: int, rank_tol: float = CHOI_RANK_TOL
) -> KrausChannel:
    """Extract Kraus operators from a Choi matrix (output (x) input order).

    Eigenvectors with eigenvalue above ``rank_tol`` times the largest one
    become operators ``sqrt(eig) * vec`` reshaped to ``out_dim x in_dim``,
    ordered by descending eigenvalue for determinism.
    """
    w, v = herm_eig(np.asarray(choi, dtype=complex))
    wmax = max(float(w[-1]), 0.0)
    ops = []
    for idx in range(len(w) - 1, -1, -1):
        if w[idx] > rank_tol * wmax and w[idx] > 0.0:
            ops.append(math.sqrt(float(w[idx])) * v[:, idx].reshape(out_dim, in_dim))
    if not ops:
        raise InvalidChannel("Choi matrix has no eigenvalue above the rank tolerance")
    return KrausChannel(tuple(ops))


def soft_object_channel(
    entanglement: np.ndarray, gram: np.ndarray, rank_tol: float = CHOI_RANK_TOL
) -> KrausChannel:
    """Object-output channel of a soft measurement, as Kraus operators.

    The channel multiplies the input entrywise by
    ``m = entanglement * gram``. Its Kraus operators are obtained by
    eigendecomposing the corresponding Choi matrix (they come out diagonal).
    """
    failures = _check_correlation_matrix(np.asarray(entanglement, complex), "entanglement")
    failures += _check_correlation_matrix(np.asarray(gram, complex), "gram")
    if failures:
        raise InvalidMeasurement("; ".join(failures))
    m = np.asarray(entanglement, dtype=complex) * np.asarray(gram, dtype=complex)
    d = m.shape[0]
    choi = np.zeros((d, d, d, d), dtype=complex)
    rows, cols = np.indices((d, d))
    choi[rows, rows, cols, cols] = m
    return kraus_from_choi(choi.reshape(d * d, d * d), d, d, rank_tol=rank_tol)


def coherent_info_channel(
    channel: KrausChannel, rho: np.ndarray, validate: bool = True
) -> float:
    """Coherent information preserved by ``channel`` on input ``rho``, bits.

    The input is purified in its eigenbasis (descending eigenvalues, zero
    eigenvalues omitted from the reference system), the channel acts on the
    input half, and the result is output entropy minus joint entropy. The
    value may be negative.
    """
    rho = np.asarray(rho, dtype=complex)
    if validate:
        channel.validate()
        validate_density_matrix(rho)
    if rho.shape != (channel.in_dim, channel.in_dim):
        raise DimensionMismatch(
            f"rho has shape {rho.shape}, channel input dim is {channel.in_dim}"
        )
    w, v = herm_eig(rho)
    order = [i for i in range(len(w) - 1, -1, -1) if w[i] > _PURIFY_TOL]
    amps = v[:, order] * np.sqrt(w[order])  # in_dim x rank, column i = sqrt(l_i) v_i
    rank = amps.shape[1]
    joint = np.zeros((channel.out_dim * rank, channel.out_dim * rank), dtype=complex)
    for k in channel.kraus_ops:
        vec = (k @ amps).reshape(-1)
        joint += np.outer(vec, vec.conj())
    output = channel.apply(rho)
    return von_neumann_entropy(output, validate=False) - von_neumann_entropy(
        joint, validate=False
    )


def coherent_info_soft(
    rho: np.ndarray,
    entanglement: np.ndarray,
    gram: np.ndarray,
    validate: bool = True,
) -> float:
    """Coherent information kept in the object by a soft measurement, bits.

    Closed form: with multiplier ``m = entanglement * gram`` the value is
    ``S[m * rho] - S[sqrt(rho_kk) m_kl sqrt(rho_ll)]`` (entrywise products).
    Both arguments are themselves valid density matrices and are checked.
    """
    rho = np.asarray(rho, dtype=complex)
    if validate:
        failures = _check_correlation_matrix(
            np.asarray(entanglement, complex), "entanglement"
        )
        failures += _check_correlation_matrix(np.asarray(gram, complex), "gram")
        if failures:
            raise InvalidMeasurement("; ".join(failures))
        validate_density_matrix(rho)
    m = np.asarray(entanglement, dtype=complex) * np.asarray(gram, dtype=complex)
    if m.shape != rho.shape:
        raise DimensionMismatch(f"rho shape {rho.shape} != measurement shape {m.shape}")
    first = m * rho
    roots = np.sqrt(np.clip(np.diag(rho).real, 0.0, None))
    second = np.outer(roots, roots) * m
    validate_density_matrix(first, name="dephased object state")
    validate_density_matrix(second, name="exchange-entropy argument")
    return von_neumann_entropy(first, validate=False) - von_neumann_entropy(
        second, validate=False
    )


def _g(x: float) -> float:
    """``(1-x)log2(1-x) + (1+x)log2(1+x)`` with the 0*log(0) = 0 convention."""
    x = min(max(x, 0.0), 1.0)
    lo = 0.0 if x >= 1.0 else (1.0 - x) * math.log2(1.0 - x)
    return lo + (1.0 + x) * math.log2(1.0 + x)


def coherent_info_two_level(q: float, p: float, mu: float) -> float:
    """Two-level closed form of :func:`coherent_info_soft`, bits.

    ``q`` is the softness parameter (modulus of the combined off-diagonal
    multiplier), ``p`` the first population, ``mu`` the coherence modulus of
    the input. All three must lie in ``[0, 1]``.
    """
    for name, value in (("q", q), ("p", p), ("mu", mu)):
        if not 0.0 <= value <= 1.0:
            raise OutOfRange(f"{name} must lie in [0, 1], got {value}")
    spread = 4.0 * p * (1.0 - p)
    x1 = math.sqrt(max(1.0 - spread * (1.0 - q * q), 0.0))
    x2 = math.sqrt(max(1.0 - spread * (1.0 - (q * mu) ** 2), 0.0))
    return 0.5 * (_g(x1) - _g(x2)) + 0.0


@dataclass(frozen=True)
class StateEnsemble:
    """Labeled ensemble of density matrices with prior probabilities."""

    probs: np.ndarray
    states: tuple[np.ndarray, ...]
    labels: tuple | None = None

    def __post_init__(self) -> None:
        probs = np.asarray(self.probs, dtype=float)
        states = tuple(np.asarray(s, dtype=complex) for s in self.states)
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "states", states)
        if probs.ndim != 1 or len(states) != probs.size:
            raise InvalidParams("need exactly one probability per state")
        if np.any(probs < 0.0):
            raise InvalidParams("probabilities must be nonnegative")
        if abs(float(probs.sum()) - 1.0) > 1e-12:
            raise InvalidParams(f"probabilities sum to {probs.sum():.15g}, expected 1")
        dims = {s.shape for s in states}
        if len(dims) != 1:
            raise DimensionMismatch(f"ensemble states have mixed shapes {dims}")
        for i, s in enumerate(states):
            validate_density_matrix(s, name=f"ensemble state {i}")
        if self.labels is not None and len(self.labels) != len(states):
            raise InvalidParams("need exactly one label per state")

    @property
    def dim(self) -> int:
        return int(self.states[0].shape[0])


def meter_ensemble(ensemble: StateEnsemble, gram: np.ndarray) -> StateEnsemble:
    """Meter-side ensemble induced by measuring each ensemble member.

    Each output state mixes the synthesized meter states with the input's
    populations: ``V @ diag(rho_kk) @ V^dagger``.
    """
    vectors = meter_states_from_gram(gram)
    if vectors.shape[0] != ensemble.dim:
        raise DimensionMismatch(
            f"gram dim {vectors.shape[0]} != ensemble dim {ensemble.dim}"
        )
    states = tuple(
        (vectors * np.diag(s).real) @ vectors.conj().T for s in ensemble.states
    )
    return StateEnsemble(probs=ensemble.probs, states=states, labels=ensemble.labels)


def holevo_info(ensemble: StateEnsemble) -> float:
    """Holevo (semiclassical) information of an ensemble, bits.

    ``S[sum_k p_k rho_k] - sum_k p_k S[rho_k]``; nonnegative and at most
    ``log2(dim)``.
    """
    average = sum(p * s for p, s in zip(ensemble.probs, ensemble.states))
    mixing = von_neumann_entropy(average, validate=False)
    conditional = sum(
        p * von_neumann_entropy(s, validate=False)
        for p, s in zip(ensemble.probs, ensemble.states)
        if p > 0.0
    )
    return float(mixing - conditional) + 0.0


def _binary_entropy(p: float) -> float:
    p = min(max(p, 0.0), 1.0)
    out = 0.0
    for value in (p, 1.0 - p):
        if value > 0.0:
            out -= value * math.log2(value)
    return out


def semiclassical_info_continuous(
    kappa: float, t: float, convention: str = "gram"
) -> float:
    """Holevo information accumulated by the continuous measurement, bits.

    For two equiprobable measured states the value is the binary entropy
    ``H((1 + c) / 2)`` of the residual meter overlap ``c``. Under the
    default ``gram`` convention ``c = exp(-kappa*t)``, consistent with the
    continuous meter state; the ``paper`` convention uses
    ``c = exp(-2*kappa*t)``. Monotone from 0 at ``t = 0`` toward 1.
    """
    if kappa < 0.0 or t < 0.0:
        raise InvalidParams("kappa and t must be nonnegative")
    if convention == "gram":
        overlap = math.exp(-kappa * t)
    elif convention == "paper":
        overlap = math.exp(-2.0 * kappa * t)
    else:
        raise InvalidParams(f"unknown convention {convention!r}, expected 'gram' or 'paper'")
    return _binary_entropy((1.0 + overlap) / 2.0)


@dataclass(frozen=True)
class CompetitionParams:
    """Two receivers measuring one object: softness parameters ``q_eve``
    and ``q_bob``, input coherence modulus ``mu``, first population ``p``."""

    q_eve: float
    q_bob: float
    mu: float
    p: float = 0.5

    def __post_init__(self) -> None:
        for name in ("q_eve", "q_bob", "mu", "p"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise OutOfRange(f"{name} must lie in [0, 1], got {value}")


def compete_coherent(
    rho: np.ndarray,
    ent_eve: np.ndarray,
    gram_eve: np.ndarray,
    ent_bob: np.ndarray,
    gram_bob: np.ndarray,
    validate: bool = True,
) -> tuple[float, float]:
    """Coherent information retrieved by each of two sequential receivers.

    Both values share the first term (entropy of the object dephased by all
    four matrices); the second term omits the respective receiver's own
    Gram matrix:

    ``I_eve = S[rho*RE*RB*QE*QB] - S[rho*RE*RB*QB]`` and symmetrically for
    the other receiver (all products entrywise). Equal when both receivers
    use the same parameters.
    """
    rho = np.asarray(rho, dtype=complex)
    mats = {
        "eve entanglement": np.asarray(ent_eve, complex),
        "eve gram": np.asarray(gram_eve, complex),
        "bob entanglement": np.asarray(ent_bob, complex),
        "bob gram": np.asarray(gram_bob, complex),
    }
    if validate:
        failures: list[str] = []
        for name, mat in mats.items():
            failures += _check_correlation_matrix(mat, name)
        if failures:
            raise InvalidMeasurement("; ".join(failures))
        validate_density_matrix(rho)
    shared = rho * mats["eve entanglement"] * mats["bob entanglement"]
    common = shared * mats["eve gram"] * mats["bob gram"]
    s_common = von_neumann_entropy(common, validate=False)
    info_eve = s_common - von_neumann_entropy(shared * mats["bob gram"], validate=False)
    info_bob = s_common - von_neumann_entropy(shared * mats["eve gram"], validate=False)
    return info_eve, info_bob


def compete_two_level(params: CompetitionParams) -> tuple[float, float]:
    """Closed two-level form of :func:`compete_coherent` for balanced
    populations and unit entanglement matrices.

    Substitutes ``(q_bob*mu, q_eve)`` respectively ``(q_eve*mu, q_bob)``
    into the single-measurement closed form at ``p = 1/2``.
    """
    if params.p != 0.5:
        raise OutOfRange("closed competition form is defined at p = 1/2")
    info_eve = coherent_info_two_level(params.q_bob * params.mu, 0.5, params.q_eve)
    info_bob = coherent_info_two_level(params.q_eve * params.mu, 0.5, params.q_bob)
    return info_eve, info_bob


def _bloch_y_rotation(theta: float) -> np.ndarray:
    half = theta / 2.0
    return np.array(
        [[math.cos(half), -math.sin(half)], [math.sin(half), math.cos(half)]],
        dtype=complex,
    )


def eve_bob_semiclassical(
    ensemble: StateEnsemble,
    eve_basis: float | np.ndarray,
    dephase: np.ndarray,
    bob: SoftMeasurement,
    validate: bool = True,
) -> float:
    """Holevo information left for the receiver after an intercepting
    measurement in a rotated basis.

    Each ensemble state (given in the receiver's basis) is transformed to
    the interceptor's basis, multiplied entrywise by the combined dephasing
    matrix ``dephase``, transformed back, and fed through the receiver's
    soft projection (populations in the receiver's basis spread over his
    meter states). Returns the Holevo information of the resulting
    ensemble.

    ``eve_basis`` is either a rotation angle on the Bloch sphere's y-axis
    (two-level only) or an explicit unitary basis change.
    """
    dim = ensemble.dim
    if isinstance(eve_basis, (int, float)):
        if dim != 2:
            raise DimensionMismatch("angle parameterization is two-level only")
        unitary = _bloch_y_rotation(float(eve_basis))
    else:
        unitary = np.asarray(eve_basis, dtype=complex)
        if unitary.shape != (dim, dim):
            raise DimensionMismatch(
                f"basis unitary shape {unitary.shape} does not match dim {dim}"
            )
        if np.max(np.abs(unitary.conj().T @ unitary - np.eye(dim))) > TAU_RECON:
            raise InvalidMeasurement("eve_basis is not unitary")
    dephase = np.asarray(dephase, dtype=complex)
    if validate:
        failures = _check_correlation_matrix(dephase, "dephase")
        report = validate_soft(bob)
        failures += list(report.failures)
        if failures:
            raise InvalidMeasurement("; ".join(failures))
    if bob.dim != dim:
        raise DimensionMismatch(f"bob dim {bob.dim} != ensemble dim {dim}")
    meter_vecs = meter_states_from_gram(bob.gram)
    out_states = []
    for state in ensemble.states:
        in_eve = unitary.conj().T @ state @ unitary
        back = unitary @ (dephase * in_eve) @ unitary.conj().T
        weights = np.clip(np.diag(back).real, 0.0, None)
        out_states.append((meter_vecs * weights) @ meter_vecs.conj().T)
    return holevo_info(
        StateEnsemble(probs=ensemble.probs, states=tuple(out_states), labels=ensemble.labels)
    )
