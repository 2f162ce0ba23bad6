"""Entropies, distances and thermodynamic bookkeeping for driven processes.

All entropies are in nats, energies and work in Hz (h = 1), lengths in
radians.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from typing import NamedTuple

import numpy as np

from .drive import evolve
from .linalg import (
    LOG_CLAMP,
    ZERO_BAND,
    DensityMatrix,
    SpectralDecomposition,
    UnitaryOperator,
    as_density,
    as_hermitian,
    as_matrix,
    clamp_nonnegative,
    matrix_sqrt,
)
from .thermal import (
    ThermalSpec,
    dephase,
    free_energy_difference,
    gibbs_state,
    partition_function,
)

GIBBS_ATOL = 1e-8
SUPPORT_ATOL = 1e-8
DIAGONAL_ATOL = 1e-8
WORK_MERGE_HZ = 1e-9
# outcomes below this probability are roundoff from orthogonal eigenvectors
NEGLIGIBLE_PROBABILITY = 1e-14
BOUND_SLACK = 1e-10


def _beta(t) -> float:
    return t.beta if isinstance(t, ThermalSpec) else ThermalSpec(t).beta


def _basis(basis) -> SpectralDecomposition:
    if isinstance(basis, SpectralDecomposition):
        return basis
    return as_hermitian(basis).spectrum


def _xlogx(p: np.ndarray) -> np.ndarray:
    p = clamp_nonnegative(p)
    out = np.zeros_like(p)
    nz = p > 0
    out[nz] = p[nz] * np.log(p[nz])
    return out


def shannon_entropy(p) -> float:
    """Shannon entropy in nats with 0 ln 0 = 0."""
    return float(max(-np.sum(_xlogx(np.asarray(p, dtype=np.float64))), 0.0))


def von_neumann_entropy(rho) -> float:
    """``S(rho) = -tr(rho ln rho)`` in nats, computed from the spectrum."""
    rho = as_density(rho)
    return shannon_entropy(rho.spectrum.eigenvalues)


def relative_entropy(rho, sigma) -> float:
    """Quantum relative entropy ``D(rho || sigma) = tr rho ln rho - tr rho ln sigma``.

    Raises
    ------
    ValueError
        If ``rho`` puts more than 1e-8 weight on an eigenvector of ``sigma``
        whose eigenvalue is numerically zero (D is infinite).
    """
    rho, sigma = as_density(rho), as_density(sigma)
    if rho.dim != sigma.dim:
        raise ValueError(f"dimension mismatch: {rho.dim} vs {sigma.dim}")
    sd = sigma.spectrum
    v = sd.eigenvectors
    # weights of rho along sigma's eigenvectors
    weights = np.real(np.einsum("ik,ij,jk->k", v.conj(), rho.matrix, v))
    s_vals = clamp_nonnegative(sd.eigenvalues, LOG_CLAMP)
    null = sd.eigenvalues <= ZERO_BAND
    if np.any(weights[null] > SUPPORT_ATOL):
        raise ValueError(
            "support of rho is not contained in support of sigma "
            f"(weight {weights[null].max():.3e} on a null eigenvector)"
        )
    cross = float(np.sum(weights * np.log(s_vals)))
    neg_entropy = float(np.sum(_xlogx(rho.spectrum.eigenvalues)))
    return neg_entropy - cross


def coherence(rho, basis) -> float:
    """Relative entropy of coherence ``S(dephase(rho)) - S(rho)`` in ``basis``."""
    rho = as_density(rho)
    diag = dephase(rho, _basis(basis))
    return max(von_neumann_entropy(diag) - von_neumann_entropy(rho), 0.0)


def _expect(rho: DensityMatrix, H) -> float:
    return float(np.real(np.trace(rho.matrix @ as_matrix(H))))


def average_work(rho_i, H_i, rho_tau, H_f) -> float:
    """Mean work of a closed unitary process, ``tr(rho_tau H_f) - tr(rho_i H_i)``."""
    rho_i, rho_tau = as_density(rho_i), as_density(rho_tau)
    H_i, H_f = as_hermitian(H_i), as_hermitian(H_f)
    if not (rho_i.dim == H_i.dim == rho_tau.dim == H_f.dim):
        raise ValueError(
            f"dimension mismatch: rho_i {rho_i.dim}, H_i {H_i.dim}, "
            f"rho_tau {rho_tau.dim}, H_f {H_f.dim}"
        )
    return _expect(rho_tau, H_f) - _expect(rho_i, H_i)


def _require_gibbs(rho_i: DensityMatrix, H_i, beta: float) -> None:
    dev = float(np.max(np.abs(rho_i.matrix - gibbs_state(H_i, beta).matrix)))
    if dev > GIBBS_ATOL:
        raise ValueError(
            f"initial state is not the Gibbs state of H_i at beta={beta!r}: "
            f"max entry deviation {dev:.3e} > {GIBBS_ATOL:g}"
        )


def irreversible_entropy(rho_i, H_i, rho_tau, H_f, beta) -> tuple[float, float]:
    """Irreversible entropy production of a unitary drive started in equilibrium.

    Returns
    -------
    (float, float)
        ``beta (<w> - Delta F)`` and ``D(rho_tau || gibbs(H_f, beta))``.
        For a Gibbs initial state and unitary dynamics these coincide.
    """
    b = _beta(beta)
    rho_i, rho_tau = as_density(rho_i), as_density(rho_tau)
    H_i, H_f = as_hermitian(H_i), as_hermitian(H_f)
    _require_gibbs(rho_i, H_i, b)
    work_route = b * (average_work(rho_i, H_i, rho_tau, H_f) - free_energy_difference(H_i, H_f, b))
    relent_route = relative_entropy(rho_tau, gibbs_state(H_f, b))
    return work_route, relent_route


def entropy_decomposition(rho_tau, H_f, beta) -> tuple[float, float]:
    """Split ``D(rho_tau || rho_f)`` into coherence and population mismatch.

    The coherence term is measured in the eigenbasis of ``H_f``; the
    population term is ``D(dephase(rho_tau) || rho_f)``.
    """
    H_f = as_hermitian(H_f)
    basis = H_f.spectrum
    rho_tau = as_density(rho_tau)
    rho_f = gibbs_state(H_f, beta)
    return coherence(rho_tau, basis), relative_entropy(dephase(rho_tau, basis), rho_f)


def uhlmann_fidelity(rho1, rho2) -> float:
    """``F = [tr sqrt(sqrt(rho1) rho2 sqrt(rho1))]^2``, clamped to [0, 1]."""
    rho1, rho2 = as_density(rho1), as_density(rho2)
    s = matrix_sqrt(rho1).matrix
    inner = s @ rho2.matrix @ s
    inner = 0.5 * (inner + inner.conj().T)
    root_trace = float(np.sum(np.sqrt(clamp_nonnegative(as_hermitian(inner).spectrum.eigenvalues))))
    return min(max(root_trace**2, 0.0), 1.0)


def bures_length(rho1, rho2) -> float:
    """Bures angle ``arccos sqrt(F)`` in [0, pi/2]."""
    root_f = min(max(math.sqrt(uhlmann_fidelity(rho1, rho2)), 0.0), 1.0)
    return math.acos(root_f)


class ClausiusCheck(NamedTuple):
    bound_value: float
    satisfied: bool
    margin: float


def clausius_bound(s_irr: float, length: float) -> ClausiusCheck:
    """Compare entropy production with the Bures bound ``8 L^2 / pi^2``."""
    if not (math.isfinite(s_irr) and math.isfinite(length)):
        raise ValueError("entropy and length must be finite")
    bound = 8.0 * length**2 / math.pi**2
    return ClausiusCheck(bound, s_irr >= bound - BOUND_SLACK, s_irr - bound)


def wootters_length(p, q) -> float:
    """Statistical angle ``arccos(sum_k sqrt(p_k q_k))`` between two distributions."""
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if p.shape != q.shape or p.ndim != 1:
        raise ValueError(f"distributions must be 1-d with equal length, got {p.shape}, {q.shape}")
    for name, d in (("p", p), ("q", q)):
        if np.any(d < -1e-12) or abs(d.sum() - 1.0) > 1e-10:
            raise ValueError(f"{name} is not a normalized probability distribution")
    overlap = float(np.sum(np.sqrt(np.clip(p, 0, None) * np.clip(q, 0, None))))
    return math.acos(min(max(overlap, 0.0), 1.0))


def overlap_fidelity(rho_e, rho_t) -> float:
    """Normalized Hilbert-Schmidt overlap, as used to compare a measured and a target state.

    ``|tr(rho_e rho_t^H)| / sqrt(tr(rho_e rho_e^H) tr(rho_t rho_t^H))``
    """
    a, b = as_density(rho_e).matrix, as_density(rho_t).matrix
    num = abs(np.trace(a @ b.conj().T))
    den = math.sqrt(np.real(np.trace(a @ a.conj().T)) * np.real(np.trace(b @ b.conj().T)))
    return min(float(num / den), 1.0)


@dataclass(frozen=True)
class WorkDistribution:
    """Discrete work outcomes (Hz) with their probabilities."""

    outcomes: tuple[tuple[float, float], ...]

    def __post_init__(self):
        outs = tuple((float(w), float(p)) for w, p in self.outcomes)
        probs = np.array([p for _, p in outs])
        if probs.size == 0:
            raise ValueError("work distribution is empty")
        if np.any(probs < -1e-12):
            raise ValueError(f"negative probability {probs.min():.3e}")
        if abs(probs.sum() - 1.0) > 1e-10:
            raise ValueError(f"probabilities sum to {probs.sum()!r}, expected 1")
        object.__setattr__(self, "outcomes", outs)

    @property
    def works(self) -> np.ndarray:
        return np.array([w for w, _ in self.outcomes])

    @property
    def probabilities(self) -> np.ndarray:
        return np.array([p for _, p in self.outcomes])

    def mean(self) -> float:
        return float(np.dot(self.works, self.probabilities))

    def exp_average(self, beta) -> float:
        """``<exp(-beta W)>``, the left side of the Jarzynski equality."""
        return float(np.dot(self.probabilities, np.exp(-_beta(beta) * self.works)))


def _merge_outcomes(works: np.ndarray, probs: np.ndarray) -> list[tuple[float, float]]:
    order = np.argsort(works, kind="stable")
    merged: list[list[float]] = []
    for w, p in zip(works[order], probs[order]):
        if merged and w - merged[-1][2] <= WORK_MERGE_HZ:
            merged[-1][1] += p
            merged[-1][2] = w
        else:
            # [representative work, probability, last work seen in the group]
            merged.append([w, p, w])
    return [(w, p) for w, p, _ in merged]


def tpm_work_distribution(rho_i, H_i, H_f, U) -> WorkDistribution:
    """Two-point-measurement work statistics of a unitary drive.

    Energy is measured in the eigenbasis of ``H_i``, the state evolves
    under ``U``, and energy is measured again in the eigenbasis of ``H_f``.
    Outcome ``eps_f[j] - eps_i[k]`` occurs with probability
    ``p_k |<f_j|U|i_k>|^2``. Works closer than 1e-9 Hz are merged and
    outcomes with probability below 1e-14 are dropped.

    Raises
    ------
    ValueError
        If ``rho_i`` carries coherence in the ``H_i`` eigenbasis.
    """
    rho_i = as_density(rho_i)
    H_i, H_f = as_hermitian(H_i), as_hermitian(H_f)
    u = U.matrix if isinstance(U, UnitaryOperator) else np.asarray(U, dtype=np.complex128)
    if not (rho_i.dim == H_i.dim == H_f.dim == u.shape[0]):
        raise ValueError("dimension mismatch between state, Hamiltonians and unitary")
    vi, vf = H_i.spectrum.eigenvectors, H_f.spectrum.eigenvectors
    in_energy_basis = vi.conj().T @ rho_i.matrix @ vi
    offdiag = in_energy_basis - np.diag(np.diag(in_energy_basis))
    if offdiag.size and np.max(np.abs(offdiag)) > DIAGONAL_ATOL:
        raise ValueError(
            "two-point measurement needs an initial state without coherence in the "
            f"H_i eigenbasis (max off-diagonal {np.max(np.abs(offdiag)):.3e})"
        )
    p_init = np.real(np.diag(in_energy_basis))
    transition = np.abs(vf.conj().T @ u @ vi) ** 2  # [j, k]
    probs = transition * p_init[None, :]
    works = H_f.spectrum.eigenvalues[:, None] - H_i.spectrum.eigenvalues[None, :]
    merged = _merge_outcomes(works.ravel(), probs.ravel())
    return WorkDistribution(tuple((w, p) for w, p in merged if p >= NEGLIGIBLE_PROBABILITY))


@dataclass(frozen=True)
class ThermoRecord:
    """Complete thermodynamic account of one driven process."""

    avg_work: float
    delta_F: float
    s_irr_work_route: float
    s_irr_relent_route: float
    coherence_term: float
    population_term: float
    bures_length: float
    bound_value: float
    jarzynski_lhs: float
    jarzynski_rhs: float

    def violations(self) -> list[str]:
        """Names and values of every broken record invariant (empty when valid)."""
        out = []
        if self.s_irr_relent_route < -1e-12:
            out.append(f"s_irr_relent_route negative: {self.s_irr_relent_route:.3e}")
        if self.coherence_term < -1e-12:
            out.append(f"coherence_term negative: {self.coherence_term:.3e}")
        if self.population_term < -1e-12:
            out.append(f"population_term negative: {self.population_term:.3e}")
        gap = abs(self.coherence_term + self.population_term - self.s_irr_relent_route)
        if gap >= 1e-8:
            out.append(f"decomposition mismatch: {gap:.3e}")
        if abs(self.s_irr_work_route - self.s_irr_relent_route) >= 1e-8:
            out.append(
                "entropy routes disagree: "
                f"{abs(self.s_irr_work_route - self.s_irr_relent_route):.3e}"
            )
        if self.s_irr_relent_route < self.bound_value - BOUND_SLACK:
            out.append(
                f"Clausius bound violated: {self.s_irr_relent_route!r} < {self.bound_value!r}"
            )
        if abs(self.jarzynski_lhs - self.jarzynski_rhs) >= 1e-10:
            out.append(
                f"Jarzynski mismatch: {abs(self.jarzynski_lhs - self.jarzynski_rhs):.3e}"
            )
        return out

    def as_dict(self) -> dict[str, float]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def thermo_record(H_i, H_f, U, beta) -> ThermoRecord:
    """Drive the Gibbs state of ``H_i`` with ``U`` and collect every quantity."""
    b = _beta(beta)
    H_i, H_f = as_hermitian(H_i), as_hermitian(H_f)
    rho_i = gibbs_state(H_i, b)
    rho_tau = evolve(rho_i, U)
    rho_f = gibbs_state(H_f, b)

    w = average_work(rho_i, H_i, rho_tau, H_f)
    dF = free_energy_difference(H_i, H_f, b)
    s_work, s_rel = irreversible_entropy(rho_i, H_i, rho_tau, H_f, b)
    c_term, p_term = entropy_decomposition(rho_tau, H_f, b)
    length = bures_length(rho_tau, rho_f)
    dist = tpm_work_distribution(rho_i, H_i, H_f, U)
    return ThermoRecord(
        avg_work=w,
        delta_F=dF,
        s_irr_work_route=s_work,
        s_irr_relent_route=s_rel,
        coherence_term=c_term,
        population_term=p_term,
        bures_length=length,
        bound_value=clausius_bound(s_rel, length).bound_value,
        jarzynski_lhs=dist.exp_average(b),
        jarzynski_rhs=partition_function(H_f, b) / partition_function(H_i, b),
    )
