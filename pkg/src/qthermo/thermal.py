"""Equilibrium states and the dephasing map.

Temperatures are frequencies: with h = 1 the inverse temperature ``beta``
is in 1/Hz and ``temperature_hz = 1 / beta``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import (
    DensityMatrix,
    SpectralDecomposition,
    as_density,
    as_hermitian,
)

PROBABILITY_ATOL = 1e-10


@dataclass(frozen=True)
class ThermalSpec:
    """Inverse temperature in 1/Hz. ``beta = 0`` is the infinite-temperature limit."""

    beta: float

    def __post_init__(self):
        beta = float(self.beta)
        if not beta >= 0.0 or math.isinf(beta):
            raise ValueError(f"beta must be finite and non-negative, got {self.beta!r}")
        object.__setattr__(self, "beta", beta)

    @classmethod
    def from_temperature_hz(cls, temperature_hz: float) -> "ThermalSpec":
        if not temperature_hz > 0:
            raise ValueError(f"temperature must be positive, got {temperature_hz!r}")
        return cls(1.0 / temperature_hz)

    @property
    def temperature_hz(self) -> float:
        return math.inf if self.beta == 0.0 else 1.0 / self.beta


def _beta(t) -> float:
    return t.beta if isinstance(t, ThermalSpec) else ThermalSpec(t).beta


def _log_partition(energies: np.ndarray, beta: float) -> float:
    # shift by the ground energy so exp never overflows
    e0 = energies.min()
    return -beta * e0 + math.log(np.sum(np.exp(-beta * (energies - e0))))


def boltzmann_populations(energies, beta: float) -> np.ndarray:
    """Normalized weights exp(-beta E_k) / Z for the given energy levels."""
    energies = np.asarray(energies, dtype=np.float64)
    w = np.exp(-beta * (energies - energies.min()))
    return w / w.sum()


def partition_function(H, t) -> float:
    """Canonical partition function ``Z = sum_k exp(-beta eps_k)``.

    Parameters
    ----------
    H : HermitianOperator or array_like
        Hamiltonian in Hz.
    t : ThermalSpec or float
        Inverse temperature (a bare float is read as ``beta``).
    """
    H = as_hermitian(H)
    return math.exp(_log_partition(H.spectrum.eigenvalues, _beta(t)))


def gibbs_state(H, t) -> DensityMatrix:
    """Thermal state ``exp(-beta H) / Z``, built in the eigenbasis of ``H``."""
    H = as_hermitian(H)
    sd = H.spectrum
    pops = boltzmann_populations(sd.eigenvalues, _beta(t))
    v = sd.eigenvectors
    return DensityMatrix((v * pops) @ v.conj().T)


def free_energy_difference(H_i, H_f, t) -> float:
    """``Delta F = -(1/beta) ln(Z_f / Z_i)`` in Hz, both at the same beta."""
    beta = _beta(t)
    if beta == 0.0:
        raise ValueError("free energy difference is undefined at beta = 0")
    H_i, H_f = as_hermitian(H_i), as_hermitian(H_f)
    log_ratio = _log_partition(H_f.spectrum.eigenvalues, beta) - _log_partition(
        H_i.spectrum.eigenvalues, beta
    )
    return -log_ratio / beta


def effective_temperature(p0: float, p1: float, nu: float) -> ThermalSpec:
    """Spin temperature of a two-level population ratio.

    ``beta = ln(p0 / p1) / nu`` for ground population ``p0``, excited
    population ``p1`` and level splitting ``nu`` (Hz). A population
    inversion (``p1 > p0``) has negative beta and is rejected.
    """
    if not (p0 > 0 and p1 > 0):
        raise ValueError(
            f"populations must both be positive (p0={p0!r}, p1={p1!r}); "
            "a vanishing population has no finite spin temperature"
        )
    if abs(p0 + p1 - 1.0) > PROBABILITY_ATOL:
        raise ValueError(f"populations must sum to 1, got {p0 + p1!r}")
    if not nu > 0:
        raise ValueError(f"level splitting must be positive, got {nu!r}")
    beta = math.log(p0 / p1) / nu
    if beta < 0 and beta > -1e-15:
        beta = 0.0
    return ThermalSpec(beta)


def dephase(rho, basis) -> DensityMatrix:
    """Erase all coherences of ``rho`` in the orthonormal ``basis``.

    ``basis`` may be a SpectralDecomposition or a Hermitian operator whose
    eigenbasis is used. Eigenvectors are projected individually, even when
    eigenvalues are degenerate.
    """
    rho = as_density(rho)
    if not isinstance(basis, SpectralDecomposition):
        basis = as_hermitian(basis).spectrum
    v = basis.eigenvectors
    pops = np.real(np.einsum("ik,ij,jk->k", v.conj(), rho.matrix, v))
    return DensityMatrix((v * pops) @ v.conj().T)


def energy_basis(H) -> SpectralDecomposition:
    H = as_hermitian(H)
    return H.spectrum


__all__ = [
    "ThermalSpec",
    "boltzmann_populations",
    "partition_function",
    "gibbs_state",
    "free_energy_difference",
    "effective_temperature",
    "dephase",
    "energy_basis",
]
