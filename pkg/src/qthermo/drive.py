"""Driven two-level Hamiltonian and its time-ordered propagator.

The drive rotates the field direction from x to y while the gap ramps
linearly from ``nu_i`` to ``nu_f``:

    H(t) = -(nu(t) / 2) [cos(pi t / 2 tau) sigma_x + sin(pi t / 2 tau) sigma_y]
    nu(t) = nu_i (1 - t / tau) + nu_f t / tau

Frequencies are in Hz and times in seconds, so a slice of length ``dt``
evolves by ``exp(-2 pi i H dt)``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .linalg import (
    DensityMatrix,
    HermitianOperator,
    UnitaryOperator,
    as_density,
    as_hermitian,
    pauli,
    spectral_map,
)

log = logging.getLogger(__name__)

DEFAULT_SLICES = 256
DEFAULT_TOLERANCE = 1e-9
MAX_DOUBLINGS = 20

# slices multiplied per vectorized block; bounds memory for fine grids
_CHUNK = 1 << 15

_SX = pauli("x").matrix
_SY = pauli("y").matrix
_SZ = pauli("z").matrix
_I2 = np.eye(2, dtype=np.complex128)


class ConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class DriveProtocol:
    """Linear gap ramp ``nu_i -> nu_f`` (Hz) over ``tau`` seconds."""

    nu_i: float
    nu_f: float
    tau: float
    slices: int = DEFAULT_SLICES

    def __post_init__(self):
        for name in ("nu_i", "nu_f", "tau"):
            val = getattr(self, name)
            if not (val > 0 and math.isfinite(val)):
                raise ValueError(f"{name} must be positive and finite, got {val!r}")
        if int(self.slices) != self.slices or self.slices < 1:
            raise ValueError(f"slices must be a positive integer, got {self.slices!r}")

    def gap(self, t):
        s = np.asarray(t, dtype=np.float64) / self.tau
        return self.nu_i * (1.0 - s) + self.nu_f * s

    def angle(self, t):
        return np.pi * np.asarray(t, dtype=np.float64) / (2.0 * self.tau)

    def initial_hamiltonian(self) -> HermitianOperator:
        return drive_hamiltonian(0.0, self)

    def final_hamiltonian(self) -> HermitianOperator:
        return drive_hamiltonian(self.tau, self)


def _field(t, p: DriveProtocol) -> tuple[np.ndarray, np.ndarray]:
    """Pauli x and y coefficients of H(t)."""
    nu = p.gap(t)
    phi = p.angle(t)
    return -0.5 * nu * np.cos(phi), -0.5 * nu * np.sin(phi)


def drive_hamiltonian(t: float, p: DriveProtocol) -> HermitianOperator:
    """The driving Hamiltonian at time ``t`` in [0, tau]; eigenvalues are +-nu(t)/2."""
    if not 0.0 <= t <= p.tau:
        raise ValueError(f"t = {t!r} lies outside the drive window [0, {p.tau!r}]")
    hx, hy = _field(t, p)
    return HermitianOperator(hx * _SX + hy * _SY)


def pauli_coefficients(H) -> np.ndarray:
    """Coefficients (a0, ax, ay, az) with H = a0 I + a . sigma for a 2 x 2 H."""
    m = as_hermitian(H).matrix
    if m.shape != (2, 2):
        raise ValueError("Pauli decomposition needs a 2 x 2 operator")
    return np.real(
        [np.trace(m) / 2, np.trace(_SX @ m) / 2, np.trace(_SY @ m) / 2, np.trace(_SZ @ m) / 2]
    )


def _su2_exp(a0, ax, ay, az, dt) -> np.ndarray:
    """Vectorized exp(-2 pi i (a0 I + a . sigma) dt) for arrays of coefficients."""
    ax, ay, az = (np.asarray(c, dtype=np.float64) for c in (ax, ay, az))
    norm = np.sqrt(ax**2 + ay**2 + az**2)
    theta = 2.0 * np.pi * norm * dt
    # sin(theta)/|a| written to stay finite as |a| -> 0
    sinc = np.where(norm > 0, np.sin(theta) / np.where(norm > 0, norm, 1.0), 2.0 * np.pi * dt)
    c = np.cos(theta)
    out = np.empty(np.shape(ax) + (2, 2), dtype=np.complex128)
    out[..., 0, 0] = c - 1j * sinc * az
    out[..., 1, 1] = c + 1j * sinc * az
    out[..., 0, 1] = -1j * sinc * (ax - 1j * ay)
    out[..., 1, 0] = -1j * sinc * (ax + 1j * ay)
    if np.any(a0 != 0):
        out *= np.exp(-2j * np.pi * np.asarray(a0) * dt)[..., None, None]
    return out


def slice_exponential(H, dt: float, method: str = "auto") -> np.ndarray:
    """``exp(-2 pi i H dt)`` for a Hermitian ``H`` in Hz.

    ``method`` is ``"closed"`` (axis-angle formula, 2 x 2 only),
    ``"spectral"`` (eigendecomposition, any dimension) or ``"auto"``.
    """
    H = as_hermitian(H)
    if method == "auto":
        method = "closed" if H.dim == 2 else "spectral"
    if method == "closed":
        a0, ax, ay, az = pauli_coefficients(H)
        return _su2_exp(a0, ax, ay, az, dt)
    if method == "spectral":
        return spectral_map(H, lambda e: np.exp(-2j * np.pi * e * dt))
    raise ValueError(f"unknown method {method!r}")


def _ordered_product(mats: np.ndarray) -> np.ndarray:
    """Product M[n-1] ... M[1] M[0] of a stack, by pairwise reduction."""
    while mats.shape[0] > 1:
        if mats.shape[0] % 2:
            tail = mats[-1:]
            mats = np.concatenate([mats[1:-1:2] @ mats[0:-1:2], tail])
        else:
            mats = mats[1::2] @ mats[0::2]
    return mats[0]


def nearest_unitary(u: np.ndarray) -> np.ndarray:
    """Polar factor ``U (U^H U)^(-1/2)``; strips roundoff drift from long products."""
    gram = u.conj().T @ u
    return u @ spectral_map(0.5 * (gram + gram.conj().T), lambda e: 1.0 / np.sqrt(e))


def time_ordered_product(p: DriveProtocol, n: int) -> np.ndarray:
    """Midpoint-rule propagator with ``n`` equal slices, latest slice leftmost."""
    dt = p.tau / n
    u = _I2.copy()
    for start in range(0, n, _CHUNK):
        k = np.arange(start, min(start + _CHUNK, n), dtype=np.float64)
        hx, hy = _field((k + 0.5) * dt, p)
        block = _su2_exp(0.0, hx, hy, 0.0, dt)
        u = _ordered_product(block) @ u
    return nearest_unitary(u)


def propagator(p: DriveProtocol, tolerance: float = DEFAULT_TOLERANCE) -> UnitaryOperator:
    """Time-ordered propagator over the full drive, refined until converged.

    The slice count starts at ``p.slices`` and doubles until two successive
    products differ by less than ``tolerance`` in max entry modulus. The
    finer of the final pair is returned; its ``slices`` attribute is the
    count ``N`` such that the products at ``N / 2`` and ``N`` agree.

    Raises
    ------
    ConvergenceError
        If ``MAX_DOUBLINGS`` refinements do not reach ``tolerance``.
    """
    if not tolerance > 0:
        raise ValueError(f"tolerance must be positive, got {tolerance!r}")
    n = int(p.slices)
    prev = time_ordered_product(p, n)
    delta = math.inf
    for _ in range(MAX_DOUBLINGS):
        n *= 2
        cur = time_ordered_product(p, n)
        delta = float(np.max(np.abs(cur - prev)))
        if delta < tolerance:
            log.debug("propagator converged: %s with %d slices (delta %.2e)", p, n, delta)
            return UnitaryOperator(cur, slices=n)
        prev = cur
    raise ConvergenceError(
        f"propagator did not converge after {MAX_DOUBLINGS} doublings "
        f"({n} slices); last delta {delta:.3e} > tolerance {tolerance:g}"
    )


def evolve(rho, U) -> DensityMatrix:
    """Unitary evolution ``U rho U^H``."""
    rho = as_density(rho)
    u = U.matrix if isinstance(U, UnitaryOperator) else np.asarray(U, dtype=np.complex128)
    if u.shape != rho.matrix.shape:
        raise ValueError(f"dimension mismatch: U is {u.shape}, rho is {rho.matrix.shape}")
    return DensityMatrix(u @ rho.matrix @ u.conj().T)
