"""Dense Hermitian linear algebra for small quantum systems.

Operators and states are thin immutable wrappers around complex numpy
arrays. Eigendecompositions use a self-contained cyclic Jacobi iteration,
which is robust for the small dimensions (d <= 16) this package targets.
Energies are carried in Hz with h = 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Union

import numpy as np

HERMITIAN_ATOL = 1e-12
TRACE_ATOL = 1e-10
PSD_FLOOR = -1e-10
UNITARY_ATOL = 1e-10

# eigenvalues with |x| <= ZERO_BAND count as exact zeros for log/sqrt
ZERO_BAND = 1e-12
LOG_CLAMP = 1e-15

JACOBI_OFF_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100


class NotHermitianError(ValueError):
    pass


class InvalidStateError(ValueError):
    pass


def _as_square(matrix) -> np.ndarray:
    m = np.array(matrix, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise ValueError(f"expected a non-empty square matrix, got shape {m.shape}")
    return m


def _readonly(m: np.ndarray) -> np.ndarray:
    m.setflags(write=False)
    return m


def max_asymmetry(m: np.ndarray) -> float:
    return float(np.max(np.abs(m - m.conj().T)))


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    """A d x d complex Hermitian matrix (Hamiltonian or observable), in Hz."""

    matrix: np.ndarray

    def __post_init__(self):
        m = _as_square(self.matrix)
        asym = max_asymmetry(m)
        if asym > HERMITIAN_ATOL:
            raise NotHermitianError(
                f"matrix is not Hermitian: max |A - A^H| entry is {asym:.3e} "
                f"(tolerance {HERMITIAN_ATOL:g})"
            )
        object.__setattr__(self, "matrix", _readonly(0.5 * (m + m.conj().T)))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @cached_property
    def spectrum(self) -> "SpectralDecomposition":
        return spectral_decompose(self)

    def __add__(self, other):
        return HermitianOperator(self.matrix + as_matrix(other))

    def __sub__(self, other):
        return HermitianOperator(self.matrix - as_matrix(other))

    def __mul__(self, scalar):
        if np.iscomplexobj(scalar) and np.imag(scalar) != 0:
            raise TypeError("Hermitian operators only scale by real numbers")
        return HermitianOperator(float(np.real(scalar)) * self.matrix)

    __rmul__ = __mul__

    def __neg__(self):
        return HermitianOperator(-self.matrix)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A Hermitian, positive semidefinite, unit-trace state."""

    matrix: np.ndarray

    def __post_init__(self):
        m = _as_square(self.matrix)
        asym = max_asymmetry(m)
        if asym > HERMITIAN_ATOL:
            raise InvalidStateError(
                f"density matrix is not Hermitian: max asymmetry {asym:.3e}"
            )
        m = 0.5 * (m + m.conj().T)
        tr = np.trace(m).real
        if abs(tr - 1.0) > TRACE_ATOL:
            raise InvalidStateError(f"density matrix trace is {tr!r}, expected 1")
        object.__setattr__(self, "matrix", _readonly(m))
        lowest = self.spectrum.eigenvalues[0]
        if lowest < PSD_FLOOR:
            raise InvalidStateError(
                f"density matrix has negative eigenvalue {lowest:.3e}"
            )

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @cached_property
    def spectrum(self) -> "SpectralDecomposition":
        return spectral_decompose(self.matrix)

    @property
    def populations(self) -> np.ndarray:
        """Diagonal of the matrix in the computational basis."""
        return self.matrix.diagonal().real.copy()

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    @classmethod
    def pure(cls, psi) -> "DensityMatrix":
        psi = np.asarray(psi, dtype=np.complex128).ravel()
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, psi.conj()))

    @classmethod
    def maximally_mixed(cls, dim: int) -> "DensityMatrix":
        return cls(np.eye(dim, dtype=np.complex128) / dim)


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Ascending real eigenvalues and the unitary of column eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self):
        vals = np.array(self.eigenvalues, dtype=np.float64)
        vecs = np.array(self.eigenvectors, dtype=np.complex128)
        if vecs.shape != (vals.size, vals.size):
            raise ValueError("eigenvector matrix does not match eigenvalue count")
        object.__setattr__(self, "eigenvalues", _readonly(vals))
        object.__setattr__(self, "eigenvectors", _readonly(vecs))

    @property
    def dim(self) -> int:
        return self.eigenvalues.size

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T

    def projectors(self) -> list[np.ndarray]:
        v = self.eigenvectors
        return [np.outer(v[:, k], v[:, k].conj()) for k in range(self.dim)]


@dataclass(frozen=True, eq=False)
class UnitaryOperator:
    """A d x d unitary. ``slices`` records the time-slice count that produced it."""

    matrix: np.ndarray
    slices: int | None = None

    def __post_init__(self):
        m = _as_square(self.matrix)
        dev = unitarity_error(m)
        if dev > UNITARY_ATOL:
            raise ValueError(f"matrix is not unitary: max |U^H U - I| entry is {dev:.3e}")
        object.__setattr__(self, "matrix", _readonly(m))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def dagger(self) -> np.ndarray:
        return self.matrix.conj().T

    @classmethod
    def identity(cls, dim: int) -> "UnitaryOperator":
        return cls(np.eye(dim, dtype=np.complex128))


Operand = Union[HermitianOperator, DensityMatrix, UnitaryOperator, np.ndarray]


def as_matrix(obj: Operand) -> np.ndarray:
    if isinstance(obj, (HermitianOperator, DensityMatrix, UnitaryOperator)):
        return obj.matrix
    return np.asarray(obj, dtype=np.complex128)


def as_hermitian(obj) -> HermitianOperator:
    if isinstance(obj, HermitianOperator):
        return obj
    return HermitianOperator(as_matrix(obj))


def as_density(obj) -> DensityMatrix:
    if isinstance(obj, DensityMatrix):
        return obj
    return DensityMatrix(as_matrix(obj))


def unitarity_error(u: np.ndarray) -> float:
    return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))


def _jacobi_eigh(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi diagonalization of a Hermitian matrix.

    Each (p, q) rotation first removes the phase of ``a[p, q]`` and then
    applies the real symmetric Jacobi rotation that annihilates it. The
    input is scaled to unit Frobenius norm so the stopping rule on the
    off-diagonal mass is scale free.
    """
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    scale = np.linalg.norm(a)
    if n == 1 or scale == 0.0:
        return np.real(np.diag(a)).copy(), v
    a = a / scale
    off_mask = ~np.eye(n, dtype=bool)

    for _ in range(JACOBI_MAX_SWEEPS):
        off = np.linalg.norm(a[off_mask])
        if off < JACOBI_OFF_TOL:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                g = abs(apq)
                if g < 1e-300:
                    continue
                phase = apq / g
                app = a[p, p].real
                aqq = a[q, q].real
                theta = (aqq - app) / (2.0 * g)
                t = np.copysign(1.0, theta) / (abs(theta) + np.hypot(1.0, theta))
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                # J = diag-phase on q followed by the real rotation in (p, q)
                j = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ j
                a[idx, :] = j.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                v[:, idx] = v[:, idx] @ j
    else:
        raise RuntimeError("Jacobi iteration did not converge")

    vals = np.real(np.diag(a)) * scale
    order = np.argsort(vals, kind="stable")
    return vals[order], v[:, order]


def spectral_decompose(op) -> SpectralDecomposition:
    """Eigendecomposition of a Hermitian operator.

    Parameters
    ----------
    op : HermitianOperator, DensityMatrix or array_like
        Hermitian input. Raw arrays are checked against the 1e-12
        Hermiticity tolerance.

    Returns
    -------
    SpectralDecomposition
        Ascending eigenvalues with matching column eigenvectors.
    """
    m = as_matrix(op)
    if not isinstance(op, (HermitianOperator, DensityMatrix)):
        m = as_hermitian(m).matrix
    vals, vecs = _jacobi_eigh(np.array(m, dtype=np.complex128))
    return SpectralDecomposition(vals, vecs)


def _spectrum_of(op) -> SpectralDecomposition:
    if isinstance(op, (HermitianOperator, DensityMatrix)):
        return op.spectrum
    if isinstance(op, SpectralDecomposition):
        return op
    return spectral_decompose(op)


def spectral_map(op, values: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Return ``V diag(values(eigenvalues)) V^H`` as a plain (possibly complex) array."""
    sd = _spectrum_of(op)
    mapped = np.asarray(values(sd.eigenvalues))
    v = sd.eigenvectors
    return (v * mapped) @ v.conj().T


def matrix_function(op, f: Callable[[np.ndarray], np.ndarray]) -> HermitianOperator:
    """Apply a real function to a Hermitian operator through its spectrum.

    ``f`` receives the eigenvalue array and must return real, finite values.
    """
    sd = _spectrum_of(op)
    with np.errstate(all="ignore"):
        mapped = np.asarray(f(sd.eigenvalues.copy()), dtype=np.complex128)
    if not np.all(np.isfinite(mapped)):
        bad = sd.eigenvalues[~np.isfinite(mapped)]
        raise ValueError(f"function undefined at eigenvalue(s) {bad}")
    if np.any(np.abs(mapped.imag) > 0):
        raise ValueError("matrix_function requires a real-valued function")
    v = sd.eigenvectors
    return HermitianOperator((v * mapped.real) @ v.conj().T)


def clamp_nonnegative(eigenvalues: np.ndarray, floor: float = 0.0) -> np.ndarray:
    """Map near-zero eigenvalues to ``floor``; reject genuinely negative ones."""
    vals = np.array(eigenvalues, dtype=np.float64)
    if np.any(vals < PSD_FLOOR):
        raise InvalidStateError(f"negative eigenvalue {vals.min():.3e} below {PSD_FLOOR:g}")
    vals[vals <= ZERO_BAND] = floor
    return vals


def matrix_log(op) -> HermitianOperator:
    return matrix_function(op, lambda x: np.log(clamp_nonnegative(x, LOG_CLAMP)))


def matrix_sqrt(op) -> HermitianOperator:
    return matrix_function(op, lambda x: np.sqrt(clamp_nonnegative(x)))


def matrix_exp(op) -> HermitianOperator:
    return matrix_function(op, np.exp)


_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}


def pauli(which: str) -> HermitianOperator:
    """Standard 2 x 2 Pauli matrix, ``which`` in {'x', 'y', 'z'}."""
    try:
        return HermitianOperator(_PAULI[which.lower()].copy())
    except KeyError:
        raise ValueError(f"unknown Pauli matrix {which!r}") from None


def commutator_norm(a, b) -> float:
    a, b = as_matrix(a), as_matrix(b)
    return float(np.linalg.norm(a @ b - b @ a))
