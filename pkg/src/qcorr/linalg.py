"""Dense complex linear algebra used by every other module.

All operators here are small (at most 27 x 27), so everything is plain
dense numpy. Logarithms are base 2 throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    DegeneratePolarError,
    DimensionError,
    DomainError,
    PreconditionError,
    StateError,
)

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
EIGH_HERMITIAN_TOL = 1e-10
ZERO_EIGENVALUE = 1e-12
POLAR_RANK_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """A unit-trace positive semidefinite matrix on ``dims[0] x dims[1]``.

    The matrix is validated on construction; use :meth:`unchecked` to skip
    validation for intermediate objects built from already-valid states.
    """

    matrix: np.ndarray
    dims: tuple[int, int]

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        dims = tuple(int(k) for k in self.dims)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", dims)
        _check_dims(m, dims)
        check_density(m)
        m.setflags(write=False)

    @classmethod
    def unchecked(cls, matrix, dims) -> "DensityOperator":
        obj = object.__new__(cls)
        m = np.asarray(matrix, dtype=complex)
        dims = tuple(int(k) for k in dims)
        _check_dims(m, dims)
        m.setflags(write=False)
        object.__setattr__(obj, "matrix", m)
        object.__setattr__(obj, "dims", dims)
        return obj

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def eigenvalues(self) -> np.ndarray:
        return eigh(self.matrix)[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)


@dataclass(frozen=True, eq=False)
class PureStateVector:
    """Unit vector on a tensor product of subsystems with dimensions ``dims``."""

    amplitudes: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        v = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        dims = tuple(int(k) for k in self.dims)
        if int(np.prod(dims)) != v.size:
            raise DimensionError(f"dims {dims} do not match vector length {v.size}")
        if abs(np.linalg.norm(v) - 1.0) > 1e-12:
            raise StateError(f"vector norm {np.linalg.norm(v)!r} is not 1")
        v.setflags(write=False)
        object.__setattr__(self, "amplitudes", v)
        object.__setattr__(self, "dims", dims)

    def reduced(self, keep: Sequence[int]) -> DensityOperator:
        """Reduced state on the subsystems in ``keep`` (exactly two of them)."""
        keep = tuple(keep)
        if len(keep) != 2 or len(set(keep)) != 2:
            raise DimensionError("reduced() returns a bipartite operator; keep two subsystems")
        n = len(self.dims)
        if any(k < 0 or k >= n for k in keep):
            raise DimensionError(f"subsystem index out of range for dims {self.dims}")
        traced = [k for k in range(n) if k not in keep]
        t = self.amplitudes.reshape(self.dims)
        t = np.transpose(t, list(keep) + traced)
        da, db = self.dims[keep[0]], self.dims[keep[1]]
        t = t.reshape(da * db, -1)
        return DensityOperator.unchecked(t @ t.conj().T, (da, db))


def _check_dims(m: np.ndarray, dims: tuple[int, ...]) -> None:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    if len(dims) != 2 or min(dims) < 1 or dims[0] * dims[1] != m.shape[0]:
        raise DimensionError(f"dims {dims} inconsistent with matrix of size {m.shape[0]}")


def check_density(m: np.ndarray) -> None:
    """Raise :class:`StateError` unless ``m`` is a density matrix."""
    if not np.all(np.isfinite(m)):
        raise StateError("matrix has non-finite entries")
    herm = np.max(np.abs(m - m.conj().T)) if m.size else 0.0
    if herm > HERMITIAN_TOL:
        raise StateError(f"matrix is not Hermitian (deviation {herm:.3e})")
    tr = np.trace(m)
    if abs(tr - 1.0) > TRACE_TOL:
        raise StateError(f"trace {tr.real:.15g} differs from 1")
    lmin = np.linalg.eigvalsh(0.5 * (m + m.conj().T))[0]
    if lmin < -PSD_TOL:
        raise StateError(f"matrix has negative eigenvalue {lmin:.3e}")


def as_matrix(op) -> np.ndarray:
    if isinstance(op, DensityOperator):
        return op.matrix
    return np.asarray(op, dtype=complex)


def kron(a, b) -> np.ndarray:
    return np.kron(np.asarray(a), np.asarray(b))


def partial_trace(op: DensityOperator, keep: str = "first") -> DensityOperator:
    """Trace out one factor of a bipartite operator.

    ``keep="first"`` returns the reduced state of the first subsystem,
    ``keep="second"`` the one of the second.
    """
    dims = getattr(op, "dims", None)
    if dims is None:
        raise DimensionError("partial_trace needs an operator carrying bipartite dims")
    m = as_matrix(op)
    _check_dims(m, tuple(dims))
    da, db = dims
    t = m.reshape(da, db, da, db)
    if keep == "first":
        r = np.einsum("ajbj->ab", t)
        d = da
    elif keep == "second":
        r = np.einsum("jajb->ab", t)
        d = db
    else:
        raise ValueError(f"keep must be 'first' or 'second', not {keep!r}")
    return DensityOperator.unchecked(r, (d, 1))


def hermitian_part(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + m.conj().T)


def eigh(h) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    The input is symmetrized before decomposition.
    """
    m = as_matrix(h)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise PreconditionError(f"eigh needs a square matrix, got shape {m.shape}")
    dev = np.max(np.abs(m - m.conj().T)) if m.size else 0.0
    if dev > EIGH_HERMITIAN_TOL:
        raise PreconditionError(f"matrix is not Hermitian (deviation {dev:.3e})")
    return np.linalg.eigh(hermitian_part(m))


def unitary_from_hermitian(h) -> np.ndarray:
    """Return ``exp(i h)`` for Hermitian ``h``."""
    w, v = eigh(h)
    return (v * np.exp(1j * w)) @ v.conj().T


def haar_random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed ``n x n`` unitary (QR of a Ginibre matrix, phase-fixed)."""
    if n < 1:
        raise ValueError("n must be positive")
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r)
    return q * (diag / np.abs(diag))


def polar_unitary(m, allow_degenerate: bool = False) -> np.ndarray:
    """Unitary factor ``U`` of the polar decomposition ``m = U P``.

    ``U`` maximizes ``Re Tr(W^dagger m)`` over unitaries ``W``. Raises
    :class:`DegeneratePolarError` when ``m`` is numerically rank deficient,
    since ``U`` is then not unique; with ``allow_degenerate=True`` the SVD
    completion is returned instead, which is still a maximizer.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"polar_unitary needs a square matrix, got shape {m.shape}")
    w, s, vh = np.linalg.svd(m)
    if not allow_degenerate and (s[0] == 0.0 or s[-1] <= POLAR_RANK_TOL * s[0]):
        raise DegeneratePolarError(f"rank-deficient matrix (singular values {s[-1]:.3e}/{s[0]:.3e})")
    return w @ vh


def xlog2x(p: float) -> float:
    """``p * log2(p)`` with the continuous extension ``0 log 0 = 0``."""
    if not (-1e-12 <= p <= 1.0 + 1e-12):
        raise DomainError(f"xlog2x argument {p!r} outside [0, 1]")
    p = min(max(float(p), 0.0), 1.0)
    if p == 0.0:
        return 0.0
    return p * np.log2(p)
