"""Dense Hermitian linear algebra for small multipartite systems.

Everything here works on explicit complex matrices (dimensions of a few
to a few dozen), with subsystem structure carried by a tuple of local
dimensions.  Entropies are in nats; hbar = k_B = 1 throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import DomainError, InvariantViolation, UsageError

HERM_TOL = 1e-12
TRACE_TOL = 1e-10
EIG_FLOOR = -1e-10

_LETTERS = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"


def hermitize(mat: np.ndarray) -> np.ndarray:
    """Return the Hermitian part (M + M^dag)/2."""
    return 0.5 * (mat + mat.conj().T)


def max_abs(mat: np.ndarray) -> float:
    return float(np.max(np.abs(mat))) if mat.size else 0.0


def _check_hermitian(mat: np.ndarray, what: str = "matrix") -> None:
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise InvariantViolation(f"{what} must be square, got shape {mat.shape}")
    dev = max_abs(mat - mat.conj().T)
    if dev > HERM_TOL * max(1.0, max_abs(mat)):
        raise InvariantViolation(f"{what} is not Hermitian (deviation {dev:.3e})")


@dataclass(frozen=True)
class SubsystemLayout:
    """Ordered local dimensions of a multipartite system."""

    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        if not dims or any(d < 2 for d in dims):
            raise InvariantViolation(f"every local dimension must be >= 2, got {dims}")

    @property
    def total(self) -> int:
        return int(np.prod(self.dims))

    @property
    def nsub(self) -> int:
        return len(self.dims)

    def complement(self, keep: Iterable[int]) -> tuple[int, ...]:
        kept = set(keep)
        return tuple(i for i in range(self.nsub) if i not in kept)

    def sub(self, keep: Iterable[int]) -> "SubsystemLayout":
        return SubsystemLayout(tuple(self.dims[i] for i in sorted(keep)))


def _check_layout(mat: np.ndarray, layout: SubsystemLayout) -> None:
    if mat.shape[0] != layout.total:
        raise InvariantViolation(
            f"matrix dimension {mat.shape[0]} does not match layout {layout.dims}"
        )


@dataclass(frozen=True)
class HermitianOperator:
    """A Hermitian matrix with a declared subsystem layout (energy units)."""

    matrix: np.ndarray
    layout: SubsystemLayout

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        object.__setattr__(self, "matrix", mat)
        _check_hermitian(mat, "operator")
        _check_layout(mat, self.layout)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class DensityMatrix:
    """Unit-trace positive-semidefinite matrix with a subsystem layout."""

    matrix: np.ndarray
    layout: SubsystemLayout

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        object.__setattr__(self, "matrix", mat)
        _check_hermitian(mat, "state")
        _check_layout(mat, self.layout)
        tr = float(mat.trace().real)
        if abs(tr - 1.0) > TRACE_TOL:
            raise InvariantViolation(f"state trace {tr} deviates from 1 beyond {TRACE_TOL}")
        wmin = float(np.linalg.eigvalsh(mat)[0])
        if wmin < EIG_FLOOR:
            raise InvariantViolation(f"state has eigenvalue {wmin:.3e} below {EIG_FLOOR}")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class EigenDecomposition:
    """Ascending eigenvalues and the matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _as_matrix(x) -> np.ndarray:
    return x.matrix if hasattr(x, "matrix") else np.asarray(x, dtype=complex)


def eigh(op: HermitianOperator | np.ndarray) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian operator, eigenvalues ascending.

    Raises InvariantViolation for non-Hermitian input or if the
    reconstruction / orthonormality residuals exceed 1e-10.
    """
    mat = _as_matrix(op)
    _check_hermitian(mat)
    w, v = np.linalg.eigh(mat)
    scale = max(1.0, max_abs(mat))
    if max_abs((v * w) @ v.conj().T - mat) > 1e-10 * scale:
        raise InvariantViolation("eigendecomposition reconstruction residual too large")
    if max_abs(v.conj().T @ v - np.eye(mat.shape[0])) > 1e-10:
        raise InvariantViolation("eigenvectors are not orthonormal")
    return EigenDecomposition(w, v)


def matrix_function(op: HermitianOperator, f: Callable[[np.ndarray], np.ndarray]) -> HermitianOperator:
    """Apply a real scalar function to a Hermitian operator via spectral calculus."""
    dec = eigh(op)
    with np.errstate(all="ignore"):
        fw = np.asarray(f(dec.eigenvalues), dtype=float)
    if not np.all(np.isfinite(fw)):
        bad = dec.eigenvalues[~np.isfinite(fw)]
        raise DomainError(f"function undefined on eigenvalues {bad}")
    mat = hermitize((dec.eigenvectors * fw) @ dec.eigenvectors.conj().T)
    return HermitianOperator(mat, op.layout)


def tensor_product(a: HermitianOperator, b: HermitianOperator) -> HermitianOperator:
    """Kronecker product with concatenated subsystem layout."""
    return HermitianOperator(
        np.kron(a.matrix, b.matrix), SubsystemLayout(a.layout.dims + b.layout.dims)
    )


def kron_all(*mats: np.ndarray) -> np.ndarray:
    """Kronecker product of a sequence of matrices (left to right)."""
    out = np.array([[1.0 + 0j]])
    for m in mats:
        out = np.kron(out, m)
    return out


def ptrace(mat: np.ndarray, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Partial trace of a raw matrix, keeping the listed subsystems (sorted order)."""
    n = len(dims)
    keep = sorted(keep)
    if not keep or any(k < 0 or k >= n for k in keep):
        raise UsageError(f"keep set {keep} invalid for {n} subsystems")
    if len(keep) == n:
        return mat
    row = [_LETTERS[i] for i in range(n)]
    col = [_LETTERS[i] if i not in keep else _LETTERS[n + i] for i in range(n)]
    out = [_LETTERS[i] for i in keep] + [_LETTERS[n + i] for i in keep]
    expr = "".join(row + col) + "->" + "".join(out)
    dk = int(np.prod([dims[i] for i in keep]))
    return np.einsum(expr, mat.reshape(list(dims) + list(dims))).reshape(dk, dk)


def partial_trace(rho: DensityMatrix, keep: Sequence[int]) -> DensityMatrix:
    """Reduced state on the kept subsystems (trace preserved)."""
    red = hermitize(ptrace(rho.matrix, rho.layout.dims, keep))
    return DensityMatrix(red, rho.layout.sub(keep))


def embed(mat: np.ndarray, dims: Sequence[int], subsystem: int) -> np.ndarray:
    """Embed a local operator at one subsystem slot, identity elsewhere."""
    mats = [np.eye(d, dtype=complex) for d in dims]
    mats[subsystem] = mat
    return kron_all(*mats)


def clamped_eigvalsh(mat: np.ndarray) -> np.ndarray:
    """Eigenvalues of a (numerically) PSD matrix, clamped to [0, inf).

    Values in [-1e-10, 0) are finite-precision drift and are clamped;
    anything more negative raises.
    """
    w = np.linalg.eigvalsh(mat).real
    if w[0] < EIG_FLOOR:
        raise InvariantViolation(f"eigenvalue {w[0]:.3e} below clamp window {EIG_FLOOR}")
    return np.clip(w, 0.0, None)


def entropy_of_probs(p: np.ndarray) -> float:
    """Shannon entropy in nats with the 0 ln 0 = 0 convention."""
    p = np.asarray(p, dtype=float)
    p = p[p > 0.0]
    return float(-(p * np.log(p)).sum())


def von_neumann_entropy(rho: DensityMatrix | np.ndarray) -> float:
    """Von Neumann entropy -Tr[rho ln rho] in nats, spectral with 0 ln 0 = 0."""
    return entropy_of_probs(clamped_eigvalsh(_as_matrix(rho)))


def sqrtm_psd(mat: np.ndarray) -> np.ndarray:
    """Principal square root of a PSD Hermitian matrix."""
    w, v = np.linalg.eigh(mat)
    w = np.clip(w.real, 0.0, None)
    return hermitize((v * np.sqrt(w)) @ v.conj().T)


def fidelity(rho: DensityMatrix | np.ndarray, sigma: DensityMatrix | np.ndarray) -> float:
    """Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2, in [0, 1]."""
    a, b = _as_matrix(rho), _as_matrix(sigma)
    if a.shape != b.shape:
        raise UsageError(f"dimension mismatch {a.shape} vs {b.shape}")
    sq = sqrtm_psd(a)
    mu = np.clip(np.linalg.eigvalsh(hermitize(sq @ b @ sq)).real, 0.0, None)
    return float(min(np.sqrt(mu).sum() ** 2, 1.0))


def trace_distance(rho: DensityMatrix | np.ndarray, sigma: DensityMatrix | np.ndarray) -> float:
    """Trace distance (1/2)||rho - sigma||_1."""
    w = np.linalg.eigvalsh(hermitize(_as_matrix(rho) - _as_matrix(sigma)))
    return float(0.5 * np.abs(w).sum())
