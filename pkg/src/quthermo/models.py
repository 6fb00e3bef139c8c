"""Spin-model builders with an explicit local/interaction split.

All Hamiltonians are returned as a PartitionedHamiltonian: the total
matrix together with the embedded single-site terms and the interaction
term, so that downstream code can form effective local Hamiltonians.
Pauli convention: Z = diag(1, -1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvariantViolation, ResourceError, UsageError
from .linalg import HermitianOperator, SubsystemLayout, embed, kron_all, max_abs

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

DIMENSION_CAP = 2**12


def _finite(**params: float) -> None:
    for name, value in params.items():
        if not math.isfinite(value):
            raise UsageError(f"parameter {name} must be finite, got {value}")


@dataclass(frozen=True)
class TwoQubitXYZParams:
    """Fields and exchange couplings of the two-qubit model."""

    b1: float = 0.0
    b2: float = 0.0
    jx: float = 0.0
    jy: float = 0.0
    jz: float = 0.0

    def __post_init__(self):
        _finite(b1=self.b1, b2=self.b2, jx=self.jx, jy=self.jy, jz=self.jz)


@dataclass(frozen=True)
class ChainParams:
    """Open nearest-neighbour qubit chain: uniform field b, exchange j, zz anisotropy alpha."""

    n: int
    b: float = 0.0
    j: float = 0.0
    alpha: float = 1.0

    def __post_init__(self):
        if self.n < 2:
            raise UsageError(f"chain needs at least 2 sites, got {self.n}")
        if 2**self.n > DIMENSION_CAP:
            raise ResourceError(f"2^{self.n} exceeds the dimension cap {DIMENSION_CAP}")
        _finite(b=self.b, j=self.j, alpha=self.alpha)


@dataclass(frozen=True)
class PartitionedHamiltonian:
    """total = sum(local_terms) + interaction; each local term is embedded full-size."""

    total: HermitianOperator
    local_terms: tuple[HermitianOperator, ...]
    interaction: HermitianOperator

    def __post_init__(self):
        acc = sum(t.matrix for t in self.local_terms) + self.interaction.matrix
        dev = max_abs(self.total.matrix - acc)
        if dev > 1e-12 * max(1.0, max_abs(self.total.matrix)):
            raise InvariantViolation(f"local + interaction differs from total by {dev:.3e}")

    @property
    def layout(self) -> SubsystemLayout:
        return self.total.layout

    @property
    def dim(self) -> int:
        return self.total.dim

    def spectral_norm(self) -> float:
        return float(np.linalg.norm(self.total.matrix, 2))


def _partitioned(locals_: list[np.ndarray], inter: np.ndarray, layout: SubsystemLayout) -> PartitionedHamiltonian:
    total = sum(locals_) + inter
    return PartitionedHamiltonian(
        HermitianOperator(total, layout),
        tuple(HermitianOperator(m, layout) for m in locals_),
        HermitianOperator(inter, layout),
    )


def build_two_qubit(params: TwoQubitXYZParams) -> PartitionedHamiltonian:
    """H = (1/2)(b1 Z1 + b2 Z2 + jx XX + jy YY + jz ZZ).

    The thermal state of this Hamiltonian is an X state: nonzero entries
    only on the diagonal and anti-diagonal.
    """
    layout = SubsystemLayout((2, 2))
    h1 = 0.5 * params.b1 * kron_all(PAULI_Z, PAULI_I)
    h2 = 0.5 * params.b2 * kron_all(PAULI_I, PAULI_Z)
    hint = 0.5 * (
        params.jx * kron_all(PAULI_X, PAULI_X)
        + params.jy * kron_all(PAULI_Y, PAULI_Y)
        + params.jz * kron_all(PAULI_Z, PAULI_Z)
    )
    return _partitioned([h1, h2], hint, layout)


def build_chain(params: ChainParams) -> PartitionedHamiltonian:
    """Open chain: (b/2) sum_k Z_k + (j/2) sum_k (X X + Y Y + alpha Z Z) on neighbours."""
    n = params.n
    dims = (2,) * n
    layout = SubsystemLayout(dims)
    locals_ = [0.5 * params.b * embed(PAULI_Z, dims, k) for k in range(n)]
    inter = np.zeros((2**n, 2**n), dtype=complex)
    for k in range(n - 1):
        for op, weight in ((PAULI_X, 1.0), (PAULI_Y, 1.0), (PAULI_Z, params.alpha)):
            inter += 0.5 * params.j * weight * (embed(op, dims, k) @ embed(op, dims, k + 1))
    return _partitioned(locals_, inter, layout)


def build_xy_anisotropy(j: float, lam: float, jz: float) -> PartitionedHamiltonian:
    """Field-free pair with split exchange: (1/2)((j+lam) XX + (j-lam) YY + jz ZZ)."""
    _finite(j=j, lam=lam, jz=jz)
    return build_two_qubit(TwoQubitXYZParams(0.0, 0.0, j + lam, j - lam, jz))
