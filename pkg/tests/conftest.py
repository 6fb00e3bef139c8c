import numpy as np
import pytest

from quthermo import (
    HermitianOperator,
    PartitionedHamiltonian,
    SubsystemLayout,
    TwoQubitXYZParams,
    build_two_qubit,
)

FIG2A_PARAMS = TwoQubitXYZParams(b1=3.0, b2=1.0, jx=1.0, jy=1.0, jz=2.0)
FIG2B_PARAMS = TwoQubitXYZParams(b1=0.0, b2=0.0, jx=1.0, jy=0.0, jz=2.0)


def random_hermitian(d: int, rng: np.random.Generator) -> np.ndarray:
    m = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return 0.5 * (m + m.conj().T)


def wrap_hamiltonian(matrix: np.ndarray, dims=None) -> PartitionedHamiltonian:
    """Package a raw Hermitian as a partitioned Hamiltonian (all-interaction split)."""
    layout = SubsystemLayout(dims if dims is not None else (matrix.shape[0],))
    op = HermitianOperator(matrix, layout)
    zero = HermitianOperator(np.zeros_like(matrix), layout)
    return PartitionedHamiltonian(op, (zero,) * layout.nsub, op)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def fig2a_model():
    return build_two_qubit(FIG2A_PARAMS)


@pytest.fixture
def fig2b_model():
    return build_two_qubit(FIG2B_PARAMS)
