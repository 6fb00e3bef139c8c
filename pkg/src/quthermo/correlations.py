"""Entropic correlation measures: mutual information, classical correlation,
quantum discord, diagonal discord, and their temperature rates.

Measurement-optimized quantities (classical correlation, discord) support a
measured qubit only: the projective measurement is parametrized by Bloch
angles and minimized by a coarse grid plus simplex refinement.  Diagonal
discord fixes the measurement to the eigenbasis of the measured subsystem's
reduced state, minimizing over intra-block rotations when eigenvalues tie.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .derivatives import REL_STEP, scaled_rate
from .errors import InvariantViolation, UsageError
from .linalg import DensityMatrix, hermitize, ptrace, von_neumann_entropy
from .measurements import (
    PROB_FLOOR,
    ProjectorSet,
    RotationSearch,
    conditional_project,
    dephase,
    fix_phases,
    optimize_pair_rotation,
    resolve_ambiguous_blocks,
    tie_blocks,
)
from .models import PartitionedHamiltonian
from .thermometry import GibbsEnsemble, GibbsFamily, _validate_path

GRID_DEFAULT = (64, 64)


def _split(rho: DensityMatrix, part_a) -> tuple[list[int], list[int]]:
    n = rho.layout.nsub
    part_a = [part_a] if isinstance(part_a, int) else sorted(int(i) for i in part_a)
    if not part_a or any(i < 0 or i >= n for i in part_a) or len(set(part_a)) != len(part_a):
        raise UsageError(f"invalid bipartition {part_a} for {n} subsystems")
    part_b = [i for i in range(n) if i not in part_a]
    if not part_b:
        raise UsageError("bipartition must leave a nonempty complement")
    return part_a, part_b


def mutual_information(rho: DensityMatrix, part_a=0) -> float:
    """I = S_A + S_B - S_AB across the given bipartition."""
    part_a, part_b = _split(rho, part_a)
    dims = rho.layout.dims
    s_a = von_neumann_entropy(ptrace(rho.matrix, dims, part_a))
    s_b = von_neumann_entropy(ptrace(rho.matrix, dims, part_b))
    return s_a + s_b - von_neumann_entropy(rho.matrix)


def conditional_entropy_after_measurement(rho: DensityMatrix, projs: ProjectorSet) -> float:
    """sum_j p_j S(rho_B | outcome j) for a complete projective set on one subsystem."""
    dims = rho.layout.dims
    pos = projs.subsystem
    if not 0 <= pos < len(dims) or projs.dim != dims[pos]:
        raise UsageError("projector set does not match the state layout")
    total = 0.0
    for k in range(projs.dim):
        p, m = conditional_project(rho.matrix, dims, pos, projs.vector(k))
        if p > PROB_FLOOR:
            total += p * von_neumann_entropy(hermitize(m) / p)
    return total


@dataclass(frozen=True)
class DiscordReport:
    """All bipartite correlation measures for one state and measured subsystem."""

    mutual_information: float
    classical_correlation: float
    quantum_discord: float
    diagonal_discord: float
    search: RotationSearch

    def __post_init__(self):
        if self.quantum_discord > self.diagonal_discord + 1e-8:
            raise InvariantViolation(
                f"quantum discord {self.quantum_discord} exceeds diagonal discord "
                f"{self.diagonal_discord}"
            )


def _optimized_conditional_entropy(
    mat: np.ndarray, dims, pos: int, grid=GRID_DEFAULT
) -> tuple[float, RotationSearch]:
    if dims[pos] != 2:
        raise UsageError("measurement optimization supports a measured qubit only")
    e0 = np.array([1.0, 0.0], dtype=complex)
    e1 = np.array([0.0, 1.0], dtype=complex)
    _, search = optimize_pair_rotation(
        mat, dims, pos, e0, e1, include_outcome_entropy=False, grid=grid
    )
    return search.value, search


def classical_correlation(rho: DensityMatrix, measured: int = 0, grid=GRID_DEFAULT) -> float:
    """J = S_B - min over qubit projective measurements of sum_j p_j S(B|j)."""
    _, part_b = _split(rho, measured)
    s_b = von_neumann_entropy(ptrace(rho.matrix, rho.layout.dims, part_b))
    best, _ = _optimized_conditional_entropy(rho.matrix, rho.layout.dims, measured, grid)
    return s_b - best


def quantum_discord(rho: DensityMatrix, measured: int = 0, grid=GRID_DEFAULT) -> float:
    """D = I_AB - J_B|A with the measured subsystem a qubit."""
    return mutual_information(rho, measured) - classical_correlation(rho, measured, grid)


def _eigenbasis_with_inf(rho_sub: np.ndarray, joint: np.ndarray, dims, pos: int) -> np.ndarray:
    """Eigenbasis of the reduced state; ties minimize the dephasing entropy."""
    w, v = np.linalg.eigh(rho_sub)
    v = fix_phases(v)
    blocks = [b for b in tie_blocks(w) if b[1] - b[0] > 1]
    if blocks:
        v = resolve_ambiguous_blocks(v, blocks, joint, dims, pos, include_outcome_entropy=True)
    return v


def _diagonal_discord_raw(mat: np.ndarray, dims, pos: int) -> tuple[float, np.ndarray]:
    rho_sub = ptrace(mat, dims, [pos])
    basis = _eigenbasis_with_inf(rho_sub, mat, dims, pos)
    dephased = dephase(mat, dims, pos, basis)
    value = von_neumann_entropy(hermitize(dephased)) - von_neumann_entropy(mat)
    return value, basis


def diagonal_discord(rho: DensityMatrix, measured: int = 0) -> float:
    """S(pi_A(rho)) - S(rho) with pi_A the eigenbasis dephasing of the measured part.

    Eigenvalue ties of the reduced state (within 1e-10) are resolved by
    minimizing the dephased entropy over intra-block rotations; blocks of
    dimension > 2 keep the deterministic phase-fixed eigenbasis.
    """
    _split(rho, measured)
    value, _ = _diagonal_discord_raw(rho.matrix, rho.layout.dims, measured)
    return value


def discord_report(rho: DensityMatrix, measured: int = 0, grid=GRID_DEFAULT) -> DiscordReport:
    """Mutual information, classical correlation and both discords in one pass."""
    i_ab = mutual_information(rho, measured)
    _, part_b = _split(rho, measured)
    s_b = von_neumann_entropy(ptrace(rho.matrix, rho.layout.dims, part_b))
    best, search = _optimized_conditional_entropy(rho.matrix, rho.layout.dims, measured, grid)
    j = s_b - best
    dd, _ = _diagonal_discord_raw(rho.matrix, rho.layout.dims, measured)
    return DiscordReport(i_ab, j, i_ab - j, dd, search)


def multipartite_diagonal_discord(state, path=None) -> float:
    """Sequential diagonal discord along a measurement order.

    Sum over steps k = 1..N-1 of the outcome-averaged conditional diagonal
    discord of (subsystem sigma_k vs the rest), with each step conditioning
    on the eigenbasis-projector outcomes of all prior steps.  For N = 2 this
    reduces to the bipartite diagonal discord.
    """
    rho = state.state if isinstance(state, GibbsEnsemble) else state
    dims = rho.layout.dims
    path = _validate_path(path, len(dims))
    total = 0.0
    histories = [(1.0, rho.matrix, list(range(len(dims))))]
    for sub in path[:-1]:
        new_histories = []
        for weight, mat, remaining in histories:
            pos = remaining.index(sub)
            rdims = [dims[i] for i in remaining]
            value, basis = _diagonal_discord_raw(mat, rdims, pos)
            total += weight * value
            rest = [i for i in remaining if i != sub]
            for k in range(rdims[pos]):
                p, m = conditional_project(mat, rdims, pos, basis[:, k])
                if p > PROB_FLOOR:
                    new_histories.append((weight * p, hermitize(m) / p, rest))
        histories = new_histories
    return total


def total_correlation(rho: DensityMatrix) -> float:
    """sum_k S(rho_k) - S(rho): the order-free entropy-sum form.

    Coincides with the sequential diagonal discord when the optimal
    measurement at every step is outcome-independent; in general the two
    differ and both are exposed.
    """
    dims = rho.layout.dims
    total = -von_neumann_entropy(rho.matrix)
    for k in range(len(dims)):
        total += von_neumann_entropy(ptrace(rho.matrix, dims, [k]))
    return total


def _model_discord(model: PartitionedHamiltonian, path):
    fam = GibbsFamily(model)
    dims = model.layout.dims
    path = _validate_path(path, len(dims))
    layout = model.layout

    def at(t: float) -> float:
        rho = DensityMatrix(fam(t), layout)
        if len(dims) == 2:
            return diagonal_discord(rho, path[0])
        return multipartite_diagonal_discord(rho, path)

    return at


def diagonal_discord_rate(
    model: PartitionedHamiltonian, t: float, path=None, rel_step: float = REL_STEP
) -> float:
    """-(1/T) d/dT of the (sequential) diagonal discord of the thermal state."""
    return scaled_rate(_model_discord(model, path), t, rel_step)


def mutual_information_rate(
    model: PartitionedHamiltonian, t: float, part_a=0, rel_step: float = REL_STEP
) -> float:
    """-(1/T) d/dT of the thermal mutual information."""
    fam = GibbsFamily(model)
    layout = model.layout
    return scaled_rate(
        lambda s: mutual_information(DensityMatrix(fam(s), layout), part_a), t, rel_step
    )


def classical_correlation_rate(
    model: PartitionedHamiltonian, t: float, measured: int = 0, rel_step: float = REL_STEP
) -> float:
    """-(1/T) d/dT of the thermal classical correlation."""
    fam = GibbsFamily(model)
    layout = model.layout
    return scaled_rate(
        lambda s: classical_correlation(DensityMatrix(fam(s), layout), measured), t, rel_step
    )
