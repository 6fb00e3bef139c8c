"""Gibbs states and Fisher-information quantities for temperature estimation.

Covers the global quantum Fisher information (heat-capacity route and the
general spectral route), local QFI of reduced states, locally optimal
projective measurements, conditional states, and the greedy local
measurement scheme with classical feed-forward.

Measurement freezing: whenever an outcome distribution or a conditional
state family is differentiated in T, the projectors are those chosen at
the evaluation temperature (the apparatus does not co-vary with the
unknown parameter).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .derivatives import REL_STEP, derivative_from_samples, derivative_temperatures, richardson2
from .errors import DomainError, NumericalError, UsageError
from .linalg import (
    DensityMatrix,
    EigenDecomposition,
    _as_matrix,
    eigh,
    embed,
    fidelity,
    hermitize,
    ptrace,
)
from .measurements import (
    PROB_FLOOR,
    ProjectorSet,
    conditional_project,
    refined_eigenbasis,
    resolve_ambiguous_blocks,
)
from .models import PartitionedHamiltonian

QFI_PAIR_FLOOR = 1e-12
DEFAULT_MODE = "sld_eigenbasis"
MEASUREMENT_MODES = (DEFAULT_MODE, "reduced_state_eigenbasis")


@dataclass(frozen=True)
class GibbsEnsemble:
    """Thermal state exp(-H/T)/Z of a partitioned Hamiltonian."""

    hamiltonian: PartitionedHamiltonian
    temperature: float
    state: DensityMatrix
    log_partition: float
    spectrum: EigenDecomposition

    @property
    def layout(self):
        return self.hamiltonian.layout

    @cached_property
    def boltzmann_weights(self) -> np.ndarray:
        w = self.spectrum.eigenvalues
        e = np.exp(-(w - w[0]) / self.temperature)
        return e / e.sum()


def _gibbs_matrix(model: PartitionedHamiltonian, t: float) -> np.ndarray:
    if t <= 0:
        raise DomainError(f"temperature must be positive, got {t}")
    w, v = np.linalg.eigh(model.total.matrix)
    e = np.exp(-(w - w[0]) / t)
    return hermitize((v * (e / e.sum())) @ v.conj().T)


class GibbsFamily:
    """Memoized T -> Gibbs matrix of one model; shares work across stencil points."""

    def __init__(self, model: PartitionedHamiltonian):
        self.model = model
        self._dec = eigh(model.total)
        self._memo: dict[float, np.ndarray] = {}

    def __call__(self, t: float) -> np.ndarray:
        if t not in self._memo:
            if t <= 0:
                raise DomainError(f"temperature must be positive, got {t}")
            w, v = self._dec.eigenvalues, self._dec.eigenvectors
            e = np.exp(-(w - w[0]) / t)
            self._memo[t] = hermitize((v * (e / e.sum())) @ v.conj().T)
        return self._memo[t]


def gibbs(model: PartitionedHamiltonian, t: float) -> GibbsEnsemble:
    """Thermal ensemble at temperature t (spectrum-shifted exponentials)."""
    if t <= 0:
        raise DomainError(f"temperature must be positive, got {t}")
    dec = eigh(model.total)
    w = dec.eigenvalues
    e = np.exp(-(w - w[0]) / t)
    zs = float(e.sum())
    mat = hermitize((dec.eigenvectors * (e / zs)) @ dec.eigenvectors.conj().T)
    log_z = float(np.log(zs) - w[0] / t)
    return GibbsEnsemble(model, float(t), DensityMatrix(mat, model.layout), log_z, dec)


def heat_capacity(ens: GibbsEnsemble) -> float:
    """C(T) = (<H^2> - <H>^2) / T^2, computed spectrally."""
    w = ens.spectrum.eigenvalues
    p = ens.boltzmann_weights
    mean = float(p @ w)
    var = float(p @ (w * w) - mean * mean)
    return max(var, 0.0) / ens.temperature**2


def qfi_gibbs(ens: GibbsEnsemble) -> float:
    """Global QFI of the thermal family, C(T)/T^2."""
    return heat_capacity(ens) / ens.temperature**2


def qfi_from_state_and_derivative(rho: np.ndarray, drho: np.ndarray) -> float:
    """Spectral QFI sum 2 sum_ij |<i|drho|j>|^2 / (li + lj) over pairs above 1e-12."""
    w, v = np.linalg.eigh(rho)
    w = np.clip(w.real, 0.0, None)
    a = v.conj().T @ drho @ v
    denom = w[:, None] + w[None, :]
    mask = denom > QFI_PAIR_FLOOR
    if not mask.any():
        raise NumericalError("state family is fully degenerate below the pair floor")
    return float(2.0 * np.sum(np.abs(a[mask]) ** 2 / denom[mask]))


def qfi_general(rho_of_t, t: float, rel_step: float = REL_STEP) -> float:
    """QFI of an arbitrary differentiable state family at temperature t."""
    rho = _as_matrix(rho_of_t(t))
    samples = [_as_matrix(rho_of_t(s)) for s in derivative_temperatures(t, rel_step)]
    drho = derivative_from_samples(samples, t, rel_step)
    return qfi_from_state_and_derivative(rho, drho)


def qfi_fidelity_difference(rho_of_t, t: float, eps_rel: float = 0.05) -> float:
    """QFI via the fidelity curvature -2 d^2/de^2 F[rho(t), rho(t+e)].

    Symmetric second differences at steps (e, e/2, e/4), two-level
    Richardson extrapolated.  Independent of the spectral route; used as a
    cross-check oracle.
    """
    rho0 = _as_matrix(rho_of_t(t))
    base = fidelity(rho0, rho0)

    def curvature(e: float) -> float:
        fp = fidelity(rho0, _as_matrix(rho_of_t(t + e)))
        fm = fidelity(rho0, _as_matrix(rho_of_t(t - e)))
        return -2.0 * (fp + fm - 2.0 * base) / e**2

    e0 = eps_rel * t
    return richardson2((curvature(e0), curvature(e0 / 2), curvature(e0 / 4)))


def local_qfi(ens: GibbsEnsemble, subsystem: int, rel_step: float = REL_STEP) -> float:
    """QFI of the reduced thermal family on one subsystem."""
    dims = ens.layout.dims
    if not 0 <= subsystem < len(dims):
        raise UsageError(f"subsystem {subsystem} out of range for layout {dims}")
    fam = GibbsFamily(ens.hamiltonian)
    return qfi_general(lambda s: ptrace(fam(s), dims, [subsystem]), ens.temperature, rel_step)


def sld_operator(rho: np.ndarray, drho: np.ndarray) -> np.ndarray:
    """Symmetric logarithmic derivative L with drho = (L rho + rho L)/2."""
    w, v = np.linalg.eigh(rho)
    w = np.clip(w.real, 0.0, None)
    a = v.conj().T @ drho @ v
    denom = w[:, None] + w[None, :]
    l = np.where(denom > QFI_PAIR_FLOOR, 2.0 * a / np.where(denom > 0, denom, 1.0), 0.0)
    return hermitize(v @ l @ v.conj().T)


def _choose_basis(
    rho_sub: np.ndarray,
    drho_sub: np.ndarray,
    mode: str,
    joint: np.ndarray,
    dims,
    pos: int,
) -> np.ndarray:
    """Measurement basis on a subsystem, with deterministic degeneracy handling.

    Ties in the primary operator (SLD or reduced state) are refined by the
    temperature derivative of the reduced state; blocks where that is also
    flat are resolved by minimizing the post-measurement conditional entropy,
    matching the convention used for the discord minimizations.
    """
    if mode == "sld_eigenbasis":
        primary = sld_operator(rho_sub, drho_sub)
    elif mode == "reduced_state_eigenbasis":
        primary = rho_sub
    else:
        raise UsageError(f"unknown measurement mode {mode!r}; use one of {MEASUREMENT_MODES}")
    basis, ambiguous = refined_eigenbasis(primary, drho_sub)
    if ambiguous:
        basis = resolve_ambiguous_blocks(
            basis, ambiguous, joint, dims, pos, include_outcome_entropy=False
        )
    return basis


def optimal_local_measurement(
    ens: GibbsEnsemble, subsystem: int, mode: str = DEFAULT_MODE, rel_step: float = REL_STEP
) -> ProjectorSet:
    """Locally optimal projective measurement on one subsystem.

    sld_eigenbasis: eigenprojectors of the symmetric logarithmic derivative
    of the reduced thermal family (saturates the local QFI at any T).
    reduced_state_eigenbasis: eigenprojectors of the reduced state itself
    (the high-temperature-optimal choice).
    """
    dims = ens.layout.dims
    if not 0 <= subsystem < len(dims):
        raise UsageError(f"subsystem {subsystem} out of range for layout {dims}")
    t = ens.temperature
    fam = GibbsFamily(ens.hamiltonian)
    red = lambda s: ptrace(fam(s), dims, [subsystem])
    rho_sub = red(t)
    drho_sub = derivative_from_samples(
        [red(s) for s in derivative_temperatures(t, rel_step)], t, rel_step
    )
    basis = _choose_basis(rho_sub, drho_sub, mode, ens.state.matrix, dims, subsystem)
    return ProjectorSet(subsystem, basis)


def conditional_state(
    state: GibbsEnsemble | DensityMatrix, projector: np.ndarray, subsystem: int = 0
) -> tuple[float, DensityMatrix | None]:
    """Outcome probability and post-measurement state of the complement.

    Outcomes with probability below 1e-14 are excluded: (p, None).
    """
    rho = state.state if isinstance(state, GibbsEnsemble) else state
    dims = rho.layout.dims
    if not 0 <= subsystem < len(dims):
        raise UsageError(f"subsystem {subsystem} out of range for layout {dims}")
    proj = np.asarray(projector, dtype=complex)
    if proj.shape != (dims[subsystem], dims[subsystem]):
        raise UsageError(f"projector shape {proj.shape} does not match subsystem dimension")
    full = embed(proj, dims, subsystem)
    sandwich = full @ rho.matrix @ full.conj().T
    p = float(sandwich.trace().real)
    if p < PROB_FLOOR:
        return p, None
    keep = [i for i in range(len(dims)) if i != subsystem]
    red = hermitize(ptrace(sandwich, dims, keep)) / p
    return p, DensityMatrix(red, rho.layout.sub(keep))


# ---------------------------------------------------------------------------
# Greedy local scheme
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GreedyStep:
    """One step of the greedy scheme: which subsystem and its Fisher share."""

    subsystem: int
    fisher: float


@dataclass(frozen=True)
class GreedyLeaf:
    """A full outcome record: per-step measured vectors and the joint weight."""

    outcomes: tuple[int, ...]
    vectors: tuple[np.ndarray, ...]
    probability: float


@dataclass(frozen=True)
class GreedyScheme:
    """Frozen greedy measurement tree evaluated at one temperature."""

    path: tuple[int, ...]
    mode: str
    temperature: float
    steps: tuple[GreedyStep, ...]
    leaves: tuple[GreedyLeaf, ...]

    @property
    def fisher_total(self) -> float:
        return float(sum(s.fisher for s in self.steps))


def _validate_path(path, nsub: int) -> tuple[int, ...]:
    if path is None:
        return tuple(range(nsub))
    path = tuple(int(k) for k in path)
    if sorted(path) != list(range(nsub)):
        raise UsageError(f"path {path} is not a permutation of 0..{nsub - 1}")
    return path


def greedy_scheme(
    ens: GibbsEnsemble,
    path=None,
    mode: str = DEFAULT_MODE,
    rel_step: float = REL_STEP,
) -> GreedyScheme:
    """Build the greedy measurement tree and its per-step Fisher information.

    At each step the subsystem prescribed by `path` is measured with the
    mode-chosen locally optimal basis of its conditional reduced family at
    the evaluation temperature; the step contributes the outcome-averaged
    classical Fisher information of its conditional outcome distribution
    (frozen projectors).  In sld mode each step term saturates the
    corresponding conditional local QFI.
    """
    dims = ens.layout.dims
    path = _validate_path(path, len(dims))
    t0 = ens.temperature
    stencil = derivative_temperatures(t0, rel_step)
    temps = (t0,) + stencil
    fam = GibbsFamily(ens.hamiltonian)
    states0 = {s: fam(s) for s in temps}

    steps: list[GreedyStep] = []
    leaves: list[GreedyLeaf] = []
    # each history: (outcomes, vectors, weight at t0, remaining ids, {t: normalized state})
    histories = [((), (), 1.0, list(range(len(dims))), states0)]
    for sub in path:
        fisher = 0.0
        new_histories = []
        for outcomes, vectors, weight, remaining, states in histories:
            pos = remaining.index(sub)
            rdims = [dims[i] for i in remaining]
            red = {s: ptrace(states[s], rdims, [pos]) for s in temps}
            drho_sub = derivative_from_samples([red[s] for s in stencil], t0, rel_step)
            basis = _choose_basis(red[t0], drho_sub, mode, states[t0], rdims, pos)

            d_sub = dims[sub]
            probs = {
                s: np.array(
                    [
                        max(float(np.real(basis[:, k].conj() @ red[s] @ basis[:, k])), 0.0)
                        for k in range(d_sub)
                    ]
                )
                for s in temps
            }
            p0 = probs[t0]
            dp = derivative_from_samples([probs[s] for s in stencil], t0, rel_step)
            mask = p0 > PROB_FLOOR
            fisher += weight * float(np.sum(dp[mask] ** 2 / p0[mask]))

            rest = [i for i in remaining if i != sub]
            for k in range(d_sub):
                if p0[k] < PROB_FLOOR:
                    continue
                vec = basis[:, k]
                if rest:
                    child = {}
                    for s in temps:
                        p, m = conditional_project(states[s], rdims, pos, vec)
                        child[s] = m / p if p > PROB_FLOOR else m
                    new_histories.append(
                        (outcomes + (k,), vectors + (vec,), weight * p0[k], rest, child)
                    )
                else:
                    leaves.append(
                        GreedyLeaf(outcomes + (k,), vectors + (vec,), weight * p0[k])
                    )
        steps.append(GreedyStep(sub, fisher))
        if new_histories:
            histories = new_histories
    return GreedyScheme(path, mode, t0, tuple(steps), tuple(leaves))


def greedy_locc_qfi(
    ens: GibbsEnsemble, path=None, mode: str = DEFAULT_MODE, rel_step: float = REL_STEP
) -> float:
    """Fisher information of the greedy local scheme (sum of step terms)."""
    return greedy_scheme(ens, path, mode, rel_step).fisher_total


def precision_loss(
    ens: GibbsEnsemble, path=None, mode: str = DEFAULT_MODE, rel_step: float = REL_STEP
) -> float:
    """Global QFI minus the greedy-scheme Fisher information.

    May be slightly negative (within differencing noise ~1e-8); raw values
    are reported without clamping.
    """
    return qfi_gibbs(ens) - greedy_locc_qfi(ens, path, mode, rel_step)


def classical_fisher(p_of_t, t: float, rel_step: float = REL_STEP) -> float:
    """Classical Fisher information sum_x (dp_x/dT)^2 / p_x of a distribution family."""
    p0 = np.asarray(p_of_t(t), dtype=float)
    if p0.min() < -1e-10 or abs(p0.sum() - 1.0) > 1e-8:
        raise UsageError("p_of_t must return a normalized probability vector")
    samples = [np.asarray(p_of_t(s), dtype=float) for s in derivative_temperatures(t, rel_step)]
    dp = derivative_from_samples(samples, t, rel_step)
    mask = p0 > PROB_FLOOR
    return float(np.sum(dp[mask] ** 2 / p0[mask]))
