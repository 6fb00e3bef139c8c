"""High-temperature machinery: first-order thermal expansion, effective
local Hamiltonians, closed-form X-state leading terms, order-of-magnitude
checks, and the precision-loss vs discord-rate comparison.

The expansions assume beta * ||H|| << 1; checks evaluated below T =
10 ||H|| emit a RegimeWarning rather than failing outright.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .correlations import _eigenbasis_with_inf, diagonal_discord_rate
from .derivatives import REL_STEP, derivative_from_samples, derivative_temperatures
from .errors import DomainError, RegimeWarning, UsageError
from .linalg import DensityMatrix, HermitianOperator, SubsystemLayout, hermitize, ptrace, von_neumann_entropy
from .models import PartitionedHamiltonian, TwoQubitXYZParams
from .thermometry import DEFAULT_MODE, GibbsFamily, gibbs, precision_loss, qfi_gibbs

REGIME_FACTOR = 10.0
BOUNDED_RATIO = (0.3, 3.0)
NEGLIGIBLE = 1e-12


def high_temperature_regime(model: PartitionedHamiltonian, t: float) -> bool:
    """True when t is at least 10 spectral norms of H."""
    return t >= REGIME_FACTOR * model.spectral_norm()


def _warn_if_low(model: PartitionedHamiltonian, t: float, what: str) -> None:
    if not high_temperature_regime(model, t):
        warnings.warn(
            f"{what} evaluated at T = {t:g} below the regime threshold "
            f"{REGIME_FACTOR:g} * ||H|| = {REGIME_FACTOR * model.spectral_norm():g}",
            RegimeWarning,
            stacklevel=3,
        )


def first_order_state(model: PartitionedHamiltonian, t: float) -> DensityMatrix:
    """Leading thermal expansion (1 - (H - Tr H / d) / T) / d, clamped to positivity."""
    if t <= 0:
        raise DomainError(f"temperature must be positive, got {t}")
    d = model.dim
    h = model.total.matrix
    traceless = h - (h.trace() / d) * np.eye(d)
    mat = (np.eye(d) - traceless / t) / d
    w, v = np.linalg.eigh(mat)
    if w[0] < -1e-10:
        warnings.warn(
            f"first-order state has eigenvalue {w[0]:.3e} at T = {t:g}; "
            "beta * ||H|| is too large for the expansion",
            RegimeWarning,
            stacklevel=2,
        )
    w = np.clip(w.real, 0.0, None)
    mat = hermitize((v * (w / w.sum())) @ v.conj().T)
    return DensityMatrix(mat, model.layout)


def _bipartite_dims(model: PartitionedHamiltonian) -> tuple[int, int]:
    dims = model.layout.dims
    if len(dims) != 2:
        raise UsageError(f"a bipartite model is required, got layout {dims}")
    return dims


def interaction_correction_a(model: PartitionedHamiltonian) -> HermitianOperator:
    """Traceless average of the coupling over subsystem B.

    Added to the bare local term of A this gives the temperature-independent
    effective Hamiltonian governing the reduced state at high temperature;
    it vanishes whenever the coupling does.
    """
    da, db = _bipartite_dims(model)
    avg = ptrace(model.interaction.matrix, (da, db), [0]) / db
    avg -= (avg.trace() / da) * np.eye(da)
    return HermitianOperator(hermitize(avg), SubsystemLayout((da,)))


def interaction_correction_b(model: PartitionedHamiltonian, state_a: np.ndarray) -> HermitianOperator:
    """Traceless coupling sandwich <j|H_int|j> on B for an outcome vector on A.

    Accepts the A-side vector or its rank-1 projector.  Added to B's bare
    local term this approximates the conditional state by a thermal state to
    second order in 1/T.
    """
    da, db = _bipartite_dims(model)
    vec = np.asarray(state_a, dtype=complex)
    if vec.ndim == 2:
        w, v = np.linalg.eigh(vec)
        vec = v[:, int(np.argmax(w))]
    if vec.shape != (da,):
        raise UsageError(f"outcome vector must have length {da}")
    vec = vec / np.linalg.norm(vec)
    hint = model.interaction.matrix.reshape(da, db, da, db)
    sand = np.einsum("a,abcd,c->bd", vec.conj(), hint, vec)
    sand -= (sand.trace() / db) * np.eye(db)
    return HermitianOperator(hermitize(sand), SubsystemLayout((db,)))


@dataclass(frozen=True)
class LeadingCoefficients:
    """T^4-scaled leading coefficients of the two-qubit X-state asymptotics.

    precision_loss and discord_rate share (jx^2 + jy^2)/4 and are field
    independent; the mutual-information rate carries all three couplings and
    the classical-correlation rate only the zz one.
    """

    precision_loss: float
    mutual_information_rate: float
    classical_correlation_rate: float


def xstate_leading_terms(params: TwoQubitXYZParams) -> LeadingCoefficients:
    """Closed-form high-temperature coefficients for the two-qubit model."""
    jx2, jy2, jz2 = params.jx**2, params.jy**2, params.jz**2
    return LeadingCoefficients(
        precision_loss=(jx2 + jy2) / 4.0,
        mutual_information_rate=(jx2 + jy2 + jz2) / 4.0,
        classical_correlation_rate=jz2 / 4.0,
    )


def sech_squared_loss(coupling: float, t: float) -> float:
    """Exact loss j^2 sech^2(j / 2T) / (4 T^4) of the single-coupling pair."""
    if t <= 0:
        raise DomainError(f"temperature must be positive, got {t}")
    return coupling**2 / np.cosh(coupling / (2.0 * t)) ** 2 / (4.0 * t**4)


@dataclass(frozen=True)
class AsymptoticCheck:
    """Result of one order-of-magnitude check."""

    name: str
    value: float
    predicted: float
    scaled_residual: float
    passed: bool
    note: str = ""


def _probability_term(model: PartitionedHamiltonian, t: float, rel_step: float) -> float:
    """(1/T) sum_k dp_k/dT * S(B | outcome k), basis frozen at t."""
    da, db = _bipartite_dims(model)
    fam = GibbsFamily(model)
    rho = fam(t)
    basis = _eigenbasis_with_inf(ptrace(rho, (da, db), [0]), rho, (da, db), 0)

    def outcome_stats(s: float):
        red = ptrace(fam(s), (da, db), [0])
        return np.array([float(np.real(basis[:, k].conj() @ red @ basis[:, k])) for k in range(da)])

    dp = derivative_from_samples(
        [outcome_stats(s) for s in derivative_temperatures(t, rel_step)], t, rel_step
    )
    total = 0.0
    r4 = rho.reshape(da, db, da, db)
    for k in range(da):
        v = basis[:, k]
        m = hermitize(np.einsum("a,abcd,c->bd", v.conj(), r4, v))
        p = float(m.trace().real)
        if p > NEGLIGIBLE:
            total += dp[k] * von_neumann_entropy(m / p)
    return total / t


def order_check_probability_term(
    model: PartitionedHamiltonian, t: float, rel_step: float = REL_STEP
) -> AsymptoticCheck:
    """Check that the probability-derivative entropy term stays O(T^-5).

    Scales the term by T^5 at t and 2t; passes when the two stay within a
    factor of ~3 of each other (or are both negligible).
    """
    _warn_if_low(model, t, "probability-term order check")
    a1 = abs(t**5 * _probability_term(model, t, rel_step))
    a2 = abs((2 * t) ** 5 * _probability_term(model, 2 * t, rel_step))
    if a1 <= NEGLIGIBLE and a2 <= NEGLIGIBLE:
        return AsymptoticCheck(
            "probability_term_t5_bounded", a1, a2, 0.0, True, "both terms negligible"
        )
    ratio = a2 / a1 if a1 > 0 else np.inf
    passed = BOUNDED_RATIO[0] <= ratio <= BOUNDED_RATIO[1]
    return AsymptoticCheck("probability_term_t5_bounded", a1, a2, float(ratio), passed)


def order_check_qfi(model: PartitionedHamiltonian, t: float) -> AsymptoticCheck:
    """Check T^4 * QFI against the uniform spectral variance of H."""
    _warn_if_low(model, t, "QFI order check")
    value = t**4 * qfi_gibbs(gibbs(model, t))
    w = np.linalg.eigvalsh(model.total.matrix)
    var = float(np.mean(w**2) - np.mean(w) ** 2)
    if var <= NEGLIGIBLE * max(1.0, float(np.max(np.abs(w))) ** 2):
        return AsymptoticCheck("qfi_t4_spectral_variance", value, var, 0.0, True, "vacuous")
    residual = abs(value - var) / var
    return AsymptoticCheck("qfi_t4_spectral_variance", value, var, residual, residual <= 0.05)


@dataclass(frozen=True)
class IdentityComparison:
    """Both sides of the precision-loss / discord-rate identity at one point."""

    precision_loss: float
    discord_rate: float
    abs_diff: float
    relative_metric: float | None


NOISE_FLOOR = 1e-10  # differencing noise scale; below it a ratio is meaningless


def relative_metric(loss: float, rate: float) -> float | None:
    """|difference| / |sum| of the two identity sides, None when meaningless."""
    denom = abs(loss + rate)
    if denom < 1e-14 or (abs(loss) <= NOISE_FLOOR and abs(rate) <= NOISE_FLOOR):
        return None
    return abs(loss - rate) / denom


def identity_comparison(
    model: PartitionedHamiltonian,
    t: float,
    path=None,
    mode: str = DEFAULT_MODE,
    rel_step: float = REL_STEP,
) -> IdentityComparison:
    """Compare the greedy precision loss with -(1/T) dD/dT.

    The relative metric is |difference| / |sum|, reported as None when the
    sum falls below the guard or both sides sit inside differencing noise
    (exactly-classical models give 0 = 0 only up to that noise).
    """
    loss = precision_loss(gibbs(model, t), path, mode, rel_step)
    rate = diagonal_discord_rate(model, t, path, rel_step)
    return IdentityComparison(loss, rate, abs(loss - rate), relative_metric(loss, rate))
