"""Projective-measurement machinery: bases, tie handling, conditioning.

Measurement bases are stored as unitary column matrices on one subsystem.
Degenerate eigenvalues are grouped into blocks and refined deterministically
(secondary operator first, then an entropy-minimizing rotation for blocks
that stay ambiguous); column phases are fixed so results are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.optimize

from .errors import InvariantViolation, UsageError
from .linalg import hermitize, max_abs

TIE_TOL = 1e-10
PROB_FLOOR = 1e-14


@dataclass(frozen=True)
class ProjectorSet:
    """A complete orthogonal set of rank-1 projectors on one subsystem."""

    subsystem: int
    basis: np.ndarray  # unitary; column k is the k-th measurement vector

    def __post_init__(self):
        basis = np.asarray(self.basis, dtype=complex)
        object.__setattr__(self, "basis", basis)
        d = basis.shape[0]
        if basis.shape != (d, d):
            raise InvariantViolation(f"basis must be square, got {basis.shape}")
        if max_abs(basis.conj().T @ basis - np.eye(d)) > 1e-10:
            raise InvariantViolation("projector set is not complete/orthogonal")

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def vector(self, k: int) -> np.ndarray:
        return self.basis[:, k]

    def projectors(self) -> list[np.ndarray]:
        return [np.outer(self.basis[:, k], self.basis[:, k].conj()) for k in range(self.dim)]


def bloch_vector(theta: float, phi: float) -> np.ndarray:
    """Qubit state at polar angle theta, azimuth phi."""
    return np.array([np.cos(theta / 2.0), np.exp(1j * phi) * np.sin(theta / 2.0)])


def bloch_basis(theta: float, phi: float) -> np.ndarray:
    """Orthonormal qubit basis (columns) from Bloch angles."""
    u = bloch_vector(theta, phi)
    v = np.array([-np.conj(u[1]), np.conj(u[0])])
    return np.column_stack([u, v])


@dataclass(frozen=True)
class BlochMeasurement:
    """Qubit projective measurement parametrized by Bloch angles."""

    theta: float
    phi: float

    def __post_init__(self):
        if not (0.0 <= self.theta <= np.pi) or not (0.0 <= self.phi < 2.0 * np.pi):
            raise UsageError(f"angles out of range: theta={self.theta}, phi={self.phi}")

    def projector_set(self, subsystem: int = 0) -> ProjectorSet:
        return ProjectorSet(subsystem, bloch_basis(self.theta, self.phi))


def fix_phases(basis: np.ndarray) -> np.ndarray:
    """Make each column's largest-magnitude entry real positive."""
    out = basis.copy()
    for k in range(out.shape[1]):
        idx = int(np.argmax(np.abs(out[:, k])))
        z = out[idx, k]
        if abs(z) > 0:
            out[:, k] *= np.conj(z) / abs(z)
    return out


def tie_blocks(values: np.ndarray, tol: float = TIE_TOL) -> list[tuple[int, int]]:
    """Index ranges [i, j) of consecutive (ascending) eigenvalues tied within tol."""
    scale = max(1.0, float(np.max(np.abs(values))) if values.size else 0.0)
    blocks = []
    i, n = 0, len(values)
    while i < n:
        j = i + 1
        while j < n and abs(values[j] - values[j - 1]) <= tol * scale:
            j += 1
        blocks.append((i, j))
        i = j
    return blocks


def refined_eigenbasis(
    primary: np.ndarray, secondary: np.ndarray | None = None, tol: float = TIE_TOL
) -> tuple[np.ndarray, list[tuple[int, int]]]:
    """Eigenbasis of `primary` with tie blocks re-diagonalized in `secondary`.

    Returns the (phase-fixed) basis and the blocks that remain ambiguous,
    i.e. tie blocks of size > 1 where `secondary` is also flat.
    """
    w, v = np.linalg.eigh(primary)
    ambiguous: list[tuple[int, int]] = []
    for i, j in tie_blocks(w, tol):
        if j - i == 1:
            continue
        if secondary is None:
            ambiguous.append((i, j))
            continue
        blk = v[:, i:j]
        sub = hermitize(blk.conj().T @ secondary @ blk)
        sw, su = np.linalg.eigh(sub)
        v[:, i:j] = blk @ su
        spread = float(sw[-1] - sw[0])
        if spread <= tol * max(1.0, max_abs(secondary)):
            ambiguous.append((i, j))
    return fix_phases(v), ambiguous


def conditional_project(mat: np.ndarray, dims: Sequence[int], pos: int, vec: np.ndarray):
    """Contract subsystem `pos` of a joint matrix with a local vector.

    Returns (p, M): outcome weight p = <v|mat|v>_pos traced over the rest and
    the unnormalized matrix M on the remaining subsystems (mat itself for a
    single-subsystem layout, where M is the 1x1 weight).
    """
    n = len(dims)
    t = mat.reshape(list(dims) + list(dims))
    t = np.moveaxis(t, (pos, n + pos), (0, 1))
    m = np.einsum("a,b,ab...->...", vec.conj(), vec, t)
    rest = [d for i, d in enumerate(dims) if i != pos]
    dr = int(np.prod(rest)) if rest else 1
    m = m.reshape(dr, dr)
    return float(m.trace().real), m


def dephase(mat: np.ndarray, dims: Sequence[int], pos: int, basis: np.ndarray) -> np.ndarray:
    """Remove coherences of subsystem `pos` in the given basis: sum_k Pi_k mat Pi_k."""
    n = len(dims)
    t = mat.reshape(list(dims) + list(dims))
    t = np.moveaxis(t, (pos, n + pos), (0, 1))
    # component amplitudes along each basis vector, diagonal kept only
    amp = np.einsum("ka,lb,ab...->kl...", basis.conj().T, basis.T, t)
    diag = np.zeros_like(amp)
    for k in range(basis.shape[1]):
        diag[k, k] = amp[k, k]
    back = np.einsum("ak,bl,kl...->ab...", basis, basis.conj(), diag)
    back = np.moveaxis(back, (0, 1), (pos, n + pos))
    d = int(np.prod(dims))
    return back.reshape(d, d)


def _batched_psd_eigvals(m: np.ndarray) -> np.ndarray:
    """Eigenvalues of stacked small Hermitian PSD matrices, clamped to >= 0."""
    if m.shape[-1] == 1:
        w = m[..., 0, 0].real[..., None]
    elif m.shape[-1] == 2:
        half_tr = 0.5 * (m[..., 0, 0] + m[..., 1, 1]).real
        gap = np.sqrt(
            (0.5 * (m[..., 0, 0] - m[..., 1, 1]).real) ** 2 + np.abs(m[..., 0, 1]) ** 2
        )
        w = np.stack([half_tr - gap, half_tr + gap], axis=-1)
    else:
        w = np.linalg.eigvalsh(m).real
    return np.clip(w, 0.0, None)


def _unnormalized_entropy_terms(block_states: np.ndarray) -> np.ndarray:
    """-sum w ln w over the eigenvalues of each unnormalized conditional state."""
    w = _batched_psd_eigvals(block_states)
    mask = w > 0.0
    vals = np.where(mask, -w * np.log(np.where(mask, w, 1.0)), 0.0)
    return vals.sum(axis=-1)


class PairCost:
    """Batched two-outcome measurement cost on one subsystem.

    For candidate orthonormal pairs (G, 2, d_sub) the cost is
    sum_x [-sum_k w ln w] over the eigenvalues w of the unnormalized
    conditional states (the dephasing-entropy share); with
    include_outcome_entropy=False the outcome share -sum_x p ln p is
    removed, leaving the average conditional entropy sum_x p_x S_x.
    """

    def __init__(self, joint: np.ndarray, dims: Sequence[int], pos: int,
                 include_outcome_entropy: bool):
        n = len(dims)
        t = joint.reshape(list(dims) + list(dims))
        t = np.moveaxis(t, (pos, n + pos), (0, 1))
        rest = [d for i, d in enumerate(dims) if i != pos]
        self._dr = int(np.prod(rest)) if rest else 1
        d = dims[pos]
        self._tensor = np.ascontiguousarray(t.reshape(d, d, self._dr, self._dr))
        self._include = include_outcome_entropy

    def __call__(self, vec_pairs: np.ndarray) -> np.ndarray:
        total = np.zeros(vec_pairs.shape[0])
        for x in range(2):
            v = vec_pairs[:, x, :]
            m = np.einsum("ga,gb,abrs->grs", v.conj(), v, self._tensor)
            m = 0.5 * (m + np.conj(np.swapaxes(m, 1, 2)))
            terms = _unnormalized_entropy_terms(m)
            if not self._include:
                p = np.clip(np.einsum("grr->g", m).real, 0.0, None)
                plogp = np.where(p > 0.0, p * np.log(np.where(p > 0.0, p, 1.0)), 0.0)
                terms = terms + plogp
            total += terms
        return total

    def single(self, pair: np.ndarray) -> float:
        """Scalar cost of one orthonormal pair (2, d), avoiding batch overhead."""
        total = 0.0
        for x in range(2):
            v = pair[x]
            m = np.tensordot(np.multiply.outer(v.conj(), v), self._tensor, axes=2)
            m = 0.5 * (m + m.conj().T)
            w = _batched_psd_eigvals(m[None, :, :])[0]
            w = w[w > 0.0]
            total += float(-(w * np.log(w)).sum())
            if not self._include:
                p = float(w.sum())
                if p > 0.0:
                    total += p * np.log(p)
        return total


@dataclass(frozen=True)
class RotationSearch:
    """Outcome of a two-outcome basis optimization."""

    theta: float
    phi: float
    value: float
    grid_best: float
    iterations: int


def _pairs_from_angles(theta, phi, col_a: np.ndarray, col_b: np.ndarray) -> np.ndarray:
    """Orthonormal pairs (..., 2, d) from arrays of Bloch angles."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    c = np.cos(theta / 2.0)[..., None]
    s = np.sin(theta / 2.0)[..., None]
    e = np.exp(1j * phi)[..., None]
    u = c * col_a + e * s * col_b
    v = -np.conj(e) * s * col_a + c * col_b
    return np.stack([u, v], axis=-2)


def optimize_pair_rotation(
    joint: np.ndarray,
    dims: Sequence[int],
    pos: int,
    col_a: np.ndarray,
    col_b: np.ndarray,
    include_outcome_entropy: bool,
    grid: tuple[int, int] = (64, 64),
    fatol: float = 1e-12,
    xatol: float = 1e-6,
) -> tuple[np.ndarray, RotationSearch]:
    """Minimize the two-outcome cost over rotations of an orthonormal column pair.

    Coarse uniform grid over (theta, phi), then Nelder-Mead refinement.
    Grid ties break to the lexicographically lowest (theta, phi).  Returns
    the optimal orthonormal pair (2, d) and search diagnostics.
    """
    cost = PairCost(joint, dims, pos, include_outcome_entropy)
    nt, nph = grid
    thetas = np.linspace(0.0, np.pi, nt)
    phis = np.linspace(0.0, 2.0 * np.pi, nph, endpoint=False)
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    flat_t, flat_p = tt.ravel(), pp.ravel()
    vals = cost(_pairs_from_angles(flat_t, flat_p, col_a, col_b))
    k = int(np.argmin(vals))  # first minimum in row-major order = lexicographic
    grid_best = float(vals[k])

    def objective(x):
        return cost.single(_pairs_from_angles(x[0], x[1], col_a, col_b))

    res = scipy.optimize.minimize(
        objective,
        x0=[flat_t[k], flat_p[k]],
        method="Nelder-Mead",
        options={"xatol": xatol, "fatol": fatol, "maxiter": 400},
    )
    if res.fun <= grid_best:
        theta, phi, value, its = float(res.x[0]), float(res.x[1]), float(res.fun), int(res.nit)
    else:
        theta, phi, value, its = float(flat_t[k]), float(flat_p[k]), grid_best, int(res.nit)
    best = _pairs_from_angles(theta, phi, col_a, col_b)
    return best, RotationSearch(theta, phi, value, grid_best, its)


def resolve_ambiguous_blocks(
    basis: np.ndarray,
    blocks: list[tuple[int, int]],
    joint: np.ndarray,
    dims: Sequence[int],
    pos: int,
    include_outcome_entropy: bool,
    grid: tuple[int, int] = (32, 32),
) -> np.ndarray:
    """Resolve leftover degenerate blocks by entropy-minimizing rotations.

    Only 2-dimensional blocks are searched (every measured subsystem in the
    shipped models is a qubit); larger blocks keep their deterministic
    phase-fixed eigenbasis.
    """
    out = basis.copy()
    for i, j in blocks:
        if j - i != 2:
            continue
        pair, _ = optimize_pair_rotation(
            joint, dims, pos, out[:, i], out[:, j - 1], include_outcome_entropy, grid=grid
        )
        out[:, i] = pair[0]
        out[:, j - 1] = pair[1]
    return fix_phases(out)
