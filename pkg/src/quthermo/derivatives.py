"""Temperature-derivative policy shared by all modules.

Central differences with relative step h = 1e-4 * T, Richardson-combined
with the h/2 estimate (cancels the leading O(h^2) error and doubles as a
convergence cross-check).  Works for scalar, vector and matrix valued
functions alike.
"""

from __future__ import annotations

from typing import Callable

from .errors import DomainError

REL_STEP = 1e-4


def derivative_temperatures(t: float, rel_step: float = REL_STEP) -> tuple[float, ...]:
    """The evaluation points used by central_derivative: (T+h, T-h, T+h/2, T-h/2)."""
    h = rel_step * abs(t)
    return (t + h, t - h, t + 0.5 * h, t - 0.5 * h)


def derivative_from_samples(samples, t: float, rel_step: float = REL_STEP):
    """Richardson-combined central derivative from the four stencil samples."""
    h = rel_step * abs(t)
    fp, fm, fp2, fm2 = samples
    d1 = (fp - fm) / (2.0 * h)
    d2 = (fp2 - fm2) / h
    return (4.0 * d2 - d1) / 3.0


def central_derivative(f: Callable[[float], object], t: float, rel_step: float = REL_STEP):
    """d f / dT at t, for f returning a float or ndarray."""
    if t <= 0:
        raise DomainError(f"temperature must be positive, got {t}")
    pts = derivative_temperatures(t, rel_step)
    return derivative_from_samples([f(p) for p in pts], t, rel_step)


def scaled_rate(f: Callable[[float], float], t: float, rel_step: float = REL_STEP) -> float:
    """-(1/T) d f / dT at t, the combination compared against precision loss."""
    return float(-central_derivative(f, t, rel_step) / t)


def richardson2(values: tuple[float, float, float]) -> float:
    """Two-level Richardson extrapolation of estimates at steps (e, e/2, e/4).

    Removes the O(e^2) and O(e^4) error terms of a symmetric difference.
    """
    d1, d2, d4 = values
    r1 = (4.0 * d2 - d1) / 3.0
    r2 = (4.0 * d4 - d2) / 3.0
    return (16.0 * r2 - r1) / 15.0
