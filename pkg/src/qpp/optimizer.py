"""Derivative-free maximization of selection probabilities.

The search strategy is a coarse cell-centered grid over the open
parameter box followed by local refinement: around the incumbent, a
9-point-per-axis lattice of halving half-width is rescanned until the
lattice diameter drops below the refinement tolerance.  The incumbent
never regresses, so per-iteration best values are monotone
nondecreasing.  Ties prefer the lexicographically smallest parameter
point, making results deterministic for any thread count.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import prepost
from .constructions import (
    DegenerateConfigurationError,
    cabello_family,
    family_delta_overlap,
    hardy_scenario,
)

__all__ = [
    "DEFAULT_EXCLUSIVITY_TOL",
    "MAX_REFINE_ITERATIONS",
    "ConvergenceError",
    "OptimizationResult",
    "maximize_hardy",
    "feasibility_root",
    "maximize_cabello_family",
]

DEFAULT_EXCLUSIVITY_TOL = 1e-9
MAX_REFINE_ITERATIONS = 60


class ConvergenceError(RuntimeError):
    """Refinement failed to reach the requested tolerance."""


@dataclass(frozen=True)
class OptimizationResult:
    """Maximizer, objective value, and bookkeeping for one search."""

    parameters: tuple[tuple[str, float], ...]
    objective: float
    evaluations: int
    grid_resolution: int
    refine_tolerance: float
    exclusivity_tol: float | None = None


def _grid_refine(f, lows, highs, grid, refine_tol, threads=1, max_iterations=MAX_REFINE_ITERATIONS):
    """Shared search engine; returns (best_point, best_value, evals, history).

    history holds the best value after the initial scan and after each
    refinement pass; it is monotone nondecreasing by construction.
    """
    ndim = len(lows)
    spans = [hi - lo for lo, hi in zip(lows, highs)]

    def evaluate(points):
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                return list(pool.map(f, points))
        return [f(pt) for pt in points]

    axes = [
        [lows[d] + (i + 0.5) * spans[d] / grid for i in range(grid)]
        for d in range(ndim)
    ]
    points = [tuple(pt) for pt in itertools.product(*axes)]
    values = evaluate(points)
    evals = len(points)
    best_point, best_value = points[0], values[0]
    for pt, v in zip(points[1:], values[1:]):
        if v > best_value or (v == best_value and pt < best_point):
            best_point, best_value = pt, v
    history = [best_value]

    half_widths = [span / grid for span in spans]
    iterations = 0
    while 2.0 * max(half_widths) >= refine_tol:
        iterations += 1
        if iterations > max_iterations:
            raise ConvergenceError(
                f"refinement did not reach tolerance {refine_tol!r} "
                f"within {max_iterations} iterations"
            )
        axes = []
        for d in range(ndim):
            lo = max(best_point[d] - half_widths[d], np.nextafter(lows[d], highs[d]))
            hi = min(best_point[d] + half_widths[d], np.nextafter(highs[d], lows[d]))
            axes.append(np.linspace(lo, hi, 9).tolist())
        points = [tuple(pt) for pt in itertools.product(*axes)]
        values = evaluate(points)
        evals += len(points)
        for pt, v in zip(points, values):
            if v > best_value or (v == best_value and pt < best_point):
                best_point, best_value = pt, v
        history.append(best_value)
        half_widths = [hw / 2.0 for hw in half_widths]

    return best_point, best_value, evals, history


def _check_search_args(grid: int, refine_tol: float, threads: int) -> None:
    if grid < 16:
        raise ValueError(f"grid must be at least 16, got {grid}")
    if not refine_tol > 0.0:
        raise ValueError(f"refine_tol must be positive, got {refine_tol!r}")
    if threads < 1:
        raise ValueError(f"threads must be at least 1, got {threads}")


def maximize_hardy(
    grid: int = 64, refine_tol: float = 1e-9, threads: int = 1
) -> OptimizationResult:
    """Maximize the Hardy selection probability over both angles.

    Degenerate angle pairs score 0 so the search stays inside the open
    box (0, pi/2)^2 without special casing.
    """
    _check_search_args(grid, refine_tol, threads)

    def objective(pt):
        theta_a, theta_b = pt
        try:
            return prepost.selection_probability(hardy_scenario(theta_a, theta_b))
        except DegenerateConfigurationError:
            return 0.0

    half_pi = math.pi / 2.0
    point, value, evals, _ = _grid_refine(
        objective, (0.0, 0.0), (half_pi, half_pi), grid, refine_tol, threads
    )
    return OptimizationResult(
        parameters=(("theta_a", point[0]), ("theta_b", point[1])),
        objective=value,
        evaluations=evals,
        grid_resolution=grid,
        refine_tolerance=refine_tol,
    )


def feasibility_root(
    c: float,
    n_sweep: int = 129,
    fd_step: float = 1e-6,
    width_tol: float = 1e-12,
) -> tuple[float, float]:
    """The p minimizing the family's delta overlap at fixed c.

    Sweeps p over an interior lattice, brackets the minimum of the
    squared overlap, and bisects on the sign of its central-difference
    slope.  Returns (p, delta_overlap(c, p)).  The overlap at the
    returned p is the feasibility defect: zero (to tolerance) exactly
    when some family member at this c forms a valid scenario.
    """
    if not 0.0 < c < 1.0:
        raise ValueError(f"c must lie strictly inside (0, 1), got {c!r}")

    def d2(p):
        return family_delta_overlap(c, p) ** 2

    ps = np.linspace(0.0, 1.0, n_sweep + 2)[1:-1]
    vals = d2(ps)
    i = int(np.argmin(vals))
    lo = ps[i - 1] if i > 0 else ps[i] / 2.0
    hi = ps[i + 1] if i < len(ps) - 1 else (ps[i] + 1.0) / 2.0

    def slope(p):
        lo_p = max(p - fd_step, p / 2.0)
        hi_p = min(p + fd_step, (p + 1.0) / 2.0)
        return (d2(hi_p) - d2(lo_p)) / (hi_p - lo_p)

    g_lo, g_hi = slope(lo), slope(hi)
    for _ in range(60):
        if g_lo < 0.0 and g_hi > 0.0:
            break
        if g_lo >= 0.0:
            lo = max(lo / 2.0, 1e-12)
            g_lo = slope(lo)
        if g_hi <= 0.0:
            hi = (hi + 1.0) / 2.0
            g_hi = slope(hi)
    else:
        p = float(ps[i])
        return p, float(family_delta_overlap(c, p))

    while hi - lo > width_tol:
        mid = 0.5 * (lo + hi)
        if slope(mid) > 0.0:
            hi = mid
        else:
            lo = mid
    p = 0.5 * (lo + hi)
    return float(p), float(family_delta_overlap(c, p))


def maximize_cabello_family(
    grid: int = 64,
    refine_tol: float = 1e-9,
    exclusivity_tol: float = DEFAULT_EXCLUSIVITY_TOL,
    threads: int = 1,
) -> OptimizationResult:
    """Maximize the selection probability over feasible family members.

    The family's selection probability is c^2 and feasibility ties p to
    c, so the search is one-dimensional: a c scores c^2 when
    feasibility_root finds a delta overlap below exclusivity_tol and 0
    otherwise.  The reported p is the root at the winning c.
    """
    _check_search_args(grid, refine_tol, threads)
    if not exclusivity_tol > 0.0:
        raise ValueError(f"exclusivity_tol must be positive, got {exclusivity_tol!r}")

    def objective(pt):
        (c,) = pt
        _, overlap = feasibility_root(c)
        return c * c if overlap < exclusivity_tol else 0.0

    point, value, evals, _ = _grid_refine(
        objective, (0.0,), (1.0,), grid, refine_tol, threads
    )
    c = point[0]
    p, overlap = feasibility_root(c)
    if not value > 0.0:
        raise ConvergenceError(
            f"no feasible family member found at exclusivity tolerance {exclusivity_tol!r}"
        )
    scenario_value = prepost.selection_probability(cabello_family(c, p).scenario)
    return OptimizationResult(
        parameters=(("c", c), ("p", p)),
        objective=scenario_value,
        evaluations=evals,
        grid_resolution=grid,
        refine_tolerance=refine_tol,
        exclusivity_tol=exclusivity_tol,
    )
