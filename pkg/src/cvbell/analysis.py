"""Purity and separability analysis of the evolved states.

Purity is read off the coefficient triple: every state of the family
satisfies c1^2 - c2^2 = 16 h, and the square of the Wigner function
integrates to (4 pi^2)^-1 sqrt(det W) / 4, so the state is pure exactly
when additionally c1^2 - c2^2 = 16 h^2, i.e. h = 1.

Separability of a two-mode Gaussian state with correlation matrix V is
equivalent to V - I/2 >= 0.  Two deliberately independent routes decide
it:

* the eigensolver route builds W -> V -> V - I/2 and diagonalises,
* the closed-form route evaluates the doubly degenerate pair

      e_large = E(p2) (d nbar + r),   e_small = E(p1) (d nbar - r),

  with E(p) = (1 - e^-p)/p, whose sign reproduces the separability law
  "separable iff r <= d nbar".

The routes must agree to ``TOLERANCES.route_agreement``; disagreement
raises :class:`~cvbell.errors.CrossCheckError` instead of returning a
silently wrong verdict.  States with margin exactly on the boundary
count as separable (the criterion is a non-strict inequality).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import coefficient_arrays, evolve_coefficients
from .errors import CrossCheckError
from .numerics import TOLERANCES, one_minus_exp_over, sym4_eigenvalues
from .parallel import chunked_rows
from .phase_space import (
    GaussianForm,
    SqueezedStateParams,
    v_from_w,
    w_matrix_from_form,
)

__all__ = [
    "PurityReport",
    "SeparabilityReport",
    "SeparabilityMap",
    "is_pure",
    "separability_closed_pair",
    "separability_eigenvalues",
    "separability_map",
]


@dataclass(frozen=True)
class PurityReport:
    """Verdict plus the relative defect |c1^2 - c2^2 - 16 h^2| / 16 h^2."""

    pure: bool
    residual: float


def is_pure(form: GaussianForm) -> PurityReport:
    """Decide purity of a coefficient triple.

    The residual is zero in exact arithmetic iff sqrt(det W) = 4,
    equivalently h = 1 for normalised model states; the verdict uses
    ``TOLERANCES.purity_rel``.
    """
    target = 16.0 * form.h * form.h
    residual = abs(form.c1 ** 2 - form.c2 ** 2 - target) / target
    return PurityReport(pure=residual < TOLERANCES.purity_rel, residual=residual)


@dataclass(frozen=True)
class SeparabilityReport:
    """Spectral separability verdict for one parameter point.

    ``eigenvalues`` are the four eigenvalues of V - I/2 ascending (the
    doubly degenerate pair {e_small, e_small, e_large, e_large});
    ``margin`` is the smallest one; ``closed_pair`` carries the
    closed-form (e_large, e_small) cross-check values.
    """

    eigenvalues: np.ndarray
    separable: bool
    margin: float
    closed_pair: tuple


def separability_closed_pair(params: SqueezedStateParams):
    """Closed-form eigenvalue pair (e_large, e_small) of V - I/2."""
    e_large = float(one_minus_exp_over(params.p2)) * (params.d * params.nbar + params.r)
    e_small = float(one_minus_exp_over(params.p1)) * (params.d * params.nbar - params.r)
    return e_large, e_small


def separability_eigenvalues(params: SqueezedStateParams) -> SeparabilityReport:
    """Dual-route separability analysis at one parameter point.

    Primary verdict from the numeric eigensolve of V - I/2; the closed
    forms are asserted against it and any disagreement beyond
    ``TOLERANCES.route_agreement`` raises :class:`CrossCheckError`.
    """
    form = evolve_coefficients(params)
    v = v_from_w(w_matrix_from_form(form))
    numeric = sym4_eigenvalues(v.entries - 0.5 * np.eye(4))
    e_large, e_small = separability_closed_pair(params)
    closed = np.array([e_small, e_small, e_large, e_large])
    gap = float(np.max(np.abs(numeric - closed)))
    if gap > TOLERANCES.route_agreement:
        raise CrossCheckError(
            f"separability routes disagree by {gap:.3e} at "
            f"(r={params.r}, d={params.d}, nbar={params.nbar})")
    margin = float(numeric[0])
    return SeparabilityReport(
        eigenvalues=numeric,
        separable=margin >= TOLERANCES.boundary_margin,
        margin=margin,
        closed_pair=(e_large, e_small),
    )


@dataclass(frozen=True)
class SeparabilityMap:
    """Separability verdicts over a (d, nbar) grid at fixed r.

    ``separable[i, j]`` refers to (d_grid[i], nbar_grid[j]);
    ``boundary_nbar[i]`` is the smallest grid nbar that is separable at
    d_grid[i] (NaN when the whole row is nonseparable).  The underlying
    law puts the boundary at nbar = r / d.
    """

    r: float
    d_grid: np.ndarray
    nbar_grid: np.ndarray
    separable: np.ndarray
    margin: np.ndarray
    boundary_nbar: np.ndarray


def _margin_rows(r: float, d_grid: np.ndarray, nbar_grid: np.ndarray,
                 lo: int, hi: int) -> np.ndarray:
    d = d_grid[lo:hi, None]
    nbar = nbar_grid[None, :]
    c1, c2, h = coefficient_arrays(r, d, nbar)
    # numeric pipeline, vectorised: W diag/cross -> det -> V -> spectrum
    w_d = c1 / (2.0 * h)
    w_c = c2 / (2.0 * h)
    root_det = w_d * w_d - w_c * w_c
    v_d = w_d / root_det
    v_c = w_c / root_det
    margin = v_d - 0.5 - np.abs(v_c)
    # paired closed-form route must agree everywhere before we trust it
    p1 = d + 2.0 * r
    p2 = d - 2.0 * r
    e_small = one_minus_exp_over(p1) * (d * nbar - r)
    e_large = one_minus_exp_over(p2) * (d * nbar + r)
    closed_margin = np.minimum(e_small, e_large)
    gap = float(np.max(np.abs(margin - closed_margin)))
    if gap > TOLERANCES.route_agreement:
        raise CrossCheckError(
            f"separability routes disagree by {gap:.3e} on the scan grid")
    return margin


def separability_map(r: float, d_grid, nbar_grid,
                     workers: int | None = None) -> SeparabilityMap:
    """Classify separability over a (d, nbar) grid at fixed r.

    Grids must be ascending and nonnegative.  The margin is computed by
    the vectorised numeric pipeline with the closed-form route asserted
    against it cell by cell; rows are chunked across the scan thread
    pool for large grids.
    """
    d_grid = np.asarray(d_grid, dtype=float)
    nbar_grid = np.asarray(nbar_grid, dtype=float)
    for name, g in (("d_grid", d_grid), ("nbar_grid", nbar_grid)):
        if g.ndim != 1 or g.size == 0:
            raise ValueError(f"{name} must be a nonempty 1-D grid")
        if np.any(g < 0):
            raise ValueError(f"{name} must be nonnegative")
        if g.size > 1 and np.any(np.diff(g) <= 0):
            raise ValueError(f"{name} must be strictly ascending")
    if float(r) < 0:
        raise ValueError("r must be nonnegative")
    r = float(r)

    margin = chunked_rows(
        lambda lo, hi: _margin_rows(r, d_grid, nbar_grid, lo, hi),
        len(d_grid), len(nbar_grid), workers)
    separable = margin >= TOLERANCES.boundary_margin
    boundary = np.full(len(d_grid), np.nan)
    for i in range(len(d_grid)):
        hits = np.nonzero(separable[i])[0]
        if hits.size:
            boundary[i] = nbar_grid[hits[0]]
    return SeparabilityMap(r=r, d_grid=d_grid, nbar_grid=nbar_grid,
                           separable=separable, margin=margin,
                           boundary_nbar=boundary)
