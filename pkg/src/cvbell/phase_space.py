"""Phase-space representation of the damped two-mode squeezed family.

A two-mode Gaussian state is handled in two coordinate systems:

* the real vector x = (Re a1, Im a1, Re a2, Im a2), used for Wigner
  densities and moment matrices,
* the analytic vector (a1, a1*, a2, a2*), used for the W and V matrices
  that the separability analysis consumes.

Every state of the family has a Wigner function

    W(a1, a2) = (2/pi)^2 (1/h) exp{ -[c1 (|a1|^2 + |a2|^2)
                                     + c2 (a1 a2 + a1* a2*)] / (2h) }

parameterised by the coefficient triple (c1, c2, h); the ideal two-mode
squeezed vacuum is the h = 1 member with c1 = 4 cosh 2r and
c2 = -4 sinh 2r.  Densities are evaluated in log space internally and
exponentiated at the boundary, so extreme squeezing underflows to zero
instead of corrupting intermediate results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numerics import TOLERANCES, sym4_eigenvalues

__all__ = [
    "PARITY_SIGNATURE",
    "TwoModePoint",
    "SqueezedStateParams",
    "GaussianForm",
    "CovarianceMatrix",
    "wigner_pure_2mss",
    "wigner_gaussian_eval",
    "w_matrix_from_form",
    "v_from_w",
    "nm_from_v",
    "precision_xvec",
    "covariance_xvec",
    "form_from_covariance_xvec",
]

LOG_PREFACTOR = math.log(4.0 / math.pi ** 2)

#: parity signature E = diag(1, -1, 1, -1) acting on (a1, a1*, a2, a2*)
PARITY_SIGNATURE = np.diag([1.0, -1.0, 1.0, -1.0])
PARITY_SIGNATURE.flags.writeable = False


def _require_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class TwoModePoint:
    """A point (a1, a2) of two-mode phase space.

    Fields may be complex scalars or equal-shaped complex arrays; all
    evaluators broadcast over array-valued points.
    """

    alpha1: complex
    alpha2: complex

    @classmethod
    def from_xvec(cls, x1, x2, x3, x4) -> "TwoModePoint":
        """Build from real coordinates (Re a1, Im a1, Re a2, Im a2)."""
        return cls(alpha1=x1 + 1j * x2, alpha2=x3 + 1j * x4)

    def to_xvec(self):
        """Real coordinates (Re a1, Im a1, Re a2, Im a2); exact inverse
        of :meth:`from_xvec`."""
        a1 = np.asarray(self.alpha1)
        a2 = np.asarray(self.alpha2)
        return a1.real, a1.imag, a2.real, a2.imag


@dataclass(frozen=True)
class SqueezedStateParams:
    """Reduced parameters of the noisy squeezed state.

    r is the accumulated squeezing (coupling x time), d the accumulated
    damping (rate x time) and nbar the reservoir occupation.  The raw
    (kappa, gamma, t) parameterisation enters through :meth:`from_rates`.
    """

    r: float
    d: float
    nbar: float = 0.0

    def __post_init__(self):
        for name in ("r", "d", "nbar"):
            v = _require_finite(name, getattr(self, name))
            if v < 0:
                raise ValueError(f"{name} must be nonnegative, got {v}")
            object.__setattr__(self, name, v)

    @classmethod
    def from_rates(cls, kappa: float, gamma: float, t: float,
                   nbar: float = 0.0) -> "SqueezedStateParams":
        for name, v in (("kappa", kappa), ("gamma", gamma), ("t", t)):
            if _require_finite(name, v) < 0:
                raise ValueError(f"{name} must be nonnegative, got {v}")
        return cls(r=kappa * t, d=gamma * t, nbar=nbar)

    @property
    def p1(self) -> float:
        return self.d + 2.0 * self.r

    @property
    def p2(self) -> float:
        return self.d - 2.0 * self.r


@dataclass(frozen=True)
class GaussianForm:
    """Coefficient triple (c1, c2, h) of a Gaussian Wigner function.

    Valid forms have h > 0 and c1 > |c2| (positive definite exponent).
    Forms produced by the model additionally satisfy the normalisation
    identity c1^2 - c2^2 = 16 h, under which the density integrates to
    one; :meth:`normalization_residual` measures the defect.
    """

    c1: float
    c2: float
    h: float

    def __post_init__(self):
        c1 = _require_finite("c1", self.c1)
        c2 = _require_finite("c2", self.c2)
        h = _require_finite("h", self.h)
        if h <= 0:
            raise ValueError(f"h must be positive, got {h}")
        if c1 <= abs(c2):
            raise ValueError(
                f"non-normalizable form: need c1 > |c2|, got c1={c1}, c2={c2}")
        object.__setattr__(self, "c1", c1)
        object.__setattr__(self, "c2", c2)
        object.__setattr__(self, "h", h)

    def normalization_residual(self) -> float:
        """Relative defect of c1^2 - c2^2 = 16 h (zero for model states)."""
        return abs(self.c1 ** 2 - self.c2 ** 2 - 16.0 * self.h) / (16.0 * self.h)


@dataclass(frozen=True)
class CovarianceMatrix:
    """A symmetric 4x4 matrix in the analytic (a1, a1*, a2, a2*) ordering.

    ``convention`` is "W" for the Wigner precision-style matrix or "V"
    for the normalised correlation matrix W / sqrt(det W).
    """

    entries: np.ndarray
    convention: str

    def __post_init__(self):
        m = np.array(self.entries, dtype=float, copy=True)
        if m.shape != (4, 4):
            raise ValueError("expected a 4x4 matrix")
        if np.max(np.abs(m - m.T)) > TOLERANCES.symmetry_abs * max(1.0, np.max(np.abs(m))):
            raise ValueError("covariance matrix must be symmetric")
        if self.convention not in ("W", "V"):
            raise ValueError(f"unknown convention {self.convention!r}")
        m.flags.writeable = False
        object.__setattr__(self, "entries", m)


# ----------------------------------------------------------------------
# Wigner evaluators
# ----------------------------------------------------------------------

def _quadratic_invariants(point: TwoModePoint):
    """|a1|^2 + |a2|^2 and the cross term a1 a2 + (a1 a2)*."""
    a1 = np.asarray(point.alpha1)
    a2 = np.asarray(point.alpha2)
    radial = np.abs(a1) ** 2 + np.abs(a2) ** 2
    cross = 2.0 * (a1 * a2).real
    return radial, cross


def wigner_pure_2mss(point: TwoModePoint, r: float):
    """Wigner density of the ideal two-mode squeezed vacuum.

    W(a1, a2) = (2/pi)^2 exp[-2 cosh(2r)(|a1|^2 + |a2|^2)
                             + 2 sinh(2r)(a1 a2 + a1* a2*)]

    Strictly positive, bounded by (2/pi)^2, and invariant under joint
    conjugation of both arguments and under mode swap.
    """
    r = _require_finite("r", r)
    if r < 0:
        raise ValueError(f"r must be nonnegative, got {r}")
    radial, cross = _quadratic_invariants(point)
    log_w = LOG_PREFACTOR - 2.0 * math.cosh(2.0 * r) * radial \
        + 2.0 * math.sinh(2.0 * r) * cross
    return np.exp(log_w) if np.ndim(log_w) else float(np.exp(log_w))


def wigner_gaussian_eval(point: TwoModePoint, form: GaussianForm):
    """Wigner density of a coefficient triple at a phase-space point.

    W = (2/pi)^2 (1/h) exp{-[c1 (|a1|^2 + |a2|^2)
                             + c2 (a1 a2 + a1* a2*)] / (2h)}
    """
    radial, cross = _quadratic_invariants(point)
    log_w = LOG_PREFACTOR - math.log(form.h) \
        - (form.c1 * radial + form.c2 * cross) / (2.0 * form.h)
    return np.exp(log_w) if np.ndim(log_w) else float(np.exp(log_w))


# ----------------------------------------------------------------------
# W and V matrices
# ----------------------------------------------------------------------

def w_matrix_from_form(form: GaussianForm) -> CovarianceMatrix:
    """Quadratic-form matrix W of the Wigner exponent, analytic ordering.

    W = (1/2h) [[c1, 0, 0, c2], [0, c1, c2, 0],
                [0, c2, c1, 0], [c2, 0, 0, c1]]

    so that W(a) = (sqrt(det W)/pi^2) exp(-a^dagger W a / 2) with
    a = (a1, a1*, a2, a2*).  Positive definite for every valid form.
    """
    c1, c2, h = form.c1, form.c2, form.h
    m = np.array([
        [c1, 0.0, 0.0, c2],
        [0.0, c1, c2, 0.0],
        [0.0, c2, c1, 0.0],
        [c2, 0.0, 0.0, c1],
    ]) / (2.0 * h)
    return CovarianceMatrix(entries=m, convention="W")


def v_from_w(w: CovarianceMatrix) -> CovarianceMatrix:
    """Normalised correlation matrix V = W / sqrt(det W).

    Checks that the input is positive definite and that the parity
    conjugation identity W = E V^-1 E holds to
    ``TOLERANCES.conjugation_abs`` (it does for every state of this
    family; violation signals an input outside the model).
    """
    if w.convention != "W":
        raise ValueError("expected a W-convention matrix")
    m = w.entries
    eigs = sym4_eigenvalues(m)
    if eigs[0] <= 0.0:
        raise ValueError("W matrix must be positive definite")
    det = float(np.linalg.det(m))
    v = m / math.sqrt(det)
    back = PARITY_SIGNATURE @ np.linalg.inv(v) @ PARITY_SIGNATURE
    scale = max(1.0, float(np.max(np.abs(m))))
    if np.max(np.abs(back - m)) > TOLERANCES.conjugation_abs * scale:
        raise ValueError("parity conjugation identity violated; "
                         "input is not a state of this model family")
    return CovarianceMatrix(entries=v, convention="V")


def nm_from_v(v: CovarianceMatrix):
    """Photon-number and cross-correlation parameters (N, M) of V.

    Requires the doubly degenerate structure
    [[N+1/2, 0, 0, M], [0, N+1/2, M, 0], [0, M, N+1/2, 0],
     [M, 0, 0, N+1/2]] within ``TOLERANCES.pattern_abs``; then
    N = V[0,0] - 1/2 and M = V[0,3].  N >= 0 for physical states.
    """
    if v.convention != "V":
        raise ValueError("expected a V-convention matrix")
    m = v.entries
    a = m[0, 0]
    b = m[0, 3]
    model = np.array([
        [a, 0.0, 0.0, b],
        [0.0, a, b, 0.0],
        [0.0, b, a, 0.0],
        [b, 0.0, 0.0, a],
    ])
    defect = float(np.max(np.abs(m - model)))
    if defect > TOLERANCES.pattern_abs:
        raise ValueError(
            f"V matrix does not have the doubly degenerate structure "
            f"(defect {defect:.3e})")
    return float(a - 0.5), float(b)


# ----------------------------------------------------------------------
# real-coordinate second moments
# ----------------------------------------------------------------------

def precision_xvec(form: GaussianForm) -> np.ndarray:
    """Precision (inverse covariance) matrix over x = (Re a1, Im a1,
    Re a2, Im a2) implied by a coefficient triple."""
    c1, c2, h = form.c1, form.c2, form.h
    return np.array([
        [c1, 0.0, c2, 0.0],
        [0.0, c1, 0.0, -c2],
        [c2, 0.0, c1, 0.0],
        [0.0, -c2, 0.0, c1],
    ]) / h


def covariance_xvec(form: GaussianForm) -> np.ndarray:
    """Second-moment matrix over x = (Re a1, Im a1, Re a2, Im a2).

    Analytic block inverse of :func:`precision_xvec`: with
    q = c1^2 - c2^2, the variances are h c1 / q and the only covariances
    are +-(h c2 / q) between Re a1, Re a2 and Im a1, Im a2.
    """
    c1, c2, h = form.c1, form.c2, form.h
    q = c1 * c1 - c2 * c2
    v0 = h * c1 / q
    cu = -h * c2 / q
    return np.array([
        [v0, 0.0, cu, 0.0],
        [0.0, v0, 0.0, -cu],
        [cu, 0.0, v0, 0.0],
        [0.0, -cu, 0.0, v0],
    ])


def form_from_covariance_xvec(sigma: np.ndarray) -> GaussianForm:
    """Recover the coefficient triple from a model covariance matrix.

    Inverts :func:`covariance_xvec` using the normalisation identity
    c1^2 - c2^2 = 16 h: c1 = 16 Sigma[0,0], c2 = -16 Sigma[0,2],
    h = 16 (Sigma[0,0]^2 - Sigma[0,2]^2).  Raises if the input does not
    carry the model's correlation structure.
    """
    s = np.asarray(sigma, dtype=float)
    if s.shape != (4, 4):
        raise ValueError("expected a 4x4 covariance matrix")
    v0 = float(s[0, 0])
    cu = float(s[0, 2])
    model = np.array([
        [v0, 0.0, cu, 0.0],
        [0.0, v0, 0.0, -cu],
        [cu, 0.0, v0, 0.0],
        [0.0, -cu, 0.0, v0],
    ])
    scale = max(1.0, float(np.max(np.abs(s))))
    if np.max(np.abs(s - model)) > TOLERANCES.pattern_abs * scale:
        raise ValueError("covariance matrix is outside the model family "
                         "(correlation structure violated)")
    return GaussianForm(c1=16.0 * v0, c2=-16.0 * cu,
                        h=16.0 * (v0 * v0 - cu * cu))
