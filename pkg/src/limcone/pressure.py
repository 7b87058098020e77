"""Periodic-orbit pressure, critical exponents as pressure roots, and
Gibbs statistics.

The level-n pressure of a weight r over conjugacy classes is

    P_n(t) = (1/n) log sum_[w] mult(w) exp(-t r(w)),

the sum running over canonical classes of cyclic length exactly n with
mult(w) the primitive period.  Weighted that way the sum runs over the
n-periodic sequences of the shift, the standard periodic-point
approximation of the pressure; dropping the multiplicities would shift
each level by (log n)/n and ruin the level extrapolation (with the
word-length weight the extrapolated root would land at 1.013 instead of
log 3 = 1.0986 at n = 12).

The critical exponent of a positive weight is recovered as the root of
t -> P(-t r).  Each level pressure is strictly decreasing in t, so its
root r_n exists and brackets monotonically; the reported root is the
Richardson value n r_n - (n-1) r_(n-1), which cancels the O(1/n) level
correction.  Extrapolating the pressure values instead and root-finding
afterwards is unreliable: the difference of two level pressures can
turn back upward once the Gibbs weights concentrate, and near the dual
cone walls it may never cross zero.

Weights come either from a representation and a functional, r(w) =
phi(lambda(rho w)), or from an injected weight hook (an exact test
seam, e.g. the word-length weight whose root is log(2k - 1)).
"""

from dataclasses import dataclass

import numpy as np

from .bulk import class_spectra
from .errors import (
    BracketFailureError,
    InvalidParameterError,
    NotInDualConeError,
    NotOnBoundaryError,
)
from .spectra import Functional

__all__ = [
    "PressureTable",
    "RootResult",
    "word_length_weight",
    "level_pressure",
    "pressure_table",
    "extrapolated_pressure",
    "pressure_root",
    "pressure_root_detail",
    "gibbs_direction",
    "pressure_derivative_check",
    "entropy_of_state",
]

DEFAULT_N_MAX = 12
_OSC_DEADBAND = 1e-6


def word_length_weight(n, lam):
    """Test hook: weight n for every class of cyclic length n."""
    return np.full(len(lam), float(n))


class _Weights:
    """Per-level weight values with log multiplicities."""

    def __init__(self, rep, phi, n_max, weight_hook=None):
        self.n_max = n_max
        cs = class_spectra(rep, n_max)
        self.values = {}
        self.log_mult = cs.log_mult
        self.jordan = cs.jordan
        for n in range(1, n_max + 1):
            if weight_hook is not None:
                self.values[n] = np.asarray(weight_hook(n, cs.jordan[n]), dtype=float)
            else:
                self.values[n] = cs.jordan[n] @ phi.coeffs

    def check_positive(self):
        worst = min(self.values[n].min() for n in range(1, self.n_max + 1))
        if worst <= 0:
            raise NotInDualConeError(
                f"weight takes non-positive value {worst:.3e} on an enumerated class;"
                " functional is not in the interior of the dual cone"
            )

    def level(self, n, t):
        x = self.log_mult[n] - t * self.values[n]
        m = x.max()
        return float(m + np.log(np.exp(x - m).sum())) / n

    def level_root(self, n, tol):
        # P_n is strictly decreasing with P_n(0) > 0, so bracket by doubling
        lo, hi = 0.0, 1.0
        while self.level(n, hi) > 0:
            lo, hi = hi, hi * 2
            if hi > 1e3:
                raise BracketFailureError(f"level-{n} pressure root beyond t = 1e3")
        # bisect to 1e-3, then secant polish
        while hi - lo > 1e-3:
            mid = 0.5 * (lo + hi)
            if self.level(n, mid) > 0:
                lo = mid
            else:
                hi = mid
        a, b = lo, hi
        fa, fb = self.level(n, a), self.level(n, b)
        for _ in range(60):
            if fb == fa:
                break
            c = b - fb * (b - a) / (fb - fa)
            if not lo <= c <= hi:
                c = 0.5 * (a + b)
            fc = self.level(n, c)
            a, fa, b, fb = b, fb, c, fc
            if abs(b - a) < tol:
                break
        return b


@dataclass(frozen=True)
class PressureTable:
    """Level pressures P_n(t) for 2 <= n <= n_max with the extrapolated
    limit estimate n P_n - (n-1) P_(n-1) at the top levels."""

    weight_id: str
    t: float
    levels: dict
    extrapolated: float
    n_max: int
    oscillating: bool


@dataclass(frozen=True)
class RootResult:
    value: float
    level_roots: dict
    fallback: bool


def _require_levels(n, lo=2):
    if n < lo:
        raise InvalidParameterError(f"need level n >= {lo}")


def level_pressure(rep, phi, t, n, weight_hook=None) -> float:
    """P_n(t) via a max-shifted log-sum-exp over level-n classes."""
    _require_levels(n)
    w = _Weights(rep, phi, n, weight_hook)
    return w.level(n, t)


def pressure_table(rep, phi, t, n_max=DEFAULT_N_MAX, weight_hook=None) -> PressureTable:
    _require_levels(n_max, lo=3)
    w = _Weights(rep, phi, n_max, weight_hook)
    levels = {n: w.level(n, t) for n in range(2, n_max + 1)}
    preds = [n * levels[n] - (n - 1) * levels[n - 1] for n in range(n_max - 2, n_max + 1) if n - 1 >= 2]
    osc = False
    if len(preds) >= 3:
        d1, d2 = preds[-2] - preds[-3], preds[-1] - preds[-2]
        osc = d1 * d2 < 0 and min(abs(d1), abs(d2)) > _OSC_DEADBAND
    extrap = levels[n_max] if osc else preds[-1]
    weight_id = "hook" if weight_hook is not None else f"phi{tuple(np.round(phi.coeffs, 12))}"
    return PressureTable(weight_id, float(t), levels, float(extrap), n_max, osc)


def extrapolated_pressure(rep, phi, t=1.0, n_max=DEFAULT_N_MAX, weight_hook=None) -> float:
    """Limit pressure estimate n P_n(t) - (n-1) P_(n-1)(t) at n = n_max."""
    return pressure_table(rep, phi, t, n_max, weight_hook).extrapolated


def pressure_root_detail(rep, phi, tol=1e-6, n_max=DEFAULT_N_MAX, weight_hook=None) -> RootResult:
    _require_levels(n_max, lo=4)
    w = _Weights(rep, phi, n_max, weight_hook)
    w.check_positive()
    roots = {n: w.level_root(n, tol) for n in range(n_max - 3, n_max + 1)}
    preds = {n: n * roots[n] - (n - 1) * roots[n - 1] for n in list(roots)[1:]}
    ns = sorted(preds)
    d1 = preds[ns[-2]] - preds[ns[-3]]
    d2 = preds[ns[-1]] - preds[ns[-2]]
    osc = d1 * d2 < 0 and min(abs(d1), abs(d2)) > _OSC_DEADBAND
    value = roots[n_max] if osc else preds[n_max]
    return RootResult(float(value), roots, osc)


def pressure_root(rep, phi, tol=1e-6, n_max=DEFAULT_N_MAX, weight_hook=None) -> float:
    """Critical exponent of the weight: root of t -> P(-t r), estimated
    by Richardson extrapolation of the level roots."""
    return pressure_root_detail(rep, phi, tol, n_max, weight_hook).value


def gibbs_direction(rep, phi0, n, weight_hook=None) -> np.ndarray:
    """Gibbs-weighted mean of the Jordan projection per unit symbolic
    time at level n.  Sum-zero; not re-sorted into the chamber (it
    already is whenever every class is)."""
    _require_levels(n, lo=4)
    w = _Weights(rep, phi0, n, weight_hook)
    lam = w.jordan[n]
    x = w.log_mult[n] - w.values[n]
    x = x - x.max()
    g = np.exp(x)
    return (lam * g[:, None]).sum(axis=0) / (n * g.sum())


def _gibbs_weight_mean(w: _Weights, n: int) -> float:
    # Gibbs mean of the weight itself per unit symbolic time
    x = w.log_mult[n] - w.values[n]
    x = x - x.max()
    g = np.exp(x)
    return float((w.values[n] * g).sum() / (n * g.sum()))


def pressure_derivative_check(rep, phi0, phi1, n, h_step=1e-3):
    """Analytic versus central-difference derivative of the pressure in
    the direction phi1 at phi0.

    analytic = -phi1(gibbs_direction); numeric = central difference of
    s -> P_n(phi0 + s phi1) at s = 0.  The two agree to O(h_step^2).
    """
    _require_levels(n, lo=4)
    if not 1e-6 <= h_step <= 1e-2:
        raise InvalidParameterError("h_step must lie in [1e-6, 1e-2]")
    analytic = -float(phi1(gibbs_direction(rep, phi0, n)))
    p_plus = level_pressure(rep, phi0 + h_step * phi1, 1.0, n)
    p_minus = level_pressure(rep, phi0 - h_step * phi1, 1.0, n)
    numeric = (p_plus - p_minus) / (2 * h_step)
    return analytic, numeric


def entropy_of_state(rep, phi0, n=DEFAULT_N_MAX, weight_hook=None, boundary_tol=1e-3) -> float:
    """Metric-entropy value attached to a boundary functional: the Gibbs
    mean of the weight per unit symbolic time, which for a matrix weight
    equals phi0(gibbs_direction).

    Requires phi0 certified on the unit-exponent boundary: the pressure
    root along its ray must equal 1 within boundary_tol.
    """
    _require_levels(n, lo=4)
    root = pressure_root(rep, phi0, n_max=n, weight_hook=weight_hook)
    if abs(root - 1.0) > boundary_tol:
        raise NotOnBoundaryError(
            f"pressure root along the ray is {root:.6f}, not 1: functional not on the boundary"
        )
    w = _Weights(rep, phi0, n, weight_hook)
    return _gibbs_weight_mean(w, n)
