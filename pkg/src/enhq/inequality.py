"""Radial quadrature of the quartic-vs-gradient multiplicative inequality.

The witness family is phi(r) = r^(-alpha) exp(-r^2) in n space
dimensions.  Both sides are reduced to one-dimensional radial integrals
with an inner cutoff eps; sweeping eps down exposes whether the quartic
side diverges while the gradient side stays finite.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad
from scipy.special import gammaln

__all__ = [
    "RadialField",
    "InequalityReport",
    "sphere_area",
    "lhs",
    "rhs",
    "scan",
    "lhs_slope_expected",
    "rhs_slope_expected",
]

_R_MAX = 30.0  # exp(-2 r^2) is below 1e-300 well before this


def sphere_area(n: int) -> float:
    """Area of the unit (n-1)-sphere in R^n."""
    return float(2.0 * np.pi ** (n / 2.0) / np.exp(gammaln(n / 2.0)))


@dataclass(frozen=True)
class RadialField:
    """phi(r) = r^(-alpha) e^(-r^2) in n spatial dimensions."""

    alpha: float
    n: int
    amplitude: float = 1.0

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"need an integer dimension n >= 2, got n = {self.n}")
        if not 0.0 <= self.alpha < (self.n - 2) / 2.0:
            raise ValueError(
                f"alpha must lie in [0, (n-2)/2) = [0, {(self.n - 2) / 2}), got {self.alpha}"
            )
        if self.amplitude <= 0:
            raise ValueError("amplitude must be positive")

    def profile(self, r):
        r = np.asarray(r, dtype=float)
        return self.amplitude * r ** (-self.alpha) * np.exp(-r * r)

    def dprofile(self, r):
        r = np.asarray(r, dtype=float)
        return -(self.alpha / r + 2.0 * r) * self.profile(r)


def _radial_integral(f, eps: float) -> float:
    """int_eps^inf f(r) dr via the substitution r = e^u (adaptive quad)."""
    if eps <= 0:
        raise ValueError("inner cutoff eps must be positive")
    g = lambda u: f(np.exp(u)) * np.exp(u)
    val, err = quad(g, np.log(eps), np.log(_R_MAX), limit=500, epsabs=0.0, epsrel=1e-11)
    if not np.isfinite(val) or (val != 0 and err / abs(val) > 1e-8):
        raise RuntimeError(f"radial quadrature did not converge (value {val}, err {err})")
    return float(val)


def lhs(field: RadialField, m0: float, eps: float) -> float:
    """{ omega_n int_eps^inf phi^4 r^(n-1) dr }^(1/2)."""
    v = _radial_integral(lambda r: field.profile(r) ** 4 * r ** (field.n - 1), eps)
    return float(np.sqrt(sphere_area(field.n) * v))


def rhs(field: RadialField, m0: float, eps: float) -> float:
    """omega_n int_eps^inf [phi'(r)^2 + m0^2 phi(r)^2] r^(n-1) dr."""
    v = _radial_integral(
        lambda r: (field.dprofile(r) ** 2 + m0**2 * field.profile(r) ** 2) * r ** (field.n - 1),
        eps,
    )
    return float(sphere_area(field.n) * v)


def lhs_slope_expected(field: RadialField) -> float:
    """Power-counting slope of log lhs vs log eps (0 when convergent)."""
    ex = 4.0 * field.alpha - field.n
    return -ex / 2.0 if ex > 0 else 0.0


def rhs_slope_expected(field: RadialField) -> float:
    ex = 2.0 * field.alpha + 2.0 - field.n
    return -ex if ex > 0 else 0.0


@dataclass(frozen=True)
class InequalityReport:
    n: int
    m0: float
    eps_sequence: tuple
    rows: tuple  # (alpha, eps, lhs, rhs, ratio) per cell
    verdicts: tuple  # per alpha: dict with slopes and divergence flags
    max_ratio: float


DEFAULT_EPS = tuple(np.geomspace(1e-2, 1e-7, 6))


def _fit_slope(eps_tail, val_tail):
    x = np.log(np.asarray(eps_tail))
    y = np.log(np.asarray(val_tail))
    slope, intercept = np.polyfit(x, y, 1)
    pred = slope * x + intercept
    ss_res = float(np.sum((y - pred) ** 2))
    ss_tot = float(np.sum((y - np.mean(y)) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return float(slope), r2


def scan(n: int, alpha_grid, eps_sequence=DEFAULT_EPS, m0: float = 1.0) -> InequalityReport:
    """Sweep alpha and the inner cutoff; fit divergence slopes on the tail.

    A side is flagged divergent when its fitted log-log slope against eps
    is below -0.05 with R^2 > 0.99.
    """
    eps_sequence = tuple(float(e) for e in eps_sequence)
    if len(eps_sequence) < 2 or any(
        b >= a for a, b in zip(eps_sequence, eps_sequence[1:])
    ):
        raise ValueError("eps_sequence must be strictly decreasing")
    if eps_sequence[-1] < 1e-8:
        raise ValueError("eps_sequence must stay at or above 1e-8")
    rows = []
    verdicts = []
    max_ratio = 0.0
    for alpha in alpha_grid:
        field = RadialField(alpha=float(alpha), n=n)
        ls, rs = [], []
        for eps in eps_sequence:
            l = lhs(field, m0, eps)
            r = rhs(field, m0, eps)
            ls.append(l)
            rs.append(r)
            ratio = l / r
            max_ratio = max(max_ratio, ratio)
            rows.append((float(alpha), eps, l, r, ratio))
        tail = slice(-3, None)
        l_slope, l_r2 = _fit_slope(eps_sequence[tail], ls[tail])
        r_slope, r_r2 = _fit_slope(eps_sequence[tail], rs[tail])
        verdicts.append({
            "alpha": float(alpha),
            "lhs_slope": l_slope,
            "lhs_divergent": bool(l_slope < -0.05 and l_r2 > 0.99),
            "rhs_slope": r_slope,
            "rhs_divergent": bool(r_slope < -0.05 and r_r2 > 0.99),
            "ratio_growth": (ls[-1] / rs[-1]) / (ls[0] / rs[0]),
        })
    return InequalityReport(
        n=n, m0=m0, eps_sequence=eps_sequence,
        rows=tuple(rows), verdicts=tuple(verdicts), max_ratio=float(max_ratio),
    )
