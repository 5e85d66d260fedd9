"""Double-well potentials W, the scaled well W/eps^2, and the tension constant."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import quad


class PotentialAssumptionError(ValueError):
    """A well failed one of the structural assumptions (evenness, minima, ...)."""


@dataclass(frozen=True)
class Potential:
    """Double well with evaluation rules for W, W' and W''.

    The solvers require: W even, min W = 0 attained exactly at +-1,
    W''(1) > 0, W strictly decreasing on [0,1] and strictly increasing past 1.
    Use validate_assumptions to check a user-defined well.
    """

    kind: str
    w: Callable
    wp: Callable
    wpp: Callable

    @property
    def curvature(self) -> float:
        """W''(1), the well stiffness driving the tail decay rate."""
        return float(self.wpp(1.0))


def quartic() -> Potential:
    """The model well W(t) = (1-t^2)^2/4."""
    return Potential(
        kind="quartic",
        w=lambda t: 0.25 * (1.0 - np.asarray(t) ** 2) ** 2,
        wp=lambda t: np.asarray(t) ** 3 - np.asarray(t),
        wpp=lambda t: 3.0 * np.asarray(t) ** 2 - 1.0,
    )


def potential_by_name(name: str) -> Potential:
    if name == "quartic":
        return quartic()
    raise ValueError(f"unknown well kind: {name!r}")


def w_eval(pot: Potential, t):
    return pot.w(t)


def w_prime(pot: Potential, t):
    return pot.wp(t)


def w_second(pot: Potential, t):
    return pot.wpp(t)


def w_eps(pot: Potential, t, eps: float):
    """Scaled well W/eps^2."""
    return pot.w(t) / eps**2


def f_eps(pot: Potential, t, eps: float):
    """Nonlinearity -W'/eps^2 appearing in the Euler-Lagrange equations."""
    return -pot.wp(t) / eps**2


@dataclass
class AssumptionReport:
    ok: bool
    violations: list = field(default_factory=list)

    def __str__(self):
        if self.ok:
            return "all well assumptions hold"
        return "; ".join(f"({c}) {msg}" for c, msg in self.violations)


def validate_assumptions(pot: Potential, n_samples: int = 10_000, tol: float = 1e-9) -> AssumptionReport:
    """Check the four structural clauses on a sample of [-3, 3].

    (i) evenness, (ii) min W = 0 with zero set {-1, 1}, (iii) W''(1) > 0,
    (iv) strict monotonicity on [0, 1] and on t > 1.
    """
    t = np.linspace(-3.0, 3.0, n_samples)
    wt = np.asarray(pot.w(t), dtype=float)
    violations = []

    if not np.allclose(wt, pot.w(-t), rtol=0.0, atol=tol):
        violations.append(("i", "W is not even"))

    if np.min(wt) < -tol:
        violations.append(("ii", "W takes negative values"))
    if abs(float(pot.w(1.0))) > tol or abs(float(pot.w(-1.0))) > tol:
        violations.append(("ii", "W(+-1) != 0"))
    else:
        # zeros only at +-1: away from the wells W must be positive
        away = np.abs(np.abs(t) - 1.0) > 1e-2
        if np.min(wt[away]) <= tol:
            violations.append(("ii", "W vanishes away from +-1"))

    if pot.curvature <= 0.0:
        violations.append(("iii", "W''(1) <= 0"))

    s = np.linspace(0.0, 1.0, n_samples // 2)
    ws = np.asarray(pot.w(s), dtype=float)
    if np.max(np.diff(ws)) >= 0.0:
        violations.append(("iv", "W not strictly decreasing on [0,1]"))
    u = np.linspace(1.0, 3.0, n_samples // 2)
    wu = np.asarray(pot.w(u), dtype=float)
    if np.min(np.diff(wu)) <= 0.0:
        violations.append(("iv", "W not strictly increasing for t > 1"))

    return AssumptionReport(ok=not violations, violations=violations)


def require_valid(pot: Potential):
    report = validate_assumptions(pot)
    if not report.ok:
        raise PotentialAssumptionError(str(report))


def cw_constant(pot: Potential) -> float:
    """Surface tension integral over the well, int_{-1}^{1} sqrt(W)."""
    val, err = quad(lambda s: np.sqrt(max(float(pot.w(s)), 0.0)), -1.0, 1.0,
                    epsabs=1e-12, epsrel=1e-12, limit=200)
    if err > 1e-10:
        raise RuntimeError(f"tension quadrature did not reach 1e-10 (err={err:.2e})")
    return val


def decay_rate(pot: Potential, n: int, eps: float) -> float:
    """Decaying root of the tail linearization at the wells.

    Linearizing the profile equation at h = 1 with tanh(tau) ~ 1 gives
    mu'' + (n-1) mu' - (W''(1)/eps^2) mu = 0; the decaying mode has rate
    [-(n-1) + sqrt((n-1)^2 + 4 W''(1)/eps^2)] / 2.
    """
    m = n - 1
    return 0.5 * (-m + np.sqrt(m * m + 4.0 * pot.curvature / eps**2))


@dataclass(frozen=True)
class WellConstants:
    c_w: float
    pot: Potential

    @classmethod
    def of(cls, pot: Potential) -> "WellConstants":
        return cls(c_w=cw_constant(pot), pot=pot)

    def decay_rate(self, n: int, eps: float) -> float:
        return decay_rate(self.pot, n, eps)
