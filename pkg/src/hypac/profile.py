"""The odd increasing transition profile on the weighted line.

Minimizes int_0^T (h'^2/2 + W(h)/eps^2) cosh^{n-1}(tau) dtau over piecewise
linear h with h(0) = 0 and a free right value, then extends oddly and with an
exponential tail model past the truncation.  The discrete minimizer satisfies
a conservative finite-difference form of

    h'' + (n-1) tanh(tau) h' = W'(h)/eps^2

exactly (the scaled energy gradient), which is what profile_residual reports.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.linalg import solveh_banded, LinAlgError

from .potential import Potential, decay_rate, require_valid


class ProfileError(RuntimeError):
    pass


@dataclass
class ProfileOptions:
    T: float | None = None
    node_count: int | None = None
    tol: float = 1e-8
    max_iter: int = 200
    seed: str = "tanh"          # "tanh" | "ramp"
    tail_tol: float = 0.01      # h(T) must clear 1 - tail_tol


def _graded_grid(eps: float, T: float, node_count: int | None) -> np.ndarray:
    """Nodes on [0, T]: uniform spacing inside the layer, geometric outside."""
    inner_end = min(10.0 * eps, T)
    if node_count is None:
        h_in = eps / 10.0
    else:
        h_in = inner_end / max(4, int(round(0.6 * node_count)))
    n_in = max(4, int(round(inner_end / h_in)))
    inner = np.linspace(0.0, inner_end, n_in + 1)
    if inner_end >= T - 1e-15:
        return inner
    ratio = 1.12
    cells = []
    pos = inner_end
    step = inner[-1] - inner[-2]
    while pos < T:
        step *= ratio
        cells.append(step)
        pos += step
    cells = np.array(cells)
    cells *= (T - inner_end) / cells.sum()
    outer = inner_end + np.cumsum(cells)
    outer[-1] = T
    return np.concatenate([inner, outer])


def _energy_parts(tau, h, n, eps, pot):
    dt = np.diff(tau)
    mid = 0.5 * (tau[:-1] + tau[1:])
    weight = np.cosh(mid) ** (n - 1)
    slope = np.diff(h) / dt
    wavg = 0.5 * (pot.w(h[:-1]) + pot.w(h[1:]))
    return dt, weight, slope, dt * weight * (0.5 * slope**2 + wavg / eps**2)


def _half_energy(tau, h, n, eps, pot) -> float:
    return float(np.sum(_energy_parts(tau, h, n, eps, pot)[3]))


def _grad_and_mass(tau, h, n, eps, pot):
    """Gradient of the half-line discrete energy w.r.t. h[1:], plus lumped masses."""
    dt, weight, slope, _ = _energy_parts(tau, h, n, eps, pot)
    flux = weight * slope
    wp = pot.wp(h) / eps**2
    m = np.empty(h.size)
    m[1:-1] = 0.5 * (dt[:-1] * weight[:-1] + dt[1:] * weight[1:])
    m[-1] = 0.5 * dt[-1] * weight[-1]
    g = np.empty(h.size - 1)
    g[:-1] = flux[:-1] - flux[1:] + m[1:-1] * wp[1:-1]
    g[-1] = flux[-1] + m[-1] * wp[-1]
    return g, m[1:], weight, dt


def solve_profile(n: int, eps: float, pot: Potential, opts: ProfileOptions | None = None) -> "ProfileSolution":
    """Direct minimization of the weighted layer energy with h(0) = 0."""
    if n < 1:
        raise ValueError("weight exponent needs n >= 1")
    if eps <= 0:
        raise ValueError("eps must be positive")
    require_valid(pot)
    opts = opts or ProfileOptions()
    T = opts.T if opts.T is not None else 20.0 * max(eps, 1.0)
    t_min = 10.0 * eps * max(1.0, np.sqrt(2.0 / pot.curvature))
    if T < t_min:
        raise ValueError(f"truncation T={T} below the layer requirement {t_min:.3g}")

    tau = _graded_grid(eps, T, opts.node_count)
    if opts.seed == "ramp":
        h = np.minimum(tau / eps, 1.0) * (1.0 - 1e-9)
    else:
        h = np.tanh(tau / (np.sqrt(2.0) * eps))
    h[0] = 0.0

    energy = _half_energy(tau, h, n, eps, pot)
    res_hist = []
    for _ in range(opts.max_iter):
        g, mass, weight, dt = _grad_and_mass(tau, h, n, eps, pot)
        res = float(np.max(np.abs(g) / mass))
        res_hist.append(res)
        if res <= opts.tol:
            break
        # tridiagonal Hessian on the free nodes; banded Cholesky, gradient fallback
        wpp = pot.wpp(h) / eps**2
        diag = np.empty(h.size - 1)
        diag[:-1] = weight[:-1] / dt[:-1] + weight[1:] / dt[1:] + mass[:-1] * wpp[1:-1]
        diag[-1] = weight[-1] / dt[-1] + mass[-1] * wpp[-1]
        off = -weight[1:] / dt[1:]
        ab = np.zeros((2, diag.size))
        ab[0, 1:] = off
        ab[1] = diag
        try:
            step = solveh_banded(ab, -g)
        except LinAlgError:
            step = -g / diag.clip(min=np.max(np.abs(diag)) * 1e-3)
        alpha = 1.0
        gdot = float(g @ step)
        if gdot >= 0.0:
            step = -g / np.maximum(diag, 1e-12)
            gdot = float(g @ step)
        accepted = False
        for _ls in range(50):
            trial = h.copy()
            trial[1:] += alpha * step
            e_trial = _half_energy(tau, trial, n, eps, pot)
            if e_trial <= energy + 1e-4 * alpha * gdot:
                h, energy, accepted = trial, e_trial, True
                break
            alpha *= 0.5
        if not accepted:
            break
    else:
        raise ProfileError(f"profile solve did not converge; last residual {res_hist[-1]:.3e}")
    if res_hist and res_hist[-1] > opts.tol:
        g, mass, _, _ = _grad_and_mass(tau, h, n, eps, pot)
        res = float(np.max(np.abs(g) / mass))
        if res > opts.tol:
            raise ProfileError(f"profile solve stalled at residual {res:.3e} > tol {opts.tol:.1e}")

    if h[-1] < 1.0 - opts.tail_tol or h[-1] < 0.99:
        raise ProfileError("truncation too small: h(T) = %.6f" % h[-1])
    # keep strictly below 1; past saturation the well force is below float
    # resolution, so monotonicity is only meaningful where 1 - h resolves
    h = np.minimum(h, 1.0 - 1e-16)
    d = np.diff(h)
    live = h[:-1] < 1.0 - 1e-12
    if np.any(d[live] <= 0.0) or np.any(d[~live] < -1e-14):
        raise ProfileError("minimizer is not strictly increasing (solver bug)")
    if h[0] != 0.0 or np.any(h < 0.0):
        raise ProfileError("minimizer left the admissible range [0, 1)")

    return ProfileSolution(n=n, eps=eps, pot=pot, nodes=tau, values=h, opts=opts)


@dataclass
class ProfileSolution:
    """Sampled odd increasing profile with tail model and cached interpolant."""

    n: int
    eps: float
    pot: Potential
    nodes: np.ndarray
    values: np.ndarray
    opts: ProfileOptions
    tail_amp: float = field(init=False)
    tail_rate: float = field(init=False)
    slope0: float = field(init=False)
    energy: float = field(init=False)
    _interp: PchipInterpolator = field(init=False, repr=False)
    _dinterp: PchipInterpolator = field(init=False, repr=False)

    def __post_init__(self):
        self.tail_rate = decay_rate(self.pot, self.n, self.eps)
        self.tail_amp = 1.0 - float(self.values[-1])
        tau_sym = np.concatenate([-self.nodes[:0:-1], self.nodes])
        val_sym = np.concatenate([-self.values[:0:-1], self.values])
        self._interp = PchipInterpolator(tau_sym, val_sym)
        self._dinterp = self._interp.derivative()
        self.slope0 = float(self._dinterp(0.0))
        self.energy = 2.0 * _half_energy(self.nodes, self.values, self.n, self.eps, self.pot) \
            + 2.0 * self._tail_energy()

    @property
    def T(self) -> float:
        return float(self.nodes[-1])

    def _tail_energy(self) -> float:
        lam, amp = self.tail_rate, self.tail_amp
        if amp <= 0.0:
            return 0.0
        s = np.linspace(0.0, 40.0 / lam, 400)
        htail = 1.0 - amp * np.exp(-lam * s)
        dens = 0.5 * (amp * lam * np.exp(-lam * s)) ** 2 + self.pot.w(htail) / self.eps**2
        with np.errstate(over="ignore"):
            weight = np.cosh(self.T + s) ** (self.n - 1)
        integrand = np.where(np.isfinite(weight), dens * weight, 0.0)
        return float(np.trapezoid(integrand, s))

    def __call__(self, tau):
        return evaluate_profile(self, tau)


def evaluate_profile(p: ProfileSolution, tau):
    """Odd evaluation: monotone cubic on [-T, T], exponential tail beyond."""
    tau = np.asarray(tau, dtype=float)
    a = np.abs(tau)
    sgn = np.sign(tau)
    inside = a <= p.T
    core = p._interp(np.where(inside, a, 0.0))
    with np.errstate(over="ignore"):
        tail = 1.0 - p.tail_amp * np.exp(-p.tail_rate * (np.where(inside, 0.0, a) - p.T))
    out = sgn * np.where(inside, core, np.minimum(tail, 1.0 - 1e-16))
    return out if out.ndim else float(out)


def profile_slope(p: ProfileSolution, tau):
    """Derivative of the extended profile (even function of tau)."""
    tau = np.asarray(tau, dtype=float)
    a = np.abs(tau)
    inside = a <= p.T
    core = p._dinterp(np.where(inside, a, 0.0))
    with np.errstate(over="ignore"):
        tail = p.tail_amp * p.tail_rate * np.exp(-p.tail_rate * (np.where(inside, 0.0, a) - p.T))
    out = np.where(inside, core, tail)
    return out if out.ndim else float(out)


def g_of_xi(p: ProfileSolution, xi):
    """Profile in the half-space slope variable: g(xi) = h(arcsinh(xi))."""
    return evaluate_profile(p, np.arcsinh(xi))


def profile_energy(p: ProfileSolution) -> float:
    """Full-line weighted energy (trapezoidal on the grid plus tail model)."""
    return p.energy


def profile_residual(p: ProfileSolution) -> float:
    """Max interior defect of the conservative discrete form of the profile ODE."""
    g, mass, _, _ = _grad_and_mass(p.nodes, p.values, p.n, p.eps, p.pot)
    return float(np.max(np.abs(g[:-1]) / mass[:-1]))
