"""Maximum-likelihood fitting of the seven GTS parameters by damped
Newton-Raphson over an FRFT-evaluated likelihood."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.linalg import lu_factor, lu_solve
from scipy.special import gamma as _gamma

from .cumulants import cumulants
from .exponents import psi_gts
from .inversion import DensityGrid, GridSpec, NormalizationError, default_xi_max, invert_cf
from .params import PARAM_NAMES, GtsParams

PDF_FLOOR = 1e-300  # keeps log f finite when a tail point underflows the grid

TRACE_COLUMNS = (
    "Iterations",
    *PARAM_NAMES,
    "Log(ML)",
    "||dLog(ML)/dV||",
    "Max Eigen Value",
)


class StepCollision(ValueError):
    """A finite-difference step left the parameter domain even after shrinking."""


@dataclass(frozen=True)
class FitState:
    params: GtsParams
    log_likelihood: float
    gradient: np.ndarray
    hessian: np.ndarray
    gradient_norm: float
    max_eigenvalue: float
    iteration: int

    def trace_row(self) -> list:
        return [
            self.iteration,
            *self.params.as_vector().tolist(),
            self.log_likelihood,
            self.gradient_norm,
            self.max_eigenvalue,
        ]


@dataclass(frozen=True)
class FitTrace:
    states: tuple
    converged: bool
    reason: str  # GradientTol | MaxIter | LineSearchFail | SingularHessian

    @property
    def final(self) -> FitState:
        return self.states[-1]


def _grid_density(p: GtsParams, g: GridSpec) -> DensityGrid:
    return invert_cf(lambda xi: psi_gts(xi, p), g)


def log_likelihood(data, p: GtsParams, g: GridSpec) -> float:
    """l(data; p) = sum_j log f(data_j) with f from one CF inversion on g.

    The pdf is interpolated monotone-cubically at each observation and
    floored at 1e-300 before the log.  If the data exceed the grid's x-range
    the range is expanded for this evaluation.
    """
    data = np.asarray(data, dtype=float)
    if data.size == 0:
        raise ValueError("data must be non-empty")
    if not np.isfinite(data).all():
        raise ValueError("data must be finite")
    if p.alpha_plus + p.alpha_minus <= 0.0:
        raise ValueError("degenerate parameters: both jump intensities are zero")
    lo, hi = float(data.min()), float(data.max())
    if lo < g.x_min or hi > g.x_max:
        pad = 0.1 * (g.x_max - g.x_min)
        g = g.with_range(min(lo - pad, g.x_min), max(hi + pad, g.x_max))
    d = _grid_density(p, g)
    pdf = np.maximum(d.pdf_at(data), PDF_FLOOR)
    return float(np.sum(np.log(pdf)))


def _fd_steps(v: np.ndarray, max_shrinks: int = 5) -> np.ndarray:
    """Relative central-difference steps, shrunk (up to 5 halvings) until the
    whole perturbation box stays inside the parameter domain."""
    h = 1e-4 * np.maximum(np.abs(v), 1e-2)
    for j in range(v.size):
        for attempt in range(max_shrinks + 1):
            ok = True
            for sign in (+1.0, -1.0):
                trial = v.copy()
                trial[j] += sign * h[j]
                try:
                    GtsParams.from_vector(trial)
                except ValueError:
                    ok = False
                    break
            if ok:
                break
            if attempt == max_shrinks:
                raise StepCollision(
                    f"parameter {PARAM_NAMES[j]}={v[j]:g} sits too close to the "
                    f"domain boundary for finite differences (step {h[j]:g})"
                )
            h[j] *= 0.5
    return h


def score_and_hessian(data, p: GtsParams, g: GridSpec, loglik_fn=None):
    """Central-difference gradient and symmetrized Hessian of log_likelihood.

    Step per coordinate: 1e-4 * max(|V_j|, 1e-2), halved near domain
    boundaries (StepCollision after 5 shrinks).  The Hessian uses the
    standard 4-point cross stencil and is returned as (H + H^T)/2.
    ``loglik_fn`` substitutes a different objective with the same signature
    (used to verify the stencil on closed-form surfaces).
    """
    if loglik_fn is None:
        loglik_fn = log_likelihood
    data = np.asarray(data, dtype=float)
    v0 = p.as_vector()
    h = _fd_steps(v0)
    nparam = v0.size

    cache: dict = {}

    def lval(offsets: tuple) -> float:
        if offsets not in cache:
            v = v0.copy()
            for j, s in offsets:
                v[j] += s * h[j]
            cache[offsets] = loglik_fn(data, GtsParams.from_vector(v), g)
        return cache[offsets]

    l0 = lval(())
    grad = np.empty(nparam)
    hess = np.zeros((nparam, nparam))
    for j in range(nparam):
        lp = lval(((j, +1.0),))
        lm = lval(((j, -1.0),))
        grad[j] = (lp - lm) / (2.0 * h[j])
        hess[j, j] = (lp - 2.0 * l0 + lm) / h[j] ** 2
    for j in range(nparam):
        for k in range(j + 1, nparam):
            lpp = lval(((j, +1.0), (k, +1.0)))
            lpm = lval(((j, +1.0), (k, -1.0)))
            lmp = lval(((j, -1.0), (k, +1.0)))
            lmm = lval(((j, -1.0), (k, -1.0)))
            hess[j, k] = hess[k, j] = (lpp - lpm - lmp + lmm) / (4.0 * h[j] * h[k])
    hess = 0.5 * (hess + hess.T)
    return grad, hess


def max_eigenvalue(h) -> float:
    """Largest eigenvalue of a symmetric matrix by cyclic Jacobi rotations,
    swept until the off-diagonal Frobenius norm drops below 1e-12."""
    a = np.array(h, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("max_eigenvalue expects a square matrix")
    if not np.allclose(a, a.T, rtol=0.0, atol=1e-8 * max(1.0, np.abs(a).max())):
        raise ValueError("max_eigenvalue expects a symmetric matrix")
    a = 0.5 * (a + a.T)
    n = a.shape[0]
    for _ in range(60):
        off = np.sqrt(np.sum(np.tril(a, -1) ** 2) * 2.0)
        if off < 1e-12:
            break
        for pi in range(n - 1):
            for qi in range(pi + 1, n):
                apq = a[pi, qi]
                if apq == 0.0:
                    continue
                gap = 0.5 * (a[qi, qi] - a[pi, pi])
                if abs(gap) > abs(apq) / np.finfo(float).eps:
                    t = apq / (2.0 * gap)  # small-angle limit; theta would overflow
                elif gap == 0.0:
                    t = 1.0
                else:
                    theta = gap / apq
                    t = np.sign(theta) / (abs(theta) + np.hypot(theta, 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                rot = np.eye(n)
                rot[pi, pi] = rot[qi, qi] = c
                rot[pi, qi] = s
                rot[qi, pi] = -s
                a = rot.T @ a @ rot
    return float(np.max(np.diag(a)))


def moment_matched_init(data) -> GtsParams:
    """Starting point from sample cumulants.

    Both stability indexes are pinned at 0.5 and the tempering rates tied
    (lambda+ = lambda-), which makes kappa_2..kappa_4 solvable in closed form
    for (alpha+, alpha-, lambda); mu then matches kappa_1.  Negative
    side-intensity solutions are floored at 5% of the total intensity.
    """
    data = np.asarray(data, dtype=float)
    m = float(data.mean())
    c = data - m
    k2 = float(np.mean(c**2))
    k3 = float(np.mean(c**3))
    k4 = float(np.mean(c**4) - 3.0 * k2**2)
    if k2 <= 0.0:
        raise ValueError("degenerate sample: zero variance")
    if k4 <= 0.0:
        k4 = 0.5 * k2**2  # light-tailed sample; pick a mild heavy-tail prior
    beta = 0.5
    lam = float(np.sqrt((2.5 * 1.5) * k2 / k4))
    a_sum = k2 * lam ** (2.0 - beta) / _gamma(2.0 - beta)
    a_diff = k3 * lam ** (3.0 - beta) / _gamma(3.0 - beta)
    floor = 0.05 * a_sum
    a_plus = max(0.5 * (a_sum + a_diff), floor)
    a_minus = max(0.5 * (a_sum - a_diff), floor)
    mu = m - (a_plus - a_minus) * _gamma(1.0 - beta) / lam ** (1.0 - beta)
    return GtsParams(mu, beta, beta, a_plus, a_minus, lam, lam)


def fit_grid(data, init: GtsParams, n_points: int = 16384) -> GridSpec:
    """One frozen grid reused by every likelihood evaluation of a fit: the
    x-range covers both the initial law's mean +- 15 sd and the data with
    margin; the frequency cutoff gets a 1.5x safety factor so the grid stays
    valid as the parameters move."""
    data = np.asarray(data, dtype=float)
    k = cumulants(init, 2)
    sd = float(np.sqrt(k[2]))
    lo = min(k[1] - 15.0 * sd, float(data.min()) - 2.0 * sd)
    hi = max(k[1] + 15.0 * sd, float(data.max()) + 2.0 * sd)
    xi_max = 1.5 * default_xi_max(lambda xi: psi_gts(xi, init))
    return GridSpec(n_points=n_points, x_min=lo, x_max=hi, xi_max=xi_max)


def _try_likelihood(data, v: np.ndarray, g: GridSpec):
    """Candidate evaluation for the line search; None marks an infeasible point."""
    try:
        cand = GtsParams.from_vector(v)
    except ValueError:
        return None, None
    try:
        return cand, log_likelihood(data, cand, g)
    except (NormalizationError, ValueError, ArithmeticError):
        return None, None


def fit(data, init: GtsParams, grad_tol: float = 1e-4, max_iter: int = 200,
        g: GridSpec | None = None, max_halvings: int = 20) -> FitTrace:
    """Damped Newton ascent of the log-likelihood.

    Each iteration records a FitState (params, l, gradient, Hessian, gradient
    norm, max eigenvalue).  Convergence requires gradient_norm <= grad_tol
    AND max_eigenvalue <= 0.

    While the Hessian is negative definite the step is pure damped Newton:
    full step if it raises l, otherwise halved up to ``max_halvings`` times.
    Away from the optimum the FD Hessian is routinely indefinite or singular
    and the raw Newton direction need not be an ascent direction; those
    iterations solve the eigenvalue-shifted system (H - tau*I) delta = grad
    with tau just above the largest eigenvalue — the shifted matrix is
    negative definite, making delta a guaranteed ascent direction that
    interpolates between Newton (small tau) and scaled gradient ascent
    (large tau).  tau grows tenfold until a step is accepted; a plain
    gradient-ascent step is the last resort before the fit is declared stuck.
    """
    data = np.asarray(data, dtype=float)
    if g is None:
        g = fit_grid(data, init)

    states: list[FitState] = []
    p = init
    l_cur = log_likelihood(data, p, g)

    def line_search(v0: np.ndarray, direction: np.ndarray):
        t = 1.0
        for _ in range(max_halvings + 1):
            cand, l_new = _try_likelihood(data, v0 + t * direction, g)
            if cand is not None and l_new > l_cur:
                return cand, l_new
            t *= 0.5
        return None, None

    def solve_step(mat: np.ndarray, rhs: np.ndarray):
        """LU solve; None when a pivot is numerically zero (rel < 1e-12)."""
        try:
            lu, piv = lu_factor(mat)
        except Exception:
            return None
        diag = np.abs(np.diag(lu))
        if diag.min() < 1e-12 * max(diag.max(), 1.0):
            return None
        return lu_solve((lu, piv), rhs)

    for it in range(max_iter + 1):
        grad, hess = score_and_hessian(data, p, g)
        gn = float(np.linalg.norm(grad))
        me = max_eigenvalue(hess)
        states.append(FitState(p, l_cur, grad, hess, gn, me, it))

        if gn <= grad_tol and me <= 0.0:
            return FitTrace(tuple(states), True, "GradientTol")
        if it == max_iter:
            return FitTrace(tuple(states), False, "MaxIter")

        v0 = p.as_vector()
        step = solve_step(hess, -grad)
        singular = step is None

        cand = l_new = None
        if me < 0.0 and step is not None:
            cand, l_new = line_search(v0, step)

        if cand is None:
            # shifted-Newton rescue for indefinite/singular Hessians
            tau = me + max(1.0, 1e-3 * float(np.abs(np.diag(hess)).max()))
            eye = np.eye(hess.shape[0])
            for _ in range(9):
                step = solve_step(hess - tau * eye, -grad)
                if step is not None:
                    cand, l_new = line_search(v0, step)
                    if cand is not None:
                        break
                tau *= 10.0

        if cand is None:
            cand, l_new = line_search(v0, grad / max(gn, 1.0))
        if cand is None:
            reason = "SingularHessian" if singular else "LineSearchFail"
            return FitTrace(tuple(states), False, reason)
        p, l_cur = cand, l_new

    raise AssertionError("unreachable")


def trace_rows(trace: FitTrace) -> list[list]:
    """Iteration table in the eleven-column layout used by the CLI."""
    return [s.trace_row() for s in trace.states]
