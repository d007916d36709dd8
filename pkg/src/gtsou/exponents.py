"""Characteristic exponents: the GTS law, its background driving process,
and the self-decomposable law that a GTS driver generates."""

from __future__ import annotations

import numpy as np
from scipy.integrate import quad
from scipy.special import gamma as _gamma

from .cumulants import cumulants
from .params import GtsParams

# Below this stability index the naive Gamma(-beta)*((lam-i*xi)^beta-lam^beta)
# product cancels catastrophically; the expm1 form below takes over there and
# reaches the bilateral-gamma log limit alpha*log(lam/(lam-i*xi)) at beta = 0.
BETA_LOG_BRANCH = 1e-6

_GL8_NODES, _GL8_WEIGHTS = np.polynomial.legendre.leggauss(8)


def _as_array(xi):
    a = np.asarray(xi, dtype=float)
    return a, a.ndim == 0


def _cexpm1(z: np.ndarray) -> np.ndarray:
    """exp(z) - 1 for complex z, accurate near z = 0 (numpy's expm1 is
    real-only).  Re uses expm1(x)cos(y) - 2sin^2(y/2); both terms are O(|z|)."""
    x, y = np.real(z), np.imag(z)
    return np.expm1(x) * np.cos(y) - 2.0 * np.sin(0.5 * y) ** 2 \
        + 1j * (np.exp(x) * np.sin(y))


def psi_one_sided(xi, beta: float, alpha: float, lam: float):
    """One-sided exponent alpha * Gamma(-beta) * ((lam - i xi)^beta - lam^beta).

    Principal branch throughout; lam > 0 keeps lam - i*xi off the cut.
    Evaluated in the cancellation-free form

        -alpha * Gamma(1-beta) * lam^beta * expm1(beta*log(1 - i*xi/lam)) / beta

    which is analytic in beta through 0 and reaches the bilateral-gamma
    subfamily limit alpha * log(lam / (lam - i xi)) continuously (the naive
    product loses ~all precision below beta ~ 1e-8 and is exactly
    beta-independent if truncated, which would blind derivative-based
    estimation).  Accepts scalar or array xi.
    """
    if lam <= 0.0:
        raise ValueError("lam must be > 0")
    if not 0.0 <= beta < 1.0:
        raise ValueError("beta must lie in [0, 1)")
    x, scalar = _as_array(xi)
    z = lam - 1j * x
    log_ratio = np.log(z / lam)  # = log(1 - i*xi/lam), |Im| < pi/2
    if beta == 0.0:
        out = -alpha * log_ratio
    else:
        out = (-alpha * _gamma(1.0 - beta) * lam**beta / beta) \
            * _cexpm1(beta * log_ratio)
    return complex(out) if scalar else out


def psi_gts(xi, p: GtsParams):
    """Exponent of the GTS law: mu*xi*i + Psi+(xi) + Psi-(-xi)."""
    x, scalar = _as_array(xi)
    out = (
        1j * p.mu * x
        + psi_one_sided(x, p.beta_plus, p.alpha_plus, p.lambda_plus)
        + psi_one_sided(-x, p.beta_minus, p.alpha_minus, p.lambda_minus)
    )
    return complex(out) if scalar else out


def bdlp_exponent(xi, p: GtsParams):
    """Exponent of the background driving process of a GTS marginal.

    log phi(y) = mu*i*y + a+ G(1-b+) i*y / (l+ - i*y)^(1-b+)
                        + a- G(1-b-) (-i*y) / (l- + i*y)^(1-b-),
    which equals xi * d(psi_gts)/dxi.
    """
    y, scalar = _as_array(xi)
    iy = 1j * y
    out = (
        1j * p.mu * y
        + p.alpha_plus
        * _gamma(1.0 - p.beta_plus)
        * iy
        / (p.lambda_plus - iy) ** (1.0 - p.beta_plus)
        + p.alpha_minus
        * _gamma(1.0 - p.beta_minus)
        * (-iy)
        / (p.lambda_minus + iy) ** (1.0 - p.beta_minus)
    )
    return complex(out) if scalar else out


# ---------------------------------------------------------------------------
# Self-decomposable exponent: gamma(xi) = integral_0^xi psi_gts(u)/u du.
# The integrand's u -> 0 singularity is removable with limit i*kappa_1.


def sd_exponent(xi, p: GtsParams, quad_tol: float = 1e-10):
    """Exponent of the self-decomposable law driven by a GTS process.

    Scalars go through adaptive Gauss-Kronrod on (0, xi) with the integrand
    pinned to its analytic limit i*kappa_1 at the origin; arrays go through
    cumulative fixed-order Gauss-Legendre panels between consecutive
    frequencies (each panel is analytic: the nearest branch point sits at
    distance >= min(lambda+-) from the real axis).  The two paths agree to
    better than ``quad_tol``.  Negative frequencies use Hermitian symmetry.
    """
    x, scalar = _as_array(xi)
    if scalar:
        return _sd_scalar(float(x), p, quad_tol)
    return _sd_grid(x, p)


def _sd_scalar(xi: float, p: GtsParams, quad_tol: float) -> complex:
    if xi == 0.0:
        return 0.0 + 0.0j
    if xi < 0.0:
        return np.conj(_sd_scalar(-xi, p, quad_tol))
    k1 = cumulants(p, 1)[1]

    def integrand(u):
        if u == 0.0:
            return 1j * k1
        return psi_gts(u, p) / u

    val, err = quad(integrand, 0.0, xi, complex_func=True, epsabs=quad_tol / 10,
                    epsrel=0.0, limit=400)
    # complex_func=True reports the real/imag error estimates as a complex pair
    worst = max(abs(np.real(err)), abs(np.imag(err)))
    if worst > quad_tol:
        raise ArithmeticError(
            f"sd_exponent quadrature did not reach tol={quad_tol:g}; "
            f"achieved error estimate {worst:g} at xi={xi:g}"
        )
    return complex(val)


def _sd_grid(xi: np.ndarray, p: GtsParams) -> np.ndarray:
    """Vectorized gamma(xi) on an arbitrary batch of frequencies."""
    out = np.zeros(xi.shape, dtype=complex)
    mag = np.abs(xi)
    pos = np.unique(mag[mag > 0.0])
    if pos.size == 0:
        return out
    edges = np.concatenate(([0.0], pos))
    lo, hi = edges[:-1], edges[1:]
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    # (n_panels, 8) nodes; integrand psi(u)/u never evaluated at u = 0
    u = mid[:, None] + half[:, None] * _GL8_NODES[None, :]
    vals = psi_gts(u.ravel(), p).reshape(u.shape) / u
    panel = (vals * _GL8_WEIGHTS[None, :]).sum(axis=1) * half
    gamma_pos = np.cumsum(panel)
    idx = np.searchsorted(pos, mag[mag > 0.0])
    filled = gamma_pos[idx]
    filled = np.where(xi[mag > 0.0] < 0.0, np.conj(filled), filled)
    out[mag > 0.0] = filled
    return out


def sd_exponent_unit_form(xi, p: GtsParams, quad_tol: float = 1e-10):
    """Same exponent through the one-sided unit-interval integrals

        gamma+(xi) = alpha * Gamma(-beta) * int_0^1 ((lam - i*xi*u)^beta - lam^beta)/u du

    (log-branch below beta < 1e-6), combined as mu*xi*i + gamma+(xi) + gamma-(-xi).
    Kept as an independent evaluation route; scalar xi only.
    """
    xi = float(xi)

    def one_sided(x, beta, alpha, lam):
        if x == 0.0 or alpha == 0.0:
            return 0.0 + 0.0j
        if beta < BETA_LOG_BRANCH:

            def f(u):
                if u == 0.0:
                    return 1j * x / lam * alpha  # limit of -alpha*log(1 - i*x*u/lam)/u
                return -alpha * np.log((lam - 1j * x * u) / lam) / u

        else:
            c = alpha * _gamma(-beta)

            def f(u):
                if u == 0.0:
                    return c * beta * lam ** (beta - 1.0) * (-1j * x)
                return c * ((lam - 1j * x * u) ** beta - lam**beta) / u

        val, err = quad(f, 0.0, 1.0, complex_func=True, epsabs=quad_tol / 10,
                        epsrel=0.0, limit=400)
        worst = max(abs(np.real(err)), abs(np.imag(err)))
        if worst > quad_tol:
            raise ArithmeticError(
                f"unit-form quadrature stalled at error {worst:g} for xi={x:g}"
            )
        return complex(val)

    return (
        1j * p.mu * xi
        + one_sided(xi, p.beta_plus, p.alpha_plus, p.lambda_plus)
        + one_sided(-xi, p.beta_minus, p.alpha_minus, p.lambda_minus)
    )
