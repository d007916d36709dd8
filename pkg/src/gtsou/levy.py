"""Levy jump densities of the three laws plus activity/variation diagnostics."""

from __future__ import annotations

import enum
from typing import NamedTuple

import numpy as np

from .params import GtsParams
from .special import lower_incomplete_gamma, upper_incomplete_gamma


class Activity(enum.Enum):
    FINITE = "finite"
    INFINITE = "infinite"


class VariationDiagnostics(NamedTuple):
    activity: Activity
    variation_integral: float


def _split(x):
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    if np.any(x == 0.0):
        raise ValueError("Levy densities are undefined at x = 0")
    return x, scalar


def _ret(out, scalar):
    return float(out[0]) if scalar else out


def levy_density_gts(x, p: GtsParams):
    """alpha+ e^(-lambda+ x) x^(-1-beta+) on x>0, mirrored with the minus-side
    parameters on x<0."""
    x, scalar = _split(x)
    out = np.empty_like(x)
    pos = x > 0.0
    out[pos] = p.alpha_plus * np.exp(-p.lambda_plus * x[pos]) * x[pos] ** (-1.0 - p.beta_plus)
    ax = -x[~pos]
    out[~pos] = p.alpha_minus * np.exp(-p.lambda_minus * ax) * ax ** (-1.0 - p.beta_minus)
    return _ret(out, scalar)


def levy_density_bdlp(x, p: GtsParams):
    """Driver of the GTS marginal: alpha (beta + lambda|x|) |x|^(-1-beta) e^(-lambda|x|)
    per side."""
    x, scalar = _split(x)
    out = np.empty_like(x)
    pos = x > 0.0
    xp = x[pos]
    out[pos] = (
        p.alpha_plus
        * (p.beta_plus + p.lambda_plus * xp)
        * xp ** (-1.0 - p.beta_plus)
        * np.exp(-p.lambda_plus * xp)
    )
    xm = -x[~pos]
    out[~pos] = (
        p.alpha_minus
        * (p.beta_minus + p.lambda_minus * xm)
        * xm ** (-1.0 - p.beta_minus)
        * np.exp(-p.lambda_minus * xm)
    )
    return _ret(out, scalar)


def levy_density_sd(x, p: GtsParams):
    """Self-decomposable law driven by GTS: U(x) = alpha lambda^beta Gamma(-beta, lambda x)/x
    per side — equivalently the GTS tail mass beyond |x| divided by |x|."""
    x, scalar = _split(x)
    out = np.empty_like(x)
    pos = x > 0.0
    if np.any(pos):
        xp = x[pos]
        out[pos] = (
            p.alpha_plus
            * p.lambda_plus**p.beta_plus
            * upper_incomplete_gamma(-p.beta_plus, p.lambda_plus * xp)
            / xp
        )
    if np.any(~pos):
        xm = -x[~pos]
        out[~pos] = (
            p.alpha_minus
            * p.lambda_minus**p.beta_minus
            * upper_incomplete_gamma(-p.beta_minus, p.lambda_minus * xm)
            / xm
        )
    return _ret(out, scalar)


def gts_upper_tail_mass(u: float, p: GtsParams) -> float:
    """Closed-form integral of levy_density_gts over (u, inf), u > 0."""
    if u <= 0.0:
        raise ValueError("tail cutoff must be > 0")
    return (
        p.alpha_plus
        * p.lambda_plus**p.beta_plus
        * upper_incomplete_gamma(-p.beta_plus, p.lambda_plus * u)
    )


def bdlp_upper_tail_mass(u: float, p: GtsParams) -> float:
    """Closed-form integral of levy_density_bdlp over (u, inf):
    alpha u^(-beta) e^(-lambda u)."""
    if u <= 0.0:
        raise ValueError("tail cutoff must be > 0")
    return p.alpha_plus * u ** (-p.beta_plus) * np.exp(-p.lambda_plus * u)


def variation_diagnostics(p: GtsParams) -> VariationDiagnostics:
    """Activity class and the variation integral int min(1,|y|) M(dy).

    With beta+- in [0, 1) the jump measure always has infinite mass near 0
    (infinite activity) while the variation integral stays finite:

        sum_sides alpha l^beta [ Gamma(-beta, l) + gamma(1-beta, l)/l ].
    """
    total = 0.0
    for alpha, beta, lam in (
        (p.alpha_plus, p.beta_plus, p.lambda_plus),
        (p.alpha_minus, p.beta_minus, p.lambda_minus),
    ):
        if alpha == 0.0:
            continue
        total += alpha * lam**beta * (
            upper_incomplete_gamma(-beta, lam)
            + lower_incomplete_gamma(1.0 - beta, lam) / lam
        )
    return VariationDiagnostics(Activity.INFINITE, float(total))
