"""Incomplete gamma integrals extended to the negative orders the jump
densities need."""

from __future__ import annotations

import numpy as np
from scipy import special as sc


def upper_incomplete_gamma(s: float, x):
    """Gamma(s, x) = integral_x^inf y^(s-1) e^(-y) dy for order s in (-1, 1).

    scipy's regularized ``gammaincc`` covers s > 0 (continued fraction for
    large x, series for small x); s = 0 is the exponential integral E1; and
    for s < 0 one step of the downward recurrence

        Gamma(s, x) = (Gamma(s+1, x) - x^s e^(-x)) / s

    extends the positive-order evaluation.  x may be a scalar or array; the
    integral diverges at x = 0 for s <= 0, so only x > 0 is admitted.
    """
    x = np.asarray(x, dtype=float)
    if x.size and np.any(x <= 0.0):
        raise ValueError("upper_incomplete_gamma requires x > 0")
    if not -1.0 < s < 1.0:
        raise ValueError(f"order s={s:g} outside the supported interval (-1, 1)")
    if s == 0.0:
        out = sc.exp1(x)
    elif s > 0.0:
        out = sc.gammaincc(s, x) * sc.gamma(s)
    else:
        out = (sc.gammaincc(s + 1.0, x) * sc.gamma(s + 1.0) - x**s * np.exp(-x)) / s
    return out if out.ndim else float(out)


def lower_incomplete_gamma(s: float, x):
    """gamma(s, x) = integral_0^x y^(s-1) e^(-y) dy, s > 0."""
    if s <= 0.0:
        raise ValueError("lower_incomplete_gamma requires s > 0")
    x = np.asarray(x, dtype=float)
    if x.size and np.any(x < 0.0):
        raise ValueError("lower_incomplete_gamma requires x >= 0")
    out = sc.gammainc(s, x) * sc.gamma(s)
    return out if out.ndim else float(out)
