"""Newton-Raphson MLE machinery: eigenvalue extraction, finite-difference
stencils, likelihood evaluation, and the damped ascent loop."""

import numpy as np
import pytest

from gtsou import (
    EQUITY_PARAMS,
    GtsParams,
    Marginal,
    StepCollision,
    fit,
    fit_grid,
    log_likelihood,
    max_eigenvalue,
    moment_matched_init,
    sample_marginal,
    score_and_hessian,
    trace_rows,
)
from gtsou.estimation import TRACE_COLUMNS, _fd_steps


# --- max_eigenvalue ---------------------------------------------------------

def test_max_eigenvalue_diagonal():
    assert max_eigenvalue(np.diag([-1.0, -2.0, -3.0, -4.0, -5.0, -6.0, -7.0])) == -1.0
    assert max_eigenvalue(np.eye(4)) == 1.0


def test_max_eigenvalue_2x2_closed_form():
    # eigenvalues of [[a, b], [b, c]]: (a+c)/2 +- sqrt(((a-c)/2)^2 + b^2)
    m = np.array([[2.0, 1.5], [1.5, -1.0]])
    expected = 0.5 + np.sqrt(1.5**2 + 1.5**2)
    assert max_eigenvalue(m) == pytest.approx(expected, rel=1e-12)


def test_max_eigenvalue_random_symmetric():
    rng = np.random.default_rng(12)
    for n in (3, 7, 12):
        a = rng.standard_normal((n, n))
        sym = 0.5 * (a + a.T)
        assert max_eigenvalue(sym) == pytest.approx(
            float(np.linalg.eigvalsh(sym)[-1]), rel=1e-10, abs=1e-10)


def test_max_eigenvalue_tiny_offdiagonal():
    # a denormal off-diagonal entry must not overflow the rotation angle
    # (benign underflow-to-zero of the off-diagonal norm is expected)
    m = np.diag([3.0, 1.0])
    m[0, 1] = m[1, 0] = 5e-320
    with np.errstate(over="raise", invalid="raise", divide="raise"):
        assert max_eigenvalue(m) == pytest.approx(3.0, rel=1e-12)


def test_max_eigenvalue_rejects_bad_input():
    with pytest.raises(ValueError):
        max_eigenvalue(np.ones((2, 3)))
    with pytest.raises(ValueError):
        max_eigenvalue(np.array([[0.0, 1.0], [-1.0, 0.0]]))  # antisymmetric


# --- finite-difference stencil ----------------------------------------------

def test_score_and_hessian_exact_on_quadratic():
    # central differences are exact (up to rounding) for quadratics
    rng = np.random.default_rng(13)
    a = rng.standard_normal((7, 7))
    h_true = -(a @ a.T) - np.eye(7)  # negative definite
    b = rng.standard_normal(7)

    def quad_loglik(data, p, g):
        v = p.as_vector()
        return float(b @ v + 0.5 * v @ h_true @ v)

    p0 = EQUITY_PARAMS
    grad, hess = score_and_hessian(None, p0, None, loglik_fn=quad_loglik)
    np.testing.assert_allclose(grad, b + h_true @ p0.as_vector(), rtol=1e-6, atol=1e-8)
    np.testing.assert_allclose(hess, h_true, rtol=1e-4, atol=1e-5)
    assert np.allclose(hess, hess.T)  # symmetrized by construction


def test_fd_steps_relative_scale():
    v = np.array([2.0, 0.5, 0.5, 1.0, 1.0, 3.0, 0.001])
    h = _fd_steps(v)
    np.testing.assert_allclose(h[:6], 1e-4 * np.abs(v[:6]))
    assert h[6] == pytest.approx(1e-6)  # floor at 1e-4 * 1e-2


def test_fd_steps_shrink_near_boundary():
    # beta_plus close to 1: full step leaves the domain, halving repairs it
    p = EQUITY_PARAMS.replace(beta_plus=1.0 - 5e-5)
    h = _fd_steps(p.as_vector())
    assert h[1] < 1e-4 * (1.0 - 5e-5)
    assert p.beta_plus + h[1] < 1.0


def test_step_collision_names_the_parameter():
    p = EQUITY_PARAMS.replace(beta_minus=1e-9)
    with pytest.raises(StepCollision, match="beta_minus"):
        _fd_steps(p.as_vector())


# --- likelihood -------------------------------------------------------------

@pytest.fixture(scope="module")
def equity_sample():
    data = sample_marginal(EQUITY_PARAMS, Marginal.GTS, 2000, np.random.default_rng(14))
    g = fit_grid(data, EQUITY_PARAMS, n_points=8192)
    return data, g


def test_log_likelihood_permutation_invariant(equity_sample):
    data, g = equity_sample
    shuffled = np.random.default_rng(15).permutation(data)
    assert log_likelihood(shuffled, EQUITY_PARAMS, g) == pytest.approx(
        log_likelihood(data, EQUITY_PARAMS, g), rel=1e-14)


def test_log_likelihood_matches_entropy(equity_sample):
    # mean log f under the true law estimates -H = int f log f; the sample
    # average must sit within 3 standard errors of the quadrature value
    from gtsou import default_grid, invert_cf, psi_gts, cumulants

    data, g = equity_sample
    p = EQUITY_PARAMS
    k = cumulants(p, 2)
    d = invert_cf(lambda xi: psi_gts(xi, p),
                  default_grid(lambda xi: psi_gts(xi, p), k[1], np.sqrt(k[2])))
    mask = d.pdf > 0.0
    neg_h = np.trapezoid(d.pdf[mask] * np.log(d.pdf[mask]), d.x[mask])

    logf = np.log(np.maximum(d.pdf_at(data), 1e-300))
    se = logf.std(ddof=1) / np.sqrt(len(data))
    ll = log_likelihood(data, p, g)
    assert ll / len(data) == pytest.approx(neg_h, abs=3.0 * se + 1e-4)


def test_log_likelihood_expands_range_for_outliers(equity_sample):
    data, g = equity_sample
    widened = np.append(data, [g.x_max + 10.0])
    val = log_likelihood(widened, EQUITY_PARAMS, g)
    assert np.isfinite(val)


def test_log_likelihood_input_validation(equity_sample):
    data, g = equity_sample
    with pytest.raises(ValueError):
        log_likelihood(np.array([]), EQUITY_PARAMS, g)
    with pytest.raises(ValueError):
        log_likelihood(np.array([0.1, np.nan]), EQUITY_PARAMS, g)
    degenerate = EQUITY_PARAMS.replace(alpha_plus=0.0, alpha_minus=0.0)
    with pytest.raises(ValueError):
        log_likelihood(data, degenerate, g)


# --- fit loop ----------------------------------------------------------------

@pytest.fixture(scope="module")
def compact_fit():
    data = sample_marginal(EQUITY_PARAMS, Marginal.GTS, 600, np.random.default_rng(23))
    init = moment_matched_init(data)
    g = fit_grid(data, init, n_points=4096)
    trace = fit(data, init, grad_tol=1e-2, max_iter=120, g=g)
    return data, g, trace


def test_fit_converges(compact_fit):
    data, g, trace = compact_fit
    assert trace.converged
    assert trace.reason == "GradientTol"
    final = trace.final
    assert final.gradient_norm <= 1e-2
    assert final.max_eigenvalue <= 0.0
    final.params.validate()


def test_fit_likelihood_is_monotone(compact_fit):
    _, _, trace = compact_fit
    ll = [s.log_likelihood for s in trace.states]
    assert all(b >= a for a, b in zip(ll, ll[1:]))


def test_fit_trace_rows_layout(compact_fit):
    _, _, trace = compact_fit
    rows = trace_rows(trace)
    assert len(rows) == len(trace.states)
    assert all(len(r) == len(TRACE_COLUMNS) for r in rows)
    assert [r[0] for r in rows] == list(range(len(rows)))
    # column order: iteration, the seven parameters, then the diagnostics
    assert TRACE_COLUMNS[0] == "Iterations"
    assert TRACE_COLUMNS[-2:] == ("||dLog(ML)/dV||", "Max Eigen Value")
    assert TRACE_COLUMNS[-3] == "Log(ML)"


def test_fit_restart_at_optimum_stops_immediately(compact_fit):
    data, g, trace = compact_fit
    again = fit(data, trace.final.params, grad_tol=1e-2, max_iter=5, g=g)
    assert again.converged
    assert len(again.states) - 1 <= 2
    assert again.final.log_likelihood >= trace.final.log_likelihood - 1e-9


def test_fit_iteration_budget(compact_fit):
    data, g, _ = compact_fit
    init = moment_matched_init(data)
    capped = fit(data, init, grad_tol=1e-12, max_iter=1, g=g)
    assert not capped.converged
    assert capped.reason == "MaxIter"
    assert len(capped.states) == 2
