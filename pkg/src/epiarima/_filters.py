"""Compiled inner loops: state-space prediction-error filter and CSS recursion.

Kept free of Python objects so numba can compile them; all validation and
state-space assembly happens in :mod:`epiarima.estimation`. Falls back to
plain Python (slow but identical) when numba is unavailable.
"""

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    def njit(*args, **kwargs):
        def decorate(func):
            return func

        if args and callable(args[0]):
            return args[0]
        return decorate


KF_OK = 0
KF_BAD_VARIANCE = 1


@njit(cache=True)
def kalman_filter(x, phi_col, r_vec, P0):
    """Prediction-error decomposition for a zero-mean ARMA series.

    The transition matrix is the companion form with ``phi_col`` as its first
    column and an identity superdiagonal; ``r_vec`` = (1, theta_1, ...,
    theta_{m-1}) loads unit-variance innovations, so the returned prediction
    variances F are scale-free multiples of sigma^2.

    Returns ``(status, sum_log_F, sum_v2_over_F, v)`` where ``v`` holds the
    one-step prediction errors.
    """
    n = x.shape[0]
    m = phi_col.shape[0]
    a = np.zeros(m)
    a_new = np.empty(m)
    P = P0.copy()
    TP = np.empty((m, m))
    K = np.empty(m)
    v = np.empty(n)
    sum_log_f = 0.0
    ssq = 0.0
    for t in range(n):
        F = P[0, 0]
        if not (F > 1e-300) or not np.isfinite(F):
            return KF_BAD_VARIANCE, 0.0, 0.0, v
        vt = x[t] - a[0]
        v[t] = vt
        sum_log_f += np.log(F)
        ssq += vt * vt / F
        # TP = T @ P using the companion structure
        for i in range(m):
            pc = phi_col[i]
            for j in range(m):
                tp = pc * P[0, j]
                if i + 1 < m:
                    tp += P[i + 1, j]
                TP[i, j] = tp
        for i in range(m):
            K[i] = TP[i, 0]
        for i in range(m):
            ai = phi_col[i] * a[0]
            if i + 1 < m:
                ai += a[i + 1]
            a_new[i] = ai + K[i] * (vt / F)
        for i in range(m):
            a[i] = a_new[i]
        # P = TP @ T' + r r' - K K' / F, then symmetrized against drift
        for i in range(m):
            for j in range(m):
                pij = phi_col[j] * TP[i, 0]
                if j + 1 < m:
                    pij += TP[i, j + 1]
                P[i, j] = pij + r_vec[i] * r_vec[j] - K[i] * K[j] / F
        for i in range(m):
            for j in range(i + 1, m):
                s = 0.5 * (P[i, j] + P[j, i])
                P[i, j] = s
                P[j, i] = s
    return KF_OK, sum_log_f, ssq, v


@njit(cache=True)
def css_errors(x, phi, theta):
    """Conditional-sum-of-squares recursion errors for a zero-mean series.

    Pre-sample errors are zero and the first p observations only condition
    the recursion, so entries before index p stay zero.
    """
    n = x.shape[0]
    p = phi.shape[0]
    q = theta.shape[0]
    e = np.zeros(n)
    for t in range(p, n):
        acc = x[t]
        for i in range(p):
            acc -= phi[i] * x[t - 1 - i]
        for j in range(q):
            if t - 1 - j >= 0:
                acc -= theta[j] * e[t - 1 - j]
        e[t] = acc
    return e
