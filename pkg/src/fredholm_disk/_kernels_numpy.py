"""Vectorized pure-numpy fallback for the hot kernels.

Same mathematics as ``_kernels_numba`` (power series for I, reflection-form
series / continued fraction for K, upward recurrence in the order), written
against whole arrays so the package works without a working numba install.
Selected via ``FREDHOLM_DISK_BACKEND=numpy``.
"""

import math

import numpy as np

EULER_GAMMA = 0.5772156649015328606
_C3 = 1.2020569031595942854 / 3.0 - EULER_GAMMA * math.pi ** 2 / 12.0 \
    + EULER_GAMMA ** 3 / 6.0

_X_SERIES_MAX = 600.0
_K_SMALL_TERMS = 40


def _i_series_vec(nu, x):
    """Unscaled I_nu over an array, x <= _X_SERIES_MAX."""
    with np.errstate(divide="ignore"):
        lp = nu * np.log(0.5 * x) - math.lgamma(nu + 1.0)
    pref = np.where(
        np.abs(lp) < 600.0,
        (0.5 * x) ** nu / math.gamma(nu + 1.0),
        np.exp(np.clip(lp, -745.0, 709.0)),
    )
    pref = np.where(lp < -745.0, 0.0, pref)
    x24 = 0.25 * x * x
    term = np.ones_like(x)
    s = np.ones_like(x)
    for k in range(1, 20000):
        term = term * x24 / (k * (nu + k))
        s += term
        if np.max(term / s) < 1e-17:
            break
    return pref * s


def _k_small_coeffs(mu):
    """x-independent series coefficients for the reflection-form K pair."""
    rgp = 1.0 / math.gamma(1.0 + mu)
    rgm = 1.0 / math.gamma(1.0 - mu)
    a = 0.5 * (rgm + rgp)
    if abs(mu) < 1e-4:
        d1 = -(EULER_GAMMA + _C3 * mu * mu)
    else:
        d1 = (rgm - rgp) / (2.0 * mu)
    mu2 = mu * mu
    cd = np.empty(_K_SMALL_TERMS)
    ca = np.empty(_K_SMALL_TERMS)
    cp = np.empty(_K_SMALL_TERMS)
    ck = 1.0
    p = 0.5 * rgm  # the (x/2)^{-mu} G factor is applied per point
    cd[0] = d1
    ca[0] = a
    cp[0] = p
    for k in range(1, _K_SMALL_TERMS):
        den = k * k - mu2
        d1, a = (a + k * d1) / den, (k * a + mu2 * d1) / den
        p /= k - mu
        ck /= k
        cd[k] = ck * d1
        ca[k] = ck * a
        cp[k] = ck * p
    return cd, ca, cp


def _k_small_pair_vec(mu, x):
    """(K_mu, K_{mu+1}) unscaled over an array, 0 < x <= 2, |mu| <= 0.5."""
    cd, ca, cp = _k_small_coeffs(mu)
    ks = np.arange(_K_SMALL_TERMS)
    piu = math.pi * mu
    g = 1.0 + piu * piu / 6.0 if abs(piu) < 1e-6 else piu / math.sin(piu)
    L = np.log(0.5 * x)
    e = mu * L
    ch = np.cosh(e)
    if mu == 0.0:
        sh = L.copy()
    else:
        sh = np.where(np.abs(e) < 1e-6, L * (1.0 + e * e / 6.0), np.sinh(e) / mu)
    w = 0.25 * x * x
    wp = w[:, None] ** ks[None, :]
    pd = wp @ cd
    pa = wp @ ca
    pp = wp @ cp
    pkd = wp @ (ks * cd)
    pka = wp @ (ks * ca)
    k_mu = g * (ch * pd - sh * pa)
    sum_kf = g * (ch * pkd - sh * pka)
    k_mu1 = (2.0 / x) * (np.exp(-e) * g * pp - sum_kf)
    return k_mu, k_mu1


def _k_cf2_scaled_vec(mu, x):
    """e^x K_mu over an array, x > 2, |mu| <= 0.5."""
    a1 = 0.25 - mu * mu
    b = 2.0 * (1.0 + x)
    d = 1.0 / b
    h = d.copy()
    delh = d.copy()
    q1 = np.zeros_like(x)
    q2 = np.ones_like(x)
    q = np.full_like(x, a1)
    c = np.full_like(x, a1)
    a = -a1
    s = 1.0 + q * delh
    for i in range(2, 10001):
        a -= 2.0 * (i - 1)
        c = -a * c / i
        qnew = (q1 - b * q2) / a
        q1 = q2
        q2 = qnew
        q = q + c * qnew
        b = b + 2.0
        den = b + a * d
        den = np.where(den == 0.0, 1e-300, den)
        d = 1.0 / den
        delh = (b * d - 1.0) * delh
        h = h + delh
        dels = q * delh
        s = s + dels
        if np.max(np.abs(dels / s)) < 1e-16:
            break
    return np.sqrt(math.pi / (2.0 * x)) / s


def _ik_asym_vec(nu, x):
    """(e^{-x} I_nu, e^x K_nu) over an array, x > _X_SERIES_MAX."""
    mu4 = 4.0 * nu * nu
    term = np.ones_like(x)
    s_k = np.ones_like(x)
    s_i = np.ones_like(x)
    sign = 1.0
    prev = math.inf
    for k in range(1, 1000):
        term = term * (mu4 - (2.0 * k - 1.0) ** 2) / (8.0 * x * k)
        mx = np.max(np.abs(term))
        if mx >= prev:
            break
        prev = mx
        sign = -sign
        s_k = s_k + term
        s_i = s_i + sign * term
        if mx < 1e-17:
            break
    return s_i / np.sqrt(2.0 * math.pi * x), np.sqrt(math.pi / (2.0 * x)) * s_k


def iv_scaled(nu, x):
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    out = np.empty_like(x)
    lo = x <= _X_SERIES_MAX
    if np.any(lo):
        out[lo] = _i_series_vec(nu, x[lo]) * np.exp(-x[lo])
    if np.any(~lo):
        out[~lo] = _ik_asym_vec(nu, x[~lo])[0]
    return out


def kv_scaled_pair(nu, x):
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    n_steps = int(math.floor(nu + 0.5))
    mu = nu - n_steps
    k_mu = np.empty_like(x)
    k_mu1 = np.empty_like(x)
    lo = x <= 2.0
    mid = (x > 2.0) & (x <= _X_SERIES_MAX)
    hi = x > _X_SERIES_MAX
    if np.any(lo):
        km, km1 = _k_small_pair_vec(mu, x[lo])
        ex = np.exp(x[lo])
        k_mu[lo] = km * ex
        k_mu1[lo] = km1 * ex
    if np.any(mid):
        xm = x[mid]
        km = _k_cf2_scaled_vec(mu, xm)
        i_mu = _i_series_vec(mu, xm) * np.exp(-xm)
        i_mu1 = _i_series_vec(mu + 1.0, xm) * np.exp(-xm)
        ip_mu = i_mu1 + (mu / xm) * i_mu
        kp_mu = (ip_mu * km - 1.0 / xm) / i_mu
        k_mu[mid] = km
        k_mu1[mid] = (mu / xm) * km - kp_mu
    if np.any(hi):
        k_mu[hi] = _ik_asym_vec(mu, x[hi])[1]
        k_mu1[hi] = _ik_asym_vec(mu + 1.0, x[hi])[1]
    # values beyond double range become inf here; the caller signals overflow
    with np.errstate(over="ignore"):
        for j in range(1, n_steps + 1):
            k_mu, k_mu1 = k_mu1, k_mu + (2.0 * (mu + j) / x) * k_mu1
    return k_mu, k_mu1


def iv_scaled_arr(nu, xs):
    return iv_scaled(nu, xs)


def kv_scaled_pair_arr(nu, xs):
    return kv_scaled_pair(nu, xs)


def damped_cumulative_forward(g, damp, h):
    """Cumulative damped integral, O(h^4); see the numba twin for the rule."""
    n = g.shape[0]
    out = np.zeros(n, dtype=np.complex128)
    if n < 4:
        for j in range(1, n):
            out[j] = damp[j - 1] * out[j - 1] \
                + 0.5 * h * (damp[j - 1] * g[j - 1] + g[j])
        return out
    c = h / 24.0
    # per-interval contributions, vectorized; the scan itself stays a loop
    cj = np.empty(n - 1, dtype=np.complex128)
    cj[0] = c * (9.0 * g[0] * damp[0] + 19.0 * g[1]
                 - 5.0 * g[2] / damp[1] + g[3] / (damp[1] * damp[2]))
    jj = np.arange(2, n - 1)
    cj[1:n - 2] = c * (-g[jj - 2] * damp[jj - 2] * damp[jj - 1]
                       + 13.0 * g[jj - 1] * damp[jj - 1]
                       + 13.0 * g[jj]
                       - g[jj + 1] / damp[jj])
    j = n - 1
    cj[n - 2] = c * (g[j - 3] * damp[j - 3] * damp[j - 2] * damp[j - 1]
                     - 5.0 * g[j - 2] * damp[j - 2] * damp[j - 1]
                     + 19.0 * g[j - 1] * damp[j - 1]
                     + 9.0 * g[j])
    for j in range(1, n):
        out[j] = damp[j - 1] * out[j - 1] + cj[j - 1]
    return out


def damped_cumulative_backward(g, damp, h):
    n = g.shape[0]
    out = np.zeros(n, dtype=np.complex128)
    if n < 4:
        for j in range(n - 2, -1, -1):
            out[j] = damp[j] * out[j + 1] \
                + 0.5 * h * (damp[j] * g[j + 1] + g[j])
        return out
    c = h / 24.0
    cj = np.empty(n - 1, dtype=np.complex128)
    j = n - 2
    cj[j] = c * (g[j - 2] / (damp[j - 2] * damp[j - 1])
                 - 5.0 * g[j - 1] / damp[j - 1]
                 + 19.0 * g[j]
                 + 9.0 * g[j + 1] * damp[j])
    jj = np.arange(1, n - 2)
    cj[1:n - 2] = c * (-g[jj - 1] / damp[jj - 1]
                       + 13.0 * g[jj]
                       + 13.0 * g[jj + 1] * damp[jj]
                       - g[jj + 2] * damp[jj] * damp[jj + 1])
    cj[0] = c * (9.0 * g[0] + 19.0 * g[1] * damp[0]
                 - 5.0 * g[2] * damp[0] * damp[1]
                 + g[3] * damp[0] * damp[1] * damp[2])
    for j in range(n - 2, -1, -1):
        out[j] = damp[j] * out[j + 1] + cj[j]
    return out
