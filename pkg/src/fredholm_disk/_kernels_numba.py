"""Numba-compiled scalar kernels.

Scaled modified Bessel evaluations e^{-x} I_nu(x) and e^{x} K_nu(x) built from

* the ascending power series for I (all terms positive, no cancellation),
* a reflection-form series for K on x <= 2 that stays finite as the order
  approaches an integer (the 1/sin singularity is removed analytically),
* a continued fraction for K on x > 2 (Thompson-Barnett style),
* upward order recurrence from mu in [-1/2, 1/2) to the requested order,

plus the damped cumulative trapezoid scans used by the Green's-function
solvers.  The pure-numpy twins live in ``_kernels_numpy``.
"""

import math

import numpy as np
from numba import njit

EULER_GAMMA = 0.5772156649015328606
# x^3 Maclaurin coefficient of 1/Gamma(1+x): zeta(3)/3 - gamma*pi^2/12 + gamma^3/6
_C3 = 1.2020569031595942854 / 3.0 - EULER_GAMMA * math.pi ** 2 / 12.0 \
    + EULER_GAMMA ** 3 / 6.0

# beyond this argument the power series for I risks overflow; switch to the
# large-argument expansion (only small orders can reach it, see _ik_asym)
_X_SERIES_MAX = 600.0


@njit(cache=True)
def _i_series(nu, x):
    """Unscaled I_nu(x) from the power series; valid for x <= _X_SERIES_MAX."""
    lp = nu * math.log(0.5 * x) - math.lgamma(nu + 1.0)
    if lp < -745.0:
        return 0.0
    if abs(lp) < 600.0:
        pref = (0.5 * x) ** nu / math.gamma(nu + 1.0)
    else:
        pref = math.exp(lp)
    x24 = 0.25 * x * x
    term = 1.0
    s = 1.0
    for k in range(1, 20000):
        term *= x24 / (k * (nu + k))
        s += term
        if term < 1e-17 * s:
            break
    return pref * s


@njit(cache=True)
def _k_small_pair(mu, x):
    """(K_mu, K_{mu+1}) unscaled for |mu| <= 0.5 and 0 < x <= 2."""
    L = math.log(0.5 * x)
    rgp = 1.0 / math.gamma(1.0 + mu)
    rgm = 1.0 / math.gamma(1.0 - mu)
    a = 0.5 * (rgm + rgp)
    if abs(mu) < 1e-4:
        d1 = -(EULER_GAMMA + _C3 * mu * mu)
    else:
        d1 = (rgm - rgp) / (2.0 * mu)
    piu = math.pi * mu
    if abs(piu) < 1e-6:
        g = 1.0 + piu * piu / 6.0
    else:
        g = piu / math.sin(piu)
    e = mu * L
    ch = math.cosh(e)
    if abs(e) < 1e-6:
        sh = L * (1.0 + e * e / 6.0)
    else:
        sh = math.sinh(e) / mu
    mu2 = mu * mu
    ck = 1.0
    f = g * (ch * d1 - sh * a)
    p = 0.5 * math.exp(-e) * g * rgm
    s = f
    s1 = p
    x24 = 0.25 * x * x
    for k in range(1, 200):
        d1_old = d1
        den = k * k - mu2
        d1 = (a + k * d1_old) / den
        a = (k * a + mu2 * d1_old) / den
        p /= k - mu
        ck *= x24 / k
        f = g * (ch * d1 - sh * a)
        term = ck * f
        term1 = ck * (p - k * f)
        s += term
        s1 += term1
        if abs(term) < 1e-17 * abs(s) and abs(term1) < 1e-17 * abs(s1):
            break
    return s, s1 * 2.0 / x


@njit(cache=True)
def _k_cf2_scaled(mu, x):
    """e^x K_mu(x) for |mu| <= 0.5 and x > 2 (continued fraction)."""
    a1 = 0.25 - mu * mu
    b = 2.0 * (1.0 + x)
    d = 1.0 / b
    h = d
    delh = d
    q1 = 0.0
    q2 = 1.0
    q = a1
    c = a1
    a = -a1
    s = 1.0 + q * delh
    for i in range(2, 40001):
        a -= 2.0 * (i - 1)
        c = -a * c / i
        qnew = (q1 - b * q2) / a
        q1 = q2
        q2 = qnew
        q += c * qnew
        b += 2.0
        den = b + a * d
        if den == 0.0:
            den = 1e-300
        d = 1.0 / den
        delh = (b * d - 1.0) * delh
        h += delh
        dels = q * delh
        s += dels
        if abs(dels / s) < 1e-16:
            break
    return math.sqrt(math.pi / (2.0 * x)) / s


@njit(cache=True)
def _ik_asym(nu, x):
    """(e^{-x} I_nu, e^{x} K_nu) from the large-argument expansion, x > 600."""
    mu4 = 4.0 * nu * nu
    term = 1.0
    s_k = 1.0
    s_i = 1.0
    sign = 1.0
    prev = math.inf
    for k in range(1, 1000):
        term *= (mu4 - (2.0 * k - 1.0) ** 2) / (8.0 * x * k)
        if abs(term) >= prev:
            break
        prev = abs(term)
        sign = -sign
        s_k += term
        s_i += sign * term
        if abs(term) < 1e-17:
            break
    ie = s_i / math.sqrt(2.0 * math.pi * x)
    ke = math.sqrt(math.pi / (2.0 * x)) * s_k
    return ie, ke


@njit(cache=True)
def iv_scaled(nu, x):
    """e^{-x} I_nu(x) for nu >= 0, x > 0."""
    if x > _X_SERIES_MAX:
        ie, _ = _ik_asym(nu, x)
        return ie
    return _i_series(nu, x) * math.exp(-x)


@njit(cache=True)
def kv_scaled_pair(nu, x):
    """(e^x K_nu(x), e^x K_{nu+1}(x)) for nu >= 0, x > 0."""
    n_steps = int(math.floor(nu + 0.5))
    mu = nu - n_steps
    if x <= 2.0:
        k_mu, k_mu1 = _k_small_pair(mu, x)
        ex = math.exp(x)
        k_mu *= ex
        k_mu1 *= ex
    elif x <= _X_SERIES_MAX:
        k_mu = _k_cf2_scaled(mu, x)
        # companion from the Wronskian with I; stable since mu/x stays small
        i_mu = _i_series(mu, x) * math.exp(-x)
        i_mu1 = _i_series(mu + 1.0, x) * math.exp(-x)
        ip_mu = i_mu1 + (mu / x) * i_mu
        kp_mu = (ip_mu * k_mu - 1.0 / x) / i_mu
        k_mu1 = (mu / x) * k_mu - kp_mu
    else:
        _, k_mu = _ik_asym(mu, x)
        _, k_mu1 = _ik_asym(mu + 1.0, x)
    for j in range(1, n_steps + 1):
        k_mu, k_mu1 = k_mu1, k_mu + (2.0 * (mu + j) / x) * k_mu1
    return k_mu, k_mu1


@njit(cache=True)
def iv_scaled_arr(nu, xs):
    out = np.empty_like(xs)
    for i in range(xs.shape[0]):
        out[i] = iv_scaled(nu, xs[i])
    return out


@njit(cache=True)
def kv_scaled_pair_arr(nu, xs):
    out0 = np.empty_like(xs)
    out1 = np.empty_like(xs)
    for i in range(xs.shape[0]):
        out0[i], out1[i] = kv_scaled_pair(nu, xs[i])
    return out0, out1


@njit(cache=True)
def damped_cumulative_forward(g, damp, h):
    """B_j = int_{t_0}^{t_j} g(t) D(t_j, t) dt for exponentially damped kernels.

    damp[i] is the (exact) kernel decay factor across the interval (i, i+1),
    so D(t_j, t_k) is a product of damp entries.  Per interval the integrand
    is interpolated cubically through four nodes (one-sided at the two ends),
    giving an O(h^4) cumulative rule whose damping is never approximated.
    """
    n = g.shape[0]
    out = np.zeros(n, dtype=np.complex128)
    if n < 4:
        for j in range(1, n):
            out[j] = damp[j - 1] * out[j - 1] \
                + 0.5 * h * (damp[j - 1] * g[j - 1] + g[j])
        return out
    c = h / 24.0
    out[1] = c * (9.0 * g[0] * damp[0] + 19.0 * g[1]
                  - 5.0 * g[2] / damp[1] + g[3] / (damp[1] * damp[2]))
    for j in range(2, n - 1):
        cj = c * (-g[j - 2] * damp[j - 2] * damp[j - 1]
                  + 13.0 * g[j - 1] * damp[j - 1]
                  + 13.0 * g[j]
                  - g[j + 1] / damp[j])
        out[j] = damp[j - 1] * out[j - 1] + cj
    j = n - 1
    cj = c * (g[j - 3] * damp[j - 3] * damp[j - 2] * damp[j - 1]
              - 5.0 * g[j - 2] * damp[j - 2] * damp[j - 1]
              + 19.0 * g[j - 1] * damp[j - 1]
              + 9.0 * g[j])
    out[j] = damp[j - 1] * out[j - 1] + cj
    return out


@njit(cache=True)
def damped_cumulative_backward(g, damp, h):
    """B_j = int_{t_j}^{t_end} g(t) D(t, t_j) dt, mirror of the forward scan."""
    n = g.shape[0]
    out = np.zeros(n, dtype=np.complex128)
    if n < 4:
        for j in range(n - 2, -1, -1):
            out[j] = damp[j] * out[j + 1] \
                + 0.5 * h * (damp[j] * g[j + 1] + g[j])
        return out
    c = h / 24.0
    j = n - 2
    out[j] = c * (g[j - 2] / (damp[j - 2] * damp[j - 1])
                  - 5.0 * g[j - 1] / damp[j - 1]
                  + 19.0 * g[j]
                  + 9.0 * g[j + 1] * damp[j])
    for j in range(n - 3, 0, -1):
        cj = c * (-g[j - 1] / damp[j - 1]
                  + 13.0 * g[j]
                  + 13.0 * g[j + 1] * damp[j]
                  - g[j + 2] * damp[j] * damp[j + 1])
        out[j] = damp[j] * out[j + 1] + cj
    cj = c * (9.0 * g[0] + 19.0 * g[1] * damp[0]
              - 5.0 * g[2] * damp[0] * damp[1]
              + g[3] * damp[0] * damp[1] * damp[2])
    out[0] = damp[0] * out[1] + cj
    return out
