"""NumPy reference implementation of the hot kernels.

The compiled twin in _fast.pyx mirrors these functions; keep the two in sync.
"""
from __future__ import annotations

import numpy as np
from scipy.special import wofz

_SQRT_PI = np.sqrt(np.pi)


def two_slit_field(y, alpha, log_pref, a, b, c, edges):
    """Post-slit wave and its y-derivative from the erf antiderivative.

    The field is sum over slits of

        integral over [l1, l2] of K(y, y') * exp(a y'^2 + b y' + c) dy'

    with K = exp(log_pref) * exp(i alpha (y - y')^2); the Gaussian-times-kernel
    integrand has the exact antiderivative (sqrt(pi)/2s) erf(s y' - B/2s)
    with s = sqrt(-(a + i alpha)).

    The naive product exp(B^2/4s^2) * erf(z) overflows far from the slits,
    so each erf is folded into the prefactor through the Faddeeva function:
    erf(z) = sgn - sgn exp(-z^2) w(i sgn z) with sgn = sign(Re z), and
    exp(log_pref + C + B^2/4s^2 - z_j^2) = exp(log_pref + A l_j^2 + B l_j + C),
    the integrand evaluated at the slit edge, whose magnitude is always
    bounded by the packet height. The residual "peak" term only survives
    when the two erf arguments straddle the imaginary axis, where it equals
    the bounded free-evolution value of the untruncated packet.

    Parameters
    ----------
    y : ndarray of observation points
    alpha : m / (2 hbar dt)
    log_pref : log of the kernel prefactor sqrt(m / (2 pi i hbar dt))
    a, b, c : complex coefficients of the slit-plane Gaussian
    edges : (n_slits, 2) array of slit supports

    Returns (psi, dpsi) arrays.
    """
    y = np.asarray(y, dtype=float)
    big_a = a + 1j * alpha
    s = np.sqrt(-big_a)
    s2 = -big_a
    psi = np.zeros(y.shape, dtype=complex)
    dpsi = np.zeros(y.shape, dtype=complex)
    for l1, l2 in np.atleast_2d(edges):
        B = b - 2j * alpha * y
        C = c + 1j * alpha * y * y
        z1 = s * l1 - B / (2.0 * s)
        z2 = s * l2 - B / (2.0 * s)
        sg1 = np.where(z1.real >= 0.0, 1.0, -1.0)
        sg2 = np.where(z2.real >= 0.0, 1.0, -1.0)
        # Integrand at each edge: exp(A l^2 + B l + C), bounded magnitude.
        e1 = np.exp(log_pref + big_a * l1 * l1 + B * l1 + C)
        e2 = np.exp(log_pref + big_a * l2 * l2 + B * l2 + C)
        # peak = exp(log_pref + C + B^2/4s^2); only needed where sg1 != sg2,
        # elsewhere it cancels (and may overflow), so mask before exp.
        log_peak = log_pref + C + B * B / (4.0 * s2)
        straddle = sg1 != sg2
        peak = np.where(straddle,
                        np.exp(np.where(straddle, log_peak, 0.0)), 0.0)
        erf_term = (sg2 - sg1) * peak \
            - sg2 * e2 * wofz(1j * sg2 * z2) + sg1 * e1 * wofz(1j * sg1 * z1)
        body = (_SQRT_PI / (2.0 * s)) * erf_term
        psi += body
        dpsi += body * (2j * alpha * y - 1j * alpha * B / s2) \
            + (1j * alpha / s2) * (e2 - e1)
    return psi, dpsi


def two_slit_simpson(y, alpha, log_pref, nodes, weighted_vals):
    """Same field by composite Simpson over precomputed slit-plane samples.

    ``nodes`` are quadrature nodes (all slits concatenated) and
    ``weighted_vals`` the slit-plane wave there times the Simpson weights.
    Chunked so temporaries stay bounded.
    """
    y = np.asarray(y, dtype=float)
    flat = y.ravel()
    psi = np.zeros(flat.shape, dtype=complex)
    dpsi = np.zeros(flat.shape, dtype=complex)
    pref = np.exp(log_pref)
    y_chunk = 128
    n_chunk = 16384
    for i in range(0, flat.size, y_chunk):
        yi = flat[i:i + y_chunk, None]
        acc = np.zeros(yi.shape[0], dtype=complex)
        dacc = np.zeros(yi.shape[0], dtype=complex)
        for j in range(0, nodes.size, n_chunk):
            d = yi - nodes[None, j:j + n_chunk]
            ker = np.exp(1j * alpha * d * d) * weighted_vals[None, j:j + n_chunk]
            acc += ker.sum(axis=1)
            dacc += (2j * alpha) * (d * ker).sum(axis=1)
        psi[i:i + y_chunk] = pref * acc
        dpsi[i:i + y_chunk] = pref * dacc
    return psi.reshape(y.shape), dpsi.reshape(y.shape)


def sg_velocity(z, log_weight_ratio, center, sigma0, u_eff):
    """Pilot-wave velocity of the two-packet Stern-Gerlach spinor.

    v = u_eff * (P+ - P-)/(P+ + P-) for packets w+-^2 N(+-center, sigma0^2),
    written as a tanh of log-densities so it never under/overflows.
    ``log_weight_ratio`` is ln(w+/w-) (+-inf allowed for pure eigenstates).
    """
    z = np.asarray(z, dtype=float)
    arg = z * center / (sigma0 * sigma0) + log_weight_ratio
    return u_eff * np.tanh(arg)
