# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled twin of _ref.py; keep semantics identical."""
import numpy as np
cimport numpy as cnp
from libc.math cimport tanh, exp as cexp_d
from scipy.special.cython_special cimport wofz as c_wofz

cnp.import_array()

cdef extern from "complex.h" nogil:
    double complex cexp(double complex)
    double complex csqrt(double complex)


def two_slit_field(object y_in, double alpha, double complex log_pref,
                   double complex a, double complex b, double complex c,
                   object edges_in):
    """erf-antiderivative post-slit field; see _ref.two_slit_field."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] y = \
        np.ascontiguousarray(np.atleast_1d(y_in), dtype=np.float64).ravel()
    cdef cnp.ndarray[cnp.float64_t, ndim=2] edges = \
        np.ascontiguousarray(np.atleast_2d(edges_in), dtype=np.float64)
    cdef Py_ssize_t n = y.shape[0]
    cdef Py_ssize_t nslit = edges.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] psi = np.zeros(n, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] dpsi = np.zeros(n, dtype=np.complex128)

    cdef double complex big_a = a + 1j * alpha
    cdef double complex s = csqrt(-big_a)
    cdef double complex s2 = -big_a
    cdef double complex sqrt_pi_2s = csqrt(<double complex>np.pi) / (2.0 * s)
    cdef double complex B, C, z1, z2, body, e1, e2, erf_term
    cdef double l1, l2, yi, sg1, sg2
    cdef Py_ssize_t i, k

    for i in range(n):
        yi = y[i]
        B = b - 2j * alpha * yi
        C = c + 1j * alpha * yi * yi
        for k in range(nslit):
            l1 = edges[k, 0]
            l2 = edges[k, 1]
            z1 = s * l1 - B / (2.0 * s)
            z2 = s * l2 - B / (2.0 * s)
            sg1 = 1.0 if z1.real >= 0.0 else -1.0
            sg2 = 1.0 if z2.real >= 0.0 else -1.0
            # Integrand at each edge; magnitude bounded by the packet height.
            e1 = cexp(log_pref + big_a * l1 * l1 + B * l1 + C)
            e2 = cexp(log_pref + big_a * l2 * l2 + B * l2 + C)
            # erf folded through the Faddeeva function; the free-evolution
            # "peak" only survives when the erf arguments straddle the
            # imaginary axis (elsewhere it cancels and may overflow).
            erf_term = - sg2 * e2 * c_wofz(1j * sg2 * z2) \
                + sg1 * e1 * c_wofz(1j * sg1 * z1)
            if sg1 != sg2:
                erf_term = erf_term + (sg2 - sg1) \
                    * cexp(log_pref + C + B * B / (4.0 * s2))
            body = sqrt_pi_2s * erf_term
            psi[i] = psi[i] + body
            dpsi[i] = dpsi[i] + body * (2j * alpha * yi - 1j * alpha * B / s2) \
                + (1j * alpha / s2) * (e2 - e1)
    shape = np.shape(y_in)
    return psi.reshape(shape), dpsi.reshape(shape)


def two_slit_simpson(object y_in, double alpha, double complex log_pref,
                     object nodes_in, object vals_in):
    """Composite-Simpson post-slit field; see _ref.two_slit_simpson."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] y = \
        np.ascontiguousarray(np.atleast_1d(y_in), dtype=np.float64).ravel()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] nodes = \
        np.ascontiguousarray(nodes_in, dtype=np.float64)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] vals = \
        np.ascontiguousarray(vals_in, dtype=np.complex128)
    cdef Py_ssize_t n = y.shape[0], m = nodes.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] psi = np.empty(n, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] dpsi = np.empty(n, dtype=np.complex128)
    cdef double complex pref = cexp(log_pref)
    cdef double complex acc, dacc, ker
    cdef double d, yi
    cdef Py_ssize_t i, j
    for i in range(n):
        yi = y[i]
        acc = 0
        dacc = 0
        for j in range(m):
            d = yi - nodes[j]
            ker = cexp(1j * alpha * d * d) * vals[j]
            acc = acc + ker
            dacc = dacc + d * ker
        psi[i] = pref * acc
        dpsi[i] = pref * 2j * alpha * dacc
    shape = np.shape(y_in)
    return psi.reshape(shape), dpsi.reshape(shape)


def sg_velocity(object z_in, object log_ratio_in, double center,
                double sigma0, double u_eff):
    """tanh form of the Stern-Gerlach guidance velocity; see _ref.sg_velocity."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] z = \
        np.ascontiguousarray(np.atleast_1d(z_in), dtype=np.float64).ravel()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ratio = \
        np.ascontiguousarray(np.broadcast_to(log_ratio_in, np.shape(z_in) or (1,)),
                             dtype=np.float64).ravel()
    cdef Py_ssize_t n = z.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] v = np.empty(n, dtype=np.float64)
    cdef double inv = center / (sigma0 * sigma0)
    cdef Py_ssize_t i
    for i in range(n):
        v[i] = u_eff * tanh(z[i] * inv + ratio[i])
    shape = np.shape(z_in)
    return v.reshape(shape)
