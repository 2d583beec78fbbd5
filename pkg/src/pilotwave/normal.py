"""Standard normal CDF and its inverse.

The quantile uses Acklam's rational approximation refined by one Newton step
on the erfc-based CDF, giving absolute error far below the 1e-9 contract.
"""
from __future__ import annotations

import math

import numpy as np
from scipy import special

from .errors import DomainError

_SQRT2 = math.sqrt(2.0)
_SQRT2PI = math.sqrt(2.0 * math.pi)

# Acklam (2003) coefficients.
_A = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
      1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
_B = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
      6.680131188771972e+01, -1.328068155288572e+01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
      -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
      3.754408661907416e+00)
_P_LOW = 0.02425


def normal_cdf(x):
    """F(x) for the standard normal distribution."""
    x = np.asarray(x, dtype=float)
    out = 0.5 * special.erfc(-x / _SQRT2)
    return float(out) if out.ndim == 0 else out


def normal_pdf(x):
    x = np.asarray(x, dtype=float)
    out = np.exp(-0.5 * x * x) / _SQRT2PI
    return float(out) if out.ndim == 0 else out


def _acklam(p):
    if p < _P_LOW:
        q = math.sqrt(-2.0 * math.log(p))
        return ((((( _C[0]*q + _C[1])*q + _C[2])*q + _C[3])*q + _C[4])*q + _C[5]) / \
               (((( _D[0]*q + _D[1])*q + _D[2])*q + _D[3])*q + 1.0)
    if p > 1.0 - _P_LOW:
        q = math.sqrt(-2.0 * math.log(1.0 - p))
        return -((((( _C[0]*q + _C[1])*q + _C[2])*q + _C[3])*q + _C[4])*q + _C[5]) / \
                (((( _D[0]*q + _D[1])*q + _D[2])*q + _D[3])*q + 1.0)
    q = p - 0.5
    r = q * q
    return ((((( _A[0]*r + _A[1])*r + _A[2])*r + _A[3])*r + _A[4])*r + _A[5]) * q / \
           ((((( _B[0]*r + _B[1])*r + _B[2])*r + _B[3])*r + _B[4])*r + 1.0)


def _quantile_scalar(p: float) -> float:
    if not 0.0 < p < 1.0:
        raise DomainError(f"normal_quantile requires 0 < p < 1, got {p}")
    # Work in the lower tail, where the erfc-based CDF keeps full relative
    # precision; the residual (normal_cdf(x) - p) would cancel near 1.0.
    if p > 0.5:
        return -_quantile_scalar(1.0 - p)
    x = _acklam(p)
    # One Newton step on the CDF pushes the error to near machine precision.
    x -= (normal_cdf(x) - p) / normal_pdf(x)
    return x


def normal_quantile(p):
    """F^-1(p), the standard normal quantile, absolute error < 1e-9."""
    arr = np.asarray(p, dtype=float)
    if arr.ndim == 0:
        return _quantile_scalar(float(arr))
    if np.any(arr <= 0.0) or np.any(arr >= 1.0):
        raise DomainError("normal_quantile requires 0 < p < 1")
    return np.array([_quantile_scalar(v) for v in arr.ravel()]).reshape(arr.shape)
