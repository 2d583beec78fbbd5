"""Hot numerical kernels with a compiled core and a NumPy fallback.

``BACKEND`` records which implementation was selected at import time:
"cython" when the compiled extension is available, otherwise "numpy".
Both expose the same functions with identical semantics; the benchmark in
benchmarks/bench_kernels.py compares them.
"""
from . import _ref

try:
    from . import _fast  # compiled extension, optional
except ImportError:  # pragma: no cover - depends on build environment
    _fast = None

if _fast is not None:
    BACKEND = "cython"
    two_slit_field = _fast.two_slit_field
    two_slit_simpson = _fast.two_slit_simpson
    sg_velocity = _fast.sg_velocity
else:  # pragma: no cover
    BACKEND = "numpy"
    two_slit_field = _ref.two_slit_field
    two_slit_simpson = _ref.two_slit_simpson
    sg_velocity = _ref.sg_velocity

__all__ = [
    "BACKEND", "two_slit_field", "two_slit_simpson", "sg_velocity", "_ref", "_fast",
]
