"""Timing comparison of the compiled and pure-Python kernel backends.

Run:  python benchmarks/bench_kernels.py
"""
import time

import numpy as np

from pilotwave import BACKEND, _kernels
from pilotwave._kernels import _ref
from pilotwave.constants import DEFAULT_CONSTANTS
from pilotwave.double_slit import SlitGeometry, TwoSlitField, wave_at_slits
from pilotwave.gaussian import GaussianPacket


def _timeit(fn, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    geom = SlitGeometry()
    src = GaussianPacket(center=0.0, sigma=3e-6,
                         mass=DEFAULT_CONSTANTS.electron_mass)
    field = TwoSlitField(wave_at_slits(src, geom, DEFAULT_CONSTANTS),
                         src.mass, DEFAULT_CONSTANTS)
    g = field.slit_wave.gaussian
    print(f"active backend: {BACKEND}")

    for n in (1_000, 10_000, 100_000):
        y = np.linspace(-3e-4, 3e-4, n)
        for label, dt in (("transient", 1e-13), ("screen", geom.screen_dt)):
            alpha, log_pref = field._alpha_logpref(geom.t1 + dt)
            args = (y, alpha, complex(log_pref), g.a, g.b, g.c, geom.edges())
            t_active = _timeit(lambda: _kernels.two_slit_field(*args))
            t_ref = _timeit(lambda: _ref.two_slit_field(*args))
            print(f"two_slit_field  n={n:>7} {label:9}: "
                  f"{BACKEND} {1e9 * t_active / n:7.1f} ns/pt   "
                  f"python {1e9 * t_ref / n:7.1f} ns/pt   "
                  f"speedup x{t_ref / t_active:5.2f}")

    z = np.linspace(-5e-4, 5e-4, 100_000)
    ratios = np.linspace(-2.0, 2.0, z.size)
    t_active = _timeit(lambda: _kernels.sg_velocity(z, ratios, 2e-5, 1e-4, 1.03))
    t_ref = _timeit(lambda: _ref.sg_velocity(z, ratios, 2e-5, 1e-4, 1.03))
    print(f"sg_velocity     n={z.size:>7}          : "
          f"{BACKEND} {1e9 * t_active / z.size:7.1f} ns/pt   "
          f"python {1e9 * t_ref / z.size:7.1f} ns/pt   "
          f"speedup x{t_ref / t_active:5.2f}")


if __name__ == "__main__":
    main()
