"""Compare the compiled kernels with the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Also times a full N=60 Dicke run under each backend (the backend is fixed at
import, so those runs go through subprocesses with SQUEEZE_PURE_PYTHON set).
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from squeezetransfer import _kernels_py

try:
    from squeezetransfer import _kernels as _kernels_c
except ImportError:
    _kernels_c = None


def _cases(rng):
    d = 41
    x = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = x @ x.conj().T
    rho /= np.trace(rho).real
    ax = np.linspace(-3, 3, 121)
    re, im = np.meshgrid(ax, ax)
    z = np.ascontiguousarray((re + 1j * im).ravel())
    coef = rng.random(d)
    pref = np.exp(-0.5 * np.abs(z) ** 2)
    psi = rng.normal(size=(201, 61, 77)) + 1j * rng.normal(size=(201, 61, 77))
    return {
        "quadratic_form_grid 121x121, d=41": ("quadratic_form_grid", (rho, z, coef, pref)),
        "dicke_moments 201 steps, 61x77": ("dicke_moments", (psi, 60)),
    }


def _best(fn, args, repeat):
    return min(timeit.repeat(lambda: fn(*args), number=1, repeat=repeat))


DICKE_SNIPPET = ("import time; from squeezetransfer.dicke import DickeConfig, evolve; "
                 "t=time.perf_counter(); evolve(DickeConfig(60)); print(time.perf_counter()-t)")


def _dicke_time(pure: bool) -> float:
    env = dict(os.environ, SQUEEZE_PURE_PYTHON="1" if pure else "0")
    out = subprocess.run([sys.executable, "-c", DICKE_SNIPPET], env=env, check=True,
                         capture_output=True, text=True)
    return float(out.stdout.strip())


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(0)
    print(f"{'kernel':38s} {'python [ms]':>12s} {'cython [ms]':>12s} {'speedup':>8s}")
    for label, (name, fargs) in _cases(rng).items():
        t_py = _best(getattr(_kernels_py, name), fargs, args.repeat)
        if _kernels_c is None:
            print(f"{label:38s} {t_py * 1e3:12.2f} {'n/a':>12s} {'':>8s}")
            continue
        t_c = _best(getattr(_kernels_c, name), fargs, args.repeat)
        print(f"{label:38s} {t_py * 1e3:12.2f} {t_c * 1e3:12.2f} {t_py / t_c:8.1f}")
    t_py = _dicke_time(True)
    t_c = _dicke_time(False) if _kernels_c is not None else float("nan")
    print(f"{'Dicke run N=60, 201 steps':38s} {t_py * 1e3:12.2f} {t_c * 1e3:12.2f} {t_py / t_c:8.1f}")


if __name__ == "__main__":
    main()
