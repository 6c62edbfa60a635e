"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--quick]

Also times end-to-end workloads (one exact fit, one PACF-based subset
search) with each backend swapped in.
"""

import argparse
import timeit

import numpy as np

from subsetar import kernels, likelihood, pacf, selection
from subsetar.core import SubsetSpec, ZetaVector
from subsetar.forecast import simulate


def _cases(quick: bool):
    rng = np.random.default_rng(0)
    n = 2820 if not quick else 500
    x = simulate(ZetaVector(SubsetSpec((1, 2, 9)), [0.6, 0.3, -0.2]), n, seed=1).values
    p = 40 if not quick else 12
    zeta = rng.uniform(-0.6, 0.6, p)
    phi = kernels.dl_forward(zeta)
    D = kernels.sos_kernel(x, p)
    v = rng.standard_normal(p)
    e = rng.standard_normal(n)
    return {
        "dl_table": lambda k: k.dl_table(zeta),
        "dl_forward": lambda k: k.dl_forward(zeta),
        "dl_backward": lambda k: k.dl_backward(phi),
        "dl_vjp": lambda k: k.dl_vjp(zeta, v),
        "burg": lambda k: k.burg(x, min(300, n // 4)),
        "sos_kernel": lambda k: k.sos_kernel(x, p),
        "sos_value_grad": lambda k: k.sos_value_grad(zeta, D),
        "ar_residuals": lambda k: k.ar_residuals(x, phi),
        "ar_recursion": lambda k: k.ar_recursion(e, phi, np.zeros(p)),
    }, x


def _swap(module):
    """Point ``kernels`` at ``module``; returns the previous bindings."""
    old = {name: getattr(kernels, name) for name in kernels.NAMES}
    for name in kernels.NAMES:
        setattr(kernels, name, getattr(module, name))
    return old


def _restore(old):
    for name, fn in old.items():
        setattr(kernels, name, fn)


def _time(fn, repeat):
    t = timeit.Timer(fn)
    number, _ = t.autorange()
    return min(t.repeat(repeat, number)) / number


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--quick", action="store_true")
    args = ap.parse_args(argv)

    backs = kernels.backends()
    names = sorted(backs)
    cases, x = _cases(args.quick)
    print(f"default backend: {kernels.BACKEND}; available: {', '.join(names)}")
    print(f"{'kernel':<16}" + "".join(f"{b + ' [us]':>16}" for b in names) + f"{'speedup':>10}")
    for label, fn in cases.items():
        times = {b: _time(lambda: fn(backs[b]), args.repeat) for b in names}
        ratio = times["python"] / times["cython"] if "cython" in times else float("nan")
        print(f"{label:<16}" + "".join(f"{times[b] * 1e6:>16.1f}" for b in names)
              + f"{ratio:>10.1f}")

    spec = SubsetSpec((1, 2, 9))
    cfg = selection.SelectionConfig(max_order=min(100, x.size // 4), max_params=20)
    workloads = {
        "fit_mle": lambda: likelihood.fit_mle(x, spec),
        "select": lambda: selection.select_models(x, cfg),
        "estimate_pacf": lambda: pacf.estimate_pacf(x, 20),
    }
    print(f"\n{'workload':<16}" + "".join(f"{b + ' [ms]':>16}" for b in names) + f"{'speedup':>10}")
    for label, fn in workloads.items():
        times = {}
        for b in names:
            old = _swap(backs[b])
            try:
                times[b] = _time(fn, args.repeat)
            finally:
                _restore(old)
        ratio = times["python"] / times["cython"] if "cython" in times else float("nan")
        print(f"{label:<16}" + "".join(f"{times[b] * 1e3:>16.2f}" for b in names)
              + f"{ratio:>10.1f}")


if __name__ == "__main__":
    main()
