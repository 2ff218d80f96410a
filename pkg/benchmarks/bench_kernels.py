"""Compiled vs pure-Python kernels.

    python3 benchmarks/bench_kernels.py [--repeat N]

Times the RK4 integrator on the reference circuit (0.5 s and 3 s records at
dt = 1e-4) and a 8192-point FFT, and checks that both backends agree.
"""

import argparse
import sys
import timeit

import numpy as np

from linetransient import REFERENCE_PARAMS, SimConfig, build_state_space
from linetransient import _purepy
from linetransient._backend import compiled_module


def rk4_case(t_end):
    p = REFERENCE_PARAMS
    a = build_state_space(p).a
    cfg = SimConfig.peak(t_end=t_end)
    args = (a[0, 0], a[0, 1], a[1, 0], a[1, 1], 1.0 / p.l_total, 0.0,
            p.v_peak, p.omega_supply, cfg.dt, cfg.switch_index, cfg.n_samples)
    return f"rk4 n={cfg.n_samples}", "rk4_sine_lti2", args


def fft_case(n):
    x = np.random.default_rng(0).standard_normal(n).astype(complex)
    return f"fft n={n}", "fft_radix2", (x,)


def bench(repeat=5):
    compiled = compiled_module()
    cases = [rk4_case(0.5), rk4_case(3.0), fft_case(8192)]
    rows = []
    for label, name, args in cases:
        row = {"case": label}
        outputs = {}
        for backend, mod in (("python", _purepy), ("compiled", compiled)):
            if mod is None:
                row[backend] = float("nan")
                continue
            fn = getattr(mod, name)
            outputs[backend] = fn(*args)
            timer = timeit.Timer(lambda: fn(*args))
            number, _ = timer.autorange()
            row[backend] = min(timer.repeat(repeat=repeat, number=number)) / number
        if len(outputs) == 2:
            a, b = outputs["python"], outputs["compiled"]
            if isinstance(a, tuple):
                row["identical"] = all(np.array_equal(x, y) for x, y in zip(a, b))
            else:
                row["identical"] = bool(np.allclose(a, b, rtol=0, atol=1e-9 * np.max(np.abs(a))))
        rows.append(row)
    return rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    rows = bench(args.repeat)
    print(f"{'case':<14}{'python [ms]':>14}{'compiled [ms]':>16}{'speedup':>10}  agree")
    for r in rows:
        py, c = r["python"] * 1e3, r["compiled"] * 1e3
        print(f"{r['case']:<14}{py:>14.3f}{c:>16.3f}{py / c:>9.1f}x  {r.get('identical', '-')}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
