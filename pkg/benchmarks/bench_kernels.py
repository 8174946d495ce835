"""Compare the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Each kernel runs on the same inputs through both backends; the results must
agree before timings are reported.
"""

import argparse
import timeit

import numpy as np

from mobius_rigidity import _kernels_py

try:
    from mobius_rigidity import _kernels as _kernels_c
except ImportError:
    _kernels_c = None


def light_gram(rng, m, N=3):
    X = 2.0 * rng.normal(size=(m, N))
    q = np.sum(X**2, 1)
    U = np.column_stack([X, (q - 1) / 2, (q + 1) / 2])
    U /= np.linalg.norm(U, axis=1)[:, None]
    return _kernels_py.lorentz_gram(U)


def cases(rng):
    for m in (100, 1000, 3000):
        A = rng.normal(size=(m, 5))
        # perturbation well above rounding so that the witness is unambiguous
        B = A + 1e-3 * rng.normal(size=A.shape)
        yield f"lorentz_gram m={m}", "lorentz_gram", (A,)
        yield f"gram_discrepancy m={m}", "gram_discrepancy", (A, B)
    for m in (12, 25, 40):
        GA = light_gram(rng, m)
        GB = GA * (1 + 1e-4 * rng.normal(size=GA.shape))
        GB = (GB + GB.T) / 2
        yield f"cross_ratio_discrepancy m={m}", "cross_ratio_discrepancy", (GA, GB)


def agree(x, y):
    if isinstance(x, tuple):
        return np.isclose(x[0], y[0], rtol=1e-10, atol=1e-300) and tuple(x[1:]) == tuple(y[1:])
    return np.allclose(x, y, rtol=1e-13, atol=1e-13)


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if _kernels_c is None:
        print("compiled kernels not built; only the numpy fallback is available")
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':34} {'numpy (s)':>11} {'cython (s)':>11} {'speedup':>8}")
    for label, name, inputs in cases(rng):
        py = getattr(_kernels_py, name)
        t_py = min(timeit.repeat(lambda: py(*inputs), number=1, repeat=args.repeat))
        if _kernels_c is None:
            print(f"{label:34} {t_py:11.5f} {'-':>11} {'-':>8}")
            continue
        c = getattr(_kernels_c, name)
        if not agree(py(*inputs), c(*inputs)):
            raise SystemExit(f"{label}: backends disagree")
        t_c = min(timeit.repeat(lambda: c(*inputs), number=1, repeat=args.repeat))
        print(f"{label:34} {t_py:11.5f} {t_c:11.5f} {t_py / t_c:7.1f}x")


if __name__ == "__main__":
    main()
