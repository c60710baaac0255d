"""Compare the compiled extension against the pure-NumPy fallback.

Times the three hot kernels at small and large model orders, plus one
end-to-end dense bandit run per backend. Run with:

    python benchmarks/backend_bench.py
"""

import time

import numpy as np

from gpsieve import _core_py

try:
    from gpsieve import _core
except ImportError:
    _core = None


def _time(fn, *args, repeat=5):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_kernels():
    rng = np.random.default_rng(0)
    backends = [("python", _core_py)] + ([("compiled", _core)] if _core else [])
    print(f"{'kernel':<18} {'size':<14} " + "  ".join(f"{n:>10}" for n, _ in backends))
    for m, n in ((32, 101), (300, 1681)):
        d = 2
        pts = np.ascontiguousarray(rng.normal(size=(m, d)))
        cand = np.ascontiguousarray(rng.normal(size=(n, d)))
        gram = _core_py.se_cross(pts, pts, 1.0, 1.0) + 0.001 * np.eye(m)
        chol = np.ascontiguousarray(np.linalg.cholesky(gram))
        weights = rng.normal(size=m)
        cross_t = np.ascontiguousarray(_core_py.se_cross(cand, pts, 1.0, 1.0))
        rhs = cross_t[0].copy()

        rows = [
            ("se_cross", lambda b: b.se_cross(cand, pts, 1.0, 1.0)),
            ("forward_solve", lambda b: b.forward_solve(chol, rhs)),
            ("batch_posterior", lambda b: b.batch_posterior(chol, weights, cross_t, 1.0)),
        ]
        for name, call in rows:
            times = [
                _time(call, backend_mod) for _, backend_mod in backends
            ]
            cells = "  ".join(f"{t * 1e6:>8.1f}us" for t in times)
            print(f"{name:<18} M={m:<4} N={n:<6} {cells}")


def bench_run():
    import os
    import subprocess
    import sys

    code = (
        "import time, gpsieve\n"
        "from gpsieve import BanditConfig, BetaSchedule, KernelSpec, run_dense\n"
        "from gpsieve.objectives import build_candidates, default_candidate_descriptor, "
        "example1d_objective, ObjectiveKind\n"
        "c = build_candidates(default_candidate_descriptor(ObjectiveKind.EXAMPLE_1D))\n"
        "cfg = BanditConfig(horizon=300, kernel=KernelSpec(1.0), noise_variance=0.001,\n"
        "                   candidates=c, beta_schedule=BetaSchedule.finite(len(c)))\n"
        "t0 = time.perf_counter()\n"
        "run_dense(cfg, example1d_objective())\n"
        "print(f'{gpsieve.BACKEND}: dense T=300 run {time.perf_counter()-t0:.3f}s')\n"
    )
    for backend in ("python", "compiled") if _core else ("python",):
        env = dict(os.environ, GPSIEVE_BACKEND=backend)
        sys.stdout.flush()
        subprocess.run([sys.executable, "-c", code], env=env, check=True)


if __name__ == "__main__":
    if _core is None:
        print("compiled extension not available; timing the fallback only")
    bench_kernels()
    print()
    bench_run()
