"""Compare the numba kernels with the pure-numpy fallback.

Each backend runs in its own interpreter because the flag is read at import:

    python3 benchmarks/bench_kernels.py            # both backends
    python3 benchmarks/bench_kernels.py --sizes 100 400 --repeat 5
"""
from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time

_WORKER = r"""
import json, sys, time
import numpy as np
import w2bounds as w
from w2bounds import kernels

sizes, repeat = json.loads(sys.argv[1]), int(sys.argv[2])
rng = np.random.default_rng(0)
out = {"backend": w.backend_name(), "rows": []}
warm = w.from_points(rng.normal(size=(8, 2)))
w.emd2(warm, warm)  # compile / cache outside the timed region
for n in sizes:
    x = rng.normal(size=(n, 2))
    y = rng.normal(size=(n, 2)) + 0.5
    mu, nu = w.from_points(x), w.from_points(y)
    t_cost, t_emd, val = [], [], None
    for _ in range(repeat):
        t0 = time.perf_counter(); kernels.sqdist_matrix(mu.points, nu.points)
        t_cost.append(time.perf_counter() - t0)
        t0 = time.perf_counter(); val = w.emd2(mu, nu)
        t_emd.append(time.perf_counter() - t0)
    out["rows"].append({"n": n, "sqdist_s": min(t_cost), "emd_s": min(t_emd), "w2sq": val})
print(json.dumps(out))
"""


def run_backend(disable_numba: bool, sizes, repeat) -> dict:
    env = dict(os.environ)
    if disable_numba:
        env["W2BOUNDS_NO_NUMBA"] = "1"
    else:
        env.pop("W2BOUNDS_NO_NUMBA", None)
    proc = subprocess.run([sys.executable, "-c", _WORKER, json.dumps(sizes), str(repeat)],
                          env=env, capture_output=True, text=True, check=True)
    return json.loads(proc.stdout.strip().splitlines()[-1])


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[50, 100, 200, 400])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    fast = run_backend(False, args.sizes, args.repeat)
    slow = run_backend(True, args.sizes, args.repeat)
    print(f"{'n':>6} {'emd ' + fast['backend']:>14} {'emd ' + slow['backend']:>14} "
          f"{'speedup':>8} {'|diff|':>10}")
    for f, s in zip(fast["rows"], slow["rows"]):
        print(f"{f['n']:>6} {f['emd_s']:>13.4f}s {s['emd_s']:>13.4f}s "
              f"{s['emd_s'] / max(f['emd_s'], 1e-12):>7.1f}x {abs(f['w2sq'] - s['w2sq']):>10.2e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
