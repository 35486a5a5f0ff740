"""Timing comparison of the two barrier-kernel paths.

The margin solver's inner loop is compiled with numba when it is
importable and PATHLYAP_NO_NUMBA is unset; otherwise a pure-numpy path
runs the same algorithm.  This script times one representative margin
program under both paths, each in its own subprocess so the environment
flag is honored at import time, with an untimed warmup solve first (the
warmup also absorbs JIT compilation).

Usage: python3 benchmarks/bench_kernels.py [--repeats N]
"""

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json
import sys
import time

from pathlyap import _kernels
from pathlyap.fixtures import demo_system
from pathlyap.graphs import de_bruijn
from pathlyap.lyapunov import assemble_lmi
from pathlyap.sdp import solve_margin

repeats = int(sys.argv[1])
problem = assemble_lmi(de_bruijn(("a", "b"), 3), demo_system(), 3.93)

solve_margin(problem)  # warmup: JIT compile and cache priming
times = []
for _ in range(repeats):
    start = time.perf_counter()
    sol = solve_margin(problem)
    times.append(time.perf_counter() - start)

print(json.dumps({
    "numba": _kernels.USING_NUMBA,
    "margin": sol.margin,
    "status": sol.status,
    "best": min(times),
    "times": times,
}))
"""


def run_path(force_fallback, repeats):
    env = dict(os.environ)
    if force_fallback:
        env["PATHLYAP_NO_NUMBA"] = "1"
    else:
        env.pop("PATHLYAP_NO_NUMBA", None)
    out = subprocess.run(
        [sys.executable, "-c", WORKER, str(repeats)],
        capture_output=True, text=True, env=env, check=True,
    )
    return json.loads(out.stdout)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    print("workload: margin program on the order-3 De Bruijn graph "
          "(8 nodes, 16 edges, 17 unknowns)")
    rows = []
    for force in (False, True):
        r = run_path(force, args.repeats)
        label = "numba" if r["numba"] else "numpy fallback"
        rows.append((label, r))
        print(f"{label:>16}: best {r['best'] * 1e3:8.2f} ms over "
              f"{args.repeats} runs (status {r['status']}, "
              f"margin {r['margin']:.6g})")

    if rows[0][1]["numba"]:
        ratio = rows[1][1]["best"] / rows[0][1]["best"]
        print(f"{'speedup':>16}: {ratio:.2f}x")
        if abs(rows[0][1]["margin"] - rows[1][1]["margin"]) > 1e-8:
            print("warning: the two paths disagree on the optimum")
    else:
        print("note: numba unavailable, both runs used the fallback")


if __name__ == "__main__":
    main()
