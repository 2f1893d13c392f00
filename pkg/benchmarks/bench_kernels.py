"""Time the compiled kernels against the pure-Python fallback.

Each backend runs in a fresh interpreter because the choice is made at import.
Usage: python benchmarks/bench_kernels.py [--repeat 5]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys

WORKLOAD = r"""
import json, timeit
import numpy as np
from anfloer import kernels
from anfloer.lefschetz import MatchingLoop
from anfloer.variety import SurfaceParams

rng = np.random.default_rng(0)
t = np.linspace(0, 2 * np.pi, 4096, endpoint=False)
circle = 2.0 * np.exp(1j * t)
loop = MatchingLoop.hermite(SurfaceParams(4), 4, [[3.5, 1.0], [2.5, 0.6], [1.5, 1.0],
                                                  [1.4, -0.8], [2.5, -0.5], [3.5, -1.0]])
mat = rng.integers(0, 2, (200, 200), dtype=np.uint8)
cases = {
    "winding_angle_sum[4096]": lambda: kernels.winding_angle_sum(circle, 0.3 + 0.1j),
    "polyline_self_intersects[512]": lambda: kernels.polyline_self_intersects(circle[::8]),
    "gf2_rank[200x200]": lambda: kernels.gf2_rank(mat),
    "loop.validate": lambda: loop.validate(),
}
out = {"backend": kernels.BACKEND}
for name, fn in cases.items():
    n = REPEAT
    out[name] = min(timeit.repeat(fn, number=1, repeat=n))
print(json.dumps(out))
"""


def run_backend(pure: bool, repeat: int) -> dict:
    env = dict(os.environ)
    env.pop("ANFLOER_PURE_PYTHON", None)
    if pure:
        env["ANFLOER_PURE_PYTHON"] = "1"
    code = WORKLOAD.replace("REPEAT", str(repeat))
    res = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True,
                         check=True)
    return json.loads(res.stdout)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    fast = run_backend(False, args.repeat)
    slow = run_backend(True, args.repeat)
    if fast["backend"] != "cython":
        print("compiled kernels not built; only the fallback is available")
    print(f"{'kernel':32s} {fast['backend']:>12s} {'python':>12s} {'speedup':>8s}")
    for name in slow:
        if name == "backend":
            continue
        print(f"{name:32s} {fast[name] * 1e3:10.3f}ms {slow[name] * 1e3:10.3f}ms "
              f"{slow[name] / fast[name]:7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
