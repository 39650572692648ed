"""Compare the compiled core with the pure-Python fallback.

Each backend runs in its own interpreter because the choice is made at import.

    python3 benchmarks/bench_core.py [--repeat N]
"""

import argparse
import json
import os
import subprocess
import sys

WORKLOAD = r"""
import json, time
from qtetra import _core
from qtetra.exactnum import Q
from qtetra.kernels import RKernel, kernel_point
from qtetra.tetra import rrrr_sweep
from qtetra.verify import rlll_sweep

def timed(fn):
    start = time.perf_counter()
    fn()
    return time.perf_counter() - start

z, b = Q(2, 3), Q(5, 7)
out = {
    "compiled": _core.COMPILED,
    "qpoch": timed(lambda: [_core.qpoch(z, b, m) for m in range(-40, 40) for _ in range(50)]),
    "rlll_OZZ": timed(lambda: rlll_sweep(RKernel("OZZ", kernel_point("OZZ", 11)), window_plus=(0, 3), window_f=(-2, 2))),
    "rlll_OOO": timed(lambda: rlll_sweep(RKernel("OOO", kernel_point("OOO", 11)), window_plus=(0, 4))),
    "rrrr_ZOOOOO": timed(lambda: rrrr_sweep("ZOOOOO", 7, 100)),
}
print(json.dumps(out))
"""


def run(pure: bool) -> dict:
    env = dict(os.environ)
    env.pop("QTETRA_PURE", None)
    if pure:
        env["QTETRA_PURE"] = "1"
    res = subprocess.run([sys.executable, "-c", WORKLOAD], env=env, capture_output=True, text=True, check=True)
    return json.loads(res.stdout)


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=1)
    args = parser.parse_args()
    fast = [run(False) for _ in range(args.repeat)]
    slow = [run(True) for _ in range(args.repeat)]
    if not fast[0]["compiled"]:
        print("compiled core not built; both columns use the fallback")
    print(f"{'workload':<14}{'compiled s':>12}{'pure s':>10}{'speedup':>9}")
    for key in fast[0]:
        if key == "compiled":
            continue
        f = min(r[key] for r in fast)
        s = min(r[key] for r in slow)
        print(f"{key:<14}{f:>12.3f}{s:>10.3f}{s / f:>8.2f}x")


if __name__ == "__main__":
    main()
