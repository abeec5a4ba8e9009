"""Compare the compiled kernels against the interpreted numpy fallback.

Each mode runs in its own interpreter because the switch is read at import::

    python benchmarks/bench_kernels.py            # both modes, table on stdout
    python benchmarks/bench_kernels.py --worker   # one mode, JSON on stdout
"""

import argparse
import json
import os
import subprocess
import sys
import time

WORKLOADS = [
    # (label, kind, seed, num_vars, conflicts)
    ("enumerate 16 vars", "scan", 1, 16, None),
    ("enumerate 20 vars", "scan", 2, 20, None),
    ("cdcl 60 vars, 500 conflicts", "solve", 3, 60, 500),
    ("cdcl 300 vars, 2000 conflicts", "solve", 1001, 300, 2000),
]


def worker(repeat):
    from lnps.bench import generate_instance
    from lnps.kernels import JIT_ENABLED
    from lnps.kernels.enumerate import scan
    from lnps.solver import Budget, SolverSession

    out = {"jit": JIT_ENABLED, "rows": []}
    for label, kind, seed, n, conflicts in WORKLOADS:
        p = generate_instance(seed, n, 0.5, 1.0)
        if kind == "scan":
            call = lambda: scan(p.num_vars, p.clauses, p.objective)[0]
        else:
            call = lambda: SolverSession(p).solve(budget=Budget(conflicts)).cost
        t = time.perf_counter()
        result = call()  # includes compilation or cache load
        first = time.perf_counter() - t
        times = []
        for _ in range(repeat):
            t = time.perf_counter()
            call()
            times.append(time.perf_counter() - t)
        out["rows"].append({"label": label, "result": result, "first": first, "best": min(times)})
    return out


def run_mode(disable, repeat, timeout):
    env = dict(os.environ)
    env.pop("LNPS_DISABLE_JIT", None)
    if disable:
        env["LNPS_DISABLE_JIT"] = "1"
    proc = subprocess.run([sys.executable, __file__, "--worker", "--repeat", str(repeat)],
                          env=env, capture_output=True, text=True, timeout=timeout, check=True)
    return json.loads(proc.stdout)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--worker", action="store_true")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--timeout", type=float, default=1800)
    args = ap.parse_args()
    if args.worker:
        print(json.dumps(worker(args.repeat)))
        return
    jit = run_mode(False, args.repeat, args.timeout)
    py = run_mode(True, 1, args.timeout)
    print(f"{'workload':32} {'numba s':>10} {'numpy s':>10} {'speedup':>9}  same result")
    for a, b in zip(jit["rows"], py["rows"]):
        print(f"{a['label']:32} {a['best']:10.4f} {b['best']:10.4f} {b['best'] / a['best']:9.1f}x  "
              f"{a['result'] == b['result']}")


if __name__ == "__main__":
    main()
