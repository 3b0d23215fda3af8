"""Compare the compiled and pure-Python kernel backends.

    python3 benchmarks/bench_kernels.py [--n 20000] [--repeat 5]

Reports the best wall time per kernel for each available backend, then
times one CLI experiment with and without KAKQKD_PURE_PYTHON.
"""

import argparse
import os
import random
import subprocess
import sys
import time
import timeit

from kakqkd import _pykernels, kernels


def kernel_cases(mod, n, rng):
    thetas = [rng.uniform(0, 6.283185307179586) for _ in range(n)]
    other = [rng.uniform(0, 6.283185307179586) for _ in range(n)]
    mats = [mod.phase_pair(t) for t in thetas[:1000]]
    state = (1 + 0j, 0j)
    return {
        "matmul x1000": lambda: [mod.matmul(a, b) for a, b in zip(mats, reversed(mats))],
        f"unitarity_sweep x{n}": lambda: mod.unitarity_sweep(mod.PHASE_PAIR, thetas),
        f"commutator_sweep x{n}": lambda: mod.commutator_sweep(mod.REFLECTION, thetas, mod.PHASE_PAIR, other),
        f"single_stage_fidelities x{n}": lambda: mod.single_stage_fidelities(thetas, other, state),
    }


def bench_kernels(n, repeat):
    backends = [m for m in kernels.available_backends()]
    if _pykernels not in backends:
        backends.append(_pykernels)
    results = {}
    for mod in backends:
        for name, fn in kernel_cases(mod, n, random.Random(0)).items():
            results.setdefault(name, {})[mod.BACKEND] = min(timeit.repeat(fn, number=1, repeat=repeat))
    names = [m.BACKEND for m in backends]
    print(f"{'kernel':32}" + "".join(f"{b:>12}" for b in names) + ("     speedup" if len(names) > 1 else ""))
    for name, row in results.items():
        line = f"{name:32}" + "".join(f"{row[b] * 1e3:10.2f}ms" for b in names)
        if len(names) > 1:
            line += f"{row['python'] / row[names[0]]:11.1f}x"
        print(line)


def bench_cli():
    args = [sys.executable, "-m", "kakqkd", "--protocol", "single-stage", "--eve", "angle-guess",
            "--rekey", "--trials", "50", "--bits", "1000"]
    print("\nend to end:", " ".join(args[3:]))
    outputs = {}
    for label, extra in (("default", {}), ("python", {"KAKQKD_PURE_PYTHON": "1"})):
        env = dict(os.environ, **extra)
        start = time.perf_counter()
        outputs[label] = subprocess.run(args, env=env, capture_output=True, check=True).stdout
        print(f"  {label:8} {time.perf_counter() - start:7.2f}s")
    print("  outputs identical:", outputs["default"] == outputs["python"])


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n", type=int, default=20_000)
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--skip-cli", action="store_true")
    a = p.parse_args()
    print("active backend:", kernels.BACKEND)
    bench_kernels(a.n, a.repeat)
    if not a.skip_cli:
        bench_cli()


if __name__ == "__main__":
    main()
