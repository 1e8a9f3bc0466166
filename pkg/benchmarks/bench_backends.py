"""Benchmark the numba kernels against their pure-numpy fallbacks.

Times the three hot aggregation kernels (attention forward, attention
backward, scatter-add) on synthetic workloads shaped like real training
batches, then times one end-to-end embedder training run per backend.

Usage:
    python3 benchmarks/bench_backends.py [--contexts N] [--repeats R]
"""

import argparse
import time

import numpy as np

from apisift import backend
from apisift.backend import numpy_ops
from apisift.codevec import CODE_DIM, EmbedderConfig
from apisift.corpus import MethodRecord
from apisift.nnet import TrainConfig


def _timeit(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        started = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - started)
    return best


def bench_kernels(n_contexts, repeats):
    rng = np.random.default_rng(0)
    combined = rng.normal(size=(n_contexts, CODE_DIM))
    attn = rng.normal(size=CODE_DIM)
    _, weights = numpy_ops.attention_forward(combined, attn)
    out_grad = rng.normal(size=CODE_DIM)
    idx = rng.integers(0, 500, size=n_contexts)
    rows = rng.normal(size=(n_contexts, CODE_DIM))

    cases = {
        "attention_forward": lambda: backend.attention_forward(combined, attn),
        "attention_backward": lambda: backend.attention_backward(
            combined, weights, attn, out_grad
        ),
        "scatter_add_rows": lambda: backend.scatter_add_rows(
            np.zeros((500, CODE_DIM)), idx, rows
        ),
    }

    results = {}
    for name in ("numpy", "numba"):
        try:
            active = backend.select_backend(name)
        except Exception as exc:
            print(f"{name}: unavailable ({exc})")
            continue
        for case, fn in cases.items():
            fn()  # warm up (numba compiles on first call)
            results[(active, case)] = _timeit(fn, repeats)
    return results


def bench_training():
    from apisift.codevec import train_code_embedder

    records = []
    for i in range(40):
        for word in ("alpha", "beta", "gamma", "delta"):
            records.append(
                MethodRecord(
                    fqcn=f"bench.C{i}", name="get" + word.capitalize(), params=(),
                    return_type="int", modifiers=frozenset(["public"]),
                    body_text=f"int v{i} = {word} + {i}; return v{i} * {word};",
                    doc_text="doc", doc_origin="self",
                )
            )
    cfg = TrainConfig(learning_rate=0.05, epochs=2, seed=0, optimizer="adam")
    out = {}
    for name in ("numpy", "numba"):
        try:
            active = backend.select_backend(name)
        except Exception:
            continue
        train_code_embedder(records[:8], cfg, EmbedderConfig(seed=0))  # warm up
        started = time.perf_counter()
        train_code_embedder(records, cfg, EmbedderConfig(seed=0))
        out[active] = time.perf_counter() - started
    return out


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--contexts", type=int, default=2000)
    parser.add_argument("--repeats", type=int, default=30)
    args = parser.parse_args()

    print(f"kernel microbenchmarks ({args.contexts} contexts, best of {args.repeats}):")
    results = bench_kernels(args.contexts, args.repeats)
    cases = sorted({case for _, case in results})
    for case in cases:
        numpy_t = results.get(("numpy", case))
        numba_t = results.get(("numba", case))
        line = f"  {case:<20} numpy {numpy_t * 1e6:9.1f} us"
        if numba_t is not None:
            line += f"   numba {numba_t * 1e6:9.1f} us   speedup {numpy_t / numba_t:5.2f}x"
        print(line)

    print("end-to-end embedder training (160 methods, 2 epochs):")
    for name, secs in bench_training().items():
        print(f"  {name:<8} {secs:6.2f} s")


if __name__ == "__main__":
    main()
