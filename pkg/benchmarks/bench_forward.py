#!/usr/bin/env python3
"""Benchmark the numba kernel against the pure-numpy fallback.

Builds a synthetic encoder at a few sizes and times the forward pass on
each backend. The first numba call (JIT compile) is excluded via warmup.

Usage: python benchmarks/bench_forward.py [--iterations N]
"""

import argparse
import time

import numpy as np

from attnlens.model import EncoderModel, ModelConfig, forward, required_tensor_shapes

SIZES = [
    dict(num_layers=2, num_heads=2, hidden_size=64, ffn_size=256, seq=64),
    dict(num_layers=4, num_heads=8, hidden_size=256, ffn_size=1024, seq=128),
    dict(num_layers=6, num_heads=12, hidden_size=384, ffn_size=1536, seq=256),
]


def build_model(num_layers, num_heads, hidden_size, ffn_size, seq, seed=0):
    cfg = ModelConfig(
        num_layers=num_layers,
        num_heads=num_heads,
        hidden_size=hidden_size,
        ffn_size=ffn_size,
        vocab_size=1000,
        max_positions=max(seq, 2),
        layer_norm_eps=1e-5,
        bos_id=0,
        eos_id=1,
        pad_id=2,
        model_id=f"bench-L{num_layers}H{num_heads}d{hidden_size}",
    )
    rng = np.random.default_rng(seed)
    tensors = {
        name: rng.normal(0.0, 0.3, size=shape).astype(np.float32)
        for name, shape in required_tensor_shapes(cfg).items()
    }
    return EncoderModel(config=cfg, tensors=tensors)


def time_backend(model, ids, backend, iterations):
    forward(model, ids, backend=backend)  # warmup / JIT compile
    start = time.perf_counter()
    for _ in range(iterations):
        forward(model, ids, backend=backend)
    return (time.perf_counter() - start) / iterations


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--iterations", type=int, default=10)
    args = parser.parse_args()

    print(f"{'model':<24} {'N':>5} {'numpy (ms)':>12} {'numba (ms)':>12} {'speedup':>8}")
    for size in SIZES:
        seq = size.pop("seq")
        model = build_model(seq=seq, **size)
        size["seq"] = seq
        rng = np.random.default_rng(1)
        ids = rng.integers(0, 1000, seq)
        t_np = time_backend(model, ids, "numpy", args.iterations)
        t_nb = time_backend(model, ids, "numba", args.iterations)
        print(
            f"{model.config.model_id:<24} {seq:>5} {t_np * 1e3:>12.2f} "
            f"{t_nb * 1e3:>12.2f} {t_np / t_nb:>7.2f}x"
        )


if __name__ == "__main__":
    main()
