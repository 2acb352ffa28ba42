#!/usr/bin/env python3
"""Throughput comparison of the codec kernels (compiled vs pure Python).

Builds a realistic inbound stream (frames interleaved with line noise) and
times crc16 and the frame scanner through each kernel.

    python benchmarks/bench_codec.py [--frames 20000] [--noise 0.2]
"""

import argparse
import random
import time

from rfgate import protocol
from rfgate.protocol import _pure

try:
    from rfgate.protocol import _native
except ImportError:
    _native = None


def build_stream(n_frames: int, noise: float, rng: random.Random) -> bytes:
    parts = []
    for _ in range(n_frames):
        if rng.random() < noise:
            parts.append(rng.randbytes(rng.randrange(1, 16)))
        frame = protocol.Frame(rng.randrange(256), rng.randbytes(rng.randrange(65)))
        parts.append(protocol.encode_frame(frame))
    return b"".join(parts)


def time_call(fn, *args, repeats: int = 3) -> float:
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def bench(kernel, stream: bytes) -> tuple[float, float]:
    mb = len(stream) / 1e6
    crc_s = time_call(kernel.crc16, stream)
    scan_s = time_call(kernel.scan_frames, stream)
    return mb / crc_s, mb / scan_s


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--frames", type=int, default=20_000)
    parser.add_argument("--noise", type=float, default=0.2)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    stream = build_stream(args.frames, args.noise, random.Random(args.seed))
    print(f"stream: {args.frames} frames, {len(stream) / 1e6:.2f} MB "
          f"(noise ratio {args.noise})\n")
    print(f"{'kernel':<10} {'crc16 MB/s':>12} {'scan MB/s':>12}")

    pure_crc, pure_scan = bench(_pure, stream)
    print(f"{'_pure':<10} {pure_crc:>12.1f} {pure_scan:>12.1f}")

    if _native is None:
        print("\ncompiled kernel not built; install with the Cython extension to compare")
        return
    native_crc, native_scan = bench(_native, stream)
    print(f"{'_native':<10} {native_crc:>12.1f} {native_scan:>12.1f}")
    print(f"\nspeedup: crc16 x{native_crc / pure_crc:.0f}, scan x{native_scan / pure_scan:.0f}")

    frames_native = _native.scan_frames(stream)
    frames_pure = _pure.scan_frames(stream)
    assert frames_native == frames_pure, "kernels disagree!"
    print(f"kernels agree on {len(frames_native[0])} frames, {frames_native[1]} defect bytes")


if __name__ == "__main__":
    main()
