"""Hashing throughput: numba kernels, numpy fallbacks and the scalar int path."""

import hashlib
import time

import numpy as np

from uhfsec import _kernels
from uhfsec.errors import InvalidLengthError
from uhfsec.gf2 import is_valid_length
from uhfsec.rng import make_rng
from uhfsec.uhf import FieldUHF, ToeplitzUHF

SCALAR_SAMPLE = 20_000


def _inputs(l, input_megabytes, master_seed):
    count = max(1, int(input_megabytes * (1 << 20) * 8) // l)
    rng = make_rng(master_seed, 0)
    xs = rng.integers(0, 1 << l, size=count, dtype=np.uint64)
    return xs, count * l / 8


def _timed(fn, repeat=3):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench_hash(l, input_megabytes=1.0, kind="field", k=None, master_seed=0, repeat=3):
    """Throughput of one seeded hash over random l-bit inputs.

    Reports seconds and MB/s for every available backend, the speed-up of
    each over the scalar int path (timed on a prefix and scaled) and digests
    of the input and output so runs can be compared across backends.
    """
    if kind == "field":
        if not is_valid_length(l):
            raise InvalidLengthError(f"l={l} is not a valid field length")
        if l > _kernels.MAX_FIELD_WORD_L:
            raise ValueError(f"packed field kernels need l <= {_kernels.MAX_FIELD_WORD_L}")
        fam = FieldUHF(l, l // 2 if k is None else k)
    elif kind == "toeplitz":
        if l > _kernels.MAX_TOEPLITZ_WORD_L:
            raise ValueError(f"packed Toeplitz kernels need l <= {_kernels.MAX_TOEPLITZ_WORD_L}")
        fam = ToeplitzUHF(l, l // 2 if k is None else k)
    else:
        raise ValueError(f"bench supports kinds 'field' and 'toeplitz', got {kind!r}")

    xs, nbytes = _inputs(l, input_megabytes, master_seed)
    seed = fam.sample_seed(make_rng(master_seed, 1))
    shift = np.uint64(l - fam.k)

    def runner(name):
        impl = _kernels.IMPLEMENTATIONS[name]
        if kind == "field":
            seeds = np.full(xs.shape, seed, dtype=np.uint64)
            return lambda: impl["ring_mul"](seeds, xs, l) >> shift
        rows = np.array(fam.rows(seed), dtype=np.uint64)
        return lambda: impl["rowmask_apply"](rows, xs)

    backends = {}
    digests = set()
    for name in sorted(_kernels.IMPLEMENTATIONS):
        run = runner(name)
        run()  # warm-up, includes JIT compilation
        seconds, out = _timed(run, repeat)
        digest = hashlib.sha256(np.ascontiguousarray(out).tobytes()).hexdigest()
        digests.add(digest)
        backends[name] = {"seconds": seconds, "mb_per_s": nbytes / (1 << 20) / seconds,
                          "output_sha256": digest}

    sample = xs[:SCALAR_SAMPLE]
    t0 = time.perf_counter()
    scalar_out = [fam.eval(seed, int(x)) for x in sample]
    scalar_seconds = (time.perf_counter() - t0) * xs.size / sample.size
    backends["scalar"] = {"seconds": scalar_seconds,
                          "mb_per_s": nbytes / (1 << 20) / scalar_seconds}
    for name, rec in backends.items():
        rec["speedup_vs_scalar"] = scalar_seconds / rec["seconds"]

    reference = runner("numpy")()[:SCALAR_SAMPLE]
    agree = len(digests) == 1 and bool((reference == np.array(scalar_out, dtype=np.uint64)).all())
    result = {
        "kind": kind, "l": l, "k": fam.k, "seed": int(seed),
        "inputs": int(xs.size), "bytes": nbytes,
        "input_sha256": hashlib.sha256(xs.tobytes()).hexdigest(),
        "active_backend": _kernels.BACKEND,
        "backends": backends,
        "backends_agree": agree,
    }
    if "numba" in backends:
        result["numba_over_numpy"] = backends["numpy"]["seconds"] / backends["numba"]["seconds"]
    return result
