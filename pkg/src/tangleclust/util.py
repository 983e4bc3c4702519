"""Seed derivation, deterministic serialization, small shared helpers."""

import json
import zlib
from concurrent.futures import ThreadPoolExecutor

import numpy as np

SCHEMA_VERSION = 1


def derive_rng(seed, *tags) -> np.random.Generator:
    """PCG64 generator for (seed, *tags).

    Sub-streams are derived by seeding a ``SeedSequence`` with the user seed
    followed by the crc32 of each tag (strings) or the tag itself (ints), so
    every pipeline stage gets an independent, reproducible stream.
    """
    entropy = [int(seed) & 0xFFFFFFFF]
    for tag in tags:
        if isinstance(tag, str):
            entropy.append(zlib.crc32(tag.encode("utf-8")))
        else:
            entropy.append(int(tag) & 0xFFFFFFFFFFFFFFFF)
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))


def parallel_map(fn, items, threads=None):
    """Order-preserving map, optionally on a thread pool.

    ``threads=None`` or ``1`` runs serially.  Output order is the input
    order regardless of scheduling, so results are deterministic.
    """
    items = list(items)
    if threads is None or threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def dump_json(obj, path) -> None:
    """Write canonical JSON (sorted keys, stable float repr)."""
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def fmt_float(x) -> str:
    """Shortest round-trip decimal representation."""
    return repr(float(x))


def write_csv(path, rows, header=None, config_comment=None) -> None:
    """Write rows of numbers/strings as CSV.

    ``config_comment`` is emitted as a leading ``#`` line so every artifact
    carries the run configuration; numeric readers should skip comments.
    """
    with open(path, "w", encoding="utf-8") as fh:
        if config_comment is not None:
            fh.write("# " + config_comment + "\n")
        if header is not None:
            fh.write(",".join(str(h) for h in header) + "\n")
        for row in rows:
            fields = []
            for v in row:
                if isinstance(v, (float, np.floating)):
                    fields.append(fmt_float(v))
                else:
                    fields.append(str(v))
            fh.write(",".join(fields) + "\n")
