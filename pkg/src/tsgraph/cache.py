"""On-disk codebook cache.

Layout (all integers big-endian):

    magic "TSCB" | u16 version | u16 n | u64 total | 32-byte ordering sha256 | u16 class count
    per class, in code order: u16 j | u64 count | count x (packed m-bit canon, u64 labelings)
"""
from __future__ import annotations

import logging
import os
import struct
from pathlib import Path

from .exceptions import SchemaError
from .tscode import Codebook, ClassOrdering, build_codebook, class_ordering
from .graphs import num_pairs

log = logging.getLogger(__name__)

MAGIC = b"TSCB"
FORMAT_VERSION = 1
_HEAD = struct.Struct(">4sHHQ32sH")
_CLASS = struct.Struct(">HQ")
_LAB = struct.Struct(">Q")


def _canon_bytes(m: int) -> int:
    return max(1, (m + 7) // 8)


def dump_codebook(cb: Codebook) -> bytes:
    m = cb.m
    width = _canon_bytes(m)
    out = bytearray(_HEAD.pack(
        MAGIC, FORMAT_VERSION, cb.n, len(cb),
        bytes.fromhex(cb.ordering.checksum()), len(cb.ordering.classes),
    ))
    for j, size in cb.ordering.classes:
        out += _CLASS.pack(j, size)
        for key in cb.members[j]:
            out += key.to_bytes(width, "big")
            out += _LAB.pack(cb.labelings[key])
    return bytes(out)


def load_codebook_bytes(data: bytes, expected: ClassOrdering | None = None) -> Codebook:
    if len(data) < _HEAD.size:
        raise SchemaError("codebook cache truncated in header")
    magic, version, n, total, checksum, nclasses = _HEAD.unpack_from(data)
    if magic != MAGIC:
        raise SchemaError("not a codebook cache file")
    if version != FORMAT_VERSION:
        raise SchemaError(f"cache format version {version}, expected {FORMAT_VERSION}")
    expected = class_ordering(n) if expected is None else expected
    if checksum.hex() != expected.checksum() or total != expected.total:
        raise SchemaError("cache ordering checksum does not match the class table")
    width = _canon_bytes(num_pairs(n))
    pos = _HEAD.size
    members: dict[int, tuple[int, ...]] = {}
    labelings: dict[int, int] = {}
    try:
        for _ in range(nclasses):
            j, size = _CLASS.unpack_from(data, pos)
            pos += _CLASS.size
            keys = []
            for _ in range(size):
                key = int.from_bytes(data[pos:pos + width], "big")
                pos += width
                (lab,) = _LAB.unpack_from(data, pos)
                pos += _LAB.size
                keys.append(key)
                labelings[key] = lab
            members[j] = tuple(keys)
    except struct.error as exc:
        raise SchemaError(f"codebook cache truncated: {exc}") from None
    if pos != len(data):
        raise SchemaError("trailing bytes after codebook")
    return Codebook(n, expected, members, labelings)


def cache_path(cache_dir: str | os.PathLike, n: int) -> Path:
    return Path(cache_dir) / f"codebook-n{n}-v{FORMAT_VERSION}.tscb"


def get_codebook(n: int, cache_dir: str | os.PathLike | None, n_max_exact: int = 7) -> Codebook:
    """Load the cached codebook for n, rebuilding it when missing or stale."""
    if cache_dir is None:
        return build_codebook(n, n_max_exact)
    path = cache_path(cache_dir, n)
    if n <= n_max_exact and path.exists():
        try:
            return load_codebook_bytes(path.read_bytes())
        except SchemaError as exc:
            log.warning("rebuilding stale codebook cache %s: %s", path, exc)
    cb = build_codebook(n, n_max_exact)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    tmp.write_bytes(dump_codebook(cb))
    tmp.replace(path)
    return cb
