"""Codeword record formats.

Text: one codeword per line, ``(empty)`` for the empty string.
Binary: per record an unsigned LEB128 bit length, then the bits packed
MSB-first into ceil(len/8) bytes.
"""
from __future__ import annotations

from typing import Iterable

from .exceptions import ParseError

EMPTY = "(empty)"


def format_codeword(c: str) -> str:
    return c if c else EMPTY


def parse_codeword(text: str, line: int | None = None) -> str:
    t = text.strip()
    if t == EMPTY:
        return ""
    if not t or any(ch not in "01" for ch in t):
        raise ParseError(f"bad codeword record {text.strip()!r}", line=line)
    return t


def write_text_records(codewords: Iterable[str]) -> str:
    return "".join(format_codeword(c) + "\n" for c in codewords)


def read_text_records(text: str) -> list[str]:
    return [parse_codeword(raw, line=i) for i, raw in enumerate(text.splitlines(), start=1) if raw.strip()]


def _varint(value: int) -> bytes:
    out = bytearray()
    while True:
        byte = value & 0x7F
        value >>= 7
        if value:
            out.append(byte | 0x80)
        else:
            out.append(byte)
            return bytes(out)


def pack_records(codewords: Iterable[str]) -> bytes:
    out = bytearray()
    for c in codewords:
        out += _varint(len(c))
        if c:
            nbytes = (len(c) + 7) // 8
            out += (int(c, 2) << (8 * nbytes - len(c))).to_bytes(nbytes, "big")
    return bytes(out)


def unpack_records(data: bytes) -> list[str]:
    out = []
    pos = 0
    while pos < len(data):
        start = pos
        length = shift = 0
        while True:
            if pos >= len(data):
                raise ParseError("truncated varint", offset=start)
            b = data[pos]
            pos += 1
            length |= (b & 0x7F) << shift
            shift += 7
            if not b & 0x80:
                break
        nbytes = (length + 7) // 8
        if pos + nbytes > len(data):
            raise ParseError("truncated codeword payload", offset=pos)
        if length:
            value = int.from_bytes(data[pos:pos + nbytes], "big")
            pad = 8 * nbytes - length
            if value & ((1 << pad) - 1):
                raise ParseError("nonzero padding bits", offset=pos + nbytes - 1)
            out.append(format(value >> pad, f"0{length}b"))
        else:
            out.append("")
        pos += nbytes
    return out
