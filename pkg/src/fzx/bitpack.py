"""Fixed-width bit packing helpers.

Bit strings are kept left-aligned: the first field occupies the most
significant bits, and byte serialization pads with zero bits at the end.
"""

from __future__ import annotations


def pack_fields(values, width: int) -> tuple[int, int]:
    """Pack equal-width fields into one int; returns (value, total_bits)."""
    acc = 0
    n = 0
    top = 1 << width
    for v in values:
        if not 0 <= v < top:
            raise ValueError(f"field {v} does not fit in {width} bits")
        acc = (acc << width) | v
        n += width
    return acc, n


def unpack_fields(value: int, total_bits: int, width: int) -> list[int]:
    if width <= 0 or total_bits % width:
        raise ValueError("bit length not a multiple of field width")
    out = []
    for shift in range(total_bits - width, -1, -width):
        out.append((value >> shift) & ((1 << width) - 1))
    return out


def bits_to_bytes(value: int, n_bits: int) -> bytes:
    """Left-aligned: value's top bit lands in the top bit of the first byte."""
    if value >> n_bits:
        raise ValueError("value wider than stated bit length")
    n_bytes = (n_bits + 7) // 8
    return (value << (8 * n_bytes - n_bits)).to_bytes(n_bytes, "big")


def bytes_to_bits(data: bytes, n_bits: int) -> int:
    """Inverse of bits_to_bytes; rejects nonzero padding bits."""
    n_bytes = (n_bits + 7) // 8
    if len(data) != n_bytes:
        raise ValueError("wrong byte length for bit string")
    acc = int.from_bytes(data, "big")
    pad = 8 * n_bytes - n_bits
    if acc & ((1 << pad) - 1):
        raise ValueError("nonzero padding bits")
    return acc >> pad


def word_to_bytes(word: int, n_bits: int) -> bytes:
    """Serialize an n-bit word (bit i = position i) MSB-first per byte."""
    if word >> n_bits:
        raise ValueError("word wider than stated bit length")
    out = bytearray((n_bits + 7) // 8)
    for i in range(n_bits):
        if (word >> i) & 1:
            out[i // 8] |= 0x80 >> (i % 8)
    return bytes(out)


def word_from_bytes(data: bytes, n_bits: int) -> int:
    if len(data) != (n_bits + 7) // 8:
        raise ValueError("wrong byte length for word")
    word = 0
    for i in range(n_bits):
        if (data[i // 8] >> (7 - i % 8)) & 1:
            word |= 1 << i
    for i in range(n_bits, 8 * len(data)):
        if (data[i // 8] >> (7 - i % 8)) & 1:
            raise ValueError("nonzero padding bits")
    return word
