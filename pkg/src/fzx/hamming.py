"""Secure sketches for the Hamming metric over fixed-length bit words.

Words are plain ints; bit i of the word is position i.  Three sketch
variants are provided: the syndrome sketch (store syn(w)), the code-offset
sketch (store w XOR c for a random codeword c), and the permuted variant
(store a fresh random permutation pi together with syn(pi(w))), which maps
any fixed error pattern to a uniformly random pattern of the same weight.

The underlying code is pluggable: a BchCode, for which bit i corresponds
to the field element i+1 and all decoding is syndrome-based, or a
SmallLinearCode decoded by coset-leader enumeration.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache

from .codec import (
    BchCode,
    SmallLinearCode,
    bch_parity_rows,
    small_decode_brute,
    small_syndrome,
    support_from_syndrome,
)
from .gf2m import GF2m


@dataclass(frozen=True)
class HammingParams:
    """A word length n together with the linear code correcting its noise."""

    code: BchCode | SmallLinearCode
    n: int

    def __post_init__(self):
        if self.n != self.code.n:
            raise ValueError("word length does not match code length")

    @property
    def syndrome_bits(self) -> int:
        """Sketch payload width n - k in bits."""
        if isinstance(self.code, BchCode):
            return self.code.t * self.code.field.m
        return len(self.code.rows)

    @property
    def t(self) -> int:
        """Correction radius; 0 declares no guarantee for a generic code."""
        if isinstance(self.code, BchCode):
            return self.code.t
        return 0


@dataclass(frozen=True)
class SyndromeSketch:
    """Packed (n-k)-bit syndrome; for BCH the odd power sums s_1 first,
    each an m-bit big-endian field."""

    syn_bits: int
    n_bits: int

    def __post_init__(self):
        if self.n_bits < 0 or self.syn_bits < 0 or self.syn_bits >> self.n_bits:
            raise ValueError("syndrome wider than stated bit length")


@dataclass(frozen=True)
class CodeOffsetSketch:
    """The n-bit shift w XOR c from a random codeword c to the input."""

    shift: int
    n_bits: int

    def __post_init__(self):
        if self.n_bits < 0 or self.shift < 0 or self.shift >> self.n_bits:
            raise ValueError("shift wider than stated bit length")


@dataclass(frozen=True)
class PermutedSketch:
    """A permutation of the n positions plus the permuted word's syndrome."""

    perm: tuple[int, ...]
    syn: SyndromeSketch

    def __post_init__(self):
        if sorted(self.perm) != list(range(len(self.perm))):
            raise ValueError("perm is not a permutation of 0..n-1")


@lru_cache(maxsize=None)
def bch_params(m: int, t: int) -> HammingParams:
    """Hamming-sketch parameters over the length-(2^m - 1) BCH code with
    designed distance 2t + 1.  Cached so repeated lookups share the field
    and its tables."""
    code = BchCode(GF2m(m), 2 * t + 1)
    return HammingParams(code, code.n)


def _check_word(p: HammingParams, w: int) -> int:
    if not isinstance(w, int) or w < 0 or w >> p.n:
        raise ValueError(f"word does not fit in {p.n} bits")
    return w


@lru_cache(maxsize=None)
def _bch_byte_table(code: BchCode) -> list[list[int]]:
    """table[i][b]: packed syndrome of byte value b at word bits 8i..8i+7.

    Lets a dense word's syndrome fold in n/8 XORs instead of one field
    multiplication chain per set bit.
    """
    f = code.field
    m, t, n = f.m, code.t, code.n
    mul = f.mul
    per_bit = []
    for i in range(n):
        x = i + 1
        x2 = mul(x, x)
        y = x
        packed = 0
        for j in range(t):
            packed |= y << (m * (t - 1 - j))
            y = mul(y, x2)
        per_bit.append(packed)
    tables = []
    for base in range(0, n, 8):
        width = min(8, n - base)
        sub = [0] * 256
        for b in range(1, 1 << width):
            low = b & -b
            sub[b] = sub[b ^ low] ^ per_bit[base + low.bit_length() - 1]
        tables.append(sub)
    return tables


def _bch_word_syndrome(code: BchCode, w: int) -> int:
    table = _bch_byte_table(code)
    acc = 0
    for pos, byte in enumerate(w.to_bytes((code.n + 7) // 8, "little")):
        if byte:
            acc ^= table[pos][byte]
    return acc


def _packed_to_sums(code: BchCode, packed: int) -> list[int]:
    m, mask = code.field.m, code.field.order
    t = code.t
    return [(packed >> (m * (t - 1 - j))) & mask for j in range(t)]


def ss_syndrome(p: HammingParams, w: int) -> SyndromeSketch:
    """Sketch w as its syndrome under the code's parity map."""
    _check_word(p, w)
    if isinstance(p.code, BchCode):
        syn = _bch_word_syndrome(p.code, w)
    else:
        syn = small_syndrome(p.code, w)
    return SyndromeSketch(syn, p.syndrome_bits)


def rec_syndrome(p: HammingParams, w_prime: int, s: SyndromeSketch) -> int:
    """Recover the sketched word from w_prime: decode the syndrome of the
    difference to an error pattern e with weight(e) <= t and return
    w_prime XOR e.  Equals the original w whenever dis(w, w') <= t;
    raises DecodeFailure when no within-capacity pattern verifies."""
    _check_word(p, w_prime)
    if s.n_bits != p.syndrome_bits:
        raise ValueError("sketch length does not match code parameters")
    code = p.code
    if isinstance(code, BchCode):
        diff = _bch_word_syndrome(code, w_prime) ^ s.syn_bits
        support = support_from_syndrome(code, _packed_to_sums(code, diff))
        e = 0
        for x in support:
            e |= 1 << (x - 1)
    else:
        e = small_decode_brute(code, small_syndrome(code, w_prime) ^ s.syn_bits)
    return w_prime ^ e


@lru_cache(maxsize=None)
def _reduced_parity(code) -> tuple[tuple[int, int], ...]:
    """Parity rows in reduced row echelon form, as (pivot bit, mask) pairs.

    Precomputed once per code so uniform-codeword sampling is a handful of
    mask operations per draw rather than a fresh elimination.
    """
    rows = bch_parity_rows(code) if isinstance(code, BchCode) else list(code.rows)
    reduced: list[tuple[int, int]] = []
    for mask in rows:
        for pb, pm in reduced:
            if (mask >> pb) & 1:
                mask ^= pm
        if mask == 0:
            raise ValueError("parity rows not linearly independent")
        pb = (mask & -mask).bit_length() - 1
        reduced = [
            (opb, om ^ mask) if (om >> pb) & 1 else (opb, om)
            for opb, om in reduced
        ]
        reduced.append((pb, mask))
    return tuple(reduced)


def random_codeword(p: HammingParams, rng: random.Random) -> int:
    """Uniformly random codeword: free positions take fresh random bits,
    pivot positions are forced by back-substitution."""
    reduced = _reduced_parity(p.code)
    v = rng.getrandbits(p.n)
    for pb, _ in reduced:
        v &= ~(1 << pb)
    for pb, mask in reduced:
        if (v & mask).bit_count() & 1:
            v |= 1 << pb
    return v


def ss_code_offset(p: HammingParams, w: int, rng: random.Random) -> CodeOffsetSketch:
    """Sketch w as the shift w XOR c for a uniformly random codeword c."""
    _check_word(p, w)
    return CodeOffsetSketch(w ^ random_codeword(p, rng), p.n)


def rec_code_offset(p: HammingParams, w_prime: int, sk: CodeOffsetSketch) -> int:
    """Subtract the shift, decode to the nearest codeword, re-shift."""
    _check_word(p, w_prime)
    if sk.n_bits != p.n:
        raise ValueError("sketch length does not match code parameters")
    v = w_prime ^ sk.shift
    c = rec_syndrome(p, v, SyndromeSketch(0, p.syndrome_bits))
    return c ^ sk.shift


def permute_word(w: int, perm) -> int:
    """Apply a permutation: bit i of the result is bit perm[i] of w."""
    out = 0
    for i, src in enumerate(perm):
        if (w >> src) & 1:
            out |= 1 << i
    return out


def invert_permutation(perm) -> tuple[int, ...]:
    inv = [0] * len(perm)
    for i, src in enumerate(perm):
        inv[src] = i
    return tuple(inv)


def ss_permuted(p: HammingParams, w: int, rng: random.Random) -> PermutedSketch:
    """Draw a fresh uniform permutation pi (Fisher-Yates) and sketch the
    permuted word's syndrome; pi travels inside the sketch."""
    _check_word(p, w)
    perm = list(range(p.n))
    rng.shuffle(perm)
    perm = tuple(perm)
    return PermutedSketch(perm, ss_syndrome(p, permute_word(w, perm)))


def rec_permuted(p: HammingParams, w_prime: int, sk: PermutedSketch) -> int:
    """Permute w_prime by the sketch's pi, recover in the permuted domain,
    then undo the permutation."""
    _check_word(p, w_prime)
    if len(sk.perm) != p.n:
        raise ValueError("permutation length does not match word length")
    pw = rec_syndrome(p, permute_word(w_prime, sk.perm), sk.syn)
    return permute_word(pw, invert_permutation(sk.perm))


def hamming_entropy_loss(n: int, k: int) -> float:
    """Entropy loss of the linear-code constructions: n - k bits, the
    syndrome length.  For BCH, n - k = t*m."""
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    return float(n - k)
