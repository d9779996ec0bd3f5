"""Edit-distance sketches via c-shingling into set difference.

A string is shingled into its set of length-c windows; set-difference
machinery (PinSketch) then absorbs insertions and deletions, each of
which moves the shingle set by at most 2c-1 elements.  The shingle set
alone does not determine the string, so the sketch also records which
sorted shingle sits at each position of the disjoint c-partition of w
(the last two partition blocks may overlap).
"""

import math
import random
from dataclasses import dataclass
from functools import lru_cache

from .codec import DecodeFailure
from .entropy import (
    ExtractedKey,
    UHashParams,
    compose_gen,
    compose_rep,
    parse_helper,
)
from .gf2m import GF2m, irreducible_modulus
from .setdiff import ElementSet, PinSketchData, pinsketch_rec, pinsketch_ss

__all__ = [
    "ShingleSet",
    "RecoveryInfo",
    "EditSketch",
    "shingle",
    "recovery_info",
    "unshingle",
    "edit_ss",
    "edit_rec",
    "edit_gen",
    "edit_rep",
    "optimal_shingle_len",
    "edit_entropy_loss",
    "approx_edit_entropy_loss",
]


@dataclass(frozen=True)
class ShingleSet:
    """All length-c windows of a string, as a set."""

    c: int
    shingles: frozenset

    def __post_init__(self):
        if self.c < 1:
            raise ValueError("shingle length must be >= 1")
        if not self.shingles:
            raise ValueError("shingle set cannot be empty")
        for s in self.shingles:
            if len(s) != self.c:
                raise ValueError("every shingle must have length exactly c")

    def __len__(self) -> int:
        return len(self.shingles)


@dataclass(frozen=True)
class RecoveryInfo:
    """Positions of the disjoint-partition shingles in the sorted shingle set.

    indices are 1-based; together with the shingle set they pin down the
    original string of length n.
    """

    n: int
    indices: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("string length must be >= 1")
        if not self.indices:
            raise ValueError("at least one index required")
        if any(i < 1 for i in self.indices):
            raise ValueError("indices are 1-based")


@dataclass(frozen=True)
class EditSketch:
    s1: PinSketchData
    s2: RecoveryInfo


def shingle(w, c: int) -> ShingleSet:
    """The set of all |w|-c+1 length-c windows of w (duplicates removed)."""
    if not 1 <= c <= len(w):
        raise ValueError("need 1 <= c <= |w|")
    return ShingleSet(c, frozenset(w[i : i + c] for i in range(len(w) - c + 1)))


def _partition(w, c: int) -> list:
    # ceil(n/c) blocks, disjoint except the last, which is the final c chars
    n = len(w)
    k = -(-n // c)
    blocks = [w[j * c : (j + 1) * c] for j in range(k - 1)]
    blocks.append(w[n - c :])
    return blocks


def recovery_info(w, c: int) -> RecoveryInfo:
    """1-based sorted-set indices of the disjoint-partition shingles of w."""
    ss = shingle(w, c)
    pos = {s: i + 1 for i, s in enumerate(sorted(ss.shingles))}
    return RecoveryInfo(len(w), tuple(pos[b] for b in _partition(w, c)))


def unshingle(ss: ShingleSet, g: RecoveryInfo):
    """Rebuild the string from its shingle set and recovery indices."""
    if ss.c > g.n:
        raise ValueError("shingle length exceeds string length")
    ordered = sorted(ss.shingles)
    k = -(-g.n // ss.c)
    if len(g.indices) != k:
        raise ValueError("index count does not match ceil(n/c)")
    if any(i > len(ordered) for i in g.indices):
        raise ValueError("index out of range for shingle set")
    parts = [ordered[i - 1] for i in g.indices]
    overlap = ss.c * k - g.n
    joiner = "" if isinstance(parts[0], str) else b""
    return joiner.join(parts[:-1]) + parts[-1][overlap:]


# ---------------------------------------------------------------------------
# Embedding shingles into a field universe


def _alphabet_bits(w) -> int:
    if isinstance(w, (bytes, bytearray)):
        return 8
    if isinstance(w, str):
        if set(w) <= {"0", "1"}:
            return 1
        raise ValueError("string input must be binary ('0'/'1')")
    raise ValueError("input must be a binary string or bytes")


@lru_cache(maxsize=None)
def _shingle_field(c: int, bits: int) -> GF2m:
    # universe F^c needs one more bit so every embedded shingle is nonzero
    m = c * bits + 1
    if m <= 32:
        return GF2m(m)
    return GF2m(m, irreducible_modulus(m))


def _embed_one(s, c: int, bits: int) -> int:
    value = int.from_bytes(s, "big") if bits == 8 else int(s, 2)
    return (1 << (c * bits)) + value


def _embedded_set(ss: ShingleSet, bits: int) -> ElementSet:
    field = _shingle_field(ss.c, bits)
    return ElementSet.of(field, [_embed_one(s, ss.c, bits) for s in ss.shingles])


def _unembed_one(e: int, c: int, bits: int):
    base = 1 << (c * bits)
    value = e - base
    if not 0 <= value < base:
        raise DecodeFailure("recovered element is not an embedded shingle")
    if bits == 8:
        return value.to_bytes(c, "big")
    return format(value, f"0{c}b")


# ---------------------------------------------------------------------------
# Secure sketch


def edit_ss(w, c: int, t_edit: int) -> EditSketch:
    """Sketch tolerating t_edit character insertions/deletions in w."""
    if t_edit < 1:
        raise ValueError("capacity must be >= 1")
    bits = _alphabet_bits(w)
    ss = shingle(w, c)
    t_set = (2 * c - 1) * t_edit
    field = _shingle_field(c, bits)
    if 2 * t_set + 1 > field.order:
        raise ValueError("capacity too large for the shingle universe")
    s1 = pinsketch_ss(_embedded_set(ss, bits), t_set)
    return EditSketch(s1, recovery_info(w, c))


def edit_rec(w_prime, sk: EditSketch):
    """Recover w from w' within edit distance t_edit of it."""
    bits = _alphabet_bits(w_prime)
    m = sk.s1.field.m
    if (m - 1) % bits:
        raise ValueError("sketch universe does not match the input alphabet")
    c = (m - 1) // bits
    got = pinsketch_rec(_embedded_set(shingle(w_prime, c), bits), sk.s1)
    try:
        shingles = ShingleSet(c, frozenset(_unembed_one(e, c, bits) for e in got.elems))
        w = unshingle(shingles, sk.s2)
    except DecodeFailure:
        raise
    except ValueError as exc:
        raise DecodeFailure(f"recovered shingle set is inconsistent: {exc}") from exc
    # re-sketch: the output must explain both sketch components exactly
    if pinsketch_ss(_embedded_set(shingle(w, c), bits), sk.s1.t) != sk.s1:
        raise DecodeFailure("recovered string fails sketch re-check")
    if recovery_info(w, c) != sk.s2:
        raise DecodeFailure("recovered string fails recovery-info re-check")
    return w


# ---------------------------------------------------------------------------
# Fuzzy extractor (hashes the shingle set, not the raw string)


def _encode_shingles(field: GF2m, elems: ElementSet) -> tuple[int, int]:
    value = 0
    for x in elems.elems:
        value = (value << field.m) | x
    return value, field.m * len(elems.elems)


class _PreparedSketcher:
    """Adapter handing compose_gen/compose_rep already-computed pieces."""

    def __init__(self, sketch_bytes: bytes = b"", recovered=None):
        self._sketch = sketch_bytes
        self._recovered = recovered

    def sketch(self, w, rng):
        return self._sketch

    def recover(self, w_prime, sketch):
        return self._recovered


def edit_gen(w, c: int, t_edit: int, l_bits: int, rng: random.Random) -> ExtractedKey:
    """Extract an l_bits key; the helper carries the full edit sketch."""
    from .envelope import serialize_edit

    bits = _alphabet_bits(w)
    sk = edit_ss(w, c, t_edit)
    field = _shingle_field(c, bits)

    def encode(s):
        return _encode_shingles(field, _embedded_set(shingle(s, c), bits))

    u = UHashParams(field.m * len(shingle(w, c)), l_bits)
    env = serialize_edit(sk, c, t_edit)
    return compose_gen(_PreparedSketcher(sketch_bytes=env), w, encode, u, rng)


def edit_rep(w_prime, p: bytes, l_bits: int) -> bytes:
    """Reproduce the key from w' and the helper string."""
    from .envelope import SCHEME_EDIT, MalformedEnvelope, deserialize

    bits = _alphabet_bits(w_prime)
    env_bytes, _ = parse_helper(p)
    env = deserialize(env_bytes)
    if env.scheme != SCHEME_EDIT:
        raise MalformedEnvelope("bad-scheme", "helper does not hold an edit sketch")
    sk, c = env.sketch, env.c
    field = _shingle_field(c, bits)
    w = edit_rec(w_prime, sk)

    def encode(s):
        return _encode_shingles(field, _embedded_set(shingle(s, c), bits))

    u = UHashParams(field.m * len(shingle(w, c)), l_bits)
    return compose_rep(_PreparedSketcher(recovered=w), w_prime, p, encode, u)


# ---------------------------------------------------------------------------
# Parameter selection


def _ceil_log2(x: int) -> int:
    return (x - 1).bit_length()


def edit_entropy_loss(n: int, c: int, t: int, F: int, eps: float | None = None) -> float:
    """ceil(n/c) log2(n-c+1) + (2c-1) t ceil(log2(F^c+1)), plus the
    extractor's 2 log2(1/eps) - 2 when eps is given."""
    if not 1 <= c < n or t < 1 or F < 2:
        raise ValueError("bad parameters")
    loss = -(-n // c) * math.log2(n - c + 1) + (2 * c - 1) * t * _ceil_log2(F**c + 1)
    if eps is not None:
        if not 0 < eps <= 1:
            raise ValueError("eps must be in (0, 1]")
        loss += 2 * math.log2(1 / eps) - 2
    return loss


def optimal_shingle_len(n: int, t: int, F: int) -> int:
    """Integer c in {2..n-1} minimizing the exact sketch entropy loss."""
    if n < 3 or t < 1 or F < 2:
        raise ValueError("bad parameters")
    return min(range(2, n), key=lambda c: (edit_entropy_loss(n, c, t, F), c))


def approx_edit_entropy_loss(n: int, t: int, F: int) -> float:
    """Closed-form minimum-loss estimate (coefficient cbrt(4) + 1/cbrt(2))."""
    if n < 2 or t < 1 or F < 2:
        raise ValueError("bad parameters")
    coeff = 4 ** (1 / 3) + 2 ** (-1 / 3)
    return coeff * (t * math.log2(F)) ** (1 / 3) * (n * math.log2(n)) ** (2 / 3)
