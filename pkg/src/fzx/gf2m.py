"""Arithmetic in GF(2^m) and polynomial rings over it.

Field elements are plain Python ints in [0, 2^m): the integer's binary
expansion gives the coefficients of the residue polynomial, bit i holding
the coefficient of x^i.  A GF2m instance carries the extension degree and
the reduction modulus; it does not wrap elements in objects.

Polynomials over the field are lists of ints, lowest-degree coefficient
first, with no trailing zero coefficients (the zero polynomial is []).
"""

from __future__ import annotations

import random

# Lexicographically smallest primitive polynomial of each degree, found by
# exhaustive search and certified by factoring 2^m - 1.  Encoded as ints,
# bit i = coefficient of x^i.
PRIMITIVE_POLYS = {
    1: 0x3,
    2: 0x7,
    3: 0xB,
    4: 0x13,
    5: 0x25,
    6: 0x43,
    7: 0x83,
    8: 0x11D,
    9: 0x211,
    10: 0x409,
    11: 0x805,
    12: 0x1053,
    13: 0x201B,
    14: 0x402B,
    15: 0x8003,
    16: 0x1002D,
    17: 0x20009,
    18: 0x40027,
    19: 0x80027,
    20: 0x100009,
    21: 0x200005,
    22: 0x400003,
    23: 0x800021,
    24: 0x100001B,
    25: 0x2000009,
    26: 0x4000047,
    27: 0x8000027,
    28: 0x10000009,
    29: 0x20000005,
    30: 0x40000053,
    31: 0x80000009,
    32: 0x1000000AF,
}

# Degree above which log/antilog tables are not built.  Keeps table
# construction cheap and keeps timing at m >= 14 reflective of the bitwise
# multiply, so measured decoder scaling is not a table artifact.
_TABLE_MAX_M = 13

# Largest degree accepted for caller-supplied moduli.  Big enough for the
# universal-hash fields over production key lengths.
_MAX_CUSTOM_M = 512


def _gf2_poly_deg(p: int) -> int:
    return p.bit_length() - 1


def _gf2_mulmod(a: int, b: int, mod: int, m: int) -> int:
    """Carry-less multiply of a and b reduced mod `mod`, all GF(2) polys."""
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if (a >> m) & 1:
            a ^= mod
    return r


def _gf2_powmod_x(e: int, mod: int, m: int) -> int:
    """x^e mod `mod` over GF(2)."""
    r, base = 1, 2
    while e:
        if e & 1:
            r = _gf2_mulmod(r, base, mod, m)
        base = _gf2_mulmod(base, base, mod, m)
        e >>= 1
    return r


def _factor(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _x_order_is_full(mod: int, m: int) -> bool:
    """True iff x has multiplicative order exactly 2^m - 1 mod `mod`.

    A degree-m modulus with that property is primitive (full order rules
    out any nontrivial factorization, since the order mod a product is the
    lcm of the factor orders and (2^a - 1)(2^b - 1) < 2^(a+b) - 1).
    """
    n = (1 << m) - 1
    if _gf2_powmod_x(n, mod, m) != 1:
        return False
    for p in _factor(n):
        if _gf2_powmod_x(n // p, mod, m) == 1:
            return False
    return True


def _gf2_gcd(a: int, b: int) -> int:
    while b:
        while a.bit_length() >= b.bit_length() and a:
            a ^= b << (a.bit_length() - b.bit_length())
        a, b = b, a
    return a


def _is_irreducible(mod: int, m: int) -> bool:
    """Rabin's test: x^(2^m) == x mod f, and x^(2^(m/p)) - x coprime to f."""
    if _gf2_powmod_x(1 << m, mod, m) != 2:
        return False
    for p in _factor(m):
        h = _gf2_powmod_x(1 << (m // p), mod, m) ^ 2
        if _gf2_gcd(h, mod) != 1:
            return False
    return True


_IRREDUCIBLE_CACHE: dict[int, int] = {}


def irreducible_modulus(m: int) -> int:
    """Smallest irreducible degree-m polynomial over GF(2), as an int.

    Used for universal-hash fields whose degree falls outside the pinned
    primitive table.  Deterministic, so hash outputs replay exactly.
    """
    if m in PRIMITIVE_POLYS:
        return PRIMITIVE_POLYS[m]
    if not 1 <= m <= _MAX_CUSTOM_M:
        raise ValueError(f"degree {m} out of range")
    got = _IRREDUCIBLE_CACHE.get(m)
    if got is not None:
        return got
    for k in range(1, 1 << m, 2):
        cand = (1 << m) | k
        # cheap screen: reject candidates with a factor of degree <= 4
        ok = True
        for d in range(1, 5):
            h = _gf2_powmod_x(1 << d, cand, m) ^ 2
            if _gf2_gcd(h, cand) != 1:
                ok = False
                break
        if ok and _is_irreducible(cand, m):
            _IRREDUCIBLE_CACHE[m] = cand
            return cand
    raise ValueError(f"no irreducible polynomial of degree {m} found")


class GF2m:
    """A binary extension field GF(2^m) with a fixed reduction modulus.

    With no modulus argument the pinned primitive polynomial for the degree
    is used (1 <= m <= 32).  A caller-supplied modulus is accepted up to
    degree 512: it is certified primitive by exhaustive order check for
    m <= 16, and certified irreducible by Rabin's test above that.
    """

    __slots__ = ("m", "modulus", "order", "_log", "_exp", "_red4")

    def __init__(self, m: int, modulus: int | None = None):
        if modulus is None:
            if m not in PRIMITIVE_POLYS:
                raise ValueError(f"no pinned primitive polynomial for m={m}")
            modulus = PRIMITIVE_POLYS[m]
        else:
            if not 1 <= m <= _MAX_CUSTOM_M:
                raise ValueError(f"m={m} out of range for custom modulus")
            if _gf2_poly_deg(modulus) != m:
                raise ValueError("modulus degree does not match m")
            if m <= 16:
                if not _x_order_is_full(modulus, m):
                    raise ValueError(f"modulus 0x{modulus:x} not primitive")
            elif not _is_irreducible(modulus, m):
                raise ValueError(f"modulus 0x{modulus:x} not irreducible")
        self.m = m
        self.modulus = modulus
        self.order = (1 << m) - 1
        self._log = None
        self._exp = None
        # reduction table for the windowed multiply: (h << m) mod f
        red = []
        for h in range(16):
            v = h << m
            for bit in range(v.bit_length() - 1, m - 1, -1):
                if (v >> bit) & 1:
                    v ^= modulus << (bit - m)
            red.append(v)
        self._red4 = tuple(red)
        if m <= _TABLE_MAX_M:
            self._build_tables()

    def __repr__(self):
        return f"GF2m({self.m}, 0x{self.modulus:x})"

    def __eq__(self, other):
        return (
            isinstance(other, GF2m)
            and self.m == other.m
            and self.modulus == other.modulus
        )

    def __hash__(self):
        return hash((self.m, self.modulus))

    def _build_tables(self):
        order = self.order
        exp = [1] * (2 * order)
        log = [0] * (order + 1)
        m, mod = self.m, self.modulus
        v = 1
        for i in range(order):
            exp[i] = v
            exp[i + order] = v
            log[v] = i
            v <<= 1
            if v >> m:
                v ^= mod
        if v != 1:
            raise ValueError(f"modulus 0x{self.modulus:x} not primitive")
        self._exp = exp
        self._log = log

    def _mul_raw(self, a: int, b: int) -> int:
        """Carry-less multiply mod f, folding b four bits at a time."""
        m, mod = self.m, self.modulus
        if m < 4:
            r = 0
            while b:
                if b & 1:
                    r ^= a
                b >>= 1
                a <<= 1
                if a >> m:
                    a ^= mod
            return r
        if a == 0 or b == 0:
            return 0
        t2 = a << 1
        if t2 >> m:
            t2 ^= mod
        t4 = t2 << 1
        if t4 >> m:
            t4 ^= mod
        t8 = t4 << 1
        if t8 >> m:
            t8 ^= mod
        t3 = a ^ t2
        t12 = t4 ^ t8
        amul = (
            0, a, t2, t3, t4, a ^ t4, t2 ^ t4, t3 ^ t4,
            t8, a ^ t8, t2 ^ t8, t3 ^ t8, t12, a ^ t12, t2 ^ t12, t3 ^ t12,
        )
        mask, red = self.order, self._red4
        hi = m - 4
        r = 0
        for shift in range(((b.bit_length() + 3) & ~3) - 4, -1, -4):
            r = ((r << 4) & mask) ^ red[r >> hi] ^ amul[(b >> shift) & 15]
        return r

    def check(self, a: int) -> int:
        if not isinstance(a, int) or not 0 <= a <= self.order:
            raise ValueError(f"not a field element: {a!r}")
        return a

    def mul(self, a: int, b: int) -> int:
        if self._log is not None:
            if a == 0 or b == 0:
                return 0
            return self._exp[self._log[a] + self._log[b]]
        return self._mul_raw(a, b)

    def sqr(self, a: int) -> int:
        return self.mul(a, a)

    def inv(self, a: int) -> int:
        """Multiplicative inverse; ValueError on zero."""
        if a == 0:
            raise ValueError("zero has no inverse")
        if a == 1:
            return 1
        if self._log is not None:
            return self._exp[self.order - self._log[a]]
        # extended Euclid over GF(2)[x]: maintain g1*a == u, g2*a == v
        # (mod modulus); ends with u == 1 since the modulus is irreducible
        u, v = a, self.modulus
        g1, g2 = 1, 0
        while u != 1:
            j = u.bit_length() - v.bit_length()
            if j < 0:
                u, v = v, u
                g1, g2 = g2, g1
                j = -j
            u ^= v << j
            g1 ^= g2 << j
        return g1

    def pow(self, a: int, e: int) -> int:
        """a^e with e >= 0; pins 0^0 = 1."""
        if e < 0:
            raise ValueError("negative exponent")
        if a == 0:
            return 1 if e == 0 else 0
        if self._log is not None:
            return self._exp[self._log[a] * e % self.order]
        r, base = 1, a
        while e:
            if e & 1:
                r = self.mul(r, base)
            base = self.mul(base, base)
            e >>= 1
        return r


# ---------------------------------------------------------------------------
# polynomials over GF(2^m): list[int], lowest degree first, normalized


def poly_norm(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def poly_deg(f: list[int]) -> int:
    """Degree, with deg(0) = -1."""
    return len(f) - 1


def poly_add(f: list[int], g: list[int]) -> list[int]:
    if len(f) < len(g):
        f, g = g, f
    out = list(f)
    for i, c in enumerate(g):
        out[i] ^= c
    return poly_norm(out)


def poly_mul(field: GF2m, f: list[int], g: list[int]) -> list[int]:
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    mul = field.mul
    for i, a in enumerate(f):
        if a == 0:
            continue
        for j, b in enumerate(g):
            if b:
                out[i + j] ^= mul(a, b)
    return poly_norm(out)


def poly_scale(field: GF2m, f: list[int], c: int) -> list[int]:
    if c == 0:
        return []
    mul = field.mul
    return poly_norm([mul(a, c) for a in f])


def poly_eval(field: GF2m, f: list[int], x: int) -> int:
    """Horner evaluation.  Empty f evaluates to 0."""
    acc = 0
    mul = field.mul
    for c in reversed(f):
        acc = mul(acc, x) ^ c
    return acc


def poly_divmod(
    field: GF2m, f: list[int], g: list[int]
) -> tuple[list[int], list[int]]:
    """Euclidean division: f = q*g + r with deg(r) < deg(g)."""
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(f)
    dg = poly_deg(g)
    if poly_deg(r) < dg:
        return [], poly_norm(r)
    q = [0] * (poly_deg(r) - dg + 1)
    inv_lead = 1 if g[-1] == 1 else field.inv(g[-1])
    mul = field.mul
    while len(r) - 1 >= dg and r:
        shift = len(r) - 1 - dg
        coef = r[-1] if inv_lead == 1 else mul(r[-1], inv_lead)
        q[shift] = coef
        for i, b in enumerate(g):
            if b:
                r[i + shift] ^= mul(coef, b)
        poly_norm(r)
    return poly_norm(q), r


def poly_monic(field: GF2m, f: list[int]) -> list[int]:
    if not f:
        raise ValueError("zero polynomial has no monic form")
    if f[-1] == 1:
        return list(f)
    return poly_scale(field, f, field.inv(f[-1]))


def poly_gcd(field: GF2m, f: list[int], g: list[int]) -> list[int]:
    while g:
        _, r = poly_divmod(field, f, g)
        f, g = g, r
    return f


def _poly_mulmod(field: GF2m, f, g, mod):
    _, r = poly_divmod(field, poly_mul(field, f, g), mod)
    return r


def _poly_sqrmod(field: GF2m, f, mod):
    """f^2 mod `mod`; in char 2, (sum a_i z^i)^2 = sum a_i^2 z^(2i)."""
    if not f:
        return []
    out = [0] * (2 * len(f) - 1)
    sqr = field.sqr
    for i, a in enumerate(f):
        if a:
            out[2 * i] = sqr(a)
    _, r = poly_divmod(field, poly_norm(out), mod)
    return r


def poly_roots(
    field: GF2m, f: list[int], rng: random.Random | None = None
) -> set[int] | None:
    """Distinct roots of f in the field, or None if f is not squarefree
    and fully split (i.e. not a product of deg(f) distinct linear factors).

    Splitting uses the char-2 trace map Tr(cz) = cz + (cz)^2 + ... +
    (cz)^(2^(m-1)) with fresh random c per attempt.  Since (cz)^(2^i) =
    c^(2^i) * (z^(2^i) mod f) mod f, the Frobenius powers of z are composed
    once up front and each attempt costs only scalar combinations.  An
    attempt budget of 64 per split guards against a broken RNG.
    """
    if not f:
        raise ValueError("zero polynomial")
    if rng is None:
        rng = random.Random()
    f = poly_monic(field, f)
    if poly_deg(f) == 0:
        return set()
    if poly_deg(f) == 1:
        # monic z + a has root a
        return {f[0]}

    # z^(2^i) mod f for i = 0..m; f splits into distinct linear factors
    # iff the top of the chain is z again
    frob = [[0, 1]]
    for _ in range(field.m):
        frob.append(_poly_sqrmod(field, frob[-1], f))
    if poly_add(frob[field.m], [0, 1]):
        return None
    frob.pop()

    mul, sqr = field.mul, field.sqr
    roots: set[int] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        d = poly_deg(g)
        if d == 0:
            continue
        if d == 1:
            roots.add(g[0])
            continue
        for attempt in range(64):
            c = rng.randrange(1, field.order + 1)
            acc = [0] * len(f)
            cp = c
            for q in frob:
                for j, a in enumerate(q):
                    if a:
                        acc[j] ^= mul(cp, a)
                cp = sqr(cp)
            _, tr = poly_divmod(field, poly_norm(acc), g)
            h = poly_gcd(field, g, tr)
            dh = poly_deg(h)
            if 0 < dh < d:
                h = poly_monic(field, h)
                q2, _ = poly_divmod(field, g, h)
                stack.append(h)
                stack.append(q2)
                break
        else:
            raise RuntimeError("root splitting exceeded attempt budget")
    return roots


def brute_roots(field: GF2m, f: list[int]) -> set[int]:
    """Oracle root finder: evaluate f everywhere.  Guarded to m <= 16."""
    if field.m > 16:
        raise ValueError("brute_roots limited to m <= 16")
    if not f:
        raise ValueError("zero polynomial")
    return {x for x in range(1 << field.m) if poly_eval(field, f, x) == 0}


def element_to_bytes(field: GF2m, a: int) -> bytes:
    """Big-endian, ceil(m/8) bytes."""
    return field.check(a).to_bytes((field.m + 7) // 8, "big")


def element_from_bytes(field: GF2m, data: bytes) -> int:
    if len(data) != (field.m + 7) // 8:
        raise ValueError("wrong element byte length")
    a = int.from_bytes(data, "big")
    return field.check(a)
