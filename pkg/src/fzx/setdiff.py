"""Secure sketches for the set-difference metric over GF(2^m)*.

Three constructions: PinSketch stores the t odd power sums of the set and
tolerates sets of any size; the improved Juels-Sudan sketch stores the top
t coefficients of the set's characteristic polynomial and requires a fixed
set size; the original Juels-Sudan scheme hides a random low-degree
polynomial among chaff points and is kept as a reference (its entropy loss
grows with the chaff count).

Every deterministic recovery re-verifies its output by re-sketching;
a mismatch raises DecodeFailure instead of returning a wrong set.
"""

from __future__ import annotations

import math
import random
import warnings
from dataclasses import dataclass

from .codec import (
    BchCode,
    DecodeFailure,
    rs_decode,
    support_from_syndrome,
    syndrome_from_support,
)
from .gf2m import (
    GF2m,
    poly_add,
    poly_deg,
    poly_divmod,
    poly_eval,
    poly_mul,
    poly_roots,
)


@dataclass(frozen=True)
class ElementSet:
    """A set of nonzero GF(2^m) elements, stored sorted."""

    field: GF2m
    elems: tuple[int, ...]

    def __post_init__(self):
        prev = 0
        for x in self.elems:
            if not isinstance(x, int) or not 0 < x <= self.field.order:
                raise ValueError(f"element {x!r} outside GF(2^m)*")
            if x <= prev:
                raise ValueError("elements must be strictly increasing, no duplicates")
            prev = x

    @classmethod
    def of(cls, field: GF2m, elems) -> "ElementSet":
        elems = tuple(sorted(elems))
        if len(set(elems)) != len(elems):
            raise ValueError("duplicate elements")
        return cls(field, elems)

    def __len__(self) -> int:
        return len(self.elems)


@dataclass(frozen=True)
class PinSketchData:
    """The odd power sums s_1, s_3, ..., s_{2t-1} of a set."""

    field: GF2m
    t: int
    odd_sums: tuple[int, ...]

    def __post_init__(self):
        if self.t < 1:
            raise ValueError("capacity t must be >= 1")
        if len(self.odd_sums) != self.t:
            raise ValueError("expected t odd power sums")
        for s in self.odd_sums:
            self.field.check(s)

    @property
    def bit_length(self) -> int:
        return self.t * self.field.m


@dataclass(frozen=True)
class IjsSketchData:
    """Coefficients of the characteristic polynomial of a size-s set,
    degrees s-1 down to s-t."""

    field: GF2m
    s: int
    t: int
    top_coeffs: tuple[int, ...]

    def __post_init__(self):
        if not 0 <= self.t <= self.s:
            raise ValueError("need 0 <= t <= s")
        if len(self.top_coeffs) != self.t:
            raise ValueError("expected t coefficients")
        for c in self.top_coeffs:
            self.field.check(c)

    @property
    def bit_length(self) -> int:
        return self.t * self.field.m


@dataclass(frozen=True)
class OrigJsSketchData:
    """r point pairs, s of them on a hidden low-degree polynomial."""

    field: GF2m
    s: int
    r: int
    t: int
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if not 0 <= self.t <= self.s:
            raise ValueError("need 0 <= t <= s")
        if not self.s < self.r <= self.field.order:
            raise ValueError("need s < r <= universe size")
        if len(self.pairs) != self.r:
            raise ValueError("expected r pairs")
        prev_x = 0
        for x, y in self.pairs:
            if not 0 < x <= self.field.order:
                raise ValueError(f"pair abscissa {x} outside GF(2^m)*")
            if x <= prev_x:
                raise ValueError("pairs must be sorted by x, distinct")
            self.field.check(y)
            prev_x = x


def _bch_for(field: GF2m, t: int) -> BchCode:
    return BchCode(field, 2 * t + 1)


def pinsketch_ss(w: ElementSet, t: int) -> PinSketchData:
    """Sketch a set as the t odd power sums of its elements; t*m bits."""
    code = _bch_for(w.field, t)
    return PinSketchData(w.field, t, tuple(syndrome_from_support(code, w.elems)))


def pinsketch_rec(w_prime: ElementSet, sk: PinSketchData) -> ElementSet:
    """Recover the sketched set from any w' with |w (triangle) w'| <= t:
    decode the componentwise syndrome difference to the symmetric
    difference v, return w' (triangle) v.  Set sizes may differ."""
    if w_prime.field != sk.field:
        raise ValueError("field mismatch between set and sketch")
    code = _bch_for(sk.field, sk.t)
    own = syndrome_from_support(code, w_prime.elems)
    diff = [a ^ b for a, b in zip(own, sk.odd_sums)]
    v = support_from_syndrome(code, diff)
    result = ElementSet(sk.field, tuple(sorted(set(w_prime.elems) ^ v)))
    if pinsketch_ss(result, sk.t) != sk:
        raise DecodeFailure("recovered set fails sketch re-check")
    return result


def char_poly(field: GF2m, elems) -> list[int]:
    """Monic polynomial with the given distinct elements as roots."""
    p = [1]
    for x in elems:
        p = poly_mul(field, p, [x, 1])
    return p


def ijs_ss(w: ElementSet, t: int) -> IjsSketchData:
    """Sketch a size-s set as the coefficients of degree s-1 .. s-t of its
    characteristic polynomial.  Deterministic.  t must be even (distances
    between same-size sets are even); odd t is rounded down."""
    s = len(w)
    if not 0 <= t <= s:
        raise ValueError("need 0 <= t <= |w|")
    if t % 2:
        warnings.warn("improved JS capacity must be even; rounding t down")
        t -= 1
    p = char_poly(w.field, w.elems)
    coeffs = tuple(p[s - j] for j in range(1, t + 1))
    return IjsSketchData(w.field, s, t, coeffs)


def _p_high(sk: IjsSketchData) -> list[int]:
    p = [0] * (sk.s + 1)
    p[sk.s] = 1
    for j, a in enumerate(sk.top_coeffs):
        p[sk.s - 1 - j] = a
    return p


def ijs_rec(w_prime: ElementSet, sk: IjsSketchData) -> ElementSet:
    """Recover the sketched set from a same-size w' within distance t.

    The sketch fixes p_high, the top of the characteristic polynomial;
    the unknown bottom p_low (degree <= s-t-1) agrees with p_high on every
    element of w, so it is Reed-Solomon decodable from w' with at most t/2
    wrong points.  The set is the root set of p_high - p_low; elements of
    w' already known to agree are divided out before root finding."""
    field = sk.field
    if w_prime.field != field:
        raise ValueError("field mismatch between set and sketch")
    s, t = sk.s, sk.t
    if len(w_prime) != s:
        raise ValueError(f"improved JS needs |w'| = {s}")
    p_high = _p_high(sk)
    points = [(x, poly_eval(field, p_high, x)) for x in w_prime.elems]
    if t == s:
        p_low: list[int] = []
    else:
        p_low = rs_decode(field, points, s - t - 1, t // 2)

    agreeing = [x for x, y in points if poly_eval(field, p_low, x) == y]
    quotient = poly_add(p_high, p_low)
    for x in agreeing:
        quotient, rem = poly_divmod(field, quotient, [x, 1])
        if rem:
            raise DecodeFailure("agreeing point is not a root")
    if poly_deg(quotient) > 0:
        extra = poly_roots(field, quotient)
        if extra is None:
            raise DecodeFailure("characteristic polynomial does not split")
    else:
        extra = set()
    result = set(agreeing) | extra
    if len(result) != s or 0 in result or not all(
        x <= field.order for x in result
    ):
        raise DecodeFailure("root set is not a valid size-s set")
    out = ElementSet(field, tuple(sorted(result)))
    if ijs_ss(out, t) != sk:
        raise DecodeFailure("recovered set fails sketch re-check")
    return out


def origjs_ss(
    w: ElementSet, r: int, t: int, rng: random.Random
) -> OrigJsSketchData:
    """Hide a random polynomial p of degree <= s-t-1 in r pairs: one pair
    (x, p(x)) per element of w, plus r-s chaff pairs off the polynomial."""
    field = w.field
    s = len(w)
    if not 0 <= t <= s:
        raise ValueError("need 0 <= t <= |w|")
    if not s < r <= field.order:
        raise ValueError("need |w| < r <= universe size")
    k = s - t - 1
    p = [rng.randrange(0, field.order + 1) for _ in range(k + 1)]
    pairs = [(x, poly_eval(field, p, x)) for x in w.elems]

    taken = set(w.elems)
    missing = r - s
    if 3 * missing < field.order - s:
        # sparse chaff: rejection sampling beats materializing the universe
        while missing:
            x = rng.randrange(1, field.order + 1)
            if x not in taken:
                taken.add(x)
                pairs.append((x, _off_poly(field, p, x, rng)))
                missing -= 1
    else:
        pool = [x for x in range(1, field.order + 1) if x not in taken]
        for x in rng.sample(pool, missing):
            pairs.append((x, _off_poly(field, p, x, rng)))
    pairs.sort()
    return OrigJsSketchData(field, s, r, t, tuple(pairs))


def _off_poly(field: GF2m, p: list[int], x: int, rng: random.Random) -> int:
    """Uniform y != p(x), by rejection."""
    px = poly_eval(field, p, x)
    while True:
        y = rng.randrange(0, field.order + 1)
        if y != px:
            return y


def origjs_rec(w_prime: ElementSet, sk: OrigJsSketchData) -> ElementSet:
    """Select the sketch pairs indexed by w', Reed-Solomon decode the
    hidden polynomial, output the abscissas of all pairs lying on it."""
    field = sk.field
    if w_prime.field != field:
        raise ValueError("field mismatch between set and sketch")
    s, t = sk.s, sk.t
    if len(w_prime) != s:
        raise ValueError(f"original JS needs |w'| = {s}")
    members = set(w_prime.elems)
    sel = [(x, y) for x, y in sk.pairs if x in members]
    n_sel = len(sel)
    if n_sel < s - t:
        raise DecodeFailure("too few sketch pairs indexed by w'")
    if t == s:
        p: list[int] = []
    else:
        p = rs_decode(field, sel, s - t - 1, (n_sel - s + t) // 2)
    result = tuple(x for x, y in sk.pairs if poly_eval(field, p, x) == y)
    if len(result) != s:
        raise DecodeFailure("polynomial does not select a size-s set")
    return ElementSet(field, result)


def setdiff_entropy_loss(
    scheme: str,
    *,
    m: int,
    t: int,
    s: int | None = None,
    r: int | None = None,
) -> float:
    """Closed-form entropy loss in bits.

    pinsketch: t * log2(n + 1) over universe size n = 2^m - 1.
    ijs:       t * log2(n) with n = 2^m.
    origjs:    t * log2(n) + log2 C(n, r) - log2 C(n - s, r - s) + 2,
               n = 2^m.
    """
    if m < 1 or t < 0:
        raise ValueError("bad parameters")
    if scheme == "pinsketch":
        n = (1 << m) - 1
        return t * math.log2(n + 1)
    if scheme == "ijs":
        return t * math.log2(1 << m)
    if scheme == "origjs":
        if s is None or r is None:
            raise ValueError("original JS loss needs s and r")
        n = 1 << m
        if not 0 <= s < r <= n:
            raise ValueError("bad parameters")
        return (
            t * math.log2(n)
            + math.log2(math.comb(n, r))
            - math.log2(math.comb(n - s, r - s))
            + 2
        )
    raise ValueError(f"unknown scheme {scheme!r}")
