"""Two-bridge parameter arithmetic.

A two-bridge knot is encoded by a coprime pair (p, q).  Throughout the
package we keep p odd (one-component branch set) and normalize q to the
unique odd representative of its class mod p lying in (-p, p); the
double branched cover depends on q only mod p, and the coordinate
conventions of the grid construction need q odd.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import EvenP, InputError, NotCoprime, UnitP, ZeroDenominator


@dataclass(frozen=True, order=True)
class TwoBridgeParams:
    """Normalized parameters: p odd >= 3, q odd, -p < q < 0 or 0 < q < p."""

    p: int
    q: int

    def __post_init__(self):
        p, q = self.p, self.q
        if p % 2 == 0:
            raise EvenP(f"p = {p} is even (two-component link)")
        if p <= 1:
            raise UnitP(f"p = {p} gives a degenerate diagram")
        if q == 0 or q % 2 == 0 or not -p < q < p:
            raise InputError(f"q = {q} is not an odd representative in (-{p}, {p})")
        if math.gcd(p, abs(q)) != 1:
            raise NotCoprime(f"gcd({p}, {abs(q)}) != 1")


def normalize_params(p: int, q: int) -> TwoBridgeParams:
    """Reduce q mod p to the odd representative in (-p, p).

    Exactly one of (q mod p) and (q mod p) - p is odd because p is odd.
    """
    if p % 2 == 0:
        raise EvenP(f"p = {p} is even (two-component link)")
    if abs(p) <= 1:
        raise UnitP(f"p = {p} gives a degenerate diagram")
    if p < 0:
        raise InputError(f"p = {p} must be positive")
    qm = q % p
    if qm == 0 or math.gcd(p, qm) != 1:
        raise NotCoprime(f"gcd({p}, {q}) != 1")
    return TwoBridgeParams(p, qm if qm % 2 == 1 else qm - p)


def params_from_crossings(word: Sequence[int]) -> TwoBridgeParams:
    """Evaluate the continued fraction c1 - 1/(c2 - 1/(... - 1/cn)).

    The value p/q in lowest terms (taken with p > 0) names the branched
    double cover; the result is then normalized.
    """
    if not word:
        raise InputError("empty crossing word")
    if any(c == 0 for c in word):
        raise InputError("crossing numbers must be nonzero")
    val: Fraction | None = None
    for c in reversed(word):
        if val is None:
            val = Fraction(c)
        else:
            if val == 0:
                raise ZeroDenominator(f"continued fraction {tuple(word)} divides by zero")
            val = c - 1 / val
    assert val is not None
    p, q = val.numerator, val.denominator
    if p < 0:
        p, q = -p, -q
    if p == 0 or p % 2 == 0:
        raise EvenP(f"crossing word {tuple(word)} gives even p = {p}")
    if p == 1:
        raise UnitP(f"crossing word {tuple(word)} gives p = 1 (unknotted cover)")
    return normalize_params(p, q)


def are_equivalent(a: TwoBridgeParams, b: TwoBridgeParams) -> bool:
    """Same knot iff p = p' and q' is congruent to q or to q^-1 mod p."""
    if a.p != b.p:
        return False
    return (a.q - b.q) % a.p == 0 or (a.q * b.q - 1) % a.p == 0


def knot_classes(p_max: int, q_range: Iterable[int] | None = None) -> list[TwoBridgeParams]:
    """All inequivalent (p, q) with odd p <= p_max and odd q in (0, p)."""
    out: list[TwoBridgeParams] = []
    for p in range(3, p_max + 1, 2):
        qs = q_range if q_range is not None else range(1, p, 2)
        for q in qs:
            if math.gcd(p, q) != 1:
                continue
            cand = normalize_params(p, q)
            if not any(are_equivalent(cand, seen) for seen in out):
                out.append(cand)
    return out
