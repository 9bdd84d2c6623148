"""p-adic valuations, Newton polygons and mod-p cycle types.

The Newton polygon of sum(a_i x^i) at p is the lower convex hull of the
points (i, v_p(a_i)).  Sign convention, used everywhere in this package:
a segment of slope s carries roots of valuation -s, with multiplicity equal
to the segment's horizontal length.  A segment of slope m/n in lowest terms
and horizontal length exactly n, with every other slope's denominator
coprime to n, certifies an n-cycle in the Galois group of the polynomial.

Cycle types of Frobenius elements come from distinct-degree factorization
of the reduction mod p; primes where the reduction degenerates (leading
coefficient or squarefreeness lost) are reported as bad rather than raised.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .polyarith import Poly
from .primes import is_prime, valuation_int

INFINITY = math.inf


def valuation(r: Union[Fraction, int], p: int) -> Union[int, float]:
    """v_p(r); +infinity for r = 0."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    r = Fraction(r)
    if r == 0:
        return INFINITY
    return valuation_int(r.numerator, p) - valuation_int(r.denominator, p)


@dataclass(frozen=True)
class NewtonPolygon:
    """Lower convex hull of (i, v_p(a_i)) over the finite-valuation points."""

    prime: int
    points: tuple[tuple[int, Fraction], ...]
    segments: tuple[tuple[Fraction, int], ...]  # (slope, horizontal length)
    degree: int

    @property
    def spans_constant_term(self) -> bool:
        return bool(self.points) and self.points[0][0] == 0

    def root_valuations(self) -> tuple[tuple[Fraction, int], ...]:
        """(valuation, multiplicity) pairs; valuation = -slope."""
        return tuple((-s, l) for s, l in self.segments)


@dataclass(frozen=True)
class CycleType:
    """Multiset of cycle lengths, stored descending; parts sum to the degree."""

    parts: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(sorted(self.parts, reverse=True)))
        if any(p < 1 for p in self.parts):
            raise ValueError("cycle type parts must be positive")

    @property
    def degree(self) -> int:
        return sum(self.parts)

    def __str__(self) -> str:
        return "[" + ",".join(map(str, self.parts)) + "]"


def n_cycle_type(n: int, degree: int) -> CycleType:
    """Cycle type of a single n-cycle inside S_degree."""
    if not 1 <= n <= degree:
        raise ValueError("cycle length out of range")
    return CycleType((n,) + (1,) * (degree - n))


def newton_polygon(f: Poly, p: int) -> NewtonPolygon:
    """Newton polygon of f at p; coefficients of valuation +infinity are skipped."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if not f:
        raise ValueError("Newton polygon of the zero polynomial")
    pts = [
        (i, Fraction(valuation(c, p)))
        for i, c in enumerate(f.coeffs)
        if c
    ]
    hull: list[tuple[int, Fraction]] = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop the middle vertex unless slopes strictly increase through it
            if (y2 - y1) * (pt[0] - x2) >= (pt[1] - y2) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    segments = tuple(
        ((y2 - y1) / Fraction(x2 - x1), x2 - x1)
        for (x1, y1), (x2, y2) in zip(hull, hull[1:])
    )
    return NewtonPolygon(prime=p, points=tuple(pts), segments=segments, degree=f.degree)


def cycle_certificate(polygon: NewtonPolygon) -> list[CycleType]:
    """Cycle facts the polygon certifies for the Galois group.

    A segment of slope m/n (lowest terms, n >= 2) whose horizontal length is
    exactly n, with every other slope's denominator coprime to n, yields an
    n-cycle.  When two segments share a slope denominator neither fires.
    Integer slopes certify nothing.  Empty when the constant term vanishes
    (the hull then misses part of the polynomial).
    """
    if not polygon.spans_constant_term:
        return []
    d = polygon.degree
    out: list[CycleType] = []
    for idx, (slope, length) in enumerate(polygon.segments):
        n = slope.denominator
        if n < 2 or length != n:
            continue
        others = [s for j, (s, _) in enumerate(polygon.segments) if j != idx]
        if all(math.gcd(s.denominator, n) == 1 for s in others):
            out.append(n_cycle_type(n, d))
    return out


# ---------------------------------------------------------------------------
# Dense F_p[x] helpers (coefficients are ints reduced mod p, constant first).
# ---------------------------------------------------------------------------


def _ptrim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pdeg(a: list[int]) -> int:
    return len(a) - 1


def _pmul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                out[i + j] = (out[i + j] + ca * cb) % p
    return _ptrim(out)


def _psub(a: list[int], b: list[int], p: int) -> list[int]:
    out = [0] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] - c) % p
    return _ptrim(out)


def _prem(a: list[int], b: list[int], p: int) -> list[int]:
    a = list(a)
    db = _pdeg(b)
    inv = pow(b[-1], -1, p)
    while a and _pdeg(a) >= db:
        c = a[-1] * inv % p
        k = _pdeg(a) - db
        for j, cb in enumerate(b):
            a[j + k] = (a[j + k] - c * cb) % p
        _ptrim(a)
    return a


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = list(a), list(b)
    while b:
        a, b = b, _prem(a, b, p)
    if a:
        inv = pow(a[-1], -1, p)
        a = [c * inv % p for c in a]
    return a


def _ppowmod(base: list[int], e: int, mod: list[int], p: int) -> list[int]:
    result = [1]
    base = _prem(list(base), mod, p)
    while e:
        if e & 1:
            result = _prem(_pmul(result, base, p), mod, p)
        base = _prem(_pmul(base, base, p), mod, p)
        e >>= 1
    return result


def _pdiv_exact(a: list[int], b: list[int], p: int) -> list[int]:
    a = list(a)
    db = _pdeg(b)
    inv = pow(b[-1], -1, p)
    out = [0] * (_pdeg(a) - db + 1)
    while a and _pdeg(a) >= db:
        c = a[-1] * inv % p
        k = _pdeg(a) - db
        out[k] = c
        for j, cb in enumerate(b):
            a[j + k] = (a[j + k] - c * cb) % p
        _ptrim(a)
    if a:
        raise ArithmeticError("inexact division mod p")
    return _ptrim(out)


def reduce_poly_mod(f: Poly, p: int) -> list[int]:
    """Coefficients of f mod p; raises if a denominator is divisible by p."""
    out = []
    for c in f.coeffs:
        if c.denominator % p == 0:
            raise ValueError(f"coefficient denominator divisible by {p}")
        out.append(c.numerator * pow(c.denominator, -1, p) % p)
    return _ptrim(out)


def distinct_degree_pattern(fbar: list[int], p: int) -> list[int]:
    """Degrees (with multiplicity) of the irreducible factors of a monic
    squarefree polynomial mod p, by distinct-degree factorization."""
    g = list(fbar)
    out: list[int] = []
    h = [0, 1]  # x
    k = 0
    while _pdeg(g) > 0:
        k += 1
        if 2 * k > _pdeg(g):
            out.append(_pdeg(g))
            break
        h = _ppowmod(h, p, g, p)
        gk = _pgcd(_psub(h, [0, 1], p), g, p)
        if _pdeg(gk) > 0:
            out.extend([k] * (_pdeg(gk) // k))
            g = _pdiv_exact(g, gk, p)
            h = _prem(h, g, p)
    return sorted(out)


def frobenius_cycle_type(f: Poly, p: int) -> Optional[CycleType]:
    """Cycle type of Frobenius at p, or None when p is a bad prime.

    Bad means the reduction mod p drops degree or is not squarefree; either
    way the factorization pattern would not reflect a Galois element.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if f.degree < 1:
        raise ValueError("degree >= 1 required")
    fbar = reduce_poly_mod(f, p)
    if _pdeg(fbar) != f.degree:
        return None  # leading coefficient vanished
    inv = pow(fbar[-1], -1, p)
    fbar = [c * inv % p for c in fbar]
    deriv = _ptrim([i * c % p for i, c in enumerate(fbar)][1:])
    if _pdeg(_pgcd(fbar, deriv, p)) != 0:
        return None  # not squarefree mod p
    return CycleType(tuple(distinct_degree_pattern(fbar, p)))
