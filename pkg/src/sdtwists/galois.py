"""Symmetric-group certification from cycle types and discriminant witnesses.

A certificate is sound by construction: ``certified_Sd`` is emitted only
when the group-theoretic criterion is met by verified facts, namely

  * the polynomial is certifiably irreducible over Q (transitivity),
  * the group contains a d-cycle,
  * the group contains a transposition, and
  * it contains a (d-1)-cycle, or d >= 5 is odd and it contains a
    (d-2)-cycle;

and then the group is all of S_d.  For d = 3, irreducible with nonsquare
discriminant is an accepted alternate route, and an irreducible quadratic
is S_2 outright.  Everything else is reported ``inconclusive``; there is no
"probably" state.

Irreducibility never factors over Q.  It is certified from reductions mod
good primes (an irreducible reduction, or factor-degree subset sums whose
intersection over the sampled primes is {0, d}) or from a totally ramified
Newton polygon.

Transpositions come from a prime p, not dividing the leading coefficient,
with v_p(disc) = 1 exactly, or from an observed cycle type an odd power of
which is a single transposition (one even part, equal to 2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import padic
from .padic import CycleType
from .polyarith import Poly, discriminant
from .primes import is_square, primes, valuation_int

# Stop scanning for good primes after this many total candidates; only
# degenerate inputs (e.g. squarefull polynomials, where every prime is bad)
# ever reach the cap.
_SCAN_CAP_FACTOR = 25
_SCAN_CAP_MIN = 400

CERTIFIED = "certified"
INCONCLUSIVE = "inconclusive"
CERTIFIED_SD = "certified_Sd"


@dataclass(frozen=True)
class GaloisEvidence:
    degree: int
    observed_cycle_types: frozenset[CycleType]
    transposition_prime: Optional[int]
    irreducibility: str  # CERTIFIED | INCONCLUSIVE
    irreducibility_route: Optional[str]  # "mod-p" | "degree-lattice" | "newton-polygon"
    disc_is_square: Optional[bool]
    provenance: tuple[tuple[str, int, str], ...] = ()

    def __post_init__(self):
        for ct in self.observed_cycle_types:
            if ct.degree != self.degree:
                raise ValueError(f"cycle type {ct} does not sum to degree {self.degree}")


@dataclass(frozen=True)
class SdCertificate:
    status: str  # CERTIFIED_SD | INCONCLUSIVE
    evidence: GaloisEvidence
    route: Optional[str] = None  # "standard" | "cubic-disc" | "quadratic"

    @property
    def certified(self) -> bool:
        return self.status == CERTIFIED_SD


def contains_n_cycle(types: Sequence[CycleType], n: int) -> bool:
    """Whether some power of an element of one of these cycle types is a
    single n-cycle: a part equal to n whose complementary parts have lcm
    coprime to n (raise to that lcm)."""
    for ct in types:
        parts = list(ct.parts)
        if n not in parts:
            continue
        rest = list(parts)
        rest.remove(n)
        l = math.lcm(*rest) if rest else 1
        if math.gcd(l, n) == 1:
            return True
    return False


def _normalize_integral(f: Poly) -> Poly:
    g = f.primitive()
    return -g if g.lead < 0 else g


def _good_prime_scan(f: Poly, budget: int):
    """Cycle types at the first `budget` good primes, in increasing order.

    Returns (list of (prime, CycleType), first prime with irreducible
    reduction or None).  Bad primes (leading coefficient or squarefreeness
    lost mod p) are skipped without consuming budget, up to a hard cap.
    """
    found: list[tuple[int, CycleType]] = []
    first_irreducible = None
    cap = max(_SCAN_CAP_MIN, _SCAN_CAP_FACTOR * budget)
    examined = 0
    for p in primes():
        if len(found) >= budget or examined >= cap:
            break
        examined += 1
        ct = padic.frobenius_cycle_type(f, p)
        if ct is None:
            continue
        found.append((p, ct))
        if first_irreducible is None and ct.parts == (f.degree,):
            first_irreducible = p
    return found, first_irreducible


def _degree_lattice(patterns: Sequence[CycleType], d: int) -> set[int]:
    """Intersection over patterns of the attainable factor-degree subset sums."""
    possible = set(range(d + 1))
    for ct in patterns:
        sums = {0}
        for part in ct.parts:
            sums |= {s + part for s in sums}
        possible &= sums
    return possible


def irreducibility_certificate(f: Poly, prime_budget: int) -> str:
    """CERTIFIED when irreducibility over Q is proved within the budget."""
    status, _route = _irreducibility(f, prime_budget, polygon_primes=())
    return status


def _irreducibility(f: Poly, prime_budget: int, polygon_primes: Sequence[int]):
    d = f.degree
    if d < 2:
        raise ValueError("degree >= 2 required")
    g = _normalize_integral(f)
    scan, first_irr = _good_prime_scan(g, prime_budget)
    if first_irr is not None:
        return CERTIFIED, "mod-p"
    if scan and _degree_lattice([ct for _, ct in scan], d) == {0, d}:
        return CERTIFIED, "degree-lattice"
    for p in polygon_primes:
        if _polygon_totally_ramified(g, p):
            return CERTIFIED, "newton-polygon"
    return INCONCLUSIVE, None


def _polygon_totally_ramified(g: Poly, p: int) -> bool:
    if not g.coeff(0):
        return False
    polygon = padic.newton_polygon(g, p)
    if len(polygon.segments) != 1:
        return False
    slope, length = polygon.segments[0]
    return length == g.degree and slope.denominator == g.degree


def transposition_witness(
    f: Poly, trial_bound: int, extra_primes: Sequence[int] = ()
) -> Optional[int]:
    """Smallest prime p, p not dividing lc(f), with v_p(Disc f) = 1.

    Searches primes up to trial_bound and then the supplied extras; absence
    is reported as None, never guessed.
    """
    g = _normalize_integral(f)
    disc = discriminant(g)
    if disc == 0:
        raise ValueError("discriminant vanishes; no transposition witness exists")
    n = abs(disc.numerator)
    lead = g.lead.numerator
    from .primes import primes_up_to

    candidates = list(primes_up_to(trial_bound))
    candidates += sorted(set(int(p) for p in extra_primes) - set(candidates))
    for p in candidates:
        if p > n:
            break
        if lead % p == 0 or n % p:
            continue
        if valuation_int(n, p) == 1:
            return p
    return None


def collect_evidence(
    f: Poly,
    d: int,
    prime_budget: int,
    polygon_primes: Sequence[int] = (),
    trial_bound: int = 100_000,
    extra_primes: Sequence[int] = (),
    skip_witness_for_cubic: bool = True,
) -> GaloisEvidence:
    """Gather cycle types, irreducibility status and a transposition witness.

    Deterministic for fixed inputs.  The discriminant trial factorization is
    skipped when the d = 3 shortcut (irreducible, nonsquare discriminant)
    already decides the certificate and ``skip_witness_for_cubic`` is set;
    sweeps over many cubics rely on that fast path.
    """
    if f.degree != d:
        raise ValueError(f"degree mismatch: got {f.degree}, expected {d}")
    g = _normalize_integral(f)
    provenance: list[tuple[str, int, str]] = []

    scan, first_irr = _good_prime_scan(g, prime_budget)
    types: set[CycleType] = set()
    for p, ct in scan:
        types.add(ct)
        provenance.append(("frobenius_cycle_type", p, str(ct)))

    if first_irr is not None:
        irred, route = CERTIFIED, "mod-p"
    elif scan and _degree_lattice([ct for _, ct in scan], d) == {0, d}:
        irred, route = CERTIFIED, "degree-lattice"
    else:
        irred, route = INCONCLUSIVE, None

    for p in polygon_primes:
        if not g.coeff(0):
            break
        polygon = padic.newton_polygon(g, p)
        for ct in padic.cycle_certificate(polygon):
            types.add(ct)
            provenance.append(("cycle_certificate", p, str(ct)))
        if irred == INCONCLUSIVE and _polygon_totally_ramified(g, p):
            irred, route = CERTIFIED, "newton-polygon"
            provenance.append(("irreducibility", p, "totally ramified"))

    disc = discriminant(g)
    disc_square = is_square(disc.numerator) if disc.denominator == 1 else False

    witness = None
    cubic_shortcut = d == 3 and irred == CERTIFIED and not disc_square
    if disc != 0 and irred == CERTIFIED and not (cubic_shortcut and skip_witness_for_cubic):
        witness = transposition_witness(g, trial_bound, extra_primes)
        if witness is not None:
            provenance.append(("transposition_witness", witness, "v_p(disc)=1"))

    return GaloisEvidence(
        degree=d,
        observed_cycle_types=frozenset(types),
        transposition_prime=witness,
        irreducibility=irred,
        irreducibility_route=route,
        disc_is_square=disc_square if disc != 0 else True,
        provenance=tuple(provenance),
    )


def certify_sd(evidence: GaloisEvidence) -> SdCertificate:
    """Decide certified_Sd from verified facts alone."""
    d = evidence.degree
    if d < 2:
        raise ValueError("certification requires degree >= 2")
    types = list(evidence.observed_cycle_types)
    if evidence.irreducibility != CERTIFIED:
        return SdCertificate(INCONCLUSIVE, evidence)

    if d == 2:
        return SdCertificate(CERTIFIED_SD, evidence, route="quadratic")

    if d == 3 and evidence.disc_is_square is False:
        return SdCertificate(CERTIFIED_SD, evidence, route="cubic-disc")

    has_transposition = evidence.transposition_prime is not None or contains_n_cycle(
        types, 2
    )
    has_d_cycle = contains_n_cycle(types, d)
    has_long = contains_n_cycle(types, d - 1) or (
        d >= 5 and d % 2 == 1 and contains_n_cycle(types, d - 2)
    )
    if has_transposition and has_d_cycle and has_long:
        return SdCertificate(CERTIFIED_SD, evidence, route="standard")
    return SdCertificate(INCONCLUSIVE, evidence)
