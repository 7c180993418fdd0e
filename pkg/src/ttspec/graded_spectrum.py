"""Homogeneous prime spectrum of the graded ring attached to K^MW(F_q).

Killing the nilpotent generators ([w] and eta[w], both of square zero,
verified by explicit multiplication) leaves the graded ring Z[t]/(2t) with
t = eta in degree -1.  Homogeneous elements of the reduced ring are an
integer in degree 0 or a Z/2 multiple of eta^d in degree -d; primes are
enumerated over the named generator alphabet and certified by a degree-
and coefficient-bounded multiplicativity check.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import UnknownGenerator
from .finite_field import PrimePower
from .milnor_witt import KmwElement, eta, kmw_mul, omega_symbol

GENERATOR_OMEGA = "[w]"
GENERATOR_ETA = "eta"


@dataclass(frozen=True)
class ReducedElement:
    """Homogeneous element of Z[eta]/(2 eta): degree 0 integers, or
    coefficient-mod-2 multiples of eta^d in degree -d."""

    degree: int  # <= 0
    coeff: int

    def __post_init__(self):
        if self.degree > 0:
            raise ValueError("reduced ring vanishes in positive degrees")
        if self.degree < 0:
            object.__setattr__(self, "coeff", self.coeff % 2)

    def is_zero(self) -> bool:
        return self.coeff == 0

    def __mul__(self, other: "ReducedElement") -> "ReducedElement":
        return ReducedElement(self.degree + other.degree, self.coeff * other.coeff)

    def __repr__(self):
        if self.degree == 0:
            return str(self.coeff)
        return f"{self.coeff}*eta^{-self.degree}"


@dataclass(frozen=True)
class GradedRingPresentation:
    """Presentation tag for the reduced ring Z[t]/(m t), deg(t) = degree."""

    family: str  # "KMW(q)_red"
    t_name: str
    t_degree: int
    torsion: int  # m in Z[t]/(m t)
    nilpotent_witnesses: tuple[tuple[str, str], ...]

    def element(self, degree: int, coeff: int) -> ReducedElement:
        return ReducedElement(degree, coeff)


def nilradical_reduction(field: PrimePower) -> GradedRingPresentation:
    """Compute the reduced presentation, verifying each killed generator
    is nilpotent and that eta is not."""
    w = omega_symbol(field)
    ww = kmw_mul(w, w)
    assert ww.is_zero(), "[w]^2 must vanish"
    ew = KmwElement(field, 0, (0, 1))  # eta[w]
    eww = kmw_mul(ew, ew)
    assert eww.is_zero(), "(eta[w])^2 must vanish"
    e = eta(field)
    assert not kmw_mul(e, e).is_zero(), "eta must not be nilpotent"
    return GradedRingPresentation(
        family=f"KMW({field.q})_red",
        t_name="eta",
        t_degree=-1,
        torsion=2,
        nilpotent_witnesses=(("[w]", "[w]*[w] = 0"), ("eta[w]", "(eta[w])^2 = 0")),
    )


@dataclass(frozen=True)
class HomogeneousPrime:
    """Named-generator homogeneous ideal of the reduced ring.

    Generators are drawn from {[w], eta, 2} plus odd integer primes; [w]
    is always present (it generates the nilradical of K^MW).
    """

    generators: frozenset[str]
    discrepancy: bool = False  # the ([w], eta, 2) point absent from the usual list

    @property
    def has_eta(self) -> bool:
        return GENERATOR_ETA in self.generators

    @property
    def integer_generators(self) -> tuple[int, ...]:
        out = []
        for g in self.generators:
            if g not in (GENERATOR_OMEGA, GENERATOR_ETA):
                out.append(int(g))
        return tuple(sorted(out))

    def sorted_generators(self) -> tuple[str, ...]:
        def key(g):
            if g == GENERATOR_OMEGA:
                return (0, 0)
            if g == GENERATOR_ETA:
                return (1, 0)
            return (2, int(g))

        return tuple(sorted(self.generators, key=key))

    def contains(self, x: ReducedElement) -> bool:
        """Ideal membership in the reduced ring.

        The degree-0 part of the ideal is g*Z for g the gcd of the integer
        generators; in negative degrees the ideal contains eta^d iff eta
        is a generator or some odd integer is (odd * eta^d = eta^d since
        2*eta = 0).
        """
        if x.is_zero():
            return True
        g = _gcd_many(self.integer_generators)
        if x.degree == 0:
            return g != 0 and x.coeff % g == 0
        return self.has_eta or (g != 0 and g % 2 == 1)

    def includes(self, other: "HomogeneousPrime") -> bool:
        """Ideal inclusion other <= self, decided on generators."""
        gens = []
        if other.has_eta:
            gens.append(ReducedElement(-1, 1))
        for m in other.integer_generators:
            gens.append(ReducedElement(0, m))
        return all(self.contains(x) for x in gens)

    def __repr__(self):
        return "(" + ", ".join(self.sorted_generators()) + ")"


_ALPHABET_SPECIALS = {GENERATOR_OMEGA, GENERATOR_ETA}


def _gcd_many(values) -> int:
    import math

    g = 0
    for v in values:
        g = math.gcd(g, v)
    return g


def _validate_generators(generators):
    for g in generators:
        if g in _ALPHABET_SPECIALS:
            continue
        try:
            v = int(g)
        except ValueError:
            raise UnknownGenerator(f"unsupported generator {g!r}") from None
        if v < 2:
            raise UnknownGenerator(f"unsupported integer generator {v}")


def is_prime_ideal(candidate: HomogeneousPrime, degree_bound: int = 12, coeff_bound: int = 12) -> dict:
    """Bounded primality certificate for a named-generator ideal.

    Checks properness (1 not in I) and, over all homogeneous x, y with
    |degree| <= degree_bound and |coefficient| <= coeff_bound, that
    x*y in I implies x in I or y in I.  Returns a certificate dict with a
    counterexample on failure.
    """
    _validate_generators(candidate.generators)
    cert = {
        "generators": candidate.sorted_generators(),
        "degree_bound": degree_bound,
        "coeff_bound": coeff_bound,
        "proper": True,
        "prime": True,
        "counterexample": None,
    }
    if candidate.contains(ReducedElement(0, 1)):
        cert["proper"] = False
        cert["prime"] = False
        cert["counterexample"] = "contains 1"
        return cert

    def elements():
        for c in range(-coeff_bound, coeff_bound + 1):
            yield ReducedElement(0, c)
        for d in range(1, degree_bound + 1):
            yield ReducedElement(-d, 1)

    for x, y in itertools.product(elements(), repeat=2):
        if x.is_zero() or y.is_zero():
            continue
        if -(x.degree + y.degree) > degree_bound:
            continue
        if candidate.contains(x * y) and not candidate.contains(x) and not candidate.contains(y):
            cert["prime"] = False
            cert["counterexample"] = (repr(x), repr(y))
            return cert
    return cert


@dataclass(frozen=True)
class SpecHSpace:
    """Finite truncation of Spec^h of the reduced ring."""

    points: tuple[HomogeneousPrime, ...]
    prime_bound: int
    degree_bound: int
    certificates: tuple[dict, ...]

    def specializations(self) -> list[tuple[int, int]]:
        """Pairs (i, j) with point j in the closure of point i (P_i <= P_j)."""
        out = []
        for i, a in enumerate(self.points):
            for j, b in enumerate(self.points):
                if i != j and b.includes(a):
                    out.append((i, j))
        return out

    def v_closed(self, ideal: HomogeneousPrime) -> list[HomogeneousPrime]:
        """V(I) = points containing I."""
        return [p for p in self.points if p.includes(ideal)]

    def d_open(self, s: ReducedElement) -> list[HomogeneousPrime]:
        """D(s) = points not containing the homogeneous element s."""
        return [p for p in self.points if not p.contains(s)]

    def closure(self, subset) -> list[HomogeneousPrime]:
        subset = list(subset)
        return [
            p
            for p in self.points
            if any(p.includes(q) for q in subset)
        ]


def enumerate_primes(field: PrimePower, prime_bound: int, degree_bound: int = 12) -> SpecHSpace:
    """All certified homogeneous primes of the reduced presentation with
    integer components <= prime_bound.

    Candidate ideals are generated from the named alphabet, deduplicated
    by ideal equality, certified by `is_prime_ideal`, and returned with
    the specialization (inclusion) order.  The point ([w], eta, 2), which
    the usual classification folds into its neighbours, is flagged as a
    discrepancy exactly once.
    """
    nilradical_reduction(field)  # verifies the reduction witnesses
    int_primes = [p for p in range(2, prime_bound + 1) if _is_int_prime(p)]
    candidates = []
    for use_eta in (False, True):
        for ip in [None] + int_primes:
            gens = {GENERATOR_OMEGA}
            if use_eta:
                gens.add(GENERATOR_ETA)
            if ip is not None:
                gens.add(str(ip))
            candidates.append(frozenset(gens))
    # canonicalize: an odd integer generator absorbs eta (odd * eta = eta)
    seen = {}
    for gens in candidates:
        cand = HomogeneousPrime(gens)
        ints = cand.integer_generators
        canonical = set(gens)
        if any(m % 2 == 1 for m in ints):
            canonical.add(GENERATOR_ETA)
        key = frozenset(canonical)
        if key not in seen:
            seen[key] = HomogeneousPrime(key)
    points = []
    certificates = []
    for cand in seen.values():
        cert = is_prime_ideal(cand, degree_bound=degree_bound)
        if cert["prime"]:
            flagged = cand.generators == frozenset({GENERATOR_OMEGA, GENERATOR_ETA, "2"})
            points.append(HomogeneousPrime(cand.generators, discrepancy=flagged))
            certificates.append(cert)
    order = {p.sorted_generators(): p for p in points}
    points = tuple(order[k] for k in sorted(order))
    certificates = tuple(
        sorted(certificates, key=lambda c: tuple(c["generators"]))
    )
    return SpecHSpace(points, prime_bound, degree_bound, certificates)


def _is_int_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True
