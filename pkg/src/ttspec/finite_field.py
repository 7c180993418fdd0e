"""Exact arithmetic in F_q for odd prime powers q.

Fields are represented as Z/p[x] modulo a deterministically chosen
irreducible polynomial (the lexicographically least monic irreducible of
the requested degree), so every downstream coordinate is reproducible.
Elements are coefficient tuples of length e.  A fixed multiplicative
generator (the least element of full order in representative order) is
cached on the field together with its discrete-log table.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache

from .errors import BoundExceeded, EvenCharacteristic, NotPrime, ZeroInput, FieldMismatch

CARDINALITY_BOUND = 1 << 20
LOG_TABLE_BOUND = 1 << 16


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class PrimePower:
    """Field descriptor for F_q with q = p^e, q odd."""

    p: int
    e: int
    modulus: tuple[int, ...]  # monic, coefficients low-to-high, length e + 1

    # caches, filled lazily; excluded from equality
    _cache: dict = dc_field(default_factory=dict, compare=False, repr=False, hash=False)

    @property
    def q(self) -> int:
        return self.p ** self.e

    def element(self, value) -> "FieldElement":
        """Coerce a value into this field.

        Integers map through the ring homomorphism Z -> F_q (reduction
        mod p); sequences are coefficient tuples.  Use `from_index` for
        the base-p enumeration of all q elements.
        """
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldMismatch(f"element of F_{value.field.q} used in F_{self.q}")
            return value
        if isinstance(value, int):
            coeffs = (value % self.p,) + (0,) * (self.e - 1)
        else:
            coeffs = tuple(c % self.p for c in value)
            coeffs = coeffs + (0,) * (self.e - len(coeffs))
        return FieldElement(self, coeffs)

    def from_index(self, v: int) -> "FieldElement":
        """The v-th element in representative order (base-p encoding)."""
        return FieldElement(self, _int_to_coeffs(v % self.q, self.p, self.e))

    def zero(self) -> "FieldElement":
        return self.element(0)

    def one(self) -> "FieldElement":
        return self.element(1)

    def elements(self):
        """All q elements, in representative order."""
        for v in range(self.q):
            yield self.from_index(v)

    def units(self):
        for v in range(1, self.q):
            yield self.from_index(v)

    def __repr__(self):
        return f"F_{self.q}" if self.e == 1 else f"F_{self.q}(p={self.p},e={self.e})"


def _int_to_coeffs(v: int, p: int, e: int) -> tuple[int, ...]:
    coeffs = []
    for _ in range(e):
        coeffs.append(v % p)
        v //= p
    return tuple(coeffs)


def _coeffs_to_int(coeffs: tuple[int, ...], p: int) -> int:
    v = 0
    for c in reversed(coeffs):
        v = v * p + c
    return v


def _poly_mul_mod(a, b, modulus, p):
    """Multiply coefficient tuples mod (modulus, p)."""
    e = len(modulus) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    # reduce by monic modulus
    for i in range(len(prod) - 1, e - 1, -1):
        c = prod[i]
        if c:
            prod[i] = 0
            for j in range(e + 1):
                prod[i - e + j] = (prod[i - e + j] - c * modulus[j]) % p
    prod = prod[:e] + [0] * max(0, e - len(prod))
    return tuple(prod)


def _poly_is_irreducible(poly: tuple[int, ...], p: int) -> bool:
    """Brute-force irreducibility: no root/factor found by trial division."""
    e = len(poly) - 1
    if e == 1:
        return True
    # trial divide by every monic polynomial of degree 1 .. e//2
    for d in range(1, e // 2 + 1):
        for v in range(p ** d):
            divisor = list(_int_to_coeffs(v, p, d)) + [1]
            if _poly_divides(divisor, poly, p):
                return False
    return True


def _poly_divides(divisor, poly, p):
    rem = list(poly)
    dd = len(divisor) - 1
    inv_lead = pow(divisor[-1], -1, p)
    for i in range(len(rem) - 1, dd - 1, -1):
        c = rem[i] * inv_lead % p
        if c:
            for j in range(dd + 1):
                rem[i - dd + j] = (rem[i - dd + j] - c * divisor[j]) % p
    return all(c == 0 for c in rem[:dd])


@dataclass(frozen=True)
class FieldElement:
    field: PrimePower
    coeffs: tuple[int, ...]

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    @property
    def value(self) -> int:
        """Canonical integer representative (base-p encoding of coefficients)."""
        return _coeffs_to_int(self.coeffs, self.field.p)

    def _check(self, other: "FieldElement"):
        if self.field != other.field:
            raise FieldMismatch(f"{self.field!r} vs {other.field!r}")

    def __add__(self, other):
        other = self.field.element(other)
        return FieldElement(
            self.field,
            tuple((a + b) % self.field.p for a, b in zip(self.coeffs, other.coeffs)),
        )

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        return FieldElement(self.field, tuple((-a) % self.field.p for a in self.coeffs))

    def __sub__(self, other):
        other = self.field.element(other)
        return self + (-other)

    def __rsub__(self, other):
        return self.field.element(other) - self

    def __mul__(self, other):
        other = self.field.element(other)
        return FieldElement(
            self.field,
            _poly_mul_mod(self.coeffs, other.coeffs, self.field.modulus, self.field.p),
        )

    def __rmul__(self, other):
        return self.__mul__(other)

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroInput("zero has no inverse")
        # q is small; a^(q-2) is the inverse
        return self ** (self.field.q - 2)

    def __truediv__(self, other):
        other = self.field.element(other)
        return self * other.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __repr__(self):
        return f"{self.value}@F_{self.field.q}"


@lru_cache(maxsize=None)
def make_field(p: int, e: int = 1) -> PrimePower:
    """Return the field descriptor for F_{p^e} with a deterministic modulus."""
    if p == 2:
        raise EvenCharacteristic("characteristic 2 is not supported")
    if not _is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if e < 1:
        raise ValueError("exponent must be >= 1")
    if p ** e > CARDINALITY_BOUND:
        raise BoundExceeded(f"{p}^{e} exceeds the bound {CARDINALITY_BOUND}")
    if e == 1:
        modulus = (0, 1)  # the polynomial x; elements are residues mod p
    else:
        modulus = None
        for v in range(p ** e):
            cand = _int_to_coeffs(v, p, e) + (1,)
            if _poly_is_irreducible(cand, p):
                modulus = cand
                break
        assert modulus is not None
    return PrimePower(p, e, modulus)


def multiplicative_order(a: FieldElement) -> int:
    if a.is_zero():
        raise ZeroInput("order of zero undefined")
    x = a
    n = 1
    one = a.field.one()
    while x != one:
        x = x * a
        n += 1
    return n


def primitive_element(field: PrimePower) -> FieldElement:
    """Least element (in representative order) of multiplicative order q - 1."""
    cached = field._cache.get("primitive")
    if cached is not None:
        return cached
    q = field.q
    for v in range(2, q):
        a = field.from_index(v)
        if multiplicative_order(a) == q - 1:
            field._cache["primitive"] = a
            return a
    raise AssertionError("no generator found; field construction is broken")


def _log_table(field: PrimePower) -> dict[tuple[int, ...], int]:
    table = field._cache.get("logs")
    if table is None:
        omega = primitive_element(field)
        table = {}
        x = field.one()
        for k in range(field.q - 1):
            table[x.coeffs] = k
            x = x * omega
        field._cache["logs"] = table
    return table


def discrete_log(a: FieldElement) -> int:
    """Least k >= 0 with omega^k = a, for the fixed generator omega."""
    if a.is_zero():
        raise ZeroInput("discrete log of zero undefined")
    field = a.field
    if field.q <= LOG_TABLE_BOUND:
        return _log_table(field)[a.coeffs]
    omega = primitive_element(field)
    x = field.one()
    for k in range(field.q - 1):
        if x == a:
            return k
        x = x * omega
    raise AssertionError("unreachable: every unit is a power of the generator")


def is_square(a: FieldElement) -> bool:
    """Euler criterion a^((q-1)/2) == 1, cross-checked against dlog parity."""
    if a.is_zero():
        raise ZeroInput("squareness of zero undefined")
    euler = a ** ((a.field.q - 1) // 2) == a.field.one()
    if a.field.q <= LOG_TABLE_BOUND:
        assert euler == (discrete_log(a) % 2 == 0)
    return euler


def square_class(a: FieldElement) -> int:
    """0 for squares, 1 for non-squares."""
    return 0 if is_square(a) else 1
