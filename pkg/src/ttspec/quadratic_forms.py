"""Quadratic forms over F_q: diagonalization, Witt decomposition, and the
rings W(F_q) and GW(F_q) with the fundamental ideal filtration.

Witt classes are stored by canonical anisotropic representatives:
rank 0 -> <>, rank 1 -> <1> or <w>, rank 2 -> <1, -w>, where w is the
fixed generator of F_q^*.  This makes class equality a value comparison.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import DegenerateForm, FieldMismatch
from .finite_field import (
    FieldElement,
    PrimePower,
    is_square,
    primitive_element,
    square_class,
)

# exhaustive isotropy search is used up to this cardinality; beyond it the
# rank >= 3 theorem (re-verified exhaustively in the tests) is applied
_EXHAUSTIVE_Q = 1 << 7


@dataclass(frozen=True)
class GramForm:
    """Symmetric Gram matrix of a bilinear form over F_q."""

    field: PrimePower
    gram: tuple[tuple[FieldElement, ...], ...]

    def __post_init__(self):
        n = len(self.gram)
        for row in self.gram:
            if len(row) != n:
                raise ValueError("Gram matrix must be square")
        for i in range(n):
            for j in range(n):
                if self.gram[i][j] != self.gram[j][i]:
                    raise ValueError("Gram matrix must be symmetric")

    @property
    def rank(self) -> int:
        return len(self.gram)

    def determinant(self) -> FieldElement:
        return _det(self.field, [list(r) for r in self.gram])


def gram(field: PrimePower, rows) -> GramForm:
    return GramForm(field, tuple(tuple(field.element(x) for x in row) for row in rows))


@dataclass(frozen=True)
class DiagonalForm:
    field: PrimePower
    entries: tuple[FieldElement, ...]

    def __post_init__(self):
        for a in self.entries:
            if a.is_zero():
                raise DegenerateForm("diagonal entries must be nonzero")

    @property
    def rank(self) -> int:
        return len(self.entries)

    def determinant_class(self) -> int | None:
        """Square-class bit of the determinant; None for the empty form."""
        if not self.entries:
            return None
        det = self.field.one()
        for a in self.entries:
            det = det * a
        return square_class(det)

    def evaluate(self, vec) -> FieldElement:
        total = self.field.zero()
        for a, x in zip(self.entries, vec):
            total = total + a * x * x
        return total

    def concat(self, other: "DiagonalForm") -> "DiagonalForm":
        self._check(other)
        return DiagonalForm(self.field, self.entries + other.entries)

    def tensor(self, other: "DiagonalForm") -> "DiagonalForm":
        self._check(other)
        return DiagonalForm(
            self.field, tuple(a * b for a in self.entries for b in other.entries)
        )

    def gram_form(self) -> GramForm:
        z = self.field.zero()
        n = self.rank
        return GramForm(
            self.field,
            tuple(
                tuple(self.entries[i] if i == j else z for j in range(n))
                for i in range(n)
            ),
        )

    def _check(self, other):
        if self.field != other.field:
            raise FieldMismatch("forms over different fields")


def diagonal(field: PrimePower, entries) -> DiagonalForm:
    return DiagonalForm(field, tuple(field.element(a) for a in entries))


def _det(field: PrimePower, m) -> FieldElement:
    n = len(m)
    m = [row[:] for row in m]
    det = field.one()
    for col in range(n):
        pivot = next((r for r in range(col, n) if not m[r][col].is_zero()), None)
        if pivot is None:
            return field.zero()
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det = det * m[col][col]
        inv = m[col][col].inverse()
        for r in range(col + 1, n):
            factor = m[r][col] * inv
            for c in range(col, n):
                m[r][c] = m[r][c] - factor * m[col][c]
    return det


def _mat_mul(field, a, b):
    n, k, m = len(a), len(b), len(b[0]) if b else 0
    out = [[field.zero() for _ in range(m)] for _ in range(n)]
    for i in range(n):
        for j in range(m):
            s = field.zero()
            for t in range(k):
                s = s + a[i][t] * b[t][j]
            out[i][j] = s
    return out


def _transpose(m):
    return [list(col) for col in zip(*m)]


def diagonalize(g: GramForm) -> tuple[DiagonalForm, list[list[FieldElement]]]:
    """Diagonalize a nondegenerate Gram form by symmetric congruence.

    Returns (diagonal form, change of basis C) with C^T G C diagonal;
    C is retained so tests can verify the isometry witness.
    """
    field = g.field
    n = g.rank
    if g.determinant().is_zero():
        raise DegenerateForm("zero determinant")
    a = [list(row) for row in g.gram]
    c = [[field.one() if i == j else field.zero() for j in range(n)] for i in range(n)]

    def col_op(target, source, factor):
        # col_target += factor * col_source, applied symmetrically to a, and to c
        for i in range(n):
            a[i][target] = a[i][target] + factor * a[i][source]
        for j in range(n):
            a[target][j] = a[target][j] + factor * a[source][j]
        for i in range(n):
            c[i][target] = c[i][target] + factor * c[i][source]

    def col_swap(i, j):
        for r in range(n):
            a[r][i], a[r][j] = a[r][j], a[r][i]
        a[i], a[j] = a[j], a[i]
        for r in range(n):
            c[r][i], c[r][j] = c[r][j], c[r][i]

    one = field.one()
    for k in range(n):
        if a[k][k].is_zero():
            j = next((t for t in range(k + 1, n) if not a[t][t].is_zero()), None)
            if j is not None:
                col_swap(k, j)
            else:
                j = next(t for t in range(k + 1, n) if not a[k][t].is_zero())
                col_op(k, j, one)  # new norm is 2*a[k][j] != 0 in odd characteristic
        inv = a[k][k].inverse()
        for j in range(k + 1, n):
            if not a[k][j].is_zero():
                col_op(j, k, -a[k][j] * inv)
    entries = tuple(a[i][i] for i in range(n))
    return DiagonalForm(field, entries), c


def is_isotropic(f: DiagonalForm) -> bool:
    """True iff f has a nontrivial zero.

    Exhaustive vector search for rank <= 3 and small q.  Rank >= 4 forms
    over a finite field are always isotropic, as is any rank-3 form (the
    Chevalley-style threshold, re-verified exhaustively in the tests for
    q <= 13); both shortcuts keep large fields tractable.
    """
    field = f.field
    n = f.rank
    if n <= 1:
        return False
    if n >= 4:
        return True
    if n == 3 and field.q > _EXHAUSTIVE_Q:
        return True
    if n == 2 and field.q > _EXHAUSTIVE_Q:
        # <a,b> isotropic iff -a/b is a square
        return is_square(-f.entries[0] / f.entries[1])
    for vec in itertools.product(range(field.q), repeat=n):
        if all(v == 0 for v in vec):
            continue
        if f.evaluate([field.from_index(v) for v in vec]).is_zero():
            return True
    return False


def _isotropic_vector(f: DiagonalForm):
    field = f.field
    n = f.rank
    if n == 2 and field.q > _EXHAUSTIVE_Q:
        # solve x^2 = -a/b directly
        target = -f.entries[0] / f.entries[1]
        for v in range(1, field.q):
            x = field.from_index(v)
            if x * x == target:
                return [field.one(), x]
        return None
    for vec in itertools.product(range(field.q), repeat=n):
        if all(v == 0 for v in vec):
            continue
        w = [field.from_index(v) for v in vec]
        if f.evaluate(w).is_zero():
            return w
    return None


def witt_decompose(f: DiagonalForm) -> tuple[int, DiagonalForm]:
    """Split f as (hyperbolic plane)^h + anisotropic kernel.

    Isotropy descent: find an isotropic vector, split off the hyperbolic
    plane it spans together with a dual vector, restrict to the orthogonal
    complement, repeat until the rest is anisotropic.
    """
    field = f.field
    h = 0
    current = f
    while current.rank >= 2 and is_isotropic(current):
        v = _isotropic_vector(current)
        assert v is not None
        n = current.rank
        entries = current.entries

        def bilin(u, w):
            s = field.zero()
            for i in range(n):
                s = s + entries[i] * u[i] * w[i]
            return s

        # dual vector with b(v, u) != 0: some coordinate vector works
        u = None
        for i in range(n):
            cand = [field.one() if j == i else field.zero() for j in range(n)]
            if not bilin(v, cand).is_zero():
                u = cand
                break
        assert u is not None, "form must be nondegenerate"
        comp = _orthogonal_complement(field, entries, [v, u])
        if comp:
            sub_gram = tuple(
                tuple(bilin(x, y) for y in comp) for x in comp
            )
            rest, _ = diagonalize(GramForm(field, sub_gram))
            current = rest
        else:
            current = DiagonalForm(field, ())
        h += 1
    return h, current


def _orthogonal_complement(field, entries, vectors):
    """Basis of the subspace orthogonal to the given vectors, for the
    diagonal form with the given entries (Gaussian elimination over F_q)."""
    n = len(entries)
    rows = [[entries[j] * v[j] for j in range(n)] for v in vectors]
    reduced, pivots = [], []
    for row in rows:
        row = row[:]
        for prow, pcol in zip(reduced, pivots):
            if not row[pcol].is_zero():
                factor = row[pcol] * prow[pcol].inverse()
                row = [x - factor * y for x, y in zip(row, prow)]
        pcol = next((j for j in range(n) if not row[j].is_zero()), None)
        if pcol is not None:
            reduced.append(row)
            pivots.append(pcol)
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for fcol in free:
        vec = [field.zero()] * n
        vec[fcol] = field.one()
        for prow, pcol in reversed(list(zip(reduced, pivots))):
            s = field.zero()
            for j in range(n):
                if j != pcol:
                    s = s + prow[j] * vec[j]
            vec[pcol] = -s * prow[pcol].inverse()
        basis.append(vec)
    return basis


@dataclass(frozen=True)
class WittClass:
    field: PrimePower
    anisotropic_kernel: DiagonalForm

    def __post_init__(self):
        if self.anisotropic_kernel.rank > 2:
            raise ValueError("anisotropic kernel over a finite field has rank <= 2")

    def is_zero(self) -> bool:
        return self.anisotropic_kernel.rank == 0

    @property
    def rank_mod_2(self) -> int:
        return self.anisotropic_kernel.rank % 2

    def __add__(self, other: "WittClass") -> "WittClass":
        return witt_add(self, other)

    def __neg__(self) -> "WittClass":
        if self.is_zero():
            return self
        return witt_class(
            DiagonalForm(self.field, tuple(-a for a in self.anisotropic_kernel.entries))
        )

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "WittClass") -> "WittClass":
        return witt_mul(self, other)


def _canonical_kernel(field: PrimePower, kernel: DiagonalForm) -> DiagonalForm:
    omega = primitive_element(field)
    r = kernel.rank
    if r == 0:
        return DiagonalForm(field, ())
    if r == 1:
        rep = field.one() if is_square(kernel.entries[0]) else omega
        return DiagonalForm(field, (rep,))
    return DiagonalForm(field, (field.one(), -omega))


def witt_class(f: DiagonalForm) -> WittClass:
    _, kernel = witt_decompose(f)
    return WittClass(f.field, _canonical_kernel(f.field, kernel))


def witt_zero(field: PrimePower) -> WittClass:
    return WittClass(field, DiagonalForm(field, ()))


def witt_one(field: PrimePower) -> WittClass:
    return WittClass(field, DiagonalForm(field, (field.one(),)))


def witt_add(a: WittClass, b: WittClass) -> WittClass:
    if a.field != b.field:
        raise FieldMismatch("Witt classes over different fields")
    return witt_class(a.anisotropic_kernel.concat(b.anisotropic_kernel))


def witt_mul(a: WittClass, b: WittClass) -> WittClass:
    if a.field != b.field:
        raise FieldMismatch("Witt classes over different fields")
    if a.is_zero() or b.is_zero():
        return witt_zero(a.field)
    return witt_class(a.anisotropic_kernel.tensor(b.anisotropic_kernel))


def witt_elements(field: PrimePower) -> list[WittClass]:
    """The four elements of W(F_q): 0, <1>, <w>, <1,-w>."""
    omega = primitive_element(field)
    return [
        witt_zero(field),
        WittClass(field, DiagonalForm(field, (field.one(),))),
        WittClass(field, DiagonalForm(field, (omega,))),
        WittClass(field, DiagonalForm(field, (field.one(), -omega))),
    ]


def additive_order(cls: WittClass) -> int:
    if cls.is_zero():
        return 1
    acc = cls
    n = 1
    while not acc.is_zero():
        acc = acc + cls
        n += 1
        assert n <= 8
    return n


def witt_ring_structure(field: PrimePower) -> dict:
    """Isomorphism type of W(F_q) with an explicit additive generator table."""
    one = witt_one(field)
    order = additive_order(one)
    kind = "Z/4" if order == 4 else "Z/2[e]/e^2"
    table = {}
    acc = witt_zero(field)
    for k in range(order):
        table[f"{k}*<1>"] = tuple(a.value for a in acc.anisotropic_kernel.entries)
        acc = acc + one
    elements = witt_elements(field)
    assert len({_witt_key(c) for c in elements}) == 4
    return {
        "q": field.q,
        "q_mod_4": field.q % 4,
        "type": kind,
        "order_of_unit_form": order,
        "generator_table": table,
    }


@dataclass(frozen=True)
class GWClass:
    """Element of GW(F_q) ~= Z (+) Z/2 as (virtual rank, discriminant bit)."""

    field: PrimePower
    rank: int
    disc: int

    def __post_init__(self):
        object.__setattr__(self, "disc", self.disc % 2)

    def __add__(self, other: "GWClass") -> "GWClass":
        self._check(other)
        return GWClass(self.field, self.rank + other.rank, self.disc ^ other.disc)

    def __neg__(self):
        return GWClass(self.field, -self.rank, self.disc)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "GWClass") -> "GWClass":
        # derived from tensor products of diagonal representatives:
        # disc(<rank m, disc s> (x) <rank n, disc t>) = n*s + m*t mod 2
        self._check(other)
        return GWClass(
            self.field,
            self.rank * other.rank,
            (other.rank * self.disc + self.rank * other.disc) % 2,
        )

    def _check(self, other):
        if self.field != other.field:
            raise FieldMismatch("GW classes over different fields")

    def to_witt(self) -> WittClass:
        """Canonical quotient GW -> W: the class of the representative
        form <1>^(rank - disc) + <w>^disc, computed by Witt arithmetic.
        Exponents are reduced mod 4 (the additive exponent of W)."""
        field = self.field
        omega = primitive_element(field)
        one = witt_one(field)
        om = WittClass(field, DiagonalForm(field, (omega,)))
        result = witt_zero(field)
        for _ in range((self.rank - self.disc) % 4):
            result = result + one
        for _ in range(self.disc % 2):
            result = result + om
        return result


def gw_class(f: DiagonalForm) -> GWClass:
    disc = 0
    for a in f.entries:
        disc ^= square_class(a)
    return GWClass(f.field, f.rank, disc)


def gw_add(a: GWClass, b: GWClass) -> GWClass:
    return a + b


def gw_mul(a: GWClass, b: GWClass) -> GWClass:
    return a * b


def hyperbolic_class(field: PrimePower) -> GWClass:
    return gw_class(DiagonalForm(field, (field.one(), -field.one())))


def fundamental_ideal_power(field: PrimePower, n: int) -> dict:
    """The subgroup I^n of W(F_q), with explicit generators.

    I^0 = W; for n >= 1, I^n is generated by n-fold products of Pfister
    forms <1, -a>, computed by exhaustive product generation over
    square-class representatives.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        members = witt_elements(field)
        generators = list(members)
    else:
        omega = primitive_element(field)
        reps = [field.one(), omega]
        pfisters = [witt_class(DiagonalForm(field, (field.one(), -a))) for a in reps]
        generators = []
        for combo in itertools.product(pfisters, repeat=n):
            prod = combo[0]
            for c in combo[1:]:
                prod = prod * c
            generators.append(prod)
        seen = {_witt_key(witt_zero(field)): witt_zero(field)}
        frontier = [witt_zero(field)]
        while frontier:
            new = []
            for m in frontier:
                for g in generators:
                    cand = m + g
                    key = _witt_key(cand)
                    if key not in seen:
                        seen[key] = cand
                        new.append(cand)
            frontier = new
        members = list(seen.values())
    return {
        "n": n,
        "order": len(members),
        "members": members,
        "generators": generators,
    }


def _witt_key(cls: WittClass):
    return tuple(a.value for a in cls.anisotropic_kernel.entries)


def isometric(f: DiagonalForm, g: DiagonalForm) -> bool:
    """Classification: equal rank and equal discriminant square-class."""
    if f.field != g.field:
        raise FieldMismatch("forms over different fields")
    return f.rank == g.rank and f.determinant_class() == g.determinant_class()


def isometric_bruteforce(f: DiagonalForm, g: DiagonalForm) -> bool:
    """Brute-force isometry search over GL_n(F_q); oracle for `isometric`."""
    if f.field != g.field:
        raise FieldMismatch("forms over different fields")
    if f.rank != g.rank:
        return False
    field = f.field
    n = f.rank
    if n == 0:
        return True
    fg = [list(r) for r in f.gram_form().gram]
    gg = [list(r) for r in g.gram_form().gram]
    for flat in itertools.product(range(field.q), repeat=n * n):
        c = [[field.from_index(flat[i * n + j]) for j in range(n)] for i in range(n)]
        if _det(field, c).is_zero():
            continue
        if _mat_mul(field, _transpose(c), _mat_mul(field, fg, c)) == gg:
            return True
    return False
