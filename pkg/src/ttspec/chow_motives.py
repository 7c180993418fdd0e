"""Pure motives of Tate type over products of projective spaces.

Chow rings of products of projective spaces are truncated polynomial
rings Z[h_1, ..., h_k] / (h_i^{n_i + 1}), so every cycle-level operation
(intersection, pullback, pushforward, correspondence composition) is
exact polynomial bookkeeping.  Motives are triples (X, p, n) with p an
idempotent correspondence; the Lefschetz motive is the point with twist
-1, and twisting by n corresponds to tensoring with its (-n)-th power.

hom((X, p, n), (Y, q, m)) is the subgroup of classes a in
CH^{dim X + m - n}(X x Y) fixed by a -> q o a o p.  The compression
operator is idempotent, so the hom group is its image, computed as an
integer column lattice.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import SpaceMismatch


@dataclass(frozen=True)
class ProjSpaceProduct:
    """Product P^{n_1} x ... x P^{n_k}; the empty product is the point."""

    dims: tuple[int, ...]

    def __post_init__(self):
        if any(n < 0 for n in self.dims):
            raise ValueError("projective space dimensions must be >= 0")
        object.__setattr__(self, "dims", tuple(self.dims))

    @property
    def dimension(self) -> int:
        return sum(self.dims)

    @property
    def factors(self) -> int:
        return len(self.dims)

    def times(self, other: "ProjSpaceProduct") -> "ProjSpaceProduct":
        return ProjSpaceProduct(self.dims + other.dims)

    def monomials(self, codim: int = None):
        """Monomial basis (exponent tuples), optionally of one codimension."""
        ranges = [range(n + 1) for n in self.dims]
        for mono in itertools.product(*ranges):
            if codim is None or sum(mono) == codim:
                yield mono

    def top_monomial(self) -> tuple[int, ...]:
        return self.dims

    def __repr__(self):
        if not self.dims:
            return "pt"
        return "x".join(f"P{n}" for n in self.dims)


POINT = ProjSpaceProduct(())


@dataclass(frozen=True)
class ChowClass:
    """Cycle class: integer (or Fraction) combination of hyperplane
    monomials, truncated by h_i^{n_i + 1} = 0."""

    space: ProjSpaceProduct
    terms: tuple[tuple[tuple[int, ...], object], ...]  # sorted (monomial, coeff)

    @staticmethod
    def from_dict(space: ProjSpaceProduct, coeffs: dict) -> "ChowClass":
        kept = {}
        for mono, c in coeffs.items():
            mono = tuple(mono)
            if len(mono) != space.factors:
                raise SpaceMismatch(f"monomial {mono} has wrong arity for {space}")
            if any(e > n for e, n in zip(mono, space.dims)):
                continue  # truncation
            if any(e < 0 for e in mono):
                raise ValueError("negative exponent")
            if c:
                kept[mono] = kept.get(mono, 0) + c
        kept = {m: c for m, c in kept.items() if c}
        return ChowClass(space, tuple(sorted(kept.items())))

    def coeffs(self) -> dict:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def codimensions(self) -> set[int]:
        return {sum(m) for m, _ in self.terms}

    def is_homogeneous(self, codim: int = None) -> bool:
        cods = self.codimensions()
        if codim is None:
            return len(cods) <= 1
        return cods <= {codim}

    def graded_piece(self, codim: int) -> "ChowClass":
        return ChowClass.from_dict(
            self.space, {m: c for m, c in self.terms if sum(m) == codim}
        )

    def _check(self, other: "ChowClass"):
        if self.space != other.space:
            raise SpaceMismatch(f"{self.space} vs {other.space}")

    def __add__(self, other: "ChowClass") -> "ChowClass":
        self._check(other)
        out = self.coeffs()
        for m, c in other.terms:
            out[m] = out.get(m, 0) + c
        return ChowClass.from_dict(self.space, out)

    def __neg__(self):
        return ChowClass.from_dict(self.space, {m: -c for m, c in self.terms})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "ChowClass":
        return ChowClass.from_dict(self.space, {m: c * v for m, v in self.terms})

    def __repr__(self):
        if not self.terms:
            return f"0@{self.space}"
        parts = []
        for m, c in self.terms:
            mono = "*".join(f"h{i + 1}^{e}" for i, e in enumerate(m) if e)
            parts.append(f"{c}" + (f"*{mono}" if mono else ""))
        return " + ".join(parts) + f" @{self.space}"


def monomial_class(space: ProjSpaceProduct, mono, coeff=1) -> ChowClass:
    return ChowClass.from_dict(space, {tuple(mono): coeff})


def chow_mul(a: ChowClass, b: ChowClass) -> ChowClass:
    a._check(b)
    out = {}
    for ma, ca in a.terms:
        for mb, cb in b.terms:
            m = tuple(x + y for x, y in zip(ma, mb))
            if any(e > n for e, n in zip(m, a.space.dims)):
                continue
            out[m] = out.get(m, 0) + ca * cb
    return ChowClass.from_dict(a.space, out)


def pullback(a: ChowClass, product: ProjSpaceProduct, positions: tuple[int, ...]) -> ChowClass:
    """Pull a back along the projection of `product` onto the listed
    factor positions (which must present a's space in order)."""
    if tuple(product.dims[i] for i in positions) != a.space.dims:
        raise SpaceMismatch(f"positions {positions} of {product} do not match {a.space}")
    out = {}
    for m, c in a.terms:
        full = [0] * product.factors
        for i, e in zip(positions, m):
            full[i] = e
        out[tuple(full)] = c
    return ChowClass.from_dict(product, out)


def pushforward(a: ChowClass, keep: tuple[int, ...]) -> ChowClass:
    """Push a forward along the projection keeping the listed factor
    positions.  A monomial survives iff every integrated-out factor
    carries its top power; the coefficient is then transported."""
    product = a.space
    drop = [i for i in range(product.factors) if i not in keep]
    target = ProjSpaceProduct(tuple(product.dims[i] for i in keep))
    out = {}
    for m, c in a.terms:
        if all(m[i] == product.dims[i] for i in drop):
            key = tuple(m[i] for i in keep)
            out[key] = out.get(key, 0) + c
    return ChowClass.from_dict(target, out)


def degree(a: ChowClass):
    """Coefficient of the top monomial (the class of a point)."""
    return a.coeffs().get(a.space.top_monomial(), 0)


@dataclass(frozen=True)
class Correspondence:
    """Degree-r correspondence X -> Y: a class in CH^{dim X + r}(X x Y)."""

    source: ProjSpaceProduct
    target: ProjSpaceProduct
    shift: int
    cls: ChowClass

    def __post_init__(self):
        product = self.source.times(self.target)
        if self.cls.space != product:
            raise SpaceMismatch(f"class lives on {self.cls.space}, expected {product}")
        want = self.source.dimension + self.shift
        if not self.cls.is_homogeneous(want):
            raise SpaceMismatch(
                f"degree-{self.shift} correspondence needs codimension {want}"
            )

    def transpose(self) -> "Correspondence":
        ks, kt = self.source.factors, self.target.factors
        out = {}
        for m, c in self.cls.terms:
            out[m[ks:] + m[:ks]] = c
        cls = ChowClass.from_dict(self.target.times(self.source), out)
        shift = self.source.dimension + self.shift - self.target.dimension
        return Correspondence(self.target, self.source, shift, cls)

    def external_product(self, other: "Correspondence") -> "Correspondence":
        """(f x g): X x X' -> Y x Y' with interleaved factor bookkeeping."""
        src = self.source.times(other.source)
        tgt = self.target.times(other.target)
        big = src.times(tgt)
        ks, kt = self.source.factors, self.target.factors
        ks2, kt2 = other.source.factors, other.target.factors
        out = {}
        for m1, c1 in self.cls.terms:
            for m2, c2 in other.cls.terms:
                mono = m1[:ks] + m2[:ks2] + m1[ks:] + m2[ks2:]
                out[mono] = out.get(mono, 0) + c1 * c2
        return Correspondence(src, tgt, self.shift + other.shift, ChowClass.from_dict(big, out))


def identity_correspondence(space: ProjSpaceProduct) -> Correspondence:
    """Kunneth diagonal: product over factors of sum_a h^a (x) h^{n-a}."""
    product = space.times(space)
    k = space.factors
    acc = [((0,) * (2 * k), 1)]
    for f, n in enumerate(space.dims):
        nxt = []
        for mono, c in acc:
            for a in range(n + 1):
                m = list(mono)
                m[f] = a
                m[k + f] = n - a
                nxt.append((tuple(m), c))
        acc = nxt
    cls = ChowClass.from_dict(product, dict(acc))
    return Correspondence(space, space, 0, cls)


def compose(beta: Correspondence, alpha: Correspondence) -> Correspondence:
    """beta o alpha via the triple product: pull both back, intersect,
    push down to source x target."""
    if alpha.target != beta.source:
        raise SpaceMismatch(f"cannot compose {beta.source}->{beta.target} after {alpha.source}->{alpha.target}")
    kx = alpha.source.factors
    ky = alpha.target.factors
    kz = beta.target.factors
    triple = alpha.source.times(alpha.target).times(beta.target)
    a_up = pullback(alpha.cls, triple, tuple(range(kx + ky)))
    b_up = pullback(beta.cls, triple, tuple(range(kx, kx + ky + kz)))
    prod = chow_mul(a_up, b_up)
    down = pushforward(prod, tuple(range(kx)) + tuple(range(kx + ky, kx + ky + kz)))
    return Correspondence(alpha.source, beta.target, alpha.shift + beta.shift, down)


@dataclass(frozen=True)
class Motive:
    """Triple (X, p, n): idempotent correspondence p and twist n."""

    space: ProjSpaceProduct
    projector: Correspondence
    twist: int

    def __post_init__(self):
        p = self.projector
        if p.source != self.space or p.target != self.space or p.shift != 0:
            raise SpaceMismatch("projector must be a degree-0 endocorrespondence")
        if compose(p, p) != p:
            raise ValueError("projector is not idempotent")

    def __repr__(self):
        return f"({self.space}, p, {self.twist})"


def unit_motive() -> Motive:
    return Motive(POINT, identity_correspondence(POINT), 0)


def lefschetz_motive(power: int = 1) -> Motive:
    """L^power as a twisted point motive; negative powers are duals."""
    return Motive(POINT, identity_correspondence(POINT), -power)


def motive_tensor(m: Motive, n: Motive) -> Motive:
    return Motive(
        m.space.times(n.space),
        m.projector.external_product(n.projector),
        m.twist + n.twist,
    )


def motive_dual(m: Motive) -> Motive:
    """(X, p, n)^dual = (X, transpose p, dim X - n)."""
    return Motive(m.space, m.projector.transpose(), m.space.dimension - m.twist)


def motive_decompose(space: ProjSpaceProduct) -> list[tuple[Motive, int]]:
    """Split the diagonal into Kunneth projectors; each summand is
    isomorphic to a power of the Lefschetz motive, returned as
    (motive, power) sorted by power."""
    k = space.factors
    product = space.times(space)
    out = []
    for exps in itertools.product(*[range(n + 1) for n in space.dims]):
        mono = tuple(exps) + tuple(n - a for n, a in zip(space.dims, exps))
        proj = Correspondence(space, space, 0, monomial_class(product, mono))
        weight = sum(n - a for n, a in zip(space.dims, exps))
        out.append((Motive(space, proj, 0), weight))
    out.sort(key=lambda pair: (pair[1], pair[0].projector.cls.terms))
    total = identity_correspondence(space)
    acc = None
    for m, _ in out:
        acc = m.projector if acc is None else Correspondence(
            space, space, 0, acc.cls + m.projector.cls
        )
    assert acc == total, "projectors must sum to the diagonal"
    return out


def _compression_matrix(m: Motive, n: Motive, basis):
    """Matrix of a -> q o a o p on the listed monomial basis."""
    product = m.space.times(n.space)
    cols = []
    index = {mono: i for i, mono in enumerate(basis)}
    shift = n.twist - m.twist
    for mono in basis:
        alpha = Correspondence(m.space, n.space, shift, monomial_class(product, mono))
        image = compose(n.projector, compose(alpha, m.projector))
        col = [0] * len(basis)
        for mo, c in image.cls.terms:
            col[index[mo]] = c
        cols.append(col)
    return cols  # column-major


def _column_lattice_basis(cols):
    """Hermite-style column reduction over Z; returns basis columns."""
    cols = [list(c) for c in cols if any(c)]
    rows = len(cols[0]) if cols else 0
    basis = []
    r = 0
    for i in range(rows):
        cols = [c for c in cols if any(c)]
        pivots = [c for c in cols if c[i] != 0]
        if not pivots:
            continue
        # gcd-reduce the pivot position by repeated column subtraction
        while True:
            pivots = sorted((c for c in cols if c[i] != 0), key=lambda c: abs(c[i]))
            if len(pivots) <= 1:
                break
            small = pivots[0]
            for c in pivots[1:]:
                f = c[i] // small[i]
                for j in range(rows):
                    c[j] -= f * small[j]
        pivot = next((c for c in cols if c[i] != 0), None)
        if pivot is None:
            continue
        if pivot[i] < 0:
            for j in range(rows):
                pivot[j] = -pivot[j]
        basis.append(pivot)
        cols = [c for c in cols if c is not pivot]
        for c in cols:
            f = c[i] // pivot[i]
            if f:
                for j in range(rows):
                    c[j] -= f * pivot[j]
        r += 1
    return basis


def hom_group(m: Motive, n: Motive) -> dict:
    """Free abelian basis of hom(m, n) inside CH^{dim X + twist(n) -
    twist(m)}(X x Y), as the image of the idempotent compression."""
    codim = m.space.dimension + n.twist - m.twist
    product = m.space.times(n.space)
    basis_monos = list(product.monomials(codim))
    if not basis_monos:
        return {"rank": 0, "ambient_codim": codim, "basis": [], "space": product}
    cols = _compression_matrix(m, n, basis_monos)
    image = _column_lattice_basis(cols)
    classes = [
        ChowClass.from_dict(product, {mono: c for mono, c in zip(basis_monos, col) if c})
        for col in image
    ]
    return {
        "rank": len(classes),
        "ambient_codim": codim,
        "basis": classes,
        "space": product,
    }


def _fixed_subspace_keys(m: Motive, n: Motive):
    """Canonical key set for the compressed subgroup, used to compare
    hom groups living in the same ambient cycle group."""
    hom = hom_group(m, n)
    return hom["rank"], frozenset(cls.terms for cls in hom["basis"])


def rigidity_check(m: Motive, n: Motive, p: Motive) -> dict:
    """hom(m (x) n, p) = hom(m, dual(n) (x) p): both compressions live in
    the cycle group of the same triple product in the same codimension,
    so the canonical map is the identity on classes; check the two
    subgroups coincide."""
    left = hom_group(motive_tensor(m, n), p)
    right = hom_group(m, motive_tensor(motive_dual(n), p))
    if left["space"] != right["space"] or left["ambient_codim"] != right["ambient_codim"]:
        raise SpaceMismatch("rigidity sides live in different cycle groups")
    same = frozenset(c.terms for c in left["basis"]) == frozenset(
        c.terms for c in right["basis"]
    )
    return {
        "left_rank": left["rank"],
        "right_rank": right["rank"],
        "bijective": same and left["rank"] == right["rank"],
    }


def pairing_nondegenerate(space: ProjSpaceProduct) -> dict:
    """Intersection pairing CH^i x CH^{d-i} -> CH^d = Z on monomial
    bases; nondegenerate in each degree iff the matrix is unimodular."""
    d = space.dimension
    per_degree = {}
    all_ok = True
    for i in range(d + 1):
        rows_basis = list(space.monomials(i))
        cols_basis = list(space.monomials(d - i))
        matrix = []
        for a in rows_basis:
            row = []
            for b in cols_basis:
                prod = chow_mul(monomial_class(space, a), monomial_class(space, b))
                row.append(degree(prod))
            matrix.append(row)
        square = len(rows_basis) == len(cols_basis)
        det = _int_det(matrix) if square else 0
        ok = square and det in (1, -1)
        all_ok = all_ok and ok
        per_degree[i] = {"matrix": matrix, "determinant": det, "nondegenerate": ok}
    return {"space": repr(space), "degrees": per_degree, "nondegenerate": all_ok}


def _int_det(matrix) -> int:
    n = len(matrix)
    if n == 0:
        return 1
    mat = [[Fraction(x) for x in row] for row in matrix]
    det = Fraction(1)
    for i in range(n):
        pivot = next((r for r in range(i, n) if mat[r][i] != 0), None)
        if pivot is None:
            return 0
        if pivot != i:
            mat[i], mat[pivot] = mat[pivot], mat[i]
            det = -det
        det *= mat[i][i]
        inv = mat[i][i]
        for r in range(i + 1, n):
            f = mat[r][i] / inv
            if f:
                mat[r] = [x - f * y for x, y in zip(mat[r], mat[i])]
    assert det.denominator == 1
    return int(det)


def rationalize(hom: dict) -> dict:
    """Tensor a hom-group basis with the rationals; the basis stays a
    basis because the group is free."""
    basis = [
        ChowClass.from_dict(cls.space, {m: Fraction(c) for m, c in cls.terms})
        for cls in hom["basis"]
    ]
    return {
        "rank": hom["rank"],
        "ambient_codim": hom["ambient_codim"],
        "basis": basis,
        "space": hom["space"],
        "coefficients": "Q",
    }


def parse_space(text: str) -> ProjSpaceProduct:
    """Parse labels like 'P2xP1' or 'pt' into a product of projective
    spaces."""
    text = text.strip()
    if text in ("pt", "point", ""):
        return POINT
    dims = []
    for part in text.split("x"):
        part = part.strip()
        if not part.startswith(("P", "p")) or not part[1:].isdigit():
            raise ValueError(f"cannot parse space factor {part!r}")
        dims.append(int(part[1:]))
    return ProjSpaceProduct(tuple(dims))
