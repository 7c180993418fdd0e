"""Combinatorial tensor-triangular geometry on the semisimple Tate model.

Objects are finite sums of rational lines Q(i)[m] (twist i, shift m);
morphisms are slotwise rational matrices and every triangle splits, so
cones, duals and thick tensor ideals are exactly computable.  Within a
finite twist/shift window the only proper thick tensor ideal is zero,
which is also the unique prime.  The module also builds the finite
spectral spaces for the chromatic and equivariant posets, Thomason
subsets, lattice-level quotient/localization, and the comparison map
into the homogeneous spectrum of the degree-0 endomorphism ring.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import BoundExceeded, NotSpecializationClosed, ShapeMismatch, UniverseTooSmall


@dataclass(frozen=True)
class TateObject:
    """Finite sum of lines Q(i)[m] with multiplicities."""

    slots: tuple[tuple[tuple[int, int], int], ...]  # ((twist, shift), dim), sorted

    @staticmethod
    def from_dict(dims: dict) -> "TateObject":
        kept = {}
        for key, d in dims.items():
            if d < 0:
                raise ValueError("dimensions must be >= 0")
            if d:
                kept[tuple(key)] = kept.get(tuple(key), 0) + d
        return TateObject(tuple(sorted(kept.items())))

    def dims(self) -> dict:
        return dict(self.slots)

    def is_zero(self) -> bool:
        return not self.slots

    @property
    def support_lines(self) -> frozenset:
        return frozenset(k for k, _ in self.slots)

    def dim_at(self, key) -> int:
        return self.dims().get(tuple(key), 0)

    def shift_by(self, k: int) -> "TateObject":
        return TateObject.from_dict({(i, m + k): d for (i, m), d in self.slots})

    def twist_by(self, j: int) -> "TateObject":
        return TateObject.from_dict({(i + j, m): d for (i, m), d in self.slots})

    def direct_sum(self, other: "TateObject") -> "TateObject":
        out = self.dims()
        for k, d in other.slots:
            out[k] = out.get(k, 0) + d
        return TateObject.from_dict(out)

    def tensor(self, other: "TateObject") -> "TateObject":
        out = {}
        for (i1, m1), d1 in self.slots:
            for (i2, m2), d2 in other.slots:
                key = (i1 + i2, m1 + m2)
                out[key] = out.get(key, 0) + d1 * d2
        return TateObject.from_dict(out)

    def dual(self) -> "TateObject":
        return TateObject.from_dict({(-i, -m): d for (i, m), d in self.slots})

    def __repr__(self):
        if not self.slots:
            return "0"
        parts = []
        for (i, m), d in self.slots:
            base = f"Q({i})[{m}]"
            parts.append(base if d == 1 else f"{base}^{d}")
        return " + ".join(parts)


def tate_line(twist: int, shift: int = 0, dim: int = 1) -> TateObject:
    return TateObject.from_dict({(twist, shift): dim})


TATE_UNIT = tate_line(0, 0)


@dataclass(frozen=True)
class TateMorphism:
    """Slotwise rational matrices source -> target (rows = target dim)."""

    source: TateObject
    target: TateObject
    blocks: tuple[tuple[tuple[int, int], tuple[tuple[Fraction, ...], ...]], ...]

    @staticmethod
    def from_dict(source: TateObject, target: TateObject, blocks: dict) -> "TateMorphism":
        kept = {}
        for key, mat in blocks.items():
            key = tuple(key)
            rows = target.dim_at(key)
            cols = source.dim_at(key)
            mat = tuple(tuple(Fraction(x) for x in row) for row in mat)
            if len(mat) != rows or any(len(row) != cols for row in mat):
                raise ShapeMismatch(f"block at {key} must be {rows}x{cols}")
            if any(any(row) for row in mat):
                kept[key] = mat
        return TateMorphism(source, target, tuple(sorted(kept.items())))

    def block_at(self, key):
        for k, mat in self.blocks:
            if k == tuple(key):
                return mat
        rows = self.target.dim_at(key)
        cols = self.source.dim_at(key)
        return tuple((Fraction(0),) * cols for _ in range(rows))


def identity_morphism(a: TateObject) -> TateMorphism:
    blocks = {}
    for key, d in a.slots:
        blocks[key] = [[Fraction(int(i == j)) for j in range(d)] for i in range(d)]
    return TateMorphism.from_dict(a, a, blocks)


def zero_morphism(a: TateObject, b: TateObject) -> TateMorphism:
    return TateMorphism.from_dict(a, b, {})


def _matrix_rank(mat) -> int:
    rows = [list(r) for r in mat]
    rank = 0
    cols = len(rows[0]) if rows else 0
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = rows[r][c]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c] / inv
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
        rank += 1
    return rank


def cone(f: TateMorphism) -> TateObject:
    """ker(f)[1] + coker(f), slot by slot, by rank-nullity."""
    keys = {k for k, _ in f.source.slots} | {k for k, _ in f.target.slots}
    out = {}
    for key in keys:
        i, m = key
        src = f.source.dim_at(key)
        tgt = f.target.dim_at(key)
        rank = _matrix_rank(f.block_at(key)) if src and tgt else 0
        ker = src - rank
        coker = tgt - rank
        if ker:
            out[(i, m + 1)] = out.get((i, m + 1), 0) + ker
        if coker:
            out[(i, m)] = out.get((i, m), 0) + coker
    return TateObject.from_dict(out)


def duality_unit_check(a: TateObject) -> bool:
    """Verify the triangle identity: a -> a (x) Da (x) a -> a is the
    identity, with the coevaluation sum_j e_j (x) e_j* and the evaluation
    pairing written out on basis vectors."""
    for key, d in a.slots:
        # composite on the slot: e_k -> sum_j e_k (x) f_j (x) e_j -> sum_j <f_j, e_k> e_j
        composite = [[Fraction(0)] * d for _ in range(d)]
        for k in range(d):
            for j in range(d):
                pairing = Fraction(int(j == k))  # <f_j, e_k>
                composite[j][k] += pairing
        if composite != [[Fraction(int(i == j)) for j in range(d)] for i in range(d)]:
            return False
    return True


@dataclass(frozen=True)
class TateUniverse:
    """Truncation window: lines Q(i)[m] with |i| <= twist_radius and
    |m| <= shift_radius.  A negative radius gives the degenerate
    universe containing only the zero object."""

    twist_radius: int
    shift_radius: int

    def lines(self):
        if self.twist_radius < 0 or self.shift_radius < 0:
            return []
        return [
            (i, m)
            for i in range(-self.twist_radius, self.twist_radius + 1)
            for m in range(-self.shift_radius, self.shift_radius + 1)
        ]

    def contains(self, a: TateObject) -> bool:
        return a.support_lines <= frozenset(self.lines())


@dataclass(frozen=True)
class ThickTensorIdeal:
    """Thick tensor ideal of the windowed Tate model, recorded by the set
    of lines it contains (semisimplicity makes this complete data)."""

    universe: TateUniverse
    lines: frozenset

    def contains(self, a: TateObject) -> bool:
        return a.support_lines <= self.lines

    def is_proper(self) -> bool:
        return (0, 0) not in self.lines

    def __repr__(self):
        return "(0)" if not self.lines else f"ideal<{len(self.lines)} lines>"


def ideal_closure(generators, universe: TateUniverse) -> ThickTensorIdeal:
    """Least thick tensor ideal containing the generators.

    In a symmetric window any nonzero line reaches the unit by tensoring
    with its inverse line, so the closure is zero or everything; the
    computation below still runs the generic fixed point on line sets
    (shift by one, tensor by any universe line, summand extraction is
    implicit in working with lines).
    """
    window = frozenset(universe.lines())
    reached = set()
    for g in generators:
        if not universe.contains(g):
            raise UniverseTooSmall(f"{g} is outside the window")
        reached |= g.support_lines
    changed = True
    while changed:
        changed = False
        for (i, m), (j, k) in itertools.product(list(reached), [(0, 1), (0, -1)] + universe.lines()):
            key = (i + j, m + k)
            if key in window and key not in reached:
                reached.add(key)
                changed = True
    return ThickTensorIdeal(universe, frozenset(reached))


def object_closure(generators, universe: TateUniverse, summand_rule: bool = True, dim_cap: int = 1) -> frozenset:
    """Object-level closure in a tiny universe, used to demonstrate that
    the direct-summand rule matters.  Members are objects with support in
    the window and slot dimensions <= dim_cap; rules: shifts, tensoring by
    universe lines, cones of zero maps (direct sums), and, when enabled,
    direct summands.  Results leaving the window or the cap are dropped."""
    window = frozenset(universe.lines())

    def admissible(a: TateObject) -> bool:
        return a.support_lines <= window and all(d <= dim_cap for _, d in a.slots)

    members = {TateObject(())}
    for g in generators:
        if not universe.contains(g):
            raise UniverseTooSmall(f"{g} is outside the window")
        members.add(g)
    frontier = set(members)
    while frontier:
        nxt = set()
        for a in frontier:
            produced = [a.shift_by(1), a.shift_by(-1)]
            for line in window:
                produced.append(a.tensor(tate_line(*line)))
            for b in members:
                produced.append(a.direct_sum(b))
            if summand_rule:
                dims = a.dims()
                keys = list(dims)
                for pick in itertools.product(*[range(dims[k] + 1) for k in keys]):
                    produced.append(
                        TateObject.from_dict({k: d for k, d in zip(keys, pick)})
                    )
            for c in produced:
                if admissible(c) and c not in members:
                    nxt.add(c)
        members |= nxt
        frontier = nxt
    return frozenset(members)


def enumerate_primes(universe: TateUniverse) -> dict:
    """All prime thick tensor ideals of the windowed Tate model.

    Candidate ideals are closures of line subsets; a proper ideal P is
    prime when a (x) b in P forces a in P or b in P, checked over lines
    and two-line sums.  Returns the primes plus a diagnostic for the
    degenerate window without a unit."""
    window = universe.lines()
    if (0, 0) not in window:
        return {"primes": [], "diagnostic": "window has no unit object; no proper prime exists"}
    candidates = {ThickTensorIdeal(universe, frozenset())}
    for line in window:
        candidates.add(ideal_closure([tate_line(*line)], universe))
    primes = []
    samples = [TateObject(())] + [tate_line(*line) for line in window]
    samples += [
        tate_line(*p).direct_sum(tate_line(*q))
        for p, q in itertools.combinations(window, 2)
    ][:20]
    for cand in candidates:
        if not cand.is_proper():
            continue
        prime = True
        for a, b in itertools.product(samples, repeat=2):
            t = a.tensor(b)
            if not universe.contains(t):
                continue
            if cand.contains(t) and not cand.contains(a) and not cand.contains(b):
                prime = False
                break
        if prime:
            primes.append(cand)
    primes.sort(key=lambda p: sorted(p.lines))
    return {"primes": primes, "diagnostic": None}


def support(a: TateObject, primes) -> list[ThickTensorIdeal]:
    return [p for p in primes if not p.contains(a)]


def u_open(a: TateObject, primes) -> list[ThickTensorIdeal]:
    return [p for p in primes if p.contains(a)]


@dataclass(frozen=True)
class FiniteSpectralSpace:
    """Finite poset of points; (a, b) in specializes means b lies in the
    closure of a."""

    points: tuple[str, ...]
    specializes: frozenset  # transitive reflexive relation on labels

    @staticmethod
    def from_edges(points, edges) -> "FiniteSpectralSpace":
        points = tuple(points)
        rel = {(p, p) for p in points}
        rel |= {tuple(e) for e in edges}
        changed = True
        while changed:
            changed = False
            for (a, b), (c, d) in itertools.product(list(rel), repeat=2):
                if b == c and (a, d) not in rel:
                    rel.add((a, d))
                    changed = True
        return FiniteSpectralSpace(points, frozenset(rel))

    def closure(self, subset) -> set:
        subset = set(subset)
        return {b for a, b in self.specializes if a in subset}

    def generization(self, subset) -> set:
        subset = set(subset)
        return {a for a, b in self.specializes if b in subset}

    def is_closed(self, subset) -> bool:
        return self.closure(subset) == set(subset)

    def thomason_subsets(self, bound: int = 12) -> list[frozenset]:
        """All specialization-closed subsets, by brute force."""
        if len(self.points) > bound:
            raise BoundExceeded(f"{len(self.points)} points exceeds the bound {bound}")
        out = []
        for r in range(len(self.points) + 1):
            for combo in itertools.combinations(self.points, r):
                if self.is_closed(combo):
                    out.append(frozenset(combo))
        return out

    def subspace(self, subset) -> "FiniteSpectralSpace":
        subset = set(subset)
        pts = tuple(p for p in self.points if p in subset)
        rel = frozenset((a, b) for a, b in self.specializes if a in subset and b in subset)
        return FiniteSpectralSpace(pts, rel)

    def to_dot(self, name: str = "spc") -> str:
        lines = [f"digraph {name} {{"]
        for p in self.points:
            lines.append(f'  "{p}";')
        for a, b in sorted(self.specializes):
            if a != b and self._covers(a, b):
                lines.append(f'  "{a}" -> "{b}";')
        lines.append("}")
        return "\n".join(lines)

    def _covers(self, a, b) -> bool:
        for c in self.points:
            if c not in (a, b) and (a, c) in self.specializes and (c, b) in self.specializes:
                return False
        return True


def lattice_quotient(space: FiniteSpectralSpace, thomason) -> FiniteSpectralSpace:
    """Quotient by a Thomason subset: the open complement subspace."""
    thomason = set(thomason)
    if not space.is_closed(thomason):
        raise NotSpecializationClosed(f"{sorted(thomason)} is not specialization closed")
    return space.subspace(set(space.points) - thomason)


def lattice_localize(space: FiniteSpectralSpace, closed) -> FiniteSpectralSpace:
    """Localize at a closed subset: that subspace with the induced order."""
    closed = set(closed)
    if not space.is_closed(closed):
        raise NotSpecializationClosed(f"{sorted(closed)} is not closed")
    return space.subspace(closed)


def _int_primes_upto(bound: int) -> list[int]:
    out = []
    for n in range(2, bound + 1):
        if all(n % d for d in range(2, int(n ** 0.5) + 1)):
            out.append(n)
    return out


def chromatic_label(p, n) -> str:
    return f"P_{p},{n}"


def spc_shtop(prime_bound: int, height_bound: int) -> FiniteSpectralSpace:
    """Chromatic poset: generic point P_0,1, chains P_p,1 -> ... ->
    P_p,height -> P_p,inf for each prime p <= prime_bound."""
    if prime_bound < 1 or height_bound < 1:
        raise ValueError("bounds must be >= 1")
    generic = chromatic_label(0, 1)
    points = [generic]
    edges = []
    for p in _int_primes_upto(prime_bound):
        chain = [chromatic_label(p, n) for n in range(1, height_bound + 1)]
        chain.append(chromatic_label(p, "inf"))
        points.extend(chain)
        edges.append((generic, chain[0]))
        for a, b in zip(chain, chain[1:]):
            edges.append((a, b))
    return FiniteSpectralSpace.from_edges(points, edges)


def spc_equivariant(n: int, prime_bound: int, height_bound: int, extra_relations=()) -> FiniteSpectralSpace:
    """Equivariant poset for the cyclic group of order n: one chromatic
    copy per divisor of n, disjoint by default.  Cross-copy relations are
    not determined here; callers may supply extra specialization edges."""
    if n < 1:
        raise ValueError("n must be >= 1")
    divisors = [m for m in range(1, n + 1) if n % m == 0]
    base = spc_shtop(prime_bound, height_bound)
    points = []
    edges = []
    for m in divisors:
        points.extend(f"H{m}:{p}" for p in base.points)
        edges.extend(
            (f"H{m}:{a}", f"H{m}:{b}") for a, b in base.specializes if a != b
        )
    for a, b in extra_relations:
        if a not in points or b not in points:
            raise ValueError(f"unknown point in extra relation ({a}, {b})")
        edges.append((a, b))
    return FiniteSpectralSpace.from_edges(points, edges)


def graded_endomorphism_ring(universe: TateUniverse) -> dict:
    """The ring sum_n hom(1, u^n) for u = Q(1)[2]: Q in degree 0, zero
    elsewhere (the lines 1 and u^n differ for n != 0)."""
    degrees = {}
    for nn in range(-universe.twist_radius, universe.twist_radius + 1):
        degrees[nn] = "Q" if nn == 0 else "0"
    return {"unit": "Q", "degrees": degrees}


def rho_bullet(prime: ThickTensorIdeal) -> dict:
    """Image of a Tate-model prime in the homogeneous spectrum of the
    degree-0 endomorphism ring: the ideal generated by maps 1 -> u^n
    whose cone lies outside the prime.

    Nonzero scalars have zero cone (which lies in every ideal), so they
    never contribute; the zero maps in degrees n != 0 contribute only the
    zero element.  Every prime therefore lands on the zero ideal, the
    unique point of Spec^h(Q)."""
    contributing = []
    u = tate_line(1, 2)
    for nn in range(-prime.universe.twist_radius, prime.universe.twist_radius + 1):
        target = TATE_UNIT
        for _ in range(abs(nn)):
            target = target.tensor(u if nn > 0 else u.dual())
        if target == TATE_UNIT:
            # degree 0: generators are nonzero scalars, cone = 0 is in the prime
            scalar_cone = cone(identity_morphism(TATE_UNIT))
            if not prime.contains(scalar_cone):
                contributing.append(("scalar", nn))
        else:
            # only the zero map exists; its cone is target + 1[1], nonzero
            zero_cone = cone(zero_morphism(TATE_UNIT, target))
            if not prime.contains(zero_cone):
                pass  # the zero map generates only the zero element
    return {"ideal_generators": contributing, "point": "zero ideal"}


def verify_comparison(universe: TateUniverse) -> dict:
    """Check that the comparison-map preimage of each principal open
    D(s) equals U(Cone(s)), scanning the homogeneous elements of the
    graded endomorphism ring (rational scalars in degree 0, zero in every
    other degree)."""
    report = {"universe": (universe.twist_radius, universe.shift_radius), "cases": [], "ok": True}
    primes = enumerate_primes(universe)["primes"]
    u = tate_line(1, 2)
    scalars = [Fraction(0), Fraction(1), Fraction(2), Fraction(-3, 2)]
    for nn in range(-universe.twist_radius, universe.twist_radius + 1):
        target = TATE_UNIT
        for _ in range(abs(nn)):
            target = target.tensor(u if nn > 0 else u.dual())
        if not universe.contains(target):
            continue
        values = scalars if nn == 0 else [Fraction(0)]
        for s in values:
            f = TateMorphism.from_dict(TATE_UNIT, target, {} if s == 0 or nn != 0 else {(0, 0): [[s]]})
            c = cone(f)
            d_open = s != 0  # the single point of Spec^h(Q) lies in D(s) iff s != 0
            preimage = [p for p in primes if d_open]
            u_cone = u_open(c, primes)
            ok = sorted(map(repr, preimage)) == sorted(map(repr, u_cone))
            report["cases"].append({"degree": nn, "scalar": str(s), "ok": ok})
            report["ok"] = report["ok"] and ok
    return report


def nilpotence_dichotomy(f, max_power: int = 64) -> bool:
    """True when every tensor power of f is nonzero.

    Rational scalars on the Tate model are zero or invertible; graded
    elements from the Milnor-Witt model are powered up by the symbolic
    multiplication."""
    if isinstance(f, (int, Fraction)):
        return f != 0
    from .milnor_witt import kmw_mul

    power = f
    for _ in range(max_power - 1):
        if power.is_zero():
            return False
        power = kmw_mul(power, f)
    return not power.is_zero()
