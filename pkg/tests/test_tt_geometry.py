import itertools
from fractions import Fraction

import pytest

from ttspec.errors import (
    BoundExceeded,
    NotSpecializationClosed,
    ShapeMismatch,
    UniverseTooSmall,
)
from ttspec.finite_field import make_field
from ttspec.milnor_witt import eta
from ttspec import tt_geometry as tg


# ------------------------------------------------------------ Tate objects


def test_object_algebra():
    a = tg.tate_line(1, 2)
    b = tg.tate_line(-1, -2)
    assert a.tensor(b) == tg.TATE_UNIT
    assert tg.tate_line(2, 1).dual() == tg.tate_line(-2, -1)
    assert a.shift_by(3) == tg.tate_line(1, 5)
    s = a.direct_sum(a)
    assert s.dim_at((1, 2)) == 2
    assert tg.TateObject(()).is_zero()


def test_cone_examples():
    unit = tg.TATE_UNIT
    assert tg.cone(tg.identity_morphism(unit)).is_zero()
    assert tg.cone(tg.zero_morphism(unit, unit)) == unit.direct_sum(unit.shift_by(1))
    two = tg.tate_line(0, 0, 2)
    f = tg.TateMorphism.from_dict(two, two, {(0, 0): [[1, 0], [0, 0]]})
    c = tg.cone(f)
    assert c.dim_at((0, 1)) == 1 and c.dim_at((0, 0)) == 1
    iso = tg.TateMorphism.from_dict(two, two, {(0, 0): [[1, 1], [0, 1]]})
    assert tg.cone(iso).is_zero()


def test_morphism_shape_validation():
    a = tg.tate_line(0, 0, 2)
    with pytest.raises(ShapeMismatch):
        tg.TateMorphism.from_dict(a, a, {(0, 0): [[1, 0]]})
    with pytest.raises(ShapeMismatch):
        tg.TateMorphism.from_dict(a, tg.TATE_UNIT, {(0, 0): [[1, 0], [0, 1]]})


def test_duality_unit_check():
    objects = [
        tg.TATE_UNIT,
        tg.tate_line(3, -1, 2),
        tg.tate_line(1, 0).direct_sum(tg.tate_line(-2, 2, 3)),
        tg.TateObject(()),
    ]
    for a in objects:
        assert tg.duality_unit_check(a)


# -------------------------------------------------------------- ideals


def test_ideal_closure_reaches_unit():
    universe = tg.TateUniverse(5, 1)
    ideal = tg.ideal_closure([tg.tate_line(5, 0)], universe)
    assert ideal.lines == frozenset(universe.lines())
    assert not ideal.is_proper()
    zero = tg.ideal_closure([tg.TateObject(())], universe)
    assert zero.lines == frozenset()
    assert zero.is_proper()


def test_ideal_closure_universe_guard():
    universe = tg.TateUniverse(2, 1)
    with pytest.raises(UniverseTooSmall):
        tg.ideal_closure([tg.tate_line(3, 0)], universe)


def test_summand_rule_matters():
    tiny = tg.TateUniverse(1, 1)
    gen = tg.tate_line(0, 0).direct_sum(tg.tate_line(1, 0))
    with_rule = tg.object_closure([gen], tiny, summand_rule=True)
    without_rule = tg.object_closure([gen], tiny, summand_rule=False)
    assert tg.tate_line(0, 0) in with_rule
    assert tg.tate_line(0, 0) not in without_rule
    # dropping the rule yields a closed set that is not thick
    assert without_rule < with_rule


def test_unique_prime():
    for radius in (1, 2, 4):
        found = tg.enumerate_primes(tg.TateUniverse(radius, 2))
        assert len(found["primes"]) == 1
        assert found["primes"][0].lines == frozenset()
        assert found["diagnostic"] is None


def test_degenerate_universe():
    found = tg.enumerate_primes(tg.TateUniverse(-1, -1))
    assert found["primes"] == []
    assert "unit" in found["diagnostic"]


def test_support_rules():
    universe = tg.TateUniverse(2, 1)
    primes = tg.enumerate_primes(universe)["primes"]
    lines = [tg.tate_line(*k) for k in universe.lines()]
    zero = tg.TateObject(())
    assert tg.support(zero, primes) == []
    assert len(tg.support(tg.TATE_UNIT, primes)) == 1
    for a, b in itertools.product(lines[:5], repeat=2):
        t = a.tensor(b)
        s = a.direct_sum(b)
        if universe.contains(t):
            assert set(map(id, tg.support(t, primes))) == set(
                map(id, tg.support(a, primes))
            ) & set(map(id, tg.support(b, primes)))
        assert set(map(id, tg.support(s, primes))) == set(
            map(id, tg.support(a, primes))
        ) | set(map(id, tg.support(b, primes)))
    for a in lines:
        assert tg.u_open(a, primes) == []  # nonzero objects avoid the zero ideal


# ----------------------------------------------------------- poset spaces


def test_spc_shtop_shape():
    space = tg.spc_shtop(3, 2)
    assert set(space.points) == {
        "P_0,1", "P_2,1", "P_2,2", "P_2,inf", "P_3,1", "P_3,2", "P_3,inf"
    }
    assert space.closure({"P_0,1"}) == set(space.points)
    assert space.closure({"P_2,1"}) == {"P_2,1", "P_2,2", "P_2,inf"}
    assert space.closure({"P_2,inf"}) == {"P_2,inf"}
    assert space.generization({"P_2,2"}) == {"P_0,1", "P_2,1", "P_2,2"}
    # closure operator axioms
    for subset in ({"P_2,1"}, {"P_3,2", "P_2,inf"}, set()):
        cl = space.closure(subset)
        assert subset <= cl
        assert space.closure(cl) == cl


def test_thomason_subsets_chain():
    chain = tg.spc_shtop(2, 1)  # P_0,1 -> P_2,1 -> P_2,inf
    subsets = chain.thomason_subsets()
    assert len(subsets) == 4
    assert frozenset() in subsets
    assert frozenset({"P_2,inf"}) in subsets
    assert frozenset({"P_2,1", "P_2,inf"}) in subsets
    assert frozenset(chain.points) in subsets


def test_thomason_counts_match_upset_bruteforce():
    for space in (tg.spc_shtop(2, 1), tg.spc_shtop(3, 2), tg.spc_shtop(2, 3)):
        subsets = space.thomason_subsets()
        brute = 0
        pts = list(space.points)
        for r in range(len(pts) + 1):
            for combo in itertools.combinations(pts, r):
                chosen = set(combo)
                if all(
                    b in chosen
                    for a in chosen
                    for x, b in space.specializes
                    if x == a
                ):
                    brute += 1
        assert len(subsets) == brute
        # lattice closure under union and intersection
        for y1, y2 in itertools.combinations(subsets[:8], 2):
            assert space.is_closed(y1 | y2)
            assert space.is_closed(y1 & y2)


def test_thomason_bound():
    space = tg.spc_shtop(7, 3)  # 17 points
    with pytest.raises(BoundExceeded):
        space.thomason_subsets()


def test_quotient_and_localize():
    space = tg.spc_shtop(3, 2)
    y = space.closure({"P_2,1"})
    quotient = tg.lattice_quotient(space, y)
    assert set(quotient.points) == set(space.points) - y
    assert tg.lattice_quotient(space, set()).points == space.points
    local = tg.lattice_localize(space, y)
    assert set(local.points) == y
    assert local.closure({"P_2,1"}) == y
    with pytest.raises(NotSpecializationClosed):
        tg.lattice_quotient(space, {"P_2,1"})
    with pytest.raises(NotSpecializationClosed):
        tg.lattice_localize(space, {"P_0,1"})


def test_localize_at_point_closure_is_chain():
    space = tg.spc_shtop(2, 2)
    z = space.closure({"P_2,1"})
    local = tg.lattice_localize(space, z)
    assert set(local.points) == {"P_2,1", "P_2,2", "P_2,inf"}


def test_spc_equivariant():
    one = tg.spc_equivariant(1, 2, 1)
    base = tg.spc_shtop(2, 1)
    assert len(one.points) == len(base.points)
    six = tg.spc_equivariant(6, 2, 1)
    assert len(six.points) == 4 * len(base.points)
    # copies are disjoint by default
    for a, b in six.specializes:
        assert a.split(":")[0] == b.split(":")[0]
    two = tg.spc_equivariant(2, 2, 1)
    assert len(two.points) == 2 * 3
    # user-supplied cross-copy relations are honored
    wired = tg.spc_equivariant(2, 2, 1, extra_relations=[("H1:P_2,inf", "H2:P_0,1")])
    assert "H2:P_2,inf" in wired.closure({"H1:P_2,inf"})
    with pytest.raises(ValueError):
        tg.spc_equivariant(2, 2, 1, extra_relations=[("H1:P_2,inf", "H9:P_0,1")])


def test_dot_output():
    space = tg.spc_shtop(2, 1)
    dot = space.to_dot()
    assert dot.startswith("digraph")
    assert '"P_0,1" -> "P_2,1"' in dot
    assert '"P_0,1" -> "P_2,inf"' not in dot  # only covering edges drawn


# ---------------------------------------------------------- comparison map


def test_graded_endomorphism_ring():
    ring = tg.graded_endomorphism_ring(tg.TateUniverse(3, 2))
    assert ring["unit"] == "Q"
    assert ring["degrees"][0] == "Q"
    assert all(v == "0" for n, v in ring["degrees"].items() if n != 0)


def test_rho_bullet_zero_prime():
    universe = tg.TateUniverse(3, 2)
    prime = tg.enumerate_primes(universe)["primes"][0]
    image = tg.rho_bullet(prime)
    assert image["point"] == "zero ideal"
    assert image["ideal_generators"] == []


def test_verify_comparison():
    report = tg.verify_comparison(tg.TateUniverse(3, 2))
    assert report["ok"]
    assert all(case["ok"] for case in report["cases"])
    degrees = {case["degree"] for case in report["cases"]}
    assert 0 in degrees and 1 in degrees


# ------------------------------------------------------------- nilpotence


def test_nilpotence_dichotomy():
    assert tg.nilpotence_dichotomy(Fraction(2))
    assert not tg.nilpotence_dichotomy(0)
    for q in (3, 5):
        field = make_field(q)
        assert tg.nilpotence_dichotomy(eta(field))
    # a genuinely nilpotent graded element dies
    from ttspec.milnor_witt import omega_symbol

    assert not tg.nilpotence_dichotomy(omega_symbol(make_field(3)))
