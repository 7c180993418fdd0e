import itertools

import pytest

from ttspec.errors import (
    DegreeMismatch,
    FieldMismatch,
    NegativeDegree,
    NotInIdealPower,
    ZeroSymbolEntry,
)
from ttspec.finite_field import discrete_log, make_field, primitive_element
from ttspec import milnor_witt as mw
from ttspec import quadratic_forms as qf

QS = [3, 5, 7, 9]


def _field(q):
    return make_field(3, 2) if q == 9 else make_field(q)


# ------------------------------------------------------------- group shapes


@pytest.mark.parametrize("q", [3, 5, 7, 9, 11, 13])
def test_group_shapes(q):
    field = _field(q)
    for n in range(2, 7):
        assert mw.kmw_group(field, n).invariant_factors == ()
    assert mw.kmw_group(field, 1).invariant_factors == (q - 1,)
    assert mw.kmw_group(field, 0).invariant_factors == (0, 2)
    for n in range(-6, 0):
        want = (4,) if q % 4 == 3 else (2, 2)
        assert mw.kmw_group(field, n).invariant_factors == want


# -------------------------------------------- defining relations, rederived


@pytest.mark.parametrize("q", QS)
def test_steinberg_relation(q):
    field = _field(q)
    one = field.one()
    for a in field.units():
        if a == one:
            continue
        w = mw.word_symbol(a) * mw.word_symbol(one - a)
        assert mw.reduce_word(w) == {}


@pytest.mark.parametrize("q", QS)
def test_twisted_logarithm_relation(q):
    # [ab] = [a] + [b] + eta [a][b]
    field = _field(q)
    for a, b in itertools.product(field.units(), repeat=2):
        lhs = mw.word_symbol(a * b)
        rhs = mw.word_symbol(a) + mw.word_symbol(b) + mw.word_eta(field) * (
            mw.word_symbol(a) * mw.word_symbol(b)
        )
        assert mw.reduce_word(lhs) == mw.reduce_word(rhs)


@pytest.mark.parametrize("q", QS)
def test_eta_commutes_with_symbols(q):
    field = _field(q)
    for a in field.units():
        lhs = mw.word_eta(field) * mw.word_symbol(a)
        rhs = mw.word_symbol(a) * mw.word_eta(field)
        assert mw.reduce_word(lhs) == mw.reduce_word(rhs)


@pytest.mark.parametrize("q", QS)
def test_eta_h_relation(q):
    field = _field(q)
    assert mw.reduce_word(mw.word_eta(field) * mw.word_h(field)) == {}
    # equivalently (q+1) eta = 0 in canonical coordinates
    assert ((q + 1) * mw.eta(field)).is_zero()


@pytest.mark.parametrize("q", QS)
def test_epsilon_commutation(q):
    # [a][b] = eps [b][a] with eps = -<-1> = -1 - eta[-1]
    field = _field(q)
    eps = -mw.word_one(field) - mw.word_eta(field) * mw.word_symbol(-field.one())
    units = list(field.units())
    for a, b in itertools.product(units[:4], repeat=2):
        lhs = mw.word_symbol(a) * mw.word_symbol(b)
        rhs = eps * (mw.word_symbol(b) * mw.word_symbol(a))
        assert mw.reduce_word(lhs) == mw.reduce_word(rhs)


@pytest.mark.parametrize("q", QS)
def test_double_symbols_vanish(q):
    field = _field(q)
    units = list(field.units())
    for a, b in itertools.product(units[:5], repeat=2):
        assert mw.reduce_word(mw.word_symbol(a) * mw.word_symbol(b)) == {}


@pytest.mark.parametrize("q", QS)
def test_symbol_coordinates(q):
    field = _field(q)
    omega = primitive_element(field)
    for a in field.units():
        assert mw.symbol(a).coords == (discrete_log(a) % (q - 1),)
    for k in range(q - 1):
        assert mw.symbol(omega ** k).coords == (k,)


# ---------------------------------------------------- degree-0 ring = GW


@pytest.mark.parametrize("q", QS)
def test_degree_zero_is_gw(q):
    field = _field(q)
    classes = [
        mw.KmwElement(field, 0, (m, s)) for m in range(-2, 3) for s in range(2)
    ]
    for x, y in itertools.product(classes, repeat=2):
        gx, gy = mw.kmw_to_gw(x), mw.kmw_to_gw(y)
        assert mw.kmw_to_gw(x + y) == gx + gy
        assert mw.kmw_to_gw(mw.kmw_mul(x, y)) == gx * gy
        assert mw.gw_to_kmw(gx) == x
    # h corresponds to the hyperbolic form
    assert mw.gw_to_kmw(qf.hyperbolic_class(field)) == mw.hyperbolic_kmw(field)


@pytest.mark.parametrize("q", QS)
def test_unit_is_identity(q):
    field = _field(q)
    one = mw.kmw_one(field)
    for n in (-3, -1, 0, 1):
        for x in mw._kmw_elements_for_check(field, n):
            assert mw.kmw_mul(one, x) == x
            assert mw.kmw_mul(x, one) == x


# ------------------------------------- independent Witt model, degrees <= 0


@pytest.mark.parametrize("q", QS)
@pytest.mark.parametrize("n", [-1, -2, -3, -4])
def test_negative_degrees_match_witt_model(q, n):
    # w |-> (sum (1 + eta[a_i])) eta^(-n) is an additive bijection W -> K^MW_n
    field = _field(q)
    witt = qf.witt_elements(field)
    images = {w_cls: mw.from_fundamental_ideal(field, n, w_cls) for w_cls in witt}
    assert len({img.coords for img in images.values()}) == 4
    group = mw.kmw_group(field, n)
    assert len(list(group.elements())) == 4
    for w1, w2 in itertools.product(witt, repeat=2):
        assert images[qf.witt_class(
            w1.anisotropic_kernel.concat(w2.anisotropic_kernel)
        )] == images[w1] + images[w2]


@pytest.mark.parametrize("q", QS)
def test_negative_degree_multiplication_matches_witt(q):
    # the Witt-model identifications are multiplicative across degrees
    field = _field(q)
    witt = qf.witt_elements(field)
    for a, b in ((-1, -1), (-1, -2), (-2, -2)):
        for w1, w2 in itertools.product(witt, repeat=2):
            lhs = mw.kmw_mul(
                mw.from_fundamental_ideal(field, a, w1),
                mw.from_fundamental_ideal(field, b, w2),
            )
            rhs = mw.from_fundamental_ideal(field, a + b, w1 * w2)
            assert lhs == rhs


@pytest.mark.parametrize("q", QS)
def test_eta_powers_multiply(q):
    field = _field(q)
    for i, j in itertools.product(range(1, 5), repeat=2):
        assert mw.kmw_mul(mw.eta(field, i), mw.eta(field, j)) == mw.eta(field, i + j)


# ----------------------------------------------------------- exact sequence


@pytest.mark.parametrize("q", QS)
@pytest.mark.parametrize("n", range(-4, 5))
def test_verify_ses(q, n):
    report = mw.verify_ses(_field(q), n)
    assert report["ok"], report


def test_from_fundamental_ideal_membership():
    field = make_field(3)
    odd = qf.witt_one(field)  # rank 1, not in I
    with pytest.raises(NotInIdealPower):
        mw.from_fundamental_ideal(field, 0, odd)
    # the nonzero class of I maps to eta[w]
    pfister = qf.witt_class(qf.diagonal(field, [1, -2]))  # <1,-w> over F_3
    assert not pfister.is_zero()
    assert mw.from_fundamental_ideal(field, 0, pfister) == mw.KmwElement(field, 0, (0, 1))


# ------------------------------------------------------------------- milnor


@pytest.mark.parametrize("q", QS)
def test_milnor_quotient(q):
    field = _field(q)
    assert mw.milnor_group(field, 0).invariant_factors == (0,)
    assert mw.milnor_group(field, 1).invariant_factors == (q - 1,)
    assert mw.milnor_group(field, 2).invariant_factors == ()
    # degree 1 quotient map is an isomorphism onto F_q^*
    hit = {mw.to_milnor(mw.KmwElement(field, 1, (c,))).value for c in range(q - 1)}
    assert len(hit) == q - 1
    with pytest.raises(NegativeDegree):
        mw.to_milnor(mw.eta(field))


# ------------------------------------------------------------- localization


@pytest.mark.parametrize("q", QS)
def test_eta_power_nonzero(q):
    field = _field(q)
    for n in range(1, 65):
        assert mw.eta_power_nonzero(field, n)


@pytest.mark.parametrize("q", QS)
def test_localize_eta(q):
    field = _field(q)
    report = mw.localize_eta(field)
    assert report["four_is_zero"]
    assert report["two_is_zero"] == (q % 4 == 1)
    want = (2, 2) if q % 4 == 1 else (4,)
    for n, data in report["degreewise"].items():
        assert data["colimit_invariant_factors"] == want
        if n <= 1:
            assert data["stabilization_index"] == 1


def test_closure_table():
    table = mw.kmw_closure_table(3)
    assert table[0] == "Z"
    assert table[-1] == "Z/2"
    assert table[2] == "0"
    assert "F^*" in table[1]
    with pytest.raises(ValueError):
        mw.kmw_closure_table(2)


# ------------------------------------------------------ coordinate plumbing


def test_change_of_generator():
    field = make_field(5)
    omega = primitive_element(field)
    other = field.element(3)
    assert other != omega
    x = mw.symbol(field.element(2))
    new_coords = mw.change_of_generator(x, other)
    assert other ** new_coords[0] == omega ** x.coords[0]
    with pytest.raises(ValueError):
        mw.change_of_generator(x, field.element(4))  # 4 = -1 has order 2


def test_error_paths():
    f3, f5 = make_field(3), make_field(5)
    with pytest.raises(DegreeMismatch):
        mw.kmw_add(mw.eta(f3), mw.kmw_one(f3))
    with pytest.raises(FieldMismatch):
        mw.kmw_add(mw.kmw_one(f3), mw.kmw_one(f5))
    with pytest.raises(ZeroSymbolEntry):
        mw.symbol(f3.zero())
    with pytest.raises(ValueError):
        mw.kmw_group(f3, 100)


def test_scalar_multiples_and_order():
    field = make_field(3)
    e = mw.eta(field)
    assert (4 * e).is_zero()
    assert not (2 * e).is_zero()
    f5 = make_field(5)
    assert (2 * mw.eta(f5)).is_zero()
