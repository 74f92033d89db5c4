"""Tests for the generic bar construction over the cut DGA."""

from fractions import Fraction

import pytest

from cutcalc.bar import (
    BarElement,
    BarTensor,
    bar_differential,
    coproduct,
    d_ext,
    d_int,
    is_cocycle,
    shuffle_power,
    shuffle_product,
)
from cutcalc.cutdga import CUT_OPS, Sequence, t_element
from cutcalc.errors import NoncommutativeBase
from cutcalc.exact import var

G = [var(f"g{i}") for i in range(8)]


def gen_seq(n, shift=2):
    return Sequence(G[0], G[shift:shift + n], G[1])


def word(letters, coeff=1):
    return BarElement.word(CUT_OPS, tuple((s,) for s in letters), coeff)


def test_letter_rejection():
    with pytest.raises(ValueError):
        BarElement.word(CUT_OPS, ((), (gen_seq(1),)))


def test_term_degrees_of_t_element():
    t = t_element(gen_seq(3))
    for key in t.terms:
        assert t.term_degree(key) == 0


def test_bar_differential_squares_to_zero_on_words():
    cases = [
        word([gen_seq(2)]),
        word([gen_seq(2), Sequence(G[0], (G[4], G[5]), G[1])]),
        word([gen_seq(1), Sequence(G[2], (G[5], G[6], G[7]), G[3])]),
    ]
    for x in cases:
        assert bar_differential(bar_differential(x)).is_zero()


def test_d_ext_d_int_anticommute():
    # d_ext^2 = 0, d_int^2 = 0, and the cross terms cancel
    x = word([gen_seq(2), Sequence(G[1], (G[5], G[6]), G[4])])
    assert d_ext(d_ext(x)).is_zero()
    assert d_int(d_int(x)).is_zero()
    cross = d_ext(d_int(x)) + d_int(d_ext(x))
    assert cross.is_zero()


def test_is_cocycle_on_t_and_not_on_bare_word():
    ok, res = is_cocycle(t_element(gen_seq(3)))
    assert ok and res.is_zero()
    bad = word([gen_seq(2)])
    ok, res = is_cocycle(bad)
    assert not ok
    assert res == bar_differential(bad)


def test_coproduct_spec_shape_n2():
    a0, a1, a2, a3 = G[0], G[2], G[3], G[1]
    s = Sequence(a0, (a1, a2), a3)
    t = t_element(s)
    delta = coproduct(t)
    unit = BarElement.unit_element(CUT_OPS)
    want = (
        BarTensor.tensor(unit, t)
        + BarTensor.tensor(t, unit)
        + BarTensor.tensor(
            t_element(Sequence(a0, (a2,), a3)), t_element(Sequence(a0, (a1,), a2))
        )
        + BarTensor.tensor(
            t_element(Sequence(a0, (a1,), a3)), t_element(Sequence(a1, (a2,), a3))
        )
    )
    assert delta == want


def test_coproduct_counit_axiom():
    for n in (1, 2, 3):
        t = t_element(gen_seq(n))
        delta = coproduct(t)
        # contract the left slot with the counit
        left = BarElement.zero(CUT_OPS)
        right = BarElement.zero(CUT_OPS)
        unit = CUT_OPS.module_unit
        for ((m1, w1), (m2, w2)), c in delta.terms.items():
            if not w1:
                left = left + BarElement(CUT_OPS, {(m2, w2): c})
            if not w2:
                right = right + BarElement(CUT_OPS, {(m1, w1): c})
        assert left == t
        assert right == t


def test_coproduct_coassociative():
    for n in (1, 2, 3):
        t = t_element(gen_seq(n))
        d1 = BarTensor.tensor(t).apply_coproduct(0)
        lhs = d1.apply_coproduct(0)
        rhs = d1.apply_coproduct(1)
        assert lhs == rhs


def tensor_shuffle(a: BarTensor, b: BarTensor) -> BarTensor:
    """Slot-wise shuffle of two tensors of degree-0 elements (no signs)."""
    assert a.arity == b.arity
    out = BarTensor(a.ops, a.arity)
    for k1, c1 in a.terms.items():
        for k2, c2 in b.terms.items():
            factors = [
                shuffle_product(
                    BarElement(a.ops, {k1[i]: Fraction(1)}),
                    BarElement(a.ops, {k2[i]: Fraction(1)}),
                )
                for i in range(a.arity)
            ]
            prod = BarTensor.tensor(*factors).scale(c1 * c2)
            out = out + prod
    return out


def test_coproduct_is_algebra_morphism_on_t_elements():
    x = t_element(gen_seq(1))
    y = t_element(Sequence(G[0], (G[4], G[5]), G[1]))
    lhs = coproduct(shuffle_product(x, y))
    rhs = tensor_shuffle(coproduct(x), coproduct(y))
    assert lhs == rhs


def test_shuffle_commutative_on_even_elements():
    x = t_element(gen_seq(2))
    y = t_element(Sequence(G[0], (G[4],), G[1]))
    assert shuffle_product(x, y) == shuffle_product(y, x)


def test_shuffle_associative():
    x = t_element(gen_seq(1))
    y = t_element(Sequence(G[0], (G[4],), G[1]))
    z = t_element(Sequence(G[0], (G[5],), G[1]))
    lhs = shuffle_product(shuffle_product(x, y), z)
    rhs = shuffle_product(x, shuffle_product(y, z))
    assert lhs == rhs


def test_shuffle_unit():
    x = t_element(gen_seq(2))
    one = BarElement.unit_element(CUT_OPS)
    assert shuffle_product(one, x) == x
    assert shuffle_product(x, one) == x


def test_shuffle_power_matches_iterated_product():
    x = t_element(gen_seq(1))
    assert shuffle_power(x, 3) == shuffle_product(shuffle_product(x, x), x)


def test_shuffle_word_count():
    # two single-letter words shuffle into both interleavings
    a = word([gen_seq(1)])
    b = word([Sequence(G[0], (G[5],), G[1])])
    prod = shuffle_product(a, b)
    assert len(prod.terms) == 2
    assert all(c == 1 for c in prod.terms.values())


class _NoncommutativeOps:
    module_unit = ()
    commutative = False

    @staticmethod
    def letter_degree(a):
        return 1


def test_shuffle_rejects_noncommutative_base():
    ops = _NoncommutativeOps()
    x = BarElement(ops, {((), (("a",),)): Fraction(1)})
    with pytest.raises(NoncommutativeBase):
        shuffle_product(x, x)


def test_dT_arbitrates_signs_n4():
    # the full d_ext + d_int cancellation on a generic weight-4 element
    t = t_element(Sequence(G[0], (G[2], G[3], G[4], G[5]), G[1]))
    assert bar_differential(t).is_zero()
