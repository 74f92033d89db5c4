"""Tests for sequences, cuts, the differential, T-elements, relations."""

import itertools
from fractions import Fraction
from math import comb, factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cutcalc.bar import BarElement, bar_differential, shuffle_product
from cutcalc.cutdga import (
    AlgElement,
    CUT_OPS,
    RegPolynomial,
    Sequence,
    all_cuts,
    certify_regularization,
    coproduct_elementary_form,
    differential,
    elementary_cuts,
    is_zero_mod_ideal,
    parse_sequence,
    regularize,
    relation_ideal,
    relation_reduce,
    t_element,
    two_cuts,
)
from cutcalc.errors import AlphabetOverflow
from cutcalc.exact import rat, var

Z = var("z")
W = var("w")
ALPHA = (rat(0), rat(1), Z)
ENDS = (rat(0), rat(1), Z, W)

# distinct generic letters for letter-pattern-free statements
G = [var(f"g{i}") for i in range(8)]


def gen_seq(n, left=0, right=1):
    """A sequence with pairwise distinct generic entries."""
    return Sequence(G[left] if isinstance(left, int) else left,
                    G[2:2 + n],
                    G[right] if isinstance(right, int) else right)


def equality_patterns(n, alphabet=ALPHA, endpoints=ENDS):
    """One representative sequence per pattern of entry coincidences.

    Every cut/differential computation only ever compares entries for
    equality, so any check with a yes/no answer factors through this
    pattern.  Deduping keeps exhaustive sweeps cheap.
    """
    seen = set()
    reps = []
    for a0 in endpoints:
        for a1 in endpoints:
            for w in itertools.product(alphabet, repeat=n):
                entries = (a0,) + w + (a1,)
                ids = {}
                sig = tuple(ids.setdefault(x, len(ids)) for x in entries)
                if sig in seen:
                    continue
                seen.add(sig)
                reps.append(Sequence(a0, w, a1))
    return reps


# ---------------------------------------------------------------------------
# sequences and parsing


def test_parse_roundtrip():
    s = parse_sequence("0;1,0;z")
    assert s.left == rat(0)
    assert s.interior == (rat(1), rat(0))
    assert s.right == Z
    assert str(s) == "0;1,0;z"


def test_value_equality_ignores_support():
    a = Sequence(rat(0), (rat(1),), Z)
    b = Sequence(rat(0), (rat(1),), Z, support=(0, (7,), 9))
    assert a == b
    assert hash(a) == hash(b)


def test_degree_and_adams():
    s = gen_seq(3)
    assert s.degree == 1
    assert s.adams == 3
    assert s.n == 3


def test_vanishing_equal_basepoints():
    s = Sequence(G[0], (G[1],), G[0])
    assert s.is_vanishing()
    assert AlgElement.from_sequence(s).is_zero()


# ---------------------------------------------------------------------------
# cuts


def test_two_cuts_n1_empty():
    assert two_cuts(gen_seq(1)) == []


def test_two_cuts_n2():
    a0, a1, a2, a3 = G[0], G[2], G[3], G[1]
    s = Sequence(a0, (a1, a2), a3)
    got = [(k.entries(), e.entries()) for k, e in two_cuts(s)]
    want = [
        ((a0, a2, a3), (a0, a1, a2)),
        ((a0, a1, a3), (a1, a2, a3)),
    ]
    assert got == want


def test_two_cuts_count():
    # index pairs (i,j), 0 <= i < j <= n, minus the excluded (0,n)
    for n in range(1, 6):
        s = gen_seq(n)
        assert len(two_cuts(s)) == n * (n + 1) // 2 - 1


def test_all_cuts_counts():
    # frozen: 1, 3, 12 pinned by hand enumeration, and (n+1)!/2 overall
    # (the closed form was found empirically and double-checked at n <= 3
    # by exhaustive derivation-order enumeration with support dedup)
    want = {n: factorial(n + 1) // 2 for n in range(1, 6)}
    assert want[1] == 1 and want[2] == 3 and want[3] == 12
    for n in range(1, 6):
        assert len(all_cuts(gen_seq(n))) == want[n]


def test_all_cuts_dedup_no_duplicate_supports():
    for n in range(1, 5):
        cuts = all_cuts(gen_seq(n))
        keys = {tuple(p.support for p in c) for c in cuts}
        assert len(keys) == len(cuts)


def test_elementary_counts():
    # independent count: the interior pieces of an elementary cut are
    # disjoint consecutive runs, so choosing m runs means choosing 2m
    # cut points; the first piece keeps the rest.  Runs are then ordered
    # in all m! ways, except that a single run of length n (the full
    # interior, m=1 with both cut points at the ends) is the excluded
    # (0,n) two-cut.
    def count(n):
        total = 1  # the 1-cut
        for m in range(1, (n + 1) // 2 + 1):
            total += factorial(m) * (comb(n + 1, 2 * m) - (1 if m == 1 else 0))
        return total

    frozen = {1: 1, 2: 3, 3: 8, 4: 20, 5: 51}
    for n in range(1, 6):
        cuts = elementary_cuts(gen_seq(n))
        assert len(cuts) == frozen[n] == count(n)


def test_elementary_contained_in_all_cuts():
    for n in range(1, 5):
        s = gen_seq(n)
        all_keys = {tuple(p.support for p in c) for c in all_cuts(s)}
        for c in elementary_cuts(s):
            assert tuple(p.support for p in c) in all_keys


# ---------------------------------------------------------------------------
# differential


def test_differential_n1_zero():
    assert differential(gen_seq(1)).is_zero()


def test_differential_n2_exact():
    a0, a1, a2, a3 = G[0], G[2], G[3], G[1]
    s = Sequence(a0, (a1, a2), a3)
    want = AlgElement.from_terms(
        [
            (-1, (Sequence(a0, (a2,), a3), Sequence(a0, (a1,), a2))),
            (-1, (Sequence(a0, (a1,), a3), Sequence(a1, (a2,), a3))),
        ]
    )
    assert differential(s) == want


def test_d_squared_zero_patterns():
    for n in range(1, 5):
        for s in equality_patterns(n):
            assert differential(differential(s)).is_zero(), s


def test_d_squared_zero_generic_product():
    x = AlgElement.from_sequence(gen_seq(2)) * AlgElement.from_sequence(
        Sequence(G[0], (G[4], G[5], G[6]), G[1])
    )
    assert differential(differential(x)).is_zero()


def test_leibniz_on_products():
    a = AlgElement.from_sequence(gen_seq(2))
    b = AlgElement.from_sequence(Sequence(G[0], (G[4], G[5]), G[1]))
    lhs = differential(a * b)
    # both factors are degree 1: d(ab) = (da)b - a(db)
    rhs = differential(a) * b - a * differential(b)
    assert lhs == rhs


# ---------------------------------------------------------------------------
# T-elements


def test_t_element_n1():
    s = gen_seq(1)
    t = t_element(s)
    assert t.terms == {((), ((s,),)): Fraction(1)}


def test_t_element_n2_three_words():
    a0, a1, a2, a3 = G[0], G[2], G[3], G[1]
    s = Sequence(a0, (a1, a2), a3)
    t = t_element(s)
    words = sorted(
        tuple(tuple(str(g) for g in letter) for letter in word)
        for (_, word) in t.terms
    )
    assert len(words) == 3
    singles = [w for w in words if len(w) == 1]
    doubles = [w for w in words if len(w) == 2]
    assert len(singles) == 1 and len(doubles) == 2


def test_dT_zero_patterns_small():
    for n in range(1, 4):
        for s in equality_patterns(n):
            assert bar_differential(t_element(s)).is_zero(), s


def test_dT_zero_n4_spot():
    for s in [
        gen_seq(4),
        Sequence(rat(0), (rat(0), rat(1), rat(0), rat(1)), rat(1)),
        Sequence(Z, (Z, Z, Z, Z), W),
    ]:
        assert bar_differential(t_element(s)).is_zero()


def test_coproduct_formula_small():
    from cutcalc.bar import BarTensor, coproduct

    for n in range(1, 4):
        for s in equality_patterns(n):
            t = t_element(s)
            lhs = coproduct(t)
            rhs = coproduct_elementary_form(s)
            assert (lhs - rhs).is_zero(), s


# ---------------------------------------------------------------------------
# relation ideal


def test_relation_reduce_path_composition():
    a0, a1, a2, a3 = rat(0), rat(1), Z, W
    x = (
        AlgElement.from_sequence(Sequence(a0, (a1,), a2))
        + AlgElement.from_sequence(Sequence(a2, (a1,), a3))
        - AlgElement.from_sequence(Sequence(a0, (a1,), a3))
    )
    assert relation_reduce(x, ALPHA, ENDS).is_zero()


def test_relation_reduce_shuffle():
    a0, a3 = rat(0), W
    x = AlgElement.from_sequence(Sequence(a0, (rat(1), Z), a3)) + AlgElement.from_sequence(
        Sequence(a0, (Z, rat(1)), a3)
    )
    assert relation_reduce(x, ALPHA, ENDS).is_zero()


def test_relation_reduce_reversal():
    x = AlgElement.from_sequence(Sequence(rat(0), (rat(1),), Z)) + AlgElement.from_sequence(
        Sequence(Z, (rat(1),), rat(0))
    )
    assert relation_reduce(x, ALPHA, ENDS).is_zero()


def test_relation_reduce_diagonal_multiplicity():
    # the shuffle sum for u = v = (c) gives 2*(a;c,c;b), so the single
    # generator is itself in the span over the rationals
    assert is_zero_mod_ideal(Sequence(rat(0), (Z, Z), rat(1)), ALPHA, ENDS)


def test_relation_reduce_nonmember():
    x = AlgElement.from_sequence(Sequence(rat(0), (rat(1),), Z))
    red = relation_reduce(x, ALPHA, ENDS)
    assert not red.is_zero()


def test_relation_reduce_idempotent():
    x = AlgElement.from_sequence(Sequence(rat(0), (rat(0), rat(1)), rat(1)))
    once = relation_reduce(x, ALPHA, ENDS)
    twice = relation_reduce(once, ALPHA, ENDS)
    assert once == twice


def test_relation_reduce_alphabet_overflow():
    bad = Sequence(rat(0), (W,), rat(1))  # w is an endpoint, not a letter
    with pytest.raises(AlphabetOverflow):
        relation_reduce(bad, ALPHA, ENDS)
    bad2 = Sequence(var("q"), (rat(1),), rat(0))
    with pytest.raises(AlphabetOverflow):
        relation_reduce(bad2, ALPHA, ENDS)


def test_relation_ideal_differential_stable():
    ideal = relation_ideal(ALPHA, ENDS)
    for n in (1, 2, 3):
        for row in ideal.relation_rows(n):
            assert ideal.is_zero(differential(row)), row


# ---------------------------------------------------------------------------
# T-tilde identities (bar elements modulo the ideal, slot-wise)


def bar_one():
    return BarElement.unit_element(CUT_OPS)


def path_composition_residual(interior, b0, b1, b2):
    n = len(interior)
    total = BarElement.zero(CUT_OPS)
    for i in range(n + 1):
        lw, rw = interior[:i], interior[i:]
        lf = bar_one() if not lw else t_element(Sequence(b0, lw, b1))
        rf = bar_one() if not rw else t_element(Sequence(b1, rw, b2))
        total = total + shuffle_product(lf, rf)
    return total - t_element(Sequence(b0, interior, b2))


def test_ttilde_path_composition_n2():
    res = path_composition_residual((rat(1), Z), rat(0), W, rat(1))
    assert not res.is_zero()
    assert is_zero_mod_ideal(res, ALPHA, ENDS)


def test_ttilde_shuffle_small():
    u, v = (rat(1),), (Z,)
    lhs = shuffle_product(
        t_element(Sequence(rat(0), u, W)), t_element(Sequence(rat(0), v, W))
    )
    rhs = t_element(Sequence(rat(0), (rat(1), Z), W)) + t_element(
        Sequence(rat(0), (Z, rat(1)), W)
    )
    assert is_zero_mod_ideal(lhs - rhs, ALPHA, ENDS)


def test_ttilde_inversion_small():
    A = Sequence(rat(0), (rat(1), Z), W)
    diff = t_element(A) - t_element(A.reversed())  # (-1)^2 = +1
    assert is_zero_mod_ideal(diff, ALPHA, ENDS)
    B = Sequence(rat(0), (rat(1),), W)
    diff = t_element(B) + t_element(B.reversed())  # (-1)^1 = -1
    assert is_zero_mod_ideal(diff, ALPHA, ENDS)


# ---------------------------------------------------------------------------
# regularization


def test_regularize_convergent_passthrough():
    s = parse_sequence("0;1,0;1")
    assert regularize(s) == RegPolynomial.atom(s)


def test_regularize_constant_interior_power():
    a0, a1, b = rat(0), rat(1), Z
    s = Sequence(a0, (a1, a1), b)
    atom = Sequence(a0, (a1,), b)
    assert regularize(s) == RegPolynomial({(atom, atom): Fraction(1, 2)})


def test_regularize_frozen_example():
    s = parse_sequence("0;0,1;1")
    at_l = parse_sequence("0;0;1")
    at_r = parse_sequence("1;1;0")
    at_c = parse_sequence("0;1,0;1")
    key = tuple(sorted((at_l, at_r), key=lambda q: q.value_key()))
    want = RegPolynomial({key: Fraction(-1), (at_c,): Fraction(-1)})
    assert regularize(s) == want


def test_regularize_vanishing():
    s = Sequence(rat(0), (rat(1),), rat(0))
    assert regularize(s).is_zero()


def test_regularize_atoms_are_legal():
    # every atom is convergent or a left diagonal (b;b;c)
    for s in equality_patterns(3, alphabet=(rat(0), rat(1)), endpoints=(rat(0), rat(1))):
        for atom in regularize(s).atoms():
            if atom.n == 1 and atom.interior[0] == atom.left:
                continue  # divergent diagonal
            assert atom.interior[0] != atom.left
            assert atom.interior[-1] != atom.right


def test_regularize_certified_binary_n2():
    two = (rat(0), rat(1))
    for s in equality_patterns(2, alphabet=two, endpoints=two):
        assert certify_regularization(s, two, two), s


def test_regularize_certified_mixed_n3():
    for s in [
        parse_sequence("0;0,z,1;1"),
        parse_sequence("0;z,1,1;1"),
        parse_sequence("0;0,0,z;z"),
    ]:
        assert certify_regularization(s, ALPHA, ENDS), s


def test_regularize_power_identity_bar_level():
    # T~(a0;a1^n;b) = (1/n!) T~(a0;a1;b)^n as bar elements mod the ideal
    from cutcalc.bar import shuffle_power

    a0, a1, b = rat(0), Z, rat(1)
    single = t_element(Sequence(a0, (a1,), b))
    for n in (2, 3):
        lhs = t_element(Sequence(a0, (a1,) * n, b))
        rhs = shuffle_power(single, n).scale(Fraction(1, factorial(n)))
        assert is_zero_mod_ideal(lhs - rhs, ALPHA, ENDS), n


# ---------------------------------------------------------------------------
# property-based checks


@st.composite
def small_sequences(draw):
    n = draw(st.integers(min_value=1, max_value=3))
    pool = [rat(0), rat(1), Z, W]
    left = draw(st.sampled_from(pool))
    right = draw(st.sampled_from(pool))
    interior = tuple(draw(st.sampled_from(pool[:3])) for _ in range(n))
    return Sequence(left, interior, right)


@settings(max_examples=40, deadline=None)
@given(small_sequences())
def test_property_d_squared(s):
    assert differential(differential(s)).is_zero()


@settings(max_examples=25, deadline=None)
@given(small_sequences())
def test_property_dT(s):
    assert bar_differential(t_element(s)).is_zero()


@settings(max_examples=15, deadline=None)
@given(small_sequences())
def test_property_regularize_certifies(s):
    assert certify_regularization(s, ALPHA, ENDS)
