"""Bar construction B(M, A) generic over a pluggable DGA.

Elements are Q-linear combinations of words m (x) [a1|...|ar].  The DGA
is supplied as an ops object; letters and module elements are opaque
hashable monomials that the ops object knows how to multiply and
differentiate.  Coefficients stay outside the monomials, so a letter
with a scalar sum never appears: sums split into separate words.

The ops contract:

* ``module_unit``: the unit module monomial (the empty word's module).
* ``commutative``: bool, whether shuffle products are allowed.
* ``letter_mul(a, b)``: None for zero, else (sign, monomial).
* ``letter_diff(a)``: list of (coeff, monomial); must stay inside the
  augmentation kernel.
* ``letter_degree(a)``: cohomological degree of a letter monomial.
* ``module_mul(m, a)``: module element times algebra letter; None for
  zero.  A trivial module returns None always, which is exactly the
  statement that the augmentation kills the kernel.
* ``module_diff(m)``, ``module_degree(m)``: same pattern on the module.

Degrees of words are deg(m) + sum(deg(a_i) - 1); an internal sign
operator J(a) = (-1)^(deg(a)-1) a shows up throughout the differential.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple

from .errors import NoncommutativeBase

_F0 = Fraction(0)
_F1 = Fraction(1)

TermKey = Tuple[object, tuple]  # (module monomial, tuple of letter monomials)


def _jsign(degree: int) -> int:
    return -1 if degree % 2 == 0 else 1


class BarElement:
    __slots__ = ("ops", "terms")

    def __init__(self, ops, terms: Optional[Dict[TermKey, Fraction]] = None):
        self.ops = ops
        self.terms = terms if terms is not None else {}

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(ops) -> "BarElement":
        return BarElement(ops)

    @staticmethod
    def unit_element(ops) -> "BarElement":
        return BarElement(ops, {(ops.module_unit, ()): _F1})

    @staticmethod
    def word(ops, letters: Iterable, coeff=1, module=None) -> "BarElement":
        letters = tuple(letters)
        module = ops.module_unit if module is None else module
        for a in letters:
            if a == ops.module_unit:
                raise ValueError("bar letters must lie in the augmentation kernel")
        c = Fraction(coeff)
        if not c:
            return BarElement(ops)
        return BarElement(ops, {(module, letters): c})

    # -- linear structure ----------------------------------------------------

    def _accumulate(self, key: TermKey, coeff: Fraction, into: dict) -> None:
        nv = into.get(key, _F0) + coeff
        if nv:
            into[key] = nv
        else:
            into.pop(key, None)

    def __add__(self, other: "BarElement") -> "BarElement":
        out = dict(self.terms)
        for key, c in other.terms.items():
            nv = out.get(key, _F0) + c
            if nv:
                out[key] = nv
            else:
                out.pop(key, None)
        return BarElement(self.ops, out)

    def __neg__(self) -> "BarElement":
        return BarElement(self.ops, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "BarElement") -> "BarElement":
        return self + (-other)

    def scale(self, coeff) -> "BarElement":
        c = Fraction(coeff)
        if not c:
            return BarElement(self.ops)
        return BarElement(self.ops, {k: c * v for k, v in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def counit(self) -> Fraction:
        """Coefficient of the empty word over the module unit."""
        return self.terms.get((self.ops.module_unit, ()), _F0)

    def term_degree(self, key: TermKey) -> int:
        m, word = key
        return self.ops.module_degree(m) + sum(
            self.ops.letter_degree(a) - 1 for a in word
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, BarElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        raise TypeError("BarElement is unhashable; compare by ==")

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        chunks = []
        for (m, word), c in sorted(
            self.terms.items(), key=lambda kv: (len(kv[0][1]), str(kv[0]))
        ):
            body = "|".join(str(a) for a in word)
            mod = "" if m == self.ops.module_unit else f"{m}."
            chunks.append(f"{c}*{mod}[{body}]")
        return " + ".join(chunks)

    __repr__ = __str__


# ---------------------------------------------------------------------------
# differentials


def d_ext(x: BarElement) -> BarElement:
    """External differential: differentiate the module and each slot."""
    ops = x.ops
    out: dict = {}
    acc = BarElement(ops, out)
    for (m, word), c in x.terms.items():
        for cd, md in ops.module_diff(m):
            acc._accumulate((md, word), c * Fraction(cd), out)
        sign = _jsign(ops.module_degree(m))
        for i, a in enumerate(word):
            for cd, ad in ops.letter_diff(a):
                key = (m, word[:i] + (ad,) + word[i + 1 :])
                acc._accumulate(key, c * sign * Fraction(cd), out)
            sign *= _jsign(ops.letter_degree(a))
    return acc


def d_int(x: BarElement) -> BarElement:
    """Internal differential: merge module|first-slot and adjacent slots."""
    ops = x.ops
    out: dict = {}
    acc = BarElement(ops, out)
    for (m, word), c in x.terms.items():
        if not word:
            continue
        jm = _jsign(ops.module_degree(m))
        hit = ops.module_mul(m, word[0])
        if hit is not None:
            sg, m2 = hit
            acc._accumulate((m2, word[1:]), c * jm * Fraction(sg), out)
        sign = jm
        for i in range(len(word) - 1):
            sign *= _jsign(ops.letter_degree(word[i]))
            merged = ops.letter_mul(word[i], word[i + 1])
            if merged is None:
                continue
            sg, ab = merged
            key = (m, word[:i] + (ab,) + word[i + 2 :])
            acc._accumulate(key, c * sign * Fraction(sg), out)
    return acc


def bar_differential(x: BarElement) -> BarElement:
    return d_ext(x) + d_int(x)


def is_cocycle(x: BarElement) -> Tuple[bool, BarElement]:
    """(flag, residual): residual is d(x), zero exactly when x is a cocycle."""
    res = bar_differential(x)
    return res.is_zero(), res


# ---------------------------------------------------------------------------
# coproduct (deconcatenation) and tensors


class BarTensor:
    """Linear combination of arity-fold tensors of bar terms."""

    __slots__ = ("ops", "arity", "terms")

    def __init__(self, ops, arity: int, terms: Optional[dict] = None):
        self.ops = ops
        self.arity = arity
        self.terms = terms if terms is not None else {}

    @staticmethod
    def tensor(*factors: BarElement) -> "BarTensor":
        """Plain outer product of bar elements (no Koszul signs)."""
        ops = factors[0].ops
        out = BarTensor(ops, len(factors))

        def rec(i, key_acc, coeff):
            if i == len(factors):
                out._add_term(tuple(key_acc), coeff)
                return
            for k, c in factors[i].terms.items():
                rec(i + 1, key_acc + [k], coeff * c)

        rec(0, [], _F1)
        return out

    def _add_term(self, key, coeff: Fraction) -> None:
        nv = self.terms.get(key, _F0) + coeff
        if nv:
            self.terms[key] = nv
        else:
            self.terms.pop(key, None)

    def __add__(self, other: "BarTensor") -> "BarTensor":
        if self.arity != other.arity:
            raise ValueError("tensor arities differ")
        out = BarTensor(self.ops, self.arity, dict(self.terms))
        for key, c in other.terms.items():
            out._add_term(key, c)
        return out

    def __sub__(self, other: "BarTensor") -> "BarTensor":
        return self + other.scale(-1)

    def scale(self, coeff) -> "BarTensor":
        c = Fraction(coeff)
        if not c:
            return BarTensor(self.ops, self.arity)
        return BarTensor(
            self.ops, self.arity, {k: c * v for k, v in self.terms.items()}
        )

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, BarTensor):
            return NotImplemented
        return self.arity == other.arity and self.terms == other.terms

    def __hash__(self):
        raise TypeError("BarTensor is unhashable; compare by ==")

    def apply_coproduct(self, slot: int) -> "BarTensor":
        """Deconcatenate one tensor slot, raising arity by one."""
        out = BarTensor(self.ops, self.arity + 1)
        unit = self.ops.module_unit
        for key, c in self.terms.items():
            m, word = key[slot]
            if m != unit:
                raise ValueError("coproduct needs a trivial module part")
            for i in range(len(word) + 1):
                new = key[:slot] + ((unit, word[:i]), (unit, word[i:])) + key[slot + 1 :]
                out._add_term(new, c)
        return out

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for key, c in self.terms.items():
            body = " (x) ".join("[" + "|".join(str(a) for a in w) + "]" for _, w in key)
            parts.append(f"{c}*{body}")
        return " + ".join(parts)

    __repr__ = __str__


def coproduct(x: BarElement) -> BarTensor:
    """Deconcatenation coproduct on module-trivial bar elements."""
    return BarTensor.tensor(x).apply_coproduct(0)


# ---------------------------------------------------------------------------
# shuffle product


def _shuffle_words(w1: tuple, w2: tuple, rdeg) -> List[Tuple[tuple, int]]:
    if not w1:
        return [(w2, 1)]
    if not w2:
        return [(w1, 1)]
    out = []
    for word, sign in _shuffle_words(w1[1:], w2, rdeg):
        out.append(((w1[0],) + word, sign))
    r2 = rdeg(w2[0])
    cross = sum(rdeg(a) for a in w1)
    flip = -1 if (r2 * cross) % 2 else 1
    for word, sign in _shuffle_words(w1, w2[1:], rdeg):
        out.append(((w2[0],) + word, sign * flip))
    return out


def shuffle_product(x: BarElement, y: BarElement) -> BarElement:
    """Signed shuffle product; letters weigh deg - 1."""
    ops = x.ops
    if not getattr(ops, "commutative", True):
        raise NoncommutativeBase("shuffle product over a noncommutative DGA")
    rdeg = lambda a: ops.letter_degree(a) - 1
    out: dict = {}
    acc = BarElement(ops, out)
    for (m1, w1), c1 in x.terms.items():
        if m1 != ops.module_unit:
            raise ValueError("shuffle products are implemented over the trivial module")
        for (m2, w2), c2 in y.terms.items():
            if m2 != ops.module_unit:
                raise ValueError(
                    "shuffle products are implemented over the trivial module"
                )
            for word, sign in _shuffle_words(w1, w2, rdeg):
                acc._accumulate((m1, word), c1 * c2 * sign, out)
    return acc


def shuffle_power(x: BarElement, k: int) -> BarElement:
    acc = BarElement.unit_element(x.ops)
    for _ in range(k):
        acc = shuffle_product(acc, x)
    return acc
