"""The combinatorial torsor of paths and its coaction.

Series live in the tensor algebra on letters X_s (s in a finite letter
set), truncated in Adams degree, with two basepoints in a possibly
larger endpoint set.  The coaction sends a word to a sum of
(shorter word) (x) (bar element over the cut DGA); the two available
forms (all cuts, or elementary cuts with T-factors) are checked to
agree rather than assumed.
"""

from __future__ import annotations

import itertools
import re
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .bar import BarElement, BarTensor, coproduct, shuffle_product
from .cutdga.algebra import (
    CUT_OPS,
    all_cuts,
    elementary_decompositions,
    t_element,
    t_product,
)
from .cutdga.sequences import Sequence, _coerce_entry
from .errors import EndpointMismatch, ParseError
from .exact import FieldElement

_F0 = Fraction(0)
_F1 = Fraction(1)

Word = Tuple[FieldElement, ...]


def parse_word(text: str) -> Word:
    """Parse a word literal: bracket form X[1]X[0] or a digit string."""
    text = text.strip()
    if not text:
        return ()
    if text.upper().startswith("X"):
        chunks = re.findall(r"[Xx]\[([^\]]*)\]", text)
        rebuilt = "".join(f"X[{c}]" for c in chunks)
        if re.sub(r"\s+", "", text).replace("x[", "X[") != rebuilt:
            raise ParseError(f"malformed word literal: {text!r}")
        from .exact import parse_field

        return tuple(parse_field(c) for c in chunks)
    if not text.isdigit():
        raise ParseError(f"malformed word literal: {text!r}")
    return tuple(_coerce_entry(int(ch)) for ch in text)


class NcSeries:
    """Truncated noncommutative series attached to a pair of basepoints."""

    __slots__ = ("left", "right", "depth", "terms")

    def __init__(self, left, right, depth: int = 4, terms=None):
        self.left = _coerce_entry(left)
        self.right = _coerce_entry(right)
        self.depth = int(depth)
        self.terms: Dict[Word, Fraction] = {}
        if terms:
            for word, c in terms.items():
                self._accumulate(tuple(word), Fraction(c))

    @staticmethod
    def unit(left, right, depth: int = 4) -> "NcSeries":
        return NcSeries(left, right, depth, {(): _F1})

    @staticmethod
    def word(left, right, letters, depth: int = 4, coeff=1) -> "NcSeries":
        w = tuple(_coerce_entry(x) for x in letters)
        return NcSeries(left, right, depth, {w: Fraction(coeff)})

    def _accumulate(self, word: Word, coeff: Fraction) -> None:
        if len(word) > self.depth or not coeff:
            return
        nv = self.terms.get(word, _F0) + coeff
        if nv:
            self.terms[word] = nv
        else:
            self.terms.pop(word, None)

    def __add__(self, other: "NcSeries") -> "NcSeries":
        if (self.left, self.right) != (other.left, other.right):
            raise EndpointMismatch("cannot add series with different basepoints")
        out = NcSeries(self.left, self.right, min(self.depth, other.depth))
        for word, c in self.terms.items():
            out._accumulate(word, c)
        for word, c in other.terms.items():
            out._accumulate(word, c)
        return out

    def scale(self, coeff) -> "NcSeries":
        c = Fraction(coeff)
        out = NcSeries(self.left, self.right, self.depth)
        if c:
            for word, v in self.terms.items():
                out.terms[word] = c * v
        return out

    def __sub__(self, other: "NcSeries") -> "NcSeries":
        return self + other.scale(-1)

    def is_zero(self) -> bool:
        return not self.terms

    def weight_components(self) -> Dict[int, "NcSeries"]:
        """Split by weight (2 per letter)."""
        out: Dict[int, NcSeries] = {}
        for word, c in self.terms.items():
            piece = out.setdefault(
                2 * len(word), NcSeries(self.left, self.right, self.depth)
            )
            piece.terms[word] = c
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, NcSeries):
            return NotImplemented
        return (
            (self.left, self.right) == (other.left, other.right)
            and self.terms == other.terms
        )

    def __hash__(self):
        raise TypeError("NcSeries is unhashable; compare by ==")

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        def render(word):
            return "".join(f"X[{x}]" for x in word) if word else "1"
        bits = []
        for word in sorted(self.terms, key=lambda w: (len(w), [x.sort_key() for x in w])):
            c = self.terms[word]
            bits.append(f"{c}*{render(word)}" if c != 1 else render(word))
        return " + ".join(bits)

    __repr__ = __str__


def path_compose(u: NcSeries, v: NcSeries) -> NcSeries:
    """Concatenation product along a shared middle basepoint."""
    if u.right != v.left:
        raise EndpointMismatch(
            f"cannot compose a path into {u.right} with a path from {v.left}"
        )
    out = NcSeries(u.left, v.right, min(u.depth, v.depth))
    for w1, c1 in u.terms.items():
        for w2, c2 in v.terms.items():
            out._accumulate(w1 + w2, c1 * c2)
    return out


# ---------------------------------------------------------------------------
# the coaction


class Coaction:
    """A sum of (word) (x) (bar element), the image of one coaction."""

    __slots__ = ("left", "right", "depth", "terms")

    def __init__(self, left, right, depth: int, terms=None):
        self.left = left
        self.right = right
        self.depth = depth
        self.terms: Dict[Word, BarElement] = terms if terms is not None else {}

    def _add(self, word: Word, bar: BarElement) -> None:
        if len(word) > self.depth:
            return
        cur = self.terms.get(word)
        new = bar if cur is None else cur + bar
        if new.is_zero():
            self.terms.pop(word, None)
        else:
            self.terms[word] = new

    def __add__(self, other: "Coaction") -> "Coaction":
        out = Coaction(self.left, self.right, min(self.depth, other.depth))
        for w, b in self.terms.items():
            out._add(w, b)
        for w, b in other.terms.items():
            out._add(w, b)
        return out

    def __sub__(self, other: "Coaction") -> "Coaction":
        neg = Coaction(other.left, other.right, other.depth)
        for w, b in other.terms.items():
            neg.terms[w] = b.scale(-1)
        return self + neg

    def is_zero(self) -> bool:
        return all(b.is_zero() for b in self.terms.values())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Coaction):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        raise TypeError("Coaction is unhashable; compare by ==")

    def map_bar(self, fn) -> "Coaction":
        """Apply fn to every bar factor (e.g. a slot-wise cycle map)."""
        out = Coaction(self.left, self.right, self.depth)
        for w, b in self.terms.items():
            out._add(w, fn(b))
        return out

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        def render(word):
            return "".join(f"X[{x}]" for x in word) if word else "1"
        bits = []
        for word in sorted(self.terms, key=lambda w: (len(w), [x.sort_key() for x in w])):
            bits.append(f"{render(word)} (x) ({self.terms[word]})")
        return " + ".join(bits)

    __repr__ = __str__


def coaction(
    word,
    left,
    right,
    depth: Optional[int] = None,
    form: str = "cuts",
    extended: bool = False,
) -> Coaction:
    """Coaction of one word: sum of X-prefix tensor bar remainder.

    form="cuts" keeps every cut's tail as a bar word; form="elementary"
    uses only elementary decompositions with shuffle T-factors.  Both
    must agree (a checked property, see comodule_check).

    extended=True adds the full-excision term 1 (x) T(A) that the cut
    enumeration forbids (a kept piece must keep something).  Path
    composition is a comodule morphism only for the extended coaction;
    see path_compatibility_check.
    """
    w = tuple(_coerce_entry(x) for x in word)
    a = _coerce_entry(left)
    b = _coerce_entry(right)
    n = len(w)
    if depth is None:
        depth = max(n, 4)
    out = Coaction(a, b, depth)
    if n == 0:
        out._add((), BarElement.unit_element(CUT_OPS))
        return out
    seq = Sequence(a, w, b)
    if form == "cuts":
        for cut in all_cuts(seq):
            first = cut[0]
            rest = cut[1:]
            if any(p.is_vanishing() for p in rest):
                continue
            bar = BarElement.word(CUT_OPS, tuple((p,) for p in rest))
            out._add(tuple(first.interior), bar)
    elif form == "elementary":
        out._add(w, BarElement.unit_element(CUT_OPS))
        for first, gaps in elementary_decompositions(seq):
            out._add(tuple(first.interior), t_product(gaps))
    else:
        raise ValueError(f"unknown coaction form: {form!r}")
    if extended:
        out._add((), t_element(seq))
    return out


def coact_series(series: NcSeries, form: str = "cuts", extended: bool = False) -> Coaction:
    """Linear extension of the coaction to a truncated series."""
    out = Coaction(series.left, series.right, series.depth)
    for word, c in series.terms.items():
        piece = coaction(word, series.left, series.right, series.depth, form, extended)
        for w, bar in piece.terms.items():
            out._add(w, bar.scale(c))
    return out


# ---------------------------------------------------------------------------
# comodule axioms


class ComodReport:
    """Outcome of a comodule-axiom sweep."""

    def __init__(self, passed: bool, checked: int, failures: List[str]):
        self.passed = passed
        self.checked = checked
        self.failures = failures

    def __bool__(self) -> bool:
        return self.passed

    def __str__(self) -> str:
        if self.passed:
            return f"pass ({self.checked} words)"
        head = "; ".join(self.failures[:3])
        return f"FAIL ({len(self.failures)} of {self.checked}): {head}"

    __repr__ = __str__


def _coassoc_residual(word, a, b, extended: bool = False) -> bool:
    """(id (x) coproduct) nu == (nu (x) id) nu on one word, exactly."""
    nu = coaction(word, a, b, extended=extended)
    lhs: Dict[Word, BarTensor] = {}
    for w1, bar in nu.terms.items():
        t = coproduct(bar)
        cur = lhs.get(w1)
        lhs[w1] = t if cur is None else cur + t
    rhs: Dict[Word, BarTensor] = {}
    for w1, bar in nu.terms.items():
        inner = coaction(w1, a, b, extended=extended)
        for w2, bar2 in inner.terms.items():
            t = BarTensor.tensor(bar2, bar)
            cur = rhs.get(w2)
            rhs[w2] = t if cur is None else cur + t
    for k in set(lhs) | set(rhs):
        l = lhs.get(k)
        r = rhs.get(k)
        if l is None:
            l, r = r, None
        if r is None:
            if not l.is_zero():
                return False
        elif not (l - r).is_zero():
            return False
    return True


def _counit_ok(word, a, b, extended: bool = False) -> bool:
    nu = coaction(word, a, b, extended=extended)
    total: Dict[Word, Fraction] = {}
    for w1, bar in nu.terms.items():
        c = bar.counit()
        if c:
            total[w1] = total.get(w1, _F0) + c
    w = tuple(_coerce_entry(x) for x in word)
    return total == {w: _F1}


def _forms_agree(word, a, b, extended: bool = False) -> bool:
    lhs = coaction(word, a, b, form="cuts", extended=extended)
    rhs = coaction(word, a, b, form="elementary", extended=extended)
    return lhs == rhs


def _grading_ok(word, a, b, extended: bool = False) -> bool:
    nu = coaction(word, a, b, extended=extended)
    n = len(word)
    for w1, bar in nu.terms.items():
        for (m, bw), _ in bar.terms.items():
            adams = sum(CUT_OPS.letter_adams(letter) for letter in bw)
            if len(w1) + adams != n:
                return False
    return True


def comodule_check(letters, endpoints, depth: int = 4, extended: bool = False) -> ComodReport:
    """Verify coassociativity, counit, form agreement, and grading.

    Runs over every word in the letters up to the given depth and every
    ordered pair of basepoints; stops collecting after a handful of
    failures but always reports the totals.
    """
    letters = [_coerce_entry(x) for x in letters]
    endpoints = [_coerce_entry(x) for x in endpoints]
    failures: List[str] = []
    checked = 0
    for n in range(0, depth + 1):
        for word in itertools.product(letters, repeat=n):
            for a in endpoints:
                for b in endpoints:
                    checked += 1
                    if not _counit_ok(word, a, b, extended):
                        failures.append(f"counit: {word} @ ({a},{b})")
                    elif not _forms_agree(word, a, b, extended):
                        failures.append(f"forms: {word} @ ({a},{b})")
                    elif not _grading_ok(word, a, b, extended):
                        failures.append(f"grading: {word} @ ({a},{b})")
                    elif not _coassoc_residual(word, a, b, extended):
                        failures.append(f"coassoc: {word} @ ({a},{b})")
                    if len(failures) > 8:
                        return ComodReport(False, checked, failures)
    return ComodReport(not failures, checked, failures)


def path_compatibility_check(word, a, b, c, alphabet, endpoints) -> bool:
    """Path composition intertwines the extended coactions, mod relations.

    Splitting the coaction output of a word over (a, c) at every
    position must match, slot by slot, the coactions of the input's own
    splits over (a, b) and (b, c) with bar parts multiplied:

        split(nu_ac(X_w)) == sum over w = u.v of nu_ab(X_u) * nu_bc(X_v)

    as maps into pairs-of-words (x) bar, comparing bar parts modulo the
    relation ideal.  The mixed slots close by the two-endpoint relation
    and the empty-kept slot by path composition of T-elements, so the
    full-excision terms are essential: the identity is false for the
    plain cut coaction.
    """
    from .cutdga.relations import is_zero_mod_ideal

    w = tuple(_coerce_entry(x) for x in word)
    a = _coerce_entry(a)
    b = _coerce_entry(b)
    c = _coerce_entry(c)
    n = len(w)
    lhs: Dict[Tuple[Word, Word], BarElement] = {}

    def bump(table, key, bar):
        cur = table.get(key)
        table[key] = bar if cur is None else cur + bar

    nu = coaction(w, a, c, extended=True)
    for out_word, bar in nu.terms.items():
        for i in range(len(out_word) + 1):
            bump(lhs, (out_word[:i], out_word[i:]), bar)
    rhs: Dict[Tuple[Word, Word], BarElement] = {}
    for i in range(n + 1):
        nu1 = coaction(w[:i], a, b, extended=True)
        nu2 = coaction(w[i:], b, c, extended=True)
        for w1, bar1 in nu1.terms.items():
            for w2, bar2 in nu2.terms.items():
                bump(rhs, (w1, w2), shuffle_product(bar1, bar2))
    for key in set(lhs) | set(rhs):
        l = lhs.get(key, BarElement.zero(CUT_OPS))
        r = rhs.get(key, BarElement.zero(CUT_OPS))
        if not is_zero_mod_ideal(l - r, alphabet, endpoints):
            return False
    return True


def motivic_coaction(word, theory, left, right, depth: Optional[int] = None):
    """Coaction followed by the cycle map on every bar slot.

    The theory must expose rho_bar(bar_element) mapping bar words over
    the cut DGA to bar words over cycles; the left factors stay words.
    """
    nu = coaction(word, left, right, depth)
    return nu.map_bar(theory.rho_bar)
