"""The quotient algebra's relation ideal and shuffle regularization.

The quotient is presented by Q-linear relations among same-weight
generators: path composition, shuffle sums, reversal, and the vanishing
of equal-basepoint generators.  The quotient itself is never
materialized; a projection V -> V is computed per weight by exact row
reduction, and reduction of products or bar words applies it slot-wise.

Regularization rewrites any T-tilde class as a polynomial in convergent
generators and the divergent diagonals (b;b;c), following the shuffle
induction on the lengths of the divergent end runs.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import factorial
from typing import Dict, List, Optional, Tuple

from ..bar import BarElement, shuffle_product
from ..errors import AlphabetOverflow
from ..exact import LinearSpan
from .algebra import CUT_OPS, AlgElement, normalize_monomial, t_element
from .sequences import Sequence, _coerce_entry

_F0 = Fraction(0)
_F1 = Fraction(1)


def _shuffle_position_sets(n: int, p: int):
    """Index subsets placing the first block inside a length-n word."""
    return itertools.combinations(range(n), p)


class RelationIdeal:
    """Per-weight relation spans over a fixed alphabet and endpoint set."""

    def __init__(self, alphabet, endpoints):
        alpha = [_coerce_entry(x) for x in alphabet]
        ends = [_coerce_entry(x) for x in endpoints]
        self.alphabet = tuple(sorted(set(alpha), key=lambda f: f.sort_key()))
        self.endpoints = tuple(sorted(set(ends), key=lambda f: f.sort_key()))
        self._alpha_set = set(self.alphabet)
        self._end_set = set(self.endpoints)
        self._spans: Dict[int, LinearSpan] = {}
        self._reps: Dict[object, Sequence] = {}
        self._proj: Dict[object, List[Tuple[Fraction, Sequence]]] = {}

    # -- membership -----------------------------------------------------

    def _check(self, seq: Sequence) -> None:
        if seq.left not in self._end_set or seq.right not in self._end_set:
            raise AlphabetOverflow(
                f"basepoints of ({seq}) are outside the endpoint set"
            )
        for x in seq.interior:
            if x not in self._alpha_set:
                raise AlphabetOverflow(
                    f"interior entry {x} of ({seq}) is outside the alphabet"
                )

    # -- span construction ------------------------------------------------

    def _span(self, n: int) -> LinearSpan:
        span = self._spans.get(n)
        if span is not None:
            return span
        span = LinearSpan()
        words = list(itertools.product(self.alphabet, repeat=n))
        label_of = {}
        for a0 in self.endpoints:
            for a1 in self.endpoints:
                for w in words:
                    seq = Sequence(a0, w, a1)
                    lbl = seq.value_key()
                    label_of[(a0, w, a1)] = lbl
                    self._reps.setdefault(lbl, seq)
        # vanishing: equal basepoints
        for a0 in self.endpoints:
            for w in words:
                span.add({label_of[(a0, w, a0)]: _F1})
        # reversal: A - (-1)^n rev(A)
        rev_coeff = _F1 if n % 2 else -_F1
        for a0 in self.endpoints:
            for a1 in self.endpoints:
                for w in words:
                    row = {label_of[(a0, w, a1)]: _F1}
                    rev = label_of[(a1, tuple(reversed(w)), a0)]
                    row[rev] = row.get(rev, _F0) + rev_coeff
                    span.add({k: v for k, v in row.items() if v})
        # shuffle sums
        for p in range(1, n):
            q = n - p
            for u in itertools.product(self.alphabet, repeat=p):
                for v in itertools.product(self.alphabet, repeat=q):
                    for a0 in self.endpoints:
                        for a1 in self.endpoints:
                            row: dict = {}
                            for pos in _shuffle_position_sets(n, p):
                                word = [None] * n
                                ui = iter(u)
                                vi = iter(v)
                                posset = set(pos)
                                for k in range(n):
                                    word[k] = next(ui) if k in posset else next(vi)
                                lbl = label_of[(a0, tuple(word), a1)]
                                row[lbl] = row.get(lbl, _F0) + _F1
                            span.add(row)
        # path composition
        for a0 in self.endpoints:
            for a1 in self.endpoints:
                for a2 in self.endpoints:
                    for w in words:
                        row: dict = {}
                        for lbl, c in (
                            (label_of[(a0, w, a1)], _F1),
                            (label_of[(a1, w, a2)], _F1),
                            (label_of[(a0, w, a2)], -_F1),
                        ):
                            row[lbl] = row.get(lbl, _F0) + c
                        span.add({k: v for k, v in row.items() if v})
        self._spans[n] = span
        return span

    def relation_rows(self, n: int):
        """Generators of the weight-n relation space, for stability checks."""
        rows: List[AlgElement] = []
        words = list(itertools.product(self.alphabet, repeat=n))
        for a0 in self.endpoints:
            for w in words:
                rows.append(AlgElement.from_terms([(1, (Sequence(a0, w, a0),))]))
        sign = -1 if n % 2 == 0 else 1
        for a0 in self.endpoints:
            for a1 in self.endpoints:
                for w in words:
                    rows.append(
                        AlgElement.from_terms(
                            [
                                (1, (Sequence(a0, w, a1),)),
                                (sign, (Sequence(a1, tuple(reversed(w)), a0),)),
                            ]
                        )
                    )
        for p in range(1, n):
            for u in itertools.product(self.alphabet, repeat=p):
                for v in itertools.product(self.alphabet, repeat=n - p):
                    for a0 in self.endpoints:
                        for a1 in self.endpoints:
                            pairs = []
                            for pos in _shuffle_position_sets(n, p):
                                word = [None] * n
                                ui, vi = iter(u), iter(v)
                                posset = set(pos)
                                for k in range(n):
                                    word[k] = next(ui) if k in posset else next(vi)
                                pairs.append((1, (Sequence(a0, word, a1),)))
                            rows.append(AlgElement.from_terms(pairs))
        for a0 in self.endpoints:
            for a1 in self.endpoints:
                for a2 in self.endpoints:
                    for w in words:
                        rows.append(
                            AlgElement.from_terms(
                                [
                                    (1, (Sequence(a0, w, a1),)),
                                    (1, (Sequence(a1, w, a2),)),
                                    (-1, (Sequence(a0, w, a2),)),
                                ]
                            )
                        )
        return rows

    # -- projection -----------------------------------------------------

    def project(self, seq: Sequence) -> List[Tuple[Fraction, Sequence]]:
        """Canonical image of a generator modulo the relation span."""
        self._check(seq)
        lbl = seq.value_key()
        cached = self._proj.get(lbl)
        if cached is not None:
            return cached
        span = self._span(seq.n)
        residual = span.reduce({lbl: _F1})
        out = [
            (c, self._reps[l]) for l, c in sorted(residual.items())
        ]
        self._proj[lbl] = out
        return out

    def _project_mono(self, mono) -> List[Tuple[Fraction, tuple]]:
        """Slot-wise projection of a product monomial, expanded."""
        out: List[Tuple[Fraction, tuple]] = [(_F1, ())]
        for g in mono:
            img = self.project(g)
            new = []
            for c0, partial in out:
                for c1, rep in img:
                    new.append((c0 * c1, partial + (rep,)))
            out = new
        collected: Dict[tuple, Fraction] = {}
        for c, raw in out:
            norm = normalize_monomial(raw)
            if norm is None:
                continue
            sg, mm = norm
            nv = collected.get(mm, _F0) + c * sg
            if nv:
                collected[mm] = nv
            else:
                collected.pop(mm, None)
        return [(c, m) for m, c in collected.items()]

    # -- reduction ------------------------------------------------------

    def reduce(self, x):
        if isinstance(x, Sequence):
            x = AlgElement.from_sequence(x)
        if isinstance(x, AlgElement):
            out = AlgElement()
            for mono, c in x.terms.items():
                for cc, mm in self._project_mono(mono):
                    out._accumulate(mm, c * cc)
            return out
        if isinstance(x, BarElement):
            terms: dict = {}
            for (m, word), c in x.terms.items():
                expanded = [(c, ())]
                for letter in word:
                    img = self._project_mono(letter)
                    expanded = [
                        (c0 * c1, w + (mm,))
                        for c0, w in expanded
                        for c1, mm in img
                    ]
                for cc, w in expanded:
                    key = (m, w)
                    nv = terms.get(key, _F0) + cc
                    if nv:
                        terms[key] = nv
                    else:
                        terms.pop(key, None)
            return BarElement(x.ops, terms)
        raise TypeError(f"cannot reduce {type(x)!r} against the relation ideal")

    def is_zero(self, x) -> bool:
        return self.reduce(x).is_zero()


_IDEAL_CACHE: dict = {}


def relation_ideal(alphabet, endpoints) -> RelationIdeal:
    ideal = RelationIdeal(alphabet, endpoints)
    key = (ideal.alphabet, ideal.endpoints)
    return _IDEAL_CACHE.setdefault(key, ideal)


def relation_reduce(x, alphabet, endpoints):
    """Canonical form of x modulo the relation ideal (zero iff member)."""
    return relation_ideal(alphabet, endpoints).reduce(x)


def is_zero_mod_ideal(x, alphabet, endpoints) -> bool:
    return relation_ideal(alphabet, endpoints).is_zero(x)


# ---------------------------------------------------------------------------
# regularization


class RegPolynomial:
    """Commutative polynomial in T-tilde atoms.

    An atom is a convergent generator or a divergent diagonal (b;b;c).
    Monomials are sorted tuples of atoms with repetition (the atoms have
    degree zero, so no signs and no square-vanishing).
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[tuple, Fraction]] = None):
        self.terms = terms if terms is not None else {}

    @staticmethod
    def zero() -> "RegPolynomial":
        return RegPolynomial()

    @staticmethod
    def one() -> "RegPolynomial":
        return RegPolynomial({(): _F1})

    @staticmethod
    def atom(seq: Sequence) -> "RegPolynomial":
        return RegPolynomial({(seq,): _F1})

    @staticmethod
    def _sorted(mono) -> tuple:
        return tuple(sorted(mono, key=lambda s: s.value_key()))

    def _accumulate(self, mono: tuple, coeff: Fraction) -> None:
        nv = self.terms.get(mono, _F0) + coeff
        if nv:
            self.terms[mono] = nv
        else:
            self.terms.pop(mono, None)

    def __add__(self, other: "RegPolynomial") -> "RegPolynomial":
        out = RegPolynomial(dict(self.terms))
        for mono, c in other.terms.items():
            out._accumulate(mono, c)
        return out

    def __sub__(self, other: "RegPolynomial") -> "RegPolynomial":
        return self + other.scale(-1)

    def __mul__(self, other: "RegPolynomial") -> "RegPolynomial":
        out = RegPolynomial()
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                out._accumulate(self._sorted(m1 + m2), c1 * c2)
        return out

    def scale(self, coeff) -> "RegPolynomial":
        c = Fraction(coeff)
        if not c:
            return RegPolynomial()
        return RegPolynomial({m: c * v for m, v in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def atoms(self) -> set:
        out = set()
        for mono in self.terms:
            out.update(mono)
        return out

    def map_atoms(self, fn):
        """Evaluate by sending every atom through fn into a commutative ring."""
        total = None
        for mono, c in self.terms.items():
            acc = None
            for atom in mono:
                val = fn(atom)
                acc = val if acc is None else acc * val
            term = c if acc is None else acc * c
            total = term if total is None else total + term
        return total

    def to_bar(self) -> BarElement:
        """Expand atoms to T-elements and multiply out (shuffle product)."""
        out = BarElement.zero(CUT_OPS)
        for mono, c in self.terms.items():
            acc = BarElement.unit_element(CUT_OPS)
            for atom in mono:
                acc = shuffle_product(acc, t_element(atom))
            out = out + acc.scale(c)
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, RegPolynomial):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        raise TypeError("RegPolynomial is unhashable; compare by ==")

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        chunks = []
        for mono, c in sorted(
            self.terms.items(), key=lambda kv: tuple(s.value_key() for s in kv[0])
        ):
            body = "*".join(f"T~({s})" for s in mono) or "1"
            chunks.append(f"{c}*{body}")
        return " + ".join(chunks)

    __repr__ = __str__


_REG_MEMO: Dict[Sequence, RegPolynomial] = {}


def _block_shuffle_words(blocks) -> List[tuple]:
    """All interleavings of the blocks (orders preserved).

    Each choice of positions is listed separately, so value-equal words
    appear with their multiplicity.  Depth-first with block 0 preferred,
    hence the plain concatenation is always the first entry.
    """
    n = sum(len(b) for b in blocks)
    out: List[tuple] = []

    def rec(remaining, acc):
        if len(acc) == n:
            out.append(tuple(acc))
            return
        for bi in range(len(blocks)):
            if remaining[bi] < len(blocks[bi]):
                acc.append(blocks[bi][remaining[bi]])
                remaining[bi] += 1
                rec(remaining, acc)
                remaining[bi] -= 1
                acc.pop()

    rec([0] * len(blocks), [])
    return out


def regularize(seq: Sequence) -> RegPolynomial:
    """Rewrite T-tilde of the sequence as a polynomial in atoms.

    Atoms are convergent generators plus the divergent diagonals
    (b;b;c).  Convergent input passes through; a constant interior
    becomes a divided power; otherwise the maximal divergent prefix is
    split off with the shuffle identity, recursing on words whose end
    runs are strictly shorter.  Sequences divergent only on the right
    are reversed first, so only left diagonals occur as atoms.
    """
    cached = _REG_MEMO.get(seq)
    if cached is not None:
        return cached
    out = _regularize_inner(seq)
    _REG_MEMO[seq] = out
    return out


def _regularize_inner(seq: Sequence) -> RegPolynomial:
    if seq.left == seq.right:
        return RegPolynomial.zero()
    n = seq.n
    interior = seq.interior
    first = interior[0]
    if all(x == first for x in interior):
        if first == seq.right:
            atom = Sequence(first, (first,), seq.left)
            sign = _F1 if n % 2 == 0 else -_F1
            return RegPolynomial({(atom,) * n: sign / factorial(n)})
        atom = Sequence(seq.left, (first,), seq.right)
        return RegPolynomial({(atom,) * n: _F1 / factorial(n)})
    i = 0
    while i < n and interior[i] == seq.left:
        i += 1
    if i == 0:
        j = 0
        while j < n and interior[n - 1 - j] == seq.right:
            j += 1
        if j == 0:
            return RegPolynomial.atom(seq)
        # divergent only on the right: flip and recurse on the prefix
        sign = _F1 if n % 2 == 0 else -_F1
        return regularize(seq.reversed()).scale(sign)
    # split off the maximal divergent prefix, then solve the shuffle
    # identity T~(prefix)*T~(rest) = sum over interleavings for T~(seq)
    u = (seq.left,) * i
    v = tuple(interior[i:])
    prod = regularize(Sequence(seq.left, u, seq.right)) * regularize(
        Sequence(seq.left, v, seq.right)
    )
    for word in _block_shuffle_words((u, v))[1:]:  # entry 0 is seq itself
        prod = prod - regularize(Sequence(seq.left, word, seq.right))
    return prod


def certify_regularization(seq: Sequence, alphabet, endpoints) -> bool:
    """Re-expand the regularization and compare with T(A) mod the ideal."""
    reg = regularize(seq)
    diff = t_element(seq) - reg.to_bar()
    return is_zero_mod_ideal(diff, alphabet, endpoints)
