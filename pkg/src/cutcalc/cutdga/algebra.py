"""The free graded-commutative algebra on sequence generators.

Generators have cohomological degree 1, so monomials are antisymmetric
words of sequences: sorting extracts a sign, a repeated generator kills
the monomial, and a generator with equal basepoints is zero on entry.
The differential cuts one factor at a time: dA = -(sum over 2-cuts of
A' A''), extended as a graded derivation.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from ..bar import BarElement, BarTensor, shuffle_product
from .sequences import Sequence, all_cuts, elementary_cuts, two_cuts

_F0 = Fraction(0)
_F1 = Fraction(1)

Monomial = Tuple[Sequence, ...]


def normalize_monomial(seqs: Tuple[Sequence, ...]) -> Optional[Tuple[int, Monomial]]:
    """Sort generators with the antisymmetry sign.

    Returns None when the monomial is zero: a vanishing generator
    (equal basepoints) or an odd-degree square.
    """
    for s in seqs:
        if s.is_vanishing():
            return None
    arr = list(seqs)
    keys = [s.value_key() for s in arr]
    sign = 1
    for i in range(1, len(arr)):
        j = i
        while j > 0 and keys[j - 1] > keys[j]:
            keys[j - 1], keys[j] = keys[j], keys[j - 1]
            arr[j - 1], arr[j] = arr[j], arr[j - 1]
            sign = -sign
            j -= 1
    for i in range(1, len(arr)):
        if keys[i - 1] == keys[i]:
            return None
    return sign, tuple(arr)


class AlgElement:
    """Q-linear combination of normalized monomials."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[Monomial, Fraction]] = None):
        self.terms = terms if terms is not None else {}

    @staticmethod
    def zero() -> "AlgElement":
        return AlgElement()

    @staticmethod
    def unit() -> "AlgElement":
        return AlgElement({(): _F1})

    @staticmethod
    def from_sequence(seq: Sequence) -> "AlgElement":
        if seq.is_vanishing():
            return AlgElement()
        return AlgElement({(seq,): _F1})

    @staticmethod
    def from_terms(pairs) -> "AlgElement":
        out = AlgElement()
        for coeff, seqs in pairs:
            norm = normalize_monomial(tuple(seqs))
            if norm is None:
                continue
            sg, mono = norm
            out._accumulate(mono, Fraction(coeff) * sg)
        return out

    def _accumulate(self, mono: Monomial, coeff: Fraction) -> None:
        nv = self.terms.get(mono, _F0) + coeff
        if nv:
            self.terms[mono] = nv
        else:
            self.terms.pop(mono, None)

    def __add__(self, other: "AlgElement") -> "AlgElement":
        out = AlgElement(dict(self.terms))
        for mono, c in other.terms.items():
            out._accumulate(mono, c)
        return out

    def __neg__(self) -> "AlgElement":
        return AlgElement({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "AlgElement") -> "AlgElement":
        return self + (-other)

    def scale(self, coeff) -> "AlgElement":
        c = Fraction(coeff)
        if not c:
            return AlgElement()
        return AlgElement({m: c * v for m, v in self.terms.items()})

    def __mul__(self, other: "AlgElement") -> "AlgElement":
        out = AlgElement()
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                norm = normalize_monomial(m1 + m2)
                if norm is None:
                    continue
                sg, mono = norm
                out._accumulate(mono, c1 * c2 * sg)
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def bidegrees(self) -> set:
        """Set of (cohomological, Adams) bidegrees present."""
        return {
            (len(m), sum(s.n for s in m)) for m in self.terms
        }

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        raise TypeError("AlgElement is unhashable; compare by ==")

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        chunks = []
        for mono, c in sorted(
            self.terms.items(), key=lambda kv: tuple(s.value_key() for s in kv[0])
        ):
            body = "".join(f"({s})" for s in mono) or "1"
            chunks.append(f"{c}*{body}")
        return " + ".join(chunks)

    __repr__ = __str__


# ---------------------------------------------------------------------------
# differential


_GEN_DIFF_MEMO: dict = {}


def _generator_diff(seq: Sequence) -> List[Tuple[Sequence, Sequence]]:
    key = seq.full_key()
    cached = _GEN_DIFF_MEMO.get(key)
    if cached is None:
        cached = two_cuts(seq)
        _GEN_DIFF_MEMO[key] = cached
    return cached


def _mono_diff(mono: Monomial) -> List[Tuple[Fraction, Monomial]]:
    """Graded-derivation differential of a normalized monomial."""
    out = []
    for i, g in enumerate(mono):
        pos = -1 if i % 2 else 1
        for kept, excised in _generator_diff(g):
            norm = normalize_monomial(mono[:i] + (kept, excised) + mono[i + 1 :])
            if norm is None:
                continue
            sg, mm = norm
            out.append((Fraction(-pos * sg), mm))
    return out


def differential(x) -> AlgElement:
    """dA = -(sum of A'A'' over 2-cuts), extended as a graded derivation."""
    if isinstance(x, Sequence):
        x = AlgElement.from_sequence(x)
    out = AlgElement()
    for mono, c in x.terms.items():
        for cd, mm in _mono_diff(mono):
            out._accumulate(mm, c * cd)
    return out


# ---------------------------------------------------------------------------
# bar interface over this algebra (trivial module)


class _CutDgaOps:
    """Bar-construction ops for B(C_S) with the trivial module Q."""

    module_unit = ()
    commutative = True

    @staticmethod
    def letter_mul(a: Monomial, b: Monomial):
        norm = normalize_monomial(a + b)
        if norm is None:
            return None
        sg, mono = norm
        return Fraction(sg), mono

    @staticmethod
    def letter_diff(a: Monomial):
        return _mono_diff(a)

    @staticmethod
    def letter_degree(a: Monomial) -> int:
        return len(a)

    @staticmethod
    def letter_adams(a: Monomial) -> int:
        return sum(s.n for s in a)

    @staticmethod
    def module_mul(m, a):
        # trivial module: the augmentation kills the kernel
        return None

    @staticmethod
    def module_diff(m):
        return []

    @staticmethod
    def module_degree(m) -> int:
        return 0


CUT_OPS = _CutDgaOps()


def t_element(seq: Sequence) -> BarElement:
    """T(A) = sum of [A1|...|Ak] over all cuts of A."""
    terms: dict = {}
    for cut in all_cuts(seq):
        letters = []
        dead = False
        for p in cut:
            if p.is_vanishing():
                dead = True
                break
            letters.append((p,))
        if dead:
            continue
        key = ((), tuple(letters))
        nv = terms.get(key, _F0) + _F1
        if nv:
            terms[key] = nv
        else:
            terms.pop(key, None)
    return BarElement(CUT_OPS, terms)


def elementary_decompositions(seq: Sequence):
    """Distinct elementary decompositions as (kept piece, gap pieces).

    Elementary cuts that differ only in the order of the consecutive
    pieces describe the same decomposition, so exactly one survives per
    first-piece support; gap pieces come out sorted by support.
    """
    seen = set()
    out = []
    for cut in elementary_cuts(seq):
        if len(cut) == 1:
            continue
        first = cut[0]
        if first.support in seen:
            continue
        seen.add(first.support)
        gaps = sorted(cut[1:], key=lambda p: p.support)
        out.append((first, tuple(gaps)))
    return out


def t_product(pieces) -> BarElement:
    """Shuffle product of the T-elements of the pieces."""
    acc = BarElement.unit_element(CUT_OPS)
    for piece in pieces:
        acc = shuffle_product(acc, t_element(piece))
    return acc


def coproduct_elementary_form(seq: Sequence) -> BarTensor:
    """1 (x) T + T (x) 1 plus the elementary-cut sum with T-factors."""
    t = t_element(seq)
    one = BarElement.unit_element(CUT_OPS)
    out = BarTensor.tensor(one, t) + BarTensor.tensor(t, one)
    for first, gaps in elementary_decompositions(seq):
        out = out + BarTensor.tensor(t_element(first), t_product(gaps))
    return out
