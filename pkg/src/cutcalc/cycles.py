"""Integration theories: cycle-valued realizations of cut sequences.

A parametrized cycle is a formal Q-combination of coordinate tuples of
rational functions, understood after alternation by the symmetry group
of the cube (coordinate permutations with their sign, and coordinate
inversions z -> 1/z with sign -1 per factor).  Terms are stored in an
orbit-canonical normal form, so equality of formal sums is equality of
alternated classes.

Parameter names are reserved: external parameters are s1, s2, ... and
internal (locus) parameters are t1, t2, ...  Sequence entries must stay
clear of both families.

The three theories (a-generic, sequentially distinct, binary) share the
inductive scaffolding: rho1 on a sequence, rho_k by splitting off depth
one heads, delta_apply by boundary specialization, with sp_specialize
regularizing the divergent depth-1 endpoints.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence as Seq, Tuple

from .cutdga.sequences import Sequence, _coerce_entry, two_cuts
from .cutdga.algebra import AlgElement
from .errors import (
    DivisionByZero,
    InadmissibleSpecialization,
    TheoryDomainError,
    UnsupportedShape,
)
from .exact import (
    FieldElement,
    IDENTICAL,
    NO_SOLUTION,
    Target,
    Unique,
    rat,
    solve_affine,
    var,
)

_F0 = Fraction(0)
_F1 = Fraction(1)
_HALF = Fraction(1, 2)

# Sign picked up by one coordinate inversion z -> 1/z.  The cubical
# convention is -1; +1 is left as an escape hatch for experiments.
INVERT_SIGN = -1

_PARAM_RE = re.compile(r"^[st]\d+$")
_INTERNAL_RE = re.compile(r"^t\d+$")
_EXTERNAL_RE = re.compile(r"^s\d+$")

Coords = Tuple[FieldElement, ...]


def _fe(x) -> FieldElement:
    return _coerce_entry(x)


def external(i: int) -> FieldElement:
    return var(f"s{i}")


def _internal_names(f: FieldElement) -> List[str]:
    return [v for v in f.vars() if _INTERNAL_RE.match(v)]


def _check_reserved(seq: Sequence) -> None:
    for entry in seq.entries():
        for v in entry.vars():
            if _PARAM_RE.match(v):
                raise TheoryDomainError(
                    f"sequence entry {entry} uses the reserved parameter name {v}"
                )


# ---------------------------------------------------------------------------
# canonical terms


def _coord_key(c: FieldElement) -> Tuple[int, str]:
    s = str(c)
    return (len(s), s)


def _canonical_term(coeff: Fraction, coords: Seq[FieldElement]):
    """Orbit-canonical form of one term; None when it dies or empties.

    The group is generated by coordinate permutations (sign of the
    permutation) and per-coordinate inversion (sign INVERT_SIGN).
    Internal parameter names are bound per term, so the normal form
    also minimizes over their relabelings.
    """
    coords = tuple(coords)
    internals = sorted(
        {v for c in coords for v in _internal_names(c)}, key=lambda v: int(v[1:])
    )
    if len(internals) > 1:
        fresh = [f"t{i + 1}" for i in range(len(internals))]
        renamings = [dict(zip(internals, perm)) for perm in itertools.permutations(fresh)]
    elif internals and internals != ["t1"]:
        renamings = [{internals[0]: "t1"}]
    else:
        renamings = [{}]
    best = None
    seen_signs: Dict[tuple, int] = {}
    for ren in renamings:
        mapping = {old: var(new) for old, new in ren.items() if old != new}
        sign = 1
        keyed: List[Tuple[Tuple[int, str], FieldElement]] = []
        dead = False
        empty = False
        for c in coords:
            c2 = c.substitute_many(mapping) if mapping else c
            if c2.is_one():
                empty = True
                break
            if c2.is_zero():
                keyed.append((_coord_key(c2), c2))
                continue
            inv = rat(1) / c2
            if inv == c2:
                # the only inversion fixed points are +1 and -1; the
                # former emptied above, the latter has a sign-reversing
                # stabilizer under the standard convention
                if INVERT_SIGN == -1:
                    dead = True
                    break
                keyed.append((_coord_key(c2), c2))
                continue
            k2, ki = _coord_key(c2), _coord_key(inv)
            if ki < k2:
                keyed.append((ki, inv))
                sign *= INVERT_SIGN
            else:
                keyed.append((k2, c2))
        if empty or dead:
            return None
        for i in range(1, len(keyed)):
            j = i
            while j > 0 and keyed[j - 1][0] > keyed[j][0]:
                keyed[j - 1], keyed[j] = keyed[j], keyed[j - 1]
                sign = -sign
                j -= 1
        if any(keyed[i - 1][0] == keyed[i][0] for i in range(1, len(keyed))):
            return None
        cand_key = tuple(k for k, _ in keyed)
        prior = seen_signs.get(cand_key)
        if prior is None:
            seen_signs[cand_key] = sign
        elif prior != sign:
            # two relabelings reach the same normal form with opposite
            # signs, so the term carries a sign-reversing stabilizer
            return None
        if best is None or cand_key < best[0]:
            best = (cand_key, sign, tuple(c for _, c in keyed))
    if best is None:
        return None
    _, sign, canon = best
    return coeff * sign, canon


class ParamCycle:
    """Formal sum of alternated coordinate tuples with a bidegree.

    cohom is the cohomological degree (the k of rho_k), adams the Adams
    weight n; every generated term has 2n - k coordinates.
    """

    __slots__ = ("cohom", "adams", "terms")

    def __init__(self, cohom: int, adams: int, terms: Optional[Dict[Coords, Fraction]] = None):
        self.cohom = cohom
        self.adams = adams
        self.terms = terms if terms is not None else {}

    @staticmethod
    def zero(cohom: int, adams: int) -> "ParamCycle":
        return ParamCycle(cohom, adams)

    @staticmethod
    def term(coeff, coords, cohom: int, adams: int) -> "ParamCycle":
        out = ParamCycle(cohom, adams)
        out._accumulate(Fraction(coeff), tuple(_fe(c) for c in coords))
        return out

    @property
    def box_dim(self) -> int:
        return 2 * self.adams - self.cohom

    def _accumulate(self, coeff: Fraction, coords: Coords) -> None:
        canon = _canonical_term(coeff, coords)
        if canon is None:
            return
        c, key = canon
        tot = self.terms.get(key, _F0) + c
        if tot:
            self.terms[key] = tot
        else:
            self.terms.pop(key, None)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "ParamCycle") -> "ParamCycle":
        if (self.cohom, self.adams) != (other.cohom, other.adams):
            if self.is_zero():
                return other
            if other.is_zero():
                return self
            raise ValueError(
                f"bidegree mismatch: ({self.cohom},{self.adams}) vs "
                f"({other.cohom},{other.adams})"
            )
        out = ParamCycle(self.cohom, self.adams, dict(self.terms))
        for key, c in other.terms.items():
            tot = out.terms.get(key, _F0) + c
            if tot:
                out.terms[key] = tot
            else:
                out.terms.pop(key, None)
        return out

    def __neg__(self) -> "ParamCycle":
        return self.scale(-1)

    def __sub__(self, other: "ParamCycle") -> "ParamCycle":
        return self + other.scale(-1)

    def scale(self, c) -> "ParamCycle":
        c = Fraction(c)
        if not c:
            return ParamCycle(self.cohom, self.adams)
        return ParamCycle(self.cohom, self.adams, {k: c * v for k, v in self.terms.items()})

    def __mul__(self, other: "ParamCycle") -> "ParamCycle":
        return cycle_product(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ParamCycle):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        items = sorted((tuple(str(c) for c in k), str(v)) for k, v in self.terms.items())
        return hash((self.cohom, self.adams, tuple(items)))

    def external_params(self) -> List[str]:
        seen = set()
        for coords in self.terms:
            for c in coords:
                for v in c.vars():
                    if _EXTERNAL_RE.match(v):
                        seen.add(v)
        return sorted(seen, key=lambda v: int(v[1:]))

    def substitute_externals(self, mapping: Dict[str, FieldElement]) -> "ParamCycle":
        out = ParamCycle(self.cohom, self.adams)
        for coords, coeff in self.terms.items():
            res = _subst_coords(coords, lambda c: c.substitute_many(mapping))
            if res is None:
                continue
            sg, new = res
            out._accumulate(sg * coeff, new)
        return out

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for coords, coeff in sorted(
            self.terms.items(), key=lambda kv: tuple(_coord_key(c) for c in kv[0])
        ):
            inner = ", ".join(str(c) for c in coords)
            bits.append(f"{coeff}*({inner})")
        return " + ".join(bits)

    __repr__ = __str__

    def to_json_obj(self) -> List[dict]:
        out = []
        for coords, coeff in sorted(
            self.terms.items(), key=lambda kv: tuple(_coord_key(c) for c in kv[0])
        ):
            internals = sorted(
                {v for c in coords for v in _internal_names(c)},
                key=lambda v: int(v[1:]),
            )
            externals = sorted(
                {v for c in coords for v in c.vars() if _EXTERNAL_RE.match(v)},
                key=lambda v: int(v[1:]),
            )
            out.append(
                {
                    "coefficient": str(coeff),
                    "coordinates": [str(c) for c in coords],
                    "parameters": {"external": externals, "internal": internals},
                }
            )
        return out


def cycle_product(x: ParamCycle, y: ParamCycle) -> ParamCycle:
    """External product followed by alternation.

    Internal parameters of the right factor are shifted clear of the
    left factor's before concatenation; the Koszul sign comes out of
    the canonical form's permutation signs.
    """
    out = ParamCycle(x.cohom + y.cohom, x.adams + y.adams)
    if x.is_zero() or y.is_zero():
        return out
    for cx, vx in x.terms.items():
        nx = len({v for c in cx for v in _internal_names(c)})
        for cy, vy in y.terms.items():
            iy = sorted(
                {v for c in cy for v in _internal_names(c)}, key=lambda v: int(v[1:])
            )
            mapping = {old: var(f"t{nx + j + 1}") for j, old in enumerate(iy)}
            shifted = tuple(c.substitute_many(mapping) for c in cy) if mapping else cy
            out._accumulate(vx * vy, cx + shifted)
    return out


def _term_internals(coords: Coords) -> List[str]:
    names: set = set()
    for c in coords:
        names.update(_internal_names(c))
    return sorted(names, key=lambda v: int(v[1:]))


def _term_eval(coords: Coords, mapping: Dict[str, FieldElement], offset: int):
    """Rename one term's internals past offset and substitute externals.

    Both happen simultaneously, so substitution values mentioning the low
    internal names (composition points t1, t2, ...) cannot be captured by
    this term's own bound parameters.  The canonical storage renames
    internals back to t1.., so composite terms have to be assembled
    completely, through this helper, before they are accumulated.

    Returns ((sign, coords') or None if the term empties, next offset).
    """
    ren: Dict[str, FieldElement] = {
        old: var(f"t{offset + j + 1}")
        for j, old in enumerate(_term_internals(coords))
    }
    nxt = offset + len(ren)
    ren.update(mapping)
    if not ren:
        return (1, coords), nxt
    return _subst_coords(coords, lambda c: c.substitute_many(ren)), nxt


# ---------------------------------------------------------------------------
# faces and the cycle differential


def _subst_coords(coords: Coords, fn):
    """Substitute into every coordinate with boundary bookkeeping.

    A coordinate landing identically on 1 empties the whole term (the
    locus sits in the removed hyperplane).  A coordinate with a pole at
    the specialization is traded for its inverse, which lands on 0, at
    the cost of the inversion sign; such pinned terms must cancel in any
    honest alternating sum, and the callers flag the survivors.

    Returns None for an empty term, else (sign, substituted tuple).
    """
    vals = []
    sign = 1
    for c in coords:
        try:
            vals.append(fn(c))
        except DivisionByZero:
            inv = FieldElement.make(c.den, c.num)
            try:
                vals.append(fn(inv))
            except DivisionByZero:
                raise UnsupportedShape(
                    f"both sides of {c} vanish at the specialization"
                )
            sign *= INVERT_SIGN
    if any(v.is_one() for v in vals):
        return None
    return sign, tuple(vals)


def _face_term(coords: Coords, index: int, target: Target):
    """Restrict one term to the face coordinate #index (1-based) = target.

    Returns ("empty", None), ("nonproper", None), or ("ok", coords')
    where coords' drops the restricted coordinate and substitutes the
    unique affine solution into the siblings.
    """
    c = coords[index - 1]
    side = c.num if target is Target.ZERO else c.den
    candidates = []
    internal_here = []
    for v in side.vars():
        if not _INTERNAL_RE.match(v):
            continue
        internal_here.append(v)
        if side.degree_in(v) == 1:
            lead = side.coeffs_in(v).get(1)
            if lead is not None and lead.is_constant():
                candidates.append(v)
    if not candidates:
        if target is Target.ZERO and side.is_zero():
            return "nonproper", None
        if internal_here:
            raise UnsupportedShape(
                f"no internal parameter of {c} is affine with constant lead "
                f"on the {target.value} side"
            )
        return "empty", None
    name = max(candidates, key=lambda v: int(v[1:]))
    sol = solve_affine(c, name, target)
    if sol is NO_SOLUTION:
        return "empty", None
    if sol is IDENTICAL:
        return "nonproper", None
    assert isinstance(sol, Unique)
    rest = coords[: index - 1] + coords[index:]
    res = _subst_coords(rest, lambda r: r.substitute(name, sol.value))
    if res is None:
        return "empty", None
    return "ok", res


def face_restrict(Z: ParamCycle, index: int, target: Target) -> ParamCycle:
    """Intersection with one codimension-1 face, as a cycle.

    Empty intersections vanish.  A coordinate sitting identically on the
    face raises, since the intersection is not proper.  Terms where a
    sibling coordinate gets pinned to the boundary survive with the
    pinned coordinate at 0; they have to cancel between themselves in
    any alternating sum, and _pinned_residue flags the leftovers.
    """
    out = ParamCycle(Z.cohom + 1, Z.adams)
    for coords, coeff in Z.terms.items():
        status, res = _face_term(coords, index, target)
        if status == "empty":
            continue
        if status == "nonproper":
            raise InadmissibleSpecialization(
                f"coordinate {index} sits identically on the face {target.value}"
            )
        sg, new = res
        out._accumulate(sg * coeff, new)
    return out


def _pinned_residue(Z: ParamCycle) -> ParamCycle:
    """The part of Z supported on the boundary (a coordinate at 0)."""
    out = ParamCycle(Z.cohom, Z.adams)
    for coords, coeff in Z.terms.items():
        if any(c.is_zero() for c in coords):
            out._accumulate(coeff, coords)
    return out


def cycle_diff(Z: ParamCycle) -> ParamCycle:
    """Alternating face sum: sum over i of (-1)^(i-1) (Z|_i=0 - Z|_i=oo)."""
    out = ParamCycle(Z.cohom + 1, Z.adams)
    for coords, coeff in Z.terms.items():
        one = ParamCycle(Z.cohom, Z.adams, {coords: coeff})
        for i in range(1, len(coords) + 1):
            sign = 1 if i % 2 else -1
            piece = face_restrict(one, i, Target.ZERO) - face_restrict(one, i, Target.INFINITY)
            out = out + piece.scale(sign)
    pinned = _pinned_residue(out)
    if not pinned.is_zero():
        raise InadmissibleSpecialization(
            f"the face sum leaves {len(pinned.terms)} terms pinned to the boundary"
        )
    return out


# ---------------------------------------------------------------------------
# boundary specializations


def sp_specialize(Z: ParamCycle, at, divergent: bool) -> ParamCycle:
    """Specialize a univariate family at s1 := at, or 1 + at when the
    endpoint meets the interior point (the divergent branch)."""
    value = _fe(at)
    if divergent:
        value = rat(1) + value
    return Z.substitute_externals({"s1": value})


def delta_apply(
    Z: ParamCycle,
    a0,
    a_end,
    k: Optional[int] = None,
    divergent: Tuple[bool, bool] = (False, False),
) -> ParamCycle:
    """The alternating boundary specialization of a k-parameter family.

    delta Z = Z(a0, s1, ..) - Z(s1, s1, ..) + ... + (-1)^k Z(.., a_end).
    k defaults to the highest external slot present.  At k=1 the two
    endpoint substitutions go through sp_specialize, with the divergent
    pair flagging which of them needs the shifted point.  A surviving
    term with a coordinate pinned at 0 marks a failed specialization.
    """
    a0 = _fe(a0)
    a_end = _fe(a_end)
    if k is None:
        ext = Z.external_params()
        if not ext:
            raise ValueError("cannot infer k: the family has no external parameters")
        k = int(ext[-1][1:])
    if k == 1:
        out = sp_specialize(Z, a0, divergent[0]) - sp_specialize(Z, a_end, divergent[1])
        _check_pinned(out)
        return out
    out = ParamCycle(Z.cohom, Z.adams)
    for j in range(k + 1):
        mapping: Dict[str, FieldElement] = {}
        if j == 0:
            mapping["s1"] = a0
            for i in range(2, k + 1):
                mapping[f"s{i}"] = external(i - 1)
        elif j == k:
            mapping[f"s{k}"] = a_end
        else:
            mapping[f"s{j + 1}"] = external(j)
            for i in range(j + 2, k + 1):
                mapping[f"s{i}"] = external(i - 1)
        piece = Z.substitute_externals(mapping)
        out = out + piece.scale(1 if j % 2 == 0 else -1)
    _check_pinned(out)
    return out


def _check_pinned(Z: ParamCycle) -> None:
    if not _pinned_residue(Z).is_zero():
        raise InadmissibleSpecialization(
            "a specialized term has a coordinate pinned at 0"
        )


# ---------------------------------------------------------------------------
# theories


def rho_hat1(a1) -> ParamCycle:
    """The depth-1 seed cycle in s1."""
    a1 = _fe(a1)
    s = external(1)
    if a1.is_zero():
        return ParamCycle.term(1, (s,), 1, 1)
    return ParamCycle.term(1, (rat(1) - s / a1,), 1, 1)


@dataclass(frozen=True)
class AGeneric:
    """Repeated interior letters are allowed only at the marked point a."""

    a: object = 0

    def __post_init__(self):
        object.__setattr__(self, "a", _fe(self.a))

    name = "a-generic"
    permuting = True

    def admits(self, seq: Sequence) -> bool:
        letters = seq.interior
        for i in range(len(letters)):
            for j in range(i + 1, len(letters)):
                if letters[i] == letters[j] and letters[i] != self.a:
                    return False
        return True

    def pivot(self, seq: Sequence) -> FieldElement:
        return self.a

    def base_rho1(self, seq: Sequence) -> ParamCycle:
        shifted = rho_hat1(seq.interior[0] - self.a)
        return shifted.substitute_externals({"s1": external(1) - self.a})

    def key(self):
        return ("agen", str(self.a))


@dataclass(frozen=True)
class SeqDistinct:
    """Consecutive interior letters must differ; endpoints are free."""

    name = "sequentially distinct"
    permuting = False

    def admits(self, seq: Sequence) -> bool:
        letters = seq.interior
        return all(letters[i] != letters[i + 1] for i in range(len(letters) - 1))

    def pivot(self, seq: Sequence) -> FieldElement:
        return seq.left

    def base_rho1(self, seq: Sequence) -> ParamCycle:
        shifted = rho_hat1(seq.interior[0] - seq.left)
        return shifted.substitute_externals({"s1": external(1) - seq.left})

    def key(self):
        return ("seqdist",)


@dataclass(frozen=True)
class Binary:
    """Interior letters drawn from the fixed two-element set {alpha0, alpha1}."""

    alpha0: object = 0
    alpha1: object = 1

    def __post_init__(self):
        object.__setattr__(self, "alpha0", _fe(self.alpha0))
        object.__setattr__(self, "alpha1", _fe(self.alpha1))
        if self.alpha0 == self.alpha1:
            raise TheoryDomainError("a binary theory needs two distinct letters")

    name = "binary"
    permuting = True

    def admits(self, seq: Sequence) -> bool:
        return all(x == self.alpha0 or x == self.alpha1 for x in seq.interior)

    def letter_rho1(self, a: FieldElement) -> ParamCycle:
        s = external(1)
        ref = self.alpha1 if a == self.alpha0 else self.alpha0
        return ParamCycle.term(1, ((s - a) / (ref - a),), 1, 1)

    def key(self):
        return ("binary", str(self.alpha0), str(self.alpha1))


def _require(theory, seq: Sequence) -> None:
    _check_reserved(seq)
    if not theory.admits(seq):
        raise TheoryDomainError(f"({seq}) is not admitted by the {theory.name} theory")


_RHO1_MEMO: Dict[tuple, ParamCycle] = {}
_RHOK_MEMO: Dict[tuple, ParamCycle] = {}


def rho1(seq: Sequence, theory) -> ParamCycle:
    """The one-parameter cycle family of the theory, recursive in depth."""
    _require(theory, seq)
    memo_key = (theory.key(), seq.value_key())
    hit = _RHO1_MEMO.get(memo_key)
    if hit is not None:
        return hit
    n = seq.n
    if isinstance(theory, Binary):
        out = _binary_rho1(seq.interior, theory)
    elif n == 1:
        out = theory.base_rho1(seq)
    else:
        c = theory.pivot(seq)
        t = var("t1")
        head = (external(1) - t) / (c - t)
        diagonal = {"s1": t, "s2": t}
        out = ParamCycle(1, n)
        for coords, coeff in rho_k(seq, 2, theory).terms.items():
            res, _ = _term_eval(coords, diagonal, 1)
            if res is None:
                continue
            sg, new = res
            out._accumulate(sg * coeff, (head,) + new)
    _RHO1_MEMO[memo_key] = out
    return out


def rho_k(seq: Sequence, k: int, theory) -> ParamCycle:
    """The k-parameter family, peeling one depth-1 head off the front."""
    _require(theory, seq)
    if k < 1:
        raise ValueError("k must be positive")
    n = seq.n
    if k > n:
        return ParamCycle.zero(k, n)
    if k == 1:
        return rho1(seq, theory)
    memo_key = (theory.key(), seq.value_key(), k)
    hit = _RHOK_MEMO.get(memo_key)
    if hit is not None:
        return hit
    w = seq.interior
    shift_up = {f"s{i}": external(i + 1) for i in range(1, k)}
    total = ParamCycle(k, n)
    for i in range(1, n - k + 2):
        left = Sequence(seq.left, w[:i], w[i] if i < n else seq.right)
        right = Sequence(w[i - 1], w[i:], seq.right)
        X = rho1(left, theory)
        Y = rho_k(right, k - 1, theory).substitute_externals(shift_up)
        total = total + cycle_product(X, Y)
    _RHOK_MEMO[memo_key] = total
    return total


# -- the binary construction ------------------------------------------------


_BINARY_EPS_MEMO: Dict[tuple, ParamCycle] = {}


def _binary_eps(word: Tuple[FieldElement, ...], eps: int, theory: Binary) -> ParamCycle:
    """One epsilon-half of the binary rho1, by end-letter splits.

    Depth 1 is the letter, killed when it equals its own marker.  Deeper
    words recurse through the two splits that peel a single end letter:
    the lone letter carries its full rho1 while the long block keeps the
    epsilon decoration, and both factors sit at the bound coordinate
    under the head (s - t)/(alpha_eps - t).  At depth 2 the two splits
    coincide, whence the factor 1/2.
    """
    n = len(word)
    alpha = theory.alpha0 if eps == 0 else theory.alpha1
    if n == 1:
        if word[0] == alpha:
            return ParamCycle.zero(1, 1)
        return theory.letter_rho1(word[0])
    memo_key = (theory.key(), eps, tuple(str(x) for x in word))
    hit = _BINARY_EPS_MEMO.get(memo_key)
    if hit is not None:
        return hit
    s = external(1)
    t = var("t1")
    head = (s - t) / (alpha - t)
    at_t = {"s1": t}
    weight = _HALF if n == 2 else _F1
    out = ParamCycle(1, n)
    pairs = [
        (_binary_rho1(word[:1], theory), _binary_eps(word[1:], eps, theory)),
        (_binary_eps(word[:-1], eps, theory), _binary_rho1(word[-1:], theory)),
    ]
    for left, right in pairs:
        if left.is_zero() or right.is_zero():
            continue
        for cl, vl in left.terms.items():
            rl, off = _term_eval(cl, at_t, 1)
            if rl is None:
                continue
            for cr, vr in right.terms.items():
                rr, _ = _term_eval(cr, at_t, off)
                if rr is None:
                    continue
                out._accumulate(
                    weight * rl[0] * rr[0] * vl * vr, (head,) + rl[1] + rr[1]
                )
    _BINARY_EPS_MEMO[memo_key] = out
    return out


def _binary_rho1(word: Tuple[FieldElement, ...], theory: Binary) -> ParamCycle:
    if len(word) == 1:
        return theory.letter_rho1(word[0])
    return _binary_eps(word, 0, theory) + _binary_eps(word, 1, theory)


# ---------------------------------------------------------------------------
# the DGA morphism rho = delta rho_1


def rho(seq: Sequence, theory) -> ParamCycle:
    """delta rho1: the parameter-free cycle attached to one sequence.

    At depth 1 an endpoint substitution is divergent exactly when the
    endpoint equals the interior point, and sp_specialize shifts it;
    deeper sequences never need the shift because the head coordinate
    already empties at the basepoint.
    """
    Z = rho1(seq, theory)
    if seq.n == 1:
        a1 = seq.interior[0]
        div = (seq.left == a1, seq.right == a1)
    else:
        div = (False, False)
    return delta_apply(Z, seq.left, seq.right, k=1, divergent=div)


def rho_alg(x, theory) -> ParamCycle:
    """Extend rho multiplicatively to algebra elements."""
    if isinstance(x, Sequence):
        return rho(x, theory)
    if not isinstance(x, AlgElement):
        raise TypeError(f"cannot apply rho to {type(x).__name__}")
    total: Optional[ParamCycle] = None
    for mono, coeff in x.terms.items():
        piece: Optional[ParamCycle] = None
        for s in mono:
            z = rho(s, theory)
            piece = z if piece is None else cycle_product(piece, z)
        if piece is None:
            raise ValueError("rho of the empty monomial (the unit) is not defined")
        piece = piece.scale(coeff)
        total = piece if total is None else total + piece
    if total is None:
        return ParamCycle.zero(1, 1)
    return total


class CycleOps:
    """Bar-construction ops over the cycle algebra, trivial module."""

    module_unit = ()
    commutative = True

    @staticmethod
    def letter_mul(a: ParamCycle, b: ParamCycle):
        p = cycle_product(a, b)
        if p.is_zero():
            return None
        return 1, p

    @staticmethod
    def letter_diff(a: ParamCycle):
        d = cycle_diff(a)
        if d.is_zero():
            return []
        return [(_F1, d)]

    @staticmethod
    def letter_degree(a: ParamCycle) -> int:
        return a.cohom

    @staticmethod
    def letter_adams(a: ParamCycle) -> int:
        return a.adams

    @staticmethod
    def module_mul(m, a):
        return None

    @staticmethod
    def module_diff(m):
        return []

    @staticmethod
    def module_degree(m) -> int:
        return 0


CYCLE_OPS = CycleOps()


def rho_bar(x, theory):
    """Map a bar element over the cut DGA to one over cycles, letterwise."""
    from .bar import BarElement

    out = BarElement(CYCLE_OPS)
    for (module, word), coeff in x.terms.items():
        if module != ():
            raise ValueError("rho_bar expects a trivial module part")
        letters = []
        dead = False
        for mono in word:
            piece: Optional[ParamCycle] = None
            for s in mono:
                z = rho(s, theory)
                piece = z if piece is None else cycle_product(piece, z)
            if piece is None or piece.is_zero():
                dead = True
                break
            letters.append(piece)
        if dead:
            continue
        key = ((), tuple(letters))
        tot = out.terms.get(key, _F0) + coeff
        if tot:
            out.terms[key] = tot
        else:
            out.terms.pop(key, None)
    return out


# ---------------------------------------------------------------------------
# admissibility


class AdmissReport:
    __slots__ = ("passed", "faces", "violations")

    def __init__(self, passed: bool, faces: int, violations: List[str]):
        self.passed = passed
        self.faces = faces
        self.violations = violations

    def __bool__(self) -> bool:
        return self.passed

    def __str__(self) -> str:
        if self.passed:
            return f"admissible ({self.faces} face slices checked)"
        head = f"FAILED {len(self.violations)} of {self.faces} face slices"
        return head + "".join("\n  " + v for v in self.violations)


def admissible_check(Z: ParamCycle, max_violations: int = 8) -> AdmissReport:
    """Sweep every iterated face and confirm proper intersections.

    The sweep works on whole cycles, so face restrictions of separate
    terms get the chance to cancel before properness is judged: what is
    left pinned to the boundary after the cancellation, or a coordinate
    lying identically on its face, is a violation.
    """
    faces = 0
    violations: List[str] = []

    def sweep(W: ParamCycle, start: int, trail: str) -> None:
        nonlocal faces
        if len(violations) >= max_violations:
            return
        for i in range(start, W.box_dim + 1):
            for target in (Target.ZERO, Target.INFINITY):
                faces += 1
                label = f"{trail}[{i}={target.value}]"
                try:
                    cut = face_restrict(W, i, target)
                except InadmissibleSpecialization as exc:
                    violations.append(f"{label}: {exc}")
                    continue
                pinned = _pinned_residue(cut)
                if not pinned.is_zero():
                    violations.append(
                        f"{label}: {len(pinned.terms)} terms pinned to the boundary"
                    )
                    cut = cut - pinned
                if not cut.is_zero():
                    sweep(cut, i, label)

    sweep(Z, 1, "")
    return AdmissReport(not violations, faces, violations)


# ---------------------------------------------------------------------------
# theory verification


class TheoryReport:
    __slots__ = ("passed", "lines")

    def __init__(self):
        self.passed = True
        self.lines: List[Tuple[str, bool, str]] = []

    def record(self, name: str, ok: bool, detail: str = "") -> None:
        self.lines.append((name, ok, detail))
        if not ok:
            self.passed = False

    def __bool__(self) -> bool:
        return self.passed

    def __str__(self) -> str:
        out = []
        for name, ok, detail in self.lines:
            mark = "ok" if ok else "FAIL"
            out.append(f"{mark:4} {name}" + (f": {detail}" if detail else ""))
        return "\n".join(out)


def _condition2_shape(Z: ParamCycle, seq: Sequence) -> bool:
    """rho_n must be one alternated term of shape (c_i (s_i - a_i))_i."""
    n = seq.n
    if len(Z.terms) != 1:
        return False
    (coords,) = Z.terms
    if len(coords) != n:
        return False
    found = set()
    for c in coords:
        params = [v for v in c.vars() if _EXTERNAL_RE.match(v)]
        if len(params) != 1 or _internal_names(c):
            return False
        name = params[0]
        i = int(name[1:])
        if i in found or not 1 <= i <= n:
            return False
        found.add(i)
        if max(c.num.degree_in(name), c.den.degree_in(name)) != 1:
            return False
        try:
            if not c.substitute(name, seq.interior[i - 1]).is_zero():
                return False
        except DivisionByZero:
            # the canonical representative is the inverse; the root sits
            # where the denominator vanishes, which is still a hit
            pass
    return found == set(range(1, n + 1))


def _cut_sum(seq: Sequence, k: int, theory) -> ParamCycle:
    """Sum over 2-cuts of rho_k(kept) * rho(excised)."""
    total = ParamCycle(k + 1, seq.adams)
    for kept, excised in two_cuts(seq):
        if excised.is_vanishing() or kept.is_vanishing():
            continue
        total = total + cycle_product(rho_k(kept, k, theory), rho(excised, theory))
    return total


def condition3_residual(seq: Sequence, k: int, theory) -> ParamCycle:
    """d rho_k + delta rho_(k+1) - (-1)^k sum_cuts rho_k * delta rho_1."""
    lhs = cycle_diff(rho_k(seq, k, theory))
    upper = rho_k(seq, k + 1, theory)
    d_up = delta_apply(upper, seq.left, seq.right, k=k + 1) if not upper.is_zero() else upper
    sign = 1 if k % 2 == 0 else -1
    return lhs + d_up - _cut_sum(seq, k, theory).scale(sign)


def delta_lemma_residual(seq: Sequence, k: int, theory) -> ParamCycle:
    """d(delta rho_k) - (-1)^k sum_cuts (delta rho_k) * (delta rho_1)."""
    if k == 1:
        dz = rho(seq, theory)
    else:
        dz = delta_apply(rho_k(seq, k, theory), seq.left, seq.right, k=k)
    lhs = cycle_diff(dz)
    total = ParamCycle(k + 1, seq.adams)
    for kept, excised in two_cuts(seq):
        if excised.is_vanishing() or kept.is_vanishing() or k > kept.n:
            continue
        if k == 1:
            dk = rho(kept, theory)
        else:
            dk = delta_apply(rho_k(kept, k, theory), seq.left, seq.right, k=k)
        total = total + cycle_product(dk, rho(excised, theory))
    sign = 1 if k % 2 == 0 else -1
    return lhs - total.scale(sign)


def verify_theory(theory, seq: Sequence, check_permuting: Optional[bool] = None) -> TheoryReport:
    """Run the integration-theory conditions and claimed extras on one input."""
    rep = TheoryReport()
    _require(theory, seq)
    n = seq.n
    rep.record("condition 1 (vanishing above depth)", rho_k(seq, n + 1, theory).is_zero())
    rep.record("condition 2 (top family shape)", _condition2_shape(rho_k(seq, n, theory), seq))
    for k in range(1, min(n, 2) + 1):
        try:
            res = condition3_residual(seq, k, theory)
            rep.record(
                f"condition 3 (differential, k={k})",
                res.is_zero(),
                "" if res.is_zero() else f"residual {res}",
            )
        except (InadmissibleSpecialization, UnsupportedShape) as exc:
            rep.record(f"condition 3 (differential, k={k})", False, str(exc))
        try:
            res = delta_lemma_residual(seq, k, theory)
            rep.record(
                f"boundary lemma (k={k})",
                res.is_zero(),
                "" if res.is_zero() else f"residual {res}",
            )
        except (InadmissibleSpecialization, UnsupportedShape) as exc:
            rep.record(f"boundary lemma (k={k})", False, str(exc))
    for k in range(1, n + 1):
        if (k, n) == (1, 1):
            continue
        adm = admissible_check(rho_k(seq, k, theory))
        rep.record(f"admissibility of rho_{k}", adm.passed, "" if adm else str(adm))
        try:
            dz = delta_apply(rho_k(seq, k, theory), seq.left, seq.right, k=k)
            adm2 = admissible_check(dz)
            rep.record(
                f"admissibility of delta rho_{k}", adm2.passed, "" if adm2 else str(adm2)
            )
        except InadmissibleSpecialization as exc:
            rep.record(f"admissibility of delta rho_{k}", False, str(exc))
    if check_permuting is None:
        check_permuting = theory.permuting
    if check_permuting:
        rep.record("base point freeness", _base_point_free(theory, seq))
        ok, detail = _permuting_identities(theory, seq)
        rep.record("permuting identities", ok, detail)
    return rep


def _base_point_free(theory, seq: Sequence) -> bool:
    fresh = Sequence(var("p_lo"), seq.interior, var("p_hi"))
    return rho1(fresh, theory) == rho1(seq, theory)


def _permuting_identities(theory, seq: Sequence) -> Tuple[bool, str]:
    """Shuffle-sum vanishing and the reversal sign, on the word's splits."""
    w = seq.interior
    n = len(w)
    a0, a1 = seq.left, seq.right

    def bare(word) -> ParamCycle:
        return rho1(Sequence(a0, word, a1), theory)

    rev = bare(tuple(reversed(w)))
    sign = 1 if (n - 1) % 2 == 0 else -1
    if not (bare(w) - rev.scale(sign)).is_zero():
        return False, f"reversal sign fails on ({seq})"
    for cut in range(1, n):
        u, v = w[:cut], w[cut:]
        total: Optional[ParamCycle] = None
        for positions in itertools.combinations(range(n), cut):
            merged: List[Optional[FieldElement]] = [None] * n
            ui = iter(u)
            for p in positions:
                merged[p] = next(ui)
            vi = iter(v)
            word = tuple(x if x is not None else next(vi) for x in merged)
            z = bare(word)
            total = z if total is None else total + z
        if total is not None and not total.is_zero():
            return False, f"shuffle sum fails on the split {u}|{v}"
    return True, ""


# ---------------------------------------------------------------------------
# tree expansions


def _plane_trees(lo: int, hi: int):
    """Binary plane trees over the leaves lo..hi (1-based, inclusive)."""
    if lo == hi:
        yield lo
        return
    for mid in range(lo, hi):
        for left in _plane_trees(lo, mid):
            for right in _plane_trees(mid + 1, hi):
                yield (left, right)


def _tree_span(tree) -> Tuple[int, int]:
    lo = tree
    while not isinstance(lo, int):
        lo = lo[0]
    hi = tree
    while not isinstance(hi, int):
        hi = hi[1]
    return lo, hi


def _tree_cycle(tree, entries: Tuple[FieldElement, ...], theory) -> ParamCycle:
    if isinstance(tree, int):
        base = Sequence(entries[tree - 1], (entries[tree],), entries[tree + 1])
        return rho1(base, theory)
    lo, hi = _tree_span(tree)
    supp = Sequence(entries[lo - 1], entries[lo : hi + 1], entries[hi + 1])
    c = theory.pivot(supp)
    t = var("t1")
    head = (external(1) - t) / (c - t)
    at_t = {"s1": t}
    out = ParamCycle(1, hi - lo + 1)
    for cl, vl in _tree_cycle(tree[0], entries, theory).terms.items():
        rl, off = _term_eval(cl, at_t, 1)
        if rl is None:
            continue
        for cr, vr in _tree_cycle(tree[1], entries, theory).terms.items():
            rr, _ = _term_eval(cr, at_t, off)
            if rr is None:
                continue
            out._accumulate(rl[0] * rr[0] * vl * vr, (head,) + rl[1] + rr[1])
    return out


def tree_terms(seq: Sequence, theory) -> List[Tuple[object, ParamCycle]]:
    """Tree-indexed decomposition whose sum reproduces rho1.

    For the generic and sequentially distinct theories the index runs
    over binary plane trees on the letters.  The binary theory instead
    tags its root-level expansion by (split, bracket slot, epsilon),
    pruning terms that vanish outright.
    """
    _require(theory, seq)
    if isinstance(theory, Binary):
        return _binary_tree_terms(seq, theory)
    out = []
    entries = seq.entries()
    for tree in _plane_trees(1, seq.n):
        out.append((tree, _tree_cycle(tree, entries, theory)))
    return out


def _binary_tree_terms(seq: Sequence, theory: Binary) -> List[Tuple[object, ParamCycle]]:
    word = seq.interior
    n = len(word)
    out: List[Tuple[object, ParamCycle]] = []
    if n == 1:
        out.append(((1, 0, 0), _binary_rho1(word, theory)))
        return out
    s = external(1)
    t = var("t1")
    at_t = {"s1": t}
    weight = _HALF if n == 2 else _F1
    for eps in (0, 1):
        alpha = theory.alpha0 if eps == 0 else theory.alpha1
        head = (s - t) / (alpha - t)
        splits = [
            (1, 1, _binary_rho1(word[:1], theory), _binary_eps(word[1:], eps, theory)),
            (n - 1, 2, _binary_eps(word[:-1], eps, theory), _binary_rho1(word[-1:], theory)),
        ]
        for pos, slot, left, right in splits:
            if left.is_zero() or right.is_zero():
                continue
            Z = ParamCycle(1, n)
            for cl, vl in left.terms.items():
                rl, off = _term_eval(cl, at_t, 1)
                if rl is None:
                    continue
                for cr, vr in right.terms.items():
                    rr, _ = _term_eval(cr, at_t, off)
                    if rr is None:
                        continue
                    Z._accumulate(
                        weight * rl[0] * rr[0] * vl * vr, (head,) + rl[1] + rr[1]
                    )
            if not Z.is_zero():
                out.append(((pos, slot, eps), Z))
    return out
