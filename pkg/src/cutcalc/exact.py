"""Exact rational functions over Q and small exact linear algebra.

Everything downstream (cut sequences, bar words, cycle coordinates,
relation ideals) sits on the two value types defined here:

* ``FieldElement``: a rational function in named indeterminates with
  Fraction coefficients, kept in a canonical form (numerator and
  denominator coprime, denominator monic under graded lex).  Equality of
  values is equality of representations, so these can be dict keys.
* ``LinearSpan``: an incrementally row-reduced span of sparse vectors
  over Q with arbitrary sortable labels, used for ideal membership.

Names are treated as generic points: two distinct names are never equal
as field elements and a name never equals a rational constant.  That is
what makes genericity hypotheses decidable downstream.
"""

from __future__ import annotations

import functools
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Union

from sympy.polys.domains import QQ
from sympy.polys.rings import ring as _sympy_ring

from .errors import (
    DimensionMismatch,
    DivisionByZero,
    NonAffine,
    NonConstantLeadingCoefficient,
    ParseError,
)

__all__ = [
    "Poly",
    "FieldElement",
    "ZERO",
    "ONE",
    "rat",
    "var",
    "parse_field",
    "substitute",
    "Target",
    "Unique",
    "NoSolution",
    "Identical",
    "NO_SOLUTION",
    "IDENTICAL",
    "solve_affine",
    "LinearSpan",
    "InSpan",
    "NotInSpan",
    "span_reduce",
    "generic_rref",
]

_F0 = Fraction(0)
_F1 = Fraction(1)

# A monomial is a tuple of (name, exponent) pairs, names strictly
# ascending, exponents positive.  The empty tuple is the unit monomial.
Monomial = tuple

_UNIT: Monomial = ()

_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    acc = dict(m1)
    for name, exp in m2:
        acc[name] = acc.get(name, 0) + exp
    return tuple(sorted(acc.items()))


def _mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def _grlex_cmp(m1: Monomial, m2: Monomial) -> int:
    """Graded lexicographic comparison; earlier names take precedence."""
    d1, d2 = _mono_degree(m1), _mono_degree(m2)
    if d1 != d2:
        return 1 if d1 > d2 else -1
    i = j = 0
    while i < len(m1) or j < len(m2):
        if i == len(m1):
            return -1
        if j == len(m2):
            return 1
        n1, e1 = m1[i]
        n2, e2 = m2[j]
        if n1 == n2:
            if e1 != e2:
                return 1 if e1 > e2 else -1
            i += 1
            j += 1
        elif n1 < n2:
            return 1
        else:
            return -1
    return 0


_grlex_key = functools.cmp_to_key(_grlex_cmp)


class Poly:
    """Sparse multivariate polynomial over Fraction.

    ``terms`` maps monomials to nonzero coefficients.  Instances are
    immutable by convention; nothing mutates ``terms`` after init.
    """

    __slots__ = ("terms", "_frozen", "_hash")

    def __init__(self, terms: dict):
        self.terms = terms
        self._frozen = None
        self._hash = None

    # -- constructors -------------------------------------------------

    @staticmethod
    def const(c) -> "Poly":
        c = Fraction(c)
        return Poly({_UNIT: c}) if c else P_ZERO

    @staticmethod
    def variable(name: str) -> "Poly":
        if not _NAME_RE.match(name):
            raise ParseError(f"bad indeterminate name: {name!r}")
        return Poly({((name, 1),): _F1})

    @staticmethod
    def from_frozen(frozen) -> "Poly":
        return Poly(dict(frozen))

    # -- predicates ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and _UNIT in self.terms)

    def constant_value(self) -> Fraction:
        if not self.terms:
            return _F0
        if len(self.terms) == 1 and _UNIT in self.terms:
            return self.terms[_UNIT]
        raise ValueError(f"not a constant polynomial: {self}")

    # -- structure -----------------------------------------------------

    def vars(self) -> set:
        out = set()
        for mono in self.terms:
            for name, _ in mono:
                out.add(name)
        return out

    def degree(self) -> int:
        if not self.terms:
            return 0
        return max(_mono_degree(m) for m in self.terms)

    def degree_in(self, name: str) -> int:
        best = 0
        for mono in self.terms:
            for nm, exp in mono:
                if nm == name and exp > best:
                    best = exp
        return best

    def coeffs_in(self, name: str) -> dict:
        """Group terms by the exponent of ``name``: {exp: Poly}."""
        buckets: dict = {}
        for mono, c in self.terms.items():
            e = 0
            rest = []
            for nm, exp in mono:
                if nm == name:
                    e = exp
                else:
                    rest.append((nm, exp))
            buckets.setdefault(e, {})[tuple(rest)] = c
        return {e: Poly(d) for e, d in buckets.items()}

    def min_exponents(self) -> dict:
        """Per-variable minimum exponent over all terms (monomial content)."""
        if not self.terms:
            return {}
        content: Optional[dict] = None
        for mono in self.terms:
            cur = dict(mono)
            if content is None:
                content = cur
                continue
            content = {
                nm: min(e, cur[nm]) for nm, e in content.items() if nm in cur
            }
            if not content:
                return {}
        return {nm: e for nm, e in (content or {}).items() if e > 0}

    def divide_monomial(self, mono: Monomial) -> "Poly":
        drop = dict(mono)
        out = {}
        for m, c in self.terms.items():
            kept = []
            for nm, exp in m:
                exp -= drop.get(nm, 0)
                if exp < 0:
                    raise ValueError("monomial does not divide all terms")
                if exp:
                    kept.append((nm, exp))
            out[tuple(kept)] = c
        return Poly(out)

    def leading_term(self):
        """(monomial, coefficient) maximal under graded lex."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        mono = max(self.terms, key=_grlex_key)
        return mono, self.terms[mono]

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other: "Poly") -> "Poly":
        if not self.terms:
            return other
        if not other.terms:
            return self
        out = dict(self.terms)
        for mono, c in other.terms.items():
            nv = out.get(mono, _F0) + c
            if nv:
                out[mono] = nv
            else:
                out.pop(mono, None)
        return Poly(out)

    def __neg__(self) -> "Poly":
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        if not self.terms or not other.terms:
            return P_ZERO
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = _mono_mul(m1, m2)
                nv = out.get(mono, _F0) + c1 * c2
                if nv:
                    out[mono] = nv
                else:
                    out.pop(mono, None)
        return Poly(out)

    def scale(self, c) -> "Poly":
        c = Fraction(c)
        if not c:
            return P_ZERO
        if c == 1:
            return self
        return Poly({m: c * v for m, v in self.terms.items()})

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        acc = P_ONE
        for _ in range(n):
            acc = acc * self
        return acc

    # -- identity ------------------------------------------------------

    def frozen(self):
        if self._frozen is None:
            self._frozen = tuple(sorted(self.terms.items()))
        return self._frozen

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, Poly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.frozen())
        return self._hash

    # -- rendering -------------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        monos = sorted(self.terms, key=_grlex_key, reverse=True)
        chunks = []
        for i, mono in enumerate(monos):
            c = self.terms[mono]
            body = "*".join(nm for nm, exp in mono for _ in range(exp))
            mag = abs(c)
            if body and mag == 1:
                text = body
            elif body:
                text = f"{mag}*{body}"
            else:
                text = str(mag)
            if i == 0:
                chunks.append(f"-{text}" if c < 0 else text)
            else:
                chunks.append(f" - {text}" if c < 0 else f" + {text}")
        return "".join(chunks)

    __repr__ = __str__


P_ZERO = Poly({})
P_ONE = Poly({_UNIT: _F1})


# ---------------------------------------------------------------------------
# gcd cancellation through sympy's sparse polynomial rings


@functools.lru_cache(maxsize=None)
def _ring_for(names: tuple):
    return _sympy_ring(",".join(names), QQ)[0]


def _to_ring(R, names: tuple, frozen):
    index = {nm: i for i, nm in enumerate(names)}
    data = {}
    for mono, coeff in frozen:
        exps = [0] * len(names)
        for nm, e in mono:
            exps[index[nm]] = e
        data[tuple(exps)] = QQ(coeff.numerator, coeff.denominator)
    return R.from_dict(data)


def _from_ring(names: tuple, element) -> Poly:
    terms = {}
    for exps, coeff in element.terms():
        mono = tuple((names[i], e) for i, e in enumerate(exps) if e)
        terms[mono] = Fraction(int(coeff.numerator), int(coeff.denominator))
    return Poly(terms)


@functools.lru_cache(maxsize=1 << 17)
def _cancel_frozen(num_frozen, den_frozen):
    names = set()
    for mono, _ in num_frozen:
        for nm, _ in mono:
            names.add(nm)
    for mono, _ in den_frozen:
        for nm, _ in mono:
            names.add(nm)
    ordered = tuple(sorted(names))
    R = _ring_for(ordered)
    p = _to_ring(R, ordered, num_frozen)
    q = _to_ring(R, ordered, den_frozen)
    g = p.gcd(q)
    p = p.quo(g)
    q = q.quo(g)
    return _from_ring(ordered, p).frozen(), _from_ring(ordered, q).frozen()


def _cancel(num: Poly, den: Poly):
    nf, df = _cancel_frozen(num.frozen(), den.frozen())
    return Poly.from_frozen(nf), Poly.from_frozen(df)


# ---------------------------------------------------------------------------
# field elements


class FieldElement:
    """Canonical rational function over Q in named indeterminates.

    Do not call the constructor directly with uncanonical data; go
    through :func:`rat`, :func:`var`, :func:`parse_field`, or arithmetic.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: Poly, den: Poly):
        self.num = num
        self.den = den
        self._hash = None

    # -- canonical construction ---------------------------------------

    @staticmethod
    def make(num: Poly, den: Poly) -> "FieldElement":
        if den.is_zero():
            raise DivisionByZero("denominator is identically zero")
        if num.is_zero():
            return ZERO
        cn = num.min_exponents()
        cd = den.min_exponents()
        common = {}
        for nm, e in cn.items():
            e2 = cd.get(nm, 0)
            if e2:
                common[nm] = min(e, e2)
        if common:
            mono = tuple(sorted(common.items()))
            num = num.divide_monomial(mono)
            den = den.divide_monomial(mono)
        if den.is_constant():
            c = den.constant_value()
            return FieldElement(num if c == 1 else num.scale(1 / c), P_ONE)
        if not num.is_constant():
            num, den = _cancel(num, den)
            if den.is_constant():
                c = den.constant_value()
                return FieldElement(num if c == 1 else num.scale(1 / c), P_ONE)
        _, lc = den.leading_term()
        if lc != 1:
            inv = 1 / lc
            num = num.scale(inv)
            den = den.scale(inv)
        return FieldElement(num, den)

    # -- predicates ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.num.terms

    def is_one(self) -> bool:
        return self.num == P_ONE and self.den == P_ONE

    def is_rational(self) -> bool:
        return self.num.is_constant() and self.den == P_ONE

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"not a rational constant: {self}")
        return self.num.constant_value()

    def vars(self) -> set:
        return self.num.vars() | self.den.vars()

    def degree_in(self, name: str) -> int:
        return max(self.num.degree_in(name), self.den.degree_in(name))

    # -- arithmetic ----------------------------------------------------

    @staticmethod
    def _coerce(x) -> Optional["FieldElement"]:
        if isinstance(x, FieldElement):
            return x
        if isinstance(x, (int, Fraction)):
            return rat(x)
        return None

    def __add__(self, other):
        o = FieldElement._coerce(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return FieldElement.make(self.num + o.num, self.den)
        return FieldElement.make(
            self.num * o.den + o.num * self.den, self.den * o.den
        )

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(-self.num, self.den)

    def __sub__(self, other):
        o = FieldElement._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = FieldElement._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = FieldElement._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement.make(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = FieldElement._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise DivisionByZero("division by the zero field element")
        return FieldElement.make(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = FieldElement._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, n: int):
        if n == 0:
            return ONE
        base = self
        if n < 0:
            if self.is_zero():
                raise DivisionByZero("negative power of zero")
            base = ONE / self
            n = -n
        acc = ONE
        for _ in range(n):
            acc = acc * base
        return acc

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -- substitution ----------------------------------------------------

    def substitute(self, name: str, value) -> "FieldElement":
        """Exact substitution of ``value`` for the indeterminate ``name``.

        Raises DivisionByZero when the denominator collapses to zero;
        face-restriction callers read that as the point at infinity.
        """
        if name not in self.vars():
            return self
        g = FieldElement._coerce(value)
        if g is None:
            raise TypeError(f"cannot substitute value of type {type(value)!r}")
        d = max(self.num.degree_in(name), self.den.degree_in(name))
        pn = [P_ONE]
        pd = [P_ONE]
        for _ in range(d):
            pn.append(pn[-1] * g.num)
            pd.append(pd[-1] * g.den)

        def compose(p: Poly) -> Poly:
            acc = P_ZERO
            for e, coeff in p.coeffs_in(name).items():
                acc = acc + coeff * pn[e] * pd[d - e]
            return acc

        num2 = compose(self.num)
        den2 = compose(self.den)
        if den2.is_zero():
            raise DivisionByZero(
                f"substitution {name} := {g} sends the denominator to zero"
            )
        return FieldElement.make(num2, den2)

    def substitute_many(self, mapping: Mapping[str, "FieldElement"]):
        """Simultaneous substitution (order-independent)."""
        if not mapping:
            return self
        used = set(self.vars())
        for v in mapping.values():
            g = FieldElement._coerce(v)
            if g is not None:
                used |= g.vars()
        temps = {}
        k = 0
        for name in sorted(mapping):
            while f"tmp{k}_" in used:
                k += 1
            temps[name] = f"tmp{k}_"
            k += 1
        out = self
        for name, tmp in temps.items():
            out = out.substitute(name, var(tmp))
        for name, tmp in temps.items():
            out = out.substitute(tmp, mapping[name])
        return out

    # -- identity ------------------------------------------------------

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.num.frozen(), self.den.frozen()))
        return self._hash

    def sort_key(self):
        """Deterministic total-order key (structural, not numeric)."""
        return (self.num.frozen(), self.den.frozen())

    # -- rendering -------------------------------------------------------

    def __str__(self) -> str:
        if self.den == P_ONE:
            return str(self.num)
        num = str(self.num)
        if len(self.num.terms) > 1:
            num = f"({num})"
        return f"{num}/({self.den})"

    __repr__ = __str__


ZERO = FieldElement(P_ZERO, P_ONE)
ONE = FieldElement(P_ONE, P_ONE)


def rat(p, q=1) -> FieldElement:
    """Rational constant as a field element."""
    c = Fraction(p, q)
    if not c:
        return ZERO
    return FieldElement(Poly({_UNIT: c}), P_ONE)


def var(name: str) -> FieldElement:
    """Named indeterminate (a generic point) as a field element."""
    return FieldElement(Poly.variable(name), P_ONE)


def substitute(f: FieldElement, name: str, g) -> FieldElement:
    return f.substitute(name, g)


# ---------------------------------------------------------------------------
# affine solving


class Target(Enum):
    ZERO = "zero"
    INFINITY = "infinity"


@dataclass(frozen=True)
class Unique:
    value: FieldElement


class NoSolution:
    __slots__ = ()

    def __repr__(self):
        return "NoSolution"


class Identical:
    __slots__ = ()

    def __repr__(self):
        return "Identical"


NO_SOLUTION = NoSolution()
IDENTICAL = Identical()


def solve_affine(f: FieldElement, name: str, target: Target):
    """Solve f(name) = 0 or f(name) = infinity for a degree <= 1 input.

    Unique(g) carries the exact preimage; Identical means f sits at the
    target no matter what; NoSolution means no finite substitution works.
    Coprimality of the canonical form rules out 0/0 at the returned
    point, so Unique really is a clean hit of the target.
    """
    if f.num.degree_in(name) > 1 or f.den.degree_in(name) > 1:
        raise NonAffine(f"degree in {name} exceeds 1: {f}")
    side = f.num if target is Target.ZERO else f.den
    parts = side.coeffs_in(name)
    lead = parts.get(1)
    if lead is None:
        if target is Target.ZERO and side.is_zero():
            return IDENTICAL
        return NO_SOLUTION
    if not lead.is_constant():
        raise NonConstantLeadingCoefficient(
            f"leading coefficient of {side} in {name} is {lead}"
        )
    a = lead.constant_value()
    b = parts.get(0, P_ZERO)
    return Unique(FieldElement.make(-b, Poly({_UNIT: a})))


# ---------------------------------------------------------------------------
# linear algebra


class LinearSpan:
    """Row-reduced span of sparse Q-vectors with sortable labels.

    Rows are kept in reduced row echelon form: each row is normalized to
    pivot coefficient 1 and no row contains another row's pivot label.
    With ``track_combos`` every row remembers how it was built from the
    added vectors, which is what certificates are made of.
    """

    def __init__(self, track_combos: bool = False):
        self._rows: dict = {}
        self._combos: Optional[dict] = {} if track_combos else None
        self._added = 0

    @property
    def rank(self) -> int:
        return len(self._rows)

    @property
    def added(self) -> int:
        return self._added

    def pivot_labels(self):
        return set(self._rows)

    def _reduce(self, vec: Mapping):
        residual = {}
        for lbl, c in vec.items():
            c = Fraction(c)
            if c:
                residual[lbl] = c
        combo: Optional[dict] = {} if self._combos is not None else None
        for lbl in sorted(residual):
            c = residual.get(lbl)
            if not c:
                continue
            row = self._rows.get(lbl)
            if row is None:
                continue
            for l2, c2 in row.items():
                nv = residual.get(l2, _F0) - c * c2
                if nv:
                    residual[l2] = nv
                else:
                    residual.pop(l2, None)
            if combo is not None:
                for idx, c2 in self._combos[lbl].items():
                    nv = combo.get(idx, _F0) + c * c2
                    if nv:
                        combo[idx] = nv
                    else:
                        combo.pop(idx, None)
        return residual, combo

    def reduce(self, vec: Mapping) -> dict:
        """Residual of ``vec`` against the span (empty dict iff member)."""
        return self._reduce(vec)[0]

    def certificate(self, vec: Mapping):
        """(residual, combination) with vec = combination + residual.

        The combination maps insertion indices of added vectors to
        coefficients.  Requires track_combos=True.
        """
        if self._combos is None:
            raise ValueError("this span does not track combinations")
        return self._reduce(vec)

    def contains(self, vec: Mapping) -> bool:
        return not self._reduce(vec)[0]

    def add(self, vec: Mapping) -> bool:
        """Insert a vector; True when the rank grew."""
        residual, combo = self._reduce(vec)
        j = self._added
        self._added += 1
        if not residual:
            return False
        pivot = min(residual)
        c = residual[pivot]
        row = {l: v / c for l, v in residual.items()}
        if self._combos is not None:
            cb = {i: -v / c for i, v in (combo or {}).items()}
            cb[j] = cb.get(j, _F0) + 1 / c
        for p, r in self._rows.items():
            k = r.get(pivot)
            if not k:
                continue
            for l2, c2 in row.items():
                nv = r.get(l2, _F0) - k * c2
                if nv:
                    r[l2] = nv
                else:
                    r.pop(l2, None)
            if self._combos is not None:
                rc = self._combos[p]
                for idx, c2 in cb.items():
                    nv = rc.get(idx, _F0) - k * c2
                    if nv:
                        rc[idx] = nv
                    else:
                        rc.pop(idx, None)
        self._rows[pivot] = row
        if self._combos is not None:
            self._combos[pivot] = cb
        return True


@dataclass(frozen=True)
class InSpan:
    coefficients: tuple


@dataclass(frozen=True)
class NotInSpan:
    residual: tuple


def span_reduce(vectors: Iterable, v) -> Union[InSpan, NotInSpan]:
    """Exact membership of v in the span of the given dense vectors."""
    vecs = [tuple(Fraction(x) for x in w) for w in vectors]
    target = tuple(Fraction(x) for x in v)
    dim = len(target)
    for w in vecs:
        if len(w) != dim:
            raise DimensionMismatch(
                f"vector of length {len(w)} in a span of dimension {dim}"
            )
    span = LinearSpan(track_combos=True)
    for w in vecs:
        span.add({i: c for i, c in enumerate(w) if c})
    residual, combo = span.certificate({i: c for i, c in enumerate(target) if c})
    if residual:
        out = [_F0] * dim
        for i, c in residual.items():
            out[i] = c
        return NotInSpan(tuple(out))
    coeffs = [_F0] * len(vecs)
    for i, c in (combo or {}).items():
        coeffs[i] = c
    return InSpan(tuple(coeffs))


def generic_rref(rows, *, one):
    """Dense RREF over any exact field.

    Entries need +, -, *, / and truthiness; ``one`` is the field's unit.
    Returns (reduced rows, pivot column indices).
    """
    mat = [list(r) for r in rows]
    if not mat:
        return mat, []
    width = len(mat[0])
    for r in mat:
        if len(r) != width:
            raise DimensionMismatch("ragged matrix")
    pivots = []
    rank = 0
    for col in range(width):
        sel = None
        for i in range(rank, len(mat)):
            if mat[i][col]:
                sel = i
                break
        if sel is None:
            continue
        mat[rank], mat[sel] = mat[sel], mat[rank]
        inv = one / mat[rank][col]
        mat[rank] = [inv * x for x in mat[rank]]
        for i in range(len(mat)):
            if i != rank and mat[i][col]:
                k = mat[i][col]
                mat[i] = [a - k * b for a, b in zip(mat[i], mat[rank])]
        pivots.append(col)
        rank += 1
    return mat, pivots


# ---------------------------------------------------------------------------
# literal parser: rationals, names, + - * / ( )


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z][A-Za-z0-9_]*)|(?P<op>[()+\-*/]))"
)


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            if text[pos:].strip():
                raise ParseError(f"bad character at {pos}: {text[pos:]!r}")
            break
        if m.group("int") is not None:
            tokens.append(("int", int(m.group("int"))))
        elif m.group("name") is not None:
            tokens.append(("name", m.group("name")))
        else:
            tokens.append(("op", m.group("op")))
        pos = m.end()
    return tokens


class _FieldParser:
    def __init__(self, tokens, text: str):
        self.tokens = tokens
        self.pos = 0
        self.text = text

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self):
        tok = self.peek()
        if tok is None:
            raise ParseError(f"unexpected end of input in {self.text!r}")
        self.pos += 1
        return tok

    def expr(self) -> FieldElement:
        acc = self.term()
        while True:
            tok = self.peek()
            if tok is None or tok[0] != "op" or tok[1] not in "+-":
                return acc
            self.take()
            rhs = self.term()
            acc = acc + rhs if tok[1] == "+" else acc - rhs

    def term(self) -> FieldElement:
        acc = self.unary()
        while True:
            tok = self.peek()
            if tok is None or tok[0] != "op" or tok[1] not in "*/":
                return acc
            self.take()
            rhs = self.unary()
            acc = acc * rhs if tok[1] == "*" else acc / rhs

    def unary(self) -> FieldElement:
        tok = self.peek()
        if tok is not None and tok[0] == "op" and tok[1] in "+-":
            self.take()
            inner = self.unary()
            return inner if tok[1] == "+" else -inner
        return self.primary()

    def primary(self) -> FieldElement:
        kind, value = self.take()
        if kind == "int":
            return rat(value)
        if kind == "name":
            return var(value)
        if kind == "op" and value == "(":
            inner = self.expr()
            tok = self.take()
            if tok != ("op", ")"):
                raise ParseError(f"expected ')' in {self.text!r}")
            return inner
        raise ParseError(f"unexpected token {value!r} in {self.text!r}")


def parse_field(text: str) -> FieldElement:
    """Parse the field-element literal grammar.

    >>> parse_field("(s - t)/(c - t) + 1/2")
    (1/2*c + s - 3/2*t)/(c - t)
    """
    parser = _FieldParser(_tokenize(text), text)
    out = parser.expr()
    if parser.peek() is not None:
        raise ParseError(f"trailing input in {text!r}")
    return out
