"""Sequences (a0; a1, ..., an; a(n+1)) and their cuts.

A sequence is the basic generator: two basepoints around an interior
word.  Every entry is a FieldElement.  Each sequence also carries an
index support, the original positions its entries occupy inside the
ancestral generator; cut enumeration is bookkept on those indices, and
two cuts are the same cut exactly when their ordered support tuples
agree.  Equality and hashing of Sequence itself ignore the support and
compare entries, which is what algebra monomials and bar words need.
"""

from __future__ import annotations

from typing import Iterable, List, Optional, Tuple

from ..errors import ParseError
from ..exact import FieldElement, parse_field

Support = Tuple[int, Tuple[int, ...], int]


def _coerce_entry(x) -> FieldElement:
    out = FieldElement._coerce(x)
    if out is None:
        raise TypeError(f"sequence entries must be field elements, got {x!r}")
    return out


class Sequence:
    __slots__ = ("left", "interior", "right", "support", "_hash")

    def __init__(self, left, interior: Iterable, right, support: Optional[Support] = None):
        self.left = _coerce_entry(left)
        self.interior = tuple(_coerce_entry(x) for x in interior)
        self.right = _coerce_entry(right)
        if not self.interior:
            raise ValueError("a sequence needs at least one interior entry")
        n = len(self.interior)
        if support is None:
            support = (0, tuple(range(1, n + 1)), n + 1)
        if len(support[1]) != n:
            raise ValueError("support does not match the interior length")
        self.support = support
        self._hash = None

    # -- gradings --------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.interior)

    @property
    def adams(self) -> int:
        return self.n

    degree = 1  # cohomological degree of every generator

    def is_vanishing(self) -> bool:
        """True when both basepoints agree; such generators are 0."""
        return self.left == self.right

    # -- views -------------------------------------------------------------

    def entries(self) -> Tuple[FieldElement, ...]:
        return (self.left,) + self.interior + (self.right,)

    def indices(self) -> Tuple[int, ...]:
        l, mid, r = self.support
        return (l,) + mid + (r,)

    def is_consecutive(self) -> bool:
        l, mid, r = self.support
        return mid == tuple(range(l + 1, r)) and r == l + len(mid) + 1

    def reversed(self) -> "Sequence":
        l, mid, r = self.support
        return Sequence(
            self.right, tuple(reversed(self.interior)), self.left,
            support=(r, tuple(reversed(mid)), l),
        )

    # -- identity ------------------------------------------------------------

    def value_key(self):
        return (
            self.left.sort_key(),
            tuple(x.sort_key() for x in self.interior),
            self.right.sort_key(),
        )

    def full_key(self):
        return (self.value_key(), self.support)

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, Sequence):
            return NotImplemented
        return (
            self.left == other.left
            and self.interior == other.interior
            and self.right == other.right
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.left, self.interior, self.right))
        return self._hash

    def __str__(self) -> str:
        mid = ",".join(str(x) for x in self.interior)
        return f"{self.left};{mid};{self.right}"

    def __repr__(self) -> str:
        return f"({self})"


def parse_sequence(text: str) -> Sequence:
    """Parse the sequence literal, e.g. ``0;1,0;z``."""
    parts = text.split(";")
    if len(parts) != 3:
        raise ParseError(f"a sequence literal needs two ';': {text!r}")
    left = parse_field(parts[0])
    right = parse_field(parts[2])
    mid = [p for p in parts[1].split(",")]
    if len(mid) == 1 and not mid[0].strip():
        raise ParseError(f"empty interior in sequence literal {text!r}")
    return Sequence(left, [parse_field(p) for p in mid], right)


# ---------------------------------------------------------------------------
# cuts


Cut = Tuple[Sequence, ...]


def two_cuts(seq: Sequence) -> List[Tuple[Sequence, Sequence]]:
    """All 2-cuts of a sequence, one per pair 0 <= i < j <= n, (i,j) != (0,n).

    The first output keeps a_i and drops a_(i+1)..a_j; the second is the
    excised run (a_i; a_(i+1), ..., a_j; a_(j+1)).
    """
    n = seq.n
    ent = seq.entries()
    idx = seq.indices()
    out = []
    for i in range(0, n + 1):
        for j in range(i + 1, n + 1):
            if i == 0 and j == n:
                continue
            kept = Sequence(
                ent[0],
                ent[1 : i + 1] + ent[j + 1 : n + 1],
                ent[n + 1],
                support=(idx[0], idx[1 : i + 1] + idx[j + 1 : n + 1], idx[n + 1]),
            )
            cut_out = Sequence(
                ent[i],
                ent[i + 1 : j + 1],
                ent[j + 1],
                support=(idx[i], idx[i + 1 : j + 1], idx[j + 1]),
            )
            out.append((kept, cut_out))
    return out


_CUTS_MEMO: dict = {}


def all_cuts(seq: Sequence) -> List[Cut]:
    """Every cut of ``seq``: the 1-cut plus all iterated 2-cut refinements.

    A k-cut is obtained from a (k-1)-cut by replacing one piece with its
    2-cut in place.  Distinct derivation orders that produce the same
    ordered tuple of supports count once.
    """
    memo_key = seq.full_key()
    cached = _CUTS_MEMO.get(memo_key)
    if cached is not None:
        return cached
    root: Cut = (seq,)
    seen = {_cut_support_key(root)}
    order = [root]
    frontier = [root]
    while frontier:
        next_frontier = []
        for cut in frontier:
            for p, piece in enumerate(cut):
                for kept, excised in two_cuts(piece):
                    refined = cut[:p] + (kept, excised) + cut[p + 1 :]
                    key = _cut_support_key(refined)
                    if key not in seen:
                        seen.add(key)
                        order.append(refined)
                        next_frontier.append(refined)
        frontier = next_frontier
    _CUTS_MEMO[memo_key] = order
    return order


def _cut_support_key(cut: Cut):
    return tuple(p.support for p in cut)


def elementary_cuts(seq: Sequence) -> List[Cut]:
    """Cuts whose pieces after the first are runs of consecutive elements."""
    return [
        cut
        for cut in all_cuts(seq)
        if all(p.is_consecutive() for p in cut[1:])
    ]
