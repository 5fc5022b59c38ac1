"""Weight vectors and colored multiplicity profiles."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Iterable, List, Sequence, Tuple

from .exact import Rat, as_rat, rat_str


class ProfileError(ValueError):
    """Raised for malformed or inadmissible profiles."""

    code = "inadmissible_profile"


class WeightVector(tuple):
    """A nonzero vector of rationals (one entry per color)."""

    def __new__(cls, entries: Iterable):
        if isinstance(entries, (int, Fraction, str)):
            entries = (entries,)
        vals = tuple(as_rat(e) for e in entries)
        if not vals:
            raise ProfileError("weight vector needs at least one color")
        if all(v == 0 for v in vals):
            raise ProfileError("weight vector must be nonzero")
        return super().__new__(cls, vals)

    @property
    def r(self) -> int:
        return len(self)

    def plus(self, other) -> "WeightVector":
        return tuple.__new__(WeightVector, tuple(as_rat(a + b) for a, b in zip(self, other)))

    def to_json(self) -> List[str]:
        return [rat_str(v) for v in self]

    def __repr__(self):
        return "(" + ",".join(rat_str(v) for v in self) + ")"


def vector_sum(vectors: Sequence[Sequence[Rat]], r: int) -> Tuple[Rat, ...]:
    tot = [0] * r
    for v in vectors:
        for i, a in enumerate(v):
            tot[i] += a
    return tuple(as_rat(t) for t in tot)


class ColoredProfile(tuple):
    """Ordered tuple of weight vectors sharing one color count."""

    def __new__(cls, vectors: Iterable):
        vecs = tuple(v if isinstance(v, WeightVector) else WeightVector(v) for v in vectors)
        if not vecs:
            raise ProfileError("profile must contain at least one weight vector")
        r = len(vecs[0])
        if any(len(v) != r for v in vecs):
            raise ProfileError("all weight vectors must have the same number of colors")
        return super().__new__(cls, vecs)

    @classmethod
    def uncolored(cls, weights: Iterable) -> "ColoredProfile":
        return cls([(w,) for w in weights])

    @property
    def k(self) -> int:
        return len(self)

    @property
    def r(self) -> int:
        return len(self[0])

    def total(self) -> Tuple[Rat, ...]:
        return vector_sum(self, self.r)

    def color(self, i: int) -> List[Rat]:
        return [v[i] for v in self]

    def to_json(self) -> List[List[str]]:
        return [v.to_json() for v in self]

    def __repr__(self):
        return "(" + ",".join(repr(v) for v in self) + ")"


def is_admissible(profile) -> bool:
    """True iff no nonempty sub-collection of the weight vectors sums to zero."""
    P = profile if isinstance(profile, ColoredProfile) else ColoredProfile(profile)
    zero = (0,) * P.r
    for size in range(1, P.k + 1):
        for sub in combinations(P, size):
            if vector_sum(sub, P.r) == zero:
                return False
    return True


def require_admissible(profile) -> ColoredProfile:
    P = profile if isinstance(profile, ColoredProfile) else ColoredProfile(profile)
    if not is_admissible(P):
        raise ProfileError(f"profile {P!r} has a sub-collection summing to zero")
    return P
