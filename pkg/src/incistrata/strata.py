"""Weighted colored configurations and their coefficient embeddings."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .combinatorics import compositions
from .exact import Rat, as_rat, rat_str
from .profiles import ColoredProfile, ProfileError, WeightVector, is_admissible, require_admissible
from .weighted import WeightedContext, weighted_e_all

Point = Tuple[Rat, ...]


class ZeroWeightWarning(UserWarning):
    pass


@dataclass(frozen=True)
class Configuration:
    """Points of ``Q^n`` each carrying a weight vector in ``Q^r``."""

    n: int
    r: int
    entries: Tuple[Tuple[Point, Tuple[Rat, ...]], ...]

    @classmethod
    def make(cls, points: Sequence, weights: Sequence, n: Optional[int] = None, r: Optional[int] = None) -> "Configuration":
        if len(points) != len(weights):
            raise ValueError("need one weight per point")
        pts = [tuple(as_rat(c) for c in (p if isinstance(p, (list, tuple)) else (p,))) for p in points]
        ws = [tuple(as_rat(c) for c in (w if isinstance(w, (list, tuple)) else (w,))) for w in weights]
        n = n if n is not None else (len(pts[0]) if pts else 1)
        r = r if r is not None else (len(ws[0]) if ws else 1)
        if any(len(p) != n for p in pts) or any(len(w) != r for w in ws):
            raise ValueError("inconsistent point or weight dimensions")
        return cls(n, r, tuple(zip(pts, ws)))

    @property
    def points(self) -> List[Point]:
        return [p for p, _ in self.entries]

    @property
    def weights(self) -> List[Tuple[Rat, ...]]:
        return [w for _, w in self.entries]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "r": self.r,
            "points": [[rat_str(c) for c in p] for p in self.points],
            "weights": [[rat_str(c) for c in w] for w in self.weights],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "Configuration":
        return cls.make(doc["points"], doc["weights"], doc.get("n"), doc.get("r"))


def canonicalize(c: Configuration) -> Configuration:
    """Merge equal points by adding weights, drop zero totals (with a warning), sort by point."""
    merged = {}
    for p, w in c.entries:
        if p in merged:
            merged[p] = tuple(as_rat(a + b) for a, b in zip(merged[p], w))
        else:
            merged[p] = tuple(w)
    out = []
    for p in sorted(merged):
        w = merged[p]
        if all(v == 0 for v in w):
            warnings.warn(f"weights at point {p} cancel; dropping it", ZeroWeightWarning, stacklevel=2)
            continue
        out.append((p, w))
    return Configuration(c.n, c.r, tuple(out))


def configs_equal(a: Configuration, b: Configuration) -> bool:
    if a.n != b.n or a.r != b.r:
        raise ValueError("configurations live in different spaces")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ZeroWeightWarning)
        return canonicalize(a).entries == canonicalize(b).entries


@dataclass
class EmbeddingVector:
    """Per color, the embedding coordinates (length ``N`` each for curves)."""

    N: int
    colors: List[List[Rat]]
    monomials: Optional[List[Tuple[int, ...]]] = None

    def flat(self) -> List[Rat]:
        return [v for col in self.colors for v in col]

    def to_json(self) -> List[List[str]]:
        return [[rat_str(v) for v in col] for col in self.colors]

    def __eq__(self, other):
        return isinstance(other, EmbeddingVector) and self.N == other.N and self.colors == other.colors


def embed_configuration(c: Configuration, N: int) -> EmbeddingVector:
    """Signed coefficients ``(-1)^j e_j``, ``j = 1..N``, of ``prod_t (z - x_t)^{w_t}`` per color."""
    if c.n != 1:
        raise ValueError("coefficient embedding needs points on the line")
    if N < 1:
        raise ValueError("truncation must be positive")
    cols = []
    for i in range(c.r):
        if not c.entries:
            cols.append([0] * N)
            continue
        ctx = WeightedContext.make([w[i] for w in c.weights], [p[0] for p in c.points])
        es = weighted_e_all(N, ctx)
        cols.append([as_rat(es[j].constant_value() if es[j] else 0) * (-1) ** j for j in range(1, N + 1)])
    return EmbeddingVector(N, cols)


def monomial_exponents(n: int, N: int) -> List[Tuple[int, ...]]:
    """Exponent vectors ``s`` with ``1 <= |s| <= N`` in ``n`` variables, by degree."""
    out = []
    for d in range(1, N + 1):
        out.extend(compositions(d, n))
    return out


def embed_configuration_an(c: Configuration, N: int) -> EmbeddingVector:
    """Coordinates ``sum_t (w_t)_i * x_t^s`` for every monomial ``s`` of degree ``1..N``."""
    if N < 1:
        raise ValueError("truncation must be positive")
    monos = monomial_exponents(c.n, N)
    cols = []
    for i in range(c.r):
        col = []
        for s in monos:
            tot = Fraction(0)
            for p, w in c.entries:
                if w[i]:
                    term = Fraction(w[i])
                    for coord, e in zip(p, s):
                        if e:
                            term *= Fraction(coord) ** e
                    tot += term
            col.append(as_rat(tot))
        cols.append(col)
    return EmbeddingVector(N, cols, monos)


def cubic_discriminant(a1: Rat, a2: Rat, a3: Rat) -> Rat:
    """Discriminant of ``z^3 + a1 z^2 + a2 z + a3``."""
    a1, a2, a3 = Fraction(a1), Fraction(a2), Fraction(a3)
    return as_rat(a1 ** 2 * a2 ** 2 + 18 * a1 * a2 * a3 - 4 * a2 ** 3 - 4 * a1 ** 3 * a3 - 27 * a3 ** 2)


def discriminant_member(c) -> bool:
    """Whether a one-color curve embedding (or configuration) lies on the double-root locus."""
    emb = c if isinstance(c, EmbeddingVector) else embed_configuration(c, 3)
    if len(emb.colors) != 1 or emb.N < 3:
        raise ValueError("need a single color truncated at N >= 3")
    a1, a2, a3 = emb.colors[0][:3]
    return cubic_discriminant(a1, a2, a3) == 0


def default_truncation(k: int) -> int:
    return 2 ** k - 1


__all__ = [
    "Configuration",
    "ColoredProfile",
    "EmbeddingVector",
    "ProfileError",
    "WeightVector",
    "ZeroWeightWarning",
    "canonicalize",
    "configs_equal",
    "cubic_discriminant",
    "default_truncation",
    "discriminant_member",
    "embed_configuration",
    "embed_configuration_an",
    "is_admissible",
    "monomial_exponents",
    "require_admissible",
]
