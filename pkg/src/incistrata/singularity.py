"""Branches and smoothness of colored strata on a curve.

At a point where the weight vectors collide into local multiplicities
``q_1..q_l``, branches correspond to ways of splitting the weight multiset into
groups ``G_1..G_l`` with ``sum(G_j) = q_j``.  A branch is immersed iff inside
each group the distinct vectors are linearly independent; a point is smooth
iff it has exactly one branch and that branch is immersed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

from .combinatorics import bell_number, compositions, multiset_counts
from .exact import as_rat, rat_str
from .linalg import rank
from .profiles import ColoredProfile, WeightVector, require_admissible, vector_sum

EXHAUSTION_BOUND = 12


class SumMismatch(ValueError):
    code = "sum_mismatch"


class ExhaustionBound(ValueError):
    code = "exhaustion_bound"


Group = Tuple[WeightVector, ...]
BranchSystem = Tuple[Group, ...]


def _profile(P) -> ColoredProfile:
    return P if isinstance(P, ColoredProfile) else ColoredProfile(P)


def _check_sums(P: ColoredProfile, Q: ColoredProfile):
    if P.r != Q.r:
        raise SumMismatch("profile and point profile have different color counts")
    if P.total() != Q.total():
        raise SumMismatch(f"weights sum to {P.total()} but local multiplicities sum to {Q.total()}")


def enumerate_branches(P, Q) -> List[BranchSystem]:
    """All branch systems: groups labelled by position in ``Q``, sorted inside."""
    P = require_admissible(_profile(P))
    Q = _profile(Q)
    _check_sums(P, Q)
    ell, r = Q.k, Q.r
    distinct = multiset_counts(list(P))
    out: List[BranchSystem] = []
    sums = [[0] * r for _ in range(ell)]
    groups: List[List[WeightVector]] = [[] for _ in range(ell)]

    def rec(idx: int):
        if idx == len(distinct):
            if all(tuple(as_rat(v) for v in sums[j]) == tuple(Q[j]) for j in range(ell)):
                out.append(tuple(tuple(sorted(g)) for g in groups))
            return
        vec, count = distinct[idx]
        for comp in compositions(count, ell):
            for j, c in enumerate(comp):
                if c:
                    groups[j].extend([vec] * c)
                    for a in range(r):
                        sums[j][a] += c * vec[a]
            rec(idx + 1)
            for j, c in enumerate(comp):
                if c:
                    del groups[j][-c:]
                    for a in range(r):
                        sums[j][a] -= c * vec[a]

    rec(0)
    return sorted(out)


def enumerate_branches_bruteforce(P, Q) -> List[BranchSystem]:
    """Reference enumerator: every labelled assignment of weights to groups, then dedup."""
    P = _profile(P)
    Q = _profile(Q)
    _check_sums(P, Q)
    found = set()
    for labels in product(range(Q.k), repeat=P.k):
        groups = [[] for _ in range(Q.k)]
        for vec, j in zip(P, labels):
            groups[j].append(vec)
        if all(vector_sum(g, Q.r) == tuple(Q[j]) for j, g in enumerate(groups)):
            found.add(tuple(tuple(sorted(g)) for g in groups))
    return sorted(found)


def branch_is_immersion(branch: BranchSystem) -> Tuple[bool, List[bool]]:
    """Per group, whether the distinct vectors are linearly independent."""
    flags = []
    for g in branch:
        distinct = sorted(set(g))
        flags.append(rank([list(v) for v in distinct]) == len(distinct))
    return all(flags), flags


@dataclass
class PointClassification:
    branch_count: int
    branches: List[BranchSystem]
    immersion: List[bool]
    group_flags: List[List[bool]] = field(default_factory=list)

    @property
    def smooth(self) -> bool:
        return self.branch_count == 1 and self.immersion[0]

    def to_json(self) -> dict:
        return {
            "branches": [[[list(map(rat_str, v)) for v in g] for g in b] for b in self.branches],
            "immersion": self.immersion,
            "smooth": self.smooth,
        }


def classify_point(P, Q) -> PointClassification:
    branches = enumerate_branches(P, Q)
    if not branches:
        raise SumMismatch("no way to split the weights into groups with these local multiplicities")
    details = [branch_is_immersion(b) for b in branches]
    return PointClassification(len(branches), branches, [d[0] for d in details], [d[1] for d in details])


def set_partitions_with_blocks(k: int, blocks: int):
    """Set partitions of ``{0..k-1}`` into exactly ``blocks`` blocks."""
    labels = [0] * k

    def rec(i: int, used: int):
        if k - i < blocks - used:
            return
        if i == k:
            if used == blocks:
                parts = [[] for _ in range(blocks)]
                for idx, b in enumerate(labels):
                    parts[b].append(idx)
                yield parts
            return
        for b in range(min(used + 1, blocks)):
            labels[i] = b
            yield from rec(i + 1, max(used, b + 1))

    if k == 0:
        if blocks == 0:
            yield []
        return
    yield from rec(0, 0)


@dataclass
class CodimResult:
    codim: Optional[int]  # None means smooth everywhere
    witness: Optional[ColoredProfile]
    classification: Optional[PointClassification] = None

    @property
    def smooth_everywhere(self) -> bool:
        return self.codim is None

    def to_json(self) -> dict:
        return {
            "codim": "smooth everywhere" if self.codim is None else self.codim,
            "witness": None if self.witness is None else self.witness.to_json(),
        }


def min_singular_codim(P) -> CodimResult:
    """Smallest ``k - l`` at which merging weights into ``l`` points gives a singular point."""
    P = require_admissible(_profile(P))
    k = P.k
    if k > EXHAUSTION_BOUND:
        raise ExhaustionBound(f"k={k} exceeds the exhaustion bound {EXHAUSTION_BOUND} (Bell number {bell_number(k)})")
    seen: Dict[Tuple, PointClassification] = {}
    for ell in range(k - 1, 0, -1):
        for blocks in set_partitions_with_blocks(k, ell):
            sums = [vector_sum([P[i] for i in b], P.r) for b in blocks]
            key = tuple(sorted(sums))
            if key in seen:
                continue
            Q = ColoredProfile(key)
            cls = classify_point(P, Q)
            seen[key] = cls
            if not cls.smooth:
                return CodimResult(k - ell, Q, cls)
    return CodimResult(None, None)


# ---------------------------------------------------------------------------
# Farb-Wolfson comparison

def farb_wolfson_profiles(d: int, n: int) -> Tuple[ColoredProfile, ColoredProfile]:
    """Rational-maps side (``n + 1`` colors) and polynomial side (uncolored) profiles."""
    if d < 2 or n < 2:
        raise ValueError("need d, n >= 2")
    r = n + 1
    rat = [tuple([1] * r)]
    for i in range(r):
        unit = tuple(1 if j == i else 0 for j in range(r))
        rat += [unit] * (d - 1)
    poly_side = [n + 1] + [1] * ((d - 1) * (n + 1))
    return ColoredProfile(rat), ColoredProfile.uncolored(poly_side)


def farb_wolfson_merge_witness(d: int, n: int) -> ColoredProfile:
    """All-ones twice plus each unit vector ``d - 2`` times (the unit vectors merged once)."""
    r = n + 1
    out = [tuple([1] * r)] * 2
    for i in range(r):
        out += [tuple(1 if j == i else 0 for j in range(r))] * (d - 2)
    return ColoredProfile(out)


def farb_wolfson_report(d: int, n: int) -> dict:
    rat, poly_side = farb_wolfson_profiles(d, n)
    cp = min_singular_codim(poly_side)
    cr = min_singular_codim(rat)
    out = {
        "d": d,
        "n": n,
        "codim_poly": cp.codim,
        "codim_rat": cr.codim,
        "verdict": "distinct" if cp.codim != cr.codim else "undetermined",
        "poly_witness": cp.witness.to_json() if cp.witness else None,
        "rat_witness": cr.witness.to_json() if cr.witness else None,
    }
    R = farb_wolfson_merge_witness(d, n)
    if cr.codim == n and not classify_point(rat, R).smooth:
        out["rat_merge_witness"] = R.to_json()
    return out


# ---------------------------------------------------------------------------
# Jacobian oracle

def _pmul(a: List[Fraction], b: List[Fraction]) -> List[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _ppow(a: List[Fraction], e: int) -> List[Fraction]:
    out = [Fraction(1)]
    for _ in range(e):
        out = _pmul(out, a)
    return out


def monic_from_roots(roots: Sequence) -> List[Fraction]:
    """Coefficients (highest degree first) of ``prod (z - c)``."""
    out = [Fraction(1)]
    for c in roots:
        out = _pmul(out, [Fraction(1), -Fraction(c)])
    return out


def jacobian_rank_oracle(weights: Sequence[Sequence[int]], polys: Sequence[Sequence]) -> int:
    """Rank of the differential of ``(F_1..F_t) -> (prod_s F_s^{(n_s)_j})_j``.

    ``weights[i]`` is the integer vector ``n_i``; ``polys[i]`` the coefficients
    (highest first, monic) of ``F_i`` with ``deg F_i = l_i``.  Row ``(i, u)``
    in color ``j`` is ``(n_i)_j z^(l_i - u) F_i^((n_i)_j - 1) prod_{s != i} F_s^((n_s)_j)``;
    a zero exponent gives a zero block.
    """
    t = len(weights)
    if len(polys) != t:
        raise ValueError("need one polynomial per distinct weight")
    r = len(weights[0])
    F = [[Fraction(c) for c in f] for f in polys]
    for f in F:
        if f[0] != 1:
            raise ValueError("point polynomials must be monic")
    for w in weights:
        if any(int(e) != e or e < 0 for e in w):
            raise ValueError("oracle needs non-negative integer weights")
    ells = [len(f) - 1 for f in F]
    rows = []
    for i in range(t):
        for u in range(1, ells[i] + 1):
            row: List[Fraction] = []
            for j in range(r):
                length = sum(ells[s] * weights[s][j] for s in range(t))
                e = int(weights[i][j])
                if e == 0:
                    row += [Fraction(0)] * max(length, 0)
                    continue
                shift = [Fraction(1)] + [Fraction(0)] * (ells[i] - u)
                block = _pmul([Fraction(e)], _pmul(shift, _ppow(F[i], e - 1)))
                for s in range(t):
                    if s != i and weights[s][j]:
                        block = _pmul(block, _ppow(F[s], int(weights[s][j])))
                # degree is length - 1; left-pad to fixed width
                block = [Fraction(0)] * (length - len(block)) + block
                row += block
            rows.append(row)
    if not rows or not rows[0]:
        return 0
    return rank(rows)


@dataclass
class OracleInstance:
    profile: ColoredProfile
    branch: BranchSystem
    roots: List[Fraction]
    distinct: List[WeightVector]
    polys: List[List[Fraction]]


def oracle_instance(branch: BranchSystem, roots: Sequence) -> OracleInstance:
    """Jacobian data for a branch whose group ``j`` sits at ``roots[j]``."""
    distinct = sorted({v for g in branch for v in g})
    polys = []
    for v in distinct:
        rs = []
        for g, c in zip(branch, roots):
            rs += [c] * sum(1 for x in g if x == v)
        polys.append(monic_from_roots(rs))
    profile = ColoredProfile([v for g in branch for v in g])
    return OracleInstance(profile, branch, [Fraction(c) for c in roots], distinct, polys)


def oracle_agrees(inst: OracleInstance) -> Tuple[bool, bool, int]:
    """``(agrees, immersion flag, oracle rank)``."""
    imm, _ = branch_is_immersion(inst.branch)
    rk = jacobian_rank_oracle([list(map(int, v)) for v in inst.distinct], inst.polys)
    full = sum(len(f) - 1 for f in inst.polys)
    return (rk == full) == imm, imm, rk


def random_oracle_suite(count: int = 60, seed: int = 0, max_k: int = 4, max_r: int = 2, max_entry: int = 5) -> List[OracleInstance]:
    """Seeded integer-weight instances with the weights placed at one or two points."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        k = rng.randint(1, max_k)
        r = rng.randint(1, max_r)
        ell = rng.randint(1, min(2, k))
        vecs = [WeightVector([rng.randint(1, max_entry) for _ in range(r)]) for _ in range(k)]
        labels = [rng.randrange(ell) for _ in range(k)]
        if len(set(labels)) < ell:
            continue
        groups = tuple(tuple(sorted(v for v, l in zip(vecs, labels) if l == j)) for j in range(ell))
        roots = [Fraction(rng.randint(-20, 20), rng.randint(1, 5)) for _ in range(ell)]
        if len(set(roots)) < ell:
            continue
        out.append(oracle_instance(groups, roots))
    return out
