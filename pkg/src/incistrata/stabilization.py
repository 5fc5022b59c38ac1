"""Stabilization of the weighted power-sum algebra.

For weights ``w_1..w_k`` the algebra generated by ``p_1, p_2, ...`` is graded
by degree.  ``p_n`` is redundant exactly when it lies in the span of the
products ``p_lam = p_{lam_1} p_{lam_2} ...`` over partitions ``lam`` of ``n``
with at least two parts.  One redundancy propagates to every higher degree
through the first-order substitution ``x_u -> x_u + eps x_u^t``, so the
stabilization index ``N`` is one less than the first redundant degree.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb, lcm
from typing import Dict, List, Optional, Sequence, Tuple

from .combinatorics import Partition, compositions, parse_partition, partition_str, proper_partitions
from .exact import FractionPoly, Rat, SparsePoly, VarId, as_rat, gen_binomial, mvar, parse_poly, poly, pvar, rat_str, xvar
from .linalg import ParametricResult, SpanCertificate, express_in_span, parametric_express_in_span
from .profiles import ColoredProfile, require_admissible
from .weighted import WeightedContext, weighted_e_all, weighted_p

log = logging.getLogger(__name__)


class CapExceeded(RuntimeError):
    code = "cap_exceeded"

    def __init__(self, message: str, witnesses=None):
        super().__init__(message)
        self.witnesses = witnesses or []


# ---------------------------------------------------------------------------
# numeric power-sum products on integer-scaled weights

def _normalise_weights(weights: Sequence) -> Tuple[Tuple[Rat, ...], List[int], int]:
    ws = tuple(as_rat(w) for w in weights)
    require_admissible(ColoredProfile.uncolored(ws))
    c = lcm(1, *[Fraction(w).denominator for w in ws])
    return ws, [int(w * c) for w in ws], c


class PowerSumTable:
    """Coefficient vectors of products of power sums for fixed integer weights.

    Exponent vectors are packed into one integer in base ``max_degree + 1``;
    products are cached by partition.
    """

    def __init__(self, int_weights: Sequence[int], max_degree: int):
        self.w = list(int_weights)
        self.k = len(self.w)
        self.base = max_degree + 1
        self.max_degree = max_degree
        self._shift = [self.base ** t for t in range(self.k)]
        self._cache: Dict[Partition, Dict[int, int]] = {}
        self._bases: Dict[int, Tuple[List[Tuple[int, ...]], Dict[int, int]]] = {}

    def power(self, j: int) -> Dict[int, int]:
        return {j * s: w for s, w in zip(self._shift, self.w)}

    def product(self, lam: Partition) -> Dict[int, int]:
        got = self._cache.get(lam)
        if got is not None:
            return got
        if len(lam) == 1:
            out = self.power(lam[0])
        else:
            head = self.product(lam[:-1])
            j = lam[-1]
            out: Dict[int, int] = {}
            for code, c in head.items():
                for s, w in zip(self._shift, self.w):
                    key = code + j * s
                    out[key] = out.get(key, 0) + c * w
        self._cache[lam] = out
        return out

    def basis(self, n: int) -> Tuple[List[Tuple[int, ...]], Dict[int, int]]:
        got = self._bases.get(n)
        if got is None:
            monos = list(compositions(n, self.k))
            index = {sum(e * s for e, s in zip(m, self._shift)): i for i, m in enumerate(monos)}
            got = self._bases[n] = (monos, index)
        return got

    def vector(self, lam: Partition) -> List[int]:
        monos, index = self.basis(sum(lam))
        vec = [0] * len(monos)
        for code, c in self.product(lam).items():
            vec[index[code]] = c
        return vec


def _mono_text(exps: Sequence[int]) -> str:
    parts = []
    for t, e in enumerate(exps, start=1):
        if e:
            parts.append(f"x{t}" + (f"^{e}" if e > 1 else ""))
    return "*".join(parts) or "1"


# ---------------------------------------------------------------------------
# certificates

@dataclass
class GradedCertificate:
    """Result of one degree-``n`` membership test, with what is needed to re-check it."""

    weights: Tuple[Rat, ...]
    n: int
    partitions: List[Partition]
    monomials: List[Tuple[int, ...]]
    span: SpanCertificate

    @property
    def member(self) -> bool:
        return self.span.member

    def verify(self) -> bool:
        _, iw, c = _normalise_weights(self.weights)
        table = PowerSumTable(iw, self.n)
        target = table.vector((self.n,))
        spanners = [table.vector(lam) for lam in self.partitions]
        if self.member:
            # coefficients are stored for the original weights; rescale to the integer ones
            scaled = [Fraction(a) / Fraction(c) ** (len(lam) - 1) for a, lam in zip(self.span.coefficients, self.partitions)]
            return SpanCertificate(True, coefficients=scaled).verify(target, spanners)
        return self.span.verify(target, spanners)

    def to_json(self) -> dict:
        out = {"degree": self.n, "member": self.member}
        if self.member:
            out["coefficients"] = {partition_str(l): rat_str(a) for l, a in zip(self.partitions, self.span.coefficients) if a}
        else:
            out["witness"] = {_mono_text(self.monomials[i]): rat_str(v) for i, v in sorted(self.span.witness.items())}
        return out


def graded_membership(weights: Sequence, n: int, _table: Optional[PowerSumTable] = None) -> GradedCertificate:
    """Test whether ``p_n`` lies in the span of products of lower power sums."""
    if n < 1:
        raise ValueError("degree must be positive")
    ws, iw, c = _normalise_weights(weights)
    table = _table or PowerSumTable(iw, n)
    parts = proper_partitions(n)
    target = table.vector((n,))
    spanners = [table.vector(lam) for lam in parts]
    monos, _ = table.basis(n)
    if spanners:
        cert = express_in_span(target, spanners)
    else:
        nz = [i for i, v in enumerate(target) if v]
        cert = SpanCertificate(False, witness={nz[0]: 1}) if nz else SpanCertificate(True, coefficients=[])
    if cert.member:
        coeffs = [as_rat(Fraction(a) * Fraction(c) ** (len(lam) - 1)) for a, lam in zip(cert.coefficients, parts)]
        cert = SpanCertificate(True, coefficients=coeffs)
    return GradedCertificate(ws, n, parts, monos, cert)


@dataclass
class RelationCertificate:
    """``cleared_denominator * p_target = sum_lam combination[lam] * p_lam``.

    ``weights`` is a tuple of rationals, or ``None`` for the generic weights
    ``m_1..m_k`` (then coefficients are polynomials in the m's).
    """

    k: int
    target: int
    combination: Dict[Partition, SparsePoly]
    weights: Optional[Tuple[Rat, ...]] = None
    cleared_denominator: SparsePoly = field(default_factory=lambda: SparsePoly.const(1))
    denominator_factors: Dict[SparsePoly, int] = field(default_factory=dict)

    @property
    def symbolic(self) -> bool:
        return self.weights is None

    def coefficient(self, lam: Partition):
        num = self.combination.get(lam, SparsePoly())
        if not self.symbolic:
            return as_rat(Fraction(num.constant_value() if num else 0) / Fraction(self.cleared_denominator.constant_value()))
        return FractionPoly(num, Counter(self.denominator_factors) if self.denominator_factors else Counter({self.cleared_denominator: 1})).reduced()

    def context(self) -> WeightedContext:
        if self.symbolic:
            return WeightedContext.symbolic(self.k)
        return WeightedContext.make(self.weights)

    def p_relation(self) -> SparsePoly:
        """``D P_n - sum N_lam P_lam`` in the formal symbols p1, p2, ..."""
        out = self.cleared_denominator * SparsePoly.var(pvar(self.target))
        for lam, num in self.combination.items():
            term = num
            for part in lam:
                term = term * SparsePoly.var(pvar(part))
            out = out - term
        return out

    def verify(self) -> bool:
        for lam in self.combination:
            if sum(lam) != self.target or (lam and max(lam) >= self.target):
                return False
        if not self.symbolic:
            ws, iw, c = _normalise_weights(self.weights)
            table = PowerSumTable(iw, self.target)
            D = Fraction(self.cleared_denominator.constant_value())
            acc: Dict[int, Fraction] = {}
            for lam, num in self.combination.items():
                a = Fraction(num.constant_value()) / D / Fraction(c) ** (len(lam) - 1)
                for code, v in table.product(lam).items():
                    acc[code] = acc.get(code, 0) + a * v
            want = table.product((self.target,))
            keys = set(acc) | set(want)
            return all(acc.get(q, 0) == want.get(q, 0) for q in keys)
        ctx = self.context()
        powers = {j: weighted_p(j, ctx) for j in range(1, self.target + 1)}
        cache: Dict[Partition, SparsePoly] = {}

        def prod(lam):
            got = cache.get(lam)
            if got is None:
                got = powers[lam[0]] if len(lam) == 1 else prod(lam[:-1]) * powers[lam[-1]]
                cache[lam] = got
            return got

        rhs = SparsePoly()
        for lam, num in self.combination.items():
            if num:
                rhs = rhs + num * prod(lam)
        return rhs == self.cleared_denominator * powers[self.target]

    def at_weights(self, weights: Sequence) -> "RelationCertificate":
        """Specialise a symbolic certificate to numeric weights."""
        if not self.symbolic:
            raise ValueError("certificate is already numeric")
        ws = tuple(as_rat(w) for w in weights)
        bind = {mvar(i + 1): w for i, w in enumerate(ws)}
        D = self.cleared_denominator.evaluate(bind)
        if D == 0:
            raise ZeroDivisionError("cleared denominator vanishes at these weights")
        comb = {lam: SparsePoly.const(as_rat(Fraction(n.evaluate(bind)) / D)) for lam, n in self.combination.items()}
        return RelationCertificate(self.k, self.target, {l: v for l, v in comb.items() if v}, ws)

    def to_json(self) -> dict:
        out = {
            "k": self.k,
            "target": self.target,
            "weights": None if self.symbolic else [rat_str(w) for w in self.weights],
            "cleared_denominator": str(self.cleared_denominator),
            "combination": {partition_str(l): str(n) for l, n in sorted(self.combination.items(), reverse=True) if n},
        }
        if self.denominator_factors:
            out["denominator_factors"] = [[str(f), e] for f, e in sorted(self.denominator_factors.items(), key=lambda t: str(t[0]))]
        return out

    @classmethod
    def from_json(cls, doc: dict) -> "RelationCertificate":
        weights = None if doc.get("weights") is None else tuple(as_rat(w) for w in doc["weights"])
        comb = {parse_partition(l): parse_poly(v) for l, v in doc["combination"].items()}
        D = parse_poly(doc.get("cleared_denominator", "1"))
        factors = {parse_poly(f): int(e) for f, e in doc.get("denominator_factors", [])}
        return cls(int(doc["k"]), int(doc["target"]), comb, weights, D, factors)


def relation_from_p_expression(expr, target: int, k: int, weights=None, den_factors: Optional[Dict] = None) -> RelationCertificate:
    """Build a certificate from ``p_target = expr`` where ``expr`` is polynomial in formal p's.

    ``expr`` may be a :class:`FractionPoly` whose denominator involves only parameters.
    """
    if isinstance(expr, FractionPoly):
        num, factors = expr.num, dict(expr.den)
    else:
        num, factors = poly(expr), dict(den_factors or {})
    p_codes = {pvar(j).code for j in range(1, target + 1)}
    comb: Dict[Partition, SparsePoly] = {}
    for mono, coef in num.coefficients_in(p_codes).items():
        lam = []
        for code, e in mono:
            lam += [VarId.from_code(code).index] * e
        lam = tuple(sorted(lam, reverse=True))
        if sum(lam) != target or (lam and lam[0] >= target):
            raise ArithmeticError(f"expression is not a relation for p{target}: term {lam}")
        comb[lam] = comb.get(lam, SparsePoly()) + coef
    D = SparsePoly.const(1)
    for f, e in sorted(factors.items(), key=lambda t: str(t[0])):
        D = D * f ** e
    if weights is not None and not D.is_constant():
        raise ValueError("numeric certificate with a non-constant denominator")
    if weights is not None:
        d = D.constant_value()
        comb = {l: n.scale(Fraction(1) / Fraction(d)) for l, n in comb.items()}
        D, factors = SparsePoly.const(1), {}
    return RelationCertificate(k, target, {l: n for l, n in comb.items() if n}, weights, D, factors)


@dataclass
class NkResult:
    weights: Tuple[Rat, ...]
    N: int
    non_membership_witnesses: List[GradedCertificate]
    membership: RelationCertificate
    membership_check: GradedCertificate

    def verify(self) -> bool:
        return all(w.verify() and not w.member for w in self.non_membership_witnesses) and self.membership.verify()

    def to_json(self) -> dict:
        return {
            "weights": [rat_str(w) for w in self.weights],
            "N": self.N,
            "certificate": {partition_str(l): str(n) for l, n in sorted(self.membership.combination.items(), reverse=True)},
            "certificate_target": self.membership.target,
            "witnesses": [w.to_json() for w in self.non_membership_witnesses],
        }


def compute_nk(weights: Sequence, degree_cap: Optional[int] = None) -> NkResult:
    """Least ``N`` with ``p_1..p_N`` independent generators and ``p_{N+1}`` redundant.

    A single redundancy at ``N + 1`` certifies stabilization, so the search
    stops there.  ``degree_cap`` defaults to ``2**k``.
    """
    ws, iw, c = _normalise_weights(weights)
    k = len(ws)
    cap = degree_cap if degree_cap is not None else 2 ** k
    if cap < 2:
        raise ValueError("degree cap must be at least 2")
    table = PowerSumTable(iw, cap)
    witnesses: List[GradedCertificate] = []
    for n in range(1, cap + 1):
        g = graded_membership(ws, n, _table=table)
        log.debug("weights %s degree %d member=%s", ws, n, g.member)
        if g.member:
            comb = {lam: SparsePoly.const(a) for lam, a in zip(g.partitions, g.span.coefficients) if a}
            rel = RelationCertificate(k, n, comb, ws)
            return NkResult(ws, n - 1, witnesses, rel, g)
        witnesses.append(g)
    raise CapExceeded(f"stabilization index not determined below degree cap {cap}", witnesses)


# ---------------------------------------------------------------------------
# propagation

def _p_index_max(expr: SparsePoly) -> int:
    best = 0
    for mono in expr.terms:
        for code, _ in mono:
            v = VarId.from_code(code)
            if v.kind == "p":
                best = max(best, v.index)
    return best


def _eliminate(num: SparsePoly, den: Counter, index: int, rel_num: SparsePoly, rel_den: Counter) -> Tuple[SparsePoly, Counter]:
    """Replace ``P_index`` by ``rel_num / rel_den`` in ``num / den``."""
    code = pvar(index).code
    split = num.coefficients_in([code])
    top = max(sum(e for _, e in mono) for mono in split)
    D = SparsePoly.const(1)
    for f, e in rel_den.items():
        D = D * f ** e
    out = SparsePoly()
    for mono, coef in split.items():
        e = sum(x for _, x in mono)
        out = out + coef * rel_num ** e * D ** (top - e)
    new_den = Counter(den)
    for f, e in rel_den.items():
        new_den[f] += e * top
    return out, new_den


def propagate_relation(cert: RelationCertificate, t: int, reduce: bool = True) -> RelationCertificate:
    """A relation for ``p_{t+i}`` from one for ``p_{i+1}``.

    Uses ``(i+1) p_{t+i} = sum_{j<=i} j * (d g / d p_j) * p_{t+j-1}``.  With
    ``reduce`` every power sum above ``p_i`` is rewritten recursively so
    the result involves only ``p_1..p_i``.
    """
    if t < 1:
        raise ValueError("t must be positive")
    i = cert.target - 1
    base_den = Counter(cert.denominator_factors) if cert.denominator_factors else (
        Counter() if cert.cleared_denominator.is_constant() and cert.cleared_denominator.constant_value() == 1 else Counter({cert.cleared_denominator: 1}))
    if not cert.symbolic:
        base_den = Counter()
    G = SparsePoly()
    for lam, num in cert.combination.items():
        term = num if cert.symbolic else num.scale(Fraction(1) / Fraction(cert.cleared_denominator.constant_value()))
        for part in lam:
            term = term * SparsePoly.var(pvar(part))
        G = G + term
    if t == 1:
        return relation_from_p_expression(FractionPoly(G, base_den), cert.target, cert.k, cert.weights)

    rels: Dict[int, Tuple[SparsePoly, Counter]] = {i + 1: (G, base_den)}

    def relation_for(target: int) -> Tuple[SparsePoly, Counter]:
        got = rels.get(target)
        if got is not None:
            return got
        s = target - i
        expr = SparsePoly()
        for j in range(1, i + 1):
            d = G.diff(pvar(j))
            if d:
                expr = expr + d.scale(j) * SparsePoly.var(pvar(s + j - 1))
        num, den = expr.scale(Fraction(1, i + 1)), Counter(base_den)
        if reduce:
            while True:
                top = _p_index_max(num)
                if top <= i:
                    break
                rn, rd = relation_for(top)
                num, den = _eliminate(num, den, top, rn, rd)
        fp = FractionPoly(num, den).reduced()
        rels[target] = (fp.num, fp.den)
        return rels[target]

    num, den = relation_for(t + i)
    out = relation_from_p_expression(FractionPoly(num, den), t + i, cert.k, cert.weights)
    if not out.verify():
        raise ArithmeticError("propagated relation failed verification")
    return out


# ---------------------------------------------------------------------------
# symbolic identities

def _p(n, ctx):
    return weighted_p(n, ctx)


def _partial_sums(k: int) -> List[SparsePoly]:
    out = []
    for size in range(1, k + 1):
        for sub in combinations(range(1, k + 1), size):
            s = SparsePoly()
            for i in sub:
                s = s + SparsePoly.var(mvar(i))
            out.append(s)
    return out


def n2_identity_residual(literal: bool = False) -> SparsePoly:
    """Residual of the degree-4 two-point relation.

    The valid form is
    ``m1 m2 ((m1+m2) p4 - 4 p1 p3 + 3 p2^2) = ((m1+m2) p2 - p1^2)^2``;
    with ``literal=True`` the factor ``m1 m2`` is omitted, which leaves the
    nonzero residual ``(m1 m2 - m1^2 m2^2)(x1 - x2)^4``.
    """
    ctx = WeightedContext.symbolic(2)
    m1, m2 = ctx.weights
    s = m1 + m2
    left = s * _p(4, ctx) - 4 * _p(1, ctx) * _p(3, ctx) + 3 * _p(2, ctx) ** 2
    if not literal:
        left = m1 * m2 * left
    return left - (s * _p(2, ctx) - _p(1, ctx) ** 2) ** 2


def verify_known_identities() -> Dict[str, bool]:
    """Expand each listed identity; every value must be ``True``."""
    ctx = WeightedContext.symbolic(2)
    m1, m2 = ctx.weights
    x1, x2 = ctx.points
    s = m1 + m2
    p1, p2, p3 = (_p(j, ctx) for j in (1, 2, 3))
    report: Dict[str, bool] = {}
    report["degree4_two_point_relation"] = not n2_identity_residual()
    sq = s * p2 - p1 ** 2
    report["two_point_square_difference"] = sq == m1 * m2 * (x1 - x2) ** 2
    cube = -(s ** 2 * p3 - 3 * s * p1 * p2 + 2 * p1 ** 3)
    report["two_point_cube_difference"] = cube == m1 * m2 * (m1 - m2) * (x1 - x2) ** 3

    # cusp parametrisation: x = v^2, y = (m1 - m2) v^3, both in the generic form and via the p's
    v = SparsePoly.var(xvar(3))
    X, Y = v ** 2, (m1 - m2) * v ** 3
    report["cusp_parametrisation"] = not (Y ** 2 - (m1 - m2) ** 2 * X ** 3)
    # the same curve through the power sums: scale out m1 m2
    Xp, Yp = sq, cube
    report["cusp_from_power_sums"] = (m1 * m2) * Yp ** 2 == (m1 - m2) ** 2 * Xp ** 3

    for a in (2, 3):
        actx = WeightedContext.make([a, a])
        es = weighted_e_all(3, actx)
        b1, b2, b3 = -es[1], es[2], -es[3]
        inv = Fraction(1, a)
        rel = gen_binomial(inv, 1) * b3 + gen_binomial(inv, 2) * (2 * b1 * b2) + gen_binomial(inv, 3) * b1 ** 3
        report[f"equal_weight_binomial_relation_a{a}"] = not rel

    from .weighted import hankel_vandermonde, newton_recurrence_holds

    for t in (2, 3):
        try:
            report[f"hankel_vandermonde_t{t}"] = hankel_vandermonde(t).verified
        except ArithmeticError:
            report[f"hankel_vandermonde_t{t}"] = False
    for k in (1, 2, 3):
        sctx = WeightedContext.symbolic(k)
        report[f"newton_recurrence_k{k}"] = all(newton_recurrence_holds(n, sctx) for n in range(1, 7))
    return report


def embedding_dim_bound(n: int, r: int, Nk: int) -> int:
    """``r * (C(n + Nk, n) - 1)``: the number of nonconstant monomial coordinates per color."""
    if n < 1 or r < 1 or Nk < 1:
        raise ValueError("n, r and Nk must be positive")
    return r * (comb(n + Nk, n) - 1)


# ---------------------------------------------------------------------------
# symbolic search

@dataclass
class SymbolicRelationResult:
    status: str  # member / non_member / inconclusive
    certificate: Optional[RelationCertificate]
    search: ParametricResult

    def to_json(self) -> dict:
        out = {"status": self.status, "detail": self.search.detail}
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
        if self.search.sample_witnesses:
            out["sample_points"] = [{str(v): rat_str(c) for v, c in pt.items()} for pt, _ in self.search.sample_witnesses]
        return out


def symbolic_nk_relation(k: int, target_degree: int, *, degree_cap: int = 12, seed: int = 0, max_exponent: int = 2) -> SymbolicRelationResult:
    """Search for ``p_n`` in the span of lower products over Q(m_1..m_k)."""
    if k < 1:
        raise ValueError("k must be positive")
    n = target_degree
    ctx = WeightedContext.symbolic(k)
    powers = {j: weighted_p(j, ctx) for j in range(1, n + 1)}
    parts = proper_partitions(n)
    cache: Dict[Partition, SparsePoly] = {}

    def prod(lam):
        got = cache.get(lam)
        if got is None:
            got = powers[lam[0]] if len(lam) == 1 else prod(lam[:-1]) * powers[lam[-1]]
            cache[lam] = got
        return got

    def coeff_vec(p: SparsePoly, monos):
        pc = p.point_coefficients()
        return [pc.get(m, SparsePoly()) for m in monos]

    all_polys = [powers[n]] + [prod(l) for l in parts]
    monos = sorted({m for q in all_polys for m in q.point_coefficients()})
    target = coeff_vec(powers[n], monos)
    spanners = [coeff_vec(prod(l), monos) for l in parts]
    allow = _partial_sums(k)
    res = parametric_express_in_span(target, spanners, [mvar(i) for i in range(1, k + 1)], allow,
                                     degree_cap=degree_cap, seed=seed, max_exponent=max_exponent)
    if res.status != "member":
        return SymbolicRelationResult(res.status, None, res)
    comb = {lam: num for lam, num in zip(parts, res.numerators) if num}
    cert = RelationCertificate(k, n, comb, None, res.denominator, dict(res.denominator_factors))
    if not cert.verify():
        raise ArithmeticError("reconstructed symbolic relation failed verification")
    return SymbolicRelationResult("member", cert, res)
