"""Explicit power-sum recursions from ideal-membership certificates.

An :class:`IdealCertificate` for ``k`` points writes ``D * x_1^w`` as
``sum_l G_l * p_l`` with ``D`` a product of partial weight sums.  Lifting to
``k + 1`` points substitutes a merged pair into the certificate for every pair
``i < j``; each substituted difference vanishes on ``x_i = x_j`` and so is a
multiple of ``x_i - x_j``.  Multiplying all of them (each pair twice) leaves
the squared Vandermonde product, which the Hankel determinant identity puts
back into the ideal.  Finally, Cayley-Hamilton on multiplication by ``x_1``
in the quotient by the certificates gives a monic polynomial killing every
``x_u``, hence a relation for ``p_{k w^k + 1}``.
"""

from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Dict, List, Optional, Tuple

from .exact import FractionPoly, SparsePoly, VarId, divexact, mvar, pvar, xvar
from .stabilization import RelationCertificate, graded_membership, relation_from_p_expression
from .weighted import WeightedContext, hankel_vandermonde, weighted_p


def _m(i: int) -> SparsePoly:
    return SparsePoly.var(mvar(i))


def _x(i: int) -> SparsePoly:
    return SparsePoly.var(xvar(i))


def _P(i: int) -> SparsePoly:
    return SparsePoly.var(pvar(i))


def _den_poly(factors: Counter) -> SparsePoly:
    out = SparsePoly.const(1)
    for f in sorted(factors, key=str):
        out = out * f ** factors[f]
    return out


@dataclass
class IdealCertificate:
    """``D * x_target^w = sum_l numerators[l-1] * p_l(m; x)`` with ``D = prod factors``."""

    k: int
    w: int
    numerators: List[SparsePoly]
    den_factors: Counter
    target: int = 1
    pair_quotients: Dict[Tuple[int, int], FractionPoly] = field(default_factory=dict)

    def denominator(self) -> SparsePoly:
        return _den_poly(self.den_factors)

    def coefficient(self, l: int) -> FractionPoly:
        return FractionPoly(self.numerators[l - 1], self.den_factors).reduced()

    def residual(self) -> SparsePoly:
        ctx = WeightedContext.symbolic(self.k)
        out = self.denominator() * _x(self.target) ** self.w
        for l, g in enumerate(self.numerators, start=1):
            if g:
                out = out - g * weighted_p(l, ctx)
        return out

    def verify(self) -> bool:
        return not self.residual()

    def permuted(self, u: int) -> "IdealCertificate":
        """The same certificate with points (and weights) ``target`` and ``u`` swapped."""
        if u == self.target:
            return self
        a, b = self.target, u
        bind = {mvar(a): _m(b), mvar(b): _m(a), xvar(a): _x(b), xvar(b): _x(a)}
        nums = [g.subs(bind) for g in self.numerators]
        den = Counter()
        for f, e in self.den_factors.items():
            den[f.subs(bind)] += e
        return IdealCertificate(self.k, self.w, nums, den, u)

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "w": self.w,
            "target": f"x{self.target}",
            "denominator_factors": [[str(f), e] for f, e in sorted(self.den_factors.items(), key=lambda t: str(t[0]))],
            "numerators": {f"p{l}": str(g) for l, g in enumerate(self.numerators, start=1) if g},
        }


def base_certificate() -> IdealCertificate:
    """``m_1 x_1 = p_1``."""
    cert = IdealCertificate(1, 1, [SparsePoly.const(1)], Counter({_m(1): 1}))
    assert cert.verify()
    return cert


def _strip_common(nums: List[SparsePoly], den: Counter) -> Tuple[List[SparsePoly], Counter]:
    den = Counter(den)
    for f in sorted(den, key=str):
        while den[f]:
            try:
                cand = [divexact(g, f) if g else g for g in nums]
            except ArithmeticError:
                break
            nums = cand
            den[f] -= 1
    return nums, +den


def lift_certificate(cert: IdealCertificate, *, time_budget: Optional[float] = None, allow_large: bool = False) -> IdealCertificate:
    """Certificate for ``k + 1`` points from one for ``k`` points; ``w`` grows by ``k(k+1)``.

    Lifting beyond three points is exponential; ``allow_large`` must be set
    for ``k >= 2`` and ``time_budget`` (seconds) aborts with ``TimeoutError``.
    """
    if cert.target != 1:
        raise ValueError("lift expects a certificate for x1")
    if cert.k >= 2 and not allow_large:
        raise ValueError("lifting past two points needs allow_large=True")
    start = time.monotonic()

    def check_budget():
        if time_budget is not None and time.monotonic() - start > time_budget:
            raise TimeoutError("lift exceeded its time budget")

    k, K, w = cert.k, cert.k + 1, cert.w
    ctx = WeightedContext.symbolic(K)
    P = {l: weighted_p(l, ctx) for l in range(0, 2 * K)}
    x1w = _x(1) ** w

    seq = []  # (D'_s, [G'_l], q_s, v_s)
    quotients: Dict[Tuple[int, int], FractionPoly] = {}
    for i, j in combinations(range(1, K + 1), 2):
        bind = {}
        for t in range(1, k + 1):
            idx = t if t < j else t + 1
            bind[mvar(t)] = _m(idx) + _m(j) if idx == i else _m(idx)
            bind[xvar(t)] = _x(idx)
        den = Counter()
        for f, e in cert.den_factors.items():
            den[f.subs(bind)] += e
        D = _den_poly(den)
        G = [g.subs(bind) for g in cert.numerators]
        E = D * x1w
        for l, g in enumerate(G, start=1):
            if g:
                E = E - g * P[l]
        if E.subs({xvar(i): _x(j)}):
            raise ArithmeticError(f"substituted certificate does not vanish on x{i} = x{j}")
        v = _x(i) - _x(j)
        q = divexact(E, v)
        quotients[(i, j)] = FractionPoly(q, den).reduced()
        check_budget()
        seq += [(den, G, q, v)] * 2

    n = len(seq)
    L = max(len(cert.numerators), 2 * K - 2)
    A = [_den_poly(d) * x1w for d, _, _, _ in seq]
    C = [q * v for _, _, q, v in seq]
    # suffix products of the a_s
    suffix = [SparsePoly.const(1)] * (n + 1)
    for s in range(n - 1, -1, -1):
        suffix[s] = A[s] * suffix[s + 1]
    H = [SparsePoly() for _ in range(L)]
    prefix = SparsePoly.const(1)
    for s, (_, G, _, _) in enumerate(seq):
        for l, g in enumerate(G):
            if g:
                H[l] = H[l] + prefix * g * suffix[s + 1]
        prefix = prefix * C[s]
        check_budget()

    qprod = SparsePoly.const(1)
    for _, _, q, _ in seq:
        qprod = qprod * q
    hank = hankel_vandermonde(K, ctx)
    bind_p = {pvar(l): P[l] for l in range(0, 2 * K - 1)}
    mprod = SparsePoly.const(1)
    for wgt in ctx.weights:
        mprod = mprod * wgt
    new = [mprod * h for h in H]
    for jdx, c in hank.decomposition.items():
        new[jdx - 1] = new[jdx - 1] + qprod * c.subs(bind_p)
    den = Counter()
    for d, _, _, _ in seq:
        den.update(d)
    for i in range(1, K + 1):
        den[_m(i)] += 1
    new, den = _strip_common(new, den)
    out = IdealCertificate(K, w * k * K, new, den, 1, quotients)
    check_budget()
    if not out.verify():
        raise ArithmeticError("lifted certificate failed verification")
    return out


# ---------------------------------------------------------------------------
# Cayley-Hamilton assembly

class _QuotientRing:
    """Reduction of polynomials in m, x, P modulo ``x_u^w = R_u / D``."""

    def __init__(self, cert: IdealCertificate):
        self.k = cert.k
        self.w = cert.w
        certs = [cert.permuted(u) for u in range(1, cert.k + 1)]
        common = Counter()
        for c in certs:
            common |= c.den_factors
        self.den = common
        self.D = _den_poly(common)
        self.rules = {}
        for u, c in enumerate(certs, start=1):
            extra = _den_poly(common - c.den_factors)
            R = SparsePoly()
            for l, g in enumerate(c.numerators, start=1):
                if g:
                    R = R + g * _P(l)
            self.rules[xvar(u).code] = R * extra
        self.x_codes = [xvar(u).code for u in range(1, cert.k + 1)]

    def reduce(self, num: SparsePoly) -> FractionPoly:
        den = Counter()
        w = self.w
        while True:
            good: Dict = {}
            bad = SparsePoly()
            for mono, c in num.terms.items():
                hit = None
                for code, e in mono:
                    if code in self.rules and e >= w:
                        hit = code
                        break
                if hit is None:
                    good[mono] = c
                    continue
                rest = []
                for code, e in mono:
                    if code == hit:
                        if e > w:
                            rest.append((code, e - w))
                    else:
                        rest.append((code, e))
                bad = bad + SparsePoly({tuple(rest): c}) * self.rules[hit]
            if not bad:
                return FractionPoly(num, den).reduced()
            num = SparsePoly(good) * self.D + bad
            den = den + self.den

    def basis(self) -> List[Tuple[int, ...]]:
        return list(product(range(self.w), repeat=self.k))

    def monomial(self, exps) -> SparsePoly:
        out = SparsePoly.const(1)
        for u, e in enumerate(exps, start=1):
            if e:
                out = out * _x(u) ** e
        return out

    def multiplication_matrix(self, u: int) -> List[List[FractionPoly]]:
        basis = self.basis()
        index = {b: i for i, b in enumerate(basis)}
        size = len(basis)
        M = [[FractionPoly(SparsePoly()) for _ in range(size)] for _ in range(size)]
        for col, b in enumerate(basis):
            red = self.reduce(self.monomial(b) * _x(u))
            for mono, coef in red.num.coefficients_in(self.x_codes).items():
                exps = [0] * self.k
                for code, e in mono:
                    exps[VarId.from_code(code).index - 1] = e
                row = index.get(tuple(exps))
                if row is None:
                    raise ArithmeticError("reduction left a monomial outside the basis")
                M[row][col] = FractionPoly(coef, red.den).reduced()
        return M


def charpoly(M: List[List[FractionPoly]]) -> List[FractionPoly]:
    """Characteristic polynomial ``det(X I - M)`` (coefficients, constant first), Faddeev-LeVerrier."""
    n = len(M)
    coeffs: List[Optional[FractionPoly]] = [None] * (n + 1)
    coeffs[n] = FractionPoly(SparsePoly.const(1))
    Mk = [[FractionPoly(SparsePoly()) for _ in range(n)] for _ in range(n)]
    for k in range(1, n + 1):
        AM = _matmul(M, Mk)
        for i in range(n):
            AM[i][i] = AM[i][i] + coeffs[n - k + 1]
        Mk = AM
        tr = FractionPoly(SparsePoly())
        AMk = _matmul(M, Mk)
        for i in range(n):
            tr = tr + AMk[i][i]
        coeffs[n - k] = FractionPoly(tr.num.scale(Fraction(-1, k)), tr.den).reduced()
    return coeffs


def _matmul(A, B):
    n = len(A)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = FractionPoly(SparsePoly())
            for t in range(n):
                if A[i][t].num and B[t][j].num:
                    acc = acc + A[i][t] * B[t][j]
            row.append(acc.reduced() if acc.num else acc)
        out.append(row)
    return out


def _poly_mul(a: List[FractionPoly], b: List[FractionPoly]) -> List[FractionPoly]:
    out = [FractionPoly(SparsePoly()) for _ in range(len(a) + len(b) - 1)]
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            if x.num and y.num:
                out[i + j] = out[i + j] + x * y
    return [c.reduced() for c in out]


@dataclass
class AnnihilatorPolynomial:
    """Monic ``h(X) = sum_a coefficients[a] X^a``; coefficients are rational in m, polynomial in p's."""

    k: int
    coefficients: List[FractionPoly]
    factors: List[List[FractionPoly]]
    verification: str = "none"

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def evaluate_at_point(self, u: int) -> FractionPoly:
        """``h(x_u)`` with each formal ``p_j`` replaced by the actual power sum."""
        ctx = WeightedContext.symbolic(self.k)
        top = max((_max_p(c.num) for c in self.coefficients), default=0)
        bind = {pvar(j): weighted_p(j, ctx) for j in range(1, top + 1)}
        total = FractionPoly(SparsePoly())
        for a, c in enumerate(self.coefficients):
            if c.num:
                total = total + c.subs(bind) * (_x(u) ** a)
        return total

    def to_json(self) -> dict:
        return {"k": self.k, "degree": self.degree, "coefficients": [str(c) for c in self.coefficients], "verification": self.verification}


def _max_p(p: SparsePoly) -> int:
    best = 0
    for mono in p.terms:
        for code, _ in mono:
            v = VarId.from_code(code)
            if v.kind == "p":
                best = max(best, v.index)
    return best


def assemble_annihilator(cert: IdealCertificate, *, verify: bool = True) -> AnnihilatorPolynomial:
    """Product over points of the characteristic polynomials of multiplication by ``x_u``."""
    if cert.k > 2:
        raise ValueError("annihilator assembly is limited to k <= 2")
    ring = _QuotientRing(cert)
    factors = [charpoly(ring.multiplication_matrix(u)) for u in range(1, cert.k + 1)]
    h = factors[0]
    for f in factors[1:]:
        h = _poly_mul(h, f)
    out = AnnihilatorPolynomial(cert.k, h, factors)
    if verify:
        for u in range(1, cert.k + 1):
            if not out.evaluate_at_point(u).is_zero():
                raise ArithmeticError(f"annihilator does not vanish at x{u}")
        out.verification = "symbolic"
    return out


def power_sum_recursion(source, *, verify: bool = True) -> RelationCertificate:
    """Relation for ``p_{D+1}`` from ``sum_u m_u x_u h(x_u) = 0`` with ``h`` of degree ``D``."""
    h = source if isinstance(source, AnnihilatorPolynomial) else assemble_annihilator(source)
    D = h.degree
    expr = FractionPoly(SparsePoly())
    for a in range(D):
        c = h.coefficients[a]
        if c.num:
            expr = expr - c * _P(a + 1)
    expr = expr.reduced()
    rel = relation_from_p_expression(expr, D + 1, h.k)
    if verify and not rel.verify():
        raise ArithmeticError("power-sum recursion failed verification")
    return rel


def cross_check(rel: RelationCertificate, weights) -> Dict[str, bool]:
    """Specialise ``rel`` and compare with an independent span computation."""
    num = rel.at_weights(weights)
    other = graded_membership(weights, rel.target)
    return {
        "specialised_relation_verifies": num.verify(),
        "independent_membership": other.member and other.verify(),
    }


def w_sequence(k: int) -> List[int]:
    """``w_1 = 1``, ``w_{j+1} = j (j+1) w_j``."""
    out = [1]
    for j in range(1, k):
        out.append(out[-1] * j * (j + 1))
    return out
