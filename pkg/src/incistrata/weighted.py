"""Weighted symmetric functions.

For weights ``y_1..y_k`` and points ``x_1..x_k`` the weighted elementary
polynomials are the coefficients of ``prod_t (1 - x_t u)^{y_t}`` up to sign,

    e_n = sum over i_1 + ... + i_k = n of prod_t binom(y_t, i_t) x_t^{i_t},

and the weighted power sums are ``p_n = sum_t y_t x_t^n`` with
``p_0 = y_1 + ... + y_k``.  Newton's recurrence holds verbatim:
``n e_n = sum_{i=1..n} (-1)^(i-1) e_{n-i} p_i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from typing import Dict, List, Optional, Sequence, Tuple

from .exact import SparsePoly, VarId, as_rat, binom_value, evar, mvar, poly, pvar, xvar
from .profiles import ColoredProfile, require_admissible


@dataclass(frozen=True)
class WeightedContext:
    """One color's weights and the points they sit on (symbolic or numeric)."""

    weights: Tuple[SparsePoly, ...]
    points: Tuple[SparsePoly, ...]

    def __post_init__(self):
        if len(self.weights) != len(self.points) or not self.weights:
            raise ValueError("need k >= 1 weights and exactly as many points")

    @property
    def k(self) -> int:
        return len(self.weights)

    @classmethod
    def symbolic(cls, k: int) -> "WeightedContext":
        return cls(tuple(SparsePoly.var(mvar(i)) for i in range(1, k + 1)), tuple(SparsePoly.var(xvar(i)) for i in range(1, k + 1)))

    @classmethod
    def make(cls, weights: Sequence, points: Optional[Sequence] = None) -> "WeightedContext":
        ws = tuple(poly(as_rat(w) if isinstance(w, str) else w) for w in weights)
        if points is None:
            pts = tuple(SparsePoly.var(xvar(i)) for i in range(1, len(ws) + 1))
        else:
            pts = tuple(poly(as_rat(p) if isinstance(p, str) else p) for p in points)
        return cls(ws, pts)

    def weight_sum(self) -> SparsePoly:
        out = SparsePoly()
        for w in self.weights:
            out = out + w
        return out


def _binom_poly(y: SparsePoly, i: int) -> SparsePoly:
    if y.is_constant():
        return SparsePoly.const(binom_value(y.constant_value(), i))
    out = SparsePoly.const(1)
    for j in range(i):
        out = out * (y - j)
    return out.scale(Fraction(1, _fact(i)))


def _fact(i: int) -> int:
    f = 1
    for j in range(2, i + 1):
        f *= j
    return f


def weighted_e_all(N: int, ctx: WeightedContext) -> List[SparsePoly]:
    """``[e_0, e_1, ..., e_N]`` by multiplying the per-point truncated series."""
    series = [SparsePoly.const(1)] + [SparsePoly()] * N
    for y, x in zip(ctx.weights, ctx.points):
        factor = [_binom_poly(y, i) * x ** i for i in range(N + 1)]
        new = [SparsePoly()] * (N + 1)
        for a, sa in enumerate(series):
            if not sa:
                continue
            for b in range(N + 1 - a):
                if factor[b]:
                    new[a + b] = new[a + b] + sa * factor[b]
        series = new
    return series


def weighted_e(n: int, ctx: WeightedContext) -> SparsePoly:
    if n < 0:
        raise ValueError("n must be non-negative")
    return weighted_e_all(n, ctx)[n]


def weighted_p(n: int, ctx: WeightedContext) -> SparsePoly:
    """Weighted power sum; ``p_0`` is the weight sum."""
    if n < 0:
        raise ValueError("n must be non-negative")
    out = SparsePoly()
    for y, x in zip(ctx.weights, ctx.points):
        out = out + y * x ** n
    return out


def newton_e_in_p(N: int) -> List[SparsePoly]:
    """``e_1..e_N`` as polynomials in the formal symbols p1, p2, ..."""
    e = [SparsePoly.const(1)]
    P = [None] + [SparsePoly.var(pvar(i)) for i in range(1, N + 1)]
    for n in range(1, N + 1):
        acc = SparsePoly()
        for i in range(1, n + 1):
            term = e[n - i] * P[i]
            acc = acc + term if i % 2 else acc - term
        e.append(acc.scale(Fraction(1, n)))
    return e[1:]


def newton_p_in_e(N: int) -> List[SparsePoly]:
    """``p_1..p_N`` as polynomials in the formal symbols e1, e2, ..."""
    E = [SparsePoly.const(1)] + [SparsePoly.var(evar(i)) for i in range(1, N + 1)]
    p: List[Optional[SparsePoly]] = [None]
    for n in range(1, N + 1):
        # solve n e_n = sum_{i<n} (-1)^(i-1) e_{n-i} p_i + (-1)^(n-1) p_n
        acc = E[n].scale(n)
        for i in range(1, n):
            term = E[n - i] * p[i]
            acc = acc - term if i % 2 else acc + term
        p.append(acc if n % 2 else -acc)
    return p[1:]


def _bind_symbols(ctx: WeightedContext, N: int, kind: str) -> Dict[VarId, SparsePoly]:
    if kind == "p":
        return {pvar(i): weighted_p(i, ctx) for i in range(1, N + 1)}
    es = weighted_e_all(N, ctx)
    return {evar(i): es[i] for i in range(1, N + 1)}


def newton_convert(direction: str, N: int, ctx: Optional[WeightedContext] = None) -> List[SparsePoly]:
    """Newton conversion between weighted e's and p's.

    ``"e->p"`` returns ``p_1..p_N`` written in the e-symbols; ``"p->e"``
    returns ``e_1..e_N`` written in the p-symbols.  When ``ctx`` is given the
    expressions are checked against direct expansion in that context.
    """
    if N < 1:
        raise ValueError("N must be positive")
    if direction == "e->p":
        out = newton_p_in_e(N)
        lhs_kind, rhs_kind = "p", "e"
    elif direction == "p->e":
        out = newton_e_in_p(N)
        lhs_kind, rhs_kind = "e", "p"
    else:
        raise ValueError("direction must be 'e->p' or 'p->e'")
    if ctx is not None:
        rhs_bind = _bind_symbols(ctx, N, rhs_kind)
        lhs_vals = _bind_symbols(ctx, N, lhs_kind)
        var = pvar if lhs_kind == "p" else evar
        for n, expr in enumerate(out, start=1):
            if expr.subs(rhs_bind) != lhs_vals[var(n)]:
                raise ArithmeticError(f"Newton conversion failed at n={n}")
    return out


def newton_recurrence_holds(n: int, ctx: WeightedContext) -> bool:
    """Check ``n e_n = sum (-1)^(i-1) e_{n-i} p_i`` by direct expansion."""
    es = weighted_e_all(n, ctx)
    rhs = SparsePoly()
    for i in range(1, n + 1):
        term = es[n - i] * weighted_p(i, ctx)
        rhs = rhs + term if i % 2 else rhs - term
    return es[n].scale(n) == rhs


def newton_round_trip(N: int, ctx: WeightedContext) -> bool:
    """e -> p -> e composed formally, then checked in ``ctx``."""
    p_in_e = newton_p_in_e(N)
    e_in_p = newton_e_in_p(N)
    bind = {pvar(i): p_in_e[i - 1] for i in range(1, N + 1)}
    composed = [e.subs(bind) for e in e_in_p]
    if any(c != SparsePoly.var(evar(i)) for i, c in enumerate(composed, start=1)):
        return False
    newton_convert("e->p", N, ctx)
    newton_convert("p->e", N, ctx)
    return True


@dataclass
class TruncatedSeries:
    """Unsigned coefficients ``e_1..e_N`` of one color's product.

    The coefficient of ``z^(d-j)`` in ``prod (z - x_t)^{y_t}`` is
    ``(-1)^j e_j``; :meth:`signed` applies that map.
    """

    N: int
    coefficients: List[SparsePoly]

    def __post_init__(self):
        if len(self.coefficients) != self.N:
            raise ValueError("series must store exactly N coefficients")

    def e(self, j: int) -> SparsePoly:
        return self.coefficients[j - 1]

    def signed(self) -> List[SparsePoly]:
        return [c if j % 2 == 0 else -c for j, c in enumerate(self.coefficients, start=1)]


def series_coefficients(profile, points: Optional[Sequence] = None, N: int = 3) -> List[TruncatedSeries]:
    """Per color, the truncated weighted elementary coefficients at the given points."""
    P = require_admissible(profile if isinstance(profile, ColoredProfile) else ColoredProfile(profile))
    if N < 1:
        raise ValueError("truncation must be positive")
    out = []
    for i in range(P.r):
        ctx = WeightedContext.make(P.color(i), points)
        out.append(TruncatedSeries(N, weighted_e_all(N, ctx)[1:]))
    return out


@dataclass
class HankelIdentity:
    """``prod m * prod_{i<j} (x_i - x_j)^2 = det[p_{a+b}]`` and its p-decomposition."""

    t: int
    lhs: SparsePoly
    determinant: SparsePoly  # in formal symbols p0..p_{2t-2}
    decomposition: Dict[int, SparsePoly] = field(default_factory=dict)
    verified: bool = False

    def recombined(self) -> SparsePoly:
        out = SparsePoly()
        for j, c in self.decomposition.items():
            out = out + c * SparsePoly.var(pvar(j))
        return out


def _symbolic_det(M: List[List[SparsePoly]]) -> SparsePoly:
    n = len(M)
    out = SparsePoly()
    for perm in permutations(range(n)):
        sign = 1
        seen = list(perm)
        for i in range(n):
            for j in range(i + 1, n):
                if seen[i] > seen[j]:
                    sign = -sign
        term = SparsePoly.const(sign)
        for i in range(n):
            term = term * M[i][perm[i]]
        out = out + term
    return out


def hankel_decomposition(det: SparsePoly) -> Dict[int, SparsePoly]:
    """Write ``det = sum_j p_j c_j`` assigning each monomial to its lowest p-index >= 1."""
    out: Dict[int, Dict] = {}
    for mono, c in det.terms.items():
        idx = [VarId.from_code(code).index for code, _ in mono if VarId.from_code(code).kind == "p"]
        idx = [i for i in idx if i >= 1]
        if not idx:
            raise ArithmeticError("determinant monomial without a positive-index power sum")
        j = min(idx)
        code_j = pvar(j).code
        rest = []
        for code, e in mono:
            if code == code_j:
                if e > 1:
                    rest.append((code, e - 1))
            else:
                rest.append((code, e))
        out.setdefault(j, {})[tuple(rest)] = c
    return {j: SparsePoly(terms) for j, terms in sorted(out.items())}


def hankel_vandermonde(t: int, ctx: Optional[WeightedContext] = None) -> HankelIdentity:
    """Check the Hankel/Vandermonde identity for ``t >= 2`` points."""
    if t < 2:
        raise ValueError("need at least two points")
    ctx = ctx or WeightedContext.symbolic(t)
    if ctx.k != t:
        raise ValueError("context must have t points")
    M = [[SparsePoly.var(pvar(a + b)) for b in range(t)] for a in range(t)]
    det = _symbolic_det(M)
    lhs = SparsePoly.const(1)
    for w in ctx.weights:
        lhs = lhs * w
    for i in range(t):
        for j in range(i + 1, t):
            lhs = lhs * (ctx.points[i] - ctx.points[j]) ** 2
    bind = {pvar(n): weighted_p(n, ctx) for n in range(0, 2 * t - 1)}
    ok = det.subs(bind) == lhs
    dec = hankel_decomposition(det)
    ident = HankelIdentity(t, lhs, det, dec)
    ident.verified = ok and ident.recombined() == det
    if not ident.verified:
        raise ArithmeticError(f"Hankel/Vandermonde identity failed for t={t}")
    return ident


def series_to_json(series: List[TruncatedSeries]) -> List[List[str]]:
    return [[str(c) for c in s.signed()] for s in series]
