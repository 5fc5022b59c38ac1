"""Exact linear algebra over Q.

Small problems are handled with fraction-free (Bareiss) elimination on
integer-scaled rows.  Large span queries go through elimination modulo
word-size primes (vectorised with numpy) to pick pivots, followed by an exact
multimodular solve with rational reconstruction.  Every certificate returned
by :func:`express_in_span` is re-checked with exact integer arithmetic, so the
modular steps only ever affect speed, never correctness.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from math import gcd, isqrt, lcm
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .exact import Monomial, Rat, SparsePoly, VarId, as_rat, rat_str

log = logging.getLogger(__name__)


class DimensionError(ValueError):
    pass


# ---------------------------------------------------------------------------
# primes

def _is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # deterministic for n < 3.3e24
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


_PRIMES: List[int] = []


def word_primes(count: int) -> List[int]:
    """The ``count`` largest primes below 2**31 (products fit in int64)."""
    n = (_PRIMES[-1] if _PRIMES else 1 << 31) - 1
    while len(_PRIMES) < count:
        if _is_probable_prime(n):
            _PRIMES.append(n)
        n -= 2 if n % 2 else 1
    return _PRIMES[:count]


def random_primes(count: int, seed: int = 0, bits: int = 30) -> List[int]:
    rng = random.Random(seed)
    out: List[int] = []
    while len(out) < count:
        n = rng.randrange(1 << (bits - 1), 1 << bits) | 1
        if _is_probable_prime(n) and n not in out:
            out.append(n)
    return out


# ---------------------------------------------------------------------------
# integer scaling

def _int_rows(M: Sequence[Sequence[Rat]]) -> List[List[int]]:
    out = []
    for row in M:
        row = [as_rat(v) for v in row]
        d = lcm(1, *[v.denominator for v in row if isinstance(v, Fraction)])
        out.append([int(v * d) for v in row])
    return out


def scale_to_int(vec: Sequence[Rat]) -> Tuple[List[int], int]:
    """Return ``(ints, d)`` with ``ints = d * vec`` and ``d`` a positive integer."""
    vals = [as_rat(v) for v in vec]
    d = lcm(1, *[v.denominator for v in vals if isinstance(v, Fraction)])
    return [int(v * d) for v in vals], d


# ---------------------------------------------------------------------------
# Bareiss

def bareiss_echelon(M: Sequence[Sequence[int]]) -> Tuple[List[List[int]], List[int]]:
    """Fraction-free row echelon form of an integer matrix; returns (rows, pivot columns)."""
    A = [list(r) for r in M]
    nrows = len(A)
    ncols = len(A[0]) if A else 0
    prev = 1
    r = 0
    pivots: List[int] = []
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        pr = A[r]
        pv = pr[c]
        for i in range(r + 1, nrows):
            row = A[i]
            f = row[c]
            for j in range(c + 1, ncols):
                row[j] = (pv * row[j] - f * pr[j]) // prev
            row[c] = 0
        prev = pv
        pivots.append(c)
        r += 1
    return A, pivots


def rank(M: Sequence[Sequence[Rat]]) -> int:
    """Exact rank via fraction-free Gaussian elimination."""
    if not M or not len(M[0]):
        return 0
    _, piv = bareiss_echelon(_int_rows(M))
    return len(piv)


def determinant(M: Sequence[Sequence[Rat]]) -> Rat:
    n = len(M)
    if n == 0:
        return 1
    if any(len(r) != n for r in M):
        raise DimensionError("determinant of a non-square matrix")
    rows = [[as_rat(v) for v in r] for r in M]
    scale = Fraction(1)
    ints = []
    for r in rows:
        iv, d = scale_to_int(r)
        ints.append(iv)
        scale /= d
    A = [list(r) for r in ints]
    sign = 1
    prev = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            sign = -sign
        for i in range(c + 1, n):
            for j in range(c + 1, n):
                A[i][j] = (A[c][c] * A[i][j] - A[i][c] * A[c][j]) // prev
            A[i][c] = 0
        prev = A[c][c]
    val = Fraction(sign * A[n - 1][n - 1]) * scale
    return val.numerator if val.denominator == 1 else val


# ---------------------------------------------------------------------------
# modular elimination (numpy, p < 2**31)

def _to_mod(M: Sequence[Sequence[int]], p: int) -> np.ndarray:
    return np.array([[v % p for v in row] for row in M], dtype=np.int64).reshape(len(M), -1)


def echelon_mod(A: np.ndarray, p: int) -> Tuple[int, List[int]]:
    """Rank and pivot columns of ``A`` modulo ``p`` (A is modified)."""
    nrows, ncols = A.shape
    r = 0
    pivots: List[int] = []
    for c in range(ncols):
        if r == nrows:
            break
        col = A[r:, c]
        nz = np.flatnonzero(col)
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        inv = pow(int(A[r, c]), -1, p)
        A[r, c:] = (A[r, c:] * inv) % p
        below = A[r + 1:, c]
        if below.any():
            rows = np.flatnonzero(below) + r + 1
            A[rows, c:] = (A[rows, c:] - (A[rows, c][:, None] * A[r, c:][None, :]) % p) % p
        pivots.append(c)
        r += 1
    return r, pivots


def rank_mod(M: Sequence[Sequence[Rat]], p: int) -> int:
    rows = _int_rows(M)
    if not rows or not rows[0]:
        return 0
    r, _ = echelon_mod(_to_mod(rows, p), p)
    return r


def solve_mod(A: np.ndarray, B: np.ndarray, p: int) -> Optional[np.ndarray]:
    """Solve the square system ``A X = B`` mod ``p``; ``None`` if singular."""
    n = A.shape[0]
    M = np.concatenate([A, B], axis=1) % p
    for c in range(n):
        nz = np.flatnonzero(M[c:, c])
        if nz.size == 0:
            return None
        piv = c + int(nz[0])
        if piv != c:
            M[[c, piv]] = M[[piv, c]]
        inv = pow(int(M[c, c]), -1, p)
        M[c, c:] = (M[c, c:] * inv) % p
        f = M[:, c].copy()
        f[c] = 0
        rows = np.flatnonzero(f)
        if rows.size:
            M[rows, c:] = (M[rows, c:] - (f[rows][:, None] * M[c, c:][None, :]) % p) % p
    return M[:, n:]


def rational_reconstruct(a: int, m: int) -> Optional[Fraction]:
    """Find n/d with n = a d (mod m), |n|, d <= sqrt(m/2)."""
    a %= m
    bound = isqrt(m // 2)
    r0, r1 = m, a
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    if s1 < 0:
        r1, s1 = -r1, -s1
    if gcd(r1, s1) != 1:
        return None
    return Fraction(r1, s1)


def solve_exact_square(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]], max_primes: int = 4096) -> List[List[Fraction]]:
    """Exact solution of a nonsingular integer system ``A X = B``.

    Multimodular: solve modulo word primes, combine by CRT and attempt
    rational reconstruction whenever the prime count doubles; a candidate is
    accepted only after it satisfies the system exactly.
    """
    n = len(A)
    q = len(B[0]) if B else 0
    if n == 0:
        return []
    primes = word_primes(max_primes)
    residues: Optional[List[int]] = None
    modulus = 1
    used = 0
    next_check = 1
    for p in primes:
        Xp = solve_mod(_to_mod(A, p), _to_mod(B, p), p)
        if Xp is None:
            continue
        flat = [int(v) for v in Xp.reshape(-1)]
        if residues is None:
            residues = flat
            modulus = p
        else:
            inv = pow(modulus % p, -1, p)
            residues = [x + modulus * (((r - x) * inv) % p) for x, r in zip(residues, flat)]
            modulus *= p
        used += 1
        if used >= next_check:
            next_check *= 2
            cand = _reconstruct_all(residues, modulus)
            if cand is not None and _check_exact(A, B, cand, n, q):
                log.debug("exact solve of %dx%d system used %d primes", n, n, used)
                return [cand[i * q:(i + 1) * q] for i in range(n)]
    raise ArithmeticError("multimodular solve did not converge")


def _reconstruct_all(residues: List[int], modulus: int) -> Optional[List[Fraction]]:
    out = []
    den = 1
    for r in residues:
        # reuse the running denominator; most entries share large factors
        f = rational_reconstruct(r * den % modulus, modulus)
        if f is None:
            return None
        out.append(f / den)
        den = lcm(den, (f / den).denominator)
    return out


def _check_exact(A, B, cand: List[Fraction], n: int, q: int) -> bool:
    den = lcm(1, *[c.denominator for c in cand])
    X = [int(c * den) for c in cand]
    for i in range(n):
        row = A[i]
        for j in range(q):
            s = 0
            for k in range(n):
                a = row[k]
                if a:
                    s += a * X[k * q + j]
            if s != den * B[i][j]:
                return False
    return True


def solve_fraction_square(A: Sequence[Sequence[Rat]], b: Sequence[Rat]) -> List[Fraction]:
    """Gauss-Jordan over Fractions for small nonsingular systems."""
    n = len(A)
    M = [[Fraction(v) for v in A[i]] + [Fraction(b[i])] for i in range(n)]
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c]), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        M[c], M[piv] = M[piv], M[c]
        pv = M[c][c]
        row = [v / pv for v in M[c]]
        M[c] = row
        for i in range(n):
            if i != c and M[i][c]:
                f = M[i][c]
                M[i] = [a - f * r for a, r in zip(M[i], row)]
    return [M[i][n] for i in range(n)]


# ---------------------------------------------------------------------------
# span certificates

@dataclass
class SpanCertificate:
    """Either coefficients expressing the target, or a separating functional."""

    member: bool
    coefficients: Optional[List[Rat]] = None
    witness: Optional[Dict[int, Rat]] = None  # row index -> weight

    def recombine(self, spanners: Sequence[Sequence[Rat]]) -> List[Rat]:
        if self.coefficients is None:
            raise ValueError("not a membership certificate")
        length = len(spanners[0]) if spanners else 0
        out = [Fraction(0)] * length
        for c, v in zip(self.coefficients, spanners):
            if c:
                for i, a in enumerate(v):
                    if a:
                        out[i] += c * a
        return [as_rat(v) for v in out]

    def pairing(self, vec: Sequence[Rat]) -> Rat:
        if self.witness is None:
            raise ValueError("not a witness certificate")
        return as_rat(sum((Fraction(c) * vec[i] for i, c in self.witness.items()), Fraction(0)))

    def verify(self, target: Sequence[Rat], spanners: Sequence[Sequence[Rat]]) -> bool:
        if self.member:
            if len(self.coefficients or []) != len(spanners):
                return False
            return self.recombine(spanners) == [as_rat(v) for v in target] if spanners else not any(target)
        return all(self.pairing(v) == 0 for v in spanners) and self.pairing(target) != 0

    def to_json(self) -> dict:
        if self.member:
            return {"member": True, "coefficients": [rat_str(c) for c in self.coefficients]}
        return {"member": False, "witness": {str(i): rat_str(c) for i, c in sorted(self.witness.items())}}


def _check_dims(target, spanners):
    n = len(target)
    for v in spanners:
        if len(v) != n:
            raise DimensionError("all vectors must have the same length")


def express_in_span(target: Sequence[Rat], spanners: Sequence[Sequence[Rat]], *, prime_attempts: int = 4) -> SpanCertificate:
    """Decide whether ``target`` lies in the Q-span of ``spanners``.

    Returns coefficients on success or a witness functional; either answer is
    verified exactly before it is returned.
    """
    _check_dims(target, spanners)
    t_int, _ = scale_to_int(target)
    cols = []
    col_scale = []
    for v in spanners:
        iv, d = scale_to_int(v)
        cols.append(iv)
        col_scale.append(d)
    size = len(target) * (len(spanners) + 1)
    if size <= 600:
        cert = _span_small(t_int, cols)
    else:
        cert = None
        for p in word_primes(prime_attempts):
            cert = _span_modular(t_int, cols, p)
            if cert is not None:
                break
        if cert is None:
            cert = _span_small(t_int, cols)
    if cert.member:
        # undo the integer scaling: target = sum c_i * col_i / d_i * t_scale^-1
        _, td = scale_to_int(target)
        coeffs = [as_rat(Fraction(c) * d / td) for c, d in zip(cert.coefficients, col_scale)]
        cert = SpanCertificate(True, coefficients=coeffs)
    if not cert.verify(target, spanners):
        raise ArithmeticError("span certificate failed exact verification")
    return cert


def _span_small(t: List[int], cols: List[List[int]]) -> SpanCertificate:
    """Exact Fraction elimination of ``[A | t | I]``, tracking row operations."""
    nrows = len(t)
    ncols = len(cols)
    M = [[Fraction(cols[j][i]) for j in range(ncols)] + [Fraction(t[i])] + [Fraction(int(i == r)) for r in range(nrows)] for i in range(nrows)]
    r = 0
    pivots = []
    for c in range(ncols + 1):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        pv = M[r][c]
        M[r] = [v / pv for v in M[r]]
        for i in range(nrows):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    if ncols in pivots:
        row = M[pivots.index(ncols)]
        # the identity block records which combination of original rows this is;
        # rescale so that the pairing with the target is 1
        y = row[ncols + 1:]
        return SpanCertificate(False, witness={i: as_rat(v) for i, v in enumerate(y) if v})
    coeffs = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        coeffs[c] = M[i][ncols]
    return SpanCertificate(True, coefficients=[as_rat(c) for c in coeffs])


def _span_modular(t: List[int], cols: List[List[int]], p: int) -> Optional[SpanCertificate]:
    nrows = len(t)
    ncols = len(cols)
    A = np.empty((nrows, ncols + 1), dtype=np.int64)
    for j, v in enumerate(cols):
        A[:, j] = [a % p for a in v]
    A[:, ncols] = [a % p for a in t]
    r, piv = echelon_mod(A, p)
    J = [c for c in piv if c < ncols]
    if ncols in piv:
        # candidate witness supported on rows I with [A_J | t]_I invertible
        sub_cols = [cols[j] for j in J] + [t]
        T = np.array([[a % p for a in v] for v in sub_cols], dtype=np.int64).reshape(len(sub_cols), nrows)
        _, rows_I = echelon_mod(T, p)
        k = len(rows_I)
        if k != len(sub_cols):
            return None
        # y^T B = e_last  <=>  B^T y = e_last
        BT = [[sub_cols[a][rows_I[b]] for b in range(k)] for a in range(k)]
        rhs = [[0] for _ in range(k - 1)] + [[1]]
        y = solve_exact_square(BT, rhs)
        witness = {rows_I[b]: as_rat(y[b][0]) for b in range(k) if y[b][0]}
        cert = SpanCertificate(False, witness=witness)
        ok = all(_int_pair(witness, v) == 0 for v in cols) and _int_pair(witness, t) != 0
        return cert if ok else None
    if not J:
        return SpanCertificate(True, coefficients=[0] * ncols) if not any(t) else None
    sub = [cols[j] for j in J]
    T = np.array([[a % p for a in v] for v in sub], dtype=np.int64).reshape(len(sub), nrows)
    _, rows_I = echelon_mod(T, p)
    if len(rows_I) != len(J):
        return None
    Asq = [[sub[j][i] for j in range(len(J))] for i in rows_I]
    b = [[t[i]] for i in rows_I]
    x = solve_exact_square(Asq, b)
    coeffs: List[Rat] = [0] * ncols
    for j, xv in zip(J, x):
        coeffs[j] = as_rat(xv[0])
    # full exact check on every row
    den = lcm(1, *[Fraction(c).denominator for c in coeffs])
    X = [int(Fraction(c) * den) for c in coeffs]
    for i in range(nrows):
        s = 0
        for j in J:
            a = cols[j][i]
            if a:
                s += a * X[j]
        if s != den * t[i]:
            return None
    return SpanCertificate(True, coefficients=coeffs)


def _int_pair(witness: Dict[int, Rat], v: Sequence[int]) -> Fraction:
    return sum((Fraction(c) * v[i] for i, c in witness.items()), Fraction(0))


# ---------------------------------------------------------------------------
# parametric span

@dataclass
class ParametricResult:
    """Outcome of a span query whose entries are polynomials in parameters.

    ``status`` is ``"member"`` (coefficients ``numerators[j] / denominator``
    verified symbolically), ``"non_member"`` (verified witnesses at the
    sampled parameter points) or ``"inconclusive"``.
    """

    status: str
    numerators: Optional[List[SparsePoly]] = None
    denominator: Optional[SparsePoly] = None
    denominator_factors: Dict[SparsePoly, int] = field(default_factory=dict)
    sample_witnesses: List[Tuple[Dict[VarId, Rat], SpanCertificate]] = field(default_factory=list)
    detail: str = ""


def _homogeneous_degree(vec: Sequence[SparsePoly]) -> Optional[int]:
    deg = None
    for p in vec:
        for mono in p.terms:
            d = sum(e for _, e in mono)
            if deg is None:
                deg = d
            elif d != deg:
                return None
    return deg


def _monomials(vars_: Sequence[VarId], degree: int, homogeneous: bool) -> List[Monomial]:
    degs = [degree] if homogeneous else range(degree + 1)
    out: List[Monomial] = []
    codes = [v.code for v in vars_]
    for d in degs:
        if d < 0:
            continue
        for combo in combinations_with_replacement(codes, d):
            m: Dict[int, int] = {}
            for c in combo:
                m[c] = m.get(c, 0) + 1
            out.append(tuple(sorted(m.items())))
    return out


def parametric_express_in_span(
    target: Sequence[SparsePoly],
    spanners: Sequence[Sequence[SparsePoly]],
    parameter_vars: Sequence[VarId],
    denominator_allowlist: Sequence[SparsePoly],
    *,
    degree_cap: int = 12,
    max_exponent: int = 2,
    seed: int = 0,
    extra_samples: int = 4,
    witness_samples: int = 5,
) -> ParametricResult:
    """Span membership over Q(parameters) by evaluation and interpolation.

    Each coefficient is sought as ``numerator / D`` with ``D`` a product of
    allow-listed factors; numerators are interpolated from exact solutions at
    seeded random integer parameter points and the final identity is checked
    symbolically.  When target and spanners are homogeneous in the parameters
    the numerator degree is fixed by homogeneity and ``degree_cap`` is only a
    ceiling.
    """
    _check_dims(target, spanners)
    rng = random.Random(seed)
    target = [SparsePoly.coerce(t) for t in target]
    spanners = [[SparsePoly.coerce(e) for e in v] for v in spanners]

    def sample_point():
        while True:
            pt = {v: rng.randint(1, 97) for v in parameter_vars}
            if all(f.evaluate(pt) != 0 for f in denominator_allowlist):
                return pt

    def at(pt):
        t = [e.evaluate(pt) for e in target]
        S = [[e.evaluate(pt) for e in v] for v in spanners]
        return t, S

    # membership at generic points; a witness at any sample is a verified negative there
    witnesses = []
    basis: Optional[List[int]] = None
    for _ in range(witness_samples):
        pt = sample_point()
        t, S = at(pt)
        cert = express_in_span(t, S)
        if not cert.member:
            witnesses.append((pt, cert))
        elif basis is None:
            basis = _independent_subset(S)
    if witnesses:
        if len(witnesses) == witness_samples:
            return ParametricResult("non_member", sample_witnesses=witnesses, detail="target outside the span at every sampled point")
        return ParametricResult("inconclusive", sample_witnesses=witnesses, detail="membership differs between sample points")
    assert basis is not None
    sub = [spanners[j] for j in basis]

    t_deg = _homogeneous_degree(target)
    s_degs = [_homogeneous_degree(v) for v in sub]
    homogeneous = t_deg is not None and all(d is not None for d in s_degs)

    for exponent in range(1, max_exponent + 1):
        D = SparsePoly.const(1)
        for f in denominator_allowlist:
            D = D * f ** exponent
        dD = D.degree()
        mono_sets = []
        for d in s_degs:
            if homogeneous:
                mono_sets.append(_monomials(parameter_vars, dD + t_deg - d, True))
            else:
                mono_sets.append(_monomials(parameter_vars, min(degree_cap, dD + degree_cap), False))
        need = max(len(ms) for ms in mono_sets) + extra_samples
        points, values = [], []
        while len(points) < need:
            pt = sample_point()
            t, S = at(pt)
            Ssub = [S[j] for j in basis]
            if _rank_int([scale_to_int(v)[0] for v in Ssub]) < len(basis):
                continue
            cert = express_in_span(t, Ssub)
            if not cert.member:
                return ParametricResult("inconclusive", detail="basis lost membership at a sample point")
            Dv = D.evaluate(pt)
            points.append(pt)
            values.append([c * Dv for c in cert.coefficients])
        numerators = []
        ok = True
        for j, ms in enumerate(mono_sets):
            num = _interpolate(ms, points, [row[j] for row in values])
            if num is None:
                ok = False
                break
            numerators.append(num)
        if not ok:
            continue
        # symbolic check: sum num_j * spanner_j == D * target
        lhs = [SparsePoly() for _ in target]
        for num, v in zip(numerators, sub):
            if num:
                for i, e in enumerate(v):
                    if e:
                        lhs[i] = lhs[i] + num * e
        if all(a == D * b for a, b in zip(lhs, target)):
            full = [SparsePoly()] * len(spanners)
            for j, num in zip(basis, numerators):
                full[j] = num
            full, factors = _strip_factors(full, denominator_allowlist, exponent)
            Dred = SparsePoly.const(1)
            for f, e in factors.items():
                Dred = Dred * f ** e
            return ParametricResult("member", numerators=full, denominator=Dred, denominator_factors=factors)
    return ParametricResult("inconclusive", detail=f"no reconstruction with denominator exponent <= {max_exponent}")


def _rank_int(vectors: List[List[int]]) -> int:
    if not vectors:
        return 0
    A = np.array([[v % word_primes(1)[0] for v in vec] for vec in vectors], dtype=np.int64)
    r, _ = echelon_mod(A, word_primes(1)[0])
    return r


def _independent_subset(S: Sequence[Sequence[Rat]]) -> List[int]:
    """Indices of a maximal independent subset (greedy, exact)."""
    if not S:
        return []
    ints = [scale_to_int(v)[0] for v in S]
    # columns = spanners: echelon of the transpose picks spanners in order
    rows = [[ints[j][i] for j in range(len(ints))] for i in range(len(ints[0]))]
    _, piv = bareiss_echelon(rows)
    return piv


def _interpolate(monos: List[Monomial], points: List[Dict[VarId, Rat]], values: List[Rat]) -> Optional[SparsePoly]:
    if not monos:
        return SparsePoly() if all(v == 0 for v in values) else None
    rows = []
    for pt in points:
        vals = {v.code: as_rat(c) for v, c in pt.items()}
        row = []
        for m in monos:
            t = 1
            for k, e in m:
                t *= vals[k] ** e
            row.append(t)
        rows.append(row)
    # choose a nonsingular square subsystem, then check the remaining rows
    _, piv_rows = bareiss_echelon([[rows[i][j] for i in range(len(rows))] for j in range(len(monos))])
    if len(piv_rows) < len(monos):
        return None
    Asq = [rows[i] for i in piv_rows]
    vals_sq = [values[i] for i in piv_rows]
    dens = lcm(1, *[Fraction(v).denominator for v in values])
    B = [[int(Fraction(v) * dens)] for v in vals_sq]
    sol = solve_exact_square(Asq, B)
    coeffs = [x[0] / dens for x in sol]
    for i, row in enumerate(rows):
        if sum(c * a for c, a in zip(coeffs, row)) != values[i]:
            return None
    return SparsePoly({m: c for m, c in zip(monos, coeffs) if c})


def _strip_factors(nums: List[SparsePoly], allow: Sequence[SparsePoly], exponent: int):
    from .exact import divexact

    factors = {f: exponent for f in allow}
    changed = True
    while changed:
        changed = False
        for f in allow:
            if factors[f] == 0:
                continue
            try:
                cand = [divexact(n, f) if n else n for n in nums]
            except ArithmeticError:
                continue
            nums = cand
            factors[f] -= 1
            changed = True
    return nums, {f: e for f, e in factors.items() if e}
