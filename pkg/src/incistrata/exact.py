"""Exact rationals and sparse multivariate polynomials.

Coefficients are Python ``int`` when integral and ``fractions.Fraction``
otherwise, so they are always in lowest terms.  Monomials are stored as
sorted tuples of ``(code, exponent)`` pairs where ``code`` is the integer
encoding of a :class:`VarId`.
"""

from __future__ import annotations

import re
from collections import Counter
from fractions import Fraction
from functools import reduce
from math import factorial, lcm
from typing import Dict, Iterable, Iterator, Mapping, Sequence, Tuple, Union

Rat = Union[int, Fraction]
Monomial = Tuple[Tuple[int, int], ...]

ONE_MONO: Monomial = ()

# kind letters in VarId order; "p" and "e" are formal power-sum / elementary symbols
KINDS = ("m", "p", "e", "x")
_KIND_RANK = {k: i for i, k in enumerate(KINDS)}
POINT_RANK = _KIND_RANK["x"]
PARAM_RANK = _KIND_RANK["m"]


def as_rat(value) -> Rat:
    """Coerce ``value`` (int, Fraction or ``"p/q"`` string) to a canonical rational."""
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else value
    if isinstance(value, str):
        return as_rat(Fraction(value.strip()))
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def _norm(c):
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def rat_str(c: Rat) -> str:
    c = as_rat(c)
    if isinstance(c, int):
        return str(c)
    return f"{c.numerator}/{c.denominator}"


class VarId:
    """A variable: kind letter, index and optional color coordinate.

    ``VarId("m", 1)`` prints as ``m1``; ``VarId("x", 2, 3)`` as ``x2_3``.
    """

    __slots__ = ("kind", "index", "sub", "code")

    def __init__(self, kind: str, index: int, sub: int = 0):
        if kind not in _KIND_RANK:
            raise ValueError(f"unknown variable kind {kind!r}")
        if index < 0 or sub < 0 or index >= 1 << 16 or sub >= 1 << 16:
            raise ValueError("variable index out of range")
        self.kind = kind
        self.index = index
        self.sub = sub
        self.code = (_KIND_RANK[kind] << 32) | (index << 16) | sub

    @classmethod
    def from_code(cls, code: int) -> "VarId":
        return cls(KINDS[code >> 32], (code >> 16) & 0xFFFF, code & 0xFFFF)

    @property
    def is_point(self) -> bool:
        return self.kind == "x"

    @property
    def is_parameter(self) -> bool:
        return self.kind == "m"

    def __eq__(self, other):
        return isinstance(other, VarId) and other.code == self.code

    def __lt__(self, other: "VarId"):
        return self.code < other.code

    def __hash__(self):
        return hash(self.code)

    def __str__(self):
        s = f"{self.kind}{self.index}"
        return s + (f"_{self.sub}" if self.sub else "")

    __repr__ = __str__


def mvar(i: int, sub: int = 0) -> VarId:
    return VarId("m", i, sub)


def xvar(i: int, sub: int = 0) -> VarId:
    return VarId("x", i, sub)


def pvar(i: int) -> VarId:
    return VarId("p", i)


def evar(i: int) -> VarId:
    return VarId("e", i)


_NAME_CACHE: Dict[int, str] = {}


def _name(code: int) -> str:
    s = _NAME_CACHE.get(code)
    if s is None:
        s = _NAME_CACHE[code] = str(VarId.from_code(code))
    return s


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for c, e in b:
        d[c] = d.get(c, 0) + e
    return tuple(sorted(d.items()))


def mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def point_degree(m: Monomial) -> int:
    return sum(e for c, e in m if c >> 32 == POINT_RANK)


def mono_key(m: Monomial):
    """Sort key for graded lexicographic order (larger key = larger monomial)."""
    return (mono_degree(m), tuple((-c, e) for c, e in m))


def mono_str(m: Monomial) -> str:
    return "*".join(_name(c) + (f"^{e}" if e != 1 else "") for c, e in m)


class SparsePoly:
    """Immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Rat] | None = None, *, _trusted: bool = False):
        if terms is None:
            self.terms: Dict[Monomial, Rat] = {}
        elif _trusted:
            self.terms = terms  # type: ignore[assignment]
        else:
            clean: Dict[Monomial, Rat] = {}
            for mono, c in terms.items():
                c = as_rat(c)
                if c:
                    mono = tuple(sorted((k, e) for k, e in mono if e))
                    clean[mono] = _norm(clean.get(mono, 0) + c)
                    if not clean[mono]:
                        del clean[mono]
            self.terms = clean
        self._hash = None

    # -- constructors -------------------------------------------------
    @classmethod
    def const(cls, c) -> "SparsePoly":
        c = as_rat(c)
        return cls({ONE_MONO: c} if c else {}, _trusted=True)

    @classmethod
    def var(cls, v: VarId, power: int = 1) -> "SparsePoly":
        if power == 0:
            return cls.const(1)
        return cls({((v.code, power),): 1}, _trusted=True)

    @classmethod
    def coerce(cls, other) -> "SparsePoly":
        if isinstance(other, SparsePoly):
            return other
        if isinstance(other, VarId):
            return cls.var(other)
        return cls.const(other)

    # -- basic queries ------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self) -> Iterator[Tuple[Monomial, Rat]]:
        return iter(self.terms.items())

    def __eq__(self, other):
        if not isinstance(other, SparsePoly):
            try:
                other = SparsePoly.coerce(other)
            except TypeError:
                return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and ONE_MONO in self.terms)

    def constant_value(self) -> Rat:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms.get(ONE_MONO, 0)

    def variables(self) -> list:
        codes = {c for mono in self.terms for c, _ in mono}
        return [VarId.from_code(c) for c in sorted(codes)]

    def degree(self) -> int:
        return max((mono_degree(m) for m in self.terms), default=-1)

    def degree_in(self, v: VarId) -> int:
        code = v.code
        best = -1 if not self.terms else 0
        for mono in self.terms:
            for c, e in mono:
                if c == code and e > best:
                    best = e
        return best

    def point_degree(self) -> int:
        return max((point_degree(m) for m in self.terms), default=-1)

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        other = SparsePoly.coerce(other)
        if len(other.terms) > len(self.terms):
            big, small = other.terms, self.terms
        else:
            big, small = self.terms, other.terms
        out = dict(big)
        for mono, c in small.items():
            v = out.get(mono)
            if v is None:
                out[mono] = c
            else:
                v = _norm(v + c)
                if v:
                    out[mono] = v
                else:
                    del out[mono]
        return SparsePoly(out, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return SparsePoly({m: -c for m, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other):
        return self + (-SparsePoly.coerce(other))

    def __rsub__(self, other):
        return SparsePoly.coerce(other) + (-self)

    def scale(self, c) -> "SparsePoly":
        c = as_rat(c)
        if not c:
            return SparsePoly()
        if c == 1:
            return self
        return SparsePoly({m: _norm(v * c) for m, v in self.terms.items()}, _trusted=True)

    def __mul__(self, other):
        if not isinstance(other, SparsePoly):
            if isinstance(other, VarId):
                other = SparsePoly.var(other)
            else:
                return self.scale(other)
        if not self.terms or not other.terms:
            return SparsePoly()
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        out: Dict[Monomial, Rat] = {}
        get = out.get
        for mb, cb in b.items():
            if not mb:
                for ma, ca in a.items():
                    out[ma] = get(ma, 0) + ca * cb
                continue
            db = dict(mb)
            for ma, ca in a.items():
                if ma:
                    d = dict(ma)
                    for k, e in db.items():
                        d[k] = d.get(k, 0) + e
                    m = tuple(sorted(d.items()))
                else:
                    m = mb
                out[m] = get(m, 0) + ca * cb
        return SparsePoly({m: _norm(c) for m, c in out.items() if c}, _trusted=True)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers")
        result = SparsePoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, other):
        if isinstance(other, SparsePoly):
            if other.is_constant() and other:
                return self.scale(Fraction(1) / Fraction(other.constant_value()))
            return divexact(self, other)
        return self.scale(Fraction(1) / Fraction(as_rat(other)))

    # -- structure ----------------------------------------------------
    def leading_term(self) -> Tuple[Monomial, Rat]:
        mono = max(self.terms, key=mono_key)
        return mono, self.terms[mono]

    def homogeneous_component(self, d: int) -> "SparsePoly":
        return SparsePoly({m: c for m, c in self.terms.items() if point_degree(m) == d}, _trusted=True)

    def content(self) -> Fraction:
        """Positive rational c with ``self / c`` integral and primitive."""
        if not self.terms:
            return Fraction(0)
        dens = lcm(*[Fraction(c).denominator for c in self.terms.values()])
        from math import gcd

        nums = reduce(gcd, [abs(int(Fraction(c) * dens)) for c in self.terms.values()])
        return Fraction(nums, dens)

    def coefficient_of(self, mono: Monomial) -> Rat:
        return self.terms.get(mono, 0)

    def coefficients_in(self, codes: Iterable[int]) -> Dict[Monomial, "SparsePoly"]:
        """Split into ``{monomial in the given variables: coefficient polynomial}``."""
        keep = set(codes)
        out: Dict[Monomial, Dict[Monomial, Rat]] = {}
        for mono, c in self.terms.items():
            a = tuple((k, e) for k, e in mono if k in keep)
            b = tuple((k, e) for k, e in mono if k not in keep)
            out.setdefault(a, {})[b] = c
        return {k: SparsePoly(v, _trusted=True) for k, v in out.items()}

    def point_coefficients(self) -> Dict[Monomial, "SparsePoly"]:
        codes = {c for mono in self.terms for c, _ in mono if c >> 32 == POINT_RANK}
        return self.coefficients_in(codes)

    # -- calculus and substitution -----------------------------------
    def diff(self, v: VarId) -> "SparsePoly":
        code = v.code
        out: Dict[Monomial, Rat] = {}
        for mono, c in self.terms.items():
            for i, (k, e) in enumerate(mono):
                if k == code:
                    if e == 1:
                        nm = mono[:i] + mono[i + 1:]
                    else:
                        nm = mono[:i] + ((k, e - 1),) + mono[i + 1:]
                    out[nm] = _norm(out.get(nm, 0) + c * e)
                    break
        return SparsePoly({m: c for m, c in out.items() if c}, _trusted=True)

    def subs(self, bindings: Mapping[VarId, object]) -> "SparsePoly":
        """Simultaneous substitution; unbound variables pass through."""
        if not bindings:
            return self
        bind = {v.code: SparsePoly.coerce(val) for v, val in bindings.items()}
        const_bind = {k: b.constant_value() for k, b in bind.items() if b.is_constant()}
        powers: Dict[Tuple[int, int], SparsePoly] = {}

        def power(code, e):
            key = (code, e)
            p = powers.get(key)
            if p is None:
                p = powers[key] = bind[code] ** e
            return p

        # group terms by the bound part of their monomial
        groups: Dict[Monomial, Dict[Monomial, Rat]] = {}
        for mono, c in self.terms.items():
            bound = []
            free = []
            for k, e in mono:
                if k in const_bind:
                    c = c * const_bind[k] ** e
                elif k in bind:
                    bound.append((k, e))
                else:
                    free.append((k, e))
            if not c:
                continue
            g = groups.setdefault(tuple(bound), {})
            fm = tuple(free)
            g[fm] = _norm(g.get(fm, 0) + c)
        result = SparsePoly()
        for bound, rest in groups.items():
            rest_poly = SparsePoly({m: c for m, c in rest.items() if c}, _trusted=True)
            if not rest_poly:
                continue
            factor = rest_poly
            for k, e in bound:
                factor = factor * power(k, e)
            result = result + factor
        return result

    def evaluate(self, values: Mapping[VarId, object]) -> Rat:
        """Evaluate at rationals for every variable present."""
        vals = {v.code: as_rat(c) for v, c in values.items()}
        total: Rat = 0
        for mono, c in self.terms.items():
            t = c
            for k, e in mono:
                try:
                    t = t * vals[k] ** e
                except KeyError:
                    raise KeyError(f"no value for variable {_name(k)}") from None
            total += t
        return _norm(Fraction(total)) if isinstance(total, Fraction) else total

    # -- text form ----------------------------------------------------
    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: mono_key(t[0]), reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for i, (mono, c) in enumerate(self.sorted_terms()):
            neg = c < 0
            a = -c if neg else c
            body = mono_str(mono)
            if not body:
                s = rat_str(a)
            elif a == 1:
                s = body
            else:
                s = f"{rat_str(a)}*{body}"
            if i == 0:
                parts.append(("-" if neg else "") + s)
            else:
                parts.append((" - " if neg else " + ") + s)
        return "".join(parts)

    def __repr__(self):
        return f"SparsePoly({str(self)!r})"

    def to_json(self) -> str:
        return str(self)

    @classmethod
    def parse(cls, text: str) -> "SparsePoly":
        return parse_poly(text)


def poly(value) -> SparsePoly:
    """Coerce an int, Fraction, VarId, string or SparsePoly to a polynomial."""
    if isinstance(value, str):
        return parse_poly(value)
    return SparsePoly.coerce(value)


def divexact(p: SparsePoly, g: SparsePoly) -> SparsePoly:
    """Exact quotient ``p / g``; raises ``ArithmeticError`` if ``g`` does not divide ``p``."""
    if not g:
        raise ZeroDivisionError("division by the zero polynomial")
    if g.is_constant():
        return p.scale(Fraction(1) / Fraction(g.constant_value()))
    lm, lc = g.leading_term()
    lmd = dict(lm)
    rest = dict(p.terms)
    q: Dict[Monomial, Rat] = {}
    gterms = list(g.terms.items())
    while rest:
        mono = max(rest, key=mono_key)
        c = rest[mono]
        d = dict(mono)
        quot = []
        for k, e in lmd.items():
            if d.get(k, 0) < e:
                raise ArithmeticError("polynomial division is not exact")
        for k, e in d.items():
            r = e - lmd.get(k, 0)
            if r:
                quot.append((k, r))
        qm = tuple(sorted(quot))
        qc = _norm(Fraction(c) / Fraction(lc)) if isinstance(c, Fraction) or isinstance(lc, Fraction) or c % lc else c // lc
        q[qm] = qc
        for gm, gc in gterms:
            m = mono_mul(gm, qm)
            v = _norm(rest.get(m, 0) - gc * qc)
            if v:
                rest[m] = v
            else:
                rest.pop(m, None)
    return SparsePoly(q, _trusted=True)


def divides(g: SparsePoly, p: SparsePoly) -> bool:
    try:
        divexact(p, g)
    except ArithmeticError:
        return False
    return True


_TERM_RE = re.compile(r"\s*([+-])?\s*([^+-]+)")
_FACTOR_RE = re.compile(r"^([a-z])(\d+)(?:_(\d+))?(?:\^(\d+))?$")


def parse_poly(text: str) -> SparsePoly:
    """Parse the canonical text form, e.g. ``"1/2*m1*x1^2 - 3*x2"``."""
    s = text.strip()
    if not s:
        raise ValueError("empty polynomial text")
    terms: Dict[Monomial, Rat] = {}
    pos = 0
    first = True
    while pos < len(s):
        mt = _TERM_RE.match(s, pos)
        if not mt or mt.end() == pos:
            raise ValueError(f"cannot parse polynomial near {s[pos:]!r}")
        sign, body = mt.group(1), mt.group(2).strip()
        if sign is None and not first:
            raise ValueError(f"missing operator near {body!r}")
        first = False
        pos = mt.end()
        # a rational coefficient "a/b" may not be followed directly by a sign
        coef: Rat = 1
        mono: Dict[int, int] = {}
        for factor in body.split("*"):
            factor = factor.strip()
            if not factor:
                raise ValueError(f"bad term {body!r}")
            if factor[0].isdigit():
                coef = coef * Fraction(factor)
                continue
            mf = _FACTOR_RE.match(factor)
            if not mf:
                raise ValueError(f"bad factor {factor!r}")
            kind, idx, sub, exp = mf.groups()
            v = VarId(kind, int(idx), int(sub or 0))
            mono[v.code] = mono.get(v.code, 0) + int(exp or 1)
        if sign == "-":
            coef = -coef
        key = tuple(sorted(mono.items()))
        terms[key] = terms.get(key, 0) + coef
    return SparsePoly(terms)


def gen_binomial(v, i: int) -> SparsePoly:
    """``v (v-1) ... (v-i+1) / i!`` as a polynomial in ``v``."""
    if i < 0:
        raise ValueError("binomial index must be non-negative")
    y = poly(v)
    out = SparsePoly.const(1)
    for j in range(i):
        out = out * (y - j)
    return out.scale(Fraction(1, factorial(i)))


def binom_value(y: Rat, i: int) -> Rat:
    """Generalised binomial coefficient at a rational ``y``."""
    out = Fraction(1)
    for j in range(i):
        out *= Fraction(y) - j
    return _norm(out / factorial(i))


def homogeneous_component(p: SparsePoly, d: int) -> SparsePoly:
    return p.homogeneous_component(d)


def substitute_dual(p: SparsePoly, values: Mapping[VarId, object], eps: Mapping[VarId, object]):
    """Substitute ``v -> values[v] + eps[v]*epsilon`` modulo ``epsilon^2``.

    Returns ``(value_part, epsilon_part)``.
    """
    base = p.subs(values)
    first = SparsePoly()
    for v, de in eps.items():
        d = p.diff(v)
        if d:
            first = first + d.subs(values) * poly(de)
    return base, first


class FractionPoly:
    """Polynomial divided by a product of named polynomial factors.

    The denominator is a ``Counter`` mapping factor polynomials to
    multiplicities; it is only ever built from factors the caller supplies
    (products of partial weight sums in practice), so no polynomial gcd is
    required: cancellation is by trial exact division against those factors.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den: Mapping[SparsePoly, int] | None = None):
        self.num = poly(num)
        self.den = Counter({f: e for f, e in (den or {}).items() if e})

    def den_poly(self) -> SparsePoly:
        out = SparsePoly.const(1)
        for f in sorted(self.den, key=str):
            out = out * f ** self.den[f]
        return out

    def _over(self, den: Counter) -> SparsePoly:
        extra = den - self.den
        out = self.num
        for f, e in extra.items():
            out = out * f ** e
        return out

    def __add__(self, other):
        other = _as_fp(other)
        den = self.den | other.den
        return FractionPoly(self._over(den) + other._over(den), den)

    __radd__ = __add__

    def __neg__(self):
        return FractionPoly(-self.num, self.den)

    def __sub__(self, other):
        return self + (-_as_fp(other))

    def __rsub__(self, other):
        return _as_fp(other) + (-self)

    def __mul__(self, other):
        other = _as_fp(other)
        return FractionPoly(self.num * other.num, self.den + other.den)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        return FractionPoly(self.num ** n, Counter({f: e * n for f, e in self.den.items()}))

    def divide_by(self, factor: SparsePoly, times: int = 1) -> "FractionPoly":
        den = Counter(self.den)
        den[factor] += times
        return FractionPoly(self.num, den)

    def is_zero(self) -> bool:
        return not self.num

    def reduced(self) -> "FractionPoly":
        """Cancel denominator factors that divide the numerator."""
        num = self.num
        den = Counter(self.den)
        if not num:
            return FractionPoly(num)
        for f in list(den):
            while den[f]:
                try:
                    num = divexact(num, f)
                except ArithmeticError:
                    break
                den[f] -= 1
        return FractionPoly(num, den)

    def subs(self, bindings: Mapping[VarId, object]) -> "FractionPoly":
        den: Counter = Counter()
        num = self.num.subs(bindings)
        for f, e in self.den.items():
            g = f.subs(bindings)
            if g.is_constant():
                num = num.scale(Fraction(1) / Fraction(g.constant_value()) ** e)
            else:
                den[g] += e
        return FractionPoly(num, den)

    def __eq__(self, other):
        other = _as_fp(other)
        den = self.den | other.den
        return self._over(den) == other._over(den)

    def __str__(self):
        if not self.den:
            return str(self.num)
        ds = "*".join(f"({f})" + (f"^{e}" if e > 1 else "") for f, e in sorted(self.den.items(), key=lambda t: str(t[0])))
        return f"({self.num})/{ds}"

    __repr__ = __str__


def _as_fp(x) -> FractionPoly:
    return x if isinstance(x, FractionPoly) else FractionPoly(poly(x))


def partial_sum(indices: Iterable[int], sub: int = 0) -> SparsePoly:
    """``m_{i1} + m_{i2} + ...`` for 1-based indices."""
    out = SparsePoly()
    for i in indices:
        out = out + SparsePoly.var(mvar(i, sub))
    return out


def lcm_denominators(values: Sequence[Rat]) -> int:
    return lcm(1, *[Fraction(v).denominator for v in values])
