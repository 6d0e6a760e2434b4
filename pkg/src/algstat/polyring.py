"""Sparse multivariate polynomials with exact rational coefficients.

Everything downstream (Groebner bases, parameterization maps, Jacobians)
is built on the two value types here: :class:`Polynomial` and
:class:`RationalFunction`.  Coefficients are `fractions.Fraction`; floats
are deliberately unsupported.  All values are immutable once built.

The text grammar used for interchange: terms joined by ``+``/``-``, a term
is an optional integer (or ``p/q``) coefficient and ``*``-separated
``var^k`` factors.  The parser additionally accepts parentheses so model
files can write unexpanded products; the printer always emits the flat
form.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import gcd, lcm
from typing import Mapping, Sequence, Union

Exponents = tuple  # one exponent per ring variable
Scalar = Union[int, Fraction]

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z_0-9]*\Z")


class RingMismatchError(ValueError):
    """Operands live in different rings (variables or order differ)."""


def _grevlex_key(exps):
    return (sum(exps), tuple(-e for e in reversed(exps)))


def _lex_key(exps):
    return exps


class MonomialOrder:
    """Total monomial order: ``lex``, ``grevlex``, or ``block``.

    A block order compares the leading block of variables grevlex-first,
    then the trailing block; any monomial involving a leading-block
    variable sorts above every monomial free of them, which is what makes
    elimination work.  ``block_size`` is the length of the leading block.
    """

    __slots__ = ("kind", "block_size")

    def __init__(self, kind: str, block_size: int = 0):
        if kind not in ("lex", "grevlex", "block"):
            raise ValueError(f"unknown monomial order kind: {kind!r}")
        if kind == "block" and block_size <= 0:
            raise ValueError("block order requires a positive block size")
        self.kind = kind
        self.block_size = block_size if kind == "block" else 0

    def key_function(self):
        if self.kind == "lex":
            return _lex_key
        if self.kind == "grevlex":
            return _grevlex_key
        k = self.block_size

        def _block_key(exps, _k=k):
            return (_grevlex_key(exps[:_k]), _grevlex_key(exps[_k:]))

        return _block_key

    def __eq__(self, other):
        return (
            isinstance(other, MonomialOrder)
            and self.kind == other.kind
            and self.block_size == other.block_size
        )

    def __hash__(self):
        return hash((self.kind, self.block_size))

    def __repr__(self):
        if self.kind == "block":
            return f"MonomialOrder('block', {self.block_size})"
        return f"MonomialOrder({self.kind!r})"


def mono_compare(a: Exponents, b: Exponents, order: MonomialOrder) -> int:
    """Return -1, 0, or +1 comparing exponent vectors under ``order``."""
    if len(a) != len(b):
        raise RingMismatchError(
            f"monomials over different variable tables ({len(a)} vs {len(b)} variables)"
        )
    key = order.key_function()
    ka, kb = key(tuple(a)), key(tuple(b))
    return (ka > kb) - (ka < kb)


def mono_mul(a: Exponents, b: Exponents) -> Exponents:
    return tuple(x + y for x, y in zip(a, b))

def mono_divides(a: Exponents, b: Exponents) -> bool:
    """True when monomial ``a`` divides ``b``."""
    return all(x <= y for x, y in zip(a, b))

def mono_div(a: Exponents, b: Exponents) -> Exponents:
    return tuple(x - y for x, y in zip(a, b))

def mono_lcm(a: Exponents, b: Exponents) -> Exponents:
    return tuple(max(x, y) for x, y in zip(a, b))

def mono_degree(a: Exponents) -> int:
    return sum(a)


class PolyRing:
    """A variable table plus an active monomial order.

    ``block`` (when given) is the size of the leading variable block used
    by elimination orders; the leading block always occupies the first
    ``block`` positions of ``names``.
    """

    __slots__ = ("names", "index", "order", "nvars", "_key", "zero", "one")

    def __init__(self, names: Sequence[str], order="grevlex", block: int = 0):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names in ring")
        for n in names:
            if not _IDENT_RE.match(n):
                raise ValueError(f"invalid variable name: {n!r}")
        if isinstance(order, str):
            order = MonomialOrder(order, block)
        self.names = names
        self.index = {n: i for i, n in enumerate(names)}
        self.order = order
        self.nvars = len(names)
        self._key = order.key_function()
        self.zero = Polynomial(self, ())
        self.one = Polynomial._make(self, {(0,) * self.nvars: Fraction(1)})

    # -- constructors ----------------------------------------------------

    def var(self, name: str) -> "Polynomial":
        i = self.index[name]
        exps = tuple(1 if j == i else 0 for j in range(self.nvars))
        return Polynomial._make(self, {exps: Fraction(1)})

    def const(self, c) -> "Polynomial":
        c = Fraction(c)
        if c == 0:
            return self.zero
        return Polynomial._make(self, {(0,) * self.nvars: c})

    def poly(self, mapping: Mapping[Exponents, Scalar]) -> "Polynomial":
        return Polynomial._make(self, {tuple(e): Fraction(c) for e, c in mapping.items()})

    def parse(self, text: str) -> "Polynomial":
        return _parse_polynomial(text, self)

    # -- derived rings ---------------------------------------------------

    def with_order(self, order, block: int = 0) -> "PolyRing":
        if isinstance(order, str):
            order = MonomialOrder(order, block)
        if order == self.order:
            return self
        return PolyRing(self.names, order)

    def permuted(self, new_names: Sequence[str], order="grevlex", block: int = 0) -> "PolyRing":
        if set(new_names) != set(self.names) or len(new_names) != self.nvars:
            raise ValueError("permuted ring must use exactly the same variables")
        return PolyRing(new_names, order, block)

    def same_variables(self, other: "PolyRing") -> bool:
        return self.names == other.names

    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and self.names == other.names
            and self.order == other.order
        )

    def __hash__(self):
        return hash((self.names, self.order))

    def __repr__(self):
        return f"PolyRing({list(self.names)!r}, {self.order!r})"


def _check_same_ring(f: "Polynomial", g: "Polynomial"):
    if f.ring is not g.ring and f.ring != g.ring:
        raise RingMismatchError(f"ring mismatch: {f.ring!r} vs {g.ring!r}")


class Polynomial:
    """Immutable sparse polynomial; terms kept strictly descending.

    Internal term storage is a tuple of ``(sort_key, exponents, coeff)``
    triples; keys are precomputed so merges during reduction never
    re-derive them.
    """

    __slots__ = ("ring", "_terms")

    def __init__(self, ring: PolyRing, terms=()):
        self.ring = ring
        self._terms = tuple(terms)

    @classmethod
    def _make(cls, ring: PolyRing, mapping: Mapping[Exponents, Fraction]) -> "Polynomial":
        key = ring._key
        items = [(key(e), e, c) for e, c in mapping.items() if c != 0]
        items.sort(key=lambda t: t[0], reverse=True)
        return cls(ring, items)

    @classmethod
    def _from_sorted(cls, ring: PolyRing, items) -> "Polynomial":
        return cls(ring, items)

    # -- basic views -----------------------------------------------------

    @property
    def terms(self):
        """Terms as ``(coefficient, exponents)`` pairs, descending."""
        return tuple((c, e) for _, e, c in self._terms)

    def as_dict(self):
        return {e: c for _, e, c in self._terms}

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def leading_monomial(self) -> Exponents:
        if not self._terms:
            raise ValueError("zero polynomial has no leading monomial")
        return self._terms[0][1]

    def leading_coefficient(self) -> Fraction:
        if not self._terms:
            return Fraction(0)
        return self._terms[0][2]

    def total_degree(self) -> int:
        if not self._terms:
            return -1
        return max(sum(e) for _, e, _ in self._terms)

    def degree_in(self, name: str) -> int:
        i = self.ring.index[name]
        if not self._terms:
            return -1
        return max(e[i] for _, e, _ in self._terms)

    def variables_used(self):
        used = [False] * self.ring.nvars
        for _, e, _ in self._terms:
            for i, x in enumerate(e):
                if x:
                    used[i] = True
        return {self.ring.names[i] for i, u in enumerate(used) if u}

    def constant_value(self) -> Fraction:
        """Coefficient of the constant monomial (0 when absent)."""
        zero = (0,) * self.ring.nvars
        for _, e, c in self._terms:
            if e == zero:
                return c
        return Fraction(0)

    def is_constant(self) -> bool:
        return all(not any(e) for _, e, _ in self._terms)

    # -- arithmetic ------------------------------------------------------

    def _merged(self, other_items, negate=False):
        a, b = self._terms, other_items
        out = []
        i = j = 0
        na, nb = len(a), len(b)
        while i < na and j < nb:
            ka, kb = a[i][0], b[j][0]
            if ka > kb:
                out.append(a[i]); i += 1
            elif ka < kb:
                kj, ej, cj = b[j]
                out.append((kj, ej, -cj) if negate else b[j]); j += 1
            else:
                c = a[i][2] - b[j][2] if negate else a[i][2] + b[j][2]
                if c:
                    out.append((ka, a[i][1], c))
                i += 1; j += 1
        out.extend(a[i:])
        if negate:
            out.extend((k, e, -c) for k, e, c in b[j:])
        else:
            out.extend(b[j:])
        return Polynomial(self.ring, out)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        elif isinstance(other, RationalFunction):
            return NotImplemented
        _check_same_ring(self, other)
        return self._merged(other._terms)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        elif isinstance(other, RationalFunction):
            return NotImplemented
        _check_same_ring(self, other)
        return self._merged(other._terms, negate=True)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return Polynomial(self.ring, tuple((k, e, -c) for k, e, c in self._terms))

    def scale(self, c) -> "Polynomial":
        c = Fraction(c)
        if c == 0:
            return self.ring.zero
        return Polynomial(self.ring, tuple((k, e, c * x) for k, e, x in self._terms))

    def mul_term(self, coeff, exps: Exponents) -> "Polynomial":
        """Multiply by a single term; stays sorted because orders are multiplicative."""
        coeff = Fraction(coeff)
        if coeff == 0:
            return self.ring.zero
        if not any(exps):
            return self.scale(coeff)
        key = self.ring._key
        items = tuple(
            (key(me), me, c * coeff)
            for me, c in ((mono_mul(e, exps), c) for _, e, c in self._terms)
        )
        return Polynomial(self.ring, items)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, RationalFunction):
            return NotImplemented
        _check_same_ring(self, other)
        if len(self._terms) < len(other._terms):
            small, big = self._terms, other
        else:
            small, big = other._terms, self
        acc: dict = {}
        for _, e, c in small:
            for _, e2, c2 in big._terms:
                m = mono_mul(e, e2)
                v = acc.get(m)
                acc[m] = c * c2 if v is None else v + c * c2
        return Polynomial._make(self.ring, acc)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative polynomial power; use RationalFunction")
        result = self.ring.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base2 = base * base if n > 1 else base
            base, n = base2, n >> 1
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(Fraction(1, 1) / Fraction(other))
        if isinstance(other, Polynomial):
            return RationalFunction(self, other)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and [
            (e, c) for _, e, c in self._terms
        ] == [(e, c) for _, e, c in other._terms]

    def __hash__(self):
        return hash((self.ring, tuple((e, c) for _, e, c in self._terms)))

    # -- calculus / evaluation -------------------------------------------

    def partial(self, name: str) -> "Polynomial":
        """Formal partial derivative with respect to ``name``."""
        if name not in self.ring.index:
            raise ValueError(f"unknown variable: {name!r}")
        i = self.ring.index[name]
        acc = {}
        for _, e, c in self._terms:
            if e[i]:
                e2 = e[:i] + (e[i] - 1,) + e[i + 1:]
                acc[e2] = acc.get(e2, Fraction(0)) + c * e[i]
        return Polynomial._make(self.ring, acc)

    def evaluate(self, point) -> Fraction:
        """Evaluate at a full rational point (dict by name, or sequence)."""
        if isinstance(point, Mapping):
            vals = [Fraction(point[n]) for n in self.ring.names]
        else:
            vals = [Fraction(v) for v in point]
            if len(vals) != self.ring.nvars:
                raise ValueError("point dimension mismatch")
        # cache powers per variable
        pows: list[dict] = [{0: Fraction(1)} for _ in vals]
        total = Fraction(0)
        for _, e, c in self._terms:
            t = c
            for i, k in enumerate(e):
                if k:
                    cache = pows[i]
                    p = cache.get(k)
                    if p is None:
                        p = vals[i] ** k
                        cache[k] = p
                    t *= p
            total += t
        return total

    def substitute(self, assignment: Mapping[str, object], target: PolyRing | None = None):
        """Substitute variables by polynomials, rational functions, or scalars.

        Unassigned variables map to themselves and must exist (by name) in
        the target ring.  Returns a Polynomial, or a RationalFunction when
        any assigned value is one.
        """
        return _substitute(self, assignment, target)

    def reindex(self, target: PolyRing) -> "Polynomial":
        """Re-express in ``target``, matching variables by name.

        Variables actually used must exist in the target; exponents are
        permuted/embedded accordingly.
        """
        if target == self.ring:
            return self
        pos = []
        for i, n in enumerate(self.ring.names):
            pos.append(target.index.get(n, -1))
        acc = {}
        for _, e, c in self._terms:
            out = [0] * target.nvars
            for i, x in enumerate(e):
                if x:
                    j = pos[i]
                    if j < 0:
                        raise RingMismatchError(
                            f"variable {self.ring.names[i]!r} missing from target ring"
                        )
                    out[j] = x
            acc[tuple(out)] = acc.get(tuple(out), Fraction(0)) + c
        return Polynomial._make(target, acc)

    # -- normal forms ------------------------------------------------------

    def content(self) -> Fraction:
        """Positive rational c such that self/c has coprime integer coefficients."""
        if not self._terms:
            return Fraction(1)
        num = 0
        den = 1
        for _, _, c in self._terms:
            num = gcd(num, c.numerator)
            den = lcm(den, c.denominator)
        return Fraction(abs(num), den)

    def primitive(self) -> "Polynomial":
        """Integer-cleared form: content 1, positive leading coefficient."""
        if not self._terms:
            return self
        c = self.content()
        if self._terms[0][2] < 0:
            c = -c
        if c == 1:
            return self
        return self.scale(Fraction(1, 1) / c)

    def monic(self) -> "Polynomial":
        if not self._terms:
            return self
        return self.scale(Fraction(1, 1) / self._terms[0][2])

    # -- printing ----------------------------------------------------------

    def _term_string(self, coeff: Fraction, exps: Exponents) -> str:
        factors = []
        for i, k in enumerate(exps):
            if k == 1:
                factors.append(self.ring.names[i])
            elif k > 1:
                factors.append(f"{self.ring.names[i]}^{k}")
        if not factors:
            return str(abs(coeff))
        body = "*".join(factors)
        a = abs(coeff)
        return body if a == 1 else f"{a}*{body}"

    def _render(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for n, (_, e, c) in enumerate(self._terms):
            s = self._term_string(c, e)
            if n == 0:
                parts.append(s if c > 0 else "-" + s)
            else:
                parts.append(("+ " if c > 0 else "- ") + s)
        return " ".join(parts)

    def canonical_string(self, order: MonomialOrder | str | None = None, block: int = 0) -> str:
        """Integer-cleared text form with positive leading coefficient.

        ``order`` controls term placement (default: the ring's own order);
        the sign convention follows the leading term of that order.
        """
        p = self
        if order is not None:
            p = p.reindex(self.ring.with_order(order, block))
        p = p.primitive()
        return p._render()

    def __str__(self):
        return self._render()

    def __repr__(self):
        return f"<poly {self._render()}>"


def poly_divide(f: Polynomial, divisors: Sequence[Polynomial]):
    """Multivariate division: ``f = sum(q_i * d_i) + r``.

    Uses the first divisor (in given order) whose leading monomial divides
    the current leading monomial, so remainders are deterministic.  No
    monomial of ``r`` is divisible by any divisor's leading monomial.
    """
    for d in divisors:
        _check_same_ring(f, d)
        if d.is_zero:
            raise ZeroDivisionError("zero polynomial among divisors")
    quotients = [f.ring.zero for _ in divisors]
    r_items: list = []
    p = f
    lead = [(d.leading_monomial(), d.leading_coefficient()) for d in divisors]
    while p._terms:
        pk, pe, pc = p._terms[0]
        for i, (dm, dc) in enumerate(lead):
            if mono_divides(dm, pe):
                shift = mono_div(pe, dm)
                coeff = pc / dc
                quotients[i] = quotients[i] + f.ring.poly({shift: coeff})
                p = p._merged(divisors[i].mul_term(coeff, shift)._terms, negate=True)
                break
        else:
            r_items.append((pk, pe, pc))
            p = Polynomial(f.ring, p._terms[1:])
    return quotients, Polynomial(f.ring, r_items)


def normal_form(f: Polynomial, divisors: Sequence[Polynomial]) -> Polynomial:
    """Remainder of division, without tracking quotients (hot path)."""
    r_items: list = []
    p = f
    lead = [(d.leading_monomial(), d.leading_coefficient()) for d in divisors]
    while p._terms:
        pk, pe, pc = p._terms[0]
        reduced = False
        for i, (dm, dc) in enumerate(lead):
            if mono_divides(dm, pe):
                p = p._merged(divisors[i].mul_term(pc / dc, mono_div(pe, dm))._terms, negate=True)
                reduced = True
                break
        if not reduced:
            r_items.append((pk, pe, pc))
            p = Polynomial(f.ring, p._terms[1:])
    return Polynomial(f.ring, r_items)


class RationalFunction:
    """Quotient of two polynomials over the same ring.

    Canonical form keeps the denominator primitive with positive leading
    coefficient; no multivariate gcd is attempted (content-level
    cancellation only).  Zero testing is exact: the function is zero iff
    its numerator is the zero polynomial.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial, den: Polynomial):
        _check_same_ring(num, den)
        if den.is_zero:
            raise ZeroDivisionError("zero denominator in rational function")
        if num.is_zero:
            num, den = num.ring.zero, num.ring.one
        else:
            c = den.content()
            if den.leading_coefficient() < 0:
                c = -c
            if c != 1:
                inv = Fraction(1, 1) / c
                num, den = num.scale(inv), den.scale(inv)
        self.num = num
        self.den = den

    @property
    def ring(self) -> PolyRing:
        return self.num.ring

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def as_polynomial(self) -> Polynomial:
        if not self.is_polynomial():
            raise ValueError("denominator is not constant")
        return self.num.scale(Fraction(1, 1) / self.den.constant_value())

    @classmethod
    def lift(cls, value, ring: PolyRing) -> "RationalFunction":
        if isinstance(value, RationalFunction):
            return value
        if isinstance(value, Polynomial):
            return cls(value, value.ring.one)
        return cls(ring.const(value), ring.one)

    def __add__(self, other):
        other = RationalFunction.lift(other, self.ring)
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    __radd__ = __add__

    def __sub__(self, other):
        other = RationalFunction.lift(other, self.ring)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __mul__(self, other):
        other = RationalFunction.lift(other, self.ring)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = RationalFunction.lift(other, self.ring)
        if other.is_zero:
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return RationalFunction.lift(other, self.ring) / self

    def __pow__(self, n: int):
        if n < 0:
            return RationalFunction(self.den, self.num) ** (-n)
        return RationalFunction(self.num ** n, self.den ** n)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Polynomial)):
            other = RationalFunction.lift(other, self.ring)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return (self.num * other.den - other.num * self.den).is_zero

    def __hash__(self):
        raise TypeError("rational functions are not hashable (no canonical gcd form)")

    def partial(self, name: str) -> "RationalFunction":
        n, d = self.num, self.den
        return RationalFunction(n.partial(name) * d - n * d.partial(name), d * d)

    def evaluate(self, point) -> Fraction:
        dv = self.den.evaluate(point)
        if dv == 0:
            raise ZeroDivisionError("denominator vanishes at evaluation point")
        return self.num.evaluate(point) / dv

    def substitute(self, assignment, target: PolyRing | None = None):
        num = _substitute(self.num, assignment, target)
        den = _substitute(self.den, assignment, target)
        num = RationalFunction.lift(num, num.ring)
        den = RationalFunction.lift(den, den.ring)
        return num / den

    def reindex(self, target: PolyRing) -> "RationalFunction":
        return RationalFunction(self.num.reindex(target), self.den.reindex(target))

    def __str__(self):
        if self.is_polynomial():
            return str(self.as_polynomial())
        return f"({self.num}) / ({self.den})"

    def __repr__(self):
        return f"<ratfun {self}>"


def _substitute(f: Polynomial, assignment: Mapping[str, object], target: PolyRing | None):
    ring = f.ring
    values: dict[int, object] = {}
    for name, v in assignment.items():
        if name not in ring.index:
            raise ValueError(f"assignment for unknown variable {name!r}")
        values[ring.index[name]] = v
    # pick the target ring
    if target is None:
        for v in values.values():
            if isinstance(v, (Polynomial, RationalFunction)):
                target = v.ring
                break
        else:
            target = ring
    has_rf = any(isinstance(v, RationalFunction) for v in values.values())
    exprs: dict[int, object] = {}
    for i in range(ring.nvars):
        if i in values:
            v = values[i]
            if isinstance(v, (int, Fraction)):
                v = target.const(v)
            elif isinstance(v, (Polynomial, RationalFunction)) and v.ring != target:
                v = v.reindex(target)
            exprs[i] = v
        else:
            if ring.names[i] not in target.index:
                raise RingMismatchError(
                    f"unassigned variable {ring.names[i]!r} missing from target ring"
                )
            exprs[i] = target.var(ring.names[i])
    if has_rf:
        exprs = {i: RationalFunction.lift(v, target) for i, v in exprs.items()}
        acc_rf = RationalFunction(target.zero, target.one)
        for _, e, c in f._terms:
            t = RationalFunction(target.const(c), target.one)
            for i, k in enumerate(e):
                if k:
                    t = t * (exprs[i] ** k)
            acc_rf = acc_rf + t
        return acc_rf
    pow_cache: dict[tuple[int, int], Polynomial] = {}
    acc = target.zero
    for _, e, c in f._terms:
        t = target.const(c)
        for i, k in enumerate(e):
            if k:
                p = pow_cache.get((i, k))
                if p is None:
                    p = exprs[i] ** k
                    pow_cache[(i, k)] = p
                t = t * p
        acc = acc + t
    return acc


# -- parser ----------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()]))"
)


class PolyParseError(ValueError):
    pass


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            rest = text[pos:].strip()
            if not rest:
                break
            raise PolyParseError(f"bad character in polynomial near {rest[:12]!r}")
        if m.group("int") is not None:
            tokens.append(("int", int(m.group("int"))))
        elif m.group("name") is not None:
            tokens.append(("name", m.group("name")))
        else:
            tokens.append(("op", m.group("op")))
        pos = m.end()
    tokens.append(("end", None))
    return tokens


class _Parser:
    def __init__(self, tokens, ring: PolyRing):
        self.toks = tokens
        self.i = 0
        self.ring = ring

    def peek(self):
        return self.toks[self.i]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expr(self) -> Polynomial:
        sign = 1
        kind, val = self.peek()
        if kind == "op" and val in "+-":
            self.next()
            sign = -1 if val == "-" else 1
        acc = self.term().scale(sign)
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.next()
                t = self.term()
                acc = acc - t if val == "-" else acc + t
            else:
                return acc

    def term(self) -> Polynomial:
        acc = self.factor()
        while True:
            kind, val = self.peek()
            if kind == "op" and val == "*":
                self.next()
                acc = acc * self.factor()
            elif kind == "op" and val == "/":
                self.next()
                kind2, val2 = self.next()
                if kind2 != "int":
                    raise PolyParseError("'/' is only allowed between integers")
                if val2 == 0:
                    raise PolyParseError("division by zero in coefficient")
                acc = acc.scale(Fraction(1, val2))
            else:
                return acc

    def factor(self) -> Polynomial:
        base = self.atom()
        kind, val = self.peek()
        if kind == "op" and val == "^":
            self.next()
            kind2, val2 = self.next()
            if kind2 != "int":
                raise PolyParseError("exponent must be a non-negative integer")
            return base ** val2
        return base

    def atom(self) -> Polynomial:
        kind, val = self.next()
        if kind == "int":
            return self.ring.const(val)
        if kind == "name":
            if val not in self.ring.index:
                raise PolyParseError(f"unknown variable {val!r}")
            return self.ring.var(val)
        if kind == "op" and val == "(":
            inner = self.expr()
            kind2, val2 = self.next()
            if not (kind2 == "op" and val2 == ")"):
                raise PolyParseError("unbalanced parentheses")
            return inner
        if kind == "op" and val == "-":
            return -self.atom()
        raise PolyParseError(f"unexpected token {val!r}")


def _parse_polynomial(text: str, ring: PolyRing) -> Polynomial:
    parser = _Parser(_tokenize(text), ring)
    p = parser.expr()
    kind, val = parser.peek()
    if kind != "end":
        raise PolyParseError(f"trailing input at {val!r}")
    return p
