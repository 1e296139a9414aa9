"""Sparse multivariate polynomials over F_p.

A polynomial is a map from exponent tuples to nonzero canonical residues.
Terms iterate in descending graded-lexicographic order, which is also the
order used when printing.
"""

from __future__ import annotations

import itertools
import math
import re
from typing import Iterable, Mapping, Sequence

from .errors import (
    ArityMismatch,
    FieldMismatch,
    PolynomialSyntaxError,
    VariableIndexOutOfRange,
)
from .field import FieldElement, PrimeField

# Degree of the zero polynomial.
DEG_ZERO = float("-inf")


def grlex_key(exps: tuple) -> tuple:
    return (sum(exps), exps)


def _binom_mod(n: int, k: int, p: int) -> int:
    if k < 0 or k > n:
        return 0
    return math.comb(n, k) % p


class MPoly:
    """Polynomial in ``n`` variables ``x1..xn`` over ``field``."""

    __slots__ = ("n", "field", "_terms", "_hash")

    def __init__(self, n: int, field: PrimeField, terms: Mapping[tuple, int] | None = None):
        p = field.p
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != n:
                raise ArityMismatch(f"exponent {exps} has length {len(exps)}, expected {n}")
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            c = int(c) % p
            if c:
                clean[exps] = c
        self.n = n
        self.field = field
        self._terms = dict(sorted(clean.items(), key=lambda t: grlex_key(t[0]), reverse=True))
        self._hash = None

    @classmethod
    def _raw(cls, n: int, field: PrimeField, acc: dict) -> "MPoly":
        """Build from a dict whose values may be unreduced; zeros dropped."""
        p = field.p
        obj = cls.__new__(cls)
        obj.n = n
        obj.field = field
        items = [(e, c % p) for e, c in acc.items()]
        obj._terms = dict(
            sorted(((e, c) for e, c in items if c), key=lambda t: grlex_key(t[0]), reverse=True)
        )
        obj._hash = None
        return obj

    # construction helpers

    @classmethod
    def zero(cls, n: int, field: PrimeField) -> "MPoly":
        return cls(n, field)

    @classmethod
    def constant(cls, c: int, n: int, field: PrimeField) -> "MPoly":
        return cls(n, field, {(0,) * n: c})

    @classmethod
    def var(cls, i: int, n: int, field: PrimeField) -> "MPoly":
        """The variable ``x_i`` (1-based)."""
        if not 1 <= i <= n:
            raise VariableIndexOutOfRange(f"x{i} not in x1..x{n}")
        e = [0] * n
        e[i - 1] = 1
        return cls(n, field, {tuple(e): 1})

    @classmethod
    def linear(cls, coeffs: Sequence[int], field: PrimeField, const: int = 0) -> "MPoly":
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            e = [0] * n
            e[i] = 1
            terms[tuple(e)] = c
        terms[(0,) * n] = const
        return cls(n, field, terms)

    # basic accessors

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coeff(self, exps: Iterable[int]) -> FieldElement:
        return FieldElement(self._terms.get(tuple(exps), 0), self.field)

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def constant_term(self) -> int:
        return self._terms.get((0,) * self.n, 0)

    @property
    def degree(self):
        if not self._terms:
            return DEG_ZERO
        return max(sum(e) for e in self._terms)

    def degree_in(self, i: int):
        """Degree in ``x_i`` (1-based)."""
        if not self._terms:
            return DEG_ZERO
        return max(e[i - 1] for e in self._terms)

    def variables_used(self) -> set[int]:
        return {i + 1 for e in self._terms for i, k in enumerate(e) if k}

    # arithmetic

    def _check(self, other: "MPoly"):
        if other.field != self.field:
            raise FieldMismatch(f"F_{self.field.p} vs F_{other.field.p}")
        if other.n != self.n:
            raise ArityMismatch(f"{self.n} vs {other.n} variables")

    def _lift(self, other) -> "MPoly | None":
        if isinstance(other, MPoly):
            self._check(other)
            return other
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatch(f"F_{self.field.p} vs F_{other.field.p}")
            return MPoly.constant(other.value, self.n, self.field)
        if isinstance(other, int):
            return MPoly.constant(other, self.n, self.field)
        return None

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        acc = dict(self._terms)
        for e, c in other._terms.items():
            acc[e] = acc.get(e, 0) + c
        return MPoly._raw(self.n, self.field, acc)

    __radd__ = __add__

    def __neg__(self):
        return MPoly._raw(self.n, self.field, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def scale(self, c) -> "MPoly":
        c = c.value if isinstance(c, FieldElement) else int(c)
        return MPoly._raw(self.n, self.field, {e: v * c for e, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, FieldElement)):
            if isinstance(other, FieldElement) and other.field != self.field:
                raise FieldMismatch(f"F_{self.field.p} vs F_{other.field.p}")
            return self.scale(other)
        if not isinstance(other, MPoly):
            return NotImplemented
        self._check(other)
        p = self.field.p
        acc: dict = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                acc[e] = (acc.get(e, 0) + c1 * c2) % p
        return MPoly._raw(self.n, self.field, acc)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "MPoly":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = MPoly.constant(1, self.n, self.field)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, MPoly):
            return (
                self.n == other.n
                and self.field == other.field
                and self._terms == other._terms
            )
        if isinstance(other, int):
            return self == MPoly.constant(other, self.n, self.field)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, self.field.p, tuple(self._terms.items())))
        return self._hash

    def __call__(self, *point):
        if len(point) == 1 and isinstance(point[0], (tuple, list)):
            point = point[0]
        return evaluate(self, point)

    def __str__(self):
        return to_string(self)

    def __repr__(self):
        return f"MPoly({to_string(self)!r}, n={self.n}, p={self.field.p})"

    # structural operations

    def embed(self, n: int, positions: Sequence[int] | None = None) -> "MPoly":
        """Re-home into ``n`` variables; variable ``j`` goes to ``positions[j]`` (0-based)."""
        if positions is None:
            positions = range(self.n)
        positions = list(positions)
        terms = {}
        for e, c in self._terms.items():
            new = [0] * n
            for j, k in enumerate(e):
                new[positions[j]] += k
            terms[tuple(new)] = c
        return MPoly(n, self.field, terms)

    def drop_variables(self, keep: Sequence[int]) -> "MPoly":
        """Restrict to the 0-based variables in ``keep``; others must not occur."""
        terms = {}
        keep = list(keep)
        dropped = [i for i in range(self.n) if i not in keep]
        for e, c in self._terms.items():
            if any(e[i] for i in dropped):
                raise ValueError("polynomial depends on a dropped variable")
            terms[tuple(e[i] for i in keep)] = c
        return MPoly(len(keep), self.field, terms)


# --------------------------------------------------------------------------
# text format


_TOKEN = re.compile(r"\s*(?:(\d+)|x(\d+)|(\*\*|[-+*^()])|(\S))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        num, var, op, bad = m.groups()
        if bad is not None:
            raise PolynomialSyntaxError(f"unexpected character {bad!r} at offset {m.start(4)}")
        if num is not None:
            tokens.append(("num", int(num)))
        elif var is not None:
            tokens.append(("var", int(var)))
        else:
            tokens.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str, n: int, field: PrimeField):
        self.tokens = _tokenize(text)
        self.i = 0
        self.n = n
        self.field = field

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def parse(self) -> MPoly:
        if not self.tokens:
            raise PolynomialSyntaxError("empty polynomial")
        result = self.expr()
        if self.i != len(self.tokens):
            raise PolynomialSyntaxError(f"unexpected token {self.peek()[1]!r}")
        return result

    def expr(self) -> MPoly:
        result = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            _, op = self.take()
            rhs = self.term()
            result = result + rhs if op == "+" else result - rhs
        return result

    def term(self) -> MPoly:
        result = self.unary()
        while self.peek() == ("op", "*"):
            self.take()
            result = result * self.unary()
        return result

    def unary(self) -> MPoly:
        if self.peek() == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> MPoly:
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, value = self.take()
            if kind != "num":
                raise PolynomialSyntaxError("exponent must be a nonnegative integer literal")
            return base ** value
        return base

    def atom(self) -> MPoly:
        kind, value = self.take()
        if kind == "num":
            return MPoly.constant(value, self.n, self.field)
        if kind == "var":
            if not 1 <= value <= self.n:
                raise VariableIndexOutOfRange(f"x{value} not in x1..x{self.n}")
            return MPoly.var(value, self.n, self.field)
        if (kind, value) == ("op", "("):
            inner = self.expr()
            if self.take() != ("op", ")"):
                raise PolynomialSyntaxError("missing ')'")
            return inner
        if kind is None:
            raise PolynomialSyntaxError("unexpected end of input")
        raise PolynomialSyntaxError(f"unexpected token {value!r}")


def parse_poly(text: str, n: int, field: PrimeField) -> MPoly:
    """Parse ``x1..xn`` polynomial text; ``^`` binds tightest, then ``*``, then ``+ -``."""
    return _Parser(text, n, field).parse()


def to_string(f: MPoly) -> str:
    if f.is_zero():
        return "0"
    parts = []
    for e, c in f.items():
        b = f.field.balanced(c)
        sign = "-" if b < 0 else "+"
        mag = abs(b)
        factors = []
        for i, k in enumerate(e):
            if k == 1:
                factors.append(f"x{i + 1}")
            elif k > 1:
                factors.append(f"x{i + 1}^{k}")
        if mag != 1 or not factors:
            factors.insert(0, str(mag))
        parts.append((sign, "*".join(factors)))
    head_sign, head = parts[0]
    out = ("-" if head_sign == "-" else "") + head
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


# --------------------------------------------------------------------------
# operations


def poly_arith(kind: str, f: MPoly, g) -> MPoly:
    if kind == "add":
        return f + g
    if kind == "sub":
        return f - g
    if kind == "mul":
        return f * g
    if kind == "scale":
        return f.scale(g)
    raise ValueError(f"unknown polynomial operation {kind!r}")


def _coords(point, fld: PrimeField) -> tuple:
    return tuple(c.value if isinstance(c, FieldElement) else int(c) % fld.p for c in point)


def evaluate(f: MPoly, point) -> FieldElement:
    if len(point) != f.n:
        raise ArityMismatch(f"point of length {len(point)} for {f.n} variables")
    p = f.field.p
    a = _coords(point, f.field)
    total = 0
    for e, c in f.items():
        t = c
        for ai, k in zip(a, e):
            if k:
                t = t * pow(ai, k, p) % p
        total += t
    return FieldElement(total, f.field)


def _substitute_translate(f: MPoly, i: int, t: int) -> MPoly:
    """Replace ``x_i`` (0-based) by ``x_i + t``."""
    p = f.field.p
    acc: dict = {}
    for e, c in f.items():
        k = e[i]
        if k == 0:
            acc[e] = acc.get(e, 0) + c
            continue
        tp = 1
        # (x + t)^k = sum_j C(k, j) t^(k-j) x^j, walk j downward from k
        for j in range(k, -1, -1):
            coef = c * math.comb(k, j) * tp % p
            if coef:
                ne = e[:i] + (j,) + e[i + 1 :]
                acc[ne] = acc.get(ne, 0) + coef
            tp = tp * t % p
    return MPoly._raw(f.n, f.field, acc)


def shift(f: MPoly, u) -> MPoly:
    """The shifted polynomial ``f(x1 - u1, ..., xn - un)``."""
    if len(u) != f.n:
        raise ArityMismatch(f"shift of length {len(u)} for {f.n} variables")
    u = _coords(u, f.field)
    g = f
    for i, ui in enumerate(u):
        if ui:
            g = _substitute_translate(g, i, -ui)
    return g


def hasse_derivative(f: MPoly, i: int, k: int) -> MPoly:
    """k-th Hasse derivative with respect to ``x_i`` (1-based)."""
    if not 1 <= i <= f.n:
        raise VariableIndexOutOfRange(f"x{i} not in x1..x{f.n}")
    if k < 0:
        return MPoly.zero(f.n, f.field)
    s = [0] * f.n
    s[i - 1] = k
    return hasse_multi(f, s)


def hasse_multi(f: MPoly, s: Sequence[int]) -> MPoly:
    """Composite Hasse derivative for multi-index ``s``; negative entries give 0."""
    if len(s) != f.n:
        raise ArityMismatch(f"multi-index of length {len(s)} for {f.n} variables")
    if any(k < 0 for k in s):
        return MPoly.zero(f.n, f.field)
    p = f.field.p
    acc = {}
    for e, c in f.items():
        if any(ei < si for ei, si in zip(e, s)):
            continue
        coef = c
        for ei, si in zip(e, s):
            if si:
                coef = coef * _binom_mod(ei, si, p) % p
        if coef:
            ne = tuple(ei - si for ei, si in zip(e, s))
            acc[ne] = acc.get(ne, 0) + coef
    return MPoly._raw(f.n, f.field, acc)


def gradient(f: MPoly) -> list[MPoly]:
    return [hasse_derivative(f, i, 1) for i in range(1, f.n + 1)]


def homogeneous_component(f: MPoly, j: int) -> MPoly:
    return MPoly(f.n, f.field, {e: c for e, c in f.items() if sum(e) == j})


def multi_indices(n: int, total: int):
    """All ``s`` in N^n with ``|s| == total``, in descending lexicographic order."""
    if n == 0:
        if total == 0:
            yield ()
        return
    for first in range(total, -1, -1):
        for rest in multi_indices(n - 1, total - first):
            yield (first,) + rest


def substitute(g: MPoly, forms: Sequence[MPoly]) -> MPoly:
    """The composition ``g(forms[0], ..., forms[k-1])``."""
    if len(forms) != g.n:
        raise ArityMismatch(f"{len(forms)} substitutions for {g.n} variables")
    if not forms:
        raise ArityMismatch("target ring unknown for a 0-variable substitution")
    n, fld = forms[0].n, forms[0].field
    for h in forms:
        if h.n != n or h.field != fld:
            raise ArityMismatch("substituted polynomials must share a ring")
    powers: list[dict[int, MPoly]] = [{0: MPoly.constant(1, n, fld)} for _ in forms]

    def power(i: int, k: int) -> MPoly:
        cache = powers[i]
        if k not in cache:
            cache[k] = power(i, k - 1) * forms[i]
        return cache[k]

    result = MPoly.zero(n, fld)
    for e, c in g.items():
        t = MPoly.constant(c, n, fld)
        for i, k in enumerate(e):
            if k:
                t = t * power(i, k)
        result = result + t
    return result


def taylor_reconstruct(f: MPoly, y) -> MPoly:
    """Sum of ``(D^(s) f)(y) * (x - y)^s`` over all ``|s| <= deg f``."""
    fld = f.field
    y = _coords(y, fld)
    if len(y) != f.n:
        raise ArityMismatch(f"center of length {len(y)} for {f.n} variables")
    result = MPoly.zero(f.n, fld)
    if f.is_zero():
        return result
    centered = [MPoly.var(i + 1, f.n, fld) - y[i] for i in range(f.n)]
    maxdeg = [f.degree_in(i + 1) for i in range(f.n)]
    for total in range(f.degree + 1):
        for s in multi_indices(f.n, total):
            if any(si > mi for si, mi in zip(s, maxdeg)):
                continue
            value = evaluate(hasse_multi(f, s), y).value
            if not value:
                continue
            term = MPoly.constant(value, f.n, fld)
            for i, si in enumerate(s):
                if si:
                    term = term * centered[i] ** si
            result = result + term
    return result


def random_poly(rng, n: int, field: PrimeField, max_degree: int, density: float = 0.5) -> MPoly:
    """Random polynomial of degree at most ``max_degree``; used by tests and sweeps."""
    terms = {}
    for total in range(max_degree + 1):
        for e in multi_indices(n, total):
            if rng.random() < density:
                terms[e] = rng.randrange(field.p)
    return MPoly(n, field, terms)


def all_multi_indices_upto(n: int, d: int):
    return itertools.chain.from_iterable(multi_indices(n, t) for t in range(d + 1))
