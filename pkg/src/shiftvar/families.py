"""Constructors for the worked families, with certified metadata and closed forms."""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache

from .enumeration import (
    DEFAULT_BUDGET,
    Metadata,
    NeighborhoodReport,
    PointSet,
    VarietyInstance,
    ball,
    bound_report,
    rational_points,
)
from .errors import (
    DegreeNotBelowP,
    DegreeTooSmall,
    PrimeTooSmall,
    RankBoundInvalid,
    SizeLimitExceeded,
    ValidationError,
)
from .field import PrimeField
from .poly import MPoly
from .shifts import shift_kernel

# Largest Sylvester matrix expanded symbolically.
MAX_SYLVESTER = 8


@dataclass
class FamilySpec:
    kind: str
    parameters: dict
    instance: VarietyInstance
    predictions: dict = dc_field(default_factory=dict)

    @property
    def poly(self) -> MPoly:
        return self.instance.polys[0]

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "parameters": dict(self.parameters)}
        out.update(self.instance.to_dict())
        out["predictions"] = dict(self.predictions)
        return out


# --------------------------------------------------------------------------
# univariate helpers on ascending coefficient lists mod p


def upoly_mul(f: list[int], g: list[int], p: int) -> list[int]:
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return out


def upoly_compose(g: list[int], h: list[int], p: int) -> list[int]:
    """Coefficients of ``g(h(x))``, by Horner's rule."""
    out = [0]
    for c in reversed(g):
        out = upoly_mul(out, h, p)
        out[0] = (out[0] + c) % p
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def upoly_from_roots(roots, p: int) -> list[int]:
    out = [1]
    for r in roots:
        out = upoly_mul(out, [-r % p, 1], p)
    return out


def sylvester_rows(f: list, g: list, zero) -> list[list]:
    """Sylvester matrix of ascending coefficient lists ``f`` (deg n) and ``g`` (deg m)."""
    n, m = len(f) - 1, len(g) - 1
    size = n + m
    rows = []
    for i in range(m):
        row = [zero] * size
        for k, c in enumerate(reversed(f)):
            row[i + k] = c
        rows.append(row)
    for i in range(n):
        row = [zero] * size
        for k, c in enumerate(reversed(g)):
            row[i + k] = c
        rows.append(row)
    return rows


def det_mod_p(rows: list[list[int]], p: int) -> int:
    """Determinant of an integer matrix mod p by Gaussian elimination."""
    a = [[x % p for x in r] for r in rows]
    size = len(a)
    det = 1
    for col in range(size):
        piv = next((i for i in range(col, size) if a[i][col]), None)
        if piv is None:
            return 0
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det = det * a[col][col] % p
        inv = pow(a[col][col], -1, p)
        for i in range(col + 1, size):
            if a[i][col]:
                c = a[i][col] * inv % p
                a[i] = [(x - c * y) % p for x, y in zip(a[i], a[col])]
    return det % p


def resultant_value(f: list[int], g: list[int], p: int) -> int:
    """Numeric Sylvester resultant of ascending coefficient lists."""
    return det_mod_p(sylvester_rows(f, g, 0), p)


def symbolic_det(rows: list[list[MPoly]]) -> MPoly:
    """Determinant of a square matrix of polynomials.

    Laplace expansion along successive rows with the minors memoized by the
    set of columns still available; no division is needed.
    """
    size = len(rows)
    if size == 0:
        raise ValidationError("empty matrix")
    template = rows[0][0]
    one = MPoly.constant(1, template.n, template.field)

    @lru_cache(maxsize=None)
    def minor(row: int, cols: tuple) -> MPoly:
        if row == size:
            return one
        acc = MPoly.zero(template.n, template.field)
        for pos, c in enumerate(cols):
            entry = rows[row][c]
            if entry.is_zero():
                continue
            sub = minor(row + 1, cols[:pos] + cols[pos + 1 :])
            if sub.is_zero():
                continue
            term = entry * sub
            acc = acc - term if pos % 2 else acc + term
        return acc

    return minor(0, tuple(range(size)))


# --------------------------------------------------------------------------
# families


def parallel_hyperplanes(d: int, n: int, fld: PrimeField, h: int = 1) -> FamilySpec:
    """``x1 (x1 - 1) ... (x1 - (d-1)) = 0``: d parallel hyperplanes at unit spacing."""
    p = fld.p
    if d < 1:
        raise DegreeTooSmall("need at least one hyperplane")
    if n < 2:
        raise ValidationError("ambient dimension must be at least 2")
    if p <= d:
        raise DegreeNotBelowP(f"need p > d, got p = {p}, d = {d}")
    f = MPoly.constant(1, n, fld)
    x1 = MPoly.var(1, n, fld)
    for i in range(d):
        f = f * (x1 - i)
    meta = Metadata(r=n - 1, d=d, sigma=d, bigD=d, abs_irreducible=(d == 1), shift_free=False)
    base = p ** (n - 1)
    predictions = {
        "countX": d * base,
        "countSumset": (d + 2 * h) * base,
        "delta": base * (d * (2 * h + 1) ** n - (d + 2 * h)),
        "valid": p > d + 2 * h,
        "h": h,
    }
    return FamilySpec(
        "parallel_hyperplanes",
        {"d": d, "n": n, "p": p, "h": h},
        VarietyInstance((f,), n, fld, meta),
        predictions,
    )


def graph_variety(g: MPoly) -> FamilySpec:
    """The graph ``x_n = g(x_1..x_{n-1})``.

    The graph is fixed by a shift ``(u', c)`` exactly when
    ``g(x + u') - g(x) == c``, which degenerate ``g`` (a missing variable, a
    singular quadratic part mod p) allow. Shift-freeness is therefore taken
    from the exact kernel rather than assumed; the ``kernel_dim`` prediction
    of 0 holds for nondegenerate ``g`` only.
    """
    fld = g.field
    deg = g.degree
    if deg < 2:
        raise DegreeTooSmall(f"graph needs deg g >= 2, got {deg}")
    if fld.p <= deg:
        raise DegreeNotBelowP(f"need p > deg g, got p = {fld.p}, deg g = {deg}")
    n = g.n + 1
    f = MPoly.var(n, n, fld) - g.embed(n)
    # trivial kernel certifies shift-freeness; otherwise leave it to the neighborhood in use
    free = True if shift_kernel(f).dim == 0 else None
    meta = Metadata(r=n - 1, d=deg, sigma=1, bigD=deg, abs_irreducible=True, shift_free=free)
    return FamilySpec(
        "graph",
        {"g": str(g), "n": n, "p": fld.p},
        VarietyInstance((f,), n, fld, meta),
        {"countX": fld.p ** (n - 1), "kernel_dim": 0},
    )


def determinantal_degree(m: int, n: int, s: int) -> int:
    d = Fraction(1)
    for i in range(n - s):
        d *= Fraction(math.comb(m + i, s), math.comb(s + i, s))
    if d.denominator != 1:
        raise AssertionError(f"non-integral determinantal degree {d}")
    return int(d)


def determinantal_minors(m: int, n: int, s: int, fld: PrimeField) -> FamilySpec:
    """All ``(s+1)``-minors of the generic ``m x n`` matrix; variable ``x_{i*n+j+1}`` is entry ``(i, j)``."""
    if not 0 <= s < min(m, n):
        raise RankBoundInvalid(f"need 0 <= s < min(m, n), got s = {s}, m = {m}, n = {n}")
    deg = determinantal_degree(m, n, s)
    if fld.p <= max(deg, s + 1):
        raise DegreeNotBelowP(f"need p above the degree {deg}, got p = {fld.p}")
    nv = m * n
    entries = [[MPoly.var(i * n + j + 1, nv, fld) for j in range(n)] for i in range(m)]
    minors = []
    for rows in itertools.combinations(range(m), s + 1):
        for cols in itertools.combinations(range(n), s + 1):
            minors.append(symbolic_det([[entries[i][j] for j in cols] for i in rows]))
    meta = Metadata(r=s * (m + n - s), d=deg, sigma=1, bigD=deg, abs_irreducible=True, shift_free=True)
    return FamilySpec(
        "determinantal",
        {"m": m, "n": n, "s": s, "p": fld.p},
        VarietyInstance(tuple(minors), nv, fld, meta),
        {"r": meta.r, "d": deg, "kernel_dim": 0},
    )


def generic_resultant(n: int, m: int, fld: PrimeField) -> FamilySpec:
    """``res_{n,m}`` in ``a_0..a_n, b_0..b_m`` (variables ``x1..x_{n+m+2}`` in that order)."""
    if n < 1 or m < 1:
        raise DegreeTooSmall("resultant degrees must be positive")
    if n + m > MAX_SYLVESTER:
        raise SizeLimitExceeded(f"n + m = {n + m} exceeds {MAX_SYLVESTER}")
    if fld.p <= n + m + 2:
        raise PrimeTooSmall(f"need p > n + m + 2 = {n + m + 2}, got {fld.p}")
    nv = n + m + 2
    a = [MPoly.var(i + 1, nv, fld) for i in range(n + 1)]
    b = [MPoly.var(n + 2 + i, nv, fld) for i in range(m + 1)]
    res = symbolic_det(sylvester_rows(a, b, MPoly.zero(nv, fld)))
    meta = Metadata(r=nv - 1, d=n + m, sigma=1, bigD=n + m, abs_irreducible=True, shift_free=True)
    return FamilySpec(
        "resultant",
        {"n": n, "m": m, "p": fld.p},
        VarietyInstance((res,), nv, fld, meta),
        {"degree": n + m, "kernel_dim": 0},
    )


def generic_discriminant(n: int, fld: PrimeField) -> FamilySpec:
    """``Res(f, f')`` for generic ``f = a_0 + ... + a_n x^n`` (variables ``x1..x_{n+1}``)."""
    if n < 2:
        raise DegreeTooSmall("discriminant needs n >= 2")
    if 2 * n - 1 > MAX_SYLVESTER:
        raise SizeLimitExceeded(f"Sylvester size {2 * n - 1} exceeds {MAX_SYLVESTER}")
    if fld.p <= n:
        raise PrimeTooSmall(f"need p > n = {n}, got {fld.p}")
    nv = n + 1
    a = [MPoly.var(i + 1, nv, fld) for i in range(n + 1)]
    da = [a[i] * i for i in range(1, n + 1)]
    disc = symbolic_det(sylvester_rows(a, da, MPoly.zero(nv, fld)))
    meta = Metadata(r=n, d=2 * n - 1, sigma=1, bigD=2 * n - 1, abs_irreducible=True, shift_free=True)
    return FamilySpec(
        "discriminant",
        {"n": n, "p": fld.p},
        VarietyInstance((disc,), nv, fld, meta),
        {"degree": 2 * n - 1, "kernel_dim": 0},
    )


def ess_linear_form(a, fld: PrimeField) -> FamilySpec:
    """The hyperplane ``a_1 x_1 + ... + a_n x_n = 0``."""
    n = len(a)
    f = MPoly.linear([int(c) for c in a], fld)
    if f.is_zero():
        meta = Metadata(r=n, d=1, sigma=1, bigD=1, abs_irreducible=True)
    else:
        meta = Metadata(r=n - 1, d=1, sigma=1, bigD=1, abs_irreducible=True)
    return FamilySpec(
        "ess_linear_form",
        {"a": [int(c) for c in a], "p": fld.p},
        VarietyInstance((f,), n, fld, meta),
        {"countX": fld.p ** meta.r},
    )


def decomposable_sample(
    ell: int,
    m: int,
    fld: PrimeField,
    count: int,
    rng: random.Random | None = None,
) -> PointSet:
    """Coefficient vectors ``(f_0..f_n)`` of ``count`` distinct random compositions ``g(h)``.

    ``g`` has degree ``ell``; ``h`` has degree ``m``, leading coefficient 1
    and constant term 0.
    """
    if ell < 2 or m < 2:
        raise DegreeTooSmall(f"need ell, m >= 2, got {ell}, {m}")
    n = ell * m
    p = fld.p
    if p <= n:
        raise PrimeTooSmall(f"need p > n = {n}, got {p}")
    space = (p - 1) * p**ell * p ** (m - 1)
    if count > space:
        raise ValidationError(f"only {space} compositions exist")
    rng = rng or random.Random(0)
    seen: dict = {}
    while len(seen) < count:
        g = [rng.randrange(p) for _ in range(ell)] + [rng.randrange(1, p)]
        h = [0] + [rng.randrange(p) for _ in range(m - 1)] + [1]
        seen.setdefault(tuple(upoly_compose(g, h, p)), None)
    return PointSet(list(seen), n + 1, fld)


FAMILY_KINDS = (
    "parallel_hyperplanes",
    "graph",
    "determinantal",
    "discriminant",
    "resultant",
    "decomposable_sample",
    "ess_linear_form",
)


def analyze(spec: FamilySpec, h: int = 1, budget: int = DEFAULT_BUDGET) -> NeighborhoodReport:
    """Enumerate the family over its field, test the bounds and compare closed forms."""
    inst = spec.instance
    x = rational_points(inst, budget)
    u = ball(h, inst.n, inst.field, budget)
    rep = bound_report(inst, u, x=x, family=spec.kind, budget=budget)
    rep.extra["parameters"] = dict(spec.parameters)
    rep.extra["predictions"] = dict(spec.predictions)
    checks = {}
    for key in ("countX", "countSumset", "delta"):
        if key in spec.predictions and spec.predictions.get("h", h) == h:
            checks[key] = spec.predictions[key] == getattr(rep, key)
    if "valid" in spec.predictions:
        rep.extra["prediction_valid"] = spec.predictions["valid"]
    if len(inst.polys) == 1 and not inst.polys[0].is_zero() and inst.polys[0].degree < inst.field.p:
        kernel = shift_kernel(inst.polys[0])
        rep.extra["kernel_dim"] = kernel.dim
        if "kernel_dim" in spec.predictions:
            checks["kernel_dim"] = kernel.dim == spec.predictions["kernel_dim"]
    rep.extra["prediction_checks"] = checks
    rep.extra["prediction_match"] = all(checks.values()) if checks else None
    return rep
