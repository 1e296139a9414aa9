"""Exhaustive point sets over F_p^n: rational points, balls, sumsets, deficiency.

Point sets are stored as lexicographically sorted, duplicate-free integer
arrays of canonical coordinates. When ``p**n`` fits in 62 bits each point
also gets an integer code (base-``p`` digits, first coordinate most
significant) so that sorting, deduplication and membership run on flat
arrays.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import (
    BudgetExceeded,
    DimensionMismatch,
    MetadataMissing,
    RadiusTooLarge,
    ValidationError,
)
from .field import PrimeField
from .poly import MPoly, parse_poly, shift, to_string
from .shifts import shift_kernel

DEFAULT_BUDGET = 10**8
_CODE_LIMIT = 2**62
_INT64_EVAL_LIMIT = 2**31
_CHUNK = 1 << 20
# largest ambient space marked with a dense byte mask when forming sumsets
_DENSE_LIMIT = 1 << 28
# relative slack added to right-hand sides that involve fractional powers
FLOAT_GUARD = 1e-9
REPORT_VERSION = "shiftvar-report v1"


def _codeable(p: int, n: int) -> bool:
    return p**n < _CODE_LIMIT


class PointSet:
    """Duplicate-free set of points in F_p^n."""

    __slots__ = ("n", "field", "_coords", "codes")

    def __init__(self, coords, n: int, fld: PrimeField):
        self.n = n
        self.field = fld
        p = fld.p
        big = p >= _CODE_LIMIT
        arr = np.asarray(coords, dtype=object if big else np.int64)
        if arr.size == 0:
            arr = np.zeros((0, n), dtype=object if big else np.int64)
        arr = arr.reshape(-1, n) % p
        if _codeable(p, n):
            self.codes = np.unique(_encode(arr, p))
            self._coords = None
        else:
            rows = sorted({tuple(int(c) for c in r) for r in arr})
            self.codes = None
            self._coords = np.array(rows, dtype=object).reshape(-1, n)

    @classmethod
    def from_codes(cls, codes: np.ndarray, n: int, fld: PrimeField) -> "PointSet":
        """Wrap base-``p`` point codes; ``codes`` is sorted in place."""
        obj = cls.__new__(cls)
        obj.n = n
        obj.field = fld
        obj.codes = _unique_inplace(codes)
        obj._coords = None
        return obj

    @property
    def coords(self) -> np.ndarray:
        """Coordinates as an ``(len, n)`` array, decoded on first use."""
        if self._coords is None:
            self._coords = _decode(self.codes, self.n, self.field.p)
        return self._coords

    def __len__(self):
        return len(self.codes) if self.codes is not None else self._coords.shape[0]

    def __iter__(self):
        for row in self.coords:
            yield tuple(int(c) for c in row)

    def __contains__(self, point) -> bool:
        return bool(self.member_mask(np.asarray([point]).reshape(1, self.n))[0])

    def __eq__(self, other):
        if not isinstance(other, PointSet):
            return NotImplemented
        return (
            self.n == other.n
            and self.field == other.field
            and len(self) == len(other)
            and bool(np.all(self.coords == other.coords))
        )

    def __repr__(self):
        return f"PointSet({len(self)} points in F_{self.field.p}^{self.n})"

    def points(self) -> list[tuple]:
        return list(self)

    def member_mask(self, arr: np.ndarray) -> np.ndarray:
        """Boolean mask of which rows of ``arr`` (canonical coordinates) are in the set."""
        p = self.field.p
        if self.codes is not None:
            c = _encode(np.asarray(arr, dtype=np.int64) % p, p)
            if len(self.codes) == 0:
                return np.zeros(len(c), dtype=bool)
            idx = np.searchsorted(self.codes, c)
            idx[idx == len(self.codes)] = 0
            return self.codes[idx] == c
        members = set(self)
        return np.array([tuple(int(x) % p for x in r) in members for r in arr], dtype=bool)

    def translate(self, c) -> "PointSet":
        c = np.asarray([int(x) % self.field.p for x in c], dtype=self.coords.dtype)
        return PointSet(self.coords + c, self.n, self.field)

    def norms(self) -> np.ndarray:
        p = self.field.p
        half = (p - 1) // 2
        bal = np.where(self.coords > half, self.coords - p, self.coords)
        return np.abs(bal).max(axis=1) if self.n else np.zeros(len(self), dtype=np.int64)


def _unique_inplace(codes: np.ndarray) -> np.ndarray:
    """Sorted distinct values; sorts ``codes`` in place to avoid a second copy."""
    codes.sort()
    if len(codes) < 2:
        return codes
    keep = np.empty(len(codes), dtype=bool)
    keep[0] = True
    np.not_equal(codes[1:], codes[:-1], out=keep[1:])
    return codes[keep]


def _encode(arr: np.ndarray, p: int) -> np.ndarray:
    codes = np.zeros(arr.shape[0], dtype=np.int64)
    for i in range(arr.shape[1]):
        codes = codes * p + arr[:, i]
    return codes


def _decode(codes: np.ndarray, n: int, p: int) -> np.ndarray:
    out = np.empty((codes.shape[0], n), dtype=np.int64)
    rest = codes.copy()
    for i in range(n - 1, -1, -1):
        out[:, i] = rest % p
        rest //= p
    return out


def _check_same_space(x: PointSet, u: PointSet):
    if x.n != u.n or x.field != u.field:
        raise DimensionMismatch(
            f"F_{x.field.p}^{x.n} vs F_{u.field.p}^{u.n}"
        )


# --------------------------------------------------------------------------
# varieties


@dataclass(frozen=True)
class Metadata:
    """Declared geometry: dimension, degree, essential components and their degree sum.

    The optional flags record facts a caller certifies: absolute
    irreducibility, irreducible-but-not-absolutely-irreducible, and
    shift-freeness with respect to the neighborhood in use.
    """

    r: int
    d: int
    sigma: int
    bigD: int
    abs_irreducible: bool | None = None
    irreducible_not_abs: bool | None = None
    shift_free: bool | None = None

    def __post_init__(self):
        if self.r < 0 or self.d < 1 or self.sigma < 0 or self.bigD > self.d:
            raise ValidationError(f"inconsistent metadata {self}")

    def to_dict(self) -> dict:
        out = {"r": self.r, "d": self.d, "sigma": self.sigma, "bigD": self.bigD}
        for key in ("abs_irreducible", "irreducible_not_abs", "shift_free"):
            if getattr(self, key) is not None:
                out[key] = getattr(self, key)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "Metadata":
        missing = [k for k in ("r", "d", "sigma", "bigD") if k not in data]
        if missing:
            raise MetadataMissing(f"metadata lacks {missing}")
        return cls(
            int(data["r"]),
            int(data["d"]),
            int(data["sigma"]),
            int(data["bigD"]),
            data.get("abs_irreducible"),
            data.get("irreducible_not_abs"),
            data.get("shift_free"),
        )


@dataclass(frozen=True)
class VarietyInstance:
    polys: tuple
    n: int
    field: PrimeField
    metadata: Metadata | None = None

    def __post_init__(self):
        object.__setattr__(self, "polys", tuple(self.polys))
        for f in self.polys:
            if f.n != self.n or f.field != self.field:
                raise DimensionMismatch("defining polynomials must live in F_p[x1..xn]")
        if self.metadata is not None and self.metadata.r > self.n:
            raise ValidationError("declared dimension exceeds ambient dimension")

    def to_dict(self) -> dict:
        out = {"p": self.field.p, "n": self.n, "polys": [to_string(f) for f in self.polys]}
        if self.metadata is not None:
            out["metadata"] = self.metadata.to_dict()
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "VarietyInstance":
        for key in ("p", "n", "polys"):
            if key not in data:
                raise ValidationError(f"instance document lacks {key!r}")
        fld = PrimeField(int(data["p"]))
        n = int(data["n"])
        polys = [parse_poly(s, n, fld) for s in data["polys"]]
        meta = Metadata.from_dict(data["metadata"]) if data.get("metadata") else None
        return cls(tuple(polys), n, fld, meta)

    def shifted(self, u) -> "VarietyInstance":
        return VarietyInstance(tuple(shift(f, u) for f in self.polys), self.n, self.field, self.metadata)


def _eval_columns(f: MPoly, cols: Sequence[np.ndarray], p: int, length: int) -> np.ndarray:
    dtype = np.int64 if p < _INT64_EVAL_LIMIT else object
    total = np.zeros(length, dtype=dtype)
    # powers[i][k - 1] = cols[i] ** k mod p; a plain dict (no recursive
    # closure) so the arrays are freed as soon as this call returns
    powers: dict = {}
    for e, c in f.items():
        t = np.full(length, c, dtype=dtype)
        for i, k in enumerate(e):
            if k:
                got = powers.setdefault(i, [cols[i]])
                while len(got) < k:
                    got.append(got[-1] * cols[i] % p)
                t = t * got[k - 1] % p
        total = (total + t) % p
    return total


def rational_points(v: VarietyInstance, budget: int = DEFAULT_BUDGET) -> PointSet:
    """All ``a`` in F_p^n where every defining polynomial vanishes."""
    p, n = v.field.p, v.n
    total = p**n
    if total > budget:
        raise BudgetExceeded(f"{p}^{n} = {total} candidate points exceed budget {budget}")
    if not _codeable(p, n):
        found = [a for a in itertools.product(range(p), repeat=n)
                 if all(f(a).value == 0 for f in v.polys)]
        return PointSet(found, n, v.field)
    kept = []
    for start in range(0, total, _CHUNK):
        codes = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        coords = _decode(codes, n, p)
        cols = [coords[:, i] for i in range(n)] if p < _INT64_EVAL_LIMIT else [
            coords[:, i].astype(object) for i in range(n)
        ]
        # later polynomials only see the points that survived earlier ones
        for f in v.polys:
            mask = _eval_columns(f, cols, p, len(codes)) == 0
            codes = codes[mask]
            cols = [c[mask] for c in cols]
        kept.append(codes)
    return PointSet.from_codes(np.concatenate(kept) if kept else np.zeros(0, np.int64), n, v.field)


def ball(h: int, n: int, fld: PrimeField, budget: int = DEFAULT_BUDGET) -> PointSet:
    """Points whose balanced coordinates all lie in ``[-h, h]``."""
    if h < 0:
        raise RadiusTooLarge(f"negative radius {h}")
    if 2 * h >= fld.p:
        raise RadiusTooLarge(f"need p > 2h, got p = {fld.p}, h = {h}")
    if (2 * h + 1) ** n > budget:
        raise BudgetExceeded(f"ball of {(2 * h + 1) ** n} points exceeds budget {budget}")
    side = np.arange(-h, h + 1, dtype=np.int64)
    if n == 0:
        return PointSet(np.zeros((1, 0), dtype=np.int64), 0, fld)
    grid = np.stack(np.meshgrid(*([side] * n), indexing="ij"), axis=-1).reshape(-1, n)
    return PointSet(grid, n, fld)


def _pairwise(x: PointSet, u: PointSet, sign: int, budget: int) -> PointSet:
    _check_same_space(x, u)
    if len(x) * len(u) > budget:
        raise BudgetExceeded(f"{len(x)} x {len(u)} combinations exceed budget {budget}")
    if len(x) == 0 or len(u) == 0:
        return PointSet(np.zeros((0, x.n), dtype=np.int64), x.n, x.field)
    p = x.field.p
    small, large = (u, x) if len(u) <= len(x) else (x, u)
    dense = x.codes is not None and p**x.n <= _DENSE_LIMIT
    if dense:
        # one byte per point of F_p^n; only one translate is alive at a time
        hit = np.zeros(p**x.n, dtype=bool)
    parts = []
    # iterate over the smaller set, broadcast over the larger one
    for row in small.coords:
        if small is u:
            moved = (large.coords + sign * row) % p
        else:
            moved = (row + sign * large.coords) % p
        if dense:
            hit[_encode(moved, p)] = True
        else:
            parts.append(_encode(moved, p) if x.codes is not None else moved)
    if dense:
        return PointSet.from_codes(np.flatnonzero(hit).astype(np.int64), x.n, x.field)
    stacked = np.concatenate(parts)
    del parts
    if x.codes is not None:
        return PointSet.from_codes(stacked, x.n, x.field)
    return PointSet(stacked, x.n, x.field)


def sumset(x: PointSet, u: PointSet, budget: int = DEFAULT_BUDGET) -> PointSet:
    """``{a + u : a in X, u in U}``."""
    return _pairwise(x, u, 1, budget)


def difference_set(u: PointSet, budget: int = DEFAULT_BUDGET) -> PointSet:
    """``{u - v : u, v in U}``."""
    return _pairwise(u, u, -1, budget)


def closed_under_shifts_to_zero(u: PointSet) -> bool:
    """Zeroing any single coordinate of any member stays inside the set."""
    for i in range(u.n):
        zeroed = u.coords.copy()
        zeroed[:, i] = 0
        if not np.all(u.member_mask(zeroed)):
            return False
    return True


def _nonzero_differences(u: PointSet, budget: int) -> np.ndarray:
    diffs = difference_set(u, budget).coords
    return diffs[np.any(diffs != 0, axis=1)] if len(diffs) else diffs


def pair_overlap_sum(x: PointSet, u: PointSet, budget: int = DEFAULT_BUDGET, check: bool = True) -> int:
    """Sum over ordered pairs ``a != b`` in X of ``#((a + U) & (b + U))``.

    Two translates of U meet only if ``b - a`` lies in ``U - U``, and the
    size of the meet depends on that offset alone, so pairs are grouped by
    offset. With ``check`` the value is asserted to sit between the
    deficiency and :func:`overlap_upper_bound`.
    """
    _check_same_space(x, u)
    offsets = _nonzero_differences(u, budget)
    if len(x) * max(len(offsets), 1) > budget:
        raise BudgetExceeded(f"{len(x)} points x {len(offsets)} offsets exceed budget {budget}")
    p = x.field.p
    total = 0
    for w in offsets:
        pairs = int(np.count_nonzero(x.member_mask((x.coords + w) % p)))
        if pairs:
            meet = int(np.count_nonzero(u.member_mask((u.coords + w) % p)))
            total += pairs * meet
    if check:
        delta = compute_delta(x, u, budget).delta
        upper = overlap_upper_bound(x, u, budget)
        if not delta <= total <= upper:
            raise AssertionError(f"overlap chain broken: {delta} <= {total} <= {upper}")
    return total


def shifted_intersection_total(x: PointSet, u: PointSet, budget: int = DEFAULT_BUDGET) -> int:
    """``sum over 0 != w in U - U of #(X & (X + w))``."""
    _check_same_space(x, u)
    total = 0
    for w in _nonzero_differences(u, budget):
        moved = x.translate(w)
        if x.codes is not None:
            total += int(np.intersect1d(x.codes, moved.codes, assume_unique=True).size)
        else:
            total += len(set(x) & set(moved))
    return total


def overlap_upper_bound(x: PointSet, u: PointSet, budget: int = DEFAULT_BUDGET) -> int:
    """``#U`` times :func:`shifted_intersection_total`; dominates the pair overlap sum."""
    return len(u) * shifted_intersection_total(x, u, budget)


# --------------------------------------------------------------------------
# reports


BOUND_NAMES = (
    "trivial_product",
    "point_count_upper",
    "point_count_weil",
    "point_count_non_absolute",
    "delta_shift_free",
    "sumset_no_essential",
    "sumset_weil",
    "delta_ball",
    "sumset_ball_weil",
    "delta_lower_cylinder",
    "hypersurface_delta",
    "hypersurface_sumset_weil",
    "hypersurface_delta_ball",
    "hypersurface_sumset_ball_weil",
)


@dataclass
class BoundCheck:
    name: str
    holds: bool | None  # None when the inequality does not apply
    lhs: object = None
    rhs: object = None
    note: str = ""

    @property
    def status(self) -> str:
        return "n/a" if self.holds is None else ("pass" if self.holds else "fail")

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "lhs": _jsonable(self.lhs),
            "rhs": _jsonable(self.rhs),
            "note": self.note,
        }


def _jsonable(x):
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else float(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    return x


@dataclass
class NeighborhoodReport:
    countX: int
    countU: int
    countSumset: int
    delta: int
    p: int | None = None
    n: int | None = None
    h: int | None = None
    family: str = ""
    bounds: list = dc_field(default_factory=list)
    extra: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        if self.delta != self.countX * self.countU - self.countSumset or self.delta < 0:
            raise AssertionError("inconsistent deficiency")

    def bound(self, name: str) -> BoundCheck:
        for b in self.bounds:
            if b.name == name:
                return b
        raise KeyError(name)

    def violations(self) -> list[str]:
        return [b.name for b in self.bounds if b.holds is False]

    def to_dict(self) -> dict:
        out = {
            "family": self.family,
            "p": self.p,
            "n": self.n,
            "h": self.h,
            "countX": self.countX,
            "countU": self.countU,
            "countSumset": self.countSumset,
            "delta": self.delta,
            "bounds": [b.to_dict() for b in self.bounds],
        }
        out.update(self.extra)
        return out

    @staticmethod
    def csv_header() -> list[str]:
        return [
            "family",
            "p",
            "n",
            "h",
            "parameters",
            "polys",
            "countX",
            "countU",
            "countSumset",
            "delta",
            *BOUND_NAMES,
            "prediction_match",
        ]

    def csv_row(self) -> list:
        status = {b.name: b.status for b in self.bounds}
        return [
            self.family,
            self.p,
            self.n,
            "" if self.h is None else self.h,
            json.dumps(self.extra.get("parameters", {}), sort_keys=True, separators=(",", ":")),
            ";".join(self.extra.get("instance", {}).get("polys", [])),
            self.countX,
            self.countU,
            self.countSumset,
            self.delta,
            *(status.get(name, "n/a") for name in BOUND_NAMES),
            _csv_flag(self.extra.get("prediction_match")),
        ]


def _csv_flag(value) -> str:
    return "" if value is None else str(bool(value)).lower()


def write_csv(reports, stream, header: bool = True):
    if header:
        stream.write(f"# {REPORT_VERSION}\n")
    writer = csv.writer(stream, lineterminator="\n")
    if header:
        writer.writerow(NeighborhoodReport.csv_header())
    for r in reports:
        writer.writerow(r.csv_row())


def reports_to_csv(reports) -> str:
    buf = io.StringIO()
    write_csv(reports, buf)
    return buf.getvalue()


def compute_delta(x: PointSet, u: PointSet, budget: int = DEFAULT_BUDGET) -> NeighborhoodReport:
    s = sumset(x, u, budget)
    return NeighborhoodReport(
        countX=len(x),
        countU=len(u),
        countSumset=len(s),
        delta=len(x) * len(u) - len(s),
        p=x.field.p,
        n=x.n,
    )


def _le(name, lhs, rhs, note="", inexact=False) -> BoundCheck:
    if inexact:
        holds = lhs <= float(rhs) * (1 + FLOAT_GUARD)
    else:
        holds = lhs <= rhs
    return BoundCheck(name, bool(holds), lhs, rhs, note)


def _na(name, note) -> BoundCheck:
    return BoundCheck(name, None, note=note)


def _detect_shift_free(v: VarietyInstance, x: PointSet, u: PointSet, budget: int):
    """Decide ``(U - U)``-shift-freeness; returns ``(value, how)``."""
    offsets = _nonzero_differences(u, budget)
    if len(v.polys) == 1 and 0 <= v.polys[0].degree < v.field.p and not v.polys[0].is_zero():
        kernel = shift_kernel(v.polys[0])
        if kernel.dim == 0:
            return True, "kernel"
        hit = any(kernel.contains(tuple(int(c) for c in w), v.field) for w in offsets)
        return (not hit), "kernel"
    for w in offsets:
        w = tuple(int(c) for c in w)
        if all(shift(f, w) == f for f in v.polys):
            return False, "generators"
        if x.translate(w) == x:
            return False, "point-set heuristic"
    return True, "point-set heuristic"


def ball_radius(u: PointSet) -> int | None:
    """Radius ``h`` if ``u`` is exactly a standard ball, else None."""
    if len(u) == 0:
        return None
    h = int(u.norms().max()) if u.n else 0
    if len(u) == (2 * h + 1) ** u.n and 2 * h < u.field.p:
        return h
    return None


def bound_report(
    v: VarietyInstance,
    u: PointSet,
    shift_free: bool | None = None,
    x: PointSet | None = None,
    family: str = "",
    budget: int = DEFAULT_BUDGET,
) -> NeighborhoodReport:
    """Enumerate and test every applicable inequality on ``X(F_p) + U``."""
    meta = v.metadata
    if meta is None:
        raise MetadataMissing("bound checks need declared r, d, sigma, bigD")
    if x is None:
        x = rational_points(v, budget)
    rep = compute_delta(x, u, budget)
    p, n = v.field.p, v.n
    r, d, sigma, big_d = meta.r, meta.d, meta.sigma, meta.bigD
    cx, cu, cs, delta = rep.countX, rep.countU, rep.countSumset, rep.delta
    cdiff = len(difference_set(u, budget))
    h = ball_radius(u)

    how = "argument"
    if shift_free is None and meta.shift_free is not None:
        shift_free, how = meta.shift_free, "declared"
    if shift_free is None:
        shift_free, how = _detect_shift_free(v, x, u, budget)

    P = Fraction(p)
    sqrt_p = math.sqrt(p)
    below = p > d
    checks = []

    checks.append(_le("trivial_product", cs, cx * cu))
    checks.append(_le("point_count_upper", cx, d * P**r))

    if sigma > 0 and below:
        rhs = (big_d - 1) * (big_d - 2) * p ** (r - 0.5) + (5 * big_d ** (13 / 3) + d * d) * p ** (r - 1)
        checks.append(_le("point_count_weil", abs(cx - sigma * P**r), rhs, inexact=True))
    else:
        checks.append(_na("point_count_weil", "needs sigma > 0 and p > d"))

    if meta.irreducible_not_abs:
        checks.append(_le("point_count_non_absolute", cx, Fraction(d * d) * P ** (r - 1) / 4))
    else:
        checks.append(_na("point_count_non_absolute", "not declared irreducible-but-not-absolutely"))

    sf_ok = shift_free and below
    if sf_ok:
        checks.append(_le("delta_shift_free", delta, cu * (cdiff - 1) * d * d * P ** (r - 1)))
    else:
        checks.append(_na("delta_shift_free", "needs shift-free and p > d"))

    if sigma == 0 and below:
        checks.append(_le("sumset_no_essential", cs, Fraction(cu * d * d) * P ** (r - 1) / 2))
    else:
        checks.append(_na("sumset_no_essential", "needs sigma = 0 and p > d"))

    if sf_ok and sigma > 0:
        rhs = cu * (big_d**2 * p ** (r - 0.5) + (5 * big_d ** (13 / 3) + cdiff * d * d) * p ** (r - 1))
        checks.append(_le("sumset_weil", abs(cs - cu * sigma * P**r), rhs, inexact=True))
    else:
        checks.append(_na("sumset_weil", "needs shift-free, sigma > 0 and p > d"))

    if sf_ok and h is not None and h >= 1:
        a, b = 2 * h + 1, 4 * h + 1
        checks.append(_le("delta_ball", delta, (a * b) ** n * d * d * P ** (r - 1)))
        if sigma > 0:
            rhs = a**n * (big_d**2 * p ** (r - 0.5) + (5 * big_d ** (13 / 3) + b**n * d * d) * p ** (r - 1))
            checks.append(_le("sumset_ball_weil", abs(cs - a**n * sigma * P**r), rhs, inexact=True))
        else:
            checks.append(_na("sumset_ball_weil", "needs sigma > 0"))
    else:
        checks.append(_na("delta_ball", "needs shift-free, p > d and U a ball of radius >= 1"))
        checks.append(_na("sumset_ball_weil", "needs shift-free, p > d and U a ball of radius >= 1"))

    checks.append(_lower_bound_check(shift_free, meta, u, p, r, d, cdiff, delta))

    hyper = len(v.polys) == 1 and r == n - 1
    if sf_ok and hyper:
        checks.append(_le("hypersurface_delta", delta, cu * cdiff * d * d * P ** (n - 2)))
        if sigma > 0:
            rhs = cu * (big_d**2 * p ** (n - 1.5) + (5 * big_d ** (13 / 3) + cdiff * d * d) * p ** (n - 2))
            checks.append(
                _le("hypersurface_sumset_weil", abs(cs - cu * sigma * P ** (n - 1)), rhs, inexact=True)
            )
        else:
            checks.append(_na("hypersurface_sumset_weil", "needs sigma > 0"))
        if h is not None and h >= 1:
            a, b = 2 * h + 1, 4 * h + 1
            checks.append(_le("hypersurface_delta_ball", delta, (a * b) ** n * d * d * P ** (n - 2)))
            if sigma > 0:
                rhs = a**n * (big_d**2 * p ** (n - 1.5) + (5 * big_d ** (13 / 3) + b**n * d * d) * p ** (n - 2))
                checks.append(
                    _le("hypersurface_sumset_ball_weil", abs(cs - a**n * sigma * P ** (n - 1)), rhs, inexact=True)
                )
            else:
                checks.append(_na("hypersurface_sumset_ball_weil", "needs sigma > 0"))
        else:
            checks.append(_na("hypersurface_delta_ball", "U is not a ball of radius >= 1"))
            checks.append(_na("hypersurface_sumset_ball_weil", "U is not a ball of radius >= 1"))
    else:
        for name in (
            "hypersurface_delta",
            "hypersurface_sumset_weil",
            "hypersurface_delta_ball",
            "hypersurface_sumset_ball_weil",
        ):
            checks.append(_na(name, "needs a shift-free hypersurface with p > d"))

    rep.bounds = checks
    rep.h = h
    rep.family = family
    rep.extra["shift_free"] = bool(shift_free)
    rep.extra["shift_free_source"] = how
    rep.extra["countDiff"] = cdiff
    return rep


def lower_bound_alpha(d: int, count_diff: int, p: int) -> float:
    """The constant ``d^2 + (5 d^(13/3) + d^2 #(U - U)) / sqrt(p)``."""
    return d * d + (5 * d ** (13 / 3) + d * d * count_diff) / math.sqrt(p)


def _lower_bound_check(shift_free, meta, u, p, r, d, cdiff, delta) -> BoundCheck:
    name = "delta_lower_cylinder"
    if shift_free:
        return _na(name, "needs a variety that is not shift-free")
    if not meta.abs_irreducible:
        return _na(name, "needs a declared absolutely irreducible variety")
    if not p > d >= 1:
        return _na(name, "needs p > d >= 1")
    if not closed_under_shifts_to_zero(u):
        return _na(name, "U is not closed under shifts to zero")
    alpha = lower_bound_alpha(d, cdiff, p)
    if p < 4 * alpha * alpha:
        return _na(name, f"p < 4 alpha^2 with alpha = {alpha:.6g}")
    rhs = Fraction(p) ** r / 2
    return BoundCheck(name, delta >= rhs, delta, rhs, f"alpha = {alpha:.6g}, 4 alpha^2 = {4 * alpha * alpha:.6g}")
