"""Equal subset sum, its modular variant, and the reduction to shift search.

The chain: pick an odd prime above the total, read the integers as the
coefficients of a linear form over F_p, and look for a nonzero shift with
entries in ``{0, 1, -1}`` fixing that form. Entry ``+1`` puts an index in S,
``-1`` puts it in T.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass

from .enumeration import PointSet, ball
from .errors import BudgetExceeded, NotACertificate, PrimeTooSmall, ValidationError
from .field import PrimeField, next_odd_prime
from .poly import MPoly, to_string
from .shifts import is_shift_invariant

MAX_BRUTE_N = 20


@dataclass(frozen=True)
class ESSInstance:
    a: tuple

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(int(x) for x in self.a))
        if any(x < 0 for x in self.a):
            raise ValidationError("equal subset sum entries must be nonnegative")

    @property
    def n(self) -> int:
        return len(self.a)


@dataclass(frozen=True)
class ESSCertificate:
    S: tuple  # 1-based indices
    T: tuple

    def __post_init__(self):
        object.__setattr__(self, "S", tuple(sorted(self.S)))
        object.__setattr__(self, "T", tuple(sorted(self.T)))
        if not self.S or not self.T or set(self.S) & set(self.T):
            raise NotACertificate("S and T must be disjoint and nonempty")

    def holds_for(self, inst: ESSInstance, p: int | None = None) -> bool:
        diff = sum(inst.a[i - 1] for i in self.S) - sum(inst.a[i - 1] for i in self.T)
        return diff == 0 if p is None else diff % p == 0


@dataclass(frozen=True)
class ShiftFreenessInstance:
    f: MPoly
    U: PointSet
    field: PrimeField


def ess_brute(inst: ESSInstance, p: int | None = None) -> ESSCertificate | None:
    """First certificate over all ``3^n`` sign assignments, or None.

    Assignments run in ``itertools.product((0, 1, -1), repeat=n)`` order.
    With ``p`` given, sums are compared modulo ``p``.
    """
    if inst.n > MAX_BRUTE_N:
        raise BudgetExceeded(f"3^{inst.n} assignments exceed the brute-force cap")
    for signs in itertools.product((0, 1, -1), repeat=inst.n):
        if 1 not in signs or -1 not in signs:
            continue
        total = sum(s * x for s, x in zip(signs, inst.a))
        if (total % p if p is not None else total) == 0:
            return u_to_certificate(signs)
    return None


def ess_to_mod_prime(inst: ESSInstance, rng: random.Random | None = None):
    """Odd prime ``p`` above the total, with the instance reduced mod ``p``.

    Without ``rng`` the search starts right above the total; with ``rng`` it
    starts at a random offset in ``(b, 2b + 2]`` and walks upward.
    """
    b = sum(inst.a)
    start = b
    if rng is not None:
        start = b + rng.randrange(b + 2)
    p = next_odd_prime(start)
    fld = PrimeField(p)
    return ESSInstance(tuple(x % p for x in inst.a)), fld


def reduce_to_shiftfreeness(inst: ESSInstance, fld: PrimeField, strict: bool = True) -> ShiftFreenessInstance:
    """Linear form ``sum a_i x_i`` and the unit ball ``{0, 1, -1}^n``.

    ``strict`` insists on ``p > sum(a)``, which is what makes a modular
    certificate an integer one.
    """
    if strict and fld.p <= sum(inst.a):
        raise PrimeTooSmall(f"need p > {sum(inst.a)}, got {fld.p}")
    f = MPoly.linear(list(inst.a), fld)
    return ShiftFreenessInstance(f, ball(1, inst.n, fld), fld)


def _scan_key(u: tuple) -> tuple:
    return (sum(abs(c) for c in u), tuple((-abs(c), c < 0) for c in u))


def scan_order(u_set, fld: PrimeField) -> list[tuple]:
    """Candidates in balanced coordinates: by total absolute value, then
    larger leading entries first, positive before negative."""
    pts = [tuple(fld.balanced(c) for c in u) for u in u_set]
    return sorted(pts, key=_scan_key)


def shift_search(f: MPoly, u_set, accept=None, budget: int = 10**7):
    """First nonzero ``u`` in scan order with ``f(x - u) == f``, or None.

    ``accept`` optionally filters candidates (balanced coordinates) before
    the invariance check.
    """
    if len(u_set) > budget:
        raise BudgetExceeded(f"{len(u_set)} candidate shifts exceed budget {budget}")
    for u in scan_order(u_set, f.field):
        if not any(u):
            continue
        if accept is not None and not accept(u):
            continue
        if is_shift_invariant(f, u):
            return u
    return None


def has_both_signs(u) -> bool:
    return any(c > 0 for c in u) and any(c < 0 for c in u)


def u_to_certificate(u) -> ESSCertificate:
    """``+1`` entries form S, ``-1`` entries form T (1-based)."""
    if any(c not in (0, 1, -1) for c in u):
        raise NotACertificate(f"{tuple(u)} is not in the unit ball")
    S = tuple(i + 1 for i, c in enumerate(u) if c == 1)
    T = tuple(i + 1 for i, c in enumerate(u) if c == -1)
    if not S or not T:
        raise NotACertificate(f"{tuple(u)} needs both a +1 and a -1 entry")
    return ESSCertificate(S, T)


def certificate_to_u(cert: ESSCertificate, n: int) -> tuple:
    u = [0] * n
    for i in cert.S:
        u[i - 1] = 1
    for i in cert.T:
        u[i - 1] = -1
    return tuple(u)


def certificate_roundtrip(u) -> tuple[ESSCertificate, tuple]:
    cert = u_to_certificate(u)
    back = certificate_to_u(cert, len(u))
    if back != tuple(u):
        raise AssertionError("certificate bijection broken")
    return cert, back


def solve_via_shifts(inst: ESSInstance, rng: random.Random | None = None) -> dict:
    """Run the whole chain and return the report document."""
    modular, fld = ess_to_mod_prime(inst, rng)
    target = reduce_to_shiftfreeness(modular, fld)
    u = shift_search(target.f, target.U, accept=_certificate_filter(modular, target.f))
    cert = None
    if u is not None:
        cert, _ = certificate_roundtrip(u)
        if not cert.holds_for(inst):
            raise AssertionError("modular certificate failed over the integers")
    return {
        "a": list(inst.a),
        "p": fld.p,
        "f": to_string(target.f),
        "u": list(u) if u is not None else None,
        "S": list(cert.S) if cert else None,
        "T": list(cert.T) if cert else None,
    }


def _certificate_filter(inst: ESSInstance, f: MPoly):
    """Accept only shifts with both signs.

    A one-signed shift fixes f only if its support sums to 0 mod p; with
    ``0 < sum(a) < p`` that support must consist of zero entries.
    """
    p = f.field.p
    guarded = 0 < sum(inst.a) < p

    def accept(u) -> bool:
        if has_both_signs(u):
            return True
        if guarded and is_shift_invariant(f, u):
            if any(inst.a[i] for i, c in enumerate(u) if c):
                raise AssertionError(f"one-signed shift {u} fixes the form")
        return False

    return accept


def report_json(doc: dict) -> str:
    return json.dumps(doc, sort_keys=False)
