"""Shift invariance of polynomials and reduction to cylinders.

A polynomial f is invariant under the shift u when ``f(x - u) == f(x)``.
For ``deg f < p`` this happens exactly when ``sum_i u_i * D_{x_i} f`` vanishes,
so the invariant directions form the null space of a coefficient matrix
built from the gradient.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    ArityMismatch,
    DegreeNotBelowP,
    NotInvariantUnderU,
    PreconditionViolated,
    ZeroPolynomial,
    ZeroShift,
)
from .linalg import MatrixFp, in_span, kernel_basis
from .poly import MPoly, evaluate, gradient, grlex_key, hasse_multi, multi_indices, shift, substitute


@dataclass(frozen=True)
class ShiftKernel:
    basis: tuple  # tuple of n-tuples of canonical residues
    n: int

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, u, fld) -> bool:
        return in_span(u, self.basis, fld)


def _check_degree(f: MPoly):
    if f.is_zero():
        raise ZeroPolynomial("shift analysis needs a nonzero polynomial")
    if f.degree >= f.field.p:
        raise DegreeNotBelowP(f"deg f = {f.degree} is not below p = {f.field.p}")


def shift_matrix(f: MPoly) -> MatrixFp:
    """Rows indexed by the monomials of the gradient, one column per variable."""
    grads = gradient(f)
    monomials = sorted({e for g in grads for e in g.terms}, key=grlex_key, reverse=True)
    rows = [[g.terms.get(e, 0) for g in grads] for e in monomials]
    return MatrixFp.from_rows(rows, f.field, f.n)


def shift_kernel(f: MPoly) -> ShiftKernel:
    _check_degree(f)
    return ShiftKernel(tuple(kernel_basis(shift_matrix(f))), f.n)


def is_shift_invariant(f: MPoly, u) -> bool:
    """Direct test ``f == f(x - u)`` by substitution."""
    if len(u) != f.n:
        raise ArityMismatch(f"shift of length {len(u)} for {f.n} variables")
    return shift(f, u) == f


def directional_hasse(f: MPoly, u, j: int) -> MPoly:
    """``sum_{|s| = j} u^s D^(s) f``, the degree-``j`` Taylor term in direction ``u``."""
    p = f.field.p
    acc = MPoly.zero(f.n, f.field)
    for s in multi_indices(f.n, j):
        c = 1
        for ui, si in zip(u, s):
            c = c * pow(int(ui), si, p) % p
        if c:
            acc = acc + hasse_multi(f, s).scale(c)
    return acc


@dataclass(frozen=True)
class CylinderForm:
    """``f(x) == reduced(y_1..y_{n-m})`` with ``y = linear_map @ x``.

    The last ``m`` coordinates of ``y`` do not occur in ``reduced``.
    """

    linear_map: MatrixFp
    reduced: MPoly
    m: int
    original: MPoly

    @property
    def n(self) -> int:
        return self.linear_map.cols

    def linear_forms(self) -> list[MPoly]:
        fld = self.linear_map.field
        return [MPoly.linear(row, fld) for row in self.linear_map.entries]

    def reconstruct(self) -> MPoly:
        forms = self.linear_forms()[: self.n - self.m]
        if not forms:
            return MPoly.constant(self.reduced.constant_term(), self.n, self.linear_map.field)
        return substitute(self.reduced, forms)


def _normalizing_map(w: tuple, fld) -> MatrixFp:
    """Invertible ``A`` with ``A w = e_n``: swap the last nonzero coordinate of
    ``w`` to the end, then ``y_i = x_i - w_i x_n / w_n`` and ``y_n = x_n / w_n``."""
    p = fld.p
    n = len(w)
    k = max(i for i, c in enumerate(w) if c % p)
    perm = list(range(n))
    perm[k], perm[n - 1] = perm[n - 1], perm[k]
    wp = [w[perm[i]] % p for i in range(n)]
    inv_last = pow(wp[-1], -1, p)
    rows = []
    # row i acts on x_{perm[i]}
    for i in range(n - 1):
        row = [0] * n
        row[perm[i]] = 1
        row[perm[n - 1]] = -wp[i] * inv_last % p
        rows.append(row)
    last = [0] * n
    last[perm[n - 1]] = inv_last
    rows.append(last)
    return MatrixFp.from_rows(rows, fld, n)


def _inverse_forms(w: tuple, fld) -> list[MPoly]:
    """Each ``x_j`` as a linear form in ``y`` for ``_normalizing_map(w)``."""
    p = fld.p
    n = len(w)
    k = max(i for i, c in enumerate(w) if c % p)
    perm = list(range(n))
    perm[k], perm[n - 1] = perm[n - 1], perm[k]
    forms = [None] * n
    for i in range(n - 1):
        row = [0] * n
        row[i] = 1
        row[n - 1] = w[perm[i]] % p
        forms[perm[i]] = MPoly.linear(row, fld)
    last = [0] * n
    last[n - 1] = w[perm[n - 1]] % p
    forms[perm[n - 1]] = MPoly.linear(last, fld)
    return forms


def _reduce_once(f: MPoly, w: tuple) -> tuple[MatrixFp, MPoly]:
    a = _normalizing_map(w, f.field)
    g_full = substitute(f, _inverse_forms(w, f.field))
    if g_full.degree_in(f.n) not in (0, float("-inf")):
        # Cannot happen for deg f < p and w in the kernel.
        raise AssertionError("reduced polynomial depends on the cylinder direction")
    return a, g_full.drop_variables(range(f.n - 1))


def cylinder_normalize(f: MPoly, u) -> CylinderForm:
    """Remove one invariant direction ``u`` from ``f``."""
    p = f.field.p
    u = tuple(int(c) % p for c in u)
    if len(u) != f.n:
        raise ArityMismatch(f"shift of length {len(u)} for {f.n} variables")
    if not any(u):
        raise ZeroShift("direction must be nonzero")
    _check_degree(f)
    if not is_shift_invariant(f, u):
        raise NotInvariantUnderU(f"{f} is not invariant under {u}")
    a, g = _reduce_once(f, u)
    return CylinderForm(a, g, 1, f)


def _block(a: MatrixFp, n: int) -> MatrixFp:
    """``a`` acting on the leading coordinates, identity on the rest."""
    k = a.cols
    rows = []
    for i in range(n):
        if i < k:
            rows.append(list(a.entries[i]) + [0] * (n - k))
        else:
            rows.append([int(j == i) for j in range(n)])
    return MatrixFp.from_rows(rows, a.field, n)


def full_cylinder_reduction(f: MPoly) -> CylinderForm:
    """Peel off every invariant direction of ``f`` in turn.

    The kernel basis ``b_1..b_m`` of ``f`` is pushed through the maps built
    so far; step ``j`` normalizes along the leading part of the image of
    ``b_j``. The trailing ``m x m`` block of the images ends up lower
    antitriangular with ones on the antidiagonal.
    """
    _check_degree(f)
    fld = f.field
    n = f.n
    basis = shift_kernel(f).basis
    m = len(basis)
    total = MatrixFp.identity(n, fld)
    g = f
    for j, b in enumerate(basis):
        k = n - j
        image = total.apply(b)
        w = image[:k]
        if not any(w):
            raise AssertionError("kernel basis image collapsed")
        step, g = _reduce_once(g, w)
        total = _block(step, n) @ total
    _check_antitriangular(total, basis, fld)
    if g.n and not g.is_constant() and shift_kernel(g).dim:
        raise AssertionError("reduced polynomial still has invariant directions")
    return CylinderForm(total, g, m, f)


def _check_antitriangular(total: MatrixFp, basis, fld):
    m = len(basis)
    n = total.cols
    images = [total.apply(b)[n - m :] for b in basis]
    for j, tail in enumerate(images):
        # column j: zeros above the antidiagonal entry at row m-1-j, which is 1
        anti = m - 1 - j
        if tail[anti] != 1 or any(tail[i] for i in range(anti)):
            raise AssertionError(f"image tails {images} are not lower antitriangular")


def gradient_orthogonality_check(f: MPoly, u, pts) -> bool:
    """``grad f(a) . u == 0`` on every listed zero ``a`` of ``f``."""
    p = f.field.p
    u = tuple(int(c) % p for c in u)
    if not any(u):
        return True
    if not is_shift_invariant(f, u):
        raise PreconditionViolated(f"{f} is not invariant under {u}")
    grads = gradient(f)
    for a in pts:
        if evaluate(f, a).value:
            raise PreconditionViolated(f"{a} is not a zero of {f}")
        if sum(evaluate(g, a).value * ui for g, ui in zip(grads, u)) % p:
            return False
    return True
