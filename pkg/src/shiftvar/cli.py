"""Command-line front end.

Verbs: kernel, normalize, delta, bounds, family, reduce, sweep. Reports go to
stdout (or ``--out-file``) as JSON or CSV. Exit status is 0 on success, 1 on
invalid input and 2 when a size budget is exceeded.
"""

from __future__ import annotations

import argparse
import io
import itertools
import json
import random
import sys
from concurrent.futures import ProcessPoolExecutor

from .enumeration import (
    DEFAULT_BUDGET,
    Metadata,
    REPORT_VERSION,
    VarietyInstance,
    ball,
    bound_report,
    compute_delta,
    rational_points,
    write_csv,
)
from .errors import BudgetExceeded, ShiftvarError, ValidationError
from .families import (
    analyze,
    decomposable_sample,
    determinantal_minors,
    ess_linear_form,
    generic_discriminant,
    generic_resultant,
    graph_variety,
    parallel_hyperplanes,
)
from .field import PrimeField
from .hardness import ESSInstance, report_json, solve_via_shifts
from .poly import MPoly, parse_poly, random_poly, to_string
from .shifts import full_cylinder_reduction, shift_kernel

DEFAULT_SEED = 20240601
KINDS = (
    "parallel-hyperplanes",
    "graph",
    "determinantal",
    "discriminant",
    "resultant",
    "decomposable",
    "ess-linear-form",
)
# family parameters that may be swept
GRID_KEYS = ("p", "h", "n", "d", "m", "s", "ell")


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated decimal integers, got {text!r}")


def _int(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a decimal integer, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="shiftvar", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)

    def common(sp, grid=False):
        num = _int_list if grid else _int
        sp.add_argument("--p", type=num, help="prime modulus")
        sp.add_argument("--n", type=num, help="number of variables")
        sp.add_argument("--seed", type=_int, default=DEFAULT_SEED)
        sp.add_argument("--budget", type=_int, default=DEFAULT_BUDGET, help="largest point set to build")
        sp.add_argument("--out", choices=("json", "csv"), default="json")
        sp.add_argument("--out-file")

    def polys(sp):
        sp.add_argument("--poly", action="append", default=[], help="defining polynomial (repeatable)")
        sp.add_argument("--polys-file", help="JSON instance with p, n, polys and optional metadata")

    sp = sub.add_parser("kernel", help="invariant shift directions of a polynomial")
    common(sp)
    polys(sp)

    sp = sub.add_parser("normalize", help="rewrite a polynomial as a cylinder over its kernel")
    common(sp)
    polys(sp)

    for verb, text in (("delta", "deficiency of X + U_h"), ("bounds", "deficiency plus bound checks")):
        sp = sub.add_parser(verb, help=text)
        common(sp)
        polys(sp)
        sp.add_argument("--h", type=_int, default=1)
        if verb == "bounds":
            # declared geometry; all four together, or none (then --polys-file must carry it)
            sp.add_argument("--r", type=_int, help="declared dimension")
            sp.add_argument("--deg", type=_int, help="declared degree d")
            sp.add_argument("--sigma", type=_int, help="declared number of essential components")
            sp.add_argument("--bigD", type=_int, help="declared degree sum of essential components")

    def family_args(sp, grid=False):
        num = _int_list if grid else _int
        sp.add_argument("--kind", choices=KINDS, required=True)
        sp.add_argument("--h", type=num, default=[1] if grid else 1)
        sp.add_argument("--d", type=num)
        sp.add_argument("--m", type=num)
        sp.add_argument("--s", type=num)
        sp.add_argument("--ell", type=num)
        sp.add_argument("--a", type=_int_list)
        sp.add_argument("--poly", action="append", default=[], help="g for the graph family")
        sp.add_argument("--count", type=_int, default=50, help="sample size for decomposable")

    sp = sub.add_parser("family", help="build a worked family and run the full pipeline")
    common(sp)
    family_args(sp)

    sp = sub.add_parser("reduce", help="equal subset sum through the shift search")
    common(sp)
    sp.add_argument("--a", type=_int_list, help="nonnegative integers")
    sp.add_argument("--in-file", help='JSON {"a": [...]}')
    sp.add_argument("--random-start", action="store_true", help="seeded random start for the prime search")

    sp = sub.add_parser("sweep", help="grid of family cells, one CSV row each")
    common(sp, grid=True)
    family_args(sp, grid=True)
    sp.add_argument("--jobs", type=_int, default=1)
    sp.set_defaults(out="csv")
    return parser


# --------------------------------------------------------------------------
# inputs


def _declared(args) -> Metadata | None:
    vals = [getattr(args, k, None) for k in ("r", "deg", "sigma", "bigD")]
    if all(v is None for v in vals):
        return None
    if any(v is None for v in vals):
        raise ValidationError("declare all of --r, --deg, --sigma, --bigD or none")
    return Metadata(*vals)


def _instance(args) -> VarietyInstance:
    meta = _declared(args)
    if args.polys_file:
        try:
            with open(args.polys_file) as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError(f"cannot read {args.polys_file}: {exc}")
        inst = VarietyInstance.from_dict(doc)
        return inst if meta is None else VarietyInstance(inst.polys, inst.n, inst.field, meta)
    if args.p is None or args.n is None:
        raise ValidationError("--p and --n are required without --polys-file")
    if not args.poly:
        raise ValidationError("give at least one --poly")
    fld = PrimeField(args.p)
    return VarietyInstance(tuple(parse_poly(t, args.n, fld) for t in args.poly), args.n, fld, meta)


def _single_poly(args) -> MPoly:
    inst = _instance(args)
    if len(inst.polys) != 1:
        raise ValidationError("this verb takes exactly one polynomial")
    return inst.polys[0]


def _need(cell: dict, *keys):
    missing = [k for k in keys if cell.get(k) is None]
    if missing:
        raise ValidationError(f"missing --{', --'.join(missing)}")


def _graph_g(cell: dict, fld: PrimeField, rng: random.Random) -> MPoly:
    if cell.get("poly"):
        return parse_poly(cell["poly"], cell["n"] - 1, fld)
    # random g of exact degree d in n - 1 variables
    d = cell["d"]
    while True:
        g = random_poly(rng, cell["n"] - 1, fld, d, 0.6)
        if g.degree == d:
            return g


def family_spec(kind: str, cell: dict, seed: int):
    """FamilySpec for ``kind`` from the flag values in ``cell``."""
    _need(cell, "p")
    fld = PrimeField(cell["p"])
    rng = random.Random(seed)
    if kind == "parallel-hyperplanes":
        _need(cell, "d", "n")
        return parallel_hyperplanes(cell["d"], cell["n"], fld, cell.get("h") or 1)
    if kind == "graph":
        _need(cell, "n")
        if not cell.get("poly"):
            _need(cell, "d")
        if cell["n"] < 2:
            raise ValidationError("graph needs n >= 2")
        return graph_variety(_graph_g(cell, fld, rng))
    if kind == "determinantal":
        _need(cell, "m", "n", "s")
        return determinantal_minors(cell["m"], cell["n"], cell["s"], fld)
    if kind == "discriminant":
        _need(cell, "n")
        return generic_discriminant(cell["n"], fld)
    if kind == "resultant":
        _need(cell, "n", "m")
        return generic_resultant(cell["n"], cell["m"], fld)
    if kind == "ess-linear-form":
        _need(cell, "a")
        return ess_linear_form(cell["a"], fld)
    raise ValidationError(f"unknown family {kind!r}")


def run_family_cell(kind: str, cell: dict, seed: int, budget: int, count: int = 50):
    """Report for one family cell; decomposable samples get a bare deficiency report."""
    h = cell.get("h") or 1
    if kind == "decomposable":
        _need(cell, "p", "ell", "m")
        fld = PrimeField(cell["p"])
        x = decomposable_sample(cell["ell"], cell["m"], fld, count, random.Random(seed))
        rep = compute_delta(x, ball(h, x.n, fld, budget), budget)
        rep.h = h
        rep.family = "decomposable"
        rep.extra["parameters"] = {k: cell[k] for k in ("p", "ell", "m")} | {"count": count}
        return rep
    spec = family_spec(kind, cell, seed)
    rep = analyze(spec, h, budget)
    rep.extra["instance"] = spec.instance.to_dict()
    return rep


# --------------------------------------------------------------------------
# verbs


def _kernel(args) -> dict:
    f = _single_poly(args)
    kernel = shift_kernel(f)
    return {
        "p": f.field.p,
        "n": f.n,
        "poly": to_string(f),
        "kernel_dim": kernel.dim,
        "basis": [list(b) for b in kernel.basis],
    }


def _normalize(args) -> dict:
    f = _single_poly(args)
    form = full_cylinder_reduction(f)
    return {
        "p": f.field.p,
        "n": f.n,
        "poly": to_string(f),
        "m": form.m,
        "linear_map": [list(r) for r in form.linear_map.entries],
        "linear_forms": [to_string(g) for g in form.linear_forms()],
        "reduced": to_string(form.reduced),
        "reduced_variables": form.reduced.n,
    }


def _neighborhood(args, with_bounds: bool):
    inst = _instance(args)
    u = ball(args.h, inst.n, inst.field, args.budget)
    if with_bounds:
        rep = bound_report(inst, u, budget=args.budget)
    else:
        rep = compute_delta(rational_points(inst, args.budget), u, args.budget)
    rep.h = args.h
    rep.extra["instance"] = inst.to_dict()
    return rep


def _reduce(args) -> dict:
    if args.in_file:
        try:
            with open(args.in_file) as fh:
                a = json.load(fh)["a"]
        except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
            raise ValidationError(f"cannot read {args.in_file}: {exc}")
    elif args.a is not None:
        a = args.a
    else:
        raise ValidationError("give --a or --in-file")
    rng = random.Random(args.seed) if args.random_start else None
    return solve_via_shifts(ESSInstance(tuple(a)), rng)


def _sweep_cell(job):
    kind, cell, seed, budget, count = job
    try:
        return run_family_cell(kind, cell, seed, budget, count), None
    except ShiftvarError as exc:
        shown = {k: v for k, v in cell.items() if v is not None}
        return None, f"{shown}: {exc}"


def _sweep(args, stderr):
    axes = {}
    for key in GRID_KEYS:
        val = getattr(args, key)
        axes[key] = val if val else [None]
    cells = [dict(zip(axes, combo)) for combo in itertools.product(*axes.values())]
    for cell in cells:
        cell["a"] = args.a
        cell["poly"] = args.poly[0] if args.poly else None
    jobs = [(args.kind, cell, args.seed, args.budget, args.count) for cell in cells]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_sweep_cell, jobs))
    else:
        results = [_sweep_cell(j) for j in jobs]
    reports = []
    for rep, err in results:
        if err is not None:
            print(f"skipped {err}", file=stderr)
        else:
            reports.append(rep)
    return reports


def _render(result, fmt: str) -> str:
    reports = result if isinstance(result, list) else [result]
    if fmt == "csv":
        if not all(hasattr(r, "csv_row") for r in reports):
            raise ValidationError("csv output is only available for neighborhood reports")
        buf = io.StringIO()
        write_csv(reports, buf)
        return buf.getvalue()
    if isinstance(result, list):
        doc = {"version": REPORT_VERSION, "reports": [r.to_dict() for r in result]}
    elif hasattr(result, "to_dict"):
        doc = result.to_dict()
    else:
        return report_json(result) + "\n"
    return json.dumps(doc, indent=2) + "\n"


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0
    try:
        if args.budget < 1:
            raise ValidationError("--budget must be positive")
        if args.verb == "kernel":
            result = _kernel(args)
        elif args.verb == "normalize":
            result = _normalize(args)
        elif args.verb in ("delta", "bounds"):
            result = _neighborhood(args, args.verb == "bounds")
        elif args.verb == "family":
            cell = {k: getattr(args, k) for k in GRID_KEYS}
            cell["a"] = args.a
            cell["poly"] = args.poly[0] if args.poly else None
            result = run_family_cell(args.kind, cell, args.seed, args.budget, args.count)
        elif args.verb == "reduce":
            result = _reduce(args)
        else:
            result = _sweep(args, stderr)
        text = _render(result, args.out)
    except BudgetExceeded as exc:
        print(f"error[{exc.code}]: {exc}", file=stderr)
        return 2
    except ShiftvarError as exc:
        print(f"error[{exc.code}]: {exc}", file=stderr)
        return 1
    if args.out_file:
        with open(args.out_file, "w") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return 0


def main():
    sys.exit(run())
