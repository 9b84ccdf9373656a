"""``ainfty`` command line.

Every subcommand reads one input file (an algebra unless stated otherwise) and
prints a report.  Exit codes: 0 success, 1 mathematical failure (the report
carries a witness), 2 input error.  Reports are deterministic: sorted keys,
exact scalar strings, no timings.
"""
from __future__ import annotations

import argparse
import os
import random
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

from . import ainfinity as ai
from . import hochschild as hh
from . import modules as md
from . import ncgeometry as nc
from .centr import explicit_formula_discrepancies, left_action_morphism, centr, yoneda
from .coalgebra import QuiverCoalgebra, TruncatedTensorCoalgebra, is_subcoalgebra, subcoalgebra_closure
from .exactlinalg import GF, Field
from .graded import GradedSpace
from .io import (FormatError, algebra_from_dict, algebra_to_dict, dumps, form_from_dict, form_to_dict,
                 load_json, module_from_dict, morphism_from_dict)


class InputError(Exception):
    pass


class Result:
    """What a subcommand hands back: payload, verdict, optional table for TSV."""

    def __init__(self, payload: dict, ok: bool = True, table: Optional[List[dict]] = None):
        self.payload, self.ok, self.table = payload, ok, table


# ------------------------------------------------------------------ helpers

def _window(text: Optional[str]) -> Optional[Tuple[int, int]]:
    if text is None:
        return None
    try:
        a, b = text.split(":")
        lo, hi = int(a), int(b)
    except ValueError:
        raise InputError(f"--window expects a:b, got {text!r}")
    if lo > hi:
        raise InputError("--window a:b needs a <= b")
    return lo, hi


def _threads(args) -> int:
    if args.threads is not None:
        return max(1, args.threads)
    env = os.environ.get("AINFTY_THREADS")
    try:
        return max(1, int(env)) if env else 1
    except ValueError:
        raise InputError(f"AINFTY_THREADS must be an integer, got {env!r}")


def _L(args, default: int = 6) -> int:
    return default if args.max_length is None else args.max_length


def _load(path: str) -> dict:
    return load_json(path)


def _algebra(args) -> ai.AInftyAlgebra:
    A = algebra_from_dict(_load(args.input))
    if args.p is not None:
        A = A.with_field(GF(args.p))
    return A


def _form(args):
    return form_from_dict(_load(args.input))


def _dims_table(per_degree: Dict[str, dict]) -> List[dict]:
    return [dict(degree=int(k), **v) for k, v in sorted(per_degree.items(), key=lambda kv: int(kv[0]))]


def _str_form(sp: nc.NCSpace, f) -> list:
    return form_to_dict(sp, f)["terms"]


# ------------------------------------------------------------------ algebra commands

def cmd_validate(args) -> Result:
    A = _algebra(args)
    rep = ai.check_relations(A, _L(args))
    out = {"algebra": A.name, "relations": rep.as_dict()}
    ok = rep.passed
    if A.strict_unit is not None:
        unit_ok = ai.check_strict_unit(A)
        out["strict_unit"] = {"name": A.strict_unit, "pass": unit_ok}
        ok = ok and unit_ok
    out["pass"] = ok
    return Result(out, ok)


def cmd_cohomology(args) -> Result:
    A = _algebra(args)
    H = ai.cohomology(A, _window(args.window))
    dims = H.dims(_window(args.window))
    F = A.field
    prod = {f"{H.names[i]}*{H.names[j]}": {H.names[k]: F.to_str(c) for k, c in sorted(v.items())}
            for (i, j), v in sorted(H.product.items())}
    table = [{"degree": d, "dim": n} for d, n in sorted(dims.items())]
    return Result({"algebra": A.name, "dims": {str(d): n for d, n in dims.items()},
                   "classes": [[n, d] for n, d in zip(H.names, H.degrees)], "m2": prod}, True, table)


def cmd_minimal_model(args) -> Result:
    A = _algebra(args)
    M, f = ai.minimal_model(A, n_max_out=args.order if args.order is not None else 4)
    L = _L(args)
    m1_zero = 1 not in M.ops
    rel = ai.check_relations(M, L)
    mor = ai.check_morphism(f, L, cross_check=False)
    degs = sorted(set(A.A.degrees)) or [0]
    quasi = ai.induced_map_report(f, (degs[0], degs[-1]))
    ok = m1_zero and rel.passed and mor.passed and all(v["iso"] for v in quasi.values())
    return Result({"algebra": A.name, "minimal_model": algebra_to_dict(M), "m1_zero": m1_zero,
                   "relations": rel.as_dict(), "morphism": mor.as_dict(), "quasi_isomorphism": quasi,
                   "pass": ok}, ok)


def cmd_adjoin_unit(args) -> Result:
    A = _algebra(args)
    B = ai.adjoin_unit(A)
    rel = ai.check_relations(B, _L(args))
    unit = ai.check_strict_unit(B)
    ok = rel.passed and unit
    return Result({"algebra": algebra_to_dict(B), "relations": rel.as_dict(), "strict_unit": unit,
                   "pass": ok}, ok)


def cmd_opposite(args) -> Result:
    A = _algebra(args)
    B = ai.opposite(A)
    rel = ai.check_relations(B, _L(args))
    return Result({"algebra": algebra_to_dict(B), "relations": rel.as_dict(), "pass": rel.passed}, rel.passed)


def cmd_morphism_check(args) -> Result:
    d = _load(args.input)
    f = morphism_from_dict(d, Path(args.input).parent)
    rep = ai.check_morphism(f, _L(args))
    return Result({"source": f.source.name, "target": f.target.name, "morphism": rep.as_dict(),
                   "pass": rep.passed}, rep.passed)


def _modules_from(args) -> List[md.AInftyBimodule]:
    d = _load(args.input)
    if "basis" in d and "ops" in d:
        A = algebra_from_dict(d)
        return [md.diagonal_bimodule(A), md.regular_module(A, "left"), md.regular_module(A, "right")]
    return [module_from_dict(d, Path(args.input).parent)]


def cmd_module_check(args) -> Result:
    L = _L(args)
    reps = {M.name: md.check_bimodule(M, L).as_dict() for M in _modules_from(args)}
    ok = all(r["pass"] for r in reps.values())
    return Result({"modules": reps, "pass": ok}, ok)


def _module_pair(args) -> Tuple[md.AInftyBimodule, md.AInftyBimodule]:
    if args.second is None:
        A = algebra_from_dict(_load(args.input))
        return md.regular_module(A, "right"), md.regular_module(A, "left")
    load = lambda p: module_from_dict(_load(p), Path(p).parent)
    return load(args.input), load(args.second)


def cmd_derived_tensor(args) -> Result:
    M, N = _module_pair(args)
    sl = md.derived_tensor(M, N, _L(args))
    per = sl.as_dict(_window(args.window))
    return Result({"left": M.name, "right": N.name, "homology": per}, True, _dims_table(per))


def cmd_hom_complex(args) -> Result:
    if args.second is None:
        A = algebra_from_dict(_load(args.input))
        M = N = md.regular_module(A, "left")
    else:
        M, N = _module_pair(args)
    H = md.HomComplex(M, N, _L(args, 2))
    sl = H.slice()
    per = sl.as_dict(_window(args.window))
    return Result({"source": M.name, "target": N.name, "squares_to_zero": sl.squares_to_zero(),
                   "homology": per}, sl.squares_to_zero(), _dims_table(per))


def cmd_sharp(args) -> Result:
    A = _algebra(args)
    L = _L(args)
    sl = md.sharp_complex(md.diagonal_bimodule(A), L)
    same = md.sharp_matches_chains(A, L)
    per = sl.as_dict(_window(args.window))
    return Result({"algebra": A.name, "matches_hochschild_chains": same, "homology": per},
                  same, _dims_table(per))


def cmd_centr(args) -> Result:
    A = _algebra(args)
    L = _L(args, 3)
    C = centr(left_action_morphism(A), L)
    rel = ai.check_relations(C, L)
    disc = explicit_formula_discrepancies(A, min(L, 3))
    ok = rel.passed and not disc
    return Result({"algebra": A.name, "dim": C.dim, "relations": rel.as_dict(),
                   "explicit_formula_discrepancies": [list(x) for x in disc], "pass": ok}, ok)


def cmd_yoneda(args) -> Result:
    A = _algebra(args)
    L = _L(args, 3)
    Y = yoneda(A, L)
    mor = ai.check_morphism(Y, L, cross_check=False)
    window = _window(args.window) or (0, 0)
    ind = ai.induced_map_report(Y, window)
    ok = mor.passed and all(v["iso"] for v in ind.values())
    return Result({"algebra": A.name, "morphism": mor.as_dict(), "induced_on_cohomology": ind,
                   "verdict": "window-relative", "pass": ok}, ok)


# ------------------------------------------------------------------ Hochschild / cyclic

def cmd_hochschild(args) -> Result:
    A = _algebra(args)
    kind = args.kind
    L = _L(args, 4 if kind == "cochains" else 6)
    per = hh.hh_homology(A, L, args.mode if kind == "chains" else "plain", kind, _window(args.window))
    return Result({"algebra": A.name, "kind": kind, "mode": args.mode, "homology": per}, True, _dims_table(per))


def cmd_cyclic(args) -> Result:
    A = _algebra(args)
    rep = hh.negative_cyclic(A, args.u_order or 1, _L(args), args.mode)
    return Result({"algebra": A.name, "negative_cyclic": rep.as_dict()})


def cmd_degeneration(args) -> Result:
    A = _algebra(args)
    rep = hh.degeneration_report(A, args.u_order or 4, _L(args), args.mode, threads=_threads(args))
    table = [{"n": r["n"], "flat": r["flat"], "checked_degrees": " ".join(map(str, r["checked_degrees"]))}
             for r in rep["rows"]]
    return Result(rep, True, table)


def cmd_acyclicity(args) -> Result:
    A = _algebra(args)
    rep = hh.ox_acyclicity(A, _L(args), _window(args.window))
    return Result(rep, rep.get("acyclic") is not False)


def cmd_modp_probe(args) -> Result:
    A = algebra_from_dict(_load(args.input))
    p = args.p or 3
    rep = hh.mod_p_probe(A.with_field(GF(p)), _L(args, 4))
    return Result(rep)


# ------------------------------------------------------------------ forms

def cmd_forms(args) -> Result:
    sp, f = _form(args)
    op = args.op
    if op == "reduce":
        return Result({"op": op, "value": _str_form(sp, sp.cyclic(f))})
    if op == "dcycl":
        return Result({"op": op, "value": _str_form(sp, sp.d_cycl(f))})
    if op == "phi":
        return Result({"op": op, "value": _str_form(sp, sp.phi(sp.cyclic(f)))})
    rng = random.Random(args.seed)
    N = args.order if args.order is not None else 6
    results = {}
    for t in range(args.trials):
        v = nc.random_vector_field(sp, rng, rng.choice([0, 1]))
        w = nc.random_vector_field(sp, rng, rng.choice([0, 1]))
        res = nc.cyclic_cartan_identities(sp, v, w, sp.truncate(f, N))
        for k, ok in res.items():
            results[k] = results.get(k, True) and ok
    ok = all(results.values())
    return Result({"op": op, "trials": args.trials, "seed": args.seed, "identities": results, "pass": ok}, ok)


def _subst_json(sp: nc.NCSpace, S: nc.Substitution) -> dict:
    return {sp.name(i): _str_form(sp, S.image(i)) for i in range(sp.n)}


def cmd_darboux(args) -> Result:
    sp, f = _form(args)
    N = args.order if args.order is not None else 6
    r = nc.darboux_normalize(sp, f, N)
    ok = r.verified and r.inverse_verified
    return Result({"order": N, "omega0": _str_form(sp, r.omega0), "steps": r.steps,
                   "substitution": _subst_json(sp, r.substitution), "inverse": _subst_json(sp, r.inverse),
                   "verified": r.verified, "inverse_verified": r.inverse_verified, "pass": ok}, ok)


def cmd_scalar_product(args) -> Result:
    A = _algebra(args)
    if A.pairing is None:
        raise InputError("the algebra file has no pairing")
    rep = nc.scalar_product_check(A)
    return Result(rep.as_dict(), rep.passed)


def cmd_repspace(args) -> Result:
    sp, f = _form(args)
    r = nc.rep_space_transfer(sp, sp.cyclic(f), args.n)
    R = nc.RepSpace(sp, args.n)
    out = {"n": r.n, "form_degree": r.form_degree, "terms": r.terms, "value": R.to_json(r.value)}
    ok = True
    if r.form_degree == 2:
        out.update(closed=r.closed, nondegenerate=r.nondegenerate)
        ok = bool(r.closed)
    return Result(out, ok)


# ------------------------------------------------------------------ coalgebras

def cmd_subcoalgebra(args) -> Result:
    d = _load(args.input)
    F = Field.parse(d.get("field", "QQ"))
    try:
        if "quiver" in d:
            q = d["quiver"]
            C = QuiverCoalgebra(tuple(q["vertices"]), tuple(tuple(a) for a in q["arrows"]))
            x = {tuple(p): F(c) for p, c in d["element"]}
            cop = lambda v: C.coproduct_of(v, F)
            show = lambda k: list(k)
        elif "tensor" in d:
            W = GradedSpace.from_pairs([(n, k) for n, k in d["tensor"]["basis"]])
            T = TruncatedTensorCoalgebra(W, int(d["tensor"].get("L", 6)))
            x = {tuple(W.index(n) for n in w): F(c) for w, c in d["element"]}
            cop = lambda v: T.coproduct_of(v, F)
            show = lambda k: [W.names[i] for i in k]
        else:
            raise InputError("expected a 'quiver' or 'tensor' coalgebra")
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed coalgebra input: {exc}")
    basis = subcoalgebra_closure(x, cop, F)
    closed = is_subcoalgebra(basis, cop, F)
    out = {"dim": len(basis), "closed": closed,
           "basis": [[[show(k), F.to_str(c)] for k, c in sorted(v.items(), key=lambda kv: repr(kv[0]))]
                     for v in basis]}
    return Result(out, closed)


# ------------------------------------------------------------------ driver

COMMANDS: Dict[str, Callable] = {
    "validate": cmd_validate, "cohomology": cmd_cohomology, "minimal-model": cmd_minimal_model,
    "adjoin-unit": cmd_adjoin_unit, "opposite": cmd_opposite, "morphism-check": cmd_morphism_check,
    "module-check": cmd_module_check, "derived-tensor": cmd_derived_tensor, "hom-complex": cmd_hom_complex,
    "sharp": cmd_sharp, "centr": cmd_centr, "yoneda": cmd_yoneda, "hochschild": cmd_hochschild,
    "cyclic": cmd_cyclic, "degeneration": cmd_degeneration, "acyclicity": cmd_acyclicity,
    "modp-probe": cmd_modp_probe, "forms": cmd_forms, "darboux": cmd_darboux,
    "scalar-product": cmd_scalar_product, "repspace": cmd_repspace, "subcoalgebra": cmd_subcoalgebra,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-length", "-L", type=int, help="tensor-length truncation (default 6)")
    common.add_argument("--window", help="degree window a:b")
    common.add_argument("--order", type=int, help="series order N (default 6)")
    common.add_argument("--u-order", type=int, help="n for k[u]/(u^n)")
    common.add_argument("--p", type=int, help="work over GF(p)")
    common.add_argument("--format", choices=("json", "tsv"), default="json")
    common.add_argument("--out", help="write the report here instead of standard output")
    common.add_argument("--threads", type=int, help="worker threads (fallback: AINFTY_THREADS)")
    common.add_argument("--mode", choices=("auto", "plain", "reduced", "modified"), default=None)

    p = _Parser(prog="ainfty", description="Exact computations with finite-dimensional A-infinity algebras.")
    sub = p.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name == "forms":
            sp.add_argument("op", choices=("reduce", "dcycl", "phi", "cartan"))
            sp.add_argument("--trials", type=int, default=20)
            sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("input")
        if name in ("derived-tensor", "hom-complex"):
            sp.add_argument("second", nargs="?", help="second module file")
        if name == "hochschild":
            sp.add_argument("--kind", choices=("chains", "cochains"), default="chains")
        if name == "repspace":
            sp.add_argument("--n", type=int, default=2, help="matrix size")
    return p


MODE_COMMANDS = ("hochschild", "cyclic", "degeneration")


def _default_mode(args) -> Optional[str]:
    if args.command not in MODE_COMMANDS:
        if args.mode is not None:
            raise InputError(f"--mode does not apply to {args.command}")
        return None
    if args.mode is not None:
        return args.mode
    return "plain" if args.command == "hochschild" else "auto"


def _tsv(res: Result) -> str:
    if res.table:
        cols = list(res.table[0])
        lines = ["\t".join(cols)]
        lines += ["\t".join("" if r.get(c) is None else str(r.get(c)).lower() if isinstance(r.get(c), bool)
                            else str(r.get(c)) for c in cols) for r in res.table]
        return "\n".join(lines) + "\n"
    rows: List[str] = []

    def walk(prefix, obj):
        if isinstance(obj, dict):
            for k in sorted(obj):
                walk(f"{prefix}.{k}" if prefix else str(k), obj[k])
        elif isinstance(obj, list) and obj and all(isinstance(x, (dict, list)) for x in obj):
            for i, x in enumerate(obj):
                walk(f"{prefix}.{i}", x)
        else:
            rows.append(f"{prefix}\t{dumps(obj).strip() if not isinstance(obj, str) else obj}")

    walk("", res.payload)
    return "\n".join(rows) + "\n"


def run(argv: Optional[List[str]] = None) -> Tuple[int, str, Optional[str]]:
    """Parse and execute; returns ``(exit code, report text, --out path)``."""
    parser = build_parser()
    args = parser.parse_args(argv)
    args.mode = _default_mode(args)
    if args.p is not None and args.p < 2:
        raise InputError("--p must be a prime")
    res = COMMANDS[args.command](args)
    report = {"command": args.command, "input": args.input,
              "parameters": {k: getattr(args, k) for k in ("max_length", "window", "order", "u_order", "p", "mode")
                             if getattr(args, k, None) is not None},
              "result": res.payload, "status": "pass" if res.ok else "fail"}
    text = dumps(report) if args.format == "json" else _tsv(res)
    return (0 if res.ok else 1), text, args.out


def main(argv: Optional[List[str]] = None) -> int:
    try:
        code, text, out = run(argv)
    except SystemExit as exc:          # argparse: usage already printed
        return int(exc.code or 0)
    except (InputError, FormatError, FileNotFoundError, IsADirectoryError, KeyError, ValueError) as exc:
        print(f"ainfty: error: {exc}", file=sys.stderr)
        return 2
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        try:
            sys.stdout.write(text)
            sys.stdout.flush()
        except BrokenPipeError:        # e.g. piped into head
            sys.stderr.close()
    return code


if __name__ == "__main__":
    sys.exit(main())
