"""Command-line front end.

Subcommands::

    metriclie analyze FILE          structure, homogeneous structure and curvature report
    metriclie find-cyclic FILE      search for a cyclic metric on the algebra in FILE
    metriclie classify FILE         identify a cyclic metric Lie algebra (dim <= 5)
    metriclie catalog TAG PARAMS    write the input document of a catalog family
    metriclie selftest              run the acceptance suite

Catalog parameters are numbers; ``:`` separates parameter groups
(``Hnp1 1 2 : 1``) and ``+`` separates direct factors
(``Sl2Cyclic 1 2 + Abelian 1``).

Exit codes: 0 ok, 1 invalid input, 2 validation failure or non-cyclic input,
3 unsupported dimension.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import catalog, io
from .catalog import FamilyParams
from .classifier import classify
from .core import (
    ClassificationFailed,
    DimensionError,
    MetricLieError,
    NotCyclicError,
    UnsupportedError,
    ValidationError,
    structure_report,
    validate,
)
from .curvature import extremal_sectional, riemann, signature_signs
from .feasibility import find_cyclic_metric, semisimple_cyclic_metrics
from .homogeneous import cyclic_defect, is_cyclic, is_vectorial, tv_decompose

EXIT_OK, EXIT_INPUT, EXIT_VALIDATION, EXIT_UNSUPPORTED = 0, 1, 2, 3


# ---------------------------------------------------------------------------
# report blocks


def structure_block(m) -> dict:
    rep = structure_report(m)
    return {
        "unimodular": rep.unimodular,
        "solvable": rep.solvable,
        "nilpotent": rep.nilpotent,
        "semisimple": rep.semisimple,
        "abelian": rep.abelian,
        "center_dim": int(rep.center.shape[1]),
        "derived_series_dims": list(rep.derived_series_dims),
        "lower_central_dims": list(rep.lower_central_dims),
        "killing_signature": list(rep.killing.signature),
    }


def homogeneous_block(m, rtol) -> dict:
    hs = tv_decompose(m, rtol)
    ok, defect = is_cyclic(m)
    out = {
        "class_verdict": hs.class_verdict,
        "component_norms": list(hs.norms),
        "norm_S": hs.norm_S,
        "cyclic": ok,
        "cyclic_defect": defect,
    }
    vec = is_vectorial(m)
    out["vectorial"] = vec.vectorial
    if vec.vectorial:
        out["xi"] = vec.xi.tolist()
    return out


def curvature_block(m, rtol, seed) -> dict:
    d = riemann(m, rtol)
    ext = extremal_sectional(m, d, seed=seed)
    return {
        "ricci_eigenvalues": d.ricci_eigenvalues.tolist(),
        "ricci_signature": signature_signs(d.ricci_eigenvalues),
        "scalar": d.scalar,
        "basic_sectional_min": ext.basic_min,
        "basic_sectional_max": ext.basic_max,
        "sectional_min": ext.minimum,
        "sectional_max": ext.maximum,
        "flat": d.flat,
    }


def feasibility_block(doc, args) -> dict:
    c = doc.constants()
    res = find_cyclic_metric(c, restarts=args.restarts, iters=args.iters, seed=args.seed, keep_trace=False)
    out = {
        "status": res.status,
        "certificate": res.certificate,
        "best_min_eigenvalue": res.best_min_eigenvalue if np.isfinite(res.best_min_eigenvalue) else None,
        "nullspace_dim": int(res.nullspace_basis.shape[0]),
        "seed": args.seed,
        "restarts": args.restarts,
        "iters": args.iters,
    }
    if res.feasible:
        out["witness_gram"] = res.solution.tolist()
        out["witness_document"] = doc.with_gram(res.solution).to_dict()
    if structure_report(c).semisimple and c.shape[0] > 0:
        ss = semisimple_cyclic_metrics(c)
        out["semisimple"] = {
            "feasible": ss.feasible,
            "epsilons": ss.epsilons.tolist(),
            "active_triples": [[i + 1, j + 1, k + 1] for i, j, k in ss.constraints],
            "solution_space_dim": ss.solution_space_dim,
            "margin": ss.margin if np.isfinite(ss.margin) else None,
        }
        if ss.feasible:
            out["semisimple"]["gram"] = ss.gram.tolist()
    return out


def classification_block(m, seed) -> dict:
    r = classify(m, seed=seed)
    return {
        "family": r.family.to_dict(),
        "description": r.family.describe(),
        "witness": r.witness.tolist(),
        "residual": r.residual,
        "decomposable": r.decomposable,
        "factors": [f.to_dict() for f in r.factors],
        "unimodular": r.unimodular,
    }


def _report(command, doc, args, blocks) -> dict:
    return {
        "schema_version": io.SCHEMA_VERSION,
        "command": command,
        "input": doc.to_dict(),
        "tolerances": {"rtol": args.tol},
        **blocks,
    }


# ---------------------------------------------------------------------------
# text rendering


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.10g}"
    if isinstance(v, list):
        return "[" + ", ".join(_fmt(x) for x in v) + "]"
    return str(v)


def render_text(report: dict) -> str:
    lines = [f"command: {report['command']}"]
    for key in ("structure", "homogeneous", "curvature", "feasibility", "classification"):
        block = report.get(key)
        if block is None:
            continue
        lines.append(f"{key}:")
        for k in sorted(block):
            if k in ("witness_document",):
                continue
            v = block[k]
            if isinstance(v, dict) and k != "family":
                lines.append(f"  {k}:")
                for kk in sorted(v):
                    lines.append(f"    {kk}: {_fmt(v[kk])}")
            elif k == "family":
                continue
            elif k == "factors":
                lines.append("  factors: " + " x ".join(FamilyParams.from_dict(f).describe() for f in v))
            else:
                lines.append(f"  {k}: {_fmt(v)}")
    return "\n".join(lines) + "\n"


def _emit(report: dict, args) -> None:
    text = io.dumps(report) if args.format == "machine" else render_text(report)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# commands


def _load(args):
    doc = io.load(args.file)
    c = doc.constants()
    diag = validate(c, args.tol)
    if not diag.passed:
        raise ValidationError(
            f"structure constants fail the Jacobi identity (defect {diag.jacobi_defect:.3g})",
            {"jacobi": diag.jacobi_defect},
        )
    return doc, doc.to_metric()


def cmd_analyze(args) -> int:
    doc, m = _load(args)
    blocks = {
        "structure": structure_block(m),
        "homogeneous": homogeneous_block(m, args.tol),
        "curvature": curvature_block(m, args.tol, args.seed),
    }
    _emit(_report("analyze", doc, args, blocks), args)
    return EXIT_OK


def cmd_find_cyclic(args) -> int:
    doc = io.load(args.file)
    diag = validate(doc.constants(), args.tol)
    if not diag.passed:
        raise ValidationError(f"structure constants fail the Jacobi identity (defect {diag.jacobi_defect:.3g})")
    _emit(_report("find-cyclic", doc, args, {"feasibility": feasibility_block(doc, args)}), args)
    return EXIT_OK


def cmd_classify(args) -> int:
    doc, m = _load(args)
    if m.dim > 5:
        raise UnsupportedError(f"classification is implemented up to dimension 5, got {m.dim}")
    ok, defect = is_cyclic(m)
    if not ok:
        raise NotCyclicError(f"metric is not cyclic (defect {defect:.3g})", defect)
    _emit(_report("classify", doc, args, {"classification": classification_block(m, args.seed)}), args)
    return EXIT_OK


NUMERIC_GROUPS = {
    "Gn": (("alphas", "list"),),
    "Hnp1": (("rhos", "list"), ("lambdas", "list")),
    "HnpHat": (("sigmas", "list"), ("mus", "list")),
    "HyperbolicHn": (("n", "int"), ("c", "float")),
    "Sl2Cyclic": (("l1", "float"), ("l2", "float")),
    "E11": (("alpha", "float"),),
    "So3Biinv": (("beta", "float"),),
    "Heisenberg": (),
    "Abelian": (("n", "int"),),
}


def _parse_factor(tokens: list) -> FamilyParams:
    if not tokens:
        raise ValidationError("empty catalog factor")
    tag, rest = tokens[0], tokens[1:]
    if tag not in NUMERIC_GROUPS:
        raise ValidationError(f"unknown catalog tag {tag!r}; known: {', '.join(NUMERIC_GROUPS)}")
    spec = NUMERIC_GROUPS[tag]
    params = {}
    if spec and spec[0][1] == "list":
        groups, cur = [], []
        for t in rest:
            if t == ":":
                groups.append(cur)
                cur = []
            else:
                cur.append(t)
        groups.append(cur)
        if len(groups) != len(spec):
            raise ValidationError(f"{tag} takes {len(spec)} parameter group(s) separated by ':'")
        for (name, _), g in zip(spec, groups):
            try:
                params[name] = [float(x) for x in g]
            except ValueError as exc:
                raise ValidationError(f"{tag}.{name}: {exc}") from None
    else:
        if len(rest) > len(spec) or (tag != "So3Biinv" and len(rest) != len(spec)):
            raise ValidationError(f"{tag} takes {len(spec)} parameter(s): {', '.join(n for n, _ in spec)}")
        for (name, kind), t in zip(spec, rest):
            try:
                params[name] = int(t) if kind == "int" else float(t)
            except ValueError as exc:
                raise ValidationError(f"{tag}.{name}: {exc}") from None
    return FamilyParams(tag, params)


def parse_catalog_args(tokens: list) -> FamilyParams:
    factors, cur = [], []
    for t in tokens:
        if t == "+":
            factors.append(_parse_factor(cur))
            cur = []
        else:
            cur.append(t)
    factors.append(_parse_factor(cur))
    if len(factors) == 1:
        return factors[0]
    return FamilyParams("DirectProduct", {}, 0, tuple(factors))


def cmd_catalog(args) -> int:
    fp = parse_catalog_args(args.spec)
    entry = catalog.make(fp)
    doc = io.from_metric(entry.algebra, entry.family.to_dict())
    text = io.serialize(doc)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_selftest(args) -> int:
    from .acceptance import CRITERIA

    ok = True
    for crit in CRITERIA:
        res = crit()
        ok &= res.passed
        print(res.line(), flush=True)
    print("all criteria passed" if ok else "some criteria failed")
    return EXIT_OK if ok else EXIT_VALIDATION


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="relative tolerance (default 1e-9)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("text", "machine"), default="text")
    common.add_argument("--output", default=None, help="write the report to this path")

    p = argparse.ArgumentParser(prog="metriclie", description="Metric Lie algebra laboratory.")
    sub = p.add_subparsers(dest="command", required=True)
    a = sub.add_parser("analyze", parents=[common], help="structure, homogeneous structure and curvature")
    a.add_argument("file")
    a.set_defaults(func=cmd_analyze)
    f = sub.add_parser("find-cyclic", parents=[common], help="search for a cyclic metric")
    f.add_argument("file")
    f.add_argument("--restarts", type=int, default=32)
    f.add_argument("--iters", type=int, default=500)
    f.set_defaults(func=cmd_find_cyclic)
    c = sub.add_parser("classify", parents=[common], help="identify a cyclic metric Lie algebra")
    c.add_argument("file")
    c.set_defaults(func=cmd_classify)
    k = sub.add_parser("catalog", parents=[common], help="write a catalog family as an input document")
    k.add_argument("spec", nargs="+", help="TAG PARAMS... with ':' between groups and '+' between factors")
    k.set_defaults(func=cmd_catalog)
    s = sub.add_parser("selftest", parents=[common], help="run the acceptance suite")
    s.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except io.ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except UnsupportedError as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (NotCyclicError, ClassificationFailed) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (ValidationError, DimensionError) as exc:
        defects = getattr(exc, "defects", {})
        extra = f" {defects}" if defects else ""
        print(f"validation failed: {exc}{extra}", file=sys.stderr)
        return EXIT_INPUT if args.command == "catalog" else EXIT_VALIDATION
    except MetricLieError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
