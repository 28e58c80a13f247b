"""Command line interface.

Subcommands operate on MLA files (see :mod:`lieweyl.mla`) and print report
records to stdout.  Exit codes: 0 success, 1 domain failure (well-formed
input without the requested structure, or an internal consistency alarm),
2 malformed input (bad files, bad parameters, usage errors).
"""
from __future__ import annotations

import argparse
import sys

import numpy as np

from . import almost_abelian, catalog3d, mla, riemann, weyl
from .algebra import structure_flags, validate
from .errors import InputError, LieweylError, NotAlmostAbelianError
from .mla import MlaDocument, ReportRecord


def _read_document(path: str) -> MlaDocument:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    return mla.parse_mla(text)


def _validate_records(m: riemann.MetricLieAlgebra) -> list[ReportRecord]:
    report = validate(m.algebra)
    flags = structure_flags(m.algebra)
    return [
        ReportRecord("algebra.dim", m.dim),
        ReportRecord("algebra.ok", report.ok),
        ReportRecord("flags.solvable", flags.solvable),
        ReportRecord("flags.nilpotent", flags.nilpotent),
        ReportRecord("flags.abelian", flags.abelian),
        ReportRecord("flags.unimodular", flags.unimodular),
        ReportRecord("flags.derived_dim", flags.derived_dim),
        ReportRecord("flags.center_dim", flags.center_dim),
    ]


def _curvature_records(m: riemann.MetricLieAlgebra) -> list[ReportRecord]:
    table = riemann.levi_civita(m)
    data = riemann.ricci(m)
    records = [
        ReportRecord("ricci.matrix", data.ricci),
        ReportRecord("ricci.besse", riemann.besse_ricci(m)),
        ReportRecord("ricci.scalar", data.scalar),
        ReportRecord("einstein.defect", riemann.einstein_defect(m)),
    ]
    for i in range(m.dim):
        records.append(ReportRecord(f"connection.gamma[{i + 1}]", table.gamma[i]))
    return records


def _weyl_records(m: riemann.MetricLieAlgebra, starts: int, seed: int, tol: float) -> list[ReportRecord]:
    result = weyl.solve_lee_forms(m, starts=starts, seed=seed, tol_root=tol)
    records = [
        ReportRecord("weyl.root_count", len(result.roots)),
        ReportRecord("weyl.infimum", result.infimum),
    ]
    for idx, (root, residual) in enumerate(zip(result.roots, result.residuals)):
        far = weyl.faraday(m, root)
        records.append(ReportRecord(f"weyl.roots[{idx}]", root))
        records.append(ReportRecord(f"weyl.roots[{idx}].residual", residual))
        records.append(ReportRecord(f"weyl.roots[{idx}].closed", far.closed))
        records.append(ReportRecord(f"weyl.roots[{idx}].exact", far.exact))
    return records


def _aa_records(m: riemann.MetricLieAlgebra, hint: np.ndarray | None) -> list[ReportRecord]:
    dec = almost_abelian.decompose(m, hint=hint)
    cls = almost_abelian.classify_weyl_einstein(dec, m)
    records = [
        ReportRecord("aa.normal", dec.normal),
        ReportRecord("aa.skew", dec.skew),
        ReportRecord("aa.sym", dec.sym),
        ReportRecord("aa.unique_ideal", dec.unique_ideal),
        ReportRecord("aa.case", cls.case.value),
        ReportRecord("aa.coefficient", cls.coefficient),
        ReportRecord("aa.root_count", len(cls.lee_forms)),
    ]
    for idx, row in enumerate(dec.ideal_basis):
        records.append(ReportRecord(f"aa.ideal[{idx}]", row))
    for idx, root in enumerate(cls.lee_forms):
        records.append(ReportRecord(f"aa.lee_forms[{idx}]", root))
        records.append(
            ReportRecord(f"aa.lee_forms[{idx}].residual", weyl.weyl_einstein_residual(m, root).norm)
        )
        if m.covector_norm(root) > m.tolerance:
            verdict = almost_abelian.conformal_metric_flatness(dec, m, root)
            records.append(ReportRecord(f"aa.lee_forms[{idx}].ricci_flat", verdict.ricci_flat))
            records.append(ReportRecord(f"aa.lee_forms[{idx}].flat", verdict.flat))
    return records


def _parse_ideal_option(text: str, dim: int) -> np.ndarray:
    rows = []
    for chunk in text.split(";"):
        parts = [p for p in chunk.replace(",", " ").split() if p]
        try:
            rows.append([float(p) for p in parts])
        except ValueError as exc:
            raise InputError(f"cannot parse --ideal entry {chunk!r}") from exc
    arr = np.array(rows, dtype=float)
    if arr.shape != (dim - 1, dim):
        raise InputError(
            f"--ideal needs {dim - 1} rows of {dim} numbers separated by ';', got shape {arr.shape}"
        )
    return arr


def _cmd_validate(args) -> str:
    m = _read_document(args.file).to_metric_lie_algebra()
    return mla.emit_report(_validate_records(m), args.format)


def _cmd_curvature(args) -> str:
    m = _read_document(args.file).to_metric_lie_algebra()
    return mla.emit_report(_curvature_records(m), args.format)


def _cmd_weyl_solve(args) -> str:
    m = _read_document(args.file).to_metric_lie_algebra()
    return mla.emit_report(_weyl_records(m, args.starts, args.seed, args.tol), args.format)


def _cmd_aa_classify(args) -> str:
    m = _read_document(args.file).to_metric_lie_algebra()
    hint = _parse_ideal_option(args.ideal, m.dim) if args.ideal else None
    return mla.emit_report(_aa_records(m, hint), args.format)


def _cmd_report(args) -> str:
    m = _read_document(args.file).to_metric_lie_algebra()
    records = _validate_records(m) + _curvature_records(m)
    records += _weyl_records(m, weyl.DEFAULT_STARTS, weyl.DEFAULT_SEED, weyl.DEFAULT_ROOT_TOL)
    try:
        aa = _aa_records(m, None)
    except NotAlmostAbelianError:
        records.append(ReportRecord("aa.almost_abelian", False))
    else:
        records.append(ReportRecord("aa.almost_abelian", True))
        records += aa
    return mla.emit_report(records, args.format)


_FAMILIES = {
    "abelian": catalog3d.BracketFamily.ABELIAN,
    "sol": catalog3d.BracketFamily.SOL,
    "so2r2": catalog3d.BracketFamily.SO2R2,
    "ridr2": catalog3d.BracketFamily.R_ID_R2,
    "gt": catalog3d.BracketFamily.GT,
    "g0": catalog3d.BracketFamily.GT,
}


def _cmd_catalog3d(args) -> str:
    family = _FAMILIES[args.family]
    t = args.t
    if args.family == "g0":
        if t not in (None, 0.0):
            raise InputError("family g0 fixes t = 0")
        t = 0.0
    elif args.family == "gt":
        if t is None:
            raise InputError("family gt needs --t")
    else:
        if t not in (None, 0.0):
            raise InputError("--t only applies to the gt family")
        t = 0.0

    if args.metric == "std":
        metric = catalog3d.MetricFamily.STD
    elif args.metric == "g":
        metric = catalog3d.MetricFamily.G_MU_NU if args.mu is not None else catalog3d.MetricFamily.G_NU
    elif args.metric == "h":
        metric = catalog3d.MetricFamily.H_MU_NU
    else:
        metric = catalog3d.MetricFamily.M_NU

    point = catalog3d.Family3D(
        family=family,
        metric_family=metric,
        t=float(t),
        mu=float(args.mu) if args.mu is not None else 1.0,
        nu=float(args.nu),
    )
    m = catalog3d.build_family(point)
    verdict = catalog3d.admits_weyl_einstein(point)

    records = [
        ReportRecord("cl3.admits", verdict.admits),
        ReportRecord("cl3.by_table", verdict.by_table),
        ReportRecord("cl3.by_solver", verdict.by_solver),
        ReportRecord("cl3.root_count", len(verdict.lee_forms)),
    ]
    for idx, root in enumerate(verdict.lee_forms):
        records.append(ReportRecord(f"cl3.roots[{idx}]", root))
    if verdict.admits:
        frame = catalog3d.adapted_frame(m)
        records.append(ReportRecord("normalform.kind", frame.kind.value))
        if frame.kind is catalog3d.FrameKind.SIMILARITY:
            records.append(ReportRecord("normalform.k", frame.k))
            records.append(ReportRecord("normalform.l", frame.l))
        else:
            records.append(ReportRecord("normalform.alpha", frame.alpha))
        records.append(ReportRecord("normalform.basis", frame.basis))

    doc = MlaDocument.from_metric_lie_algebra(m)
    comments = "".join(
        f"# {line}\n" for line in mla.emit_report(records, "records").splitlines()
    )
    return mla.emit_mla(doc) + comments


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lieweyl",
        description="Left-invariant curvature and Weyl-Einstein structures on metric Lie algebras.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_file=True):
        if with_file:
            p.add_argument("file", help="MLA document")
        p.add_argument(
            "--format", choices=("text", "records"), default="text",
            help="output style: aligned text or machine-readable records",
        )

    p = sub.add_parser("validate", help="check a document and print structure flags")
    add_common(p)
    p.set_defaults(run=_cmd_validate)

    p = sub.add_parser("curvature", help="connection, Ricci (both routes), scalar, Einstein defect")
    add_common(p)
    p.set_defaults(run=_cmd_curvature)

    p = sub.add_parser("weyl-solve", help="find all Weyl-Einstein Lee forms")
    add_common(p)
    p.add_argument("--starts", type=int, default=weyl.DEFAULT_STARTS)
    p.add_argument("--seed", type=int, default=weyl.DEFAULT_SEED)
    p.add_argument("--tol", type=float, default=weyl.DEFAULT_ROOT_TOL)
    p.set_defaults(run=_cmd_weyl_solve)

    p = sub.add_parser("aa-classify", help="almost abelian decomposition and classification")
    add_common(p)
    p.add_argument(
        "--ideal", default=None,
        help="optional ideal hint: rows separated by ';', numbers by spaces or commas",
    )
    p.set_defaults(run=_cmd_aa_classify)

    p = sub.add_parser("catalog3d", help="emit a 3D catalog member with its verdict")
    p.add_argument("--family", choices=sorted(_FAMILIES), required=True)
    p.add_argument("--t", type=float, default=None)
    p.add_argument("--metric", choices=("std", "g", "h", "m"), required=True)
    p.add_argument("--mu", type=float, default=None)
    p.add_argument("--nu", type=float, default=1.0)
    p.set_defaults(run=_cmd_catalog3d)

    p = sub.add_parser("report", help="full report: flags, curvature, Weyl solve, classification")
    add_common(p)
    p.set_defaults(run=_cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        sys.stdout.write(args.run(args))
    except InputError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return 2
    except LieweylError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return 1
    return 0


def entrypoint() -> None:
    raise SystemExit(main())
