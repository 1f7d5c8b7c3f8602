# import dependencies
import argparse
import json
import pathlib
import sys
import time
import typing

from .arithmetic import divample, ecurve, htpverify, ideals, nfcore
from .utils import errors
from .utils.constants import (
    DEF_EXIT_ERROR,
    DEF_EXIT_NO_WITNESS,
    DEF_MIN_PRECISION,
    DEF_OUTPUT_FORMATS,
)
from .utils.funcs import parse_int
from .utils.reports import Report
from .workbench import Workbench
from . import suite


class _Parser(argparse.ArgumentParser):
    """Parser whose usage errors surface as :class:`UnknownCommand`."""

    def error(self, message: str) -> typing.NoReturn:  # type: ignore[override]
        raise errors.UnknownCommand(f"{self.prog}: {message}")


def _element(K: nfcore.NumberField, text: str) -> nfcore.FieldElement:
    """Coefficients in the basis 1, θ, ..., comma separated; each an integer or p/q."""
    return K.element([part for part in text.split(",") if part.strip()])


def _indices(text: str) -> list[int]:
    """``1-12`` or ``1,5,10``."""
    if "-" in text.strip()[1:]:
        lo, hi = text.split("-", 1)
        return list(range(parse_int(lo), parse_int(hi) + 1))
    return [parse_int(part) for part in text.split(",") if part.strip()]


def _precision(text: str) -> int:
    bits = parse_int(text)
    if bits < DEF_MIN_PRECISION:
        raise argparse.ArgumentTypeError(f"precision must be at least {DEF_MIN_PRECISION} bits")  # noqa E501
    return bits


def _positive(text: str) -> int:
    value = parse_int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="htp-lab", description="Number field, elliptic curve and definability workbench")  # noqa E501
    parser.add_argument("--config", default=None, help="workbench JSON configuration")
    parser.add_argument("--format", choices=DEF_OUTPUT_FORMATS, default=None, help="report format")  # noqa E501
    parser.add_argument("--max-index", type=_positive, default=None, help="largest multiple index")  # noqa E501
    parser.add_argument("--precision", type=_precision, default=None, help="starting bits of root isolation")  # noqa E501
    parser.add_argument("--jobs", type=int, default=1, help="worker processes for the suite")  # noqa E501
    groups = parser.add_subparsers(dest="group", parser_class=_Parser)

    field = groups.add_parser("field").add_subparsers(dest="action", parser_class=_Parser)
    check = field.add_parser("check")
    check.add_argument("--field", required=True)

    ideal = groups.add_parser("ideal").add_subparsers(dest="action", parser_class=_Parser)
    for name in ("factor", "wn"):
        sub = ideal.add_parser(name)
        sub.add_argument("--field", required=True)
        sub.add_argument("--x", required=True, help="coefficients, e.g. 1/2,1/2")

    curve = groups.add_parser("curve").add_subparsers(dest="action", parser_class=_Parser)
    eds = curve.add_parser("eds")
    eds.add_argument("--curve", required=True)
    eds.add_argument("--indices", default="1-10")

    lemma = groups.add_parser("lemma").add_subparsers(dest="action", parser_class=_Parser)
    ec2 = lemma.add_parser("ec2")
    ec2.add_argument("--curve", required=True)
    ec2.add_argument("--stability", choices=["empirical", "formula"], default=None)
    ec2.add_argument("--cap", type=int, default=8)
    ec3 = lemma.add_parser("ec3")
    ec3.add_argument("--curve", required=True)
    ec3.add_argument("--xi", required=True)
    ec3.add_argument("--sharpen", action="store_true")
    ec4 = lemma.add_parser("ec4")
    ec4.add_argument("--curve", required=True)
    ec4.add_argument("--m", type=int, required=True)
    ec4.add_argument("--n", type=int, required=True)
    dl = lemma.add_parser("dl")
    dl.add_argument("--field", required=True)
    dl.add_argument("--xi", required=True)
    dl.add_argument("--u", required=True)
    dl.add_argument("--ell", type=int, default=1)

    sets = groups.add_parser("divample").add_subparsers(dest="action", parser_class=_Parser)  # noqa E501
    audit = sets.add_parser("check")
    audit.add_argument("--set", required=True)
    audit.add_argument("--xs", default="1-12", help="rational integers to audit")
    audit.add_argument("--samples", type=int, default=4)

    torus = groups.add_parser("torus").add_subparsers(dest="action", parser_class=_Parser)
    analyze = torus.add_parser("analyze")
    analyze.add_argument("--K", required=True)
    analyze.add_argument("--L", required=True)
    analyze.add_argument("--KL", required=True)

    htp = groups.add_parser("htp").add_subparsers(dest="action", parser_class=_Parser)
    witness = htp.add_parser("witness")
    witness.add_argument("--field", required=True)
    witness.add_argument("--xi", required=True)
    witness.add_argument("--out", default=None, help="write the witness JSON here")
    verify = htp.add_parser("verify")
    verify.add_argument("--witness", required=True)

    run_suite = groups.add_parser("suite")
    run_suite.add_argument("--items", default=None, help="e.g. 1,2,10")
    return parser


def _field_check(wb: Workbench, args: argparse.Namespace) -> Report:
    K = wb.field(args.field)
    report = Report("field check", {"field": args.field})
    report.results.update(K.to_dict())
    report.results["unit_rank"] = K.unit_rank
    report.results["minkowski_bound"] = round(nfcore.minkowski_bound(K), 6)
    report.results["class_number_verified"] = ideals.verify_class_number(K, wb.caps.generator_cap)  # noqa E501
    report.results["strategy"] = divample.strategy_classification(K).value
    return report


def _ideal(wb: Workbench, args: argparse.Namespace) -> Report:
    K = wb.field(args.field)
    x = _element(K, args.x)
    report = Report(f"ideal {args.action}", {"field": args.field, "x": str(x)})
    if args.action == "factor":
        factorization = ideals.factor_element(x)
        report.add_table("factorization", factorization.to_frame())
        report.results["norm"] = str(factorization.norm)
    else:
        wn, wd = ideals.weak_num_denom(x, wb.caps.generator_cap)
        report.results.update({"wn": str(wn), "wd": str(wd), "h": K.class_number})
    return report


def _curve_eds(wb: Workbench, args: argparse.Namespace) -> Report:
    E = wb.curve(args.curve)
    report = Report("curve eds", {"curve": args.curve, "indices": args.indices})
    report.add_table("eds", ecurve.eds_table(E, _indices(args.indices)))
    report.results["torsion_order"] = E.torsion_order
    return report


def _lemma(wb: Workbench, args: argparse.Namespace) -> Report:
    report = Report(f"lemma {args.action}", {k: v for k, v in vars(args).items() if k not in ("group", "action")})  # noqa E501
    if args.action == "dl":
        K = wb.field(args.field)
        xi, u = _element(K, args.xi), _element(K, args.u)
        report.results["product"] = str(htpverify.dl_product(xi, args.ell, K.degree))
        report.results["condition"] = htpverify.dl_condition(xi, u, args.ell, K.degree)
        report.results["bound"] = htpverify.dl_bound(
            xi, u, args.ell, K.degree, wb.caps.precision, wb.caps.precision_cap
        )
        return report
    E = wb.curve(args.curve)
    if args.action == "ec2":
        scan = ecurve.multiplier_scan(E, wb.caps.scan_cap, args.stability)
        report.results.update({k: v for k, v in scan.to_dict().items() if k != "evidence"})  # noqa E501
        report.add_table("evidence", scan.evidence)
        table = ecurve.divisibility_biconditional_check(E, scan.r, args.cap)
        report.add_table("biconditional", table)
        report.results["exceptions"] = int((~table["agree"]).sum())
    elif args.action == "ec3":
        xi = _element(E.field, args.xi)
        n = ecurve.lemma_ec3_multiple(E, xi, sharpen=args.sharpen, order_cap=wb.caps.order_cap)  # noqa E501
        report.results.update({"n": n, "wd": str(ecurve.weak_denominator_of_multiple(E, n))})  # noqa E501
    else:
        q, holds = ecurve.lemma_ec4_check(E, args.m, args.n)
        report.results.update({"q": q, "holds": holds})
    return report


def _divample_check(wb: Workbench, args: argparse.Namespace) -> Report:
    A = wb.divample(args.set)
    xs = [A.field(k) for k in _indices(args.xs)]
    report = Report("divample check", {"set": args.set, "xs": args.xs})
    report.results.update(A.to_dict())
    table = divample.audit(A, xs, args.samples, wb.caps.max_index)
    report.add_table("audit", table)
    report.results["all_ok"] = bool(table["ok"].all())
    report.cap_exhausted = not report.results["all_ok"]
    return report


def _torus_analyze(wb: Workbench, args: argparse.Namespace) -> Report:
    torus = divample.torus_rank_analysis(wb.field(args.K), wb.field(args.L), wb.field(args.KL))  # noqa E501
    report = Report("torus analyze", {"K": args.K, "L": args.L, "KL": args.KL})
    report.results.update(torus.to_dict())
    return report


def _htp(wb: Workbench, args: argparse.Namespace) -> Report:
    if args.action == "witness":
        K, E, A = wb.pipeline(args.field)
        xi = _element(K, args.xi)
        verdict = htpverify.integrality_verdict(xi, E, A, wb.caps)
        report = Report("htp witness", {"field": args.field, "xi": str(xi)})
        report.results.update(verdict.to_dict())
        if not verdict.certified:
            report.cap_exhausted = True
            report.exit_code = DEF_EXIT_NO_WITNESS
        elif args.out is not None and verdict.witness is not None:
            pathlib.Path(args.out).write_text(json.dumps(verdict.witness.to_json(), sort_keys=True, indent=2))  # noqa E501
        return report
    path = pathlib.Path(args.witness)
    try:
        document = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise errors.ConfigParse(f"cannot read witness file {path}: {exc}")
    try:
        field_label = document["field"]
    except (KeyError, TypeError):
        raise errors.ConfigParse(f"witness file {path} names no field")
    K, E, A = wb.pipeline(field_label)
    witness = htpverify.Witness.from_json(document, K)
    trace = htpverify.verify_witness(witness.xi, witness, E, A, wb.caps)
    report = Report("htp verify", {"witness": str(path), "field": field_label})
    report.results.update(trace.to_dict())
    if not trace.verdict:
        report.exit_code = DEF_EXIT_NO_WITNESS
    return report


def _suite(wb: Workbench, args: argparse.Namespace) -> Report:
    items = _indices(args.items) if args.items else None
    overrides = {"max_index": args.max_index, "precision": args.precision}
    table = suite.run_suite(items, args.config, args.jobs, overrides)
    report = Report("suite", {"items": args.items or "all", "jobs": args.jobs})
    report.add_table("acceptance", table)
    report.results["passed"] = int(table["passed"].sum())
    report.results["failed"] = int((~table["passed"]).sum())
    if report.results["failed"]:
        report.exit_code = DEF_EXIT_ERROR
    return report


HANDLERS: dict[str, typing.Callable[[Workbench, argparse.Namespace], Report]] = {
    "field": _field_check,
    "ideal": _ideal,
    "curve": _curve_eds,
    "lemma": _lemma,
    "divample": _divample_check,
    "torus": _torus_analyze,
    "htp": _htp,
    "suite": _suite,
}
"""Handler of each command group."""


def _execute(argv: typing.Optional[list[str]]) -> tuple[int, Report, str]:
    args = build_parser().parse_args(argv)
    if args.group is None or (args.group != "suite" and getattr(args, "action", None) is None):  # noqa E501
        raise errors.UnknownCommand("expected a command, see `htp-lab --help`")
    wb = Workbench(args.config, max_index=args.max_index, precision=args.precision)
    start_time = time.perf_counter()
    report = HANDLERS[args.group](wb, args)
    report.seconds = time.perf_counter() - start_time
    return report.exit_code, report, args.format or wb.config.output_format


def run(argv: typing.Optional[list[str]] = None) -> tuple[int, Report]:
    """
    Parse a command line, run the command and build its report.

    Parameters
    ----------
    argv : list[str], optional
        Arguments without the program name, by default sys.argv[1:]

    Returns
    -------
    tuple[int, Report]
        The exit code (0 success, 2 bounded negative) and the report.

    Raises
    ------
    UnknownCommand
        The command line does not name a known command.
    ConfigParse
        The configuration cannot be read.
    """
    code, report, _ = _execute(argv)
    return code, report


def main(argv: typing.Optional[list[str]] = None) -> int:
    try:
        code, report, fmt = _execute(argv)
    except errors.HtpLabError as exc:
        print(str(exc), file=sys.stderr)
        return DEF_EXIT_ERROR
    print(report.render(fmt))
    return code
