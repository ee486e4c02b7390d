"""
Command-line front end.

    quintuple verify finite --m-max 25
    quintuple verify quintuple --order 60 --format json
    quintuple verify qdixon --m-max 10 --trials 50 --seed 42
    quintuple expand "[q;q]" --order 7
    quintuple coeff "[q,x,q/x;q] [q*x^2,q/x^2;q^2]" --q 5 --x 3

Exit codes: 0 every check passed, 1 some verification failed, 2 usage or
configuration error.
"""

import argparse
import logging
import sys
from contextlib import nullcontext
from typing import Optional, Sequence, TextIO

import pandas as pd
from pydantic import ValidationError

from quintuple.algebra import AlgebraError
from quintuple.expr import ExpressionSyntaxError, parse_product_expr
from quintuple.identities import Mutation, UnsupportedMutation
from quintuple.qseries import QSeriesError
from quintuple.schema import CoefficientRecord, CommandConfig, IdentityId, VerificationReport
from quintuple.service import (
    Check,
    InvalidCheck,
    VerificationService,
    VerificationServiceError,
    coefficient_of,
    coefficient_records,
    expand_products,
)

logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

VERIFY_TARGETS: dict[str, IdentityId] = {
    "finite": IdentityId.FINITE_QUINTUPLE,
    "bilateral": IdentityId.BILATERAL,
    "substitution": IdentityId.SUBSTITUTION_RELATION,
    "quintuple": IdentityId.QUINTUPLE_SERIES,
    "relation": IdentityId.PRODUCT_RELATION,
    "qdixon": IdentityId.QDIXON_SAMPLED,
    "qdixon-specialized": IdentityId.QDIXON_SPECIALIZED,
    "dixon-limit": IdentityId.DIXON_LIMIT,
    "dixon-term-match": IdentityId.DIXON_TERM_MATCH,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--order", type=int, default=30, help="q-truncation order (default 30)")
    common.add_argument("--out", default=None, help="write output to PATH instead of stdout")
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")

    parser = argparse.ArgumentParser(
        prog="quintuple",
        description="Exact verification of the finite quintuple product identity and its relatives.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    verify = commands.add_parser("verify", parents=[common], help="run a verification suite")
    verify.add_argument("target", choices=sorted(VERIFY_TARGETS))
    verify.add_argument("--m", type=int)
    verify.add_argument("--n", type=int, help="n, or the power N in M = q^-N for qdixon-specialized")
    verify.add_argument("--k", type=int)
    verify.add_argument("--m-max", type=int, default=10)
    verify.add_argument("--n-max", type=int, default=10)
    verify.add_argument("--trials", type=int, default=50)
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--format", choices=["text", "json"], default="text")
    verify.add_argument(
        "--no-timing", action="store_true", help="report elapsed_ms as 0 for reproducible output"
    )
    verify.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    verify.add_argument(
        "--mutate", choices=[str(m) for m in Mutation], default=None,
        help="inject a negative-control mutation",
    )

    for name, help_text in (
        ("expand", "expand a product of brackets to the truncation order"),
        ("coeff", "print one coefficient of a product of brackets"),
    ):
        sub = commands.add_parser(name, parents=[common], help=help_text)
        sub.add_argument("expr", help='bracket expression, e.g. "[q,x,q/x;q]"')
        sub.add_argument("--format", choices=["text", "json", "csv"], default="text")
        if name == "coeff":
            sub.add_argument("--q", dest="q_exp", type=int, required=True)
            sub.add_argument("--x", dest="x_exp", type=int, required=True)
    return parser


def parse_args(argv: Sequence[str]) -> CommandConfig:
    parser = build_parser()
    args = parser.parse_args(list(argv))
    values = vars(args)
    target = values.pop("target", None)
    if target is not None:
        values["identity"] = VERIFY_TARGETS[target]
    values["mutation"] = values.pop("mutate", None)
    try:
        return CommandConfig(**{k: v for k, v in values.items() if v is not None})
    except ValidationError as e:
        messages = "; ".join(err["msg"] for err in e.errors())
        parser.error(messages)


def _range_or_single(value: Optional[int], upper: int, lower: int = 0) -> range:
    return range(value, value + 1) if value is not None else range(lower, upper + 1)


def _summand_indices(k: Optional[int], lower: int, upper: int, single: bool) -> list[int]:
    # a fixed k on a single cell is validated by Check.build; on a grid it filters
    if k is not None and single:
        return [k]
    return [j for j in range(lower, upper + 1) if k is None or j == k]


def build_checks(config: CommandConfig) -> list[Check]:
    checks = _grid_checks(config)
    if not checks:
        raise InvalidCheck(f"No {config.identity} checks match the given parameters")
    return checks


def _grid_checks(config: CommandConfig) -> list[Check]:
    identity = config.identity
    build = Check.build
    mutation = config.mutation
    ms = _range_or_single(config.m, config.m_max)
    ns = _range_or_single(config.n, config.n_max)
    single_mn = config.m is not None and config.n is not None
    match identity:
        case IdentityId.FINITE_QUINTUPLE | IdentityId.DIXON_LIMIT:
            return [build(identity, mutation, m=m) for m in ms]
        case IdentityId.BILATERAL:
            return [build(identity, mutation, m=m, n=n) for m in ms for n in ns]
        case IdentityId.SUBSTITUTION_RELATION:
            return [
                build(identity, m=m, n=n, k=k)
                for m in ms
                for n in ns
                for k in _summand_indices(config.k, -m, n, single_mn)
            ]
        case IdentityId.QUINTUPLE_SERIES | IdentityId.PRODUCT_RELATION:
            return [build(identity, mutation, order=config.order)]
        case IdentityId.QDIXON_SAMPLED:
            return [build(identity, m=m, trials=config.trials, seed=config.seed) for m in ms]
        case IdentityId.QDIXON_SPECIALIZED:
            powers = _range_or_single(config.n, config.n_max, lower=1)
            return [
                build(identity, m=m, power=power, trials=config.trials, seed=config.seed)
                for m in ms
                for power in powers
            ]
        case IdentityId.DIXON_TERM_MATCH:
            return [
                build(identity, m=m, k=k)
                for m in ms
                for k in _summand_indices(config.k, 0, m, config.m is not None)
            ]
    raise VerificationServiceError(f"Unknown identity {identity}")


def render_report_text(report: VerificationReport) -> str:
    params = " ".join(f"{key}={value}" for key, value in report.params.items())
    metrics = report.metrics
    line = (
        f"{report.status.upper()} {report.identity} {params} "
        f"terms={metrics.terms} q_deg={metrics.max_q_deg} x_deg={metrics.max_x_deg} "
        f"{metrics.elapsed_ms:.1f}ms"
    )
    if report.witness is not None:
        line += f"\n    witness: {report.witness.model_dump_json()}"
    return line


def write_reports(reports: Sequence[VerificationReport], fmt: str, stream: TextIO):
    for report in reports:
        stream.write(report.model_dump_json() if fmt == "json" else render_report_text(report))
        stream.write("\n")


def write_records(records: Sequence[CoefficientRecord], fmt: str, stream: TextIO):
    if fmt == "csv":
        frame = pd.DataFrame(
            [record.model_dump() for record in records], columns=["q_exp", "x_exp", "coeff"]
        )
        frame.to_csv(stream, index=False, lineterminator="\n")
        return
    for record in records:
        if fmt == "json":
            stream.write(record.model_dump_json())
        else:
            stream.write(f"{record.q_exp} {record.x_exp} {record.coeff}")
        stream.write("\n")


def run(config: CommandConfig) -> int:
    """
    Executes a parsed command and writes its output. Returns the exit code.
    """
    try:
        if config.command == "verify":
            checks = build_checks(config)
            service = VerificationService(timing=not config.no_timing)
            reports = service.run_all(checks, jobs=config.jobs)
            with _output(config) as stream:
                write_reports(reports, config.format, stream)
            failed = [r for r in reports if not r.passed]
            if failed:
                logger.warning("%d of %d checks failed", len(failed), len(reports))
                return EXIT_FAIL
            return EXIT_PASS

        specs = parse_product_expr(config.expr)
        if config.command == "expand":
            records = coefficient_records(expand_products(specs, config.order))
        else:
            records = [coefficient_of(specs, config.q_exp, config.x_exp, config.order)]
        with _output(config) as stream:
            write_records(records, config.format, stream)
        return EXIT_PASS
    except (
        ExpressionSyntaxError,
        QSeriesError,
        AlgebraError,
        UnsupportedMutation,
        VerificationServiceError,
        OSError,
    ) as e:
        print(f"quintuple: error: {e}", file=sys.stderr)
        return EXIT_USAGE


def _output(config: CommandConfig):
    if config.out is None:
        return nullcontext(sys.stdout)
    return open(config.out, "w", encoding="utf-8", newline="")


def main(argv: Optional[Sequence[str]] = None):
    config = parse_args(sys.argv[1:] if argv is None else argv)
    logging.basicConfig(
        level=logging.DEBUG if config.verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    sys.exit(run(config))


if __name__ == "__main__":
    main()
