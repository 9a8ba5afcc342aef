"""
Command-line front end.

    python -m app.main --input doc.json check A
    python -m app.main --input doc.json disjoint A B [--cover-only]
    python -m app.main --input doc.json complex [--dim-cap N]
    python -m app.main --input doc.json oracle [A] [--max-len N]

Exit codes: 0 the command produced a verdict (true or false, see the
report), 2 invalid input or a failed precondition, 3 a resource limit or
integer overflow.
"""

import argparse
import sys
from typing import List, Optional, Tuple

from pydantic import ValidationError

from app.core.config import Settings, get_settings
from app.core.errors import (
    EmptySupport,
    InputError,
    IntersectionOverflow,
    InvalidSettings,
    LetterOutOfRange,
    LimitExceeded,
    NotEmbeddable,
    NotEmbeddableInM,
    RankMismatch,
    SpheresError,
    ZeroClass,
)
from app.core.logging import configure_logging, get_logger
from app.services.decision import disjoint_in_M, disjoint_in_cover, embeddable_in_cover, embeddable_in_M
from app.services.oracle import cross_check, random_class
from app.services.sphere_class import is_null_homologous
from app.services.splitting_complex import build_complex
from app.utils.documents import InputDocument, dumps, parse_input
from app.utils.reports import (
    CheckReport,
    DisjointReport,
    ErrorReport,
    OracleReport,
    certificate_to_json,
    complex_report,
    cross_check_to_json,
    render_text,
)

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_LIMIT = 3

INVALID_ERRORS = (
    InputError,
    ZeroClass,
    NotEmbeddable,
    NotEmbeddableInM,
    RankMismatch,
    LetterOutOfRange,
    EmptySupport,
)
LIMIT_ERRORS = (IntersectionOverflow, LimitExceeded)

# random instances for `oracle` without a class name
ORACLE_SUPPORT = 3
ORACLE_RADIUS = 2
ORACLE_WEIGHT = 2


def _bounded(minimum: int):
    def parse(text: str) -> int:
        value = int(text)
        if value < minimum:
            raise argparse.ArgumentTypeError(f"must be >= {minimum}")
        return value

    return parse


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "text"], default="json")
    common.add_argument("--certificate", action="store_true", help="include full witnesses")
    common.add_argument("--overlap-radius", type=_bounded(0), default=None)
    common.add_argument("--dim-cap", type=_bounded(1), default=None)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--threads", type=_bounded(1), default=None)
    common.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"], default=None)

    settings = get_settings()
    parser = argparse.ArgumentParser(
        prog=settings.app_name,
        description="Decide embedded and disjoint sphere representatives of classes in pi_2(#_k S^2 x S^1).",
    )
    parser.add_argument("--input", "-i", default="-", help="input document (default: standard input)")
    parser.add_argument("--version", action="version", version=f"%(prog)s {settings.app_version}")
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", parents=[common], help="embeddability in the cover and in M")
    check.add_argument("name")

    disjoint = sub.add_parser("disjoint", parents=[common], help="disjointness in M (or the cover)")
    disjoint.add_argument("names", nargs=2)
    disjoint.add_argument("--cover-only", action="store_true")

    sub.add_parser("complex", parents=[common], help="splitting complex spanned by all classes")

    oracle = sub.add_parser("oracle", parents=[common], help="cross-check against exhaustive path search")
    oracle.add_argument("name", nargs="?")
    oracle.add_argument("--max-len", type=_bounded(0), default=None)
    oracle.add_argument("--samples", type=_bounded(1), default=None)
    return parser


def effective_settings(flags: argparse.Namespace) -> Settings:
    """Settings with per-invocation overrides from the command line."""
    update = {}
    for key in ("overlap_radius", "dim_cap", "seed", "threads", "log_level"):
        value = getattr(flags, key, None)
        if value is not None:
            update[key] = value
    settings = get_settings().model_copy(update=update)
    # model_copy skips validation
    return Settings.model_validate(settings.model_dump())


def _render(payload: dict, fmt: str) -> str:
    return dumps(payload) if fmt == "json" else render_text(payload)


def run(command: str, flags: argparse.Namespace, document: InputDocument) -> Tuple[int, str]:
    """
    Execute one subcommand against a parsed document.

    Returns:
        Exit code and rendered report
    """
    settings = effective_settings(flags)
    fmt = getattr(flags, "format", "json")
    detail = getattr(flags, "certificate", False)
    radius = settings.overlap_radius
    threads = settings.threads

    try:
        if command == "check":
            a = document.get(flags.name)
            cover = embeddable_in_cover(a, flags.name)
            manifold = embeddable_in_M(a, radius, threads)
            logger.info("check", name=flags.name, verdict=manifold.verdict)
            report = CheckReport(
                name=flags.name,
                verdict=manifold.verdict,
                cover_verdict=cover.verdict,
                certificate=certificate_to_json(manifold.certificate, detail),
                cover_certificate=certificate_to_json(cover.certificate, detail) if detail else None,
            )
        elif command == "disjoint":
            first, second = flags.names
            a, b = document.get(first), document.get(second)
            if flags.cover_only:
                result = disjoint_in_cover(a, b, (first, second))
            else:
                result = disjoint_in_M(a, b, radius, threads, (first, second))
            logger.info("disjoint", names=[first, second], verdict=result.verdict)
            report = DisjointReport(
                names=[first, second],
                scope="cover" if flags.cover_only else "manifold",
                verdict=result.verdict,
                certificate=certificate_to_json(result.certificate, detail),
            )
        elif command == "complex":
            output = build_complex(document.ordered(), settings.dim_cap, radius, threads)
            report = complex_report(output, detail)
        elif command == "oracle":
            checks = []
            if flags.name is not None:
                checks.append(cross_check_to_json(flags.name, cross_check(document.get(flags.name), flags.max_len)))
            else:
                samples = flags.samples or settings.oracle_samples
                seed = settings.seed
                while len(checks) < samples:
                    a = random_class(document.rank, ORACLE_SUPPORT, ORACLE_RADIUS, ORACLE_WEIGHT, seed)
                    if not is_null_homologous(a):
                        checks.append(cross_check_to_json(f"seed:{seed}", cross_check(a, flags.max_len)))
                    seed += 1
            report = OracleReport(verdict=all(c["agree"] for c in checks), checks=checks)
        else:
            raise ValueError(f"unknown command {command!r}")
    except INVALID_ERRORS as e:
        return EXIT_INVALID, _render(_error_payload(e), fmt)
    except LIMIT_ERRORS as e:
        return EXIT_LIMIT, _render(_error_payload(e), fmt)

    return EXIT_OK, _render(report.model_dump(exclude_none=True), fmt)


def _error_payload(e: SpheresError) -> dict:
    return ErrorReport(error=type(e).__name__, message=str(e), path=getattr(e, "path", None)).model_dump(
        exclude_none=True
    )


def _read_input(source: str) -> bytes:
    if source == "-":
        return sys.stdin.buffer.read()
    with open(source, "rb") as handle:
        return handle.read()


def _load_settings() -> None:
    try:
        get_settings()
    except ValidationError as e:
        first = e.errors()[0]
        field = str(first["loc"][0]) if first["loc"] else ""
        raise InvalidSettings(first["msg"], f"SPHERES_{field.upper()}" if field else None) from e


def main(argv: Optional[List[str]] = None) -> int:
    try:
        _load_settings()
    except InvalidSettings as e:
        print(_render(_error_payload(e), "json"))
        return EXIT_INVALID

    parser = build_parser()
    flags = parser.parse_args(argv)
    configure_logging(effective_settings(flags).log_level)

    try:
        document = parse_input(_read_input(flags.input))
    except OSError as e:
        print(_render({"error": "InputUnreadable", "message": str(e)}, flags.format))
        return EXIT_INVALID
    except INVALID_ERRORS as e:
        print(_render(_error_payload(e), flags.format))
        return EXIT_INVALID
    except LIMIT_ERRORS as e:
        print(_render(_error_payload(e), flags.format))
        return EXIT_LIMIT

    code, output = run(flags.command, flags, document)
    print(output)
    return code


if __name__ == "__main__":
    sys.exit(main())
