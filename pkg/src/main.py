import argparse
import logging
import sys
from pathlib import Path

import questionary
from colorama import Fore, Style, init
from dotenv import load_dotenv

from axioms.priceability import verify_price_system
from data.errors import BudgetingError, DomainError, ParameterError, SearchBoundExceeded, StabilizationError, StructuralError
from data.models import Election, RankedElection, TieBreak, UtilityScheme, VerdictStatus
from data.rational import format_rational, parse_rational
from fixtures.registry import list_fixtures, load_document, load_fixture
from tools.io import dumps, outcome_to_document, parse_instance, parse_outcome, parse_price_system, serialize_instance, trace_to_document, verdict_to_document
from utils.config import get_search_bounds
from utils.display import print_error, print_fixtures, print_outcomes, print_trace, print_verdict
from utils.progress import progress
from utils.registry import AXIOM_ORDER, RULE_ORDER, check_axiom, run_rule

# Load environment variables from .env file
load_dotenv()

init(autoreset=True)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_VIOLATED = 3
EXIT_INCONCLUSIVE = 4
EXIT_REFUSED = 5

VERDICT_EXIT = {
    VerdictStatus.SATISFIED: EXIT_OK,
    VerdictStatus.VIOLATED: EXIT_VIOLATED,
    VerdictStatus.INCONCLUSIVE: EXIT_INCONCLUSIVE,
}

QUESTIONARY_STYLE = questionary.Style(
    [
        ("selected", "fg:green bold"),
        ("pointer", "fg:green bold"),
        ("highlighted", "fg:green"),
        ("answer", "fg:green bold"),
    ]
)


def load_instance(reference: str) -> Election | RankedElection:
    """A path to an instance document, or `fixtures/<id>` / `fixture:<id>` for a registered fixture."""
    path = Path(reference)
    if path.is_file():
        return parse_instance(path.read_bytes())
    for prefix in ("fixtures/", "fixture:"):
        if reference.startswith(prefix):
            return load_fixture(reference[len(prefix):].removesuffix(".json")).election
    raise StructuralError(f"no such instance file '{reference}'")


def _choose(message: str, order: list[tuple[str, str]]) -> str | None:
    """Ask for a rule or axiom on an interactive terminal; None when that is not possible."""
    if not sys.stdin.isatty():
        return None
    return questionary.select(
        message,
        choices=[questionary.Choice(display, value=value) for display, value in order],
        style=QUESTIONARY_STYLE,
    ).ask()


##### Subcommands #####

def command_run(args) -> int:
    rule = args.rule or _choose("Select the rule to run:", RULE_ORDER)
    if not rule:
        print_error("--rule is required when not running interactively")
        return EXIT_USAGE
    tie_break = TieBreak(args.tie_break)
    scheme = UtilityScheme(args.utilities)

    if args.all_fixtures:
        return _run_all_fixtures(rule, tie_break, scheme, args)
    if not args.instance:
        print_error("an INSTANCE (or --all-fixtures) is required")
        return EXIT_USAGE

    instance = load_instance(args.instance)
    result = run_rule(rule, instance, tie_break, args.phragmen_skip, scheme, with_ledger=bool(args.trace))
    e = result.election
    trace_document = None
    if result.trace is not None:
        trace_document = trace_to_document(e, result.outcome, result.trace, result.ledger)
    if args.trace and trace_document is not None:
        Path(args.trace).write_text(dumps(trace_document) + "\n", encoding="utf-8")

    if args.json:
        document = {"rule": rule, "outcomes": [outcome_to_document(e, W) for W in result.outcomes]}
        if trace_document is not None:
            document["trace"] = trace_document
        if result.eps is not None:
            document["eps"] = format_rational(result.eps)
        print(dumps(document))
        return EXIT_OK

    print_outcomes(rule, e, result.outcomes)
    if result.trace is not None:
        print_trace(result.trace)
    if result.eps is not None:
        print(f"\nε used: {Fore.YELLOW}{format_rational(result.eps)}{Style.RESET_ALL}")
    return EXIT_OK


def _run_all_fixtures(rule: str, tie_break: TieBreak, scheme: UtilityScheme, args) -> int:
    documents = {}
    for fixture_id in list_fixtures():
        progress.reset()
        fixture = load_fixture(fixture_id)
        try:
            result = run_rule(rule, fixture.election, tie_break, args.phragmen_skip, scheme)
        except (DomainError, ParameterError, SearchBoundExceeded) as error:
            documents[fixture_id] = {"skipped": str(error)}
            if not args.json:
                print(f"{Fore.YELLOW}{fixture_id}: skipped ({error}){Style.RESET_ALL}")
            continue
        documents[fixture_id] = {"outcomes": [outcome_to_document(result.election, W) for W in result.outcomes]}
        if not args.json:
            print_outcomes(rule, result.election, result.outcomes)
    if args.json:
        print(dumps({"rule": rule, "fixtures": documents}))
    return EXIT_OK


def command_check(args) -> int:
    axiom = args.axiom or _choose("Select the axiom to check:", AXIOM_ORDER)
    if not axiom:
        print_error("--axiom is required when not running interactively")
        return EXIT_USAGE
    instance = load_instance(args.instance)
    W = parse_outcome(args.outcome, instance)
    bounds = get_search_bounds(args.bound_n, args.bound_m)
    alpha = parse_rational(args.alpha, "--alpha") if args.alpha is not None else None
    verdict = check_axiom(
        axiom,
        instance,
        W,
        bounds=bounds,
        alpha=alpha,
        scheme=UtilityScheme(args.utilities),
        strict_quota=args.strict_quota,
        up_to_one=not args.strong,
    )
    if args.json:
        print(dumps(verdict_to_document(verdict)))
    else:
        print_verdict(verdict)
    return VERDICT_EXIT[verdict.status]


def command_fixtures(args) -> int:
    if args.action == "list":
        rows = []
        for fixture_id in list_fixtures():
            fixture = load_fixture(fixture_id)
            ballots = "ranking" if isinstance(fixture.election, RankedElection) else "cardinal"
            rows.append([fixture_id, ballots, fixture.election.n, fixture.election.m, len(fixture.expectations)])
        if args.json:
            print(dumps({"fixtures": [row[0] for row in rows]}))
        else:
            print_fixtures(rows)
        return EXIT_OK

    if not args.fixture_id:
        print_error("fixtures dump needs a fixture id")
        return EXIT_USAGE
    document = serialize_instance(load_fixture(args.fixture_id).election)
    document["expectations"] = load_document(args.fixture_id).get("expectations", [])
    print(dumps(document))
    return EXIT_OK


def command_certify(args) -> int:
    instance = load_instance(args.instance)
    if isinstance(instance, RankedElection):
        raise ParameterError("certify needs a cardinal instance")
    W = parse_outcome(args.outcome, instance)
    path = Path(args.price_system)
    if not path.is_file():
        raise StructuralError(f"no such price system file '{args.price_system}'")
    system = parse_price_system(path.read_bytes(), instance)
    verdict = verify_price_system(instance, W, system)
    if args.json:
        print(dumps(verdict_to_document(verdict)))
    else:
        print_verdict(verdict)
    return VERDICT_EXIT[verdict.status]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--verbose", action="store_true", help="Log every elected candidate and search step")
    common.add_argument("--json", action="store_true", help="Machine-readable output (rationals as 'p/q')")

    parser = argparse.ArgumentParser(description="Exact proportional participatory budgeting: rules and axiom checks")
    subparsers = parser.add_subparsers(dest="command", required=True)

    run = subparsers.add_parser("run", parents=[common], help="Run a rule on an instance")
    run.add_argument("--rule", choices=[value for _, value in RULE_ORDER])
    run.add_argument("--tie-break", default=TieBreak.INDEX.value, choices=[policy.value for policy in TieBreak])
    run.add_argument("--trace", help="Write the trace document (steps, rounds, payments) to this file")
    run.add_argument("--phragmen-skip", action="store_true", help="Phragmén skips unaffordable candidates instead of stopping")
    run.add_argument("--utilities", default=UtilityScheme.LEX_EXPONENTIAL.value, choices=[scheme.value for scheme in UtilityScheme], help="Utilities derived from rankings for cardinal rules")
    run.add_argument("--all-fixtures", action="store_true", help="Run the rule on every registered fixture")
    run.add_argument("instance", nargs="?")
    run.set_defaults(handler=command_run)

    check = subparsers.add_parser("check", parents=[common], help="Check an outcome against an axiom")
    check.add_argument("--axiom", choices=[value for _, value in AXIOM_ORDER])
    check.add_argument("--alpha", help="Factor for alpha-core (default: the equal-shares guarantee)")
    check.add_argument("--bound-n", type=int, help="Largest voter pool enumerated for groups S")
    check.add_argument("--bound-m", type=int, help="Largest candidate count enumerated for bundles T")
    check.add_argument("--utilities", default=UtilityScheme.LEX_EXPONENTIAL.value, choices=[scheme.value for scheme in UtilityScheme])
    check.add_argument("--strict-quota", action="store_true", help="PSC with |S| > n·ℓ/k")
    check.add_argument("--strong", action="store_true", help="EJR without the up-to-one relaxation")
    check.add_argument("instance")
    check.add_argument("outcome", help="outcome:{c1,c2} or a file")
    check.set_defaults(handler=command_check)

    fixtures = subparsers.add_parser("fixtures", parents=[common], help="List or dump the registered instances")
    fixtures.add_argument("action", choices=["list", "dump"])
    fixtures.add_argument("fixture_id", nargs="?")
    fixtures.set_defaults(handler=command_fixtures)

    certify = subparsers.add_parser("certify", parents=[common], help="Verify a price system (or an equal-shares trace) for an outcome")
    certify.add_argument("instance")
    certify.add_argument("outcome")
    certify.add_argument("price_system")
    certify.set_defaults(handler=command_certify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_:
        return EXIT_USAGE if exit_.code else EXIT_OK

    if args.verbose:
        logging.basicConfig(level=logging.DEBUG, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)

    if not args.json and sys.stderr.isatty():
        progress.start()
    try:
        return args.handler(args)
    except (SearchBoundExceeded, StabilizationError) as error:
        print_error(str(error))
        return EXIT_REFUSED
    except BudgetingError as error:
        print_error(str(error))
        return EXIT_USAGE
    finally:
        progress.stop()


if __name__ == "__main__":
    sys.exit(main())
