import sys

from colorama import Fore, Style
from tabulate import tabulate

from data.election import total_cost
from data.models import AxiomVerdict, Election, Outcome, RankedElection, RuleTrace, VerdictStatus
from data.rational import format_rational


def _ids(e: Election | RankedElection, W: Outcome) -> str:
    return "{" + ", ".join(sorted(W.selected, key=e.index)) + "}"


def _fraction(value) -> str:
    return str(value) if isinstance(value, int) else format_rational(value)


def print_outcomes(rule: str, e: Election | RankedElection, outcomes: list[Outcome]) -> None:
    """Print one row per outcome (PAV can return several) with its total cost."""
    print(f"\n{Fore.WHITE}{Style.BRIGHT}OUTCOME:{Style.RESET_ALL} [{Fore.CYAN}{rule}{Style.RESET_ALL}] {e.title or ''}")
    table_data = []
    for W in outcomes:
        cost = format_rational(total_cost(W.selected, e)) if isinstance(e, Election) else f"{len(W)}/{e.k} seats"
        table_data.append([f"{Fore.GREEN}{_ids(e, W)}{Style.RESET_ALL}", f"{Fore.YELLOW}{cost}{Style.RESET_ALL}"])
    print(tabulate(table_data, headers=[f"{Fore.WHITE}Selected", "Total cost"], tablefmt="grid", colalign=("left", "right")))


def print_trace(trace: RuleTrace) -> None:
    if trace.steps:
        table_data = []
        for number, step in enumerate(trace.steps, start=1):
            payers = ", ".join(f"{i}:{format_rational(amount)}" for i, amount in sorted(step.payments.items())[:6])
            if len(step.payments) > 6:
                payers += f", ... ({len(step.payments)} payers)"
            tie = ", ".join(step.tie_set) if len(step.tie_set) > 1 else ""
            table_data.append(
                [
                    number,
                    f"{Fore.CYAN}{step.candidate}{Style.RESET_ALL}",
                    f"{Fore.YELLOW}{_fraction(step.rho)}{Style.RESET_ALL}",
                    payers,
                    tie,
                ]
            )
        label = "t" if trace.rule.startswith("phragmen") else "ρ"
        print(f"\n{Fore.WHITE}{Style.BRIGHT}STEPS:{Style.RESET_ALL}")
        print(
            tabulate(
                table_data,
                headers=[f"{Fore.WHITE}#", "Candidate", label, "Payments", "Tied"],
                tablefmt="grid",
                colalign=("right", "left", "right", "left", "left"),
            )
        )
    if trace.rounds:
        table_data = [
            [
                number,
                f"{Fore.YELLOW}{format_rational(round_.beta)}{Style.RESET_ALL}",
                len(round_.group),
                f"{Fore.CYAN}{', '.join(round_.bundle)}{Style.RESET_ALL}",
            ]
            for number, round_ in enumerate(trace.rounds, start=1)
        ]
        print(f"\n{Fore.WHITE}{Style.BRIGHT}COHESIVE GROUPS:{Style.RESET_ALL}")
        print(
            tabulate(
                table_data,
                headers=[f"{Fore.WHITE}#", "β", "|S|", "T"],
                tablefmt="grid",
                colalign=("right", "right", "right", "left"),
            )
        )


def print_verdict(verdict: AxiomVerdict) -> None:
    status_color = {
        VerdictStatus.SATISFIED: Fore.GREEN,
        VerdictStatus.VIOLATED: Fore.RED,
        VerdictStatus.INCONCLUSIVE: Fore.YELLOW,
    }.get(verdict.status, Fore.WHITE)

    verdict_data = [["Axiom", f"{Fore.CYAN}{verdict.axiom}{Style.RESET_ALL}"], ["Status", f"{status_color}{verdict.status.value.upper()}{Style.RESET_ALL}"]]
    if verdict.bounds is not None:
        verdict_data.append(["Bounds", f"n' = {verdict.bounds.max_voters}, m' = {verdict.bounds.max_candidates}"])
    if witness := verdict.witness:
        if witness.voters:
            voters = ", ".join(map(str, witness.voters[:20]))
            if len(witness.voters) > 20:
                voters += f", ... ({len(witness.voters)} voters)"
            verdict_data.append(["Group S", voters])
        if witness.candidates:
            verdict_data.append(["Bundle T", ", ".join(witness.candidates)])
        for label, value in (("θ", witness.theta), ("β", witness.beta)):
            if value is not None:
                verdict_data.append([label, f"{Fore.YELLOW}{format_rational(value)}{Style.RESET_ALL}"])
        if witness.ell is not None:
            verdict_data.append(["ℓ", witness.ell])
        if witness.condition:
            verdict_data.append(["Condition", witness.condition])
        if witness.detail:
            verdict_data.append(["Detail", witness.detail])

    print(f"\n{Fore.WHITE}{Style.BRIGHT}VERDICT:{Style.RESET_ALL}")
    print(tabulate(verdict_data, tablefmt="grid", colalign=("left", "left")))


def print_fixtures(rows: list[list]) -> None:
    print(
        tabulate(
            [[f"{Fore.CYAN}{row[0]}{Style.RESET_ALL}", *row[1:]] for row in rows],
            headers=[f"{Fore.WHITE}Fixture", "Ballots", "n", "m", "Expectations"],
            tablefmt="grid",
            colalign=("left", "left", "right", "right", "right"),
        )
    )


def print_error(message: str) -> None:
    print(f"{Fore.RED}Error: {message}{Style.RESET_ALL}", file=sys.stderr)
