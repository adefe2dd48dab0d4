"""
Command-line surface

    python -m app.cli survey --bound 300000 --stratum A
    python -m app.cli rank --level 11 --prime 47
    python -m app.cli local --quartic c17 --prime 5 --at 17
    python -m app.cli deficiency --level 17 --prime 5
    python -m app.cli verify-examples
    python -m app.cli classno --disc -23
    python -m app.cli conjecture --bound 10000 --residue 1 --modulus 4

Every subcommand prints text by default and the API's JSON with --json.
Exit status: 0 ok, 2 bad input, 1 any other failure (including a failed
example check).
"""

import argparse
import logging
import sys

from pydantic import BaseModel

from app.config import settings
from app.models.deficiency import DeficiencyResponse
from app.models.local import LocalSolveResponse
from app.models.number_theory import ClassNumberResponse, ConjectureResponse
from app.models.rank import RankResponse
from app.models.survey import ExampleCheckModel, SurveyResponse, VerifyExamplesResponse
from app.services.arith import Place, class_number
from app.services.deficiency import classify
from app.services.localsolve import ORACLE_LIMIT, c17_model, exhaustive_oracle, local_search, solvable_real
from app.services.lseries import analytic_rank, build_profile, functional_equation_defect
from app.services.survey import (
    SurveyConfig,
    SurveyService,
    conjecture_count,
    run_survey,
    verify_examples,
)


logger = logging.getLogger(__name__)


def _survey(args) -> tuple[BaseModel, str]:
    config = SurveyConfig(bound=args.bound, stratum=args.stratum, ranks=args.ranks, tau=args.tau)
    service = SurveyService(args.output_dir, workers=settings.survey_workers) if args.output_dir else None
    response = SurveyResponse.from_result(run_survey(config, service))
    lines = [f"census up to {args.bound} (stratum {args.stratum}): {response.total} primes"
             + (f", smallest {response.smallest}" if response.smallest else "")]
    for stratum, counts in response.counts.items():
        lines.append(f"  {stratum}: {counts['records']} records, {counts['realized']} realized,"
                     f" {counts['pending']} pending")
    lines += [f"  wrote {path}" for path in response.paths.values()]
    return response, "\n".join(lines)


def _rank(args) -> tuple[BaseModel, str]:
    verdict = analytic_rank(args.level, args.prime, tau=args.tau)
    defect = None
    if args.check:
        profile = build_profile(args.level, args.prime, nmax=2 * verdict.nmax_used)
        defect = functional_equation_defect(profile)
    response = RankResponse.from_verdict(verdict, defect)
    text = (f"C({response.N},{response.p}): sign {response.sign:+d} ({response.parity}),"
            f" L(1) = {response.L1:.12g}, L'(1) = {response.L1prime:.12g},"
            f" estimate {response.estimate} (nmax {response.nmax}, tau {response.tau:g})")
    if defect is not None:
        text += f"\n  functional-equation defect {defect:.3g}"
    return response, text


def _local(args) -> tuple[BaseModel, str]:
    model = c17_model(args.prime)
    place = Place.parse(args.at)
    if place.is_infinite:
        response = LocalSolveResponse(model=str(model), place=str(place), solvable=solvable_real(model))
    else:
        result = local_search(model, place.prime)
        confirmed = None
        if args.oracle and not result.solvable and place.prime ** result.precision <= ORACLE_LIMIT:
            confirmed = not exhaustive_oracle(model, place.prime, result.precision)
        response = LocalSolveResponse.from_search(model, result, oracle=confirmed)

    text = f"{response.model} over Q_{response.place}: {'solvable' if response.solvable else 'NOT solvable'}"
    if response.witness is not None:
        w = response.witness
        text += f"\n  witness: {w.chart} class {w.residue} mod {place.prime}^{w.depth} ({w.status})"
    if not response.solvable and response.precision is not None:
        text += f"\n  {len(response.certificate)} residue classes closed; visible mod {place.prime}^{response.precision}"
        if response.oracle is not None:
            text += f"\n  exhaustive search {'agrees' if response.oracle else 'DISAGREES'}"
    return response, text


def _deficiency(args) -> tuple[BaseModel, str]:
    response = DeficiencyResponse.from_report(classify(args.level, args.prime))
    lines = [f"C({response.N},{response.p}), genus {response.genus}, c_N = {response.obstruction_constant}"]
    lines += [f"  {entry.place:>8}  {entry.status:<13} {entry.provenance}" for entry in response.places]
    lines.append(f"  deficient: {', '.join(response.deficient) or 'none'}")
    return response, "\n".join(lines)


def _verify_examples(args) -> tuple[BaseModel, str]:
    checks = verify_examples()
    response = VerifyExamplesResponse(passed=all(c.passed for c in checks),
                                      examples=[ExampleCheckModel.from_check(c) for c in checks])
    lines = []
    for e in response.examples:
        lines.append(f"{e.name}: reconstructed={e.reconstructed} isomorphic={e.isomorphic}"
                     f" on_curve={e.on_curve} nontorsion={e.nontorsion} (u = {e.scale})")
    lines.append("all checks passed" if response.passed else "CHECKS FAILED")
    return response, "\n".join(lines)


def _classno(args) -> tuple[BaseModel, str]:
    response = ClassNumberResponse(discriminant=args.disc, class_number=class_number(args.disc))
    return response, f"h({response.discriminant}) = {response.class_number}"


def _conjecture(args) -> tuple[BaseModel, str]:
    count = conjecture_count(args.bound, args.residue, args.modulus)
    response = ConjectureResponse(bound=args.bound, residue=args.residue, modulus=args.modulus, count=count)
    return response, f"F({args.bound}) = {count} for p = {args.residue} (mod {args.modulus})"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON instead of text")

    parser = argparse.ArgumentParser(prog="python -m app.cli", description=settings.api_description)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("survey", parents=[common], help="census of new primes, optionally with rank verdicts")
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--stratum", choices=["A", "B", "both"], default="both")
    p.add_argument("--ranks", action="store_true", help="attach analytic-rank verdicts (slow)")
    p.add_argument("--tau", type=float, default=None)
    p.add_argument("--output-dir", dest="output_dir", default=None, help="defaults to OUTPUT_DIR")
    p.set_defaults(handler=_survey)

    p = sub.add_parser("rank", parents=[common], help="analytic rank of C(N, p)")
    p.add_argument("--level", type=int, choices=[11, 19], required=True)
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--tau", type=float, default=None)
    p.add_argument("--check", action="store_true", help="run the functional-equation self-check")
    p.set_defaults(handler=_rank)

    p = sub.add_parser("local", parents=[common], help="local solvability of C(17, p)")
    p.add_argument("--quartic", choices=["c17"], default="c17")
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--at", required=True, help="prime l or 'inf'")
    p.add_argument("--oracle", action="store_true", help="confirm insolubility by exhaustive search")
    p.set_defaults(handler=_local)

    p = sub.add_parser("deficiency", parents=[common], help="deficient places of C(N, p)")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--prime", type=int, required=True)
    p.set_defaults(handler=_deficiency)

    p = sub.add_parser("verify-examples", parents=[common], help="check the C(11,4079) and C(19,5591) points")
    p.set_defaults(handler=_verify_examples)

    p = sub.add_parser("classno", parents=[common], help="class number of a negative discriminant")
    p.add_argument("--disc", type=int, required=True)
    p.set_defaults(handler=_classno)

    p = sub.add_parser("conjecture", parents=[common], help="count p with 3 not dividing h(-3p)")
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--residue", type=int, required=True)
    p.add_argument("--modulus", type=int, required=True)
    p.set_defaults(handler=_conjecture)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=settings.log_level, format="%(levelname)s %(name)s: %(message)s")

    try:
        response, text = args.handler(args)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except Exception as e:
        logger.exception(f"[CLI] {args.command} failed")
        print(f"error: {e}", file=sys.stderr)
        return 1

    print(response.model_dump_json(indent=2) if args.json else text)
    if isinstance(response, VerifyExamplesResponse) and not response.passed:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
