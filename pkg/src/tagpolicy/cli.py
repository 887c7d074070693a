"""Command-line interface.

Subcommands: predict, review, eval, gen-tests, weights, serve. Datasets
load from the canonical JSON document; a path ending in .csv is imported
from the spreadsheet shape instead. Scenario text on the command line is
tag names joined by `+` (tag names themselves may not contain `+`).

Exit codes: 0 success, 1 internal failure (unhandled), 2 validation or
usage error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import TagPolicyError
from .evaluation import TestScenarioSpec, generate_tests, run_eval
from .metric import WeightTable
from .model import Dataset, Scenario, make_scenario
from .persistence import (
    canonical_json,
    import_csv,
    load_dataset,
    load_tests,
    save_dataset,
    save_report,
    save_session,
    save_tests,
    weight_table_document,
)
from .predictor import Prediction, predict_for_target, prediction_document
from .review import DEFAULT_CAP, ReviewSession, SessionStatus
from .weights import resolve_table, synthesize_weights


def _load(path: str) -> Dataset:
    if path.endswith(".csv"):
        return import_csv(path)
    return load_dataset(path)


def _parse_scenario(dataset: Dataset, text: str) -> Scenario:
    names = [part.strip() for part in text.split("+") if part.strip()]
    return make_scenario(dataset.universe, names)


def _scenario_text(scenario: Scenario) -> str:
    return "+".join(scenario.names)


def _format_prediction(dataset: Dataset, target: str, prediction: Prediction) -> str:
    labeled = dataset.per_target_view(target)
    nearest = ", ".join(
        f"{_scenario_text(labeled[i].scenario)} @ {prediction.neighbors.similarity}"
        for i in prediction.neighbors.members
    )
    extra = ""
    if prediction.removed_index is not None:
        removed = _scenario_text(labeled[prediction.removed_index].scenario)
        extra = f"; removed: {removed}"
    return (
        f"{prediction.decision.word.upper()} "
        f"({prediction.provenance.value}; nearest: {nearest}{extra})"
    )


def cmd_predict(args: argparse.Namespace) -> int:
    dataset = _load(args.dataset)
    query = _parse_scenario(dataset, args.scenario)
    prediction = predict_for_target(dataset, args.target, query)
    if args.json:
        document = prediction_document(
            prediction, query, dataset.per_target_view(args.target)
        )
        print(canonical_json(document), end="")
    else:
        print(_format_prediction(dataset, args.target, prediction))
    return 0


def cmd_review(args: argparse.Namespace) -> int:
    dataset = _load(args.dataset)
    session = ReviewSession(dataset, args.target, cap=args.cap)
    suggestion = session.next_suggestion()
    if suggestion is None and session.status is SessionStatus.CLEAN:
        print("No suggestions: labels are consistent.")
    while suggestion is not None:
        scenario = ",".join(suggestion.scenario.names)
        prompt = (
            f"Suggestion: For {{{scenario}}}, {args.target} = "
            f"{suggestion.proposed.word.upper()}. Agree?(y/n) "
        )
        try:
            answer = input(prompt).strip().lower()
        except EOFError:
            answer = "q"
        if answer in ("y", "yes"):
            suggestion = session.respond(suggestion.vertex, True)
        elif answer in ("n", "no"):
            suggestion = session.respond(suggestion.vertex, False)
        elif answer in ("q", "quit"):
            break
        else:
            print("Please answer y or n (q to stop).")

    print(f"Suggestions answered: {len(session.log)}")
    print(f"Errors found: {session.accepted_count}")
    print(f"Remaining violations: {session.remaining_violations}")
    if session.accepted_count > 0:
        out = Path(args.dataset)
        if out.suffix == ".csv":
            out = out.with_suffix(".json")
        save_dataset(dataset, out)
        print(f"Updated dataset written to {out}")
    session_path = args.session_log or str(Path(args.dataset).with_suffix("")) + ".session.json"
    save_session(session, session_path)
    print(f"Session log written to {session_path}")
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    dataset = _load(args.dataset)
    if args.tests:
        tests = load_tests(args.tests, dataset.universe)
    else:
        spec = TestScenarioSpec(seed=args.seed, count=args.count, max_tags=args.max_tags)
        tests = [(scenario, None) for scenario in generate_tests(spec, dataset)]
    report = run_eval(dataset, tests, args.seed)
    if args.out:
        save_report(report, args.out)
        print(f"Report written to {args.out}")
    if args.json:
        print(canonical_json(report.to_document()), end="")
    elif not args.out:
        print(report.format_table())
    return 0


def cmd_gen_tests(args: argparse.Namespace) -> int:
    dataset = _load(args.dataset)
    spec = TestScenarioSpec(seed=args.seed, count=args.count, max_tags=args.max_tags)
    tests = [(scenario, None) for scenario in generate_tests(spec, dataset)]
    if args.out:
        save_tests(tests, args.out)
        print(f"{len(tests)} test scenarios written to {args.out}")
    else:
        for scenario, _ in tests:
            print(_scenario_text(scenario))
    return 0


def cmd_weights(args: argparse.Namespace) -> int:
    dataset = _load(args.dataset)
    if args.target:
        table = resolve_table(dataset, args.target)
    else:
        config = dataset.weights.global_config
        table = (
            synthesize_weights(config, dataset.universe)
            if config is not None
            else WeightTable.unit()
        )
    if args.json:
        print(canonical_json(weight_table_document(table, dataset.universe)), end="")
        return 0
    print(f"{'tag':<24} {'w0':>4} {'w1':>4}")
    for name, (w0, w1) in table.as_mapping(dataset.universe).items():
        print(f"{name:<24} {w0:>4} {w1:>4}")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    host, _, port_text = args.bind.rpartition(":")
    if not host or not port_text.isdigit():
        raise ValueError(f"--bind must be host:port, got {args.bind!r}")
    app = create_app(args.dataset, static_dir=args.ui)
    uvicorn.run(app, host=host, port=int(port_text), log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tagpolicy",
        description="Per-target allow/deny policies learned from labeled tag scenarios.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("predict", help="predict a decision for one scenario")
    p.add_argument("--dataset", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--json", action="store_true")
    p.add_argument("scenario", help="tag names joined by '+', e.g. Home+Photo")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("review", help="interactive label review")
    p.add_argument("--dataset", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.add_argument("--session-log", help="where to write the session log")
    p.set_defaults(func=cmd_review)

    p = sub.add_parser("eval", help="run the evaluation harness")
    p.add_argument("--dataset", required=True)
    p.add_argument("--tests", help="test file with optional ground truth")
    p.add_argument("--generate", action="store_true", help="generate test scenarios")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int)
    p.add_argument("--max-tags", type=int, default=3)
    p.add_argument("--out", help="write the JSON report here")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("gen-tests", help="generate random test scenarios")
    p.add_argument("--dataset", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int)
    p.add_argument("--max-tags", type=int, default=3)
    p.add_argument("--out", help="write the test file here")
    p.set_defaults(func=cmd_gen_tests)

    p = sub.add_parser("weights", help="show the synthesized weight table")
    p.add_argument("--dataset", required=True)
    p.add_argument("--target")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_weights)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--dataset", required=True)
    p.add_argument("--bind", default="127.0.0.1:8000")
    p.add_argument("--ui", help="directory of static console assets to serve")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "eval" and not args.tests and not args.generate:
        parser.error("eval needs --tests or --generate")
    try:
        return args.func(args)
    except (TagPolicyError, OSError, ValueError) as err:
        print(f"error: {type(err).__name__}: {err}", file=sys.stderr)
        return 2


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
