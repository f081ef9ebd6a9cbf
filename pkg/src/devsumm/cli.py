"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 data error, 3 empty pool or invalid
(zero-fitness) result.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .analysis import (
    benchmark,
    contribution,
    pairwise_mwu,
    read_runs,
    score_distributions,
    select_relevant,
    write_mwu,
)
from .corpus import (
    ArtefactType,
    CorpusError,
    ScenarioSpec,
    TimeWindow,
    TYPE_NAMES,
    dump_corpus,
    dump_gold,
    load_corpus,
    load_gold,
    window_pool,
)
from .features import FEATURE_NAMES, extract_features
from .optim import ALGORITHMS, DEFAULT_MAX_LEN, EnumerationCapExceeded, SearchBudget, run_algorithm
from .similarity import MODES, Objective, TargetProfile
from .stats import mann_whitney_u

log = logging.getLogger("devsumm")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_EMPTY = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _scenario(args) -> ScenarioSpec:
    if args.scenario == "types":
        if not args.types:
            raise ValueError("--scenario types needs --types")
        return ScenarioSpec.subset(t.strip() for t in args.types.split(",") if t.strip())
    return ScenarioSpec.parse(args.scenario)


def _budget(args) -> SearchBudget:
    if args.budget_evals is not None:
        return SearchBudget.evaluations(args.budget_evals, args.seed)
    return SearchBudget.seconds(args.budget_secs, args.seed)


def cmd_validate(args) -> int:
    corpus = load_corpus(args.corpus)
    counts = corpus.type_counts()
    sentences = {t: 0 for t in ArtefactType}
    for a in corpus:
        sentences[a.atype] += len(corpus.sentences(a.id))
    width = max(len(f"{TYPE_NAMES[t]} ({t.value})") for t in ArtefactType)
    print(f"{'Type':<{width}}  {'Number':>8}  {'Sentences':>10}")
    for t in ArtefactType:
        label = f"{TYPE_NAMES[t]} ({t.value})"
        print(f"{label:<{width}}  {counts[t]:>8,}  {sentences[t]:>10,}")
    print(f"{'Total':<{width}}  {len(corpus):>8,}  {sum(sentences.values()):>10,}")
    return EXIT_OK


def cmd_summarize(args) -> int:
    corpus = load_corpus(args.corpus)
    window = TimeWindow.parse(args.window)
    golds = [
        g
        for g in load_gold(args.gold)
        if g.window == window and (args.project is None or g.project == args.project)
    ]
    if not golds:
        print(f"no gold summary for window {window}", file=sys.stderr)
        return EXIT_DATA
    if not 0 <= args.target_index < len(golds):
        print(f"--target-index {args.target_index} out of range (0..{len(golds) - 1})", file=sys.stderr)
        return EXIT_DATA
    gold = golds[args.target_index]
    scenario = _scenario(args)
    pool = window_pool(corpus, window, scenario, gold.project)
    if not len(pool):
        print(f"empty pool: no {scenario} sentences for {gold.project} in {window}", file=sys.stderr)
        return EXIT_EMPTY
    budget = _budget(args)
    obj = Objective(pool.sentences, TargetProfile.from_text(gold.summary, args.mode))
    summary = run_algorithm(args.algo, obj, args.max_len, budget)
    record = {
        "algorithm": summary.algorithm,
        "mode": args.mode,
        "scenario": str(scenario),
        "window": str(window),
        "project": gold.project,
        "target": args.target_index,
        "seed": args.seed,
        "sids": [list(s) for s in summary.sids],
        "score": summary.score.score,
        "valid": summary.valid,
        "evaluations": summary.evaluations,
        "elapsed_ms": round(summary.elapsed * 1000.0, 3) if budget.kind == "seconds" else None,
    }
    lines = [corpus.sentence(sid).raw for sid in summary.sids]
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "summary.jsonl").write_text(json.dumps(record) + "\n", encoding="utf-8")
        (out / "summary.txt").write_text("".join(line + "\n" for line in lines), encoding="utf-8")
    for line in lines:
        print(line)
    print(f"# {summary.algorithm} {args.mode} score={summary.score.score:.6f} "
          f"sentences={len(summary)} evaluations={summary.evaluations}", file=sys.stderr)
    if not summary.valid:
        print("invalid result: the summary has zero similarity to the target", file=sys.stderr)
        return EXIT_EMPTY
    return EXIT_OK


def cmd_benchmark(args) -> int:
    corpus = load_corpus(args.corpus)
    golds = load_gold(args.gold)
    algos = list(ALGORITHMS) if "all" in args.algo else args.algo
    modes = list(MODES) if args.mode == "both" else [args.mode]
    scenarios = [ScenarioSpec.parse(s) for s in (args.scenario or ["all"])]
    records = benchmark(
        corpus,
        golds,
        algos,
        modes,
        scenarios,
        _budget(args),
        max_len=args.max_len,
        workers=args.workers,
        out_dir=args.out,
    )
    print(f"{len(records)} run records written to {args.out}")
    return EXIT_OK


def cmd_analyze(args) -> int:
    runs = read_runs(args.runs)
    if args.what == "contributions":
        if not args.corpus:
            raise ValueError("analyze contributions needs --corpus")
        table = contribution(runs, load_corpus(args.corpus))
        if args.out:
            table.write_csv(args.out)
        for code, count, pct in table.rows():
            print(f"{code:<6} {count:>7} {pct:8.2f}%")
        relevant = select_relevant(table)
        print("relevant:", ", ".join(t.value for t in relevant))
        return EXIT_OK
    if args.what == "compare":
        dist = score_distributions(runs)
        pick = lambda algo: [  # noqa: E731
            s
            for (a, m, sc), scores in sorted(dist.items())
            if a == algo and (args.mode is None or m == args.mode) and (args.scenario is None or sc == args.scenario)
            for s in scores
        ]
        a, b = pick(args.a), pick(args.b)
        if not a or not b:
            print("no valid scores for one of the algorithms", file=sys.stderr)
            return EXIT_DATA
        u, p = mann_whitney_u(a, b)
        print(f"{args.a} (n={len(a)}) vs {args.b} (n={len(b)}): U={u} p={p:.6g}")
        return EXIT_OK
    rows = pairwise_mwu(runs)
    if args.out:
        write_mwu(rows, args.out)
    for mode, scenario, a, b, u, p in rows:
        print(f"{mode:<8} {scenario:<10} {a:<24} {b:<24} U={u:<10} p={p:.4g}")
    return EXIT_OK


def cmd_features(args) -> int:
    corpus = load_corpus(args.corpus)
    if args.window:
        pool = window_pool(corpus, TimeWindow.parse(args.window), _scenario(args), args.project)
        sentences = list(pool)
    else:
        sentences = [s for a in corpus for s in corpus.sentences(a.id)]
    fh = open(args.out, "w", encoding="utf-8", newline="") if args.out else sys.stdout
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow((["artefact", "index"] if args.with_ids else []) + list(FEATURE_NAMES))
        for s in sentences:
            row = [repr(float(v)) for v in extract_features(s.raw)]
            w.writerow(([s.sid[0], s.sid[1]] if args.with_ids else []) + row)
    finally:
        if fh is not sys.stdout:
            fh.close()
    return EXIT_OK


def cmd_fixtures(args) -> int:
    from .synthetic import make_corpus

    data = make_corpus(seed=args.seed, projects=args.projects, weeks=args.weeks)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    dump_corpus(data.artefacts, out / "corpus.jsonl")
    dump_gold(data.golds, out / "gold.jsonl")
    print(f"{len(data.artefacts)} artefacts, {len(data.golds)} gold summaries in {out}")
    return EXIT_OK


def _add_run_options(p: argparse.ArgumentParser, single: bool) -> None:
    p.add_argument("--corpus", required=True)
    p.add_argument("--gold", required=True)
    if single:
        p.add_argument("--window", required=True, help="YYYY-MM-DD..YYYY-MM-DD, end exclusive")
        p.add_argument("--project")
        p.add_argument("--target-index", type=int, default=0, help="which matching gold summary to aim at")
        p.add_argument("--scenario", default="all", help="all | subset | types | single:CODE | subset:CODE,...")
        p.add_argument("--types", help="comma-separated type codes for --scenario types")
        p.add_argument("--algo", choices=sorted(ALGORITHMS), default="greedy")
        p.add_argument("--mode", choices=MODES, default="word")
    else:
        p.add_argument("--scenario", action="append", help="repeatable; all | subset | single:CODE | subset:CODE,...")
        p.add_argument("--algo", nargs="+", default=["all"], choices=sorted(ALGORITHMS) + ["all"])
        p.add_argument("--mode", choices=list(MODES) + ["both"], default="both")
        p.add_argument("--workers", type=int, default=1)
    p.add_argument("--max-len", type=int, default=DEFAULT_MAX_LEN)
    budget = p.add_mutually_exclusive_group()
    budget.add_argument("--budget-secs", type=float, default=10.0)
    budget.add_argument("--budget-evals", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=not single)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="devsumm", description="Time-windowed extractive summaries of repository artefacts.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", help="check a corpus file and print per-type counts")
    p.add_argument("--corpus", required=True)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("summarize", help="summarise one window against one gold summary")
    _add_run_options(p, single=True)
    p.set_defaults(func=cmd_summarize)

    p = sub.add_parser("benchmark", help="run algorithms x modes x scenarios over all gold summaries")
    _add_run_options(p, single=False)
    p.set_defaults(func=cmd_benchmark)

    p = sub.add_parser("analyze", help="post-process a runs.jsonl file")
    p.add_argument("what", choices=["contributions", "compare", "mwu"])
    p.add_argument("--runs", required=True)
    p.add_argument("--corpus")
    p.add_argument("--a", default="greedy")
    p.add_argument("--b", default="brute_force")
    p.add_argument("--mode", choices=MODES)
    p.add_argument("--scenario")
    p.add_argument("--out")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("features", help="feature utilities")
    p.add_argument("action", choices=["dump"])
    p.add_argument("--corpus", required=True)
    p.add_argument("--window")
    p.add_argument("--project")
    p.add_argument("--scenario", default="all")
    p.add_argument("--types")
    p.add_argument("--with-ids", action="store_true", help="prefix rows with artefact id and sentence index")
    p.add_argument("--out")
    p.set_defaults(func=cmd_features)

    p = sub.add_parser("fixtures", help="write a synthetic corpus and gold file")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--projects", type=int, default=2)
    p.add_argument("--weeks", type=int, default=2)
    p.set_defaults(func=cmd_fixtures)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if getattr(args, "max_len", 1) < 1:
        parser.error("--max-len must be at least 1")
    try:
        return args.func(args)
    except (CorpusError, EnumerationCapExceeded) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DATA
    except (OSError, ValueError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
