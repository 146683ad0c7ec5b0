"""Command-line interface.

Subcommands: paraphrase one sentence, dump a verb's candidate set, run the
automatic evaluation over a dataset file, and export questionnaire / MT
pre-editing batches.  Configuration precedence is flags > LITERALIZE_*
environment variables > key=value config file.

Exit codes: 0 success, 1 loader or backend failure, 2 ambiguous target,
3 unknown lemma / no candidates, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import evaluation
from .morph import bundled_exception_table, load_exception_table
from .paraphrase import (
    NoCandidatesError,
    ParaphraseResult,
    build_candidate_set,
    make_target,
    select_paraphrase,
    TargetVerb,
)
from .scoring import (
    BackendKind,
    BackendUnavailableError,
    ScorerBackend,
    make_scorer,
)
from .wordnet import UnknownLemmaError, load_wordnet
from .wordpiece import basic_tokenize, load_vocab

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_AMBIGUOUS = 2
EXIT_NO_CANDIDATES = 3
EXIT_USAGE = 64

ENV_PREFIX = "LITERALIZE_"

_CONFIG_KEYS = (
    "wordnet_dir",
    "backend",
    "graph",
    "vocab",
    "endpoint",
    "frequency_table",
    "multi_piece",
    "sense_class",
    "output_format",
    "batch_size",
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems exit 64, not argparse's 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


@dataclass
class CliConfig:
    wordnet_dir: str
    backend: str = "unigram_frequency"
    graph: str | None = None
    vocab: str | None = None
    endpoint: str | None = None
    frequency_table: str | None = None
    multi_piece: str = "allow"
    sense_class: str = "synset"
    output_format: str = "plain"
    batch_size: int = 32
    exceptions: str | None = None


def _read_config_file(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    for line_no, line in enumerate(open(path, encoding="utf-8"), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"{path}:{line_no}: expected key=value")
        values[key.strip()] = value.strip()
    return values


def resolve_config(args: argparse.Namespace) -> CliConfig:
    """Merge flag, environment and config-file settings (that precedence)."""
    values: dict[str, str] = {}
    config_path = getattr(args, "config", None) or os.environ.get(ENV_PREFIX + "CONFIG")
    if config_path:
        values.update(_read_config_file(config_path))
    for key in _CONFIG_KEYS + ("exceptions",):
        env = os.environ.get(ENV_PREFIX + key.upper())
        if env is not None:
            values[key] = env
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = str(flag)
    if "wordnet_dir" not in values:
        raise ValueError("wordnet_dir is required (flag --wordnet-dir or LITERALIZE_WORDNET_DIR)")
    config = CliConfig(wordnet_dir=values.pop("wordnet_dir"))
    for key, value in values.items():
        setattr(config, key, int(value) if key == "batch_size" else value)
    _validate_config(config)
    return config


def _validate_config(config: CliConfig) -> None:
    if config.backend not in tuple(k.value for k in BackendKind):
        raise ValueError(f"unknown backend {config.backend!r}")
    if config.multi_piece not in ("allow", "exclude"):
        raise ValueError(f"multi_piece must be allow|exclude, got {config.multi_piece!r}")
    if config.sense_class not in ("synset", "synset+hypernyms"):
        raise ValueError(f"sense_class must be synset|synset+hypernyms, got {config.sense_class!r}")
    if config.output_format not in ("json", "tsv", "plain"):
        raise ValueError(f"output_format must be json|tsv|plain, got {config.output_format!r}")
    for label, path in (
        ("wordnet_dir", config.wordnet_dir),
        ("graph", config.graph),
        ("vocab", config.vocab),
        ("frequency_table", config.frequency_table),
        ("exceptions", config.exceptions),
    ):
        if path is not None and not Path(path).exists():
            raise ValueError(f"{label} path does not exist: {path}")


def _backend(config: CliConfig) -> ScorerBackend:
    return ScorerBackend(
        kind=BackendKind(config.backend),
        graph_path=config.graph,
        vocab_path=config.vocab,
        endpoint=config.endpoint,
        frequency_path=config.frequency_table,
        batch_size=config.batch_size,
    )


class _Session:
    """Loaded resources shared by the subcommands."""

    def __init__(self, config: CliConfig, need_scorer: bool = True):
        self.config = config
        self.kb = load_wordnet(config.wordnet_dir)
        if config.vocab is None:
            raise ValueError("a vocab file is required (flag --vocab or LITERALIZE_VOCAB)")
        self.vocab = load_vocab(config.vocab)
        self.exc = (
            load_exception_table(config.exceptions)
            if config.exceptions
            else bundled_exception_table()
        )
        self.scorer = make_scorer(_backend(config)) if need_scorer else None


def _print_result(result: ParaphraseResult, fmt: str) -> None:
    top = result.ranking[:10]
    if fmt == "json":
        print(
            json.dumps(
                {
                    "target": result.target.surface,
                    "lemma": result.target.lemma,
                    "best": result.best.surface,
                    "best_lemma": result.best_lemma,
                    "rewritten": result.rewritten,
                    "ranking": [
                        {"candidate": s.candidate, "log_prob": s.log_prob} for s in top
                    ],
                }
            )
        )
    elif fmt == "tsv":
        for position, scored in enumerate(top, start=1):
            print(f"{position}\t{scored.candidate}\t{scored.log_prob:.6f}")
    else:
        print(f"target: {result.target.surface} (lemma {result.target.lemma})")
        print(f"best: {result.best.surface} (lemma {result.best_lemma})")
        print("top candidates:")
        for position, scored in enumerate(top, start=1):
            print(f"  {position:2d}. {scored.candidate}  {scored.log_prob:.6f}")
        print(f"rewritten: {result.rewritten}")


def _resolve_target(session: _Session, sentence: str, index: int | None, word: str | None) -> TargetVerb:
    if (index is None) == (word is None):
        print("error: give exactly one of --target-index / --target-word", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)
    if word is not None:
        tokens = basic_tokenize(sentence)
        matches = [i for i, token in enumerate(tokens) if token == word]
        if len(matches) != 1:
            print(
                f"error: target word {word!r} matches {len(matches)} tokens; need exactly 1",
                file=sys.stderr,
            )
            raise SystemExit(EXIT_AMBIGUOUS)
        index = matches[0]
    return make_target(session.kb, session.exc, sentence, index)


def cmd_paraphrase(args: argparse.Namespace) -> int:
    config = resolve_config(args)
    session = _Session(config)
    try:
        target = _resolve_target(session, args.sentence, args.target_index, args.target_word)
        result = select_paraphrase(
            session.scorer, session.kb, session.vocab, target, config.multi_piece
        )
    except (UnknownLemmaError, NoCandidatesError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_NO_CANDIDATES
    _print_result(result, config.output_format)
    return EXIT_OK


def cmd_candidates(args: argparse.Namespace) -> int:
    config = resolve_config(args)
    session = _Session(config, need_scorer=False)
    word = args.word.lower()
    from .morph import lemmatize_verb

    lemma = lemmatize_verb(word, session.exc, session.kb.senses_by_lemma)
    target = TargetVerb(sentence=word, token_index=0, surface=word, lemma=lemma)
    try:
        cset = build_candidate_set(session.kb, session.vocab, target, config.multi_piece)
    except (UnknownLemmaError, NoCandidatesError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_NO_CANDIDATES
    if config.output_format == "json":
        print(
            json.dumps(
                {
                    "lemma": lemma,
                    "members": [
                        {
                            "surface": m.surface,
                            "lemma": m.lemma,
                            "origin": m.origin.value,
                            "tag": m.tag.value,
                        }
                        for m in cset.members
                    ],
                    "dropped_unknown": cset.dropped_unknown,
                    "dropped_multi_piece": cset.dropped_multi_piece,
                }
            )
        )
    else:
        print(f"lemma: {lemma} ({len(cset.members)} candidates)")
        for m in cset.members:
            print(f"  {m.surface}\t{m.lemma}\t{m.origin.value}\t{m.tag.value}")
        if cset.dropped_unknown or cset.dropped_multi_piece:
            print(
                f"dropped: {cset.dropped_unknown} unscoreable,"
                f" {cset.dropped_multi_piece} multi-piece"
            )
    return EXIT_OK


def cmd_evaluate(args: argparse.Namespace) -> int:
    config = resolve_config(args)
    if args.kind == "vua":
        print(
            "error: VUA records carry no gold synsets; use the export command instead",
            file=sys.stderr,
        )
        return EXIT_USAGE
    session = _Session(config)
    try:
        loaded = evaluation.load_moh(args.dataset, session.kb)
    except (evaluation.MissingFileError, evaluation.HeaderMismatchError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_FAILURE
    results = evaluation.paraphrase_records(
        loaded.records, session.kb, session.scorer, session.vocab, session.exc,
        config.multi_piece,
    )
    report = evaluation.judge_results(
        loaded.records, results, session.kb, session.exc, config.sense_class
    )
    report.dropped = loaded.dropped + report.dropped
    if args.report:
        evaluation.write_report(report, args.report)
    if args.results_out:
        evaluation.save_results(loaded.records, results, args.results_out)
    print(
        f"accuracy={report.accuracy:.4f} n={report.total}"
        f" dropped={len(report.dropped)} mode={report.mode}"
    )
    if args.min_accuracy is not None and report.accuracy < args.min_accuracy:
        print(
            f"error: accuracy {report.accuracy:.4f} below floor {args.min_accuracy}",
            file=sys.stderr,
        )
        return EXIT_FAILURE
    return EXIT_OK


def cmd_export(args: argparse.Namespace) -> int:
    config = resolve_config(args)
    if args.kind not in ("human", "mt"):
        print(f"error: unknown export kind {args.kind!r}", file=sys.stderr)
        return EXIT_USAGE
    session = _Session(config, need_scorer=False)
    try:
        if args.dataset_kind == "vua":
            loaded = evaluation.load_vua(args.dataset)
        else:
            loaded = evaluation.load_moh(args.dataset, session.kb)
    except (evaluation.MissingFileError, evaluation.HeaderMismatchError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_FAILURE
    sources: dict[str, list] = {}
    for spec_text in args.results:
        name, sep, path = spec_text.partition("=")
        if not sep:
            name, path = Path(spec_text).stem, spec_text
        sources[name] = evaluation.load_results(loaded.records, path)
    if not sources:
        print("error: at least one --results file is required", file=sys.stderr)
        return EXIT_USAGE
    if args.kind == "human":
        evaluation.export_human_eval(loaded.records, sources, args.out)
    else:
        if len(sources) != 1:
            print("error: mt export takes exactly one --results file", file=sys.stderr)
            return EXIT_USAGE
        (results,) = sources.values()
        evaluation.export_mt_batch(loaded.records, results, args.out)
    print(f"wrote {args.out} ({len(loaded.records)} records)")
    return EXIT_OK


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="key=value config file")
    parser.add_argument("--wordnet-dir", dest="wordnet_dir")
    parser.add_argument(
        "--backend", choices=[k.value for k in BackendKind], dest="backend"
    )
    parser.add_argument("--graph", help="ONNX inference graph (neural backend)")
    parser.add_argument("--vocab", help="vocab.txt consumed by the tokenizer")
    parser.add_argument("--endpoint", help="scoring service URL (remote backend)")
    parser.add_argument(
        "--frequency-table", dest="frequency_table", help="token<TAB>count file"
    )
    parser.add_argument("--multi-piece", choices=["allow", "exclude"], dest="multi_piece")
    parser.add_argument(
        "--sense-class", choices=["synset", "synset+hypernyms"], dest="sense_class"
    )
    parser.add_argument(
        "--output-format", choices=["json", "tsv", "plain"], dest="output_format"
    )
    parser.add_argument("--batch-size", type=int, dest="batch_size")
    parser.add_argument("--exceptions", help="verb.exc override")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="literalize", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("paraphrase", help="paraphrase one marked verb in a sentence")
    p.add_argument("--sentence", required=True)
    p.add_argument("--target-index", type=int, dest="target_index")
    p.add_argument("--target-word", dest="target_word")
    _add_config_flags(p)
    p.set_defaults(func=cmd_paraphrase)

    p = sub.add_parser("candidates", help="dump the candidate set for a verb")
    p.add_argument("word")
    _add_config_flags(p)
    p.set_defaults(func=cmd_candidates)

    p = sub.add_parser("evaluate", help="run the automatic sense-class evaluation")
    p.add_argument("--dataset", required=True)
    p.add_argument("--kind", choices=["moh", "vua"], default="moh")
    p.add_argument("--report", help="write the full JSON report here")
    p.add_argument("--results-out", dest="results_out", help="write per-record results here")
    p.add_argument("--min-accuracy", type=float, dest="min_accuracy")
    _add_config_flags(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("export", help="export questionnaire or MT batches")
    p.add_argument("--dataset", required=True)
    p.add_argument("--dataset-kind", choices=["moh", "vua"], default="moh")
    p.add_argument("--kind", required=True, help="human or mt")
    p.add_argument(
        "--results",
        action="append",
        default=[],
        metavar="NAME=PATH",
        help="saved results file (repeatable for multi-model questionnaires)",
    )
    p.add_argument("--out", required=True)
    _add_config_flags(p)
    p.set_defaults(func=cmd_export)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit as err:
        return err.code if isinstance(err.code, int) else EXIT_USAGE
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except BackendUnavailableError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_FAILURE
    except Exception as err:  # loader failures and the like
        print(f"error: {type(err).__name__}: {err}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
