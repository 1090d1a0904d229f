"""Command-line interface.

Subcommands: ``import`` (convert a WordNet 2.0 distribution to the
neutral TSV formats), ``sr`` / ``sr-sense`` (term- and sense-pair
relatedness), ``relate`` (text-pair relatedness), ``precompute`` (build
a pair cache), ``verify-cache``, and ``eval`` over the five task
datasets.  Exit codes: 0 success, 1 usage error, 2 data error.  All
numeric output uses 6 decimal places.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import tasks
from .pathfinder import (
    BASELINE_MODES,
    PATH_MODES,
    baseline_similarity,
    load_ic_table,
    max_relatedness,
)
from .store import PairCache, StoreError, precompute, verify_cache
from .termrel import CacheMismatchError, term_relatedness
from .textrel import (
    default_stopwords,
    load_df_table,
    load_stopwords,
    text_relatedness,
)
from .thesaurus import ThesaurusError, load_thesaurus

MODE_ALIASES = {
    "sr": "sr", "pr": "pr", "nwpl": "nwpl",
    "leacock": "leacock", "resnik": "resnik",
    "jc": "jiang_conrath", "lin": "lin",
}

DATA_DIR_ENV = "SEMREL_DATA"


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage problems; this tool reserves 2 for data
    errors, so remap usage failures to exit code 1."""

    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    common = _Parser(add_help=False)
    common.add_argument("--lexicon", help="lexicon TSV (lemma, pos, key)")
    common.add_argument("--edges", help="edge TSV (source, type, target)")
    common.add_argument("--weights", help="edge weight override TSV")
    common.add_argument("--depths", help="sense depth override TSV")
    common.add_argument("--stopwords", help="stopword file, one per line")
    common.add_argument("--df-table", help="document frequency table TSV")
    common.add_argument("--ic-table", help="concept probability TSV for "
                        "the IC-based baseline measures")
    common.add_argument("--cache", help="precomputed pair cache file")
    common.add_argument("--mode", default="sr", choices=sorted(MODE_ALIASES),
                        help="relatedness measure")
    common.add_argument("--simple", action="store_true",
                        help="ignore relations that cross parts of speech")
    common.add_argument("--identical-term-unity", action="store_true",
                        help="score identical in-vocabulary terms as 1")
    common.add_argument("--threshold", type=float, default=0.2,
                        help="paraphrase decision threshold")
    common.add_argument("--format", default="tsv",
                        choices=("tsv", "structured"),
                        help="report format (structured = JSON lines)")

    parser = _Parser(prog="semrel", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("import", parents=[common],
                       help="convert a WordNet 2.0 distribution "
                       "to the neutral TSV formats")
    p.add_argument("wordnet_dir")
    p.add_argument("out_dir")

    p = sub.add_parser("sr", parents=[common],
                       help="relatedness of two terms")
    p.add_argument("term1")
    p.add_argument("term2")

    p = sub.add_parser("sr-sense", parents=[common],
                       help="relatedness of two sense keys")
    p.add_argument("key1")
    p.add_argument("key2")

    p = sub.add_parser("relate", parents=[common],
                       help="relatedness of two texts")
    p.add_argument("inputs", nargs=2, metavar=("A", "B"),
                   help="two text files, or two literal texts with --text")
    p.add_argument("--text", action="store_true",
                   help="treat the arguments as literal text")

    p = sub.add_parser("precompute", parents=[common],
                       help="build a pair cache")
    p.add_argument("out_file")
    p.add_argument("--seeds", default="all",
                   help="'all' or a file of sense keys, one per line")
    p.add_argument("--budget", type=int, default=1_000_000,
                   help="maximum number of stored pairs")

    p = sub.add_parser("verify-cache", parents=[common],
                       help="sample a cache against live recomputation")
    p.add_argument("cache_file")
    p.add_argument("--sample", type=int, default=10_000)

    p = sub.add_parser("eval", parents=[common],
                       help="run an evaluation dataset")
    p.add_argument("task", choices=("wordsim", "synonym", "sat",
                                    "sentence", "paraphrase"))
    p.add_argument("dataset")
    return parser


def _data_dir() -> Path | None:
    value = os.environ.get(DATA_DIR_ENV)
    return Path(value) if value else None


def _resolve_thesaurus_paths(args) -> tuple[Path, Path]:
    lexicon = args.lexicon
    edges = args.edges
    data_dir = _data_dir()
    if lexicon is None and data_dir is not None:
        lexicon = data_dir / "lexicon.tsv"
    if edges is None and data_dir is not None:
        edges = data_dir / "edges.tsv"
    if lexicon is None or edges is None:
        raise _UsageError(
            "--lexicon and --edges are required (or set SEMREL_DATA)")
    return Path(lexicon), Path(edges)


def _load_graph(args):
    lexicon, edges = _resolve_thesaurus_paths(args)
    return load_thesaurus(lexicon, edges, args.weights, args.depths)


def _load_cache(args, graph) -> PairCache | None:
    if not args.cache:
        return None
    cache = PairCache(args.cache)
    cache.validate_for(graph)
    return cache


def _stopwords(args):
    if args.stopwords:
        return load_stopwords(args.stopwords)
    return default_stopwords()


def _term_kwargs(args, graph):
    mode = MODE_ALIASES[args.mode]
    kwargs = {
        "mode": mode,
        "identical_term_unity": args.identical_term_unity,
        "exclude_cross_pos": args.simple,
    }
    if mode in BASELINE_MODES and args.ic_table:
        kwargs["ic"] = load_ic_table(args.ic_table, graph)
    return kwargs


def _cmd_import(args) -> int:
    from .wordnet_import import import_wordnet

    counts = import_wordnet(Path(args.wordnet_dir), Path(args.out_dir))
    print(f"senses\t{counts.senses}")
    print(f"lexicon_rows\t{counts.lexicon_rows}")
    print(f"edges\t{counts.edges}")
    if counts.skipped_pointers:
        print(f"skipped_pointers\t{counts.skipped_pointers}", file=sys.stderr)
    return 0


def _cmd_sr(args) -> int:
    graph = _load_graph(args)
    cache = _load_cache(args, graph)
    score = term_relatedness(args.term1, args.term2, graph, cache,
                             **_term_kwargs(args, graph))
    print(f"{score.value:.6f}")
    return 0


def _cmd_sr_sense(args) -> int:
    graph = _load_graph(args)
    s1 = graph.sense(args.key1)
    s2 = graph.sense(args.key2)
    mode = MODE_ALIASES[args.mode]
    if mode in PATH_MODES:
        rel = max_relatedness(graph, s1, s2, mode,
                              exclude_cross_pos=args.simple)
        value = rel.value
    else:
        ic = load_ic_table(args.ic_table, graph) if args.ic_table else None
        value = baseline_similarity(mode, s1, s2, graph, ic)
    print(f"{value:.6f}")
    return 0


def _cmd_relate(args) -> int:
    graph = _load_graph(args)
    cache = _load_cache(args, graph)
    stop = _stopwords(args)
    if args.text:
        raw_a, raw_b = args.inputs
    else:
        raw_a = Path(args.inputs[0]).read_text(encoding="utf-8")
        raw_b = Path(args.inputs[1]).read_text(encoding="utf-8")
    corpus = load_df_table(args.df_table) if args.df_table else None
    score = text_relatedness(
        raw_a, raw_b, graph, corpus=corpus, stopwords=stop, cache=cache,
        simple=args.simple, identical_term_unity=args.identical_term_unity)
    if not score.matches_ab and not score.matches_ba:
        print("warning: both texts are empty after preprocessing",
              file=sys.stderr)
    elif not score.matches_ab or not score.matches_ba:
        print("warning: a text is empty after preprocessing",
              file=sys.stderr)
    print(f"{score.value:.6f}")
    return 0


def _cmd_precompute(args) -> int:
    graph = _load_graph(args)
    if args.seeds == "all":
        seeds = "all"
    else:
        with open(args.seeds, encoding="utf-8") as fh:
            keys = [line.strip() for line in fh
                    if line.strip() and not line.startswith("#")]
        seeds = [graph.sense(k) for k in keys]
    cache = precompute(graph, args.out_file, seeds, args.budget,
                       exclude_cross_pos=args.simple)
    print(f"records\t{cache.record_count}")
    print(f"exhaustive\t{str(cache.covers_all_pairs).lower()}")
    cache.close()
    return 0


def _cmd_verify_cache(args) -> int:
    graph = _load_graph(args)
    with PairCache(args.cache_file) as cache:
        report = verify_cache(cache, graph, args.sample)
    print(f"sampled\t{report.sampled}")
    print(f"mismatches\t{report.mismatches}")
    print(f"max_abs_deviation\t{report.max_abs_deviation:.6f}")
    return 0 if report.ok else 2


def _cmd_eval(args) -> int:
    graph = _load_graph(args)
    cache = _load_cache(args, graph)
    term_kwargs = _term_kwargs(args, graph)
    text_kwargs = {
        "stopwords": _stopwords(args),
        "cache": cache,
        "simple": args.simple,
        "identical_term_unity": args.identical_term_unity,
    }
    if args.df_table:
        text_kwargs["corpus"] = load_df_table(args.df_table)
    if args.task == "wordsim":
        pairs = tasks.load_word_pairs(args.dataset)
        report = tasks.evaluate_word_similarity(pairs, graph, cache,
                                                **term_kwargs)
    elif args.task == "synonym":
        questions = tasks.load_choice_questions(args.dataset)
        report = tasks.evaluate_synonym_choice(questions, graph, cache,
                                               **term_kwargs)
    elif args.task == "sat":
        questions = tasks.load_analogy_questions(args.dataset)
        report = tasks.evaluate_analogy(questions, graph, cache,
                                        **term_kwargs)
    elif args.task == "sentence":
        pairs = tasks.load_text_pairs(args.dataset)
        report = tasks.evaluate_sentence_similarity(pairs, graph,
                                                    **text_kwargs)
    else:
        pairs = tasks.load_text_pairs(args.dataset)
        report = tasks.evaluate_paraphrase(pairs, graph, args.threshold,
                                           **text_kwargs)
    if args.format == "tsv":
        sys.stdout.write(tasks.report_to_tsv(report))
    else:
        sys.stdout.write(tasks.report_to_jsonl(report))
    return 0


_COMMANDS = {
    "import": _cmd_import,
    "sr": _cmd_sr,
    "sr-sense": _cmd_sr_sense,
    "relate": _cmd_relate,
    "precompute": _cmd_precompute,
    "verify-cache": _cmd_verify_cache,
    "eval": _cmd_eval,
}


def dispatch(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (ThesaurusError, StoreError, CacheMismatchError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
