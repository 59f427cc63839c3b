"""
MOTOR Command-Line Interface

Subcommands:

    index           ingest records + embeddings into a persisted index directory
    rerank          run queries through retrieval and re-ranking (optionally generate)
    eval            change rate and planted-relevance metrics for one configuration
    sweep           metrics over a grid of weights, gamma values and methods
    gen-synthetic   write a seeded synthetic index, query set and planted map

Exit codes: 0 success, 1 input error, 2 numerical failure, 3 service failure.
"""
import argparse
import asyncio
import json
import sys
from pathlib import Path
from typing import Callable, List, Optional, Sequence

from src.motor_rerank.config import LOG_LEVELS, configure_logging, load_motor_settings
from src.motor_rerank.core.models import PRESETS, SCORING_METHODS, QueryContext, RerankConfig
from src.motor_rerank.errors import InputError, MotorError, PipelineStageError
from src.motor_rerank.evalkit.ablation import (
    TABLE_FORMATS,
    AblationHarness,
    format_table,
    metrics_table,
    parse_weights,
)
from src.motor_rerank.evalkit.models import SyntheticCorpusSpec
from src.motor_rerank.evalkit.synthetic import generate_synthetic_corpus
from src.motor_rerank.io_utils import atomic_write_text
from src.motor_rerank.pipeline.models import GenerationEndpoint, GenerationRequest
from src.motor_rerank.pipeline.pipeline import MotorPipeline
from src.motor_rerank.pipeline.prompt import DEFAULT_TEMPLATE
from src.motor_rerank.store.corpus import CorpusStore
from src.motor_rerank.store.ingest import (
    ingest_corpus,
    load_corpus,
    load_planted,
    load_queries,
    load_query_dir,
    save_corpus,
    save_planted,
    save_queries,
)

PLANTED_FILENAME = "planted.json"
INDEX_DIRNAME = "index"
QUERIES_DIRNAME = "queries"


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("re-ranking configuration")
    group.add_argument("--alpha", type=float, default=0.2, help="weight of question-report relevance")
    group.add_argument("--beta", type=float, default=0.3, help="weight of finding-text similarity")
    group.add_argument("--delta", type=float, default=0.5, help="weight of finding-box similarity")
    group.add_argument("--gamma", type=float, default=1.0, help="entropic regularization strength")
    group.add_argument("--k", type=int, default=10, help="candidates retrieved")
    group.add_argument("--s", type=int, default=5, help="reports kept after re-ranking")
    group.add_argument("--tol", type=float, default=1e-6, help="Sinkhorn marginal tolerance")
    group.add_argument("--max-iters", type=int, default=1000, help="Sinkhorn iteration cap")
    domain = group.add_mutually_exclusive_group()
    domain.add_argument("--log-domain", dest="log_domain", action="store_const", const=True, default=None,
                        help="force the log-domain Sinkhorn solver (default: automatic, gamma < 0.05)")
    domain.add_argument("--plain-domain", dest="log_domain", action="store_const", const=False,
                        help="force the plain-domain Sinkhorn solver")
    group.add_argument("--method", choices=SCORING_METHODS, default="ot", help="candidate scoring method")
    group.add_argument("--workers", type=int, default=1, help="threads for candidate scoring")


def _add_query_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("index", help="index directory written by 'index' or 'gen-synthetic'")
    parser.add_argument("queries", help="query directory, or a queries .jsonl file")
    parser.add_argument("--query-embeddings", default=None,
                        help="embeddings file for a .jsonl query file")


def _add_output_flags(parser: argparse.ArgumentParser, default_format: str) -> None:
    parser.add_argument("--format", choices=TABLE_FORMATS, default=default_format, help="output format")
    parser.add_argument("--out", default=None, help="write output to this file (atomically) instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser for all subcommands."""
    formatter = argparse.ArgumentDefaultsHelpFormatter
    parser = argparse.ArgumentParser(
        prog="motor-rerank",
        description="Multimodal retrieval with optimal-transport re-ranking.",
        formatter_class=formatter,
    )
    parser.add_argument("--log-level", choices=LOG_LEVELS, default=None,
                        help="log level (default: $MOTOR_LOG or WARNING)")
    sub = parser.add_subparsers(dest="command", required=True)

    index = sub.add_parser("index", help="build an index directory", formatter_class=formatter)
    index.add_argument("records", help="records .jsonl file")
    index.add_argument("embeddings", help="embeddings file (MOTOREMB container or JSON)")
    index.add_argument("out", help="index directory to write")
    index.set_defaults(handler=cmd_index)

    rerank = sub.add_parser("rerank", help="retrieve and re-rank queries", formatter_class=formatter)
    _add_query_flags(rerank)
    _add_config_flags(rerank)
    rerank.add_argument("--query-id", default=None, help="process only this query")
    rerank.add_argument("--out", default=None, help="write the request JSON here instead of stdout")
    rerank.add_argument("--endpoint", default=None, help="generation service URL; dispatches the prompt")
    rerank.add_argument("--timeout", type=float, default=60.0, help="generation request timeout in seconds")
    rerank.add_argument("--template", default=None, help="prompt template file")
    rerank.set_defaults(handler=cmd_rerank)

    evaluate = sub.add_parser("eval", help="evaluate one configuration", formatter_class=formatter)
    _add_query_flags(evaluate)
    evaluate.add_argument("planted", help="planted relevance JSON {query_id: [record_id, ...]}")
    _add_config_flags(evaluate)
    evaluate.add_argument("--change-depth", type=int, default=None,
                          help="compare only the top-N prefix for change rate (default: full list)")
    _add_output_flags(evaluate, "csv")
    evaluate.set_defaults(handler=cmd_eval)

    sweep = sub.add_parser("sweep", help="sweep weights, gamma and methods", formatter_class=formatter)
    _add_query_flags(sweep)
    sweep.add_argument("planted", help="planted relevance JSON {query_id: [record_id, ...]}")
    _add_config_flags(sweep)
    sweep.add_argument("--weights", action="append", default=[], metavar="A,B,D",
                       help="weight tuple alpha,beta,delta (repeatable)")
    sweep.add_argument("--preset", action="append", default=[], choices=sorted(PRESETS),
                       help="named weight preset (repeatable)")
    sweep.add_argument("--gammas", type=float, nargs="+", default=None,
                       help="gamma values (default: --gamma)")
    sweep.add_argument("--methods", choices=SCORING_METHODS, nargs="+", default=None,
                       help="scoring methods (default: --method)")
    sweep.add_argument("--change-depth", type=int, default=None, help="prefix depth for change rate")
    sweep.add_argument("--progress", action="store_true", help="show a progress bar")
    _add_output_flags(sweep, "csv")
    sweep.set_defaults(handler=cmd_sweep)

    synthetic = sub.add_parser("gen-synthetic", help="write a synthetic corpus", formatter_class=formatter)
    synthetic.add_argument("out", help="output directory (index/, queries/, planted.json)")
    synthetic.add_argument("--records", type=int, default=50, help="records in the corpus")
    synthetic.add_argument("--queries", type=int, default=20, help="queries")
    synthetic.add_argument("--planted", type=int, default=1, help="planted relevant records per query")
    synthetic.add_argument("--min-findings", type=int, default=1, help="minimum findings per caption")
    synthetic.add_argument("--max-findings", type=int, default=3, help="maximum findings per caption")
    synthetic.add_argument("--noise", type=float, default=0.1, help="finding embedding noise scale")
    synthetic.add_argument("--decoys", type=int, default=0, help="image-similar decoys per query")
    synthetic.add_argument("--planted-image-noise", type=float, default=None,
                           help="image noise of planted records (default: --noise)")
    synthetic.add_argument("--visual-dim", type=int, default=768, help="image and box embedding dimension")
    synthetic.add_argument("--text-dim", type=int, default=512, help="text embedding dimension")
    synthetic.add_argument("--seed", type=int, default=0, help="64-bit seed")
    synthetic.set_defaults(handler=cmd_gen_synthetic)
    return parser


def config_from_args(args: argparse.Namespace, store: CorpusStore) -> RerankConfig:
    """RerankConfig from flags, with embedding dims taken from the store."""
    return RerankConfig(
        alpha=args.alpha,
        beta=args.beta,
        delta=args.delta,
        gamma=args.gamma,
        k=args.k,
        s=args.s,
        sinkhorn_max_iters=args.max_iters,
        sinkhorn_tol=args.tol,
        visual_dim=store.visual_dim,
        text_dim=store.text_dim,
        log_domain=args.log_domain,
        method=args.method,
    )


def _load_query_set(path: str, embeddings: Optional[str]) -> List[QueryContext]:
    location = Path(path)
    if location.is_dir():
        return load_query_dir(location)
    if embeddings is None:
        raise InputError(f"{path}: a .jsonl query file needs --query-embeddings")
    return load_queries(location, embeddings)


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        atomic_write_text(out, text)
    else:
        sys.stdout.write(text)


def _ranking_table(request: GenerationRequest) -> str:
    lines = [f"# {request.trace.query_id or request.query_image_ref}", "final  initial  cost        id"]
    for candidate in request.trace.candidates:
        cost = candidate["ot_cost"]
        shown = f"{cost:<10.6f}" if cost is not None else "failed    "
        lines.append(f"{candidate['final_rank']:>5}  {candidate['initial_rank']:>7}  {shown}  {candidate['record_id']}")
    if not request.trace.candidates:
        lines.append("(no candidates)")
    return "\n".join(lines) + "\n"


def cmd_index(args: argparse.Namespace) -> int:
    store = ingest_corpus(args.records, args.embeddings)
    save_corpus(store, args.out)
    print(f"indexed {len(store)} records (visual_dim={store.visual_dim}, text_dim={store.text_dim})")
    return 0


def cmd_rerank(args: argparse.Namespace) -> int:
    store = load_corpus(args.index)
    config = config_from_args(args, store)
    queries = _load_query_set(args.queries, args.query_embeddings)
    if args.query_id is not None:
        queries = [q for q in queries if q.query_id == args.query_id]
        if not queries:
            raise InputError(f"query id {args.query_id!r} not found in {args.queries}")

    template = Path(args.template).read_text(encoding="utf-8") if args.template else DEFAULT_TEMPLATE
    endpoint: Optional[GenerationEndpoint] = (
        {"url": args.endpoint, "timeout": args.timeout} if args.endpoint else None
    )
    pipeline = MotorPipeline(store, config, workers=args.workers, template=template, endpoint=endpoint)

    if endpoint:
        async def answer_all() -> List[GenerationRequest]:
            return [await pipeline.answer(q) for q in queries]

        requests = asyncio.run(answer_all())
    else:
        requests = [pipeline.run_query(q) for q in queries]

    payloads = [r.to_dict() for r in requests]
    body = payloads[0] if len(payloads) == 1 else payloads
    _emit(json.dumps(body, indent=2, ensure_ascii=False) + "\n", args.out)
    table_stream = sys.stdout if args.out else sys.stderr
    for request in requests:
        table_stream.write(_ranking_table(request))
    return 0


def _harness(args: argparse.Namespace, progress: bool = False) -> AblationHarness:
    store = load_corpus(args.index)
    config = config_from_args(args, store)
    queries = _load_query_set(args.queries, args.query_embeddings)
    planted = load_planted(args.planted)
    return AblationHarness(
        store,
        queries,
        planted,
        config=config,
        workers=args.workers,
        change_depth=args.change_depth,
        progress=progress,
    )


def cmd_eval(args: argparse.Namespace) -> int:
    harness = _harness(args)
    metrics = harness.evaluate()
    _emit(format_table(metrics_table(metrics, harness.config), args.format), args.out)
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    harness = _harness(args, progress=args.progress)
    weights = parse_weights(args.weights) + [PRESETS[name] for name in args.preset]
    if not weights:
        weights = [harness.config.weights]
    gammas = args.gammas or [harness.config.gamma]
    methods = args.methods or [harness.config.method]
    table = harness.sweep(weights, gammas, methods)
    _emit(format_table(table, args.format), args.out)
    return 0


def cmd_gen_synthetic(args: argparse.Namespace) -> int:
    spec = SyntheticCorpusSpec(
        n_records=args.records,
        visual_dim=args.visual_dim,
        text_dim=args.text_dim,
        n_planted_relevant=args.planted,
        findings_per_record=(args.min_findings, args.max_findings),
        noise_scale=args.noise,
        seed=args.seed,
        n_queries=args.queries,
        image_decoys_per_query=args.decoys,
        planted_image_noise=args.planted_image_noise,
    )
    store, queries, planted = generate_synthetic_corpus(spec)
    out = Path(args.out)
    save_corpus(store, out / INDEX_DIRNAME)
    save_queries(queries, out / QUERIES_DIRNAME)
    save_planted(planted, out / PLANTED_FILENAME)
    print(f"wrote {len(store)} records and {len(queries)} queries to {out} (seed {spec.seed})")
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Main entry point for the command-line interface.

    Returns:
        Process exit code
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse has already printed help or the usage error
        return 0 if e.code in (0, None) else 1
    try:
        settings = load_motor_settings()
    except ValueError as e:
        print(f"Error: {e}", file=sys.stderr)
        return 1
    configure_logging(args.log_level or settings["log_level"])

    handler: Callable[[argparse.Namespace], int] = args.handler
    try:
        return handler(args)
    except PipelineStageError as e:
        print(f"Error: stage {e.stage!r} failed: {e.cause}", file=sys.stderr)
        return e.exit_code
    except MotorError as e:
        print(f"Error: {e}", file=sys.stderr)
        return e.exit_code
    except (ValueError, OSError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
