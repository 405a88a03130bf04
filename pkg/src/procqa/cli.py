"""Operator surface: validate, run, bench, eval, report, filter.

Exit codes are uniform: 0 success, 1 domain failure (validation, planning, or
step errors), 2 environment or I/O failure. Structured errors go to stderr as
one JSON object; ``--log-json`` turns on JSON-lines progress logs.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .config import RunConfig
from .dataset.filters import ActionSequence, blind_filter, redundancy_filter
from .dataset.loader import (
    Dataset,
    QAType,
    build_dataset,
    dataset_stats,
    load_dataset,
    save_dataset,
)
from .errors import ProcqaError, SchemaError, UnknownItem
from .eval.judge import JudgeScore, RemoteJudgeBackend, StubJudgeBackend, judge_answer
from .eval.matching import mean_iou
from .eval.report import EvalRecord, render_report_table, report_from_records
from .fixtures.suite import FixtureSuite, load_fixture_suite
from .jsonutil import atomic_write_text, canonical_json, dump_pretty
from .orchestrator.runner import (
    answer_question,
    build_run_context,
    run_benchmark,
    save_predictions,
)
from .temporal import spanset_from_seconds, spanset_to_seconds
from .tools.remote import RemoteClient

log = logging.getLogger("procqa")


class _JsonLogFormatter(logging.Formatter):
    def format(self, record: logging.LogRecord) -> str:
        return canonical_json(
            {
                "ts": round(record.created, 3),
                "level": record.levelname.lower(),
                "logger": record.name,
                "message": record.getMessage(),
            }
        )


def _setup_logging(json_logs: bool) -> None:
    handler = logging.StreamHandler(sys.stderr)
    if json_logs:
        handler.setFormatter(_JsonLogFormatter())
        level = logging.INFO
    else:
        handler.setFormatter(logging.Formatter("%(levelname)s %(message)s"))
        level = logging.WARNING
    logging.basicConfig(level=level, handlers=[handler], force=True)


def _is_suite_file(path: str) -> bool:
    try:
        with open(path, encoding="utf-8") as fh:
            head = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"invalid JSON: {exc}") from exc
    return isinstance(head, dict) and "fixtures" in head


def _load_any(path: str) -> tuple[Dataset, FixtureSuite | None]:
    if _is_suite_file(path):
        suite = load_fixture_suite(path)
        return suite.to_dataset(), suite
    return load_dataset(path), None


def _stats_lines(ds: Dataset) -> list[str]:
    stats = dataset_stats(ds)
    lines = [
        f"videos: {stats.n_videos}   items: {stats.n_qa}   "
        f"mistake videos: {stats.n_mistake_videos}",
        f"duration: mean {stats.mean_duration_s:.1f}s  std {stats.std_duration_s:.1f}s",
    ]
    if stats.qa_type_fractions:
        parts = ", ".join(
            f"{t.value} {f * 100:.1f}%" for t, f in sorted(stats.qa_type_fractions.items())
        )
        lines.append(f"qa types: {parts}")
    if stats.source_fractions:
        parts = ", ".join(
            f"{s.value} {f * 100:.1f}%" for s, f in sorted(stats.source_fractions.items())
        )
        lines.append(f"sources: {parts}")
    return lines


def cmd_validate(args) -> int:
    ds, _ = _load_any(args.dataset)
    for line in _stats_lines(ds):
        print(line)
    print("ok")
    return 0


def _config_from_args(args, dataset_path: str) -> RunConfig:
    return RunConfig(
        dataset_path=dataset_path,
        backend_mode=args.backend,
        planner_mode=args.planner,
        frames_n=args.frames,
        top_k=args.top_k,
        parallelism=getattr(args, "parallel", 1),
        matching=getattr(args, "matching", "optimal"),
        tool_endpoint=args.tool_endpoint,
        planner_endpoint=args.planner_endpoint,
        judge_endpoint=getattr(args, "judge_endpoint", None),
        api_key=args.api_key,
        task_graph_path=args.task_graph,
        output_dir=args.out,
        object_hint=getattr(args, "object_hint", None),
    ).validate()


def cmd_run(args) -> int:
    config = _config_from_args(args, args.dataset)
    config.output_dir = config.output_dir or "."
    ds, suite = _load_any(args.dataset)
    if config.backend_mode == "fixture" and suite is None:
        raise ProcqaError("fixture backend needs a fixture suite file")
    try:
        item = ds.item(args.qa_id)
    except KeyError:
        raise UnknownItem(f"no item with qa_id {args.qa_id!r}") from None
    ctx = build_run_context(config, suite=suite)
    video = ds.video_by_id[item.video_id]
    prediction = answer_question(video, item, ctx)
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    atomic_write_text(
        str(out / f"{item.qa_id}.prediction.json"),
        dump_pretty(prediction.to_jsonable()),
    )
    print("plan:")
    print(prediction.plan_text.rstrip())
    print()
    trace_path = out / prediction.trace_ref
    events = [
        json.loads(line)
        for line in trace_path.read_text(encoding="utf-8").splitlines()
        if line.strip()
    ]
    executed = [e for e in events if e["step_index"] > 0]
    print(
        f"trace: {len(executed)} steps "
        f"({sum(1 for e in executed if e['status'] == 'ok')} ok) -> {trace_path}"
    )
    print(f"answer: {prediction.answer}")
    spans = ", ".join(f"[{a:.3f}, {b:.3f}]" for a, b in spanset_to_seconds(prediction.evidence))
    print(f"evidence (s): {spans}")
    return 0


def cmd_bench(args) -> int:
    config = _config_from_args(args, args.dataset)
    ds, suite = _load_any(args.dataset)
    if config.backend_mode == "fixture" and suite is None:
        raise ProcqaError("fixture backend needs a fixture suite file")
    ctx = build_run_context(config, suite=suite)
    run = run_benchmark(ds, ctx)
    out = Path(config.output_dir or ".")
    out.mkdir(parents=True, exist_ok=True)
    predictions_path = out / "predictions.json"
    save_predictions(run.predictions, str(predictions_path))
    print(f"predictions: {predictions_path} ({len(run.predictions)} items)")
    if run.failures:
        failures_path = out / "failures.json"
        atomic_write_text(
            str(failures_path),
            dump_pretty(
                [
                    {"qa_id": f.qa_id, "error": f.error, "message": f.message}
                    for f in run.failures
                ]
            ),
        )
        print(f"failures: {failures_path} ({len(run.failures)} items)", file=sys.stderr)
    return 0


def _judge_backend(args):
    if args.judge == "remote":
        endpoint = getattr(args, "judge_endpoint", None)
        config = RunConfig(judge_endpoint=endpoint)
        if not config.judge_endpoint:
            raise ProcqaError("remote judge requires PROCQA_JUDGE_ENDPOINT or --judge-endpoint")
        client = RemoteClient(endpoint=config.judge_endpoint, api_key=config.api_key)
        return RemoteJudgeBackend(client=client)
    return StubJudgeBackend()


def cmd_eval(args) -> int:
    ds, _ = _load_any(args.dataset)
    with open(args.predictions, encoding="utf-8") as fh:
        raw = json.load(fh)
    predictions = {p["qa_id"]: p for p in raw}
    backend = _judge_backend(args)
    records = []
    for item in ds.items:
        pred = predictions.get(item.qa_id)
        if pred is None:
            records.append(
                EvalRecord(item.qa_id, item.qa_type, JudgeScore.uniform(0), 0.0, failed=True)
            )
            continue
        evidence = spanset_from_seconds(pred.get("evidence", []))
        score = judge_answer(item.question, item.gold_answer, pred.get("answer", ""), backend)
        iou = mean_iou(evidence, item.gold_evidence, policy=args.matching)
        records.append(EvalRecord(item.qa_id, item.qa_type, score, iou))
    out_path = args.out or "scores.json"
    atomic_write_text(
        out_path, dump_pretty({"scores": [r.to_jsonable() for r in records]})
    )
    print(f"scores: {out_path} ({len(records)} items)")
    return 0


def _records_from_scores_file(path: str) -> list[EvalRecord]:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    rows = doc["scores"] if isinstance(doc, dict) else doc
    records = []
    for i, row in enumerate(rows):
        try:
            judge = row["judge"]
            score = JudgeScore.from_dims(
                judge["ci"], judge["do"], judge["cu"], judge["tu"]
            )
            records.append(
                EvalRecord(
                    qa_id=row["qa_id"],
                    qa_type=QAType(row["qa_type"]),
                    judge=score,
                    iou=float(row["iou"]),
                    failed=bool(row.get("failed", False)),
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"$.scores[{i}]", str(exc)) from exc
    return records


def cmd_report(args) -> int:
    records = _records_from_scores_file(args.scores)
    report = report_from_records(records)
    print(render_report_table(report, label=args.label))
    if args.json_out:
        atomic_write_text(args.json_out, dump_pretty(report.to_jsonable()))
        print(f"report json: {args.json_out}")
    return 0


def cmd_filter(args) -> int:
    ds, _ = _load_any(args.dataset)
    kept_videos = list(ds.videos)
    kept_items = list(ds.items)
    if args.annotations:
        with open(args.annotations, encoding="utf-8") as fh:
            notes = json.load(fh)
        sequences = {
            vid: ActionSequence.of(entry["sequence"]) for vid, entry in notes.items()
        }
        embeddings = {vid: entry["embedding"] for vid, entry in notes.items()}
        kept_ids = set(
            redundancy_filter(
                ds.videos,
                sequences,
                embeddings,
                edit_thresh=args.edit_thresh,
                cos_thresh=args.cos_thresh,
            )
        )
        kept_videos = [v for v in ds.videos if v.video_id in kept_ids]
        kept_items = [it for it in kept_items if it.video_id in kept_ids]
        print(f"redundancy: kept {len(kept_videos)}/{len(ds.videos)} videos")
    if args.blind:
        if args.judge == "remote":
            backend = _judge_backend(args)
            client = backend.client

            def answer_fn(question: str) -> str:
                return client.post("/v1/blind_answer", {"question": question}).get(
                    "answer", ""
                )
        else:
            backend = StubJudgeBackend()

            def answer_fn(question: str) -> str:
                return ""

        def judge_fn(question: str, gold: str, answer: str) -> JudgeScore:
            return judge_answer(question, gold, answer, backend)

        kept_items, audits = blind_filter(
            kept_items, answer_fn, judge_fn, threshold=args.blind_thresh
        )
        dropped = sum(1 for a in audits if a.dropped)
        print(f"blind: dropped {dropped}, kept {len(kept_items)} items")
    filtered = build_dataset(kept_videos, kept_items)
    save_dataset(filtered, args.out)
    print(f"filtered dataset: {args.out}")
    return 0


def _add_backend_flags(p: argparse.ArgumentParser):
    p.add_argument("--backend", choices=["fixture", "remote"], default="fixture")
    p.add_argument("--planner", choices=["template", "llm"], default="template")
    p.add_argument("--frames", type=int, default=50, help="frames sampled per video")
    p.add_argument("--top-k", type=int, default=4, dest="top_k")
    p.add_argument("--tool-endpoint", default=None)
    p.add_argument("--planner-endpoint", default=None)
    p.add_argument("--api-key", default=None)
    p.add_argument("--task-graph", default=None, help="DOT file injected into summaries")
    p.add_argument("--object-hint", default=None)
    p.add_argument("--out", default=None, help="output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="procqa",
        description="Object-centric video QA: tool-plan orchestration and scoring.",
    )
    parser.add_argument("--log-json", action="store_true", help="JSON-lines logs on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a dataset or fixture suite file")
    p.add_argument("dataset")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("run", help="answer a single question")
    p.add_argument("dataset")
    p.add_argument("qa_id")
    _add_backend_flags(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("bench", help="answer every question in the dataset")
    p.add_argument("dataset")
    _add_backend_flags(p)
    p.add_argument("--parallel", type=int, default=1)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("eval", help="score stored predictions against gold")
    p.add_argument("predictions")
    p.add_argument("dataset")
    p.add_argument("--judge", choices=["stub", "remote"], default="stub")
    p.add_argument("--judge-endpoint", default=None)
    p.add_argument("--matching", choices=["optimal", "greedy"], default="optimal")
    p.add_argument("--out", default=None, help="scores JSON path (default scores.json)")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("report", help="render a scores file as a table")
    p.add_argument("scores")
    p.add_argument("--label", default="run")
    p.add_argument("--json-out", default=None, dest="json_out")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("filter", help="redundancy / blind-answerable filters")
    p.add_argument("dataset")
    p.add_argument("--annotations", default=None, help="JSON: video_id -> sequence+embedding")
    p.add_argument("--edit-thresh", type=float, default=0.2)
    p.add_argument("--cos-thresh", type=float, default=0.95)
    p.add_argument("--blind", action="store_true")
    p.add_argument("--blind-thresh", type=float, default=3.0)
    p.add_argument("--judge", choices=["stub", "remote"], default="stub")
    p.add_argument("--judge-endpoint", default=None)
    p.add_argument("--out", required=True, help="filtered dataset path")
    p.set_defaults(func=cmd_filter)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _setup_logging(args.log_json)
    try:
        return args.func(args)
    except ProcqaError as exc:
        payload = {"error": type(exc).__name__, "message": str(exc)}
        qa_id = getattr(exc, "qa_id", None)
        if qa_id:
            payload["qa_id"] = qa_id
        print(canonical_json(payload), file=sys.stderr)
        return 1
    except OSError as exc:
        print(
            canonical_json({"error": type(exc).__name__, "message": str(exc)}),
            file=sys.stderr,
        )
        return 2


if __name__ == "__main__":
    sys.exit(main())
