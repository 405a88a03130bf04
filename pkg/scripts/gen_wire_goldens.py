"""Regenerate the golden wire-exchange suite under goldens/wire/.

Each golden pins one HTTP exchange of the tool protocol: the exact request
body the engine must send and the exact response body a conforming server
must return. Outputs are derived from the shipped butter fixture so both
sides of the protocol can be checked against the same frozen bytes.

Run from the repo root:  python scripts/gen_wire_goldens.py
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "src"))

from procqa.fixtures.suite import load_fixture_suite, shipped_suite_path  # noqa: E402
from procqa.jsonutil import dump_pretty  # noqa: E402
from procqa.temporal import span_from_seconds  # noqa: E402
from procqa.tools.env import ToolEnv  # noqa: E402
from procqa.tools import local  # noqa: E402
from procqa.tools.values import Frame, FrameCollection, value_to_jsonable  # noqa: E402

VID = "butter_600s"


def frames_of(*stamps: int) -> FrameCollection:
    return FrameCollection(VID, tuple(Frame(t, f"{VID}@{t}") for t in stamps))


def ok(result) -> dict:
    return {"ok": True, "result": result}


def err(code: str, message: str) -> dict:
    return {"ok": False, "error": {"code": code, "message": message}}


def request(args: dict, video_id: str = "", frame_timestamps_ms: list[int] | None = None) -> dict:
    return {
        "args": args,
        "video_id": video_id,
        "frame_timestamps_ms": frame_timestamps_ms or [],
    }


def frames_result(fc: FrameCollection) -> dict:
    return value_to_jsonable(fc)


def main() -> None:
    suite = load_fixture_suite(shipped_suite_path())
    env = ToolEnv(video=None, suite=suite)
    handle = suite.fixtures[VID].handle()
    prep_q = "Which steps prepared the 'butter' before the batter was mixed?"

    sample4 = local.frame_sample(env, handle, 4)
    trim_ref = span_from_seconds([300.0, 310.0])
    trimmed = local.frame_trim(env, sample4, "before", trim_ref)
    retrieve_in = frames_of(66000, 78000, 200000)
    retrieved = local.frame_retrieve(env, retrieve_in, "butter", 1)
    det_in = frames_of(66000, 200000)
    detections = local.obj_det(env, det_in, "butter")
    act_in = frames_of(66000, 140000)
    segments = local.action_rec(env, act_in)
    captions = local.img_caption(env, det_in)
    summary = local.context_sum(env, ["a", "b"])
    answer = local.answer_gen(env, prep_q, "ctx", frames_of(66000), ())

    goldens = [
        {
            "name": "video_load_ok",
            "tool": "Video_Load",
            "request": request({"path": VID}),
            "response": ok(value_to_jsonable(handle)),
        },
        {
            "name": "video_load_not_found",
            "tool": "Video_Load",
            "request": request({"path": "missing.mp4"}),
            "response": err("not_found", "no fixture video 'missing.mp4'"),
        },
        {
            "name": "frame_sample_ok",
            "tool": "Frame_Sample",
            "request": request({"n": 4}, VID),
            "response": ok(frames_result(sample4)),
        },
        {
            "name": "frame_sample_invalid_count",
            "tool": "Frame_Sample",
            "request": request({"n": 0}, VID),
            "response": err("invalid_count", "n must be >= 1, got 0"),
        },
        {
            "name": "frame_trim_ok",
            "tool": "Frame_Trim",
            "request": request(
                {"relation": "before", "reference": [300.0, 310.0]},
                VID,
                sample4.timestamps(),
            ),
            "response": ok(frames_result(trimmed)),
        },
        {
            "name": "frame_retrieve_ok",
            "tool": "Frame_Retrieve",
            "request": request(
                {"query": "butter", "top_k": 1}, VID, retrieve_in.timestamps()
            ),
            "response": ok(frames_result(retrieved)),
        },
        {
            "name": "obj_det_ok",
            "tool": "Obj_Det",
            "request": request({"query": "butter"}, VID, det_in.timestamps()),
            "response": ok({"detections": value_to_jsonable(detections)}),
        },
        {
            "name": "action_rec_ok",
            "tool": "Action_Rec",
            "request": request({}, VID, act_in.timestamps()),
            "response": ok({"segments": value_to_jsonable(segments)}),
        },
        {
            "name": "img_caption_ok",
            "tool": "Img_Caption",
            "request": request({}, VID, det_in.timestamps()),
            "response": ok({"captions": value_to_jsonable(captions)}),
        },
        {
            "name": "context_sum_ok",
            "tool": "Context_Sum",
            "request": request({"texts": ["a", "b"]}, VID),
            "response": ok({"summary": summary}),
        },
        {
            "name": "answer_gen_ok",
            "tool": "Answer_Gen",
            "request": request(
                {"question": prep_q, "context": "ctx", "evidence_hint": []},
                VID,
                [66000],
            ),
            "response": ok(value_to_jsonable(answer)),
        },
        {
            "name": "unknown_tool",
            "tool": "Frame_Sampel",
            "request": request({"n": 4}, VID),
            "response": err("unknown_tool", "no tool named 'Frame_Sampel'"),
        },
    ]

    out_dir = REPO / "goldens" / "wire"
    out_dir.mkdir(parents=True, exist_ok=True)
    for golden in goldens:
        path = out_dir / f"{golden['name']}.json"
        path.write_text(dump_pretty(golden), encoding="utf-8")
        print(f"wrote {path.relative_to(REPO)}")


if __name__ == "__main__":
    main()
