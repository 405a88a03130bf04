from .suite import (
    ActionNote,
    CaptionNote,
    Expected,
    FixtureSuite,
    FixtureVideo,
    ObjectTrack,
    fixture_oracle,
    load_fixture_suite,
    shipped_suite_path,
)

__all__ = [
    "ActionNote",
    "CaptionNote",
    "Expected",
    "FixtureSuite",
    "FixtureVideo",
    "ObjectTrack",
    "fixture_oracle",
    "load_fixture_suite",
    "shipped_suite_path",
]
