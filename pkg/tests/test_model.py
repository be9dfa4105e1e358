"""Domain types and validators."""

from datetime import datetime

import pytest

from crowdkiosk.model import (
    AnnotationSegment,
    CollisionFlag,
    Difficulty,
    Episode,
    EventTally,
    Frame,
    Label,
    LabelKind,
    SurveyResponse,
    TaskSpec,
    Termination,
    default_scenes,
    make_task,
    validate_annotation,
    validate_episode,
)

NEUTRAL = (0.0,) * 14


def make_frame(i, t=None, leader=NEUTRAL, follower=NEUTRAL, flag=CollisionFlag.CLEAR):
    return Frame(index=i, t=t if t is not None else 20 * i, leader=leader, follower=follower, collision_flag=flag)


def make_episode(n_frames=3, frames=None):
    frames = tuple(frames) if frames is not None else tuple(make_frame(i) for i in range(n_frames))
    return Episode(
        episode_id="ep-0001",
        user_id="u-1",
        scene_id="A",
        task_id="hi_chew",
        start_wallclock=datetime(2024, 11, 4, 13, 0, 0),
        frames=frames,
        termination=Termination.STOP_BUTTON,
        self_reported_success=True,
    )


def test_nominal_episode_validates_clean():
    assert validate_episode(make_episode()) == []


def test_non_monotonic_timestamp_flagged():
    frames = [make_frame(0, 0), make_frame(1, 20), make_frame(2, 15)]
    violations = validate_episode(make_episode(frames=frames))
    assert any("non-monotonic" in v and "frame 2" in v for v in violations)


def test_gripper_out_of_range_flagged():
    bad = list(NEUTRAL)
    bad[6] = 1.3
    frames = [make_frame(0, leader=tuple(bad))]
    violations = validate_episode(make_episode(frames=frames))
    assert any("aperture" in v for v in violations)


def test_empty_episode_flagged():
    violations = validate_episode(make_episode(frames=[]))
    assert violations == ["episode has no frames"]


def test_task_points_invariant_enforced():
    with pytest.raises(ValueError):
        TaskSpec(
            task_id="t",
            scene_id="A",
            title="t",
            difficulty=Difficulty.EASY,
            points_on_success=20,
        )
    t = make_task("t", "A", "t", Difficulty.HARD)
    assert t.points_on_success == 20


def test_checklist_entries_unique():
    with pytest.raises(ValueError):
        make_task("t", "A", "t", Difficulty.HARD, checklist=("a", "a"))


def test_label_task_id_pairing():
    with pytest.raises(ValueError):
        Label(LabelKind.TASK)
    with pytest.raises(ValueError):
        Label(LabelKind.PLAY, task_id="x")
    assert Label.task("hi_chew").task_id == "hi_chew"


def test_full_play_annotation_valid():
    e = make_episode(n_frames=10)
    segs = [AnnotationSegment(0, 10, Label.play(), 0)]
    assert validate_annotation(e, segs) == []


def test_annotation_gap_detected():
    e = make_episode(n_frames=20)
    segs = [
        AnnotationSegment(0, 10, Label.play(), 0),
        AnnotationSegment(12, 20, Label.play(), 0),
    ]
    violations = validate_annotation(e, segs)
    assert any("gap 10..12" in v for v in violations)


def test_annotation_overlap_detected():
    e = make_episode(n_frames=20)
    segs = [
        AnnotationSegment(0, 12, Label.play(), 0),
        AnnotationSegment(10, 20, Label.play(), 0),
    ]
    violations = validate_annotation(e, segs)
    assert any("overlap" in v for v in violations)


def test_task_segment_quality_zero_illegal():
    e = make_episode(n_frames=5)
    segs = [AnnotationSegment(0, 5, Label.task("hi_chew"), 0)]
    violations = validate_annotation(e, segs)
    assert any("illegal quality 0 for Task" in v for v in violations)


def test_tutorial_quality_three_illegal():
    e = make_episode(n_frames=5)
    segs = [AnnotationSegment(0, 5, Label.tutorial(), 3)]
    assert validate_annotation(e, segs)


def test_segment_requires_start_before_end():
    with pytest.raises(ValueError):
        AnnotationSegment(5, 5, Label.play(), 0)


def test_event_tally_rejects_negative_retries():
    with pytest.raises(ValueError):
        EventTally(max_retries_per_subtask=-1)


def test_survey_likert_range():
    with pytest.raises(ValueError):
        SurveyResponse("e", True, 0, 3, 3)
    s = SurveyResponse("e", True, 1, 5, 3)
    assert s.intuitive == 1


def test_default_scenes_catalog():
    scenes = default_scenes()
    assert set(scenes) == {"A", "B", "C"}
    for scene in scenes.values():
        assert len(scene.tasks) == 2
    assert scenes["B"].task("jelly_bean").difficulty is Difficulty.HARD
    assert len(scenes["B"].task("jelly_bean").subtask_checklist) == 7
    assert len(scenes["C"].task("hi_chew_ziploc").subtask_checklist) == 7
    assert scenes["A"].task("hi_chew").points_on_success == 10
