"""Shared domain vocabulary: users, scenes, tasks, episodes, annotations,
surveys, points. Pure value types; validators return violation lists
rather than raising, since bad data is data.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from datetime import date, datetime


class CollisionFlag(enum.Enum):
    CLEAR = "Clear"
    WARNING = "Warning"
    VIOLATION = "Violation"


class Termination(enum.Enum):
    STOP_BUTTON = "StopButton"
    MECHANICAL_STOP = "MechanicalStop"
    TIMEOUT = "Timeout"
    SAFETY_STOP = "SafetyStop"


class Difficulty(enum.Enum):
    EASY = "Easy"
    HARD = "Hard"


POINTS_BY_DIFFICULTY = {Difficulty.EASY: 10, Difficulty.HARD: 20}


@dataclass
class UserProfile:
    user_id: str  # opaque token from the ID card
    nickname: str
    consented: bool = False
    tutorial_completed: bool = False
    created_at: datetime | None = None


@dataclass(frozen=True)
class TaskSpec:
    task_id: str
    scene_id: str
    title: str
    difficulty: Difficulty
    points_on_success: int
    reward_descriptor: str = ""
    subtask_checklist: tuple[str, ...] = ()

    def __post_init__(self):
        expected = POINTS_BY_DIFFICULTY[self.difficulty]
        if self.points_on_success != expected:
            raise ValueError(
                f"{self.difficulty.value} task must award {expected} points, "
                f"got {self.points_on_success}"
            )
        if len(set(self.subtask_checklist)) != len(self.subtask_checklist):
            raise ValueError("subtask checklist entries must be unique")


def make_task(task_id, scene_id, title, difficulty, reward="", checklist=()):
    """TaskSpec with points derived from difficulty."""
    return TaskSpec(
        task_id=task_id,
        scene_id=scene_id,
        title=title,
        difficulty=difficulty,
        points_on_success=POINTS_BY_DIFFICULTY[difficulty],
        reward_descriptor=reward,
        subtask_checklist=tuple(checklist),
    )


@dataclass(frozen=True)
class SceneConfig:
    scene_id: str
    tasks: tuple[TaskSpec, ...]
    active_dates: tuple[date, date] | None = None

    def __post_init__(self):
        ids = [t.task_id for t in self.tasks]
        if len(set(ids)) != len(ids):
            raise ValueError("task ids within a scene must be distinct")
        for t in self.tasks:
            if t.scene_id != self.scene_id:
                raise ValueError(f"task {t.task_id} belongs to scene {t.scene_id}")

    def task(self, task_id) -> TaskSpec:
        for t in self.tasks:
            if t.task_id == task_id:
                return t
        raise KeyError(task_id)


@dataclass(frozen=True)
class Frame:
    index: int
    t: int  # milliseconds since episode start
    leader: tuple  # 14 values: [left j1..j6, aperture, right j1..j6, aperture]
    follower: tuple
    collision_flag: CollisionFlag


@dataclass
class Episode:
    episode_id: str
    user_id: str
    scene_id: str
    task_id: str | None  # None for tutorial/play sessions started outside a task
    start_wallclock: datetime
    frames: tuple
    termination: Termination
    self_reported_success: bool | None = None


class LabelKind(enum.Enum):
    PLAY = "Play"
    TUTORIAL = "Tutorial"
    TASK = "Task"


LEGAL_QUALITIES = {
    LabelKind.PLAY: frozenset({0}),
    LabelKind.TUTORIAL: frozenset({1, 2}),
    LabelKind.TASK: frozenset({1, 2, 3}),
}


@dataclass(frozen=True)
class Label:
    kind: LabelKind
    task_id: str | None = None

    def __post_init__(self):
        if (self.kind is LabelKind.TASK) != (self.task_id is not None):
            raise ValueError("task_id is required for Task labels and forbidden otherwise")

    @classmethod
    def play(cls):
        return cls(LabelKind.PLAY)

    @classmethod
    def tutorial(cls):
        return cls(LabelKind.TUTORIAL)

    @classmethod
    def task(cls, task_id):
        return cls(LabelKind.TASK, task_id)


@dataclass(frozen=True)
class EventTally:
    """Annotator-entered observations a quality score is derived from."""

    max_retries_per_subtask: int = 0
    smooth: bool = True  # no jerky or sudden motions
    slight_error: bool = False  # e.g. multiple candies grabbed at once
    scene_change: bool = False  # e.g. dropped an object on the table
    opposite_arm: bool = False
    completed: bool = False

    def __post_init__(self):
        if self.max_retries_per_subtask < 0:
            raise ValueError("retry count must be >= 0")


@dataclass(frozen=True)
class AnnotationSegment:
    start: int  # inclusive frame index
    end: int  # exclusive
    label: Label
    quality: int
    events: EventTally = field(default_factory=EventTally)

    def __post_init__(self):
        if not self.start < self.end:
            raise ValueError(f"segment must satisfy start < end, got [{self.start}, {self.end})")


@dataclass(frozen=True)
class SurveyResponse:
    episode_id: str
    success: bool
    intuitive: int
    interesting: int
    wanted: int

    def __post_init__(self):
        for name in ("intuitive", "interesting", "wanted"):
            v = getattr(self, name)
            if not 1 <= v <= 5:
                raise ValueError(f"{name} rating {v} outside 1..5")


@dataclass(frozen=True)
class PointLedgerEntry:
    user_id: str
    episode_id: str
    points_awarded: int  # 0, 10 or 20
    cumulative: int
    at: datetime


@dataclass(frozen=True)
class LeaderboardEntry:
    user_id: str
    nickname: str
    total_points: int
    rank: int


@dataclass
class DatasetIndex:
    """Everything the analytics run over, loaded or synthesized."""

    episodes: tuple = ()
    annotations: dict = field(default_factory=dict)  # episode_id -> tuple[AnnotationSegment]
    surveys: dict = field(default_factory=dict)  # episode_id -> SurveyResponse
    users: dict = field(default_factory=dict)  # user_id -> UserProfile
    leaderboard_visits: frozenset = frozenset()
    scene_calendar: dict = field(default_factory=dict)  # scene_id -> (date, date)

    def episode_map(self):
        return {e.episode_id: e for e in self.episodes}

    def violations(self) -> list[str]:
        ids = {e.episode_id for e in self.episodes}
        out = []
        for eid in self.annotations:
            if eid not in ids:
                out.append(f"annotation references unknown episode {eid}")
        for eid in self.surveys:
            if eid not in ids:
                out.append(f"survey references unknown episode {eid}")
        return out


# ---------------------------------------------------------------------------
# validators

GRIPPER_RANGE = (0.0, 1.0)


def validate_episode(e: Episode, rig=None) -> list[str]:
    """Structural checks for one episode; empty list means clean.

    With a rig (ArmPairConfig), joint angles are checked against the model
    limits; the normalized gripper range is checked either way.
    """
    out = []
    if not e.frames:
        out.append("episode has no frames")
    prev_t = None
    for f in e.frames:
        where = f"frame {f.index}"
        if prev_t is not None and f.t <= prev_t:
            out.append(f"non-monotonic timestamp at {where}: {f.t} after {prev_t}")
        prev_t = f.t
        for side, joints in (("leader", f.leader), ("follower", f.follower)):
            if len(joints) != 14:
                out.append(f"{where}: {side} has {len(joints)} values, expected 14")
                continue
            if not all(math.isfinite(v) for v in joints):
                out.append(f"{where}: {side} contains non-finite values")
                continue
            for arm in range(2):
                ap = joints[arm * 7 + 6]
                if not GRIPPER_RANGE[0] <= ap <= GRIPPER_RANGE[1]:
                    out.append(f"{where}: {side} gripper aperture {ap} out of range")
            if rig is not None:
                models = (
                    (rig.leader_left, rig.leader_right)
                    if side == "leader"
                    else (rig.follower_left, rig.follower_right)
                )
                for arm, model in enumerate(models):
                    for j, (lo, hi) in enumerate(model.limits):
                        q = joints[arm * 7 + j]
                        if not lo <= q <= hi:
                            out.append(f"{where}: {side} joint out of range ({q} not in [{lo},{hi}])")
    return out


def validate_annotation(e: Episode, segments) -> list[str]:
    """Check that segments legally and exactly partition the episode's frames."""
    out = []
    n = len(e.frames)
    for s in segments:
        if s.quality not in LEGAL_QUALITIES[s.label.kind]:
            out.append(
                f"illegal quality {s.quality} for {s.label.kind.value} segment [{s.start},{s.end})"
            )
        if s.start < 0 or s.end > n:
            out.append(f"segment [{s.start},{s.end}) outside episode frames [0,{n})")
    ordered = sorted(segments, key=lambda s: s.start)
    cursor = 0
    for s in ordered:
        if s.start > cursor:
            out.append(f"gap {cursor}..{s.start}")
        elif s.start < cursor:
            out.append(f"overlap at {s.start}..{min(cursor, s.end)}")
        cursor = max(cursor, s.end)
    if cursor < n:
        out.append(f"gap {cursor}..{n}")
    return out


# ---------------------------------------------------------------------------
# the shipped scene catalog (two tasks per scene)

JELLY_BEAN_CHECKLIST = (
    "Retrieves Cup from Dispenser",
    "Places Cup Down",
    "Aligns Cup Under Lever",
    "Presses Lever",
    "Collects Jelly Beans in Cup",
    "Picks up Cup",
    "Brings Cup to End Zone",
)

ZIPLOC_CHECKLIST = (
    "Picks up Bag",
    "Places Bag in Center of Table",
    "Slides Open",
    "Picks Hi-Chew",
    "Brings Hi-Chew to End Zone",
    "Closes Bag",
    "Places Bag in Corner of Table",
)


def default_scenes() -> dict[str, SceneConfig]:
    """Three two-task scenes spanning easy bin-picking and hard long-horizon work."""
    a = SceneConfig(
        "A",
        (
            make_task("hi_chew", "A", "Pick up Hi-Chew", Difficulty.EASY, reward="Hi-Chew"),
            make_task("tootsie_roll", "A", "Pick up Tootsie Roll", Difficulty.EASY, reward="Tootsie Roll"),
        ),
    )
    b = SceneConfig(
        "B",
        (
            make_task("hershey_kiss", "B", "Pick up Hershey Kiss", Difficulty.EASY, reward="Hershey Kiss"),
            make_task(
                "jelly_bean",
                "B",
                "Dispense Jelly Beans into a Cup",
                Difficulty.HARD,
                reward="Jelly Beans",
                checklist=JELLY_BEAN_CHECKLIST,
            ),
        ),
    )
    c = SceneConfig(
        "C",
        (
            make_task("hi_chew_bin", "C", "Pick up Hi-Chew from Bin", Difficulty.EASY, reward="Hi-Chew"),
            make_task(
                "hi_chew_ziploc",
                "C",
                "Open Ziploc, Pick Hi-Chew, Close Ziploc",
                Difficulty.HARD,
                reward="Hi-Chew",
                checklist=ZIPLOC_CHECKLIST,
            ),
        ),
    )
    return {"A": a, "B": b, "C": c}
