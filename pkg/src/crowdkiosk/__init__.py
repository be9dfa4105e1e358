"""Simulation-backed crowdsourced robot-demonstration kiosk.

A library of composable pieces: a deterministic bimanual arm simulation
with capsule collision checking, a gamified kiosk session machine, durable
episode recording, a rule-based annotation engine, and the analytics that
run over collected datasets. The networked service lives in
crowdkiosk.server; the analytics CLI in crowdkiosk.cli.
"""

from .annotation import (
    AnnotationDraft,
    AnnotationError,
    begin_annotation,
    commit,
    derive_quality,
    set_segment,
    smoothness_heuristic,
)
from .analytics import (
    AnalyticsError,
    CompositionReport,
    composition,
    leaderboard_cohort_compare,
    likert_aggregate,
    normalized_return,
    normalized_return_batch,
    play_fraction,
    task_time_ratio,
    tutorial_vs_task_quality,
    usage_stats,
)
from .arm import ArmModel, ArmPairConfig, JointLimitError, forward_kinematics, load_arm_pair
from .fixture import build_reference_dataset, write_reference_dataset
from .geometry import Capsule, capsule_distance, segment_segment_distance
from .model import (
    AnnotationSegment,
    CollisionFlag,
    DatasetIndex,
    Difficulty,
    Episode,
    EventTally,
    Frame,
    Label,
    LabelKind,
    LeaderboardEntry,
    PointLedgerEntry,
    SceneConfig,
    SurveyResponse,
    TaskSpec,
    Termination,
    UserProfile,
    default_scenes,
    validate_annotation,
    validate_episode,
)
from .session import Kiosk, Page, PointsLedger, RobotRig, award_points, leaderboard
from .sim import ArmPairSim, Phase, SimState
from .stats import Method, UTestResult, mann_whitney_u
from .store import EpisodeStore, StoreError
from .tutorial import SimObservation, TutorialPhase, TutorialStage, tutorial_step

__version__ = "0.1.0"
