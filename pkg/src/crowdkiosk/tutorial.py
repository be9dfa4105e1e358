"""Four-stage onboarding automaton advanced by simulation observations.

Stage order: wait for the arms to reach home, squeeze both grippers to
start puppeteering, touch each arm to the table (a brief touch latches),
rest the grippers on the mechanical stops, then a closing video. Progress
is monotone; non-qualifying observations leave the stage unchanged.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace


class TutorialPhase(enum.Enum):
    WAIT_HOME = "WaitHome"
    SQUEEZE_TO_START = "SqueezeToStart"
    TOUCH_TABLE = "TouchTable"
    REST_ON_STOP = "RestOnStop"
    DONE_VIDEO = "DoneVideo"


_ORDER = list(TutorialPhase)


@dataclass(frozen=True)
class TutorialStage:
    phase: TutorialPhase = TutorialPhase.WAIT_HOME
    left_done: bool = False  # table-touch latches
    right_done: bool = False

    @property
    def index(self) -> int:
        return _ORDER.index(self.phase)


@dataclass(frozen=True)
class SimObservation:
    """Detector outputs sampled once per tick from the running simulation."""

    phase_home: bool = False
    grippers_squeezed: bool = False
    left_touch: bool = False
    right_touch: bool = False
    rest_on_stop: bool = False


def tutorial_step(stage: TutorialStage, obs: SimObservation) -> TutorialStage:
    """Advance at most one stage per observation."""
    p = stage.phase
    if p is TutorialPhase.WAIT_HOME:
        if obs.phase_home:
            return TutorialStage(TutorialPhase.SQUEEZE_TO_START)
    elif p is TutorialPhase.SQUEEZE_TO_START:
        if obs.grippers_squeezed:
            return TutorialStage(TutorialPhase.TOUCH_TABLE)
    elif p is TutorialPhase.TOUCH_TABLE:
        left = stage.left_done or obs.left_touch
        right = stage.right_done or obs.right_touch
        if left and right:
            return TutorialStage(TutorialPhase.REST_ON_STOP)
        if (left, right) != (stage.left_done, stage.right_done):
            return replace(stage, left_done=left, right_done=right)
    elif p is TutorialPhase.REST_ON_STOP:
        if obs.rest_on_stop:
            return TutorialStage(TutorialPhase.DONE_VIDEO)
    return stage


def stage_payload(stage: TutorialStage) -> dict:
    """PageDirective payload describing the stage for the UI."""
    return {
        "stage": stage.phase.value,
        "stage_index": stage.index,
        "left_done": stage.left_done,
        "right_done": stage.right_done,
    }
