"""Kiosk application flow: sign-in, consent, tutorial gating, task
selection, episode lifecycle, marking, survey, points and leaderboard.

The Kiosk owns all mutable state and is driven from exactly two entry
points: transition() for client/internal events and tick() for the 50Hz
controller step. Both are synchronous and deterministic given the
injected clock, so a scripted session replays byte-identically.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from datetime import datetime

from . import protocol as wire
from .model import (
    Episode,
    Frame,
    PointLedgerEntry,
    LeaderboardEntry,
    SceneConfig,
    SurveyResponse,
    TaskSpec,
    Termination,
    UserProfile,
)
from .sim import ArmPairSim, CollisionFlag, Phase, SimState
from .store import EpisodeStore
from .tutorial import SimObservation, TutorialPhase, TutorialStage, stage_payload, tutorial_step


class Page(enum.Enum):
    IDLE = "Idle"
    SIGN_IN_NEW_USER = "SignInNewUser"
    MAIN = "Main"
    CONSENT = "Consent"
    TUTORIAL = "Tutorial"
    TASK_PAGE = "TaskPage"
    TASK_DETAIL = "TaskDetail"
    TELEOP = "Teleop"
    RESULT_MARK = "ResultMark"
    SURVEY = "Survey"
    LEADERBOARD = "Leaderboard"
    REQUEST_HELP = "RequestHelp"
    FEEDBACK = "Feedback"


# internal events, raised by tick() and usable directly in tests
@dataclass(frozen=True)
class MechanicalStop:
    pass


@dataclass(frozen=True)
class TimerExpired:
    pass


@dataclass(frozen=True)
class SafetyStop:
    pass


@dataclass(frozen=True)
class IdleTimeout:
    pass


ILLEGAL_EVENT = "ILLEGAL_EVENT"
EMPTY_TEXT = "EMPTY_TEXT"
UNKNOWN_TASK = "UNKNOWN_TASK"


def award_points(task: TaskSpec, success: bool) -> int:
    """Points for one marked demonstration attempt."""
    return task.points_on_success if success else 0


class PointsLedger:
    """Cumulative award tracking with first-achievement tie-breaking."""

    def __init__(self, store: EpisodeStore):
        self._store = store
        self.totals = {}
        self.reached_at = {}  # user_id -> when the current total was first reached
        for entry in store.read_ledger():
            self.totals[entry.user_id] = entry.cumulative
            if entry.points_awarded > 0:
                self.reached_at[entry.user_id] = entry.at

    def award(self, user_id, episode_id, points, at) -> PointLedgerEntry:
        total = self.totals.get(user_id, 0) + points
        entry = PointLedgerEntry(user_id, episode_id, points, total, at)
        self._store.append_ledger(entry)
        self.totals[user_id] = total
        if points > 0:
            self.reached_at[user_id] = at
        return entry

    def total(self, user_id) -> int:
        return self.totals.get(user_id, 0)


def leaderboard(ledger: PointsLedger, users: dict) -> list[LeaderboardEntry]:
    """Descending totals; ties go to whoever reached the total first."""
    far_future = datetime.max
    rows = sorted(
        ledger.totals.items(),
        key=lambda kv: (-kv[1], ledger.reached_at.get(kv[0], far_future), kv[0]),
    )
    out = []
    for rank, (user_id, total) in enumerate(rows, start=1):
        profile = users.get(user_id)
        out.append(
            LeaderboardEntry(
                user_id=user_id,
                nickname=profile.nickname if profile else user_id,
                total_points=total,
                rank=rank,
            )
        )
    return out


class RobotRig:
    """ArmPairSim plus lifecycle sequencing (raise/lower queues)."""

    def __init__(self, sim: ArmPairSim | None = None):
        self.sim = sim if sim is not None else ArmPairSim()
        self.state: SimState = self.sim.initial_state()
        self._pending = deque()

    @property
    def busy(self) -> bool:
        return bool(self._pending)

    def begin_raise(self):
        if self.state.phase is Phase.LOWERED and not self._pending:
            self._pending.extend(self.sim.raise_to_home(self.state))

    def begin_lower(self):
        if self.state.phase in (Phase.HOME, Phase.TELEOP) and not self._pending:
            self._pending.extend(self.sim.lower_to_rest(self.state))

    def start_teleop(self):
        if self.state.phase is Phase.HOME:
            self.state = self.sim.start_teleop(self.state)

    def tick(self, command) -> SimState:
        if self._pending:
            self.state = self._pending.popleft()
        elif self.state.phase in (Phase.HOME, Phase.TELEOP):
            self.state = self.sim.step(self.state, command if command is not None else self.state.leader)
        return self.state

    def observation(self) -> SimObservation:
        s = self.state
        left, right = self.sim.table_touch(s)
        return SimObservation(
            phase_home=s.phase is Phase.HOME,
            grippers_squeezed=self.sim.grippers_squeezed(s),
            left_touch=left,
            right_touch=right,
            rest_on_stop=self.sim.rest_on_stop(s),
        )

    def rest_on_stop(self) -> bool:
        return self.sim.rest_on_stop(self.state)

    def home_pose(self):
        return self.sim.config.full_home()

    def chain_description(self) -> dict:
        """Geometry the UI needs to draw a 2-D schematic of the arms."""
        c = self.sim.config
        model = c.follower_left
        return {
            "axes": [list(a) for a in model.axes],
            "offsets": [list(o) for o in model.offsets],
            "finger_length": model.finger_length,
            "bases": {
                "follower_left": {"position": list(c.follower_left.base_position), "yaw": c.follower_left.base_yaw},
                "follower_right": {"position": list(c.follower_right.base_position), "yaw": c.follower_right.base_yaw},
                "leader_left": {"position": list(c.leader_left.base_position), "yaw": c.leader_left.base_yaw},
                "leader_right": {"position": list(c.leader_right.base_position), "yaw": c.leader_right.base_yaw},
            },
            "table_z": c.table_z,
        }


class _Recorder:
    """Open episode accumulating frames between open and close."""

    def __init__(self, episode_id, user_id, scene_id, task_id, started_at):
        self.episode_id = episode_id
        self.user_id = user_id
        self.scene_id = scene_id
        self.task_id = task_id
        self.started_at = started_at
        self.frames = []
        self.termination = None

    @property
    def closed(self) -> bool:
        return self.termination is not None

    def append(self, sim_state: SimState):
        if self.closed:
            raise RuntimeError("episode already closed")
        i = len(self.frames)
        self.frames.append(
            Frame(
                index=i,
                t=20 * i,
                leader=sim_state.leader,
                follower=sim_state.follower,
                collision_flag=sim_state.collision,
            )
        )

    def close(self, termination: Termination, sim_state: SimState):
        if self.closed:
            raise RuntimeError("episode already closed")
        if not self.frames:
            self.append(sim_state)  # commit invariant: frames nonempty
        self.termination = termination

    def to_episode(self, success) -> Episode:
        return Episode(
            episode_id=self.episode_id,
            user_id=self.user_id,
            scene_id=self.scene_id,
            task_id=self.task_id,
            start_wallclock=self.started_at,
            frames=tuple(self.frames),
            termination=self.termination,
            self_reported_success=success,
        )


@dataclass
class SessionState:
    page: Page = Page.IDLE
    user: UserProfile | None = None
    pending_card: str | None = None
    task_id: str | None = None
    episode_id: str | None = None
    tutorial: TutorialStage = field(default_factory=TutorialStage)


class Kiosk:
    """One seat: a scene, a robot rig, a store, and the session machine."""

    def __init__(
        self,
        scene: SceneConfig,
        store: EpisodeStore,
        rig: RobotRig | None = None,
        clock=datetime.now,
        timer_seconds=300,
        idle_timeout_seconds=120,
        telemetry_decimation=1,
        safety_stop_ticks=150,
    ):
        self.scene = scene
        self.store = store
        self.rig = rig if rig is not None else RobotRig()
        self.clock = clock
        self.timer_seconds = timer_seconds
        self.idle_timeout_seconds = idle_timeout_seconds
        self.decimation = telemetry_decimation
        self.safety_stop_ticks = safety_stop_ticks

        self.session = SessionState()
        self.users = {u.user_id: u for u in store.read_users()}
        self.ledger = PointsLedger(store)
        self.alarm_on = False
        self.last_seq = -1
        self._latest_command = None
        self._recorder: _Recorder | None = None
        self._marked: _Recorder | None = None  # closed, awaiting success mark
        self._marked_success: bool | None = None
        self._timer_ticks = 0
        self._violation_run = 0
        self._rest_armed = False
        self._tick_count = 0
        self._last_activity = clock()
        self._episode_seq = self._initial_episode_seq()

    # ------------------------------------------------------------------
    # event handling

    def transition(self, ev) -> list:
        """Apply one client message or internal event; returns server messages."""
        self._last_activity = self.clock()
        handler = self._HANDLERS.get((self.session.page, type(ev)))
        if handler is None:
            return [wire.Error(code=ILLEGAL_EVENT, message=f"{type(ev).__name__} is not available on {self.session.page.value}")]
        return handler(self, ev)

    def reset_seq(self):
        """New authoritative connection: command ordering restarts."""
        self.last_seq = -1

    # -- Idle / sign-in ------------------------------------------------

    def _on_card_tap(self, ev):
        out = self._abandon_session()
        profile = self.users.get(ev.user_id)
        if profile is None:
            self.session = SessionState(page=Page.SIGN_IN_NEW_USER, pending_card=ev.user_id)
            return out + [self._page(Page.SIGN_IN_NEW_USER, {"user_id": ev.user_id})]
        self.session = SessionState(page=Page.MAIN, user=profile)
        if not profile.consented:
            self.session.page = Page.CONSENT
            return out + [self._page(Page.CONSENT, {"nickname": profile.nickname})]
        return out + [self._main_page()]

    def _on_create_user(self, ev):
        profile = UserProfile(
            user_id=self.session.pending_card,
            nickname=ev.nickname,
            consented=False,
            tutorial_completed=False,
            created_at=self.clock(),
        )
        self.users[profile.user_id] = profile
        self.store.upsert_user(profile)
        self.session = SessionState(page=Page.CONSENT, user=profile)
        return [self._page(Page.CONSENT, {"nickname": profile.nickname})]

    def _on_consent(self, ev):
        user = self.session.user
        user.consented = True
        self.store.upsert_user(user)
        self.session.page = Page.MAIN
        return [self._main_page()]

    # -- Main hub --------------------------------------------------------

    def _on_start_playing(self, ev):
        user = self.session.user
        if not (user.consented and user.tutorial_completed):
            return [wire.Error(code=ILLEGAL_EVENT, message="complete the consent form and tutorial first")]
        self.session.page = Page.TASK_PAGE
        return [self._task_page()]

    def _on_tutorial_entry(self, ev):
        # the acknowledge event doubles as "enter the interactive tutorial"
        user = self.session.user
        if not user.consented:
            return [wire.Error(code=ILLEGAL_EVENT, message="consent is required before the tutorial")]
        self.session.page = Page.TUTORIAL
        self.session.tutorial = TutorialStage()
        self._latest_command = None  # a stale pose must not leak into the tutorial
        self.rig.begin_raise()
        payload = stage_payload(self.session.tutorial)
        payload["chain"] = self._chain_payload()
        return [self._page(Page.TUTORIAL, payload)]

    def _on_leaderboard_open(self, ev):
        user = self.session.user
        self.store.record_visit(user.user_id)
        self.session.page = Page.LEADERBOARD
        return [self._page(Page.LEADERBOARD, {}), self._leaderboard_data()]

    def _on_request_help(self, ev):
        user_id = self.session.user.user_id if self.session.user else None
        self.store.append_help_request(user_id, self.clock())
        self.session.page = Page.REQUEST_HELP
        return [self._page(Page.REQUEST_HELP, {"acknowledged": True})]

    def _on_feedback(self, ev):
        if not ev.text.strip():
            return [wire.Error(code=EMPTY_TEXT, message="feedback text is empty")]
        user_id = self.session.user.user_id if self.session.user else None
        self.store.append_feedback(user_id, ev.text, self.clock())
        self.session.page = Page.FEEDBACK
        return [self._page(Page.FEEDBACK, {"received": True})]

    def _on_back_to_main(self, ev):
        self.session.page = Page.MAIN
        return [self._main_page()]

    def _on_tutorial_ack(self, ev):
        if self.session.tutorial.phase is not TutorialPhase.DONE_VIDEO:
            return [wire.Error(code=ILLEGAL_EVENT, message="the tutorial is still in progress")]
        self.session.page = Page.MAIN
        return [self._main_page()]

    # -- Task selection ----------------------------------------------------

    def _on_select_task(self, ev):
        try:
            task = self.scene.task(ev.task_id)
        except KeyError:
            return [wire.Error(code=UNKNOWN_TASK, message=f"no task {ev.task_id!r} in scene {self.scene.scene_id}")]
        self.session.page = Page.TASK_DETAIL
        self.session.task_id = task.task_id
        return [self._page(Page.TASK_DETAIL, {"task": _task_payload(task), "timer_seconds": self.timer_seconds})]

    def _on_back_to_task_page(self, ev):
        self.session.page = Page.TASK_PAGE
        self.session.task_id = None
        return [self._task_page()]

    def _on_begin_demo(self, ev):
        user = self.session.user
        if not (user.consented and user.tutorial_completed):
            return [wire.Error(code=ILLEGAL_EVENT, message="complete the consent form and tutorial first")]
        self.session.page = Page.TELEOP
        self.session.episode_id = self._next_episode_id()
        self._recorder = _Recorder(
            self.session.episode_id,
            user.user_id,
            self.scene.scene_id,
            self.session.task_id,
            self.clock(),
        )
        self._timer_ticks = self.timer_seconds * 50
        self._violation_run = 0
        self._latest_command = None  # the previous episode's pose must not replay
        self._rest_armed = False  # resting can end the episode only after leaving the stops
        self.rig.begin_raise()
        return [
            self._page(
                Page.TELEOP,
                {
                    "task_id": self.session.task_id,
                    "episode_id": self.session.episode_id,
                    "timer_seconds": self.timer_seconds,
                    "home_pose": list(self.rig.home_pose()),
                    "chain": self._chain_payload(),
                },
            ),
            wire.TimerUpdate(seconds_remaining=self.timer_seconds),
        ]

    # -- Teleop ------------------------------------------------------------

    def _on_leader_command(self, ev):
        if ev.seq <= self.last_seq:
            return []  # out-of-order commands are dropped, never applied
        self.last_seq = ev.seq
        self._latest_command = ev.joints
        return []

    def _on_stop_episode(self, ev):
        return self._close_episode(Termination.STOP_BUTTON)

    def _on_mechanical_stop(self, ev):
        return self._close_episode(Termination.MECHANICAL_STOP)

    def _on_timer_expired(self, ev):
        return self._close_episode(Termination.TIMEOUT)

    def _on_safety_stop(self, ev):
        return self._close_episode(Termination.SAFETY_STOP)

    def _close_episode(self, termination) -> list:
        rec = self._recorder
        rec.close(termination, self.rig.state)
        self._recorder = None
        self._latest_command = None
        self._marked = rec
        self.session.page = Page.RESULT_MARK
        out = []
        if self.alarm_on:
            self.alarm_on = False
            out.append(wire.CollisionAlarm(on=False))
        out.append(
            self._page(Page.RESULT_MARK, {"episode_id": rec.episode_id, "termination": termination.value})
        )
        return out

    # -- Marking and survey ---------------------------------------------------

    def _on_mark_result(self, ev):
        rec = self._marked
        task = self.scene.task(rec.task_id)
        points = award_points(task, ev.success)
        entry = self.ledger.award(rec.user_id, rec.episode_id, points, self.clock())
        episode = rec.to_episode(ev.success)
        self.store.write_episode(episode)
        self._marked_success = ev.success
        self.session.page = Page.SURVEY
        return [
            wire.EpisodeClosed(termination=rec.termination.value, points_awarded=entry.points_awarded),
            self._page(Page.SURVEY, {"episode_id": rec.episode_id}),
        ]

    def _on_survey_submit(self, ev):
        rec = self._marked
        survey = SurveyResponse(
            episode_id=rec.episode_id,
            success=bool(self._marked_success),
            intuitive=ev.intuitive,
            interesting=ev.interesting,
            wanted=ev.wanted,
        )
        self.store.write_survey(survey)
        self._marked = None
        self._marked_success = None
        self.session.page = Page.MAIN
        self.session.task_id = None
        self.session.episode_id = None
        return [self._main_page()]

    # -- hygiene ------------------------------------------------------------

    def _on_idle_timeout(self, ev):
        out = self._abandon_session()
        self.session = SessionState()
        return out + [self._page(Page.IDLE, {})]

    def _abandon_session(self) -> list:
        """Close and persist anything in flight, lower the arms."""
        out = []
        if self._recorder is not None:
            self._recorder.close(Termination.TIMEOUT, self.rig.state)
            self._marked = self._recorder
            self._recorder = None
        self._latest_command = None
        if self._marked is not None:
            if self._marked.task_id is not None:
                # unmarked demonstrations earn nothing
                self.ledger.award(self._marked.user_id, self._marked.episode_id, 0, self.clock())
            self.store.write_episode(self._marked.to_episode(None))
            self._marked = None
            self._marked_success = None
        if self.alarm_on:
            self.alarm_on = False
            out.append(wire.CollisionAlarm(on=False))
        self.rig.begin_lower()
        return out

    # ------------------------------------------------------------------
    # the 50Hz tick

    def tick(self) -> list:
        out = []
        self._tick_count += 1

        if self.rig.busy:
            state = self.rig.tick(None)
            out += self._emit_motion(state)
        elif self.session.page is Page.TUTORIAL:
            out += self._tutorial_tick()
        elif self.session.page is Page.TELEOP:
            out += self._teleop_tick()

        if self.session.page is not Page.IDLE and self._idle_expired():
            out += self.transition(IdleTimeout())
        return out

    def _tutorial_tick(self) -> list:
        out = []
        if self.rig.state.phase is Phase.LOWERED and not self.rig.busy:
            # a begin_raise raced an in-flight lowering ramp; raise now
            self.rig.begin_raise()
            state = self.rig.tick(None)
            return self._emit_motion(state)
        state = self.rig.tick(self._latest_command)
        out += self._emit_motion(state)
        stage = self.session.tutorial
        new_stage = tutorial_step(stage, self.rig.observation())
        if new_stage != stage:
            self.session.tutorial = new_stage
            if new_stage.phase is TutorialPhase.TOUCH_TABLE and stage.phase is TutorialPhase.SQUEEZE_TO_START:
                # squeeze starts puppeteering; tutorial motion is recorded
                self.rig.start_teleop()
                self.session.episode_id = self._next_episode_id()
                self._recorder = _Recorder(
                    self.session.episode_id,
                    self.session.user.user_id,
                    self.scene.scene_id,
                    None,
                    self.clock(),
                )
            if new_stage.phase is TutorialPhase.DONE_VIDEO:
                rec = self._recorder
                rec.close(Termination.MECHANICAL_STOP, state)
                self.store.write_episode(rec.to_episode(None))
                self._recorder = None
                self._latest_command = None
                self.session.episode_id = None
                user = self.session.user
                user.tutorial_completed = True
                self.store.upsert_user(user)
                self.rig.begin_lower()
            out.append(self._page(Page.TUTORIAL, stage_payload(new_stage)))
        if self._recorder is not None and not self.rig.busy:
            self._recorder.append(state)
        return out

    def _teleop_tick(self) -> list:
        out = []
        if self.rig.state.phase is Phase.LOWERED and not self.rig.busy:
            # a begin_raise raced an in-flight lowering ramp; raise now
            self.rig.begin_raise()
            state = self.rig.tick(None)
            return self._emit_motion(state)
        if self.rig.state.phase is Phase.HOME:
            self.rig.start_teleop()
        state = self.rig.tick(self._latest_command)
        out += self._emit_motion(state)
        self._recorder.append(state)

        if state.collision is CollisionFlag.VIOLATION:
            self._violation_run += 1
        else:
            self._violation_run = 0

        prev_seconds = -(-self._timer_ticks // 50)
        self._timer_ticks -= 1
        seconds = -(-self._timer_ticks // 50)
        if seconds != prev_seconds:
            out.append(wire.TimerUpdate(seconds_remaining=max(0, seconds)))

        resting = self.rig.rest_on_stop()
        if not resting:
            self._rest_armed = True
        if resting and self._rest_armed:
            out += self.transition(MechanicalStop())
        elif self._timer_ticks <= 0:
            out += self.transition(TimerExpired())
        elif self._violation_run >= self.safety_stop_ticks:
            out += self.transition(SafetyStop())
        return out

    def _emit_motion(self, state: SimState) -> list:
        out = []
        if state.tick % self.decimation == 0:
            out.append(
                wire.Telemetry(
                    tick=state.tick,
                    leader=state.leader,
                    follower=state.follower,
                    collision=state.collision.value,
                    min_clearance=state.min_clearance,
                )
            )
        alarm = state.collision in (CollisionFlag.WARNING, CollisionFlag.VIOLATION)
        if alarm != self.alarm_on:
            self.alarm_on = alarm
            out.append(wire.CollisionAlarm(on=alarm))
        return out

    # ------------------------------------------------------------------
    # helpers

    def _idle_expired(self) -> bool:
        return (self.clock() - self._last_activity).total_seconds() > self.idle_timeout_seconds

    def _chain_payload(self):
        describe = getattr(self.rig, "chain_description", None)
        return describe() if describe is not None else {}

    def _page(self, page: Page, payload: dict) -> wire.PageDirective:
        return wire.PageDirective(page=page.value, payload=payload)

    def _main_page(self) -> wire.PageDirective:
        u = self.session.user
        return self._page(
            Page.MAIN,
            {
                "nickname": u.nickname,
                "consented": u.consented,
                "tutorial_completed": u.tutorial_completed,
                "points": self.ledger.total(u.user_id),
            },
        )

    def _task_page(self) -> wire.PageDirective:
        return self._page(Page.TASK_PAGE, {"tasks": [_task_payload(t) for t in self.scene.tasks]})

    def _leaderboard_data(self) -> wire.LeaderboardData:
        entries = tuple(
            {
                "user_id": e.user_id,
                "nickname": e.nickname,
                "total_points": e.total_points,
                "rank": e.rank,
            }
            for e in leaderboard(self.ledger, self.users)
        )
        return wire.LeaderboardData(entries=entries)

    def _initial_episode_seq(self) -> int:
        existing = self.store.episode_ids()
        best = 0
        for eid in existing:
            tail = eid.rsplit("-", 1)[-1]
            if tail.isdigit():
                best = max(best, int(tail))
        return best

    def _next_episode_id(self) -> str:
        self._episode_seq += 1
        return f"ep-{self._episode_seq:06d}"

    # (page, event type) -> handler; anything absent is an illegal event
    _HANDLERS = {}


def _register_handlers():
    H = Kiosk._HANDLERS
    H[(Page.IDLE, wire.CardTap)] = Kiosk._on_card_tap
    H[(Page.SIGN_IN_NEW_USER, wire.CreateUser)] = Kiosk._on_create_user
    H[(Page.SIGN_IN_NEW_USER, wire.CardTap)] = Kiosk._on_card_tap
    H[(Page.CONSENT, wire.ConsentGiven)] = Kiosk._on_consent
    H[(Page.CONSENT, wire.CardTap)] = Kiosk._on_card_tap

    H[(Page.MAIN, wire.StartPlaying)] = Kiosk._on_start_playing
    H[(Page.MAIN, wire.TutorialEvent)] = Kiosk._on_tutorial_entry
    H[(Page.MAIN, wire.LeaderboardOpen)] = Kiosk._on_leaderboard_open
    H[(Page.MAIN, wire.RequestHelp)] = Kiosk._on_request_help
    H[(Page.MAIN, wire.Feedback)] = Kiosk._on_feedback
    H[(Page.MAIN, wire.CardTap)] = Kiosk._on_card_tap

    for page in (Page.LEADERBOARD, Page.REQUEST_HELP, Page.FEEDBACK):
        H[(page, wire.TutorialEvent)] = Kiosk._on_back_to_main
        H[(page, wire.CardTap)] = Kiosk._on_card_tap
    H[(Page.LEADERBOARD, wire.LeaderboardOpen)] = Kiosk._on_leaderboard_open

    H[(Page.TASK_PAGE, wire.SelectTask)] = Kiosk._on_select_task
    H[(Page.TASK_PAGE, wire.TutorialEvent)] = Kiosk._on_back_to_main
    H[(Page.TASK_PAGE, wire.CardTap)] = Kiosk._on_card_tap

    H[(Page.TASK_DETAIL, wire.SelectTask)] = Kiosk._on_select_task
    H[(Page.TASK_DETAIL, wire.StartPlaying)] = Kiosk._on_begin_demo
    H[(Page.TASK_DETAIL, wire.TutorialEvent)] = Kiosk._on_back_to_task_page
    H[(Page.TASK_DETAIL, wire.CardTap)] = Kiosk._on_card_tap

    H[(Page.TELEOP, wire.LeaderCommand)] = Kiosk._on_leader_command
    H[(Page.TELEOP, wire.StopEpisode)] = Kiosk._on_stop_episode
    H[(Page.TELEOP, MechanicalStop)] = Kiosk._on_mechanical_stop
    H[(Page.TELEOP, TimerExpired)] = Kiosk._on_timer_expired
    H[(Page.TELEOP, SafetyStop)] = Kiosk._on_safety_stop

    H[(Page.TUTORIAL, wire.LeaderCommand)] = Kiosk._on_leader_command
    H[(Page.TUTORIAL, wire.TutorialEvent)] = Kiosk._on_tutorial_ack

    H[(Page.RESULT_MARK, wire.MarkResult)] = Kiosk._on_mark_result
    H[(Page.SURVEY, wire.SurveySubmit)] = Kiosk._on_survey_submit

    for page in Page:
        H[(page, IdleTimeout)] = Kiosk._on_idle_timeout


_register_handlers()


def _task_payload(task: TaskSpec) -> dict:
    return {
        "task_id": task.task_id,
        "title": task.title,
        "difficulty": task.difficulty.value,
        "points_on_success": task.points_on_success,
        "reward": task.reward_descriptor,
        "subtasks": list(task.subtask_checklist),
    }
