"""Shared fixtures: deterministic clock, in-memory store, stub robot rig."""

from datetime import datetime, timedelta

import pytest

from crowdkiosk.model import validate_episode
from crowdkiosk.sim import Phase, SimState
from crowdkiosk.model import CollisionFlag
from crowdkiosk.tutorial import SimObservation


class FakeClock:
    def __init__(self, start=datetime(2024, 11, 4, 9, 0, 0)):
        self.now = start

    def __call__(self):
        return self.now

    def advance(self, seconds):
        self.now += timedelta(seconds=seconds)


class MemoryStore:
    """Store surface the Kiosk needs, kept in dicts for fast FSM soaks."""

    def __init__(self):
        self.episodes = {}
        self.surveys = {}
        self.ledger = []
        self.visit_set = set()
        self.users = {}
        self.help_requests = []
        self.feedback = []

    def read_users(self):
        return list(self.users.values())

    def upsert_user(self, profile):
        self.users[profile.user_id] = profile

    def read_ledger(self):
        return list(self.ledger)

    def append_ledger(self, entry):
        self.ledger.append(entry)

    def record_visit(self, user_id):
        self.visit_set.add(user_id)

    def visits(self):
        return frozenset(self.visit_set)

    def append_help_request(self, user_id, at):
        self.help_requests.append((user_id, at))

    def append_feedback(self, user_id, text, at):
        self.feedback.append((user_id, text, at))

    def write_episode(self, episode):
        violations = validate_episode(episode)
        assert not violations, violations
        assert episode.episode_id not in self.episodes, "episode written twice"
        self.episodes[episode.episode_id] = episode
        return episode.episode_id

    def write_survey(self, survey):
        self.surveys[survey.episode_id] = survey

    def episode_ids(self):
        return sorted(self.episodes)


NEUTRAL = (0.0, -1.0, 1.0, 0.0, 0.5, 0.0, 0.7) * 2


class FakeRig:
    """Scripted rig: phases advance instantly, detector bits come from a
    seeded RNG so random walks exercise alarms and stage transitions."""

    def __init__(self, rng):
        self.rng = rng
        self.state = SimState(
            leader=NEUTRAL,
            follower=NEUTRAL,
            follower_target=NEUTRAL,
            tick=0,
            phase=Phase.LOWERED,
            collision=CollisionFlag.CLEAR,
            min_clearance=0.11,
        )
        self.busy = False

    def begin_raise(self):
        if self.state.phase is Phase.LOWERED:
            self.state = self._with(phase=Phase.HOME)

    def begin_lower(self):
        if self.state.phase in (Phase.HOME, Phase.TELEOP):
            self.state = self._with(phase=Phase.LOWERED)

    def start_teleop(self):
        if self.state.phase is Phase.HOME:
            self.state = self._with(phase=Phase.TELEOP)

    def home_pose(self):
        return NEUTRAL

    def tick(self, command):
        r = self.rng.random()
        if r < 0.08:
            flag = CollisionFlag.VIOLATION
        elif r < 0.25:
            flag = CollisionFlag.WARNING
        else:
            flag = CollisionFlag.CLEAR
        leader = tuple(command) if command is not None else self.state.leader
        self.state = self._with(
            leader=leader, tick=self.state.tick + 1, collision=flag,
            min_clearance=0.11 if flag is CollisionFlag.CLEAR else 0.004,
        )
        return self.state

    def observation(self):
        return SimObservation(
            phase_home=self.state.phase in (Phase.HOME, Phase.TELEOP),
            grippers_squeezed=self.rng.random() < 0.35,
            left_touch=self.rng.random() < 0.35,
            right_touch=self.rng.random() < 0.35,
            rest_on_stop=self.rng.random() < 0.15,
        )

    def rest_on_stop(self):
        return self.rng.random() < 0.02

    def _with(self, **kw):
        from dataclasses import replace

        return replace(self.state, **kw)


@pytest.fixture
def fake_clock():
    return FakeClock()


@pytest.fixture
def memory_store():
    return MemoryStore()
