"""A whole kiosk visit, scripted end to end against the real simulation.

Card tap, profile, consent, four-stage interactive tutorial (driven by
scripted leader motion, observed by the simulation), one demonstration
with the countdown running, self-marking, survey, points, leaderboard.
Episode files land in ./demo-data.
"""

import shutil
from datetime import datetime, timedelta

import crowdkiosk.protocol as wire
from crowdkiosk import EpisodeStore, Kiosk, default_scenes
from crowdkiosk.session import Page, RobotRig, leaderboard
from crowdkiosk.trajectories import teleop_wiggle, tutorial_script
from crowdkiosk.tutorial import TutorialPhase

DATA_DIR = "./demo-data"
shutil.rmtree(DATA_DIR, ignore_errors=True)


class Clock:
    def __init__(self):
        self.now = datetime(2024, 11, 4, 12, 57, 0)

    def __call__(self):
        return self.now

    def advance(self, s):
        self.now += timedelta(seconds=s)


clock = Clock()
rig = RobotRig()
kiosk = Kiosk(scene=default_scenes()["A"], store=EpisodeStore(DATA_DIR), rig=rig, clock=clock)
seq = 0


def say(out):
    for m in out:
        if isinstance(m, wire.PageDirective):
            print(f"  -> page {m.page}")
        elif isinstance(m, wire.EpisodeClosed):
            print(f"  -> episode closed ({m.termination}), +{m.points_awarded} points")


def ticks(n, commands=None):
    global seq
    for k in range(n):
        if commands is not None:
            seq += 1
            kiosk.transition(wire.LeaderCommand(seq=seq, joints=tuple(commands[k])))
        kiosk.tick()
        clock.advance(0.02)


print("new visitor taps their card:")
say(kiosk.transition(wire.CardTap(user_id="card-0451")))
say(kiosk.transition(wire.CreateUser(nickname="lunchbreak")))
say(kiosk.transition(wire.ConsentGiven()))

print("interactive tutorial:")
say(kiosk.transition(wire.TutorialEvent(ack=True)))
while rig.busy:  # arms rise to home
    ticks(1)
script = tutorial_script(rig.sim.config)
for k in range(len(script)):
    before = kiosk.session.tutorial.phase
    ticks(1, [script[k]])
    after = kiosk.session.tutorial.phase
    if after is not before:
        print(f"  stage -> {after.value}")
assert kiosk.session.tutorial.phase is TutorialPhase.DONE_VIDEO
while rig.busy:  # arms lower onto the rest cradle
    ticks(1)
say(kiosk.transition(wire.TutorialEvent(ack=True)))

print("picking a task:")
say(kiosk.transition(wire.StartPlaying()))
say(kiosk.transition(wire.SelectTask(task_id="hi_chew")))
say(kiosk.transition(wire.StartPlaying()))
while rig.busy:
    ticks(1)

print("teleoperating for 20 simulated seconds...")
ticks(1000, teleop_wiggle(rig.sim.config, 1000))
say(kiosk.transition(wire.StopEpisode()))
say(kiosk.transition(wire.MarkResult(success=True)))
say(kiosk.transition(wire.SurveySubmit(intuitive=4, interesting=5, wanted=4)))
assert kiosk.session.page is Page.MAIN

print()
print("leaderboard:")
for row in leaderboard(kiosk.ledger, kiosk.users):
    print(f"  #{row.rank} {row.nickname:<12} {row.total_points} points")

store = kiosk.store
print(f"episodes on disk: {store.episode_ids()}")
for eid in store.episode_ids():
    e = store.read_episode(eid)
    kind = e.task_id or "tutorial"
    print(f"  {eid}: {kind}, {len(e.frames)} frames, ended by {e.termination.value}")
