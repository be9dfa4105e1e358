"""Tour of the bimanual arm simulation.

Raises the arms, teleoperates them with a scripted command stream, drives
them toward a collision to show the safety stop, and exercises the
squeeze / table-touch / rest detectors the tutorial relies on.
"""

from crowdkiosk import ArmPairSim, CollisionFlag, Phase
from crowdkiosk.trajectories import TOUCH_POSE, full, tutorial_script, with_aperture

sim = ArmPairSim()
state = sim.initial_state()
print(f"initial phase: {state.phase.value}, clearance {state.min_clearance * 100:.1f} cm")

# lifecycle: linear ramp from the rest cradle to the home pose
trajectory = sim.raise_to_home(state)
state = trajectory[-1]
worst = min(s.min_clearance for s in trajectory)
print(f"raised over {len(trajectory)} ticks; worst clearance on the way {worst * 100:.1f} cm")
assert state.phase is Phase.HOME

# teleoperation: the follower tracks the leader with a rate limit
state = sim.start_teleop(state)
target = list(sim.config.full_home())
target[1] += 0.35  # lean the left shoulder forward
for _ in range(60):
    state = sim.step(state, tuple(target))
print(f"follower tracked to within {max(abs(f - t) for f, t in zip(state.follower, target)):.2e} rad")

# command the arms into each other: the follower freezes instead of colliding
crossing = full((0.0, -0.2, 0.5, 0.0, 0.0, 0.0, 0.5))
for _ in range(300):
    state = sim.step(state, crossing)
print(
    f"crossing command -> flag {state.collision.value}, "
    f"clearance {state.min_clearance * 100:.2f} cm, follower held at a safe pose"
)
assert state.collision is CollisionFlag.VIOLATION
held_flag, _ = sim.collision_status_of(state.follower)
assert held_flag is not CollisionFlag.VIOLATION

# back off and recover
for _ in range(300):
    state = sim.step(state, sim.config.full_home())
print(f"after backing off: {state.collision.value}")

# detectors used by the interactive tutorial
state = sim.step(state, full(with_aperture(sim.config.home_pose[:6], 0.05)))
print(f"grippers squeezed: {sim.grippers_squeezed(state)}")

touch_cmd = full(with_aperture(TOUCH_POSE, 0.7))
for _ in range(120):
    state = sim.step(state, touch_cmd)
print(f"table touch (left, right): {sim.table_touch(state)}")

for cmd in tutorial_script(sim.config):
    state = sim.step(state, cmd)
print(f"rest on mechanical stop: {sim.rest_on_stop(state)}")
