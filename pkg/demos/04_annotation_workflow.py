"""Annotation: the quality rules, the smoothness prefill, and drafts."""

from datetime import datetime

from crowdkiosk import (
    CollisionFlag,
    Episode,
    EpisodeStore,
    EventTally,
    Frame,
    Label,
    Termination,
    begin_annotation,
    commit,
    derive_quality,
    set_segment,
)
from crowdkiosk.annotation import AnnotationError

print("quality rules on annotator event tallies:")
cases = [
    ("completed smoothly, 2 retries", Label.task("hi_chew"), EventTally(2, True, False, False, False, True)),
    ("completed, 4 retries on one subtask", Label.task("hi_chew"), EventTally(4, True, False, False, False, True)),
    ("5 retries on one subtask", Label.task("hi_chew"), EventTally(5, True, False, False, False, False)),
    ("grabbed two candies at once", Label.task("hi_chew"), EventTally(1, True, True, False, False, True)),
    ("used the opposite arm", Label.task("hi_chew"), EventTally(0, True, False, False, True, True)),
    ("dropped a candy on the table", Label.task("hi_chew"), EventTally(0, True, False, True, False, True)),
    ("tutorial, no retrying, smooth", Label.tutorial(), EventTally(0, True)),
    ("tutorial with retrying", Label.tutorial(), EventTally(1, True)),
    ("free play", Label.play(), EventTally()),
]
for text, label, events in cases:
    name = label.task_id or label.kind.value
    print(f"  {text:<38} -> {name} Q{derive_quality(label, events)}")

# a 200-frame episode: jerky first half, smooth second half
frames = []
value = 0.0
for i in range(200):
    if i < 100 and i % 7 == 0:
        value += 0.3  # sudden jumps
    elif i >= 100:
        value += 0.002  # gentle ramp
    joints = (value,) * 6 + (0.5,) + (value,) * 6 + (0.5,)  # grippers stay in range
    frames.append(Frame(i, 20 * i, joints, joints, CollisionFlag.CLEAR))
episode = Episode(
    episode_id="ep-demo",
    user_id="u-demo",
    scene_id="A",
    task_id="hi_chew",
    start_wallclock=datetime(2024, 11, 4, 13, 2),
    frames=tuple(frames),
    termination=Termination.STOP_BUTTON,
    self_reported_success=True,
)

store = EpisodeStore("./demo-data")
store.write_episode(episode)

draft = begin_annotation(episode)
# events=None lets the smoothness heuristic prefill the tally
draft = set_segment(draft, 0, 100, Label.play())
draft = set_segment(draft, 100, 200, Label.task("hi_chew"))
print()
print("heuristic prefill (advisory, annotator can override):")
for s in draft.segments:
    print(f"  [{s.start:3d},{s.end:3d}) {s.label.kind.value:<8} smooth={s.events.smooth} -> Q{s.quality}")

# overlapping edits split and truncate; the draft never overlaps itself
draft = set_segment(draft, 80, 120, Label.task("hi_chew"), EventTally(2, True, False, False, False, True))
print("after relabeling frames 80..120:")
for s in draft.segments:
    print(f"  [{s.start:3d},{s.end:3d}) {s.label.kind.value:<8} Q{s.quality}")

# commit requires exact coverage
from crowdkiosk.annotation import clear_segment

holey = clear_segment(draft, 150, 170)
try:
    commit(holey, store)
except AnnotationError as exc:
    print(f"commit with a hole -> {exc.code}, gaps {exc.gaps}")

segments = commit(draft, store)
print(f"committed {len(segments)} segments; sidecar on disk: annotations/ep-demo.json")
