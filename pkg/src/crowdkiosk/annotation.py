"""Quality-rule engine and segment-labeling workflow.

Scores are always derived from the annotator's event tally, never entered
directly. For task segments the severe conditions win: more than four
retries on one subtask, a scene change, or opposite-arm use force Q1; a
smooth completion with at most two retries and no slips earns Q3;
everything else task-relevant is Q2. Tutorial motion is Q2 when smooth
with no retrying, else Q1. Play is always Q0.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .model import Episode, EventTally, Label, LabelKind, AnnotationSegment, validate_annotation


class AnnotationError(Exception):
    def __init__(self, code, message, gaps=()):
        super().__init__(f"{code}: {message}")
        self.code = code
        self.gaps = tuple(gaps)


def derive_quality(label: Label, events: EventTally) -> int:
    if label.kind is LabelKind.PLAY:
        return 0
    if label.kind is LabelKind.TUTORIAL:
        if events.max_retries_per_subtask > 0 or not events.smooth:
            return 1
        return 2
    # task-relevant motion
    if events.max_retries_per_subtask > 4 or events.scene_change or events.opposite_arm:
        return 1
    if (
        events.completed
        and events.smooth
        and events.max_retries_per_subtask <= 2
        and not events.slight_error
    ):
        return 3
    return 2


def smoothness_heuristic(frames, dt=0.02, jerk_threshold=50.0) -> bool:
    """True when no joint's acceleration magnitude exceeds the threshold.

    Acceleration is the second difference of the leader joints over dt^2;
    the leader carries the user's raw hand motion, the follower is already
    servo-filtered. Advisory only: it prefills EventTally.smooth and the
    annotator can override. Requires at least 3 frames.
    """
    if len(frames) < 3:
        raise AnnotationError("SEGMENT_TOO_SHORT", "smoothness needs at least 3 frames")
    inv_dt2 = 1.0 / (dt * dt)
    worst = 0.0
    for k in range(2, len(frames)):
        a = frames[k - 2].leader
        b = frames[k - 1].leader
        c = frames[k].leader
        for j in range(14):
            accel = abs(c[j] - 2.0 * b[j] + a[j]) * inv_dt2
            if accel > worst:
                worst = accel
    return worst <= jerk_threshold


@dataclass(frozen=True)
class AnnotationDraft:
    """Work-in-progress labeling; segments stay disjoint after every edit."""

    episode: Episode
    segments: tuple = ()

    @property
    def frame_count(self):
        return len(self.episode.frames)

    def gaps(self):
        out = []
        cursor = 0
        for s in sorted(self.segments, key=lambda s: s.start):
            if s.start > cursor:
                out.append((cursor, s.start))
            cursor = max(cursor, s.end)
        if cursor < self.frame_count:
            out.append((cursor, self.frame_count))
        return out


def begin_annotation(episode: Episode) -> AnnotationDraft:
    return AnnotationDraft(episode=episode)


def set_segment(draft: AnnotationDraft, start, end, label: Label, events=None) -> AnnotationDraft:
    """Label [start, end); overlapped parts of prior segments are replaced.

    With events=None the tally is prefilled: smooth comes from the
    heuristic when the span is long enough, everything else defaults.
    """
    n = draft.frame_count
    if not (0 <= start < end <= n):
        raise AnnotationError("RANGE", f"segment [{start},{end}) outside frames [0,{n})")
    if events is None:
        span = draft.episode.frames[start:end]
        smooth = smoothness_heuristic(span) if len(span) >= 3 else True
        events = EventTally(smooth=smooth)
    quality = derive_quality(label, events)
    new_seg = AnnotationSegment(start, end, label, quality, events)

    kept = []
    for s in draft.segments:
        if s.end <= start or s.start >= end:
            kept.append(s)
            continue
        if s.start < start:
            kept.append(replace(s, end=start))
        if s.end > end:
            kept.append(replace(s, start=end))
    kept.append(new_seg)
    kept.sort(key=lambda s: s.start)
    return replace(draft, segments=tuple(kept))


def clear_segment(draft: AnnotationDraft, start, end) -> AnnotationDraft:
    """Remove labeling from [start, end), leaving a gap."""
    kept = []
    for s in draft.segments:
        if s.end <= start or s.start >= end:
            kept.append(s)
            continue
        if s.start < start:
            kept.append(replace(s, end=start))
        if s.end > end:
            kept.append(replace(s, start=end))
    return replace(draft, segments=tuple(sorted(kept, key=lambda s: s.start)))


def commit(draft: AnnotationDraft, store) -> tuple:
    """Validate full coverage and persist through the episode store."""
    gaps = draft.gaps()
    if gaps:
        listing = ", ".join(f"{a}..{b}" for a, b in gaps)
        raise AnnotationError("COVERAGE", f"unlabeled frames: {listing}", gaps=gaps)
    violations = validate_annotation(draft.episode, draft.segments)
    if violations:
        raise AnnotationError("INVALID", "; ".join(violations))
    store.attach_annotation(draft.episode.episode_id, list(draft.segments))
    return draft.segments
