"""Versioned wire messages between kiosk clients, the session service, and
the simulated controller.

Every frame carries one JSON object with a ``protocol_version`` and a
``type`` field; the remaining fields are exactly the message's fields,
documented in docs/wire_format.md. decode(encode(m)) == m for every
message. Unknown message types decode to an Error value with code
UNSUPPORTED; malformed frames and version mismatches raise ProtocolError.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, fields

PROTOCOL_VERSION = 1

MALFORMED = "MALFORMED"
VERSION = "VERSION"
UNSUPPORTED = "UNSUPPORTED"


class ProtocolError(ValueError):
    def __init__(self, code, message):
        super().__init__(f"{code}: {message}")
        self.code = code
        self.message = message


# ---------------------------------------------------------------------------
# client -> server


@dataclass(frozen=True)
class CardTap:
    user_id: str


@dataclass(frozen=True)
class CreateUser:
    nickname: str


@dataclass(frozen=True)
class ConsentGiven:
    pass


@dataclass(frozen=True)
class TutorialEvent:
    """User acknowledgement; doubles as the generic continue/back action."""

    ack: bool = True


@dataclass(frozen=True)
class StartPlaying:
    pass


@dataclass(frozen=True)
class SelectTask:
    task_id: str


@dataclass(frozen=True)
class LeaderCommand:
    seq: int
    joints: tuple  # 14 values


@dataclass(frozen=True)
class StopEpisode:
    pass


@dataclass(frozen=True)
class MarkResult:
    success: bool


@dataclass(frozen=True)
class SurveySubmit:
    intuitive: int
    interesting: int
    wanted: int


@dataclass(frozen=True)
class LeaderboardOpen:
    pass


@dataclass(frozen=True)
class RequestHelp:
    pass


@dataclass(frozen=True)
class Feedback:
    text: str


# ---------------------------------------------------------------------------
# server -> client


@dataclass(frozen=True)
class PageDirective:
    page: str
    payload: dict


@dataclass(frozen=True)
class Telemetry:
    tick: int
    leader: tuple
    follower: tuple
    collision: str  # Clear | Warning | Violation
    min_clearance: float


@dataclass(frozen=True)
class CollisionAlarm:
    on: bool


@dataclass(frozen=True)
class EpisodeClosed:
    termination: str
    points_awarded: int


@dataclass(frozen=True)
class LeaderboardData:
    entries: tuple  # of {user_id, nickname, total_points, rank} dicts


@dataclass(frozen=True)
class TimerUpdate:
    seconds_remaining: int


@dataclass(frozen=True)
class Error:
    code: str
    message: str


CLIENT_TYPES = (
    CardTap,
    CreateUser,
    ConsentGiven,
    TutorialEvent,
    StartPlaying,
    SelectTask,
    LeaderCommand,
    StopEpisode,
    MarkResult,
    SurveySubmit,
    LeaderboardOpen,
    RequestHelp,
    Feedback,
)
SERVER_TYPES = (
    PageDirective,
    Telemetry,
    CollisionAlarm,
    EpisodeClosed,
    LeaderboardData,
    TimerUpdate,
    Error,
)
_BY_NAME = {cls.__name__: cls for cls in CLIENT_TYPES + SERVER_TYPES}

_TUPLE_FIELDS = {"joints", "leader", "follower", "entries"}
_JOINT_COUNT = 14


def encode(msg) -> bytes:
    """One JSON object per frame, UTF-8, fixed field order."""
    if type(msg) not in _BY_NAME.values():
        raise ProtocolError(UNSUPPORTED, f"cannot encode {type(msg).__name__}")
    obj = {"protocol_version": PROTOCOL_VERSION, "type": type(msg).__name__}
    for f in fields(msg):
        v = getattr(msg, f.name)
        obj[f.name] = list(v) if isinstance(v, tuple) else v
    return json.dumps(obj, separators=(",", ":")).encode("utf-8")


def decode(data: bytes):
    """Parse one frame back into a message value."""
    try:
        obj = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ProtocolError(MALFORMED, f"frame is not valid JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise ProtocolError(MALFORMED, "frame must be a JSON object")
    version = obj.pop("protocol_version", None)
    if version != PROTOCOL_VERSION:
        raise ProtocolError(VERSION, f"protocol_version {version!r}, expected {PROTOCOL_VERSION}")
    name = obj.pop("type", None)
    cls = _BY_NAME.get(name)
    if cls is None:
        return Error(code=UNSUPPORTED, message=f"unknown message type {name!r}")
    declared = {f.name for f in fields(cls)}
    if set(obj) != declared:
        missing = declared - set(obj)
        extra = set(obj) - declared
        raise ProtocolError(
            MALFORMED, f"{name}: missing fields {sorted(missing)}, unexpected {sorted(extra)}"
        )
    for key in _TUPLE_FIELDS & declared:
        if not isinstance(obj[key], list):
            raise ProtocolError(MALFORMED, f"{name}.{key} must be a list")
        obj[key] = tuple(obj[key])
    msg = _construct(cls, obj)
    _validate(msg)
    return msg


def _construct(cls, obj):
    try:
        return cls(**obj)
    except TypeError as exc:
        raise ProtocolError(MALFORMED, str(exc)) from None


def _validate(msg):
    if isinstance(msg, LeaderCommand):
        if len(msg.joints) != _JOINT_COUNT:
            raise ProtocolError(
                MALFORMED, f"LeaderCommand needs {_JOINT_COUNT} joints, got {len(msg.joints)}"
            )
        if not all(isinstance(v, (int, float)) and math.isfinite(v) for v in msg.joints):
            raise ProtocolError(MALFORMED, "LeaderCommand joints must be finite numbers")
        if not isinstance(msg.seq, int):
            raise ProtocolError(MALFORMED, "LeaderCommand.seq must be an integer")
    elif isinstance(msg, Telemetry):
        for side in (msg.leader, msg.follower):
            if len(side) != _JOINT_COUNT:
                raise ProtocolError(MALFORMED, "Telemetry joint vectors must have 14 values")
    elif isinstance(msg, SurveySubmit):
        for name in ("intuitive", "interesting", "wanted"):
            v = getattr(msg, name)
            if not isinstance(v, int) or not 1 <= v <= 5:
                raise ProtocolError(MALFORMED, f"SurveySubmit.{name} must be an integer in 1..5")
