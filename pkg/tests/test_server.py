"""Networked service: WS session flow, observer isolation, annotation API."""

import json
import random

import pytest
from fastapi.testclient import TestClient

import crowdkiosk.protocol as wire
from crowdkiosk.model import default_scenes
from crowdkiosk.server import create_app
from crowdkiosk.session import Kiosk
from crowdkiosk.store import EpisodeStore

from .conftest import FakeClock, FakeRig


@pytest.fixture
def app(tmp_path):
    kiosk = Kiosk(
        scene=default_scenes()["A"],
        store=EpisodeStore(tmp_path),
        rig=FakeRig(random.Random(4)),
        clock=FakeClock(),
    )
    return create_app(kiosk, run_ticker=False)


def send(ws, msg):
    ws.send_text(wire.encode(msg).decode())


def recv(ws):
    return wire.decode(ws.receive_text().encode())


def test_sign_in_over_websocket(app):
    with TestClient(app) as client:
        with client.websocket_connect("/ws") as ws:
            send(ws, wire.CardTap(user_id="u-42"))
            msg = recv(ws)
            assert isinstance(msg, wire.PageDirective) and msg.page == "SignInNewUser"
            send(ws, wire.CreateUser(nickname="tester"))
            msg = recv(ws)
            assert msg.page == "Consent"
            send(ws, wire.ConsentGiven())
            msg = recv(ws)
            assert msg.page == "Main" and msg.payload["consented"] is True


def test_malformed_frame_gets_error_reply(app):
    with TestClient(app) as client:
        with client.websocket_connect("/ws") as ws:
            ws.send_text(json.dumps({"protocol_version": 99, "type": "CardTap", "user_id": "x"}))
            msg = recv(ws)
            assert isinstance(msg, wire.Error) and msg.code == wire.VERSION


def test_observer_is_read_only(app):
    with TestClient(app) as client:
        with client.websocket_connect("/ws") as first:
            with client.websocket_connect("/ws") as second:
                send(second, wire.CardTap(user_id="u-1"))
                msg = recv(second)
                assert isinstance(msg, wire.Error) and msg.code == "OBSERVER"
                # authoritative actions produce page directives on both
                send(first, wire.CardTap(user_id="u-1"))
                assert recv(first).page == "SignInNewUser"
                assert recv(second).page == "SignInNewUser"


def test_annotation_api_round_trip(app):
    kiosk = app.state.kiosk
    # write an episode directly through the store
    from datetime import datetime

    from crowdkiosk.model import CollisionFlag, Episode, Frame, Termination

    frames = tuple(Frame(i, 20 * i, (0.0,) * 14, (0.0,) * 14, CollisionFlag.CLEAR) for i in range(50))
    kiosk.store.write_episode(
        Episode("ep-000001", "u-1", "A", "hi_chew", datetime(2024, 11, 4), frames,
                Termination.STOP_BUTTON, True)
    )
    with TestClient(app) as client:
        listing = client.get("/api/episodes").json()
        assert listing["episodes"][0]["episode_id"] == "ep-000001"
        assert listing["episodes"][0]["annotated"] is False

        detail = client.get("/api/episodes/ep-000001").json()
        assert len(detail["frames"]) == 50

        preview = client.post(
            "/api/quality-preview",
            json={"label": "Task", "task_id": "hi_chew",
                  "events": {"max_retries_per_subtask": 2, "smooth": True, "completed": True}},
        ).json()
        assert preview["quality"] == 3

        resp = client.post(
            "/api/episodes/ep-000001/annotation",
            json={"segments": [
                {"start": 0, "end": 30, "label": "Task", "task_id": "hi_chew",
                 "events": {"max_retries_per_subtask": 2, "smooth": True, "completed": True}},
                {"start": 30, "end": 50, "label": "Play"},
            ]},
        )
        assert resp.status_code == 200
        segs = kiosk.store.read_annotation("ep-000001")
        assert [s.quality for s in segs] == [3, 0]

        # gap -> validation failure -> 400
        resp = client.post(
            "/api/episodes/ep-000001/annotation",
            json={"segments": [{"start": 0, "end": 10, "label": "Play"}]},
        )
        assert resp.status_code == 400


def test_missing_episode_404(app):
    with TestClient(app) as client:
        assert client.get("/api/episodes/nope").status_code == 404


def test_scene_endpoint(app):
    with TestClient(app) as client:
        scene = client.get("/api/scene").json()
        assert scene["scene_id"] == "A"
        assert {t["task_id"] for t in scene["tasks"]} == {"hi_chew", "tootsie_roll"}
