"""Networked kiosk service: WebSocket session endpoint plus an HTTP JSON
surface for the annotation interface.

One connection at a time is authoritative (the kiosk seat); later
connections are observers and receive page directives and telemetry only.
All kiosk mutations are serialized through a single asyncio lock, with a
50Hz background ticker driving the controller.

    crowdkiosk-serve --scene A --port 8765 --data-dir ./kiosk-data [--config arm.cfg]
"""

from __future__ import annotations

import argparse
import asyncio
import contextlib
from datetime import datetime

from fastapi import FastAPI, HTTPException, WebSocket, WebSocketDisconnect

from . import protocol as wire
from .annotation import derive_quality
from .arm import load_arm_pair
from .model import EventTally, Label, LabelKind, default_scenes
from .session import Kiosk, RobotRig
from .sim import ArmPairSim
from .store import EpisodeStore, StoreError

OBSERVER_ONLY = (wire.Telemetry, wire.PageDirective)


class ConnectionHub:
    def __init__(self):
        self.authoritative: WebSocket | None = None
        self.observers: list[WebSocket] = []

    def role(self, ws) -> str:
        return "authoritative" if ws is self.authoritative else "observer"

    def attach(self, ws) -> str:
        if self.authoritative is None:
            self.authoritative = ws
            return "authoritative"
        self.observers.append(ws)
        return "observer"

    def detach(self, ws):
        if ws is self.authoritative:
            self.authoritative = None
        elif ws in self.observers:
            self.observers.remove(ws)

    async def broadcast(self, messages):
        for msg in messages:
            data = wire.encode(msg).decode()
            if self.authoritative is not None:
                with contextlib.suppress(Exception):
                    await self.authoritative.send_text(data)
            if isinstance(msg, OBSERVER_ONLY):
                for ws in list(self.observers):
                    with contextlib.suppress(Exception):
                        await ws.send_text(data)


def create_app(kiosk: Kiosk, tick_interval=0.02, run_ticker=True) -> FastAPI:
    hub = ConnectionHub()
    lock = asyncio.Lock()

    async def ticker():
        while True:
            await asyncio.sleep(tick_interval)
            async with lock:
                messages = kiosk.tick()
            await hub.broadcast(messages)

    @contextlib.asynccontextmanager
    async def lifespan(app):
        task = asyncio.create_task(ticker()) if run_ticker else None
        try:
            yield
        finally:
            if task is not None:
                task.cancel()
                with contextlib.suppress(asyncio.CancelledError):
                    await task

    app = FastAPI(title="crowdkiosk", lifespan=lifespan)
    app.state.kiosk = kiosk
    app.state.hub = hub

    @app.websocket("/ws")
    async def ws_endpoint(websocket: WebSocket):
        await websocket.accept()
        role = hub.attach(websocket)
        if role == "authoritative":
            kiosk.reset_seq()
        try:
            while True:
                data = await websocket.receive_text()
                try:
                    msg = wire.decode(data.encode())
                except wire.ProtocolError as exc:
                    await websocket.send_text(
                        wire.encode(wire.Error(code=exc.code, message=exc.message)).decode()
                    )
                    continue
                if isinstance(msg, wire.Error):
                    await websocket.send_text(wire.encode(msg).decode())
                    continue
                if hub.role(websocket) != "authoritative":
                    await websocket.send_text(
                        wire.encode(
                            wire.Error(code="OBSERVER", message="observer connections are read-only")
                        ).decode()
                    )
                    continue
                async with lock:
                    replies = kiosk.transition(msg)
                await hub.broadcast(replies)
        except WebSocketDisconnect:
            pass
        finally:
            hub.detach(websocket)

    # ---- annotation surface (HTTP JSON on the same port) -------------------

    @app.get("/api/scene")
    async def scene():
        return {
            "scene_id": kiosk.scene.scene_id,
            "tasks": [
                {
                    "task_id": t.task_id,
                    "title": t.title,
                    "difficulty": t.difficulty.value,
                    "points_on_success": t.points_on_success,
                    "subtasks": list(t.subtask_checklist),
                }
                for t in kiosk.scene.tasks
            ],
        }

    @app.get("/api/episodes")
    async def episodes():
        out = []
        for eid in kiosk.store.episode_ids():
            e = kiosk.store.read_episode(eid)
            out.append(
                {
                    "episode_id": e.episode_id,
                    "user_id": e.user_id,
                    "scene_id": e.scene_id,
                    "task_id": e.task_id,
                    "frames": len(e.frames),
                    "termination": e.termination.value,
                    "annotated": kiosk.store.read_annotation(eid) is not None,
                }
            )
        return {"episodes": out}

    @app.get("/api/episodes/{episode_id}")
    async def episode(episode_id: str):
        try:
            e = kiosk.store.read_episode(episode_id)
        except StoreError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        return {
            "episode_id": e.episode_id,
            "user_id": e.user_id,
            "scene_id": e.scene_id,
            "task_id": e.task_id,
            "termination": e.termination.value,
            "frames": [
                {
                    "index": f.index,
                    "t": f.t,
                    "leader": list(f.leader),
                    "follower": list(f.follower),
                    "collision_flag": f.collision_flag.value,
                }
                for f in e.frames
            ],
        }

    @app.post("/api/quality-preview")
    async def quality_preview(body: dict):
        label = _parse_label(body)
        events = EventTally(**body.get("events", {}))
        return {"quality": derive_quality(label, events)}

    @app.post("/api/episodes/{episode_id}/annotation")
    async def commit_annotation(episode_id: str, body: dict):
        from .model import AnnotationSegment

        segments = []
        for s in body.get("segments", []):
            label = _parse_label(s)
            events = EventTally(**s.get("events", {}))
            segments.append(
                AnnotationSegment(s["start"], s["end"], label, derive_quality(label, events), events)
            )
        try:
            kiosk.store.attach_annotation(episode_id, segments)
        except StoreError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return {"committed": len(segments)}

    return app


def _parse_label(obj) -> Label:
    kind = LabelKind(obj["label"])
    if kind is LabelKind.TASK:
        return Label.task(obj["task_id"])
    return Label(kind)


def build_kiosk(scene_id="A", data_dir="./kiosk-data", config_path=None, **kw) -> Kiosk:
    scenes = default_scenes()
    if scene_id not in scenes:
        raise SystemExit(f"unknown scene {scene_id!r}; available: {sorted(scenes)}")
    rig = RobotRig(ArmPairSim(load_arm_pair(config_path)))
    return Kiosk(
        scene=scenes[scene_id],
        store=EpisodeStore(data_dir),
        rig=rig,
        clock=datetime.now,
        **kw,
    )


def main(argv=None):
    parser = argparse.ArgumentParser(prog="crowdkiosk-serve")
    parser.add_argument("--scene", default="A", help="scene id (A, B or C)")
    parser.add_argument("--port", type=int, default=8765)
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--config", default=None, help="arm rig config file")
    parser.add_argument("--data-dir", default="./kiosk-data")
    args = parser.parse_args(argv)

    import uvicorn

    kiosk = build_kiosk(args.scene, args.data_dir, args.config)
    app = create_app(kiosk)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")


if __name__ == "__main__":
    main()
