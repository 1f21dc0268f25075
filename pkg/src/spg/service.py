"""Real-time session host.

A session owns one world and steps it at a fixed tick rate, broadcasting the
full grid after every step. One human client may occupy a cell: their acts
are applied between ticks (the reset rule applies to them exactly as to
agent moves) and their cell leaves the random scheduling pool while they are
connected. Observers see the same broadcasts and may submit guesses for
where the human sits.

Wire protocol (one JSON object per WebSocket text frame, see PROTOCOL.md):
  client -> server   hello{session, role}, act{color}, guess{cell}
  server -> client   assign{cell}, state{step, cells, reset},
                     guess_result{correct}, error{code, text}

Each session is one logical loop owning all session state; client sockets
talk to it only through queues, so no two grid writes ever interleave.
"""

from __future__ import annotations

import asyncio
import dataclasses
import random
import time
import uuid
from contextlib import asynccontextmanager
from dataclasses import dataclass, field

from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.responses import JSONResponse, PlainTextResponse

from .engine import SimConfig, World, config_to_dict, serialize_runlog

PLAYER = "player"
OBSERVER = "observer"


@dataclass
class SessionSettings:
    sim: SimConfig = field(default_factory=SimConfig)
    tick_ms: int = 200
    idle_timeout_s: float = 600.0
    human_cell: int | None = None  # fixed cell for the player; None = random

    def __post_init__(self):
        if self.tick_ms < 1:
            raise ValueError(f"tick_ms must be >= 1, got {self.tick_ms}")
        ncells = self.sim.n * self.sim.n
        if self.human_cell is not None and not 0 <= self.human_cell < ncells:
            raise ValueError(f"human_cell {self.human_cell} out of range")


@dataclass
class Client:
    id: int
    role: str
    outbound: asyncio.Queue = field(default_factory=asyncio.Queue)

    async def send(self, message: dict):
        await self.outbound.put(message)


class Session:
    """One running world plus its connected clients."""

    def __init__(self, session_id: str, settings: SessionSettings):
        self.id = session_id
        self.settings = settings
        self.world = World(settings.sim)
        self.clients: dict[int, Client] = {}
        self.player_id: int | None = None
        self.human_cell: int | None = None
        self.acts: asyncio.Queue[int] = asyncio.Queue()
        self.transcript: list[dict] = []
        self.running = True
        self._next_client_id = 1
        # Session-local randomness for cell assignment; deliberately not the
        # world rng, so an idle player does not perturb the agent stream.
        self._assign_rng = random.Random(hash((session_id, settings.sim.seed)))
        self._empty_since: float | None = time.monotonic()
        self.task: asyncio.Task | None = None

    # -- client management ---------------------------------------------------

    def join(self, role: str) -> Client:
        if role not in (PLAYER, OBSERVER):
            raise ProtocolError("bad_role", f"role must be {PLAYER} or {OBSERVER}")
        if role == PLAYER:
            if self.player_id is not None:
                raise ProtocolError("player_taken", "session already has a player")
        client = Client(self._next_client_id, role)
        self._next_client_id += 1
        self.clients[client.id] = client
        self._empty_since = None
        if role == PLAYER:
            self.player_id = client.id
            if self.settings.human_cell is not None:
                self.human_cell = self.settings.human_cell
            else:
                ncells = self.settings.sim.n * self.settings.sim.n
                self.human_cell = self._assign_rng.randrange(ncells)
        self.transcript.append({"event": "join", "client": client.id, "role": role})
        return client

    def leave(self, client: Client):
        self.clients.pop(client.id, None)
        if client.id == self.player_id:
            self.player_id = None
            self.human_cell = None
        if not self.clients:
            self._empty_since = time.monotonic()
        self.transcript.append({"event": "leave", "client": client.id})

    # -- message handling ----------------------------------------------------

    async def handle_act(self, client: Client, message: dict):
        if client.id != self.player_id:
            await client.send(_error("not_player", "only the player may act"))
            return
        color = message.get("color")
        if not isinstance(color, int) or not 0 <= color < self.settings.sim.k:
            await client.send(_error("bad_color", f"color must be in [0, {self.settings.sim.k})"))
            return
        await self.acts.put(color)

    async def handle_guess(self, client: Client, message: dict):
        if client.role != OBSERVER:
            await client.send(_error("not_observer", "only observers may guess"))
            return
        if self.player_id is None or self.human_cell is None:
            await client.send(_error("no_human", "no human player in this session"))
            return
        cell = message.get("cell")
        ncells = self.settings.sim.n * self.settings.sim.n
        if not isinstance(cell, int) or not 0 <= cell < ncells:
            await client.send(_error("bad_cell", f"cell must be in [0, {ncells})"))
            return
        correct = cell == self.human_cell
        self.transcript.append(
            {"event": "guess", "client": client.id, "cell": cell, "correct": correct}
        )
        await client.send({"kind": "guess_result", "correct": correct})

    # -- the loop --------------------------------------------------------------

    def state_message(self, reset: bool) -> dict:
        return {
            "kind": "state",
            "step": self.world.step_count,
            "cells": [int(c) for c in self.world.grid.cells],
            "reset": reset,
        }

    async def broadcast(self, message: dict):
        for client in list(self.clients.values()):
            await client.send(message)

    async def run_loop(self):
        tick = self.settings.tick_ms / 1000.0
        try:
            while self.running:
                await asyncio.sleep(tick)
                reset_seen = False
                while not self.acts.empty():
                    color = self.acts.get_nowait()
                    if self.human_cell is None:
                        continue
                    event = self.world.apply_external(self.human_cell, color)
                    reset_seen = reset_seen or event.reset
                    self.transcript.append(
                        {"event": "act", "cell": self.human_cell, "color": color,
                         "reset": event.reset}
                    )
                exclude = self.human_cell if self.player_id is not None else None
                event = self.world.step(exclude_cell=exclude)
                reset_seen = reset_seen or event.reset
                await self.broadcast(self.state_message(reset_seen))
                if not self.clients:
                    if self._empty_since is not None and (
                        time.monotonic() - self._empty_since > self.settings.idle_timeout_s
                    ):
                        self.running = False
        except asyncio.CancelledError:
            pass
        finally:
            self.running = False

    def stop(self):
        self.running = False
        if self.task is not None:
            self.task.cancel()


class ProtocolError(Exception):
    def __init__(self, code: str, text: str):
        super().__init__(text)
        self.code = code
        self.text = text


def _error(code: str, text: str) -> dict:
    return {"kind": "error", "code": code, "text": text}


class SessionManager:
    def __init__(self, max_sessions: int = 64):
        self.max_sessions = max_sessions
        self.sessions: dict[str, Session] = {}

    def host_session(self, settings: SessionSettings, session_id: str | None = None) -> Session:
        """Create a session and start its loop. Raises on exhaustion."""
        self._reap()
        if len(self.sessions) >= self.max_sessions:
            raise ProtocolError("exhausted", f"session limit {self.max_sessions} reached")
        sid = session_id or uuid.uuid4().hex[:8]
        if sid in self.sessions:
            raise ProtocolError("exists", f"session {sid!r} already exists")
        session = Session(sid, settings)
        session.task = asyncio.get_running_loop().create_task(session.run_loop())
        self.sessions[sid] = session
        return session

    def get(self, session_id: str) -> Session | None:
        session = self.sessions.get(session_id)
        if session is not None and not session.running:
            return None
        return session

    def _reap(self):
        for sid in [s for s, sess in self.sessions.items() if not sess.running]:
            del self.sessions[sid]

    def stop_all(self):
        for session in self.sessions.values():
            session.stop()
        self.sessions.clear()


def create_app(
    manager: SessionManager | None = None,
    default_settings: SessionSettings | None = None,
    default_session_id: str = "default",
) -> FastAPI:
    mgr = manager or SessionManager()

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        if default_settings is not None:
            mgr.host_session(default_settings, default_session_id)
        yield
        mgr.stop_all()

    app = FastAPI(lifespan=lifespan)
    app.state.manager = mgr

    @app.get("/sessions")
    async def list_sessions():
        mgr._reap()
        return [
            {
                "session": s.id,
                "tick_ms": s.settings.tick_ms,
                "step": s.world.step_count,
                "clients": len(s.clients),
                "has_player": s.player_id is not None,
            }
            for s in mgr.sessions.values()
        ]

    @app.post("/sessions")
    async def host_session(body: dict | None = None):
        body = body or {}
        session_id = body.pop("session_id", None)
        tick_ms = body.pop("tick_ms", 200)
        idle_timeout_s = body.pop("idle_timeout_s", 600.0)
        human_cell = body.pop("human_cell", None)
        try:
            sim = SimConfig(**{**dataclasses.asdict(SimConfig()), **body})
            settings = SessionSettings(sim, tick_ms, idle_timeout_s, human_cell)
            session = mgr.host_session(settings, session_id)
        except (TypeError, ValueError) as exc:
            return JSONResponse({"error": str(exc)}, status_code=422)
        except ProtocolError as exc:
            return JSONResponse({"error": exc.text, "code": exc.code}, status_code=503)
        return {"session": session.id}

    @app.get("/sessions/{session_id}")
    async def session_detail(session_id: str):
        session = mgr.get(session_id)
        if session is None:
            return JSONResponse({"error": "unknown session"}, status_code=404)
        return {
            "session": session.id,
            "config": config_to_dict(session.settings.sim),
            "tick_ms": session.settings.tick_ms,
            "step": session.world.step_count,
            "clients": len(session.clients),
            "has_player": session.player_id is not None,
        }

    @app.get("/sessions/{session_id}/events")
    async def session_events(session_id: str):
        session = mgr.get(session_id)
        if session is None:
            return JSONResponse({"error": "unknown session"}, status_code=404)
        return PlainTextResponse(serialize_runlog(session.world.runlog()))

    @app.get("/sessions/{session_id}/transcript")
    async def session_transcript(session_id: str):
        session = mgr.get(session_id)
        if session is None:
            return JSONResponse({"error": "unknown session"}, status_code=404)
        return session.transcript

    @app.websocket("/ws")
    async def websocket_endpoint(ws: WebSocket):
        await ws.accept()
        try:
            hello = await ws.receive_json()
        except Exception:
            await ws.close()
            return
        if not isinstance(hello, dict) or hello.get("kind") != "hello":
            await ws.send_json(_error("bad_hello", "first message must be hello{session, role}"))
            await ws.close()
            return
        session = mgr.get(str(hello.get("session")))
        if session is None:
            await ws.send_json(_error("unknown_session", f"no session {hello.get('session')!r}"))
            await ws.close()
            return
        try:
            client = session.join(str(hello.get("role")))
        except ProtocolError as exc:
            await ws.send_json(_error(exc.code, exc.text))
            await ws.close()
            return
        try:
            if client.role == PLAYER:
                await ws.send_json({"kind": "assign", "cell": session.human_cell})
            await ws.send_json(session.state_message(False))

            async def reader():
                while True:
                    message = await ws.receive_json()
                    if not isinstance(message, dict):
                        await client.send(_error("bad_message", "expected a JSON object"))
                        continue
                    kind = message.get("kind")
                    if kind == "act":
                        await session.handle_act(client, message)
                    elif kind == "guess":
                        await session.handle_guess(client, message)
                    else:
                        await client.send(_error("bad_kind", f"unknown message kind {kind!r}"))

            async def writer():
                while True:
                    await ws.send_json(await client.outbound.get())

            reader_task = asyncio.create_task(reader())
            writer_task = asyncio.create_task(writer())
            done, pending = await asyncio.wait(
                {reader_task, writer_task}, return_when=asyncio.FIRST_EXCEPTION
            )
            for task in pending:
                task.cancel()
        except WebSocketDisconnect:
            pass
        finally:
            session.leave(client)

    return app
