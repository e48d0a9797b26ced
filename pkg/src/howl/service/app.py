"""FastAPI service: sessions over REST, live play over a WebSocket frame protocol.

Frame protocol (versioned, see docs/protocol.md):
  server -> client:
    {"v":1,"type":"joined","session":...,"player":...,"snapshot":{...}}
    {"v":1,"type":"event","event":{seq,t,visibility,payload}}
    {"v":1,"type":"audio","utterance":u,"index":k,"sample_rate":r,
     "duration":s,"wav_b64":"..."}
    {"v":1,"type":"error","code":"...","detail":"..."}
  client -> server:
    {"type":"action","kind":"statement","text":"..."}
    {"type":"action","kind":"vote"|"night_action","action":"VOTE P3"}
    {"type":"ack","seq":n}
"""

from __future__ import annotations

import asyncio
import base64
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, HTTPException, Query, WebSocket, WebSocketDisconnect
from fastapi.middleware.cors import CORSMiddleware
from fastapi.staticfiles import StaticFiles

from .schemas import (
    BindingIn,
    SessionCreate,
    SessionCreated,
    SessionInfo,
    SimRequest,
    SimResult,
    VoiceInfo,
    VoicesOut,
)
from ..agents import AgentBinding, ParseFailure, PromptContext, parse_reply
from ..config import AppConfig
from ..engine import GameConfig, InvalidConfig
from ..events import SessionEvent, event_to_json, outcome_to_json, phase_to_json
from ..gateway import ChatClient
from ..session import Orchestrator, SystemClock, run_batch
from ..speech import AudioClip, SpeechScheduler, encode_wav

PROTOCOL_VERSION = 1


def event_frame(event: SessionEvent) -> dict:
    return {"v": PROTOCOL_VERSION, "type": "event", "event": event_to_json(event)}


def audio_frame(clip: AudioClip) -> dict:
    return {
        "v": PROTOCOL_VERSION,
        "type": "audio",
        "utterance": clip.utterance,
        "index": clip.index,
        "sample_rate": clip.sample_rate,
        "duration": clip.duration,
        "wav_b64": base64.b64encode(encode_wav(clip.pcm, clip.sample_rate)).decode(),
    }


def error_frame(code: str, detail: str) -> dict:
    return {"v": PROTOCOL_VERSION, "type": "error", "code": code, "detail": detail}


@dataclass
class _Connection:
    queue: asyncio.Queue
    player: int | None
    last_sent_seq: int = -1
    last_acked: int = -1


class Hub:
    """Connection registry; delivers visibility-filtered frames (FrameRouter)."""

    def __init__(self) -> None:
        self.backlog: list[SessionEvent] = []
        self._conns: dict[int, _Connection] = {}
        self._next_id = 0

    @property
    def bound_players(self) -> set[int]:
        return {c.player for c in self._conns.values() if c.player is not None}

    def deliver(self, event: SessionEvent) -> None:
        self.backlog.append(event)
        for conn in self._conns.values():
            if event.visibility.admits(conn.player):
                conn.last_sent_seq = event.seq
                conn.queue.put_nowait(event_frame(event))

    def broadcast_audio(self, clip: AudioClip) -> None:
        frame = audio_frame(clip)
        for conn in self._conns.values():
            conn.queue.put_nowait(frame)

    def attach(self, player: int | None, hello: dict) -> tuple[int, _Connection]:
        """Register a connection and pre-seed its queue with the hello frame and
        the filtered backlog; synchronous so no live event can interleave."""
        conn = _Connection(queue=asyncio.Queue(), player=player)
        conn_id = self._next_id
        self._next_id += 1
        conn.queue.put_nowait(hello)
        for event in self.backlog:
            if event.visibility.admits(player):
                conn.last_sent_seq = event.seq
                conn.queue.put_nowait(event_frame(event))
        self._conns[conn_id] = conn
        return conn_id, conn

    def detach(self, conn_id: int) -> None:
        self._conns.pop(conn_id, None)


class HubSink:
    """Speech sink that broadcasts base64-WAV frames; pacing makes playback
    occupy real time server-side so the game keeps conversational rhythm."""

    def __init__(self, hub: Hub, pace: bool = True):
        self.hub = hub
        self.pace = pace

    async def play(self, clip: AudioClip) -> None:
        self.hub.broadcast_audio(clip)
        if self.pace:
            await asyncio.sleep(clip.duration)


class WsBridge:
    """Human seat bridge: the orchestrator awaits, the websocket submits."""

    def __init__(self) -> None:
        self._queue: asyncio.Queue[str] = asyncio.Queue()
        self.pending_ctx: PromptContext | None = None

    async def request(self, ctx: PromptContext, deadline_s: float | None) -> str:
        while not self._queue.empty():  # drop stale submissions
            self._queue.get_nowait()
        self.pending_ctx = ctx
        try:
            if deadline_s is None:
                return await self._queue.get()
            return await asyncio.wait_for(self._queue.get(), deadline_s)
        finally:
            self.pending_ctx = None

    def submit(self, text: str) -> None:
        self._queue.put_nowait(text)


class LiveSession:
    def __init__(self, app_config: AppConfig, session_id: str,
                 config: GameConfig, bindings: list[AgentBinding],
                 record: bool = False):
        self.id = session_id
        self.config = config
        self.bindings = bindings
        self.hub = Hub()
        self.bridges = {
            b.player: WsBridge() for b in bindings if b.kind == "human"
        }
        self.status = "waiting" if self.bridges else "running"
        self.record = None
        self.error: str | None = None
        self.task: asyncio.Task | None = None

        record_path = None
        if record or app_config.service.record_dir:
            base = Path(app_config.service.record_dir or "records")
            record_path = base / f"{session_id}.jsonl"
        self.scheduler = SpeechScheduler(
            app_config.tts_backend(),
            HubSink(self.hub, pace=app_config.service.audio_pace),
            workers=app_config.tts.synth_workers,
            synth_timeout_s=app_config.tts.timeout_s,
        )
        self.orchestrator = Orchestrator(
            config,
            bindings,
            chat_client=ChatClient(app_config.chat_backend(), session_nonce=session_id),
            scheduler=self.scheduler,
            voices=app_config.voice_registry(),
            human_bridges=self.bridges,
            clock=SystemClock(),
            router=self.hub,
            record_path=record_path,
            settings=app_config.session,
        )

    @property
    def human_seats(self) -> list[int]:
        return sorted(self.bridges)

    def resolve_seat(self, seat: str) -> int | None:
        names = {name: i for i, name in enumerate(self.config.player_names)}
        pid = names.get(seat)
        if pid is None and seat.isdigit():
            pid = int(seat)
        if pid is None or pid not in self.bridges:
            return None
        if pid in self.hub.bound_players:
            return None  # seat already taken by a live connection
        return pid

    def snapshot(self) -> dict:
        state = self.orchestrator.state
        return {
            "status": self.status,
            "round": state.round,
            "phase": phase_to_json(state.phase),
            "roster": [
                {"id": p.id, "name": p.name, "status": p.status.value}
                for p in state.players
            ],
            "human_seats": self.human_seats,
        }

    def maybe_start(self) -> None:
        if self.status != "waiting":
            return
        if set(self.human_seats) <= self.hub.bound_players:
            self.start()

    def start(self) -> None:
        if self.task is not None:
            return
        self.status = "running"
        self.task = asyncio.get_running_loop().create_task(self._run())

    async def _run(self) -> None:
        try:
            self.record = await self.orchestrator.run()
            self.status = "ended"
        except Exception as exc:  # surfaced via /sessions/{id}, never crashes the app
            self.status = "error"
            self.error = f"{type(exc).__name__}: {exc}"

    def info(self) -> SessionInfo:
        state = self.orchestrator.state
        return SessionInfo(
            session_id=self.id,
            status=self.status,
            round=state.round,
            phase=phase_to_json(state.phase),
            roster=[
                {"id": p.id, "name": p.name, "status": p.status.value}
                for p in state.players
            ],
            human_seats=self.human_seats,
            connected=sorted(self.hub.bound_players),
            outcome=outcome_to_json(state.outcome) if state.outcome else None,
            error=self.error,
        )


class SessionManager:
    def __init__(self, app_config: AppConfig):
        self.app_config = app_config
        self.sessions: dict[str, LiveSession] = {}

    def create(self, config: GameConfig, bindings: list[AgentBinding],
               record: bool = False) -> LiveSession:
        config.validate()
        session_id = uuid.uuid4().hex[:12]
        session = LiveSession(self.app_config, session_id, config, bindings, record)
        self.sessions[session_id] = session
        return session

    def get(self, session_id: str) -> LiveSession:
        session = self.sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail="unknown session")
        return session


def create_app(app_config: AppConfig | None = None,
               bootstrap_session: bool = False) -> FastAPI:
    """Build the service; `bootstrap_session` opens one session at startup from
    the config file's game and bindings (what `howl play` uses)."""
    from contextlib import asynccontextmanager

    app_config = app_config or AppConfig()
    manager = SessionManager(app_config)

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        if bootstrap_session:
            session = manager.create(
                app_config.game, app_config.default_bindings()
            )
            if not session.bridges:
                session.start()
            seats = ", ".join(
                f"{pid} ({app_config.game.player_names[pid]})"
                for pid in session.human_seats
            ) or "none (spectate only)"
            print(f"[howl] session {session.id} ready; human seats: {seats}")
            print(f"[howl] websocket: /sessions/{session.id}/ws?seat=<player>")
        yield

    app = FastAPI(title="howl", version="0.1.0", lifespan=lifespan)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    app.state.manager = manager

    @app.get("/healthz")
    async def healthz() -> dict:
        return {"ok": True, "sessions": len(manager.sessions)}

    @app.get("/voices", response_model=VoicesOut)
    async def voices() -> VoicesOut:
        registry = app_config.voice_registry()
        backend = app_config.tts_backend()
        healthy = await backend.probe()
        return VoicesOut(
            voices=[
                VoiceInfo(voice_id=v.voice_id, persona=v.persona,
                          reference_id=v.reference_id)
                for v in registry.all()
            ],
            tts_backend=app_config.tts.endpoint or "mock",
            tts_healthy=healthy,
        )

    @app.post("/sessions", response_model=SessionCreated)
    async def create_session(body: SessionCreate) -> SessionCreated:
        config = body.config.to_config() if body.config else manager.app_config.game
        if body.bindings is not None:
            bindings = [AgentBinding(**b.model_dump()) for b in body.bindings]
        else:
            bindings = manager.app_config.default_bindings()
        try:
            session = manager.create(config, bindings, record=body.record)
        except (InvalidConfig, ValueError) as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        if not session.bridges:
            session.start()
        return SessionCreated(
            session_id=session.id,
            status=session.status,
            human_seats=session.human_seats,
            join_url=f"/sessions/{session.id}/ws",
        )

    @app.get("/sessions/{session_id}", response_model=SessionInfo)
    async def session_info(session_id: str) -> SessionInfo:
        return manager.get(session_id).info()

    @app.get("/sessions/{session_id}/record")
    async def session_record(session_id: str) -> dict:
        session = manager.get(session_id)
        if session.status != "ended" or session.record is None:
            raise HTTPException(status_code=409, detail="session has not ended")
        return session.record.to_json()

    @app.get("/sessions/{session_id}/metrics")
    async def session_metrics(session_id: str) -> dict:
        session = manager.get(session_id)
        return {"utterances": [m.to_json() for m in session.scheduler.metrics]}

    @app.post("/sim", response_model=SimResult)
    async def sim(body: SimRequest) -> SimResult:
        config = body.config.to_config() if body.config else manager.app_config.game
        try:
            config.validate()
        except InvalidConfig as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        stats = await run_batch(
            config, body.repeats, policy=body.policy, speech=body.speech
        )
        return SimResult(**stats)

    @app.websocket("/sessions/{session_id}/ws")
    async def session_ws(ws: WebSocket, session_id: str,
                         seat: str | None = Query(default=None)) -> None:
        session = manager.sessions.get(session_id)
        await ws.accept()
        if session is None:
            await ws.send_json(error_frame("unknown-session", session_id))
            await ws.close()
            return

        player: int | None = None
        rejected: str | None = None
        if seat is not None:
            player = session.resolve_seat(seat)
            if player is None:
                rejected = seat
        hello = {
            "v": PROTOCOL_VERSION,
            "type": "joined",
            "session": session.id,
            "player": player,
            "snapshot": session.snapshot(),
        }
        conn_id, conn = session.hub.attach(player, hello)
        if rejected is not None:
            conn.queue.put_nowait(
                error_frame(
                    "unauthorized-seat",
                    f"'{rejected}' is not an open human seat; joined as spectator",
                )
            )
        if player is not None:
            session.maybe_start()

        async def sender() -> None:
            while True:
                frame = await conn.queue.get()
                await ws.send_json(frame)

        send_task = asyncio.get_running_loop().create_task(sender())
        try:
            while True:
                data = await ws.receive_json()
                _handle_client_frame(session, conn, player, data)
        except WebSocketDisconnect:
            pass
        finally:
            send_task.cancel()
            session.hub.detach(conn_id)

    static_dir = app_config.service.static_dir
    if static_dir is None:
        bundled = Path(__file__).resolve().parents[3] / "frontend" / "dist"
        static_dir = str(bundled) if bundled.is_dir() else None
    if static_dir and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="console")

    return app


def _handle_client_frame(session: LiveSession, conn: _Connection,
                         player: int | None, data) -> None:
    if not isinstance(data, dict) or "type" not in data:
        conn.queue.put_nowait(error_frame("malformed-frame", "expected a frame object"))
        return
    kind = data["type"]
    if kind == "ack":
        seq = data.get("seq")
        if (
            not isinstance(seq, int)
            or seq > conn.last_sent_seq
            or seq < conn.last_acked
        ):
            conn.queue.put_nowait(
                error_frame("stale-ack", f"seq {seq!r} is not acknowledgeable")
            )
        else:
            conn.last_acked = seq
        return
    if kind != "action":
        conn.queue.put_nowait(error_frame("malformed-frame", f"unknown type '{kind}'"))
        return
    if player is None:
        conn.queue.put_nowait(
            error_frame("spectator-cannot-act", "join a seat to play")
        )
        return
    bridge = session.bridges.get(player)
    ctx = bridge.pending_ctx if bridge else None
    if ctx is None:
        conn.queue.put_nowait(
            error_frame("no-pending-request", "no action is awaited from you")
        )
        return
    action_kind = data.get("kind")
    if action_kind == "statement":
        text = str(data.get("text", "")).strip()
    elif action_kind in ("vote", "night_action"):
        text = "ACTION: " + str(data.get("action", "")).strip()
    else:
        conn.queue.put_nowait(
            error_frame("malformed-frame", f"unknown action kind '{action_kind}'")
        )
        return
    try:
        parse_reply(text, ctx.task, ctx.view, ctx.alias_map)
    except ParseFailure as pf:
        conn.queue.put_nowait(error_frame(pf.kind, pf.hint))
        return
    bridge.submit(text)
