"""Service surface: REST endpoints, WS frames, human seats, privacy on the wire."""

import time

import pytest
from fastapi.testclient import TestClient

from howl.config import AppConfig, ServiceSettings, TtsSettings
from howl.engine import GameConfig
from howl.session import SessionSettings

CELEBS = ["Nova Reyes", "Kip Saber", "Mo Zhang", "Lia Quinn", "Rex Otter", "Juno Pike"]


def make_app_config(human_deadline_s: float = 15.0) -> AppConfig:
    cfg = AppConfig()
    # seed 6: the default scripted game reaches several discussion rounds
    cfg.game = GameConfig(player_names=list(CELEBS), rng_seed=6, max_rounds=8)
    # fast audio: tiny clip durations, no pacing sleeps in tests
    cfg.tts = TtsSettings(chars_per_second=100_000)
    cfg.service = ServiceSettings(audio_pace=False)
    # unanswered human requests fall back instead of stalling a test forever
    cfg.session = SessionSettings(human_deadline_s=human_deadline_s)
    return cfg


@pytest.fixture()
def client():
    from howl.service import create_app

    app = create_app(make_app_config())
    with TestClient(app) as test_client:
        yield test_client


@pytest.fixture()
def impatient_client():
    """Server whose human seats fall back after 0.3 s of silence."""
    from howl.service import create_app

    app = create_app(make_app_config(human_deadline_s=0.3))
    with TestClient(app) as test_client:
        yield test_client


def make_session(client, bindings=None, config=None, record=False):
    body = {"record": record}
    if config is not None:
        body["config"] = config
    if bindings is not None:
        body["bindings"] = bindings
    response = client.post("/sessions", json=body)
    assert response.status_code == 200, response.text
    return response.json()


def wait_until_ended(client, session_id, timeout=60.0):
    deadline = time.time() + timeout
    while time.time() < deadline:
        info = client.get(f"/sessions/{session_id}").json()
        if info["status"] in ("ended", "error"):
            return info
        time.sleep(0.02)
    raise AssertionError("session did not finish in time")


class TestRest:
    def test_healthz(self, client):
        assert client.get("/healthz").json()["ok"] is True

    def test_voices_listing_and_probe(self, client):
        blob = client.get("/voices").json()
        assert len(blob["voices"]) == 8
        assert blob["tts_backend"] == "mock"
        assert blob["tts_healthy"] is True

    def test_scripted_session_runs_to_outcome(self, client):
        created = make_session(client)
        assert created["human_seats"] == []
        info = wait_until_ended(client, created["session_id"])
        assert info["status"] == "ended"
        assert info["outcome"] is not None

    def test_record_endpoint_after_end(self, client):
        created = make_session(client)
        wait_until_ended(client, created["session_id"])
        record = client.get(f"/sessions/{created['session_id']}/record").json()
        assert record["final_digest"].startswith("sha256:")
        assert record["events"]

    def test_record_endpoint_conflicts_while_running(self, client):
        bindings = [{"player": i, "kind": "scripted"} for i in range(5)]
        bindings.append({"player": 5, "kind": "human"})
        created = make_session(client, bindings=bindings)
        response = client.get(f"/sessions/{created['session_id']}/record")
        assert response.status_code == 409

    def test_invalid_config_rejected(self, client):
        response = client.post(
            "/sessions",
            json={"config": {"player_names": ["A", "B"], "roles": {"werewolf": 0}}},
        )
        assert response.status_code == 422

    def test_unknown_session_404(self, client):
        assert client.get("/sessions/nope").status_code == 404

    def test_sim_endpoint_stats(self, client):
        response = client.post("/sim", json={"repeats": 3, "policy": "lowest-id-target"})
        stats = response.json()
        assert stats["games"] == 3
        assert stats["village_wins"] + stats["werewolf_wins"] + stats["draws"] == 3

    def test_metrics_endpoint(self, client):
        created = make_session(client)
        wait_until_ended(client, created["session_id"])
        blob = client.get(f"/sessions/{created['session_id']}/metrics").json()
        assert blob["utterances"], "speech pipeline should have produced metrics"
        first = blob["utterances"][0]
        assert {"utterance", "first_audio_latency", "inter_chunk_gaps"} <= set(first)


def is_outcome(frame) -> bool:
    return frame["type"] == "event" and frame["event"]["payload"]["type"] == "outcome"


def collect_until_outcome(ws, on_frame=None, limit=60_000):
    """Read frames to the outcome; when a callback is given it may answer
    pending action requests, which is what keeps the game progressing."""
    frames = []
    for _ in range(limit):
        frame = ws.receive_json()
        frames.append(frame)
        if on_frame is not None:
            on_frame(frame)
        if is_outcome(frame):
            return frames
    raise AssertionError("no outcome frame within the read limit")


def read_until(ws, predicate, limit=60_000, stop_at_outcome=True):
    """`stop_at_outcome=False` is for connection-level replies (errors, acks)
    that the server sends even after the game itself has finished."""
    frames = []
    for _ in range(limit):
        frame = ws.receive_json()
        frames.append(frame)
        if predicate(frame):
            return frames, frame
        if stop_at_outcome and is_outcome(frame):
            raise AssertionError("session ended before the expected frame")
    raise AssertionError("predicate never satisfied")


class TestWebSocket:
    def test_spectator_gets_public_frames_and_audio_only(self, client):
        created = make_session(client)
        with client.websocket_connect(f"/sessions/{created['session_id']}/ws") as ws:
            joined = ws.receive_json()
            assert joined["type"] == "joined"
            assert joined["player"] is None
            assert joined["snapshot"]["roster"][0]["name"] == CELEBS[0]
            frames = collect_until_outcome(ws)
        kinds = {f["type"] for f in frames}
        assert "audio" in kinds
        for frame in frames:
            if frame["type"] == "event":
                assert frame["event"]["visibility"] == "public"

    def test_audio_frames_ordered_by_utterance_and_index(self, client):
        created = make_session(client)
        with client.websocket_connect(f"/sessions/{created['session_id']}/ws") as ws:
            ws.receive_json()
            frames = collect_until_outcome(ws)
        order = [(f["utterance"], f["index"]) for f in frames if f["type"] == "audio"]
        assert order, "expected audio frames"
        assert order == sorted(order)

    def test_human_plays_full_game_as_villager(self, client):
        bindings = [
            {"player": i, "kind": "scripted", "policy": "lowest-id-target"}
            for i in range(5)
        ]
        bindings.append({"player": 5, "kind": "human"})
        # seed 2 deals seat 5 the villager role
        config = {"player_names": CELEBS, "rng_seed": 2, "max_rounds": 8}
        created = make_session(client, bindings=bindings, config=config)
        assert created["human_seats"] == [5]
        sid = created["session_id"]

        seen = {"role": None, "requests": 0}

        def respond(frame):
            if frame["type"] != "event":
                return
            payload = frame["event"]["payload"]
            if payload["type"] == "role_assignment" and payload["player"] == 5:
                seen["role"] = payload["role"]
            elif payload["type"] == "action_request" and payload["player"] == 5:
                seen["requests"] += 1
                if payload["task"] == "discuss":
                    ws.send_json(
                        {"type": "action", "kind": "statement",
                         "text": "I am only human, but I have eyes."}
                    )
                elif payload["task"] == "vote":
                    ws.send_json(
                        {"type": "action", "kind": "vote",
                         "action": payload["options"][0]}
                    )
                else:
                    ws.send_json(
                        {"type": "action", "kind": "night_action",
                         "action": payload["options"][0]}
                    )

        with client.websocket_connect(f"/sessions/{sid}/ws?seat=5") as ws:
            joined = ws.receive_json()
            assert joined["type"] == "joined" and joined["player"] == 5
            frames = collect_until_outcome(ws, on_frame=respond)

        assert seen["role"] == "villager", "human never saw the villager role card"
        assert seen["requests"] > 0, "human was never asked to act"
        # the human's own words made it into the public transcript
        statements = [
            f["event"]["payload"]
            for f in frames
            if f["type"] == "event"
            and f["event"]["payload"]["type"] == "statement_done"
            and f["event"]["payload"]["player"] == 5
        ]
        assert any("only human" in s["text"] for s in statements)
        info = wait_until_ended(client, sid)
        assert info["status"] == "ended"

    def test_invalid_action_yields_error_frame_and_game_continues(self, client):
        # lowest-id scripted wolves never target the highest seat first, so
        # the human seat reliably survives to receive requests
        bindings = [
            {"player": i, "kind": "scripted", "policy": "lowest-id-target"}
            for i in range(5)
        ]
        bindings.append({"player": 5, "kind": "human"})
        created = make_session(client, bindings=bindings)
        sid = created["session_id"]
        state = {"errored": False}

        def respond(frame):
            if frame["type"] == "error":
                state["errored"] = True
                return
            if frame["type"] != "event":
                return
            payload = frame["event"]["payload"]
            if payload["type"] == "action_request" and payload["player"] == 5:
                if not state["errored"]:
                    # first request: send something unusable, then recover below
                    ws.send_json(
                        {"type": "action", "kind": "night_action",
                         "action": "KILL P99"}
                    )
                    _, err = read_until(ws, lambda f: f["type"] == "error")
                    state["errored"] = True
                    assert err["code"] in ("unknown-name", "illegal-target", "malformed")
                if payload["task"] == "discuss":
                    ws.send_json({"type": "action", "kind": "statement", "text": "ok"})
                else:
                    ws.send_json(
                        {"type": "action",
                         "kind": "vote" if payload["task"] == "vote" else "night_action",
                         "action": payload["options"][0]}
                    )

        with client.websocket_connect(f"/sessions/{sid}/ws?seat=5") as ws:
            ws.receive_json()
            collect_until_outcome(ws, on_frame=respond)
        assert state["errored"], "the invalid action never produced an error frame"

    def test_spectator_cannot_act(self, client):
        created = make_session(client)
        with client.websocket_connect(f"/sessions/{created['session_id']}/ws") as ws:
            ws.receive_json()
            ws.send_json({"type": "action", "kind": "statement", "text": "hi"})
            _, err = read_until(
                ws, lambda f: f["type"] == "error", stop_at_outcome=False
            )
            assert err["code"] == "spectator-cannot-act"

    def test_unauthorized_seat_becomes_spectator_with_error(self, client):
        created = make_session(client)  # no human seats at all
        with client.websocket_connect(
            f"/sessions/{created['session_id']}/ws?seat=3"
        ) as ws:
            joined = ws.receive_json()
            assert joined["type"] == "joined"
            assert joined["player"] is None
            _, err = read_until(
                ws, lambda f: f["type"] == "error", stop_at_outcome=False
            )
            assert err["code"] == "unauthorized-seat"

    def test_stale_ack_rejected_connection_survives(self, client):
        created = make_session(client)
        with client.websocket_connect(f"/sessions/{created['session_id']}/ws") as ws:
            ws.receive_json()
            ws.send_json({"type": "ack", "seq": 10_000_000})
            _, err = read_until(
                ws,
                lambda f: f["type"] == "error" and f["code"] == "stale-ack",
                stop_at_outcome=False,
            )
            # a second bad ack still gets a reply: the connection survived
            ws.send_json({"type": "ack", "seq": -5})
            read_until(
                ws,
                lambda f: f["type"] == "error" and f["code"] == "stale-ack",
                stop_at_outcome=False,
            )

    def test_valid_ack_accepted(self, client):
        created = make_session(client)
        with client.websocket_connect(f"/sessions/{created['session_id']}/ws") as ws:
            ws.receive_json()
            frames, event = read_until(
                ws, lambda f: f["type"] == "event", stop_at_outcome=False
            )
            ws.send_json({"type": "ack", "seq": event["event"]["seq"]})
            # acknowledged seq may not move backwards
            ws.send_json({"type": "ack", "seq": event["event"]["seq"] - 1})
            _, err = read_until(
                ws, lambda f: f["type"] == "error", stop_at_outcome=False
            )
            assert err["code"] == "stale-ack"

    def test_private_frames_never_cross_players(self, impatient_client):
        """Two passive bound seats (requests fall back server-side): neither
        connection ever receives the other's private events."""
        client = impatient_client
        bindings = [{"player": i, "kind": "scripted"} for i in range(4)]
        bindings += [{"player": 4, "kind": "human"}, {"player": 5, "kind": "human"}]
        created = make_session(client, bindings=bindings)
        sid = created["session_id"]

        with client.websocket_connect(f"/sessions/{sid}/ws?seat=4") as ws4:
            with client.websocket_connect(f"/sessions/{sid}/ws?seat=5") as ws5:
                assert ws4.receive_json()["player"] == 4
                assert ws5.receive_json()["player"] == 5
                frames4 = collect_until_outcome(ws4)
                frames5 = collect_until_outcome(ws5)
        for frames, me in ((frames4, 4), (frames5, 5)):
            privates = [
                f["event"] for f in frames
                if f["type"] == "event" and isinstance(f["event"]["visibility"], list)
            ]
            assert privates, "bound player should receive private events"
            for event in privates:
                assert event["visibility"] == ["private", me]
