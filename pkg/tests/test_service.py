import time
from dataclasses import replace

import pytest
from fastapi.testclient import TestClient

from spg.engine import SimConfig, run, serialize_runlog
from spg.service import SessionManager, SessionSettings, create_app


def app_client(sim=None, tick_ms=15, idle_timeout_s=600.0, human_cell=None,
               max_sessions=8, session_id="main"):
    settings = SessionSettings(
        sim or SimConfig(steps=0, seed=77), tick_ms, idle_timeout_s, human_cell
    )
    return TestClient(create_app(SessionManager(max_sessions), settings, session_id))


def recv_until(ws, predicate, limit=400):
    for _ in range(limit):
        message = ws.receive_json()
        if predicate(message):
            return message
    pytest.fail("expected message never arrived")


def hello(ws, session="main", role="observer"):
    ws.send_json({"kind": "hello", "session": session, "role": role})


def test_observer_gets_state_stream():
    with app_client() as client:
        with client.websocket_connect("/ws") as ws:
            hello(ws)
            first = ws.receive_json()
            assert first["kind"] == "state"
            assert len(first["cells"]) == 25
            assert all(c in (0, 1) for c in first["cells"])
            second = recv_until(ws, lambda m: m["kind"] == "state" and m["step"] > first["step"])
            assert second["step"] > first["step"]


def test_tick_rate_drives_steps():
    with app_client(tick_ms=50) as client:
        with client.websocket_connect("/ws") as ws:
            hello(ws)
            start_msg = ws.receive_json()
            t0 = time.monotonic()
            last = start_msg
            while last["step"] < start_msg["step"] + 10:
                last = recv_until(ws, lambda m: m["kind"] == "state")
            elapsed = time.monotonic() - t0
            # ten steps at 50 ms/tick: roughly half a second
            assert 0.2 <= elapsed <= 5.0


def test_player_assignment_and_act_round_trip():
    with app_client(human_cell=12) as client:
        with client.websocket_connect("/ws") as ws:
            hello(ws, role="player")
            assign = ws.receive_json()
            assert assign == {"kind": "assign", "cell": 12}
            state = recv_until(ws, lambda m: m["kind"] == "state")
            want = 1 - state["cells"][12]
            acted_at = state["step"]
            ws.send_json({"kind": "act", "color": want})
            seen = recv_until(ws, lambda m: m["kind"] == "state" and m["cells"][12] == want)
            assert seen["step"] <= acted_at + 2


def test_act_same_color_acknowledged_without_change():
    with app_client(human_cell=3) as client:
        with client.websocket_connect("/ws") as ws:
            hello(ws, role="player")
            ws.receive_json()  # assign
            state = recv_until(ws, lambda m: m["kind"] == "state")
            ws.send_json({"kind": "act", "color": state["cells"][3]})
            later = recv_until(ws, lambda m: m["kind"] == "state" and m["step"] >= state["step"] + 3)
            assert later["cells"][3] == state["cells"][3]
            assert later["kind"] == "state"  # no error frame arrived in between


def test_act_validation_errors():
    with app_client(human_cell=0) as client:
        with client.websocket_connect("/ws") as player:
            hello(player, role="player")
            player.receive_json()
            player.send_json({"kind": "act", "color": 9})
            err = recv_until(player, lambda m: m["kind"] == "error")
            assert err["code"] == "bad_color"
        with client.websocket_connect("/ws") as observer:
            hello(observer)
            observer.send_json({"kind": "act", "color": 1})
            err = recv_until(observer, lambda m: m["kind"] == "error")
            assert err["code"] == "not_player"


def test_guess_flow():
    with app_client(human_cell=7) as client:
        with client.websocket_connect("/ws") as player:
            hello(player, role="player")
            player.receive_json()
            with client.websocket_connect("/ws") as observer:
                hello(observer)
                observer.send_json({"kind": "guess", "cell": 7})
                result = recv_until(observer, lambda m: m["kind"] == "guess_result")
                assert result["correct"] is True
                observer.send_json({"kind": "guess", "cell": 8})
                result = recv_until(observer, lambda m: m["kind"] == "guess_result")
                assert result["correct"] is False
                # players may not guess
                player.send_json({"kind": "guess", "cell": 7})
                err = recv_until(player, lambda m: m["kind"] == "error")
                assert err["code"] == "not_observer"
        transcript = client.get("/sessions/main/transcript").json()
        guesses = [t for t in transcript if t.get("event") == "guess"]
        assert len(guesses) == 2
        assert guesses[0]["correct"] is True


def test_guess_without_human_rejected():
    with app_client() as client:
        with client.websocket_connect("/ws") as ws:
            hello(ws)
            ws.send_json({"kind": "guess", "cell": 0})
            err = recv_until(ws, lambda m: m["kind"] == "error")
            assert err["code"] == "no_human"


def test_second_player_rejected():
    with app_client() as client:
        with client.websocket_connect("/ws") as first:
            hello(first, role="player")
            first.receive_json()
            with client.websocket_connect("/ws") as second:
                hello(second, role="player")
                err = second.receive_json()
                assert err["kind"] == "error" and err["code"] == "player_taken"


def test_unknown_session_rejected():
    with app_client() as client:
        with client.websocket_connect("/ws") as ws:
            hello(ws, session="nope")
            err = ws.receive_json()
            assert err["kind"] == "error" and err["code"] == "unknown_session"


def test_zero_act_session_matches_offline_run():
    sim = SimConfig(steps=0, seed=99)
    with app_client(sim=sim, tick_ms=5) as client:
        with client.websocket_connect("/ws") as ws:
            hello(ws)
            recv_until(ws, lambda m: m["kind"] == "state" and m["step"] >= 40)
        live_lines = client.get("/sessions/main/events").text.splitlines()[1:]
    steps = len(live_lines)
    offline = run(replace(sim, steps=steps))
    offline_lines = serialize_runlog(offline).splitlines()[1 : 1 + len(live_lines)]
    assert live_lines == offline_lines


def test_two_sessions_are_independent():
    with app_client() as client:
        body = {"seed": 77, "session_id": "twin", "tick_ms": 15}
        assert client.post("/sessions", json=body).json() == {"session": "twin"}
        time.sleep(0.3)
        a = client.get("/sessions/main/events").text.splitlines()[1:]
        b = client.get("/sessions/twin/events").text.splitlines()[1:]
        k = min(len(a), len(b), 10)
        assert k > 0
        assert a[:k] == b[:k]  # same seed, same stream, no cross-talk


def test_session_limit_refusal():
    with app_client(max_sessions=1) as client:
        response = client.post("/sessions", json={"session_id": "extra"})
        assert response.status_code == 503
        assert "limit" in response.json()["error"]


def test_idle_timeout_stops_empty_session():
    with app_client(tick_ms=10, idle_timeout_s=0.15) as client:
        assert any(s["session"] == "main" for s in client.get("/sessions").json())
        deadline = time.monotonic() + 5.0
        while time.monotonic() < deadline:
            sessions = client.get("/sessions").json()
            if not sessions:
                break
            time.sleep(0.05)
        assert client.get("/sessions").json() == []


def test_human_seed_completes_pattern_and_resets():
    # frozen world: goal-free probability 0, all-white start; the human
    # paints the center black, agents finish a diagonal, the reset shows up
    # in a broadcast
    sim = SimConfig(steps=0, seed=5, init="white", p_random=0.0)
    with app_client(sim=sim, tick_ms=5, human_cell=12) as client:
        with client.websocket_connect("/ws") as ws:
            hello(ws, role="player")
            assert ws.receive_json()["cell"] == 12
            state = recv_until(ws, lambda m: m["kind"] == "state")
            assert state["cells"] == [1] * 25  # frozen without a goal
            ws.send_json({"kind": "act", "color": 0})
            reset_msg = recv_until(ws, lambda m: m["kind"] == "state" and m["reset"], limit=900)
            cells = reset_msg["cells"]
            main_diag = [cells[i * 5 + i] for i in range(5)]
            anti_diag = [cells[i * 5 + (4 - i)] for i in range(5)]
            assert main_diag == [0] * 5 or anti_diag == [0] * 5
        transcript = client.get("/sessions/main/transcript").json()
        assert any(t.get("event") == "act" and t.get("color") == 0 for t in transcript)


def test_session_detail_and_config():
    with app_client() as client:
        detail = client.get("/sessions/main").json()
        assert detail["session"] == "main"
        assert detail["config"]["n"] == 5
        assert client.get("/sessions/ghost").status_code == 404
