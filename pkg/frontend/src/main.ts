// Entry point: read server/session/role from the page URL, hold one
// WebSocket, and re-render on every message. Reconnects with a short
// backoff when the connection drops.

import { encode, parseServerMessage, type ClientMessage, type Role } from "./protocol.js";
import { renderView, type Elements } from "./render.js";
import {
  applyServerMessage,
  armGuess,
  clickCell,
  initialView,
  pickColor,
  setConnection,
  type ClientView,
} from "./view.js";

function pageConfig(): { server: string; session: string; role: Role } {
  const params = new URLSearchParams(window.location.search);
  const server = params.get("server") ?? `ws://${window.location.hostname}:8765/ws`;
  const session = params.get("session") ?? "default";
  const role: Role = params.get("role") === "player" ? "player" : "observer";
  return { server, session, role };
}

function elements(): Elements {
  const byId = (id: string) => document.getElementById(id) as HTMLElement;
  return {
    grid: byId("grid"),
    status: byId("status"),
    toast: byId("toast"),
    guess: byId("guess"),
    palette: byId("palette"),
    banner: byId("banner"),
  };
}

function start(): void {
  const { server, session, role } = pageConfig();
  const el = elements();
  let view: ClientView = initialView(session, role);
  let socket: WebSocket | null = null;

  const send = (message: ClientMessage) => {
    if (socket !== null && socket.readyState === WebSocket.OPEN) {
      socket.send(encode(message));
    }
  };

  const draw = () =>
    renderView(view, el,
      (cell) => {
        const outcome = clickCell(view, cell);
        view = outcome.view;
        if (outcome.outbound !== null) send(outcome.outbound);
        draw();
      },
      (color) => {
        const act = pickColor(view, color);
        if (act !== null) send(act);
      });

  const connect = () => {
    view = setConnection(view, "connecting");
    draw();
    socket = new WebSocket(server);
    socket.onopen = () => {
      view = setConnection(view, "open");
      send({ kind: "hello", session, role });
      draw();
    };
    socket.onmessage = (event) => {
      const message = parseServerMessage(String(event.data));
      if (message === null) return;
      view = applyServerMessage(view, message);
      draw();
    };
    socket.onclose = () => {
      view = setConnection(view, "closed");
      draw();
      setTimeout(connect, 1500);
    };
  };

  window.addEventListener("keydown", (event) => {
    if (event.key === "g" || event.key === "G") {
      view = armGuess(view);
      draw();
    }
  });

  connect();
}

start();
