// Client view state and its reducers. Pure functions: the DOM layer renders
// whatever is here, and everything here comes from server messages — the
// grid is never mutated locally.

import type { ClientMessage, Role, ServerMessage } from "./protocol.js";

export type Connection = "connecting" | "open" | "closed";

export interface GridSnapshot {
  step: number;
  cells: number[];
}

export interface ClientView {
  session: string;
  role: Role;
  connection: Connection;
  grid: GridSnapshot | null;
  ownedCell: number | null;
  resetFlash: boolean; // true for the render following a reset broadcast
  guessArmed: boolean;
  guessResult: boolean | null;
  toast: string | null; // last server error text
  framesApplied: number;
  framesDropped: number; // stale states discarded
}

export function initialView(session: string, role: Role): ClientView {
  return {
    session,
    role,
    connection: "connecting",
    grid: null,
    ownedCell: null,
    resetFlash: false,
    guessArmed: false,
    guessResult: null,
    toast: null,
    framesApplied: 0,
    framesDropped: 0,
  };
}

export function setConnection(view: ClientView, connection: Connection): ClientView {
  return { ...view, connection };
}

// The number of colors in play is not on the wire; infer it from what the
// grid shows (exact for every two-color configuration).
export function colorCount(view: ClientView): number {
  if (view.grid === null) return 2;
  return Math.max(2, Math.max(...view.grid.cells) + 1);
}

export function gridSide(view: ClientView): number {
  return view.grid === null ? 0 : Math.round(Math.sqrt(view.grid.cells.length));
}

export function applyServerMessage(view: ClientView, msg: ServerMessage): ClientView {
  switch (msg.kind) {
    case "assign":
      return { ...view, ownedCell: msg.cell };
    case "state": {
      if (view.grid !== null && msg.step < view.grid.step) {
        return { ...view, framesDropped: view.framesDropped + 1 };
      }
      return {
        ...view,
        grid: { step: msg.step, cells: msg.cells.slice() },
        resetFlash: msg.reset,
        framesApplied: view.framesApplied + 1,
      };
    }
    case "guess_result":
      return { ...view, guessResult: msg.correct };
    case "error":
      return { ...view, toast: msg.text };
  }
}

export function armGuess(view: ClientView): ClientView {
  if (view.role !== "observer") return view;
  return { ...view, guessArmed: true, guessResult: null };
}

export interface ClickOutcome {
  view: ClientView;
  outbound: ClientMessage | null;
}

// What a click on a cell does. Players cycle their own cell's color (the
// flip, for two colors) and touch nothing else; observers send a guess only
// while guess mode is armed. The local grid never changes here.
export function clickCell(view: ClientView, cell: number): ClickOutcome {
  if (view.grid === null) return { view, outbound: null };
  if (view.role === "player") {
    if (cell !== view.ownedCell) return { view, outbound: null };
    const next = (view.grid.cells[cell] + 1) % colorCount(view);
    return { view, outbound: { kind: "act", color: next } };
  }
  if (!view.guessArmed) return { view, outbound: null };
  return {
    view: { ...view, guessArmed: false },
    outbound: { kind: "guess", cell },
  };
}

// Players with more than two colors get a palette; picking a color sends it
// for the owned cell directly.
export function pickColor(view: ClientView, color: number): ClientMessage | null {
  if (view.role !== "player" || view.ownedCell === null) return null;
  if (!Number.isInteger(color) || color < 0 || color >= colorCount(view)) return null;
  return { kind: "act", color };
}

export function clearToast(view: ClientView): ClientView {
  return { ...view, toast: null };
}
