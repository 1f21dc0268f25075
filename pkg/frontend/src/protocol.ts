// Wire protocol types and validation. One JSON object per WebSocket text
// frame; field names are fixed by the server's PROTOCOL.md.

export type Role = "player" | "observer";

export interface HelloMessage {
  kind: "hello";
  session: string;
  role: Role;
}

export interface ActMessage {
  kind: "act";
  color: number;
}

export interface GuessMessage {
  kind: "guess";
  cell: number;
}

export type ClientMessage = HelloMessage | ActMessage | GuessMessage;

export interface AssignMessage {
  kind: "assign";
  cell: number;
}

export interface StateMessage {
  kind: "state";
  step: number;
  cells: number[];
  reset: boolean;
}

export interface GuessResultMessage {
  kind: "guess_result";
  correct: boolean;
}

export interface ErrorMessage {
  kind: "error";
  code: string;
  text: string;
}

export type ServerMessage =
  | AssignMessage
  | StateMessage
  | GuessResultMessage
  | ErrorMessage;

export function encode(message: ClientMessage): string {
  return JSON.stringify(message);
}

function isIntArray(value: unknown): value is number[] {
  return Array.isArray(value) && value.every((x) => Number.isInteger(x));
}

// Returns null for frames that are not valid server messages; the client
// ignores those rather than guessing.
export function parseServerMessage(raw: string): ServerMessage | null {
  let data: unknown;
  try {
    data = JSON.parse(raw);
  } catch {
    return null;
  }
  if (typeof data !== "object" || data === null) return null;
  const msg = data as Record<string, unknown>;
  switch (msg.kind) {
    case "assign":
      return Number.isInteger(msg.cell)
        ? { kind: "assign", cell: msg.cell as number }
        : null;
    case "state":
      return Number.isInteger(msg.step) &&
        isIntArray(msg.cells) &&
        typeof msg.reset === "boolean"
        ? {
            kind: "state",
            step: msg.step as number,
            cells: msg.cells as number[],
            reset: msg.reset,
          }
        : null;
    case "guess_result":
      return typeof msg.correct === "boolean"
        ? { kind: "guess_result", correct: msg.correct }
        : null;
    case "error":
      return typeof msg.code === "string" && typeof msg.text === "string"
        ? { kind: "error", code: msg.code, text: msg.text }
        : null;
    default:
      return null;
  }
}
