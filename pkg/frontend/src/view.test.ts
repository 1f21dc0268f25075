import { describe, expect, it } from "vitest";
import type { StateMessage } from "./protocol.js";
import {
  applyServerMessage,
  armGuess,
  clickCell,
  colorCount,
  gridSide,
  initialView,
  pickColor,
} from "./view.js";

const cells25 = (fill = 0) => new Array(25).fill(fill);

function state(step: number, cells = cells25(), reset = false): StateMessage {
  return { kind: "state", step, cells, reset };
}

describe("state handling", () => {
  it("applies states and tracks the step", () => {
    let view = initialView("s", "observer");
    view = applyServerMessage(view, state(5));
    expect(view.grid?.step).toBe(5);
    expect(view.framesApplied).toBe(1);
    expect(gridSide(view)).toBe(5);
  });

  it("discards stale states", () => {
    let view = initialView("s", "observer");
    view = applyServerMessage(view, state(10, cells25(1)));
    view = applyServerMessage(view, state(9, cells25(0)));
    expect(view.grid?.cells[0]).toBe(1);
    expect(view.framesDropped).toBe(1);
    expect(view.framesApplied).toBe(1);
  });

  it("applies every frame of a dense stream in order", () => {
    // a 5-ticks-per-second stream is just sequential steps; nothing drops
    let view = initialView("s", "observer");
    for (let step = 1; step <= 50; step++) {
      view = applyServerMessage(view, state(step, cells25(step % 2)));
      expect(view.grid?.step).toBe(step);
    }
    expect(view.framesApplied).toBe(50);
    expect(view.framesDropped).toBe(0);
  });

  it("flashes on reset and clears on the next state", () => {
    let view = initialView("s", "observer");
    view = applyServerMessage(view, state(1, cells25(), true));
    expect(view.resetFlash).toBe(true);
    view = applyServerMessage(view, state(2, cells25(), false));
    expect(view.resetFlash).toBe(false);
  });
});

describe("player clicks", () => {
  function playerView() {
    let view = initialView("s", "player");
    view = applyServerMessage(view, { kind: "assign", cell: 12 });
    view = applyServerMessage(view, state(1));
    return view;
  }

  it("cycles the owned cell's color", () => {
    const view = playerView();
    const { outbound } = clickCell(view, 12);
    expect(outbound).toEqual({ kind: "act", color: 1 });
  });

  it("ignores clicks on foreign cells", () => {
    const view = playerView();
    expect(clickCell(view, 11).outbound).toBeNull();
  });

  it("never mutates the grid locally", () => {
    const view = playerView();
    const before = view.grid?.cells.slice();
    const { view: after } = clickCell(view, 12);
    expect(after.grid?.cells).toEqual(before);
  });

  it("serializes a rapid double-click in order", () => {
    const view = playerView();
    const first = clickCell(view, 12);
    const second = clickCell(first.view, 12);
    // the grid has not changed (server-authoritative), so both acts carry
    // the same flip, in click order
    expect(first.outbound).toEqual({ kind: "act", color: 1 });
    expect(second.outbound).toEqual({ kind: "act", color: 1 });
  });

  it("cycles through the inferred palette when more colors are visible", () => {
    let view = initialView("s", "player");
    view = applyServerMessage(view, { kind: "assign", cell: 0 });
    const cells = cells25();
    cells[3] = 3; // four colors visible
    cells[0] = 2;
    view = applyServerMessage(view, state(1, cells));
    expect(colorCount(view)).toBe(4);
    expect(clickCell(view, 0).outbound).toEqual({ kind: "act", color: 3 });
    expect(pickColor(view, 1)).toEqual({ kind: "act", color: 1 });
    expect(pickColor(view, 9)).toBeNull();
  });
});

describe("observer guesses", () => {
  function observerView() {
    let view = initialView("s", "observer");
    view = applyServerMessage(view, state(1));
    return view;
  }

  it("ignores guesses before arming", () => {
    const view = observerView();
    expect(clickCell(view, 4).outbound).toBeNull();
  });

  it("sends one guess per arming", () => {
    let view = armGuess(observerView());
    const first = clickCell(view, 4);
    expect(first.outbound).toEqual({ kind: "guess", cell: 4 });
    const second = clickCell(first.view, 5);
    expect(second.outbound).toBeNull();
  });

  it("records the result without revealing anything else", () => {
    let view = armGuess(observerView());
    view = clickCell(view, 4).view;
    view = applyServerMessage(view, { kind: "guess_result", correct: false });
    expect(view.guessResult).toBe(false);
    expect(view.ownedCell).toBeNull();
  });

  it("players cannot arm guess mode", () => {
    const view = initialView("s", "player");
    expect(armGuess(view).guessArmed).toBe(false);
  });
});

describe("errors", () => {
  it("shows a toast and leaves state alone", () => {
    let view = initialView("s", "player");
    view = applyServerMessage(view, { kind: "assign", cell: 2 });
    view = applyServerMessage(view, state(7, cells25(1)));
    const before = view.grid;
    view = applyServerMessage(view, {
      kind: "error",
      code: "bad_color",
      text: "color must be in [0, 2)",
    });
    expect(view.toast).toContain("color");
    expect(view.grid).toEqual(before);
  });
});
