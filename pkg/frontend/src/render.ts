// DOM rendering: the view is the single source of truth, rebuilt cheaply on
// every message (25 cells; no need for diffing).

import { colorCount, gridSide, type ClientView } from "./view.js";

const PALETTE = ["#16161a", "#f4f4f0", "#d62828", "#1b6ef3", "#2a9d3a",
  "#e8a11c", "#7a3fb8", "#15b5a5", "#cf4f9e", "#6b6b6b"];

export function cellColor(value: number): string {
  return PALETTE[value % PALETTE.length];
}

export interface Elements {
  grid: HTMLElement;
  status: HTMLElement;
  toast: HTMLElement;
  guess: HTMLElement;
  palette: HTMLElement;
  banner: HTMLElement;
}

export function renderView(view: ClientView, el: Elements, onCell: (cell: number) => void,
                           onColor: (color: number) => void): void {
  el.banner.hidden = view.connection !== "closed";

  const n = gridSide(view);
  el.grid.style.gridTemplateColumns = `repeat(${n || 1}, 1fr)`;
  el.grid.classList.toggle("reset-flash", view.resetFlash);
  el.grid.replaceChildren();
  if (view.grid !== null) {
    view.grid.cells.forEach((value, cell) => {
      const div = document.createElement("div");
      div.className = "cell";
      div.style.background = cellColor(value);
      if (cell === view.ownedCell) div.classList.add("owned");
      if (view.role === "observer" && view.guessArmed) div.classList.add("guessable");
      div.addEventListener("click", () => onCell(cell));
      el.grid.appendChild(div);
    });
  }

  const step = view.grid === null ? "-" : String(view.grid.step);
  const owned = view.ownedCell === null ? "" : ` | your cell: ${view.ownedCell}`;
  el.status.textContent =
    `session ${view.session} | ${view.role} | step ${step}${owned}` +
    (view.connection === "connecting" ? " | connecting..." : "");

  el.toast.textContent = view.toast ?? "";
  el.toast.hidden = view.toast === null;

  if (view.role === "observer") {
    if (view.guessResult !== null) {
      el.guess.textContent = view.guessResult ? "correct!" : "not there";
      el.guess.className = view.guessResult ? "guess good" : "guess bad";
    } else if (view.guessArmed) {
      el.guess.textContent = "guess mode: click the cell you think the human controls";
      el.guess.className = "guess armed";
    } else {
      el.guess.textContent = "press G to guess where the human is";
      el.guess.className = "guess";
    }
    el.guess.hidden = false;
  } else {
    el.guess.hidden = true;
  }

  const k = colorCount(view);
  if (view.role === "player" && k > 2) {
    el.palette.hidden = false;
    el.palette.replaceChildren();
    for (let c = 0; c < k; c++) {
      const swatch = document.createElement("button");
      swatch.className = "swatch";
      swatch.style.background = cellColor(c);
      swatch.title = `color ${c}`;
      swatch.addEventListener("click", () => onColor(c));
      el.palette.appendChild(swatch);
    }
  } else {
    el.palette.hidden = true;
  }
}
