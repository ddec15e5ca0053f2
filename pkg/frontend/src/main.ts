// Browser wiring: forms in, server state out, one board per view.
// Every displayed menu comes straight from the last server response.

import { createStructure, newGame, submitMove, type SubmitResult } from "./api";
import { renderSvg } from "./render";
import { projectView, type ClientGameView } from "./view";
import type { GameStateJson, LegalOption } from "./types";

const base = "";
let currentGame: string | null = null;
let busy = false;

function el<T extends HTMLElement>(id: string): T {
  const got = document.getElementById(id);
  if (!got) throw new Error(`missing element ${id}`);
  return got as T;
}

function showError(message: string): void {
  el<HTMLDivElement>("error").textContent = message;
}

function renderMenu(entries: { token: number; label: string }[]): void {
  const menu = el<HTMLDivElement>("menu");
  menu.replaceChildren();
  for (const entry of entries) {
    const button = document.createElement("button");
    button.textContent = `[${entry.token}] ${entry.label}`;
    button.addEventListener("click", () => play(entry.token));
    menu.appendChild(button);
  }
}

function renderState(state: GameStateJson): void {
  const view: ClientGameView = projectView(state);
  el<HTMLDivElement>("verdict").textContent = view.verdict;
  el<HTMLDivElement>("pending").textContent = view.pending
    ? `Pending demand: ${view.pending}`
    : "";
  el<HTMLDivElement>("board").innerHTML = view.graph
    ? renderSvg(view.graph)
    : "";
  el<HTMLUListElement>("history").replaceChildren(
    ...view.history.map((line) => {
      const item = document.createElement("li");
      item.textContent = line;
      return item;
    }),
  );
  renderMenu(view.menu);
  showError("");
}

function renderRejection(error: string, legal: LegalOption[]): void {
  showError(`Rejected: ${error}. Legal options follow.`);
  renderMenu(
    legal.map((opt) => ({
      token: opt.token,
      label: opt.move ? JSON.stringify(opt.move) : "response",
    })),
  );
}

async function play(token: number): Promise<void> {
  if (!currentGame || busy) return;
  busy = true;
  try {
    const result: SubmitResult = await submitMove(base, currentGame, { token });
    if (result.ok) {
      renderState(result.state);
    } else {
      renderRejection(result.error, result.legal);
    }
  } catch (exc) {
    showError(String(exc));
  } finally {
    busy = false;
  }
}

async function start(): Promise<void> {
  try {
    const structureId = await createStructure(base, {
      kind: "rainbow",
      n: Number(el<HTMLInputElement>("n").value),
      greenLow: Number(el<HTMLInputElement>("greenLow").value),
      redBound: Number(el<HTMLInputElement>("redBound").value),
      yellowUniverse: Number(el<HTMLInputElement>("yellowUniverse").value),
    });
    const role = el<HTMLSelectElement>("role").value as "A" | "E";
    const rounds = Number(el<HTMLInputElement>("rounds").value);
    const bound = el<HTMLInputElement>("nodeBound").value;
    const kind = bound
      ? { game: "F", nodeBound: Number(bound) }
      : { game: "H" };
    const made = await newGame(base, {
      structureId,
      kind,
      humanRole: role,
      rounds,
    });
    currentGame = made.gameId;
    renderState(made.state);
  } catch (exc) {
    showError(String(exc));
  }
}

el<HTMLButtonElement>("start").addEventListener("click", () => void start());
