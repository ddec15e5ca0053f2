// Thin fetch wrappers over the game service. All calls are sequential
// per game; errors surface as structured results, never thrown away.

import type { GameStateJson, LegalOption } from "./types";

export type SubmitResult =
  | { ok: true; state: GameStateJson }
  | { ok: false; error: string; legal: LegalOption[] };

export async function createStructure(
  base: string,
  doc: unknown,
): Promise<string> {
  const res = await fetch(`${base}/api/structures`, {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify(doc),
  });
  if (!res.ok) throw new Error(`structure rejected: ${res.status}`);
  return (await res.json()).id;
}

export async function newGame(
  base: string,
  form: {
    structureId: string;
    kind: unknown;
    humanRole: "A" | "E";
    rounds: number;
  },
): Promise<{ gameId: string; state: GameStateJson }> {
  const res = await fetch(`${base}/api/games`, {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify(form),
  });
  if (!res.ok) throw new Error(`game rejected: ${res.status}`);
  return res.json();
}

export async function fetchState(
  base: string,
  gameId: string,
): Promise<GameStateJson> {
  const res = await fetch(`${base}/api/games/${gameId}`);
  if (!res.ok) throw new Error(`unknown game: ${res.status}`);
  return res.json();
}

export async function submitMove(
  base: string,
  gameId: string,
  body: { token: number } | { move: unknown },
): Promise<SubmitResult> {
  const res = await fetch(`${base}/api/games/${gameId}/moves`, {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify(body),
  });
  const doc = await res.json();
  if (res.status === 409) {
    return { ok: false, error: doc.error ?? "rejected", legal: doc.legal ?? [] };
  }
  if (!res.ok) throw new Error(`move rejected: ${res.status}`);
  return { ok: true, state: doc };
}
