// Pure projection of a server game state into display data. Everything
// here must be deterministic and side-effect free; legality is never
// recomputed, only reshaped.

import type {
  AtomParts,
  Colour,
  GameStateJson,
  LegalOption,
  MoveJson,
  PositionJson,
  Shade,
} from "./types";

export function parseAtom(encoded: string): AtomParts {
  const [eq, edges, tuples] = JSON.parse(encoded);
  return { eq, edges, tuples };
}

export interface GraphView {
  nodes: number[];
  edges: { u: number; v: number; colour: Colour }[];
  shades: { base: number[]; shade: Shade }[];
}

function labelFor(position: PositionJson, tuple: number[]): string | null {
  for (const entry of position.labels) {
    if (
      entry.tuple.length === tuple.length &&
      entry.tuple.every((x, i) => x === tuple[i])
    ) {
      return entry.atom;
    }
  }
  return null;
}

export function graphFromPosition(position: PositionJson): GraphView {
  const nodes = new Set<number>();
  for (const entry of position.labels) {
    for (const x of entry.tuple) nodes.add(x);
  }
  const sorted = [...nodes].sort((a, b) => a - b);
  const n = position.labels.length ? position.labels[0].tuple.length : 0;
  const edges: GraphView["edges"] = [];
  const shades: GraphView["shades"] = [];
  const seenShades = new Set<string>();
  for (const u of sorted) {
    for (const v of sorted) {
      if (u >= v) continue;
      // the tuple (u, v, v, ...) carries the pairwise label in slots 0/1
      const probe = [u, ...Array(n - 1).fill(v)];
      const atomText = labelFor(position, probe);
      if (atomText === null) continue;
      const atom = parseAtom(atomText);
      const a = atom.eq[0];
      const b = atom.eq[1];
      for (const [[x, y], colour] of atom.edges) {
        if ((x === a && y === b) || (x === b && y === a)) {
          edges.push({ u, v, colour });
        }
      }
      for (const [base, shade] of atom.tuples) {
        // base pairs live on atom node ids; map them back through eq
        const back = base.map((id) => (id === a ? u : id === b ? v : null));
        if (back.some((x) => x === null)) continue;
        const key = back.join(",");
        if (!seenShades.has(key)) {
          seenShades.add(key);
          shades.push({ base: back as number[], shade });
        }
      }
    }
  }
  return { nodes: sorted, edges, shades };
}

export interface MenuEntry {
  token: number;
  label: string;
  raw: LegalOption;
}

export function describeColour(c: Colour): string {
  switch (c.kind) {
    case "greenI":
      return `g${c.index}`;
    case "greenSuper":
      return `g0^${c.index}`;
    case "white":
      return "w";
    case "whiteF":
      return `w[${c.fn.map(([a, v]) => `${a}>${v}`).join(",")}]`;
    case "yellow":
      return "y";
    case "black":
      return "b";
    case "red":
      return `r(${c.i},${c.j})`;
  }
}

export function describeMove(move: MoveJson): string {
  if (move.move === "initial") {
    return `Initial atom ${shortAtom(move.atom as string)}`;
  }
  if (move.move === "cylindrifier") {
    return (
      `Witness node ${move.k} over face (${(move.face as number[]).join(",")})` +
      ` at slot ${move.l}, atom ${shortAtom(move.atom as string)}`
    );
  }
  if (move.move === "transformation") {
    return `Transform position ${move.net}`;
  }
  if (move.move === "amalgamation") {
    return `Amalgamate positions ${move.m} and ${move.n}`;
  }
  return move.move;
}

function shortAtom(encoded: string): string {
  const atom = parseAtom(encoded);
  const cols = atom.edges.map(
    ([[x, y], c]) => `${x}-${y}:${describeColour(c)}`,
  );
  return `[${atom.eq.join(",")}|${cols.join(" ")}]`;
}

export function menuFromLegal(legal: LegalOption[]): MenuEntry[] {
  return legal.map((opt) => ({
    token: opt.token,
    label: opt.move
      ? describeMove(opt.move)
      : `Respond with position (${opt.state!.labels.length} labels)`,
    raw: opt,
  }));
}

export interface ClientGameView {
  gameId: string;
  humanRole: "A" | "E";
  round: number;
  rounds: number;
  winner: "A" | "E" | null;
  haltReason: string | null;
  verdict: string;
  pending: string | null;
  graph: GraphView | null;
  boards: GraphView[];
  menu: MenuEntry[];
  history: string[];
}

export function verdictLine(state: GameStateJson): string {
  if (state.winner === "A") {
    return `The attacker wins: ${state.haltReason ?? "no reply"}`;
  }
  if (state.winner === "E") {
    return `The defender wins: ${state.haltReason ?? "survived"}`;
  }
  return `Round ${state.round} of ${state.rounds}`;
}

export function projectView(state: GameStateJson): ClientGameView {
  const boards = state.positions.map(graphFromPosition);
  return {
    gameId: state.gameId,
    humanRole: state.humanRole,
    round: state.round,
    rounds: state.rounds,
    winner: state.winner,
    haltReason: state.haltReason,
    verdict: verdictLine(state),
    pending: state.pendingMove ? describeMove(state.pendingMove) : null,
    graph: boards.length ? boards[boards.length - 1] : null,
    boards,
    menu: menuFromLegal(state.legalMoves),
    history: state.moves.map((m) =>
      m.move ? `${m.by}: ${describeMove(m.move)}` : `${m.by}: response played`,
    ),
  };
}
