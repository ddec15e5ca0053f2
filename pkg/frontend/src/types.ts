// JSON shapes returned by the game service. The client treats them as
// opaque authority: no rule logic happens on this side.

export type Colour =
  | { kind: "greenI"; index: number }
  | { kind: "greenSuper"; index: number }
  | { kind: "white" }
  | { kind: "whiteF"; fn: [number, number][] }
  | { kind: "yellow" }
  | { kind: "black" }
  | { kind: "red"; i: number; j: number };

export type Shade = { all: true } | { set: number[] };

export interface PositionLabel {
  tuple: number[];
  atom: string;
}

export interface PositionJson {
  labels: PositionLabel[];
  hyperlabels: [number[], string][];
}

export interface MoveJson {
  move: string;
  [key: string]: unknown;
}

export interface LegalOption {
  token: number;
  move?: MoveJson;
  state?: PositionJson;
}

export interface GameStateJson {
  gameId: string;
  kind: { game: string; nodeBound?: number; rounds?: number };
  humanRole: "A" | "E";
  rounds: number;
  round: number;
  positions: PositionJson[];
  moves: { by: "A" | "E"; move?: MoveJson; state?: PositionJson }[];
  winner: "A" | "E" | null;
  haltReason: string | null;
  pendingMove: MoveJson | null;
  legalMoves: LegalOption[];
}

export interface RejectionJson {
  error: string;
  legal: LegalOption[];
}

// decoded atom: node identities per slot, pairwise colours, base shades
export interface AtomParts {
  eq: number[];
  edges: [[number, number], Colour][];
  tuples: [number[], Shade][];
}
