"""Local HTTP/JSON game service.

In-memory sessions: uploaded structures and running games.  A human
plays one side against the engine (the scripted attacker or the
survival strategy); every returned state revalidates, and the legal
move menu mirrors the engine's own enumeration.  Snapshots go to
CYLGAMES_DATA_DIR when set.
"""

from __future__ import annotations

import itertools
import json
import os
import threading

from fastapi import FastAPI, HTTPException
from fastapi.responses import JSONResponse

from .cli import structure_from_doc
from .games import (
    F_game,
    H_game,
    StrategyError,
    _move_is_legal,
    abelard_rainbow_script,
    eloise_rainbow_strategy,
    legal_moves_abelard,
    legal_responses_eloise,
    move_from_json,
    move_to_json,
    new_game,
)
from .networks import validate_network

MOVE_MENU_CAP = 300
RESPONSE_MENU_CAP = 60


class Game:
    def __init__(self, game_id, structure, kind, human, rounds, restricted=True):
        self.id = game_id
        self.structure = structure
        self.kind = kind
        self.human = human  # "A" or "E"
        self.rounds = rounds
        self.state = new_game(structure, kind, restricted)
        self.moves = []  # history of {"by", "move"/"state"}
        self.winner = None
        self.halt = None
        self.pending = None  # A's move awaiting E's response
        self.legal = []  # tokenized options for the human
        self.lock = threading.Lock()
        rainbow = getattr(structure, "is_rainbow", False)
        self.engine_e = eloise_rainbow_strategy(structure, rounds) if rainbow else None
        self.engine_a = None
        if human == "E" and rainbow:
            try:
                self.engine_a = abelard_rainbow_script(structure, kind, rounds)
            except ValueError:
                self.engine_a = None
        self.advance()

    # -- engine turns -------------------------------------------------

    def engine_move(self):
        if self.engine_a is not None:
            return self.engine_a(self.state)
        stream = legal_moves_abelard(self.state, atom_limit=MOVE_MENU_CAP)
        for move in stream:
            return move
        return None

    def engine_response(self, move):
        if self.engine_e is not None:
            try:
                return self.engine_e(self.state, move)
            except StrategyError:
                return None
        got = legal_responses_eloise(self.state, move, cap=5000)
        return got[0] if got else None

    def advance(self):
        """Run engine turns until the human must act or the game ends."""
        while self.winner is None:
            if self.state.round >= self.rounds:
                self.winner, self.halt = "E", "eloise survived all rounds"
                return
            if self.pending is None:
                # attacker to move
                if self.human == "A":
                    self.legal = list(
                        itertools.islice(
                            legal_moves_abelard(self.state, atom_limit=MOVE_MENU_CAP),
                            MOVE_MENU_CAP,
                        )
                    )
                    if not self.legal:
                        self.winner, self.halt = "E", "abelard cannot move"
                    return
                move = self.engine_move()
                if move is None:
                    self.winner, self.halt = "E", "abelard cannot move"
                    return
                self.pending = move
                self.moves.append({"by": "A", "move": move_to_json(move)})
            else:
                # defender to respond
                if self.human == "E":
                    try:
                        self.legal = legal_responses_eloise(
                            self.state, self.pending, cap=RESPONSE_MENU_CAP * 50
                        )[:RESPONSE_MENU_CAP]
                    except Exception:
                        self.legal = []
                    if not self.legal:
                        self.winner, self.halt = "A", "eloise has no response"
                    return
                response = self.engine_response(self.pending)
                if response is None:
                    self.winner, self.halt = "A", "eloise has no response"
                    return
                self.state = self.state.append(response)
                self.moves.append({"by": "E", "state": response.to_json()})
                self.pending = None

    # -- human turns --------------------------------------------------

    def human_abelard(self, move):
        if self.human != "A" or self.pending is not None:
            raise Illegal("it is not the attacker's turn", self.legal_json())
        if not _move_is_legal(self.state, move):
            raise Illegal("illegal move", self.legal_json())
        self.pending = move
        self.moves.append({"by": "A", "move": move_to_json(move)})
        self.advance()

    def human_eloise(self, response):
        if self.human != "E" or self.pending is None:
            raise Illegal("it is not the defender's turn", self.legal_json())
        self.state = self.state.append(response)
        self.moves.append({"by": "E", "state": response.to_json()})
        self.pending = None
        self.advance()

    def legal_json(self):
        if self.human == "A":
            return [
                {"token": i, "move": move_to_json(m)}
                for i, m in enumerate(self.legal)
            ]
        return [
            {"token": i, "state": p.to_json()} for i, p in enumerate(self.legal)
        ]

    def to_json(self):
        positions = [p.to_json() for p in self.state.positions]
        for p in self.state.positions:
            problems = validate_network(p.as_network())
            assert not problems, problems
        return {
            "gameId": self.id,
            "kind": self.kind.to_json(),
            "humanRole": self.human,
            "rounds": self.rounds,
            "round": self.state.round,
            "positions": positions,
            "moves": self.moves,
            "winner": self.winner,
            "haltReason": self.halt,
            "pendingMove": move_to_json(self.pending) if self.pending else None,
            "legalMoves": self.legal_json() if self.winner is None else [],
        }


class Illegal(Exception):
    def __init__(self, message, legal):
        super().__init__(message)
        self.legal = legal


def kind_from_json(doc, rounds):
    if isinstance(doc, str):
        doc = {"game": doc}
    game = doc.get("game")
    if game == "F":
        bound = doc.get("nodeBound")
        if bound is None:
            raise ValueError("the bounded game needs nodeBound")
        return F_game(bound, rounds)
    if game == "H":
        return H_game(rounds)
    raise ValueError("kind must name game F or H")


def create_app(data_dir=None):
    app = FastAPI(title="cylgames")
    data_dir = data_dir or os.environ.get("CYLGAMES_DATA_DIR")
    structures = {}
    games = {}
    counter = itertools.count(1)
    registry_lock = threading.Lock()

    def snapshot(name, doc):
        if not data_dir:
            return
        os.makedirs(data_dir, exist_ok=True)
        with open(os.path.join(data_dir, f"{name}.json"), "w") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)

    @app.post("/api/structures")
    def post_structure(doc: dict):
        try:
            structure = structure_from_doc(doc)
        except (ValueError, KeyError) as exc:
            raise HTTPException(status_code=400, detail=f"bad structure: {exc}")
        with registry_lock:
            sid = f"s{next(counter)}"
            structures[sid] = {"doc": doc, "structure": structure}
        snapshot(sid, doc)
        return {"id": sid}

    @app.get("/api/structures")
    def get_structures():
        with registry_lock:
            return [{"id": sid, "doc": entry["doc"]}
                    for sid, entry in sorted(structures.items())]

    @app.post("/api/games")
    def post_game(doc: dict):
        with registry_lock:
            entry = structures.get(doc.get("structureId"))
        if entry is None:
            raise HTTPException(status_code=404, detail="unknown structure")
        human = doc.get("humanRole", "A")
        if human not in ("A", "E"):
            raise HTTPException(status_code=400, detail="humanRole must be A or E")
        rounds = doc.get("rounds", 3)
        try:
            kind = kind_from_json(doc.get("kind", "H"), rounds)
            game_id = f"g{next(counter)}"
            game = Game(game_id, entry["structure"], kind, human, rounds,
                        restricted=doc.get("restricted", True))
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        with registry_lock:
            games[game_id] = game
        return {"gameId": game_id, "state": game.to_json()}

    def _game(game_id):
        with registry_lock:
            game = games.get(game_id)
        if game is None:
            raise HTTPException(status_code=404, detail="unknown game")
        return game

    @app.get("/api/games/{game_id}")
    def get_game(game_id: str):
        game = _game(game_id)
        with game.lock:
            return game.to_json()

    @app.post("/api/games/{game_id}/moves")
    def post_move(game_id: str, doc: dict):
        game = _game(game_id)
        with game.lock:
            if game.winner is not None:
                raise HTTPException(status_code=409, detail="game is over")
            try:
                if game.human == "A":
                    if "token" in doc:
                        try:
                            move = game.legal[int(doc["token"])]
                        except (IndexError, ValueError):
                            return _illegal("unknown token", game)
                    elif "move" in doc:
                        try:
                            move = move_from_json(game.structure, doc["move"])
                        except (ValueError, KeyError) as exc:
                            raise HTTPException(status_code=400,
                                                detail=f"bad move: {exc}")
                    else:
                        raise HTTPException(status_code=400,
                                            detail="post a move or a token")
                    game.human_abelard(move)
                else:
                    if "token" not in doc:
                        raise HTTPException(status_code=400,
                                            detail="post a response token")
                    try:
                        response = game.legal[int(doc["token"])]
                    except (IndexError, ValueError):
                        return _illegal("unknown token", game)
                    game.human_eloise(response)
            except Illegal as exc:
                return JSONResponse(
                    status_code=409,
                    content={"error": str(exc), "legal": exc.legal},
                )
            return game.to_json()

    def _illegal(message, game):
        return JSONResponse(
            status_code=409,
            content={"error": message, "legal": game.legal_json()},
        )

    return app
