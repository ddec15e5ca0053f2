"""Command-line interface: validation, building, solving, the scripted
match, the hyperplane operations, and the HTTP service launcher.

Machine output is JSON on stdout; diagnostics go to stderr.  Exit codes:
0 success, 1 negative verdict (invalid structure, class rejection,
losing side), 2 usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from .atom_structure import AtomStructure, validate_atom_structure, check_ca_axioms
from .games import (
    F_game,
    H_game,
    StrategyError,
    abelard_rainbow_script,
    eloise_rainbow_strategy,
    legal_moves_abelard,
    legal_responses_eloise,
    move_from_json,
    move_to_json,
    new_game,
    run_match,
    solve,
)
from .rainbow import (
    ColouredGraph,
    RainbowParams,
    build_rainbow_atom_structure,
    check_J_membership,
)


def params_to_json(params):
    return {
        "kind": "rainbow",
        "n": params.n,
        "greenLow": params.green_low,
        "redBound": params.red_bound,
        "yellowUniverse": params.yellow_universe,
    }


def params_from_json(doc):
    return RainbowParams(
        n=doc["n"],
        green_low=doc["greenLow"],
        red_bound=doc["redBound"],
        yellow_universe=doc["yellowUniverse"],
    )


def structure_from_doc(doc):
    """A structure from either a rainbow parameter document or an
    explicit atom-structure document."""
    if doc.get("kind") == "rainbow" or "greenLow" in doc:
        return build_rainbow_atom_structure(params_from_json(doc))
    return AtomStructure.from_json(doc)


def game_kind(name, m=None, rounds=None):
    if name == "F":
        if m is None:
            raise ValueError("the bounded game needs a node bound")
        return F_game(m, rounds)
    if name == "H":
        return H_game(rounds)
    raise ValueError("kind must be F or H")


def _emit(doc):
    json.dump(doc, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def _load(path):
    with open(path) as fh:
        return json.load(fh)


# ----------------------------------------------------------------------
# subcommands


def cmd_structure_validate(args):
    doc = _load(args.file)
    structure = structure_from_doc(doc)
    if getattr(structure, "is_rainbow", False):
        _emit({"valid": True, "violations": [], "kind": "rainbow"})
        return 0
    violations = validate_atom_structure(structure)
    violations.extend(str(v) for v in check_ca_axioms(structure))
    _emit({"valid": not violations, "violations": violations})
    return 0 if not violations else 1


def cmd_rainbow_build(args):
    params = RainbowParams(
        n=args.n,
        green_low=args.green_low,
        red_bound=args.red_bound,
        yellow_universe=args.yellow_universe,
    )
    doc = params_to_json(params)
    if args.output:
        with open(args.output, "w") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
        print(f"wrote {args.output}", file=sys.stderr)
    _emit(doc)
    return 0


def cmd_graph_check_j(args):
    doc = _load(args.file)
    params = params_from_json(doc["params"])
    graph = ColouredGraph.from_json(doc["graph"], params.n)
    violations = check_J_membership(graph, params)
    _emit({"member": not violations, "violations": violations})
    return 0 if not violations else 1


def cmd_game_solve(args):
    structure = structure_from_doc(_load(args.structure))
    kind = game_kind(args.kind, args.m, args.rounds)
    result = solve(structure, kind, rounds=args.rounds,
                   restricted=not args.unrestricted,
                   response_cap=args.response_cap)
    _emit({"winner": result.winner, "rounds": result.rounds,
           "restricted": result.restricted, "stats": result.stats})
    return 0


def cmd_game_script(args):
    structure = structure_from_doc(_load(args.params))
    rounds = args.rounds
    kind = game_kind(args.kind, args.m or structure.dimension + 2, rounds)
    strat_a = abelard_rainbow_script(structure, kind, rounds)
    inner = eloise_rainbow_strategy(structure, rounds)

    def strat_e(state, move):
        try:
            return inner(state, move)
        except StrategyError as exc:
            print(f"defender stuck: {exc}", file=sys.stderr)
            return None

    trace = run_match(structure, kind, strat_a, strat_e, rounds)
    trace.pop("states", None)
    _emit(trace)
    return 0 if trace["winner"] == "A" else 1


def cmd_game_play(args):
    structure = structure_from_doc(_load(args.structure))
    kind = game_kind(args.kind, args.m, args.rounds)
    state = new_game(structure, kind, restricted=not args.unrestricted)
    strat_e = (eloise_rainbow_strategy(structure, args.rounds)
               if getattr(structure, "is_rainbow", False) else None)
    for rnd in range(args.rounds):
        moves = []
        for i, mv in enumerate(legal_moves_abelard(state, atom_limit=args.move_cap)):
            moves.append(mv)
            print(f"[{i}] {json.dumps(move_to_json(mv))}", file=sys.stderr)
            if len(moves) >= args.move_cap:
                break
        if not moves:
            _emit({"winner": "E", "haltReason": "abelard cannot move"})
            return 1
        print(f"round {rnd + 1}: choose a move index", file=sys.stderr)
        line = sys.stdin.readline()
        if not line:
            _emit({"winner": None, "haltReason": "input closed"})
            return 2
        try:
            move = moves[int(line.strip())]
        except (ValueError, IndexError):
            print("not a listed index", file=sys.stderr)
            return 2
        if strat_e is not None:
            try:
                response = strat_e(state, move)
            except StrategyError:
                response = None
        else:
            got = legal_responses_eloise(state, move, cap=1000)
            response = got[0] if got else None
        if response is None:
            _emit({"winner": "A", "haltReason": "eloise has no response"})
            return 0
        state = state.append(response)
        _emit({"round": rnd + 1, "state": response.to_json()})
    _emit({"winner": "E", "haltReason": "eloise survived all rounds"})
    return 1


def cmd_hyperplane_cylindrify(args):
    from .hyperplane import cylindrify, nf_from_json, nf_to_json

    g = nf_from_json(_load(args.file))
    _emit(nf_to_json(cylindrify(g, args.j)))
    return 0


def cmd_hyperplane_witness(args):
    from .hyperplane import witness_solve

    spec = json.loads(args.spec)
    rows = []
    for c in spec.get("constraints", []):
        rows.append((c["t"], tuple(c["coeffs"])))
    s = witness_solve(spec["m"], rows)
    _emit({"point": [{"num": v.numerator, "den": v.denominator} for v in s]})
    return 0


def cmd_serve(args):
    import uvicorn

    from .service import create_app

    host = "0.0.0.0" if args.open else "127.0.0.1"
    uvicorn.run(create_app(), host=host, port=args.port)
    return 0


# ----------------------------------------------------------------------
# parser


def build_parser():
    top = argparse.ArgumentParser(prog="cylgames")
    top.add_argument("--seed", type=int, default=None,
                     help="fix all randomized choices")
    sub = top.add_subparsers(dest="command", required=True)

    s = sub.add_parser("structure").add_subparsers(dest="sub", required=True)
    p = s.add_parser("validate")
    p.add_argument("file")
    p.set_defaults(fn=cmd_structure_validate)

    s = sub.add_parser("rainbow").add_subparsers(dest="sub", required=True)
    p = s.add_parser("build")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--green-low", type=int, default=-6)
    p.add_argument("--red-bound", type=int, default=16)
    p.add_argument("--yellow-universe", type=int, default=8)
    p.add_argument("-o", "--output")
    p.set_defaults(fn=cmd_rainbow_build)

    s = sub.add_parser("graph").add_subparsers(dest="sub", required=True)
    p = s.add_parser("check-j")
    p.add_argument("file")
    p.set_defaults(fn=cmd_graph_check_j)

    s = sub.add_parser("game").add_subparsers(dest="sub", required=True)
    p = s.add_parser("solve")
    p.add_argument("--structure", required=True)
    p.add_argument("--kind", choices=("F", "H"), required=True)
    p.add_argument("--m", type=int)
    p.add_argument("--rounds", type=int, required=True)
    p.add_argument("--unrestricted", action="store_true")
    p.add_argument("--response-cap", type=int, default=20000)
    p.set_defaults(fn=cmd_game_solve)
    p = s.add_parser("script-abelard")
    p.add_argument("--params", required=True)
    p.add_argument("--kind", choices=("F", "H"), default="H")
    p.add_argument("--m", type=int)
    p.add_argument("--rounds", type=int, default=3)
    p.set_defaults(fn=cmd_game_script)
    p = s.add_parser("play")
    p.add_argument("--structure", required=True)
    p.add_argument("--kind", choices=("F", "H"), default="H")
    p.add_argument("--m", type=int)
    p.add_argument("--rounds", type=int, default=3)
    p.add_argument("--move-cap", type=int, default=40)
    p.add_argument("--unrestricted", action="store_true")
    p.add_argument("--interactive", action="store_true")
    p.set_defaults(fn=cmd_game_play)

    s = sub.add_parser("hyperplane").add_subparsers(dest="sub", required=True)
    p = s.add_parser("cylindrify")
    p.add_argument("file")
    p.add_argument("--j", type=int, required=True)
    p.set_defaults(fn=cmd_hyperplane_cylindrify)
    p = s.add_parser("witness")
    p.add_argument("spec")
    p.set_defaults(fn=cmd_hyperplane_witness)

    p = sub.add_parser("serve")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--open", action="store_true",
                   help="listen on all interfaces instead of loopback")
    p.set_defaults(fn=cmd_serve)

    return top


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.seed is not None:
        random.seed(args.seed)
    try:
        return args.fn(args)
    except FileNotFoundError as exc:
        print(f"cannot read {exc.filename}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"bad input: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
