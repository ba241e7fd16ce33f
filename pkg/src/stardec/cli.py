"""``stardec`` command-line front end.

Exit codes: 0 success or feasible, 1 infeasible (certificate emitted),
2 invalid input, 3 refused by oracle caps, 4 internal invariant breach.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from . import __version__
from .decompose import AttemptFailure, DecompInstance, attempt, decompose, verify
from .errors import Infeasible, InputError, InvariantBreach, Refused, StardecError
from .hardness import (
    SearchMiss,
    ThreePartitionInstance,
    even_if_assignment,
    gen_hard_even,
    gen_hard_odd,
    odd_if_assignment,
    solve_three_partition,
)
from .multigraph import Multigraph, Star, StarPacking, complete_multigraph, coverage_check
from .multiset import IntMultiset
from .oracle import DEFAULT_CAPS, OracleCaps, min_delta, oracle_decompose, oracle_pack, oracle_summary, oracle_tournament
from .packing import CenterSpec, Certificate, build_packing_network, delta_eval, pack_with_centers
from .tournament import Tournament, TournamentSpec, realize_tournament, tournament_feasible, verify_tournament

EXIT_OK, EXIT_INFEASIBLE, EXIT_INPUT, EXIT_REFUSED, EXIT_BREACH = 0, 1, 2, 3, 4


@dataclass
class RunConfig:
    command: str
    inputs: list[str] = field(default_factory=list)
    output: str | None = None
    seed: int = 0
    threads: int = 1
    caps: OracleCaps = field(default_factory=OracleCaps)
    tries: int = 8


# -- I/O ----------------------------------------------------------------------------


def _load_json(path: str) -> Any:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: cannot read ({exc.strerror})") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: malformed JSON: {exc.msg}") from None


def _json_arg(text: str) -> Any:
    """A path to a JSON file, or inline JSON."""
    if Path(text).is_file() or text == "-":
        return _load_json(text)
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        raise InputError(f"{text!r} is neither a readable file nor inline JSON") from None


def _emit(cfg: RunConfig, payload: Any) -> None:
    text = json.dumps(payload, sort_keys=True) + "\n"
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        sys.stdout.write(text)


def _stars_json(stars) -> list[dict]:
    return [s.to_json() for s in sorted(stars)]


# -- pack ------------------------------------------------------------------------------


def _load_pack(path: str) -> tuple[Multigraph, CenterSpec]:
    obj = _load_json(path)
    if not isinstance(obj, dict) or "centers" not in obj:
        raise InputError(f'{path}: pack instance needs a multigraph plus a "centers" object')
    g = Multigraph.from_json({k: v for k, v in obj.items() if k != "centers"})
    return g, CenterSpec.from_json(g.n, obj["centers"])


def cmd_pack(cfg: RunConfig, args) -> int:
    g, spec = _load_pack(cfg.inputs[0])
    if args.dump_network:
        Path(args.dump_network).write_text(build_packing_network(g, spec).dump())
    out = pack_with_centers(g, spec)
    if isinstance(out, StarPacking):
        if not coverage_check(out, exact=False):
            raise InvariantBreach("packing exceeds host multiplicities")
        _emit(cfg, {"feasible": True, "stars": _stars_json(out.stars)})
        return EXIT_OK
    payload = {"feasible": False, "f": out.f.to_json(), "delta": out.delta}
    if args.certificate:
        recheck = delta_eval(g, spec, out.f)
        if recheck.delta != out.delta or recheck.delta >= 0:
            raise InvariantBreach("certificate does not re-evaluate to a negative Delta")
        payload.update(out.to_json())
    _emit(cfg, payload)
    return EXIT_INFEASIBLE


# -- decompose ---------------------------------------------------------------------------


def _load_decomp(cfg: RunConfig, args) -> DecompInstance:
    if cfg.inputs:
        obj = _load_json(cfg.inputs[0])
        if isinstance(obj, dict) and "instance" in obj:
            obj = obj["instance"]  # gen-hard output
        return DecompInstance.from_json(obj)
    if args.lam is None or args.n is None or args.sizes is None:
        raise InputError("decompose needs an instance file or all of --lambda, --n and --sizes")
    return DecompInstance(args.lam, args.n, IntMultiset.from_json(_json_arg(args.sizes)))


def cmd_decompose(cfg: RunConfig, args) -> int:
    inst = _load_decomp(cfg, args)
    if args.attempt:
        out = attempt(inst, tries=cfg.tries, seed=cfg.seed, threads=cfg.threads)
        if isinstance(out, AttemptFailure):
            _emit(cfg, out.to_json())
            return EXIT_INFEASIBLE
    else:
        out = decompose(inst)
    if not verify(inst, out):
        raise InvariantBreach("decomposition failed verification")
    _emit(cfg, {"feasible": True, "lambda": inst.lam, "n": inst.n, "stars": _stars_json(out.stars)})
    return EXIT_OK


# -- tournament ----------------------------------------------------------------------------


def cmd_tournament(cfg: RunConfig, args) -> int:
    spec = TournamentSpec.from_json(_load_json(cfg.inputs[0]))
    v = tournament_feasible(spec)
    payload: dict[str, Any] = {"feasible": v.feasible}
    if not v.feasible:
        payload.update({"k": v.k, "lhs_doubled": v.lhs, "rhs_doubled": v.rhs})
        _emit(cfg, payload)
        return EXIT_INFEASIBLE
    if args.realize:
        t = realize_tournament(spec)
        payload["out"] = [list(r) for r in t.out]
    _emit(cfg, payload)
    return EXIT_OK


# -- gen-hard ----------------------------------------------------------------------------------


def cmd_gen_hard(cfg: RunConfig, args) -> int:
    tp = ThreePartitionInstance.parse(args.partition)
    if args.lam % 2:
        params, inst = gen_hard_odd(args.lam, tp)
    else:
        res = gen_hard_even(args.lam, tp, args.search_limit)
        if isinstance(res, SearchMiss):
            _emit(cfg, {"found": False, "search_limit": res.limit, "tightest_constraint": res.constraint,
                        "candidates": res.candidates})
            return EXIT_INFEASIBLE
        params, inst = res
    payload = {"found": True, "partition": list(tp.values), "params": params.to_json(), "instance": inst.to_json()}
    if args.check_if:
        triples = solve_three_partition(tp)
        if triples is None:
            payload["if_direction"] = "no 3-partition exists; nothing to check"
        else:
            spec = (odd_if_assignment if args.lam % 2 else even_if_assignment)(params, tp, triples)
            out = pack_with_centers(complete_multigraph(inst.lam, inst.n), spec)
            if not isinstance(out, StarPacking) or not verify(inst, out):
                raise InvariantBreach("if-direction assignment did not give a decomposition")
            payload["if_direction"] = "verified"
    _emit(cfg, payload)
    return EXIT_OK


# -- oracle --------------------------------------------------------------------------------------


def cmd_oracle(cfg: RunConfig, args) -> int:
    kind = args.kind
    if kind == "pack":
        g, spec = _load_pack(cfg.inputs[0])
        try:
            res = oracle_pack(g, spec, DEFAULT_CAPS)
        except Refused:
            # past the default backtracking caps only raised caps admit the instance,
            # and then the restriction-function enumeration decides it
            if g.n > cfg.caps.pack_n or spec.total() > cfg.caps.pack_sigma \
                    or any(m > cfg.caps.pack_mu for _, m in g.pairs()):
                raise
            lo, f = min_delta(g, spec, cfg.caps)
            _emit(cfg, {"feasible": lo >= 0, "method": "restriction-enumeration", "min_delta": lo,
                        "f": {str(v): x for v, x in enumerate(f)}})
            return EXIT_OK if lo >= 0 else EXIT_INFEASIBLE
    elif kind == "decompose":
        res = oracle_decompose(DecompInstance.from_json(_load_json(cfg.inputs[0])), cfg.caps)
    else:
        res = oracle_tournament(TournamentSpec.from_json(_load_json(cfg.inputs[0])), cfg.caps)
    _emit(cfg, oracle_summary(res))
    return EXIT_OK if res.feasible else EXIT_INFEASIBLE


# -- verify ----------------------------------------------------------------------------------------


def cmd_verify(cfg: RunConfig, args) -> int:
    inst_obj = _load_json(cfg.inputs[0])
    sol = _load_json(cfg.inputs[1])
    if isinstance(inst_obj, dict) and "instance" in inst_obj:
        inst_obj = inst_obj["instance"]
    if isinstance(inst_obj, dict) and "a" in inst_obj:
        spec = TournamentSpec.from_json(inst_obj)
        out = sol.get("out") if isinstance(sol, dict) else sol
        if not isinstance(out, list) or not all(isinstance(r, list) for r in out):
            raise InputError('tournament solution needs an "out" matrix')
        ok = verify_tournament(spec, Tournament(spec.lam, tuple(tuple(r) for r in out)))
    else:
        raw = sol.get("stars") if isinstance(sol, dict) else sol
        if not isinstance(raw, list):
            raise InputError('solution needs a "stars" array')
        stars = [Star.from_json(s) for s in raw]
        if isinstance(inst_obj, dict) and "centers" in inst_obj:
            g = Multigraph.from_json({k: v for k, v in inst_obj.items() if k != "centers"})
            spec = CenterSpec.from_json(g.n, inst_obj["centers"])
            by_centre = [IntMultiset(s.size for s in stars if s.center == v) for v in range(g.n)]
            ok = (all(s.center < g.n for s in stars) and tuple(by_centre) == spec.sets
                  and bool(coverage_check(StarPacking(tuple(stars), g), exact=False)))
        else:
            ok = verify(DecompInstance.from_json(inst_obj), stars)
    _emit(cfg, {"valid": ok})
    return EXIT_OK if ok else EXIT_INFEASIBLE


# -- selftest ---------------------------------------------------------------------------------------


def cmd_selftest(cfg: RunConfig, args) -> int:
    from .acceptance import run_all

    only = [int(x) for x in args.only.split(",")] if args.only else None
    results = run_all(seed=cfg.seed, only=only, echo=lambda s: print(s, flush=True))
    failed = [r.number for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed", flush=True)
    return EXIT_OK if not failed else EXIT_INFEASIBLE


# -- parser -------------------------------------------------------------------------------------------


def _caps(pairs: list[str]) -> OracleCaps:
    caps = OracleCaps()
    names = {f.name for f in dataclasses.fields(OracleCaps)}
    for item in pairs or []:
        key, sep, val = item.partition("=")
        if not sep or key not in names:
            raise InputError(f"--cap expects NAME=INT with NAME in {sorted(names)}, got {item!r}")
        try:
            caps = dataclasses.replace(caps, **{key: int(val)})
        except ValueError:
            raise InputError(f"--cap {key} needs an integer, got {val!r}") from None
    return caps


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--output", help="write JSON here instead of stdout")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized steps (default 0)")
    common.add_argument("--threads", type=int, default=1, help="worker threads (default 1)")

    p = argparse.ArgumentParser(prog="stardec", description="Star packings and decompositions of multigraphs.")
    p.add_argument("--version", action="version", version=f"stardec {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("pack", parents=[common], help="pack stars with prescribed centres")
    s.add_argument("instance")
    s.add_argument("--certificate", action="store_true", help="re-check and include the full certificate")
    s.add_argument("--dump-network", metavar="PATH", help="write the flow network in text form")

    s = sub.add_parser("decompose", parents=[common], help="decompose lambda K_n into stars of given sizes")
    s.add_argument("instance", nargs="?", help="instance JSON (alternative to --lambda/--n/--sizes)")
    s.add_argument("--lambda", dest="lam", type=int)
    s.add_argument("--n", type=int)
    s.add_argument("--sizes", help="JSON file or inline JSON array (plain or run-length)")
    s.add_argument("--attempt", action="store_true", help="bounded search above the threshold")
    s.add_argument("--tries", type=int, default=8)

    s = sub.add_parser("tournament", parents=[common], help="decide or realize a lambda-fold tournament")
    s.add_argument("spec")
    s.add_argument("--realize", action="store_true")

    s = sub.add_parser("gen-hard", parents=[common], help="generate a hard instance from a 3-partition instance")
    s.add_argument("--lambda", dest="lam", type=int, required=True)
    s.add_argument("--partition", required=True, help='comma-separated values, e.g. "2,2,3"')
    s.add_argument("--search-limit", type=int, default=5000, help="largest n tried for even lambda")
    s.add_argument("--check-if", action="store_true", help="build and verify the solution from a 3-partition")

    s = sub.add_parser("oracle", parents=[common], help="brute-force decision for tiny instances")
    s.add_argument("kind", choices=["pack", "decompose", "tournament"])
    s.add_argument("instance")
    s.add_argument("--cap", action="append", metavar="NAME=INT", help="override an oracle cap")

    s = sub.add_parser("verify", parents=[common], help="check a solution against its instance")
    s.add_argument("instance")
    s.add_argument("solution")

    s = sub.add_parser("selftest", parents=[common], help="run the acceptance suite")
    s.add_argument("--only", help="comma-separated criterion numbers")
    return p


COMMANDS = {
    "pack": cmd_pack, "decompose": cmd_decompose, "tournament": cmd_tournament, "gen-hard": cmd_gen_hard,
    "oracle": cmd_oracle, "verify": cmd_verify, "selftest": cmd_selftest,
}


def _config(args) -> RunConfig:
    inputs = [x for x in (getattr(args, "instance", None), getattr(args, "spec", None),
                          getattr(args, "solution", None)) if x]
    if args.threads < 1:
        raise InputError("--threads must be at least 1")
    return RunConfig(args.command, inputs, args.output, args.seed, args.threads,
                     _caps(getattr(args, "cap", None)), getattr(args, "tries", 8))


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        cfg = _config(args)
        return COMMANDS[args.command](cfg, args)
    except Infeasible as exc:
        cert = exc.certificate
        payload = {"feasible": False, "error": str(exc)}
        if isinstance(cert, Certificate):
            payload.update(cert.to_json())
        print(json.dumps(payload, sort_keys=True))
        return EXIT_INFEASIBLE
    except Refused as exc:
        print(f"stardec: refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except InvariantBreach as exc:
        print(f"stardec: internal invariant breach: {exc}", file=sys.stderr)
        return EXIT_BREACH
    except InputError as exc:
        print(f"stardec: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except StardecError as exc:
        print(f"stardec: {exc}", file=sys.stderr)
        return EXIT_BREACH


def main() -> None:
    sys.exit(run())
