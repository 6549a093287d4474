"""Command line entry point: ``contactdga <command> ...``.

Every command prints JSON (``--format table`` gives a terse text view) and
exits with 0 when all requested checks pass, 1 when a check fails and 2 on
bad input or an exceeded size guard.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, List, Optional, Tuple

from .algebra import (LAURENT, Z2, DGA, AlgebraError, P, SizeGuardExceeded, check_d_squared,
                      check_differential_index)
from .augment import (AugmentationError, augmented_graph, construct_augmentation, euclid_blocks,
                      realized_graph)
from .braid import (DEFAULT_GUARD, Braid, BraidError, closure_dga, count_D, enumerate_D,
                    random_braid)
from .diagram import (DiagramError, area_vector, build_diagram, builtin_spec, incidence_matrix,
                      region_windings)
from .lp import LPError, MoveSpec, cone_system, move_feasible, witness_json
from .monodromy import (MonodromyError, minimal_period, orbit_sequence, order_bounds,
                        predicted_pattern, refined_pattern, torus_monodromy,
                        torus_monodromy_size)
from .reidemeister import (LOOP_EVENTS, MoveError, loop_diagrams, loop_dga, loop_holonomies,
                           loop_monodromy_trefoil, trefoil_dga, verify_homotopy_pair)

INPUT_ERRORS = (AlgebraError, AugmentationError, BraidError, DiagramError, LPError,
                MonodromyError, MoveError, SizeGuardExceeded, OSError, ValueError, KeyError)


class CheckFailed(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    coeff: str = Z2
    guard: int = DEFAULT_GUARD
    max_strands: int = 8
    max_length: int = 20
    fmt: str = "json"
    seed: Optional[int] = None

    def __post_init__(self):
        for name in ("guard", "max_strands", "max_length"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


def _emit(cfg: RunConfig, payload: dict, out=None):
    out = out or sys.stdout
    if cfg.fmt == "json":
        json.dump(payload, out, indent=2, sort_keys=False, default=str)
        out.write("\n")
        return
    for k, v in payload.items():
        if isinstance(v, (dict, list)):
            v = json.dumps(v, default=str)
        out.write(f"{k:<22} {v}\n")


def _check_size(cfg: RunConfig, b: Braid):
    if b.q > cfg.max_strands:
        raise SizeGuardExceeded(f"{b.q} strands exceeds --max-strands {cfg.max_strands}")
    if len(b.word) > cfg.max_length:
        raise SizeGuardExceeded(f"word length {len(b.word)} exceeds --max-length {cfg.max_length}")


def _read_braid(args, cfg: RunConfig) -> Braid:
    if getattr(args, "random", False):
        rng = random.Random(cfg.seed if cfg.seed is not None else 0)
        return random_braid(rng, max_q=min(cfg.max_strands, 5), max_len=min(cfg.max_length, 10),
                            min_q=2)
    text = " ".join(args.braid or []) or None
    if text is None:
        raise ValueError("give a braid such as 'torus 3 2' or 'q=3; w=1 2 1'")
    p = Path(text)
    if p.suffix and p.is_file():
        text = p.read_text()
    return Braid.parse(text)


def _load_json(ref: str) -> dict:
    return json.loads(Path(ref).read_text())


# --- commands ------------------------------------------------------------------

def cmd_dga(args, cfg: RunConfig) -> dict:
    if sum(map(bool, (args.braid, args.file, args.random))) != 1:
        raise ValueError("give exactly one of a braid, --file or --random")
    if args.file:
        data = _load_json(args.file)
        if "generators" not in data:
            raise ValueError("the file carries no DGA (need 'generators' and 'differential')")
        dga = DGA.from_json(data)
        if cfg.coeff == Z2 and dga.ring != Z2:
            dga = dga.reduce_mod2()
        elif cfg.coeff == LAURENT and dga.ring == Z2:
            raise ValueError("a Z2 DGA cannot be lifted to Laurent coefficients")
        source = args.file
    else:
        if cfg.coeff != Z2:
            raise ValueError("braid closures are computed over Z2 only")
        b = _read_braid(args, cfg)
        _check_size(cfg, b)
        dga = closure_dga(b, guard=cfg.guard)
        source = str(b)
    checks = [check_d_squared(dga), check_differential_index(dga)]
    out = {"source": source, "ring": dga.ring,
           "generators": dict(dga.generators),
           "differential": {g: str(p) for g, p in dga.diff.items()},
           "checks": [c.to_json() for c in checks], "ok": all(checks)}
    return out


def _diagram_from(ref: str):
    try:
        return build_diagram(builtin_spec(ref))
    except DiagramError:
        return build_diagram(_load_json(ref))


def cmd_lp(args, cfg: RunConfig) -> dict:
    if args.loop:
        diagrams, moves = loop_diagrams()
        d = diagrams[0]
        steps = list(zip(diagrams[:-1], moves))
    else:
        d = _diagram_from(args.diagram)
        steps = []
        if args.moves:
            base = Path(args.moves).parent
            for item in _load_json(args.moves):
                dd = d
                if "diagram" in item:
                    ref = item["diagram"]
                    if isinstance(ref, dict):
                        dd = build_diagram(ref)
                    else:
                        try:
                            dd = build_diagram(builtin_spec(ref))
                        except DiagramError:
                            dd = build_diagram(_load_json(str(base / ref)))
                steps.append((dd, MoveSpec.from_json(item.get("move", item))))
    sys_ = cone_system(d)
    h = sys_.solve()
    out = {"crossings": list(d.order), "feasible": h is not None, "witness": witness_json(h)}
    if h is not None and not sys_.satisfied_by(h):
        raise CheckFailed("the LP witness does not satisfy the strict system")
    ok = h is not None
    verdicts = []
    for dd, m in steps:
        feas, w = move_feasible(dd, m)
        verdicts.append({"move": m.to_json(), "feasible": feas, "witness": witness_json(w)})
        ok = ok and feas
    if steps:
        out["moves"] = verdicts
    out["ok"] = ok
    return out


def cmd_aug(args, cfg: RunConfig) -> dict:
    b = _read_braid(args, cfg)
    aug = construct_augmentation(b)
    sigma = b.permutation()
    g = augmented_graph(sigma)
    real = realized_graph(b, aug.X)
    out = {"braid": str(b), "sigma": list(sigma), "X": [list(l) for l in aug.labels],
           "valid": aug.is_valid(), "graph": g.to_json(),
           "realized_equals_graph": real == g.edge_set()}
    if b.torus_pq and all(x >= 2 for x in b.torus_pq):
        p, q = b.torus_pq
        if p % q and q % p:
            out["euclid"] = euclid_blocks(p, q)
    out["ok"] = out["valid"] and out["realized_equals_graph"] and out.get("euclid", {}).get("agree", True)
    return out


def _plot_sequence(path: str, p: int, q: int, seq: List[int]):
    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError as exc:
        raise ValueError("--plot needs matplotlib (pip install 'artifact[plot]')") from exc
    fig, ax = plt.subplots(figsize=(max(3, 0.35 * len(seq)), 1.6))
    ax.bar(range(len(seq)), seq, width=0.9, color="0.25")
    ax.set_yticks([0, 1])
    ax.set_xlabel("k")
    ax.set_title(f"epsilon(mu^k(g)), torus ({p},{q})")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def cmd_monodromy(args, cfg: RunConfig) -> dict:
    p, q = args.p, args.q
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        res = order_bounds(p, q, chain_checks_upto=args.chain_checks)
    seq = [int(c) for c in res["sequence"]]
    out = {"p": p, "q": q, "sequence": res["sequence"], "minimal_period": res["minimal_period"],
           "divides_pq": res["divides_pq"], "case": res["case"], "knot": res["knot"],
           "stated_pattern": "".join(map(str, predicted_pattern(p, q))),
           "refined_pattern": "".join(map(str, refined_pattern(p, q)))}
    if "orbit_steps_verified" in res:
        out["orbit_steps_verified"] = res["orbit_steps_verified"]
    bound = torus_monodromy_size(p, q)
    if bound <= cfg.guard:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            mu = torus_monodromy(p, q)
        out["mu"] = {g: str(x) for g, x in mu.assignment.items()}
    else:
        out["mu"] = None
        out["mu_omitted"] = f"about {bound} monomials, above --guard-monomials {cfg.guard}"
    warn = sorted(set(res["warnings"]) | {str(w.message) for w in caught})
    if warn:
        out["warnings"] = warn
    if args.plot:
        _plot_sequence(args.plot, p, q, seq)
        out["plot"] = args.plot
    out["ok"] = (res["minimal_period"] == p + q and seq == refined_pattern(p, q)
                 and out.get("orbit_steps_verified", True))
    return out


# --- reproduction ------------------------------------------------------------------

@dataclass
class Check:
    group: str
    name: str
    fn: Callable[[], Tuple[bool, object]]


CHECKS: List[Check] = []


def _check(group, name):
    def deco(fn):
        CHECKS.append(Check(group, name, fn))
        return fn
    return deco


TREFOIL_Z2 = {"a1": "1 + b1 + b3 + b1 b2 b3", "a2": "b2 + b2 b3 + b1 b2 + b2 b3 b1 b2"}
TREFOIL_ROWS = {"U1": [0, 1, 0, 0, 0], "U2": [-2, 1, 1, 0, 1], "U3": [1, 0, 0, 0, 0],
                "U4": [1, 0, -1, -1, -1], "U5": [0, 0, 1, 1, 0], "U6": [0, 0, 0, 1, 1]}


@_check("trefoil", "braid closure DGA of torus 3 2 is the reduced trefoil DGA")
def _c_dga():
    d = closure_dga(Braid.parse("torus 3 2"))
    want = {g: P(Z2, s) for g, s in TREFOIL_Z2.items()}
    ok = all(d.diff[g] == want[g] for g in want) and bool(check_d_squared(d))
    ok = ok and trefoil_dga(Z2).diff == d.diff
    return ok, {g: str(d.diff[g]) for g in want}


@_check("trefoil", "d(a2 b3 + (t^-1 + b2 b3) a1) = b3 + t^-1 - t^-1 b1 - b2 b3 b1")
def _c_trick():
    d = trefoil_dga(LAURENT)
    lhs = d.d(d.P("a2 b3 + (t^-1 + b2 b3) a1"))
    return lhs == d.P("b3 + t^-1 - t^-1 b1 - b2 b3 b1") and bool(check_d_squared(d)), str(lhs)


@_check("trefoil", "incidence rows, area vector at h=(4,7,1,1,1), winding relation")
def _c_incidence():
    d = build_diagram(builtin_spec("trefoil"))
    rows = {r.id: list(r.row) for r in d.regions}
    f = area_vector(d, [4, 7, 1, 1, 1])
    w = region_windings(d)
    E = incidence_matrix(d)
    wE = [sum(wi * row[j] for wi, row in zip(w, E)) for j in range(d.n)]
    ok = rows == TREFOIL_ROWS and f == [7, 1, 4, 1, 2, 2] and not any(wE)
    return ok, {"f": [str(x) for x in f], "wE": wE}


@_check("trefoil", "cone witness for the trefoil, the four loop moves, the bad kink")
def _c_lp():
    d = build_diagram(builtin_spec("trefoil"))
    s = cone_system(d)
    h = s.solve()
    diagrams, moves = loop_diagrams()
    verdicts = [move_feasible(dd, m)[0] for dd, m in zip(diagrams, moves)]
    bad = cone_system(build_diagram(builtin_spec("kink-infeasible"))).solve()
    good = cone_system(build_diagram(builtin_spec("kink"))).solve()
    ok = h is not None and s.satisfied_by(h) and all(verdicts) and bad is None and good is not None
    return ok, {"witness": witness_json(h), "moves": verdicts}


@_check("trefoil", "holonomies along the loop of trefoils and the resulting monodromy")
def _c_loop():
    hs = loop_holonomies(LAURENT)
    D1, D3, D4 = loop_dga("D1"), loop_dga("D3"), loop_dga("D4")
    ok = all(h.check() for h in hs)
    ok = ok and hs[0]["a2"] == D1.P("a2 + d + t b2 b3 d")
    ok = ok and hs[1].map.then(hs[2].map)["d"] == D3.P("d - b1 a2 + a1 c1")
    ok = ok and hs[3]["b1"] == D4.P("-t^-1 - b3 c1") and hs[3]["d"].is_zero()
    mu = loop_monodromy_trefoil(LAURENT)
    D0 = trefoil_dga()
    want = {"b1": "-t^-1 - b2 b3", "b2": "b1", "b3": "b2"}
    ok = ok and all(mu[g] == D0.P(s) for g, s in want.items())
    return ok, {g: str(mu[g]) for g in want}


@_check("trefoil", "tau phi = id and K d + d K = phi tau - id for the II move")
def _c_pair():
    ok = True
    for ring in (LAURENT, Z2):
        e = LOOP_EVENTS[0] if ring == LAURENT else LOOP_EVENTS[0].reduce_mod2()
        ok = ok and bool(verify_homotopy_pair(e, loop_dga("D0", ring), loop_dga("D1", ring)))
    return ok, None


@_check("trefoil", "mu_0 of the trefoil has order 5 (0-1 sequence 00111)")
def _c_order5():
    seq = orbit_sequence(3, 2)
    return minimal_period(seq) == 5 and seq == [0, 0, 1, 1, 1], "".join(map(str, seq))


@_check("braid", "D_3 and |D_n| = |D_(n-1)|^2 + |D_(n-1)| up to n = 5")
def _c_D():
    d3 = sorted(enumerate_D(3), key=lambda s: (len(s), s))
    want = [(), (1,), (2,), (1, 2), (2, 1), (1, 2, 1)]
    sizes = [sum(1 for _ in enumerate_D(n)) for n in range(1, 6)]
    ok = d3 == want and all(sizes[i] == sizes[i - 1] ** 2 + sizes[i - 1] for i in range(1, 5))
    ok = ok and sizes == [count_D(n) for n in range(1, 6)]
    return ok, sizes


@_check("aug", "canonical augmentations: torus 3 2, a pure braid, Euclid blocks of (11,26)")
def _c_aug():
    a = construct_augmentation(Braid.parse("torus 3 2"))
    pure = construct_augmentation(Braid(3, [1, 1, 2, 2]))
    eu = euclid_blocks(11, 26)
    ok = a.labels == [(1, 1, 1)] and not pure.X and eu["agree"]
    return ok, {"X": a.labels, "blocks": eu["blocks"]}


@_check("monodromy", "closed-form mu for (3,2) and the (2,5) orbit; (4,2) has no orbit")
def _c_mono():
    mu = torus_monodromy(3, 2)
    b1, b2, b3 = Braid.torus(3, 2).crossing_names
    ok = mu[b3] == P(Z2, b2) and mu[b2] == P(Z2, b1) and mu[b1] == P(Z2, f"1 + {b2} {b3}")
    s25 = orbit_sequence(2, 5)
    ok = ok and s25 == predicted_pattern(2, 5) and minimal_period(s25) == 7
    try:
        orbit_sequence(4, 2)
        ok = False
    except MonodromyError:
        pass
    return ok, {"mu": {k: str(v) for k, v in mu.assignment.items()}, "(2,5)": s25}


def run_checks(only: Optional[str] = None) -> List[dict]:
    results = []
    for c in CHECKS:
        if only and only not in (c.group, c.name):
            continue
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                ok, detail = c.fn()
        except Exception as exc:  # reported, not raised
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append({"group": c.group, "check": c.name, "ok": bool(ok), "detail": detail})
    return results


def cmd_reproduce(args, cfg: RunConfig) -> dict:
    groups = sorted({c.group for c in CHECKS})
    if args.only and args.only not in groups:
        raise ValueError(f"--only must be one of {groups}")
    res = run_checks(args.only)
    return {"results": res, "passed": sum(r["ok"] for r in res), "total": len(res),
            "ok": all(r["ok"] for r in res)}


def _print_reproduce(payload, out):
    for r in payload["results"]:
        out.write(f"{'PASS' if r['ok'] else 'FAIL'}  [{r['group']}] {r['check']}\n")
    out.write(f"{payload['passed']}/{payload['total']} passed\n")


# --- argument parsing ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--coeff", choices=["z2", "laurent"], default="z2")
    common.add_argument("--guard-monomials", type=int, default=DEFAULT_GUARD, metavar="N")
    common.add_argument("--max-strands", type=int, default=8)
    common.add_argument("--max-length", type=int, default=20)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--json", action="store_true", help="JSON output (the default)")
    common.add_argument("--format", choices=["json", "table"], default=None)

    ap = argparse.ArgumentParser(prog="contactdga",
                                 description="Legendrian contact homology computations")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dga", parents=[common], help="DGA of a braid closure or a DGA file")
    p.add_argument("braid", nargs="*", help="'torus P Q', 'q=N; w=...' or a file holding one")
    p.add_argument("--file", help="DGA JSON file")
    p.add_argument("--random", action="store_true", help="random positive braid (see --seed)")

    p = sub.add_parser("lp", parents=[common], help="cone feasibility and move verdicts")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("diagram", nargs="?", help="diagram JSON file or trefoil/kink/kink-infeasible")
    src.add_argument("--loop", action="store_true", help="the loop of trefoil moves")
    p.add_argument("--moves", help="JSON list of moves")

    p = sub.add_parser("aug", parents=[common], help="canonical augmentation of a braid closure")
    p.add_argument("braid", nargs="*")
    p.add_argument("--random", action="store_true")

    p = sub.add_parser("monodromy", parents=[common], help="monodromy of the torus loop (p, q)")
    p.add_argument("p", type=int)
    p.add_argument("q", type=int)
    p.add_argument("--chain-checks", type=int, default=0, metavar="N",
                   help="verify the orbit steps symbolically when p+q <= N")
    p.add_argument("--plot", metavar="FILE", help="save a bar plot of the 0-1 sequence")

    p = sub.add_parser("reproduce", parents=[common], help="run the worked-example checks")
    p.add_argument("--only", help="trefoil, braid, aug or monodromy")
    return ap


COMMANDS = {"dga": cmd_dga, "lp": cmd_lp, "aug": cmd_aug, "monodromy": cmd_monodromy,
            "reproduce": cmd_reproduce}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    fmt = args.format or ("json" if args.json or args.command != "reproduce" else "table")
    try:
        cfg = RunConfig(args.command, Z2 if args.coeff == "z2" else LAURENT,
                        args.guard_monomials, args.max_strands, args.max_length, fmt, args.seed)
        payload = COMMANDS[args.command](args, cfg)
    except CheckFailed as exc:
        _emit(RunConfig(args.command, fmt="json"), {"ok": False, "failures": [str(exc)]})
        return 1
    except INPUT_ERRORS as exc:
        json.dump({"ok": False, "error": type(exc).__name__, "message": str(exc)}, sys.stdout,
                  indent=2)
        sys.stdout.write("\n")
        return 2
    if args.command == "reproduce" and fmt == "table":
        _print_reproduce(payload, sys.stdout)
    else:
        _emit(cfg, payload)
    return 0 if payload.get("ok", True) else 1


if __name__ == "__main__":
    sys.exit(main())
