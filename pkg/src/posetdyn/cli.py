"""Command line interface: ``posetdyn VERB INPUT [options]``.

Exit codes: 0 success, 1 a check failed (or compared orbit structures
differ), 2 inconsistent or degenerate input for the requested mode, 3 the
input or the command line could not be parsed, 4 an enumeration budget was
exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .catalog import FIXTURE_NAMES, resolve_input
from .errors import (
    BudgetExceeded,
    CycleError,
    DuplicateElement,
    InputFormatError,
    InvalidLabeling,
    NotAnIdeal,
    PosetError,
    RelationViolation,
    UnknownElement,
)
from .gamma import build_gamma, build_gamma_q, build_gamma_weak, lambda_chain_product_iso, rank_shift
from .io import (
    element_key,
    gamma_to_dot,
    gamma_to_json,
    labeling_to_json,
    load_restriction,
    poset_to_json,
    read_json,
    to_dot,
)
from .labelings import induced_restriction, labeling_array
from .poset import is_isomorphism, rank_function
from .promotion import (
    BenderKnuth,
    inc_promotion_trace,
    jdt_promotion,
    jdt_promotion_array,
    labeling_permutation,
    sliding_subposet,
    verify_bk_jdt,
    verify_equivariance,
    verify_resonance,
    verify_row_resonance,
)
from .settings import default_budget
from .toggles import (
    IdealSpace,
    ideal_to_json,
    orbit_report,
    orbit_structure,
    row_to_togpro_conjugator,
    rowmotion,
    validate_toggle_order,
)

EXIT_OK, EXIT_CHECK_FAILED, EXIT_INCONSISTENT, EXIT_PARSE, EXIT_BUDGET = 0, 1, 2, 3, 4

IDEAL_ACTIONS = ("row", "togpro", "gyr")
LABELING_ACTIONS = ("incpro", "jdtpro")
CHECKS = ("bijection", "equivariance", "resonance", "bkjdt", "conjugacy", "rowresonance", "rankshift", "lambda")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    verb: str
    inputs: list
    q: int | None = None
    restriction: str | None = None
    weak: bool = False
    action: str = "row"
    compare: list | None = None
    budget: int | None = None
    fmt: str = "json"
    seed: int = 0
    check: bool = False
    labeling: str | None = None
    ideal: str | None = None
    method: str = "bk"
    trace: bool = False
    gamma: bool = False
    checks: list = field(default_factory=list)

    @classmethod
    def from_args(cls, ns) -> "RunConfig":
        inputs = list(getattr(ns, "inputs", None) or [])
        if getattr(ns, "input", None) is not None:
            inputs = [ns.input]
        checks = []
        if ns.verb == "verify":
            words = inputs
            checks = [w for w in words if w in CHECKS]
            inputs = [w for w in words if w not in CHECKS]
            if ns.all or not checks:
                checks = list(CHECKS)
            if not inputs:
                inputs = list(FIXTURE_NAMES)
        return cls(
            verb=ns.verb,
            inputs=inputs,
            q=getattr(ns, "q", None),
            restriction=getattr(ns, "restriction", None),
            weak=getattr(ns, "weak", False),
            action=getattr(ns, "action", "row") or "row",
            compare=getattr(ns, "compare", None),
            budget=ns.budget if ns.budget is not None else default_budget(),
            fmt=ns.format or ("text" if ns.verb == "verify" else "json"),
            seed=ns.seed,
            check=getattr(ns, "check", False),
            labeling=getattr(ns, "labeling", None),
            ideal=getattr(ns, "ideal", None),
            method=getattr(ns, "method", "bk"),
            trace=getattr(ns, "trace", False),
            gamma=getattr(ns, "gamma", False),
            checks=checks,
        )


# ---------------------------------------------------------------------------
# context


@dataclass
class Context:
    name: str
    doc: object
    R: object = None
    q: int | None = None

    @property
    def P(self):
        return self.doc.poset


def _context(cfg: RunConfig, spec: str) -> Context:
    doc = resolve_input(spec, cfg.seed)
    if cfg.q is not None and cfg.restriction is not None:
        raise UsageError("give either --q or --restriction, not both")
    ctx = Context(spec, doc)
    if cfg.q is not None:
        ctx.q = cfg.q
    elif cfg.restriction is not None:
        ctx.R = load_restriction(cfg.restriction, doc.poset)
    elif doc.restriction is not None:
        ctx.R = doc.restriction
    elif doc.q is not None:
        ctx.q = doc.q
    if ctx.q is not None and ctx.R is None:
        ctx.R = induced_restriction(doc.poset, ctx.q)
    return ctx


def _require_R(ctx: Context, verb: str):
    if ctx.R is None:
        raise UsageError(f"{verb} needs --q or --restriction (or an input carrying one)")
    return ctx.R


def _gamma(ctx: Context, weak: bool):
    R = _require_R(ctx, "this command")
    if weak:
        return build_gamma_weak(ctx.P, R)
    if ctx.q is not None:
        return build_gamma_q(ctx.P, ctx.q)
    return build_gamma(ctx.P, R)


def _parse_json_arg(text: str):
    text = text.strip()
    if text.startswith(("{", "[")):
        try:
            return json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputFormatError(f"invalid JSON argument: {exc.msg}") from exc
    return read_json(text)


def _labeling_values(ctx: Context, cfg: RunConfig) -> tuple:
    P = ctx.P
    if cfg.labeling is not None:
        raw = _parse_json_arg(cfg.labeling)
        if not isinstance(raw, dict):
            raise InputFormatError("a labeling must be a JSON object element -> label")
        by_key = {element_key(p): p for p in P.elements}
        try:
            mapping = {by_key[k]: v for k, v in raw.items()}
            return tuple(int(mapping[p]) for p in P.elements)
        except KeyError as exc:
            raise InputFormatError(f"labeling does not match the poset at {exc.args[0]!r}") from None
    if ctx.doc.labeling is None:
        raise UsageError("no labeling given (use --labeling)")
    return tuple(ctx.doc.labeling[p] for p in P.elements)


def _emit(cfg: RunConfig, payload, text: str, out):
    if cfg.fmt == "json":
        out.write(json.dumps(payload, indent=2) + "\n")
    else:
        out.write(text if text.endswith("\n") else text + "\n")


# ---------------------------------------------------------------------------
# verbs


def cmd_gamma(cfg: RunConfig, out) -> int:
    ctx = _context(cfg, cfg.inputs[0])
    G = _gamma(ctx, cfg.weak)
    status = EXIT_OK
    check = None
    if cfg.check:
        n_ideals = len(IdealSpace(G.poset, cfg.budget))
        n_labelings = labeling_array(ctx.P, G.restriction, G.strict, cfg.budget).shape[0]
        check = {"ideals": n_ideals, "labelings": n_labelings, "ok": n_ideals == n_labelings}
        if not check["ok"]:
            status = EXIT_CHECK_FAILED
    if cfg.fmt == "dot":
        out.write(gamma_to_dot(G))
        if check is not None:
            print(f"check: |J(Gamma)| = {check['ideals']}, |Inc| = {check['labelings']}", file=sys.stderr)
        return status
    payload = gamma_to_json(G)
    if check is not None:
        payload["check"] = check
    lines = [f"{len(G)} elements, {len(G.poset.covers)} covers ({payload['mode']})"]
    lines += [f"  {a} < {b}" for a, b in payload["covers"]]
    lines.append("ghosts: " + ", ".join(f"{p},{k}" for p, k in payload["ghosts"].items()))
    if check is not None:
        lines.append(f"check: |J(Gamma)| = {check['ideals']}, |Inc| = {check['labelings']}"
                     f" -> {'ok' if check['ok'] else 'MISMATCH'}")
    _emit(cfg, payload, "\n".join(lines), out)
    return status


def cmd_labelings(cfg: RunConfig, out) -> int:
    ctx = _context(cfg, cfg.inputs[0])
    R = _require_R(ctx, "labelings")
    rows = labeling_array(ctx.P, R, not cfg.weak, cfg.budget)
    items = [labeling_to_json(ctx.P, r) for r in rows]
    text = f"{len(items)} labelings\n" + "".join(
        " ".join(f"{k}:{v}" for k, v in it.items()) + "\n" for it in items)
    _emit(cfg, {"count": len(items), "labelings": items}, text, out)
    return EXIT_OK


def cmd_promote(cfg: RunConfig, out) -> int:
    ctx = _context(cfg, cfg.inputs[0])
    P, R = ctx.P, _require_R(ctx, "promote")
    values = _labeling_values(ctx, cfg)
    payload = {"input": labeling_to_json(P, values)}
    lines = []
    if cfg.method in ("bk", "both"):
        steps = inc_promotion_trace(P, R, values)
        payload["result"] = labeling_to_json(P, steps[-1][1].values)
        if cfg.trace:
            payload["trace"] = [{"op": op, "labeling": labeling_to_json(P, f.values)} for op, f in steps]
            lines += [f"{op:>8}: " + " ".join(f"{k}:{v}" for k, v in labeling_to_json(P, f.values).items())
                      for op, f in steps]
    if cfg.method in ("jdt", "both"):
        if ctx.q is None:
            raise UsageError("jeu de taquin promotion needs a global bound q")
        g = jdt_promotion(P, ctx.q, values)
        payload["jdt_result"] = labeling_to_json(P, g.values)
        payload["sliding_subposet"] = [element_key(p) for p in sorted(sliding_subposet(P, ctx.q, values), key=P.index)]
        if "result" not in payload:
            payload["result"] = payload["jdt_result"]
        elif payload["result"] != payload["jdt_result"]:
            payload["agree"] = False
        else:
            payload["agree"] = True
        lines.append("sliding subposet: " + " ".join(payload["sliding_subposet"]))
    lines.append("result: " + " ".join(f"{k}:{v}" for k, v in payload["result"].items()))
    _emit(cfg, payload, "\n".join(lines), out)
    return EXIT_CHECK_FAILED if payload.get("agree") is False else EXIT_OK


def _ideal_carrier(ctx: Context, cfg: RunConfig):
    """The poset whose ideals are acted on and its toggle order."""
    if ctx.R is not None:
        G = _gamma(ctx, cfg.weak)
        return G.poset, G.levels, "Gamma"
    P = ctx.P
    if ctx.doc.toggle_order is not None:
        return P, ctx.doc.toggle_order, "P"
    return P, rank_function(P), "P"


def cmd_rowmotion(cfg: RunConfig, out) -> int:
    ctx = _context(cfg, cfg.inputs[0])
    Q, _, which = _ideal_carrier(ctx, cfg)
    start = frozenset()
    if cfg.ideal is not None:
        raw = _parse_json_arg(cfg.ideal)
        if not isinstance(raw, list):
            raise InputFormatError("an ideal must be a JSON array of elements")
        by_key = {element_key(p): p for p in Q.elements}
        try:
            start = frozenset(by_key[x if isinstance(x, str) else json.dumps(x, separators=(",", ":"))] for x in raw)
        except KeyError as exc:
            raise InputFormatError(f"unknown element {exc.args[0]!r} in ideal") from None
        if not Q.is_ideal_mask(Q.mask_of(start)):
            raise NotAnIdeal("the given set is not an order ideal")
    orbit = [start]
    while True:
        nxt = rowmotion(Q, orbit[-1])
        if nxt == start:
            break
        orbit.append(nxt)
        if len(orbit) > cfg.budget:
            raise BudgetExceeded("orbit longer than the budget")
    as_json = [ideal_to_json(I, Q) for I in orbit]
    text = f"Row orbit of length {len(orbit)} on J({which})\n" + "".join(json.dumps(I) + "\n" for I in as_json)
    _emit(cfg, {"carrier": which, "length": len(orbit), "orbit": as_json}, text, out)
    return EXIT_OK


def _report(ctx: Context, cfg: RunConfig, action: str):
    if action in IDEAL_ACTIONS:
        Q, H, _ = _ideal_carrier(ctx, cfg)
        if action != "row" and H is None:
            raise UsageError(f"action {action!r} needs a toggle order; the poset is not ranked")
        return orbit_structure(Q, action, H, cfg.budget)
    if action not in LABELING_ACTIONS:
        raise UsageError(f"unknown action {action!r}")
    P, R = ctx.P, _require_R(ctx, action)
    rows = labeling_array(P, R, True, cfg.budget)
    if action == "incpro":
        img = BenderKnuth(P, R).promote(rows)
    else:
        if ctx.q is None:
            raise UsageError("jdtpro needs a global bound q")
        img = jdt_promotion_array(P, ctx.q, rows)
    perm = labeling_permutation(rows, img)
    return orbit_report(action, perm, lambda r: labeling_to_json(P, rows[r]))


def cmd_orbits(cfg: RunConfig, out) -> int:
    ctx = _context(cfg, cfg.inputs[0])
    if cfg.compare:
        a, b = cfg.compare
        ra, rb = _report(ctx, cfg, a), _report(ctx, cfg, b)
        equal = ra.multiset == rb.multiset
        payload = {"compare": [a, b], "equal": equal, "reports": [ra.to_json(), rb.to_json()]}
        text = (f"{'EQUAL' if equal else 'DIFFERENT'}\n"
                f"{a}: {ra.histogram()}\n{b}: {rb.histogram()}")
        _emit(cfg, payload, text, out)
        return EXIT_OK if equal else EXIT_CHECK_FAILED
    rep = _report(ctx, cfg, cfg.action)
    text = (f"{rep.action}: {rep.count} orbits on {rep.total} states, order {rep.order}\n"
            f"lengths: {rep.histogram()}")
    _emit(cfg, rep.to_json(), text, out)
    return EXIT_OK


def cmd_export(cfg: RunConfig, out) -> int:
    ctx = _context(cfg, cfg.inputs[0])
    if cfg.gamma:
        G = _gamma(ctx, cfg.weak)
        if cfg.fmt == "dot":
            out.write(gamma_to_dot(G))
        else:
            out.write(json.dumps(gamma_to_json(G), indent=2) + "\n")
        return EXIT_OK
    if cfg.fmt == "dot":
        out.write(to_dot(ctx.P))
        return EXIT_OK
    extra = {}
    if ctx.q is not None:
        extra["q"] = ctx.q
    R = ctx.doc.restriction if ctx.q is None else None
    if cfg.restriction is not None:
        R = ctx.R
    out.write(json.dumps(poset_to_json(ctx.P, R, **extra), indent=2) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify


def _run_check(name: str, ctx: Context, cfg: RunConfig) -> tuple:
    """``(status, detail)`` with status PASS, FAIL or SKIP."""
    P, R, q = ctx.P, ctx.R, ctx.q
    if name in ("resonance", "bkjdt", "rowresonance", "lambda") and q is None:
        return "SKIP", "needs a global bound q"
    if name in ("bijection", "equivariance", "conjugacy", "rankshift") and R is None:
        return "SKIP", "needs a restriction"
    if name == "bijection":
        G = build_gamma(P, R)
        space = IdealSpace(G.poset, cfg.budget)
        rows = labeling_array(P, R, True, cfg.budget)
        masks = G.labelings_to_masks(rows)
        ok = len(space) == rows.shape[0] and np.array_equal(np.sort(masks), np.sort(space.masks)) \
            and np.array_equal(G.masks_to_labelings(masks), rows)
        return ("PASS" if ok else "FAIL"), f"|J(Gamma)| = {len(space)}, |Inc| = {rows.shape[0]}"
    if name == "equivariance":
        res = verify_equivariance(P, R, budget=cfg.budget)
        levels = len(BenderKnuth(P, R).levels)
        detail = f"{levels} levels: rho_k vs T^k and IncPro vs TogPro over {res.checked // (levels + 1) if levels else 0} labelings"
        if not res:
            detail = f"{res.detail}; labeling {res.counterexample}"
        return ("PASS" if res else "FAIL"), detail
    if name == "resonance":
        res = verify_resonance(P, q, budget=cfg.budget)
        return ("PASS" if res else "FAIL"), (f"{res.checked} labelings, q = {q}" if res else
                                              f"{res.detail}; labeling {res.counterexample}")
    if name == "bkjdt":
        res = verify_bk_jdt(P, q, budget=cfg.budget)
        detail = f"{res.checked} labelings"
        if ctx.doc.labeling is not None:
            values = tuple(ctx.doc.labeling[p] for p in P.elements)
            g = jdt_promotion(P, q, values)
            detail += "; promotion of the stored labeling: " + " ".join(
                f"{k}:{v}" for k, v in labeling_to_json(P, g.values).items())
        if not res:
            detail = f"labeling {res.counterexample}"
        return ("PASS" if res else "FAIL"), detail
    if name == "conjugacy":
        G = build_gamma(P, R)
        if validate_toggle_order(G.poset, G.levels) != "column":
            return "SKIP", "H_Gamma is not a column toggle order"
        space = IdealSpace(G.poset, cfg.budget)
        reps = {a: orbit_structure(G.poset, a, G.levels, space=space) for a in IDEAL_ACTIONS}
        same = len({r.multiset for r in reps.values()}) == 1
        hist = "; ".join(f"{a} {r.histogram()}" for a, r in reps.items())
        if not same:
            return "FAIL", f"orbit structures differ: {hist}"
        try:
            d = row_to_togpro_conjugator(G.poset, G.levels, space)
        except RelationViolation as exc:
            return "FAIL", f"orbit structures agree but no conjugator was built: {exc}"
        return "PASS", f"{hist}; conjugator of length {len(d)}"
    if name == "rowresonance":
        try:
            res = verify_row_resonance(P, q, budget=cfg.budget)
        except RelationViolation as exc:
            return "FAIL", f"no Row -> TogPro conjugator: {exc}"
        return ("PASS" if res else "FAIL"), f"{res.checked} ideals"
    if name == "rankshift":
        if rank_function(P) is None:
            return "SKIP", "poset is not ranked"
        R2, mapping = rank_shift(P, R)
        G1, G2 = build_gamma(P, R), build_gamma_weak(P, R2)
        ok = is_isomorphism(G1.poset, G2.poset, mapping)
        return ("PASS" if ok else "FAIL"), f"{len(G1)} pairs"
    if name == "lambda":
        lengths = {d + h + 1 for d, h in zip(P.depths, P.heights)}
        if len(lengths) > 1:
            return "SKIP", "lambda chain condition fails"
        G, Q, _ = lambda_chain_product_iso(P, q)
        return "PASS", f"Gamma(P,{q}) ~ P x [{q - lengths.pop()}], {len(G)} elements"
    raise UsageError(f"unknown check {name!r}")


def cmd_verify(cfg: RunConfig, out) -> int:
    results = []
    for spec in cfg.inputs:
        ctx = _context(cfg, spec)
        for name in cfg.checks:
            status, detail = _run_check(name, ctx, cfg)
            results.append({"input": spec, "check": name, "status": status, "detail": detail})
    failed = any(r["status"] == "FAIL" for r in results)
    text = "".join(f"{r['status']:<4} {r['check']:<13} {r['input']:<11} {r['detail']}\n" for r in results)
    _emit(cfg, {"ok": not failed, "results": results}, text, out)
    return EXIT_CHECK_FAILED if failed else EXIT_OK


VERBS = {
    "gamma": cmd_gamma,
    "labelings": cmd_labelings,
    "promote": cmd_promote,
    "rowmotion": cmd_rowmotion,
    "orbits": cmd_orbits,
    "verify": cmd_verify,
    "export": cmd_export,
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="posetdyn", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"posetdyn {__version__}")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def common(p, labels=True, fmts=("json", "text")):
        if labels:
            g = p.add_mutually_exclusive_group()
            g.add_argument("--q", type=int, help="global label bound; R(p) = [1+delta(p), q-nu(p)]")
            g.add_argument("--restriction", metavar="FILE", help="JSON restriction file")
            p.add_argument("--weak", action="store_true", help="weakly increasing labelings / Gamma'")
        p.add_argument("--budget", type=int, default=None, help="state cap for enumerations")
        p.add_argument("--format", choices=fmts, default=None)
        p.add_argument("--seed", type=int, default=0, help="seed for random:N / ranked:N inputs")

    input_help = f"fixture ({', '.join(FIXTURE_NAMES)}), JSON path, or chain:N / antichain:N / grid:AxB / random:N / ranked:N"

    p = sub.add_parser("gamma", help="build Gamma(P,R), Gamma(P,q) or Gamma'(P,R)")
    p.add_argument("input", help=input_help)
    p.add_argument("--check", action="store_true", help="also check |J(Gamma)| = |Inc|")
    common(p, fmts=("json", "dot", "text"))

    p = sub.add_parser("labelings", help="enumerate increasing labelings")
    p.add_argument("input", help=input_help)
    common(p)

    p = sub.add_parser("promote", help="promote one labeling")
    p.add_argument("input", help=input_help)
    p.add_argument("--labeling", help="JSON object or file; defaults to the input's labeling")
    p.add_argument("--method", choices=("bk", "jdt", "both"), default="bk")
    p.add_argument("--trace", action="store_true", help="list every rho_i step")
    common(p)

    p = sub.add_parser("rowmotion", help="rowmotion orbit of an ideal of P (or of Gamma with --q/--restriction)")
    p.add_argument("input", help=input_help)
    p.add_argument("--ideal", help="JSON array of elements; defaults to the empty ideal")
    common(p)

    p = sub.add_parser("orbits", help="orbit structure of an action")
    p.add_argument("input", help=input_help)
    p.add_argument("--action", choices=IDEAL_ACTIONS + LABELING_ACTIONS, default="row")
    p.add_argument("--compare", nargs=2, metavar=("A", "B"), choices=IDEAL_ACTIONS + LABELING_ACTIONS)
    common(p)

    p = sub.add_parser("verify", help=f"run structural checks ({', '.join(CHECKS)})")
    p.add_argument("inputs", nargs="*", help="check names and inputs, in any order; defaults to all")
    p.add_argument("--all", action="store_true", help="run every check")
    common(p)

    p = sub.add_parser("export", help="export P (or Gamma with --gamma) as JSON or DOT")
    p.add_argument("input", help=input_help)
    p.add_argument("--gamma", action="store_true")
    common(p, fmts=("json", "dot"))
    return parser


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    try:
        ns = build_parser().parse_args(argv)
    except SystemExit as exc:
        # --help, --version and usage errors; keep main() returning a code
        return exc.code if isinstance(exc.code, int) else EXIT_PARSE
    try:
        cfg = RunConfig.from_args(ns)
        return VERBS[cfg.verb](cfg, out)
    except BudgetExceeded as exc:
        print(f"posetdyn: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (UsageError, InputFormatError, InvalidLabeling, NotAnIdeal, UnknownElement,
            CycleError, DuplicateElement) as exc:
        print(f"posetdyn: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except PosetError as exc:
        print(f"posetdyn: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT


def run():
    """Console-script entry point."""
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    run()
