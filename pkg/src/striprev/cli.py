"""Command-line front end: ``striprev check|emit|crosscheck|gen|reachable``.

Reports are JSON on stdout (or ``--out``).  Exit codes: 0 success, 1 usage or
parse error, 2 enumeration cap exceeded, 3 solver failure, 4 cross-check
disagreement.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from .benchgen import RandomSpec, gen_random_domain, gen_rev_domain, write_domain
from .encodings import EncodingKind, emit, extract_plans, run_external_solver
from .errors import EnumerationCapExceeded, SolverError, StripRevError
from .formula import ByFormula, Explicit, ReachableOf, Universe, parse_formula
from .pddl import PddlSource, parse_domain, parse_problem, pretty_print
from .reversibility import SearchConfig, Status, decide_over_set, decide_universal, reachable_states

SCHEMA_VERSION = 1

EXIT_OK, EXIT_USAGE, EXIT_CAP, EXIT_SOLVER, EXIT_DISAGREE = 0, 1, 2, 3, 4

DEFAULTS = {
    "mode": "universal",
    "horizon": 1,
    "exact": False,
    "max_plans": 10,
    "cap": 20,
    "max_states": 1 << 20,
    "closure": False,
    "jobs": 1,
    "pretty": False,
    "timing": True,
    "kind": "simple-asp",
    "solver": None,
    "out": "-",
    "out_dir": ".",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class _Settings:
    """Flag values with config-file fallback; explicit flags win."""

    def __init__(self, args, config):
        self._args = args
        self._config = config

    def __getattr__(self, name):
        v = getattr(self._args, name, None)
        if v is not None:
            return v
        if name in self._config:
            return self._config[name]
        return DEFAULTS.get(name)


def _load_config(path):
    if not path:
        return {}
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise StripRevError(f"config file {path} must hold a JSON object")
    return {k.replace("-", "_"): v for k, v in data.items()}


def _emit_text(text, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _search_config(s) -> SearchConfig:
    return SearchConfig(horizon=int(s.horizon), exact=bool(s.exact), max_plans=int(s.max_plans),
                        enumeration_cap=int(s.cap), max_states=int(s.max_states),
                        closure=bool(s.closure))


def _phi_text(s):
    if s.phi_file:
        return Path(s.phi_file).read_text(encoding="utf-8").strip()
    return s.phi


def _state_spec(s, domain):
    mode = s.mode
    if mode == "universal":
        return None
    if mode == "universe":
        return Universe()
    if mode == "phi":
        text = _phi_text(s)
        if not text:
            raise StripRevError("--mode phi needs --phi or --phi-file")
        return ByFormula(parse_formula(text, domain))
    if mode == "task":
        if not s.task:
            raise StripRevError("--mode task needs --task")
        return ReachableOf(parse_problem(PddlSource.from_file(s.task), domain))
    if mode == "explicit":
        if not s.states:
            raise StripRevError("--mode explicit needs --states (JSON list of fact lists)")
        sets = json.loads(Path(s.states).read_text(encoding="utf-8"))
        return Explicit(tuple(domain.state(x) for x in sets))
    raise StripRevError(f"unknown mode {mode!r}")


def _check_one(domain, name, spec, cfg):
    t0 = time.perf_counter()
    if spec is None:
        v = decide_universal(name, domain, cfg)
    else:
        v = decide_over_set(name, domain, spec, cfg)
    return v, (time.perf_counter() - t0) * 1000.0


def _report(command, domain, config, results, timing, **extra):
    out = {
        "schema_version": SCHEMA_VERSION,
        "tool": "striprev",
        "version": __version__,
        "command": command,
        "domain": domain.name,
        "config": config,
    }
    rows = []
    for v, ms in results:
        row = v.to_dict()
        if timing:
            row["time_ms"] = round(ms, 3)
        rows.append(row)
    out["results"] = rows
    out.update(extra)
    return out


def _pretty(report) -> str:
    lines = [f"domain {report['domain']}  mode={report['config']['mode']}  "
             f"horizon={report['config']['horizon']}{' (exact)' if report['config']['exact'] else ''}"]
    width = max([len(r["action"]) for r in report["results"]] + [6])
    for r in report["results"]:
        plans = "; ".join("<" + ", ".join(w) + ">" for w in r["witnesses"]) or "-"
        lines.append(f"  {r['action']:<{width}}  {r['status']:<22}  {plans}")
        for n in r["notes"]:
            lines.append(f"  {'':<{width}}  note: {n['message']}")
    return "\n".join(lines) + "\n"


def cmd_check(s) -> int:
    domain = parse_domain(PddlSource.from_file(s.domain))
    spec = _state_spec(s, domain)
    cfg = _search_config(s)
    names = [a.name for a in domain.actions]
    if s.actions:
        wanted = [n.strip() for n in s.actions.split(",") if n.strip()]
        for n in wanted:
            domain.action(n)
        names = wanted
    if int(s.jobs) > 1 and len(names) > 1:
        with ProcessPoolExecutor(max_workers=int(s.jobs)) as pool:
            results = list(pool.map(_check_one, [domain] * len(names), names,
                                    [spec] * len(names), [cfg] * len(names)))
    else:
        results = [_check_one(domain, n, spec, cfg) for n in names]
    config = {"mode": s.mode, "horizon": cfg.horizon, "exact": cfg.exact, "max_plans": cfg.max_plans,
              "enumeration_cap": cfg.enumeration_cap, "closure": cfg.closure,
              "phi": _phi_text(s) if s.mode == "phi" else None}
    report = _report("check", domain, config, results, s.timing)
    _emit_text(_pretty(report) if s.pretty else _dump(report), s.out)
    return EXIT_OK


def cmd_emit(s) -> int:
    domain = parse_domain(PddlSource.from_file(s.domain))
    text = _phi_text(s)
    phi = parse_formula(text, domain) if text else None
    prog = emit(EncodingKind(s.kind), domain, int(s.horizon), phi)
    _emit_text(prog.text, s.out)
    return EXIT_OK


def cmd_crosscheck(s) -> int:
    domain = parse_domain(PddlSource.from_file(s.domain))
    cap = getattr(s._args, "max_plans", None) or s._config.get("max_plans") or 10**6
    cfg = SearchConfig(horizon=int(s.horizon), exact=True, max_plans=int(cap))
    native = set()
    for a in domain.actions:
        v = decide_universal(a, domain, cfg)
        native.update((a.name, w) for w in v.witness_names())
    result = run_external_solver(emit(EncodingKind(s.kind), domain, cfg.horizon), s.solver)
    pairs = extract_plans(result)
    solver = set(pairs)
    agree = native == solver and len(pairs) == len(solver)
    fmt = lambda xs: [[a, list(p)] for a, p in sorted(xs)]
    report = {
        "schema_version": SCHEMA_VERSION,
        "tool": "striprev",
        "version": __version__,
        "command": "crosscheck",
        "domain": domain.name,
        "config": {"horizon": cfg.horizon, "kind": s.kind, "solver": " ".join(result.command[:1])},
        "agreement": "AGREE" if agree else "DISAGREE",
        "pairs": len(native),
        "native": fmt(native),
        "solver": fmt(solver),
        "only_native": fmt(native - solver),
        "only_solver": fmt(solver - native),
        "duplicate_models": len(pairs) - len(solver),
    }
    _emit_text(_dump(report), s.out)
    return EXIT_OK if agree else EXIT_DISAGREE


def _rev_range(text):
    if ".." in text:
        lo, hi = text.split("..", 1)
        return range(int(lo), int(hi) + 1)
    return [int(x) for x in text.split(",")]


def cmd_gen(s) -> int:
    paths = []
    if s.family == "rev":
        for i in _rev_range(s.which):
            paths.append(write_domain(gen_rev_domain(i), s.out_dir))
    else:
        spec = RandomSpec(int(s.facts), int(s.actions), int(s.seed), float(s.p))
        d = gen_random_domain(spec)
        paths.append(write_domain(PddlSource(pretty_print(d), f"{d.name}.pddl"), s.out_dir))
    for p in paths:
        print(p)
    return EXIT_OK


def cmd_reachable(s) -> int:
    domain = parse_domain(PddlSource.from_file(s.domain))
    task = parse_problem(PddlSource.from_file(s.task), domain)
    cap = int(s.cap_states) if s.cap_states is not None else DEFAULTS["max_states"]
    states = sorted(reachable_states(task, cap), key=lambda st: st.mask)
    report = {
        "schema_version": SCHEMA_VERSION,
        "tool": "striprev",
        "version": __version__,
        "command": "reachable",
        "domain": domain.name,
        "count": len(states),
        "states": [list(st.facts) for st in states],
    }
    _emit_text(_dump(report), s.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="striprev", description=__doc__.split("\n")[0])
    p.add_argument("--version", action="version", version=f"striprev {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, horizon=True):
        sp.add_argument("--config", help="JSON file with default option values")
        sp.add_argument("--out", help="output path (default: stdout)")
        if horizon:
            sp.add_argument("--horizon", type=int)

    c = sub.add_parser("check", help="decide reversibility of every action")
    c.add_argument("domain")
    common(c)
    c.add_argument("--mode", choices=["universal", "universe", "phi", "task", "explicit"])
    c.add_argument("--exact", action="store_const", const=True, default=None,
                   help="only plans of length exactly --horizon")
    c.add_argument("--phi", help="state-set formula, e.g. '(and (not f0) f1)'")
    c.add_argument("--phi-file")
    c.add_argument("--task", help="PDDL problem file (for --mode task)")
    c.add_argument("--states", help="JSON file: list of states, each a list of facts")
    c.add_argument("--actions", help="comma-separated subset of actions")
    c.add_argument("--max-plans", type=int)
    c.add_argument("--cap", type=int, help="max facts for 2^F enumeration")
    c.add_argument("--max-states", type=int)
    c.add_argument("--closure", action="store_const", const=True, default=None,
                   help="exhaust the belief space to prove irreversibility in set modes")
    c.add_argument("--jobs", type=int)
    c.add_argument("--pretty", action="store_const", const=True, default=None)
    c.add_argument("--no-timing", dest="timing", action="store_const", const=False, default=None)
    c.set_defaults(func=cmd_check)

    e = sub.add_parser("emit", help="write an ASP/ELP encoding")
    e.add_argument("domain")
    common(e)
    e.add_argument("--kind", choices=[k.value for k in EncodingKind])
    e.add_argument("--phi")
    e.add_argument("--phi-file")
    e.set_defaults(func=cmd_emit)

    x = sub.add_parser("crosscheck", help="compare native witnesses with solver answer sets")
    x.add_argument("domain")
    common(x)
    x.add_argument("--kind", choices=["simple-asp", "general-asp"])
    x.add_argument("--solver", help="command template with {program} and {all_models}")
    x.add_argument("--max-plans", type=int)
    x.set_defaults(func=cmd_crosscheck)

    g = sub.add_parser("gen", help="generate benchmark domains")
    gsub = g.add_subparsers(dest="family", required=True, parser_class=_Parser)
    gr = gsub.add_parser("rev", help="rev-i domains")
    gr.add_argument("which", help="i, 'lo..hi' or a comma list")
    gr.add_argument("--out-dir")
    gr.add_argument("--config")
    gx = gsub.add_parser("random", help="seeded random domain")
    gx.add_argument("--facts", type=int, required=True)
    gx.add_argument("--actions", type=int, required=True)
    gx.add_argument("--seed", type=int, default=0)
    gx.add_argument("--p", type=float, default=0.5)
    gx.add_argument("--out-dir")
    gx.add_argument("--config")
    g.set_defaults(func=cmd_gen)

    r = sub.add_parser("reachable", help="list the reachable states of a task")
    r.add_argument("domain")
    r.add_argument("task")
    common(r, horizon=False)
    r.add_argument("--cap", dest="cap_states", type=int, help="max number of states")
    r.set_defaults(func=cmd_reachable)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        s = _Settings(args, _load_config(getattr(args, "config", None)))
        return args.func(s)
    except EnumerationCapExceeded as exc:
        print(f"striprev: {exc}", file=sys.stderr)
        return EXIT_CAP
    except SolverError as exc:
        print(f"striprev: solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (StripRevError, OSError, KeyError, ValueError) as exc:
        print(f"striprev: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
