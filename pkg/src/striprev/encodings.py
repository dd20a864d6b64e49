"""ASP / ELP reversibility encodings and external-solver round trips.

The four rule blocks live in ``templates/*.lp`` and are emitted verbatim after
the plasp facts of the domain; the only injected parts are the ``horizon``
constant and, for the general encodings, the compiled state-set hook.
"""

from __future__ import annotations

import enum
import importlib.util
import json
import os
import re
import shlex
import shutil
import subprocess
import sys
import tempfile
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable

from .errors import (
    InconsistentModel,
    MalformedDomain,
    PhiNotSupported,
    SolverCrashed,
    SolverNotFound,
    SolverOutputError,
)
from .formula import And, Atom, Const, Formula, Not, Or, check_atoms, nnf
from .pddl import emit_plasp_facts
from .strips import Domain, State, validate_domain

SOLVER_ENV = "STRIPREV_SOLVER"


class EncodingKind(str, enum.Enum):
    SIMPLE_ASP = "simple-asp"
    SIMPLE_ELP = "simple-elp"
    GENERAL_ASP = "general-asp"
    GENERAL_ELP = "general-elp"

    @property
    def general(self) -> bool:
        return self in (EncodingKind.GENERAL_ASP, EncodingKind.GENERAL_ELP)

    @property
    def epistemic(self) -> bool:
        return self in (EncodingKind.SIMPLE_ELP, EncodingKind.GENERAL_ELP)

    @property
    def template(self) -> str:
        return self.value.replace("-", "_") + ".lp"


def rule_block(kind: EncodingKind | str) -> str:
    kind = EncodingKind(kind)
    return resources.files("striprev").joinpath("templates", kind.template).read_text("utf-8")


@dataclass(frozen=True)
class EncodedProgram:
    kind: EncodingKind
    horizon: int
    text: str
    phi: Formula | None = None

    def write(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.text)


def horizon_block(horizon: int) -> str:
    return f"#const horizon={horizon}.\nhorizon(horizon).\n"


def emit(kind: EncodingKind | str, d: Domain, horizon: int, phi: Formula | None = None) -> EncodedProgram:
    """Assemble a solver-ready program: plasp facts, horizon, rule block, hook."""
    kind = EncodingKind(kind)
    if horizon < 0:
        raise ValueError("horizon must be >= 0")
    if phi is not None and not kind.general:
        raise PhiNotSupported(f"{kind.value} checks universal reversibility only; "
                              "use general-asp or general-elp with a formula")
    problems = validate_domain(d)
    if problems:
        raise MalformedDomain(problems)
    parts = [
        f"% domain: {d.name}\n",
        emit_plasp_facts(d).text(),
        "\n",
        horizon_block(horizon),
        f"\n% encoding: {kind.value}\n",
        rule_block(kind),
    ]
    if phi is not None:
        check_atoms(phi, d.universe)
        parts.append(f"\n% state set: {phi}\n")
        parts.append(compile_phi_hook(kind, phi))
    return EncodedProgram(kind, horizon, "".join(parts), phi)


def _holds(fact: str, value: bool) -> str:
    return f'holds("{fact}",{"true" if value else "false"},0)'


def compile_phi_hook(kind: EncodingKind | str, phi: Formula) -> str:
    """Rules deriving ``phi_violated`` exactly when the time-0 guess falsifies ``phi``.

    ``not phi`` is put in negation normal form and every subformula gets an
    atom ``phi_sub(k)``: literals test ``holds/3`` at time 0, conjunctions
    become rule bodies, disjunctions one rule per operand.
    """
    kind = EncodingKind(kind)
    if not kind.general:
        raise PhiNotSupported(f"{kind.value} does not accept a state-set formula")
    rules: list[str] = []
    counter = [0]

    def node(f) -> int:
        k = counter[0]
        counter[0] += 1
        if isinstance(f, Atom):
            rules.append(f"phi_sub({k}) :- {_holds(f.fact, True)}.")
        elif isinstance(f, Not):
            rules.append(f"phi_sub({k}) :- {_holds(f.arg.fact, False)}.")
        elif isinstance(f, Const):
            if f.value:
                rules.append(f"phi_sub({k}).")
        elif isinstance(f, And):
            kids = [node(a) for a in f.args]
            rules.append(f"phi_sub({k}) :- " + ", ".join(f"phi_sub({c})" for c in kids) + ".")
        elif isinstance(f, Or):
            kids = [node(a) for a in f.args]
            rules.extend(f"phi_sub({k}) :- phi_sub({c})." for c in kids)
        else:
            raise TypeError(f"not a formula: {f!r}")
        return k

    root = node(nnf(phi, negate=True))
    rules.append(f"phi_violated :- phi_sub({root}).")
    if kind is EncodingKind.GENERAL_ELP:
        rules.append(":- phi_violated.")
    else:
        rules.append("reversePlan :- phi_violated.")
    return "\n".join(rules) + "\n"


_HEAD_BODY = re.compile(r"^\s*([^:]*?)\s*(?::-\s*(.*?))?\s*\.\s*$")


def _split_body(body: str) -> list[str]:
    out, depth, cur = [], 0, ""
    for ch in body:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            out.append(cur.strip())
            cur = ""
        else:
            cur += ch
    if cur.strip():
        out.append(cur.strip())
    return out


def hook_derives_violation(hook: str, s: State) -> bool:
    """Forward-chain the definite rules of a compiled hook over ``s`` at time 0.

    Only used to check hooks; constraints and the ``reversePlan`` link are
    skipped.
    """
    facts = {_holds(f, bool(s.mask >> i & 1)) for i, f in enumerate(s.universe.names)}
    rules = []
    for line in hook.splitlines():
        m = _HEAD_BODY.match(line)
        if not m or not m.group(1) or m.group(1) == "reversePlan":
            continue
        body = _split_body(m.group(2)) if m.group(2) else []
        rules.append((m.group(1).replace(" ", ""), [b.replace(" ", "") for b in body]))
    changed = True
    while changed:
        changed = False
        for head, body in rules:
            if head not in facts and all(b in facts for b in body):
                facts.add(head)
                changed = True
    return "phi_violated" in facts


# -- solver interaction -------------------------------------------------------

@dataclass(frozen=True)
class SolverModel:
    chosen: str | None
    occurs: tuple  # ((step, action), ...) sorted by step

    @property
    def occurs_map(self) -> dict:
        return dict(self.occurs)


@dataclass(frozen=True)
class SolverResult:
    models: tuple
    raw: str
    exit_info: str
    horizon: int | None = None
    command: tuple = ()


def default_solver_command() -> str:
    env = os.environ.get(SOLVER_ENV)
    if env:
        return env
    if shutil.which("clingo"):
        return "clingo {program} {all_models} --outf=2"
    if importlib.util.find_spec("clingo") is not None:
        return shlex.quote(sys.executable) + " -m clingo {program} {all_models} --outf=2"
    return "clingo {program} {all_models} --outf=2"


# clingo exit codes: 10 satisfiable, 20 unsatisfiable, 30 satisfiable + exhausted
_OK_EXIT = {0, 10, 20, 30}

_CHOSEN_RE = re.compile(r'(?<![\w\-])chosen\("((?:[^"\\]|\\.)*)"\)')
_OCCURS_RE = re.compile(r'(?<![\w\-])occurs\("((?:[^"\\]|\\.)*)",\s*(\d+)\)')


def parse_model_atoms(atoms: str | Iterable[str]) -> SolverModel:
    text = atoms if isinstance(atoms, str) else " ".join(atoms)
    chosen = _CHOSEN_RE.findall(text)
    if len(set(chosen)) > 1:
        raise InconsistentModel(f"several chosen actions in one model: {sorted(set(chosen))}")
    occ = sorted({(int(t), a) for a, t in _OCCURS_RE.findall(text)})
    return SolverModel(chosen[0] if chosen else None, tuple(occ))


def parse_solver_output(raw: str) -> list[SolverModel]:
    """Models from clingo-style output (``--outf=2`` JSON or plain text)."""
    stripped = raw.lstrip()
    if stripped.startswith("{"):
        try:
            data = json.loads(stripped)
        except json.JSONDecodeError as e:
            raise SolverOutputError(f"bad JSON from solver: {e}", raw) from None
        models = []
        for call in data.get("Call", []):
            for w in call.get("Witnesses", []):
                models.append(parse_model_atoms(w.get("Value", [])))
        return models
    models = []
    lines = raw.splitlines()
    for i, line in enumerate(lines):
        if re.match(r"^\s*Answer:\s*\d+", line):
            body = lines[i + 1] if i + 1 < len(lines) else ""
            models.append(parse_model_atoms(body))
    if not models and not re.search(r"\b(UNSATISFIABLE|SATISFIABLE|UNKNOWN)\b", raw):
        raise SolverOutputError("could not find models or a result line in solver output", raw)
    return models


def run_external_solver(prog: EncodedProgram, solver_cmdline: str | None = None,
                        timeout: float | None = None) -> SolverResult:
    """Write ``prog`` to a temp file and run the solver on it.

    ``solver_cmdline`` is a template with ``{program}`` and ``{all_models}``
    placeholders (default from ``$STRIPREV_SOLVER`` or a local clingo).
    """
    template = solver_cmdline or default_solver_command()
    fd, path = tempfile.mkstemp(suffix=".lp", prefix=f"striprev-{prog.kind.value}-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(prog.text)
        argv = [tok.format(program=path, all_models="0") for tok in shlex.split(template)]
        if not argv or shutil.which(argv[0]) is None and not os.path.exists(argv[0]):
            raise SolverNotFound(f"solver executable not found: {argv[0] if argv else template!r}")
        try:
            proc = subprocess.run(argv, capture_output=True, text=True, timeout=timeout)
        except FileNotFoundError:
            raise SolverNotFound(f"solver executable not found: {argv[0]}") from None
        except subprocess.TimeoutExpired as e:
            raise SolverCrashed(f"solver timed out after {timeout}s", str(e.stdout or "")) from None
    finally:
        os.unlink(path)
    raw = proc.stdout
    if proc.returncode not in _OK_EXIT:
        raise SolverCrashed(f"solver exited with code {proc.returncode}: {proc.stderr.strip()[:500]}",
                            raw + proc.stderr)
    models = parse_solver_output(raw)
    return SolverResult(tuple(models), raw, f"exit {proc.returncode}", prog.horizon, tuple(argv))


def extract_plans(r: SolverResult) -> list[tuple[str, tuple[str, ...]]]:
    """``(chosen action, reverse plan)`` per model; step 1 must be the chosen action."""
    out = []
    for m in r.models:
        steps = [t for t, _ in m.occurs]
        if len(set(steps)) != len(steps):
            raise InconsistentModel(f"several actions at one step: {m.occurs}")
        expected = list(range(1, len(steps) + 1))
        if r.horizon is not None:
            expected = list(range(1, r.horizon + 2))
        if steps != expected:
            raise InconsistentModel(f"steps {steps} are not contiguous from 1")
        if m.chosen is None or not m.occurs or m.occurs[0][1] != m.chosen:
            raise InconsistentModel(f"step 1 is {m.occurs[0][1] if m.occurs else None!r}, "
                                    f"chosen is {m.chosen!r}")
        out.append((m.chosen, tuple(a for _, a in m.occurs[1:])))
    return out
