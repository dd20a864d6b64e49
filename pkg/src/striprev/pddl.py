"""Reader for the propositional STRIPS fragment of PDDL, and plasp fact output.

Only zero-arity predicates are accepted.  Keywords (``define``, ``:action``,
``and``, ...) match case-insensitively; fact and action names are
case-sensitive.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Union

from .errors import MalformedDomain, ParseError, UnknownFactError, UnsupportedFeature
from .strips import Domain, PlanningTask, valid_name, validate_domain


@dataclass(frozen=True)
class PddlSource:
    text: str
    origin: str = "<string>"

    @classmethod
    def from_file(cls, path) -> "PddlSource":
        if str(path) == "-":
            import sys

            return cls(sys.stdin.read(), "<stdin>")
        p = Path(path)
        return cls(p.read_text(encoding="utf-8"), str(p))


SourceLike = Union[PddlSource, str]


def _source(src: SourceLike) -> PddlSource:
    return src if isinstance(src, PddlSource) else PddlSource(src)


# -- s-expressions -----------------------------------------------------------

@dataclass(frozen=True)
class Sym:
    """An atom token with its position."""

    text: str
    line: int
    col: int

    @property
    def key(self) -> str:
        return self.text.lower()


class SList(list):
    """A parenthesized list remembering where it opened."""

    line = 0
    col = 0


_TOKEN_RE = re.compile(r"\s+|;[^\n]*|\(|\)|[^\s();]+")


def read_sexprs(src: SourceLike) -> list:
    """Parse text into a list of top-level s-expressions (SList / Sym)."""
    src = _source(src)
    text = src.text
    stack = [SList()]
    line, line_start = 1, 0
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:  # pragma: no cover - the pattern matches any character
            raise ParseError("unexpected character", line, pos - line_start + 1, src.origin)
        tok = m.group()
        col = pos - line_start + 1
        if tok == "(":
            lst = SList()
            lst.line, lst.col = line, col
            stack.append(lst)
        elif tok == ")":
            if len(stack) == 1:
                raise ParseError("unbalanced ')'", line, col, src.origin)
            done = stack.pop()
            stack[-1].append(done)
        elif not tok[0].isspace() and tok[0] != ";":
            stack[-1].append(Sym(tok, line, col))
        nl = tok.count("\n")
        if nl:
            line += nl
            line_start = pos + tok.rindex("\n") + 1
        pos = m.end()
    if len(stack) > 1:
        open_ = stack[-1]
        raise ParseError("unclosed '('", open_.line, open_.col, src.origin)
    return stack[0]


def _pos(x):
    if isinstance(x, Sym):
        return x.line, x.col
    return getattr(x, "line", None), getattr(x, "col", None)


def _err(msg, x, origin, cls=ParseError):
    line, col = _pos(x)
    return cls(msg, line, col, origin)


def _head(x) -> str | None:
    if isinstance(x, SList) and x and isinstance(x[0], Sym):
        return x[0].key
    return None


_UNSUPPORTED_HEADS = {
    "when": "conditional effect",
    "forall": "quantified formula",
    "exists": "quantified formula",
    "or": "disjunctive precondition",
    "imply": "implication",
    "increase": "numeric effect",
    "decrease": "numeric effect",
    "assign": "numeric effect",
    "=": "equality",
}


def _name(x, origin, what) -> str:
    if not isinstance(x, Sym):
        raise _err(f"expected {what} name", x, origin)
    if not valid_name(x.text):
        raise _err(f"invalid {what} name {x.text!r}", x, origin)
    return x.text


def _atom(x, origin, ctx) -> Sym:
    """A propositional atom written ``(p)``."""
    if isinstance(x, SList):
        if not x:
            raise _err(f"empty literal in {ctx}", x, origin)
        h = _head(x)
        if h in _UNSUPPORTED_HEADS:
            raise _err(f"{_UNSUPPORTED_HEADS[h]} in {ctx}", x, origin, UnsupportedFeature)
        if not isinstance(x[0], Sym):
            raise _err(f"malformed literal in {ctx}", x, origin)
        if len(x) > 1:
            raise _err(f"atom with arguments in {ctx}", x, origin, UnsupportedFeature)
        _name(x[0], origin, "fact")
        return x[0]
    raise _err(f"expected a parenthesized atom in {ctx}", x, origin)


def _conjuncts(x) -> list:
    if _head(x) == "and":
        return list(x[1:])
    if isinstance(x, SList) and not x:
        return []
    return [x]


def _precondition(x, origin, action) -> list[Sym]:
    out = []
    for lit in _conjuncts(x):
        if _head(lit) == "not":
            raise _err(f"negative precondition in action {action}", lit, origin, UnsupportedFeature)
        if _head(lit) == "and":
            out.extend(_precondition(lit, origin, action))
            continue
        out.append(_atom(lit, origin, f"precondition of {action}"))
    return out


def _effect(x, origin, action) -> tuple[list[Sym], list[Sym]]:
    adds, dels = [], []
    for lit in _conjuncts(x):
        h = _head(lit)
        if h == "not":
            if len(lit) != 2:
                raise _err("'not' takes one argument", lit, origin)
            dels.append(_atom(lit[1], origin, f"effect of {action}"))
        elif h == "and":
            a, d = _effect(lit, origin, action)
            adds += a
            dels += d
        else:
            adds.append(_atom(lit, origin, f"effect of {action}"))
    return adds, dels


def _resolve(syms, facts, origin, ctx):
    out = []
    for s in syms:
        if s.text not in facts:
            raise _err(f"unknown fact {s.text!r} in {ctx}", s, origin, UnknownFactParseError)
        out.append(s.text)
    return out


class UnknownFactParseError(ParseError, UnknownFactError):
    """Unknown fact with a source position."""

    def __init__(self, message, line=None, column=None, origin=None):
        self.name = message.split("'")[1] if "'" in message else message
        ParseError.__init__(self, message, line, column, origin)


def _define_form(src: PddlSource, kind: str):
    exprs = read_sexprs(src)
    if len(exprs) != 1 or _head(exprs[0]) != "define":
        where = exprs[0] if exprs else None
        raise _err("expected a single (define ...) form", where, src.origin)
    form = exprs[0]
    if len(form) < 2 or _head(form[1]) != kind or len(form[1]) != 2:
        raise _err(f"expected ({kind} <name>)", form, src.origin)
    return form, _name(form[1][1], src.origin, kind)


def parse_domain(src: SourceLike, strict: bool = True) -> Domain:
    """Parse a STRIPS domain.

    Raises :class:`ParseError` (with line/column) on malformed input and
    :class:`UnsupportedFeature` on anything outside propositional STRIPS.
    With ``strict`` ill-formed actions are rejected; otherwise the domain is
    built in lenient mode (add effects already in the precondition are dropped).
    """
    src = _source(src)
    o = src.origin
    form, name = _define_form(src, "domain")
    facts: list[str] = []
    actions = []
    for sec in form[2:]:
        h = _head(sec)
        if h == ":requirements":
            for r in sec[1:]:
                if not isinstance(r, Sym) or r.key != ":strips":
                    raise _err(f"unsupported requirement {getattr(r, 'text', r)}", r, o,
                               UnsupportedFeature)
        elif h == ":types":
            if any(not isinstance(t, Sym) or t.key != "object" for t in sec[1:]):
                raise _err("typing is not supported", sec, o, UnsupportedFeature)
        elif h == ":constants":
            if len(sec) > 1:
                raise _err("constants are not supported", sec, o, UnsupportedFeature)
        elif h == ":predicates":
            for p in sec[1:]:
                if not isinstance(p, SList) or not p:
                    raise _err("malformed predicate declaration", p, o)
                if len(p) > 1:
                    raise _err(f"predicate with arguments: {p[0].text if isinstance(p[0], Sym) else p}",
                               p, o, UnsupportedFeature)
                fname = _name(p[0], o, "predicate")
                if fname in facts:
                    raise _err(f"duplicate predicate {fname!r}", p, o)
                facts.append(fname)
        elif h == ":action":
            actions.append((sec, _parse_action(sec, o)))
        elif h in (":functions", ":derived", ":durative-action"):
            raise _err(f"{h} is not supported", sec, o, UnsupportedFeature)
        else:
            raise _err(f"unexpected domain section {h or sec!r}", sec, o)

    fset = set(facts)
    built = []
    seen = set()
    for sec, (aname, pre, adds, dels) in actions:
        if aname in seen:
            raise _err(f"duplicate action {aname!r}", sec, o)
        seen.add(aname)
        ctx = f"action {aname}"
        built.append((aname, _resolve(pre, fset, o, ctx), _resolve(adds, fset, o, ctx),
                      _resolve(dels, fset, o, ctx)))
    try:
        return Domain(name, facts, built, check="strict" if strict else "lenient")
    except MalformedDomain as e:
        raise ParseError(str(e), form.line, form.col, o) from e


def _parse_action(sec, o):
    if len(sec) < 2:
        raise _err("action without a name", sec, o)
    aname = _name(sec[1], o, "action")
    pre, adds, dels = [], [], []
    rest = list(sec[2:])
    if len(rest) % 2:
        raise _err(f"dangling keyword in action {aname}", sec, o)
    for key, val in zip(rest[::2], rest[1::2]):
        if not isinstance(key, Sym):
            raise _err(f"expected a keyword in action {aname}", key, o)
        k = key.key
        if k == ":parameters":
            if not isinstance(val, SList) or len(val):
                raise _err(f"action parameters are not supported ({aname})", val, o,
                           UnsupportedFeature)
        elif k == ":precondition":
            pre = _precondition(val, o, aname)
        elif k == ":effect":
            adds, dels = _effect(val, o, aname)
        else:
            raise _err(f"unknown action keyword {key.text}", key, o)
    return aname, pre, adds, dels


def parse_problem(src: SourceLike, domain: Domain) -> PlanningTask:
    """Parse a problem file over an already parsed ``domain``."""
    src = _source(src)
    o = src.origin
    form, _ = _define_form(src, "problem")
    facts = set(domain.facts)
    init, goal = [], []
    for sec in form[2:]:
        h = _head(sec)
        if h == ":domain":
            if len(sec) != 2 or not isinstance(sec[1], Sym):
                raise _err("malformed :domain", sec, o)
            if sec[1].text != domain.name:
                raise _err(f"problem is for domain {sec[1].text!r}, not {domain.name!r}", sec, o)
        elif h == ":objects":
            if len(sec) > 1:
                raise _err("objects are not supported", sec, o, UnsupportedFeature)
        elif h == ":init":
            for lit in sec[1:]:
                init.append(_atom(lit, o, ":init"))
        elif h == ":goal":
            if len(sec) != 2:
                raise _err(":goal takes one formula", sec, o)
            goal = _precondition(sec[1], o, "goal")
        elif h in (":metric", ":constraints"):
            raise _err(f"{h} is not supported", sec, o, UnsupportedFeature)
        else:
            raise _err(f"unexpected problem section {h or sec!r}", sec, o)
    return PlanningTask.create(domain, _resolve(init, facts, o, ":init"),
                               _resolve(goal, facts, o, ":goal"))


# -- writers -----------------------------------------------------------------

def _conj(names, indent_and="  "):
    names = list(names)
    if len(names) == 1:
        return names[0]
    return "(and" + indent_and + " ".join(names) + " )"


def pretty_print(d: Domain) -> str:
    """Serialize a domain as PDDL text that :func:`parse_domain` reads back."""
    u = d.universe
    lines = [
        f"(define (domain {d.name})",
        "  (:requirements :strips)",
        "  (:predicates " + "".join(f"({f}) " for f in d.facts) + ")",
    ]
    for a in d.actions:
        lines.append("")
        lines.append(f"  (:action {a.name}")
        pre = [f"({f})" for f in u.names_of(a.pre_mask)]
        eff = [f"({f})" for f in u.names_of(a.add_mask)]
        eff += [f"(not ({f}))" for f in u.names_of(a.del_mask)]
        if pre:
            lines.append(f"   :precondition {_conj(pre)}")
        lines.append(f"   :effect {_conj(eff) if eff else '(and )'} )")
    lines.append(")")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class PlaspFactSet:
    """plasp-style ASP facts and rules, one per line."""

    lines: tuple[str, ...]

    def text(self) -> str:
        return "".join(line + "\n" for line in self.lines)

    def __str__(self):
        return self.text()


PLASP_PREAMBLE = (
    "boolean(true).",
    "boolean(false).",
    'type(type("object")).',
)
CONTAINS_RULE = "contains(X, value(X, B)) :- variable(X), boolean(B)."


def emit_plasp_facts(d: Domain) -> PlaspFactSet:
    """Translate a domain into the fact format plasp produces for STRIPS input."""
    problems = validate_domain(d)
    if problems:
        raise MalformedDomain(problems)
    u = d.universe
    out = list(PLASP_PREAMBLE)
    out += [f'variable(variable("{f}")).' for f in d.facts]
    out.append(CONTAINS_RULE)
    for a in d.actions:
        guard = f'action(action("{a.name}"))'
        out.append(guard + ".")
        for f in u.names_of(a.pre_mask):
            out.append(f'precondition(action("{a.name}"), variable("{f}"), '
                       f'value(variable("{f}"), true)) :- {guard}.')
        effects = a.add_mask | a.del_mask
        for f in u.names_of(effects):
            val = "true" if a.add_mask >> u.index(f) & 1 else "false"
            out.append(f'postcondition(action("{a.name}"), effect(unconditional), variable("{f}"), '
                       f'value(variable("{f}"), {val})) :- {guard}.')
    return PlaspFactSet(tuple(out))


def normalize_asp(text: str) -> list[str]:
    """Whitespace-normalize ASP text to one rule per line.

    Continuation lines are joined to the rule they belong to, whitespace runs
    collapse to single spaces and blank lines are dropped.
    """
    rules, cur = [], ""
    for raw in text.splitlines():
        part = raw.strip()
        if not part or part.startswith("%"):
            continue
        cur = f"{cur} {part}" if cur else part
        if cur.endswith("."):
            rules.append(re.sub(r"\s+", " ", cur))
            cur = ""
    if cur:
        rules.append(re.sub(r"\s+", " ", cur))
    return rules
