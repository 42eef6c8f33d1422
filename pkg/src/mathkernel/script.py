"""Reading and writing proof scripts.

A script is line-oriented.  ``#`` starts a comment.  Header directives come
first, then hypotheses, then numbered steps::

    enable ReleaseAxiom(A(`f`) -> bot)   # or just: enable ReleaseRule
    domain Sent = {s1, s2} definite      # 'definite' is optional
    const c
    def la := ~A(`la`)                   # arity 0; self-quotation allowed
    def w/1 := A(v0)                     # params inferred, first occurrence
    def g(x, y) := Q(x, y)               # params given explicitly
    hyp 1: M(`la`)
    1: ~A(`la`) -> A(`la`) -> bot  by hyp 1
    2: p -> q -> p                 by L1[p; q]
    3: M(`la`) -> A(`la`)          by ALog[la]
    4: A(`la`)                     by MP 1 3
    5: ~A(`la`)                    by Release 4

Step and hypothesis numbers are 1-based and must be consecutive.  Scheme
parameters are separated by ``;`` because formulas contain commas.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import kernel
from .kernel import (
    ByExtension,
    ByGenE,
    ByGenF,
    ByHyp,
    ByLogical,
    ByMP,
    ByRelease,
    ByTheory,
    EXTENSION_PARAMS,
    ExtensionGrant,
    Justification,
    LOGICAL_PARAMS,
    Proof,
    Step,
    THEORY_PARAMS,
)
from .parser import FormulaParser, ParseError, parse_formula, parse_term
from .syntax import (
    AApp,
    And,
    Atom,
    Bot,
    DefinitionError,
    Environment,
    Exists,
    Forall,
    Formula,
    HApp,
    IllFormedError,
    Implies,
    MApp,
    Or,
    SimApp,
    TApp,
    Var,
    free_vars,
    pformat,
)

_IDENT = r"[A-Za-z_][A-Za-z0-9_]*"


class ScriptError(Exception):
    """A malformed proof-script line."""

    def __init__(self, message: str, line_no: Optional[int] = None) -> None:
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


@dataclass(frozen=True)
class DefDecl:
    name: str
    params: tuple[str, ...]
    explicit_params: bool  # written as name(x, y) rather than name/2
    body: Formula


@dataclass
class Script:
    """A parsed proof script, declaration order preserved."""

    enables: list[ExtensionGrant] = field(default_factory=list)
    domains: list[tuple[str, tuple[str, ...], bool]] = field(default_factory=list)
    consts: list[str] = field(default_factory=list)
    defs: list[DefDecl] = field(default_factory=list)
    hypotheses: list[Formula] = field(default_factory=list)
    steps: list[Step] = field(default_factory=list)

    def proof(self) -> Proof:
        return Proof(
            tuple(self.hypotheses), tuple(self.steps), frozenset(self.enables)
        )


# ---------------------------------------------------------------------------
# reading


def _first_occurrence_vars(body: Formula) -> tuple[str, ...]:
    """Free variables of body ordered by first occurrence in a left-to-right
    walk, matching their textual order."""
    seen: list[str] = []
    fv = free_vars(body)

    def term(t) -> None:
        if isinstance(t, Var) and t.name in fv and t.name not in seen:
            seen.append(t.name)

    def walk(f: Formula, bound: frozenset[str]) -> None:
        if isinstance(f, Bot):
            return
        if isinstance(f, Atom):
            for a in f.args:
                if not (isinstance(a, Var) and a.name in bound):
                    term(a)
            return
        if isinstance(f, (MApp, AApp, TApp)):
            if not (isinstance(f.arg, Var) and f.arg.name in bound):
                term(f.arg)
            return
        if isinstance(f, HApp):
            for a in (f.pred, f.arg):
                if not (isinstance(a, Var) and a.name in bound):
                    term(a)
            return
        if isinstance(f, SimApp):
            for a in (f.left, f.right):
                if not (isinstance(a, Var) and a.name in bound):
                    term(a)
            return
        if isinstance(f, (And, Or, Implies)):
            walk(f.left, bound)
            walk(f.right, bound)
            return
        if isinstance(f, (Forall, Exists)):
            walk(f.body, bound | {f.var})

    walk(body, frozenset())
    return tuple(seen)


def _split_params(text: str) -> list[str]:
    parts = [p.strip() for p in text.split(";")]
    if parts == [""]:
        return []
    return parts


def _parse_scheme_params(env: Environment, kinds: Sequence[str],
                         parts: Sequence[str], scheme: str,
                         line_no: int) -> tuple:
    fixed = [k for k in kinds if not k.endswith("*")]
    variadic = kinds and kinds[-1].endswith("*")
    if variadic:
        if len(parts) < len(fixed) + 1:
            raise ScriptError(
                f"{scheme} takes at least {len(fixed) + 1} parameters", line_no)
        expanded = list(fixed) + [kinds[-1][:-1]] * (len(parts) - len(fixed))
    else:
        if len(parts) != len(fixed):
            raise ScriptError(
                f"{scheme} takes {len(fixed)} parameters, got {len(parts)}",
                line_no)
        expanded = fixed
    out = []
    for kind, part in zip(expanded, parts):
        try:
            if kind == "f":
                out.append(parse_formula(part, env))
            elif kind == "t":
                out.append(parse_term(part, env))
            else:  # v, n, d, p: bare identifiers
                if not re.fullmatch(_IDENT, part):
                    raise ScriptError(
                        f"{scheme}: expected an identifier, got {part!r}",
                        line_no)
                out.append(part)
        except ParseError as exc:
            raise ScriptError(f"{scheme}: {exc}", line_no) from exc
    return tuple(out)


_STEP_RE = re.compile(r"(\d+)\s*:\s*(.*)$")
_SCHEME_RE = re.compile(rf"({_IDENT})\s*\[(.*)\]\s*$")


def _parse_just(env: Environment, text: str, line_no: int) -> Justification:
    words = text.split()
    if not words:
        raise ScriptError("missing justification", line_no)
    head = words[0]
    if head == "hyp":
        if len(words) != 2 or not words[1].isdigit():
            raise ScriptError("usage: hyp N", line_no)
        return ByHyp(int(words[1]) - 1)
    if head == "MP":
        if len(words) != 3 or not all(w.isdigit() for w in words[1:]):
            raise ScriptError("usage: MP minor major", line_no)
        return ByMP(int(words[1]) - 1, int(words[2]) - 1)
    if head in ("GenF", "GenE"):
        if len(words) not in (3, 4) or not words[1].isdigit():
            raise ScriptError(f"usage: {head} N x [y]", line_no)
        x = words[2]
        y = words[3] if len(words) == 4 else x
        cls = ByGenF if head == "GenF" else ByGenE
        return cls(int(words[1]) - 1, x, y)
    if head == "Release":
        if len(words) != 2 or not words[1].isdigit():
            raise ScriptError("usage: Release N", line_no)
        return ByRelease(int(words[1]) - 1)
    m = _SCHEME_RE.fullmatch(text.strip())
    if head == "Ext":
        rest = text.strip()[len("Ext"):].strip()
        m = _SCHEME_RE.fullmatch(rest)
        if not m or m.group(1) not in EXTENSION_PARAMS:
            raise ScriptError(f"unknown extension justification: {text!r}",
                              line_no)
        scheme = m.group(1)
        params = _parse_scheme_params(
            env, EXTENSION_PARAMS[scheme], _split_params(m.group(2)),
            scheme, line_no)
        return ByExtension(scheme, params)
    if m:
        scheme = m.group(1)
        parts = _split_params(m.group(2))
        if scheme in LOGICAL_PARAMS:
            return ByLogical(scheme, _parse_scheme_params(
                env, LOGICAL_PARAMS[scheme], parts, scheme, line_no))
        if scheme in THEORY_PARAMS:
            return ByTheory(scheme, _parse_scheme_params(
                env, THEORY_PARAMS[scheme], parts, scheme, line_no))
    raise ScriptError(f"unrecognized justification: {text!r}", line_no)


def parse_script(text: str, env: Optional[Environment] = None
                 ) -> tuple[Script, Environment]:
    """Parse a proof script, building up the definitional environment as
    directives are encountered.  Returns the script and the environment."""
    if env is None:
        env = Environment()
    script = Script()
    next_hyp = 1
    next_step = 1
    in_steps = False
    # grant formulas may quote names defined later; parse them at the end
    pending_enables: list[tuple[str, Optional[str], int]] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            if line.startswith("enable "):
                rest = line[len("enable "):].strip()
                m = re.fullmatch(rf"({_IDENT})\s*(?:\((.*)\))?", rest)
                if not m or m.group(1) not in kernel.EXTENSION_SCHEMES:
                    raise ScriptError(f"unknown extension: {rest!r}", line_no)
                pending_enables.append((m.group(1), m.group(2), line_no))
            elif line.startswith("domain "):
                m = re.fullmatch(
                    rf"domain\s+({_IDENT})\s*=\s*\{{([^}}]*)\}}"
                    rf"(\s+definite)?",
                    line)
                if not m:
                    raise ScriptError(
                        "usage: domain Name = {c1, c2, ...} [definite]",
                        line_no)
                consts = tuple(
                    c.strip() for c in m.group(2).split(",") if c.strip())
                definite = m.group(3) is not None
                env.declare_domain(m.group(1), consts, definite)
                script.domains.append((m.group(1), consts, definite))
            elif line.startswith("const "):
                name = line[len("const "):].strip()
                if not re.fullmatch(_IDENT, name):
                    raise ScriptError(f"bad constant name: {name!r}", line_no)
                env.declare_constant(name)
                script.consts.append(name)
            elif line.startswith("def "):
                m = re.fullmatch(
                    rf"def\s+({_IDENT})\s*"
                    rf"(?:/(\d+)|\(([^)]*)\))?\s*:=\s*(.*)",
                    line)
                if not m:
                    raise ScriptError("usage: def name[/N | (x, y)] := formula",
                                      line_no)
                name = m.group(1)
                body = FormulaParser(env, self_name=name).formula(m.group(4))
                if m.group(3) is not None:
                    params = tuple(
                        p.strip() for p in m.group(3).split(",") if p.strip())
                    explicit = True
                else:
                    params = _first_occurrence_vars(body)
                    explicit = False
                    want = int(m.group(2)) if m.group(2) else 0
                    if len(params) != want:
                        raise ScriptError(
                            f"{name} declared with arity {want} but its body "
                            f"has {len(params)} free variables", line_no)
                env.define(name, params, body)
                script.defs.append(DefDecl(name, params, explicit, body))
            elif line.startswith("hyp "):
                m = _STEP_RE.fullmatch(line[len("hyp "):].strip())
                if not m or int(m.group(1)) != next_hyp:
                    raise ScriptError(
                        f"expected 'hyp {next_hyp}: formula'", line_no)
                if in_steps:
                    raise ScriptError("hypotheses must precede steps", line_no)
                script.hypotheses.append(parse_formula(m.group(2), env))
                next_hyp += 1
            else:
                m = _STEP_RE.fullmatch(line)
                if not m:
                    raise ScriptError(f"unrecognized line: {line!r}", line_no)
                if int(m.group(1)) != next_step:
                    raise ScriptError(
                        f"expected step {next_step}, found {m.group(1)}",
                        line_no)
                in_steps = True
                body = m.group(2)
                if " by " not in f" {body} ":
                    raise ScriptError("a step needs 'formula by justification'",
                                      line_no)
                fml_text, just_text = body.rsplit(" by ", 1)
                phi = parse_formula(fml_text.strip(), env)
                script.steps.append(
                    Step(phi, _parse_just(env, just_text.strip(), line_no)))
                next_step += 1
        except ScriptError:
            raise
        except (ParseError, DefinitionError, IllFormedError) as exc:
            raise ScriptError(str(exc), line_no) from exc
    for scheme, fml_text, line_no in pending_enables:
        phi = None
        if fml_text is not None:
            try:
                phi = parse_formula(fml_text, env)
            except (ParseError, IllFormedError) as exc:
                raise ScriptError(str(exc), line_no) from exc
        script.enables.append(ExtensionGrant(scheme, phi))
    if not script.steps:
        raise ScriptError("a proof script needs at least one step")
    return script, env


def script_of(env: Environment, proof: Proof) -> Script:
    """Package a proof with every declaration of its environment, so the
    emitted text is checkable from scratch."""
    domain_consts: set[str] = set()
    domains = []
    for dom in env.domains.values():
        domains.append((dom.predicate, dom.constants, dom.definite))
        domain_consts.update(dom.constants)
    return Script(
        enables=sorted(proof.enabled, key=str),
        domains=domains,
        consts=sorted(env.constants - domain_consts),
        defs=[DefDecl(d.name, d.params, bool(d.params), d.body)
              for d in env.definitions.values()],
        hypotheses=list(proof.hypotheses),
        steps=list(proof.steps),
    )


# ---------------------------------------------------------------------------
# writing


def _emit_param(kind: str, value) -> str:
    if kind.startswith("f"):
        return pformat(value)
    return str(value)  # terms and identifiers print as themselves


def _emit_just(just: Justification) -> str:
    if isinstance(just, ByHyp):
        return f"hyp {just.index + 1}"
    if isinstance(just, ByMP):
        return f"MP {just.minor + 1} {just.major + 1}"
    if isinstance(just, (ByGenF, ByGenE)):
        head = "GenF" if isinstance(just, ByGenF) else "GenE"
        suffix = "" if just.to_var == just.var else f" {just.to_var}"
        return f"{head} {just.premise + 1} {just.var}{suffix}"
    if isinstance(just, ByRelease):
        return f"Release {just.premise + 1}"
    if isinstance(just, ByLogical):
        kinds = LOGICAL_PARAMS[just.scheme]
        body = "; ".join(_emit_param(k, p) for k, p in zip(kinds, just.params))
        return f"{just.scheme}[{body}]"
    if isinstance(just, ByTheory):
        kinds = list(THEORY_PARAMS[just.scheme])
        if kinds and kinds[-1].endswith("*"):
            star = kinds.pop()[:-1]
            kinds += [star] * (len(just.params) - len(kinds))
        body = "; ".join(_emit_param(k, p) for k, p in zip(kinds, just.params))
        return f"{just.scheme}[{body}]"
    if isinstance(just, ByExtension):
        kinds = EXTENSION_PARAMS[just.scheme]
        body = "; ".join(_emit_param(k, p) for k, p in zip(kinds, just.params))
        return f"Ext {just.scheme}[{body}]"
    raise TypeError(f"not a justification: {just!r}")


def emit_script(script: Script) -> str:
    """Render a script back to text; parsing the result reproduces it."""
    lines: list[str] = []
    for g in script.enables:
        if g.formula is None:
            lines.append(f"enable {g.scheme}")
        else:
            lines.append(f"enable {g.scheme}({pformat(g.formula)})")
    for name, consts, definite in script.domains:
        tail = " definite" if definite else ""
        lines.append(f"domain {name} = {{{', '.join(consts)}}}{tail}")
    for c in script.consts:
        lines.append(f"const {c}")
    for d in script.defs:
        if d.explicit_params:
            head = f"{d.name}({', '.join(d.params)})"
        elif d.params:
            head = f"{d.name}/{len(d.params)}"
        else:
            head = d.name
        lines.append(f"def {head} := {pformat(d.body)}")
    for i, h in enumerate(script.hypotheses, start=1):
        lines.append(f"hyp {i}: {pformat(h)}")
    for i, s in enumerate(script.steps, start=1):
        lines.append(f"{i}: {pformat(s.formula)} by {_emit_just(s.just)}")
    return "\n".join(lines) + "\n"
