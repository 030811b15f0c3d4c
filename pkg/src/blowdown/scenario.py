"""Scenario files: a line-oriented format for sphere-configuration constructions.

A scenario declares an ambient lattice, builds curves through blow-ups and
smoothings, extracts plumbing chains, blows them down, and runs the
Seiberg-Witten ledger pipeline alongside, checking assertions as it goes.
Scenarios are plain text (one directive per line, `#` comments, quoted
strings allowed), so the bundled corpus doubles as documentation.

Directives:

    ambient <label> e <int> sigma <int> [flags <f>...] basis <gen>...
    pair <gen> <gen> <int>                 # Gram entry (symmetric); before construction
    curve <name> class <lincomb> [genus <int>] [dp <int>]
    blowup <name> [at <curve>:<mult>,...] [doublepoint <curve>]
    smooth <new> <curve> <curve>
    surgery <label> [flags <f>...]         # knot-surgery relabel, lattice carried across
    chain <name> = <curve>,<curve>,...     # extracts and snapshots the plumbing
    blowdown <chain> [label <label>]       # rational blow-down; drops curve data
    mcg <name> expected <int> twists <spec>...   # spec: cycle[*mult][~conjword]
    sw ledger <name> e <int> sigma <int> fiber <lincomb> knots <twist(..),..|none>
    sw blowups <new> <ledger> <gen>...
    sw blowdown <new> <ledger> <chain> vanishing-r vanishing-background [label <l>]
    sw chambered-blowdown <new> <ledger> <chain> [label <l>]
    assert <kind> <args>...

Assertion kinds: chain, identify, euler, signature, label, fingerprint,
pairing, square, square-class, dp, mcg-pass, mcg-cycles-equal,
mcg-word-equal, sw-entries, sw-value, sw-value-set, sw-unverified,
sw-restriction, sw-minimal.

Reports are byte-deterministic; parse(print(parse(text))) == parse(text).
"""

from __future__ import annotations

import re
import shlex
from dataclasses import dataclass, field

from . import hirzebruch, homcalc, mcg, swledger


class ScenarioError(ValueError):
    pass


Lincomb = tuple[tuple[int, str], ...]


def parse_lincomb(text: str) -> Lincomb:
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty class expression")
    terms = []
    cur = ""
    for i, ch in enumerate(s):
        if ch in "+-" and i > 0:
            terms.append(cur)
            cur = ch
        else:
            cur += ch
    terms.append(cur)
    out = []
    for term in terms:
        m = re.fullmatch(r"([+-]?)(?:(\d+)\*?)?([A-Za-z_][A-Za-z0-9_]*)", term)
        if not m:
            raise ValueError(f"bad term {term!r} in class expression {text!r}")
        sign = -1 if m.group(1) == "-" else 1
        coef = int(m.group(2)) if m.group(2) else 1
        out.append((sign * coef, m.group(3)))
    return tuple(out)


def lincomb_to_str(lc: Lincomb) -> str:
    parts = []
    for coef, name in lc:
        sign = "-" if coef < 0 else "+"
        mag = abs(coef)
        term = name if mag == 1 else f"{mag}*{name}"
        parts.append((sign, term))
    first_sign, first_term = parts[0]
    out = ("-" if first_sign == "-" else "") + first_term
    for sign, term in parts[1:]:
        out += sign + term
    return out


def resolve_lincomb(lc: Lincomb, basis) -> tuple[int, ...]:
    vec = [0] * len(basis)
    index = {name: i for i, name in enumerate(basis)}
    for coef, name in lc:
        if name not in index:
            raise ValueError(f"unknown generator {name!r}")
        vec[index[name]] += coef
    return tuple(vec)


def _compact_word(w: mcg.Word) -> str:
    parts = []
    for tag, exp in w:
        letter = tag if exp > 0 else tag.upper()
        e = abs(exp)
        parts.append(letter if e == 1 else f"{letter}^{e}")
    return "".join(parts)


def _linexpr_compact(v: swledger.LinExpr) -> str:
    if v.c1 >= 0:
        return f"{v.c0}+{v.c1}*n"
    return f"{v.c0}-{-v.c1}*n"


# --- directive records -------------------------------------------------------

@dataclass(frozen=True)
class AmbientDecl:
    label: str
    e: int
    sigma: int
    flags: tuple[str, ...]
    basis: tuple[str, ...]
    lineno: int = field(compare=False, default=0)


@dataclass(frozen=True)
class PairDecl:
    g1: str
    g2: str
    value: int
    lineno: int = field(compare=False, default=0)


@dataclass(frozen=True)
class CurveDecl:
    name: str
    cls: Lincomb
    genus: int
    dp: int
    lineno: int = field(compare=False, default=0)


@dataclass(frozen=True)
class BlowupStep:
    name: str
    at: tuple[tuple[str, int], ...]
    doublepoint: str | None
    lineno: int = field(compare=False, default=0)


@dataclass(frozen=True)
class SmoothStep:
    name: str
    c1: str
    c2: str
    lineno: int = field(compare=False, default=0)


@dataclass(frozen=True)
class SurgeryStep:
    label: str
    flags: tuple[str, ...]
    lineno: int = field(compare=False, default=0)


@dataclass(frozen=True)
class ChainDecl:
    name: str
    curves: tuple[str, ...]
    lineno: int = field(compare=False, default=0)


@dataclass(frozen=True)
class BlowdownStep:
    chain: str
    label: str | None
    lineno: int = field(compare=False, default=0)


@dataclass(frozen=True)
class TwistSpec:
    cycle: str
    multiplicity: int
    conjugator: mcg.Word

    def to_twist(self) -> mcg.Twist:
        return mcg.Twist(self.cycle, self.conjugator, self.multiplicity)

    def __str__(self) -> str:
        out = self.cycle
        if self.multiplicity != 1:
            out += f"*{self.multiplicity}"
        if self.conjugator:
            out += f"~{_compact_word(self.conjugator)}"
        return out


@dataclass(frozen=True)
class McgStep:
    name: str
    expected: int
    twists: tuple[TwistSpec, ...]
    lineno: int = field(compare=False, default=0)


@dataclass(frozen=True)
class SwLedgerStep:
    name: str
    e: int
    sigma: int
    fiber: Lincomb
    knots: tuple[int | None, ...]  # None = symbolic n
    lineno: int = field(compare=False, default=0)


@dataclass(frozen=True)
class SwBlowupsStep:
    name: str
    source: str
    gens: tuple[str, ...]
    lineno: int = field(compare=False, default=0)


@dataclass(frozen=True)
class SwBlowdownStep:
    name: str
    source: str
    chain: str
    chambered: bool
    label: str | None
    lineno: int = field(compare=False, default=0)


@dataclass(frozen=True)
class AssertStep:
    kind: str
    args: tuple
    lineno: int = field(compare=False, default=0)


Directive = (
    AmbientDecl | PairDecl | CurveDecl | BlowupStep | SmoothStep | SurgeryStep
    | ChainDecl | BlowdownStep | McgStep | SwLedgerStep | SwBlowupsStep
    | SwBlowdownStep | AssertStep
)


@dataclass(frozen=True)
class Scenario:
    name: str
    directives: tuple[Directive, ...]


# --- parsing -----------------------------------------------------------------

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_().#-]*")
_ASSERT_KINDS = {
    "chain", "identify", "euler", "signature", "label", "fingerprint",
    "pairing", "square", "square-class", "dp", "mcg-pass", "mcg-cycles-equal",
    "mcg-word-equal", "sw-entries", "sw-value", "sw-value-set",
    "sw-unverified", "sw-restriction", "sw-minimal",
}


class _Tokens:
    def __init__(self, tokens, lineno, text):
        self.tokens = tokens
        self.pos = 0
        self.lineno = lineno
        self.text = text

    def done(self) -> bool:
        return self.pos >= len(self.tokens)

    def peek(self):
        return self.tokens[self.pos] if not self.done() else None

    def take(self, what: str) -> str:
        if self.done():
            raise ScenarioError(f"line {self.lineno}: expected {what} at end of line")
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def take_int(self, what: str) -> int:
        tok = self.take(what)
        try:
            return int(tok)
        except ValueError:
            raise ScenarioError(f"line {self.lineno}: expected {what}, got {tok!r}") from None

    def take_keyword(self, word: str):
        tok = self.take(f"keyword {word!r}")
        if tok != word:
            raise ScenarioError(f"line {self.lineno}: expected {word!r}, got {tok!r}")

    def rest(self) -> list[str]:
        out = self.tokens[self.pos:]
        self.pos = len(self.tokens)
        return out

    def end(self):
        if not self.done():
            raise ScenarioError(
                f"line {self.lineno}: unexpected trailing token {self.tokens[self.pos]!r}"
            )


def _parse_twistspec(tok: str, lineno: int) -> TwistSpec:
    m = re.fullmatch(r"([ab])(?:\*(\d+))?(?:~(\S+))?", tok)
    if not m:
        raise ScenarioError(f"line {lineno}: bad twist spec {tok!r}")
    mult = int(m.group(2)) if m.group(2) else 1
    conj: mcg.Word = ()
    if m.group(3):
        try:
            conj = mcg.parse_word(m.group(3))
        except ValueError as exc:
            raise ScenarioError(f"line {lineno}: {exc}") from None
    return TwistSpec(cycle=m.group(1), multiplicity=mult, conjugator=conj)


def _parse_knots(tok: str, lineno: int) -> tuple[int | None, ...]:
    if tok == "none":
        return ()
    out: list[int | None] = []
    for item in tok.split(","):
        m = re.fullmatch(r"twist\((n|-?\d+)\)", item)
        if not m:
            raise ScenarioError(
                f"line {lineno}: bad knot spec {item!r} (use twist(n), twist(3), or none)"
            )
        out.append(None if m.group(1) == "n" else int(m.group(1)))
    return tuple(out)


def _parse_lincomb_tok(tok: str, lineno: int) -> Lincomb:
    try:
        return parse_lincomb(tok)
    except ValueError as exc:
        raise ScenarioError(f"line {lineno}: {exc}") from None


def _parse_chain_literal(tok: str, lineno: int) -> tuple[int, ...]:
    try:
        return hirzebruch.parse_chain(tok)
    except ValueError as exc:
        raise ScenarioError(f"line {lineno}: {exc}") from None


def _parse_linexpr_tok(tok: str, lineno: int) -> swledger.LinExpr:
    try:
        return swledger.parse_linexpr(tok)
    except ValueError as exc:
        raise ScenarioError(f"line {lineno}: {exc}") from None


class _ParseChecker:
    """Static name tracking so references fail at parse time, with a location."""

    def __init__(self):
        self.gens: set[str] = set()
        self.curves: set[str] = set()
        self.chains: set[str] = set()
        self.mcgs: set[str] = set()
        self.ledgers: set[str] = set()
        self.blowdown_ledgers: set[str] = set()
        self.have_ambient = False
        self.construction_started = False
        self.blown_down = False

    def need(self, cond: bool, lineno: int, msg: str):
        if not cond:
            raise ScenarioError(f"line {lineno}: {msg}")

    def need_curve(self, name: str, lineno: int):
        self.need(name in self.curves, lineno, f"unknown curve {name!r}")

    def need_gen(self, name: str, lineno: int):
        self.need(name in self.gens, lineno, f"unknown generator {name!r}")

    def need_lincomb(self, lc: Lincomb, lineno: int):
        for _c, name in lc:
            self.need(name in self.gens or name in self.curves, lineno,
                      f"unknown class {name!r}")


def parse_scenario(text: str, name: str = "scenario") -> Scenario:
    directives: list[Directive] = []
    chk = _ParseChecker()

    for lineno, raw in enumerate(text.splitlines(), start=1):
        try:
            tokens = shlex.split(raw, comments=True)
        except ValueError as exc:
            raise ScenarioError(f"line {lineno}: {exc}") from None
        if not tokens:
            continue
        head, rest = tokens[0], tokens[1:]
        t = _Tokens(rest, lineno, raw)
        if head == "sw":
            sub = t.take("sw directive")
            head = f"sw {sub}"
        builder = _DIRECTIVE_PARSERS.get(head)
        if builder is None:
            raise ScenarioError(f"line {lineno}: unknown directive {tokens[0]!r}")
        if head != "ambient" and not chk.have_ambient:
            raise ScenarioError("no ambient declared")
        directives.append(builder(t, chk, lineno))
        t.end()

    if not chk.have_ambient:
        raise ScenarioError("no ambient declared")
    if not directives or not isinstance(directives[-1], AssertStep):
        raise ScenarioError("scenario must end with at least one assertion")
    return Scenario(name=name, directives=tuple(directives))


def _parse_ambient(t: _Tokens, chk: _ParseChecker, lineno: int) -> AmbientDecl:
    chk.need(not chk.have_ambient, lineno, "duplicate ambient declaration")
    label = t.take("manifold label")
    t.take_keyword("e")
    e = t.take_int("Euler characteristic")
    t.take_keyword("sigma")
    sigma = t.take_int("signature")
    flags: list[str] = []
    if t.peek() == "flags":
        t.take("flags")
        while t.peek() not in (None, "basis"):
            flags.append(t.take("flag"))
    t.take_keyword("basis")
    basis = t.rest()
    chk.need(bool(basis), lineno, "ambient needs at least one basis generator")
    chk.need(len(set(basis)) == len(basis), lineno, "duplicate basis generator")
    chk.gens.update(basis)
    chk.have_ambient = True
    return AmbientDecl(label, e, sigma, tuple(flags), tuple(basis), lineno)


def _parse_pair(t: _Tokens, chk: _ParseChecker, lineno: int) -> PairDecl:
    chk.need(not chk.construction_started, lineno, "pair must precede construction steps")
    g1 = t.take("generator")
    g2 = t.take("generator")
    chk.need_gen(g1, lineno)
    chk.need_gen(g2, lineno)
    value = t.take_int("pairing value")
    return PairDecl(g1, g2, value, lineno)


def _parse_curve(t: _Tokens, chk: _ParseChecker, lineno: int) -> CurveDecl:
    chk.need(not chk.blown_down, lineno, "curve data was dropped by the blow-down")
    name = t.take("curve name")
    chk.need(name not in chk.curves, lineno, f"curve {name!r} already declared")
    t.take_keyword("class")
    lc = _parse_lincomb_tok(t.take("class expression"), lineno)
    chk.need_lincomb(lc, lineno)
    genus = 0
    dp = 0
    if t.peek() == "genus":
        t.take("genus")
        genus = t.take_int("genus")
    if t.peek() == "dp":
        t.take("dp")
        dp = t.take_int("double-point count")
    chk.need(genus >= 0, lineno, "genus must be >= 0")
    chk.need(dp >= 0, lineno, "double-point count must be >= 0")
    chk.curves.add(name)
    chk.construction_started = True
    return CurveDecl(name, lc, genus, dp, lineno)


def _parse_blowup(t: _Tokens, chk: _ParseChecker, lineno: int) -> BlowupStep:
    chk.need(not chk.blown_down, lineno, "cannot blow up after the blow-down")
    name = t.take("exceptional name")
    chk.need(name not in chk.gens, lineno, f"generator {name!r} already declared")
    chk.need(name not in chk.curves, lineno, f"curve {name!r} already declared")
    at: list[tuple[str, int]] = []
    doublepoint = None
    if t.peek() == "at":
        t.take("at")
        spec = t.take("incidence list")
        for item in spec.split(","):
            if ":" not in item:
                raise ScenarioError(f"line {lineno}: bad incidence {item!r} (use curve:mult)")
            cname, _, mult_s = item.partition(":")
            try:
                mult = int(mult_s)
            except ValueError:
                raise ScenarioError(f"line {lineno}: bad multiplicity in {item!r}") from None
            chk.need_curve(cname, lineno)
            at.append((cname, mult))
    if t.peek() == "doublepoint":
        t.take("doublepoint")
        doublepoint = t.take("curve name")
        chk.need_curve(doublepoint, lineno)
    chk.gens.add(name)
    chk.curves.add(name)
    chk.construction_started = True
    return BlowupStep(name, tuple(at), doublepoint, lineno)


def _parse_smooth(t: _Tokens, chk: _ParseChecker, lineno: int) -> SmoothStep:
    chk.need(not chk.blown_down, lineno, "cannot smooth after the blow-down")
    name = t.take("new curve name")
    c1 = t.take("curve name")
    c2 = t.take("curve name")
    chk.need_curve(c1, lineno)
    chk.need_curve(c2, lineno)
    chk.need(name not in chk.curves - {c1, c2}, lineno, f"curve {name!r} already declared")
    chk.curves.discard(c1)
    chk.curves.discard(c2)
    chk.curves.add(name)
    chk.construction_started = True
    return SmoothStep(name, c1, c2, lineno)


def _parse_surgery(t: _Tokens, chk: _ParseChecker, lineno: int) -> SurgeryStep:
    chk.need(not chk.blown_down, lineno, "cannot relabel after the blow-down")
    label = t.take("manifold label")
    flags: list[str] = []
    if t.peek() == "flags":
        t.take("flags")
        flags = t.rest()
    chk.construction_started = True
    return SurgeryStep(label, tuple(flags), lineno)


def _parse_chain(t: _Tokens, chk: _ParseChecker, lineno: int) -> ChainDecl:
    chk.need(not chk.blown_down, lineno, "curve data was dropped by the blow-down")
    name = t.take("chain name")
    chk.need(name not in chk.chains, lineno, f"chain {name!r} already declared")
    t.take_keyword("=")
    curves = tuple(t.take("curve list").split(","))
    for c in curves:
        chk.need_curve(c, lineno)
    chk.chains.add(name)
    return ChainDecl(name, curves, lineno)


def _parse_blowdown(t: _Tokens, chk: _ParseChecker, lineno: int) -> BlowdownStep:
    chk.need(not chk.blown_down, lineno, "already blown down")
    chain = t.take("chain name")
    chk.need(chain in chk.chains, lineno, f"unknown chain {chain!r}")
    label = None
    if t.peek() == "label":
        t.take("label")
        label = t.take("manifold label")
    chk.blown_down = True
    chk.curves.clear()
    return BlowdownStep(chain, label, lineno)


def _parse_mcg(t: _Tokens, chk: _ParseChecker, lineno: int) -> McgStep:
    name = t.take("report name")
    chk.need(name not in chk.mcgs, lineno, f"mcg report {name!r} already declared")
    t.take_keyword("expected")
    expected = t.take_int("expected twist count")
    t.take_keyword("twists")
    specs = tuple(_parse_twistspec(tok, lineno) for tok in t.rest())
    chk.need(bool(specs), lineno, "mcg directive needs at least one twist")
    chk.mcgs.add(name)
    return McgStep(name, expected, specs, lineno)


def _parse_sw_ledger(t: _Tokens, chk: _ParseChecker, lineno: int) -> SwLedgerStep:
    name = t.take("ledger name")
    chk.need(name not in chk.ledgers, lineno, f"ledger {name!r} already declared")
    t.take_keyword("e")
    e = t.take_int("Euler characteristic")
    t.take_keyword("sigma")
    sigma = t.take_int("signature")
    t.take_keyword("fiber")
    fiber = _parse_lincomb_tok(t.take("fiber class"), lineno)
    chk.need_lincomb(fiber, lineno)
    t.take_keyword("knots")
    knots = _parse_knots(t.take("knot list"), lineno)
    chk.ledgers.add(name)
    return SwLedgerStep(name, e, sigma, fiber, knots, lineno)


def _parse_sw_blowups(t: _Tokens, chk: _ParseChecker, lineno: int) -> SwBlowupsStep:
    name = t.take("ledger name")
    chk.need(name not in chk.ledgers, lineno, f"ledger {name!r} already declared")
    source = t.take("source ledger")
    chk.need(source in chk.ledgers, lineno, f"unknown ledger {source!r}")
    gens = tuple(t.rest())
    chk.need(bool(gens), lineno, "sw blowups needs at least one exceptional class")
    for g in gens:
        chk.need_gen(g, lineno)
    chk.ledgers.add(name)
    return SwBlowupsStep(name, source, gens, lineno)


def _parse_sw_blowdown(t: _Tokens, chk: _ParseChecker, lineno: int) -> SwBlowdownStep:
    name = t.take("ledger name")
    chk.need(name not in chk.ledgers, lineno, f"ledger {name!r} already declared")
    source = t.take("source ledger")
    chk.need(source in chk.ledgers, lineno, f"unknown ledger {source!r}")
    chain = t.take("chain name")
    chk.need(chain in chk.chains, lineno, f"unknown chain {chain!r}")
    t.take_keyword("vanishing-r")
    t.take_keyword("vanishing-background")
    label = None
    if t.peek() == "label":
        t.take("label")
        label = t.take("manifold label")
    chk.ledgers.add(name)
    chk.blowdown_ledgers.add(name)
    return SwBlowdownStep(name, source, chain, False, label, lineno)


def _parse_sw_chambered(t: _Tokens, chk: _ParseChecker, lineno: int) -> SwBlowdownStep:
    name = t.take("ledger name")
    chk.need(name not in chk.ledgers, lineno, f"ledger {name!r} already declared")
    source = t.take("source ledger")
    chk.need(source in chk.ledgers, lineno, f"unknown ledger {source!r}")
    chain = t.take("chain name")
    chk.need(chain in chk.chains, lineno, f"unknown chain {chain!r}")
    label = None
    if t.peek() == "label":
        t.take("label")
        label = t.take("manifold label")
    chk.ledgers.add(name)
    chk.blowdown_ledgers.add(name)
    return SwBlowdownStep(name, source, chain, True, label, lineno)


def _parse_assert(t: _Tokens, chk: _ParseChecker, lineno: int) -> AssertStep:
    kind = t.take("assertion kind")
    if kind not in _ASSERT_KINDS:
        raise ScenarioError(f"line {lineno}: unknown assertion kind {kind!r}")
    args: tuple
    if kind == "chain":
        name = t.take("chain name")
        chk.need(name in chk.chains, lineno, f"unknown chain {name!r}")
        args = (name, _parse_chain_literal(t.take("weights"), lineno))
    elif kind == "identify":
        name = t.take("chain name")
        chk.need(name in chk.chains, lineno, f"unknown chain {name!r}")
        args = (name, t.take_int("p"), t.take_int("q"))
    elif kind in ("euler", "signature"):
        args = (t.take_int("integer"),)
    elif kind == "label":
        args = (t.take("label"),)
    elif kind == "fingerprint":
        tok = t.take("fingerprint string or none")
        args = (None if tok == "none" else tok,)
    elif kind == "pairing":
        c1 = t.take("curve name")
        c2 = t.take("curve name")
        chk.need_curve(c1, lineno)
        chk.need_curve(c2, lineno)
        args = (c1, c2, t.take_int("pairing value"))
    elif kind in ("square", "dp"):
        c = t.take("curve name")
        chk.need_curve(c, lineno)
        args = (c, t.take_int("integer"))
    elif kind == "square-class":
        lc = _parse_lincomb_tok(t.take("class expression"), lineno)
        chk.need_lincomb(lc, lineno)
        args = (lc, t.take_int("integer"))
    elif kind == "mcg-pass":
        name = t.take("mcg report name")
        chk.need(name in chk.mcgs, lineno, f"unknown mcg report {name!r}")
        args = (name,)
    elif kind == "mcg-cycles-equal":
        name = t.take("mcg report name")
        chk.need(name in chk.mcgs, lineno, f"unknown mcg report {name!r}")
        args = (name, t.take_int("twist index"), t.take_int("twist index"))
    elif kind == "mcg-word-equal":
        name = t.take("mcg report name")
        chk.need(name in chk.mcgs, lineno, f"unknown mcg report {name!r}")
        word_text = t.take("word")
        try:
            word = mcg.parse_word(word_text)
        except ValueError as exc:
            raise ScenarioError(f"line {lineno}: {exc}") from None
        args = (name, word)
    elif kind == "sw-entries":
        name = t.take("ledger name")
        chk.need(name in chk.ledgers, lineno, f"unknown ledger {name!r}")
        args = (name, t.take_int("entry count"))
    elif kind == "sw-value":
        name = t.take("ledger name")
        chk.need(name in chk.ledgers, lineno, f"unknown ledger {name!r}")
        lc = _parse_lincomb_tok(t.take("class expression"), lineno)
        args = (name, lc, _parse_linexpr_tok(t.take("value"), lineno))
    elif kind == "sw-value-set":
        name = t.take("ledger name")
        chk.need(name in chk.blowdown_ledgers, lineno,
                 f"ledger {name!r} has no blow-down value sets")
        lc = _parse_lincomb_tok(t.take("class expression"), lineno)
        values = tuple(sorted(
            _parse_linexpr_tok(tok, lineno) for tok in t.take("value set").split(",")
        ))
        args = (name, lc, values)
    elif kind == "sw-unverified":
        name = t.take("ledger name")
        chk.need(name in chk.ledgers, lineno, f"unknown ledger {name!r}")
        args = (name, _parse_lincomb_tok(t.take("class expression"), lineno))
    elif kind == "sw-restriction":
        name = t.take("ledger name")
        chk.need(name in chk.blowdown_ledgers, lineno,
                 f"ledger {name!r} has no blow-down restrictions")
        lc = _parse_lincomb_tok(t.take("class expression"), lineno)
        args = (name, lc, _parse_chain_literal(t.take("restriction vector"), lineno))
    elif kind == "sw-minimal":
        name = t.take("ledger name")
        chk.need(name in chk.blowdown_ledgers, lineno,
                 f"ledger {name!r} is not a blow-down result")
        args = (name, t.take_int("concrete n"))
    else:  # pragma: no cover - kinds are exhausted above
        raise ScenarioError(f"line {lineno}: unhandled assertion kind {kind!r}")
    return AssertStep(kind, args, lineno)


_DIRECTIVE_PARSERS = {
    "ambient": _parse_ambient,
    "pair": _parse_pair,
    "curve": _parse_curve,
    "blowup": _parse_blowup,
    "smooth": _parse_smooth,
    "surgery": _parse_surgery,
    "chain": _parse_chain,
    "blowdown": _parse_blowdown,
    "mcg": _parse_mcg,
    "sw ledger": _parse_sw_ledger,
    "sw blowups": _parse_sw_blowups,
    "sw blowdown": _parse_sw_blowdown,
    "sw chambered-blowdown": _parse_sw_chambered,
    "assert": _parse_assert,
}


# --- printing ----------------------------------------------------------------

def _q(token: str) -> str:
    return f'"{token}"' if any(ch.isspace() for ch in token) else token


def print_directive(d: Directive) -> str:
    if isinstance(d, AmbientDecl):
        out = f"ambient {_q(d.label)} e {d.e} sigma {d.sigma}"
        if d.flags:
            out += " flags " + " ".join(d.flags)
        return out + " basis " + " ".join(d.basis)
    if isinstance(d, PairDecl):
        return f"pair {d.g1} {d.g2} {d.value}"
    if isinstance(d, CurveDecl):
        return f"curve {d.name} class {lincomb_to_str(d.cls)} genus {d.genus} dp {d.dp}"
    if isinstance(d, BlowupStep):
        out = f"blowup {d.name}"
        if d.at:
            out += " at " + ",".join(f"{c}:{m}" for c, m in d.at)
        if d.doublepoint:
            out += f" doublepoint {d.doublepoint}"
        return out
    if isinstance(d, SmoothStep):
        return f"smooth {d.name} {d.c1} {d.c2}"
    if isinstance(d, SurgeryStep):
        out = f"surgery {_q(d.label)}"
        if d.flags:
            out += " flags " + " ".join(d.flags)
        return out
    if isinstance(d, ChainDecl):
        return f"chain {d.name} = " + ",".join(d.curves)
    if isinstance(d, BlowdownStep):
        out = f"blowdown {d.chain}"
        if d.label:
            out += f" label {_q(d.label)}"
        return out
    if isinstance(d, McgStep):
        specs = " ".join(str(s) for s in d.twists)
        return f"mcg {d.name} expected {d.expected} twists {specs}"
    if isinstance(d, SwLedgerStep):
        knots = ",".join("twist(n)" if k is None else f"twist({k})" for k in d.knots) or "none"
        return (
            f"sw ledger {d.name} e {d.e} sigma {d.sigma} "
            f"fiber {lincomb_to_str(d.fiber)} knots {knots}"
        )
    if isinstance(d, SwBlowupsStep):
        return f"sw blowups {d.name} {d.source} " + " ".join(d.gens)
    if isinstance(d, SwBlowdownStep):
        if d.chambered:
            out = f"sw chambered-blowdown {d.name} {d.source} {d.chain}"
        else:
            out = (
                f"sw blowdown {d.name} {d.source} {d.chain} "
                "vanishing-r vanishing-background"
            )
        if d.label:
            out += f" label {_q(d.label)}"
        return out
    if isinstance(d, AssertStep):
        return "assert " + _print_assert(d)
    raise TypeError(f"unknown directive {d!r}")


def _print_assert(d: AssertStep) -> str:
    k, a = d.kind, d.args
    if k == "chain":
        return f"chain {a[0]} {hirzebruch.chain_to_str(a[1])}"
    if k == "identify":
        return f"identify {a[0]} {a[1]} {a[2]}"
    if k in ("euler", "signature"):
        return f"{k} {a[0]}"
    if k == "label":
        return f"label {_q(a[0])}"
    if k == "fingerprint":
        return f"fingerprint {_q(a[0]) if a[0] is not None else 'none'}"
    if k == "pairing":
        return f"pairing {a[0]} {a[1]} {a[2]}"
    if k in ("square", "dp"):
        return f"{k} {a[0]} {a[1]}"
    if k == "square-class":
        return f"square-class {lincomb_to_str(a[0])} {a[1]}"
    if k == "mcg-pass":
        return f"mcg-pass {a[0]}"
    if k == "mcg-cycles-equal":
        return f"mcg-cycles-equal {a[0]} {a[1]} {a[2]}"
    if k == "mcg-word-equal":
        return f"mcg-word-equal {a[0]} {_compact_word(a[1])}"
    if k == "sw-entries":
        return f"sw-entries {a[0]} {a[1]}"
    if k == "sw-value":
        return f"sw-value {a[0]} {lincomb_to_str(a[1])} {_linexpr_compact(a[2])}"
    if k == "sw-value-set":
        vals = ",".join(_linexpr_compact(v) for v in a[2])
        return f"sw-value-set {a[0]} {lincomb_to_str(a[1])} {vals}"
    if k == "sw-unverified":
        return f"sw-unverified {a[0]} {lincomb_to_str(a[1])}"
    if k == "sw-restriction":
        return f"sw-restriction {a[0]} {lincomb_to_str(a[1])} {hirzebruch.chain_to_str(a[2])}"
    if k == "sw-minimal":
        return f"sw-minimal {a[0]} {a[1]}"
    raise TypeError(f"unknown assertion kind {k!r}")


def print_scenario(s: Scenario) -> str:
    return "\n".join(print_directive(d) for d in s.directives) + "\n"


# --- running -----------------------------------------------------------------

@dataclass(frozen=True)
class AssertionRecord:
    description: str
    expected: str
    actual: str
    passed: bool


@dataclass(frozen=True)
class Report:
    scenario: str
    records: tuple[AssertionRecord, ...]

    @property
    def total(self) -> int:
        return len(self.records)

    @property
    def passed(self) -> int:
        return sum(1 for r in self.records if r.passed)

    @property
    def all_passed(self) -> bool:
        return self.passed == self.total

    def to_text(self) -> str:
        lines = [f"scenario {self.scenario}"]
        for i, r in enumerate(self.records, start=1):
            status = "PASS" if r.passed else "FAIL"
            lines.append(
                f"  [{i:>2}] {status} {r.description} | expected {r.expected} | actual {r.actual}"
            )
        lines.append(f"  summary: {self.passed}/{self.total} assertions passed")
        return "\n".join(lines)

    def to_json_obj(self) -> dict:
        return {
            "scenario": self.scenario,
            "assertions": [
                {
                    "description": r.description,
                    "expected": r.expected,
                    "actual": r.actual,
                    "pass": r.passed,
                }
                for r in self.records
            ],
            "passed": self.passed,
            "total": self.total,
        }


@dataclass
class _ChainRec:
    weights: tuple[int, ...]
    curve_names: tuple[str, ...]
    classes: tuple[tuple[int, ...], ...]
    basis: tuple[str, ...]
    gram: tuple[tuple[int, ...], ...]


@dataclass
class _SwRec:
    ledger: swledger.Ledger
    fiber_vec: tuple[int, ...]
    gen_names: tuple[str, ...]
    result: swledger.BlowdownResult | None = None


def _pad(vec, rank):
    if len(vec) > rank:
        raise ValueError("class vector longer than lattice rank")
    return tuple(vec) + (0,) * (rank - len(vec))


class _Runner:
    def __init__(self, scenario: Scenario):
        self.scenario = scenario
        self.cfg: homcalc.CurveConfig | None = None
        self.live_basis: tuple[str, ...] = ()
        self.live_gram: tuple[tuple[int, ...], ...] = ()
        self.chains: dict[str, _ChainRec] = {}
        self.mcgs: dict[str, mcg.FibrationReport] = {}
        self.sw: dict[str, _SwRec] = {}
        self.records: list[AssertionRecord] = []

    def run(self) -> Report:
        for d in self.scenario.directives:
            try:
                self._exec(d)
            except ScenarioError:
                raise
            except (ValueError, KeyError) as exc:
                msg = exc.args[0] if exc.args else str(exc)
                raise ScenarioError(f"line {d.lineno}: {msg}") from exc
        return Report(scenario=self.scenario.name, records=tuple(self.records))

    def _sync_lattice(self):
        if self.cfg is not None and self.cfg.ambient.basis:
            self.live_basis = self.cfg.ambient.basis
            self.live_gram = self.cfg.ambient.gram

    def _class_vec(self, lc: Lincomb) -> tuple[int, ...]:
        """Resolve a linear combination of generators and/or curve names."""
        rank = len(self.live_basis)
        index = {name: i for i, name in enumerate(self.live_basis)}
        vec = [0] * rank
        for coef, name in lc:
            if name in index:
                vec[index[name]] += coef
            elif self.cfg is not None and self.cfg.has_curve(name):
                for i, x in enumerate(_pad(self.cfg.curve(name).cls, rank)):
                    vec[i] += coef * x
            else:
                raise ValueError(f"unknown class name {name!r}")
        return tuple(vec)

    def _exec(self, d) -> None:
        if isinstance(d, AmbientDecl):
            rank = len(d.basis)
            amb = homcalc.Ambient(
                basis=d.basis,
                gram=tuple((0,) * rank for _ in range(rank)),
                e=d.e,
                sigma=d.sigma,
                label=d.label,
                flags=frozenset(d.flags),
            )
            self.cfg = homcalc.CurveConfig(ambient=amb)
        elif isinstance(d, PairDecl):
            amb = self.cfg.ambient
            i, j = amb.basis.index(d.g1), amb.basis.index(d.g2)
            gram = [list(row) for row in amb.gram]
            gram[i][j] = gram[j][i] = d.value
            amb = homcalc.Ambient(
                basis=amb.basis, gram=tuple(tuple(r) for r in gram),
                e=amb.e, sigma=amb.sigma, label=amb.label, flags=amb.flags,
            )
            self.cfg = homcalc.CurveConfig(ambient=amb, curves=self.cfg.curves)
        elif isinstance(d, CurveDecl):
            vec = self._class_vec(d.cls)
            self.cfg = homcalc.add_curve(
                self.cfg, homcalc.Curve(d.name, vec, d.genus, d.dp)
            )
        elif isinstance(d, BlowupStep):
            self.cfg = homcalc.blow_up(self.cfg, d.name, d.at, d.doublepoint)
        elif isinstance(d, SmoothStep):
            self.cfg = homcalc.smooth(self.cfg, d.name, d.c1, d.c2)
        elif isinstance(d, SurgeryStep):
            self.cfg = homcalc.knot_surgery_shadow(self.cfg, d.label, d.flags)
        elif isinstance(d, ChainDecl):
            weights = homcalc.extract_chain(self.cfg, d.curves)
            classes = tuple(self.cfg.curve(c).cls for c in d.curves)
            self.chains[d.name] = _ChainRec(
                weights=weights,
                curve_names=d.curves,
                classes=classes,
                basis=self.cfg.ambient.basis,
                gram=self.cfg.ambient.gram,
            )
        elif isinstance(d, BlowdownStep):
            rec = self.chains[d.chain]
            cfg_for_chain = self.cfg
            amb = homcalc.rational_blowdown(cfg_for_chain, rec.curve_names, d.label)
            self.cfg = homcalc.CurveConfig(ambient=amb)
        elif isinstance(d, McgStep):
            twists = tuple(spec.to_twist() for spec in d.twists)
            self.mcgs[d.name] = mcg.verify_fibration(twists, d.expected)
        elif isinstance(d, SwLedgerStep):
            fiber_vec = self._class_vec(d.fiber)
            fsq = homcalc.pair_vectors(self.live_gram, fiber_vec, fiber_vec)
            if fsq != 0:
                raise ScenarioError(
                    f"line {d.lineno}: fiber class squares to {fsq}, expected 0"
                )
            polys = [swledger.alexander_twist(k) for k in d.knots]
            ledger = swledger.knot_surgery_ledger(polys, label=d.name, e=d.e, sigma=d.sigma)
            self.sw[d.name] = _SwRec(ledger=ledger, fiber_vec=fiber_vec, gen_names=())
        elif isinstance(d, SwBlowupsStep):
            src = self.sw[d.source]
            ledger = swledger.blow_up_ledger(src.ledger, len(d.gens), d.gens)
            self.sw[d.name] = _SwRec(
                ledger=ledger, fiber_vec=src.fiber_vec,
                gen_names=src.gen_names + d.gens,
            )
        elif isinstance(d, SwBlowdownStep):
            self._exec_sw_blowdown(d)
        elif isinstance(d, AssertStep):
            self.records.append(self._evaluate(d))
            return
        else:  # pragma: no cover
            raise TypeError(f"unknown directive {d!r}")
        self._sync_lattice()

    def _exec_sw_blowdown(self, d: SwBlowdownStep) -> None:
        src = self.sw[d.source]
        rec = self.chains[d.chain]
        rank = len(rec.basis)
        index = {name: i for i, name in enumerate(rec.basis)}
        gen_vectors = [_pad(src.fiber_vec, rank)]
        for g in src.gen_names:
            if g not in index:
                raise ScenarioError(
                    f"line {d.lineno}: tracked class {g!r} is not in the chain's lattice"
                )
            unit = [0] * rank
            unit[index[g]] = 1
            gen_vectors.append(tuple(unit))
        pairings = [
            swledger.restrict_to_chain(gv, rec.classes, rec.gram) for gv in gen_vectors
        ]
        label = d.label
        if d.chambered:
            result = swledger.chambered_blowdown_ledger(
                src.ledger, rec.weights, pairings, new_label=label
            )
        else:
            result = swledger.rational_blowdown_ledger(
                src.ledger, rec.weights, pairings, corrections=(True, True), new_label=label
            )
        self.sw[d.name] = _SwRec(
            ledger=result.ledger, fiber_vec=src.fiber_vec,
            gen_names=src.gen_names, result=result,
        )

    # --- assertions ---

    def _evaluate(self, d: AssertStep) -> AssertionRecord:
        k, a = d.kind, d.args
        if k == "chain":
            rec = self.chains[a[0]]
            expected = hirzebruch.chain_to_str(a[1])
            actual = hirzebruch.chain_to_str(rec.weights)
            return AssertionRecord(f"chain {a[0]} weights", expected, actual,
                                   rec.weights == a[1])
        if k == "identify":
            rec = self.chains[a[0]]
            got = hirzebruch.identify_cpq(rec.weights)
            expected = f"C_{{{a[1]},{a[2]}}}"
            actual = f"C_{{{got[0]},{got[1]}}}" if got else "none"
            return AssertionRecord(f"chain {a[0]} identified", expected, actual,
                                   got == (a[1], a[2]))
        if k == "euler":
            actual = self.cfg.ambient.e
            return AssertionRecord("euler characteristic", str(a[0]), str(actual),
                                   actual == a[0])
        if k == "signature":
            actual = self.cfg.ambient.sigma
            return AssertionRecord("signature", str(a[0]), str(actual), actual == a[0])
        if k == "label":
            actual = self.cfg.ambient.label
            return AssertionRecord("manifold label", a[0], actual, actual == a[0])
        if k == "fingerprint":
            got = homcalc.homeo_fingerprint(self.cfg.ambient)
            expected = a[0] if a[0] is not None else "none"
            actual = got if got is not None else "none"
            return AssertionRecord("homeomorphism fingerprint", expected, actual,
                                   got == a[0])
        if k == "pairing":
            got = homcalc.pairing(self.cfg, a[0], a[1])
            return AssertionRecord(f"pairing {a[0]}.{a[1]}", str(a[2]), str(got),
                                   got == a[2])
        if k == "square":
            got = homcalc.square(self.cfg, a[0])
            return AssertionRecord(f"square of {a[0]}", str(a[1]), str(got), got == a[1])
        if k == "square-class":
            vec = self._class_vec(a[0])
            got = homcalc.pair_vectors(self.live_gram, vec, vec)
            return AssertionRecord(f"square of class {lincomb_to_str(a[0])}",
                                   str(a[1]), str(got), got == a[1])
        if k == "dp":
            got = self.cfg.curve(a[0]).double_points
            return AssertionRecord(f"double points of {a[0]}", str(a[1]), str(got),
                                   got == a[1])
        if k == "mcg-pass":
            rep = self.mcgs[a[0]]
            actual = (
                "pass" if rep.passed
                else f"fail (identity={rep.is_identity}, twists={rep.twist_count})"
            )
            return AssertionRecord(f"mcg {a[0]} verifies as a fibration word",
                                   "pass", actual, rep.passed)
        if k == "mcg-cycles-equal":
            rep = self.mcgs[a[0]]
            i, j = a[1], a[2]
            if not (1 <= i <= len(rep.cycles) and 1 <= j <= len(rep.cycles)):
                return AssertionRecord(
                    f"mcg {a[0]} vanishing cycles {i} and {j} isotopic",
                    "equal", f"index out of range (1..{len(rep.cycles)})", False,
                )
            ci, cj = rep.cycles[i - 1], rep.cycles[j - 1]
            return AssertionRecord(
                f"mcg {a[0]} vanishing cycles {i} and {j} isotopic",
                "equal", f"{ci} vs {cj}", ci == cj,
            )
        if k == "mcg-word-equal":
            rep = self.mcgs[a[0]]
            ok = mcg.words_equal_in_group(rep.word, a[1])
            return AssertionRecord(
                f"mcg {a[0]} word equals {_compact_word(a[1])} in the group",
                "equal", "equal" if ok else f"distinct (word is {mcg.word_to_str(rep.word)})",
                ok,
            )
        if k == "sw-entries":
            ledger = self.sw[a[0]].ledger
            got = len(ledger.entries)
            return AssertionRecord(f"sw {a[0]} entry count", str(a[1]), str(got),
                                   got == a[1])
        if k == "sw-value":
            ledger = self.sw[a[0]].ledger
            vec = resolve_lincomb(a[1], ledger.basis)
            expected = str(a[2])
            if not ledger.has_entry(vec):
                return AssertionRecord(
                    f"sw {a[0]} value at {lincomb_to_str(a[1])}", expected, "absent", False
                )
            got = ledger.entry(vec).value
            return AssertionRecord(
                f"sw {a[0]} value at {lincomb_to_str(a[1])}", expected, str(got),
                got == a[2],
            )
        if k == "sw-value-set":
            rec = self.sw[a[0]]
            ledger = rec.ledger
            vec = resolve_lincomb(a[1], ledger.basis)
            expected = ", ".join(str(v) for v in a[2])
            try:
                got = tuple(sorted(rec.result.value_set_of(vec)))
            except KeyError:
                return AssertionRecord(
                    f"sw {a[0]} value set at {lincomb_to_str(a[1])}", expected, "absent",
                    False,
                )
            actual = ", ".join(str(v) for v in got)
            return AssertionRecord(
                f"sw {a[0]} value set at {lincomb_to_str(a[1])}", expected, actual,
                got == a[2],
            )
        if k == "sw-unverified":
            ledger = self.sw[a[0]].ledger
            vec = resolve_lincomb(a[1], ledger.basis)
            if not ledger.has_entry(vec):
                return AssertionRecord(
                    f"sw {a[0]} entry {lincomb_to_str(a[1])} marked unverified",
                    "unverified", "absent", False,
                )
            got = ledger.entry(vec).verified
            return AssertionRecord(
                f"sw {a[0]} entry {lincomb_to_str(a[1])} marked unverified",
                "unverified", "verified" if got else "unverified", not got,
            )
        if k == "sw-restriction":
            rec = self.sw[a[0]]
            ledger = rec.ledger
            vec = resolve_lincomb(a[1], ledger.basis)
            expected = hirzebruch.chain_to_str(a[2])
            try:
                got = rec.result.restriction_of(vec)
            except KeyError:
                return AssertionRecord(
                    f"sw {a[0]} restriction of {lincomb_to_str(a[1])}", expected,
                    "absent", False,
                )
            return AssertionRecord(
                f"sw {a[0]} restriction of {lincomb_to_str(a[1])}", expected,
                hirzebruch.chain_to_str(got), got == a[2],
            )
        if k == "sw-minimal":
            ledger = self.sw[a[0]].ledger
            got = swledger.minimality_report(swledger.substitute(ledger, a[1]))
            return AssertionRecord(
                f"sw {a[0]} minimality at n={a[1]}", "minimal",
                "minimal" if got else "not established", got,
            )
        raise TypeError(f"unknown assertion kind {k!r}")  # pragma: no cover


def run_scenario(s: Scenario) -> Report:
    return _Runner(s).run()
