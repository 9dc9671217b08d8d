"""Line-oriented text format for groups, embeddings, amalgams, and words.

One statement per line:

    group <name> = perm <degree> { <cycles>; <cycles>; ... }
    group <name> = cyclic <n>
    group <name> = free-abelian <r>
    group <name> = abelian [d1,d2,...]
    embed <name> : <C> -> <G> { g<i> -> <element-expr>; ... }
    amalgam <name> = <G1>, <G2> [, ...] over <C> via <e1>, <e2> [, ...]
    word <name> in <amalgam> = <factor>:<element-expr> ( * <factor>:<element-expr> )*

Element expressions are products of atoms, each an optionally powered
generator symbol (g, g1, g2, ...), cycle (permutation groups only), or the
identity symbol e. Word syllables name their factor either by group name
(which must occur exactly once among the factors) or by 0-based position.
Blank lines and ``#`` comments are ignored. In ``abelian [...]`` literals
the torsion divisors (>= 2) must precede the free markers (0) so that
generator numbers match coordinates.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import (
    EmbeddingTypeMismatch,
    NotAHomomorphism,
    ParseError,
    ResolutionError,
    WordTooLong,
)
from .groups import (
    FiniteGroup,
    cycle_label,
    cyclic_group,
    group_from_permutations,
    hom_from_generator_images,
    perm_from_cycles,
)
from .lattice import FGAbelian, IntMatrix
from .words import AmalgamSpec

MAX_WORD_SYLLABLES = 64

_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t]+)"
    r"|(?P<comment>#.*)"
    r"|(?P<arrow>->)"
    r"|(?P<num>-?\d+)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*(?:-[A-Za-z_][A-Za-z0-9_]*)*)"
    r"|(?P<punct>[={}()\[\],;:*^])"
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


@dataclass(frozen=True)
class Atom:
    """One factor of an element expression, with its exponent."""

    kind: str  # "gen" | "cycle" | "identity"
    index: int = 0  # 1-based generator number, for kind "gen"
    points: tuple = ()  # 1-based points, for kind "cycle"
    power: int = 1


@dataclass(frozen=True)
class ElementExpr:
    atoms: tuple


@dataclass(frozen=True)
class GroupDecl:
    name: str
    kind: str  # "perm" | "cyclic" | "free-abelian" | "abelian"
    degree: int = 0
    order: int = 0
    rank: int = 0
    divisors: tuple = ()
    generators: tuple = ()  # per generator: tuple of cycles (point tuples)

    def generator_count(self) -> int:
        if self.kind == "perm":
            return len(self.generators)
        if self.kind == "cyclic":
            return 1
        if self.kind == "free-abelian":
            return self.rank
        return len(self.divisors)


@dataclass(frozen=True)
class EmbedDecl:
    name: str
    source: str
    target: str
    images: tuple  # ordered (generator number, ElementExpr) pairs


@dataclass(frozen=True)
class AmalgamDecl:
    name: str
    factors: tuple
    amalgam: str
    embeds: tuple


@dataclass(frozen=True)
class WordDecl:
    name: str
    amalgam: str
    syllables: tuple  # (("name", str) | ("index", int), ElementExpr) pairs


@dataclass(frozen=True)
class SpecFile:
    declarations: tuple = ()

    def by_name(self, name: str):
        for d in self.declarations:
            if d.name == name:
                return d
        return None


class _Cursor:
    """Token stream over one statement line."""

    def __init__(self, tokens, line: int, length: int):
        self.tokens = tokens
        self.pos = 0
        self.line = line
        self.end_col = length + 1

    def peek(self) -> Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self, expected: str) -> Token:
        tok = self.peek()
        if tok is None:
            raise ParseError(
                f"unexpected end of line, expected {expected}",
                self.line,
                self.end_col,
                expected=expected,
            )
        self.pos += 1
        return tok

    def expect(self, text: str) -> Token:
        tok = self.next(repr(text))
        if tok.text != text:
            raise ParseError(
                f"expected {text!r}, found {tok.text!r}",
                tok.line,
                tok.col,
                expected=text,
            )
        return tok

    def expect_ident(self, what: str) -> Token:
        tok = self.next(what)
        if tok.kind != "ident":
            raise ParseError(
                f"expected {what}, found {tok.text!r}", tok.line, tok.col, expected=what
            )
        return tok

    def expect_number(self, what: str) -> int:
        tok = self.next(what)
        if tok.kind != "num":
            raise ParseError(
                f"expected {what}, found {tok.text!r}", tok.line, tok.col, expected=what
            )
        return int(tok.text)

    def at_end(self) -> bool:
        return self.pos >= len(self.tokens)

    def require_end(self):
        tok = self.peek()
        if tok is not None:
            raise ParseError(
                f"trailing input {tok.text!r}", tok.line, tok.col, expected="end of line"
            )


def _tokenize_line(text: str, line_no: int):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(
                f"unrecognized character {text[pos]!r}", line_no, pos + 1, expected="token"
            )
        kind = m.lastgroup
        if kind not in ("ws", "comment"):
            tokens.append(Token(kind, m.group(), line_no, pos + 1))
        pos = m.end()
    return tokens


def _parse_gen_symbol(tok: Token, gen_count: int) -> int:
    m = re.fullmatch(r"g(\d*)", tok.text)
    if m is None:
        raise ParseError(
            f"expected a generator symbol, found {tok.text!r}",
            tok.line,
            tok.col,
            expected="g1..g%d" % gen_count,
        )
    idx = int(m.group(1)) if m.group(1) else 1
    if not 1 <= idx <= gen_count:
        raise ParseError(
            f"generator {tok.text} out of range (the group declares {gen_count})",
            tok.line,
            tok.col,
            expected="g1..g%d" % gen_count,
        )
    return idx


def _parse_cycle(cur: _Cursor, decl: GroupDecl) -> tuple:
    open_tok = cur.expect("(")
    if decl.kind != "perm":
        raise ParseError(
            "cycle notation is only valid in permutation groups",
            open_tok.line,
            open_tok.col,
            expected="generator symbol",
        )
    points = []
    while True:
        tok = cur.next("a point or ')'")
        if tok.text == ")":
            break
        if tok.kind != "num":
            raise ParseError(
                f"expected a point, found {tok.text!r}", tok.line, tok.col, expected="integer"
            )
        p = int(tok.text)
        if not 1 <= p <= decl.degree:
            raise ParseError(
                f"point {p} outside degree {decl.degree}",
                tok.line,
                tok.col,
                expected=f"1..{decl.degree}",
            )
        points.append(p)
    return tuple(points)


def _parse_power(cur: _Cursor) -> int:
    tok = cur.peek()
    if tok is None or tok.text != "^":
        return 1
    cur.next("'^'")
    return cur.expect_number("an exponent")


_EXPR_STOP = {";", "}", "*"}


def _parse_element_expr(cur: _Cursor, decl: GroupDecl) -> ElementExpr:
    atoms = []
    while True:
        tok = cur.peek()
        if tok is None or tok.text in _EXPR_STOP:
            break
        if tok.text == "(":
            points = _parse_cycle(cur, decl)
            atoms.append(Atom("cycle", points=points, power=_parse_power(cur)))
        elif tok.kind == "ident" and tok.text == "e":
            cur.next("identity")
            atoms.append(Atom("identity", power=_parse_power(cur)))
        elif tok.kind == "ident":
            idx = _parse_gen_symbol(cur.next("generator"), decl.generator_count())
            atoms.append(Atom("gen", index=idx, power=_parse_power(cur)))
        else:
            raise ParseError(
                f"unexpected {tok.text!r} in element expression",
                tok.line,
                tok.col,
                expected="generator, cycle, or 'e'",
            )
    if not atoms:
        tok = cur.peek()
        line = tok.line if tok else cur.line
        col = tok.col if tok else cur.end_col
        raise ParseError("empty element expression", line, col, expected="an atom")
    return ElementExpr(tuple(atoms))


def _parse_group(cur: _Cursor) -> GroupDecl:
    name = cur.expect_ident("a group name").text
    cur.expect("=")
    kind_tok = cur.expect_ident("perm, cyclic, free-abelian, or abelian")
    kind = kind_tok.text
    if kind == "perm":
        degree = cur.expect_number("a degree")
        if degree < 1:
            raise ParseError(
                f"degree {degree} must be positive", kind_tok.line, kind_tok.col
            )
        cur.expect("{")
        shell = GroupDecl(name, "perm", degree=degree)
        generators = []
        while True:
            tok = cur.peek()
            if tok is not None and tok.text == "}":
                cur.next("'}'")
                break
            cycles = []
            while cur.peek() is not None and cur.peek().text == "(":
                cycles.append(_parse_cycle(cur, shell))
            if not cycles:
                tok = cur.next("a cycle")
                raise ParseError(
                    f"expected a cycle, found {tok.text!r}",
                    tok.line,
                    tok.col,
                    expected="(p1 p2 ...)",
                )
            generators.append(tuple(cycles))
            tok = cur.peek()
            if tok is not None and tok.text == ";":
                cur.next("';'")
        cur.require_end()
        return GroupDecl(name, "perm", degree=degree, generators=tuple(generators))
    if kind == "cyclic":
        n = cur.expect_number("an order")
        cur.require_end()
        if n < 1:
            raise ParseError(f"order {n} must be positive", kind_tok.line, kind_tok.col)
        return GroupDecl(name, "cyclic", order=n)
    if kind == "free-abelian":
        r = cur.expect_number("a rank")
        cur.require_end()
        if r < 0:
            raise ParseError(f"rank {r} must be nonnegative", kind_tok.line, kind_tok.col)
        return GroupDecl(name, "free-abelian", rank=r)
    if kind == "abelian":
        cur.expect("[")
        divisors = []
        while True:
            tok = cur.next("a divisor or ']'")
            if tok.text == "]":
                break
            if tok.kind != "num":
                raise ParseError(
                    f"expected a divisor, found {tok.text!r}",
                    tok.line,
                    tok.col,
                    expected="integer",
                )
            d = int(tok.text)
            if d != 0 and d < 2:
                raise ParseError(
                    f"divisor {d} must be 0 (a free factor) or at least 2",
                    tok.line,
                    tok.col,
                )
            divisors.append(d)
            tok = cur.peek()
            if tok is not None and tok.text == ",":
                cur.next("','")
        for i in range(1, len(divisors)):
            if divisors[i] != 0 and divisors[i - 1] == 0:
                raise ParseError(
                    "torsion divisors must precede free factors (0 entries)",
                    cur.line,
                    1,
                )
        cur.require_end()
        return GroupDecl(name, "abelian", divisors=tuple(divisors))
    raise ParseError(
        f"unknown group kind {kind!r}",
        kind_tok.line,
        kind_tok.col,
        expected="perm, cyclic, free-abelian, or abelian",
    )


def _parse_embed(cur: _Cursor, groups: dict) -> EmbedDecl:
    name = cur.expect_ident("an embedding name").text
    cur.expect(":")
    source = cur.expect_ident("the amalgam group name").text
    if source not in groups:
        raise ResolutionError(f"unknown group {source!r}", name=source)
    arrow = cur.next("'->'")
    if arrow.kind != "arrow":
        raise ParseError(
            f"expected '->', found {arrow.text!r}", arrow.line, arrow.col, expected="->"
        )
    target = cur.expect_ident("the factor group name").text
    if target not in groups:
        raise ResolutionError(f"unknown group {target!r}", name=target)
    src_decl = groups[source]
    tgt_decl = groups[target]
    cur.expect("{")
    images = []
    seen = set()
    while True:
        tok = cur.peek()
        if tok is not None and tok.text == "}":
            cur.next("'}'")
            break
        gen_tok = cur.expect_ident("a source generator")
        idx = _parse_gen_symbol(gen_tok, src_decl.generator_count())
        if idx in seen:
            raise ParseError(
                f"generator g{idx} mapped twice", gen_tok.line, gen_tok.col
            )
        seen.add(idx)
        arrow = cur.next("'->'")
        if arrow.kind != "arrow":
            raise ParseError(
                f"expected '->', found {arrow.text!r}",
                arrow.line,
                arrow.col,
                expected="->",
            )
        images.append((idx, _parse_element_expr(cur, tgt_decl)))
        tok = cur.peek()
        if tok is not None and tok.text == ";":
            cur.next("';'")
    cur.require_end()
    missing = sorted(set(range(1, src_decl.generator_count() + 1)) - seen)
    if missing:
        raise ParseError(
            f"no image for generator(s) g{', g'.join(str(m) for m in missing)}",
            cur.line,
            cur.end_col,
        )
    return EmbedDecl(name, source, target, tuple(images))


def _parse_amalgam(cur: _Cursor, groups: dict, embeds: set) -> AmalgamDecl:
    name = cur.expect_ident("an amalgam name").text
    cur.expect("=")
    factors = [cur.expect_ident("a factor group name").text]
    while cur.peek() is not None and cur.peek().text == ",":
        cur.next("','")
        factors.append(cur.expect_ident("a factor group name").text)
    over = cur.expect_ident("'over'")
    if over.text != "over":
        raise ParseError(
            f"expected 'over', found {over.text!r}", over.line, over.col, expected="over"
        )
    amalgam = cur.expect_ident("the amalgam group name").text
    via = cur.expect_ident("'via'")
    if via.text != "via":
        raise ParseError(
            f"expected 'via', found {via.text!r}", via.line, via.col, expected="via"
        )
    embed_names = [cur.expect_ident("an embedding name").text]
    while cur.peek() is not None and cur.peek().text == ",":
        cur.next("','")
        embed_names.append(cur.expect_ident("an embedding name").text)
    cur.require_end()
    for g in factors + [amalgam]:
        if g not in groups:
            raise ResolutionError(f"unknown group {g!r}", name=g)
    for e in embed_names:
        if e not in embeds:
            raise ResolutionError(f"unknown embedding {e!r}", name=e)
    return AmalgamDecl(name, tuple(factors), amalgam, tuple(embed_names))


def _parse_word(cur: _Cursor, groups: dict, amalgams: dict) -> WordDecl:
    name = cur.expect_ident("a word name").text
    kw = cur.expect_ident("'in'")
    if kw.text != "in":
        raise ParseError(f"expected 'in', found {kw.text!r}", kw.line, kw.col, expected="in")
    amalgam = cur.expect_ident("an amalgam name").text
    if amalgam not in amalgams:
        raise ResolutionError(f"unknown amalgam {amalgam!r}", name=amalgam)
    decl = amalgams[amalgam]
    cur.expect("=")
    syllables = []
    while True:
        tok = cur.next("a factor reference")
        if tok.kind == "num":
            idx = int(tok.text)
            if not 0 <= idx < len(decl.factors):
                raise ParseError(
                    f"factor index {idx} out of range", tok.line, tok.col,
                    expected=f"0..{len(decl.factors) - 1}",
                )
            ref = ("index", idx)
            factor_decl = groups[decl.factors[idx]]
        elif tok.kind == "ident":
            hits = [i for i, f in enumerate(decl.factors) if f == tok.text]
            if not hits:
                raise ResolutionError(
                    f"{tok.text!r} is not a factor of {amalgam!r}", name=tok.text
                )
            if len(hits) > 1:
                raise ResolutionError(
                    f"{tok.text!r} occurs {len(hits)} times among the factors; "
                    "use a 0-based index instead",
                    name=tok.text,
                )
            ref = ("name", tok.text)
            factor_decl = groups[tok.text]
        else:
            raise ParseError(
                f"expected a factor reference, found {tok.text!r}",
                tok.line,
                tok.col,
                expected="group name or index",
            )
        cur.expect(":")
        syllables.append((ref, _parse_element_expr(cur, factor_decl)))
        if len(syllables) > MAX_WORD_SYLLABLES:
            raise WordTooLong(
                f"words are capped at {MAX_WORD_SYLLABLES} syllables",
                cap=MAX_WORD_SYLLABLES,
            )
        tok = cur.peek()
        if tok is None:
            break
        if tok.text != "*":
            raise ParseError(
                f"expected '*' between syllables, found {tok.text!r}",
                tok.line,
                tok.col,
                expected="*",
            )
        cur.next("'*'")
    return WordDecl(name, amalgam, tuple(syllables))


def parse(text: str) -> SpecFile:
    """Parse a complete spec file; every reference must precede its use."""
    decls = []
    groups: dict[str, GroupDecl] = {}
    embeds: set[str] = set()
    amalgams: dict[str, AmalgamDecl] = {}
    names: set[str] = set()
    for line_no, raw in enumerate(text.splitlines(), start=1):
        tokens = _tokenize_line(raw, line_no)
        if not tokens:
            continue
        cur = _Cursor(tokens, line_no, len(raw))
        head = cur.next("a statement")
        if head.kind != "ident" or head.text not in ("group", "embed", "amalgam", "word"):
            raise ParseError(
                f"unknown statement {head.text!r}",
                head.line,
                head.col,
                expected="group, embed, amalgam, or word",
            )
        if head.text == "group":
            decl = _parse_group(cur)
        elif head.text == "embed":
            decl = _parse_embed(cur, groups)
        elif head.text == "amalgam":
            decl = _parse_amalgam(cur, groups, embeds)
        else:
            decl = _parse_word(cur, groups, amalgams)
        if decl.name in names:
            raise ParseError(
                f"name {decl.name!r} already declared", head.line, head.col
            )
        names.add(decl.name)
        decls.append(decl)
        if isinstance(decl, GroupDecl):
            groups[decl.name] = decl
        elif isinstance(decl, EmbedDecl):
            embeds.add(decl.name)
        elif isinstance(decl, AmalgamDecl):
            amalgams[decl.name] = decl
    return SpecFile(tuple(decls))


# -------------------------------------------------------------- formatting


def _format_cycle(points) -> str:
    return "(" + " ".join(str(p) for p in points) + ")"


def _format_atom(atom: Atom) -> str:
    if atom.kind == "gen":
        base = f"g{atom.index}"
    elif atom.kind == "identity":
        base = "e"
    else:
        base = _format_cycle(atom.points)
    return base if atom.power == 1 else f"{base}^{atom.power}"


def _format_expr(expr: ElementExpr) -> str:
    return " ".join(_format_atom(a) for a in expr.atoms)


def format_specfile(sf: SpecFile) -> str:
    """Canonical text whose re-parse equals ``sf``."""
    lines = []
    for d in sf.declarations:
        if isinstance(d, GroupDecl):
            if d.kind == "perm":
                gens = "; ".join(
                    "".join(_format_cycle(c) for c in cycles) for cycles in d.generators
                )
                lines.append(f"group {d.name} = perm {d.degree} {{ {gens} }}")
            elif d.kind == "cyclic":
                lines.append(f"group {d.name} = cyclic {d.order}")
            elif d.kind == "free-abelian":
                lines.append(f"group {d.name} = free-abelian {d.rank}")
            else:
                body = ",".join(str(x) for x in d.divisors)
                lines.append(f"group {d.name} = abelian [{body}]")
        elif isinstance(d, EmbedDecl):
            body = "; ".join(f"g{i} -> {_format_expr(e)}" for i, e in d.images)
            lines.append(f"embed {d.name} : {d.source} -> {d.target} {{ {body} }}")
        elif isinstance(d, AmalgamDecl):
            lines.append(
                f"amalgam {d.name} = {', '.join(d.factors)} "
                f"over {d.amalgam} via {', '.join(d.embeds)}"
            )
        else:
            body = " * ".join(
                f"{ref[1]}:{_format_expr(e)}" for ref, e in d.syllables
            )
            lines.append(f"word {d.name} in {d.amalgam} = {body}")
    return "\n".join(lines) + ("\n" if lines else "")


# -------------------------------------------------------------- resolution


@dataclass
class ResolvedSpec:
    """Semantic objects for every declaration, in declaration order."""

    groups: dict = field(default_factory=dict)
    embeds: dict = field(default_factory=dict)
    amalgams: dict = field(default_factory=dict)
    words: dict = field(default_factory=dict)  # name -> (amalgam name, word)
    source: SpecFile | None = None


def _compose(p, q):
    # (p*q)(x) = p(q(x)), matching the table convention of the groups module
    return tuple(p[x] for x in q)


def _invert(p):
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def _perm_pow(p, k: int):
    if k < 0:
        p, k = _invert(p), -k
    out = tuple(range(len(p)))
    for _ in range(k):
        out = _compose(out, p)
    return out


def _perm_element_index(G: FiniteGroup, perm) -> int:
    label = cycle_label(perm)
    try:
        return G.labels.index(label)
    except ValueError:
        raise ResolutionError(
            f"permutation {label} is not an element of {G.name or 'the group'}",
            name=label,
        ) from None


def _finite_generator_elements(decl: GroupDecl, G: FiniteGroup) -> list:
    if decl.kind == "cyclic":
        return [1]
    return [
        _perm_element_index(G, perm_from_cycles(decl.degree, cycles))
        for cycles in decl.generators
    ]


def _eval_finite(expr: ElementExpr, decl: GroupDecl, G: FiniteGroup) -> int:
    if decl.kind == "perm":
        # whole expression composes as permutations, so juxtaposed cycles
        # form one element even when the pieces are not members themselves
        acc = tuple(range(decl.degree))
        for atom in expr.atoms:
            if atom.kind == "identity":
                continue
            if atom.kind == "gen":
                base = perm_from_cycles(decl.degree, decl.generators[atom.index - 1])
            else:
                base = perm_from_cycles(decl.degree, [atom.points])
            acc = _compose(acc, _perm_pow(base, atom.power))
        return _perm_element_index(G, acc)
    out = G.identity
    for atom in expr.atoms:
        if atom.kind != "gen":
            continue
        out = G.mul(out, G.power(1, atom.power))
    return out


def _eval_abelian(expr: ElementExpr, A: FGAbelian) -> tuple:
    v = [0] * A.ngens
    for atom in expr.atoms:
        if atom.kind == "identity":
            continue
        # cycle atoms cannot reach here: the parser pins them to perm groups
        v[atom.index - 1] += atom.power
    return A.canon(v)


def _build_group(decl: GroupDecl):
    if decl.kind == "perm":
        gens = [perm_from_cycles(decl.degree, cycles) for cycles in decl.generators]
        return group_from_permutations(decl.degree, gens, name=decl.name)
    if decl.kind == "cyclic":
        return cyclic_group(decl.order, name=decl.name)
    if decl.kind == "free-abelian":
        return FGAbelian(decl.rank, ())
    torsion = tuple(d for d in decl.divisors if d != 0)
    free_rank = sum(1 for d in decl.divisors if d == 0)
    return FGAbelian(free_rank, torsion)


def _build_embed(decl: EmbedDecl, ctx: ResolvedSpec, sf: SpecFile):
    src_decl = sf.by_name(decl.source)
    tgt_decl = sf.by_name(decl.target)
    C = ctx.groups[decl.source]
    G = ctx.groups[decl.target]
    exprs = dict(decl.images)
    if isinstance(C, FiniteGroup) and isinstance(G, FiniteGroup):
        gen_elems = _finite_generator_elements(src_decl, C)
        mapping: dict[int, int] = {}
        for i, e in exprs.items():
            key = gen_elems[i - 1]
            img = _eval_finite(e, tgt_decl, G)
            if key in mapping and mapping[key] != img:
                raise NotAHomomorphism(
                    f"generators g{i} and an earlier one are the same element "
                    "but map differently"
                )
            mapping[key] = img
        return hom_from_generator_images(C, G, mapping)
    if isinstance(C, FGAbelian) and isinstance(G, FGAbelian):
        cols = [
            list(_eval_abelian(exprs[i], G)) for i in range(1, C.ngens + 1)
        ]
        return IntMatrix.from_columns(cols, rows=G.ngens)
    if isinstance(C, FGAbelian) and isinstance(G, FiniteGroup):
        if C.ngens == 0:
            return None
        raise EmbeddingTypeMismatch(
            "an abelian group with generators cannot embed into a finite factor"
        )
    raise EmbeddingTypeMismatch(
        "a finite amalgam group cannot embed into an abelian factor"
    )


def resolve(sf: SpecFile) -> ResolvedSpec:
    """Build groups, homomorphisms, amalgams, and words from a parse tree."""
    ctx = ResolvedSpec(source=sf)
    for decl in sf.declarations:
        if isinstance(decl, GroupDecl):
            ctx.groups[decl.name] = _build_group(decl)
        elif isinstance(decl, EmbedDecl):
            ctx.embeds[decl.name] = _build_embed(decl, ctx, sf)
        elif isinstance(decl, AmalgamDecl):
            ctx.amalgams[decl.name] = AmalgamSpec(
                [ctx.groups[f] for f in decl.factors],
                ctx.groups[decl.amalgam],
                [ctx.embeds[e] for e in decl.embeds],
            )
        else:
            adecl = sf.by_name(decl.amalgam)
            word = []
            for ref, expr in decl.syllables:
                idx = ref[1] if ref[0] == "index" else adecl.factors.index(ref[1])
                fname = adecl.factors[idx]
                fdecl = sf.by_name(fname)
                F = ctx.groups[fname]
                if isinstance(F, FiniteGroup):
                    word.append((idx, _eval_finite(expr, fdecl, F)))
                else:
                    word.append((idx, _eval_abelian(expr, F)))
            ctx.words[decl.name] = (decl.amalgam, word)
    return ctx
