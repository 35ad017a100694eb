"""Static syntax checker for NetLogo code chunks.

Dictionary-driven approximation of the compiler's front end, not a full
type/context checker. A first pass collects declared procedure, local,
global, breed and *-own names; rule functions then report findings
against the token stream. Rules are pluggable: a rule is a callable
``(LintContext) -> Iterable[Finding]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable

from .clarify import Clarifier, ClarifyContext
from .dictionary import KEYWORDS, Dictionary
from .tokens import Token, TokenKind, tokenize

SEVERITY_ERROR = "error"
SEVERITY_WARNING = "warning"

_DECLARATION_BLOCKS = frozenset(
    {"globals", "turtles-own", "patches-own", "links-own", "extensions", "__includes"}
)


@dataclass(frozen=True, slots=True)
class Span:
    start_line: int
    start_column: int
    end_line: int
    end_column: int

    @classmethod
    def of_token(cls, token: Token) -> "Span":
        return cls(token.line, token.column, token.line, token.column + len(token.text))

    def to_dict(self) -> dict:
        return {
            "start_line": self.start_line,
            "start_column": self.start_column,
            "end_line": self.end_line,
            "end_column": self.end_column,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "Span":
        return cls(
            obj["start_line"], obj["start_column"], obj["end_line"], obj["end_column"]
        )


@dataclass(frozen=True, slots=True)
class Diagnostic:
    code: str
    severity: str
    span: Span
    raw_message: str
    clarified_message: str
    suggested_doc_ids: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "code": self.code,
            "severity": self.severity,
            "span": self.span.to_dict(),
            "raw_message": self.raw_message,
            "clarified_message": self.clarified_message,
            "suggested_doc_ids": list(self.suggested_doc_ids),
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "Diagnostic":
        return cls(
            code=obj["code"],
            severity=obj["severity"],
            span=Span.from_dict(obj["span"]),
            raw_message=obj["raw_message"],
            clarified_message=obj["clarified_message"],
            suggested_doc_ids=tuple(obj.get("suggested_doc_ids", ())),
        )


@dataclass
class CodeChunk:
    chunk_id: str
    source_text: str
    origin: str  # "llm-generated" | "user-edited"
    diagnostics: list[Diagnostic] = field(default_factory=list)
    revision: int = 1

    def to_dict(self) -> dict:
        return {
            "chunk_id": self.chunk_id,
            "source_text": self.source_text,
            "origin": self.origin,
            "diagnostics": [d.to_dict() for d in self.diagnostics],
            "revision": self.revision,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "CodeChunk":
        return cls(
            chunk_id=obj["chunk_id"],
            source_text=obj["source_text"],
            origin=obj["origin"],
            diagnostics=[Diagnostic.from_dict(d) for d in obj.get("diagnostics", [])],
            revision=obj.get("revision", 1),
        )


@dataclass(frozen=True, slots=True)
class Finding:
    """A rule hit before clarification is attached."""

    code: str
    severity: str
    span: Span
    raw_message: str
    name: str | None = None  # identifier the finding is about, if any


@dataclass(frozen=True)
class LintContext:
    tokens: tuple[Token, ...]  # significant tokens only (no comments/eols)
    declared: frozenset[str]
    dictionary: Dictionary


Rule = Callable[[LintContext], Iterable[Finding]]


def _significant(tokens: list[Token]) -> tuple[Token, ...]:
    return tuple(t for t in tokens if t.kind not in (TokenKind.COMMENT, TokenKind.EOL))


def _breed_derived(plural: str, singular: str) -> list[str]:
    derived = [
        plural,
        singular,
        f"create-{plural}",
        f"create-ordered-{plural}",
        f"hatch-{plural}",
        f"sprout-{plural}",
        f"{plural}-at",
        f"{plural}-here",
        f"{plural}-on",
        f"{plural}-own",
        f"is-{singular}?",
    ]
    return derived


def _link_breed_derived(plural: str, singular: str) -> list[str]:
    derived = [plural, singular, f"{plural}-own", f"is-{singular}?"]
    for stem in (singular, plural):
        derived += [f"create-{stem}-to", f"create-{stem}-from", f"create-{stem}-with"]
    derived += [f"my-{plural}", f"my-in-{plural}", f"my-out-{plural}"]
    return derived


def collect_declarations(tokens: tuple[Token, ...]) -> frozenset[str]:
    """Names the chunk itself declares: procedures, formals, let locals,
    globals, *-own variables and breed-derived primitives.

    Scoping is flattened: a let name counts as declared for the whole
    chunk. That trades a little precision for zero false positives on
    valid code, which is the property the unknown-name rule must keep.
    """
    declared: set[str] = set()
    n = len(tokens)
    i = 0
    while i < n:
        tok = tokens[i]
        if tok.kind is not TokenKind.IDENTIFIER:
            # [x y] -> ... and [ x -> ... ] bind anonymous-procedure params
            if tok.kind is TokenKind.REPORTER_ARROW:
                j = i - 1
                if j >= 0 and tokens[j].kind is TokenKind.CLOSE_BRACKET:
                    j -= 1
                    while j >= 0 and tokens[j].kind is TokenKind.IDENTIFIER:
                        declared.add(tokens[j].text.lower())
                        j -= 1
                elif (
                    j >= 1
                    and tokens[j].kind is TokenKind.IDENTIFIER
                    and tokens[j - 1].kind is TokenKind.OPEN_BRACKET
                ):
                    declared.add(tokens[j].text.lower())
            i += 1
            continue

        word = tok.text.lower()
        if word in ("to", "to-report"):
            if i + 1 < n and tokens[i + 1].kind is TokenKind.IDENTIFIER:
                declared.add(tokens[i + 1].text.lower())
                j = i + 2
                if j < n and tokens[j].kind is TokenKind.OPEN_BRACKET:
                    j += 1
                    while j < n and tokens[j].kind is not TokenKind.CLOSE_BRACKET:
                        if tokens[j].kind is TokenKind.IDENTIFIER:
                            declared.add(tokens[j].text.lower())
                        j += 1
        elif word == "let":
            if i + 1 < n and tokens[i + 1].kind is TokenKind.IDENTIFIER:
                declared.add(tokens[i + 1].text.lower())
        elif word in _DECLARATION_BLOCKS or word.endswith("-own"):
            j = i + 1
            if j < n and tokens[j].kind is TokenKind.OPEN_BRACKET:
                j += 1
                while j < n and tokens[j].kind is not TokenKind.CLOSE_BRACKET:
                    if tokens[j].kind is TokenKind.IDENTIFIER:
                        declared.add(tokens[j].text.lower())
                    j += 1
        elif word in ("breed", "directed-link-breed", "undirected-link-breed"):
            j = i + 1
            names: list[str] = []
            if j < n and tokens[j].kind is TokenKind.OPEN_BRACKET:
                j += 1
                while j < n and tokens[j].kind is not TokenKind.CLOSE_BRACKET:
                    if tokens[j].kind is TokenKind.IDENTIFIER:
                        names.append(tokens[j].text.lower())
                    j += 1
            if len(names) >= 2:
                plural, singular = names[0], names[1]
                if word == "breed":
                    declared.update(_breed_derived(plural, singular))
                else:
                    declared.update(_link_breed_derived(plural, singular))
            elif len(names) == 1:
                declared.add(names[0])
        i += 1
    return frozenset(declared)


def rule_brackets(ctx: LintContext) -> Iterable[Finding]:
    pairs = {
        TokenKind.CLOSE_BRACKET: TokenKind.OPEN_BRACKET,
        TokenKind.CLOSE_PAREN: TokenKind.OPEN_PAREN,
    }
    stack: list[Token] = []
    for tok in ctx.tokens:
        if tok.kind in (TokenKind.OPEN_BRACKET, TokenKind.OPEN_PAREN):
            stack.append(tok)
        elif tok.kind in pairs:
            if stack and stack[-1].kind is pairs[tok.kind]:
                stack.pop()
            elif stack:
                opener = stack.pop()
                yield Finding(
                    code="UNBALANCED-BRACKET",
                    severity=SEVERITY_ERROR,
                    span=Span.of_token(tok),
                    raw_message=(
                        f"'{tok.text}' does not match '{opener.text}' "
                        f"opened at line {opener.line}"
                    ),
                    name=tok.text,
                )
            else:
                yield Finding(
                    code="UNBALANCED-BRACKET",
                    severity=SEVERITY_ERROR,
                    span=Span.of_token(tok),
                    raw_message=f"'{tok.text}' has no matching opener",
                    name=tok.text,
                )
    for opener in stack:
        yield Finding(
            code="UNBALANCED-BRACKET",
            severity=SEVERITY_ERROR,
            span=Span.of_token(opener),
            raw_message=f"'{opener.text}' is never closed",
            name=opener.text,
        )


def rule_procedures(ctx: LintContext) -> Iterable[Finding]:
    open_def: tuple[Token, str] | None = None
    seen: dict[str, Token] = {}
    tokens = ctx.tokens
    for i, tok in enumerate(tokens):
        if tok.kind is not TokenKind.IDENTIFIER:
            continue
        word = tok.text.lower()
        if word in ("to", "to-report"):
            if open_def is not None:
                opener, name = open_def
                yield Finding(
                    code="MISSING-END",
                    severity=SEVERITY_ERROR,
                    span=Span.of_token(opener),
                    raw_message=f"procedure {name} has no end",
                    name=name,
                )
            name = ""
            if i + 1 < len(tokens) and tokens[i + 1].kind is TokenKind.IDENTIFIER:
                name_tok = tokens[i + 1]
                name = name_tok.text.lower()
                if name in seen:
                    yield Finding(
                        code="PROCEDURE-REDEFINED",
                        severity=SEVERITY_ERROR,
                        span=Span.of_token(name_tok),
                        raw_message=f"procedure {name} is already defined",
                        name=name,
                    )
                else:
                    seen[name] = name_tok
            open_def = (tok, name or "(unnamed)")
        elif word == "end":
            open_def = None
    if open_def is not None:
        opener, name = open_def
        yield Finding(
            code="MISSING-END",
            severity=SEVERITY_ERROR,
            span=Span.of_token(opener),
            raw_message=f"procedure {name} has no end",
            name=name,
        )


def rule_unknown_names(ctx: LintContext) -> Iterable[Finding]:
    for tok in ctx.tokens:
        if tok.kind is not TokenKind.IDENTIFIER:
            continue
        word = tok.text.lower()
        if word in KEYWORDS or word in ctx.declared or word in ctx.dictionary:
            continue
        yield Finding(
            code="UNKNOWN-PRIMITIVE",
            severity=SEVERITY_ERROR,
            span=Span.of_token(tok),
            raw_message=f"nothing named {tok.text} has been defined",
            name=tok.text,
        )


def rule_missing_argument(ctx: LintContext) -> Iterable[Finding]:
    """Warn when a command that needs arguments clearly has none.

    Conservative on purpose: only fires when the next token cannot start
    an argument expression (end of chunk, a closing delimiter, `end`, or
    another dictionary command).
    """
    tokens = ctx.tokens
    for i, tok in enumerate(tokens):
        if tok.kind is not TokenKind.IDENTIFIER:
            continue
        word = tok.text.lower()
        if word in ctx.declared:
            continue
        spec = ctx.dictionary.lookup(word)
        if spec is None or spec.kind != "command" or spec.arity_min < 1:
            continue
        nxt = tokens[i + 1] if i + 1 < len(tokens) else None
        starved = False
        if nxt is None:
            starved = True
        elif nxt.kind in (TokenKind.CLOSE_BRACKET, TokenKind.CLOSE_PAREN):
            starved = True
        elif nxt.kind is TokenKind.IDENTIFIER:
            nxt_word = nxt.text.lower()
            if nxt_word == "end":
                starved = True
            elif nxt_word not in ctx.declared:
                nxt_spec = ctx.dictionary.lookup(nxt_word)
                if nxt_spec is not None and nxt_spec.kind == "command":
                    starved = True
        if starved:
            yield Finding(
                code="MISSING-ARGUMENT",
                severity=SEVERITY_WARNING,
                span=Span.of_token(tok),
                raw_message=(
                    f"{word} expects at least {spec.arity_min} "
                    f"input{'s' if spec.arity_min > 1 else ''}"
                ),
                name=word,
            )


DEFAULT_RULES: tuple[Rule, ...] = (
    rule_brackets,
    rule_procedures,
    rule_unknown_names,
    rule_missing_argument,
)


class Linter:
    """Deterministic checker over an immutable dictionary."""

    def __init__(
        self,
        dictionary: Dictionary,
        clarifier: Clarifier | None = None,
        rules: tuple[Rule, ...] = DEFAULT_RULES,
    ):
        self.dictionary = dictionary
        self.clarifier = clarifier or Clarifier.bundled(dictionary)
        self.rules = rules

    def check_source(self, source: str) -> list[Diagnostic]:
        tokens = _significant(tokenize(source))
        ctx = LintContext(
            tokens=tokens,
            declared=collect_declarations(tokens),
            dictionary=self.dictionary,
        )
        findings: list[Finding] = []
        for rule in self.rules:
            findings.extend(rule(ctx))
        diagnostics = [self._clarified(f, source) for f in findings]
        diagnostics.sort(key=lambda d: (d.span.start_line, d.span.start_column, d.code))
        return diagnostics

    def check(self, chunk: CodeChunk) -> list[Diagnostic]:
        return self.check_source(chunk.source_text)

    def _clarified(self, finding: Finding, source: str) -> Diagnostic:
        lines = source.splitlines()
        excerpt = ""
        if 1 <= finding.span.start_line <= len(lines):
            excerpt = lines[finding.span.start_line - 1].strip()
        clarification = self.clarifier.clarify(
            finding.code,
            finding.raw_message,
            ClarifyContext(
                name=finding.name, line=finding.span.start_line, excerpt=excerpt
            ),
        )
        return Diagnostic(
            code=finding.code,
            severity=finding.severity,
            span=finding.span,
            raw_message=finding.raw_message,
            clarified_message=clarification.message,
            suggested_doc_ids=clarification.doc_ids,
        )


def check(chunk: CodeChunk, dictionary: Dictionary) -> list[Diagnostic]:
    """One-shot check of a chunk against a dictionary."""
    return Linter(dictionary).check(chunk)
