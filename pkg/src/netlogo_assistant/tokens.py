"""Lossless tokenizer for NetLogo source text.

Tokenization is total: any byte sequence produces a token stream, and
concatenating token texts with the skipped whitespace reproduces the
input exactly. Unrecognized characters degrade to one-character
identifier tokens instead of failing.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum


class TokenKind(str, Enum):
    IDENTIFIER = "identifier"
    NUMBER = "number"
    STRING = "string-literal"
    OPEN_BRACKET = "open-bracket"
    CLOSE_BRACKET = "close-bracket"
    OPEN_PAREN = "open-paren"
    CLOSE_PAREN = "close-paren"
    REPORTER_ARROW = "reporter-arrow"
    COMMENT = "comment"
    EOL = "eol"


@dataclass(frozen=True, slots=True)
class Token:
    kind: TokenKind
    text: str
    line: int  # 1-based
    column: int  # 1-based


# NetLogo identifiers may contain symbols; operators like <= or != are
# ordinary primitive names made of these characters.
_IDENT_CHARS = frozenset(
    "abcdefghijklmnopqrstuvwxyz"
    "ABCDEFGHIJKLMNOPQRSTUVWXYZ"
    "0123456789"
    "_.?=*!<>:#+/%$^'&-"
)

_NUMBER_RE = re.compile(r"-?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")

_BRACKETS = {
    "[": TokenKind.OPEN_BRACKET,
    "]": TokenKind.CLOSE_BRACKET,
    "(": TokenKind.OPEN_PAREN,
    ")": TokenKind.CLOSE_PAREN,
}


def tokenize(source: str) -> list[Token]:
    """Split NetLogo source into tokens; never raises."""
    tokens: list[Token] = []
    pos = 0
    line = 1
    column = 1
    n = len(source)

    def emit(kind: TokenKind, text: str) -> None:
        tokens.append(Token(kind, text, line, column))

    while pos < n:
        ch = source[pos]

        if ch == "\r" or ch == "\n":
            text = "\r\n" if ch == "\r" and source[pos : pos + 2] == "\r\n" else ch
            emit(TokenKind.EOL, text)
            pos += len(text)
            line += 1
            column = 1
            continue

        if ch.isspace():
            pos += 1
            column += 1
            continue

        if ch == ";":
            end = pos
            while end < n and source[end] not in "\r\n":
                end += 1
            emit(TokenKind.COMMENT, source[pos:end])
            column += end - pos
            pos = end
            continue

        if ch == '"':
            end = pos + 1
            while end < n and source[end] not in "\r\n":
                if source[end] == "\\" and end + 1 < n and source[end + 1] not in "\r\n":
                    end += 2
                    continue
                if source[end] == '"':
                    end += 1
                    break
                end += 1
            # Unterminated strings run to end of line; still a string token.
            emit(TokenKind.STRING, source[pos:end])
            column += end - pos
            pos = end
            continue

        if ch in _BRACKETS:
            emit(_BRACKETS[ch], ch)
            pos += 1
            column += 1
            continue

        if ch in _IDENT_CHARS:
            end = pos
            while end < n and source[end] in _IDENT_CHARS:
                end += 1
            text = source[pos:end]
            if text == "->":
                kind = TokenKind.REPORTER_ARROW
            elif _NUMBER_RE.fullmatch(text):
                kind = TokenKind.NUMBER
            else:
                kind = TokenKind.IDENTIFIER
            emit(kind, text)
            column += end - pos
            pos = end
            continue

        # Anything else (e.g. commas, braces, emoji) degrades to a
        # single-character identifier so tokenization stays total.
        emit(TokenKind.IDENTIFIER, ch)
        pos += 1
        column += 1

    return tokens
