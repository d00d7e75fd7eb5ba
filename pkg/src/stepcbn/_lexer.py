"""Tokenizer shared by the term and type grammars."""

from __future__ import annotations

from dataclasses import dataclass


class ParseError(ValueError):
    def __init__(self, message: str, pos: int, text: str = ""):
        self.pos = pos
        self.line, self.col = _line_col(text, pos)
        super().__init__(f"{message} at line {self.line}, column {self.col}")


def _line_col(text: str, pos: int) -> tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


@dataclass(frozen=True)
class Token:
    kind: str  # LAMBDA DOT LPAREN RPAREN COLON COMMA ARROW NUM IDENT EOF
    text: str
    pos: int


_SINGLE = {
    "\\": "LAMBDA",
    "λ": "LAMBDA",
    ".": "DOT",
    "(": "LPAREN",
    ")": "RPAREN",
    ":": "COLON",
    ",": "COMMA",
}


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif text.startswith("--", i):
            nl = text.find("\n", i)
            i = n if nl < 0 else nl + 1
        elif text.startswith("->", i):
            tokens.append(Token("ARROW", "->", i))
            i += 2
        elif ch in _SINGLE:
            tokens.append(Token(_SINGLE[ch], ch, i))
            i += 1
        elif ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(Token("NUM", text[i:j], i))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] in "_'"):
                j += 1
            tokens.append(Token("IDENT", text[i:j], i))
            i = j
        else:
            raise ParseError(f"unexpected character {ch!r}", i, text)
    tokens.append(Token("EOF", "", n))
    return tokens


class TokenStream:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def peek(self) -> Token:
        return self.tokens[self.i]

    def next(self) -> Token:
        tok = self.tokens[self.i]
        if tok.kind != "EOF":
            self.i += 1
        return tok

    def accept(self, kind: str, text: str | None = None) -> Token | None:
        tok = self.peek
        if tok.kind == kind and (text is None or tok.text == text):
            return self.next()
        return None

    def expect(self, kind: str, text: str | None = None) -> Token:
        tok = self.accept(kind, text)
        if tok is None:
            want = text or kind.lower()
            found = self.peek.text or "end of input"
            self.error(f"expected {want!r}, found {found!r}")
        return tok

    def error(self, message: str, pos: int | None = None):
        raise ParseError(message, self.peek.pos if pos is None else pos, self.text)

    def expect_end(self) -> None:
        if self.peek.kind != "EOF":
            self.error(f"unexpected {self.peek.text!r}")
