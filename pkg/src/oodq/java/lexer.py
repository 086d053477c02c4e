"""Tokenizer for the supported Java subset."""

from __future__ import annotations

import re
from dataclasses import dataclass

KEYWORDS = frozenset(
    """abstract assert boolean break byte case catch char class const continue default do
    double else enum extends final finally float for goto if implements import instanceof
    int interface long native new package private protected public return short static
    strictfp super switch synchronized this throw throws transient try void volatile while
    true false null""".split()
)
PRIMITIVES = frozenset("boolean byte char short int long float double void".split())


@dataclass(frozen=True)
class Token:
    kind: str  # ident | keyword | number | string | char | op | eof
    text: str
    line: int


class LexError(Exception):
    def __init__(self, message: str, line: int):
        super().__init__(message)
        self.line = line


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\f\r\n]+)
  | (?P<lcomment>//[^\n]*)
  | (?P<bcomment>/\*.*?\*/)
  | (?P<textblock>\"\"\"[\s\S]*?(?<!\\)\"\"\")
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<char>'(?:[^'\\\n]|\\.)+')
  | (?P<number>
        0[xX][0-9a-fA-F_]+[lL]?
      | 0[bB][01_]+[lL]?
      | (?:\d[\d_]*\.?[\d_]*|\.\d[\d_]*)(?:[eE][+-]?\d+)?[fFdDlL]?
    )
  | (?P<ident>[A-Za-z_$\u0080-￿][\w$\u0080-￿]*)
  | (?P<op>
        >>>=|<<=|>>=|\.\.\.|->|::|\+\+|--|&&|\|\||[+\-*/%&|^!=<>]=
      | [{}()\[\];,.@=<>!~?:+\-*/&|^%]
    )
    """,
    re.VERBOSE | re.DOTALL,
)


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos, line, n = 0, 1, len(text)
    match = _TOKEN_RE.match
    while pos < n:
        m = match(text, pos)
        if m is None:
            if text.startswith("/*", pos):
                raise LexError("unterminated block comment", line)
            raise LexError(f"unexpected character {text[pos]!r}", line)
        kind = m.lastgroup
        value = m.group()
        if kind == "ident" and value in KEYWORDS:
            kind = "keyword"
        if kind not in ("ws", "lcomment", "bcomment"):
            tokens.append(Token("string" if kind == "textblock" else kind, value, line))
        line += value.count("\n")
        pos = m.end()
    tokens.append(Token("eof", "", line))
    return tokens
