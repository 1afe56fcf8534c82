"""Position-tracking s-expression reader."""

from __future__ import annotations

from dataclasses import dataclass, field


class ParseError(ValueError):
    kind = "syntax"

    def __init__(self, message: str, line: int = 0, col: int = 0):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


class SExprSyntaxError(ParseError):
    kind = "syntax"


class SortError(ParseError):
    kind = "sort"


class UnknownSymbol(ParseError):
    kind = "unknown-symbol"


@dataclass
class Sym:
    text: str
    line: int
    col: int
    quoted: bool = False

    def __repr__(self) -> str:
        return repr(self.text) if self.quoted else self.text


@dataclass
class SList:
    items: list = field(default_factory=list)
    line: int = 0
    col: int = 0

    def __len__(self) -> int:
        return len(self.items)

    def __getitem__(self, i):
        return self.items[i]

    def __repr__(self) -> str:
        return "(" + " ".join(map(repr, self.items)) + ")"


SExpr = Sym | SList

_DELIMS = set("();\"")


def read_all(text: str) -> list[SExpr]:
    """Read every top-level s-expression; ``;`` starts a line comment."""
    out: list[SExpr] = []
    stack: list[SList] = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if c.isspace():
            i, col = i + 1, col + 1
            continue
        if c == ";":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if c == "(":
            stack.append(SList([], line, col))
            i, col = i + 1, col + 1
            continue
        if c == ")":
            if not stack:
                raise SExprSyntaxError("unbalanced ')'", line, col)
            done = stack.pop()
            (stack[-1].items if stack else out).append(done)
            i, col = i + 1, col + 1
            continue
        if c == '"':
            start_line, start_col = line, col
            j = i + 1
            buf = []
            while j < n and text[j] != '"':
                if text[j] == "\\" and j + 1 < n:
                    j += 1
                if text[j] == "\n":
                    line, col = line + 1, 0
                buf.append(text[j])
                j += 1
                col += 1
            if j >= n:
                raise SExprSyntaxError("unterminated string", start_line, start_col)
            tok = Sym("".join(buf), start_line, start_col, quoted=True)
            col += 2
            i = j + 1
        else:
            j = i
            while j < n and not text[j].isspace() and text[j] not in _DELIMS:
                j += 1
            tok = Sym(text[i:j], line, col)
            col += j - i
            i = j
        (stack[-1].items if stack else out).append(tok)
    if stack:
        top = stack[-1]
        raise SExprSyntaxError("unclosed '('", top.line, top.col)
    return out


def read_one(text: str) -> SExpr:
    forms = read_all(text)
    if len(forms) != 1:
        raise SExprSyntaxError(f"expected exactly one expression, found {len(forms)}", 1, 1)
    return forms[0]


def quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'
