"""Text and JSON formats.

Forbidden-list files::

    alphabet: 0 1
    # comment
    11

Block-code files (``alphabet:`` is optional and otherwise taken from the
shift the code acts on)::

    range: 1
    000 -> 0
    010 -> 1

Word dumps are ``{"n": k, "words": [...]}`` with words sorted by symbol
index; language tables are ``{"alphabet": [...], "depth": N, "levels":
[dump_1, ..., dump_N]}``.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable

from .blockcode import BlockCode
from .language import ForbiddenList, LanguageTable, SubshiftSpec
from .words import Alphabet, Word

__all__ = [
    "FormatError",
    "parse_forbidden_list",
    "format_forbidden_list",
    "parse_block_code",
    "format_block_code",
    "dump_words",
    "load_words",
    "dump_language_table",
    "load_language_table",
    "load_shift",
    "read_block_code",
]


class FormatError(ValueError):
    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        where = ""
        if source:
            where = f"{source}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)
        self.line = line
        self.source = source


def _content_lines(text: str) -> Iterable[tuple[int, str]]:
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield number, line


def _header(line: str, key: str) -> str | None:
    head, sep, rest = line.partition(":")
    if sep and head.strip().lower() == key:
        return rest.strip()
    return None


def parse_forbidden_list(text: str, source: str | None = None) -> ForbiddenList:
    lines = list(_content_lines(text))
    if not lines:
        raise FormatError("empty file; expected 'alphabet: ...'", None, source)
    number, first = lines[0]
    symbols = _header(first, "alphabet")
    if symbols is None:
        raise FormatError("first line must be 'alphabet: a b c'", number, source)
    try:
        alphabet = Alphabet(tuple(symbols.split()))
    except ValueError as exc:
        raise FormatError(str(exc), number, source) from None
    words: list[Word] = []
    for number, line in lines[1:]:
        try:
            w = alphabet.parse(line)
        except ValueError as exc:
            raise FormatError(str(exc), number, source) from None
        if not w:
            raise FormatError("empty forbidden word", number, source)
        words.append(w)
    return ForbiddenList(alphabet, frozenset(words))


def format_forbidden_list(spec: ForbiddenList) -> str:
    lines = ["alphabet: " + " ".join(spec.alphabet.symbols)]
    lines += [spec.alphabet.format(w) for w in sorted(spec.words, key=lambda w: (len(w), w))]
    return "\n".join(lines) + "\n"


def parse_block_code(text: str, alphabet: Alphabet | None = None, source: str | None = None) -> BlockCode:
    lines = list(_content_lines(text))
    if not lines:
        raise FormatError("empty file; expected 'range: R'", None, source)
    range_ = None
    rules: list[tuple[int, str, str]] = []
    for number, line in lines:
        value = _header(line, "range")
        if value is not None:
            try:
                range_ = int(value)
            except ValueError:
                raise FormatError(f"bad range {value!r}", number, source) from None
            if range_ < 0:
                raise FormatError("range must be >= 0", number, source)
            continue
        value = _header(line, "alphabet")
        if value is not None:
            try:
                declared = Alphabet(tuple(value.split()))
            except ValueError as exc:
                raise FormatError(str(exc), number, source) from None
            if alphabet is not None and declared != alphabet:
                raise FormatError("declared alphabet differs from the shift's", number, source)
            alphabet = declared
            continue
        if "->" not in line:
            raise FormatError("expected 'word -> symbol'", number, source)
        lhs, rhs = (x.strip() for x in line.split("->", 1))
        rules.append((number, lhs, rhs))
    if range_ is None:
        raise FormatError("missing 'range: R' line", None, source)
    if alphabet is None:
        raise FormatError("no alphabet: declare one or pass the shift", None, source)
    table: dict[Word, int] = {}
    for number, lhs, rhs in rules:
        try:
            w = alphabet.parse(lhs)
            s = alphabet.index(rhs)
        except ValueError as exc:
            raise FormatError(str(exc), number, source) from None
        if len(w) != 2 * range_ + 1:
            raise FormatError(f"word {lhs!r} has length {len(w)}, expected {2 * range_ + 1}", number, source)
        if w in table and table[w] != s:
            raise FormatError(f"conflicting rule for {lhs!r}", number, source)
        table[w] = s
    return BlockCode(range_, table, alphabet)


def format_block_code(code: BlockCode) -> str:
    fmt = code.domain.format
    out = [f"range: {code.range}"]
    out += [f"{fmt(w)} -> {code.codomain.symbols[s]}" for w, s in code.table.items()]  # type: ignore[union-attr]
    return "\n".join(out) + "\n"


def dump_words(alphabet: Alphabet, n: int, words: Iterable[Word]) -> dict:
    return {"n": n, "words": [alphabet.format(w) for w in sorted(words)]}


def load_words(alphabet: Alphabet, data: dict) -> tuple[int, frozenset[Word]]:
    n = int(data["n"])
    words = frozenset(alphabet.parse(w) for w in data["words"])
    if any(len(w) != n for w in words):
        raise FormatError(f"word list for n={n} contains a word of another length")
    return n, words


def dump_language_table(table: LanguageTable) -> dict:
    a = table.alphabet
    return {
        "alphabet": list(a.symbols),
        "depth": len(table.levels),
        "levels": [dump_words(a, k, lv) for k, lv in enumerate(table.levels, start=1)],
    }


def load_language_table(data: dict) -> LanguageTable:
    try:
        alphabet = Alphabet(tuple(data["alphabet"]))
        levels = [load_words(alphabet, lv) for lv in data["levels"]]
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed language table: {exc}") from None
    levels.sort()
    if [n for n, _ in levels] != list(range(1, len(levels) + 1)):
        raise FormatError("levels must cover n = 1 .. depth")
    if "depth" in data and int(data["depth"]) != len(levels):
        raise FormatError("depth does not match the number of levels")
    return LanguageTable(alphabet, tuple(ws for _, ws in levels))


def load_shift(path: str | Path) -> SubshiftSpec:
    """A forbidden-list file, or a JSON language table (by ``.json`` suffix)."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix == ".json":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise FormatError(exc.msg, exc.lineno, str(path)) from None
        return load_language_table(data)
    return parse_forbidden_list(text, str(path))


def read_block_code(path: str | Path, alphabet: Alphabet | None = None) -> BlockCode:
    path = Path(path)
    return parse_block_code(path.read_text(encoding="utf-8"), alphabet, str(path))
