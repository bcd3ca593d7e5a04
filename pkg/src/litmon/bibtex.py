"""Tolerant BibTeX reader.

Handles ``{...}`` and ``"..."`` value delimiters, ``@string`` constants with
``#`` concatenation, ``@comment``/``@preamble`` blocks, LaTeX accent
commands, and brace protection in titles. A malformed entry yields a
positioned issue and parsing resumes at the next ``@`` at start of line, so
one bad entry never takes down the file. Crossref inheritance is not
resolved.
"""

from __future__ import annotations

import re

from .errors import EmptyInputError
from .model import IntrinsicRecord, ParseIssue, RawSource, ResourceType
from .textutil import collapse_ws

_ENTRY_TYPE_HINTS = {
    "article": ResourceType.REVIEWED_PAPER,
    "book": ResourceType.REVIEWED_PAPER,
    "incollection": ResourceType.REVIEWED_PAPER,
    "inbook": ResourceType.REVIEWED_PAPER,
    "inproceedings": ResourceType.CONFERENCE_PROCEEDINGS,
    "conference": ResourceType.CONFERENCE_PROCEEDINGS,
    "proceedings": ResourceType.CONFERENCE_PROCEEDINGS,
    "phdthesis": ResourceType.THESIS,
    "mastersthesis": ResourceType.THESIS,
    "thesis": ResourceType.THESIS,
    "techreport": ResourceType.TECHNICAL_REPORT_WHITE_PAPER,
    "report": ResourceType.TECHNICAL_REPORT_WHITE_PAPER,
    "manual": ResourceType.TECHNICAL_REPORT_WHITE_PAPER,
    "patent": ResourceType.STANDARD_PATENT,
    "standard": ResourceType.STANDARD_PATENT,
}

# Accent commands mapping to combining characters, composed afterwards.
_ACCENTS = {
    "'": "\u0301", "`": "\u0300", "^": "\u0302", '"': "\u0308",
    "~": "\u0303", "=": "\u0304", ".": "\u0307", "u": "\u0306",
    "v": "\u030c", "H": "\u030b", "c": "\u0327", "k": "\u0328",
    "r": "\u030a", "b": "\u0331", "d": "\u0323",
}

_LITERALS = {
    "ss": "ß", "ae": "æ", "AE": "Æ", "oe": "œ", "OE": "Œ",
    "aa": "å", "AA": "Å", "o": "ø", "O": "Ø", "l": "ł", "L": "Ł",
    "i": "ı", "j": "ȷ", "dj": "đ", "DJ": "Đ", "th": "þ", "TH": "Þ",
    "&": "&", "%": "%", "$": "$", "#": "#", "_": "_",
}

_MONTHS = {m: m for m in ("jan feb mar apr may jun jul aug sep oct nov dec"
                          .split())}

# Font/style commands whose argument should survive but the command itself go.
_FORMATTING = {"textit", "textbf", "textsc", "texttt", "textrm", "textsf",
               "emph", "em", "it", "bf", "sc", "rm", "sf", "tt", "mbox",
               "url"}


def decode_latex(value: str) -> str:
    """Decode LaTeX accents and protection braces to plain text."""
    import unicodedata

    text = value
    # \'{e}, \'e, \v{s}, \c{c} ... -> letter + combining mark
    def _accent(m: re.Match) -> str:
        mark = _ACCENTS[m.group(1)]
        letter = m.group(2)
        if letter in ("\\i", "\\j"):
            letter = letter[1]
        return letter + mark

    symbol = "".join(re.escape(s) for s in "'`^\"~=.")
    text = re.sub(r"\\([" + symbol + r"])\{(\\[ij]|[a-zA-Z])\}", _accent, text)
    text = re.sub(r"\\([" + symbol + r"])(\\[ij]|[a-zA-Z])", _accent, text)
    text = re.sub(r"\\([uvHckrbd])\{(\\[ij]|[a-zA-Z])\}", _accent, text)
    text = re.sub(r"\\([uvHckrbd])\s+(\\[ij]|[a-zA-Z])", _accent, text)

    def _literal(m: re.Match) -> str:
        name = m.group(1)
        if name in _FORMATTING:
            return ""
        return _LITERALS.get(name, m.group(0))

    text = re.sub(r"\\([a-zA-Z]+|[&%$#_])", _literal, text)
    text = text.replace("~", " ")
    text = text.replace("{", "").replace("}", "")
    text = unicodedata.normalize("NFC", text)
    return collapse_ws(text)


def split_authors(value: str) -> list[str]:
    """Split an author field on top-brace-level `` and `` separators."""
    parts: list[str] = []
    depth = 0
    current: list[str] = []
    i = 0
    lowered = value.lower()
    while i < len(value):
        ch = value[i]
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth = max(0, depth - 1)
        if (depth == 0 and lowered.startswith(" and ", i)
                and (i == 0 or value[i - 1] != "\\")):
            parts.append("".join(current))
            current = []
            i += 5
            continue
        current.append(ch)
        i += 1
    parts.append("".join(current))
    return [decode_latex(p) for p in parts if p.strip()]


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def line(self, pos: int | None = None) -> int:
        p = self.pos if pos is None else pos
        return self.text.count("\n", 0, p) + 1

    def eof(self) -> bool:
        return self.pos >= len(self.text)

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def expect(self, ch: str):
        if self.peek() != ch:
            raise _EntryError(f"expected {ch!r}, found {self.peek()!r}",
                              self.pos)
        self.pos += 1

    def take_name(self) -> str:
        m = re.match(r"[A-Za-z][\w\-:.+/]*", self.text[self.pos:])
        if not m:
            raise _EntryError("expected a name", self.pos)
        self.pos += m.end()
        return m.group(0)

    def take_braced(self) -> str:
        """Consume a balanced {...} group; returns inner text."""
        start = self.pos
        self.expect("{")
        depth = 1
        out: list[str] = []
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch == "\\" and self.pos + 1 < len(self.text):
                out.append(self.text[self.pos:self.pos + 2])
                self.pos += 2
                continue
            if ch == "{":
                depth += 1
            elif ch == "}":
                depth -= 1
                if depth == 0:
                    self.pos += 1
                    return "".join(out)
            out.append(ch)
            self.pos += 1
        raise _EntryError("unbalanced braces", start)

    def take_quoted(self) -> str:
        start = self.pos
        self.expect('"')
        depth = 0
        out: list[str] = []
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch == "\\" and self.pos + 1 < len(self.text):
                out.append(self.text[self.pos:self.pos + 2])
                self.pos += 2
                continue
            if ch == "{":
                depth += 1
            elif ch == "}":
                depth -= 1
            elif ch == '"' and depth == 0:
                self.pos += 1
                return "".join(out)
            out.append(ch)
            self.pos += 1
        raise _EntryError("unterminated quoted value", start)


class _EntryError(Exception):
    def __init__(self, reason: str, pos: int):
        super().__init__(reason)
        self.reason = reason
        self.pos = pos


def _value(scanner: _Scanner, strings: dict[str, str]) -> str:
    """One field value: concatenation of braced/quoted/bare parts with #."""
    parts: list[str] = []
    while True:
        scanner.skip_ws()
        ch = scanner.peek()
        if ch == "{":
            parts.append(scanner.take_braced())
        elif ch == '"':
            parts.append(scanner.take_quoted())
        else:
            m = re.match(r"[\w\-./:+]+", scanner.text[scanner.pos:])
            if not m:
                raise _EntryError("expected a value", scanner.pos)
            token = m.group(0)
            scanner.pos += m.end()
            lowered = token.lower()
            if lowered in strings:
                parts.append(strings[lowered])
            elif lowered in _MONTHS or re.fullmatch(r"[\d\-./:]+", token):
                parts.append(token)
            else:
                # unknown @string constant: keep the literal name
                parts.append(token)
        scanner.skip_ws()
        if scanner.peek() == "#":
            scanner.pos += 1
            continue
        return "".join(parts)


def _fields(scanner: _Scanner, strings: dict[str, str]) -> dict[str, str]:
    fields: dict[str, str] = {}
    while True:
        scanner.skip_ws()
        if scanner.peek() == ",":
            scanner.pos += 1
            scanner.skip_ws()
        if scanner.peek() == "}":
            scanner.pos += 1
            return fields
        if scanner.eof():
            raise _EntryError("entry not closed before end of input",
                              scanner.pos)
        name = scanner.take_name().lower()
        scanner.skip_ws()
        scanner.expect("=")
        value = _value(scanner, strings)
        fields.setdefault(name, value)


def _year(fields: dict[str, str]) -> int | None:
    raw = fields.get("year", "")
    m = re.search(r"\d{4}", raw)
    return int(m.group(0)) if m else None


def _hint(entry_type: str, fields: dict[str, str]) -> ResourceType | None:
    hint = _ENTRY_TYPE_HINTS.get(entry_type)
    if hint is not None:
        return hint
    if entry_type == "misc":
        haystack = " ".join(fields.get(k, "") for k in
                            ("note", "howpublished", "type")).lower()
        if "patent" in haystack or "standard" in haystack:
            return ResourceType.STANDARD_PATENT
    return None


def _record(entry_type: str, fields: dict[str, str]) -> IntrinsicRecord:
    from .textutil import normalize_doi

    keywords = [collapse_ws(decode_latex(k))
                for k in re.split(r"[;,]", fields.get("keywords", ""))
                if k.strip()]
    venue = fields.get("journal") or fields.get("booktitle") or \
        fields.get("school") or fields.get("institution") or ""
    return IntrinsicRecord(
        title=decode_latex(fields.get("title", "")),
        year=_year(fields),
        resource_type_hint=_hint(entry_type, fields),
        venue=decode_latex(venue),
        volume=fields.get("volume") or None,
        issue=fields.get("number") or None,
        publisher=decode_latex(fields["publisher"]) if fields.get("publisher") else None,
        abstract=decode_latex(fields["abstract"]) if fields.get("abstract") else None,
        keywords=keywords,
        language=fields.get("language", "en").lower()[:2] or "en",
        doi=normalize_doi(fields.get("doi")),
        url=fields.get("url") or None,
        authors=split_authors(fields.get("author", "")),
        affiliations=[collapse_ws(decode_latex(a)) for a in
                      fields.get("affiliation", "").split(";") if a.strip()],
        raw_source=RawSource.BIBTEX,
    )


def parse_bibtex(text: str) -> tuple[list[IntrinsicRecord], list[ParseIssue]]:
    """Parse BibTeX text into intrinsic records plus positioned issues.

    Always terminates and never raises on malformed entries; only empty
    input is an error.
    """
    if not text or not text.strip():
        raise EmptyInputError("no BibTeX entries in input")
    records: list[IntrinsicRecord] = []
    issues: list[ParseIssue] = []
    strings: dict[str, str] = {}
    scanner = _Scanner(text)

    while True:
        at = scanner.text.find("@", scanner.pos)
        if at == -1:
            break
        scanner.pos = at + 1
        entry_line = scanner.line(at)
        try:
            entry_type = scanner.take_name().lower()
            scanner.skip_ws()
            if entry_type == "comment":
                if scanner.peek() == "{":
                    scanner.take_braced()
                continue
            scanner.expect("{")
            if entry_type == "preamble":
                scanner.pos -= 1
                scanner.take_braced()
                continue
            if entry_type == "string":
                scanner.skip_ws()
                name = scanner.take_name().lower()
                scanner.skip_ws()
                scanner.expect("=")
                strings[name] = _value(scanner, strings)
                scanner.skip_ws()
                if scanner.peek() == "}":
                    scanner.pos += 1
                continue
            # citation key (may be empty, may start with a digit)
            scanner.skip_ws()
            key_match = re.match(r"[^,\s{}=]+", scanner.text[scanner.pos:])
            if key_match:
                scanner.pos += key_match.end()
            scanner.skip_ws()
            fields = _fields(scanner, strings)
            records.append(_record(entry_type, fields))
        except _EntryError as err:
            issues.append(ParseIssue(line=entry_line, code="SyntaxError",
                                     message=err.reason))
            # resume at the next line that starts a new entry
            m = re.search(r"^[ \t]*@", scanner.text[at + 1:], re.MULTILINE)
            if m is None:
                break
            scanner.pos = at + 1 + m.end() - 1
    return records, issues
