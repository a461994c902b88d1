"""File formats: FASTA documents, a GenBank-subset flat file, and
PROSITE-style motif patterns with a scanner.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import (
    DuplicateId,
    EmptySequence,
    InvalidResidue,
    LengthMismatch,
    MissingAccession,
    MotifSyntaxError,
    NoHeader,
    UnterminatedRecord,
    WrongAlphabet,
)
from .seqcore import DNA, PROTEIN, RNA, Alphabet, Sequence, validate

__all__ = [
    "FastaDoc",
    "parse_fasta",
    "render_fasta",
    "detect_alphabet",
    "GenBankRecord",
    "parse_genbank",
    "render_genbank",
    "MotifPattern",
    "Literal",
    "AnyOf",
    "NoneOf",
    "Wildcard",
    "Repeat",
    "parse_prosite",
    "scan_motif",
]


# ---------------------------------------------------------------------------
# FASTA


def detect_alphabet(residue_text: str) -> Alphabet:
    """Classify cleaned residue text: only ACGT(N) is DNA, only ACGU(N)
    is RNA, anything else is protein."""
    chars = set(residue_text.upper())
    if chars <= (DNA.symbols | {"N"}):
        return DNA
    if chars <= (RNA.symbols | {"N"}):
        return RNA
    return PROTEIN


@dataclass
class FastaDoc:
    """An ordered FASTA document with unique entry ids."""

    entries: list = field(default_factory=list)

    def ids(self) -> list:
        return [e.id for e in self.entries]

    def get(self, seq_id: str) -> Sequence:
        for e in self.entries:
            if e.id == seq_id:
                return e
        raise KeyError(seq_id)


def parse_fasta(
    text: str, alphabet: Alphabet | None = None, lenient: bool | None = None
) -> FastaDoc:
    """Parse FASTA text.

    Entry ids are the first whitespace-delimited token after '>'; the
    rest of the header line is the description. Residue lines are
    concatenated with whitespace removed. When no alphabet is forced,
    each entry is auto-detected and validated leniently (ambiguity
    codes collapse to the wildcard); junk characters still raise
    InvalidResidue.
    """
    if lenient is None:
        lenient = alphabet is None
    doc = FastaDoc()
    seen = set()
    header = None
    chunks: list = []

    def flush():
        if header is None:
            return
        seq_id, description = header
        if seq_id in seen:
            raise DuplicateId(seq_id)
        seen.add(seq_id)
        body = "".join(chunks)
        if not body.strip():
            raise EmptySequence(f"entry {seq_id} has no residues")
        ab = alphabet if alphabet is not None else detect_alphabet(body)
        doc.entries.append(
            validate(body, ab, lenient=lenient, seq_id=seq_id, description=description)
        )

    for line in text.splitlines():
        if line.startswith(">"):
            flush()
            parts = line[1:].strip().split(None, 1)
            if not parts:
                raise NoHeader("header line with no id")
            header = (parts[0], parts[1].strip() if len(parts) > 1 else "")
            chunks = []
        elif line.strip():
            if header is None:
                raise NoHeader("residue data before any '>' header")
            chunks.append(line)
    flush()
    return doc


def render_fasta(doc: FastaDoc, wrap: int = 60) -> str:
    """Render a FASTA document with residue lines wrapped at the given
    width (default 60). Output ends with a newline."""
    if wrap < 1:
        raise ValueError("wrap must be >= 1")
    lines = []
    for e in doc.entries:
        head = f">{e.id}"
        if e.description:
            head += f" {e.description}"
        lines.append(head)
        for i in range(0, len(e.residues), wrap):
            lines.append(e.residues[i : i + wrap])
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# GenBank subset

_KNOWN_KEYWORDS = {"LOCUS", "DEFINITION", "ACCESSION", "REFERENCE", "ORIGIN", "SOURCE"}


@dataclass
class GenBankRecord:
    """A parsed flat-file record.

    references and extras hold raw section text (lines joined with
    newlines): references for REFERENCE sections, extras for SOURCE and
    any unrecognized sections, preserved verbatim so re-rendering keeps
    them line for line. organism is extracted from the ORGANISM line
    inside SOURCE but the section itself stays in extras.
    """

    locus: str = ""
    declared_length: int | None = None
    definition: str = ""
    accession: str = ""
    organism: str = ""
    references: tuple = ()
    extras: tuple = ()
    origin: str = ""

    def sequence(self) -> Sequence:
        """The ORIGIN residues as a leniently validated Sequence."""
        return validate(
            self.origin,
            detect_alphabet(self.origin),
            lenient=True,
            seq_id=self.accession,
            description=self.definition,
        )


def _split_sections(lines: list) -> list:
    """Group record lines into (keyword, [raw lines]) sections. A section
    starts at any line with a non-blank first column."""
    sections = []
    for line in lines:
        if not line.strip():
            continue
        if line[0] not in " \t":
            keyword = line.split(None, 1)[0]
            sections.append((keyword, [line]))
        else:
            if not sections:
                raise NoHeader("continuation line before any keyword")
            sections[-1][1].append(line)
    return sections


def parse_genbank(text: str) -> list:
    """Parse zero or more records; each must close with a '//' line.

    Recognized sections: LOCUS (name and declared length), DEFINITION,
    ACCESSION, SOURCE (for the ORGANISM subline), REFERENCE, ORIGIN.
    Everything else lands in extras verbatim. A declared length that
    contradicts the ORIGIN residue count raises LengthMismatch.
    """
    records = []
    pending: list = []
    saw_content = False
    for line in text.splitlines():
        if line.strip() == "//":
            records.append(_parse_record(pending))
            pending = []
            saw_content = False
        else:
            pending.append(line)
            if line.strip():
                saw_content = True
    if saw_content:
        raise UnterminatedRecord("record at end of input has no '//' terminator")
    return records


def _parse_record(lines: list) -> GenBankRecord:
    rec = GenBankRecord()
    references = []
    extras = []
    for keyword, raw in _split_sections(lines):
        content = raw[0].split(None, 1)
        head = content[1].strip() if len(content) > 1 else ""
        if keyword == "LOCUS":
            tokens = head.split()
            rec.locus = tokens[0] if tokens else ""
            for i, tok in enumerate(tokens):
                if tok.isdigit() and i + 1 < len(tokens) and tokens[i + 1].lower() in ("bp", "aa"):
                    rec.declared_length = int(tok)
                    break
        elif keyword == "DEFINITION":
            parts = [head] + [ln.strip() for ln in raw[1:]]
            rec.definition = " ".join(p for p in parts if p)
        elif keyword == "ACCESSION":
            rec.accession = head.split()[0] if head else ""
        elif keyword == "SOURCE":
            extras.append("\n".join(raw))
            for ln in raw[1:]:
                tokens = ln.split(None, 1)
                if tokens and tokens[0] == "ORGANISM":
                    rec.organism = tokens[1].strip() if len(tokens) > 1 else ""
                    break
        elif keyword == "REFERENCE":
            references.append("\n".join(raw))
        elif keyword == "ORIGIN":
            body = []
            for ln in raw[1:]:
                body.append("".join(ch for ch in ln if ch.isalpha()))
            rec.origin = "".join(body).upper()
        else:
            extras.append("\n".join(raw))
    rec.references = tuple(references)
    rec.extras = tuple(extras)
    if not rec.accession:
        raise MissingAccession(f"record {rec.locus or '<unnamed>'} has no accession")
    if rec.declared_length is not None and rec.origin and rec.declared_length != len(rec.origin):
        raise LengthMismatch(
            f"{rec.accession}: LOCUS declares {rec.declared_length} bases, "
            f"ORIGIN has {len(rec.origin)}"
        )
    return rec


def render_genbank(rec: GenBankRecord) -> str:
    """Render a record back to flat-file text.

    Parsed fields are re-rendered in canonical shape; SOURCE and unknown
    sections come back verbatim from extras. Round trip property:
    parse_genbank(render_genbank(r)) reproduces r's fields.
    """
    lines = []
    unit = "bp" if set(rec.origin) <= (DNA.symbols | RNA.symbols | {"N"}) else "aa"
    length = len(rec.origin) if rec.origin else (rec.declared_length or 0)
    lines.append(f"LOCUS       {rec.locus:<16} {length} {unit}")
    if rec.definition:
        first, indent = "DEFINITION  ", " " * 12
        words = rec.definition.split()
        cur = first
        for w in words:
            if len(cur) + len(w) + 1 > 79 and cur.strip():
                lines.append(cur.rstrip())
                cur = indent
            cur += w + " "
        if cur.strip():
            lines.append(cur.rstrip())
    lines.append(f"ACCESSION   {rec.accession}")
    for block in rec.extras:
        lines.extend(block.splitlines())
    for block in rec.references:
        lines.extend(block.splitlines())
    lines.append("ORIGIN")
    seq = rec.origin.lower()
    for i in range(0, len(seq), 60):
        chunk = seq[i : i + 60]
        groups = " ".join(chunk[j : j + 10] for j in range(0, len(chunk), 10))
        lines.append(f"{i + 1:>9} {groups}")
    lines.append("//")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# PROSITE-style motif patterns


@dataclass(frozen=True)
class Literal:
    residue: str


@dataclass(frozen=True)
class AnyOf:
    residues: frozenset


@dataclass(frozen=True)
class NoneOf:
    residues: frozenset


@dataclass(frozen=True)
class Wildcard:
    pass


@dataclass(frozen=True)
class Repeat:
    """element repeated low..high times; exact repeats have low == high."""

    element: object
    low: int
    high: int


@dataclass(frozen=True)
class MotifPattern:
    # source keeps the text as written; equality ignores it so a pattern
    # parsed back from canonical() compares equal to the original.
    source: str = field(compare=False)
    elements: tuple = ()
    anchored_start: bool = False
    anchored_end: bool = False

    @property
    def min_span(self) -> int:
        return sum(e.low if isinstance(e, Repeat) else 1 for e in self.elements)

    @property
    def max_span(self) -> int:
        return sum(e.high if isinstance(e, Repeat) else 1 for e in self.elements)

    def canonical(self) -> str:
        parts = [_render_element(e) for e in self.elements]
        text = "-".join(parts)
        if self.anchored_start:
            text = "<" + text
        if self.anchored_end:
            text = text + ">"
        return text


def _render_element(e) -> str:
    if isinstance(e, Repeat):
        inner = _render_element(e.element)
        if e.low == e.high:
            return f"{inner}({e.low})"
        return f"{inner}({e.low},{e.high})"
    if isinstance(e, Literal):
        return e.residue
    if isinstance(e, AnyOf):
        return "[" + "".join(sorted(e.residues)) + "]"
    if isinstance(e, NoneOf):
        return "{" + "".join(sorted(e.residues)) + "}"
    return "x"


_ELEMENT_RE = re.compile(
    r"^(?:(?P<lit>[A-Z])|(?P<wild>x)|\[(?P<anyof>[A-Z]+)\]|\{(?P<noneof>[A-Z]+)\})"
    r"(?:\((?P<low>\d+)(?:,(?P<high>\d+))?\))?$"
)


def parse_prosite(text: str) -> MotifPattern:
    """Parse a '-'-separated pattern.

    Core grammar: residue literals, x wildcards, [..] choice sets, and
    (n) exact repeat suffixes. Extensions: {..} exclusion sets, (m,n)
    bounded repeat ranges, and '<' / '>' terminal anchors. A trailing
    '.' is tolerated. parse(canonical()) reproduces the pattern.
    """
    source = text
    work = text.strip()
    if work.endswith("."):
        work = work[:-1]
    anchored_start = work.startswith("<")
    if anchored_start:
        work = work[1:]
    anchored_end = work.endswith(">")
    if anchored_end:
        work = work[:-1]
    if not work:
        raise MotifSyntaxError(0, "empty pattern")
    elements = []
    pos = 0
    for chunk in work.split("-"):
        m = _ELEMENT_RE.match(chunk)
        if m is None:
            raise MotifSyntaxError(pos, f"bad element {chunk!r}")
        if m.group("lit"):
            if m.group("lit") not in PROTEIN.symbols:
                raise MotifSyntaxError(pos, f"unknown residue {m.group('lit')!r}")
            elem = Literal(m.group("lit"))
        elif m.group("wild"):
            elem = Wildcard()
        elif m.group("anyof"):
            bad = set(m.group("anyof")) - PROTEIN.symbols
            if bad:
                raise MotifSyntaxError(pos, f"unknown residues {sorted(bad)} in set")
            elem = AnyOf(frozenset(m.group("anyof")))
        else:
            bad = set(m.group("noneof")) - PROTEIN.symbols
            if bad:
                raise MotifSyntaxError(pos, f"unknown residues {sorted(bad)} in set")
            elem = NoneOf(frozenset(m.group("noneof")))
        if m.group("low") is not None:
            low = int(m.group("low"))
            high = int(m.group("high")) if m.group("high") is not None else low
            if high < low:
                raise MotifSyntaxError(pos, f"repeat range ({low},{high}) is inverted")
            if high < 1:
                raise MotifSyntaxError(pos, "repeat count must be >= 1")
            elem = Repeat(elem, low, high)
        elements.append(elem)
        pos += len(chunk) + 1
    return MotifPattern(source, tuple(elements), anchored_start, anchored_end)


def _char_matches(elem, ch: str) -> bool:
    if isinstance(elem, Literal):
        return ch == elem.residue
    if isinstance(elem, AnyOf):
        return ch in elem.residues
    if isinstance(elem, NoneOf):
        return ch not in elem.residues
    return True  # wildcard


def _advance(elem, residues: str, positions: set) -> set:
    """Positions reachable after matching one grammar element."""
    if isinstance(elem, Repeat):
        reachable = set()
        cur = positions
        for count in range(1, elem.high + 1):
            cur = {p + 1 for p in cur if p < len(residues) and _char_matches(elem.element, residues[p])}
            if not cur:
                break
            if count >= elem.low:
                reachable |= cur
        if elem.low == 0:
            reachable |= positions
        return reachable
    return {
        p + 1 for p in positions if p < len(residues) and _char_matches(elem, residues[p])
    }


def scan_motif(pattern: MotifPattern, s: Sequence) -> list:
    """All (start, end) half-open matches of the pattern, overlapping
    matches included, ascending by start then end.

    Variable-width patterns can report several ends for one start.
    Anchors restrict matches to the sequence start and/or end.
    """
    if s.alphabet.kind != "protein":
        raise WrongAlphabet("motif scan is defined for protein sequences")
    residues = s.residues
    n = len(residues)
    starts = [0] if pattern.anchored_start else range(n - pattern.min_span + 1)
    out = []
    for i in starts:
        positions = {i}
        for elem in pattern.elements:
            positions = _advance(elem, residues, positions)
            if not positions:
                break
        for j in sorted(positions):
            if pattern.anchored_end and j != n:
                continue
            out.append((i, j))
    out.sort()
    return out
