"""Append-only record store with field-tagged boolean search and
precomputed sequence-similarity links.

The log holds one entry per record: a decimal byte count on its own
line, then that many bytes of canonical JSON, then a newline. Entries
embed the record plus its sequence, so the log alone rebuilds the
store; the index/ directory and neighbors.tsv are derived artifacts.
"""

import json
import os
import re
from contextlib import contextmanager
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path

from .align import ktup_search
from .errors import (
    CorruptStore,
    DuplicateAccession,
    QuerySyntaxError,
    StoreLocked,
    UnknownField,
)
from .formats import FastaDoc, GenBankRecord
from .seqcore import DNA, PROTEIN, PROTEIN_WITH_STOP, RNA, Sequence

FIELDS = ("all", "ti", "au", "mh", "dp", "pt", "la")


@dataclass(frozen=True)
class Record:
    accession: str
    definition: str = ""
    organism: str = ""
    authors: tuple = ()
    date: str = ""
    mesh_terms: tuple = ()
    publication_types: tuple = ()
    language: str = ""


# -- tokenization -----------------------------------------------------

_TOKEN_RE = re.compile(r"[a-z0-9]+")
_HYPHENATED_RE = re.compile(r"[A-Za-z0-9]+(?:-[A-Za-z0-9]+)+")


def tokenize(text: str):
    """Lowercased alphanumeric runs; everything else separates."""
    return _TOKEN_RE.findall(text.lower())


def _joined_forms(text: str):
    # hyphenated words are additionally searchable as one token
    return [m.group(0).replace("-", "").lower() for m in _HYPHENATED_RE.finditer(text)]


def _field_texts(record: Record) -> dict:
    return {
        "ti": [record.definition],
        "au": list(record.authors),
        "mh": list(record.mesh_terms),
        "dp": [record.date],
        "pt": list(record.publication_types),
        "la": [record.language],
    }


def _index_entry(record: Record):
    """Per-field token streams (for phrases) and token sets (for terms,
    including joined hyphenated forms)."""
    texts = _field_texts(record)
    streams = {}
    sets = {}
    for f, items in texts.items():
        streams[f] = [tokenize(t) for t in items if t.strip()]
        bag = set()
        for t in items:
            bag.update(tokenize(t))
            bag.update(_joined_forms(t))
        sets[f] = bag
    extras = [record.accession, record.organism]
    streams["all"] = [s for f in FIELDS[1:] for s in streams[f]]
    streams["all"] += [tokenize(t) for t in extras if t.strip()]
    sets["all"] = set().union(*sets.values())
    for t in extras:
        sets["all"].update(tokenize(t))
        sets["all"].update(_joined_forms(t))
    return streams, sets


# -- query language ---------------------------------------------------


@dataclass(frozen=True)
class Term:
    text: str
    field: str = "all"


@dataclass(frozen=True)
class Phrase:
    words: tuple
    field: str = "all"


@dataclass(frozen=True)
class Truncated:
    prefix: str
    field: str = "all"


@dataclass(frozen=True)
class And:
    left: object
    right: object


@dataclass(frozen=True)
class Or:
    left: object
    right: object


@dataclass(frozen=True)
class Not:
    operand: object


_WORD_RE = re.compile(r"[A-Za-z0-9*-]+")


def _lex(text: str):
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
        elif c == "(":
            tokens.append(("lparen", c, i))
            i += 1
        elif c == ")":
            tokens.append(("rparen", c, i))
            i += 1
        elif c == "[":
            j = text.find("]", i)
            if j < 0:
                raise QuerySyntaxError(i, "unclosed field tag")
            tokens.append(("tag", text[i + 1 : j].strip().lower(), i))
            i = j + 1
        elif c == '"':
            j = text.find('"', i + 1)
            if j < 0:
                raise QuerySyntaxError(i, "unclosed quote")
            tokens.append(("quoted", text[i + 1 : j], i))
            i = j + 1
        else:
            m = _WORD_RE.match(text, i)
            if not m:
                raise QuerySyntaxError(i, f"unexpected character {c!r}")
            word = m.group(0)
            if word in ("AND", "OR", "NOT"):
                tokens.append(("op", word, i))
            else:
                tokens.append(("word", word, i))
            i = m.end()
    return tokens


class _Cursor:
    def __init__(self, tokens, end):
        self.tokens = tokens
        self.pos = 0
        self.end = end

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self):
        t = self.peek()
        if t is not None:
            self.pos += 1
        return t


def parse_query(text: str):
    """Boolean query over tagged fields. Uppercase AND/OR/NOT are
    operators (equal precedence, left to right); plain adjacency also
    means AND and binds tighter than either. A [tag] scopes the word
    or quoted phrase it follows; a trailing * truncates."""
    tokens = _lex(text)
    if not tokens:
        raise QuerySyntaxError(0, "empty query")
    cur = _Cursor(tokens, len(text))
    node = _parse_expr(cur)
    left = cur.peek()
    if left is not None:
        raise QuerySyntaxError(left[2], f"unexpected {left[1]!r}")
    return node


def _parse_expr(cur):
    node = _parse_group(cur)
    while True:
        t = cur.peek()
        if t is not None and t[0] == "op" and t[1] in ("AND", "OR"):
            cur.take()
            right = _parse_group(cur)
            node = And(node, right) if t[1] == "AND" else Or(node, right)
        else:
            return node


def _parse_group(cur):
    node = _parse_unary(cur)
    while True:
        t = cur.peek()
        starts_term = t is not None and (
            t[0] in ("word", "quoted", "lparen")
            or (t[0] == "op" and t[1] == "NOT")
        )
        if not starts_term:
            return node
        node = And(node, _parse_unary(cur))


def _parse_unary(cur):
    t = cur.peek()
    if t is not None and t[0] == "op" and t[1] == "NOT":
        cur.take()
        return Not(_parse_unary(cur))
    return _parse_atom(cur)


def _take_field(cur) -> str:
    t = cur.peek()
    if t is None or t[0] != "tag":
        return "all"
    cur.take()
    if t[1] not in FIELDS:
        raise UnknownField(t[1])
    return t[1]


def _parse_atom(cur):
    t = cur.take()
    if t is None:
        raise QuerySyntaxError(cur.end, "query ends where a term was expected")
    kind, value, pos = t
    if kind == "lparen":
        node = _parse_expr(cur)
        closing = cur.take()
        if closing is None or closing[0] != "rparen":
            raise QuerySyntaxError(pos, "unbalanced parenthesis")
        after = cur.peek()
        if after is not None and after[0] == "tag":
            raise QuerySyntaxError(after[2], "field tag cannot follow a group")
        return node
    if kind == "quoted":
        words = tuple(tokenize(value))
        if not words:
            raise QuerySyntaxError(pos, "empty phrase")
        return Phrase(words, _take_field(cur))
    if kind == "word":
        if "*" in value:
            if not value.endswith("*") or "*" in value[:-1]:
                raise QuerySyntaxError(pos, "truncation marker must end the word")
            prefix = value[:-1].lower()
            if not prefix.isalnum():
                raise QuerySyntaxError(pos, "nothing to truncate")
            return Truncated(prefix, _take_field(cur))
        return Term(value.lower(), _take_field(cur))
    if kind == "tag":
        raise QuerySyntaxError(pos, "field tag needs a preceding term")
    if kind == "rparen":
        raise QuerySyntaxError(pos, "unexpected ')'")
    raise QuerySyntaxError(pos, f"operator {value!r} needs a left operand")


def _phrase_in(words, streams) -> bool:
    need = list(words)
    k = len(need)
    for stream in streams:
        for off in range(len(stream) - k + 1):
            if stream[off : off + k] == need:
                return True
    return False


def evaluate(node, entries) -> set:
    """Resolve a parsed query to the matching accession set. `entries`
    maps accession -> (streams, sets) as built by the store; NOT
    complements against every known accession."""
    universe = set(entries)

    def ev(n):
        if isinstance(n, Term):
            toks = tokenize(n.text)
            if not toks:
                return set()
            if len(toks) == 1:
                return {a for a, (_, se) in entries.items() if toks[0] in se[n.field]}
            return {a for a, (st, _) in entries.items() if _phrase_in(toks, st[n.field])}
        if isinstance(n, Phrase):
            return {a for a, (st, _) in entries.items() if _phrase_in(n.words, st[n.field])}
        if isinstance(n, Truncated):
            return {
                a
                for a, (_, se) in entries.items()
                if any(tok.startswith(n.prefix) for tok in se[n.field])
            }
        if isinstance(n, And):
            return ev(n.left) & ev(n.right)
        if isinstance(n, Or):
            return ev(n.left) | ev(n.right)
        if isinstance(n, Not):
            return universe - ev(n.operand)
        raise TypeError(f"not a query node: {n!r}")

    return ev(node)


# -- persistence ------------------------------------------------------


@dataclass(frozen=True)
class NeighborLink:
    source: str
    target: str
    score: int
    method: str


def _record_to_json(record: Record) -> dict:
    return {
        "accession": record.accession,
        "definition": record.definition,
        "organism": record.organism,
        "authors": list(record.authors),
        "date": record.date,
        "mesh_terms": list(record.mesh_terms),
        "publication_types": list(record.publication_types),
        "language": record.language,
    }


def _record_from_json(d: dict) -> Record:
    return Record(
        accession=d["accession"],
        definition=d.get("definition", ""),
        organism=d.get("organism", ""),
        authors=tuple(d.get("authors", ())),
        date=d.get("date", ""),
        mesh_terms=tuple(d.get("mesh_terms", ())),
        publication_types=tuple(d.get("publication_types", ())),
        language=d.get("language", ""),
    )


def _sequence_to_json(seq):
    if seq is None:
        return None
    return {
        "id": seq.id,
        "description": seq.description,
        "kind": seq.alphabet.kind,
        "residues": seq.residues,
    }


def _sequence_from_json(d):
    if d is None:
        return None
    kind = d["kind"]
    residues = d["residues"]
    if kind == "dna":
        alphabet = DNA
    elif kind == "rna":
        alphabet = RNA
    else:
        alphabet = PROTEIN_WITH_STOP if "*" in residues else PROTEIN
    return Sequence(d["id"], d.get("description", ""), alphabet, residues)


def _canonical(blob: dict) -> str:
    return json.dumps(blob, sort_keys=True, separators=(",", ":"))


def _authors_from_reference(block: str):
    lines = block.splitlines()
    collecting = False
    parts = []
    for ln in lines:
        keyword = ln[:12].strip()
        rest = ln[12:].strip()
        if keyword == "AUTHORS":
            collecting = True
            parts.append(rest)
        elif keyword and collecting:
            break
        elif collecting:
            parts.append(rest)
    text = " ".join(p for p in parts if p)
    if not text:
        return ()
    return tuple(
        chunk.strip()
        for chunk in text.replace(" and ", ", ").split(", ")
        if chunk.strip()
    )


class Store:
    """Record collection rooted at a directory. Open is read-only;
    every mutation takes the single-writer lock and refreshes the
    derived index files."""

    def __init__(self, path):
        self.path = Path(path)
        self.records = {}
        self._sequences = {}
        self._canon = {}
        self._entries = {}
        self._links = []
        self._valid_bytes = 0
        self._load_log()
        self._load_neighbors()

    # -- loading

    @property
    def _log_path(self) -> Path:
        return self.path / "records.log"

    @property
    def _neighbors_path(self) -> Path:
        return self.path / "neighbors.tsv"

    def _load_log(self):
        self.path.mkdir(parents=True, exist_ok=True)
        if not self._log_path.exists():
            self._log_path.touch()
        data = self._log_path.read_bytes()
        pos = 0
        n = len(data)
        while pos < n:
            nl = data.find(b"\n", pos)
            if nl < 0:
                break  # partial length line after a crash: drop it
            head = data[pos:nl]
            if not head.isdigit():
                raise CorruptStore(f"bad entry header at byte {pos}")
            need = int(head)
            start = nl + 1
            end = start + need
            if end + 1 > n:
                break  # payload cut short after a crash: drop it
            if data[end : end + 1] != b"\n":
                raise CorruptStore(f"entry at byte {pos} is not newline-terminated")
            try:
                blob = json.loads(data[start:end].decode("utf-8"))
                record = _record_from_json(blob["record"])
                seq = _sequence_from_json(blob.get("sequence"))
            except (ValueError, KeyError, TypeError) as exc:
                raise CorruptStore(f"unreadable entry at byte {pos}: {exc}") from None
            canon = _canonical(blob)
            acc = record.accession
            if acc in self._canon and self._canon[acc] != canon:
                raise DuplicateAccession(acc)
            self._admit(record, seq, canon)
            pos = end + 1
        self._valid_bytes = pos

    def _load_neighbors(self):
        if not self._neighbors_path.exists():
            return
        links = []
        for line in self._neighbors_path.read_text().splitlines():
            if not line.strip() or line.startswith("#"):
                continue
            source, target, score, method = line.split("\t")
            links.append(NeighborLink(source, target, int(score), method))
        self._links = links

    def _admit(self, record, seq, canon):
        acc = record.accession
        self.records[acc] = record
        self._sequences[acc] = seq
        self._canon[acc] = canon
        self._entries[acc] = _index_entry(record)

    # -- basic access

    def __len__(self):
        return len(self.records)

    def __contains__(self, accession):
        return accession in self.records

    def accessions(self):
        return sorted(self.records)

    def get(self, accession):
        if accession not in self.records:
            raise KeyError(accession)
        return self.records[accession], self._sequences[accession]

    def sequence(self, accession):
        return self.get(accession)[1]

    # -- writing

    @contextmanager
    def _lock(self):
        lock = self.path / ".lock"
        try:
            fd = os.open(lock, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
        except FileExistsError:
            raise StoreLocked(f"another writer holds {lock}") from None
        try:
            os.write(fd, f"{os.getpid()}\n".encode())
            os.close(fd)
            yield
        finally:
            lock.unlink(missing_ok=True)

    def _coerce(self, obj, sequence):
        if isinstance(obj, Record):
            return [(obj, sequence)]
        if isinstance(obj, GenBankRecord):
            authors = []
            for ref in obj.references:
                authors.extend(_authors_from_reference(ref))
            record = Record(
                accession=obj.accession,
                definition=obj.definition,
                organism=obj.organism,
                authors=tuple(authors),
            )
            seq = obj.sequence() if obj.origin else None
            return [(record, seq)]
        if isinstance(obj, FastaDoc):
            return [
                (Record(accession=e.id, definition=e.description), e)
                for e in obj.entries
            ]
        if isinstance(obj, Sequence):
            return [(Record(accession=obj.id, definition=obj.description), obj)]
        raise TypeError(f"cannot ingest {type(obj).__name__}")

    def ingest(self, obj, sequence=None) -> int:
        """Add records. Re-ingesting identical content is a no-op; the
        same accession with different content is refused. Returns how
        many records were new."""
        items = self._coerce(obj, sequence)
        added = 0
        with self._lock():
            size = self._log_path.stat().st_size
            if size > self._valid_bytes:
                # a crashed writer left a partial tail; cut it off
                with open(self._log_path, "r+b") as fh:
                    fh.truncate(self._valid_bytes)
            with open(self._log_path, "ab") as fh:
                for record, seq in items:
                    blob = {
                        "record": _record_to_json(record),
                        "sequence": _sequence_to_json(seq),
                    }
                    canon = _canonical(blob)
                    acc = record.accession
                    if acc in self._canon:
                        if self._canon[acc] == canon:
                            continue
                        raise DuplicateAccession(acc)
                    payload = canon.encode("utf-8")
                    fh.write(b"%d\n%s\n" % (len(payload), payload))
                    fh.flush()
                    self._valid_bytes += len(str(len(payload))) + len(payload) + 2
                    self._admit(record, seq, canon)
                    added += 1
            if added:
                self._write_index()
        return added

    def _write_index(self):
        index_dir = self.path / "index"
        index_dir.mkdir(exist_ok=True)
        for f in FIELDS:
            postings = {}
            for acc, (_, sets) in self._entries.items():
                for token in sets[f]:
                    postings.setdefault(token, []).append(acc)
            tmp = index_dir / f".{f}.tsv.tmp"
            with open(tmp, "w", encoding="utf-8") as fh:
                for token in sorted(postings):
                    fh.write(f"{token}\t{','.join(sorted(postings[token]))}\n")
            os.replace(tmp, index_dir / f"{f}.tsv")

    def rebuild_index(self):
        with self._lock():
            self._write_index()

    # -- search

    def query(self, text: str):
        """Accessions matching a boolean query, sorted."""
        return sorted(evaluate(parse_query(text), self._entries))

    # -- similarity links

    def build_neighbors(self, threshold=None, k=None, scheme=None) -> int:
        """Score all same-kind sequence pairs with the word-seeded
        search and persist links both ways. Returns the link count."""
        pairs = []
        with_seq = [
            (acc, self._sequences[acc])
            for acc in self.accessions()
            if self._sequences[acc] is not None
        ]
        for (acc_a, seq_a), (acc_b, seq_b) in combinations(with_seq, 2):
            if seq_a.alphabet.kind != seq_b.alphabet.kind:
                continue
            word = k if k is not None else (8 if seq_a.alphabet.is_nucleic else 3)
            if len(seq_a) < word or len(seq_b) < word:
                continue
            hits = ktup_search(seq_a, [seq_b], k=word, scheme=scheme, threshold=threshold)
            if not hits:
                continue
            score = hits[0][1].alignment.score
            method = f"ktup{word}"
            pairs.append(NeighborLink(acc_a, acc_b, score, method))
            pairs.append(NeighborLink(acc_b, acc_a, score, method))
        pairs.sort(key=lambda l: (l.source, -l.score, l.target))
        with self._lock():
            tmp = self.path / ".neighbors.tsv.tmp"
            with open(tmp, "w", encoding="utf-8") as fh:
                for link in pairs:
                    fh.write(
                        f"{link.source}\t{link.target}\t{link.score}\t{link.method}\n"
                    )
            os.replace(tmp, self._neighbors_path)
            self._links = pairs
        return len(pairs)

    def neighbors(self, accession):
        if accession not in self.records:
            raise KeyError(accession)
        mine = [l for l in self._links if l.source == accession]
        mine.sort(key=lambda l: (-l.score, l.target))
        return mine


def open_store(path) -> Store:
    return Store(path)
