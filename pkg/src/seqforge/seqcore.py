"""Alphabets, validated sequences, and strand-level operations.

Covers input cleanup and validation, complement/reverse complement,
base-parity statistics, windowed composition, hairpin detection, and
greedy fragment assembly.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .errors import (
    AlphabetMismatch,
    EmptySequence,
    InvalidResidue,
    WindowTooLarge,
    WrongAlphabet,
)

__all__ = [
    "Alphabet",
    "Sequence",
    "DNA",
    "RNA",
    "PROTEIN",
    "PROTEIN_WITH_STOP",
    "validate",
    "complement",
    "reverse_complement",
    "parity_stats",
    "composition_windows",
    "find_hairpins",
    "assemble_fragments",
    "ParityStats",
    "CompositionReport",
    "Hairpin",
    "Contig",
    "AssemblyResult",
]

_WHITESPACE = set(" \t\r\n\v\f")


@dataclass(frozen=True)
class Alphabet:
    """A residue alphabet.

    kind is one of "dna", "rna", "protein". ambiguity lists characters
    that lenient validation collapses to the wildcard symbol; the
    wildcard itself is only present in leniently validated sequences.
    """

    kind: str
    symbols: frozenset
    ambiguity: frozenset
    wildcard: str

    @property
    def is_nucleic(self) -> bool:
        return self.kind in ("dna", "rna")


DNA = Alphabet("dna", frozenset("ACGT"), frozenset("NRYSWKMBDHV"), "N")
RNA = Alphabet("rna", frozenset("ACGU"), frozenset("NRYSWKMBDHV"), "N")
PROTEIN = Alphabet(
    "protein", frozenset("ACDEFGHIKLMNPQRSTVWY"), frozenset("XBZJUO"), "X"
)
# Run-through translation products carry '*' stop marks; everything else
# about them behaves like a protein sequence.
PROTEIN_WITH_STOP = Alphabet(
    "protein", frozenset("ACDEFGHIKLMNPQRSTVWY*"), frozenset("XBZJUO"), "X"
)


@dataclass(frozen=True)
class Sequence:
    """A validated sequence with identity.

    id: short token without whitespace. description: free text, may be
    empty. residues: uppercase, drawn from the alphabet (plus its
    wildcard for leniently validated input).
    """

    id: str
    description: str
    alphabet: Alphabet
    residues: str

    def __len__(self) -> int:
        return len(self.residues)

    def __str__(self) -> str:
        return self.residues


def validate(
    raw: str,
    alphabet: Alphabet,
    *,
    lenient: bool = False,
    letters_only: bool = False,
    seq_id: str = "seq",
    description: str = "",
) -> Sequence:
    """Clean and validate raw text into a Sequence.

    Whitespace is always removed and letters are uppercased. With
    letters_only=True, digits and punctuation (sequence coordinates,
    separators in pasted text) are dropped too. In lenient mode,
    ambiguity codes collapse to the alphabet's wildcard; in strict mode
    they are rejected.

    Raises:
        EmptySequence: nothing left after cleanup.
        InvalidResidue: first offending character (position counted in
            the cleaned string).
    """
    chars = []
    for ch in raw:
        if ch in _WHITESPACE:
            continue
        if letters_only and not ch.isalpha():
            continue
        chars.append(ch.upper())
    if not chars:
        raise EmptySequence("no residues after cleanup")
    out = []
    for pos, ch in enumerate(chars):
        if ch in alphabet.symbols:
            out.append(ch)
        elif lenient and ch in alphabet.ambiguity:
            out.append(alphabet.wildcard)
        else:
            raise InvalidResidue(pos, ch)
    return Sequence(seq_id, description, alphabet, "".join(out))


_DNA_COMPLEMENT = str.maketrans("ACGTN", "TGCAN")


def complement(s: Sequence) -> Sequence:
    """Position-wise complement of a DNA sequence (A<->T, C<->G, N->N)."""
    if s.alphabet.kind != "dna":
        raise WrongAlphabet("complement is defined for DNA input")
    return Sequence(s.id, s.description, s.alphabet, s.residues.translate(_DNA_COMPLEMENT))


def reverse_complement(s: Sequence) -> Sequence:
    """Complement read in reverse orientation. Involution: applying it twice returns the input."""
    if s.alphabet.kind != "dna":
        raise WrongAlphabet("reverse complement is defined for DNA input")
    return Sequence(
        s.id, s.description, s.alphabet, s.residues.translate(_DNA_COMPLEMENT)[::-1]
    )


@dataclass(frozen=True)
class ParityStats:
    """Base counts and strand-parity deviations for one strand."""

    a: int
    c: int
    g: int
    t: int
    deviation_at: float
    deviation_gc: float


def parity_stats(s: Sequence) -> ParityStats:
    """Count bases and measure departure from A=T and G=C parity.

    deviation_at = |A - T| / (A + T), zero when the denominator is zero;
    deviation_gc likewise. Wildcards are not counted.
    """
    if s.alphabet.kind != "dna":
        raise WrongAlphabet("parity statistics are defined for DNA input")
    c = Counter(s.residues)
    a, cc, g, t = c["A"], c["C"], c["G"], c["T"]
    dev_at = abs(a - t) / (a + t) if a + t else 0.0
    dev_gc = abs(g - cc) / (g + cc) if g + cc else 0.0
    return ParityStats(a, cc, g, t, dev_at, dev_gc)


@dataclass
class CompositionReport:
    """Residue counts over sliding windows plus whole-sequence totals.

    counts[i] holds the symbol counts for the window starting at
    offsets[i]; zero counts are omitted. totals covers the entire
    sequence regardless of window coverage.
    """

    window: int
    step: int
    offsets: list = field(default_factory=list)
    counts: list = field(default_factory=list)
    totals: dict = field(default_factory=dict)

    def gc_fraction(self) -> float:
        total = sum(self.totals.values())
        gc = self.totals.get("G", 0) + self.totals.get("C", 0)
        return gc / total if total else 0.0


def composition_windows(
    s: Sequence, window: int, step: int | None = None, include_partial: bool = False
) -> CompositionReport:
    """Count residues in windows at offsets 0, step, 2*step, ...

    A window is emitted while offset + window <= len(s); with
    include_partial=True one trailing shorter window is added when the
    tail is not already covered.
    """
    if step is None:
        step = window
    if window < 1:
        raise ValueError("window must be >= 1")
    if step < 1:
        raise ValueError("step must be >= 1")
    n = len(s)
    if window > n:
        raise WindowTooLarge(f"window {window} exceeds sequence length {n}")
    report = CompositionReport(window=window, step=step, totals=dict(Counter(s.residues)))
    offset = 0
    while offset + window <= n:
        report.offsets.append(offset)
        report.counts.append(dict(Counter(s.residues[offset : offset + window])))
        offset += step
    if include_partial and offset < n:
        report.offsets.append(offset)
        report.counts.append(dict(Counter(s.residues[offset:])))
    return report


# Exact Watson-Crick pairs only; no G.U wobble.
_PAIRS = {("A", "T"), ("T", "A"), ("C", "G"), ("G", "C"), ("A", "U"), ("U", "A")}


def _pairs(x: str, y: str) -> bool:
    return (x, y) in _PAIRS


@dataclass(frozen=True)
class Hairpin:
    """A fold-back stem: stem complementary pairs around an unpaired loop.

    pairs lists (left, right) residue indices from the innermost pair
    outward; loop spans [loop_start, loop_end).
    """

    stem: int
    loop_start: int
    loop_end: int
    pairs: tuple

    @property
    def start(self) -> int:
        return self.pairs[-1][0]

    @property
    def end(self) -> int:
        return self.pairs[-1][1] + 1


def find_hairpins(
    s: Sequence, min_stem: int = 2, min_loop: int = 3, max_loop: int = 8
) -> list:
    """Find all maximal hairpins with stem >= min_stem and loop length
    within [min_loop, max_loop].

    Maximal means the stem extends outward as far as pairing allows and
    the loop cannot shrink further (its flanks do not pair, or shrinking
    would drop below min_loop). Results are ordered by start index, then
    by descending stem length.
    """
    if not s.alphabet.is_nucleic:
        raise WrongAlphabet("hairpins are defined for nucleic sequences")
    if min_stem < 2:
        raise ValueError("min_stem must be >= 2")
    if min_loop < 1:
        raise ValueError("min_loop must be >= 1")
    if max_loop < min_loop:
        raise ValueError("max_loop must be >= min_loop")
    r = s.residues
    n = len(r)
    found = []
    for a in range(1, n):  # loop start; needs one base to its left
        for length in range(min_loop, max_loop + 1):
            b = a + length
            if b > n - 1:
                break
            # Inward-maximal: the loop flanks must not pair while a
            # shorter loop would still be allowed.
            if length - 2 >= min_loop and _pairs(r[a], r[b - 1]):
                continue
            k = 0
            while a - 1 - k >= 0 and b + k < n and _pairs(r[a - 1 - k], r[b + k]):
                k += 1
            if k >= min_stem:
                pairs = tuple((a - 1 - t, b + t) for t in range(k))
                found.append(Hairpin(k, a, b, pairs))
    found.sort(key=lambda h: (h.start, -h.stem, h.loop_start))
    return found


@dataclass(frozen=True)
class Contig:
    """One assembled stretch with the placement of every member fragment.

    placements: tuple of (input_index, fragment_id, offset), sorted by
    offset then input index.
    """

    sequence: Sequence
    placements: tuple


@dataclass(frozen=True)
class AssemblyResult:
    contigs: tuple


def _best_overlap(x: str, y: str, min_overlap: int):
    """Largest merge of x followed by y.

    Returns (overlap, merged, y_offset) or None. Containment of y in x
    counts as an overlap of len(y).
    """
    pos = x.find(y)
    if pos >= 0 and len(y) >= min_overlap:
        return len(y), x, pos
    top = min(len(x), len(y)) - 1
    for t in range(top, min_overlap - 1, -1):
        if x.endswith(y[:t]):
            return t, x + y[t:], len(x) - t
    return None


def assemble_fragments(fragments: list, min_overlap: int) -> AssemblyResult:
    """Greedy assembly by largest exact suffix/prefix overlap.

    Repeatedly merges the pair of working contigs with the largest
    overlap >= min_overlap; ties prefer the lexicographically smallest
    merged string, then earliest pair. Fragments that never reach
    min_overlap stay as separate contigs. Every input fragment appears
    as a substring of exactly one output contig.
    """
    if min_overlap < 1:
        raise ValueError("min_overlap must be >= 1")
    if not fragments:
        raise EmptySequence("no fragments to assemble")
    kinds = {f.alphabet.kind for f in fragments}
    if len(kinds) > 1:
        raise AlphabetMismatch(f"mixed alphabets: {sorted(kinds)}")

    # units: [string, [(input_index, offset), ...]]
    units = [[f.residues, [(i, 0)]] for i, f in enumerate(fragments)]
    while len(units) > 1:
        best = None  # (overlap, merged, i, j, y_offset)
        for i in range(len(units)):
            for j in range(len(units)):
                if i == j:
                    continue
                hit = _best_overlap(units[i][0], units[j][0], min_overlap)
                if hit is None:
                    continue
                t, merged, off = hit
                if best is None or t > best[0] or (t == best[0] and merged < best[1]):
                    best = (t, merged, i, j, off)
        if best is None:
            break
        _, merged, i, j, off = best
        members = units[i][1] + [(idx, o + off) for idx, o in units[j][1]]
        keep = [u for k, u in enumerate(units) if k not in (i, j)]
        units = keep + [[merged, members]]

    alphabet = fragments[0].alphabet
    units.sort(key=lambda u: min(idx for idx, _ in u[1]))
    contigs = []
    for k, (residues, members) in enumerate(units, start=1):
        members.sort(key=lambda m: (m[1], m[0]))
        placements = tuple(
            (idx, fragments[idx].id, off) for idx, off in members
        )
        contigs.append(
            Contig(Sequence(f"contig{k}", "", alphabet, residues), placements)
        )
    return AssemblyResult(tuple(contigs))
