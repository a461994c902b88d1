"""Genetic code, translation, reading frames, and gene-signal scans.

Translation reads DNA directly by treating T as U; there is no need to
transcribe first (the two routes are equivalent and tested as such).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .errors import TooShort, WrongAlphabet
from .seqcore import (
    DNA,
    PROTEIN,
    PROTEIN_WITH_STOP,
    RNA,
    Sequence,
    reverse_complement,
)

__all__ = [
    "CODON_TABLE",
    "START_CODON",
    "STOP_CODONS",
    "transcribe",
    "translate",
    "six_frame",
    "find_orfs",
    "splice_candidates",
    "Orf",
    "SpliceCandidate",
]

# Standard genetic code over RNA codons, laid out in codon-wheel order
# (first base U, C, A, G; same for the second and third base).
_BASES = "UCAG"
_AMINO = "FFLLSSSSYY**CC*WLLLLPPPPHHQQRRRRIIIMTTTTNNKKSSRRVVVVAAAADDEEGGGG"
CODON_TABLE = {
    "".join(codon): aa for codon, aa in zip(product(_BASES, repeat=3), _AMINO)
}

START_CODON = "AUG"
STOP_CODONS = frozenset(c for c, aa in CODON_TABLE.items() if aa == "*")


def transcribe(s: Sequence) -> Sequence:
    """DNA to RNA: T becomes U on the same strand."""
    if s.alphabet.kind != "dna":
        raise WrongAlphabet("only DNA is transcribed")
    return Sequence(s.id, s.description, RNA, s.residues.replace("T", "U"))


def _codon_string(s: Sequence, frame: int) -> str:
    """Residues read in the given frame, as RNA letters."""
    if frame not in (1, 2, 3, -1, -2, -3):
        raise ValueError("frame must be one of +-1, +-2, +-3")
    if s.alphabet.kind == "dna":
        residues = s.residues if frame > 0 else reverse_complement(s).residues
        residues = residues.replace("T", "U")
    elif s.alphabet.kind == "rna":
        if frame < 0:
            raise WrongAlphabet("reverse frames need DNA input")
        residues = s.residues
    else:
        raise WrongAlphabet("translation needs nucleic input")
    return residues[abs(frame) - 1 :]


def translate(s: Sequence, frame: int = 1, to_stop: bool = False) -> Sequence:
    """Translate one reading frame.

    frame: +1..+3 read the given strand at offsets 0..2; -1..-3 read the
    reverse complement (DNA only). The trailing partial codon is
    ignored. By default translation runs through stop codons, rendering
    them as '*'; with to_stop=True the peptide ends just before the
    first stop. Codons containing a wildcard translate to 'X'.

    Raises TooShort when the frame holds no complete codon.
    """
    residues = _codon_string(s, frame)
    if len(residues) < 3:
        raise TooShort(f"frame {frame:+d} of {s.id} has no complete codon")
    out = []
    for i in range(0, len(residues) - 2, 3):
        aa = CODON_TABLE.get(residues[i : i + 3], "X")
        if aa == "*" and to_stop:
            break
        out.append(aa)
    alphabet = PROTEIN if to_stop else PROTEIN_WITH_STOP
    return Sequence(s.id, s.description, alphabet, "".join(out))


def six_frame(s: Sequence) -> dict:
    """Run-through translations of all six reading frames of a DNA
    sequence, keyed +1..+3 and -1..-3.

    Frames whose offset leaves no complete codon map to an empty
    peptide; only |s| < 3 is an error.
    """
    if s.alphabet.kind != "dna":
        raise WrongAlphabet("six-frame translation needs DNA input")
    if len(s) < 3:
        raise TooShort("need at least one codon")
    frames = {}
    for f in (1, 2, 3, -1, -2, -3):
        try:
            frames[f] = translate(s, f)
        except TooShort:
            frames[f] = Sequence(s.id, s.description, PROTEIN_WITH_STOP, "")
    return frames


@dataclass(frozen=True)
class Orf:
    """An open reading frame.

    start/end are a half-open range on the forward strand, beginning at
    the ATG and ending just before the stop codon (or at the last
    complete codon for an open 3' end). The peptide includes the
    initial Met and no stop mark.
    """

    frame: int
    start: int
    end: int
    peptide: Sequence


_DNA_STOPS = ("TAA", "TAG", "TGA")


def find_orfs(
    s: Sequence,
    min_peptide: int = 1,
    include_nested: bool = False,
    include_open: bool = False,
) -> list:
    """Scan all six frames for ATG..stop reading frames.

    By default only maximal ORFs are reported (the first ATG after the
    previous in-frame stop); include_nested adds ORFs starting at later
    ATGs that share a stop. ORFs running into the sequence end without
    a stop are excluded unless include_open is set. Results are sorted
    by frame (+1, +2, +3, -1, -2, -3) then start.
    """
    if s.alphabet.kind != "dna":
        raise WrongAlphabet("ORF scan needs DNA input")
    if min_peptide < 1:
        raise ValueError("min_peptide must be >= 1")
    n = len(s)
    out = []
    for sign, residues in ((1, s.residues), (-1, reverse_complement(s).residues)):
        for offset in range(3):
            frame = sign * (offset + 1)
            starts = []  # open ATG codon positions since the last stop
            for pos in range(offset, n - 2, 3):
                codon = residues[pos : pos + 3]
                if codon == "ATG":
                    starts.append(pos)
                elif codon in _DNA_STOPS:
                    out.extend(
                        _make_orf(s, sign, p, pos, residues)
                        for p in (starts if include_nested else starts[:1])
                    )
                    starts = []
            if include_open and starts:
                stop_pos = offset + 3 * ((n - offset) // 3)  # past last full codon
                out.extend(
                    _make_orf(s, sign, p, stop_pos, residues)
                    for p in (starts if include_nested else starts[:1])
                )
    out = [o for o in out if len(o.peptide) >= min_peptide]
    out.sort(key=lambda o: (o.frame < 0, abs(o.frame), o.start))
    return out


def _make_orf(s: Sequence, sign: int, atg: int, stop: int, residues: str) -> Orf:
    n = len(s)
    rna = residues[atg:stop].replace("T", "U")
    pep = "".join(CODON_TABLE.get(rna[i : i + 3], "X") for i in range(0, len(rna), 3))
    if sign > 0:
        start, end = atg, stop
    else:
        start, end = n - stop, n - atg
    frame = sign * (atg % 3 + 1)
    peptide = Sequence(f"{s.id}|{frame:+d}:{start}-{end}", "", PROTEIN, pep)
    return Orf(frame, start, end, peptide)


@dataclass(frozen=True)
class SpliceCandidate:
    """A GT..AG intron candidate: GT at donor, AG at [acceptor, acceptor+2)."""

    donor: int
    acceptor: int
    span: int


def splice_candidates(
    s: Sequence, min_intron: int = 20, max_intron: int | None = None
) -> list:
    """All donor/acceptor pairs: GT at the donor, AG ending the intron.

    span = acceptor + 2 - donor must lie within [min_intron, max_intron].
    The default minimum of 20 is a convention, not biology; tune it per
    genome. Results ascend by donor, then acceptor.
    """
    if s.alphabet.kind != "dna":
        raise WrongAlphabet("splice scan needs DNA input")
    if min_intron < 4:
        raise ValueError("min_intron must be >= 4 (GT..AG needs 4 bases)")
    r = s.residues
    donors = [i for i in range(len(r) - 1) if r[i : i + 2] == "GT"]
    acceptors = [j for j in range(len(r) - 1) if r[j : j + 2] == "AG"]
    out = []
    for i in donors:
        for j in acceptors:
            if j <= i:
                continue
            span = j + 2 - i
            if span < min_intron:
                continue
            if max_intron is not None and span > max_intron:
                continue
            out.append(SpliceCandidate(i, j, span))
    return out
