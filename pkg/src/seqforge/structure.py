"""Secondary-structure heuristics for protein sequences: hydropathy
profiles, amphipathic helix faces, strand patterns, and weighted
consensus calls."""

from dataclasses import dataclass
from importlib import resources

import numpy as np

from .errors import LengthMismatch, UnknownResidue, WindowTooLarge, WrongAlphabet
from .seqcore import Sequence

# Side chains treated as hydrophobic for face/strand pattern matching.
HYDROPHOBIC = frozenset("LIVMFWYC")

LABELS = ("C", "H", "E")


@dataclass(frozen=True)
class HydropathyScale:
    name: str
    values: dict

    def __getitem__(self, residue: str) -> float:
        try:
            return self.values[residue]
        except KeyError:
            raise UnknownResidue(residue) from None


def parse_scale(text: str, name: str = "custom") -> HydropathyScale:
    values = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        residue, _, value = line.partition("\t")
        values[residue.strip()] = float(value)
    return HydropathyScale(name, values)


def load_scale(path, name: str | None = None) -> HydropathyScale:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return parse_scale(text, name or str(path))


def _default_scale() -> HydropathyScale:
    text = (
        resources.files("seqforge").joinpath("data/kyte_doolittle.tsv").read_text()
    )
    return parse_scale(text, "kyte-doolittle")


DEFAULT_SCALE = _default_scale()


def _check_protein(s: Sequence):
    if s.alphabet.is_nucleic:
        raise WrongAlphabet("structure prediction expects a protein sequence")


def hydropathy_profile(s: Sequence, window: int = 9, scale: HydropathyScale | None = None):
    """Centered moving average of per-residue hydropathy. The window
    must be odd; near the ends it shrinks to what fits."""
    _check_protein(s)
    if scale is None:
        scale = DEFAULT_SCALE
    if window < 1 or window % 2 == 0:
        raise ValueError("window must be a positive odd number")
    n = len(s)
    if window > n:
        raise WindowTooLarge(f"window {window} exceeds sequence length {n}")
    raw = np.array([scale[c] for c in s.residues], float)
    half = window // 2
    out = np.empty(n, float)
    for i in range(n):
        lo = max(0, i - half)
        hi = min(n, i + half + 1)
        out[i] = raw[lo:hi].mean()
    return out


def detect_helix(s: Sequence, hydrophobic=HYDROPHOBIC, min_len: int = 8):
    """Find amphipathic helix candidates: an 8-residue frame whose
    positions 0,3,4,7 are hydrophobic while 1,2,5,6 are not puts one
    hydrophobic stripe on a helical face. Overlapping frames merge."""
    _check_protein(s)
    r = s.residues
    mask = [c in hydrophobic for c in r]
    n = len(r)
    spans = []
    for i in range(n - 7):
        face = mask[i] and mask[i + 3] and mask[i + 4] and mask[i + 7]
        back = mask[i + 1] or mask[i + 2] or mask[i + 5] or mask[i + 6]
        if face and not back:
            if spans and i <= spans[-1][1]:
                spans[-1] = (spans[-1][0], i + 8)
            else:
                spans.append((i, i + 8))
    return [(a, b) for a, b in spans if b - a >= min_len]


@dataclass(frozen=True)
class StrandSpan:
    start: int
    end: int
    kind: str  # "half-buried" or "buried"


def detect_strand(s: Sequence, hydrophobic=HYDROPHOBIC, min_alt: int = 4, min_run: int = 4):
    """Strand candidates of two textures: half-buried stretches where
    hydrophobicity alternates every position, and buried stretches of
    consecutive hydrophobics. The two kinds may overlap."""
    _check_protein(s)
    mask = [c in hydrophobic for c in s.residues]
    n = len(mask)
    out = []
    start = 0
    for i in range(1, n + 1):
        if i == n or mask[i] == mask[i - 1]:
            if i - start >= min_alt:
                out.append(StrandSpan(start, i, "half-buried"))
            start = i
    i = 0
    while i < n:
        if mask[i]:
            j = i
            while j < n and mask[j]:
                j += 1
            if j - i >= min_run:
                out.append(StrandSpan(i, j, "buried"))
            i = j
        else:
            i += 1
    out.sort(key=lambda t: (t.start, t.end, t.kind))
    return out


@dataclass(frozen=True)
class SsPrediction:
    labels: str
    method: str
    confidence: tuple

    def __post_init__(self):
        if len(self.labels) != len(self.confidence):
            raise LengthMismatch("one confidence value per labeled residue")
        bad = set(self.labels) - set(LABELS)
        if bad:
            raise ValueError(f"unknown state labels: {sorted(bad)}")

    def __len__(self):
        return len(self.labels)


def predict_secondary(s: Sequence, hydrophobic=HYDROPHOBIC) -> SsPrediction:
    """Single-sequence call from the pattern detectors. Helix beats
    strand where they overlap; unflagged positions are coil. Flagged
    positions carry confidence 1.0, coil 0.5."""
    _check_protein(s)
    labels = ["C"] * len(s)
    for span in detect_strand(s, hydrophobic):
        for i in range(span.start, span.end):
            labels[i] = "E"
    for a, b in detect_helix(s, hydrophobic):
        for i in range(a, b):
            labels[i] = "H"
    conf = tuple(1.0 if lab != "C" else 0.5 for lab in labels)
    return SsPrediction("".join(labels), "pattern", conf)


def consensus(predictions, weights=None) -> SsPrediction:
    """Weighted per-position plurality over equal-length predictions.
    A position whose top weight is shared falls back to coil; the
    confidence is the winning share of the total weight."""
    preds = list(predictions)
    if not preds:
        raise ValueError("no predictions to combine")
    if weights is None:
        weights = [1.0] * len(preds)
    weights = [float(w) for w in weights]
    if len(weights) != len(preds):
        raise LengthMismatch("one weight per prediction")
    if any(w <= 0 for w in weights):
        raise ValueError("weights must be positive")
    n = len(preds[0].labels)
    for p in preds:
        if len(p.labels) != n:
            raise LengthMismatch("predictions cover different lengths")
    total = sum(weights)
    labels = []
    conf = []
    for i in range(n):
        tally = dict.fromkeys(LABELS, 0.0)
        for p, w in zip(preds, weights):
            tally[p.labels[i]] += w
        top = max(tally.values())
        winners = [lab for lab in LABELS if tally[lab] == top]
        labels.append(winners[0] if len(winners) == 1 else "C")
        conf.append(top / total)
    return SsPrediction("".join(labels), "consensus", tuple(conf))


def render_prediction(s: Sequence, pred: SsPrediction) -> str:
    """One row per residue: 1-based index, residue, state, confidence."""
    if len(s) != len(pred):
        raise LengthMismatch("prediction does not cover the sequence")
    rows = [
        f"{i + 1}\t{s.residues[i]}\t{pred.labels[i]}\t{pred.confidence[i]:.3f}"
        for i in range(len(s))
    ]
    return "\n".join(rows) + "\n"


def parse_prediction(text: str):
    """Inverse of render_prediction; returns (residues, prediction)."""
    residues = []
    labels = []
    conf = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 4:
            raise ValueError(f"expected 4 tab-separated fields, got {len(parts)}")
        residues.append(parts[1])
        labels.append(parts[2])
        conf.append(float(parts[3]))
    return "".join(residues), SsPrediction("".join(labels), "imported", tuple(conf))
