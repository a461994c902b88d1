"""Peptide-mass fingerprinting: enzymatic digestion driven by cleavage
rules, monoisotopic peptide masses, and greedy peak matching against a
protein collection."""

import bisect
from dataclasses import dataclass, replace
from importlib import resources

from .errors import EmptySequence, UnknownResidue, WrongAlphabet
from .seqcore import PROTEIN, Sequence, validate

WATER = 18.01056
CARBAMIDOMETHYL = 57.02146  # fixed cysteine alkylation, applied by default


@dataclass(frozen=True)
class DigestRule:
    name: str
    cleave_after: frozenset
    blocked_by: frozenset


@dataclass(frozen=True)
class MassTable:
    values: dict
    water: float = WATER
    fixed_mods: dict = None

    def __post_init__(self):
        if self.fixed_mods is None:
            object.__setattr__(self, "fixed_mods", {})

    def residue_mass(self, residue: str) -> float:
        try:
            base = self.values[residue]
        except KeyError:
            raise UnknownResidue(residue) from None
        return base + self.fixed_mods.get(residue, 0.0)

    def without_fixed_mods(self) -> "MassTable":
        return replace(self, fixed_mods={})


def _read_data(name: str) -> str:
    return resources.files("seqforge").joinpath(f"data/{name}").read_text()


def parse_mass_table(text: str, fixed_mods=None) -> MassTable:
    values = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        residue, _, mass = line.partition("\t")
        values[residue.strip()] = float(mass)
    return MassTable(values, fixed_mods=dict(fixed_mods or {}))


def default_mass_table() -> MassTable:
    return parse_mass_table(
        _read_data("monoisotopic.tsv"), fixed_mods={"C": CARBAMIDOMETHYL}
    )


def parse_rules(text: str) -> dict:
    rules = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        name, cleave, blocked = line.split("\t")
        rules[name] = DigestRule(
            name,
            frozenset(cleave),
            frozenset() if blocked == "-" else frozenset(blocked),
        )
    return rules


def default_rules() -> dict:
    return parse_rules(_read_data("enzymes.tsv"))


_TABLE = default_mass_table()
_RULES = default_rules()


def _resolve_rule(rule) -> DigestRule:
    if isinstance(rule, DigestRule):
        return rule
    try:
        return _RULES[rule]
    except KeyError:
        raise ValueError(f"unknown enzyme {rule!r}") from None


def peptide_mass(peptide, table: MassTable | None = None) -> float:
    """Monoisotopic mass of one peptide (residue sum plus one water)."""
    if table is None:
        table = _TABLE
    residues = peptide.residues if isinstance(peptide, Sequence) else str(peptide)
    if not residues:
        raise EmptySequence("cannot weigh an empty peptide")
    return sum(table.residue_mass(c) for c in residues) + table.water


@dataclass(frozen=True)
class Peptide:
    residues: str
    start: int  # 0-based, half-open
    end: int
    missed: int

    def __len__(self):
        return len(self.residues)


def digest(s, rule="trypsin", missed: int = 0):
    """Cut after any residue in the rule's target set unless the next
    residue blocks it. Returns the fully cleaved peptides in sequence
    order, then every concatenation of up to `missed` adjacent ones."""
    if isinstance(s, str):
        s = validate(s, PROTEIN, seq_id="peptide")
    if s.alphabet.is_nucleic:
        raise WrongAlphabet("digestion expects a protein sequence")
    if len(s) == 0:
        raise EmptySequence("nothing to digest")
    if missed < 0:
        raise ValueError("missed cleavage count cannot be negative")
    rule = _resolve_rule(rule)
    r = s.residues
    n = len(r)
    cuts = [
        i + 1
        for i in range(n - 1)
        if r[i] in rule.cleave_after and r[i + 1] not in rule.blocked_by
    ]
    bounds = [0] + cuts + [n]
    base = [
        Peptide(r[a:b], a, b, 0) for a, b in zip(bounds, bounds[1:])
    ]
    out = list(base)
    for m in range(1, missed + 1):
        for k in range(len(base) - m):
            a = base[k].start
            b = base[k + m].end
            out.append(Peptide(r[a:b], a, b, m))
    return out


def theoretical_masses(s: Sequence, rule="trypsin", missed: int = 0, table=None):
    """Distinct peptide masses expected from a digest, ascending."""
    if table is None:
        table = _TABLE
    masses = {peptide_mass(p.residues, table) for p in digest(s, rule, missed)}
    return tuple(sorted(masses))


@dataclass(frozen=True)
class Fingerprint:
    peaks: tuple
    tolerance: float
    unit: str = "Da"

    def __post_init__(self):
        if self.unit not in ("Da", "ppm"):
            raise ValueError("tolerance unit must be Da or ppm")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        if any(p <= 0 for p in self.peaks):
            raise ValueError("peak masses must be positive")
        object.__setattr__(self, "peaks", tuple(sorted(self.peaks)))


def parse_peaks(text: str):
    """Peak list: one or more masses per line, blank and # lines skipped."""
    peaks = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        peaks.extend(float(tok) for tok in line.split())
    return tuple(peaks)


def match_count(fp: Fingerprint, masses) -> int:
    """Greedy assignment: each observed peak, taken ascending, claims
    the nearest still-unclaimed theoretical mass within tolerance
    (ties go to the lighter mass)."""
    avail = sorted(masses)
    used = [False] * len(avail)
    matched = 0
    for obs in fp.peaks:
        pos = bisect.bisect_left(avail, obs)
        left = pos - 1
        while left >= 0 and used[left]:
            left -= 1
        right = pos
        while right < len(avail) and used[right]:
            right += 1
        best = None
        for idx in (left, right):
            if not 0 <= idx < len(avail):
                continue
            t = avail[idx]
            limit = fp.tolerance if fp.unit == "Da" else t * fp.tolerance * 1e-6
            delta = abs(obs - t)
            if delta <= limit and (best is None or (delta, t) < best[0]):
                best = ((delta, t), idx)
        if best is not None:
            used[best[1]] = True
            matched += 1
    return matched


@dataclass(frozen=True)
class IdentifyHit:
    accession: str
    matched: int
    total: int

    @property
    def score(self) -> float:
        return self.matched / self.total if self.total else 0.0


def identify(fp: Fingerprint, db, rule="trypsin", missed: int = 0, table=None):
    """Rank (owner, sequence) pairs by the fraction of their expected
    peptide masses claimed by the fingerprint; equal scores prefer the
    smaller theoretical set, then the accession."""
    hits = []
    for owner, seq in db:
        accession = getattr(owner, "accession", None) or str(owner)
        masses = theoretical_masses(seq, rule, missed, table)
        hits.append(IdentifyHit(accession, match_count(fp, masses), len(masses)))
    hits.sort(key=lambda h: (-h.score, h.total, h.accession))
    return hits
