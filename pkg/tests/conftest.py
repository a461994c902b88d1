"""Shared oracle helpers for the test suite.

The motif helpers deliberately route through Python's re engine so the
scanner implementation is checked against an independent matcher.
"""

import re

from seqforge.formats import AnyOf, Literal, NoneOf, Repeat, Wildcard

AMINO_ACIDS = "ACDEFGHIKLMNPQRSTVWY"


def element_regex(e) -> str:
    if isinstance(e, Repeat):
        return f"(?:{element_regex(e.element)}){{{e.low},{e.high}}}"
    if isinstance(e, Literal):
        return e.residue
    if isinstance(e, AnyOf):
        return "[" + "".join(sorted(e.residues)) + "]"
    if isinstance(e, NoneOf):
        return "[^" + "".join(sorted(e.residues)) + "]"
    return "."


def regex_scan(pattern, residues: str) -> list:
    """Every (start, end) slice the pattern fully matches, via re."""
    rx = re.compile("".join(element_regex(e) for e in pattern.elements))
    n = len(residues)
    starts = [0] if pattern.anchored_start else range(n + 1)
    out = []
    for i in starts:
        ends = [n] if pattern.anchored_end else range(i, n + 1)
        for j in ends:
            if j >= i and rx.fullmatch(residues[i:j]):
                out.append((i, j))
    return sorted(out)


def random_pattern_text(rng, max_elements=6) -> str:
    """A random syntactically valid motif pattern."""
    parts = []
    for _ in range(rng.randint(1, max_elements)):
        roll = rng.random()
        if roll < 0.35:
            base = rng.choice(AMINO_ACIDS)
        elif roll < 0.55:
            base = "x"
        elif roll < 0.80:
            k = rng.randint(1, 4)
            base = "[" + "".join(sorted(rng.sample(AMINO_ACIDS, k))) + "]"
        else:
            k = rng.randint(1, 3)
            base = "{" + "".join(sorted(rng.sample(AMINO_ACIDS, k))) + "}"
        roll = rng.random()
        if roll < 0.20:
            base += f"({rng.randint(1, 3)})"
        elif roll < 0.35:
            low = rng.randint(0, 2)
            high = max(1, low + rng.randint(0, 2))
            base += f"({low},{high})"
        parts.append(base)
    text = "-".join(parts)
    if rng.random() < 0.15:
        text = "<" + text
    if rng.random() < 0.15:
        text += ">"
    return text
