"""Pairwise alignment: global and local DP, k-tuple database search,
alignment rendering, distance matrices and UPGMA trees."""

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import AlphabetMismatch, EmptySequence, MalformedMatrix
from .seqcore import Sequence

GAP_CHAR = "-"

# Residue classes that count as conservative replacements. Pairs inside
# one group score `similar`; everything else falls through to mismatch.
PROTEIN_GROUPS = (
    frozenset("DE"),
    frozenset("KRH"),
    frozenset("ILVM"),
    frozenset("FYW"),
    frozenset("ST"),
    frozenset("NQ"),
    frozenset("AG"),
)


@dataclass(frozen=True)
class ScoringScheme:
    match: int
    mismatch: int
    gap: int
    similar: int | None = None
    groups: tuple[frozenset, ...] = ()
    gap_open: int | None = None
    gap_extend: int | None = None

    def __post_init__(self):
        if self.gap >= 0:
            raise ValueError("gap penalty must be negative")
        sim = self.match if self.similar is None else self.similar
        if not self.match >= sim >= self.mismatch:
            raise ValueError("expected match >= similar >= mismatch")
        seen = set()
        for g in self.groups:
            if seen & g:
                raise ValueError("residue groups must be disjoint")
            seen |= g
        if (self.gap_open is None) != (self.gap_extend is None):
            raise ValueError("affine mode needs both gap_open and gap_extend")
        if self.gap_open is not None and (self.gap_open >= 0 or self.gap_extend >= 0):
            raise ValueError("affine penalties must be negative")

    @property
    def affine(self) -> bool:
        return self.gap_open is not None

    def score(self, x: str, y: str) -> int:
        if x == y:
            return self.match
        if self.similar is not None:
            for g in self.groups:
                if x in g and y in g:
                    return self.similar
        return self.mismatch

    def in_same_group(self, x: str, y: str) -> bool:
        return any(x in g and y in g for g in self.groups)


PROTEIN_SCHEME = ScoringScheme(
    match=2, mismatch=-1, gap=-2, similar=1, groups=PROTEIN_GROUPS
)
NUCLEOTIDE_SCHEME = ScoringScheme(match=1, mismatch=-1, gap=-2, similar=0)


def default_scheme(seq: Sequence) -> ScoringScheme:
    return NUCLEOTIDE_SCHEME if seq.alphabet.is_nucleic else PROTEIN_SCHEME


@dataclass(frozen=True)
class Alignment:
    """A scored pair of gapped rows plus 1-based inclusive coordinates
    into the original (ungapped) sequences."""

    query_row: str
    subject_row: str
    score: int
    q_start: int
    q_end: int
    s_start: int
    s_end: int
    identities: int
    positives: int
    gaps: int
    scheme: ScoringScheme = field(compare=False, default=NUCLEOTIDE_SCHEME)

    def __post_init__(self):
        if len(self.query_row) != len(self.subject_row):
            raise ValueError("alignment rows differ in length")

    def __len__(self):
        return len(self.query_row)

    @property
    def length(self) -> int:
        return len(self.query_row)


def _count_columns(qrow, srow, scheme):
    ident = pos = gaps = 0
    for x, y in zip(qrow, srow):
        if x == GAP_CHAR or y == GAP_CHAR:
            gaps += 1
        elif x == y:
            ident += 1
            pos += 1
        elif scheme.in_same_group(x, y):
            pos += 1
    return ident, pos, gaps


def _row_score(qrow, srow, scheme):
    total = 0
    in_gap = False
    for x, y in zip(qrow, srow):
        if x == GAP_CHAR or y == GAP_CHAR:
            if scheme.affine:
                total += scheme.gap_extend if in_gap else scheme.gap_open
            else:
                total += scheme.gap
            in_gap = True
        else:
            total += scheme.score(x, y)
            in_gap = False
    return total


def alignment_from_rows(qrow, srow, scheme, q_start=1, s_start=1, score=None):
    """Build an Alignment from pre-gapped rows, deriving counts and
    end coordinates; the score is recomputed unless supplied."""
    if len(qrow) != len(srow):
        raise ValueError("alignment rows differ in length")
    ident, pos, gaps = _count_columns(qrow, srow, scheme)
    q_len = sum(1 for c in qrow if c != GAP_CHAR)
    s_len = sum(1 for c in srow if c != GAP_CHAR)
    if score is None:
        score = _row_score(qrow, srow, scheme)
    return Alignment(
        query_row=qrow,
        subject_row=srow,
        score=score,
        q_start=q_start,
        q_end=q_start + q_len - 1,
        s_start=s_start,
        s_end=s_start + s_len - 1,
        identities=ident,
        positives=pos,
        gaps=gaps,
        scheme=scheme,
    )


def _empty_alignment(scheme):
    return Alignment("", "", 0, 0, 0, 0, 0, 0, 0, 0, scheme)


def _check_pair(a: Sequence, b: Sequence):
    if len(a) == 0 or len(b) == 0:
        raise EmptySequence("cannot align an empty sequence")
    if a.alphabet.kind != b.alphabet.kind:
        raise AlphabetMismatch(
            f"cannot align {a.alphabet.kind} against {b.alphabet.kind}"
        )


def _encode(a: str, b: str, scheme):
    symbols = sorted(set(a) | set(b))
    code = {c: i for i, c in enumerate(symbols)}
    av = np.array([code[c] for c in a], np.uint8)
    bv = np.array([code[c] for c in b], np.uint8)
    k = len(symbols)
    sub = np.empty((k, k), np.int64)
    for x, i in code.items():
        for y, j in code.items():
            sub[i, j] = scheme.score(x, y)
    return av, bv, sub


def _traceback_linear(ptr, a, b, i, j):
    qrow = []
    srow = []
    while True:
        p = ptr[i, j]
        if p == 0:
            break
        if p == 1:
            i -= 1
            j -= 1
            qrow.append(a[i])
            srow.append(b[j])
        elif p == 2:
            i -= 1
            qrow.append(a[i])
            srow.append(GAP_CHAR)
        else:
            j -= 1
            qrow.append(GAP_CHAR)
            srow.append(b[j])
    return "".join(reversed(qrow)), "".join(reversed(srow)), i, j


def _traceback_affine(ptr, a, b, i, j, state, local):
    qrow = []
    srow = []
    while i > 0 or j > 0:
        p = ptr[i, j]
        if state == 1:
            code = p & 3
            i -= 1
            j -= 1
            qrow.append(a[i])
            srow.append(b[j])
            if local and code == 0:
                break
            state = code
        elif state == 2:
            code = (p >> 2) & 3
            i -= 1
            qrow.append(a[i])
            srow.append(GAP_CHAR)
            state = code
        else:
            code = (p >> 4) & 3
            j -= 1
            qrow.append(GAP_CHAR)
            srow.append(b[j])
            state = code
    return "".join(reversed(qrow)), "".join(reversed(srow)), i, j


def needleman_wunsch(a: Sequence, b: Sequence, scheme: ScoringScheme | None = None):
    """Optimal global alignment. Ties prefer diagonal, then consuming
    the first sequence, then the second."""
    from . import _kernels

    _check_pair(a, b)
    if scheme is None:
        scheme = default_scheme(a)
    av, bv, sub = _encode(a.residues, b.residues, scheme)
    if scheme.affine:
        ptr, score, state = _kernels.nw_fill_affine(
            av, bv, sub, scheme.gap_open, scheme.gap_extend
        )
        qrow, srow, _, _ = _traceback_affine(
            ptr, a.residues, b.residues, len(a), len(b), state, local=False
        )
    else:
        ptr, score = _kernels.nw_fill(av, bv, sub, scheme.gap)
        qrow, srow, _, _ = _traceback_linear(ptr, a.residues, b.residues, len(a), len(b))
    return alignment_from_rows(qrow, srow, scheme, score=int(score))


def smith_waterman(a: Sequence, b: Sequence, scheme: ScoringScheme | None = None):
    """Best local alignment; the empty alignment when nothing scores
    above zero. With tied optima the cell closest to the top-left wins
    (scanned row-major)."""
    from . import _kernels

    _check_pair(a, b)
    if scheme is None:
        scheme = default_scheme(a)
    av, bv, sub = _encode(a.residues, b.residues, scheme)
    if scheme.affine:
        ptr, bi, bj, best = _kernels.sw_fill_affine(
            av, bv, sub, scheme.gap_open, scheme.gap_extend
        )
        if best <= 0:
            return _empty_alignment(scheme)
        qrow, srow, si, sj = _traceback_affine(
            ptr, a.residues, b.residues, int(bi), int(bj), 1, local=True
        )
    else:
        ptr, bi, bj, best = _kernels.sw_fill(av, bv, sub, scheme.gap)
        if best <= 0:
            return _empty_alignment(scheme)
        qrow, srow, si, sj = _traceback_linear(
            ptr, a.residues, b.residues, int(bi), int(bj)
        )
    return alignment_from_rows(
        qrow, srow, scheme, q_start=si + 1, s_start=sj + 1, score=int(best)
    )


def _percent(part: int, whole: int) -> int:
    # Floor, never round: 127.9% of nothing still reads 0%.
    if whole == 0:
        return 0
    return part * 100 // whole


def render_blast(al: Alignment, *, width: int = 60) -> str:
    """Render an alignment in the classic pairwise report layout:
    a summary line followed by Query/match/Sbjct blocks."""
    n = len(al)
    header = (
        f"Identities = {al.identities}/{n} ({_percent(al.identities, n)}%), "
        f"Positives = {al.positives}/{n} ({_percent(al.positives, n)}%), "
        f"Gaps = {al.gaps}/{n} ({_percent(al.gaps, n)}%)"
    )
    lines = [header, ""]
    numw = max(
        len(str(al.q_start)), len(str(al.q_end)),
        len(str(al.s_start)), len(str(al.s_end)),
    )
    q_pos = al.q_start
    s_pos = al.s_start
    for off in range(0, n, width):
        qchunk = al.query_row[off : off + width]
        schunk = al.subject_row[off : off + width]
        mid = []
        for x, y in zip(qchunk, schunk):
            if x == y and x != GAP_CHAR:
                mid.append(x)
            elif x != GAP_CHAR and y != GAP_CHAR and al.scheme.in_same_group(x, y):
                mid.append("+")
            else:
                mid.append(" ")
        q_used = sum(1 for c in qchunk if c != GAP_CHAR)
        s_used = sum(1 for c in schunk if c != GAP_CHAR)
        q_last = q_pos + q_used - 1 if q_used else q_pos
        s_last = s_pos + s_used - 1 if s_used else s_pos
        lines.append(f"Query: {q_pos:>{numw}} {qchunk} {q_last}")
        lines.append((" " * (7 + numw + 1) + "".join(mid)).rstrip())
        lines.append(f"Sbjct: {s_pos:>{numw}} {schunk} {s_last}")
        lines.append("")
        q_pos += q_used
        s_pos += s_used
    return "\n".join(lines).rstrip("\n") + "\n"


@dataclass(frozen=True)
class Hsp:
    """High-scoring segment pair: the seed diagonal and offsets of the
    ungapped core plus the banded local re-alignment around it."""

    diagonal: int
    q_offset: int
    s_offset: int
    ungapped_score: int
    alignment: Alignment

    @property
    def score(self) -> int:
        return self.alignment.score


def _extend_seed(q, s, qa, qb, sa, scheme, dropoff):
    """Two-way X-drop extension of the exact seed q[qa:qb] == s[sa:sa+k].
    Returns (score, qa, qb) of the best ungapped segment containing it."""
    score = sum(scheme.score(q[i], q[i]) for i in range(qa, qb))
    d = qa - sa
    # right
    run = 0
    best = 0
    take = 0
    i = qb
    while i < len(q) and i - d < len(s):
        run += scheme.score(q[i], s[i - d])
        i += 1
        if run > best:
            best = run
            take = i - qb
        elif run <= best - dropoff:
            break
    score += best
    qb += take
    # left
    run = 0
    best = 0
    take = 0
    i = qa - 1
    while i >= 0 and i - d >= 0:
        run += scheme.score(q[i], s[i - d])
        if run > best:
            best = run
            take = qa - i
        elif run <= best - dropoff:
            break
        i -= 1
    score += best
    qa -= take
    return score, qa, qb


def ktup_search(
    query: Sequence,
    db,
    k: int | None = None,
    scheme: ScoringScheme | None = None,
    threshold: int | None = None,
    dropoff: int | None = None,
    window_pad: int = 10,
):
    """Word-seeded database search: exact k-mer hits grouped by
    diagonal, extended without gaps under an X-drop rule, then
    re-aligned locally inside a padded window. Returns (record, Hsp)
    pairs sorted best first (score, then record id)."""
    if scheme is None:
        scheme = default_scheme(query)
    if k is None:
        k = 8 if query.alphabet.is_nucleic else 3
    if not 1 <= k <= len(query):
        raise ValueError("word size must be between 1 and the query length")
    if dropoff is None:
        dropoff = 5 * scheme.match
    if dropoff <= 0:
        raise ValueError("dropoff must be positive")
    if threshold is None:
        threshold = 2 * k * scheme.match
    q = query.residues
    index: dict[str, list[int]] = {}
    for i in range(len(q) - k + 1):
        index.setdefault(q[i : i + k], []).append(i)
    hits = []
    for rec in db:
        if rec.alphabet.kind != query.alphabet.kind:
            raise AlphabetMismatch(
                f"record {rec.id} is {rec.alphabet.kind}, query is {query.alphabet.kind}"
            )
        s = rec.residues
        segments: dict[int, tuple[int, int, int]] = {}  # diagonal -> score, qa, qb
        for j in range(len(s) - k + 1):
            for i in index.get(s[j : j + k], ()):
                d = i - j
                score, qa, qb = _extend_seed(q, s, i, i + k, j, scheme, dropoff)
                seen = segments.get(d)
                if seen is None or (score, -qa) > (seen[0], -seen[1]):
                    segments[d] = (score, qa, qb)
        best_by_span: dict[tuple, Hsp] = {}
        for d in sorted(segments):
            score, qa, qb = segments[d]
            if score < threshold:
                continue
            sa = qa - d
            qlo = max(0, qa - window_pad)
            qhi = min(len(q), qb + window_pad)
            slo = max(0, sa - window_pad)
            shi = min(len(s), sa + (qb - qa) + window_pad)
            sub_q = Sequence(query.id, "", query.alphabet, q[qlo:qhi])
            sub_s = Sequence(rec.id, "", rec.alphabet, s[slo:shi])
            al = smith_waterman(sub_q, sub_s, scheme)
            if al.length == 0:
                continue
            al = replace(
                al,
                q_start=al.q_start + qlo,
                q_end=al.q_end + qlo,
                s_start=al.s_start + slo,
                s_end=al.s_end + slo,
            )
            span = (al.q_start, al.q_end, al.s_start, al.s_end)
            hsp = Hsp(d, qa, sa, score, al)
            old = best_by_span.get(span)
            # seeds on different diagonals can re-align to one span;
            # keep the copy with the strongest ungapped origin
            if old is None or (
                hsp.score, hsp.ungapped_score, -hsp.q_offset, -hsp.diagonal
            ) > (old.score, old.ungapped_score, -old.q_offset, -old.diagonal):
                best_by_span[span] = hsp
        for hsp in best_by_span.values():
            hits.append((rec, hsp))
    hits.sort(
        key=lambda h: (
            -h[1].score,
            h[0].id,
            h[1].alignment.q_start,
            h[1].alignment.s_start,
        )
    )
    return hits


def identity_distance(a: Sequence, b: Sequence, scheme=None) -> float:
    """1 - identities/columns over the global alignment."""
    al = needleman_wunsch(a, b, scheme)
    return 1.0 - al.identities / al.length


def distance_matrix(seqs, scheme: ScoringScheme | None = None):
    """Symmetric identity-distance matrix over a list of sequences."""
    if not seqs:
        raise EmptySequence("no sequences to compare")
    kinds = {s.alphabet.kind for s in seqs}
    if len(kinds) > 1:
        raise AlphabetMismatch("distance matrix needs one alphabet kind")
    n = len(seqs)
    mat = np.zeros((n, n), float)
    for i in range(n):
        for j in range(i + 1, n):
            d = identity_distance(seqs[i], seqs[j], scheme)
            mat[i, j] = d
            mat[j, i] = d
    return mat


@dataclass(frozen=True)
class TreeNode:
    height: float
    label: str | None = None
    children: tuple = ()

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def leaves(self):
        if self.is_leaf:
            return [self]
        out = []
        for c in self.children:
            out.extend(c.leaves())
        return out


def _check_matrix(matrix, labels):
    mat = np.asarray(matrix, float)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise MalformedMatrix("distance matrix must be square")
    n = mat.shape[0]
    if n == 0:
        raise MalformedMatrix("distance matrix is empty")
    if len(labels) != n:
        raise MalformedMatrix("label count does not match matrix size")
    if len(set(labels)) != n:
        raise MalformedMatrix("labels must be unique")
    if not np.allclose(mat, mat.T, atol=1e-9):
        raise MalformedMatrix("distance matrix must be symmetric")
    if np.any(np.diag(mat) != 0):
        raise MalformedMatrix("diagonal must be zero")
    if np.any(mat < 0):
        raise MalformedMatrix("distances must be non-negative")
    return mat


def upgma(matrix, labels) -> TreeNode:
    """Average-linkage clustering. Each merge sits at half the pair
    distance; among equal distances the lexicographically smallest
    label pair merges first."""
    mat = _check_matrix(matrix, labels)
    nodes = [TreeNode(0.0, label=lab) for lab in labels]
    sizes = [1] * len(nodes)
    mins = list(labels)  # smallest leaf label per cluster, for tie order
    while len(nodes) > 1:
        n = len(nodes)
        best = None
        for i in range(n):
            for j in range(i + 1, n):
                pair = tuple(sorted((mins[i], mins[j])))
                key = (mat[i, j], pair)
                if best is None or key < best[0]:
                    best = (key, i, j)
        (d, _), i, j = best
        left, right = nodes[i], nodes[j]
        if mins[j] < mins[i]:
            left, right = right, left
        merged = TreeNode(float(d) / 2.0, children=(left, right))
        new_row = (mat[i] * sizes[i] + mat[j] * sizes[j]) / (sizes[i] + sizes[j])
        keep = [x for x in range(n) if x not in (i, j)]
        mat = np.vstack([mat[keep][:, keep], new_row[keep]])
        mat = np.hstack([mat, np.append(new_row[keep], 0.0)[:, None]])
        nodes = [nodes[x] for x in keep] + [merged]
        sizes = [sizes[x] for x in keep] + [sizes[i] + sizes[j]]
        mins = [mins[x] for x in keep] + [min(mins[i], mins[j])]
    return nodes[0]


def _fmt_branch(x: float) -> str:
    return format(round(x, 10), "g")


def _newick_node(node: TreeNode, parent_height: float) -> str:
    if node.is_leaf:
        body = node.label
    else:
        body = "(" + ",".join(_newick_node(c, node.height) for c in node.children) + ")"
    return f"{body}:{_fmt_branch(parent_height - node.height)}"


def newick(root: TreeNode) -> str:
    if root.is_leaf:
        return f"{root.label};"
    inner = ",".join(_newick_node(c, root.height) for c in root.children)
    return f"({inner});"
