"""Command line front end.

One executable with task-oriented subcommands. Exit codes: 0 success,
1 bad invocation, 2 runtime failure (reported on stderr as
ERROR:<Type>: message), 3 clean run that found nothing while --strict
was given.

Anywhere a sequence file is expected, '-' reads stdin and input that
does not start with '>' is treated as one raw sequence; raw input gets
raw output (bare residues), FASTA gets FASTA. Coordinates in text
output are 1-based inclusive; library APIs stay 0-based half-open.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from pathlib import Path

from . import align, pmf, seqcore, structure
from .errors import EmptySequence, SeqforgeError
from .formats import (
    FastaDoc,
    detect_alphabet,
    parse_fasta,
    parse_genbank,
    parse_prosite,
    render_fasta,
    scan_motif,
)
from .seqcore import PROTEIN, Sequence, validate
from .store import open_store


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse wants to sys.exit(2) on bad flags; we want exit code 1
    # and no SystemExit from main(), so route through an exception.
    def error(self, message):
        raise _UsageError(message)


# ---------------------------------------------------------------- plumbing

_SCHEME_KEYS = ("match", "mismatch", "similar", "gap", "gap_open", "gap_extend")
_CONFIG_KEYS = frozenset(_SCHEME_KEYS) | {"dropoff", "pad"}


def _parse_config(pairs) -> dict:
    out = {}
    for item in pairs:
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or not key:
            raise _UsageError(f"bad --config entry {item!r} (want KEY=VALUE)")
        if key not in _CONFIG_KEYS:
            known = ", ".join(sorted(_CONFIG_KEYS))
            raise _UsageError(f"unknown --config key {key!r} (known: {known})")
        try:
            out[key] = int(value)
        except ValueError:
            raise _UsageError(f"--config {key} takes an integer, got {value!r}")
    return out


def _scheme_for(seq: Sequence, config: dict):
    base = align.default_scheme(seq)
    overrides = {k: config[k] for k in _SCHEME_KEYS if k in config}
    if not overrides:
        return base
    return dataclasses.replace(base, **overrides)


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def _read_seqs(path: str, alphabet=None):
    """Load sequences from a FASTA file or a single raw sequence.

    Commands whose domain pins the alphabet pass it explicitly (a
    peptide of glycines would otherwise detect as DNA); the rest
    auto-detect. Returns (sequences, was_fasta).
    """
    text = _read_text(path)
    if text.lstrip().startswith(">"):
        doc = parse_fasta(text, alphabet=alphabet, lenient=True if alphabet else None)
        return list(doc.entries), True
    residues = "".join(text.split())
    if not residues:
        raise EmptySequence(f"no residues in {path}")
    return [
        validate(residues, alphabet or detect_alphabet(residues), lenient=True, seq_id="seq1")
    ], False


def _seq_text(seqs, was_fasta: bool) -> str:
    if was_fasta:
        return render_fasta(FastaDoc(entries=list(seqs)))
    return "".join(s.residues + "\n" for s in seqs)


def _lines(rows) -> str:
    return "".join(r + "\n" for r in rows)


def _emit(args, text: str, payload) -> None:
    if args.json:
        out = json.dumps(payload, indent=2) + "\n"
    else:
        out = text
    if args.output and args.output != "-":
        Path(args.output).write_text(out)
    else:
        sys.stdout.write(out)


# ---------------------------------------------------------------- seq group


def _cmd_seq_validate(args, config):
    seqs, _ = _read_seqs(args.input)
    rows = [f"{s.id}\t{s.alphabet.kind}\t{len(s)}" for s in seqs]
    payload = [{"id": s.id, "kind": s.alphabet.kind, "length": len(s)} for s in seqs]
    return _lines(rows), payload, True


def _cmd_seq_complement(args, config):
    seqs, was_fasta = _read_seqs(args.input)
    out = [seqcore.complement(s) for s in seqs]
    payload = [{"id": s.id, "residues": s.residues} for s in out]
    return _seq_text(out, was_fasta), payload, True


def _cmd_seq_revcomp(args, config):
    seqs, was_fasta = _read_seqs(args.input)
    out = [seqcore.reverse_complement(s) for s in seqs]
    payload = [{"id": s.id, "residues": s.residues} for s in out]
    return _seq_text(out, was_fasta), payload, True


def _cmd_seq_parity(args, config):
    seqs, _ = _read_seqs(args.input)
    rows, payload = [], []
    for s in seqs:
        st = seqcore.parity_stats(s)
        rows.append(
            f"{s.id}\tA={st.a} C={st.c} G={st.g} T={st.t}"
            f"\tdev_at={st.deviation_at:.4f}\tdev_gc={st.deviation_gc:.4f}"
        )
        payload.append(
            {
                "id": s.id,
                "a": st.a,
                "c": st.c,
                "g": st.g,
                "t": st.t,
                "deviation_at": st.deviation_at,
                "deviation_gc": st.deviation_gc,
            }
        )
    return _lines(rows), payload, True


def _fmt_counts(counts: dict) -> str:
    return ",".join(f"{sym}={n}" for sym, n in sorted(counts.items()))


def _cmd_seq_composition(args, config):
    seqs, _ = _read_seqs(args.input)
    rows, payload = [], []
    for s in seqs:
        rep = seqcore.composition_windows(
            s, args.window, args.step, include_partial=args.partial
        )
        for off, counts in zip(rep.offsets, rep.counts):
            rows.append(f"{s.id}\t{off + 1}\t{_fmt_counts(counts)}")
        rows.append(f"{s.id}\ttotal\t{_fmt_counts(rep.totals)}")
        rows.append(f"{s.id}\tgc_fraction\t{rep.gc_fraction():.4f}")
        payload.append(
            {
                "id": s.id,
                "window": rep.window,
                "step": rep.step,
                "offsets": [off + 1 for off in rep.offsets],
                "counts": list(rep.counts),
                "totals": rep.totals,
                "gc_fraction": rep.gc_fraction(),
            }
        )
    return _lines(rows), payload, True


def _cmd_seq_hairpin(args, config):
    seqs, _ = _read_seqs(args.input)
    rows, payload = [], []
    for s in seqs:
        for h in seqcore.find_hairpins(
            s, min_stem=args.min_stem, min_loop=args.min_loop, max_loop=args.max_loop
        ):
            rows.append(
                f"{s.id}\t{h.start + 1}\t{h.end}\t{h.stem}"
                f"\t{h.loop_start + 1}\t{h.loop_end}"
            )
            payload.append(
                {
                    "id": s.id,
                    "start": h.start + 1,
                    "end": h.end,
                    "stem": h.stem,
                    "loop_start": h.loop_start + 1,
                    "loop_end": h.loop_end,
                }
            )
    return _lines(rows), payload, bool(rows)


# ------------------------------------------------------------ whole commands


def _cmd_assemble(args, config):
    seqs, _ = _read_seqs(args.input)
    result = seqcore.assemble_fragments(seqs, args.min_overlap)
    doc = FastaDoc(entries=[c.sequence for c in result.contigs])
    payload = [
        {
            "id": c.sequence.id,
            "residues": c.sequence.residues,
            "placements": [
                {"index": idx, "fragment": fid, "offset": off}
                for idx, fid, off in c.placements
            ],
        }
        for c in result.contigs
    ]
    return render_fasta(doc), payload, True


def _cmd_translate(args, config):
    from . import genes

    seqs, was_fasta = _read_seqs(args.input)
    out = [genes.translate(s, frame=args.frame, to_stop=args.halt_at_stop) for s in seqs]
    payload = [
        {"id": s.id, "frame": args.frame, "peptide": p.residues}
        for s, p in zip(seqs, out)
    ]
    return _seq_text(out, was_fasta), payload, True


def _cmd_orf(args, config):
    from . import genes

    seqs, _ = _read_seqs(args.input)
    rows, payload = [], []
    for s in seqs:
        for o in genes.find_orfs(
            s,
            min_peptide=args.min_peptide,
            include_nested=args.nested,
            include_open=args.open_ended,
        ):
            rows.append(
                f"{s.id}\t{o.frame:+d}\t{o.start + 1}\t{o.end}\t{o.peptide.residues}"
            )
            payload.append(
                {
                    "id": s.id,
                    "frame": o.frame,
                    "start": o.start + 1,
                    "end": o.end,
                    "peptide": o.peptide.residues,
                }
            )
    return _lines(rows), payload, bool(rows)


def _cmd_splice(args, config):
    from . import genes

    seqs, _ = _read_seqs(args.input)
    rows, payload = [], []
    for s in seqs:
        for c in genes.splice_candidates(
            s, min_intron=args.min_intron, max_intron=args.max_intron
        ):
            rows.append(f"{s.id}\t{c.donor + 1}\t{c.acceptor + 1}\t{c.span}")
            payload.append(
                {
                    "id": s.id,
                    "donor": c.donor + 1,
                    "acceptor": c.acceptor + 1,
                    "span": c.span,
                }
            )
    return _lines(rows), payload, bool(rows)


def _alignment_payload(al) -> dict:
    return {
        "score": al.score,
        "length": al.length,
        "identities": al.identities,
        "positives": al.positives,
        "gaps": al.gaps,
        "q_start": al.q_start,
        "q_end": al.q_end,
        "s_start": al.s_start,
        "s_end": al.s_end,
        "query_row": al.query_row,
        "subject_row": al.subject_row,
    }


def _cmd_align(args, config):
    seqs = []
    for path in args.inputs:
        seqs.extend(_read_seqs(path)[0])
    if len(seqs) < 2:
        raise ValueError(f"alignment needs two sequences, got {len(seqs)}")
    if args.width < 1:
        raise _UsageError("--width must be >= 1")
    a, b = seqs[0], seqs[1]
    scheme = _scheme_for(a, config)
    if args.mode == "global":
        al = align.needleman_wunsch(a, b, scheme)
    else:
        al = align.smith_waterman(a, b, scheme)
    text = f"Score = {al.score}\n" + align.render_blast(al, width=args.width)
    payload = {"mode": args.mode, "query": a.id, "subject": b.id}
    payload.update(_alignment_payload(al))
    return text, payload, al.length > 0


def _cmd_search(args, config):
    query = _read_seqs(args.query)[0][0]
    db = _read_seqs(args.database)[0]
    hits = align.ktup_search(
        query,
        db,
        k=args.k,
        scheme=_scheme_for(query, config),
        threshold=args.threshold,
        dropoff=config.get("dropoff"),
        window_pad=config.get("pad", 10),
    )
    if args.top is not None:
        hits = hits[: args.top]
    rows, payload = [], []
    blocks = []
    for rec, hsp in hits:
        al = hsp.alignment
        rows.append(
            f"{rec.id}\t{al.score}\t{al.q_start}..{al.q_end}"
            f"\t{al.s_start}..{al.s_end}\t{al.identities}/{al.length}"
        )
        if args.render:
            blocks.append(f"\n>{rec.id}\nScore = {al.score}\n" + align.render_blast(al))
        entry = {"id": rec.id, "diagonal": hsp.diagonal, "ungapped_score": hsp.ungapped_score}
        entry.update(_alignment_payload(al))
        payload.append(entry)
    text = _lines(rows) + "".join(blocks)
    return text, payload, bool(hits)


def _cmd_scan(args, config):
    pattern = parse_prosite(args.pattern)
    seqs, _ = _read_seqs(args.input, PROTEIN)
    rows, payload = [], []
    for s in seqs:
        for a, b in scan_motif(pattern, s):
            rows.append(f"{s.id}\t{a + 1}\t{b}\t{s.residues[a:b]}")
            payload.append(
                {"id": s.id, "start": a + 1, "end": b, "match": s.residues[a:b]}
            )
    return _lines(rows), payload, bool(rows)


# ------------------------------------------------------- structure commands


def _cmd_predict2s(args, config):
    seqs, was_fasta = _read_seqs(args.input, PROTEIN)
    parts, payload = [], []
    for s in seqs:
        if args.profile:
            prof = structure.hydropathy_profile(s, window=args.window)
            block = _lines(
                f"{i + 1}\t{res}\t{val:.3f}"
                for i, (res, val) in enumerate(zip(s.residues, prof))
            )
            payload.append({"id": s.id, "window": args.window, "profile": list(prof)})
        else:
            pred = structure.predict_secondary(s)
            block = structure.render_prediction(s, pred)
            payload.append(
                {
                    "id": s.id,
                    "labels": "".join(pred.labels),
                    "confidence": list(pred.confidence),
                    "method": pred.method,
                }
            )
        if was_fasta and len(seqs) > 1:
            block = f"# {s.id}\n" + block
        parts.append(block)
    return "".join(parts), payload, True


def _cmd_consensus(args, config):
    loaded = [structure.parse_prediction(_read_text(p)) for p in args.inputs]
    residues = loaded[0][0]
    for other, _ in loaded[1:]:
        if other != residues:
            raise ValueError("prediction inputs disagree on residues")
    weights = None
    if args.weights:
        try:
            weights = [float(w) for w in args.weights.split(",")]
        except ValueError:
            raise _UsageError(f"bad --weights {args.weights!r} (want N,N,...)")
    cons = structure.consensus([pred for _, pred in loaded], weights)
    seq = validate(residues, detect_alphabet(residues), lenient=True, seq_id="consensus")
    payload = {
        "labels": "".join(cons.labels),
        "confidence": list(cons.confidence),
        "method": cons.method,
    }
    return structure.render_prediction(seq, cons), payload, True


# ------------------------------------------------------------- pmf commands


def _cmd_pmf_digest(args, config):
    seqs, _ = _read_seqs(args.input, PROTEIN)
    rows, payload = [], []
    for s in seqs:
        for p in pmf.digest(s, rule=args.enzyme, missed=args.missed):
            mass = pmf.peptide_mass(p.residues)
            rows.append(
                f"{s.id}\t{p.start + 1}\t{p.end}\t{p.missed}\t{p.residues}\t{mass:.5f}"
            )
            payload.append(
                {
                    "id": s.id,
                    "start": p.start + 1,
                    "end": p.end,
                    "missed": p.missed,
                    "peptide": p.residues,
                    "mass": mass,
                }
            )
    return _lines(rows), payload, bool(rows)


def _cmd_pmf_mass(args, config):
    seqs, _ = _read_seqs(args.input, PROTEIN)
    rows, payload = [], []
    for s in seqs:
        mass = pmf.peptide_mass(s)
        rows.append(f"{s.id}\t{mass:.5f}")
        payload.append({"id": s.id, "mass": mass})
    return _lines(rows), payload, True


def _cmd_pmf_identify(args, config):
    peaks = pmf.parse_peaks(_read_text(args.peaks))
    fp = pmf.Fingerprint(peaks, tolerance=args.tolerance, unit=args.unit)
    db = [(s.id, s) for s in _read_seqs(args.database, PROTEIN)[0]]
    hits = pmf.identify(fp, db, rule=args.enzyme, missed=args.missed)
    if args.top is not None:
        hits = hits[: args.top]
    rows = [
        f"{rank}\t{h.accession}\t{h.matched}/{h.total}\t{h.score:.3f}"
        for rank, h in enumerate(hits, start=1)
    ]
    payload = [
        {
            "rank": rank,
            "accession": h.accession,
            "matched": h.matched,
            "total": h.total,
            "score": h.score,
        }
        for rank, h in enumerate(hits, start=1)
    ]
    return _lines(rows), payload, any(h.matched for h in hits)


# -------------------------------------------------------------- db commands


def _store_for(args):
    where = args.data or os.environ.get("SEQFORGE_DATA")
    if not where:
        raise _UsageError("no store directory (use --data or set SEQFORGE_DATA)")
    return open_store(where)


def _cmd_db_ingest(args, config):
    store = _store_for(args)
    added = 0
    for path in args.inputs:
        text = _read_text(path)
        head = text.lstrip()
        if head.startswith(">"):
            added += store.ingest(parse_fasta(text))
        elif head.startswith("LOCUS"):
            for rec in parse_genbank(text):
                added += store.ingest(rec)
        else:
            raise ValueError(f"unrecognized record format in {path}")
    payload = {"ingested": added, "records": len(store.accessions())}
    return f"ingested {added} record(s)\n", payload, added > 0


def _cmd_db_query(args, config):
    store = _store_for(args)
    accessions = store.query(args.query)
    payload = {"query": args.query, "accessions": list(accessions)}
    return _lines(accessions), payload, bool(accessions)


def _cmd_db_neighbors(args, config):
    store = _store_for(args)
    if args.build:
        store.build_neighbors(threshold=args.threshold, k=args.k)
    if args.accession is not None:
        links = store.neighbors(args.accession)
    else:
        links = []
        for acc in store.accessions():
            links.extend(store.neighbors(acc))
    rows = [f"{l.source}\t{l.target}\t{l.score}\t{l.method}" for l in links]
    payload = [
        {"source": l.source, "target": l.target, "score": l.score, "method": l.method}
        for l in links
    ]
    return _lines(rows), payload, bool(links)


# ------------------------------------------------------------- tree commands


def _matrix_from_input(path: str, config: dict):
    text = _read_text(path)
    if text.lstrip().startswith(">"):
        seqs = list(parse_fasta(text).entries)
        labels = [s.id for s in seqs]
        scheme = _scheme_for(seqs[0], config) if seqs else None
        return align.distance_matrix(seqs, scheme), labels
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError(f"no matrix in {path}")
    labels = lines[0].split("\t")
    matrix = [[float(v) for v in ln.split("\t")] for ln in lines[1:]]
    return matrix, labels


def _cmd_tree_distmat(args, config):
    seqs, _ = _read_seqs(args.input)
    labels = [s.id for s in seqs]
    mat = align.distance_matrix(seqs, _scheme_for(seqs[0], config))
    rows = ["\t".join(labels)]
    for row in mat:
        rows.append("\t".join(f"{v:.6f}" for v in row))
    payload = {"labels": labels, "matrix": [[float(v) for v in row] for row in mat]}
    return _lines(rows), payload, True


def _cmd_tree_upgma(args, config):
    matrix, labels = _matrix_from_input(args.input, config)
    root = align.upgma(matrix, labels)
    text = align.newick(root) + "\n"
    payload = {"newick": align.newick(root)}
    return text, payload, True


# ------------------------------------------------------------------- parser


def _common() -> _Parser:
    p = _Parser(add_help=False)
    p.add_argument("--json", action="store_true", help="emit JSON instead of text")
    p.add_argument("-o", "--output", metavar="FILE", help="write output to FILE")
    p.add_argument(
        "--strict", action="store_true", help="exit 3 when nothing is found"
    )
    p.add_argument(
        "--config",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="tuning knob (match, mismatch, similar, gap, gap_open, "
        "gap_extend, dropoff, pad); repeatable",
    )
    return p


def build_parser() -> _Parser:
    from . import __version__

    common = _common()
    parser = _Parser(prog="seqforge", description=__doc__)
    parser.add_argument("--version", action="version", version=f"seqforge {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_seq = sub.add_parser("seq", help="single-sequence utilities")
    seq_sub = p_seq.add_subparsers(dest="seq_command", required=True, parser_class=_Parser)

    p = seq_sub.add_parser("validate", parents=[common], help="check residues, report kind and length")
    p.add_argument("input", help="FASTA file, raw sequence file, or -")
    p.set_defaults(func=_cmd_seq_validate)

    p = seq_sub.add_parser("complement", parents=[common], help="complement a nucleic sequence")
    p.add_argument("input")
    p.set_defaults(func=_cmd_seq_complement)

    p = seq_sub.add_parser("revcomp", parents=[common], help="reverse complement")
    p.add_argument("input")
    p.set_defaults(func=_cmd_seq_revcomp)

    p = seq_sub.add_parser("parity", parents=[common], help="base counts and strand parity deviations")
    p.add_argument("input")
    p.set_defaults(func=_cmd_seq_parity)

    p = seq_sub.add_parser("composition", parents=[common], help="windowed residue counts")
    p.add_argument("input")
    p.add_argument("--window", type=int, required=True)
    p.add_argument("--step", type=int, default=None, help="default: window size")
    p.add_argument("--partial", action="store_true", help="include a trailing short window")
    p.set_defaults(func=_cmd_seq_composition)

    p = seq_sub.add_parser("hairpin", parents=[common], help="fold-back stem/loop candidates")
    p.add_argument("input")
    p.add_argument("--min-stem", type=int, default=2)
    p.add_argument("--min-loop", type=int, default=3)
    p.add_argument("--max-loop", type=int, default=8)
    p.set_defaults(func=_cmd_seq_hairpin)

    p = sub.add_parser("assemble", parents=[common], help="greedy overlap assembly of fragments")
    p.add_argument("input", help="FASTA of fragments")
    p.add_argument("--min-overlap", type=int, default=3)
    p.set_defaults(func=_cmd_assemble)

    p = sub.add_parser("translate", parents=[common], help="translate one reading frame")
    p.add_argument("input")
    p.add_argument("--frame", type=int, default=1, choices=[1, 2, 3, -1, -2, -3])
    p.add_argument("--halt-at-stop", action="store_true", help="stop at the first stop codon")
    p.set_defaults(func=_cmd_translate)

    p = sub.add_parser("orf", parents=[common], help="open reading frames in six frames")
    p.add_argument("input")
    p.add_argument("--min-peptide", type=int, default=1)
    p.add_argument("--nested", action="store_true", help="include ORFs sharing a stop")
    p.add_argument("--open-ended", action="store_true", help="include ORFs without a stop")
    p.set_defaults(func=_cmd_orf)

    p = sub.add_parser("splice", parents=[common], help="GT..AG intron candidates")
    p.add_argument("input")
    p.add_argument("--min-intron", type=int, default=20)
    p.add_argument("--max-intron", type=int, default=None)
    p.set_defaults(func=_cmd_splice)

    p = sub.add_parser("align", parents=[common], help="pairwise alignment of two sequences")
    p.add_argument("inputs", nargs="+", metavar="input",
                   help="one file with two sequences, or two files")
    p.add_argument("--mode", choices=["global", "local"], default="global")
    p.add_argument("--width", type=int, default=60, help="residues per output block")
    p.set_defaults(func=_cmd_align)

    p = sub.add_parser("search", parents=[common], help="word-seeded database search")
    p.add_argument("query", help="query sequence file or -")
    p.add_argument("database", help="FASTA database")
    p.add_argument("--k", type=int, default=None, help="word size (default 8 nucleic, 3 protein)")
    p.add_argument("--threshold", type=int, default=None, help="minimum diagonal score")
    p.add_argument("--top", type=int, default=None, help="report at most N hits")
    p.add_argument("--render", action="store_true", help="append full alignment blocks")
    p.set_defaults(func=_cmd_search)

    p = sub.add_parser("scan", parents=[common], help="protein motif scan")
    p.add_argument("pattern", help="pattern, e.g. 'H-[FW]-x(2)-G'")
    p.add_argument("input")
    p.set_defaults(func=_cmd_scan)

    p = sub.add_parser("predict2s", parents=[common], help="secondary structure prediction")
    p.add_argument("input")
    p.add_argument("--profile", action="store_true", help="emit the hydropathy profile instead")
    p.add_argument("--window", type=int, default=9, help="profile window (odd)")
    p.set_defaults(func=_cmd_predict2s)

    p = sub.add_parser("consensus", parents=[common], help="combine prediction tables")
    p.add_argument("inputs", nargs="+", metavar="prediction", help="prediction TSV files")
    p.add_argument("--weights", default=None, help="comma-separated weights, one per input")
    p.set_defaults(func=_cmd_consensus)

    p_pmf = sub.add_parser("pmf", help="peptide mass fingerprinting")
    pmf_sub = p_pmf.add_subparsers(dest="pmf_command", required=True, parser_class=_Parser)

    p = pmf_sub.add_parser("digest", parents=[common], help="enzymatic digest with peptide masses")
    p.add_argument("input")
    p.add_argument("--enzyme", default="trypsin")
    p.add_argument("--missed", type=int, default=0)
    p.set_defaults(func=_cmd_pmf_digest)

    p = pmf_sub.add_parser("mass", parents=[common], help="monoisotopic peptide mass")
    p.add_argument("input")
    p.set_defaults(func=_cmd_pmf_mass)

    p = pmf_sub.add_parser("identify", parents=[common], help="rank database proteins by peak matches")
    p.add_argument("database", help="FASTA of candidate proteins")
    p.add_argument("--peaks", required=True, help="observed masses, one per line")
    p.add_argument("--tolerance", type=float, default=0.5)
    p.add_argument("--unit", choices=["Da", "ppm"], default="Da")
    p.add_argument("--enzyme", default="trypsin")
    p.add_argument("--missed", type=int, default=0)
    p.add_argument("--top", type=int, default=None)
    p.set_defaults(func=_cmd_pmf_identify)

    p_db = sub.add_parser("db", help="record store")
    db_sub = p_db.add_subparsers(dest="db_command", required=True, parser_class=_Parser)
    db_common = _common()
    db_common.add_argument("--data", default=None,
                           help="store directory (default: $SEQFORGE_DATA)")

    p = db_sub.add_parser("ingest", parents=[db_common], help="add FASTA or flat-file records")
    p.add_argument("inputs", nargs="+", metavar="file")
    p.set_defaults(func=_cmd_db_ingest)

    p = db_sub.add_parser("query", parents=[db_common], help="boolean field query")
    p.add_argument("query", help="e.g. 'stress [ti] AND 1993 [dp]'")
    p.set_defaults(func=_cmd_db_query)

    p = db_sub.add_parser("neighbors", parents=[db_common], help="precomputed similarity links")
    p.add_argument("accession", nargs="?", default=None)
    p.add_argument("--build", action="store_true", help="(re)compute links first")
    p.add_argument("--threshold", type=int, default=None)
    p.add_argument("--k", type=int, default=None)
    p.set_defaults(func=_cmd_db_neighbors)

    p_tree = sub.add_parser("tree", help="distance matrices and clustering")
    tree_sub = p_tree.add_subparsers(dest="tree_command", required=True, parser_class=_Parser)

    p = tree_sub.add_parser("distmat", parents=[common], help="pairwise identity distances")
    p.add_argument("input", help="FASTA of sequences")
    p.set_defaults(func=_cmd_tree_distmat)

    p = tree_sub.add_parser("upgma", parents=[common], help="average-linkage tree as newick")
    p.add_argument("input", help="FASTA or a distmat table")
    p.set_defaults(func=_cmd_tree_upgma)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        config = _parse_config(args.config)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    try:
        text, payload, found = args.func(args, config)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (SeqforgeError, KeyError, ValueError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"ERROR:{type(exc).__name__}: {msg}", file=sys.stderr)
        return 2
    try:
        _emit(args, text, payload)
    except BrokenPipeError:
        return 0
    return 3 if args.strict and not found else 0


if __name__ == "__main__":
    sys.exit(main())
