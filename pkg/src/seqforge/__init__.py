"""Sequence analysis toolkit.

Validated sequence objects, file formats, gene finding, pairwise
alignment and database search, secondary-structure prediction, peptide
mass fingerprinting, and a small indexed record store. The heavy
alignment kernels compile lazily on first use.
"""

__version__ = "0.1.0"

from .align import (
    Alignment,
    NUCLEOTIDE_SCHEME,
    PROTEIN_SCHEME,
    ScoringScheme,
    TreeNode,
    default_scheme,
    distance_matrix,
    identity_distance,
    ktup_search,
    needleman_wunsch,
    newick,
    render_blast,
    smith_waterman,
    upgma,
)
from .errors import SeqforgeError
from .formats import (
    FastaDoc,
    GenBankRecord,
    MotifPattern,
    detect_alphabet,
    parse_fasta,
    parse_genbank,
    parse_prosite,
    render_fasta,
    render_genbank,
    scan_motif,
)
from .genes import (
    CODON_TABLE,
    Orf,
    SpliceCandidate,
    find_orfs,
    six_frame,
    splice_candidates,
    transcribe,
    translate,
)
from .pmf import (
    Fingerprint,
    IdentifyHit,
    Peptide,
    digest,
    identify,
    match_count,
    parse_peaks,
    peptide_mass,
    theoretical_masses,
)
from .seqcore import (
    Alphabet,
    DNA,
    PROTEIN,
    PROTEIN_WITH_STOP,
    RNA,
    Sequence,
    assemble_fragments,
    complement,
    composition_windows,
    find_hairpins,
    parity_stats,
    reverse_complement,
    validate,
)
from .store import NeighborLink, Record, Store, open_store, parse_query, tokenize
from .structure import (
    HydropathyScale,
    SsPrediction,
    consensus,
    detect_helix,
    detect_strand,
    hydropathy_profile,
    load_scale,
    predict_secondary,
    render_prediction,
)

__all__ = [
    "Alignment",
    "Alphabet",
    "CODON_TABLE",
    "DNA",
    "FastaDoc",
    "Fingerprint",
    "GenBankRecord",
    "HydropathyScale",
    "IdentifyHit",
    "MotifPattern",
    "NUCLEOTIDE_SCHEME",
    "NeighborLink",
    "Orf",
    "PROTEIN",
    "PROTEIN_SCHEME",
    "PROTEIN_WITH_STOP",
    "Peptide",
    "RNA",
    "Record",
    "ScoringScheme",
    "SeqforgeError",
    "Sequence",
    "SpliceCandidate",
    "SsPrediction",
    "Store",
    "TreeNode",
    "__version__",
    "assemble_fragments",
    "complement",
    "composition_windows",
    "consensus",
    "default_scheme",
    "detect_alphabet",
    "detect_helix",
    "detect_strand",
    "digest",
    "distance_matrix",
    "find_hairpins",
    "find_orfs",
    "hydropathy_profile",
    "identify",
    "identity_distance",
    "ktup_search",
    "load_scale",
    "match_count",
    "needleman_wunsch",
    "newick",
    "open_store",
    "parity_stats",
    "parse_fasta",
    "parse_genbank",
    "parse_peaks",
    "parse_prosite",
    "parse_query",
    "peptide_mass",
    "predict_secondary",
    "render_blast",
    "render_fasta",
    "render_genbank",
    "render_prediction",
    "reverse_complement",
    "scan_motif",
    "six_frame",
    "smith_waterman",
    "splice_candidates",
    "theoretical_masses",
    "tokenize",
    "transcribe",
    "translate",
    "upgma",
    "validate",
]
