"""Sequence-level substrate: strands, antiparallel duplexes, recognition sites.

Strands are stored 5'->3'. A duplex lays its bottom strand antiparallel under
the top one at an integer column offset, so sticky ends fall out of the
geometry instead of being tracked separately. Recognition sites here are the
palindromic six-base blunt mid-cutters used by the protocol compiler.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

_COMPLEMENT = str.maketrans("ACGT", "TGCA")
ALPHABET = frozenset("ACGT")


class StrandError(ValueError):
    pass


class AmbiguousAlignmentError(StrandError):
    """Two strands admit more than one maximal perfect alignment."""


def complement(seq: str) -> str:
    """Positionwise Watson-Crick complement (the paired strand, written 3'->5')."""
    _check_alphabet(seq)
    return seq.translate(_COMPLEMENT)


def reverse_complement(seq: str) -> str:
    """The paired strand written 5'->3'."""
    return complement(seq)[::-1]


def gc_fraction(seq: str) -> Fraction:
    _check_alphabet(seq)
    return Fraction(sum(1 for b in seq if b in "GC"), len(seq))


def _check_alphabet(seq: str) -> None:
    if not seq:
        raise StrandError("empty sequence")
    bad = set(seq) - ALPHABET
    if bad:
        raise StrandError(f"sequence contains non-ACGT symbols: {sorted(bad)}")


@dataclass(frozen=True)
class Strand:
    """A single DNA strand, sequence given 5'->3', with a functional role tag."""

    seq: str
    role: str = ""

    def __post_init__(self) -> None:
        _check_alphabet(self.seq)

    def __len__(self) -> int:
        return len(self.seq)

    def reverse_complement(self, role: str = "") -> "Strand":
        return Strand(reverse_complement(self.seq), role or self.role)


@dataclass(frozen=True)
class Duplex:
    """Two antiparallel strands annealed at a column offset.

    Columns are indexed along the top strand (top base t sits at column t).
    The bottom strand runs 3'->5' when the duplex is read left to right; its
    base i (counted from its own 5' end) occupies column offset+len-1-i.
    A positive offset therefore leaves `offset` unpaired top bases on the
    left, a negative one hangs the bottom strand out past the top's 5' end.
    """

    top: Strand
    bottom: Strand
    offset: int = 0

    def __post_init__(self) -> None:
        if self.ds_end - self.ds_start < 1:
            raise StrandError("strands do not overlap at this offset")
        for c in range(self.ds_start, self.ds_end):
            if self.top.seq[c] != complement(self.bottom_base(c)):
                raise StrandError(
                    f"mismatched pair at column {c}: "
                    f"{self.top.seq[c]}/{self.bottom_base(c)}"
                )

    # -- geometry --------------------------------------------------------

    @property
    def span_start(self) -> int:
        return min(0, self.offset)

    @property
    def span_end(self) -> int:
        return max(len(self.top.seq), self.offset + len(self.bottom.seq))

    @property
    def span_length(self) -> int:
        return self.span_end - self.span_start

    @property
    def ds_start(self) -> int:
        return max(0, self.offset)

    @property
    def ds_end(self) -> int:
        return min(len(self.top.seq), self.offset + len(self.bottom.seq))

    @property
    def is_blunt(self) -> bool:
        return self.offset == 0 and len(self.top.seq) == len(self.bottom.seq)

    def bottom_base(self, column: int) -> str:
        return self.bottom.seq[self.offset + len(self.bottom.seq) - 1 - column]

    def top_line(self) -> str:
        """Sequence content across the whole span, read in top-strand orientation."""
        out = []
        for c in range(self.span_start, self.span_end):
            if 0 <= c < len(self.top.seq):
                out.append(self.top.seq[c])
            else:
                out.append(complement(self.bottom_base(c)))
        return "".join(out)

    def swapped(self) -> "Duplex":
        """The same molecule viewed with the bottom strand on top."""
        new_offset = len(self.top.seq) - (self.offset + len(self.bottom.seq))
        return Duplex(self.bottom, self.top, new_offset)


def anneal(a: Strand, b: Strand, min_overlap: int = 10) -> Duplex | None:
    """Align two strands at their single widest perfectly complementary window.

    Returns None when no window of at least `min_overlap` pairs exists;
    raises AmbiguousAlignmentError when the maximum is achieved twice.
    """
    best_width = 0
    best_offsets: list[int] = []
    for off in range(-(len(b.seq) - 1), len(a.seq)):
        lo = max(0, off)
        hi = min(len(a.seq), off + len(b.seq))
        width = hi - lo
        if width < max(min_overlap, 1):
            continue
        if all(
            a.seq[c] == complement(b.seq[off + len(b.seq) - 1 - c])
            for c in range(lo, hi)
        ):
            if width > best_width:
                best_width, best_offsets = width, [off]
            elif width == best_width:
                best_offsets.append(off)
    if not best_offsets:
        return None
    if len(best_offsets) > 1:
        raise AmbiguousAlignmentError(
            f"{len(best_offsets)} maximal alignments of width {best_width}"
        )
    return Duplex(a, b, best_offsets[0])


# -- restriction sites ---------------------------------------------------

@dataclass(frozen=True)
class RecognitionSite:
    """A palindromic six-base site cut bluntly at its center on both strands."""

    enzyme: str
    site: str
    cut_offset: int = 3

    def __post_init__(self) -> None:
        if len(self.site) != 6:
            raise StrandError(f"{self.enzyme}: recognition site must be 6 bases")
        if self.site != reverse_complement(self.site):
            raise StrandError(f"{self.enzyme}: site {self.site} is not palindromic")
        if self.cut_offset != 3:
            raise StrandError(f"{self.enzyme}: only blunt center cuts are modeled")


def find_sites(duplex: Duplex, site: RecognitionSite) -> list[int]:
    """Start positions (span coordinates) of site instances lying fully in dsDNA."""
    line = duplex.top_line()
    ds_lo = duplex.ds_start - duplex.span_start
    ds_hi = duplex.ds_end - duplex.span_start
    return [
        p
        for p in range(len(line) - 5)
        if ds_lo <= p and p + 6 <= ds_hi and line[p : p + 6] == site.site
    ]


def cut(duplex: Duplex, site: RecognitionSite) -> list[Duplex]:
    """Digest at every site instance; fragments keep their strand roles.

    Base bookkeeping is exact: fragment span lengths always sum to the
    span length of the input.
    """
    hits = find_sites(duplex, site)
    if not hits:
        return [duplex]
    cols = sorted(duplex.span_start + p + site.cut_offset for p in hits)
    bounds = [duplex.span_start] + cols + [duplex.span_end]
    return [_slice_columns(duplex, a, b) for a, b in zip(bounds, bounds[1:])]


def _slice_columns(d: Duplex, a: int, b: int) -> Duplex:
    """Fragment covering top-strand columns [a, b)."""
    ta, tb = max(a, 0), min(b, len(d.top.seq))
    ba, bb = max(a, d.offset), min(b, d.offset + len(d.bottom.seq))
    lb = len(d.bottom.seq)
    top_seq = d.top.seq[ta:tb]
    bot_seq = d.bottom.seq[d.offset + lb - bb : d.offset + lb - ba]
    return Duplex(Strand(top_seq, d.top.role), Strand(bot_seq, d.bottom.role), ba - ta)


# The six cutters the canonical protocol draws from, then further blunt
# mid-cutters so larger matrices can still get one enzyme per node.
CORE_BLUNT_CUTTERS: tuple[RecognitionSite, ...] = (
    RecognitionSite("PvuII", "CAGCTG"),
    RecognitionSite("HpaI", "GTTAAC"),
    RecognitionSite("StuI", "AGGCCT"),
    RecognitionSite("PmlI", "CACGTG"),
    RecognitionSite("EcoRV", "GATATC"),
    RecognitionSite("ScaI", "AGTACT"),
)

EXTENDED_BLUNT_CUTTERS: tuple[RecognitionSite, ...] = CORE_BLUNT_CUTTERS + (
    RecognitionSite("SmaI", "CCCGGG"),
    RecognitionSite("MscI", "TGGCCA"),
    RecognitionSite("NaeI", "GCCGGC"),
    RecognitionSite("NruI", "TCGCGA"),
    RecognitionSite("SnaBI", "TACGTA"),
    RecognitionSite("ZraI", "GACGTC"),
    RecognitionSite("FspI", "TGCGCA"),
    RecognitionSite("AfeI", "AGCGCT"),
    RecognitionSite("SspI", "AATATT"),
    RecognitionSite("DraI", "TTTAAA"),
    RecognitionSite("PsiI", "TTATAA"),
    RecognitionSite("BstZ17I", "GTATAC"),
)


# -- FASTA ----------------------------------------------------------------

def write_fasta(strands: list[Strand], width: int = 60) -> str:
    lines = []
    for i, s in enumerate(strands):
        lines.append(f">{s.role or f'strand_{i}'}")
        for k in range(0, len(s.seq), width):
            lines.append(s.seq[k : k + width])
    return "\n".join(lines) + "\n"


def read_fasta(text: str) -> list[Strand]:
    strands: list[Strand] = []
    header: str | None = None
    chunks: list[str] = []

    def flush() -> None:
        if header is not None:
            strands.append(Strand("".join(chunks), header))

    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith(">"):
            flush()
            header = line[1:].strip()
            chunks = []
        else:
            chunks.append(line)
    flush()
    return strands
