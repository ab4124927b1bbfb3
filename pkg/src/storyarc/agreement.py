"""Interrater agreement analytics: pairwise Cohen's kappa, the half-credit
confusion matrix with its row-sum normalization, and category-merge
re-analysis.

Raw confusion counts are stored as integers of half-units (count * 2) so the
0.5 increments accumulate exactly; probabilities are computed with Fractions
and only converted to float in reports.
"""

from __future__ import annotations

import io
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Optional, Sequence, Union

from .corpus import Annotation
from .labels import CANONICAL_ORDER, DISPLAY_NAMES, LABEL_INDEX, Label, parse_labels

N_LABELS = len(CANONICAL_ORDER)


class AgreementError(ValueError):
    pass


@dataclass(frozen=True)
class AgreementReport:
    kappa: float
    observed_agreement: float
    expected_agreement: float
    sentence_count: int
    annotator_a: str = "a"
    annotator_b: str = "b"
    merged_kappa: Optional[float] = None
    merged_observed_agreement: Optional[float] = None

    def to_dict(self) -> dict:
        out = {
            "annotator_a": self.annotator_a,
            "annotator_b": self.annotator_b,
            "sentence_count": self.sentence_count,
            "observed_agreement": self.observed_agreement,
            "expected_agreement": self.expected_agreement,
            "kappa": self.kappa,
        }
        if self.merged_kappa is not None:
            out["merged_kappa"] = self.merged_kappa
            out["merged_observed_agreement"] = self.merged_observed_agreement
        return out


def _check_pair(a: Sequence[Label], b: Sequence[Label]) -> None:
    if len(a) != len(b):
        raise AgreementError(f"sequence length mismatch: {len(a)} vs {len(b)}")
    if not a:
        raise AgreementError("empty label sequences")


def cohen_kappa(a: Sequence[Union[Label, str]], b: Sequence[Union[Label, str]],
                annotator_a: str = "a", annotator_b: str = "b") -> AgreementReport:
    """Sentence-level Cohen's kappa between two aligned label sequences.

    p_o = fraction of equal positions; p_e = sum over labels of the product
    of each annotator's marginal frequencies. Perfect observed agreement is
    defined as kappa 1 even in the degenerate single-category case.
    """
    seq_a, seq_b = parse_labels(a), parse_labels(b)
    _check_pair(seq_a, seq_b)
    n = len(seq_a)
    matches = sum(1 for x, y in zip(seq_a, seq_b) if x == y)
    p_o = Fraction(matches, n)
    marg_a, marg_b = Counter(seq_a), Counter(seq_b)
    p_e = sum((Fraction(marg_a[lab], n) * Fraction(marg_b[lab], n)
               for lab in marg_a), Fraction(0))
    if p_o == 1:
        kappa = 1.0
    else:
        kappa = float((p_o - p_e) / (1 - p_e))
    return AgreementReport(kappa=kappa,
                           observed_agreement=float(p_o),
                           expected_agreement=float(p_e),
                           sentence_count=n,
                           annotator_a=annotator_a,
                           annotator_b=annotator_b)


# ---------------------------------------------------------------------------
# Confusion matrices
# ---------------------------------------------------------------------------

@dataclass
class RawConfusionMatrix:
    """Symmetric 11x11 grid in canonical axis order, counts kept as integer
    half-units: agreement on a label adds 2 to the diagonal cell, a
    disagreement adds 1 to each of the two mirrored cells.
    """
    half_counts: list[list[int]]

    @classmethod
    def zeros(cls) -> "RawConfusionMatrix":
        return cls([[0] * N_LABELS for _ in range(N_LABELS)])

    def add_pair(self, x: Label, y: Label) -> None:
        i, j = LABEL_INDEX[x], LABEL_INDEX[y]
        if i == j:
            self.half_counts[i][i] += 2
        else:
            self.half_counts[i][j] += 1
            self.half_counts[j][i] += 1

    def value(self, x: Label, y: Label) -> float:
        return self.half_counts[LABEL_INDEX[x]][LABEL_INDEX[y]] / 2

    def total_mass(self) -> float:
        return sum(sum(row) for row in self.half_counts) / 2

    def row_half_sums(self) -> list[int]:
        return [sum(row) for row in self.half_counts]


@dataclass(frozen=True)
class NormalizedConfusionMatrix:
    cells: tuple[tuple[float, ...], ...]

    def value(self, x: Label, y: Label) -> float:
        return self.cells[LABEL_INDEX[x]][LABEL_INDEX[y]]


def build_confusion(a: Sequence[Union[Label, str]], b: Sequence[Union[Label, str]],
                    into: Optional[RawConfusionMatrix] = None) -> RawConfusionMatrix:
    """Half-credit counting: agreement on i increments (i, i) by 1; an (i, j)
    disagreement increments both (i, j) and (j, i) by 0.5. Pass `into` to
    accumulate across co-annotated stories.
    """
    seq_a, seq_b = parse_labels(a), parse_labels(b)
    if len(seq_a) != len(seq_b):
        raise AgreementError(f"sequence length mismatch: {len(seq_a)} vs {len(seq_b)}")
    matrix = into if into is not None else RawConfusionMatrix.zeros()
    for x, y in zip(seq_a, seq_b):
        matrix.add_pair(x, y)
    return matrix


def normalize_confusion(raw: RawConfusionMatrix) -> NormalizedConfusionMatrix:
    """n_ij = 2*c_ij / (row_i sum + row_j sum); zero denominators define 0.

    In half-units the factor of 2 cancels: 2*(h_ij/2) / ((H_i + H_j)/2)
    = 2*h_ij / (H_i + H_j).
    """
    half_row = raw.row_half_sums()
    cells = []
    for i in range(N_LABELS):
        row = []
        for j in range(N_LABELS):
            denom = half_row[i] + half_row[j]
            row.append(2 * raw.half_counts[i][j] / denom if denom else 0.0)
        cells.append(tuple(row))
    return NormalizedConfusionMatrix(tuple(cells))


def confusion_csv(matrix: Union[RawConfusionMatrix, NormalizedConfusionMatrix]) -> str:
    """12x12 CSV: header row/column in canonical axis order, cells to 2 dp."""
    out = io.StringIO()
    names = [DISPLAY_NAMES[lab] for lab in CANONICAL_ORDER]
    out.write("," + ",".join(names) + "\r\n")
    for lab in CANONICAL_ORDER:
        cells = [f"{matrix.value(lab, other):.2f}" for other in CANONICAL_ORDER]
        out.write(DISPLAY_NAMES[lab] + "," + ",".join(cells) + "\r\n")
    return out.getvalue()


# ---------------------------------------------------------------------------
# Category merging
# ---------------------------------------------------------------------------

class MergeMap:
    """Total map from the 11 labels onto a smaller set; Unlabeled is fixed."""

    def __init__(self, mapping: Mapping[Label, Label]):
        missing = [lab for lab in Label if lab not in mapping]
        if missing:
            raise AgreementError("merge map must be total; missing: "
                                 + ", ".join(lab.value for lab in missing))
        if mapping[Label.UNLABELED] != Label.UNLABELED:
            raise AgreementError("merge map must keep Unlabeled as Unlabeled")
        self._map = dict(mapping)

    def __getitem__(self, label: Label) -> Label:
        return self._map[label]

    @classmethod
    def identity(cls) -> "MergeMap":
        return cls({lab: lab for lab in Label})

    @classmethod
    def from_dict(cls, raw: Mapping[str, str]) -> "MergeMap":
        return cls({Label.parse(k): Label.parse(v) for k, v in raw.items()})


def paper_merge_map() -> MergeMap:
    """The published re-analysis: Resolution/Evaluation/Aftermath collapse to
    one category; Minor Resolution and Return of MRE become Unlabeled."""
    mapping = {lab: lab for lab in Label}
    mapping[Label.EVALUATION] = Label.RESOLUTION
    mapping[Label.AFTERMATH] = Label.RESOLUTION
    mapping[Label.MINOR_RESOLUTION] = Label.UNLABELED
    mapping[Label.RETURN_OF_MRE] = Label.UNLABELED
    return MergeMap(mapping)


MERGE_PRESETS = {"paper": paper_merge_map}


def apply_merge(labels: Sequence[Union[Label, str]], merge: MergeMap) -> list[Label]:
    return [merge[lab] for lab in parse_labels(labels)]


# ---------------------------------------------------------------------------
# Corpus-level pairwise reports
# ---------------------------------------------------------------------------

def aligned_sequences(annotations: Sequence[Annotation], annotator_a: str,
                      annotator_b: str) -> tuple[list[Label], list[Label]]:
    """Concatenated label sequences over the pair's co-annotated stories,
    in sorted story-id order. Only final annotations participate."""
    by_key = {(ann.story_id, ann.annotator_id): ann
              for ann in annotations if ann.status == "final"}
    shared = sorted({sid for sid, aid in by_key if aid == annotator_a}
                    & {sid for sid, aid in by_key if aid == annotator_b})
    if not shared:
        raise AgreementError(
            f"annotators {annotator_a!r} and {annotator_b!r} share no co-annotated stories")
    seq_a: list[Label] = []
    seq_b: list[Label] = []
    for sid in shared:
        a, b = by_key[(sid, annotator_a)], by_key[(sid, annotator_b)]
        if len(a.labels) != len(b.labels):
            raise AgreementError(f"story {sid}: annotations disagree on sentence count")
        seq_a.extend(a.labels)
        seq_b.extend(b.labels)
    return seq_a, seq_b


def pairwise_report(annotations: Sequence[Annotation],
                    pairs: Optional[Sequence[tuple[str, str]]] = None,
                    merge: Optional[MergeMap] = None) -> list[AgreementReport]:
    """One agreement report per annotator pair over their co-annotated
    sentences; with a merge map, a second kappa on merged labels."""
    if pairs is None:
        annotators = sorted({ann.annotator_id for ann in annotations
                             if ann.status == "final"})
        pairs = [p for p in combinations(annotators, 2)]
    reports = []
    for annotator_a, annotator_b in pairs:
        seq_a, seq_b = aligned_sequences(annotations, annotator_a, annotator_b)
        report = cohen_kappa(seq_a, seq_b, annotator_a, annotator_b)
        if merge is not None:
            merged = cohen_kappa(apply_merge(seq_a, merge), apply_merge(seq_b, merge))
            report = AgreementReport(
                kappa=report.kappa,
                observed_agreement=report.observed_agreement,
                expected_agreement=report.expected_agreement,
                sentence_count=report.sentence_count,
                annotator_a=annotator_a,
                annotator_b=annotator_b,
                merged_kappa=merged.kappa,
                merged_observed_agreement=merged.observed_agreement,
            )
        reports.append(report)
    return reports
