"""Structural validation of label sequences.

Hard errors (E1-E4) block finalization; soft warnings (W1-W5) flag atypical
but admissible orderings. The split follows the schema's own wording: what
it states as "must"/"only one" is hard, what it states as "usually"/"almost
always" is soft.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

from .labels import FrameClass, Label, frame_class, parse_labels

E1_MULTIPLE_MRE_RUNS = "E1"
E2_RETURN_NOT_SEPARATED = "E2"
E3_RESOLUTION_BEFORE_MRE = "E3"
E4_MISSING_MRE = "E4"
W1_LATE_ABSTRACT = "W1"
W2_LATE_ORIENTATION = "W2"
W3_EARLY_EVALUATION = "W3"
W4_POST_RESOLUTION_ACTION = "W4"
W5_NO_ORIENTATION = "W5"


@dataclass(frozen=True)
class Issue:
    code: str
    sentence_indices: tuple[int, ...]
    message: str

    def to_dict(self) -> dict:
        return {"code": self.code,
                "sentence_indices": list(self.sentence_indices),
                "message": self.message}


@dataclass(frozen=True)
class ValidationReport:
    errors: tuple[Issue, ...] = ()
    warnings: tuple[Issue, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.errors

    def codes(self) -> set[str]:
        return {i.code for i in self.errors} | {i.code for i in self.warnings}

    def to_dict(self) -> dict:
        return {"errors": [i.to_dict() for i in self.errors],
                "warnings": [i.to_dict() for i in self.warnings]}


def runs_of(labels: Sequence[Label], target: Label) -> list[tuple[int, int]]:
    """Contiguous runs of target as half-open (start, end) index pairs."""
    runs = []
    start = None
    for i, lab in enumerate(labels):
        if lab == target and start is None:
            start = i
        elif lab != target and start is not None:
            runs.append((start, i))
            start = None
    if start is not None:
        runs.append((start, len(labels)))
    return runs


def validate(labels: Sequence[Union[Label, str]], status: str = "final") -> ValidationReport:
    """Check a label sequence against the structural constraints.

    Draft status suppresses the completeness checks (missing MRE, Resolution
    without any MRE) so partial work can be saved; everything else is always
    reported.
    """
    if status not in ("draft", "final"):
        raise ValueError(f"unknown status {status!r}")
    seq = parse_labels(labels)
    final = status == "final"
    errors: list[Issue] = []
    warnings: list[Issue] = []

    mre = Label.MOST_REPORTABLE_EVENT
    mre_runs = runs_of(seq, mre)
    mre_indices = tuple(i for i, lab in enumerate(seq) if lab == mre)

    # E1: at most one contiguous MRE run (exactly one at final)
    if len(mre_runs) > 1:
        errors.append(Issue(E1_MULTIPLE_MRE_RUNS, mre_indices,
                            f"{len(mre_runs)} separate MRE runs; the MRE must be a single "
                            "contiguous run"))
    # E4: final annotation must contain an MRE
    if final and not mre_runs:
        errors.append(Issue(E4_MISSING_MRE, (), "final annotation has no MRE sentence"))

    # E2: every Return-of-MRE run needs a preceding MRE run and at least one
    # differently-labeled sentence in between; otherwise it is the same event.
    first_mre = mre_runs[0] if mre_runs else None
    for r_start, r_end in runs_of(seq, Label.RETURN_OF_MRE):
        indices = tuple(range(r_start, r_end))
        if first_mre is None or r_start < first_mre[1]:
            errors.append(Issue(E2_RETURN_NOT_SEPARATED, indices,
                                "Return of MRE without a preceding MRE run"))
            continue
        between = seq[first_mre[1]:r_start]
        if not any(lab not in (mre, Label.RETURN_OF_MRE) for lab in between):
            errors.append(Issue(E2_RETURN_NOT_SEPARATED, indices,
                                "Return of MRE not separated from the MRE by any other "
                                "narrative function"))

    # E3: Resolution may not begin before the MRE run; at final, Resolution
    # with no MRE at all is also an error.
    res_indices = [i for i, lab in enumerate(seq) if lab == Label.RESOLUTION]
    if res_indices:
        if first_mre is not None:
            if res_indices[0] < first_mre[0]:
                errors.append(Issue(E3_RESOLUTION_BEFORE_MRE, (res_indices[0],),
                                    "Resolution begins before the MRE run"))
        elif final:
            errors.append(Issue(E3_RESOLUTION_BEFORE_MRE, tuple(res_indices),
                                "Resolution present but no MRE run"))

    # W1: Abstract after an in-frame sentence
    seen_in_frame = False
    late_abstracts = []
    for i, lab in enumerate(seq):
        if lab == Label.ABSTRACT and seen_in_frame:
            late_abstracts.append(i)
        if frame_class(lab) == FrameClass.IN_FRAME:
            seen_in_frame = True
    if late_abstracts:
        warnings.append(Issue(W1_LATE_ABSTRACT, tuple(late_abstracts),
                              "Abstract after in-frame material; abstracts usually open "
                              "the story"))

    # W2: Orientation after the first Complicating Action
    ca_indices = [i for i, lab in enumerate(seq) if lab == Label.COMPLICATING_ACTION]
    if ca_indices:
        late_orient = tuple(i for i, lab in enumerate(seq)
                            if lab == Label.ORIENTATION and i > ca_indices[0])
        if late_orient:
            warnings.append(Issue(W2_LATE_ORIENTATION, late_orient,
                                  "Orientation after the first Complicating Action"))

    # W3: Evaluation not preceded by any Resolution or Aftermath
    early_eval = tuple(
        i for i, lab in enumerate(seq)
        if lab == Label.EVALUATION
        and not any(seq[j] in (Label.RESOLUTION, Label.AFTERMATH) for j in range(i))
    )
    if early_eval:
        warnings.append(Issue(W3_EARLY_EVALUATION, early_eval,
                              "Evaluation before any Resolution or Aftermath"))

    # W4: Complicating Action after the Resolution run with no later Return of MRE
    res_runs = runs_of(seq, Label.RESOLUTION)
    if res_runs:
        res_end = res_runs[0][1]
        stragglers = tuple(
            i for i in ca_indices
            if i >= res_end and not any(lab == Label.RETURN_OF_MRE for lab in seq[i + 1:])
        )
        if stragglers:
            warnings.append(Issue(W4_POST_RESOLUTION_ACTION, stragglers,
                                  "Complicating Action after the Resolution with no "
                                  "Return of MRE following"))

    # W5: no Orientation anywhere
    if not any(lab == Label.ORIENTATION for lab in seq):
        warnings.append(Issue(W5_NO_ORIENTATION, (), "no Orientation sentence"))

    return ValidationReport(errors=tuple(errors), warnings=tuple(warnings))
