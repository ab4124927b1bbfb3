"""Sentence-level narrative-function annotation toolkit."""

from .agreement import (AgreementReport, MergeMap, NormalizedConfusionMatrix,
                        RawConfusionMatrix, apply_merge, build_confusion, cohen_kappa,
                        normalize_confusion, paper_merge_map, pairwise_report)
from .corpus import (Annotation, Annotator, CorpusError, Sentence, StatsReport, Story,
                     corpus_stats, load_annotations, load_corpus, save_annotations,
                     save_corpus)
from .intake import IntakeDecision, IntakeFlags, count_dialogue_lines, count_words, \
    evaluate_intake
from .labels import CANONICAL_ORDER, FrameClass, Label, crosswalk, frame_class
from .segmenter import SegmentationError, segment
from .tension import TensionCurve, export_curve, tension_curve
from .validator import ValidationReport, validate
from .workflow import (DiffReport, OverlapPlan, Stage, Task, assign_overlap,
                       training_diff)

__version__ = "0.1.0"
