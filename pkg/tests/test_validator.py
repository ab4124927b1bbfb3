import random

import pytest

from storyarc.labels import Label
from storyarc.validator import runs_of, validate

from conftest import HEDGEHOG_ROW_LABELS, RED_SHIRT_LABELS
from oracles import random_valid_final_sequence

O = Label.ORIENTATION
CA = Label.COMPLICATING_ACTION
MRE = Label.MOST_REPORTABLE_EVENT
RES = Label.RESOLUTION
RET = Label.RETURN_OF_MRE
U = Label.UNLABELED


def error_codes(labels, status="final"):
    return {i.code for i in validate(labels, status).errors}


def warning_codes(labels, status="final"):
    return {i.code for i in validate(labels, status).warnings}


def test_hedgehog_sequence_clean():
    report = validate(HEDGEHOG_ROW_LABELS, "final")
    assert not report.errors and not report.warnings


def test_red_shirt_sequence_no_errors():
    report = validate(RED_SHIRT_LABELS, "final")
    assert not report.errors
    assert "W3" in {i.code for i in report.warnings}  # evaluation precedes resolution


def test_two_mre_runs_is_e1():
    assert "E1" in error_codes([O, MRE, CA, MRE])


def test_adjacent_return_is_e2():
    assert "E2" in error_codes([O, MRE, RET])


def test_return_without_mre_is_e2():
    assert "E2" in error_codes([O, RET, MRE, RES])


def test_separated_return_ok():
    assert not error_codes([O, MRE, RES, RET])


def test_resolution_before_mre_is_e3():
    assert "E3" in error_codes([O, RES, MRE])


def test_resolution_without_mre_final_only():
    assert "E3" in error_codes([O, RES], "final")
    assert "E3" not in error_codes([O, RES], "draft")


def test_missing_mre_final_only():
    assert "E4" in error_codes([O, CA], "final")
    assert error_codes([O, CA], "draft") == set()


def test_multi_run_reported_in_draft_too():
    assert "E1" in error_codes([MRE, U, MRE], "draft")


def test_contiguous_multi_sentence_mre_ok():
    assert not error_codes([O, MRE, MRE, MRE, RES])


def test_w1_late_abstract():
    assert "W1" in warning_codes([O, Label.ABSTRACT, MRE])


def test_w2_orientation_after_complicating_action():
    assert "W2" in warning_codes([CA, O, MRE])


def test_w4_action_after_resolution_without_return():
    assert "W4" in warning_codes([O, MRE, RES, CA])
    assert "W4" not in warning_codes([O, MRE, RES, CA, RET])


def test_w5_no_orientation():
    assert "W5" in warning_codes([CA, MRE, RES])


def test_unknown_label_raises():
    with pytest.raises(ValueError):
        validate(["climax"], "final")


def test_deterministic():
    seq = [O, CA, MRE, RES]
    assert validate(seq, "final") == validate(seq, "final")


def test_minor_resolution_unordered():
    assert not error_codes([O, Label.MINOR_RESOLUTION, CA, MRE, RES])


def inject_second_mre_run(seq):
    """Flip one label to MRE so it cannot join the existing run; None when
    the sequence has no eligible position."""
    runs = runs_of(seq, MRE)
    (start, end) = runs[0]
    for i, lab in enumerate(seq):
        if lab != MRE and not (start - 1 <= i <= end):
            mutated = list(seq)
            mutated[i] = MRE
            if len(runs_of(mutated, MRE)) > 1:
                return mutated
    return None


def test_generated_sequences_properties():
    rng = random.Random(42)
    checked_valid = injected = 0
    for _ in range(2000):
        if rng.random() < 0.5:
            seq = random_valid_final_sequence(rng)
        else:
            seq = [rng.choice(list(Label)) for _ in range(rng.randint(1, 40))]
        report = validate(seq, "final")
        if report.errors:
            continue
        checked_valid += 1
        assert len(runs_of(seq, MRE)) == 1
        mutated = inject_second_mre_run(seq)
        if mutated is not None:
            injected += 1
            assert validate(mutated, "final").errors
    assert checked_valid > 200 and injected > 200
