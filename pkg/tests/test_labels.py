import pytest

from storyarc.labels import (CANONICAL_ORDER, CrosswalkError, FrameClass, Label,
                             UnknownLabelError, crosswalk, frame_class)


def test_closed_set():
    assert len(Label) == 11
    with pytest.raises(UnknownLabelError):
        Label.parse("climax")


def test_serialization_bijective():
    strings = {lab.value for lab in Label}
    assert len(strings) == 11
    for lab in Label:
        assert Label.parse(lab.value) is lab


def test_canonical_axis_order():
    assert [lab.value for lab in CANONICAL_ORDER] == [
        "unlabeled", "abstract", "orientation", "complicating_action",
        "most_reportable_event", "resolution", "aftermath", "evaluation",
        "return_of_mre", "minor_resolution", "direct_comment",
    ]


@pytest.mark.parametrize("label,expected", [
    (Label.ABSTRACT, FrameClass.OUT_OF_FRAME),
    (Label.EVALUATION, FrameClass.OUT_OF_FRAME),
    (Label.DIRECT_COMMENT, FrameClass.OUT_OF_FRAME),
    (Label.ORIENTATION, FrameClass.IN_FRAME),
    (Label.COMPLICATING_ACTION, FrameClass.IN_FRAME),
    (Label.MOST_REPORTABLE_EVENT, FrameClass.IN_FRAME),
    (Label.MINOR_RESOLUTION, FrameClass.IN_FRAME),
    (Label.RESOLUTION, FrameClass.IN_FRAME),
    (Label.AFTERMATH, FrameClass.IN_FRAME),
    (Label.RETURN_OF_MRE, FrameClass.IN_FRAME),
    (Label.UNLABELED, FrameClass.NEUTRAL),
])
def test_frame_classes(label, expected):
    assert frame_class(label) == expected


def test_crosswalk_climax_maps_to_mre():
    assert crosswalk("Climax", "freytag", "ours") == "Most Reportable Event"


def test_crosswalk_coda_has_no_counterpart():
    assert crosswalk("Coda", "labov_waletzky", "ours") is None


def test_crosswalk_orientation_to_todorov():
    assert crosswalk("Orientation", "ours", "todorov") == "Old Equilibrium"


def test_crosswalk_errors():
    with pytest.raises(CrosswalkError):
        crosswalk("Climax", "freytag", "propp")
    with pytest.raises(CrosswalkError):
        crosswalk("Coda", "freytag", "ours")  # Coda is not a Freytag term
