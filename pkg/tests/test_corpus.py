import json

import pytest

from storyarc import (Annotation, CorpusError, Sentence, Story, corpus_stats,
                      load_annotations, load_corpus, save_annotations, save_corpus)
from storyarc.labels import Label

from conftest import make_story


def simple_story(story_id="s1", n=2):
    texts = [f"Sentence number {i} here." for i in range(n)]
    return make_story(story_id, " ".join(texts))


def test_story_invariants_reject_bad_span():
    with pytest.raises(CorpusError):
        Story(id="s", source="other", text="Hello there. Bye now.",
              sentences=(Sentence(0, "Hello there.", (0, 12)),
                         Sentence(1, "Bye now.", (5, 21))))


def test_story_rejects_mismatched_sentence_text():
    with pytest.raises(CorpusError):
        Story(id="s", source="other", text="Hello there.",
              sentences=(Sentence(0, "Goodbye.", (0, 12)),))


def test_story_rejects_unknown_source():
    with pytest.raises(CorpusError):
        Story(id="s", source="facebook", text="Hi.")


def test_roundtrip_single_record(tmp_path):
    story = simple_story()
    path = tmp_path / "corpus.jsonl"
    save_corpus([story], path)
    assert load_corpus(path) == [story]


def test_roundtrip_byte_identical(tmp_path):
    stories = [simple_story(f"s{i}", n=i + 1) for i in range(3)]
    p1, p2 = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    save_corpus(stories, p1)
    save_corpus(load_corpus(p1), p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_save_empty_corpus(tmp_path):
    path = tmp_path / "empty.jsonl"
    save_corpus([], path)
    assert path.read_bytes() == b""


def test_newlines_in_text_stay_one_record_per_line(tmp_path):
    story = make_story("nl", "First line here.\nSecond line here.")
    path = tmp_path / "nl.jsonl"
    save_corpus([story], path)
    lines = path.read_text(encoding="utf-8").splitlines()
    assert len(lines) == 1
    assert load_corpus(path) == [story]


def test_load_reports_line_number_on_malformed_json(tmp_path):
    path = tmp_path / "bad.jsonl"
    path.write_text('{"id": "ok"...\n', encoding="utf-8")
    with pytest.raises(CorpusError, match="line 1"):
        load_corpus(path)


def test_load_rejects_duplicate_ids(tmp_path):
    path = tmp_path / "dup.jsonl"
    save_corpus([simple_story("same"), ], path)
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(path.read_text(encoding="utf-8"))
    with pytest.raises(CorpusError, match="same"):
        load_corpus(path)


def test_load_rejects_overlapping_spans(tmp_path):
    rec = {"id": "clash", "source": "other", "title": None,
           "text": "Hello there. Bye now.",
           "sentences": [{"index": 0, "span": [0, 12]},
                         {"index": 1, "span": [5, 21]}],
           "duplicate_of": None}
    path = tmp_path / "clash.jsonl"
    path.write_text(json.dumps(rec) + "\n", encoding="utf-8")
    with pytest.raises(CorpusError, match="clash"):
        load_corpus(path)


def test_canonical_key_order(tmp_path):
    path = tmp_path / "keys.jsonl"
    save_corpus([simple_story()], path)
    rec = json.loads(path.read_text(encoding="utf-8"))
    assert list(rec) == ["id", "source", "title", "text", "sentences", "duplicate_of"]


def test_annotation_length_checked_against_story():
    story = simple_story(n=3)
    ann = Annotation(story_id="s1", annotator_id="a", status="draft", version=1,
                     labels=(Label.UNLABELED,) * 2)
    with pytest.raises(CorpusError, match="labels"):
        ann.check_story(story)


def test_annotation_roundtrip(tmp_path):
    story = simple_story(n=2)
    ann = Annotation(story_id="s1", annotator_id="a", status="final", version=3,
                     labels=(Label.MOST_REPORTABLE_EVENT, Label.RESOLUTION))
    path = tmp_path / "ann.jsonl"
    save_annotations([ann], path)
    assert load_annotations(path, [story]) == [ann]


def test_annotation_unknown_story_rejected(tmp_path):
    ann = Annotation(story_id="ghost", annotator_id="a", status="final", version=1,
                     labels=(Label.MOST_REPORTABLE_EVENT,))
    path = tmp_path / "ann.jsonl"
    save_annotations([ann], path)
    with pytest.raises(CorpusError, match="ghost"):
        load_annotations(path, [simple_story()])


def test_stats_single_story():
    report = corpus_stats([simple_story(n=5)])
    assert report.mean_sentences_per_story == 5.00


def test_stats_hand_sum():
    stories = [simple_story("a", 2), simple_story("b", 4), simple_story("c", 6)]
    report = corpus_stats(stories)
    assert report.story_count == 3
    assert report.sentence_count == 12
    assert report.mean_sentences_per_story == 4.00


def test_stats_counts_final_annotations_only():
    story = simple_story(n=2)
    final = Annotation(story_id="s1", annotator_id="a", status="final", version=1,
                       labels=(Label.ORIENTATION, Label.MOST_REPORTABLE_EVENT))
    draft = Annotation(story_id="s1", annotator_id="b", status="draft", version=1,
                       labels=(Label.UNLABELED, Label.UNLABELED))
    report = corpus_stats([story], [final, draft])
    assert report.label_frequency_table == {"orientation": 1, "most_reportable_event": 1}


def test_stats_unknown_story_annotation():
    ann = Annotation(story_id="nope", annotator_id="a", status="final", version=1,
                     labels=(Label.MOST_REPORTABLE_EVENT,))
    with pytest.raises(CorpusError):
        corpus_stats([simple_story()], [ann])


def test_stats_duplicate_population():
    a = simple_story("a", 4)
    b = make_story("b", a.text, duplicate_of="a")
    report = corpus_stats([a, b])
    assert report.mean_sentences_per_story == 4.00
    assert report.unique_story_count == 1
    assert report.mean_sentences_per_unique_story == 4.00
