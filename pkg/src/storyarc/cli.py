"""Command-line interface: corpus ingest, validation, agreement metrics,
tension export, stats, and the annotation service."""

from __future__ import annotations

import json
import sys
import uuid
from pathlib import Path

import click

from . import corpus as corpus_io
from .agreement import (MERGE_PRESETS, MergeMap, RawConfusionMatrix, aligned_sequences,
                        build_confusion, confusion_csv, normalize_confusion,
                        pairwise_report)
from .corpus import Story, corpus_stats
from .intake import IntakeFlags, evaluate_intake
from .segmenter import segment
from .tension import export_curve, tension_curve
from .validator import validate


@click.group()
def main():
    """Story-structure annotation tooling."""


@main.command("segment")
@click.argument("file", type=click.Path(exists=True))
def segment_cmd(file):
    """Print one sentence per line with index and span."""
    text = Path(file).read_text(encoding="utf-8")
    for sent in segment(text):
        click.echo(f"{sent.index}\t[{sent.span[0]},{sent.span[1]})\t{sent.text}")


@main.command("ingest")
@click.argument("input", type=click.Path(exists=True))
@click.option("--out", "-o", required=True, type=click.Path())
def ingest_cmd(input, out):
    """Segment raw story records (id/source/title/text JSONL) into a corpus."""
    stories = []
    with open(input, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            rec = json.loads(line)
            sentences = segment(rec["text"])
            stories.append(Story(
                id=rec.get("id") or uuid.uuid4().hex[:12],
                source=rec.get("source", "other"),
                title=rec.get("title"),
                text=rec["text"],
                sentences=tuple(sentences),
                duplicate_of=rec.get("duplicate_of"),
            ))
    corpus_io.save_corpus(stories, out)
    click.echo(f"ingested {len(stories)} stories -> {out}")


@main.command("intake")
@click.argument("stories", type=click.Path(exists=True))
@click.option("--flags", required=True, type=click.Path(exists=True),
              help="JSONL of {story_id, has_mre, single_story, "
                   "non_narrative_below_half, offensive}")
def intake_cmd(stories, flags):
    """Emit one intake decision JSON per story."""
    corpus = {s.id: s for s in corpus_io.load_corpus(stories)}
    with open(flags, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            rec = json.loads(line)
            story = corpus[rec.pop("story_id")]
            decision = evaluate_intake(story, IntakeFlags(**rec))
            click.echo(json.dumps({"story_id": story.id, **decision.to_dict()}))


@main.command("validate")
@click.argument("annotations", type=click.Path(exists=True))
def validate_cmd(annotations):
    """Per-annotation structural report; exit 1 iff any final annotation errs."""
    failed = False
    for ann in corpus_io.load_annotations(annotations):
        report = validate(ann.labels, status=ann.status)
        click.echo(json.dumps({
            "story_id": ann.story_id,
            "annotator_id": ann.annotator_id,
            "status": ann.status,
            **report.to_dict(),
        }))
        if ann.status == "final" and report.errors:
            failed = True
    if failed:
        sys.exit(1)


def _load_merge(merge):
    if merge is None:
        return None
    if merge in MERGE_PRESETS:
        return MERGE_PRESETS[merge]()
    return MergeMap.from_dict(json.loads(Path(merge).read_text(encoding="utf-8")))


@main.command("kappa")
@click.option("--a", "a_path", required=True, type=click.Path(exists=True))
@click.option("--b", "b_path", required=True, type=click.Path(exists=True))
@click.option("--merge", default=None,
              help="'paper' or a JSON file mapping label -> merged label")
def kappa_cmd(a_path, b_path, merge):
    """Cohen's kappa between two annotation files over co-annotated stories."""
    annotations = corpus_io.load_annotations(a_path) + corpus_io.load_annotations(b_path)
    annotators = sorted({ann.annotator_id for ann in annotations})
    if len(annotators) != 2:
        raise click.ClickException(
            f"expected exactly 2 annotators, found {annotators}")
    reports = pairwise_report(annotations, pairs=[tuple(annotators)],
                              merge=_load_merge(merge))
    click.echo(json.dumps(reports[0].to_dict(), indent=2))


@main.command("confusion")
@click.option("--pairs", "annotations_path", required=True, type=click.Path(exists=True),
              help="annotations JSONL holding two or more annotators")
@click.option("--out", required=True, type=click.Path())
@click.option("--raw", is_flag=True, help="emit raw half-credit counts, not normalized")
def confusion_cmd(annotations_path, out, raw):
    """Accumulate the half-credit confusion matrix over all annotator pairs."""
    annotations = corpus_io.load_annotations(annotations_path)
    annotators = sorted({ann.annotator_id for ann in annotations
                         if ann.status == "final"})
    matrix = RawConfusionMatrix.zeros()
    for i, a in enumerate(annotators):
        for b in annotators[i + 1:]:
            try:
                seq_a, seq_b = aligned_sequences(annotations, a, b)
            except Exception:
                continue
            build_confusion(seq_a, seq_b, into=matrix)
    result = matrix if raw else normalize_confusion(matrix)
    Path(out).write_text(confusion_csv(result), encoding="utf-8")
    click.echo(f"wrote {out}")


@main.command("tension")
@click.argument("story_id")
@click.option("--annotator", required=True)
@click.option("--annotations", "annotations_path", required=True,
              type=click.Path(exists=True))
@click.option("--format", "fmt", type=click.Choice(["csv", "svg"]), default="csv")
def tension_cmd(story_id, annotator, annotations_path, fmt):
    """Export the tension curve for one (story, annotator) record."""
    for ann in corpus_io.load_annotations(annotations_path):
        if (ann.story_id, ann.annotator_id) == (story_id, annotator):
            sys.stdout.buffer.write(export_curve(tension_curve(ann.labels), format=fmt))
            return
    raise click.ClickException(f"no annotation for {story_id!r} by {annotator!r}")


@main.command("stats")
@click.option("--stories", "stories_path", required=True, type=click.Path(exists=True))
@click.option("--annotations", "annotations_path", default=None,
              type=click.Path(exists=True))
def stats_cmd(stories_path, annotations_path):
    """Corpus statistics: counts, mean sentences per story, label frequencies."""
    stories = corpus_io.load_corpus(stories_path)
    annotations = (corpus_io.load_annotations(annotations_path, stories)
                   if annotations_path else [])
    click.echo(json.dumps(corpus_stats(stories, annotations).to_dict(), indent=2))


@main.command("serve")
@click.option("--port", default=8000, type=int)
@click.option("--host", default="127.0.0.1")
@click.option("--data", "data_dir", default=None, type=click.Path())
@click.option("--tokens", "tokens_path", default=None, type=click.Path(exists=True),
              help="JSON file mapping annotator id -> bearer token")
def serve_cmd(port, host, data_dir, tokens_path):
    """Run the annotation workflow service."""
    import uvicorn

    from .service import Store, create_app

    tokens = (json.loads(Path(tokens_path).read_text(encoding="utf-8"))
              if tokens_path else None)
    app = create_app(store=Store(data_dir=data_dir), tokens=tokens)
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
