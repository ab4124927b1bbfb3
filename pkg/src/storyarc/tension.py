"""Dramatic-tension curve derived from a label sequence.

The magnitudes encode only ordinal claims: tension rises with each
complicating action, dips slightly at a minor resolution, peaks at the MRE,
drops swiftly at the resolution, and re-rises near the peak at a return of
the MRE. Out-of-frame sentences (Abstract, Evaluation, Direct Comment) emit
no point: they sit outside the recounted events.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union
from xml.sax.saxutils import escape

from .labels import FrameClass, Label, frame_class, parse_labels

COMPLICATING_STEP = 1.0
MINOR_RESOLUTION_DIP = 0.5
MRE_MARGIN = 2.0
RESOLUTION_LEVEL = 1.0
AFTERMATH_LEVEL = 0.5
RETURN_DROP = 0.5


class TensionError(ValueError):
    pass


@dataclass(frozen=True)
class TensionPoint:
    sentence_index: int
    label: Label
    tension: float


@dataclass(frozen=True)
class TensionCurve:
    points: tuple[TensionPoint, ...]

    def values(self) -> list[float]:
        return [p.tension for p in self.points]


def tension_curve(labels: Sequence[Union[Label, str]]) -> TensionCurve:
    """Left-to-right evaluation with a running value and running maximum."""
    seq = parse_labels(labels)
    points: list[TensionPoint] = []
    v = 0.0
    running_max = 0.0
    mre_level: float | None = None
    in_mre_run = False

    for i, lab in enumerate(seq):
        if frame_class(lab) == FrameClass.OUT_OF_FRAME:
            in_mre_run = False
            continue
        if lab == Label.MOST_REPORTABLE_EVENT:
            if not in_mre_run:
                mre_level = running_max + MRE_MARGIN  # fixed at run start
                in_mre_run = True
            v = mre_level
        else:
            in_mre_run = False
            if lab == Label.ORIENTATION:
                v = 0.0
            elif lab == Label.COMPLICATING_ACTION:
                v = v + COMPLICATING_STEP
            elif lab == Label.MINOR_RESOLUTION:
                v = max(v - MINOR_RESOLUTION_DIP, 0.0)
            elif lab == Label.RESOLUTION:
                v = RESOLUTION_LEVEL
            elif lab == Label.AFTERMATH:
                v = AFTERMATH_LEVEL
            elif lab == Label.RETURN_OF_MRE:
                if mre_level is None:
                    raise TensionError("Return of MRE with no preceding MRE run")
                v = mre_level - RETURN_DROP
            # Unlabeled: v unchanged
        points.append(TensionPoint(sentence_index=i, label=lab, tension=v))
        running_max = max(running_max, v)

    return TensionCurve(tuple(points))


def export_curve(curve: TensionCurve, format: str = "csv") -> bytes:
    if format == "csv":
        return _to_csv(curve)
    if format == "svg":
        return _to_svg(curve)
    raise TensionError(f"unsupported format {format!r}")


def _fmt(x: float) -> str:
    return f"{x:g}"


def _to_csv(curve: TensionCurve) -> bytes:
    lines = ["sentence_index,label,tension"]
    lines += [f"{p.sentence_index},{p.label.value},{_fmt(p.tension)}" for p in curve.points]
    return ("\n".join(lines) + "\n").encode("utf-8")


def _to_svg(curve: TensionCurve, width: int = 640, height: int = 320) -> bytes:
    pad = 40
    pts = curve.points
    max_t = max((p.tension for p in pts), default=1.0) or 1.0
    span_x = max(len(pts) - 1, 1)

    def x_of(k: int) -> float:
        return pad + k * (width - 2 * pad) / span_x

    def y_of(t: float) -> float:
        return height - pad - t * (height - 2 * pad) / max_t

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" '
        'stroke="black"/>',
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="black"/>',
    ]
    if pts:
        coords = " ".join(f"{x_of(k):.1f},{y_of(p.tension):.1f}" for k, p in enumerate(pts))
        parts.append(f'<polyline fill="none" stroke="steelblue" stroke-width="2" '
                     f'points="{coords}"/>')
    for k, p in enumerate(pts):
        parts.append(f'<text x="{x_of(k):.1f}" y="{height - pad + 16}" font-size="10" '
                     f'text-anchor="middle">{escape(str(p.sentence_index))}</text>')
    parts.append("</svg>")
    return "\n".join(parts).encode("utf-8")
