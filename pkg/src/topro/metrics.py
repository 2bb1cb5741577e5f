"""Weighted F1, cross-language aggregation, method deltas and error-case export."""

from __future__ import annotations

import logging
import statistics
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .corpus import LabeledSentence, TagSet
from .decode import PredictionRecord
from .errors import EvalError, LanguageSetMismatch, LengthMismatch, NoTargetLanguages

log = logging.getLogger(__name__)


def _class_index(gold: Sequence[str], pred: Sequence[str], tagset: TagSet | None) -> list[str]:
    if tagset is not None:
        classes = list(tagset.labels)
        known = set(classes)
        extra = [t for t in dict.fromkeys([*gold, *pred]) if t not in known]
        return classes + extra
    return sorted(set(gold) | set(pred))


def per_class_scores(gold: Sequence[str], pred: Sequence[str], tagset: TagSet | None = None):
    """``(classes, support, f1)`` arrays from the confusion matrix."""
    if len(gold) != len(pred):
        raise LengthMismatch(len(gold), len(pred))
    classes = _class_index(gold, pred, tagset)
    idx = {c: i for i, c in enumerate(classes)}
    g = np.fromiter((idx[t] for t in gold), dtype=np.int64, count=len(gold))
    p = np.fromiter((idx[t] for t in pred), dtype=np.int64, count=len(pred))
    cm = kernels.confusion_matrix(g, p, len(classes))
    tp = np.diag(cm).astype(np.float64)
    support = cm.sum(axis=1).astype(np.float64)
    predicted = cm.sum(axis=0).astype(np.float64)
    denom = support + predicted
    # 2PR/(P+R) == 2TP/(support + predicted); zero when the class never occurs
    f1 = np.divide(2.0 * tp, denom, out=np.zeros_like(tp), where=denom > 0)
    return classes, support, f1


def weighted_f1(
    gold_tags: Sequence[str],
    predicted_tags: Sequence[str],
    tagset: TagSet | None = None,
    *,
    include_catch_all: bool = True,
) -> float:
    """Token-level F1 averaged over classes, weighted by gold support.

    With ``include_catch_all=False`` the tag set's fallback class ("O"/"X")
    is dropped from the average (its tokens still count as errors for the
    other classes).
    """
    if not len(gold_tags):
        if len(predicted_tags):
            raise LengthMismatch(0, len(predicted_tags))
        raise EvalError("cannot score an empty tag sequence")
    classes, support, f1 = per_class_scores(gold_tags, predicted_tags, tagset)
    if not include_catch_all:
        if tagset is None:
            raise ValueError("excluding the catch-all class needs a tag set")
        keep = np.array([c != tagset.fallback for c in classes])
        support, f1 = support[keep], f1[keep]
    total = support.sum()
    if total == 0:
        return 0.0
    # divide last so a perfect prediction gives exactly 1.0
    return float((support * f1).sum() / total)


def sentence_f1(gold_tags, predicted_tags, tagset: TagSet | None = None, **kw) -> float:
    return weighted_f1(gold_tags, predicted_tags, tagset, **kw)


def corpus_f1(records: Iterable[PredictionRecord], tagset: TagSet | None = None, **kw) -> float:
    gold, pred = [], []
    for r in records:
        if r.gold_tags is None:
            raise EvalError(f"sentence {r.sentence_id!r} has no gold tags")
        gold.extend(r.gold_tags)
        pred.extend(r.predicted_tags)
    return weighted_f1(gold, pred, tagset, **kw)


@dataclass(frozen=True)
class EvalReport:
    task: str
    method: str
    per_language: dict[str, float]
    pivot: str
    mean: float
    pivot_excluded: bool = True
    seed_stddev: dict[str, float] | None = None
    backend: str | None = None
    seeds: tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self):
        for lang, v in self.per_language.items():
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"F1 for {lang!r} outside [0, 1]: {v}")

    @property
    def average_excluding(self) -> tuple[str, float]:
        return self.pivot, self.mean

    def to_dict(self) -> dict:
        return {
            "task": self.task,
            "method": self.method,
            "backend": self.backend,
            "seeds": list(self.seeds),
            "per_language": dict(self.per_language),
            "avg_excluding_pivot": {"pivot": self.pivot, "mean": self.mean, "pivot_excluded": self.pivot_excluded},
            "seed_stddev": self.seed_stddev,
        }


def aggregate_languages(
    per_language: Mapping[str, float],
    pivot: str = "en",
    *,
    task: str = "",
    method: str = "",
    **extra,
) -> EvalReport:
    """Mean F1 over target languages; the pivot stays in the table but not in the mean.

    A pivot that is absent from the table is logged and the mean covers
    every language.
    """
    langs = dict(per_language)
    targets = [v for lang, v in langs.items() if lang != pivot]
    if not targets:
        raise NoTargetLanguages(f"no languages besides pivot {pivot!r}")
    excluded = pivot in langs
    if not excluded:
        log.warning("pivot %r not among languages %s; averaging over all", pivot, sorted(langs))
    mean = statistics.fmean(targets)
    return EvalReport(task, method, langs, pivot, mean, excluded, **extra)


def delta_table(report_a: EvalReport, report_b: EvalReport) -> dict[str, float]:
    """Per-language ``a - b`` in percentage points (positive: ``a`` is better)."""
    if set(report_a.per_language) != set(report_b.per_language):
        raise LanguageSetMismatch(
            f"languages differ: {sorted(set(report_a.per_language) ^ set(report_b.per_language))}"
        )
    return {
        lang: (report_a.per_language[lang] - report_b.per_language[lang]) * 100.0
        for lang in report_a.per_language
    }


def format_delta_tsv(columns: Mapping[str, Mapping[str, float]], average: Mapping[str, float] | None = None) -> str:
    """Languages as rows, one column per method pair, values to 2 decimals."""
    names = list(columns)
    langs = list(dict.fromkeys(lang for col in columns.values() for lang in col))
    lines = ["lang\t" + "\t".join(names)]
    for lang in langs:
        cells = [f"{columns[n][lang]:.2f}" if lang in columns[n] else "-" for n in names]
        lines.append(f"{lang}\t" + "\t".join(cells))
    if average:
        lines.append("avg.\t" + "\t".join(f"{average[n]:.2f}" if n in average else "-" for n in names))
    return "\n".join(lines) + "\n"


def as_points(x: float) -> str:
    return f"{x * 100:.2f}"


@dataclass(frozen=True)
class ErrorCase:
    sentence_id: str
    tokens: tuple[str, ...]
    gold: tuple[str, ...]
    pred_a: tuple[str, ...]
    pred_b: tuple[str, ...]
    f1_a: float
    f1_b: float

    @property
    def gap(self) -> float:
        return abs(self.f1_a - self.f1_b)


def export_error_cases(
    predictions_a: Sequence[PredictionRecord],
    predictions_b: Sequence[PredictionRecord],
    corpus: Iterable[LabeledSentence],
    k: int,
    tagset: TagSet | None = None,
) -> list[ErrorCase]:
    """The ``k`` sentences where the two systems' sentence F1 differ most.

    Ties keep corpus order.
    """
    by_a = {r.sentence_id: r for r in predictions_a}
    by_b = {r.sentence_id: r for r in predictions_b}
    cases = []
    for s in corpus:
        if s.tags is None:
            continue
        a, b = by_a[s.sentence_id], by_b[s.sentence_id]
        cases.append(
            ErrorCase(
                s.sentence_id,
                s.tokens,
                s.tags,
                a.predicted_tags,
                b.predicted_tags,
                sentence_f1(s.tags, a.predicted_tags, tagset),
                sentence_f1(s.tags, b.predicted_tags, tagset),
            )
        )
    order = sorted(range(len(cases)), key=lambda i: -cases[i].gap)
    return [cases[i] for i in order[: max(k, 0)]]


def render_error_cases(cases: Sequence[ErrorCase], name_a: str = "ToPro", name_b: str = "Vanilla") -> str:
    """Plain-text rows ``Input / True / <b> / <a>`` with per-sentence F1."""
    blocks = []
    for n, c in enumerate(cases, start=1):
        blocks.append(
            "\n".join(
                [
                    f"Case {n} ({c.sentence_id})",
                    "Input: " + " ".join(c.tokens),
                    "True: " + " ".join(t.lower() for t in c.gold),
                    f"{name_b}: " + " ".join(t.lower() for t in c.pred_b) + f" ({c.f1_b:.2f} F1)",
                    f"{name_a}: " + " ".join(t.lower() for t in c.pred_a) + f" ({c.f1_a:.2f} F1)",
                ]
            )
        )
    return "\n\n".join(blocks) + ("\n" if blocks else "")


def error_cases_to_dict(cases: Sequence[ErrorCase]) -> list[dict]:
    return [
        {
            "sentence_id": c.sentence_id,
            "tokens": list(c.tokens),
            "gold": list(c.gold),
            "pred_a": list(c.pred_a),
            "pred_b": list(c.pred_b),
            "f1_a": c.f1_a,
            "f1_b": c.f1_b,
            "gap": c.gap,
        }
        for c in cases
    ]
