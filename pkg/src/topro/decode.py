"""From scores or generated text to tag sequences, plus the predictions TSV."""

from __future__ import annotations

import io
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .corpus import LabeledSentence, TagSet
from .pvp import (
    ICL_SPELLINGS,
    PromptTemplate,
    Verbalizer,
    builtin_pvp,
    decompose,
    render_icl_prompt,
    render_seq2seq_topro,
)

# Spelling variants seen in generated answers and published prompts.
WORD_ALIASES = {alt: orig for orig, alt in ICL_SPELLINGS.items()}
TAG_ALIASES = {"PUNT": "PUNCT"}

_STRIP = " \t\r\n.,:;!?\"'`()[]"


@dataclass(frozen=True)
class PredictionRecord:
    sentence_id: str
    language: str
    tokens: tuple[str, ...]
    gold_tags: tuple[str, ...] | None
    predicted_tags: tuple[str, ...]
    probabilities: tuple[float, ...] | None = None

    def __post_init__(self):
        for name in ("tokens", "predicted_tags"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        if self.gold_tags is not None:
            object.__setattr__(self, "gold_tags", tuple(self.gold_tags))
        if self.probabilities is not None:
            object.__setattr__(self, "probabilities", tuple(float(p) for p in self.probabilities))
            if any(not 0.0 <= p <= 1.0 for p in self.probabilities):
                raise ValueError("chosen probabilities must lie in [0, 1]")
        if len(self.predicted_tags) != len(self.tokens):
            raise ValueError(f"{len(self.tokens)} tokens but {len(self.predicted_tags)} predictions")


def _argmax_first(probs: np.ndarray) -> np.ndarray:
    # np.argmax returns the first maximal index, i.e. canonical-order tie-breaking
    return np.argmax(probs, axis=1)


def predict_corpus(
    scorer,
    sentences: Iterable[LabeledSentence],
    template: PromptTemplate,
    verbalizer: Verbalizer,
    *,
    max_seq_length: int | None = None,
    batch_size: int = 512,
) -> list[PredictionRecord]:
    """Decode many sentences with batched scorer calls."""
    sentences = list(sentences)
    labels = verbalizer.labels
    words = list(verbalizer.words)
    prompts, owners = [], []
    for k, s in enumerate(sentences):
        for p in decompose(template, s, max_length=max_seq_length):
            prompts.append(p)
            owners.append(k)
    chosen = np.empty(len(prompts), dtype=np.int64)
    chosen_p = np.empty(len(prompts))
    for b0 in range(0, len(prompts), batch_size):
        probs = scorer.score_batch(prompts[b0 : b0 + batch_size], words)
        idx = _argmax_first(probs)
        chosen[b0 : b0 + len(idx)] = idx
        chosen_p[b0 : b0 + len(idx)] = probs[np.arange(len(idx)), idx]
    out = []
    pos = 0
    for s in sentences:
        m = len(s.tokens)
        out.append(
            PredictionRecord(
                s.sentence_id,
                s.language,
                s.tokens,
                s.tags,
                [labels[j] for j in chosen[pos : pos + m]],
                np.clip(chosen_p[pos : pos + m], 0.0, 1.0),
            )
        )
        pos += m
    return out


def predict_tags(scorer, sentence: LabeledSentence, template: PromptTemplate, verbalizer: Verbalizer, **kw) -> PredictionRecord:
    """Pick, per token, the tag whose verbalizer word scores highest.

    Ties go to the tag listed first in the verbalizer (tag-set order).
    """
    return predict_corpus(scorer, [sentence], template, verbalizer, **kw)[0]


def parse_generated_label(
    generated_text: str, tagset: TagSet, verbalizer: Verbalizer | None = None
) -> str:
    """Map a free-text answer to a tag; falls back to the catch-all class.

    The first whitespace-delimited word is compared case-insensitively with
    the tag names first and the verbalizer words second.
    """
    words = generated_text.strip().split()
    if not words:
        return tagset.fallback
    head = words[0].strip(_STRIP).lower()
    if not head:
        return tagset.fallback
    by_tag = {t.lower(): t for t in tagset.labels}
    by_tag.update({a.lower(): t for a, t in TAG_ALIASES.items() if t in tagset})
    if head in by_tag:
        return by_tag[head]
    if verbalizer is None and tagset.task_name in ("panx", "udpos"):
        verbalizer = builtin_pvp(tagset.task_name)[1]
    if verbalizer is not None:
        head = WORD_ALIASES.get(head, head)
        by_word = {w.lower(): t for t, w in verbalizer.forward.items() if t in tagset}
        if head in by_word:
            return by_word[head]
    return tagset.fallback


def predict_tags_generative(
    generator,
    sentence: LabeledSentence,
    task: str,
    tagset: TagSet,
    *,
    mode: str = "seq2seq",
    verbalizer: Verbalizer | None = None,
    max_target_length: int = 150,
    beam_width: int = 3,
) -> PredictionRecord:
    """Per-token generation with the seq2seq (``mode="seq2seq"``) or ICL prompt."""
    if verbalizer is None:
        verbalizer = builtin_pvp(task)[1]
    tags = []
    for i in range(len(sentence.tokens)):
        if mode == "seq2seq":
            text, _ = render_seq2seq_topro(sentence, i, task)
        elif mode == "icl":
            text = render_icl_prompt(sentence, i, verbalizer)
        else:
            raise ValueError(f"unknown generative mode {mode!r}")
        answer = generator.generate(text, max_target_length=max_target_length, beam_width=beam_width)
        tags.append(parse_generated_label(answer, tagset, verbalizer))
    return PredictionRecord(sentence.sentence_id, sentence.language, sentence.tokens, sentence.tags, tags)


# -- predictions TSV ----------------------------------------------------------

COLUMNS = ("sentence_id", "token_index", "token", "gold_tag", "predicted_tag", "chosen_probability")


def format_predictions(records: Sequence[PredictionRecord], header: Mapping[str, str] | None = None) -> str:
    """Render records as TSV: one row per token, blank line between sentences.

    ``header`` entries become leading ``# key: value`` comment lines.
    """
    buf = io.StringIO()
    for k, v in (header or {}).items():
        buf.write(f"# {k}: {v}\n")
    buf.write("\t".join(COLUMNS) + "\n")
    for n, r in enumerate(records):
        if n:
            buf.write("\n")
        for i, tok in enumerate(r.tokens):
            gold = r.gold_tags[i] if r.gold_tags is not None else "-"
            prob = f"{r.probabilities[i]:.6f}" if r.probabilities is not None else "-"
            buf.write(f"{r.sentence_id}\t{i}\t{tok}\t{gold}\t{r.predicted_tags[i]}\t{prob}\n")
    return buf.getvalue()


def write_predictions(path: str | Path, records: Sequence[PredictionRecord], header: Mapping[str, str] | None = None) -> None:
    Path(path).write_text(format_predictions(records, header), encoding="utf-8")


def parse_predictions(text: str, language: str | None = None) -> tuple[dict[str, str], list[PredictionRecord]]:
    """Inverse of :func:`format_predictions`; returns ``(header, records)``."""
    header: dict[str, str] = {}
    rows: list[list[str]] = []
    records: list[PredictionRecord] = []

    def flush():
        if not rows:
            return
        gold = [r[3] for r in rows]
        probs = [r[5] for r in rows]
        records.append(
            PredictionRecord(
                rows[0][0],
                language or header.get("language", ""),
                [r[2] for r in rows],
                None if all(g == "-" for g in gold) else gold,
                [r[4] for r in rows],
                None if all(p == "-" for p in probs) else [float(p) for p in probs],
            )
        )
        rows.clear()

    for line in text.split("\n"):
        line = line.rstrip("\r")
        if not line.strip():
            flush()
            continue
        if line.startswith("# ") and "\t" not in line:
            key, _, value = line[2:].partition(":")
            header[key.strip()] = value.strip()
            continue
        fields = line.split("\t")
        if tuple(fields) == COLUMNS:
            continue
        if len(fields) != len(COLUMNS):
            raise ValueError(f"malformed predictions row: {line!r}")
        if rows and fields[0] != rows[0][0]:
            flush()
        rows.append(fields)
    flush()
    return header, records


def read_predictions(path: str | Path, language: str | None = None):
    return parse_predictions(Path(path).read_text(encoding="utf-8"), language)
