"""Tag sets, labeled sentences and the CoNLL-style TSV reader/writer."""

from __future__ import annotations

import io
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import BinaryIO, Iterable, Sequence

from .errors import EmptyCorpus, RaggedLine, UnknownTag, UnknownTask

_IOB2_RE = re.compile(r"^[BI]-\S+$")


@dataclass(frozen=True)
class TagSet:
    """An ordered label inventory.

    Label order is canonical: it fixes candidate order during scoring and
    therefore argmax tie-breaking.
    """

    task_name: str
    labels: tuple[str, ...]
    scheme: str = "plain"

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        if self.scheme not in ("iob2", "plain"):
            raise ValueError(f"unknown tagging scheme {self.scheme!r}")
        if not self.labels:
            raise ValueError("a tag set needs at least one label")
        if any(not lab for lab in self.labels):
            raise ValueError("tag labels must be non-empty")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("tag labels must be unique")
        if self.scheme == "iob2":
            bad = [lab for lab in self.labels if lab != "O" and not _IOB2_RE.match(lab)]
            if bad:
                raise ValueError(f"labels not in IOB2 form: {bad}")

    def __contains__(self, tag: object) -> bool:
        return tag in self.labels

    def __len__(self) -> int:
        return len(self.labels)

    def index(self, tag: str) -> int:
        return self.labels.index(tag)

    @property
    def fallback(self) -> str:
        """Catch-all class used when a prediction cannot be parsed."""
        if self.scheme == "iob2" and "O" in self.labels:
            return "O"
        if "X" in self.labels:
            return "X"
        return self.labels[-1]


PANX_TAGS = TagSet(
    "panx",
    ("B-LOC", "I-LOC", "B-ORG", "I-ORG", "B-PER", "I-PER", "O"),
    scheme="iob2",
)

UDPOS_TAGS = TagSet(
    "udpos",
    (
        "ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN", "NUM",
        "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X",
    ),
    scheme="plain",
)

_BUILTIN_TAGSETS = {"panx": PANX_TAGS, "udpos": UDPOS_TAGS}


def builtin_tagset(task: str) -> TagSet:
    try:
        return _BUILTIN_TAGSETS[task]
    except KeyError:
        raise UnknownTask(task) from None


@dataclass(frozen=True)
class LabeledSentence:
    sentence_id: str
    language: str
    tokens: tuple[str, ...]
    tags: tuple[str, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))
        if self.tags is not None:
            object.__setattr__(self, "tags", tuple(self.tags))
        if not self.tokens:
            raise ValueError(f"sentence {self.sentence_id!r} has no tokens")
        if self.tags is not None and len(self.tags) != len(self.tokens):
            raise ValueError(
                f"sentence {self.sentence_id!r}: {len(self.tokens)} tokens but {len(self.tags)} tags"
            )

    def __len__(self) -> int:
        return len(self.tokens)

    @property
    def text(self) -> str:
        return " ".join(self.tokens)

    @property
    def is_labeled(self) -> bool:
        return self.tags is not None


@dataclass(frozen=True)
class CorpusSplit:
    name: str
    language: str
    sentences: tuple[LabeledSentence, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "sentences", tuple(self.sentences))
        if self.name not in ("train", "dev", "test"):
            raise ValueError(f"split name must be train/dev/test, got {self.name!r}")
        for s in self.sentences:
            if s.language != self.language:
                raise ValueError(
                    f"sentence {s.sentence_id!r} is {s.language!r}, split is {self.language!r}"
                )

    def __len__(self) -> int:
        return len(self.sentences)

    def __iter__(self):
        return iter(self.sentences)

    @property
    def n_tokens(self) -> int:
        return sum(len(s) for s in self.sentences)

    @property
    def is_labeled(self) -> bool:
        return all(s.is_labeled for s in self.sentences)


def _lines(stream: bytes | str | BinaryIO | io.TextIOBase) -> Iterable[str]:
    if isinstance(stream, bytes):
        text = stream.decode("utf-8")
    elif isinstance(stream, str):
        text = stream
    else:
        data = stream.read()
        text = data.decode("utf-8") if isinstance(data, bytes) else data
    # str.splitlines would also break on U+2028 and friends inside tokens
    return [line.rstrip("\r") for line in text.split("\n")]


def parse_conll(
    stream: bytes | str | BinaryIO,
    tagset: TagSet,
    *,
    name: str = "train",
    language: str = "en",
) -> CorpusSplit:
    """Parse ``token<TAB>tag`` lines into a :class:`CorpusSplit`.

    Blank lines end sentences, ``#`` lines without a tab are comments, and a
    final sentence without a trailing blank line is kept. The tag column may be
    omitted for unlabeled data, but not for only part of a sentence.
    """
    sentences: list[LabeledSentence] = []
    tokens: list[str] = []
    tags: list[str | None] = []
    line_nos: list[int] = []

    def flush():
        if not tokens:
            return
        labeled = [t is not None for t in tags]
        if any(labeled) and not all(labeled):
            odd = labeled.index(not labeled[0])
            raise RaggedLine(line_nos[odd], 2 if labeled[odd] else 1)
        sentences.append(
            LabeledSentence(
                sentence_id=f"{language}.{name}.{len(sentences)}",
                language=language,
                tokens=tokens.copy(),
                tags=tags.copy() if all(labeled) else None,
            )
        )
        tokens.clear()
        tags.clear()
        line_nos.clear()

    for line_no, line in enumerate(_lines(stream), start=1):
        if not line.strip():
            flush()
            continue
        if line.startswith("#") and "\t" not in line:
            continue
        fields = line.split("\t")
        if len(fields) not in (1, 2) or not fields[0]:
            raise RaggedLine(line_no, len(fields))
        line_nos.append(line_no)
        tokens.append(fields[0])
        if len(fields) == 2:
            tag = fields[1].strip()
            if tag not in tagset:
                raise UnknownTag(line_no, tag)
            tags.append(tag)
        else:
            tags.append(None)
    flush()

    if not sentences:
        raise EmptyCorpus()
    return CorpusSplit(name=name, language=language, sentences=sentences)


def read_split(path: str | Path, tagset: TagSet, *, name: str = "train", language: str = "en") -> CorpusSplit:
    with open(path, "rb") as fh:
        return parse_conll(fh, tagset, name=name, language=language)


def serialize_conll(split: CorpusSplit | Sequence[LabeledSentence]) -> str:
    """Inverse of :func:`parse_conll` for well-formed input."""
    chunks = []
    for s in split:
        if s.tags is None:
            chunks.append("".join(f"{tok}\n" for tok in s.tokens))
        else:
            chunks.append("".join(f"{tok}\t{tag}\n" for tok, tag in zip(s.tokens, s.tags)))
    return "\n".join(chunks) + ("\n" if chunks else "")


@dataclass(frozen=True)
class SplitStats:
    name: str
    language: str
    n_sentences: int
    n_tokens: int
    label_histogram: dict[str, int]

    @property
    def n_labels(self) -> int:
        return sum(1 for c in self.label_histogram.values() if c > 0)


@dataclass(frozen=True)
class StatsReport:
    splits: tuple[SplitStats, ...]

    def __getitem__(self, name: str) -> SplitStats:
        for s in self.splits:
            if s.name == name:
                return s
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "splits": [
                {
                    "name": s.name,
                    "language": s.language,
                    "sentences": s.n_sentences,
                    "tokens": s.n_tokens,
                    "labels": s.n_labels,
                    "label_histogram": dict(s.label_histogram),
                }
                for s in self.splits
            ]
        }


def dataset_stats(splits: Iterable[CorpusSplit], tagset: TagSet | None = None) -> StatsReport:
    """Sentence, token and label counts per split.

    With a tag set the histogram lists every label in canonical order
    (zeros included); otherwise it lists observed labels by first appearance.
    """
    out = []
    for split in splits:
        counts: Counter[str] = Counter()
        for s in split:
            if s.tags is not None:
                counts.update(s.tags)
        if tagset is not None:
            hist = {lab: counts.get(lab, 0) for lab in tagset.labels}
        else:
            hist = dict(counts)
        out.append(SplitStats(split.name, split.language, len(split), split.n_tokens, hist))
    return StatsReport(tuple(out))


@dataclass(frozen=True)
class IOB2Violation:
    index: int
    tag: str
    previous: str | None


def validate_iob2(sentence: LabeledSentence | Sequence[str]) -> list[IOB2Violation]:
    """Positions where ``I-X`` follows neither ``B-X`` nor ``I-X``."""
    tags = sentence.tags if isinstance(sentence, LabeledSentence) else tuple(sentence)
    if tags is None:
        raise ValueError("cannot validate an unlabeled sentence")
    violations = []
    prev = None
    for i, tag in enumerate(tags):
        if tag.startswith("I-"):
            kind = tag[2:]
            if prev not in (f"B-{kind}", f"I-{kind}"):
                violations.append(IOB2Violation(i, tag, prev))
        prev = tag
    return violations
