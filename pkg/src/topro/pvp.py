"""Pattern-verbalizer pairs and token-level prompt decomposition.

A template is a list of literal strings and the three markers ``{SENTENCE}``,
``{TOKEN}`` and ``{MASK}``. Rendering one template per token of a sentence
turns sequence labeling into a series of cloze questions.
"""

from __future__ import annotations

from collections.abc import Callable, Mapping
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import yaml

from .corpus import PANX_TAGS, UDPOS_TAGS, LabeledSentence, TagSet, builtin_tagset
from .errors import IndexOutOfRange, MissingTags, TemplateError, UnknownTask, VerbalizerError

SENTENCE = "{SENTENCE}"
TOKEN = "{TOKEN}"
MASK = "{MASK}"
MARKERS = (SENTENCE, TOKEN, MASK)

MASK_LITERAL = "[MASK]"

MODES = ("masked", "seq2seq", "icl")


@dataclass(frozen=True)
class PromptTemplate:
    name: str
    segments: tuple[str, ...]
    mode: str = "masked"

    def __post_init__(self):
        object.__setattr__(self, "segments", tuple(self.segments))
        if self.mode not in MODES:
            raise TemplateError(f"unknown template mode {self.mode!r}")
        n_sent = self.segments.count(SENTENCE)
        n_tok = self.segments.count(TOKEN)
        n_mask = self.segments.count(MASK)
        if n_sent != 1 or n_tok != 1:
            raise TemplateError(
                f"template {self.name!r} needs exactly one {SENTENCE} and one {TOKEN}"
            )
        if self.mode == "masked" and n_mask != 1:
            raise TemplateError(f"masked template {self.name!r} needs exactly one {MASK}")
        if self.mode != "masked" and n_mask:
            raise TemplateError(f"{self.mode} template {self.name!r} must not contain {MASK}")

    def fill(self, sentence_text: str, token: str) -> str:
        parts = []
        for seg in self.segments:
            if seg == SENTENCE:
                parts.append(sentence_text)
            elif seg == TOKEN:
                parts.append(token)
            elif seg == MASK:
                parts.append(MASK_LITERAL)
            else:
                parts.append(seg)
        return "".join(parts)

    def to_dict(self) -> dict:
        return {"name": self.name, "mode": self.mode, "segments": list(self.segments)}

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> PromptTemplate:
        return cls(name=d.get("name", "custom"), segments=tuple(d["segments"]), mode=d.get("mode", "masked"))


class Verbalizer:
    """Bijective tag -> word map, ordered like the tag set it was built for."""

    def __init__(self, forward: Mapping[str, str], tagset: TagSet | None = None):
        if tagset is not None:
            missing = [t for t in tagset.labels if t not in forward]
            extra = [t for t in forward if t not in tagset]
            if missing or extra:
                raise VerbalizerError(f"verbalizer does not cover the tag set: missing={missing} extra={extra}")
            forward = {t: forward[t] for t in tagset.labels}
        self._forward = dict(forward)
        for tag, word in self._forward.items():
            if not word or any(ch.isspace() for ch in word):
                raise VerbalizerError(f"verbalizer word for {tag!r} must be non-empty without whitespace: {word!r}")
        self._inverse = {w: t for t, w in self._forward.items()}
        if len(self._inverse) != len(self._forward):
            dup = sorted({w for w in self._forward.values() if list(self._forward.values()).count(w) > 1})
            raise VerbalizerError(f"verbalizer is not injective, repeated words: {dup}")

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(self._forward)

    @property
    def words(self) -> tuple[str, ...]:
        return tuple(self._forward.values())

    @property
    def forward(self) -> dict[str, str]:
        return dict(self._forward)

    @property
    def inverse(self) -> dict[str, str]:
        return dict(self._inverse)

    def word(self, tag: str) -> str:
        return self._forward[tag]

    def tag(self, word: str) -> str:
        return self._inverse[word]

    def __len__(self) -> int:
        return len(self._forward)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Verbalizer) and list(self._forward.items()) == list(other._forward.items())

    def __hash__(self) -> int:
        return hash(tuple(self._forward.items()))

    def __repr__(self) -> str:
        return f"Verbalizer({self._forward!r})"


@dataclass(frozen=True)
class PromptInstance:
    sentence_id: str
    token_index: int
    text: str
    gold_tag: str | None = None


# -- built-in pattern-verbalizer pairs ----------------------------------------

PANX_TEMPLATE = PromptTemplate(
    "panx", (SENTENCE, " The named entity of ", TOKEN, " is a kind of: ", MASK, "."), "masked"
)
UDPOS_TEMPLATE = PromptTemplate(
    "udpos", (SENTENCE, " The pos tag of ", TOKEN, " is a kind of: ", MASK, "."), "masked"
)

PANX_VERBALIZER = Verbalizer(
    {
        "B-LOC": "location",
        "I-LOC": "place",
        "B-ORG": "organization",
        "I-ORG": "body",
        "B-PER": "person",
        "I-PER": "name",
        "O": "other",
    },
    PANX_TAGS,
)
UDPOS_VERBALIZER = Verbalizer(
    {
        "ADJ": "modification",
        "ADP": "position",
        "ADV": "verbal",
        "AUX": "auxiliar",
        "CCONJ": "link",
        "DET": "determine",
        "INTJ": "mode",
        "NOUN": "thing",
        "NUM": "number",
        "PART": "functional",
        "PRON": "reference",
        "PROPN": "name",
        "PUNCT": "punct",
        "SCONJ": "condition",
        "SYM": "symbol",
        "VERB": "verb",
        "X": "other",
    },
    UDPOS_TAGS,
)

SEQ2SEQ_TEMPLATES = {
    "panx": PromptTemplate("panx-seq2seq", (SENTENCE, " The named entity of ", TOKEN, " is:"), "seq2seq"),
    "udpos": PromptTemplate("udpos-seq2seq", (SENTENCE, " The pos tag of ", TOKEN, " is:"), "seq2seq"),
}
SEQ2SEQ_PREFIXES = {"panx": "NER tagging: ", "udpos": "POS tagging: "}
SEQ2SEQ_DELIMITER = " $$ "

ICL_TEMPLATE = PromptTemplate(
    "panx-icl", ("Sentence: ", SENTENCE, "\nNamed entity type of ", TOKEN, " in the sentence is"), "icl"
)
ICL_HEADER = "Named entity type: "
# The published ICL prompt spells this word the British way.
ICL_SPELLINGS = {"organization": "organisation"}

_BUILTIN = {"panx": (PANX_TEMPLATE, PANX_VERBALIZER), "udpos": (UDPOS_TEMPLATE, UDPOS_VERBALIZER)}


def builtin_pvp(task: str) -> tuple[PromptTemplate, Verbalizer]:
    try:
        return _BUILTIN[task]
    except KeyError:
        raise UnknownTask(task) from None


# -- rendering ----------------------------------------------------------------


def _whitespace_units(text: str) -> int:
    return len(text.split())


def _context_window(
    template: PromptTemplate,
    tokens: tuple[str, ...],
    index: int,
    max_length: int,
    length_fn: Callable[[str], int],
) -> tuple[int, int]:
    """Shrink ``[lo, hi)`` around ``index`` until the prompt fits.

    Each step drops the context token farthest from the target; the target
    token and the template text are never dropped.
    """
    lo, hi = 0, len(tokens)
    token = tokens[index]
    while hi - lo > 1 and length_fn(template.fill(" ".join(tokens[lo:hi]), token)) > max_length:
        if index - lo > hi - 1 - index:
            lo += 1
        else:
            hi -= 1
    return lo, hi


def _check_index(sentence: LabeledSentence, token_index: int) -> None:
    if not 0 <= token_index < len(sentence.tokens):
        raise IndexOutOfRange(token_index, len(sentence.tokens))


def render_prompt(
    template: PromptTemplate,
    sentence: LabeledSentence,
    token_index: int,
    *,
    max_length: int | None = None,
    length_fn: Callable[[str], int] = _whitespace_units,
) -> PromptInstance:
    """Fill ``template`` with the sentence and its ``token_index``-th token.

    ``max_length`` (in ``length_fn`` units, whitespace words by default)
    triggers context truncation; without it the full sentence is used.
    """
    _check_index(sentence, token_index)
    tokens = sentence.tokens
    if max_length is None:
        context = sentence.text
    else:
        lo, hi = _context_window(template, tokens, token_index, max_length, length_fn)
        context = " ".join(tokens[lo:hi])
    gold = sentence.tags[token_index] if sentence.tags is not None else None
    return PromptInstance(sentence.sentence_id, token_index, template.fill(context, tokens[token_index]), gold)


def decompose(
    template: PromptTemplate,
    sentence: LabeledSentence,
    *,
    max_length: int | None = None,
    length_fn: Callable[[str], int] = _whitespace_units,
) -> list[PromptInstance]:
    """One prompt per token, in token order."""
    return [
        render_prompt(template, sentence, i, max_length=max_length, length_fn=length_fn)
        for i in range(len(sentence.tokens))
    ]


def render_seq2seq_topro(
    sentence: LabeledSentence, token_index: int, task: str
) -> tuple[str, str | None]:
    """Text-to-text input for one token; the target is the raw tag string."""
    if task not in SEQ2SEQ_TEMPLATES:
        raise UnknownTask(task)
    _check_index(sentence, token_index)
    text = SEQ2SEQ_TEMPLATES[task].fill(sentence.text, sentence.tokens[token_index])
    target = sentence.tags[token_index] if sentence.tags is not None else None
    return text, target


def render_seq2seq_vanilla(sentence: LabeledSentence, task: str) -> tuple[str, str]:
    if task not in SEQ2SEQ_PREFIXES:
        raise UnknownTask(task)
    if sentence.tags is None:
        raise MissingTags(f"sentence {sentence.sentence_id!r} has no tags")
    target = SEQ2SEQ_DELIMITER.join(f"{tag}: {tok}" for tok, tag in zip(sentence.tokens, sentence.tags))
    return SEQ2SEQ_PREFIXES[task] + sentence.text, target


def icl_candidate_words(verbalizer: Verbalizer, tagset: TagSet | None = None) -> list[str]:
    """Candidate words for the ICL header line.

    IOB2 sets list all B- words, then I- words, then the rest, each group in
    tag-set order; other schemes use tag-set order directly.
    """
    labels = list(verbalizer.labels)
    iob2 = tagset.scheme == "iob2" if tagset is not None else all(
        lab == "O" or lab[:2] in ("B-", "I-") for lab in labels
    )
    if iob2:
        labels = (
            [lab for lab in labels if lab.startswith("B-")]
            + [lab for lab in labels if lab.startswith("I-")]
            + [lab for lab in labels if not lab.startswith(("B-", "I-"))]
        )
    return [ICL_SPELLINGS.get(verbalizer.word(lab), verbalizer.word(lab)) for lab in labels]


def render_icl_prompt(
    sentence: LabeledSentence,
    token_index: int,
    verbalizer: Verbalizer,
    template: PromptTemplate = ICL_TEMPLATE,
) -> str:
    _check_index(sentence, token_index)
    header = ICL_HEADER + " ".join(icl_candidate_words(verbalizer))
    return header + "\n" + template.fill(sentence.text, sentence.tokens[token_index])


# -- verbalizer checks and overrides ------------------------------------------


@dataclass(frozen=True)
class MultiPiece:
    word: str
    pieces: int


@dataclass(frozen=True)
class Duplicate:
    word: str
    tags: tuple[str, ...]


def validate_verbalizer(
    verbalizer: Verbalizer | Mapping[str, str], vocabulary_probe: Callable[[str], int]
) -> list[MultiPiece | Duplicate]:
    """Report words that are not one vocabulary piece, and repeated words."""
    forward = verbalizer.forward if isinstance(verbalizer, Verbalizer) else dict(verbalizer)
    out: list[MultiPiece | Duplicate] = []
    by_word: dict[str, list[str]] = {}
    for tag, word in forward.items():
        by_word.setdefault(word, []).append(tag)
    for word, tags in by_word.items():
        n = vocabulary_probe(word)
        if n != 1:
            out.append(MultiPiece(word, n))
        if len(tags) > 1:
            out.append(Duplicate(word, tuple(tags)))
    return out


def _dig(doc: Mapping[str, Any], dotted: str):
    if dotted in doc:
        return doc[dotted]
    node: Any = doc
    for part in dotted.split("."):
        if not isinstance(node, Mapping) or part not in node:
            return None
        node = node[part]
    return node


def load_pvp_override(
    source: str | Path | Mapping[str, Any],
    task: str,
) -> tuple[PromptTemplate, Verbalizer]:
    """Apply a YAML/JSON override document on top of the built-in PVP for ``task``.

    Recognised keys: ``template.segments`` (list), ``template.name``,
    ``template.mode`` and ``verbalizer.<TAG>``; nested or dotted spelling.
    """
    if isinstance(source, Mapping):
        doc = dict(source)
    else:
        doc = yaml.safe_load(Path(source).read_text(encoding="utf-8")) or {}
    template, verbalizer = builtin_pvp(task)
    segments = _dig(doc, "template.segments")
    if segments is not None:
        template = PromptTemplate(
            name=_dig(doc, "template.name") or f"{task}-custom",
            segments=tuple(segments),
            mode=_dig(doc, "template.mode") or "masked",
        )
    overrides = dict(doc.get("verbalizer") or {})
    overrides.update({k.split(".", 1)[1]: v for k, v in doc.items() if k.startswith("verbalizer.")})
    if overrides:
        forward = verbalizer.forward
        unknown = [t for t in overrides if t not in forward]
        if unknown:
            raise VerbalizerError(f"override names tags outside the {task} tag set: {unknown}")
        forward.update({k: str(v) for k, v in overrides.items()})
        verbalizer = Verbalizer(forward, builtin_tagset(task))
    return template, verbalizer


def pvp_to_dict(template: PromptTemplate, verbalizer: Verbalizer) -> dict:
    return {"template": template.to_dict(), "verbalizer": verbalizer.forward}


def pvp_from_dict(d: Mapping[str, Any]) -> tuple[PromptTemplate, Verbalizer]:
    return PromptTemplate.from_dict(d["template"]), Verbalizer(d["verbalizer"])
