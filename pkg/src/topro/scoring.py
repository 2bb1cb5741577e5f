"""Scorers: models that fill the mask with a distribution over candidate words.

Every scorer exposes ``score_batch(prompts, candidates)`` returning an
``(n_prompts, n_candidates)`` probability array renormalised over the
candidates, and ``score_mask`` for a single prompt. Reference scorers
(lookup oracle, hashed-feature linear model) run at desk scale; the external
adapter talks to an out-of-process backend over a line-delimited JSON
protocol.
"""

from __future__ import annotations

import json
import math
import os
import re
import shlex
import socket
import subprocess
import threading
import zlib
from collections import deque
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import kernels
from .corpus import LabeledSentence, TagSet
from .errors import (
    BackendUnavailable,
    GradientMismatch,
    MaskSymbolMissing,
    MultiPieceCandidate,
    ScoringError,
    UnknownCandidate,
)
from .pvp import MASK_LITERAL, SENTENCE, TOKEN, PromptInstance, PromptTemplate, Verbalizer, builtin_pvp

PROB_FLOOR = 1e-12


@dataclass(frozen=True)
class MaskDistribution:
    probabilities: dict[str, float]

    def __post_init__(self):
        vals = list(self.probabilities.values())
        if any(p < 0 or p > 1 + 1e-12 for p in vals):
            raise ValueError("probabilities must lie in [0, 1]")
        if vals and abs(math.fsum(vals) - 1.0) > 1e-9:
            raise ValueError(f"probabilities sum to {math.fsum(vals)!r}, expected 1")

    def __getitem__(self, word: str) -> float:
        return self.probabilities[word]

    def best(self, order: Sequence[str] | None = None) -> str:
        """Most probable word; ties go to the earliest word in ``order``."""
        order = list(order) if order is not None else list(self.probabilities)
        best_word, best_p = order[0], self.probabilities[order[0]]
        for w in order[1:]:
            if self.probabilities[w] > best_p:
                best_word, best_p = w, self.probabilities[w]
        return best_word


def _as_instance(prompt: PromptInstance | str) -> PromptInstance:
    if isinstance(prompt, PromptInstance):
        return prompt
    return PromptInstance(sentence_id="", token_index=-1, text=prompt)


def _check_candidates(candidates: Sequence[str]) -> list[str]:
    cands = list(candidates)
    if not cands:
        raise ScoringError("candidate list is empty")
    if len(set(cands)) != len(cands):
        raise ScoringError("candidate list contains duplicates")
    return cands


class Scorer:
    """Common surface of all mask scorers."""

    trainable = False

    def score_batch(self, prompts: Sequence[PromptInstance | str], candidates: Sequence[str]) -> np.ndarray:
        raise NotImplementedError

    def score_mask(self, prompt: PromptInstance | str, candidates: Sequence[str]) -> MaskDistribution:
        probs = self.score_batch([prompt], candidates)[0]
        return MaskDistribution(dict(zip(candidates, (float(p) for p in probs))))

    def vocabulary_probe(self, word: str) -> int:
        return len(word.split()) or 1


# -- lookup oracle ------------------------------------------------------------


class OracleScorer(Scorer):
    """Puts ``certainty`` on the gold word of every mapped prompt.

    The remaining mass is spread evenly over the other candidates. Prompts not
    in ``gold_map`` (keyed by ``(sentence_id, token_index)``) get a uniform
    distribution.
    """

    def __init__(
        self,
        gold_map: Mapping[tuple[str, int], str],
        verbalizer: Verbalizer,
        certainty: float = 1.0,
    ):
        if not 0.0 < certainty <= 1.0:
            raise ValueError(f"certainty must be in (0, 1], got {certainty}")
        self.gold_map = dict(gold_map)
        self.verbalizer = verbalizer
        self.certainty = float(certainty)

    @classmethod
    def from_sentences(
        cls, sentences: Iterable[LabeledSentence], verbalizer: Verbalizer, certainty: float = 1.0
    ) -> OracleScorer:
        gold = {}
        for s in sentences:
            if s.tags is None:
                continue
            for i, tag in enumerate(s.tags):
                gold[(s.sentence_id, i)] = tag
        return cls(gold, verbalizer, certainty)

    def score_batch(self, prompts, candidates):
        cands = _check_candidates(candidates)
        k = len(cands)
        if k > 1 and self.certainty <= 1.0 / k:
            raise ValueError(f"certainty {self.certainty} must exceed 1/{k}")
        rest = (1.0 - self.certainty) / (k - 1) if k > 1 else 0.0
        out = np.full((len(prompts), k), 1.0 / k)
        for row, prompt in enumerate(prompts):
            inst = _as_instance(prompt)
            tag = self.gold_map.get((inst.sentence_id, inst.token_index))
            if tag is None:
                continue
            word = self.verbalizer.word(tag)
            if word not in cands:
                raise UnknownCandidate(word)
            out[row, :] = rest
            out[row, cands.index(word)] = self.certainty
        return out


def lookup_oracle_scorer(
    gold_map: Mapping[tuple[str, int], str], verbalizer: Verbalizer, certainty: float = 1.0
) -> OracleScorer:
    return OracleScorer(gold_map, verbalizer, certainty)


def uniform_scorer(verbalizer: Verbalizer) -> OracleScorer:
    return OracleScorer({}, verbalizer, 1.0)


# -- hashed-feature linear models ---------------------------------------------


def _hash_feature(name: str, dim: int) -> int:
    return zlib.crc32(name.encode("utf-8")) % dim


def _shape(token: str) -> str:
    out = []
    for ch in token:
        c = "X" if ch.isupper() else "x" if ch.islower() else "d" if ch.isdigit() else ch if not ch.isalnum() else "o"
        if not out or out[-1] != c:
            out.append(c)
    return "".join(out)


def token_features(tokens: Sequence[str], index: int, window: int) -> list[str]:
    """Feature names for ``tokens[index]`` with ``window`` neighbours per side."""
    tok = tokens[index]
    low = tok.lower()
    feats = ["bias", f"w={tok}", f"lw={low}", f"suf3={low[-3:]}", f"pre2={low[:2]}", f"shape={_shape(tok)}"]
    n = len(tokens)
    for k in range(1, window + 1):
        left = tokens[index - k].lower() if index - k >= 0 else "<s>"
        right = tokens[index + k].lower() if index + k < n else "</s>"
        feats.append(f"L{k}={left}")
        feats.append(f"R{k}={right}")
    return feats


class HashedLinearModel:
    """Linear softmax over hashed sparse features; parameters ``weights`` (D, V)."""

    def __init__(self, feature_dim: int, outputs: Sequence[str], rng_seed: int = 0, init_scale: float = 0.01):
        if feature_dim < 1:
            raise ValueError("feature_dim must be >= 1")
        self.feature_dim = int(feature_dim)
        self.outputs = tuple(outputs)
        self._col = {w: j for j, w in enumerate(self.outputs)}
        self.rng_seed = int(rng_seed)
        self.init_scale = float(init_scale)
        rng = np.random.default_rng(self.rng_seed)
        self.weights = rng.normal(0.0, 1.0, size=(self.feature_dim, len(self.outputs))) * self.init_scale

    def _cols(self, names: Sequence[str]) -> np.ndarray:
        try:
            return np.array([self._col[w] for w in names], dtype=np.int64)
        except KeyError as e:
            raise UnknownCandidate(e.args[0]) from None

    def _hash(self, feats: Sequence[str]) -> list[int]:
        return [_hash_feature(f, self.feature_dim) for f in feats]

    def apply_gradient(self, grad: np.ndarray, learning_rate: float) -> None:
        self.weights -= learning_rate * grad

    def state_dict(self) -> dict[str, np.ndarray]:
        return {"weights": self.weights.copy()}

    def load_state_dict(self, state: Mapping[str, np.ndarray]) -> None:
        w = np.asarray(state["weights"], dtype=np.float64)
        if w.shape != self.weights.shape:
            raise ValueError(f"weight shape {w.shape} does not match {self.weights.shape}")
        self.weights = w.copy()


class TinyScorer(HashedLinearModel, Scorer):
    """Trainable desk-scale mask scorer.

    Each prompt is parsed back into ``(sentence, token)`` with the template,
    the token is located in the sentence (first occurrence, so identical
    prompts always map to identical features) and hashed token/context
    features feed a linear layer with one column per verbalizer word.
    """

    trainable = True

    def __init__(
        self,
        feature_dim: int,
        tagset: TagSet,
        verbalizer: Verbalizer,
        rng_seed: int = 0,
        *,
        template: PromptTemplate | None = None,
        window: int = 1,
        init_scale: float = 0.01,
    ):
        super().__init__(feature_dim, verbalizer.words, rng_seed, init_scale)
        self.tagset = tagset
        self.verbalizer = verbalizer
        self.window = int(window)
        self.template = template if template is not None else builtin_pvp(tagset.task_name)[0]
        self._pattern = _template_regex(self.template)
        self._feature_cache: dict[str, list[int]] = {}

    def prompt_features(self, text: str) -> list[int]:
        ids = self._feature_cache.get(text)
        if ids is None:
            m = self._pattern.fullmatch(text)
            if m is None:
                raise ScoringError(f"prompt does not match template {self.template.name!r}: {text!r}")
            context = m.group("sentence").split(" ")
            token = m.group("token")
            index = context.index(token) if token in context else None
            if index is None:
                context = context + [token]
                index = len(context) - 1
            ids = self._hash(token_features(context, index, self.window))
            self._feature_cache[text] = ids
        return ids

    def _feat_matrix(self, prompts) -> np.ndarray:
        rows = [self.prompt_features(_as_instance(p).text) for p in prompts]
        return np.array(rows, dtype=np.int64).reshape(len(rows), -1)

    def score_batch(self, prompts, candidates):
        cands = _check_candidates(candidates)
        if not prompts:
            return np.zeros((0, len(cands)))
        return kernels.softmax_rows(self._feat_matrix(prompts), self.weights, self._cols(cands))

    def batch_loss_grad(self, batch: Sequence[tuple[PromptInstance | str, str]], candidates=None):
        """Summed cross-entropy of ``(prompt, gold_tag)`` pairs and its gradient.

        Returns ``(loss, clamped_count, grad)``.
        """
        cands = _check_candidates(candidates if candidates is not None else self.verbalizer.words)
        gold_words = [self.verbalizer.word(tag) for _, tag in batch]
        missing = [w for w in gold_words if w not in cands]
        if missing:
            raise UnknownCandidate(missing[0])
        gold = np.array([cands.index(w) for w in gold_words], dtype=np.int64)
        loss, clamped, grad, _ = kernels.loss_grad(
            self._feat_matrix([p for p, _ in batch]), self.weights, self._cols(cands), gold, PROB_FLOOR
        )
        return loss, clamped, grad

    def batch_loss(self, batch, candidates=None) -> float:
        return self.batch_loss_grad(batch, candidates)[0]

    def train_step(self, batch, learning_rate: float) -> float:
        """One gradient-descent step on the batch-mean loss; returns the summed loss."""
        loss, _, grad = self.batch_loss_grad(batch)
        self.apply_gradient(grad / max(len(batch), 1), learning_rate)
        return loss

    def vocabulary_probe(self, word: str) -> int:
        return 1 if word in self._col else max(len(word.split()), 1)

    def config(self) -> dict:
        return {
            "kind": "tiny",
            "feature_dim": self.feature_dim,
            "window": self.window,
            "rng_seed": self.rng_seed,
            "init_scale": self.init_scale,
        }


def _template_regex(template: PromptTemplate) -> re.Pattern:
    parts = []
    for seg in template.segments:
        if seg == SENTENCE:
            parts.append("(?P<sentence>.*)")
        elif seg == TOKEN:
            parts.append("(?P<token>.*?)")
        else:
            parts.append(re.escape(MASK_LITERAL if seg == "{MASK}" else seg))
    return re.compile("".join(parts), re.DOTALL)


def tiny_trainable_scorer(
    feature_dim: int, tagset: TagSet, verbalizer: Verbalizer, rng_seed: int = 0, **kwargs
) -> TinyScorer:
    return TinyScorer(feature_dim, tagset, verbalizer, rng_seed, **kwargs)


class TinyTokenClassifier(HashedLinearModel):
    """Prompt-free per-token classifier with one output per tag.

    Same hashed feature stack as :class:`TinyScorer`, but context comes from
    the token's true position, so repeated surfaces can get different tags.
    """

    trainable = True

    def __init__(self, feature_dim: int, tagset: TagSet, rng_seed: int = 0, *, window: int = 1, init_scale: float = 0.01):
        super().__init__(feature_dim, tagset.labels, rng_seed, init_scale)
        self.tagset = tagset
        self.window = int(window)
        self._all_cols = np.arange(len(tagset.labels), dtype=np.int64)

    def _feat_matrix(self, items: Sequence[tuple[Sequence[str], int]]) -> np.ndarray:
        rows = [self._hash(token_features(tokens, i, self.window)) for tokens, i in items]
        return np.array(rows, dtype=np.int64).reshape(len(rows), -1)

    def predict_proba(self, tokens: Sequence[str]) -> np.ndarray:
        feats = self._feat_matrix([(tokens, i) for i in range(len(tokens))])
        return kernels.softmax_rows(feats, self.weights, self._all_cols)

    def predict(self, tokens: Sequence[str]) -> list[str]:
        probs = self.predict_proba(tokens)
        return [self.tagset.labels[j] for j in np.argmax(probs, axis=1)]

    def batch_loss_grad(self, batch: Sequence[tuple[Sequence[str], int, str]], candidates=None):
        """``batch`` holds ``(tokens, index, gold_tag)`` triples."""
        feats = self._feat_matrix([(toks, i) for toks, i, _ in batch])
        gold = np.array([self.tagset.index(t) for _, _, t in batch], dtype=np.int64)
        loss, clamped, grad, _ = kernels.loss_grad(feats, self.weights, self._all_cols, gold, PROB_FLOOR)
        return loss, clamped, grad

    def batch_loss(self, batch, candidates=None) -> float:
        return self.batch_loss_grad(batch)[0]

    def train_step(self, batch, learning_rate: float) -> float:
        loss, _, grad = self.batch_loss_grad(batch)
        self.apply_gradient(grad / max(len(batch), 1), learning_rate)
        return loss

    def config(self) -> dict:
        return {
            "kind": "tiny-classifier",
            "feature_dim": self.feature_dim,
            "window": self.window,
            "rng_seed": self.rng_seed,
            "init_scale": self.init_scale,
        }


# -- gradient check -----------------------------------------------------------


@dataclass(frozen=True)
class GradientCheckReport:
    max_rel_error: float
    worst_coordinate: tuple[int, int]
    analytic: float
    numeric: float
    n_checked: int
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_rel_error <= self.tolerance


def finite_difference_gradient_check(
    model,
    batch,
    epsilon: float = 1e-5,
    tolerance: float = 1e-4,
    *,
    max_coordinates: int = 4096,
    scale_floor: float = 1e-6,
    analytic_grad: np.ndarray | None = None,
    seed: int = 0,
) -> GradientCheckReport:
    """Compare ``model.batch_loss_grad`` against central differences.

    Relative error per coordinate is ``|a - n| / max(|a|, |n|, scale_floor)``.
    Large parameter matrices are sub-sampled: every coordinate with a non-zero
    analytic gradient plus a seeded sample of the rest, up to
    ``max_coordinates``. Raises :class:`GradientMismatch` above ``tolerance``.
    """
    if analytic_grad is None:
        _, _, analytic_grad = model.batch_loss_grad(batch)
    w = model.weights
    if w.size <= max_coordinates:
        coords = list(np.ndindex(*w.shape))
    else:
        touched = list(zip(*np.nonzero(analytic_grad)))
        rng = np.random.default_rng(seed)
        flat = rng.choice(w.size, size=max(0, max_coordinates - len(touched)), replace=False)
        coords = touched[:max_coordinates] + [np.unravel_index(i, w.shape) for i in flat]

    worst = (-1.0, (0, 0), 0.0, 0.0)
    for c in coords:
        orig = w[c]
        w[c] = orig + epsilon
        up = model.batch_loss(batch)
        w[c] = orig - epsilon
        down = model.batch_loss(batch)
        w[c] = orig
        numeric = (up - down) / (2.0 * epsilon)
        a = float(analytic_grad[c])
        rel = abs(a - numeric) / max(abs(a), abs(numeric), scale_floor)
        if rel > worst[0]:
            worst = (rel, tuple(int(x) for x in c), a, numeric)
    report = GradientCheckReport(worst[0], worst[1], worst[2], worst[3], len(coords), tolerance)
    if not report.passed:
        raise GradientMismatch(report)
    return report


# -- external backends --------------------------------------------------------


def cache_dir() -> Path:
    """Backend artifact directory: ``$TOPRO_CACHE_DIR`` or ``~/.cache/topro``."""
    return Path(os.environ.get("TOPRO_CACHE_DIR") or Path.home() / ".cache" / "topro")


class _LineTransport:
    """One JSON document per line over a subprocess pipe or a socket."""

    def __init__(self, endpoint: str, timeout: float):
        self.endpoint = endpoint
        self._lock = threading.Lock()
        self._proc = None
        self._sock = None
        kind, _, target = endpoint.partition(":")
        try:
            if kind == "stdio":
                env = dict(os.environ, TOPRO_CACHE_DIR=str(cache_dir()))
                self._proc = subprocess.Popen(
                    shlex.split(target),
                    stdin=subprocess.PIPE,
                    stdout=subprocess.PIPE,
                    text=True,
                    encoding="utf-8",
                    env=env,
                )
                self._reader, self._writer = self._proc.stdout, self._proc.stdin
            elif kind == "tcp":
                host, _, port = target.rpartition(":")
                self._sock = socket.create_connection((host or "127.0.0.1", int(port)), timeout=timeout)
            elif kind == "unix":
                self._sock = socket.socket(socket.AF_UNIX, socket.SOCK_STREAM)
                self._sock.settimeout(timeout)
                self._sock.connect(target)
            else:
                raise BackendUnavailable(f"unsupported endpoint {endpoint!r} (use stdio:, tcp: or unix:)")
        except (OSError, ValueError) as e:
            raise BackendUnavailable(f"cannot reach backend {endpoint!r}: {e}") from e
        if self._sock is not None:
            self._reader = self._sock.makefile("r", encoding="utf-8")
            self._writer = self._sock.makefile("w", encoding="utf-8")

    def request(self, doc: dict) -> dict:
        with self._lock:
            try:
                self._writer.write(json.dumps(doc, ensure_ascii=False) + "\n")
                self._writer.flush()
                line = self._reader.readline()
            except OSError as e:
                raise BackendUnavailable(f"backend {self.endpoint!r} failed: {e}") from e
        if not line:
            raise BackendUnavailable(f"backend {self.endpoint!r} closed the connection")
        reply = json.loads(line)
        if isinstance(reply, dict) and reply.get("error"):
            raise ScoringError(f"backend error: {reply['error']}")
        return reply

    def close(self) -> None:
        for fh in (getattr(self, "_writer", None), getattr(self, "_reader", None)):
            try:
                if fh is not None:
                    fh.close()
            except OSError:
                pass
        if self._sock is not None:
            self._sock.close()
        if self._proc is not None:
            self._proc.wait(timeout=5)


def _log_softmax_rows(log_probs: np.ndarray) -> np.ndarray:
    shifted = log_probs - log_probs.max(axis=1, keepdims=True)
    return np.exp(shifted) / np.exp(shifted).sum(axis=1, keepdims=True)


class ExternalScorer(Scorer):
    """Adapter for an out-of-process masked LM.

    Calls are serialised on one connection, so concurrent ``score_batch``
    calls are safe but not parallel.
    """

    def __init__(self, endpoint: str, timeout: float = 30.0):
        self.endpoint = endpoint
        self._transport = _LineTransport(endpoint, timeout)
        info = self._transport.request({"op": "info"})
        mask = info.get("mask_token") if isinstance(info, dict) else None
        if not mask:
            self._transport.close()
            raise MaskSymbolMissing(f"backend {endpoint!r} advertises no mask token")
        self.mask_token = mask
        self._pieces: dict[str, int] = {}

    def vocabulary_probe(self, word: str) -> int:
        if word not in self._pieces:
            reply = self._transport.request({"op": "probe", "words": [word]})
            self._pieces[word] = int(reply["pieces"][0])
        return self._pieces[word]

    def score_batch(self, prompts, candidates):
        cands = _check_candidates(candidates)
        for w in cands:
            n = self.vocabulary_probe(w)
            if n != 1:
                raise MultiPieceCandidate(w, n)
        texts = [_as_instance(p).text.replace(MASK_LITERAL, self.mask_token) for p in prompts]
        reply = self._transport.request({"op": "score", "prompts": texts, "candidates": cands})
        lp = np.asarray(reply["log_probs"], dtype=np.float64).reshape(len(texts), -1)
        if lp.shape[1] != len(cands):
            raise ScoringError(f"backend returned {lp.shape[1]} columns for {len(cands)} candidates")
        return _log_softmax_rows(lp) if len(texts) else lp

    def close(self) -> None:
        self._transport.close()


def external_scorer_adapter(endpoint_spec: str, timeout: float = 30.0) -> ExternalScorer:
    return ExternalScorer(endpoint_spec, timeout)


# -- generators ---------------------------------------------------------------


class Generator:
    def generate(self, input_text: str, max_target_length: int = 150, beam_width: int = 3) -> str:
        raise NotImplementedError


class ExternalGenerator(Generator):
    def __init__(self, endpoint: str, timeout: float = 60.0):
        self.endpoint = endpoint
        self._transport = _LineTransport(endpoint, timeout)

    def generate(self, input_text, max_target_length=150, beam_width=3):
        reply = self._transport.request(
            {
                "op": "generate",
                "inputs": [input_text],
                "max_target_length": max_target_length,
                "beam_width": beam_width,
            }
        )
        return str(reply["outputs"][0])

    def close(self) -> None:
        self._transport.close()


class ConstantGenerator(Generator):
    """Always answers ``text`` (the empty string by default)."""

    def __init__(self, text: str = ""):
        self.text = text

    def generate(self, input_text, max_target_length=150, beam_width=3):
        return self.text


class EchoGoldGenerator(Generator):
    """Answers with the gold tag of each prompt, queued per prompt text.

    Identical prompt texts (repeated tokens) are answered in the order their
    gold tags were registered, which matches per-token decoding order.
    """

    def __init__(self, answers: Iterable[tuple[str, str]] = ()):
        self._queues: dict[str, deque[str]] = {}
        for text, tag in answers:
            self.add(text, tag)

    def add(self, text: str, tag: str) -> None:
        self._queues.setdefault(text, deque()).append(tag)

    def generate(self, input_text, max_target_length=150, beam_width=3):
        q = self._queues.get(input_text)
        return q.popleft() if q else ""


def make_generator(spec: str) -> Generator:
    if spec.startswith("external:"):
        return ExternalGenerator(spec.split(":", 1)[1])
    if spec == "stub:empty":
        return ConstantGenerator("")
    raise ValueError(f"unknown generator backend {spec!r}")

