"""Prompt-based fine-tuning, the vanilla token-classification baseline and seed runs."""

from __future__ import annotations

import logging
import math
import statistics
import time
import warnings
from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .corpus import CorpusSplit
from .errors import NonFiniteLoss, SeedRunError, TrainingError, ZeroProbability
from .pvp import PromptInstance, PromptTemplate, Verbalizer, decompose

log = logging.getLogger(__name__)

PROB_FLOOR = 1e-12
DEFAULT_SEEDS = (10, 42, 421, 510, 1218)

# Config-file key -> TrainConfig field. Keys follow the hyperparameter table names.
_CONFIG_KEYS = {
    "epochs": "epochs",
    "learning_rate": "learning_rate",
    "batch_size": "batch_size",
    "grad_acc_steps": "grad_accumulation_steps",
    "grad_accumulation_steps": "grad_accumulation_steps",
    "max_seq_length": "max_seq_length",
    "max_target_length": "max_target_length",
    "num_beam_search": "beam_width",
    "beam_width": "beam_width",
    "seeds": "seeds",
}


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 5
    learning_rate: float = 1e-5
    batch_size: int = 8
    grad_accumulation_steps: int = 4
    max_seq_length: int = 128
    max_target_length: int | None = None
    beam_width: int | None = None
    seeds: tuple[int, ...] = DEFAULT_SEEDS

    def __post_init__(self):
        object.__setattr__(self, "seeds", tuple(int(s) for s in self.seeds))
        for name in ("epochs", "batch_size", "grad_accumulation_steps", "max_seq_length"):
            if int(getattr(self, name)) < 1:
                raise ValueError(f"{name} must be >= 1, got {getattr(self, name)}")
        for name in ("max_target_length", "beam_width"):
            v = getattr(self, name)
            if v is not None and int(v) < 1:
                raise ValueError(f"{name} must be >= 1, got {v}")
        if not self.learning_rate > 0:
            raise ValueError(f"learning_rate must be > 0, got {self.learning_rate}")
        if not self.seeds:
            raise ValueError("seeds must not be empty")

    @classmethod
    def published_defaults(cls, family: str = "encoder") -> TrainConfig:
        """Published settings: ``encoder`` (mBERT/XLM-R) or ``seq2seq`` (mT5)."""
        if family == "encoder":
            return cls()
        if family == "seq2seq":
            return cls(epochs=10, learning_rate=3e-5, batch_size=24, max_target_length=150, beam_width=3)
        raise ValueError(f"unknown model family {family!r}")

    @classmethod
    def from_mapping(cls, doc: Mapping[str, Any], base: TrainConfig | None = None) -> TrainConfig:
        kwargs = {}
        for key, value in doc.items():
            if key in _CONFIG_KEYS:
                kwargs[_CONFIG_KEYS[key]] = value
        base = base or cls()
        merged = {**base.to_fields(), **kwargs}
        return cls(**merged)

    def to_fields(self) -> dict[str, Any]:
        return {
            "epochs": self.epochs,
            "learning_rate": self.learning_rate,
            "batch_size": self.batch_size,
            "grad_accumulation_steps": self.grad_accumulation_steps,
            "max_seq_length": self.max_seq_length,
            "max_target_length": self.max_target_length,
            "beam_width": self.beam_width,
            "seeds": self.seeds,
        }

    def to_mapping(self) -> dict[str, Any]:
        """Config-file spelling of this config."""
        return {
            "epochs": self.epochs,
            "learning_rate": self.learning_rate,
            "batch_size": self.batch_size,
            "grad_acc_steps": self.grad_accumulation_steps,
            "max_seq_length": self.max_seq_length,
            "max_target_length": self.max_target_length,
            "num_beam_search": self.beam_width,
            "seeds": list(self.seeds),
        }


@dataclass
class TrainRunRecord:
    seed: int
    epoch_losses: list[float]
    model: Any
    wall_time: float
    dev_losses: list[float] = field(default_factory=list)
    clamped: int = 0


def compute_topro_loss(
    scorer,
    batch: Sequence[PromptInstance | tuple[PromptInstance, str]],
    verbalizer: Verbalizer,
    *,
    return_clamped: bool = False,
):
    """Summed ``-ln p(V(gold))`` over the batch, candidates = all verbalizer words.

    Probabilities below 1e-12 are clamped; a :class:`ZeroProbability` warning
    reports how many.
    """
    prompts, golds = [], []
    for item in batch:
        inst, gold = item if isinstance(item, tuple) else (item, item.gold_tag)
        if gold is None:
            raise TrainingError(f"prompt {inst.sentence_id}:{inst.token_index} has no gold tag")
        prompts.append(inst)
        golds.append(gold)
    words = list(verbalizer.words)
    if not prompts:
        return (0.0, 0) if return_clamped else 0.0
    probs = scorer.score_batch(prompts, words)
    cols = np.array([words.index(verbalizer.word(g)) for g in golds])
    p = probs[np.arange(len(prompts)), cols]
    clamped = int(np.count_nonzero(p < PROB_FLOOR))
    if clamped:
        warnings.warn(ZeroProbability(f"{clamped} gold probabilities clamped to {PROB_FLOOR}"), stacklevel=2)
    loss = float(-np.log(np.maximum(p, PROB_FLOOR)).sum())
    return (loss, clamped) if return_clamped else loss


def _train_loop(model, examples: list, config: TrainConfig, seed: int, dev_loss_fn=None) -> TrainRunRecord:
    """Shuffled mini-batch gradient descent with gradient accumulation.

    The update applied after every ``grad_accumulation_steps`` batches (and at
    the end of each epoch) is ``lr * mean gradient`` over the accumulated
    examples.
    """
    if not getattr(model, "trainable", False) or not hasattr(model, "batch_loss_grad"):
        raise TrainingError(f"{type(model).__name__} does not support training")
    if not examples:
        raise TrainingError("no training examples")
    rng = np.random.default_rng(seed)
    n = len(examples)
    bs, acc_steps, lr = config.batch_size, config.grad_accumulation_steps, config.learning_rate
    epoch_losses, dev_losses = [], []
    total_clamped = 0
    start = time.perf_counter()
    for epoch in range(config.epochs):
        order = rng.permutation(n)
        epoch_loss = 0.0
        acc_grad = None
        acc_n = 0
        acc_batches = 0
        for b0 in range(0, n, bs):
            batch = [examples[j] for j in order[b0 : b0 + bs]]
            loss, clamped, grad = model.batch_loss_grad(batch)
            if not math.isfinite(loss):
                raise NonFiniteLoss(f"non-finite loss in epoch {epoch + 1}, seed {seed}")
            total_clamped += clamped
            epoch_loss += loss
            acc_grad = grad if acc_grad is None else acc_grad + grad
            acc_n += len(batch)
            acc_batches += 1
            if acc_batches == acc_steps:
                model.apply_gradient(acc_grad / acc_n, lr)
                acc_grad, acc_n, acc_batches = None, 0, 0
        if acc_grad is not None:
            model.apply_gradient(acc_grad / acc_n, lr)
        epoch_losses.append(epoch_loss / n)
        if dev_loss_fn is not None:
            dev_losses.append(dev_loss_fn())
        log.debug("seed %d epoch %d mean loss %.6f", seed, epoch + 1, epoch_losses[-1])
    if total_clamped:
        warnings.warn(ZeroProbability(f"{total_clamped} gold probabilities clamped during training"), stacklevel=3)
    return TrainRunRecord(seed, epoch_losses, model, time.perf_counter() - start, dev_losses, total_clamped)


def topro_prompts(
    split: CorpusSplit | Iterable, template: PromptTemplate, max_seq_length: int | None = None
) -> list[PromptInstance]:
    out = []
    for s in split:
        if s.tags is None:
            raise TrainingError(f"sentence {s.sentence_id!r} is unlabeled")
        out.extend(decompose(template, s, max_length=max_seq_length))
    return out


def topro_finetune(
    scorer,
    train_split: CorpusSplit,
    template: PromptTemplate,
    verbalizer: Verbalizer,
    config: TrainConfig,
    seed: int,
    *,
    dev_split: CorpusSplit | None = None,
) -> TrainRunRecord:
    """Fine-tune ``scorer`` on the token prompts of ``train_split``.

    The prompt stream, not the sentence stream, is shuffled each epoch.
    """
    if list(getattr(scorer, "verbalizer", verbalizer).words) != list(verbalizer.words):
        raise TrainingError("scorer was built for a different verbalizer")
    examples = [(p, p.gold_tag) for p in topro_prompts(train_split, template, config.max_seq_length)]
    dev_fn = None
    if dev_split is not None:
        dev_prompts = topro_prompts(dev_split, template, config.max_seq_length)
        dev_fn = lambda: compute_topro_loss(scorer, dev_prompts, verbalizer) / len(dev_prompts)  # noqa: E731
    return _train_loop(scorer, examples, config, seed, dev_fn)


def vanilla_finetune(
    token_classifier,
    train_split: CorpusSplit,
    config: TrainConfig,
    seed: int,
    *,
    dev_split: CorpusSplit | None = None,
) -> TrainRunRecord:
    """Same loop as :func:`topro_finetune` over plain ``(token, tag)`` examples."""

    def examples_of(split):
        out = []
        for s in split:
            if s.tags is None:
                raise TrainingError(f"sentence {s.sentence_id!r} is unlabeled")
            out.extend((s.tokens, i, tag) for i, tag in enumerate(s.tags))
        return out

    examples = examples_of(train_split)
    dev_fn = None
    if dev_split is not None:
        dev_examples = examples_of(dev_split)
        dev_fn = lambda: token_classifier.batch_loss(dev_examples) / len(dev_examples)  # noqa: E731
    return _train_loop(token_classifier, examples, config, seed, dev_fn)


@dataclass(frozen=True)
class SeedAggregate:
    per_seed: dict[int, dict[str, float]]
    mean: dict[str, float]
    stddev: dict[str, float]

    def to_dict(self) -> dict:
        return {
            "per_seed": {str(k): v for k, v in self.per_seed.items()},
            "mean": self.mean,
            "stddev": self.stddev,
        }


def run_with_seeds(
    run_fn: Callable[[int], Mapping[str, float]],
    config: TrainConfig | Sequence[int],
) -> SeedAggregate:
    """Run ``run_fn(seed)`` for every seed; aggregate numeric metrics.

    Aggregates are the arithmetic mean and the sample standard deviation
    (zero for a single seed). The first failing seed aborts the whole run.
    """
    seeds = tuple(config.seeds) if isinstance(config, TrainConfig) else tuple(config)
    if not seeds:
        raise ValueError("no seeds given")
    per_seed: dict[int, dict[str, float]] = {}
    for seed in seeds:
        try:
            metrics = run_fn(seed)
        except Exception as e:
            raise SeedRunError(seed, e) from e
        per_seed[seed] = {k: float(v) for k, v in metrics.items() if isinstance(v, (int, float)) and not isinstance(v, bool)}
    keys = [k for k in per_seed[seeds[0]] if all(k in m for m in per_seed.values())]
    mean = {k: statistics.fmean(m[k] for m in per_seed.values()) for k in keys}
    stddev = {
        k: statistics.stdev([m[k] for m in per_seed.values()]) if len(seeds) > 1 else 0.0 for k in keys
    }
    return SeedAggregate(per_seed, mean, stddev)
