"""Command-line entry points: ingest, train, predict, evaluate, icl.

Exit codes: 0 success, 1 usage/config, 2 data validation, 3 backend failure.
"""

from __future__ import annotations

import argparse
import logging
import re
import sys
from collections import defaultdict
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

import yaml

from . import __version__
from .artifacts import MANIFEST, dump_json, load_json, load_model, save_model, sha256_file
from .corpus import (
    CorpusSplit,
    TagSet,
    builtin_tagset,
    dataset_stats,
    read_split,
    serialize_conll,
    validate_iob2,
)
from .decode import PredictionRecord, predict_corpus, predict_tags_generative, read_predictions, write_predictions
from .errors import (
    ArtifactError,
    CorpusError,
    EmptyCorpus,
    EvalError,
    MissingTags,
    ScoringError,
    SeedRunError,
    TemplateError,
    ToProError,
    UnknownTask,
    UsageError,
    VerbalizerError,
)
from .metrics import aggregate_languages, corpus_f1, delta_table, format_delta_tsv
from .pvp import builtin_pvp, load_pvp_override, pvp_to_dict, render_icl_prompt
from .scoring import ConstantGenerator, EchoGoldGenerator, ExternalGenerator, OracleScorer, TinyScorer, TinyTokenClassifier
from .train import TrainConfig, compute_topro_loss, run_with_seeds, topro_finetune, topro_prompts, vanilla_finetune

log = logging.getLogger("topro")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_BACKEND = 0, 1, 2, 3

METHODS = ("topro", "vanilla")
SPLITS = ("train", "dev", "test")
CORPUS_SUFFIXES = (".tsv", ".conll", ".iob2", ".txt")
CORPUS_INDEX = "corpus.json"

# reference scorer settings used when the config file does not override them
MODEL_DEFAULTS = {"feature_dim": 4096, "window": 1, "init_scale": 0.01, "certainty": 1.0}


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _task_tagset(task: str) -> TagSet:
    try:
        return builtin_tagset(task)
    except UnknownTask as e:
        raise UsageError(str(e)) from None


# -- corpus references --------------------------------------------------------


def infer_lang_split(path: Path) -> tuple[str | None, str | None]:
    """Guess ``(language, split)`` from names like ``en-train.tsv`` or ``test.de.conll``."""
    parts = [p for p in re.split(r"[-_.]", path.stem) if p]
    split = next((p for p in parts if p.lower() in SPLITS), None)
    lang = next((p for p in parts if p.lower() not in SPLITS and re.fullmatch(r"[A-Za-z]{2,3}", p)), None)
    return lang, split.lower() if split else None


def _corpus_files(path: Path) -> list[Path]:
    if path.is_dir():
        return sorted(p for p in path.iterdir() if p.suffix in CORPUS_SUFFIXES and p.is_file())
    if not path.exists():
        raise CorpusError(f"no such corpus file or directory: {path}")
    return [path]


def load_corpus(
    ref: str | Path, tagset: TagSet, *, lang: str | None = None, split: str | None = None
) -> list[tuple[CorpusSplit, Path]]:
    """Resolve a corpus reference: an ingested directory, a directory of files, or a file."""
    ref = Path(ref)
    out = []
    if ref.is_dir() and (ref / CORPUS_INDEX).is_file():
        index = load_json(ref / CORPUS_INDEX)
        if index.get("task") != tagset.task_name:
            raise UsageError(f"corpus {ref} was ingested for task {index.get('task')!r}, not {tagset.task_name!r}")
        for entry in index["splits"]:
            if lang and entry["language"] != lang or split and entry["split"] != split:
                continue
            path = ref / entry["file"]
            out.append((read_split(path, tagset, name=entry["split"], language=entry["language"]), path))
    else:
        files = _corpus_files(ref)
        for path in files:
            guess_lang, guess_split = infer_lang_split(path)
            out.append(
                (
                    read_split(path, tagset, name=split or guess_split or "test", language=lang or guess_lang or "und"),
                    path,
                )
            )
    if not out:
        raise EmptyCorpus(f"no corpus files found under {ref}")
    return out


# -- ingest -------------------------------------------------------------------


def cmd_ingest(paths, task: str, out: str | Path, *, lang: str | None = None, split: str | None = None) -> dict:
    tagset = _task_tagset(task)
    files: list[Path] = []
    for p in paths:
        files.extend(_corpus_files(Path(p)))
    if not files:
        raise EmptyCorpus("no corpus files found in " + ", ".join(str(p) for p in paths))
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    entries, splits = [], []
    for path in files:
        guess_lang, guess_split = infer_lang_split(path)
        s = read_split(path, tagset, name=split or guess_split or "train", language=lang or guess_lang or "und")
        name = f"{s.language}-{s.name}.tsv"
        if any(e["file"] == name for e in entries):
            raise UsageError(f"two inputs map to {name}; pass them separately with --lang/--split")
        (out / name).write_text(serialize_conll(s), encoding="utf-8")
        violations = sum(len(validate_iob2(x)) for x in s if x.tags is not None) if tagset.scheme == "iob2" else 0
        entries.append(
            {
                "file": name,
                "source": str(path),
                "source_sha256": sha256_file(path),
                "sha256": sha256_file(out / name),
                "language": s.language,
                "split": s.name,
                "iob2_violations": violations,
            }
        )
        splits.append(s)
    stats = dataset_stats(splits, tagset).to_dict()
    index = {"kind": "corpus", "task": task, "splits": entries, "stats": stats}
    dump_json(out / CORPUS_INDEX, index)
    for e, st in zip(entries, stats["splits"]):
        print(
            f"{e['language']}-{e['split']}: {st['sentences']} sentences, {st['tokens']} tokens, "
            f"{st['labels']} labels, {e['iob2_violations']} IOB2 violations"
        )
    return index


# -- train --------------------------------------------------------------------


def _read_config(path: str | Path | None) -> dict:
    if path is None:
        return {}
    try:
        doc = yaml.safe_load(Path(path).read_text(encoding="utf-8")) or {}
    except (OSError, yaml.YAMLError) as e:
        raise UsageError(f"cannot read config {path}: {e}") from e
    if not isinstance(doc, dict):
        raise UsageError(f"config {path} must be a mapping")
    return doc


def _check_method(method: str) -> str:
    if method == "pt" or method.lower() in ("prompt-tuning", "prompt_tuning"):
        raise UsageError("method 'pt': Prompt-Tuning is out of scope for this toolkit; use 'topro' or 'vanilla'")
    if method not in METHODS:
        raise UsageError(f"unknown method {method!r}; use 'topro' or 'vanilla'")
    return method


def _parse_seeds(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"--seeds must be comma-separated integers, got {text!r}") from None


def resolve_train_config(config_path=None, **overrides) -> dict:
    """Merge config file and command-line overrides into one resolved document."""
    doc = _read_config(config_path)
    for k, v in overrides.items():
        if v is not None:
            doc[k] = v
    try:
        hyper = TrainConfig.from_mapping(doc)
    except (TypeError, ValueError) as e:
        raise UsageError(f"invalid training config: {e}") from e
    model = {k: doc.get(k, v) for k, v in MODEL_DEFAULTS.items()}
    resolved = {
        "task": doc.get("task", "panx"),
        "method": _check_method(str(doc.get("method", "topro"))),
        "backend": str(doc.get("backend", "tiny")),
        "train": str(doc["train"]) if doc.get("train") is not None else None,
        "dev": str(doc["dev"]) if doc.get("dev") is not None else None,
        "lang": doc.get("lang"),
        "pvp": doc.get("pvp"),
        "model": model,
        "hyperparameters": hyper.to_mapping(),
    }
    if resolved["train"] is None:
        raise UsageError("no training data: set 'train' in the config or pass --train")
    return resolved


def _resolve_pvp(resolved: dict):
    pvp = resolved.get("pvp")
    try:
        if pvp is None:
            return builtin_pvp(resolved["task"])
        return load_pvp_override(pvp, resolved["task"])
    except (TemplateError, VerbalizerError, OSError) as e:
        raise UsageError(f"invalid PVP override: {e}") from e


def _first_split(ref: str, tagset: TagSet, lang: str | None, name: str) -> tuple[CorpusSplit, Path]:
    found = load_corpus(ref, tagset, lang=lang, split=name)
    if len(found) != 1:
        raise UsageError(f"{ref} holds {len(found)} {name} splits; select one with --lang")
    return found[0]


def cmd_train(
    config_path=None,
    *,
    out: str | Path,
    task: str | None = None,
    method: str | None = None,
    backend: str | None = None,
    seeds: list[int] | None = None,
    train: str | None = None,
    dev: str | None = None,
) -> dict:
    """Train one model per seed; write per-seed model dirs and a run manifest."""
    started = _now()
    resolved = resolve_train_config(
        config_path, task=task, method=method, backend=backend, seeds=seeds, train=train, dev=dev
    )
    task, method, backend = resolved["task"], resolved["method"], resolved["backend"]
    tagset = _task_tagset(task)
    template, verbalizer = _resolve_pvp(resolved)
    if backend.startswith("external:"):
        raise UsageError("external backends are scoring-only here; train with --backend tiny or oracle")
    if backend not in ("tiny", "oracle"):
        raise UsageError(f"unknown backend {backend!r}; use oracle, tiny or external:ENDPOINT")
    if backend == "oracle" and method != "topro":
        raise UsageError("the oracle backend only supports --method topro")
    config = TrainConfig.from_mapping(resolved["hyperparameters"])
    train_split, train_path = _first_split(resolved["train"], tagset, resolved["lang"], "train")
    if not train_split.is_labeled:
        raise MissingTags(f"training data {train_path} is unlabeled")
    dev_split = dev_path = None
    if resolved["dev"]:
        dev_split, dev_path = _first_split(resolved["dev"], tagset, resolved["lang"], "dev")
    mcfg = resolved["model"]

    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    dump_json(out / "config.resolved.json", resolved)
    runs: list[dict] = []

    def run(seed: int) -> dict:
        seed_dir = out / f"seed-{seed}"
        if backend == "oracle":
            model = OracleScorer.from_sentences(train_split, verbalizer, mcfg["certainty"])
            prompts = topro_prompts(train_split, template, config.max_seq_length)
            losses = [compute_topro_loss(model, prompts, verbalizer) / len(prompts)]
            dev_losses, wall, clamped = [], 0.0, 0
        elif method == "topro":
            model = TinyScorer(
                mcfg["feature_dim"], tagset, verbalizer, seed,
                template=template, window=mcfg["window"], init_scale=mcfg["init_scale"],
            )
            rec = topro_finetune(model, train_split, template, verbalizer, config, seed, dev_split=dev_split)
            losses, dev_losses, wall, clamped = rec.epoch_losses, rec.dev_losses, rec.wall_time, rec.clamped
        else:
            model = TinyTokenClassifier(
                mcfg["feature_dim"], tagset, seed, window=mcfg["window"], init_scale=mcfg["init_scale"]
            )
            rec = vanilla_finetune(model, train_split, config, seed, dev_split=dev_split)
            losses, dev_losses, wall, clamped = rec.epoch_losses, rec.dev_losses, rec.wall_time, rec.clamped
        records = _predict_split(model, method, train_split, template, verbalizer, config.max_seq_length)
        metrics = {
            "train_f1": corpus_f1(records, tagset),
            "first_epoch_loss": losses[0],
            "final_epoch_loss": losses[-1],
        }
        save_model(
            seed_dir,
            model,
            method=method,
            backend=backend,
            tagset=tagset,
            template=template if method == "topro" else None,
            verbalizer=verbalizer if method == "topro" else None,
            extra={
                "seed": seed,
                "epoch_losses": losses,
                "dev_losses": dev_losses,
                "clamped_probabilities": clamped,
                "max_seq_length": config.max_seq_length,
                "metrics": metrics,
                "timing": {"wall_time_seconds": wall},
            },
        )
        runs.append({"seed": seed, "dir": seed_dir.name, "manifest": f"{seed_dir.name}/{MANIFEST}"})
        log.info("seed %d: train F1 %.4f, loss %.4f -> %.4f", seed, metrics["train_f1"], losses[0], losses[-1])
        return metrics

    aggregate = run_with_seeds(run, config)
    data = {"train": {"path": resolved["train"], "sha256": sha256_file(train_path)}}
    if dev_path is not None:
        data["dev"] = {"path": resolved["dev"], "sha256": sha256_file(dev_path)}
    manifest = {
        "kind": "train-run",
        "command": "train",
        "version": __version__,
        "config": resolved,
        "data": data,
        "seeds": list(config.seeds),
        "pvp": pvp_to_dict(template, verbalizer) if method == "topro" else None,
        "runs": runs,
        "outputs": ["config.resolved.json"] + [r["manifest"] for r in runs],
        "metrics": aggregate.to_dict(),
        "timing": {"start": started, "end": _now()},
    }
    dump_json(out / MANIFEST, manifest)
    print(
        f"trained {method}/{backend} on {len(train_split)} sentences, seeds {list(config.seeds)}: "
        f"train F1 {aggregate.mean['train_f1']:.4f} ± {aggregate.stddev['train_f1']:.4f}"
    )
    return manifest


# -- predict ------------------------------------------------------------------


def _predict_split(model, method, split, template, verbalizer, max_seq_length=None) -> list[PredictionRecord]:
    if method == "vanilla":
        out = []
        for s in split:
            probs = model.predict_proba(s.tokens)
            idx = probs.argmax(axis=1)
            out.append(
                PredictionRecord(
                    s.sentence_id, s.language, s.tokens, s.tags,
                    [model.tagset.labels[j] for j in idx],
                    probs[range(len(idx)), idx].clip(0.0, 1.0),
                )
            )
        return out
    return predict_corpus(model, split, template, verbalizer, max_seq_length=max_seq_length)


def _resolve_model_dir(ref: str | Path, seed: int | None) -> Path:
    ref = Path(ref)
    path = ref / MANIFEST
    if not path.is_file():
        raise ArtifactError(f"no manifest at {ref}")
    doc = load_json(path)
    if doc.get("kind") == "model":
        return ref
    if doc.get("kind") != "train-run":
        raise ArtifactError(f"{path} is neither a model nor a training run manifest")
    runs = {r["seed"]: r for r in doc["runs"]}
    if seed is None:
        seed = doc["seeds"][0]
    if seed not in runs:
        raise ArtifactError(f"run {ref} has no model for seed {seed} (have {sorted(runs)})")
    return ref / runs[seed]["dir"]


def cmd_predict(
    model_ref: str | Path,
    corpus_ref: str | Path,
    out: str | Path,
    *,
    lang: str | None = None,
    split: str | None = None,
    seed: int | None = None,
    pvp: str | None = None,
) -> list[Path]:
    """Predict tags with the model's own training-time PVP.

    ``pvp`` is only a consistency check: a differing override is refused.
    """
    model_dir = _resolve_model_dir(model_ref, seed)
    model, manifest, tagset, template, verbalizer = load_model(model_dir)
    method = manifest["method"]
    if pvp is not None and method == "topro":
        claimed = pvp_to_dict(*load_pvp_override(pvp, tagset.task_name))
        if claimed != manifest["pvp"]:
            raise UsageError("the given PVP differs from the one the model was trained with; refusing")
    splits = load_corpus(corpus_ref, tagset, lang=lang, split=split)
    out = Path(out)
    as_dir = len(splits) > 1 or out.is_dir() or str(out).endswith("/")
    if as_dir:
        out.mkdir(parents=True, exist_ok=True)
    written = []
    for s, _ in splits:
        records = _predict_split(model, method, s, template, verbalizer, manifest.get("max_seq_length"))
        header = {
            "task": tagset.task_name,
            "method": method,
            "backend": manifest["backend"],
            "language": s.language,
            "split": s.name,
            "seed": manifest.get("seed", ""),
        }
        path = out / f"{s.language}-{s.name}.tsv" if as_dir else out
        write_predictions(path, records, header)
        written.append(path)
        print(f"{s.language}-{s.name}: {len(records)} sentences -> {path}")
    return written


# -- evaluate -----------------------------------------------------------------


def cmd_evaluate(
    prediction_paths,
    *,
    pivot: str = "en",
    out: str | Path | None = None,
    task: str | None = None,
    include_catch_all: bool = True,
    delta_out: str | Path | None = None,
) -> dict:
    """Score prediction files per method and language, then compare methods."""
    grouped: dict[str, dict[str, dict[str, list[PredictionRecord]]]] = defaultdict(lambda: defaultdict(dict))
    meta: dict[str, dict[str, Any]] = {}
    tasks = set()
    for p in prediction_paths:
        header, records = read_predictions(p)
        t = task or header.get("task")
        if not t:
            raise UsageError(f"{p}: no task in header; pass --task")
        tasks.add(t)
        method = header.get("method") or "unknown"
        language = header.get("language") or "und"
        seed = header.get("seed", "")
        grouped[method][language].setdefault(seed, []).extend(records)
        m = meta.setdefault(method, {"backend": header.get("backend"), "seeds": set()})
        if seed != "":
            m["seeds"].add(int(seed))
    if len(tasks) != 1:
        raise UsageError(f"prediction files mix tasks {sorted(tasks)}")
    task = tasks.pop()
    tagset = _task_tagset(task)
    reports = {}
    for method, by_lang in grouped.items():
        per_lang, stddev = {}, {}
        for language, by_seed in by_lang.items():
            scores = [corpus_f1(recs, tagset, include_catch_all=include_catch_all) for recs in by_seed.values()]
            per_lang[language] = sum(scores) / len(scores)
            if len(scores) > 1:
                mu = per_lang[language]
                stddev[language] = (sum((x - mu) ** 2 for x in scores) / (len(scores) - 1)) ** 0.5
        if set(per_lang) == {pivot}:
            report = None
            mean = per_lang[pivot]
        else:
            report = aggregate_languages(
                per_lang, pivot, task=task, method=method,
                seed_stddev=stddev or None, backend=meta[method]["backend"],
                seeds=tuple(sorted(meta[method]["seeds"])),
            )
            mean = report.mean
        reports[method] = report
        print(f"{method}: " + " ".join(f"{k}={v * 100:.2f}" for k, v in per_lang.items()) + f" | avg {mean * 100:.2f}")
        if report is None:
            reports[method] = {
                "task": task, "method": method, "backend": meta[method]["backend"],
                "seeds": sorted(meta[method]["seeds"]), "per_language": per_lang,
                "avg_excluding_pivot": {"pivot": pivot, "mean": None, "pivot_excluded": True},
                "seed_stddev": stddev or None,
            }
    doc: dict[str, Any] = {
        "kind": "metrics",
        "task": task,
        "pivot": pivot,
        "include_catch_all": include_catch_all,
        "metric": "token-level weighted F1",
        "reports": [r if isinstance(r, dict) else r.to_dict() for r in reports.values()],
    }
    methods = list(reports)
    deltas, delta_avg = {}, {}
    for i, a in enumerate(methods):
        for b in methods[i + 1 :]:
            ra, rb = reports[a], reports[b]
            if isinstance(ra, dict) or isinstance(rb, dict):
                continue
            try:
                deltas[f"{a}-{b}"] = delta_table(ra, rb)
            except EvalError as e:
                log.warning("no delta for %s vs %s: %s", a, b, e)
                continue
            delta_avg[f"{a}-{b}"] = (ra.mean - rb.mean) * 100.0
    if deltas:
        doc["deltas"] = deltas
        doc["delta_avg_excluding_pivot"] = delta_avg
        if delta_out:
            Path(delta_out).write_text(format_delta_tsv(deltas, delta_avg), encoding="utf-8")
        for name, avg in delta_avg.items():
            print(f"delta {name}: avg {avg:+.2f}")
    if out:
        dump_json(out, doc)
    return doc


# -- icl ----------------------------------------------------------------------


def cmd_icl(
    backend: str,
    corpus_ref: str | Path,
    task: str,
    out: str | Path,
    *,
    lang: str | None = None,
    split: str | None = None,
    pivot: str = "en",
    max_target_length: int = 150,
    beam_width: int = 3,
) -> dict:
    """Zero-shot ICL: prompt a generator per token, parse answers, score.

    Generators expose no update hook, so no parameters change.
    """
    if task != "panx":
        raise UsageError("the ICL prompt is defined for named entities; use --task panx")
    tagset = _task_tagset(task)
    _, verbalizer = builtin_pvp(task)
    splits = load_corpus(corpus_ref, tagset, lang=lang, split=split)
    if backend in ("oracle", "tiny"):
        raise UsageError("ICL needs a generative backend: external:ENDPOINT, stub:echo-gold or stub:empty")
    if backend == "stub:echo-gold":
        generator = EchoGoldGenerator()
        for s, _ in splits:
            if not s.is_labeled:
                raise MissingTags("stub:echo-gold needs labeled data")
            for sent in s:
                for i, tag in enumerate(sent.tags):
                    generator.add(render_icl_prompt(sent, i, verbalizer), tag)
    elif backend == "stub:empty":
        generator = ConstantGenerator("")
    elif backend.startswith("external:"):
        generator = ExternalGenerator(backend.split(":", 1)[1])
    else:
        raise UsageError(f"unknown ICL backend {backend!r}")
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    per_lang, outputs = {}, []
    for s, _ in splits:
        records = [
            predict_tags_generative(
                generator, sent, task, tagset, mode="icl", verbalizer=verbalizer,
                max_target_length=max_target_length, beam_width=beam_width,
            )
            for sent in s
        ]
        name = f"predictions-{s.language}-{s.name}.tsv"
        write_predictions(
            out / name, records,
            {"task": task, "method": "icl", "backend": backend, "language": s.language, "split": s.name},
        )
        outputs.append(name)
        if s.is_labeled:
            per_lang[s.language] = corpus_f1(records, tagset)
            print(f"{s.language}-{s.name}: F1 {per_lang[s.language] * 100:.2f}")
    doc: dict[str, Any] = {"kind": "metrics", "task": task, "method": "icl", "backend": backend, "pivot": pivot,
                           "per_language": per_lang, "outputs": outputs}
    targets = {k: v for k, v in per_lang.items() if k != pivot}
    if targets:
        doc["avg_excluding_pivot"] = aggregate_languages(per_lang, pivot).mean
    dump_json(out / "metrics.json", doc)
    if hasattr(generator, "close"):
        generator.close()
    return doc


# -- argument parsing ---------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="topro", description="Token-level prompt decomposition for sequence labeling.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    ing = sub.add_parser("ingest", help="validate CoNLL-style files into a corpus directory")
    ing.add_argument("paths", nargs="+")
    ing.add_argument("--task", required=True)
    ing.add_argument("--lang")
    ing.add_argument("--split", choices=SPLITS)
    ing.add_argument("--out", required=True)

    tr = sub.add_parser("train", help="fine-tune a reference model, one run per seed")
    tr.add_argument("--config")
    tr.add_argument("--task")
    tr.add_argument("--method")
    tr.add_argument("--backend")
    tr.add_argument("--seeds")
    tr.add_argument("--train")
    tr.add_argument("--dev")
    tr.add_argument("--out", required=True)

    pr = sub.add_parser("predict", help="tag a corpus with a trained model")
    pr.add_argument("--model", required=True)
    pr.add_argument("--corpus", required=True)
    pr.add_argument("--out", required=True)
    pr.add_argument("--lang")
    pr.add_argument("--split", choices=SPLITS)
    pr.add_argument("--seed", type=int)
    pr.add_argument("--pvp", help="optional override file, checked against the model's PVP")

    ev = sub.add_parser("evaluate", help="weighted F1, cross-language average and deltas")
    ev.add_argument("predictions", nargs="+")
    ev.add_argument("--pivot", default="en")
    ev.add_argument("--task")
    ev.add_argument("--out")
    ev.add_argument("--delta-out")
    ev.add_argument("--exclude-catch-all", action="store_true")

    icl = sub.add_parser("icl", help="zero-shot in-context prompting with a generative backend")
    icl.add_argument("--backend", required=True)
    icl.add_argument("--corpus", required=True)
    icl.add_argument("--task", default="panx")
    icl.add_argument("--out", required=True)
    icl.add_argument("--lang")
    icl.add_argument("--split", choices=SPLITS)
    icl.add_argument("--pivot", default="en")
    icl.add_argument("--max-target-length", type=int, default=150)
    icl.add_argument("--num-beams", type=int, default=3)
    return p


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, SeedRunError):
        return exit_code_for(exc.cause)
    if isinstance(exc, (CorpusError, MissingTags, EvalError)):
        return EXIT_DATA
    if isinstance(exc, ScoringError):
        return EXIT_BACKEND
    return EXIT_USAGE


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        if args.command == "ingest":
            cmd_ingest(args.paths, args.task, args.out, lang=args.lang, split=args.split)
        elif args.command == "train":
            cmd_train(
                args.config, out=args.out, task=args.task, method=args.method, backend=args.backend,
                seeds=_parse_seeds(args.seeds) if args.seeds else None, train=args.train, dev=args.dev,
            )
        elif args.command == "predict":
            cmd_predict(args.model, args.corpus, args.out, lang=args.lang, split=args.split, seed=args.seed, pvp=args.pvp)
        elif args.command == "evaluate":
            cmd_evaluate(
                args.predictions, pivot=args.pivot, out=args.out, task=args.task,
                include_catch_all=not args.exclude_catch_all, delta_out=args.delta_out,
            )
        elif args.command == "icl":
            cmd_icl(
                args.backend, args.corpus, args.task, args.out, lang=args.lang, split=args.split,
                pivot=args.pivot, max_target_length=args.max_target_length, beam_width=args.num_beams,
            )
    except (ToProError, OSError, ValueError) as e:
        code = exit_code_for(e)
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return code
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
