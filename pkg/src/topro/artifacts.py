"""Model artifacts and run manifests on disk.

A model directory holds ``manifest.json`` (method, backend, tag set, the
pattern-verbalizer pair used in training, model config) plus backend state:
``weights.npy`` for the hashed linear models, ``gold.json`` for the lookup
oracle. Prediction always reloads the PVP from here.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Any

import numpy as np

from .corpus import TagSet
from .errors import ArtifactError
from .pvp import PromptTemplate, Verbalizer, pvp_from_dict, pvp_to_dict
from .scoring import OracleScorer, TinyScorer, TinyTokenClassifier

MANIFEST = "manifest.json"
VOLATILE_KEYS = ("timing",)


def sha256_file(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def dump_json(path: str | Path, doc: Any) -> None:
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n", encoding="utf-8")


def load_json(path: str | Path) -> Any:
    return json.loads(Path(path).read_text(encoding="utf-8"))


def strip_volatile(manifest: dict) -> dict:
    """Manifest without wall-clock fields, for reproducibility comparisons."""
    out = {}
    for k, v in manifest.items():
        if k in VOLATILE_KEYS:
            continue
        if isinstance(v, dict):
            v = strip_volatile(v)
        elif isinstance(v, list):
            v = [strip_volatile(x) if isinstance(x, dict) else x for x in v]
        out[k] = v
    return out


def tagset_to_dict(tagset: TagSet) -> dict:
    return {"task_name": tagset.task_name, "labels": list(tagset.labels), "scheme": tagset.scheme}


def tagset_from_dict(d: dict) -> TagSet:
    return TagSet(d["task_name"], tuple(d["labels"]), d["scheme"])


def save_model(
    directory: str | Path,
    model,
    *,
    method: str,
    backend: str,
    tagset: TagSet,
    template: PromptTemplate | None,
    verbalizer: Verbalizer | None,
    extra: dict | None = None,
) -> dict:
    """Write backend state and the model manifest; return the manifest."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    manifest: dict[str, Any] = {
        "kind": "model",
        "method": method,
        "backend": backend,
        "tagset": tagset_to_dict(tagset),
        "pvp": pvp_to_dict(template, verbalizer) if template is not None else None,
    }
    if isinstance(model, OracleScorer):
        gold = {f"{sid}\t{i}": tag for (sid, i), tag in sorted(model.gold_map.items())}
        dump_json(directory / "gold.json", {"certainty": model.certainty, "gold": gold})
        manifest["state"] = {"file": "gold.json", "sha256": sha256_file(directory / "gold.json")}
    else:
        # .npy rather than .npz: zip members carry timestamps, which would break
        # byte-identical re-runs
        np.save(directory / "weights.npy", model.state_dict()["weights"], allow_pickle=False)
        manifest["model_config"] = model.config()
        manifest["state"] = {"file": "weights.npy", "sha256": sha256_file(directory / "weights.npy")}
    if extra:
        manifest.update(extra)
    dump_json(directory / MANIFEST, manifest)
    return manifest


def load_model(directory: str | Path):
    """Return ``(model, manifest, tagset, template, verbalizer)``."""
    directory = Path(directory)
    path = directory / MANIFEST
    if not path.is_file():
        raise ArtifactError(f"no model manifest in {directory}")
    manifest = load_json(path)
    if manifest.get("kind") != "model":
        raise ArtifactError(f"{path} is not a model manifest")
    state = directory / manifest["state"]["file"]
    if not state.is_file():
        raise ArtifactError(f"missing model state {state}")
    if sha256_file(state) != manifest["state"]["sha256"]:
        raise ArtifactError(f"model state {state} does not match its manifest fingerprint")
    tagset = tagset_from_dict(manifest["tagset"])
    template = verbalizer = None
    if manifest.get("pvp"):
        template, verbalizer = pvp_from_dict(manifest["pvp"])
    cfg = manifest.get("model_config", {})
    if manifest["backend"] == "oracle":
        doc = load_json(state)
        gold = {(k.split("\t")[0], int(k.split("\t")[1])): v for k, v in doc["gold"].items()}
        model = OracleScorer(gold, verbalizer, doc["certainty"])
    elif cfg.get("kind") == "tiny":
        model = TinyScorer(
            cfg["feature_dim"], tagset, verbalizer, cfg["rng_seed"],
            template=template, window=cfg["window"], init_scale=cfg["init_scale"],
        )
        model.load_state_dict({"weights": np.load(state, allow_pickle=False)})
    elif cfg.get("kind") == "tiny-classifier":
        model = TinyTokenClassifier(
            cfg["feature_dim"], tagset, cfg["rng_seed"], window=cfg["window"], init_scale=cfg["init_scale"]
        )
        model.load_state_dict({"weights": np.load(state, allow_pickle=False)})
    else:
        raise ArtifactError(f"unsupported model config {cfg!r}")
    return model, manifest, tagset, template, verbalizer
