"""Reading group/subset/config files and writing versioned reports."""

from __future__ import annotations

import csv
import json
import math
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .errors import InputError
from .groups import DEFAULT_CAP, GroupTable, build_family, build_from_cayley_table, build_from_permutations
from .solver import CoverCertificate, PipelineConfig
from .subsets import Subset, ball, random_subset

SCHEMA = "gpcover/1"


def read_json(path: str | Path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise InputError(f"file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from None


def _require_keys(d: dict, keys: tuple[str, ...], what: str) -> None:
    if not isinstance(d, dict):
        raise InputError(f"{what} must be a JSON object")
    missing = [k for k in keys if k not in d]
    if missing:
        raise InputError(f"{what} is missing {', '.join(missing)}")


def group_from_spec(spec: dict, *, cap: int = DEFAULT_CAP) -> GroupTable:
    _require_keys(spec, ("kind",), "group spec")
    kind = spec["kind"]
    if kind == "permutation":
        _require_keys(spec, ("degree", "generators"), "permutation group")
        return build_from_permutations(spec["degree"], spec["generators"], cap=cap)
    if kind == "cayley":
        _require_keys(spec, ("table",), "cayley group")
        return build_from_cayley_table(spec["table"], seed=int(spec.get("seed", 0)))
    if kind == "family":
        _require_keys(spec, ("family",), "family group")
        params = {k: spec[k] for k in ("n", "q") if k in spec}
        return build_family(spec["family"], cap=cap, **params)
    raise InputError(f"unknown group kind {kind!r}")


def load_group(path: str | Path, *, cap: int = DEFAULT_CAP) -> GroupTable:
    return group_from_spec(read_json(path), cap=cap)


def _check_id(G: GroupTable, x, what: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int) or not 0 <= x < G.order:
        raise InputError(f"{what} {x!r} is not an element id in 0..{G.order - 1}")
    return x


def subset_from_spec(G: GroupTable, spec: dict) -> Subset:
    _require_keys(spec, ("kind",), "subset spec")
    kind = spec["kind"]
    if kind == "indices":
        _require_keys(spec, ("ids",), "indices subset")
        ids = [_check_id(G, x, "id") for x in spec["ids"]]
        return Subset.from_ids(G.order, ids)
    if kind == "class":
        _require_keys(spec, ("rep",), "class subset")
        rep = _check_id(G, spec["rep"], "class representative")
        return Subset.from_ids(G.order, G.conjugacy_class_of(rep))
    if kind == "random":
        _require_keys(spec, ("size", "seed"), "random subset")
        return random_subset(G.order, int(spec["size"]), int(spec["seed"]))
    if kind == "ball":
        _require_keys(spec, ("gens", "radius"), "ball subset")
        gens = [_check_id(G, x, "generator") for x in spec["gens"]]
        return ball(G, gens, int(spec["radius"]))
    raise InputError(f"unknown subset kind {kind!r}")


def load_sets(G: GroupTable, path: str | Path) -> list[Subset]:
    data = read_json(path)
    if isinstance(data, dict):
        data = data.get("sets")
    if not isinstance(data, list) or not data:
        raise InputError(f"{path}: expected a non-empty list of subset specs")
    return [subset_from_spec(G, s) for s in data]


def load_pipeline_config(path: str | Path | None, **overrides) -> PipelineConfig:
    data = read_json(path) if path else {}
    if not isinstance(data, dict):
        raise InputError("config file must be a JSON object")
    data = dict(data.get("pipeline", data))
    data.update({k: v for k, v in overrides.items() if v is not None})
    return PipelineConfig.from_dict(data)


def load_certificate(path: str | Path) -> CoverCertificate:
    data = read_json(path)
    if isinstance(data, dict) and "certificate" in data:
        data = data["certificate"]
    if not isinstance(data, dict):
        raise InputError(f"{path}: certificate must be a JSON object")
    return CoverCertificate.from_dict(data)


# -- writing ---------------------------------------------------------------------------------


def _plain(x):
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return [_plain(v) for v in x.tolist()]
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        x = float(x)
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    return x


def group_block(G: GroupTable) -> dict:
    return {"name": G.meta.name, "order": G.order, "fingerprint": G.fingerprint(), "meta": G.meta.to_dict()}


def envelope(command: str, config: dict, G: GroupTable | None, result: dict, *, threads: int,
             files: dict | None = None) -> dict:
    """Report wrapper; everything outside ``runtime`` is deterministic."""
    return _plain({
        "schema": SCHEMA,
        "tool_version": __version__,
        "command": command,
        "config": config,
        "group": group_block(G) if G is not None else None,
        "result": result,
        "runtime": {"timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"), "threads": threads,
                    "files": files or {}},
    })


def stable_view(report: dict) -> dict:
    """The report without its volatile ``runtime`` block."""
    return {k: v for k, v in report.items() if k != "runtime"}


def dumps(obj) -> str:
    return json.dumps(_plain(obj), indent=2, sort_keys=True) + "\n"


def write_json(path: str | Path, obj) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(obj), encoding="utf-8")
    return path


def write_csv(path: str | Path, rows: list[dict]) -> Path | None:
    if not rows:
        return None
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fields: list[str] = []
    for r in rows:
        fields.extend(k for k in r if k not in fields)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=fields)
        w.writeheader()
        for r in rows:
            w.writerow({k: _csv_cell(v) for k, v in r.items()})
    return path


def _csv_cell(v):
    v = _plain(v)
    return json.dumps(v) if isinstance(v, (list, dict)) else v
