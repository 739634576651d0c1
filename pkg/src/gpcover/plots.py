"""Figures for CLI reports. Only the CLI imports this module."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

# numeric CSV column worth plotting, per suite
SUITE_COLUMN = {
    "triple": ("a", "lhs"),
    "petridis": ("b", "h3_log_slack"),
    "tripling": ("size", "eta"),
    "trichotomy": ("b", "eta_star"),
    "gowers": ("a", "size"),
    "translate": ("size", "x"),
}


def _save(fig, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    # fixed metadata keeps the PNG bytes reproducible
    fig.savefig(path, dpi=100, metadata={"Software": None})
    plt.close(fig)
    return path


def scatter_rows(rows: list[dict], x: str, y: str, path: str | Path, title: str) -> Path | None:
    pts = [(r[x], r[y]) for r in rows
           if isinstance(r.get(x), (int, float)) and isinstance(r.get(y), (int, float))]
    if not pts:
        return None
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.scatter([p[0] for p in pts], [p[1] for p in pts], s=8, alpha=0.6)
    ax.set_xlabel(x)
    ax.set_ylabel(y)
    ax.set_title(title)
    return _save(fig, Path(path))


def plot_suite(suite: str, group: str, rows: list[dict], path: str | Path) -> Path | None:
    if suite not in SUITE_COLUMN:
        return None
    x, y = SUITE_COLUMN[suite]
    return scatter_rows(rows, x, y, path, f"{suite} on {group}")


def plot_rs(per_length: list[dict], group: str, path: str | Path) -> Path | None:
    pts = [(r["length"], r["c_star"]) for r in per_length if r.get("c_star") is not None]
    if not pts:
        return None
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="o")
    ax.set_xlabel("tuple length K")
    ax.set_ylabel("c*_K")
    ax.set_title(f"empirical covering exponent, {group}")
    return _save(fig, Path(path))
