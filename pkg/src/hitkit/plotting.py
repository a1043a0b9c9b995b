"""Figures for oracle profiles and selftest reports (written to files, Agg backend)."""

from __future__ import annotations

import math
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .oracle import CoverageProfile  # noqa: E402


def _save(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def coverage_histogram(profile: CoverageProfile, path, title: str = "") -> Path:
    """Bar chart: number of assignments falsifying exactly k clauses."""
    ks = sorted(profile.histogram)
    fig, ax = plt.subplots(figsize=(5, 3.2))
    colors = ["tab:red" if k == 0 else "tab:blue" for k in ks]
    ax.bar([str(k) for k in ks], [profile.histogram[k] for k in ks], color=colors)
    ax.set_xlabel("clauses falsified")
    ax.set_ylabel("assignments")
    ax.set_title(title or f"coverage over 2^{profile.n} assignments")
    return _save(fig, path)


def leaf_counts(points: Sequence[tuple[int, int, int]], path) -> Path:
    """Scatter of tree leaves against clause count, with log2 of the size bound.

    ``points`` holds ``(n, m, leaves)`` triples.
    """
    fig, ax = plt.subplots(figsize=(5, 3.2))
    ms = [m for _, m, _ in points]
    ax.scatter(ms, [math.log2(max(lv, 1)) for _, _, lv in points], s=10, label="leaves")
    bound = [2 * math.log2(m) ** 2 * math.log2(n) if m > 1 and n > 1 else 0.0 for n, m, _ in points]
    ax.scatter(ms, bound, s=6, marker="x", color="tab:gray", label="bound")
    ax.set_xscale("log", base=2)
    ax.set_xlabel("clauses m")
    ax.set_ylabel("log2 size")
    ax.legend(loc="upper left", fontsize=8)
    return _save(fig, path)


def layer_sizes(sizes: Sequence[int], path, terms: int | None = None) -> Path:
    fig, ax = plt.subplots(figsize=(5, 3.2))
    ax.plot(range(1, len(sizes) + 1), sizes, marker=".", lw=1)
    if terms is not None:
        ax.axhline(terms, color="tab:gray", ls="--", lw=1, label="terms")
        ax.legend(fontsize=8)
    ax.set_xlabel("merge step")
    ax.set_ylabel("layer size")
    return _save(fig, path)


def timings(rows: Sequence[tuple[str, float, float]], path) -> Path:
    """Horizontal bars of elapsed seconds per criterion against its budget."""
    fig, ax = plt.subplots(figsize=(5, 0.4 * len(rows) + 1.2))
    names = [r[0] for r in rows]
    ax.barh(names, [r[2] for r in rows], color="0.85", label="budget")
    ax.barh(names, [r[1] for r in rows], color="tab:green", label="elapsed")
    ax.set_xscale("log")
    ax.set_xlabel("seconds")
    ax.invert_yaxis()
    ax.legend(fontsize=8, loc="lower right")
    return _save(fig, path)
