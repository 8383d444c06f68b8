"""Matplotlib figures written next to the text reports."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

# keep PNG bytes stable between runs
_META = {"Software": None}


def plot_tables(tables: dict, path, title: str = "", ylabel: str = "space") -> None:
    """One line per named table of n -> value."""
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for name, values in tables.items():
        ns = sorted(values)
        ax.plot(ns, [values[n] for n in ns], marker="o", label=name)
    ax.set_xlabel("n")
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    if tables:
        ax.legend(fontsize=8)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=100, metadata=_META)
    plt.close(fig)


def plot_word_lengths(lengths, path, title: str = "") -> None:
    """Length of each word along a derivation."""
    fig, ax = plt.subplots(figsize=(5, 3))
    ax.step(range(len(lengths)), lengths, where="post")
    ax.set_xlabel("step")
    ax.set_ylabel("word length")
    if title:
        ax.set_title(title)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=100, metadata=_META)
    plt.close(fig)
