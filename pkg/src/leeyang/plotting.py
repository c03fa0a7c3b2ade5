"""Zero-locus figures written to image files."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def plot_zero_loci(series, path, title: str | None = None) -> None:
    """Scatter roots in the complex plane against the unit circle.

    ``series`` maps a legend label to a list of complex numbers (any type
    with ``real`` and ``imag``).
    """
    fig, ax = plt.subplots(figsize=(5.5, 5.5))
    t = np.linspace(0, 2 * np.pi, 721)
    ax.plot(np.cos(t), np.sin(t), color="0.6", lw=0.8, zorder=1)
    markers = ["o", "x", "+", "s", "^"]
    for i, (label, roots) in enumerate(series.items()):
        xs = [float(z.real) for z in roots]
        ys = [float(z.imag) for z in roots]
        ax.scatter(xs, ys, s=14, marker=markers[i % len(markers)], label=f"{label} ({len(xs)})", zorder=2 + i)
    ax.axhline(0, color="0.85", lw=0.5, zorder=0)
    ax.axvline(0, color="0.85", lw=0.5, zorder=0)
    ax.set_aspect("equal", adjustable="datalim")
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    if title:
        ax.set_title(title)
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)
