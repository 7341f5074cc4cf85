"""Diamond figures for score reports.

One PNG per campaign: the four vertices laid out as a diamond, filled and
colour-graded by confidence when present, hollow when missing, annotated
with the completeness/confidence scores. A bar-chart overview is added when
a bundle carries several campaigns.
"""

from __future__ import annotations

import os
from typing import Iterable, List, Tuple

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
from matplotlib.patches import Circle

from .model import DIAMOND_ROLES
from .situation import Situation, SituationScore, VERTEX_NAMES

# vertex -> (x, y) on the diamond
_LAYOUT = {
    "actor": (0.0, 1.0),
    "msa": (1.0, 0.0),
    "target": (0.0, -1.0),
    "infrastructure": (-1.0, 0.0),
}
_EDGES = (("actor", "msa"), ("msa", "target"),
          ("target", "infrastructure"), ("infrastructure", "actor"))

_RC = {
    "figure.dpi": 110,
    "font.size": 9,
    "axes.titlesize": 10,
}


def render_situation_figure(situation: Situation, result: SituationScore,
                            path: str) -> str:
    """Write the diamond figure for one situation; returns the path."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(5.2, 5.2))
        for a, b in _EDGES:
            xa, ya = _LAYOUT[a]
            xb, yb = _LAYOUT[b]
            ax.plot([xa, xb], [ya, yb], color="0.65", lw=1.2, zorder=1)
        cmap = plt.get_cmap("RdYlGn")
        for vertex in VERTEX_NAMES:
            x, y = _LAYOUT[vertex]
            ref = situation.vertices.get(vertex)
            if ref is not None:
                face = cmap(ref.confidence / 100)
                circle = Circle((x, y), 0.22, facecolor=face,
                                edgecolor="0.2", lw=1.2, zorder=2)
                note = f"confidence {ref.confidence}"
                if ref.assumed:
                    note += " (assumed)"
            else:
                circle = Circle((x, y), 0.22, facecolor="white",
                                edgecolor="0.45", lw=1.2,
                                linestyle="--", zorder=2)
                note = "missing"
            ax.add_patch(circle)
            label_y = y + (0.34 if y >= 0 else -0.34)
            va = "bottom" if y >= 0 else "top"
            ax.text(x, label_y,
                    f"{vertex}\n({DIAMOND_ROLES[vertex]})\n{note}",
                    ha="center", va=va)
        ax.set_title(
            f"{situation.campaign_id}\n"
            f"completeness {result.completeness:.2f}   "
            f"confidence {result.confidence:.4f}")
        ax.set_xlim(-1.8, 1.8)
        ax.set_ylim(-1.8, 1.8)
        ax.set_aspect("equal")
        ax.axis("off")
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)
    return path


def render_overview_figure(scored: Iterable[Tuple[Situation, SituationScore]],
                           path: str) -> str:
    """Completeness/confidence bars across campaigns."""
    scored = list(scored)
    labels = [s.campaign_id.split("--", 1)[1][:8] for s, _ in scored]
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(max(4.0, 1.4 * len(scored)), 3.4))
        xs = range(len(scored))
        width = 0.38
        ax.bar([x - width / 2 for x in xs],
               [r.completeness for _, r in scored],
               width=width, label="completeness", color="#4878a8")
        ax.bar([x + width / 2 for x in xs],
               [r.confidence for _, r in scored],
               width=width, label="confidence", color="#6aa84f")
        ax.set_xticks(list(xs))
        ax.set_xticklabels(labels, rotation=30, ha="right")
        ax.set_ylim(0, 1.05)
        ax.set_ylabel("score")
        ax.set_title("campaign situation scores")
        ax.legend(frameon=False)
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)
    return path


def render_figures(scored: Iterable[Tuple[Situation, SituationScore]],
                   out_dir: str) -> List[str]:
    """Render one diamond per campaign (plus an overview when several)."""
    scored = list(scored)
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    for situation, result in scored:
        path = os.path.join(out_dir, f"{situation.campaign_id}.png")
        paths.append(render_situation_figure(situation, result, path))
    if len(scored) > 1:
        paths.append(render_overview_figure(
            scored, os.path.join(out_dir, "scores.png")))
    return paths
