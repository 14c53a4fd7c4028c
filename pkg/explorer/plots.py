"""
Bland-Altman plots of unadjusted versus adjusted treatment coefficients,
one vertically stacked panel per link, written as SVG.
"""

import io
import logging
from dataclasses import dataclass

import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt
import numpy as np

logger = logging.getLogger(__name__)

PANEL_ORDER = ('logit', 'identity', 'log')
PANEL_WIDTH = 600
PANEL_HEIGHT = 300
PADDING = 0.05
DPI = 100

# Fixed salt and no timestamp keep the SVG byte-identical between runs.
SVG_STYLE = {
    'svg.hashsalt': 'canonlink',
    'svg.fonttype': 'none',
    'font.family': 'DejaVu Sans',
}


class NoPointsError(ValueError):
    """Nothing to plot."""


@dataclass(frozen=True)
class PlotDocument:
    svg: str
    panels: tuple

    def save(self, path):
        with open(path, 'w', encoding='utf-8', newline='\n') as f:
            f.write(self.svg)
        logger.info(f"✓ Bland-Altman plot saved to: {path}")


def _padded(values, include_zero=False):
    lo, hi = float(np.min(values)), float(np.max(values))
    if include_zero:
        lo, hi = min(lo, 0.0), max(hi, 0.0)
    span = hi - lo if hi > lo else max(abs(hi), 1e-3)
    return lo - PADDING * span, hi + PADDING * span


def _draw_panel(ax, link, points):
    ax.set_gid(f"panel-{link}")
    ax.set_title(f"{link} link")
    ax.set_xlabel('mean of estimates')
    ax.set_ylabel('adjusted − unadjusted')
    ax.axhline(0.0, color='gray', linestyle='--', linewidth=0.8)

    if not points:
        ax.text(0.5, 0.5, 'no converged fits', ha='center', va='center', transform=ax.transAxes)
        return

    means = np.array([p.mean for p in points])
    diffs = np.array([p.diff for p in points])
    ax.scatter(means, diffs, s=6, color='tab:blue', alpha=0.6, linewidths=0)
    ax.set_xlim(*_padded(means))
    ax.set_ylim(*_padded(diffs, include_zero=True))
    ax.grid(True, alpha=0.3)


def render_bland_altman(points_by_link, panels=PANEL_ORDER):
    """Render the stacked panels; raises NoPointsError if every panel is empty."""
    if not any(points_by_link.get(link) for link in panels):
        raise NoPointsError("no points")

    with plt.rc_context(SVG_STYLE):
        fig, axes = plt.subplots(
            len(panels), 1,
            figsize=(PANEL_WIDTH / DPI, len(panels) * PANEL_HEIGHT / DPI),
            dpi=DPI,
        )
        try:
            axes = np.atleast_1d(axes)
            for ax, link in zip(axes, panels):
                _draw_panel(ax, link, points_by_link.get(link, []))
            fig.tight_layout()

            buffer = io.StringIO()
            fig.savefig(buffer, format='svg', metadata={'Date': None})
        finally:
            plt.close(fig)

    return PlotDocument(buffer.getvalue(), tuple(panels))
