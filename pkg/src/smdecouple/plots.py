"""File-based figure rendering for the report pipeline.

Everything here draws to files through the Agg backend; no interactive
windows are ever opened.  Identically zero channels arrive as -inf dB and
are clipped to a visible floor.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

DB_FLOOR = -400.0


def _clip_db(values):
    return [DB_FLOOR if not math.isfinite(v) else max(v, DB_FLOOR)
            for v in values]


def save_magnitude_figure(path, freq_hz, curves: dict, title: str,
                          ylabel: str = "magnitude (dB)") -> None:
    """Semilog-x magnitude plot; curves maps label -> dB values."""
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    for label, values in curves.items():
        ax.semilogx(freq_hz, _clip_db(values), label=label)
    ax.set_xlabel("frequency (Hz)")
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.grid(True, which="both", alpha=0.35)
    ax.legend(loc="best", fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_bound_figure(path, freq_hz, sigma_values, bound_values,
                      title: str) -> None:
    """Requirement curve against the achieved singular-value curve."""
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    ax.loglog(freq_hz, sigma_values, label="sigma_max achieved")
    ax.loglog(freq_hz, bound_values, "--", label="sufficient bound")
    ax.set_xlabel("frequency (Hz)")
    ax.set_ylabel("magnitude")
    ax.set_title(title)
    ax.grid(True, which="both", alpha=0.35)
    ax.legend(loc="best", fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_step_figure(path, times, series: dict, title: str) -> None:
    """Time-domain traces; series maps label -> samples."""
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    for label, values in series.items():
        ax.plot(times, values, label=label)
    ax.set_xlabel("time (s)")
    ax.set_ylabel("position")
    ax.set_title(title)
    ax.grid(True, alpha=0.35)
    ax.legend(loc="best", fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
