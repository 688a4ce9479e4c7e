"""Slow-FAMA port selection: one switch per coherence block."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import PortStatistics


@dataclass(frozen=True)
class PortChoice:
    port: int
    criterion_value: float


def select_wdt_port(stats: PortStatistics) -> PortChoice:
    """Port maximizing the SIR X_k / Y_k; ties broken by lowest index."""
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(stats.y > 0.0, stats.x / stats.y, np.inf)
    # 0/0 (probability zero) counts as zero signal, not a win
    ratio = np.where((stats.x == 0.0) & (stats.y == 0.0), 0.0, ratio)
    port = int(np.argmax(ratio))
    return PortChoice(port, float(ratio[port]))


def select_wet_port(stats: PortStatistics) -> PortChoice:
    """Port maximizing the harvested power, i.e. X_k + Y_k; lowest index wins ties."""
    total = stats.x + stats.y
    port = int(np.argmax(total))
    return PortChoice(port, float(total[port]))
