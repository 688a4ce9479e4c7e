"""Monte-Carlo estimation of outage probabilities, gains and energy efficiency.

All UEs are statistically identical, so only UE 0 is simulated; the
number of UEs enters through the interference dimensionality.  Trials
run in fixed-size blocks, each block on its own counter-derived Philox
substream, which makes every estimate a pure function of (config, seed)
regardless of scheduling.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import stats as st

from .channel import SystemConfig

BLOCK = 8192
_PHASE_BLOCK = np.uint64(0xFFFFFFFFFFFFFFFF)  # reserved substream for LoS phases


class Metric(enum.Enum):
    WDT_SINR = "WDT_SINR"
    WET_SINR = "WET_SINR"
    WDT_EHP = "WDT_EHP"
    WET_EHP = "WET_EHP"
    IDET_SPECIAL = "IDET_SPECIAL"
    IDET_GENERAL = "IDET_GENERAL"


class Method(enum.Enum):
    MC = "MC"
    EXACT = "EXACT"
    CLOSED_FORM = "CLOSED_FORM"


class Strategy(enum.Enum):
    WDT = "WDT"
    WET = "WET"


@dataclass(frozen=True)
class OutageEstimate:
    value: float
    ci_half_width: float
    trials: int
    metric: Metric
    method: Method = Method.MC

    def __post_init__(self):
        if not 0.0 <= self.value <= 1.0 or self.ci_half_width < 0.0:
            raise ValueError("outage estimate outside [0, 1]")


@dataclass(frozen=True)
class GainReport:
    m_wdt: float
    m_wet: float
    m_idet_special: float
    m_idet_general: float


@dataclass(frozen=True)
class EnergyEfficiencyReport:
    sum_rate: float          # bits/s
    harvested: float         # W
    total_power: float       # W
    ee: float                # bits/J, ratio of means
    ee_mean_of_ratios: float
    strategy: Strategy
    valid: bool = True


@dataclass(frozen=True)
class IndependenceReport:
    rank_correlation: float
    threshold: float
    passed: bool
    trials: int


def substream(seed: int, cell: int, block) -> np.random.Generator:
    """Deterministic counter-based stream for one (cell, block) pair."""
    key = np.array(
        [np.uint64(seed & 0xFFFFFFFFFFFFFFFF),
         np.uint64((np.uint64(cell) << np.uint64(40)) + np.uint64(block))],
        dtype=np.uint64,
    )
    return np.random.Generator(np.random.Philox(key=key))


def los_phases(cfg: SystemConfig, seed: int, cell: int = 0) -> np.ndarray:
    """Per-scenario LoS phases, fixed across trials for a given seed."""
    rng = np.random.Generator(np.random.Philox(
        key=np.array([np.uint64(seed & 0xFFFFFFFFFFFFFFFF), _PHASE_BLOCK],
                     dtype=np.uint64)))
    return rng.uniform(0.0, 2.0 * math.pi, size=cfg.n_users)


def _block_powers(cfg, rng, size, n_antennas, phases=None):
    """Raw port powers |g|^2 of shape (size, K, n) for UE 0, antenna 0 desired."""
    k = cfg.n_ports
    mu = cfg.mu
    s = math.sqrt(max(0.0, 1.0 - mu * mu))
    x0 = rng.standard_normal((size, 1, n_antennas))
    y0 = rng.standard_normal((size, 1, n_antennas))
    xk = rng.standard_normal((size, k, n_antennas))
    yk = rng.standard_normal((size, k, n_antennas))
    gr = s * xk + mu * x0
    gi = s * yk + mu * y0
    if phases is not None and cfg.rician_k > 0.0:
        amp = math.sqrt(cfg.rician_k)
        gr += amp * np.cos(phases)[None, None, :n_antennas]
        gi += amp * np.sin(phases)[None, None, :n_antennas]
    return gr * gr + gi * gi


def _block_iter(trials: int):
    n_blocks = (trials + BLOCK - 1) // BLOCK
    for b in range(n_blocks):
        yield b, min(BLOCK, trials - b * BLOCK)


def simulate_outage_counts(
    cfg: SystemConfig,
    trials: int,
    seed: int,
    cell: int = 0,
    k_values: list[int] | None = None,
    n_values: list[int] | None = None,
) -> dict:
    """Failure counts for all six outage metrics over `trials` realizations.

    With `k_values` (nested ports) or `n_values` (nested antennas) the four
    max-based metrics are additionally counted per swept value on common
    random numbers, so the pathwise monotonicity in K and N is exact.
    """
    if trials < 1000:
        raise ValueError("trials must be >= 1000")
    if k_values is not None and n_values is not None:
        raise ValueError("nest over K or N, not both")
    gamma = cfg.sinr_threshold
    # 2/(2+kappa) keeps mean harvested power independent of the LoS strength
    q_scale = (1.0 - cfg.ps_ratio) * cfg.tx_power / cfg.distance ** cfg.pathloss_exp \
        * 2.0 / (2.0 + cfg.rician_k)
    q_th = cfg.ehp_threshold
    phases = los_phases(cfg, seed, cell) if cfg.rician_k > 0.0 else None
    n_max = max(n_values) if n_values else cfg.n_users

    counts = {m: 0 for m in Metric}
    nested = None
    if k_values or n_values:
        nested = {m: np.zeros(len(k_values or n_values), dtype=np.int64)
                  for m in (Metric.WDT_SINR, Metric.WET_EHP,
                            Metric.IDET_SPECIAL, Metric.IDET_GENERAL)}

    for b, size in _block_iter(trials):
        rng = substream(seed, cell, b)
        p = _block_powers(cfg, rng, size, n_max, phases)
        if n_values:
            _count_nested_n(p, n_values, gamma, q_scale, q_th, nested)
            continue
        desired = p[:, :, 0]
        interf = p.sum(axis=2) - desired
        with np.errstate(divide="ignore", invalid="ignore"):
            sinr = np.where(interf > 0.0, desired / interf, np.inf)
        q = q_scale * (desired + interf)
        if k_values:
            _count_nested_k(sinr, q, k_values, gamma, q_th, nested)
        _count_full(sinr, q, gamma, q_th, counts)

    out = {"counts": counts, "trials": trials}
    if nested is not None:
        out["nested"] = nested
        out["nested_values"] = list(k_values or n_values)
    return out


def _count_full(sinr, q, gamma, q_th, counts):
    wdt_fail = sinr.max(axis=1) < gamma
    wet_fail = q.max(axis=1) < q_th
    idx_wdt = np.argmax(sinr, axis=1)
    idx_wet = np.argmax(q, axis=1)
    rows = np.arange(sinr.shape[0])
    counts[Metric.WDT_SINR] += int(wdt_fail.sum())
    counts[Metric.WET_EHP] += int(wet_fail.sum())
    counts[Metric.WET_SINR] += int((q[rows, idx_wdt] < q_th).sum())
    counts[Metric.WDT_EHP] += int((sinr[rows, idx_wet] < gamma).sum())
    counts[Metric.IDET_SPECIAL] += int((wdt_fail & wet_fail).sum())
    counts[Metric.IDET_GENERAL] += int((wdt_fail | wet_fail).sum())


def _count_nested_k(sinr, q, k_values, gamma, q_th, nested):
    run_sinr = np.maximum.accumulate(sinr, axis=1)
    run_q = np.maximum.accumulate(q, axis=1)
    for i, k in enumerate(k_values):
        wdt = run_sinr[:, k - 1] < gamma
        wet = run_q[:, k - 1] < q_th
        nested[Metric.WDT_SINR][i] += int(wdt.sum())
        nested[Metric.WET_EHP][i] += int(wet.sum())
        nested[Metric.IDET_SPECIAL][i] += int((wdt & wet).sum())
        nested[Metric.IDET_GENERAL][i] += int((wdt | wet).sum())


def _count_nested_n(p, n_values, gamma, q_scale, q_th, nested):
    desired = p[:, :, 0]
    cum = np.cumsum(p, axis=2)
    for i, n in enumerate(n_values):
        interf = cum[:, :, n - 1] - desired
        with np.errstate(divide="ignore", invalid="ignore"):
            sinr = np.where(interf > 0.0, desired / interf, np.inf)
        wdt = sinr.max(axis=1) < gamma
        wet = (q_scale * cum[:, :, n - 1]).max(axis=1) < q_th
        nested[Metric.WDT_SINR][i] += int(wdt.sum())
        nested[Metric.WET_EHP][i] += int(wet.sum())
        nested[Metric.IDET_SPECIAL][i] += int((wdt & wet).sum())
        nested[Metric.IDET_GENERAL][i] += int((wdt | wet).sum())


def _to_estimate(count, trials, metric):
    p = count / trials
    ci = 1.96 * math.sqrt(max(p * (1.0 - p), 0.0) / trials)
    return OutageEstimate(p, ci, trials, metric)


_STRATEGY_METRIC = {
    (Strategy.WDT, Strategy.WDT): Metric.WDT_SINR,
    (Strategy.WDT, Strategy.WET): Metric.WET_SINR,
    (Strategy.WET, Strategy.WET): Metric.WET_EHP,
    (Strategy.WET, Strategy.WDT): Metric.WDT_EHP,
}


def estimate_outage(
    cfg: SystemConfig,
    strategy: Strategy,
    metric: Strategy,
    trials: int,
    seed: int,
    cell: int = 0,
) -> OutageEstimate:
    """Outage of `metric` (WDT=SINR test, WET=EHP test) under `strategy`'s port."""
    res = simulate_outage_counts(cfg, trials, seed, cell)
    m = _STRATEGY_METRIC[(strategy, metric)]
    return _to_estimate(res["counts"][m], trials, m)


def estimate_idet(
    cfg: SystemConfig, trials: int, seed: int, kind: str = "SPECIAL", cell: int = 0
) -> OutageEstimate:
    """IDET outage: SPECIAL = every port fails both; GENERAL = either max fails."""
    m = Metric.IDET_SPECIAL if kind.upper() == "SPECIAL" else Metric.IDET_GENERAL
    res = simulate_outage_counts(cfg, trials, seed, cell)
    return _to_estimate(res["counts"][m], trials, m)


def multiplexing_gains(outages: dict, n_users: int) -> GainReport:
    """N (1 - outage) for the four gain-bearing metrics."""
    def val(metric):
        o = outages[metric]
        return o.value if isinstance(o, OutageEstimate) else float(o)

    return GainReport(
        m_wdt=n_users * (1.0 - val(Metric.WDT_SINR)),
        m_wet=n_users * (1.0 - val(Metric.WET_EHP)),
        m_idet_special=n_users * (1.0 - val(Metric.IDET_SPECIAL)),
        m_idet_general=n_users * (1.0 - val(Metric.IDET_GENERAL)),
    )


def estimate_energy_efficiency(
    cfg: SystemConfig, strategy: Strategy, trials: int, seed: int, cell: int = 0
) -> EnergyEfficiencyReport:
    """Trial-averaged energy efficiency for the given port selection strategy.

    Primary figure is the ratio of means E[R] / E[Q_total]; the mean of the
    per-trial ratios is reported alongside.
    """
    if trials < 1000:
        raise ValueError("trials must be >= 1000")
    gamma_irrelevant = None  # port choice only needs the realization
    q_scale = (1.0 - cfg.ps_ratio) * cfg.tx_power / cfg.distance ** cfg.pathloss_exp \
        * 2.0 / (2.0 + cfg.rician_k)
    phases = los_phases(cfg, seed, cell) if cfg.rician_k > 0.0 else None
    n = cfg.n_users
    base_power = n * cfg.tx_power + cfg.fixed_power

    rate_sums, q_sums, ratio_sums = [], [], []
    for b, size in _block_iter(trials):
        rng = substream(seed, cell, b)
        p = _block_powers(cfg, rng, size, n, phases)
        desired = p[:, :, 0]
        interf = p.sum(axis=2) - desired
        with np.errstate(divide="ignore", invalid="ignore"):
            sinr = np.where(interf > 0.0, desired / interf, np.inf)
        q = q_scale * (desired + interf)
        rows = np.arange(size)
        idx = np.argmax(sinr if strategy is Strategy.WDT else q, axis=1)
        sel_rate = np.log2(1.0 + sinr[rows, idx])
        sel_q = q[rows, idx]
        rate_sums.append(float(sel_rate.sum()))
        q_sums.append(float(sel_q.sum()))
        denom = base_power - n * sel_q
        ratio_sums.append(float((n * cfg.bandwidth * sel_rate / denom).sum()))

    mean_rate = math.fsum(rate_sums) / trials
    mean_q = math.fsum(q_sums) / trials
    sum_rate = n * cfg.bandwidth * mean_rate
    harvested = n * mean_q
    total_power = base_power - harvested
    valid = total_power > 0.0
    ee = sum_rate / total_power if valid else math.nan
    return EnergyEfficiencyReport(
        sum_rate=sum_rate,
        harvested=harvested,
        total_power=total_power,
        ee=ee,
        ee_mean_of_ratios=math.fsum(ratio_sums) / trials,
        strategy=strategy,
        valid=valid,
    )


def independence_diagnostic(
    cfg: SystemConfig, trials: int, seed: int, cell: int = 0
) -> IndependenceReport:
    """Rank correlation between X+Y and X/Y on a single port.

    At mu = 0 the two are exactly independent; the diagnostic passes when
    |corr| < 3 / sqrt(trials).  Any mu is accepted for informational runs.
    """
    if trials < 1000:
        raise ValueError("trials must be >= 1000")
    sums = np.empty(trials)
    ratios = np.empty(trials)
    pos = 0
    for b, size in _block_iter(trials):
        rng = substream(seed, cell, b)
        p = _block_powers(cfg, rng, size, cfg.n_users)
        x = p[:, 0, 0]
        y = p[:, 0, 1:].sum(axis=1)
        sums[pos:pos + size] = x + y
        ratios[pos:pos + size] = x / y
        pos += size
    corr = float(st.spearmanr(sums, ratios).statistic)
    threshold = 3.0 / math.sqrt(trials)
    return IndependenceReport(corr, threshold, abs(corr) < threshold, trials)
