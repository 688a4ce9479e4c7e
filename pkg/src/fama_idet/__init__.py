"""Outage, multiplexing-gain and energy-efficiency analysis of
fluid-antenna multiple access with integrated data and energy transfer.

Two independent evaluation routes are exposed for every outage metric:
Monte-Carlo simulation (:mod:`fama_idet.montecarlo`) and deterministic
quadrature of the exact expressions plus their closed-form
approximations (:mod:`fama_idet.analytic`).
"""

from .analytic import (
    ClosedFormPair,
    DEFAULT_QUAD,
    IdetSpecialApprox,
    KernelContext,
    QuadratureConvergenceError,
    QuadratureSpec,
    idet_general,
    idet_special_approx,
    idet_special_exact,
    rician_wdt_sinr_exact,
    rician_wet_ehp_exact,
    wdt_ehp_approx,
    wdt_ehp_exact,
    wdt_sinr_approx,
    wdt_sinr_exact,
    wet_ehp_approx,
    wet_ehp_exact,
    wet_sinr_approx,
    wet_sinr_exact,
)
from .channel import ChannelRealization, PortStatistics, SystemConfig
from .montecarlo import (
    EnergyEfficiencyReport,
    GainReport,
    Method,
    Metric,
    OutageEstimate,
    Strategy,
    estimate_energy_efficiency,
    estimate_idet,
    estimate_outage,
    independence_diagnostic,
    multiplexing_gains,
    simulate_outage_counts,
)
from .specfun import SeriesConvergenceError, Tolerance, marcum_q, mu_from_w
from .strategy import PortChoice, select_wdt_port, select_wet_port

__version__ = "0.1.0"

__all__ = [
    "ChannelRealization",
    "ClosedFormPair",
    "DEFAULT_QUAD",
    "EnergyEfficiencyReport",
    "GainReport",
    "IdetSpecialApprox",
    "KernelContext",
    "Method",
    "Metric",
    "OutageEstimate",
    "PortChoice",
    "PortStatistics",
    "QuadratureConvergenceError",
    "QuadratureSpec",
    "SeriesConvergenceError",
    "Strategy",
    "SystemConfig",
    "Tolerance",
    "estimate_energy_efficiency",
    "estimate_idet",
    "estimate_outage",
    "idet_general",
    "idet_special_approx",
    "idet_special_exact",
    "independence_diagnostic",
    "marcum_q",
    "mu_from_w",
    "multiplexing_gains",
    "rician_wdt_sinr_exact",
    "rician_wet_ehp_exact",
    "select_wdt_port",
    "select_wet_port",
    "simulate_outage_counts",
    "wdt_ehp_approx",
    "wdt_ehp_exact",
    "wdt_sinr_approx",
    "wdt_sinr_exact",
    "wet_ehp_approx",
    "wet_ehp_exact",
    "wet_sinr_approx",
    "wet_sinr_exact",
]
