"""Single-cycle store-and-forward timing model.

One control cycle: sensing data goes up for t_up, the satellite processes it
(cycles-per-bit / allocated compute rate), the extracted command bits go down
for t_down, and propagation in both directions is charged against the same
budget. Uplink transfer, computing, and downlink transfer happen strictly in
sequence; a cycle whose stages do not fit in the period delivers nothing.
"""
from dataclasses import dataclass

from . import control, linkgeom
from .control import INFEASIBLE, Plant, RateCostModel
from .linkgeom import LinkParams


class NoBudgetError(ValueError):
    """Propagation alone exceeds the cycle period."""


@dataclass(frozen=True)
class LoopBudget:
    """Per-cycle time and processing budget.

    Attributes:
        cycle_period_s: Total time allocated to communication + computing.
        cycles_per_bit: CPU cycles needed per uplinked bit.
        compute_rate_cps: CPU cycles per second allocated to this loop.
        extraction_ratio: Fraction of uplinked bits surviving processing as
            command-relevant bits, in (0, 1].
    """
    cycle_period_s: float = 0.02
    cycles_per_bit: float = 100.0
    compute_rate_cps: float = 1e10
    extraction_ratio: float = 0.001

    def __post_init__(self):
        for name in ("cycle_period_s", "cycles_per_bit", "compute_rate_cps", "extraction_ratio"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if self.extraction_ratio > 1.0:
            raise ValueError(f"extraction_ratio must be <= 1, got {self.extraction_ratio}")


@dataclass(frozen=True)
class LoopOutcome:
    """What one evaluated cycle achieved."""
    uplink_rate_bps: float
    downlink_rate_bps: float
    t_up_s: float
    t_comp_s: float
    t_down_s: float
    t_prop_s: float
    effective_bits_per_cycle: float
    cner_bps: float
    stable: bool
    lqr_cost: object
    time_feasible: bool

    @property
    def total_latency_s(self) -> float:
        return self.t_up_s + self.t_comp_s + self.t_down_s + self.t_prop_s


def propagation_delay_s(distance_up_m: float, distance_down_m: float) -> float:
    """Two-leg propagation delay (d_up + d_down) / c."""
    if distance_up_m < 0.0 or distance_down_m < 0.0:
        raise ValueError("distances must be non-negative")
    return (distance_up_m + distance_down_m) / linkgeom.SPEED_OF_LIGHT_M_S


def evaluate_cycle(uplink: LinkParams, downlink: LinkParams, budget: LoopBudget,
                   plant: Plant, t_up_s: float, t_down_s: float,
                   model: RateCostModel | None = None) -> LoopOutcome:
    """Evaluate one closed-loop cycle at a given time allocation.

    Uplinked volume is rate * t_up; computing takes cycles_per_bit * volume /
    compute rate; the downlink can carry rate * t_down, and the delivered
    command bits are min(extraction_ratio * uplinked, downlink capacity).
    A cycle whose stage times plus propagation exceed the period is
    time-infeasible: zero effective bits, not stable.

    Args:
        model: Optional pre-built RateCostModel for the plant (avoids
            re-solving the Riccati equation in inner optimization loops).
    """
    if t_up_s < 0.0 or t_down_s < 0.0:
        raise ValueError("stage times must be non-negative")
    if plant.sample_period_s != budget.cycle_period_s:
        raise ValueError(
            f"plant sample period {plant.sample_period_s} != cycle period "
            f"{budget.cycle_period_s}")
    if model is None:
        model = RateCostModel.from_plant(plant)

    r_up = linkgeom.shannon_rate_bps(uplink)
    r_down = linkgeom.shannon_rate_bps(downlink)
    t_prop = propagation_delay_s(linkgeom.slant_range_m(uplink.geometry),
                                 linkgeom.slant_range_m(downlink.geometry))

    data_up = r_up * t_up_s
    t_comp = budget.cycles_per_bit * data_up / budget.compute_rate_cps
    down_capacity = r_down * t_down_s
    effective = min(budget.extraction_ratio * data_up, down_capacity)

    total = t_up_s + t_comp + t_down_s + t_prop
    if total > budget.cycle_period_s + 1e-12:
        return LoopOutcome(
            uplink_rate_bps=r_up, downlink_rate_bps=r_down,
            t_up_s=t_up_s, t_comp_s=t_comp, t_down_s=t_down_s, t_prop_s=t_prop,
            effective_bits_per_cycle=0.0, cner_bps=0.0, stable=False,
            lqr_cost=INFEASIBLE, time_feasible=False)

    rate_bps = control.cner_bps(effective, budget.cycle_period_s)
    return LoopOutcome(
        uplink_rate_bps=r_up, downlink_rate_bps=r_down,
        t_up_s=t_up_s, t_comp_s=t_comp, t_down_s=t_down_s, t_prop_s=t_prop,
        effective_bits_per_cycle=effective, cner_bps=rate_bps,
        stable=control.is_stabilizable_at(plant, rate_bps),
        lqr_cost=control.lqr_cost(model, effective),
        time_feasible=True)


def balanced_times(uplink: LinkParams, downlink: LinkParams, budget: LoopBudget,
                   t_prop_s: float) -> tuple[float, float]:
    """Time split maximizing effective bits for the given bandwidths.

    The pipeline delivers most when the extraction output exactly fills the
    downlink and the whole budget is used:
        t_up * (1 + c_bit*R_up/f + rho*R_up/R_down) = period - t_prop
        t_down = rho*R_up*t_up / R_down

    Raises:
        NoBudgetError: propagation alone uses up the period.
    """
    remaining = budget.cycle_period_s - t_prop_s
    if remaining <= 0.0:
        raise NoBudgetError(
            f"propagation {t_prop_s}s leaves no budget in a "
            f"{budget.cycle_period_s}s cycle")
    r_up = linkgeom.shannon_rate_bps(uplink)
    r_down = linkgeom.shannon_rate_bps(downlink)
    denom = (1.0 + budget.cycles_per_bit * r_up / budget.compute_rate_cps
             + budget.extraction_ratio * r_up / r_down)
    t_up = remaining / denom
    t_down = budget.extraction_ratio * r_up * t_up / r_down
    return t_up, t_down
