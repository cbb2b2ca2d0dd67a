"""Resource-allocation solvers with brute-force oracles.

Single loop: split total bandwidth between uplink and downlink under a
task-oriented (rate-limited LQR cost), max-throughput, or min-latency
objective, via golden-section search with a dense-grid fallback.

Multi loop: jointly allocate downlink transmit power and on-board compute
frequency across robots by projected gradient on budget-scaled variables,
compared against a max-throughput (water-filling) scheme and a compute-only
scheme at equal power.
"""
import enum
import math
from dataclasses import dataclass

import numpy as np

from . import control, linkgeom, pipeline
from .control import INFEASIBLE, Plant, RateCostModel
from .linkgeom import BOLTZMANN_J_PER_K, LinkParams
from .pipeline import LoopBudget, LoopOutcome

INFEASIBILITY_PENALTY = 1e9
GOLDEN_REL_WIDTH = 1e-8
UNIMODAL_CHECK_POINTS = 101
UNIMODAL_REL_TOL = 1e-3
DENSE_GRID_POINTS = 10001


class DimensionTooLargeError(ValueError):
    """Brute-force oracle refused: decision space dimension above 4."""


class SingleLoopObjective(enum.Enum):
    TASK_ORIENTED = "task_oriented"
    MAX_THROUGHPUT = "max_throughput"
    MIN_LATENCY = "min_latency"


class MultiLoopScheme(enum.Enum):
    TASK_ORIENTED_JOINT = "task_oriented_joint"
    MAX_THROUGHPUT_JOINT = "max_throughput_joint"
    COMPUTE_ONLY_EQUAL_COMM = "compute_only_equal_comm"


@dataclass(frozen=True, eq=False)
class SingleLoopProblem:
    """Uplink/downlink bandwidth split for one loop.

    The link templates carry everything but bandwidth, which is the decision
    variable (b_up + b_down = total_bandwidth_hz). fixed_payload_bits is used
    only by the min-latency objective.
    """
    total_bandwidth_hz: float
    uplink_template: LinkParams
    downlink_template: LinkParams
    budget: LoopBudget
    plant: Plant
    objective: SingleLoopObjective
    fixed_payload_bits: float = 1e4

    def __post_init__(self):
        if self.total_bandwidth_hz <= 0.0:
            raise ValueError("total bandwidth must be positive")
        if self.objective == SingleLoopObjective.MIN_LATENCY and self.fixed_payload_bits <= 0.0:
            raise ValueError("min-latency objective needs a positive payload")


@dataclass(frozen=True, eq=False)
class RobotLoop:
    """One robot's downlink template, plant, and fixed bandwidth share."""
    downlink: LinkParams
    plant: Plant
    bandwidth_share_hz: float

    def __post_init__(self):
        if self.bandwidth_share_hz <= 0.0:
            raise ValueError("bandwidth share must be positive")


@dataclass(frozen=True, eq=False)
class MultiLoopProblem:
    """Joint downlink-power + compute-frequency allocation across robots.

    Each robot's uplink is abstracted as a fixed per-cycle sensing volume
    (uplink_fixed_bits); the decision variables are per-robot downlink power
    and compute frequency under total budgets.
    """
    robots: tuple
    total_power_w: float
    total_compute_cps: float
    budget: LoopBudget
    scheme: MultiLoopScheme
    uplink_fixed_bits: float

    def __post_init__(self):
        if not self.robots:
            raise ValueError("at least one robot required")
        if self.total_power_w <= 0.0 or self.total_compute_cps <= 0.0:
            raise ValueError("resource totals must be positive")
        if self.uplink_fixed_bits <= 0.0:
            raise ValueError("uplink volume must be positive")
        for robot in self.robots:
            if not robot.plant.is_scalar:
                raise control.UnsupportedPlantError(
                    "multi-loop allocation supports scalar per-robot plants only")


@dataclass(frozen=True)
class SolverTrace:
    iterations: int
    converged: bool
    restarts: int = 1
    best_restart: int = 0
    fallback_dense_grid: bool = False
    all_infeasible: bool = False
    method: str = ""


@dataclass(frozen=True, eq=False)
class AllocationResult:
    """Solver output: decision, per-loop outcomes, objective, and trace.

    lqr_total re-scores the decision under the penalized sum of LQR costs so
    schemes with different native objectives can be compared on one axis.
    """
    decision: dict
    per_loop_outcomes: tuple
    objective_value: float
    lqr_total: float
    solver_trace: SolverTrace


# ---------------------------------------------------------------------------
# single loop
# ---------------------------------------------------------------------------

def _mandatory_bits(model: RateCostModel) -> float:
    return sum(max(math.log2(abs(a)), 0.0) for a, _, _, _ in model.mode_params)


def _penalized_cost(model: RateCostModel, effective_bits: float) -> float:
    """LQR cost with the explicit infeasibility penalty used by all solvers."""
    cost = control.lqr_cost(model, max(effective_bits, 0.0))
    if cost is INFEASIBLE:
        return INFEASIBILITY_PENALTY + (_mandatory_bits(model) - effective_bits)
    return cost


def _links_at(problem: SingleLoopProblem, b_up: float):
    uplink = problem.uplink_template.with_bandwidth(b_up)
    downlink = problem.downlink_template.with_bandwidth(problem.total_bandwidth_hz - b_up)
    return uplink, downlink


def _cycle_at(problem: SingleLoopProblem, model: RateCostModel, b_up: float) -> LoopOutcome:
    uplink, downlink = _links_at(problem, b_up)
    t_prop = pipeline.propagation_delay_s(
        linkgeom.slant_range_m(uplink.geometry),
        linkgeom.slant_range_m(downlink.geometry))
    t_up, t_down = pipeline.balanced_times(uplink, downlink, problem.budget, t_prop)
    return pipeline.evaluate_cycle(uplink, downlink, problem.budget, problem.plant,
                                   t_up, t_down, model=model)


def _single_objective_fn(problem: SingleLoopProblem, model: RateCostModel):
    """Minimization objective over b_up for the problem's scheme."""
    if problem.objective == SingleLoopObjective.TASK_ORIENTED:
        def fn(b_up: float) -> float:
            outcome = _cycle_at(problem, model, b_up)
            return _penalized_cost(model, outcome.effective_bits_per_cycle)
    elif problem.objective == SingleLoopObjective.MAX_THROUGHPUT:
        def fn(b_up: float) -> float:
            uplink, downlink = _links_at(problem, b_up)
            return -(linkgeom.shannon_rate_bps(uplink) + linkgeom.shannon_rate_bps(downlink))
    else:  # MIN_LATENCY: link-level scheme, same payload both directions
        def fn(b_up: float) -> float:
            uplink, downlink = _links_at(problem, b_up)
            return (problem.fixed_payload_bits / linkgeom.shannon_rate_bps(uplink)
                    + problem.fixed_payload_bits / linkgeom.shannon_rate_bps(downlink))
    return fn


def golden_section(fn, lo: float, hi: float, rel_width: float = GOLDEN_REL_WIDTH):
    """Golden-section minimization on [lo, hi] to the given relative width.

    Returns (x_best, f_best, evaluations).
    """
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = fn(c), fn(d)
    evals = 2
    span = hi - lo
    while (b - a) > rel_width * span:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = fn(d)
        evals += 1
    x = c if fc < fd else d
    f = min(fc, fd)
    return x, f, evals


def solve_single_loop(problem: SingleLoopProblem) -> AllocationResult:
    """Best bandwidth split for the problem's objective.

    Golden-section search over b_up on [delta, B_tot - delta]; a 101-point
    coarse grid guards against non-unimodal objectives and triggers a dense
    grid argmin when it beats the golden-section result by more than 1e-3
    relative. The chosen split is re-scored through the full cycle model.
    """
    model = RateCostModel.from_plant(problem.plant)
    fn = _single_objective_fn(problem, model)
    b_tot = problem.total_bandwidth_hz
    delta = 1e-6 * b_tot
    lo, hi = delta, b_tot - delta

    b_star, f_star, evals = golden_section(fn, lo, hi)

    coarse = np.linspace(lo, hi, UNIMODAL_CHECK_POINTS)
    coarse_vals = [fn(b) for b in coarse]
    i_best = int(np.argmin(coarse_vals))
    fallback = False
    scale = max(abs(f_star), abs(coarse_vals[i_best]), 1e-300)
    if (f_star - coarse_vals[i_best]) / scale > UNIMODAL_REL_TOL:
        fallback = True
        dense = np.linspace(lo, hi, DENSE_GRID_POINTS)
        dense_vals = [fn(b) for b in dense]
        j = int(np.argmin(dense_vals))
        b_star, f_star = float(dense[j]), dense_vals[j]
        evals += DENSE_GRID_POINTS
        # polish inside the winning bracket
        j_lo, j_hi = max(j - 1, 0), min(j + 1, DENSE_GRID_POINTS - 1)
        b_ref, f_ref, e_ref = golden_section(fn, float(dense[j_lo]), float(dense[j_hi]))
        evals += e_ref
        if f_ref < f_star:
            b_star, f_star = b_ref, f_ref
    elif coarse_vals[i_best] < f_star:
        # keep the better of the two probes (flat or noisy objectives)
        b_ref, f_ref, e_ref = golden_section(
            fn, coarse[max(i_best - 1, 0)], coarse[min(i_best + 1, UNIMODAL_CHECK_POINTS - 1)])
        evals += e_ref
        if f_ref < f_star:
            b_star, f_star = float(b_ref), f_ref
        if coarse_vals[i_best] < f_star:
            b_star, f_star = float(coarse[i_best]), coarse_vals[i_best]
    evals += UNIMODAL_CHECK_POINTS

    assert delta * 0.5 <= b_star <= b_tot - delta * 0.5
    outcome = _cycle_at(problem, model, b_star)
    all_infeasible = (problem.objective == SingleLoopObjective.TASK_ORIENTED
                      and f_star >= INFEASIBILITY_PENALTY)
    return AllocationResult(
        decision={"bandwidth_up_hz": b_star, "bandwidth_down_hz": b_tot - b_star},
        per_loop_outcomes=(outcome,),
        objective_value=f_star,
        lqr_total=_penalized_cost(model, outcome.effective_bits_per_cycle),
        solver_trace=SolverTrace(iterations=evals, converged=True,
                                 fallback_dense_grid=fallback,
                                 all_infeasible=all_infeasible,
                                 method="golden_section"),
    )


# ---------------------------------------------------------------------------
# multi loop
# ---------------------------------------------------------------------------

class JointEvaluator:
    """Vectorized per-robot cycle evaluation for the joint allocation problem.

    Power/frequency vectors broadcast along the last axis (one entry per
    robot), so finite-difference batches evaluate in a single call. Effective
    bits are kept signed (negative when computing alone overruns the cycle)
    to keep penalty gradients informative.
    """

    def __init__(self, problem: MultiLoopProblem):
        robots = problem.robots
        self.n = len(robots)
        self.problem = problem
        self.bandwidth = np.array([r.bandwidth_share_hz for r in robots])
        gain = np.empty(self.n)
        dist = np.empty(self.n)
        for i, robot in enumerate(robots):
            link = robot.downlink.with_bandwidth(self.bandwidth[i])
            gain[i] = linkgeom.received_power_w(link) / link.tx_power_w
            dist[i] = linkgeom.slant_range_m(link.geometry)
        noise = np.array([
            BOLTZMANN_J_PER_K * r.downlink.noise_temperature_k for r in robots
        ]) * self.bandwidth
        self.snr_per_w = gain / noise
        self.distance_m = dist
        self.t_prop = np.array([pipeline.propagation_delay_s(d, d) for d in dist])
        self.t_budget = problem.budget.cycle_period_s - self.t_prop
        if np.any(self.t_budget <= 0.0):
            raise pipeline.NoBudgetError("propagation exceeds the cycle period")
        self.comp_cycles = problem.budget.cycles_per_bit * problem.uplink_fixed_bits
        self.cap_bits = problem.budget.extraction_ratio * problem.uplink_fixed_bits
        self.models = tuple(RateCostModel.from_plant(r.plant) for r in robots)
        self.j_ideal = np.array([m.mode_params[0][3] for m in self.models])
        self.sens_w = np.array([m.mode_params[0][2] * m.mode_params[0][1] for m in self.models])
        self.a_sq = np.array([m.mode_params[0][0] ** 2 for m in self.models])
        self.threshold_bits = np.array([_mandatory_bits(m) for m in self.models])

    def rates_bps(self, power_w: np.ndarray) -> np.ndarray:
        return self.bandwidth * np.log2(1.0 + power_w * self.snr_per_w)

    def effective_bits(self, power_w: np.ndarray, compute_cps: np.ndarray) -> np.ndarray:
        # the 1e-9 cps floor keeps zero-compute probes finite (and heavily penalized)
        t_comp = self.comp_cycles / np.maximum(compute_cps, 1e-9)
        window = self.t_budget - t_comp
        return np.minimum(self.cap_bits, self.rates_bps(power_w) * window)

    def cost_vector(self, power_w: np.ndarray, compute_cps: np.ndarray) -> np.ndarray:
        eff = self.effective_bits(power_w, compute_cps)
        feasible = (eff >= 0.0) & (4.0 ** np.minimum(np.maximum(eff, 0.0), 400.0) > self.a_sq)
        gap = 4.0 ** np.minimum(np.maximum(eff, 0.0), 400.0) - self.a_sq
        with np.errstate(divide="ignore", invalid="ignore"):
            cost = self.j_ideal + self.sens_w / gap
        return np.where(feasible, cost,
                        INFEASIBILITY_PENALTY + (self.threshold_bits - eff))

    def total_cost(self, power_w: np.ndarray, compute_cps: np.ndarray) -> np.ndarray:
        return self.cost_vector(power_w, compute_cps).sum(axis=-1)

    def outcomes(self, power_w: np.ndarray, compute_cps: np.ndarray) -> tuple:
        """Physical per-robot LoopOutcome tuple for a concrete decision."""
        outs = []
        rates = self.rates_bps(power_w)
        for i in range(self.n):
            t_comp = self.comp_cycles / compute_cps[i] if compute_cps[i] > 0 else math.inf
            window = self.t_budget[i] - t_comp
            feasible_time = window >= 0.0
            eff = max(0.0, min(self.cap_bits, rates[i] * max(window, 0.0)))
            t_down = (self.cap_bits / rates[i]
                      if eff >= self.cap_bits else max(window, 0.0))
            rate = control.cner_bps(eff, self.problem.budget.cycle_period_s)
            plant = self.problem.robots[i].plant
            outs.append(LoopOutcome(
                uplink_rate_bps=0.0, downlink_rate_bps=rates[i],
                t_up_s=0.0, t_comp_s=t_comp, t_down_s=t_down,
                t_prop_s=self.t_prop[i],
                effective_bits_per_cycle=eff, cner_bps=rate,
                stable=control.is_stabilizable_at(plant, rate) and feasible_time,
                lqr_cost=control.lqr_cost(self.models[i], eff) if feasible_time else INFEASIBLE,
                time_feasible=feasible_time))
        return tuple(outs)


def project_capped_simplex(x: np.ndarray, total: float) -> np.ndarray:
    """Euclidean projection onto {x >= 0, sum(x) <= total}."""
    x = np.maximum(x, 0.0)
    s = x.sum()
    if s <= total:
        return x
    u = np.sort(x)[::-1]
    cumulative = np.cumsum(u) - total
    counts = np.arange(1, x.size + 1)
    valid = u - cumulative / counts > 0.0
    rho = counts[valid][-1]
    theta = cumulative[rho - 1] / rho
    return np.maximum(x - theta, 0.0)


def water_fill_power(evaluator: JointEvaluator, total_power_w: float) -> np.ndarray:
    """Throughput-maximizing power allocation (classic water-filling).

    Equalizes the marginal rate dR/dP = B*g / ((1 + P*g) ln2) across robots,
    giving P_i = B_i * level - 1/g_i clipped at zero; the common level is
    found by bisection on the power budget.
    """
    b = evaluator.bandwidth
    floor = 1.0 / evaluator.snr_per_w

    def allocated(level: float) -> np.ndarray:
        return np.maximum(0.0, level * b - floor)

    lo = 0.0
    hi = (total_power_w + floor.sum()) / b.min() + 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if allocated(mid).sum() > total_power_w:
            hi = mid
        else:
            lo = mid
    alloc = allocated(0.5 * (lo + hi))
    if alloc.sum() > 0.0:
        alloc *= total_power_w / alloc.sum()
    return alloc


@dataclass
class _PgdResult:
    z: np.ndarray
    value: float
    iterations: int
    converged: bool


def _projected_gradient(objective, z0: np.ndarray, n: int, *,
                        optimize_power: bool = True,
                        max_iter: int = 500, rel_tol: float = 1e-10,
                        patience: int = 5) -> _PgdResult:
    """Minimize objective(z) over the product of two capped simplexes.

    z holds budget-scaled power and compute shares (each block sums to <= 1).
    Gradient by central differences with relative step 1e-6; trial steps are
    seeded Barzilai-Borwein style (spectral step from the last (dz, dg) pair,
    which copes with the steep penalty wall) and backed off by halving until
    a sufficient decrease over the projected move is reached. Converged after
    `patience` consecutive iterations with relative improvement below rel_tol.
    """
    def project(z):
        p = z[:n] if optimize_power else z0[:n]
        return np.concatenate([
            project_capped_simplex(p, 1.0) if optimize_power else p,
            project_capped_simplex(z[n:], 1.0)])

    z = project(z0.copy())
    fz = float(objective(z[None, :])[0])
    step = None
    z_prev = grad_prev = None
    quiet = 0
    iters = 0
    for iters in range(1, max_iter + 1):
        h = 1e-6 * np.maximum(np.abs(z), 0.1)
        if not optimize_power:
            h[:n] = 0.0
        active = np.nonzero(h)[0]
        probes = np.repeat(z[None, :], 2 * active.size, axis=0)
        for idx, k in enumerate(active):
            probes[2 * idx, k] = z[k] + h[k]
            probes[2 * idx + 1, k] = max(z[k] - h[k], 0.0)
        vals = objective(probes)
        grad = np.zeros_like(z)
        plus = np.array([probes[2 * i, k] for i, k in enumerate(active)])
        minus = np.array([probes[2 * i + 1, k] for i, k in enumerate(active)])
        grad[active] = (vals[0::2] - vals[1::2]) / (plus - minus)
        gnorm = float(np.linalg.norm(grad))
        if gnorm == 0.0 or not math.isfinite(gnorm):
            quiet += 1
            if quiet >= patience:
                return _PgdResult(z, fz, iters, True)
            continue
        if z_prev is not None:
            dz = z - z_prev
            dg = grad - grad_prev
            curvature = float(dz @ dg)
            if curvature > 1e-300:
                s = float(dz @ dz) / curvature
            else:
                s = step if step is not None else 0.25 / gnorm
        else:
            s = step if step is not None else 0.25 / gnorm
        s = min(max(s, 1e-16), 1e8)
        z_prev, grad_prev = z.copy(), grad.copy()
        improved = False
        for _ in range(80):
            cand = project(z - s * grad)
            move = cand - z
            move_sq = float(move @ move)
            if move_sq == 0.0:
                break  # projected gradient vanished: stationary point
            fc = float(objective(cand[None, :])[0])
            if fc <= fz - 1e-2 * move_sq / s:
                rel = (fz - fc) / max(abs(fz), 1e-300)
                z, fz = cand, fc
                step = s
                quiet = quiet + 1 if rel < rel_tol else 0
                improved = True
                break
            s *= 0.5
        if not improved:
            quiet += 1
        if quiet >= patience:
            return _PgdResult(z, fz, iters, True)
    return _PgdResult(z, fz, iters, False)


def _scaled_objective(evaluator: JointEvaluator, p_tot: float, f_tot: float):
    def objective(batch: np.ndarray) -> np.ndarray:
        n = evaluator.n
        return evaluator.total_cost(batch[..., :n] * p_tot, batch[..., n:] * f_tot)
    return objective


def _task_starts(evaluator: JointEvaluator, p_tot: float, f_tot: float,
                 restarts: int, seed: int, extra_starts) -> list:
    n = evaluator.n
    equal = np.full(2 * n, 1.0 / n)
    wf = np.concatenate([water_fill_power(evaluator, p_tot) / p_tot, np.full(n, 1.0 / n)])
    starts = [equal, wf]
    for dec in extra_starts:
        starts.append(np.concatenate([np.asarray(dec["power_w"]) / p_tot,
                                      np.asarray(dec["compute_cps"]) / f_tot]))
    rng = np.random.default_rng(seed)
    while len(starts) < max(restarts, len(starts)):
        starts.append(np.concatenate([rng.dirichlet(np.ones(n)), rng.dirichlet(np.ones(n))]))
    return starts


def solve_multi_loop(problem: MultiLoopProblem, *, seed: int = 0, restarts: int = 10,
                     extra_starts=(), max_iter: int = 500) -> AllocationResult:
    """Allocate downlink power and compute frequency under the chosen scheme.

    Task-oriented: projected gradient over both budgets from `restarts`
    deterministic starting points (equal split, water-filled power, callers'
    extra starts, then seeded random feasible points), best kept.
    Max-throughput: water-filled power, compute proportional to uplink load.
    Compute-only: equal power frozen, projected gradient over compute.
    Every scheme is re-scored under the penalized LQR total (lqr_total).
    """
    evaluator = JointEvaluator(problem)
    n = evaluator.n
    p_tot, f_tot = problem.total_power_w, problem.total_compute_cps
    objective = _scaled_objective(evaluator, p_tot, f_tot)

    if problem.scheme == MultiLoopScheme.MAX_THROUGHPUT_JOINT:
        power = water_fill_power(evaluator, p_tot)
        compute = np.full(n, f_tot / n)  # uplink loads are identical per robot
        throughput = float(evaluator.rates_bps(power).sum())
        trace = SolverTrace(iterations=1, converged=True, method="water_filling")
        return _multi_result(evaluator, power, compute, throughput, trace)

    if problem.scheme == MultiLoopScheme.COMPUTE_ONLY_EQUAL_COMM:
        power = np.full(n, p_tot / n)
        rng = np.random.default_rng(seed)
        starts = [np.concatenate([power / p_tot, np.full(n, 1.0 / n)])]
        while len(starts) < restarts:
            starts.append(np.concatenate([power / p_tot, rng.dirichlet(np.ones(n))]))
        best, best_idx, iters, any_conv = None, 0, 0, False
        for i, z0 in enumerate(starts):
            res = _projected_gradient(objective, z0, n, optimize_power=False,
                                      max_iter=max_iter)
            iters += res.iterations
            any_conv = any_conv or res.converged
            if best is None or res.value < best.value:
                best, best_idx = res, i
        compute = best.z[n:] * f_tot
        trace = SolverTrace(iterations=iters, converged=any_conv,
                            restarts=len(starts), best_restart=best_idx,
                            method="projected_gradient_compute_only")
        return _multi_result(evaluator, power, compute, best.value, trace)

    starts = _task_starts(evaluator, p_tot, f_tot, restarts, seed, extra_starts)
    best, best_idx, iters, any_conv = None, 0, 0, False
    for i, z0 in enumerate(starts):
        res = _projected_gradient(objective, z0, n, max_iter=max_iter)
        iters += res.iterations
        any_conv = any_conv or res.converged
        if best is None or res.value < best.value:
            best, best_idx = res, i
    power = best.z[:n] * p_tot
    compute = best.z[n:] * f_tot
    trace = SolverTrace(iterations=iters, converged=any_conv, restarts=len(starts),
                        best_restart=best_idx, method="projected_gradient")
    return _multi_result(evaluator, power, compute, best.value, trace)


def _multi_result(evaluator: JointEvaluator, power: np.ndarray, compute: np.ndarray,
                  objective_value: float, trace: SolverTrace) -> AllocationResult:
    problem = evaluator.problem
    assert power.min() >= 0.0 and compute.min() >= 0.0
    assert power.sum() <= problem.total_power_w * (1.0 + 1e-9)
    assert compute.sum() <= problem.total_compute_cps * (1.0 + 1e-9)
    lqr_total = float(evaluator.total_cost(power, compute))
    outcomes = evaluator.outcomes(power, compute)
    if all(o.lqr_cost is INFEASIBLE for o in outcomes) and not trace.all_infeasible:
        trace = SolverTrace(iterations=trace.iterations, converged=trace.converged,
                            restarts=trace.restarts, best_restart=trace.best_restart,
                            fallback_dense_grid=trace.fallback_dense_grid,
                            all_infeasible=True, method=trace.method)
    return AllocationResult(
        decision={"power_w": power.copy(), "compute_cps": compute.copy()},
        per_loop_outcomes=outcomes,
        objective_value=float(objective_value),
        lqr_total=lqr_total,
        solver_trace=trace,
    )


def sweep_contour(problem: MultiLoopProblem, power_grid, compute_grid, *,
                  seed: int = 0, restarts: int = 6, trace_out: list | None = None) -> np.ndarray:
    """Optimal task-oriented LQR total over a (power, compute) budget grid.

    Entry (i, j) solves the joint problem at power_grid[i], compute_grid[j].
    Cells are visited in ascending budget order and warm-started from their
    lower-power and lower-compute neighbours, which also guarantees the
    matrix is non-increasing along both axes. Per-cell solver traces are
    appended to trace_out when given.
    """
    power_grid = np.asarray(power_grid, dtype=float)
    compute_grid = np.asarray(compute_grid, dtype=float)
    for name, grid in (("power_grid", power_grid), ("compute_grid", compute_grid)):
        if grid.size == 0:
            raise ValueError(f"{name} must be non-empty")
        if np.any(grid <= 0.0):
            raise ValueError(f"{name} must be positive")
        if np.any(np.diff(grid) <= 0.0):
            raise ValueError(f"{name} must be strictly ascending")

    matrix = np.empty((power_grid.size, compute_grid.size))
    decisions = {}
    for i, p_tot in enumerate(power_grid):
        for j, f_tot in enumerate(compute_grid):
            cell = MultiLoopProblem(
                robots=problem.robots, total_power_w=float(p_tot),
                total_compute_cps=float(f_tot), budget=problem.budget,
                scheme=MultiLoopScheme.TASK_ORIENTED_JOINT,
                uplink_fixed_bits=problem.uplink_fixed_bits)
            extra = []
            if i > 0:
                extra.append(decisions[(i - 1, j)])
            if j > 0:
                extra.append(decisions[(i, j - 1)])
            result = solve_multi_loop(cell, seed=seed, restarts=restarts,
                                      extra_starts=extra)
            matrix[i, j] = result.lqr_total
            decisions[(i, j)] = result.decision
            if trace_out is not None:
                trace_out.append(result.solver_trace)
    return matrix


# ---------------------------------------------------------------------------
# brute-force oracles
# ---------------------------------------------------------------------------

def grid_oracle(problem, resolution: int) -> AllocationResult:
    """Exhaustive grid argmin/argmax for optimizer validation (tests only).

    Single-loop problems scan b_up; two-robot joint problems scan the
    (power_1, compute_1) plane with the complements pinned to the budget
    (the objective is non-increasing in resources, so an optimum lies on
    the budget boundary). Larger decision spaces are refused.
    """
    if resolution < 1:
        raise ValueError("resolution must be >= 1")
    if isinstance(problem, SingleLoopProblem):
        model = RateCostModel.from_plant(problem.plant)
        fn = _single_objective_fn(problem, model)
        b_tot = problem.total_bandwidth_hz
        delta = 1e-6 * b_tot
        grid = np.linspace(delta, b_tot - delta, resolution)
        vals = [fn(float(b)) for b in grid]
        i = int(np.argmin(vals))
        outcome = _cycle_at(problem, model, float(grid[i]))
        return AllocationResult(
            decision={"bandwidth_up_hz": float(grid[i]),
                      "bandwidth_down_hz": b_tot - float(grid[i])},
            per_loop_outcomes=(outcome,),
            objective_value=vals[i],
            lqr_total=_penalized_cost(model, outcome.effective_bits_per_cycle),
            solver_trace=SolverTrace(iterations=resolution, converged=True,
                                     method="grid_oracle"),
        )
    if not isinstance(problem, MultiLoopProblem):
        raise TypeError(f"unsupported problem type {type(problem)!r}")
    n = len(problem.robots)
    if 2 * n > 4:
        raise DimensionTooLargeError(
            f"joint oracle supports at most 2 robots, got {n}")
    evaluator = JointEvaluator(problem)
    if n == 1:
        power = np.array([problem.total_power_w])
        compute = np.array([problem.total_compute_cps])
        value = float(evaluator.total_cost(power, compute))
        return _multi_result(evaluator, power, compute, value,
                             SolverTrace(iterations=1, converged=True, method="grid_oracle"))
    p1 = np.linspace(0.0, problem.total_power_w, resolution)
    f1 = np.linspace(0.0, problem.total_compute_cps, resolution)
    pp, ff = np.meshgrid(p1, f1, indexing="ij")
    powers = np.stack([pp, problem.total_power_w - pp], axis=-1)
    computes = np.stack([ff, problem.total_compute_cps - ff], axis=-1)
    totals = evaluator.total_cost(powers, computes)
    i, j = np.unravel_index(int(np.argmin(totals)), totals.shape)
    power = powers[i, j]
    compute = computes[i, j]
    return _multi_result(evaluator, power, compute, float(totals[i, j]),
                         SolverTrace(iterations=resolution * resolution, converged=True,
                                     method="grid_oracle"))
