"""Discrete-time plant model, Riccati solution, and rate-limited LQR cost.

The central objects are a linear plant x' = a x + b u + w with quadratic
state/input weights, and the cost-vs-information-rate curve built on top of
its Riccati solution: below the data-rate threshold (rate <= sum of
log2 |unstable eigenvalues| per step) no finite cost exists, above it the
cost decays toward the full-information optimum as the rate grows.
"""
import math
from dataclasses import dataclass, field

import numpy as np


class NonConvergentError(RuntimeError):
    """Riccati iteration failed to converge (non-stabilizable or ill-conditioned)."""


class UnsupportedPlantError(ValueError):
    """Plant structure outside the supported scalar / diagonal families."""


class _Infeasible:
    """Distinguished return value: requested rate is below the data-rate threshold.

    A singleton, not an exception, so optimizers can apply penalty logic
    explicitly.
    """
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Infeasible"


INFEASIBLE = _Infeasible()


def is_infeasible(cost) -> bool:
    return cost is INFEASIBLE


def cost_as_float(cost) -> float:
    """Numeric view of an lqr_cost result; Infeasible maps to +inf."""
    return math.inf if cost is INFEASIBLE else float(cost)


def _as_matrix(x) -> np.ndarray:
    return np.atleast_2d(np.asarray(x, dtype=float))


def _check_psd(m: np.ndarray, name: str, strict: bool = False) -> None:
    if not np.allclose(m, m.T, rtol=1e-10, atol=1e-12):
        raise ValueError(f"{name} must be symmetric")
    eigs = np.linalg.eigvalsh(m)
    if strict:
        if eigs.min() <= 0.0:
            raise ValueError(f"{name} must be positive definite")
    elif eigs.min() < -1e-10 * max(1.0, abs(eigs.max())):
        raise ValueError(f"{name} must be positive semidefinite")


@dataclass(frozen=True, eq=False)
class Plant:
    """Discrete-time linear plant with LQR weights.

    a, b may be scalars or square matrices (b: state x input). w_cov and q
    must be PSD, r_u positive definite. One control step per sample period.
    """
    a: object
    b: object
    w_cov: object
    q: object
    r_u: object
    sample_period_s: float

    def __post_init__(self):
        if self.sample_period_s <= 0.0:
            raise ValueError(f"sample period must be positive, got {self.sample_period_s}")
        a = _as_matrix(self.a)
        b = _as_matrix(self.b)
        n = a.shape[0]
        m = b.shape[1]
        if a.shape != (n, n):
            raise ValueError(f"a must be square, got shape {a.shape}")
        if b.shape[0] != n:
            raise ValueError(f"b must have {n} rows, got shape {b.shape}")
        for name, want in (("w_cov", (n, n)), ("q", (n, n)), ("r_u", (m, m))):
            if _as_matrix(getattr(self, name)).shape != want:
                raise ValueError(f"{name} must have shape {want}")
        _check_psd(_as_matrix(self.w_cov), "w_cov")
        _check_psd(_as_matrix(self.q), "q")
        _check_psd(_as_matrix(self.r_u), "r_u", strict=True)

    @property
    def is_scalar(self) -> bool:
        return _as_matrix(self.a).shape == (1, 1)

    def scalars(self) -> tuple:
        """(a, b, w, q, r) as floats; only valid for scalar plants."""
        if not self.is_scalar:
            raise UnsupportedPlantError("plant is not scalar")
        return (float(_as_matrix(self.a)[0, 0]), float(_as_matrix(self.b)[0, 0]),
                float(_as_matrix(self.w_cov)[0, 0]), float(_as_matrix(self.q)[0, 0]),
                float(_as_matrix(self.r_u)[0, 0]))

    def diagonal_modes(self) -> list:
        """Per-mode (a_i, b_i, w_i, q_i, r_i) tuples for diagonal plants.

        Raises UnsupportedPlantError when any of a, b, w_cov, q, r_u has an
        off-diagonal entry (coupled MIMO plants are out of scope).
        """
        mats = {name: _as_matrix(getattr(self, name)) for name in ("a", "b", "w_cov", "q", "r_u")}
        n = mats["a"].shape[0]
        for name, m in mats.items():
            if m.shape != (n, n):
                raise UnsupportedPlantError(f"{name} must be {n}x{n} for mode decomposition")
            if not np.allclose(m, np.diag(np.diag(m)), atol=1e-12):
                raise UnsupportedPlantError(f"{name} has off-diagonal coupling")
        return [tuple(float(mats[k][i, i]) for k in ("a", "b", "w_cov", "q", "r_u"))
                for i in range(n)]


def dare_solve(plant: Plant, tol: float = 1e-12, max_iter: int = 10000) -> np.ndarray:
    """Cost-to-go matrix S of the discrete algebraic Riccati equation.

    Fixed-point iteration of
        S <- A' S A - A' S B (R + B' S B)^-1 B' S A + Q
    from S0 = Q, stopped when the relative update falls below tol.

    Raises:
        NonConvergentError: no convergence within max_iter iterations.
    """
    a = _as_matrix(plant.a)
    b = _as_matrix(plant.b)
    q = _as_matrix(plant.q)
    r = _as_matrix(plant.r_u)
    def step(s):
        bsb = r + b.T @ s @ b
        s_next = a.T @ s @ a - a.T @ s @ b @ np.linalg.solve(bsb, b.T @ s @ a) + q
        return 0.5 * (s_next + s_next.T)

    s = q.copy()
    for _ in range(max_iter):
        s_next = step(s)
        denom = np.linalg.norm(s)
        delta = np.linalg.norm(s_next - s)
        if not (np.isfinite(delta) and np.isfinite(denom)):
            raise NonConvergentError(
                "Riccati iteration diverged (plant is not stabilizable)")
        s = s_next
        if delta <= tol * max(denom, 1e-300):
            # polish: linear convergence means a few extra sweeps push the
            # fixed-point defect well below the stopping threshold
            for _ in range(5):
                s = step(s)
            return s
    raise NonConvergentError(
        f"Riccati iteration did not converge within {max_iter} iterations "
        "(plant may not be stabilizable)")


def dare_residual(plant: Plant, s: np.ndarray) -> float:
    """Norm of the DARE residual for a candidate solution S."""
    a = _as_matrix(plant.a)
    b = _as_matrix(plant.b)
    q = _as_matrix(plant.q)
    r = _as_matrix(plant.r_u)
    bsb = r + b.T @ s @ b
    rhs = a.T @ s @ a - a.T @ s @ b @ np.linalg.solve(bsb, b.T @ s @ a) + q
    return float(np.linalg.norm(rhs - s))


def intrinsic_entropy_rate(plant: Plant) -> float:
    """Uncertainty production rate of the plant in bit/s.

    Sum of log2 |eigenvalue| over unstable eigenvalues (|lambda| > 1),
    divided by the sample period. Zero for stable plants.
    """
    eigs = np.linalg.eigvals(_as_matrix(plant.a))
    bits_per_step = sum(math.log2(abs(ev)) for ev in eigs if abs(ev) > 1.0)
    return bits_per_step / plant.sample_period_s


def is_stabilizable_at(plant: Plant, cner_bps: float) -> bool:
    """Whether an information rate of cner_bps suffices for stability.

    Strict test cner > intrinsic entropy rate; stable plants (zero entropy
    rate) need no information and return True for any cner >= 0.
    """
    if cner_bps < 0.0:
        raise ValueError(f"cner must be non-negative, got {cner_bps}")
    h = intrinsic_entropy_rate(plant)
    if h == 0.0:
        return True
    return cner_bps > h


def cner_bps(effective_bits_per_cycle: float, cycle_period_s: float) -> float:
    """Closed-loop neg-entropy rate: delivered command bits per unit time."""
    if effective_bits_per_cycle < 0.0:
        raise ValueError(f"effective bits must be non-negative, got {effective_bits_per_cycle}")
    if cycle_period_s <= 0.0:
        raise ValueError(f"cycle period must be positive, got {cycle_period_s}")
    return effective_bits_per_cycle / cycle_period_s


def _scalar_mode_model(a: float, b: float, w: float, q: float, r: float,
                       tol: float, max_iter: int) -> tuple:
    """(s, j_ideal, sensitivity) for one scalar mode."""
    mode = Plant(a=a, b=b, w_cov=w, q=q, r_u=r, sample_period_s=1.0)
    s = float(dare_solve(mode, tol=tol, max_iter=max_iter)[0, 0])
    k = a * b * s / (r + b * b * s)
    sens = k * k * (r + b * b * s)
    return s, s * w, sens


@dataclass(frozen=True, eq=False)
class RateCostModel:
    """Plant plus cached Riccati quantities for the rate-limited cost.

    j_ideal is the full-information optimum; sensitivity converts residual
    state-estimate variance into extra cost. Both are derived from the plant
    and must always match recomputation.
    """
    plant: Plant
    j_ideal: float
    sensitivity: object
    mode_params: tuple = field(repr=False)

    @classmethod
    def from_plant(cls, plant: Plant, tol: float = 1e-12, max_iter: int = 10000) -> "RateCostModel":
        if plant.is_scalar:
            modes = [plant.scalars()]
        else:
            modes = plant.diagonal_modes()
        per_mode = [
            _scalar_mode_model(a, b, w, q, r, tol, max_iter) + (a, w)
            for (a, b, w, q, r) in modes
        ]
        j_ideal = sum(m[1] for m in per_mode)
        sens = [m[2] for m in per_mode]
        sensitivity = sens[0] if len(sens) == 1 else np.asarray(sens)
        return cls(plant=plant, j_ideal=j_ideal, sensitivity=sensitivity,
                   mode_params=tuple((m[3], m[4], m[2], m[1]) for m in per_mode))

    def lqr_gain(self) -> float:
        """Scalar LQR feedback gain k = a b S / (r + b^2 S)."""
        a, b, _, _, r = self.plant.scalars()
        s = float(dare_solve(self.plant)[0, 0])
        return a * b * s / (r + b * b * s)


def _mode_cost(a: float, w: float, sens: float, j_ideal: float, rate_bits: float):
    if rate_bits >= 500.0:  # 4^500 < float max; beyond that the residual term is zero anyway
        return j_ideal
    gap = 4.0 ** rate_bits - a * a
    if gap <= 0.0:
        return INFEASIBLE
    return j_ideal + sens * w / gap


def _mode_cost_derivative_rate(a: float, w: float, sens: float, deriv_mag: float) -> float:
    """Rate r at which |dJ/dr| equals deriv_mag, clamped at 0 (water-filling)."""
    # |dJ/dr| = sens*w*ln4 * y / (y - a^2)^2 with y = 4^r; solve for y.
    c = sens * w * math.log(4.0)
    if c == 0.0:
        return 0.0
    a2 = a * a
    # deriv_mag * (y - a2)^2 = c * y  ->  deriv_mag*y^2 - (2 deriv_mag a2 + c) y + deriv_mag a2^2 = 0
    bq = 2.0 * deriv_mag * a2 + c
    disc = bq * bq - 4.0 * deriv_mag * deriv_mag * a2 * a2
    y = (bq + math.sqrt(max(disc, 0.0))) / (2.0 * deriv_mag)
    r = math.log(y, 4.0) if y > 0.0 else 0.0
    return max(r, 0.0)


def _split_bits_across_modes(model: RateCostModel, total_bits: float):
    """Optimal per-mode bit allocation by water-filling on the marginal cost.

    Each mode's cost is convex decreasing in its rate, so equalizing the
    marginal |dJ/dr| across modes (subject to r_i >= 0) is optimal. Returns
    None when the total is at or below the sum of per-mode thresholds.
    """
    modes = model.mode_params  # (a, w, sens, j_ideal_mode)
    mandatory = sum(max(math.log2(abs(a)), 0.0) for a, _, _, _ in modes)
    if total_bits <= mandatory:
        return None
    lo, hi = 1e-300, 1e300

    def rate_sum(deriv_mag: float) -> float:
        return sum(_mode_cost_derivative_rate(a, w, sens, deriv_mag)
                   for a, w, sens, _ in modes)

    for _ in range(200):
        mid = math.sqrt(lo * hi)
        if rate_sum(mid) > total_bits:
            lo = mid
        else:
            hi = mid
    lam = math.sqrt(lo * hi)
    rates = [_mode_cost_derivative_rate(a, w, sens, lam) for a, w, sens, _ in modes]
    scale = total_bits / sum(rates) if sum(rates) > 0 else 1.0
    return [r * scale for r in rates]


def lqr_cost(model: RateCostModel, rate_bits_per_step: float):
    """Rate-limited LQR cost J(R), or INFEASIBLE below the data-rate threshold.

    Scalar plants: J(R) = j_ideal + sensitivity * w_cov / (2^(2R) - a^2)
    whenever 2^(2R) > a^2, else INFEASIBLE. Diagonal plants split the bits
    optimally across modes. Strictly decreasing and convex in R on the
    feasible domain, with J -> j_ideal as R -> infinity.
    """
    if rate_bits_per_step < 0.0:
        raise ValueError(f"rate must be non-negative, got {rate_bits_per_step}")
    modes = model.mode_params
    if len(modes) == 1:
        a, w, sens, j_id = modes[0]
        return _mode_cost(a, w, sens, j_id, rate_bits_per_step)
    split = _split_bits_across_modes(model, rate_bits_per_step)
    if split is None:
        return INFEASIBLE
    total = 0.0
    for (a, w, sens, j_id), r in zip(modes, split):
        c = _mode_cost(a, w, sens, j_id, r)
        if c is INFEASIBLE:
            return INFEASIBLE
        total += c
    return total
