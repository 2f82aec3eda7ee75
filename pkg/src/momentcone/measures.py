"""Atomic measures on boxes: moment generation and grid-based recovery.

Recovery matches a truncated moment vector by nonnegative weights on a
uniform grid inside the box; at desk scale that is enough to exhibit a
representing measure whenever one exists.  The box itself is derived from
the weight vector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .moments import MomentSequence
from .nnls import nnls_bb
from .norms import WeightSpec
from .polyring import MultiIndex, iter_simplex

# Recovered grid weights at or below this threshold are treated as absent.
SUPPORT_THRESHOLD = 1e-10


@dataclass(frozen=True)
class AtomicMeasure:
    """Finitely many atoms with nonnegative weights.

    Canonical form merges duplicate atoms (summing their weights), drops
    exact-zero weights and sorts atoms lexicographically.
    """

    atoms: tuple[tuple[float, ...], ...]
    weights: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.atoms) != len(self.weights):
            raise ValueError("atoms and weights must have the same length")
        merged: dict[tuple[float, ...], float] = {}
        dim = None
        for atom, weight in zip(self.atoms, self.weights):
            point = tuple(float(v) for v in atom)
            if dim is None:
                dim = len(point)
            elif len(point) != dim:
                raise ValueError("all atoms must share one dimension")
            weight = float(weight)
            if weight < 0.0:
                raise ValueError(f"negative weight {weight}")
            merged[point] = merged.get(point, 0.0) + weight
        pairs = sorted((p, w) for p, w in merged.items() if w != 0.0)
        object.__setattr__(self, "atoms", tuple(p for p, _ in pairs))
        object.__setattr__(self, "weights", tuple(w for _, w in pairs))

    @property
    def n(self) -> int:
        if not self.atoms:
            raise ValueError("empty measure has no dimension")
        return len(self.atoms[0])

    @property
    def mass(self) -> float:
        return math.fsum(self.weights)

    def integrate_monomial(self, alpha: MultiIndex) -> float:
        terms = []
        for point, weight in zip(self.atoms, self.weights):
            mono = 1.0
            for x, a in zip(point, alpha):
                if a:
                    mono *= x ** a
            terms.append(weight * mono)
        return math.fsum(terms)


@dataclass(frozen=True)
class BoxSpec:
    """An axis-aligned box symmetric about the origin."""

    lower: tuple[float, ...]
    upper: tuple[float, ...]

    def __post_init__(self) -> None:
        lower = tuple(float(v) for v in self.lower)
        upper = tuple(float(v) for v in self.upper)
        if len(lower) != len(upper) or not lower:
            raise ValueError("lower and upper bounds must be nonempty and match")
        for lo, hi in zip(lower, upper):
            if not lo < hi:
                raise ValueError("each lower bound must be below the upper bound")
            if lo != -hi:
                raise ValueError("box must be symmetric about the origin")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def from_halfwidths(cls, halfwidths) -> BoxSpec:
        c = tuple(float(v) for v in halfwidths)
        return cls(tuple(-v for v in c), c)

    @property
    def n(self) -> int:
        return len(self.lower)

    def contains(self, point, tol: float = 0.0) -> bool:
        return all(
            lo - tol <= float(x) <= hi + tol
            for x, lo, hi in zip(point, self.lower, self.upper)
        )


def box_from_weight(w: WeightSpec) -> BoxSpec:
    """The box matched to a weight spec: halfwidth r_i^(1/p) for p < inf and
    r_i for p = inf."""
    if w.p == math.inf:
        half = w.r
    else:
        half = tuple(v ** (1.0 / float(w.p)) for v in w.r)
    return BoxSpec.from_halfwidths(half)


def moments_of_measure(mu: AtomicMeasure, max_degree: int) -> MomentSequence:
    """Moment sequence s(alpha) = sum_j w_j x_j^alpha up to max_degree."""
    if max_degree < 0:
        raise ValueError("max_degree must be >= 0")
    n = mu.n
    values = {alpha: mu.integrate_monomial(alpha) for alpha in iter_simplex(n, max_degree)}
    return MomentSequence(n, max_degree, values)


@dataclass(frozen=True)
class RecoveryResult:
    measure: AtomicMeasure
    residual: float
    success: bool
    iterations: int
    grid_per_axis: int
    box: BoxSpec


def _grid_points(box: BoxSpec, grid_m: int) -> np.ndarray:
    axes = [np.linspace(lo, hi, grid_m) for lo, hi in zip(box.lower, box.upper)]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.reshape(-1) for m in mesh], axis=1)


def _polish_support(a: np.ndarray, b: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Refit the discovered support by plain least squares.

    Gradient iterations smear a point mass over neighbouring grid columns;
    refitting on the support (shrinking it while negative coefficients
    appear) snaps the weights back.  Deterministic, and only ever adopted by
    the caller when it lowers the residual.
    """
    support = list(np.flatnonzero(weights > SUPPORT_THRESHOLD))
    best = weights
    best_res = float(np.linalg.norm(a @ weights - b))
    for _ in range(len(support)):
        if not support:
            break
        coeffs, *_ = np.linalg.lstsq(a[:, support], b, rcond=None)
        if float(coeffs.min()) >= -1e-12:
            candidate = np.zeros_like(weights)
            candidate[support] = np.maximum(coeffs, 0.0)
            res = float(np.linalg.norm(a @ candidate - b))
            if res <= best_res:
                return candidate
            break
        support.pop(int(np.argmin(coeffs)))
    return best


def recover_measure(
    s: MomentSequence,
    box: BoxSpec,
    grid_m: int,
    tol: float = 1e-6,
    max_iter: int = 20000,
) -> RecoveryResult:
    """Search for an atomic measure on a uniform box grid matching s.

    Solves min ||A w - s||_2 over w >= 0 where the columns of A are the
    monomial vectors of the grid atoms, keeps the support with weight above
    SUPPORT_THRESHOLD, and reports the residual of the kept support.  Failure
    (residual above tol) signals a too-small box, too-coarse grid, or moments
    that no measure on the box can produce.

    Internally the box is rescaled to the unit cube (moments pick up a factor
    c^-alpha), which keeps the monomial columns well conditioned on wide
    boxes; atoms map back onto the original grid by index, and the reported
    residual is in the original, unscaled metric.
    """
    if box.n != s.n:
        raise ValueError(f"dimension mismatch: box has n={box.n}, moments have n={s.n}")
    if grid_m < 2:
        raise ValueError("need at least 2 grid points per axis")
    points = _grid_points(box, grid_m)
    unit_points = _grid_points(BoxSpec.from_halfwidths((1.0,) * s.n), grid_m)
    halfwidths = np.asarray(box.upper)
    indices = list(iter_simplex(s.n, s.max_degree))

    a = np.empty((len(indices), points.shape[0]))
    a_unit = np.empty_like(a)
    b = np.empty(len(indices))
    b_unit = np.empty(len(indices))
    for i, alpha in enumerate(indices):
        exps = np.asarray(alpha, dtype=float)
        a[i] = np.prod(points ** exps, axis=1)
        a_unit[i] = np.prod(unit_points ** exps, axis=1)
        b[i] = s.values[alpha]
        b_unit[i] = b[i] / float(np.prod(halfwidths ** exps))

    col_scale = np.linalg.norm(a_unit, axis=0)
    col_scale[col_scale == 0.0] = 1.0
    y, _, iterations = nnls_bb(a_unit / col_scale, b_unit, max_iter=max_iter)
    weights = y / col_scale

    unit_residual = float(np.linalg.norm(a_unit @ weights - b_unit))
    if unit_residual > 1e-10 * max(1.0, float(np.linalg.norm(b_unit))):
        weights = _polish_support(a_unit, b_unit, weights)

    mask = weights > SUPPORT_THRESHOLD
    kept = weights[mask]
    kept_points = points[mask]
    residual = float(np.linalg.norm(a[:, mask] @ kept - b)) if mask.any() else float(
        np.linalg.norm(b)
    )
    measure = AtomicMeasure(
        tuple(tuple(p) for p in kept_points),
        tuple(kept),
    )
    return RecoveryResult(
        measure=measure,
        residual=residual,
        success=residual <= tol,
        iterations=iterations,
        grid_per_axis=grid_m,
        box=box,
    )


@dataclass(frozen=True)
class VerificationReport:
    per_index: Mapping[MultiIndex, float]
    max_residual: float
    atoms_in_box: bool | None
    passed: bool


def verify_representation(
    s: MomentSequence,
    mu: AtomicMeasure,
    box: BoxSpec | None = None,
    tol: float = 1e-9,
) -> VerificationReport:
    """Compare the moments of mu against s index by index.

    Reports |s(alpha) - sum_j w_j x_j^alpha| for every stored alpha, the worst
    deviation, and (when a box is supplied) whether every atom lies inside it.
    """
    if mu.atoms and mu.n != s.n:
        raise ValueError(f"dimension mismatch: measure has n={mu.n}, moments have n={s.n}")
    per_index = {
        alpha: abs(value - mu.integrate_monomial(alpha))
        for alpha, value in s.sorted_values()
    }
    max_residual = max(per_index.values(), default=0.0)
    atoms_in_box = None
    if box is not None:
        atoms_in_box = all(box.contains(p) for p in mu.atoms)
    passed = max_residual <= tol and atoms_in_box is not False
    return VerificationReport(per_index, max_residual, atoms_in_box, passed)


def measure_to_dict(mu: AtomicMeasure) -> dict:
    """JSON-ready form mirroring the AtomicMeasure fields."""
    return {
        "atoms": [list(p) for p in mu.atoms],
        "weights": list(mu.weights),
    }


def measure_from_dict(data: dict) -> AtomicMeasure:
    if not isinstance(data, dict) or not {"atoms", "weights"} <= set(data):
        raise ValueError('measure JSON must be {"atoms": [...], "weights": [...]}')
    return AtomicMeasure(
        tuple(tuple(float(x) for x in p) for p in data["atoms"]),
        tuple(float(v) for v in data["weights"]),
    )
