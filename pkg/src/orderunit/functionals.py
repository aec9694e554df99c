"""Concrete weakly additive functionals and the checkers for their laws.

A functional here is a map from a space to the reals with a declared kind.
The interesting ones commute with shifts along the order unit,

    f(x + lam * unit) = f(x) + lam * f(unit),

("weak additivity") and may or may not respect the cone order.  The package
ships four closed-form kinds:

* ``linear``    -- a weight vector, the classical case;
* ``choquet``   -- the sorted-sum aggregation against a capacity;
* ``maxplus``   -- idempotent aggregation ``max_i (w_i + x_i)``;
* ``sqrt_gap``  -- the 2-d half-sum plus square-rooted coordinate gap,
  the stock example of a weakly additive, positive functional that is
  *not* order-preserving;

plus ``extended`` (produced by :mod:`orderunit.extension`) and ``custom``
(an arbitrary evaluation hook, mainly for counterexamples in tests).

Choquet and max-plus aggregation act on coordinates, so their weak
additivity is relative to a constant-vector unit (the usual orthant with an
all-ones unit, up to scale).  On other units the checkers will simply
report the failure.

All ``check_*`` operations are sampling-based with a seeded generator and
return a :class:`PropertyReport`; a failed report always carries a
reproducible witness.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import sampling
from .spaces import TOL, OrderedSpace, as_vec, order_norm


@dataclass(frozen=True, eq=False)
class Capacity:
    """Monotone set function on ``{0, .., n-1}`` with ``v(empty) = 0``.

    ``values`` has length ``2**n`` and is indexed by subset bitmask.
    Monotonicity is *not* enforced at construction (several checks exist to
    expose what breaks without it); query it with :meth:`is_monotone`.
    """

    n: int
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "n", int(self.n))
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (2**self.n,):
            raise ValueError(f"capacity on {self.n} points needs {2**self.n} values, got {vals.shape}")
        if abs(vals[0]) > TOL:
            raise ValueError("capacity must vanish on the empty set")
        if np.any(vals < -TOL):
            raise ValueError("capacity values must be nonnegative")
        object.__setattr__(self, "values", vals)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    @property
    def total(self) -> float:
        """Value on the full ground set."""
        return float(self.values[self.full_mask])

    def monotonicity_witness(self, tol: float = TOL):
        """A covering pair ``(S minus {i}, S)`` with decreasing value, or None."""
        for mask in range(1, 2**self.n):
            for i in range(self.n):
                if mask & (1 << i):
                    sub = mask & ~(1 << i)
                    if self.values[mask] < self.values[sub] - tol:
                        return sub, mask
        return None

    def is_monotone(self, tol: float = TOL) -> bool:
        return self.monotonicity_witness(tol) is None


def capacity_from_dict(n: int, subset_values: dict) -> Capacity:
    """Capacity from ``{bitmask: value}`` (missing masks default to 0)."""
    vals = np.zeros(2**n)
    for mask, v in subset_values.items():
        vals[int(mask)] = float(v)
    return Capacity(n=n, values=vals)


def capacity_from_json(obj: dict) -> Capacity:
    try:
        return capacity_from_dict(int(obj["n"]), obj["values"])
    except (KeyError, TypeError, IndexError) as exc:
        raise ValueError(f"bad capacity descriptor: {exc}") from exc


def capacity_to_json(cap: Capacity) -> dict:
    return {
        "n": cap.n,
        "values": {str(mask): float(v) for mask, v in enumerate(cap.values) if mask and v != 0.0},
    }


def sqrt_gap(x) -> float:
    """Half-sum plus square-rooted coordinate gap on the plane:
    ``(x1 + x2 + sqrt(|x2 - x1|)) / 2``."""
    v = as_vec(x, 2)
    return float(0.5 * (v[0] + v[1] + np.sqrt(abs(v[1] - v[0]))))


def choquet(cap: Capacity, x) -> float:
    """Sorted-sum aggregation of ``x`` against the capacity.

    With coordinates sorted ascending (ties broken by index) and ``A_i`` the
    index set of the ``n - i + 1`` largest coordinates:

        x_(1) * v(full) + sum_{i>=2} (x_(i) - x_(i-1)) * v(A_i)
    """
    v = as_vec(x, cap.n)
    order = np.argsort(v, kind="stable")
    xs = v[order]
    mask = cap.full_mask
    total = xs[0] * cap.values[mask]
    for i in range(1, cap.n):
        mask &= ~(1 << int(order[i - 1]))
        total += (xs[i] - xs[i - 1]) * cap.values[mask]
    return float(total)


def maxplus(weights, x) -> float:
    """Idempotent aggregation ``max_i (w_i + x_i)``."""
    w = np.asarray(weights, dtype=float)
    if w.size == 0:
        raise ValueError("maxplus requires at least one weight")
    v = as_vec(x, w.size)
    return float(np.max(w + v))


@dataclass(frozen=True, eq=False)
class Functional:
    """Evaluation map with a declared kind; immutable after construction.

    ``unit_value`` caches ``f(unit)``.  Use the ``*_functional`` helpers
    below rather than instantiating directly.
    """

    space: OrderedSpace
    kind: str
    weights: np.ndarray | None = None
    capacity: Capacity | None = None
    partial: object | None = None
    rule: str | None = None
    hook: Callable[[np.ndarray], float] | None = None
    unit_value: float = field(init=False)

    def __post_init__(self):
        if self.weights is not None:
            object.__setattr__(self, "weights", np.asarray(self.weights, dtype=float))
        object.__setattr__(self, "unit_value", evaluate(self, self.space.unit))

    def __call__(self, x) -> float:
        return evaluate(self, x)


def evaluate(f: Functional, x) -> float:
    """Kind-specific value of ``f`` at ``x``."""
    kind = f.kind
    if kind == "linear":
        return float(f.weights @ as_vec(x, f.space.dim))
    if kind == "sqrt_gap":
        return sqrt_gap(x)
    if kind == "choquet":
        return choquet(f.capacity, x)
    if kind == "maxplus":
        return maxplus(f.weights, x)
    if kind in ("extended", "custom"):
        return float(f.hook(as_vec(x, f.space.dim)))
    raise ValueError(f"unknown functional kind {kind!r}")


def linear_functional(space: OrderedSpace, weights) -> Functional:
    w = as_vec(weights, space.dim)
    return Functional(space=space, kind="linear", weights=w)


def sqrt_gap_functional(space: OrderedSpace) -> Functional:
    if space.dim != 2:
        raise ValueError("sqrt_gap is defined on 2-d spaces only")
    return Functional(space=space, kind="sqrt_gap")


def choquet_functional(space: OrderedSpace, cap: Capacity) -> Functional:
    if cap.n != space.dim:
        raise ValueError("capacity ground size must equal the space dimension")
    return Functional(space=space, kind="choquet", capacity=cap)


def maxplus_functional(space: OrderedSpace, weights) -> Functional:
    w = as_vec(weights, space.dim)
    if abs(np.max(w)) > TOL:
        warnings.warn(
            f"maxplus weights are not normalized (max = {np.max(w):g}, expected 0); "
            "the functional will not be normed at an all-ones unit",
            stacklevel=2,
        )
    return Functional(space=space, kind="maxplus", weights=w)


def custom_functional(space: OrderedSpace, hook: Callable[[np.ndarray], float]) -> Functional:
    return Functional(space=space, kind="custom", hook=hook)


@dataclass(frozen=True)
class PropertyReport:
    """Outcome of one sampled property check.

    ``witness`` is None on pass; on failure it reproduces the offending
    input(s) and the values both sides of the violated inequality took.
    """

    name: str
    passed: bool
    samples: int
    witness: dict | None = None

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "samples": self.samples,
            "witness": self.witness,
        }


def check_weak_additivity(
    f: Functional, samples=None, *, seed: int = 0, n: int = 2**14, tol: float = TOL
) -> PropertyReport:
    """Does ``f(x + lam*unit) - f(x) - lam*f(unit)`` vanish on the samples?"""
    if samples is None:
        samples = sampling.shift_samples(f.space, n, sampling.rng_from(seed))
    unit = f.space.unit
    fu = f.unit_value
    for x, lam in samples:
        defect = evaluate(f, x + lam * unit) - evaluate(f, x) - lam * fu
        if abs(defect) > tol:
            return PropertyReport(
                name="weak_additivity",
                passed=False,
                samples=len(samples),
                witness={"x": list(map(float, x)), "lam": float(lam), "defect": float(defect)},
            )
    return PropertyReport(name="weak_additivity", passed=True, samples=len(samples))


def check_order_preserving(
    f: Functional, pairs=None, *, seed: int = 0, n: int = 2**14, tol: float = TOL
) -> PropertyReport:
    """Does ``x <= y`` imply ``f(x) <= f(y)`` on the sampled comparable pairs?"""
    if pairs is None:
        pairs = sampling.comparable_pairs(f.space, n, sampling.rng_from(seed))
    for x, y in pairs:
        fx, fy = evaluate(f, x), evaluate(f, y)
        if fx > fy + tol:
            return PropertyReport(
                name="order_preserving",
                passed=False,
                samples=len(pairs),
                witness={
                    "x": list(map(float, x)),
                    "y": list(map(float, y)),
                    "f_x": float(fx),
                    "f_y": float(fy),
                },
            )
    return PropertyReport(name="order_preserving", passed=True, samples=len(pairs))


def check_normed(f: Functional, tol: float = TOL) -> PropertyReport:
    """Is ``f(unit) = 1``?"""
    ok = bool(abs(f.unit_value - 1.0) <= tol)
    return PropertyReport(
        name="normed",
        passed=ok,
        samples=1,
        witness=None if ok else {"unit_value": float(f.unit_value)},
    )


def check_positive(
    f: Functional, samples=None, *, seed: int = 0, n: int = 2**12, tol: float = TOL
) -> PropertyReport:
    """Is ``f`` nonnegative on the sampled cone points?"""
    if samples is None:
        samples = sampling.cone_points(f.space, n, sampling.rng_from(seed))
    for x in samples:
        fx = evaluate(f, x)
        if fx < -tol:
            return PropertyReport(
                name="positive",
                passed=False,
                samples=len(samples),
                witness={"x": list(map(float, x)), "f_x": float(fx)},
            )
    return PropertyReport(name="positive", passed=True, samples=len(samples))


def bound(f: Functional) -> float:
    """Supremum of ``|f|`` over the open unit ball.

    For a weakly additive, order-preserving ``f`` this equals ``f(unit)``
    exactly, so no sampling is needed; the Monte-Carlo estimate lives in the
    test suite as the independent cross-check.
    """
    return float(f.unit_value)


def lipschitz_defect(f: Functional, pairs=None, *, seed: int = 0, n: int = 2**12) -> float:
    """Worst ``|f(z) - f(y)| - f(unit) * order_norm(z - y)`` over the pairs.

    Weakly additive order-preserving functionals are Lipschitz with constant
    ``f(unit)`` in the order norm, so the defect stays below tolerance.
    """
    if pairs is None:
        rng = sampling.rng_from(seed)
        xs = sampling.box_points(f.space, n, rng)
        ys = sampling.box_points(f.space, n, rng)
        pairs = list(zip(xs, ys))
    fu = f.unit_value
    worst = -np.inf
    for y, z in pairs:
        defect = abs(evaluate(f, z) - evaluate(f, y)) - fu * order_norm(f.space, z - y)
        worst = max(worst, defect)
    return float(worst)


def functional_from_json(space: OrderedSpace, obj: dict) -> Functional:
    """Build from ``{"kind": ..., "weights": [...] | "capacity": {...}}``."""
    try:
        kind = obj["kind"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"bad functional descriptor: {exc}") from exc
    if kind == "linear":
        return linear_functional(space, obj["weights"])
    if kind == "sqrt_gap":
        return sqrt_gap_functional(space)
    if kind == "choquet":
        return choquet_functional(space, capacity_from_json(obj["capacity"]))
    if kind == "maxplus":
        return maxplus_functional(space, obj["weights"])
    raise ValueError(f"unknown functional kind {kind!r}")


def functional_to_json(f: Functional) -> dict:
    if f.kind in ("linear", "maxplus"):
        return {"kind": f.kind, "weights": f.weights.tolist()}
    if f.kind == "sqrt_gap":
        return {"kind": "sqrt_gap"}
    if f.kind == "choquet":
        return {"kind": "choquet", "capacity": capacity_to_json(f.capacity)}
    raise ValueError(f"functional kind {f.kind!r} has no descriptor form")
