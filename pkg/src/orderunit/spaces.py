"""Finite-dimensional partially ordered vector spaces carrying an order unit.

A space is a polyhedral cone in half-space form together with a distinguished
interior point, the order unit.  Everything else is derived from the rows:
the partial order, the order norm, its neighbourhood balls, and the ray
thresholds used by the extension machinery.  Every predicate reduces to sign
tests on a handful of inner products, shared tolerance ``TOL``.

Construction is total: a unit sitting on the cone boundary or an unpointed
row set does not raise, it is reported by :func:`validate_space`.  This keeps
diagnostic tooling able to load and inspect defective descriptors.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

TOL = 1e-9
"""Comparison tolerance for all cone/order predicates in the package.

Boundary points count as members of the cone but not of its interior.
"""


def as_vec(x, dim: int) -> np.ndarray:
    """Coerce ``x`` to a float vector of length ``dim``, or raise ValueError."""
    v = np.asarray(x, dtype=float)
    if v.shape != (dim,):
        raise ValueError(
            f"dimension mismatch: expected a vector of length {dim}, got shape {v.shape}"
        )
    return v


@dataclass(frozen=True, eq=False)
class ConeSpec:
    """Polyhedral cone ``{x : rows @ x >= 0}``.

    ``orthant`` tags the special case where the rows are the identity, i.e.
    the nonnegative orthant.  At least ``dim`` rows are required for the cone
    to have a chance of being pointed; fewer rows always leave a free line.
    """

    rows: np.ndarray
    orthant: bool = False

    def __post_init__(self):
        rows = np.atleast_2d(np.asarray(self.rows, dtype=float))
        if rows.ndim != 2 or rows.shape[0] == 0:
            raise ValueError("cone requires a nonempty 2-d array of half-space rows")
        object.__setattr__(self, "rows", rows)

    @property
    def dim(self) -> int:
        return self.rows.shape[1]

    @staticmethod
    def nonneg_orthant(dim: int) -> "ConeSpec":
        return ConeSpec(rows=np.eye(int(dim)), orthant=True)

    @staticmethod
    def from_halfspaces(rows) -> "ConeSpec":
        return ConeSpec(rows=np.atleast_2d(np.asarray(rows, dtype=float)))


@dataclass(frozen=True, eq=False)
class OrderedSpace:
    """A cone plus an order unit; the ambient dimension is ``dim``.

    The unit is expected to be strictly interior to the cone (every row
    pairs strictly positively with it); this is what makes the order norm
    finite on the whole space.  The expectation is *reported*, not enforced:
    see :func:`validate_space`.
    """

    dim: int
    cone: ConeSpec
    unit: np.ndarray

    def __post_init__(self):
        if int(self.dim) <= 0:
            raise ValueError("dim must be a positive integer")
        object.__setattr__(self, "dim", int(self.dim))
        if self.cone.dim != self.dim:
            raise ValueError(
                f"dimension mismatch: cone rows have {self.cone.dim} columns, dim is {self.dim}"
            )
        object.__setattr__(self, "unit", as_vec(self.unit, self.dim))

    @cached_property
    def unit_pairings(self) -> np.ndarray:
        """Row-by-row inner products of the half-space rows with the unit."""
        return self.cone.rows @ self.unit


def orthant(dim: int, unit=None) -> OrderedSpace:
    """The nonnegative orthant in ``dim`` dimensions, default unit all-ones."""
    u = np.ones(dim) if unit is None else unit
    return OrderedSpace(dim=dim, cone=ConeSpec.nonneg_orthant(dim), unit=u)


def halfspace_space(rows, unit) -> OrderedSpace:
    """Space cut out by half-space rows, with the given order unit."""
    cone = ConeSpec.from_halfspaces(rows)
    return OrderedSpace(dim=cone.dim, cone=cone, unit=unit)


def cone_contains(space: OrderedSpace, x, tol: float = TOL) -> bool:
    """Membership of ``x`` in the positive cone (boundary inclusive)."""
    v = as_vec(x, space.dim)
    return bool(np.all(space.cone.rows @ v >= -tol))


def interior_contains(space: OrderedSpace, x, tol: float = TOL) -> bool:
    """Strict membership: every half-space functional strictly positive."""
    v = as_vec(x, space.dim)
    return bool(np.all(space.cone.rows @ v > tol))


def leq(space: OrderedSpace, x, y, tol: float = TOL) -> bool:
    """Partial order: ``x <= y`` iff ``y - x`` lies in the cone."""
    return cone_contains(space, as_vec(y, space.dim) - as_vec(x, space.dim), tol=tol)


def order_norm(space: OrderedSpace, x) -> float:
    """Least ``lam >= 0`` with ``-lam*unit <= x <= lam*unit``.

    Closed form over the rows: ``max_k |a_k.x| / (a_k.unit)``.  Returns
    ``inf``/``nan`` when the unit is not interior; validate first.
    """
    v = as_vec(x, space.dim)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.abs(space.cone.rows @ v) / space.unit_pairings
    return float(np.max(ratios))


def nbhd_contains(space: OrderedSpace, z, delta: float, x, tol: float = TOL) -> bool:
    """Is ``x`` in the open order ball of radius ``delta`` around ``z``?

    Equivalent to ``order_norm(x - z) < delta``; implemented through the
    defining pair of strict cone memberships.
    """
    if not delta > 0:
        raise ValueError("delta must be positive")
    d = as_vec(x, space.dim) - as_vec(z, space.dim)
    shift = delta * space.unit
    return interior_contains(space, shift + d, tol=tol) and interior_contains(
        space, shift - d, tol=tol
    )


def product(E: OrderedSpace, F: OrderedSpace) -> OrderedSpace:
    """Coordinatewise product space with unit ``(unit_E, unit_F)``.

    The product order norm is the max of the component norms, which falls
    out of stacking the half-space rows block-diagonally.
    """
    rows = np.block(
        [
            [E.cone.rows, np.zeros((E.cone.rows.shape[0], F.dim))],
            [np.zeros((F.cone.rows.shape[0], E.dim)), F.cone.rows],
        ]
    )
    cone = ConeSpec(rows=rows, orthant=E.cone.orthant and F.cone.orthant)
    return OrderedSpace(dim=E.dim + F.dim, cone=cone, unit=np.concatenate([E.unit, F.unit]))


def ray_thresholds(space: OrderedSpace, x, y) -> tuple[float, float]:
    """Entry/exit parameters of the unit ray through ``x`` against ``y``.

    Returns ``(lambda_minus, lambda_plus)`` where

    * ``lambda_plus  = inf { t : x + t*unit - y  in cone }``
    * ``lambda_minus = sup { t : y - x - t*unit  in cone }``

    Both are finite for an interior unit, and ``lambda_minus <= lambda_plus``.
    """
    d = as_vec(y, space.dim) - as_vec(x, space.dim)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = (space.cone.rows @ d) / space.unit_pairings
    return float(np.min(ratios)), float(np.max(ratios))


@dataclass(frozen=True)
class SpaceValidation:
    """Outcome of :func:`validate_space`: per-check entries, never raised."""

    ok: bool
    checks: tuple[dict, ...]

    @property
    def failures(self) -> list[dict]:
        return [c for c in self.checks if not c["passed"]]


def _pointedness_witness(space: OrderedSpace, tol: float = TOL):
    """Search the unit box for a nonzero ``v`` with both ``v`` and ``-v`` in the cone.

    A line inside the cone shows up as a vector with ``|rows @ v| <= tol``;
    one LP per signed coordinate direction over the box ``[-1, 1]^dim``
    either finds such a vector or certifies there is none.
    """
    from scipy.optimize import linprog

    A = space.cone.rows
    dim = space.dim
    a_ub = np.vstack([A, -A])
    b_ub = np.full(2 * A.shape[0], tol)
    bounds = [(-1.0, 1.0)] * dim
    for i in range(dim):
        for sign in (1.0, -1.0):
            c = np.zeros(dim)
            c[i] = -sign
            res = linprog(c, A_ub=a_ub, b_ub=b_ub, bounds=bounds, method="highs")
            if res.status == 0 and -res.fun > 1e-6:
                v = res.x / np.max(np.abs(res.x))
                return v
    return None


def validate_space(space: OrderedSpace, samples: int = 256, seed: int = 0) -> SpaceValidation:
    """Report on the order-unit axioms; never throws.

    Checks: the unit is strictly interior; the cone is pointed (no nonzero
    line survives inside it, searched by LP over the unit box); and on a
    random sample every ``x`` satisfies ``-lam*unit <= x <= lam*unit`` at
    ``lam = order_norm(x) + TOL``.
    """
    checks = []

    pairings = space.unit_pairings
    k_min = int(np.argmin(pairings))
    unit_ok = interior_contains(space, space.unit)
    checks.append(
        {
            "name": "unit_interior",
            "passed": unit_ok,
            "detail": {"min_row_pairing": float(pairings[k_min]), "row": k_min},
        }
    )

    witness = _pointedness_witness(space)
    checks.append(
        {
            "name": "pointed",
            "passed": witness is None,
            "detail": None if witness is None else {"line_direction": witness.tolist()},
        }
    )

    rng = np.random.default_rng(seed)
    bound_ok = True
    bound_witness = None
    for _ in range(samples):
        x = rng.normal(scale=2.0, size=space.dim)
        lam = order_norm(space, x)
        if not np.isfinite(lam):
            bound_ok = False
            bound_witness = {"x": x.tolist(), "norm": float(lam)}
            break
        shift = (lam + TOL) * space.unit
        if not (cone_contains(space, shift - x) and cone_contains(space, shift + x)):
            bound_ok = False
            bound_witness = {"x": x.tolist(), "norm": float(lam)}
            break
    checks.append({"name": "norm_bounds", "passed": bound_ok, "detail": bound_witness})

    return SpaceValidation(ok=all(c["passed"] for c in checks), checks=tuple(checks))


def space_to_json(space: OrderedSpace) -> dict:
    cone = "orthant" if space.cone.orthant else {"halfspaces": space.cone.rows.tolist()}
    return {"dim": space.dim, "cone": cone, "unit": space.unit.tolist()}


def space_from_json(obj: dict) -> OrderedSpace:
    """Build a space from ``{"dim": n, "cone": "orthant" | {"halfspaces": ...}, "unit": [...]}``."""
    try:
        dim = int(obj["dim"])
        cone_obj = obj["cone"]
        unit = obj["unit"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"bad space descriptor: {exc}") from exc
    if cone_obj == "orthant":
        cone = ConeSpec.nonneg_orthant(dim)
    elif isinstance(cone_obj, dict) and "halfspaces" in cone_obj:
        cone = ConeSpec.from_halfspaces(cone_obj["halfspaces"])
    else:
        raise ValueError("bad space descriptor: cone must be 'orthant' or {'halfspaces': rows}")
    return OrderedSpace(dim=dim, cone=cone, unit=unit)
