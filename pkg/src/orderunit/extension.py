"""Constructive extension of order-preserving functionals from unit-line spans.

The domain of a partially defined functional here is a *unit span*: the
union of the axis line ``{lam * unit}`` with finitely many parallel lines
``x_i + {lam * unit}``.  Such a set is exactly what stays invariant under
shifts along the order unit, so a weakly additive functional is pinned down
on it by one value per line plus the slope ``c = f(unit)``.

Extending to a new point ``y`` means choosing ``f(y)`` inside the interval

    p_minus(y) <= f(y) <= p_plus(y)

whose endpoints are the best bounds the existing lines impose through the
order: ``p_plus`` is the least value of ``f`` over span points sitting
above ``y`` in the cone order, ``p_minus`` the greatest over points sitting
below.  Over a polyhedral cone both reduce to one ray threshold per line
(:func:`orderunit.spaces.ray_thresholds`), so the interval is exact and
cheap.  Consistency of the given line values (the pairwise inequalities
that make the partial functional order-preserving on its span) is precisely
what guarantees ``p_minus <= p_plus``.

Beyond one-point and finite-list extension, :func:`canonical_extension`
turns the endpoint maps themselves into a total functional: both
``p_minus`` and the midpoint ``(p_minus + p_plus) / 2`` shift exactly along
the unit and grow with the cone order, so either choice is a total weakly
additive, order-preserving functional restricting to the given values.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .functionals import Functional, PropertyReport
from .spaces import TOL, OrderedSpace, as_vec, ray_thresholds


def _unit_component(space: OrderedSpace, v: np.ndarray) -> float:
    """Coefficient of ``v`` along the unit direction (orthogonal projection)."""
    u = space.unit
    return float(v @ u) / float(u @ u)


def canonicalize(space: OrderedSpace, v) -> tuple[np.ndarray, float]:
    """Representative of ``v`` modulo the unit line, plus the removed multiple.

    Two points lie on the same unit line iff their representatives agree;
    the representative of the axis line itself is the zero vector.
    """
    w = as_vec(v, space.dim)
    mu = _unit_component(space, w)
    return w - mu * space.unit, mu


def _is_zero(space: OrderedSpace, v: np.ndarray, tol: float) -> bool:
    scale = 1.0 + float(np.max(np.abs(space.unit)))
    return bool(np.max(np.abs(v)) <= tol * scale)


@dataclass(frozen=True, eq=False)
class UnitSpan:
    """Finitely generated unit span: canonical base points, one per line.

    ``base`` has shape ``(m, dim)``; the axis line is always implied and not
    listed.  Base points arriving on the axis line or on an already listed
    line are merged away at construction.
    """

    space: OrderedSpace
    base: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.base, dtype=float).reshape(-1, self.space.dim)
        object.__setattr__(self, "base", pts)

    @property
    def m(self) -> int:
        return self.base.shape[0]


def _canonical_lines(space: OrderedSpace, points, values=None, unit_value: float = 0.0, tol: float = TOL):
    """Canonicalize points (adjusting values along), merge duplicate lines.

    Returns ``(base, vals)``.  A value conflict between merged duplicates
    raises; with ``values=None`` the values output is all zeros.
    """
    pts = [as_vec(p, space.dim) for p in points]
    if values is None:
        vals = [0.0] * len(pts)
    else:
        vals = [float(v) for v in values]
        if len(vals) != len(pts):
            raise ValueError("one value per base point required")
    base, out_vals = [], []
    for p, g in zip(pts, vals):
        rep, mu = canonicalize(space, p)
        g_rep = g - mu * unit_value
        if _is_zero(space, rep, tol):
            # the point sits on the axis line, where the value is forced
            if values is not None and abs(g_rep) > 1e-7:
                raise ValueError(
                    f"value conflict on the axis line: point {p.tolist()} carries {g}, "
                    f"but the unit slope forces {mu * unit_value}"
                )
            continue
        merged = False
        for i, b in enumerate(base):
            if _is_zero(space, rep - b, tol):
                if values is not None and abs(out_vals[i] - g_rep) > 1e-7:
                    raise ValueError(
                        f"value conflict on a duplicate line: {out_vals[i]} vs {g_rep}"
                    )
                merged = True
                break
        if not merged:
            base.append(rep)
            out_vals.append(g_rep)
    base_arr = np.array(base).reshape(-1, space.dim)
    return base_arr, np.array(out_vals)


def unit_span(space: OrderedSpace, points=()) -> UnitSpan:
    """Span of the given points; ``points=()`` is the bare axis line."""
    base, _ = _canonical_lines(space, points)
    return UnitSpan(space=space, base=base)


def span_contains(span: UnitSpan, v, tol: float = TOL) -> bool:
    """Is ``v`` on the axis line or on one of the base lines?"""
    rep, _ = canonicalize(span.space, v)
    if _is_zero(span.space, rep, tol):
        return True
    return any(_is_zero(span.space, rep - b, tol) for b in span.base)


@dataclass(frozen=True, eq=False)
class PartialFunctional:
    """Line values ``g_i = f(x_i)`` on a unit span, plus the slope ``c = f(unit)``.

    ``consistent`` caches the pairwise order-consistency verdict computed at
    construction.  Strict construction (the default of
    :func:`partial_functional`) rejects inconsistent data; diagnostic code
    can hold an inconsistent instance and inspect
    :func:`check_partial_consistency`, but the extension operations refuse
    to run on it.
    """

    subspace: UnitSpan
    values: np.ndarray
    unit_value: float
    consistent: bool = field(init=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float).reshape(-1)
        if vals.shape[0] != self.subspace.m:
            raise ValueError("one value per base line required")
        if self.unit_value < 0:
            raise ValueError("unit_value must be nonnegative (order preservation on the axis line)")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "unit_value", float(self.unit_value))
        object.__setattr__(self, "consistent", _consistency_witness(self) is None)

    @property
    def space(self) -> OrderedSpace:
        return self.subspace.space


def partial_functional(
    space: OrderedSpace, points, values, unit_value: float, strict: bool = True
) -> PartialFunctional:
    """Build a partial functional, canonicalizing points and values together.

    With ``strict`` (default) the pairwise order-consistency of the data is
    required; pass ``strict=False`` to hold inconsistent data for diagnosis.
    """
    base, vals = _canonical_lines(space, points, values, unit_value)
    pf = PartialFunctional(subspace=UnitSpan(space=space, base=base), values=vals, unit_value=unit_value)
    if strict and not pf.consistent:
        witness = _consistency_witness(pf)
        raise ValueError(f"inconsistent partial functional: {witness}")
    return pf


def _lines(pf: PartialFunctional):
    """Base lines plus the implied axis line (index 0, value 0)."""
    zero = np.zeros(pf.space.dim)
    xs = [zero, *pf.subspace.base]
    gs = [0.0, *pf.values.tolist()]
    return xs, gs


def _consistency_witness(pf: PartialFunctional, tol: float = TOL):
    """First violated pairwise inequality, or None.

    Line ``j`` dominates line ``i`` once shifted up by the threshold
    ``t_ij = inf { t : x_j + t*unit >= x_i }``, so the values must satisfy
    ``g_j + t_ij * c >= g_i``.
    """
    xs, gs = _lines(pf)
    c = pf.unit_value
    for i, (x_i, g_i) in enumerate(zip(xs, gs)):
        for j, (x_j, g_j) in enumerate(zip(xs, gs)):
            if i == j:
                continue
            _, t_ij = ray_thresholds(pf.space, x_j, x_i)
            if g_j + t_ij * c < g_i - tol:
                return {
                    "line_i": i,
                    "line_j": j,
                    "threshold": float(t_ij),
                    "g_i": float(g_i),
                    "g_j": float(g_j),
                    "slope": float(c),
                }
    return None


def check_partial_consistency(pf: PartialFunctional, tol: float = TOL) -> PropertyReport:
    """Report on the pairwise order-consistency inequalities of ``pf``."""
    witness = _consistency_witness(pf, tol)
    n_pairs = (pf.subspace.m + 1) * pf.subspace.m
    return PropertyReport(
        name="partial_consistency", passed=witness is None, samples=max(n_pairs, 1), witness=witness
    )


@dataclass(frozen=True)
class ExtensionInterval:
    """Admissible value interval ``[p_minus, p_plus]`` at one target point."""

    p_minus: float
    p_plus: float

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.p_minus + self.p_plus)

    @property
    def width(self) -> float:
        return self.p_plus - self.p_minus


def extension_interval(pf: PartialFunctional, y, tol: float = TOL) -> ExtensionInterval:
    """Exact admissible interval for ``f(y)``.

    Per line ``i``, the part of the line above ``y`` starts at the ray
    threshold ``lambda_plus(x_i, y)`` and the part below ends at
    ``lambda_minus(x_i, y)``; the interval endpoints are the min/max of the
    corresponding line values.  Consistency of ``pf`` makes the interval
    nonempty.
    """
    if not pf.consistent:
        raise ValueError("extension requires a consistent partial functional")
    target = as_vec(y, pf.space.dim)
    xs, gs = _lines(pf)
    c = pf.unit_value
    p_plus = np.inf
    p_minus = -np.inf
    for x_i, g_i in zip(xs, gs):
        lo, hi = ray_thresholds(pf.space, x_i, target)
        p_plus = min(p_plus, g_i + c * hi)
        p_minus = max(p_minus, g_i + c * lo)
    if p_minus > p_plus + tol:
        raise ValueError(
            f"empty extension interval [{p_minus}, {p_plus}]; partial data inconsistent"
        )
    return ExtensionInterval(p_minus=float(p_minus), p_plus=float(p_plus))


_RULES = ("lower", "upper", "midpoint", "given")


def _pick_value(interval: ExtensionInterval, rule: str, value, tol: float) -> float:
    if rule == "lower":
        return interval.p_minus
    if rule == "upper":
        return interval.p_plus
    if rule == "midpoint":
        return interval.midpoint
    if rule == "given":
        if value is None:
            raise ValueError("rule 'given' requires a value")
        p = float(value)
        if p < interval.p_minus - tol or p > interval.p_plus + tol:
            raise ValueError(
                f"value {p} outside the admissible interval [{interval.p_minus}, {interval.p_plus}]"
            )
        return p
    raise ValueError(f"unknown extension rule {rule!r}; expected one of {_RULES}")


def extend_one(
    pf: PartialFunctional, y, rule: str = "midpoint", value=None, tol: float = TOL
) -> PartialFunctional:
    """Extend ``pf`` by one point off its span; the restriction to the old
    lines is untouched and the result stays consistent."""
    if span_contains(pf.subspace, y, tol):
        raise ValueError("target point already lies in the span")
    interval = extension_interval(pf, y, tol)
    p = _pick_value(interval, rule, value, tol)
    points = [*pf.subspace.base, as_vec(y, pf.space.dim)]
    values = [*pf.values.tolist(), p]
    return partial_functional(pf.space, points, values, pf.unit_value)


def extend_all(pf: PartialFunctional, ys, rule: str = "midpoint", value=None, tol: float = TOL) -> PartialFunctional:
    """Fold :func:`extend_one` over the targets, skipping points already spanned.

    The fold order matters with the midpoint rule: earlier choices narrow
    later intervals.  Any order yields a consistent result.
    """
    out = pf
    for y in ys:
        if span_contains(out.subspace, y, tol):
            continue
        out = extend_one(out, y, rule=rule, value=value, tol=tol)
    return out


def canonical_extension(pf: PartialFunctional, mode: str = "midpoint") -> Functional:
    """Total weakly additive, order-preserving functional extending ``pf``.

    ``mode='lower'`` evaluates the lower endpoint map ``p_minus``;
    ``mode='midpoint'`` averages both endpoints.  Both shift exactly along
    the unit and are monotone in the cone order, and both return the stored
    value on every base line.
    """
    if mode not in ("lower", "midpoint"):
        raise ValueError("mode must be 'lower' or 'midpoint'")
    if not pf.consistent:
        raise ValueError("extension requires a consistent partial functional")

    if mode == "lower":
        def _eval(x, _pf=pf):
            return extension_interval(_pf, x).p_minus
    else:
        def _eval(x, _pf=pf):
            return extension_interval(_pf, x).midpoint

    return Functional(space=pf.space, kind="extended", partial=pf, rule=mode, hook=_eval)


def partial_from_json(space: OrderedSpace, obj: dict, strict: bool = True) -> PartialFunctional:
    """Build from ``{"base_points": [[...]], "values": [...], "unit_value": c}``."""
    try:
        points = obj.get("base_points", [])
        values = obj.get("values", [])
        c = float(obj["unit_value"])
    except (KeyError, TypeError) as exc:
        raise ValueError(f"bad partial-functional descriptor: {exc}") from exc
    return partial_functional(space, points, values, c, strict=strict)


def partial_to_json(pf: PartialFunctional) -> dict:
    return {
        "base_points": pf.subspace.base.tolist(),
        "values": pf.values.tolist(),
        "unit_value": pf.unit_value,
    }
