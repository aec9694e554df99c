"""Weakly additive, order-preserving operators between order-unit spaces.

Mirrors :mod:`orderunit.functionals` one level up: an operator maps one
space into another, commutes with shifts along the domain unit
(``T(x + lam*unit_E) = T(x) + lam*T(unit_E)``) and respects the cone
orders.  Those two sampled laws buy the quantitative conclusions checked
here: a Lipschitz modulus ``||T(unit_E)||``, a uniform equicontinuity
modulus ``delta(eps) = eps / sup ||T(unit_E)||`` for whole families with a
bounded orbit at the unit, stability of the laws under pointwise limits,
and the open-mapping behaviour probed by a budgeted preimage search.

Kinds: ``linear_positive`` (a cone-preserving matrix), ``clamp`` (the
plane operator that pins the second coordinate into the band
``[x1 - 1, x1 + 1]``; the stock example that is weakly additive and
order-preserving yet not open away from the band), ``stack`` (one
functional per codomain coordinate) and ``custom``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import sampling
from .functionals import Functional, PropertyReport, evaluate, functional_from_json, functional_to_json
from .spaces import (
    TOL,
    OrderedSpace,
    as_vec,
    cone_contains,
    interior_contains,
    leq,
    order_norm,
    orthant,
    ray_thresholds,
)


@dataclass(frozen=True, eq=False)
class Operator:
    """Map between two spaces with a declared kind; ``unit_image`` caches
    the value at the domain unit."""

    domain: OrderedSpace
    codomain: OrderedSpace
    kind: str
    matrix: np.ndarray | None = None
    functionals: tuple[Functional, ...] | None = None
    hook: Callable[[np.ndarray], np.ndarray] | None = None
    unit_image: np.ndarray = field(init=False)

    def __post_init__(self):
        if self.matrix is not None:
            m = np.asarray(self.matrix, dtype=float)
            if m.shape != (self.codomain.dim, self.domain.dim):
                raise ValueError(
                    f"matrix shape {m.shape} does not map dim {self.domain.dim} "
                    f"into dim {self.codomain.dim}"
                )
            object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "unit_image", apply(self, self.domain.unit))

    def __call__(self, x) -> np.ndarray:
        return apply(self, x)


def _clamp_eval(x: np.ndarray) -> np.ndarray:
    lo, hi = x[0] - 1.0, x[0] + 1.0
    if x[1] <= lo:
        return np.array([x[0], lo])
    if x[1] >= hi:
        return np.array([x[0], hi])
    return np.array([x[0], x[1]])


def apply(T: Operator, x) -> np.ndarray:
    v = as_vec(x, T.domain.dim)
    if T.kind == "linear_positive":
        return T.matrix @ v
    if T.kind == "clamp":
        return _clamp_eval(v)
    if T.kind == "stack":
        return np.array([evaluate(f, v) for f in T.functionals])
    if T.kind == "custom":
        return as_vec(T.hook(v), T.codomain.dim)
    raise ValueError(f"unknown operator kind {T.kind!r}")


def linear_positive(
    domain: OrderedSpace,
    codomain: OrderedSpace,
    matrix,
    strict: bool = True,
    seed: int = 0,
    samples: int = 128,
) -> Operator:
    """Matrix operator; with ``strict`` it must map sampled cone points into
    the codomain cone (on orthant domains the generators are checked exactly)."""
    T = Operator(domain=domain, codomain=codomain, kind="linear_positive", matrix=matrix)
    if strict:
        points = list(sampling.cone_points(domain, samples, sampling.rng_from(seed)))
        if domain.cone.orthant:
            points.extend(np.eye(domain.dim))
        for p in points:
            if not cone_contains(codomain, T.matrix @ p):
                raise ValueError(
                    f"matrix does not preserve the cone: image of {np.round(p, 6).tolist()} "
                    "leaves the codomain cone"
                )
    return T


def clamp_operator(space: OrderedSpace) -> Operator:
    """The band clamp on a 2-d space (second coordinate pinned to
    ``[x1 - 1, x1 + 1]``); domain and codomain coincide."""
    if space.dim != 2:
        raise ValueError("clamp is defined on 2-d spaces only")
    return Operator(domain=space, codomain=space, kind="clamp")


def stack_operator(domain: OrderedSpace, fs: Sequence[Functional], codomain: OrderedSpace | None = None) -> Operator:
    """One functional per codomain coordinate; default codomain is the
    orthant of matching dimension with an all-ones unit."""
    fs = tuple(fs)
    if not fs:
        raise ValueError("stack requires at least one functional")
    codomain = codomain if codomain is not None else orthant(len(fs))
    if codomain.dim != len(fs):
        raise ValueError("codomain dimension must match the number of functionals")
    return Operator(domain=domain, codomain=codomain, kind="stack", functionals=fs)


def custom_operator(domain: OrderedSpace, codomain: OrderedSpace, hook) -> Operator:
    return Operator(domain=domain, codomain=codomain, kind="custom", hook=hook)


def identity_operator(space: OrderedSpace) -> Operator:
    return linear_positive(space, space, np.eye(space.dim), strict=False)


@dataclass(frozen=True, eq=False)
class OperatorFamily:
    """Nonempty collection sharing domain and codomain."""

    members: tuple[Operator, ...]

    def __post_init__(self):
        members = tuple(self.members)
        if not members:
            raise ValueError("a family needs at least one operator")
        first = members[0]
        for T in members[1:]:
            same = (
                T.domain.dim == first.domain.dim
                and T.codomain.dim == first.codomain.dim
                and np.array_equal(T.domain.cone.rows, first.domain.cone.rows)
                and np.array_equal(T.codomain.cone.rows, first.codomain.cone.rows)
                and np.array_equal(T.domain.unit, first.domain.unit)
                and np.array_equal(T.codomain.unit, first.codomain.unit)
            )
            if not same:
                raise ValueError("all family members must share domain and codomain")
        object.__setattr__(self, "members", members)

    @property
    def domain(self) -> OrderedSpace:
        return self.members[0].domain

    @property
    def codomain(self) -> OrderedSpace:
        return self.members[0].codomain

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)


def check_weakly_additive_op(
    T: Operator, samples=None, *, seed: int = 0, n: int = 2**12, tol: float = TOL
) -> PropertyReport:
    """Componentwise defect of ``T(x + lam*unit) - T(x) - lam*T(unit)``."""
    if samples is None:
        samples = sampling.shift_samples(T.domain, n, sampling.rng_from(seed))
    unit = T.domain.unit
    tu = T.unit_image
    for x, lam in samples:
        defect = apply(T, x + lam * unit) - apply(T, x) - lam * tu
        worst = float(np.max(np.abs(defect)))
        if worst > tol:
            return PropertyReport(
                name="weakly_additive",
                passed=False,
                samples=len(samples),
                witness={"x": list(map(float, x)), "lam": float(lam), "defect": worst},
            )
    return PropertyReport(name="weakly_additive", passed=True, samples=len(samples))


def check_order_preserving_op(
    T: Operator, pairs=None, *, seed: int = 0, n: int = 2**12, tol: float = TOL
) -> PropertyReport:
    """``x <= y`` in the domain must give ``T(x) <= T(y)`` in the codomain."""
    if pairs is None:
        pairs = sampling.comparable_pairs(T.domain, n, sampling.rng_from(seed))
    for x, y in pairs:
        tx, ty = apply(T, x), apply(T, y)
        if not cone_contains(T.codomain, ty - tx, tol=tol):
            return PropertyReport(
                name="order_preserving",
                passed=False,
                samples=len(pairs),
                witness={
                    "x": list(map(float, x)),
                    "y": list(map(float, y)),
                    "T_x": list(map(float, tx)),
                    "T_y": list(map(float, ty)),
                },
            )
    return PropertyReport(name="order_preserving", passed=True, samples=len(pairs))


def unit_image_interior(T: Operator) -> bool:
    """Is ``T(unit)`` interior in the codomain cone?  When true it can serve
    as the codomain order unit."""
    return interior_contains(T.codomain, T.unit_image)


def operator_modulus(T: Operator) -> float:
    """Codomain order norm of ``T(unit)``: the Lipschitz constant of ``T``
    between the order norms, exact for weakly additive order-preserving maps."""
    return order_norm(T.codomain, T.unit_image)


@dataclass(frozen=True)
class EquicontinuityModulus:
    """Uniform modulus for a family: ``delta(eps) = eps / bound`` where
    ``bound = sup ||T(unit)||`` over the members."""

    bound: float
    cap: float
    unbounded: bool
    size: int

    def delta(self, eps: float) -> float:
        if self.unbounded:
            raise ValueError("the family orbit at the unit is unbounded; no uniform modulus")
        if self.bound == 0.0:
            return float("inf")
        return eps / self.bound


def equicontinuity_modulus(family: OperatorFamily, cap: float = 1e6) -> EquicontinuityModulus:
    """Boundedness of the single orbit at the unit yields one modulus for
    the whole family; families exceeding ``cap`` are reported unbounded."""
    bound = max(operator_modulus(T) for T in family)
    return EquicontinuityModulus(bound=float(bound), cap=float(cap), unbounded=bound > cap, size=len(family))


def certify_equicontinuity(
    family: OperatorFamily,
    eps: float,
    pairs=None,
    *,
    cap: float = 1e6,
    seed: int = 0,
    n: int = 256,
    tol: float = TOL,
) -> PropertyReport:
    """Sampled certificate that ``||x - y|| < delta(eps)`` forces
    ``||T(x) - T(y)|| < eps`` for every member."""
    modulus = equicontinuity_modulus(family, cap=cap)
    if modulus.unbounded:
        return PropertyReport(
            name="equicontinuity",
            passed=False,
            samples=0,
            witness={"reason": "unbounded orbit at the unit", "bound": modulus.bound, "cap": cap},
        )
    delta = modulus.delta(eps)
    if pairs is None:
        width = min(delta, 1e6)
        pairs = sampling.pairs_within(family.domain, width, n, sampling.rng_from(seed))
    for k, T in enumerate(family):
        for x, y in pairs:
            gap = order_norm(family.codomain, apply(T, x) - apply(T, y))
            if gap >= eps + tol:
                return PropertyReport(
                    name="equicontinuity",
                    passed=False,
                    samples=len(pairs) * len(family),
                    witness={
                        "member": k,
                        "x": list(map(float, x)),
                        "y": list(map(float, y)),
                        "image_gap": float(gap),
                    },
                )
    return PropertyReport(name="equicontinuity", passed=True, samples=len(pairs) * len(family))


def graph_check(
    T: Operator, samples=None, lambdas=(-2.0, -1.0, 0.0, 1.0, 2.0), *, seed: int = 0, n: int = 512, tol: float = TOL
) -> PropertyReport:
    """The graph is closed under adding multiples of the product unit
    ``(unit_E, T(unit_E))``: shifting a graph point along it lands on the
    graph point of the shifted argument."""
    if samples is None:
        samples = sampling.box_points(T.domain, n, sampling.rng_from(seed))
    unit = T.domain.unit
    count = 0
    for x in samples:
        gx = np.concatenate([x, apply(T, x)])
        gu = np.concatenate([unit, T.unit_image])
        for lam in lambdas:
            count += 1
            shifted = np.concatenate([x + lam * unit, apply(T, x + lam * unit)])
            defect = float(np.max(np.abs(gx + lam * gu - shifted)))
            if defect > tol:
                return PropertyReport(
                    name="graph_shift_closure",
                    passed=False,
                    samples=count,
                    witness={"x": list(map(float, x)), "lam": float(lam), "defect": defect},
                )
    return PropertyReport(name="graph_shift_closure", passed=True, samples=count)


def default_image_oracle(T: Operator):
    """Exact membership test for ``T(E)`` where one is known, else None."""
    if T.kind == "clamp":
        return lambda y: abs(float(y[1]) - float(y[0])) <= 1.0 + TOL
    if T.kind == "linear_positive":
        M = T.matrix

        def _in_range(y, M=M):
            sol, *_ = np.linalg.lstsq(M, np.asarray(y, dtype=float), rcond=None)
            return bool(np.max(np.abs(M @ sol - y)) <= 1e-8)

        return _in_range
    return None


def _preimage_search(T: Operator, y, x0, epsilon: float, budget: int, rng, tol: float):
    """Multi-start coordinate descent for ``x`` in the open ball around
    ``x0`` with ``T(x) = y``; returns ``(x or None, best residual, evals)``.

    Exhausting the budget is a semi-decision: it reports that no preimage
    was *found*, not that none exists.
    """
    dom = T.domain
    y = as_vec(y, T.codomain.dim)
    x0 = as_vec(x0, dom.dim)
    evals = 0

    def inside(x):
        return order_norm(dom, x - x0) < epsilon * (1.0 - 1e-12)

    def residual(x):
        nonlocal evals
        evals += 1
        r = apply(T, x) - y
        return float(np.sqrt(r @ r))

    starts = [x0.copy()]
    if T.codomain.dim == dom.dim and inside(y):
        starts.append(y.copy())
    if T.kind == "linear_positive":
        sol, *_ = np.linalg.lstsq(T.matrix, y, rcond=None)
        if inside(sol):
            starts.append(sol)
    starts.extend(sampling.ball_point(dom, x0, epsilon * 0.95, rng) for _ in range(6))

    best_x, best = None, np.inf
    for s in starts:
        if evals >= budget:
            break
        x = s.copy()
        val = residual(x)
        step = epsilon / 2.0
        while evals < budget and val > tol and step > 1e-14:
            improved = False
            for i in range(dom.dim):
                for sign in (1.0, -1.0):
                    cand = x.copy()
                    cand[i] += sign * step
                    if not inside(cand):
                        continue
                    v = residual(cand)
                    if v < val - 1e-15:
                        x, val = cand, v
                        improved = True
                        break
                if evals >= budget or val <= tol:
                    break
            if not improved:
                step *= 0.5
        if val < best:
            best, best_x = val, x
        if best <= tol:
            return best_x, best, evals
    return (best_x if best <= tol else None), best, evals


@dataclass(frozen=True)
class OpennessVerdict:
    """Outcome of a relative-openness probe.

    A FAIL means the budgeted search found no preimage for ``witness``; it
    is evidence against openness at the probed point, not a proof.
    """

    passed: bool
    witness: list | None
    center: list
    epsilon: float
    delta: float
    targets_tested: int
    evals_used: int
    budget: int
    best_residual: float | None
    note: str = ""

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "witness": self.witness,
            "center": self.center,
            "epsilon": self.epsilon,
            "delta": self.delta,
            "targets_tested": self.targets_tested,
            "evals_used": self.evals_used,
            "budget": self.budget,
            "best_residual": self.best_residual,
            "note": self.note,
        }


def openness_check(
    T: Operator,
    x0,
    epsilon: float,
    delta: float,
    image_oracle=None,
    *,
    targets: int = 32,
    budget: int = 1000,
    seed: int = 0,
    tol: float = 1e-6,
) -> OpennessVerdict:
    """Probe openness of ``T`` at ``x0`` relative to its image.

    Samples targets in the radius-``delta`` ball around ``T(x0)``
    intersected with ``T(E)`` (membership decided by the oracle; exact
    defaults exist for the clamp and matrix kinds, otherwise targets are
    forward images) and searches the radius-``epsilon`` ball around ``x0``
    for a preimage of each, ``budget`` evaluations per target.
    """
    if not (epsilon > 0 and delta > 0):
        raise ValueError("epsilon and delta must be positive")
    rng = sampling.rng_from(seed)
    x0 = as_vec(x0, T.domain.dim)
    center = apply(T, x0)
    oracle = image_oracle if image_oracle is not None else default_image_oracle(T)

    note = ""
    sampled = []
    if oracle is not None:
        tries = 0
        while len(sampled) < targets and tries < 200 * targets:
            y = sampling.ball_point(T.codomain, center, delta, rng)
            tries += 1
            if oracle(y):
                sampled.append(y)
        if not sampled:
            note = "no image points found inside the target ball"
    else:
        note = "no image oracle; targets are forward images near the probe point"
        tries = 0
        while len(sampled) < targets and tries < 500 * targets:
            tries += 1
            x = x0 + rng.normal(scale=max(2.0 * epsilon, 1.0), size=T.domain.dim)
            y = apply(T, x)
            if order_norm(T.codomain, y - center) < delta:
                sampled.append(y)

    evals_total = 0
    for y in sampled:
        found, best, evals = _preimage_search(T, y, x0, epsilon, budget, rng, tol)
        evals_total += evals
        if found is None:
            return OpennessVerdict(
                passed=False,
                witness=list(map(float, y)),
                center=list(map(float, center)),
                epsilon=float(epsilon),
                delta=float(delta),
                targets_tested=len(sampled),
                evals_used=evals_total,
                budget=budget,
                best_residual=float(best),
                note=note or "search budget exhausted without a preimage",
            )
    return OpennessVerdict(
        passed=True,
        witness=None,
        center=list(map(float, center)),
        epsilon=float(epsilon),
        delta=float(delta),
        targets_tested=len(sampled),
        evals_used=evals_total,
        budget=budget,
        best_residual=None,
        note=note,
    )


def open_ball_image_check(
    T: Operator,
    epsilon: float,
    *,
    seed: int = 0,
    n: int = 64,
    budget: int = 800,
    tol: float = 1e-6,
) -> PropertyReport:
    """For a declared-onto ``T`` with ``T(unit_E)`` the codomain unit, the
    image of the radius-``eps`` ball at zero is the radius-``eps`` ball at
    zero: both inclusions are sampled, preimages found by budgeted search."""
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    rng = sampling.rng_from(seed)
    if not unit_image_interior(T):
        return PropertyReport(
            name="open_ball_image",
            passed=False,
            samples=0,
            witness={"reason": "unit image is not interior in the codomain cone"},
        )
    if order_norm(T.codomain, T.unit_image - T.codomain.unit) > 1e-9:
        return PropertyReport(
            name="open_ball_image",
            passed=False,
            samples=0,
            witness={
                "reason": "codomain unit differs from the unit image",
                "unit_image": list(map(float, T.unit_image)),
            },
        )

    zero_dom = np.zeros(T.domain.dim)
    zero_cod = np.zeros(T.codomain.dim)
    for x in sampling.ball_points(T.domain, zero_dom, epsilon, n, rng):
        nrm = order_norm(T.codomain, apply(T, x))
        if nrm >= epsilon + tol:
            return PropertyReport(
                name="open_ball_image",
                passed=False,
                samples=n,
                witness={"side": "forward", "x": list(map(float, x)), "image_norm": float(nrm)},
            )
    for y in sampling.ball_points(T.codomain, zero_cod, epsilon, n, rng):
        found, best, _ = _preimage_search(T, y, zero_dom, epsilon, budget, rng, tol)
        if found is None:
            return PropertyReport(
                name="open_ball_image",
                passed=False,
                samples=2 * n,
                witness={
                    "side": "preimage",
                    "y": list(map(float, y)),
                    "best_residual": float(best),
                    "reason": "declared onto, but no preimage found in the matching ball",
                },
            )
    return PropertyReport(name="open_ball_image", passed=True, samples=2 * n)


def pointwise_limit(
    Ts: Sequence[Operator], probes, *, tol: float = 1e-6, tail: int = 3
) -> tuple[Operator, PropertyReport]:
    """Tabulated limit of an operator sequence on a probe set.

    Convergence is checked as a Cauchy condition over the last ``tail + 1``
    members at every probe (divergence raises, naming the probe).  The
    returned operator evaluates by nearest probe line, completed along the
    unit direction, which makes it weakly additive by construction; the
    report also checks order preservation over the comparable probe pairs.
    """
    Ts = list(Ts)
    if len(Ts) < 2:
        raise ValueError("need at least two operators to take a limit")
    dom, cod = Ts[0].domain, Ts[0].codomain
    probe_list = [as_vec(p, dom.dim) for p in probes]
    probe_list.append(np.zeros(dom.dim))

    window = Ts[-(tail + 1):]
    for idx, p in enumerate(probe_list):
        values = [apply(T, p) for T in window]
        worst = max(
            order_norm(cod, a - b) for i, a in enumerate(values) for b in values[i + 1:]
        )
        if worst > tol:
            raise ValueError(
                f"sequence diverges at probe {idx} ({p.tolist()}): tail spread {worst:g} > {tol:g}"
            )

    last = Ts[-1]
    table = [(p, apply(last, p)) for p in probe_list]
    unit_image = apply(last, dom.unit)

    def _limit_eval(x, _table=table, _unit_image=unit_image, _dom=dom):
        best_val, best_dist, best_shift = None, np.inf, 0.0
        for p, v in _table:
            lo, hi = ray_thresholds(_dom, p, x)
            dist = 0.5 * (hi - lo)
            if dist < best_dist:
                best_dist, best_val, best_shift = dist, v, 0.5 * (hi + lo)
        return best_val + best_shift * _unit_image

    limit = custom_operator(dom, cod, _limit_eval)

    wa = check_weakly_additive_op(limit, samples=[(p, lam) for p, _ in table for lam in (-1.5, 0.5, 2.0)])
    pairs = [(p, q) for p, _ in table for q, _ in table if leq(dom, p, q)]
    op = check_order_preserving_op(limit, pairs=pairs)
    passed = wa.passed and op.passed
    report = PropertyReport(
        name="pointwise_limit",
        passed=passed,
        samples=wa.samples + op.samples,
        witness=None if passed else (wa.witness or op.witness),
    )
    return limit, report


def operator_from_json(domain: OrderedSpace, obj: dict, codomain: OrderedSpace | None = None, strict: bool = False) -> Operator:
    """Build from ``{"kind": "linear_positive"|"clamp"|"stack", ...}``.

    ``strict=False`` by default so diagnostic tooling can load a
    cone-violating matrix and let the checkers report it.
    """
    try:
        kind = obj["kind"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"bad operator descriptor: {exc}") from exc
    if kind == "linear_positive":
        matrix = np.asarray(obj["matrix"], dtype=float)
        cod = codomain
        if cod is None:
            cod = domain if matrix.shape[0] == domain.dim else orthant(matrix.shape[0])
        return linear_positive(domain, cod, matrix, strict=strict)
    if kind == "clamp":
        return clamp_operator(domain)
    if kind == "stack":
        fs = [functional_from_json(domain, f) for f in obj["functionals"]]
        return stack_operator(domain, fs, codomain)
    raise ValueError(f"unknown operator kind {kind!r}")


def operator_to_json(T: Operator) -> dict:
    if T.kind == "linear_positive":
        return {"kind": T.kind, "matrix": T.matrix.tolist()}
    if T.kind == "clamp":
        return {"kind": "clamp"}
    if T.kind == "stack":
        return {"kind": "stack", "functionals": [functional_to_json(f) for f in T.functionals]}
    raise ValueError(f"operator kind {T.kind!r} has no descriptor form")
