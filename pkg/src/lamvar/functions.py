"""Function models on [0,1].

Four exactly-representable classes: piecewise-linear functions, step functions
with explicit values at their jump points, polynomials in the Bernstein basis
(optionally restricted to a subinterval), and piecewise collections of the
latter.  Polynomial evaluation, restriction and splitting go through de
Casteljau recurrences only; coefficients are never converted to the monomial
basis.  Extrema are isolated by recursive subdivision driven by coefficient
sign certificates, then refined by bisection.

Evaluation identities hold to 1e-12.  Root positions are resolved to the
requested tolerance (default 1e-12).
"""

from __future__ import annotations

import bisect
from functools import singledispatch
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from .errors import DomainError, InvalidInputError, ResourceError

EVAL_TOL = 1e-12

_NUMPY_CUTOVER = 48  # degree above which de Casteljau loops run on arrays
_MAX_DEPTH = 64
_MAX_PANELS = 20000

TAG_ENDPOINT = "endpoint"
TAG_BREAKPOINT = "breakpoint"
TAG_ROOT = "isolated-root"
TAG_REPRESENTATIVE = "piece-representative"

_TAG_ORDER = {TAG_ENDPOINT: 0, TAG_BREAKPOINT: 1, TAG_ROOT: 2, TAG_REPRESENTATIVE: 3}


def _check_unit_interval(x: float) -> None:
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"argument {x!r} lies outside [0, 1]")


class PiecewiseLinear:
    """Continuous piecewise-linear function given by breakpoints on [0,1]."""

    __slots__ = ("xs", "ys")

    def __init__(self, points: Iterable[Tuple[float, float]]):
        pts = [(float(x), float(y)) for x, y in points]
        if len(pts) < 2:
            raise InvalidInputError("need at least two breakpoints", field="points")
        xs = [p[0] for p in pts]
        if xs[0] != 0.0:
            raise InvalidInputError("first x must be 0", field="points[0][0]")
        if xs[-1] != 1.0:
            raise InvalidInputError(
                "last x must be 1", field=f"points[{len(pts) - 1}][0]"
            )
        for i in range(1, len(xs)):
            if xs[i] <= xs[i - 1]:
                raise InvalidInputError(
                    "x coordinates must be strictly increasing", field=f"points[{i}][0]"
                )
        self.xs = tuple(xs)
        self.ys = tuple(p[1] for p in pts)

    @property
    def breakpoints(self) -> Tuple[Tuple[float, float], ...]:
        return tuple(zip(self.xs, self.ys))

    def eval(self, x: float) -> float:
        _check_unit_interval(x)
        i = bisect.bisect_left(self.xs, x)
        if i < len(self.xs) and self.xs[i] == x:
            return self.ys[i]
        x0, x1 = self.xs[i - 1], self.xs[i]
        y0, y1 = self.ys[i - 1], self.ys[i]
        t = (x - x0) / (x1 - x0)
        return y0 + t * (y1 - y0)

    __call__ = eval

    def integrate(self, a: float, b: float) -> float:
        """Exact integral over [a, b] by trapezoids on each linear piece."""
        _check_unit_interval(a)
        _check_unit_interval(b)
        if a > b:
            raise DomainError(f"integration bounds out of order: {a} > {b}")
        total = 0.0
        for i in range(len(self.xs) - 1):
            lo = max(a, self.xs[i])
            hi = min(b, self.xs[i + 1])
            if hi > lo:
                total += 0.5 * (self.eval(lo) + self.eval(hi)) * (hi - lo)
        return total

    def total_variation(self) -> float:
        return sum(abs(self.ys[i + 1] - self.ys[i]) for i in range(len(self.ys) - 1))

    def to_json(self) -> dict:
        return {"type": "plf", "points": [[x, y] for x, y in self.breakpoints]}

    def __repr__(self) -> str:
        return f"PiecewiseLinear({len(self.xs)} breakpoints)"


class StepFunction:
    """Right-open step function with explicit values at its cut points.

    ``cuts`` are the jump locations in (0,1); ``piece_values[i]`` is the value
    on the i-th open piece; ``point_values[i]`` is the value taken exactly at
    ``cuts[i]`` and must lie between the two adjacent piece values (a standing
    invariant of the class of step functions treated here).
    """

    __slots__ = ("cuts", "piece_values", "point_values")

    def __init__(self, cuts, piece_values, point_values):
        cuts = tuple(float(c) for c in cuts)
        piece_values = tuple(float(v) for v in piece_values)
        point_values = tuple(float(v) for v in point_values)
        for i, c in enumerate(cuts):
            if not 0.0 < c < 1.0:
                raise InvalidInputError("cut must lie in (0, 1)", field=f"cuts[{i}]")
            if i and c <= cuts[i - 1]:
                raise InvalidInputError(
                    "cuts must be strictly increasing", field=f"cuts[{i}]"
                )
        if len(piece_values) != len(cuts) + 1:
            raise InvalidInputError(
                f"expected {len(cuts) + 1} piece values, got {len(piece_values)}",
                field="pieces",
            )
        if len(point_values) != len(cuts):
            raise InvalidInputError(
                f"expected {len(cuts)} point values, got {len(point_values)}",
                field="pointValues",
            )
        for i, v in enumerate(point_values):
            lo = min(piece_values[i], piece_values[i + 1])
            hi = max(piece_values[i], piece_values[i + 1])
            if not lo <= v <= hi:
                raise InvalidInputError(
                    f"value {v!r} lies outside the adjacent piece range [{lo}, {hi}]",
                    field=f"pointValues[{i}]",
                )
        self.cuts = cuts
        self.piece_values = piece_values
        self.point_values = point_values

    def eval(self, x: float) -> float:
        _check_unit_interval(x)
        i = bisect.bisect_left(self.cuts, x)
        if i < len(self.cuts) and self.cuts[i] == x:
            return self.point_values[i]
        return self.piece_values[i]

    __call__ = eval

    def integrate(self, a: float, b: float) -> float:
        """Exact integral over [a, b]; the cut points carry no measure."""
        _check_unit_interval(a)
        _check_unit_interval(b)
        if a > b:
            raise DomainError(f"integration bounds out of order: {a} > {b}")
        edges = (0.0,) + self.cuts + (1.0,)
        total = 0.0
        for i, v in enumerate(self.piece_values):
            lo = max(a, edges[i])
            hi = min(b, edges[i + 1])
            if hi > lo:
                total += v * (hi - lo)
        return total

    def piece_midpoints(self) -> Tuple[float, ...]:
        edges = (0.0,) + self.cuts + (1.0,)
        return tuple(0.5 * (edges[i] + edges[i + 1]) for i in range(len(edges) - 1))

    def to_json(self) -> dict:
        return {
            "type": "step",
            "cuts": list(self.cuts),
            "pieces": list(self.piece_values),
            "pointValues": list(self.point_values),
        }

    def __repr__(self) -> str:
        return f"StepFunction({len(self.cuts)} cuts)"


# -- de Casteljau kernels -------------------------------------------------


def _dc_eval(coeffs: Sequence[float], t: float) -> float:
    n = len(coeffs) - 1
    if n == 0:
        return coeffs[0]
    s = 1.0 - t
    if n > _NUMPY_CUTOVER:
        w = np.asarray(coeffs, dtype=np.float64)
        for _ in range(n):
            w = s * w[:-1] + t * w[1:]
        return float(w[0])
    w = list(coeffs)
    for m in range(n, 0, -1):
        for i in range(m):
            w[i] = s * w[i] + t * w[i + 1]
    return w[0]


def _dc_split(coeffs: Sequence[float], t: float) -> Tuple[Tuple[float, ...], Tuple[float, ...]]:
    """Coefficients of the two halves at parameter t (both on local [0,1])."""
    n = len(coeffs) - 1
    s = 1.0 - t
    if n > _NUMPY_CUTOVER:
        w = np.asarray(coeffs, dtype=np.float64)
        left = [float(w[0])]
        right = [float(w[-1])]
        for _ in range(n):
            w = s * w[:-1] + t * w[1:]
            left.append(float(w[0]))
            right.append(float(w[-1]))
        return tuple(left), tuple(reversed(right))
    w = list(coeffs)
    left = [w[0]]
    right = [w[-1]]
    for m in range(n, 0, -1):
        for i in range(m):
            w[i] = s * w[i] + t * w[i + 1]
        left.append(w[0])
        right.append(w[m - 1])
    return tuple(left), tuple(reversed(right))


class BernsteinPoly:
    """Polynomial in the Bernstein basis on a subinterval [a, b] of [0, 1].

    With local parameter t = (x - a)/(b - a), the function is
    ``sum_k coeffs[k] * C(n,k) t^k (1-t)^(n-k)``.  Evaluation is by the de
    Casteljau recurrence, which reproduces the endpoint coefficients exactly.
    """

    __slots__ = ("coeffs", "a", "b")

    def __init__(self, coeffs: Sequence[float], domain: Tuple[float, float] = (0.0, 1.0)):
        coeffs = tuple(float(c) for c in coeffs)
        if not coeffs:
            raise InvalidInputError("need at least one coefficient", field="coeffs")
        a, b = float(domain[0]), float(domain[1])
        if not (0.0 <= a < b <= 1.0):
            raise InvalidInputError(
                f"domain [{a}, {b}] must be a nondegenerate subinterval of [0, 1]",
                field="domain",
            )
        self.coeffs = coeffs
        self.a = a
        self.b = b

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def domain(self) -> Tuple[float, float]:
        return (self.a, self.b)

    def _local(self, x: float) -> float:
        t = (x - self.a) / (self.b - self.a)
        if t < -EVAL_TOL or t > 1.0 + EVAL_TOL:
            raise DomainError(f"argument {x!r} lies outside [{self.a}, {self.b}]")
        return min(1.0, max(0.0, t))

    def eval(self, x: float) -> float:
        return _dc_eval(self.coeffs, self._local(x))

    __call__ = eval

    def derivative(self) -> "BernsteinPoly":
        """Derivative with respect to x (chain-rule factor 1/(b-a) included)."""
        n = self.degree
        if n == 0:
            return BernsteinPoly((0.0,), self.domain)
        scale = n / (self.b - self.a)
        d = tuple(scale * (self.coeffs[k + 1] - self.coeffs[k]) for k in range(n))
        return BernsteinPoly(d, self.domain)

    def elevate(self, r: int = 1) -> "BernsteinPoly":
        """Degree elevation by r; the function is unchanged."""
        if isinstance(r, bool) or not isinstance(r, int) or r < 1:
            raise DomainError(f"elevation count must be a positive integer, got {r!r}")
        c = list(self.coeffs)
        for _ in range(r):
            n = len(c) - 1
            out = [c[0]]
            for k in range(1, n + 1):
                w = k / (n + 1)
                out.append(w * c[k - 1] + (1.0 - w) * c[k])
            out.append(c[-1])
            c = out
        return BernsteinPoly(c, self.domain)

    def restrict(self, u: float, v: float) -> "BernsteinPoly":
        """The same function on [u, v], reparametrized by de Casteljau splits."""
        if not (self.a <= u < v <= self.b):
            raise DomainError(
                f"[{u}, {v}] is not a nondegenerate subinterval of [{self.a}, {self.b}]"
            )
        width = self.b - self.a
        tu = (u - self.a) / width
        tv = (v - self.a) / width
        c = self.coeffs
        if tu > 0.0:
            _, c = _dc_split(c, tu)
        if tv < 1.0:
            t2 = (tv - tu) / (1.0 - tu)
            c, _ = _dc_split(c, t2)
        return BernsteinPoly(c, (u, v))

    def to_json(self) -> dict:
        return {"type": "bernstein", "coeffs": list(self.coeffs)}

    def __repr__(self) -> str:
        return f"BernsteinPoly(degree={self.degree}, domain=({self.a:g}, {self.b:g}))"


class PiecewisePolynomial:
    """Bernstein pieces whose domains partition [0,1] and agree at the seams."""

    __slots__ = ("pieces", "_rights")

    def __init__(self, pieces: Sequence[BernsteinPoly]):
        pieces = tuple(pieces)
        if not pieces:
            raise InvalidInputError("need at least one piece", field="pieces")
        if pieces[0].a != 0.0:
            raise InvalidInputError("first piece must start at 0", field="pieces[0]")
        if pieces[-1].b != 1.0:
            raise InvalidInputError(
                "last piece must end at 1", field=f"pieces[{len(pieces) - 1}]"
            )
        scale = max(1.0, max(abs(c) for p in pieces for c in p.coeffs))
        for i in range(1, len(pieces)):
            if pieces[i].a != pieces[i - 1].b:
                raise InvalidInputError(
                    "pieces must share endpoints in order", field=f"pieces[{i}]"
                )
            gap = abs(pieces[i].coeffs[0] - pieces[i - 1].coeffs[-1])
            if gap > EVAL_TOL * scale:
                raise InvalidInputError(
                    f"pieces disagree by {gap:g} at x={pieces[i].a!r}",
                    field=f"pieces[{i}]",
                )
        self.pieces = pieces
        self._rights = tuple(p.b for p in pieces)

    def eval(self, x: float) -> float:
        _check_unit_interval(x)
        i = bisect.bisect_left(self._rights, x)
        return self.pieces[i].eval(x)

    __call__ = eval

    def __repr__(self) -> str:
        return f"PiecewisePolynomial({len(self.pieces)} pieces)"


class CriticalSet:
    """Sorted, deduplicated points of varying monotonicity with source tags."""

    __slots__ = ("points", "tags")

    def __init__(self, entries: Iterable[Tuple[float, str]], tol: float = 1e-12):
        ordered = sorted(entries, key=lambda e: (e[0], _TAG_ORDER.get(e[1], 9)))
        points: List[float] = []
        tags: List[str] = []
        for x, tag in ordered:
            if points and x - points[-1] <= tol:
                # keep the higher-priority tag for coincident points
                if _TAG_ORDER.get(tag, 9) < _TAG_ORDER.get(tags[-1], 9):
                    tags[-1] = tag
                continue
            points.append(x)
            tags.append(tag)
        self.points = tuple(points)
        self.tags = tuple(tags)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __repr__(self) -> str:
        inner = ", ".join(f"{x:g}:{t}" for x, t in zip(self.points, self.tags))
        return f"CriticalSet({inner})"


# -- derivative sign analysis ---------------------------------------------


def _sign_change_params(dcoeffs: Sequence[float], tol: float) -> List[float]:
    """Parameters in (0,1) where the Bernstein-coefficient polynomial changes
    sign.  Touch points (no sign change) are excluded: a reported root needs a
    sign-certified panel on each side, with opposite signs.
    """
    dscale = max(abs(c) for c in dcoeffs)
    if dscale == 0.0:
        return []
    zcut = 1e-12 * max(1.0, dscale)
    panels: List[Tuple[float, float, int | None]] = []
    budget = [_MAX_PANELS]

    def visit(lo: float, hi: float, c: Sequence[float], depth: int) -> None:
        budget[0] -= 1
        if budget[0] < 0 or depth > _MAX_DEPTH:
            raise ResourceError(
                f"derivative sign analysis stalled on panel [{lo:.17g}, {hi:.17g}]"
            )
        cmin = min(c)
        cmax = max(c)
        if cmin >= -zcut and cmax <= zcut:
            panels.append((lo, hi, None))  # numerically flat, no certificate
            return
        if cmin >= -zcut:
            panels.append((lo, hi, +1))
            return
        if cmax <= zcut:
            panels.append((lo, hi, -1))
            return
        if hi - lo <= tol:
            panels.append((lo, hi, None))
            return
        left, right = _dc_split(c, 0.5)
        mid = 0.5 * (lo + hi)
        visit(lo, mid, left, depth + 1)
        visit(mid, hi, right, depth + 1)

    visit(0.0, 1.0, dcoeffs, 0)

    def value(t: float) -> float:
        return _dc_eval(dcoeffs, t)

    def refine(lo: float, hi: float, sign_left: int) -> float:
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            v = value(mid)
            s = +1 if v > zcut else (-1 if v < -zcut else 0)
            if s == 0:
                return mid
            if s == sign_left:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    roots: List[float] = []
    i = 0
    prev_sign: int | None = None
    prev_hi = 0.0
    while i < len(panels):
        lo, hi, sign = panels[i]
        if sign is not None:
            if prev_sign is not None and sign != prev_sign:
                if lo > prev_hi:
                    roots.append(refine(prev_hi, lo, prev_sign))
                else:
                    roots.append(lo)  # adjacent certified panels meet on the root
            prev_sign = sign
            prev_hi = hi
        i += 1
    return [r for r in roots if tol < r < 1.0 - tol]


def isolate_extrema(p: BernsteinPoly, tol: float = 1e-12) -> CriticalSet:
    """Interior points where p changes monotonicity, plus the domain endpoints.

    Roots of the derivative with even multiplicity (coefficient sign
    variations but no actual sign change) are excluded.
    """
    if tol <= 0:
        raise DomainError(f"tolerance must be positive, got {tol!r}")
    entries: List[Tuple[float, str]] = [(p.a, TAG_ENDPOINT), (p.b, TAG_ENDPOINT)]
    n = p.degree
    if n >= 1:
        dc = tuple(p.coeffs[k + 1] - p.coeffs[k] for k in range(n))
        cscale = max(1.0, max(abs(c) for c in p.coeffs))
        # Derivative noise from O(n) convex combinations of O(cscale)
        # coefficients is below this; treat such derivatives as identically 0.
        noise_floor = n * 1e-12 * cscale
        if max(abs(c) for c in dc) > noise_floor:
            width = p.b - p.a
            local_tol = min(0.25, tol / width)
            for t in _sign_change_params(dc, local_tol):
                entries.append((p.a + t * width, TAG_ROOT))
    return CriticalSet(entries, tol=tol)


# -- critical points ------------------------------------------------------


@singledispatch
def critical_points(f) -> CriticalSet:
    """Points of varying monotonicity (plus endpoints) for a function model."""
    raise InvalidInputError(f"unsupported function type {type(f).__name__}")


@critical_points.register
def _(f: PiecewiseLinear) -> CriticalSet:
    entries = [(0.0, TAG_ENDPOINT), (1.0, TAG_ENDPOINT)]
    slopes = [
        (f.ys[i + 1] - f.ys[i]) / (f.xs[i + 1] - f.xs[i]) for i in range(len(f.xs) - 1)
    ]
    sign = lambda s: (s > 0) - (s < 0)
    for i in range(1, len(slopes)):
        if sign(slopes[i]) != sign(slopes[i - 1]):
            entries.append((f.xs[i], TAG_BREAKPOINT))
    return CriticalSet(entries)


@critical_points.register
def _(f: StepFunction) -> CriticalSet:
    entries = [(0.0, TAG_ENDPOINT), (1.0, TAG_ENDPOINT)]
    entries.extend((c, TAG_BREAKPOINT) for c in f.cuts)
    entries.extend((m, TAG_REPRESENTATIVE) for m in f.piece_midpoints())
    return CriticalSet(entries)


@critical_points.register
def _(f: BernsteinPoly) -> CriticalSet:
    return isolate_extrema(f)


@critical_points.register
def _(f: PiecewisePolynomial) -> CriticalSet:
    entries: List[Tuple[float, str]] = [(0.0, TAG_ENDPOINT), (1.0, TAG_ENDPOINT)]
    for piece in f.pieces:
        if piece.a != 0.0:
            entries.append((piece.a, TAG_BREAKPOINT))
        inner = isolate_extrema(piece)
        for x, tag in zip(inner.points, inner.tags):
            if tag == TAG_ROOT:
                entries.append((x, TAG_ROOT))
    return CriticalSet(entries)


# -- combinations ---------------------------------------------------------


def subtract(p: BernsteinPoly, f: PiecewiseLinear) -> PiecewisePolynomial:
    """The difference p - f as one Bernstein piece per linear segment of f.

    Each segment of f is written as a degree-1 piece on its own interval,
    elevated to the degree of p, and subtracted coefficientwise from the
    matching restriction of p.
    """
    if p.domain != (0.0, 1.0):
        raise DomainError("p must be defined on all of [0, 1]")
    pieces = []
    for i in range(len(f.xs) - 1):
        u, v = f.xs[i], f.xs[i + 1]
        local = p.restrict(u, v) if (u, v) != (0.0, 1.0) else p
        seg = BernsteinPoly((f.ys[i], f.ys[i + 1]), (u, v))
        if p.degree > 1:
            seg = seg.elevate(p.degree - 1)
        elif p.degree == 0:
            local = local.elevate(1)
        coeffs = tuple(a - b for a, b in zip(local.coeffs, seg.coeffs))
        pieces.append(BernsteinPoly(coeffs, (u, v)))
    return PiecewisePolynomial(pieces)


# -- named functions ------------------------------------------------------


def named_function(name: str) -> PiecewiseLinear:
    """Built-in test functions addressable by name in the JSON schema."""
    if name == "identity":
        return PiecewiseLinear([(0.0, 0.0), (1.0, 1.0)])
    if name == "hat":
        return PiecewiseLinear([(0.0, 0.0), (0.5, 1.0), (1.0, 0.0)])
    if name == "counterexample":
        return PiecewiseLinear([(0.0, 0.0), (1 / 3, 0.5), (2 / 3, 0.5), (1.0, 1.0)])
    if name == "abs_mid":
        return PiecewiseLinear([(0.0, 0.5), (0.5, 0.0), (1.0, 0.5)])
    raise InvalidInputError(
        f"unknown named function {name!r}; expected identity, hat, counterexample "
        f"or abs_mid",
        field="name",
    )
