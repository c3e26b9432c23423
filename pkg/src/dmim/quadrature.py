"""Adaptive Gauss-Kronrod quadrature over finite and infinite intervals.

The integrator keeps a pool of subintervals, each carrying a 15-point
Kronrod estimate and the embedded 7-point Gauss estimate.  Intervals whose
local error is above their share of the tolerance are bisected, all at once,
so that the integrand is called on large numpy batches instead of point by
point.

Infinite endpoints are removed by rational substitutions:

* ``(-inf, inf)``   ``x = s * t / (1 - t**2)`` on ``(-1, 1)``
* ``[p, inf)``      ``x = p + s * u / (1 - u)`` on ``[0, 1)``
* ``(-inf, p]``     ``x = p - s * u / (1 - u)`` on ``[0, 1)``

Kronrod nodes never touch interval endpoints, so the singular points of the
maps are never evaluated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import InvalidDomain, InvalidParams, NonConvergent, NonFinite

DEFAULT_ABS_TOL = 1e-12
DEFAULT_REL_TOL = 1e-10
DEFAULT_LIMIT = 10**6

_EPS = np.finfo(float).eps
_TINY = np.finfo(float).tiny

# Kronrod abscissae on [0, 1), descending; odd indices are the Gauss nodes.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

NODES = np.concatenate([-_XGK[:-1], [0.0], _XGK[-2::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], [_WGK[-1]], _WGK[-2::-1]])
GAUSS_WEIGHTS = np.zeros(15)
GAUSS_WEIGHTS[[1, 3, 5]] = _WG[:3]
GAUSS_WEIGHTS[7] = _WG[3]
GAUSS_WEIGHTS[[9, 11, 13]] = _WG[2::-1]


@dataclass(frozen=True)
class Interval:
    """Integration range; either endpoint may be infinite."""

    lower: float
    upper: float

    def __post_init__(self):
        lo, hi = float(self.lower), float(self.upper)
        if math.isnan(lo) or math.isnan(hi) or not lo < hi:
            raise InvalidDomain(f"need lower < upper, got [{self.lower}, {self.upper}]")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @property
    def is_finite(self) -> bool:
        return math.isfinite(self.lower) and math.isfinite(self.upper)

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def __contains__(self, x) -> bool:
        return self.lower <= x <= self.upper


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    subdivisions: int


# --- variable changes -------------------------------------------------------

class _Segment:
    """A piece of the domain with its map from parameter space to x."""


    def __init__(self, lo, hi, scale=1.0, anchor=0.0):
        self.lo, self.hi = lo, hi
        self.scale, self.anchor = scale, anchor

    def to_x(self, u):
        return u, np.ones_like(u)


class _Finite(_Segment):
    pass


class _Both(_Segment):

    def to_x(self, t):
        d = 1.0 - t * t
        x = self.anchor + self.scale * t / d
        return x, self.scale * (1.0 + t * t) / (d * d)


class _Upper(_Segment):
    # [anchor, inf)

    def to_x(self, u):
        d = 1.0 - u
        return self.anchor + self.scale * u / d, self.scale / (d * d)


class _Lower(_Segment):
    # (-inf, anchor]

    def to_x(self, u):
        d = 1.0 - u
        return self.anchor - self.scale * u / d, self.scale / (d * d)


def _segments(domain: Interval, points, scale) -> list[_Segment]:
    lo, hi = domain.lower, domain.upper
    cuts = sorted({float(p) for p in (points or ()) if lo < p < hi and math.isfinite(p)})
    if math.isinf(lo) and math.isinf(hi) and not cuts:
        return [_Both(-1.0, 1.0, scale)]
    edges = ([lo] if math.isfinite(lo) else []) + cuts + ([hi] if math.isfinite(hi) else [])
    segs: list[_Segment] = []
    if math.isinf(lo):
        segs.append(_Lower(0.0, 1.0, scale, edges[0]))
    segs.extend(_Finite(x0, x1) for x0, x1 in zip(edges[:-1], edges[1:]))
    if math.isinf(hi):
        segs.append(_Upper(0.0, 1.0, scale, edges[-1]))
    return segs


# --- integrand evaluation ---------------------------------------------------

class _Integrand:
    """Batch evaluator that tolerates scalar-only callbacks."""

    def __init__(self, f, domain: Interval):
        self.f = f
        self.domain = domain
        self.vectorized = None

    def _call(self, x):
        if self.vectorized is None:
            try:
                y = np.asarray(self.f(x), dtype=float)
                y = np.broadcast_to(y, x.shape).copy()
                self.vectorized = True
                return y
            except (TypeError, ValueError):
                self.vectorized = False
        if self.vectorized:
            return np.broadcast_to(np.asarray(self.f(x), dtype=float), x.shape).copy()
        return np.array([float(self.f(float(v))) for v in x.ravel()]).reshape(x.shape)

    def __call__(self, x):
        inf_x = ~np.isfinite(x)
        xs = np.where(inf_x, 0.0, x)
        y = self._call(xs)
        y[inf_x] = 0.0
        bad = ~np.isfinite(y)
        if bad.any():
            y[bad] = self._retry_at_edges(xs[bad])
        return y

    def _retry_at_edges(self, xb):
        # Rounding can land a node exactly on a finite endpoint where the
        # density may be singular; step one ulp inside and try again.
        lo, hi = self.domain.lower, self.domain.upper
        moved = xb.copy()
        at_lo = xb <= lo
        at_hi = xb >= hi
        if not (at_lo | at_hi).all():
            raise NonFinite(f"integrand is not finite at x={xb[~(at_lo | at_hi)][0]!r}")
        moved[at_lo] = np.nextafter(lo, np.inf)
        moved[at_hi] = np.nextafter(hi, -np.inf)
        y = self._call(moved)
        if not np.isfinite(y).all():
            raise NonFinite(f"integrand is not finite next to the endpoint x={xb[0]!r}")
        return y


def _kronrod(seg_id, segs, a, b, fn):
    """Kronrod value and QUADPACK-style error estimate for each interval."""
    center = 0.5 * (a + b)
    half = 0.5 * (b - a)
    u = center[:, None] + half[:, None] * NODES[None, :]
    x = np.empty_like(u)
    jac = np.empty_like(u)
    # nodes that round onto u = 1 map to x = inf with an infinite Jacobian
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        for k, seg in enumerate(segs):
            rows = seg_id == k
            if rows.any():
                x[rows], jac[rows] = seg.to_x(u[rows])
        fx = fn(x)
        vals = np.where(fx == 0.0, 0.0, fx * jac)
    if not np.isfinite(vals).all():
        raise NonFinite("integrand times Jacobian overflowed")
    resk = vals @ KRONROD_WEIGHTS
    resg = vals @ GAUSS_WEIGHTS
    reskh = 0.5 * resk
    resabs = np.abs(vals) @ KRONROD_WEIGHTS
    resasc = np.abs(vals - reskh[:, None]) @ KRONROD_WEIGHTS
    hl = np.abs(half)
    value = resk * half
    err = np.abs((resk - resg) * half)
    resasc = resasc * hl
    resabs = resabs * hl
    scaled = np.where(
        (resasc != 0.0) & (err != 0.0),
        resasc * np.minimum(1.0, (200.0 * err / np.where(resasc == 0, 1, resasc)) ** 1.5),
        err,
    )
    floor = np.where(resabs > _TINY / (50 * _EPS), 50 * _EPS * resabs, 0.0)
    return value, np.maximum(scaled, floor)


def integrate(
    f: Callable,
    domain: Interval | Sequence[float],
    abs_tol: float = DEFAULT_ABS_TOL,
    rel_tol: float = DEFAULT_REL_TOL,
    *,
    points: Sequence[float] | None = None,
    scale: float = 1.0,
    limit: int = DEFAULT_LIMIT,
) -> QuadratureResult:
    """Integrate ``f`` over ``domain``.

    Parameters
    ----------
    f : callable
        Integrand.  Called with numpy arrays when it supports them, one
        float at a time otherwise.  Must decay at infinite endpoints.
    domain : Interval or (lower, upper)
    abs_tol, rel_tol : float
        The result satisfies ``error_estimate <= max(abs_tol, rel_tol*|value|)``.
    points : sequence of float, optional
        Interior breakpoints (modes, kinks, or where the mass sits).  With an
        infinite domain the tails are mapped from the outermost breakpoints.
    scale : float
        Length scale used by the infinite-tail substitutions.
    limit : int
        Maximum number of subintervals.

    Raises
    ------
    InvalidDomain, NonConvergent, NonFinite
    """
    if not isinstance(domain, Interval):
        domain = Interval(*domain)
    if not (abs_tol > 0 and rel_tol > 0):
        raise InvalidParams("tolerances must be positive")
    if not scale > 0:
        raise InvalidParams("scale must be positive")

    segs = _segments(domain, points, float(scale))
    fn = _Integrand(f, domain)
    a = np.array([s.lo for s in segs], dtype=float)
    b = np.array([s.hi for s in segs], dtype=float)
    seg_id = np.arange(len(segs))
    val, err = _kronrod(seg_id, segs, a, b, fn)
    count = len(segs)

    while True:
        total = float(np.sum(val))
        total_err = float(np.sum(err))
        tol = max(abs_tol, rel_tol * abs(total))
        if total_err <= tol:
            return QuadratureResult(total, total_err, int(val.size))

        share = tol / val.size
        split = err > share
        split[int(np.argmax(err))] = True
        mid = 0.5 * (a + b)
        tiny = np.abs(b - a) <= 4 * _EPS * np.maximum(np.abs(mid), _TINY)
        split &= ~tiny
        if not split.any():
            raise NonConvergent(
                f"roundoff limits accuracy: error {total_err:.3g} > tolerance {tol:.3g}"
            )
        n_new = int(split.sum())
        if count + n_new > limit:
            raise NonConvergent(
                f"subdivision budget of {limit} exhausted "
                f"(error {total_err:.3g} > tolerance {tol:.3g})"
            )
        count += n_new
        sa, sb, sm, sid = a[split], b[split], mid[split], seg_id[split]
        na = np.concatenate([sa, sm])
        nb = np.concatenate([sm, sb])
        nid = np.concatenate([sid, sid])
        nval, nerr = _kronrod(nid, segs, na, nb, fn)
        keep = ~split
        a = np.concatenate([a[keep], na])
        b = np.concatenate([b[keep], nb])
        seg_id = np.concatenate([seg_id[keep], nid])
        val = np.concatenate([val[keep], nval])
        err = np.concatenate([err[keep], nerr])
