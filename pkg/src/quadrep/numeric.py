"""Floating-point certification of quadric-map structure.

Everything here is a numeric shadow of facts the exact layer either proved
(order certificates imply the quadric residual scans) or cannot see at all:
the retraction of the quadric onto its real sphere, hemisphere preservation
of suspensions, topological degree on S^1 and S^2, and the Hopf invariant
of maps S^3 -> S^2 computed as the linking number of two regular-value
preimage circles.

All sampling is seeded and all reductions run over fixed-size chunks in a
fixed order, so results are reproducible and independent of the worker
thread count.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .maps import (
    DimensionMismatch,
    PolyMap,
    PreconditionError,
    SuspensionNode,
)


class NumericError(Exception):
    """A numeric certification failed its tolerance or regularity contract."""


# ------------------------------------------------------------------ threads

_thread_override: Optional[int] = None
_CHUNK = 2048


def set_thread_count(n: Optional[int]):
    """Worker threads for chunked scans; None restores the default."""
    global _thread_override
    _thread_override = n


def thread_count() -> int:
    if _thread_override is not None:
        return max(1, _thread_override)
    env = os.environ.get("QUADREP_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def _chunked_max(n: int, work: Callable[[slice], float]) -> float:
    """Max of work(chunk) over fixed chunks; parallel but order-deterministic."""
    slices = [slice(i, min(i + _CHUNK, n)) for i in range(0, n, _CHUNK)]
    workers = thread_count()
    if workers <= 1 or len(slices) <= 1:
        results = [work(s) for s in slices]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(work, slices))
    return max(results, default=0.0)


# ----------------------------------------------------------------- sampling


def sample_sphere(n: int, count: int, seed: int = 0) -> np.ndarray:
    """Seeded uniform samples on S^n in R^(n+1), unit norm to rounding."""
    if n < 1:
        raise ValueError("sphere dimension must be at least 1")
    rng = np.random.default_rng(seed)
    out = rng.normal(size=(count, n + 1))
    norms = np.linalg.norm(out, axis=1, keepdims=True)
    # a zero draw has probability zero but would poison the division
    bad = norms[:, 0] < 1e-12
    while np.any(bad):
        out[bad] = rng.normal(size=(int(bad.sum()), n + 1))
        norms = np.linalg.norm(out, axis=1, keepdims=True)
        bad = norms[:, 0] < 1e-12
    return out / norms


def sample_quadric(m: int, count: int, seed: int = 0, spread: float = 0.35) -> np.ndarray:
    """Seeded points of the complex quadric q = 1 in C^m, exact to rounding.

    Sampling goes through the tangent-bundle picture: draw a unit vector v
    and a tangent vector w orthogonal to it, then x = sqrt(|w|^2 + 1) * v,
    z = x + i w lands on the quadric because |x|^2 - |w|^2 = 1 and x.w = 0.

    Tangent norms are drawn uniformly in [0, spread], a hard cap rather than
    a Gaussian tail: the quadric is unbounded and sum-of-squares values of
    an order-k map grow like |z|^(2k), so for the order-43 catalog maps a
    single far-out sample would drown the 1e-9 residual contract in float
    cancellation noise.  The cap is a sampling choice; the exact layer is
    unaffected by it.
    """
    if m < 2:
        raise ValueError("complex quadric sampling needs m >= 2")
    rng = np.random.default_rng(seed)
    v = rng.normal(size=(count, m))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    w = rng.normal(size=(count, m))
    w /= np.linalg.norm(w, axis=1, keepdims=True)
    w *= spread * rng.uniform(0.0, 1.0, size=(count, 1))
    w -= np.sum(w * v, axis=1, keepdims=True) * v
    x = np.sqrt(np.sum(w * w, axis=1, keepdims=True) + 1.0) * v
    return x + 1j * w


def quadric_residual(points: np.ndarray) -> np.ndarray:
    """|q(p) - 1| for each row."""
    Z = np.asarray(points, dtype=complex)
    if Z.ndim == 1:
        Z = Z[None, :]
    return np.abs(np.sum(Z * Z, axis=1) - 1.0)


@dataclass
class QuadricPoint:
    """A floating point of the quadric together with its residual."""

    coords: np.ndarray
    residual: float

    @classmethod
    def of(cls, coords) -> "QuadricPoint":
        c = np.asarray(coords, dtype=complex).ravel()
        return cls(c, float(quadric_residual(c)[0]))


def _coerce_quadric_point(p, tol: float = 1e-6) -> np.ndarray:
    qp = p if isinstance(p, QuadricPoint) else QuadricPoint.of(p)
    if qp.residual >= tol:
        raise NumericError(f"point is off the quadric: residual {qp.residual:.3e} >= {tol:.0e}")
    return qp.coords


# ------------------------------------------------- retraction and tangents


def sphere_retraction(p) -> np.ndarray:
    """Retraction of the quadric onto its real sphere.

    For p = x + i y on the quadric, returns (|y|^2 + 1)^(-1/2) x, a unit
    vector of R^m.  Real sphere points are fixed.
    """
    z = _coerce_quadric_point(p)
    x, y = z.real, z.imag
    return x / np.sqrt(np.sum(y * y) + 1.0)


def _retraction_batch(W: np.ndarray) -> np.ndarray:
    x, y = W.real, W.imag
    scale = 1.0 / np.sqrt(np.sum(y * y, axis=1) + 1.0)
    return scale[:, None] * x


def retraction_homotopy_residual(m: int, samples: int = 100, tsteps: int = 11, seed: int = 0) -> float:
    """Max real-form quadric residual along the retraction homotopy.

    The homotopy scales the imaginary part by (1 - t) and rescales the real
    part to stay on the quadric:

        H(x, y, t) = ( sqrt((1-t)^2 |y|^2 + 1) / sqrt(|y|^2 + 1) * x, (1-t) y ).

    At t = 0 it is the identity, at t = 1 the retraction onto the sphere.
    The residual of the real quadric equations (|x|^2 - |y|^2 - 1 and x.y)
    stays at rounding level for every t.
    """
    if m < 2:
        raise ValueError("need m >= 2")
    Z = sample_quadric(m, samples, seed)
    x, y = Z.real, Z.imag
    ysq = np.sum(y * y, axis=1)
    worst = 0.0
    for t in np.linspace(0.0, 1.0, tsteps):
        scale = np.sqrt((1 - t) ** 2 * ysq + 1.0) / np.sqrt(ysq + 1.0)
        xt = scale[:, None] * x
        yt = (1 - t) * y
        r1 = np.abs(np.sum(xt * xt, axis=1) - np.sum(yt * yt, axis=1) - 1.0)
        r2 = np.abs(np.sum(xt * yt, axis=1))
        worst = max(worst, float(r1.max(initial=0.0)), float(r2.max(initial=0.0)))
    return worst


def tangent_lift(p) -> tuple[np.ndarray, np.ndarray]:
    """Quadric point -> (v, w) in the tangent bundle of the sphere.

    v = (|y|^2 + 1)^(-1/2) x is a unit vector and w = y is tangent to the
    sphere at v; this is the diffeomorphism between the quadric and TS^(m-1).
    """
    z = _coerce_quadric_point(p)
    x, y = z.real, z.imag
    v = x / np.sqrt(np.sum(y * y) + 1.0)
    return v, y.copy()


def tangent_unlift(v, w) -> np.ndarray:
    """Inverse of tangent_lift: x = sqrt(|w|^2 + 1) v, z = x + i w."""
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    return np.sqrt(np.sum(w * w) + 1.0) * v + 1j * w


# -------------------------------------------------------------------- scans


def quadric_residual_scan(mapping, samples: int = 10_000, seed: int = 0) -> float:
    """Max |q(F(p)) - 1| over sampled real sphere and complex quadric points.

    Accepts anything with ``m`` and ``eval_batch`` (PolyMap, BlendedMap).
    For maps with an exact order certificate this is a floating cross-check;
    for blends it is the primary evidence.
    """
    m = mapping.m
    n_real = samples // 2
    n_cplx = samples - n_real
    real_pts = sample_sphere(m - 1, n_real, seed).astype(complex)
    cplx_pts = sample_quadric(m, n_cplx, seed + 1)
    pts = np.concatenate([real_pts, cplx_pts], axis=0)

    def work(sl: slice) -> float:
        W = mapping.eval_batch(pts[sl])
        return float(np.abs(np.sum(W * W, axis=1) - 1.0).max(initial=0.0))

    return _chunked_max(len(pts), work)


@dataclass
class HemisphereResult:
    passed: bool
    max_tail_deviation: float
    min_u_scale: float
    equator_max: float
    sign_violations: int

    def __bool__(self):
        return self.passed


def hemisphere_check(pmap: PolyMap, samples: int = 1000, seed: int = 0, tol: float = 1e-9) -> HemisphereResult:
    """Structure check for maps built by suspension.

    On real sphere points (z, u) the appended block of the image must be
    c_u(1, |z|^2) * u with c_u positive, so the map fixes the equator
    (u = 0) setwise and preserves both hemispheres coordinatewise in u.
    """
    if not isinstance(pmap.node, SuspensionNode):
        raise PreconditionError("hemisphere check needs a map built by suspend (lineage missing)")
    node = pmap.node
    ell = node.ell
    m0 = node.f.m
    r0 = pmap.r - ell

    X = sample_sphere(pmap.m - 1, samples, seed)
    z, u = X[:, :m0], X[:, m0:]
    W = pmap.eval_batch(X.astype(complex))
    s = np.sum(X * X, axis=1)
    t = np.sum(z * z, axis=1)
    st = np.stack([s, t], axis=1).astype(complex)
    scale = node.triple.u_coeff.eval_batch(st).real

    tail = W[:, r0:]
    deviation = float(np.abs(tail - scale[:, None] * u).max(initial=0.0))
    min_scale = float(scale.min(initial=np.inf))
    active = np.abs(u) > 1e-12
    signs_ok = np.sign(tail.real) == np.sign(u)
    violations = int(np.count_nonzero(active & ~signs_ok))

    equator = np.concatenate(
        [sample_sphere(m0 - 1, max(samples // 10, 8), seed + 7), np.zeros((max(samples // 10, 8), ell))],
        axis=1,
    )
    eq_tail = pmap.eval_batch(equator.astype(complex))[:, r0:]
    equator_max = float(np.abs(eq_tail).max(initial=0.0))

    passed = deviation < tol and min_scale > 0.0 and violations == 0 and equator_max == 0.0
    return HemisphereResult(passed, deviation, min_scale, equator_max, violations)


# ------------------------------------------------------------------ degrees


@dataclass
class DegreeResult:
    value: int
    defect: float


def _require_sphere_map(pmap, tol: float = 1e-6):
    residual = quadric_residual_scan(pmap, samples=512, seed=0)
    if residual >= tol:
        raise NumericError(
            f"map does not hold the quadric: residual {residual:.3e} >= {tol:.0e}"
        )


def winding_degree(pmap, samples: int = 4096) -> DegreeResult:
    """Topological degree of a circle self-map by angle accumulation.

    Follows t -> retraction(F(cos t, sin t)) around the circle, accumulating
    minimal angle differences; the total divided by 2 pi is the degree.
    """
    if pmap.m != 2 or pmap.r != 2:
        raise DimensionMismatch("winding degree needs a self-map of the circle quadric (m = r = 2)")
    _require_sphere_map(pmap)
    t = np.linspace(0.0, 2 * np.pi, samples, endpoint=False)
    P = np.stack([np.cos(t), np.sin(t)], axis=1).astype(complex)
    H = _retraction_batch(pmap.eval_batch(P))
    angles = np.arctan2(H[:, 1], H[:, 0])
    steps = np.diff(angles, append=angles[:1])
    steps = (steps + np.pi) % (2 * np.pi) - np.pi
    total = float(steps.sum()) / (2 * np.pi)
    value = int(round(total))
    defect = abs(total - value)
    if defect >= 0.01:
        raise NumericError(f"winding accumulation defect {defect:.4f} >= 0.01; increase samples")
    return DegreeResult(value, defect)


def _eval_jacobian_batch(pmap: PolyMap, jac, P: np.ndarray) -> np.ndarray:
    rows = []
    for row in jac:
        rows.append(np.stack([poly.eval_batch(P) for poly in row], axis=1))
    return np.stack(rows, axis=1)  # [N, r, m]


def _h_and_directional(pmap, jac, P: np.ndarray, directions: list[np.ndarray]):
    """Retraction composed with the map and its directional derivatives.

    P holds real points; each direction is a real [N, m] array of tangent
    vectors.  Returns h [N, 3] and one [N, 3] derivative per direction.
    """
    W = pmap.eval_batch(P.astype(complex))
    J = _eval_jacobian_batch(pmap, jac, P.astype(complex))
    x, y = W.real, W.imag
    s = 1.0 / np.sqrt(np.sum(y * y, axis=1) + 1.0)
    h = s[:, None] * x
    outs = []
    for d in directions:
        dW = np.einsum("nri,ni->nr", J, d.astype(complex))
        dx, dy = dW.real, dW.imag
        ydy = np.sum(y * dy, axis=1)
        dh = s[:, None] * dx - (s**3 * ydy)[:, None] * x
        outs.append(dh)
    return h, outs


def sphere_degree(pmap: PolyMap, grid: tuple[int, int] = (400, 200)) -> DegreeResult:
    """Topological degree of a 2-sphere self-map by Jacobian quadrature.

    deg = (1/4pi) integral of h . (dh/dtheta x dh/dphi) over a midpoint
    latitude-longitude grid, with h the retraction composed with the map.
    The area weight sin(theta) is carried by dP/dphi itself, and midpoint
    nodes keep the poles out of the grid.
    """
    if pmap.m != 3 or pmap.r != 3:
        raise DimensionMismatch("sphere degree needs a self-map of the 2-sphere quadric (m = r = 3)")
    _require_sphere_map(pmap)
    jac = pmap.jacobian()
    nphi, ntheta = grid
    theta = (np.arange(ntheta) + 0.5) * np.pi / ntheta
    phi = (np.arange(nphi) + 0.5) * 2 * np.pi / nphi
    T, F = np.meshgrid(theta, phi, indexing="ij")
    T, F = T.ravel(), F.ravel()
    st, ct, sf, cf = np.sin(T), np.cos(T), np.sin(F), np.cos(F)
    P = np.stack([st * cf, st * sf, ct], axis=1)
    dP_t = np.stack([ct * cf, ct * sf, -st], axis=1)
    dP_f = np.stack([-st * sf, st * cf, np.zeros_like(T)], axis=1)
    h, (h_t, h_f) = _h_and_directional(pmap, jac, P, [dP_t, dP_f])
    integrand = np.einsum("ni,ni->n", h, np.cross(h_t, h_f))
    cell = (np.pi / ntheta) * (2 * np.pi / nphi)
    total = float(integrand.sum()) * cell / (4 * np.pi)
    value = int(round(total))
    defect = abs(total - value)
    if defect >= 0.05:
        raise NumericError(f"degree quadrature defect {defect:.4f} >= 0.05; refine the grid")
    return DegreeResult(value, defect)


# ----------------------------------------------------- preimages and linking


@dataclass
class TracedCurve:
    """A closed preimage curve on S^3 for one regular value on S^2."""

    points: np.ndarray          # [N, 4] unit vectors
    closed: bool
    value: np.ndarray           # the regular value in R^3


class _RankDrop(Exception):
    pass


def _orthonormal_complement(c: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    probe = np.zeros(3)
    probe[int(np.argmin(np.abs(c)))] = 1.0
    e1 = probe - np.dot(probe, c) * c
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(c, e1)
    return e1, e2


class _PreimageSystem:
    """Constraint system for h(p) = c on S^3 with h the retracted map."""

    def __init__(self, pmap: PolyMap, jac, value: np.ndarray):
        self.pmap = pmap
        self.jac = jac
        self.value = value
        self.e1, self.e2 = _orthonormal_complement(value)

    def h_of(self, p: np.ndarray) -> np.ndarray:
        W = self.pmap.eval_batch(p[None, :].astype(complex))
        x, y = W.real[0], W.imag[0]
        return x / np.sqrt(np.sum(y * y) + 1.0)

    def h_jac(self, p: np.ndarray):
        P = p[None, :]
        basis = [np.eye(4)[i][None, :] for i in range(4)]
        h, partials = _h_and_directional(self.pmap, self.jac, P, basis)
        return h[0], np.stack([d[0] for d in partials], axis=1)  # [3], [3, 4]

    def residual_and_jac(self, p: np.ndarray):
        h, Jh = self.h_jac(p)
        G = np.array(
            [np.dot(p, p) - 1.0, np.dot(self.e1, h), np.dot(self.e2, h)]
        )
        JG = np.vstack([2 * p, self.e1 @ Jh, self.e2 @ Jh])
        return G, JG, h

    def orient_fiber_tangent(self, p: np.ndarray, tau: np.ndarray) -> np.ndarray:
        """Fix the fiber orientation: tangent followed by a positively
        oriented lift of (e1, e2) must give the outward orientation of S^3.

        This is the convention that makes the linking number of two fibers
        equal the Hopf invariant, independent of tracing direction.
        """
        _, Jh = self.h_jac(p)
        _, _, vt = np.linalg.svd(np.vstack([p, tau]))
        u, v = vt[2], vt[3]
        lifted = np.array(
            [
                [self.e1 @ (Jh @ u), self.e1 @ (Jh @ v)],
                [self.e2 @ (Jh @ u), self.e2 @ (Jh @ v)],
            ]
        )
        sign = np.linalg.det(np.vstack([p, tau, u, v])) * np.linalg.det(lifted)
        return tau if sign > 0 else -tau

    def newton(self, p: np.ndarray, tol: float = 1e-10, max_iter: int = 60):
        p = p.copy()
        for _ in range(max_iter):
            G, JG, h = self.residual_and_jac(p)
            gmax = np.max(np.abs(G))
            if gmax < tol:
                if np.dot(h, self.value) <= 0.25:
                    return None  # converged to the antipodal sheet
                return p
            sv = np.linalg.svd(JG, compute_uv=False)
            if sv[-1] < 1e-8 * max(sv[0], 1e-12):
                if gmax < 1e-3:
                    # singular Jacobian right at the solution set: not regular
                    raise _RankDrop
                return None  # singular far from the solution set: seed fails
            p = p - JG.T @ np.linalg.solve(JG @ JG.T, G)
        return None

    def tangent(self, p: np.ndarray, previous: Optional[np.ndarray]) -> np.ndarray:
        _, JG, _ = self.residual_and_jac(p)
        sv = np.linalg.svd(JG, compute_uv=False)
        if sv[-1] < 1e-8 * sv[0]:
            raise _RankDrop
        _, _, vt = np.linalg.svd(JG)
        tau = vt[-1]
        if previous is not None and np.dot(tau, previous) < 0:
            tau = -tau
        return tau


def _trace_curve(
    system: _PreimageSystem,
    start: np.ndarray,
    step: float = 1e-2,
    newton_tol: float = 1e-10,
    max_steps: int = 100_000,
) -> TracedCurve:
    """Predictor-corrector continuation along the preimage circle."""
    points = [start]
    p = start
    tau = system.orient_fiber_tangent(p, system.tangent(p, None))
    for n_steps in range(max_steps):
        predictor = p + step * tau
        corrected = system.newton(predictor, tol=newton_tol)
        if corrected is None:
            raise NumericError("corrector failed to converge during curve tracing")
        tau = system.tangent(corrected, tau)
        p = corrected
        points.append(p)
        if n_steps >= 5 and np.linalg.norm(p - start) < 0.9 * step:
            return TracedCurve(np.array(points), True, system.value.copy())
    raise NumericError("curve failed to close within the step budget")


def _preimage_curves(
    pmap: PolyMap,
    jac,
    value: np.ndarray,
    seed: int,
    n_seeds: int = 64,
    step: float = 1e-2,
) -> list[TracedCurve]:
    system = _PreimageSystem(pmap, jac, value)
    seeds = sample_sphere(3, n_seeds, seed)
    curves: list[TracedCurve] = []
    rank_drops = 0
    for raw in seeds:
        try:
            refined = system.newton(raw.copy(), max_iter=80)
        except _RankDrop:
            rank_drops += 1
            continue
        if refined is None:
            continue
        if any(np.min(np.linalg.norm(c.points - refined, axis=1)) < 5 * step for c in curves):
            continue
        try:
            curves.append(_trace_curve(system, refined, step=step))
        except _RankDrop:
            rank_drops += 1
            continue
        if len(curves) >= 8:
            break
    if not curves and rank_drops:
        # every solution hit a Jacobian rank drop: the value is not regular
        raise _RankDrop
    return curves


def _stereographic_pole(curve_sets: Sequence[np.ndarray], seed: int) -> np.ndarray:
    candidates = [v for i in range(4) for v in (np.eye(4)[i], -np.eye(4)[i])]
    candidates += list(sample_sphere(3, 16, seed + 101))
    allpts = np.concatenate(curve_sets, axis=0)
    best, best_gap = None, -1.0
    for c in candidates:
        gap = float(np.min(np.linalg.norm(allpts - c, axis=1)))
        if gap > best_gap:
            best, best_gap = c, gap
    if best_gap < 0.05:
        raise NumericError("no stereographic pole clear of the preimage curves")
    return best


def _project_curve(points: np.ndarray, pole: np.ndarray) -> np.ndarray:
    basis = np.linalg.svd(np.eye(4) - np.outer(pole, pole))[0][:, :3]
    # keep the projection consistently oriented regardless of the pole
    if np.linalg.det(np.hstack([basis, pole[:, None]])) < 0:
        basis = basis.copy()
        basis[:, 2] = -basis[:, 2]
    denom = 1.0 - points @ pole
    return (points @ basis) / denom[:, None]


def _resample_closed(points: np.ndarray, n: int) -> np.ndarray:
    closed = np.vstack([points, points[:1]])
    seg = np.linalg.norm(np.diff(closed, axis=0), axis=1)
    arc = np.concatenate([[0.0], np.cumsum(seg)])
    targets = np.linspace(0.0, arc[-1], n, endpoint=False)
    out = np.empty((n, points.shape[1]))
    for j in range(points.shape[1]):
        out[:, j] = np.interp(targets, arc, closed[:, j])
    return out


def gauss_linking(curve_a: np.ndarray, curve_b: np.ndarray) -> float:
    """Gauss double integral for two closed polylines in R^3.

    L = (1/4pi) sum over segment pairs of (m_a - m_b) . (d_a x d_b) / |m_a - m_b|^3
    with segment midpoints m and segment vectors d.
    """
    da = np.roll(curve_a, -1, axis=0) - curve_a
    db = np.roll(curve_b, -1, axis=0) - curve_b
    ma = curve_a + da / 2
    mb = curve_b + db / 2
    total = 0.0
    rows = 256
    for i0 in range(0, len(ma), rows):
        sl = slice(i0, min(i0 + rows, len(ma)))
        diff = ma[sl][:, None, :] - mb[None, :, :]
        cross = np.cross(da[sl][:, None, :], db[None, :, :])
        num = np.einsum("abi,abi->ab", diff, cross)
        dist = np.linalg.norm(diff, axis=2)
        total += float(np.sum(num / dist**3))
    return total / (4 * np.pi)


@dataclass
class HopfResult:
    value: int
    defect: float
    curves: list[TracedCurve] = field(default_factory=list)


def hopf_invariant(
    pmap: PolyMap,
    values: Optional[tuple[np.ndarray, np.ndarray]] = None,
    seed: int = 0,
    curve_points: int = 2000,
    max_retries: int = 5,
) -> HopfResult:
    """Hopf invariant of a map S^3 -> S^2 by preimage linking.

    Traces the preimage circles of two regular values of the retracted map,
    projects them stereographically and evaluates the Gauss linking
    integral.  A constant-like map has no preimage for generic values; the
    invariant is 0 by convention in that case.  Rank drops along a curve
    mean the value was not regular; the values are then perturbed and the
    computation retried.
    """
    if pmap.m != 4 or pmap.r != 3:
        raise DimensionMismatch("hopf invariant needs a map C^4 -> C^3")
    jac = pmap.jacobian()
    if values is None:
        v1, v2 = np.array([1.0, 0.0, 0.0]), np.array([-1.0, 0.0, 0.0])
    else:
        v1, v2 = (np.asarray(v, dtype=float) for v in values)
        v1, v2 = v1 / np.linalg.norm(v1), v2 / np.linalg.norm(v2)

    for attempt in range(max_retries):
        try:
            curves_a = _preimage_curves(pmap, jac, v1, seed + attempt)
            curves_b = _preimage_curves(pmap, jac, v2, seed + attempt + 13)
            if not curves_a and not curves_b:
                return HopfResult(0, 0.0, [])
            if not curves_a or not curves_b:
                raise NumericError("only one of the two regular values has a preimage curve")
            pole = _stereographic_pole(
                [c.points for c in curves_a + curves_b], seed + attempt
            )
            total = 0.0
            for ca in curves_a:
                pa = _resample_closed(_project_curve(ca.points, pole), curve_points)
                for cb in curves_b:
                    pb = _resample_closed(_project_curve(cb.points, pole), curve_points)
                    total += gauss_linking(pa, pb)
            value = int(round(total))
            defect = abs(total - value)
            if defect >= 0.05:
                raise NumericError(f"linking defect {defect:.4f} >= 0.05")
            return HopfResult(value, defect, curves_a + curves_b)
        except _RankDrop:
            # nudge both values and retry with a fresh seed offset
            rot = _perturbation_rotation(seed + attempt)
            v1, v2 = rot @ v1, rot @ v2
    raise NumericError("regular-value preimage tracing kept hitting rank drops")


def _perturbation_rotation(seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    axis = rng.normal(size=3)
    axis /= np.linalg.norm(axis)
    angle = 0.15
    K = np.array(
        [[0, -axis[2], axis[1]], [axis[2], 0, -axis[0]], [-axis[1], axis[0], 0]]
    )
    return np.eye(3) + np.sin(angle) * K + (1 - np.cos(angle)) * (K @ K)


# -------------------------------------------------------------- homotopies


def even_order_nullhomotopy_residual(
    pmap, tsteps: int = 11, samples: int = 200, seed: int = 0
) -> float:
    """Quadric residual along the even-order contraction loop.

    For a map of even order 2r the path g(t) = exp(i pi t) from 1 to -1
    defines H(z, t) = g(t)^(-2r) F(g(t) z), a homotopy on the quadric from
    F to F(-z).  Odd orders are rejected: the exponent -2r must cancel the
    full order for q(H) to stay 1, and that cancellation is exactly what
    fails on odd-order maps.
    """
    order = getattr(pmap, "order", None)
    if order is None or order % 2 != 0 or order == 0:
        raise PreconditionError("the contraction loop needs a certified even order >= 2")
    Z = sample_quadric(pmap.m, samples, seed)
    worst = 0.0
    for t in np.linspace(0.0, 1.0, tsteps):
        gamma = np.exp(1j * np.pi * t)
        W = pmap.eval_batch(gamma * Z) * gamma ** (-order)
        res = np.abs(np.sum(W * W, axis=1) - 1.0)
        worst = max(worst, float(res.max(initial=0.0)))
    return worst
