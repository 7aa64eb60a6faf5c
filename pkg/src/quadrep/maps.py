"""Polynomial maps between complex affine quadrics and their certification.

A ``PolyMap`` is an r-tuple of polynomials in m variables, i.e. a polynomial
map C^m -> C^r.  The central notion is the multiplicative order of a map
against the quadratic form q(z) = z_1^2 + ... + z_m^2: a map f has order k
when q(f(z)) = q(z)^k identically, which forces f to send the affine quadric
q = 1 into the target quadric.  ``certify_order`` decides that identity
exactly, never numerically:

* full-expansion: expand q(f) - q^k and test for the zero polynomial;
* factored-expansion: for maps built by ``suspend`` or ``compose_maps``,
  reduce the identity to the exact sub-identities of the construction
  (children orders, orthogonality, the two-variable coefficient identity)
  which are expanded in full.  The gluing steps are instances of
  "composition with polynomials is a ring morphism";
* exact-evaluation: evaluate the difference on a full integer grid with
  per-variable point count exceeding the per-variable degree bound, a sound
  and complete zero test for polynomials.

Deep compositions in the torsion chain have components too large to expand
or even to store (the one-level suspension of the order-22 pair would need
billions of terms), so maps remember their construction as a structure node
and stay evaluable and certifiable even when their explicit component list
is out of reach.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .coefficients import SuspensionTriple, suspension_triple, verify_triple
from .exact import GR_I, GR_ONE, GaussianRational, Polynomial, mul_cost

# Product-count budget for a single full expansion, and point budget for the
# grid zero test.  Both are deliberate ceilings: beyond them the factored
# certificate is the honest route.
DEFAULT_EXPANSION_BUDGET = 5_000_000
DEFAULT_GRID_BUDGET = 200_000
DEFAULT_MATERIALIZE_BUDGET = 20_000_000


class MapError(Exception):
    pass


class DimensionMismatch(MapError):
    pass


class PreconditionError(MapError):
    pass


class InfeasibleError(MapError):
    """The requested exact computation exceeds its feasibility budget."""


class CatalogError(MapError):
    pass


@dataclass
class Certificate:
    """Outcome of an exact order / orthogonality verification."""

    claimed_order: Optional[int]
    method: str               # full-expansion | factored-expansion | exact-evaluation
    verdict: bool
    detail: dict = field(default_factory=dict)
    witness: Optional[str] = None

    def summary(self) -> dict:
        out = {
            "claimed_order": self.claimed_order,
            "method": self.method,
            "verdict": "pass" if self.verdict else "fail",
        }
        if self.detail:
            out["detail"] = {k: v for k, v in self.detail.items()}
        if self.witness:
            out["witness"] = self.witness
        return out


class _Budget:
    """Running product-count budget shared across one guarded computation."""

    def __init__(self, limit: int):
        self.limit = limit
        self.spent = 0

    def charge(self, amount: int):
        self.spent += amount
        if self.spent > self.limit:
            raise InfeasibleError(
                f"exact expansion budget exceeded ({self.spent} > {self.limit} coefficient products)"
            )


def _guarded_mul(a: Polynomial, b: Polynomial, budget: _Budget) -> Polynomial:
    budget.charge(mul_cost(a, b))
    return a * b


def _guarded_compose(outer: Polynomial, args: Sequence[Polynomial], budget: _Budget) -> Polynomial:
    """Budgeted variant of Polynomial.compose with shared power caching."""
    if len(args) != outer.nvars:
        raise ValueError("arity mismatch in composition")
    n2 = args[0].nvars
    pow_cache: list[dict[int, Polynomial]] = [{0: Polynomial.constant(n2, 1), 1: a} for a in args]

    def arg_power(i: int, e: int) -> Polynomial:
        cache = pow_cache[i]
        got = cache.get(e)
        if got is None:
            prev = arg_power(i, e - 1)
            got = _guarded_mul(prev, cache[1], budget)
            cache[e] = got
        return got

    total = Polynomial.zero(n2)
    for mono, coeff in outer.terms.items():
        piece = Polynomial.constant(n2, coeff)
        for i, e in enumerate(mono):
            if e:
                piece = _guarded_mul(piece, arg_power(i, e), budget)
        total = total + piece
    return total


# ----------------------------------------------------------------- q and b


def quadratic_form(m: int) -> Polynomial:
    """q(z) = z_1^2 + ... + z_m^2 in m variables."""
    if m < 1:
        raise ValueError("the quadratic form needs at least one variable")
    terms = {}
    for i in range(m):
        mono = [0] * m
        mono[i] = 2
        terms[tuple(mono)] = GR_ONE
    return Polynomial(m, terms)


def _leading_block_form(m: int, first: int) -> Polynomial:
    """z_1^2 + ... + z_first^2 viewed inside m variables."""
    terms = {}
    for i in range(first):
        mono = [0] * m
        mono[i] = 2
        terms[tuple(mono)] = GR_ONE
    return Polynomial(m, terms)


# ------------------------------------------------------------- structure


@dataclass
class SuspensionNode:
    f: "PolyMap"
    g: "PolyMap"
    triple: SuspensionTriple
    ell: int

    def eval_batch(self, Z: np.ndarray) -> np.ndarray:
        m0 = self.f.m
        z, u = Z[:, :m0], Z[:, m0:]
        s = np.sum(Z * Z, axis=1)
        t = np.sum(z * z, axis=1)
        st = np.stack([s, t], axis=1)
        fv = self.f.eval_batch(z)
        gv = self.g.eval_batch(z)
        b1 = self.triple.f_coeff.eval_batch(st)
        b2 = self.triple.g_coeff.eval_batch(st)
        rr = self.triple.u_coeff.eval_batch(st)
        head = b1[:, None] * fv + b2[:, None] * gv
        tail = rr[:, None] * u
        return np.concatenate([head, tail], axis=1)

    def eval_exact(self, point: Sequence[GaussianRational]) -> list[GaussianRational]:
        m0 = self.f.m
        z, u = list(point[:m0]), list(point[m0:])
        t = sum((v * v for v in z), start=GaussianRational(0))
        s = t + sum((v * v for v in u), start=GaussianRational(0))
        fv = self.f.eval_exact(z)
        gv = self.g.eval_exact(z)
        b1 = self.triple.f_coeff.eval_exact([s, t])
        b2 = self.triple.g_coeff.eval_exact([s, t])
        rr = self.triple.u_coeff.eval_exact([s, t])
        return [b1 * a + b2 * b for a, b in zip(fv, gv)] + [rr * v for v in u]

    def per_variable_bounds(self) -> tuple[int, ...]:
        coeff_deg = 2 * (self.triple.order - 1)
        fb = self.f.per_variable_bounds()
        gb = self.g.per_variable_bounds()
        zpart = [coeff_deg + max(a, b) for a, b in zip(fb, gb)]
        upart = [coeff_deg + 1] * self.ell
        return tuple(zpart + upart)

    def max_degree_bound(self) -> int:
        coeff_deg = 2 * (self.triple.order - 1)
        return coeff_deg + max(self.f.max_degree_bound(), self.g.max_degree_bound(), 1)


@dataclass
class CompositionNode:
    outer: "PolyMap"
    inner: "PolyMap"

    def eval_batch(self, Z: np.ndarray) -> np.ndarray:
        return self.outer.eval_batch(self.inner.eval_batch(Z))

    def eval_exact(self, point: Sequence[GaussianRational]) -> list[GaussianRational]:
        return self.outer.eval_exact(self.inner.eval_exact(point))

    def per_variable_bounds(self) -> tuple[int, ...]:
        od = self.outer.max_degree_bound()
        ib = self.inner.per_variable_bounds()
        return tuple(od * b for b in ib)

    def max_degree_bound(self) -> int:
        return self.outer.max_degree_bound() * self.inner.max_degree_bound()


class PolyMap:
    """Polynomial map C^m -> C^r with optional certified order and lineage.

    ``components`` is the explicit list of r polynomials when the map is
    small enough to store; ``node`` records how the map was built and keeps
    large maps evaluable and certifiable without materialized components.
    At least one of the two is always present.
    """

    def __init__(
        self,
        m: int,
        r: int,
        components: Optional[list[Polynomial]] = None,
        node: Optional[SuspensionNode | CompositionNode] = None,
        label: str = "",
        order: Optional[int] = None,
        certificate: Optional[Certificate] = None,
    ):
        if components is None and node is None:
            raise ValueError("a PolyMap needs explicit components or a structure node")
        if components is not None:
            if len(components) != r:
                raise DimensionMismatch("component count must equal the codomain dimension")
            for c in components:
                if c.nvars != m:
                    raise DimensionMismatch("every component must live in the domain variables")
        self.m = m
        self.r = r
        self.components = components
        self.node = node
        self.label = label
        self.order = order
        self.certificate = certificate
        # raw certificate summaries carried by an imported document, kept so
        # that export -> import -> export stays byte-identical
        self.document_certificates: Optional[list[dict]] = None

    def __repr__(self):
        state = "explicit" if self.components is not None else "structural"
        return f"PolyMap(m={self.m}, r={self.r}, order={self.order}, {state}, label={self.label!r})"

    @classmethod
    def explicit(cls, components: list[Polynomial], label: str, order=None, certificate=None) -> "PolyMap":
        if not components:
            raise ValueError("a map needs at least one component")
        return cls(
            m=components[0].nvars,
            r=len(components),
            components=list(components),
            label=label,
            order=order,
            certificate=certificate,
        )

    # ---------------------------------------------------------- evaluation

    def eval_batch(self, points) -> np.ndarray:
        Z = np.asarray(points, dtype=complex)
        single = Z.ndim == 1
        if single:
            Z = Z[None, :]
        if Z.shape[1] != self.m:
            raise DimensionMismatch(f"points have width {Z.shape[1]}, map domain is {self.m}")
        if self.node is not None:
            out = self.node.eval_batch(Z)
        else:
            out = np.stack([c.eval_batch(Z) for c in self.components], axis=1)
        return out[0] if single else out

    def eval_exact(self, point: Sequence) -> list[GaussianRational]:
        pt = [GaussianRational.coerce(v) for v in point]
        if len(pt) != self.m:
            raise DimensionMismatch("point length must match the domain dimension")
        if self.node is not None:
            return self.node.eval_exact(pt)
        return [c.eval_exact(pt) for c in self.components]

    # ------------------------------------------------------------- bounds

    def per_variable_bounds(self) -> tuple[int, ...]:
        if self.components is not None:
            bounds = [0] * self.m
            for c in self.components:
                for i, d in enumerate(c.per_variable_degrees()):
                    bounds[i] = max(bounds[i], d)
            return tuple(bounds)
        return self.node.per_variable_bounds()

    def max_degree_bound(self) -> int:
        if self.components is not None:
            return max((c.degree() for c in self.components), default=0)
        return self.node.max_degree_bound()

    def max_component_terms(self) -> Optional[int]:
        if self.components is None:
            return None
        return max(len(c) for c in self.components)

    def jacobian(self) -> list[list[Polynomial]]:
        """Exact partial derivatives [r][m]; needs explicit components."""
        if self.components is None:
            raise InfeasibleError("jacobian needs materialized components")
        return [[c.derivative(i) for i in range(self.m)] for c in self.components]


# -------------------------------------------------------------- b pairing


def bilinear_pairing(f: PolyMap, g: PolyMap, budget: int = DEFAULT_EXPANSION_BUDGET) -> Polynomial:
    """The polynomial sum_j f_j * g_j; f and g are b-orthogonal iff it is zero.

    When both maps are compositions with the same inner map, the pairing is
    computed on the outer pair and composed afterwards; in particular an
    outer pairing of zero settles the question without touching the (possibly
    huge) composed components.
    """
    if f.m != g.m or f.r != g.r:
        raise DimensionMismatch("b-pairing needs maps with equal domain and codomain dimensions")
    if (
        isinstance(f.node, CompositionNode)
        and isinstance(g.node, CompositionNode)
        and f.node.inner is g.node.inner
    ):
        outer = bilinear_pairing(f.node.outer, g.node.outer, budget)
        if outer.is_zero():
            return Polynomial.zero(f.m)
        if f.node.inner.components is None:
            raise InfeasibleError("nonzero outer pairing and no materialized inner components")
        tracker = _Budget(budget)
        return _guarded_compose(outer, f.node.inner.components, tracker)
    if f.components is None or g.components is None:
        raise InfeasibleError(
            "b-pairing needs materialized components (or a shared composition structure)"
        )
    tracker = _Budget(budget)
    total = Polynomial.zero(f.m)
    for a, b in zip(f.components, g.components):
        total = total + _guarded_mul(a, b, tracker)
    return total


# ---------------------------------------------------------- certification


_REFUTATION_IMAG_HALF = GaussianRational(1, Fraction(1, 2))


def _refutation_points(m: int) -> list[list[GaussianRational]]:
    """Deterministic exact points for fast disproof of a claimed identity.

    The first point has q = 4, so any wrong claimed order is caught there
    (4^a = 4^b forces a = b).
    """
    pts = []
    p0 = [GaussianRational(0)] * m
    p0[0] = GaussianRational(2)
    pts.append(p0)
    pts.append([GaussianRational(i + 1) for i in range(m)])
    p2 = [GaussianRational(1)] * m
    p2[0] = _REFUTATION_IMAG_HALF
    pts.append(p2)
    pts.append([GaussianRational(Fraction(1, i + 2)) for i in range(m)])
    return pts


def _difference_at(pmap: PolyMap, k: int, point: Sequence[GaussianRational]) -> GaussianRational:
    image = pmap.eval_exact(point)
    qv = sum((w * w for w in image), start=GaussianRational(0))
    qz = sum((v * v for v in point), start=GaussianRational(0))
    return qv - qz**k


def _refute(pmap: PolyMap, k: int) -> Optional[str]:
    for point in _refutation_points(pmap.m):
        diff = _difference_at(pmap, k, point)
        if not diff.is_zero():
            coords = ", ".join(v.canonical_str() for v in point)
            return f"q(f(p)) - q(p)^{k} = {diff.canonical_str()} at p = ({coords})"
    return None


def _expansion_cert(pmap: PolyMap, k: int, budget: _Budget) -> Certificate:
    """Certificate by exact expansion, factoring through the structure node
    when the explicit components are too large to square directly."""
    if pmap.components is not None:
        cost = sum(len(c) * (len(c) + 1) // 2 for c in pmap.components)
        if budget.spent + cost <= budget.limit:
            budget.charge(cost)
            total = Polynomial.zero(pmap.m)
            for c in pmap.components:
                total = total + c.square()
            diff = total - quadratic_form(pmap.m) ** k
            if diff.is_zero():
                return Certificate(
                    claimed_order=k,
                    method="full-expansion",
                    verdict=True,
                    detail={"difference_terms": 0, "expanded_products": budget.spent},
                )
            mono, coeff = diff.leading_term()
            return Certificate(
                claimed_order=k,
                method="full-expansion",
                verdict=False,
                detail={"difference_terms": len(diff)},
                witness=f"nonzero difference term {coeff.canonical_str()} * {mono}",
            )
    if isinstance(pmap.node, SuspensionNode):
        return _suspension_cert(pmap.node, k, budget)
    if isinstance(pmap.node, CompositionNode):
        return _composition_cert(pmap.node, k, budget)
    raise InfeasibleError(
        "components too large for direct expansion and no structure node to factor through"
    )


def _suspension_cert(node: SuspensionNode, k: int, budget: _Budget) -> Certificate:
    kc = node.f.order
    if kc is None or node.g.order != kc:
        raise PreconditionError("suspension children must carry certified equal orders")
    if k != 2 * kc - 1:
        return Certificate(
            claimed_order=k,
            method="factored-expansion",
            verdict=False,
            detail={"children_order": kc},
            witness=f"suspension of order-{kc} maps has order {2 * kc - 1}, not {k}",
        )
    cert_f = _expansion_cert(node.f, kc, budget)
    if not cert_f.verdict:
        return Certificate(k, "factored-expansion", False, {"failed": "first factor"}, cert_f.witness)
    cert_g = _expansion_cert(node.g, kc, budget)
    if not cert_g.verdict:
        return Certificate(k, "factored-expansion", False, {"failed": "second factor"}, cert_g.witness)
    pairing = bilinear_pairing(node.f, node.g, budget.limit - budget.spent)
    if not pairing.is_zero():
        mono, coeff = pairing.leading_term()
        return Certificate(
            k,
            "factored-expansion",
            False,
            {"failed": "orthogonality"},
            witness=f"b-pairing term {coeff.canonical_str()} * {mono}",
        )
    triple_cert = verify_triple(node.triple)
    if not triple_cert.verdict or node.triple.order != kc:
        return Certificate(
            k, "factored-expansion", False, {"failed": "coefficient triple"}, triple_cert.witness
        )
    return Certificate(
        claimed_order=k,
        method="factored-expansion",
        verdict=True,
        detail={
            "rule": "suspension of two b-orthogonal order-k maps has order 2k-1",
            "children_order": kc,
            "children_methods": [cert_f.method, cert_g.method],
        },
    )


def _composition_cert(node: CompositionNode, k: int, budget: _Budget) -> Certificate:
    ko, ki = node.outer.order, node.inner.order
    if ko is None or ki is None:
        raise PreconditionError("composition children must carry certified orders")
    if k != ko * ki:
        return Certificate(
            claimed_order=k,
            method="factored-expansion",
            verdict=False,
            detail={"outer_order": ko, "inner_order": ki},
            witness=f"composition of orders {ko} and {ki} has order {ko * ki}, not {k}",
        )
    cert_o = _expansion_cert(node.outer, ko, budget)
    if not cert_o.verdict:
        return Certificate(k, "factored-expansion", False, {"failed": "outer"}, cert_o.witness)
    cert_i = _expansion_cert(node.inner, ki, budget)
    if not cert_i.verdict:
        return Certificate(k, "factored-expansion", False, {"failed": "inner"}, cert_i.witness)
    return Certificate(
        claimed_order=k,
        method="factored-expansion",
        verdict=True,
        detail={
            "rule": "q(outer(inner)) = (q^k_outer)(inner) = (q(inner))^k_outer",
            "outer_order": ko,
            "inner_order": ki,
            "children_methods": [cert_o.method, cert_i.method],
        },
    )


def _integer_grid_difference(pmap: PolyMap, k: int):
    """Fast exact evaluator of q(F(p)) - q(p)^k at integer points.

    Components are flattened once to integer coefficient pairs over a common
    denominator D, so each grid point costs only native bigint work: the
    difference is zero iff sum of the scaled component squares equals
    q(p)^k * D^2.  Falls back to None when there are no explicit components.
    """
    if pmap.components is None:
        return None
    from .exact import _int_form

    flat = []
    for comp in pmap.components:
        den, items, _ = _int_form(comp)
        flat.append((den, items))
    common = 1
    for den, _ in flat:
        common = common * den // math.gcd(common, den)
    scaled = [
        (common // den, items) for den, items in flat
    ]
    nvars = pmap.m
    maxexp = [b + 1 for b in pmap.per_variable_bounds()]

    def difference_is_zero(point: tuple[int, ...]) -> bool:
        pows = []
        for i in range(nvars):
            col = [1] * (maxexp[i] + 1)
            for e in range(1, maxexp[i] + 1):
                col[e] = col[e - 1] * point[i]
            pows.append(col)
        total_re = 0
        total_im = 0
        for scale, items in scaled:
            vre = 0
            vim = 0
            for mono, cre, cim in items:
                m_val = 1
                for i, e in enumerate(mono):
                    if e:
                        m_val *= pows[i][e]
                vre += cre * m_val
                vim += cim * m_val
            vre *= scale
            vim *= scale
            total_re += vre * vre - vim * vim
            total_im += 2 * vre * vim
        qp = sum(c * c for c in point)
        return total_im == 0 and total_re == qp**k * common * common

    return difference_is_zero


def _grid_cert(pmap: PolyMap, k: int, grid_budget: int) -> Certificate:
    bounds = pmap.per_variable_bounds()
    diff_bounds = [max(2 * b, 2 * k) for b in bounds]
    npoints = 1
    for b in diff_bounds:
        npoints *= b + 1
    if npoints > grid_budget:
        raise InfeasibleError(
            f"grid zero test needs {npoints} points for per-variable bounds {diff_bounds}; "
            f"budget is {grid_budget}"
        )
    fast = _integer_grid_difference(pmap, k)
    detail = {"grid_points": npoints, "per_variable_bounds": diff_bounds}
    for combo in itertools.product(*(range(b + 1) for b in diff_bounds)):
        if fast is not None:
            if fast(combo):
                continue
            diff = _difference_at(pmap, k, [GaussianRational(c) for c in combo])
        else:
            diff = _difference_at(pmap, k, [GaussianRational(c) for c in combo])
            if diff.is_zero():
                continue
        coords = ", ".join(str(c) for c in combo)
        return Certificate(
            claimed_order=k,
            method="exact-evaluation",
            verdict=False,
            detail=detail,
            witness=f"difference {diff.canonical_str()} at grid point ({coords})",
        )
    return Certificate(
        claimed_order=k,
        method="exact-evaluation",
        verdict=True,
        detail=detail,
    )


def certify_order(
    pmap: PolyMap,
    k: int,
    method: str = "auto",
    expansion_budget: int = DEFAULT_EXPANSION_BUDGET,
    grid_budget: int = DEFAULT_GRID_BUDGET,
) -> Certificate:
    """Decide exactly whether q(map(z)) = q(z)^k.

    ``method`` is "auto", "expansion" or "grid".  A cheap exact-evaluation
    refutation pass runs first in every mode: a single nonzero value is a
    sound disproof and catches corrupted maps and wrong claimed orders long
    before any expensive proof work.
    """
    if k < 0:
        raise ValueError("claimed order must be nonnegative")
    if method not in ("auto", "expansion", "grid"):
        raise ValueError(f"unknown certification method {method!r}")
    witness = _refute(pmap, k)
    if witness is not None:
        cert = Certificate(
            claimed_order=k,
            method="exact-evaluation",
            verdict=False,
            detail={"stage": "refutation scan"},
            witness=witness,
        )
        return cert
    if method in ("auto", "expansion"):
        try:
            cert = _expansion_cert(pmap, k, _Budget(expansion_budget))
            if cert.verdict and pmap.order == k:
                pmap.certificate = cert
            return cert
        except InfeasibleError:
            if method == "expansion":
                raise
    cert = _grid_cert(pmap, k, grid_budget)
    if cert.verdict and pmap.order == k:
        pmap.certificate = cert
    return cert


# --------------------------------------------------------------- builders


def _materialize_suspension(node: SuspensionNode, budget_limit: int) -> Optional[list[Polynomial]]:
    f, g, triple, ell = node.f, node.g, node.triple, node.ell
    if f.components is None or g.components is None:
        return None
    m = f.m + ell
    # cheap lower bound before doing real work: the substituted coefficient
    # polynomials are supported on squared monomials of degree <= k-1
    support = math.comb(triple.order - 1 + m, m)
    tmax = max(max(len(c) for c in f.components), max(len(c) for c in g.components), 1)
    if support * max(tmax, support) > budget_limit:
        return None
    try:
        budget = _Budget(budget_limit)
        s_poly = quadratic_form(m)
        t_poly = _leading_block_form(m, f.m)
        b1 = _guarded_compose(triple.f_coeff, [s_poly, t_poly], budget)
        b2 = _guarded_compose(triple.g_coeff, [s_poly, t_poly], budget)
        rr = _guarded_compose(triple.u_coeff, [s_poly, t_poly], budget)
        comps = []
        for fj, gj in zip(f.components, g.components):
            fe, ge = fj.extend(m), gj.extend(m)
            comps.append(_guarded_mul(b1, fe, budget) + _guarded_mul(b2, ge, budget))
        for i in range(ell):
            comps.append(_guarded_mul(rr, Polynomial.variable(m, f.m + i), budget))
        return comps
    except InfeasibleError:
        return None


def suspend(
    f: PolyMap,
    g: PolyMap,
    ell: int,
    materialize_budget: int = DEFAULT_MATERIALIZE_BUDGET,
) -> PolyMap:
    """Suspension operator: glue a b-orthogonal order-k pair into a map on
    ell more variables,

        F(z, u) = (c_f(s, t) f(z) + c_g(s, t) g(z),  c_u(s, t) u),

    with (s, t) = (q(z) + q(u), q(z)) and the order-k coefficient triple
    (c_u, c_f, c_g).  The result has order 2k - 1; its restriction to the
    real sphere preserves the equator and both hemispheres, which is what
    makes it the ell-fold suspension of f on homotopy classes.
    """
    if ell < 1:
        raise ValueError("suspension needs at least one new variable")
    if f.m != g.m or f.r != g.r:
        raise DimensionMismatch("suspension needs maps with equal dimensions")
    if f.order is None or g.order is None:
        raise PreconditionError("suspension needs certified orders on both maps")
    if f.order != g.order or f.order < 1:
        raise PreconditionError(f"suspension needs equal orders >= 1, got {f.order} and {g.order}")
    pairing = bilinear_pairing(f, g)
    if not pairing.is_zero():
        raise PreconditionError("suspension needs b-orthogonal maps; the pairing is nonzero")
    k = f.order
    triple = suspension_triple(k)
    node = SuspensionNode(f, g, triple, ell)
    comps = _materialize_suspension(node, materialize_budget)
    out = PolyMap(
        m=f.m + ell,
        r=f.r + ell,
        components=comps,
        node=node,
        label=f"suspend({f.label},{g.label},{ell})",
        order=2 * k - 1,
    )
    out.certificate = certify_order(out, 2 * k - 1, method="expansion")
    if not out.certificate.verdict:
        raise MapError(f"suspension failed its own order certificate: {out.certificate.witness}")
    return out


def _materialize_composition(node: CompositionNode, budget_limit: int) -> Optional[list[Polynomial]]:
    outer, inner = node.outer, node.inner
    if outer.components is None or inner.components is None:
        return None
    tmax = max(max(len(c) for c in inner.components), 1)
    outer_degree = max((c.degree() for c in outer.components), default=0)
    estimate = tmax * tmax if outer_degree >= 2 else tmax * sum(len(c) for c in outer.components)
    if estimate > budget_limit:
        return None
    try:
        budget = _Budget(budget_limit)
        return [_guarded_compose(c, inner.components, budget) for c in outer.components]
    except InfeasibleError:
        return None


def compose_maps(
    outer: PolyMap,
    inner: PolyMap,
    materialize_budget: int = DEFAULT_MATERIALIZE_BUDGET,
) -> PolyMap:
    """Exact composition outer(inner(z)); certified orders multiply."""
    if inner.r != outer.m:
        raise DimensionMismatch(
            f"cannot compose: inner codomain {inner.r} != outer domain {outer.m}"
        )
    node = CompositionNode(outer, inner)
    comps = _materialize_composition(node, materialize_budget)
    order = None
    if outer.order is not None and inner.order is not None:
        order = outer.order * inner.order
    out = PolyMap(
        m=inner.m,
        r=outer.r,
        components=comps,
        node=node,
        label=f"compose({outer.label},{inner.label})",
        order=order,
    )
    if order is not None:
        out.certificate = certify_order(out, order, method="expansion")
        if not out.certificate.verdict:
            raise MapError(f"composition failed its order certificate: {out.certificate.witness}")
    return out


def hopf_pair() -> tuple[PolyMap, PolyMap]:
    """The quadratic generator pair on C^4.

    f extends the classical fibration S^3 -> S^2 (its class generates
    pi_3(S^2)); g has the same order 2 and is b-orthogonal to f, which is
    what the suspension operator consumes.
    """
    z = [Polynomial.variable(4, i) for i in range(4)]
    sq = [v.square() for v in z]
    f_comps = [
        sq[0] + sq[1] - sq[2] - sq[3],
        2 * (z[0] * z[2]) - 2 * (z[1] * z[3]),
        2 * (z[0] * z[3]) + 2 * (z[1] * z[2]),
    ]
    g_comps = [
        2 * (z[0] * z[3]) - 2 * (z[1] * z[2]),
        2 * (z[0] * z[1]) + 2 * (z[2] * z[3]),
        sq[1] + sq[3] - sq[0] - sq[2],
    ]
    f = PolyMap.explicit(f_comps, "hopf.f", order=2)
    g = PolyMap.explicit(g_comps, "hopf.g", order=2)
    for pm in (f, g):
        pm.certificate = certify_order(pm, 2, method="expansion")
        if not pm.certificate.verdict:
            raise MapError("hopf pair failed its order certificate")
    if not bilinear_pairing(f, g).is_zero():
        raise MapError("hopf pair failed b-orthogonality")
    return f, g


def circle_pair(d: int) -> tuple[PolyMap, PolyMap]:
    """Winding-d self-map pair of the circle quadric.

    f is the pair of real-coefficient components of (z1 + i z2)^|d|, with
    the second component negated for d < 0; g = (-f2, f1) is b-orthogonal
    with the same order |d|.  On the real circle f winds d times.
    """
    if d == 0:
        raise ValueError("winding 0 has no polynomial pair; use constant_map for the unit class")
    n = abs(d)
    w = Polynomial.variable(2, 0) + Polynomial.variable(2, 1).scale(GR_I)
    p = w**n
    re_terms, im_terms = {}, {}
    for mono, coeff in p.terms.items():
        if coeff.re:
            re_terms[mono] = GaussianRational(coeff.re)
        if coeff.im:
            im_terms[mono] = GaussianRational(coeff.im)
    f1 = Polynomial(2, re_terms)
    f2 = Polynomial(2, im_terms)
    if d < 0:
        f2 = -f2
    f = PolyMap.explicit([f1, f2], f"circle({d}).f", order=n)
    g = PolyMap.explicit([-f2, f1], f"circle({d}).g", order=n)
    for pm in (f, g):
        pm.certificate = certify_order(pm, n, method="expansion")
        if not pm.certificate.verdict:
            raise MapError("circle pair failed its order certificate")
    return f, g


def constant_map(m: int, r: int) -> PolyMap:
    """Constant map to the basepoint (1, 0, ..., 0); represents the unit class."""
    comps = [Polynomial.constant(m, 1)] + [Polynomial.zero(m) for _ in range(r - 1)]
    out = PolyMap.explicit(comps, f"constant({m},{r})", order=0)
    out.certificate = certify_order(out, 0, method="expansion")
    return out


# ----------------------------------------------------------------- catalog


def _hopf_suspension(ell: int) -> PolyMap:
    f, g = hopf_pair()
    return suspend(f, g, ell)


def _second_stage_pair() -> tuple[PolyMap, PolyMap]:
    """(f1, g1): the Hopf pair composed with the one-step suspension; order 6."""
    f, g = hopf_pair()
    phi = suspend(f, g, 1)
    f1 = compose_maps(f, phi)
    g1 = compose_maps(g, phi)
    return f1, g1


def _third_stage_pair(materialize_budget: int) -> tuple[PolyMap, PolyMap]:
    """(f2, g2): order-22 pair on C^6 driving the 2-torsion chain."""
    f, g = hopf_pair()
    f1, g1 = _second_stage_pair()
    big_phi = suspend(f1, g1, 1)
    f2 = compose_maps(f, big_phi, materialize_budget)
    g2 = compose_maps(g, big_phi, materialize_budget)
    return f2, g2


def catalog(target: str, materialize_budget: int = DEFAULT_MATERIALIZE_BUDGET) -> PolyMap:
    """Build the representative map for a target class.

    Targets: ``pi_n:n,d`` (degree-d class of pi_n(S^n)), ``pi_np1:n``
    (n >= 3), ``pi_np2:n`` (n >= 2), ``pi3_s2:d`` (d times the generator of
    pi_3(S^2)), ``pi_np3:n`` (the 2-torsion class construction, n >= 2).
    Every returned map carries a passing order certificate and a lineage
    label reproducing its construction.
    """
    name, _, argstr = target.partition(":")
    try:
        args = [int(a) for a in argstr.split(",")] if argstr else []
    except ValueError:
        raise CatalogError(f"malformed catalog target {target!r}")

    if name == "pi_n":
        if len(args) != 2:
            raise CatalogError("pi_n takes two arguments: pi_n:n,d")
        n, d = args
        if n < 1:
            raise CatalogError("pi_n needs n >= 1")
        if d == 0:
            out = constant_map(n + 1, n + 1)
        else:
            f, g = circle_pair(d)
            out = f if n == 1 else suspend(f, g, n - 1)
    elif name == "pi_np1":
        if len(args) != 1:
            raise CatalogError("pi_np1 takes one argument: pi_np1:n")
        (n,) = args
        if n == 2:
            raise CatalogError("pi_np1:2 is served by pi3_s2 (pi_3(S^2) is infinite cyclic)")
        if n < 3:
            raise CatalogError("pi_np1 needs n >= 3")
        out = _hopf_suspension(n - 2)
    elif name == "pi_np2":
        if len(args) != 1:
            raise CatalogError("pi_np2 takes one argument: pi_np2:n")
        (n,) = args
        if n < 2:
            raise CatalogError("pi_np2 needs n >= 2")
        f1, g1 = _second_stage_pair()
        out = f1 if n == 2 else suspend(f1, g1, n - 2)
    elif name == "pi3_s2":
        if len(args) != 1:
            raise CatalogError("pi3_s2 takes one argument: pi3_s2:d")
        (d,) = args
        if d == 0:
            out = constant_map(4, 3)
        else:
            f, _ = hopf_pair()
            inner = catalog(f"pi_n:3,{d}")
            out = compose_maps(f, inner)
    elif name == "pi_np3":
        if len(args) != 1:
            raise CatalogError("pi_np3 takes one argument: pi_np3:n")
        (n,) = args
        if n < 2:
            raise CatalogError("pi_np3 needs n >= 2")
        f2, g2 = _third_stage_pair(materialize_budget)
        out = f2 if n == 2 else suspend(f2, g2, n - 2, materialize_budget)
    else:
        raise CatalogError(f"unknown catalog target {name!r}")

    if out.order is not None and out.certificate is None:
        out.certificate = certify_order(out, out.order)
    if out.certificate is None or not out.certificate.verdict:
        raise MapError(f"catalog map {target} lacks a passing certificate")
    out.label = f"{target} := {out.label}"
    return out


# ---------------------------------------------------------- blend homotopy


class BlendedMap:
    """cos(t pi/2) f + sin(t pi/2) g, the straight-line homotopy on quadrics.

    Coefficients are floating, so this object only evaluates; exactness is
    deliberately waived.  On the domain quadric q of the value stays 1
    because cos^2 + sin^2 = 1 and the pair is b-orthogonal.
    """

    def __init__(self, f: PolyMap, g: PolyMap, t: float):
        if f.m != g.m or f.r != g.r:
            raise DimensionMismatch("blending needs maps with equal dimensions")
        if f.order is None or f.order != g.order:
            raise PreconditionError("blending needs equal certified orders")
        if not bilinear_pairing(f, g).is_zero():
            raise PreconditionError("blending needs b-orthogonal maps")
        if not 0.0 <= t <= 1.0:
            raise ValueError("blend parameter must lie in [0, 1]")
        self.f = f
        self.g = g
        self.t = float(t)
        self.m = f.m
        self.r = f.r
        self.order = f.order
        self.label = f"blend({f.label},{g.label},t={t})"

    def eval_batch(self, points) -> np.ndarray:
        c = np.cos(self.t * np.pi / 2)
        s = np.sin(self.t * np.pi / 2)
        return c * self.f.eval_batch(points) + s * self.g.eval_batch(points)


def blend_homotopy(f: PolyMap, g: PolyMap, t: float) -> BlendedMap:
    return BlendedMap(f, g, t)
