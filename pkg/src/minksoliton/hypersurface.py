"""Pointwise geometry of an immersed hypersurface of Minkowski 4-space.

From a chart map delivered as degree-3 jets this module assembles the first
fundamental form, unit normal and its sign, shape operator, mean curvature,
Christoffel symbols, the support function and tangential position field,
and the Ricci tensor by two independent routes:

* the extrinsic route through the shape operator (with and without the
  normal-sign factor epsilon), and
* an intrinsic oracle straight from the Christoffel symbols of the induced
  metric (sign convention: the round sphere has positive Ricci).

Everything is computed for a whole batch of chart points at once; the
single-point entry points wrap the batched core.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import jets
from .lorentz import TAU_DEGENERATE, PSEUDO_ORTHONORMAL_GRAM, mink_inner


class DegenerateMetric(ArithmeticError):
    """Induced metric numerically singular somewhere on the batch."""


class NullNormalDirection(ArithmeticError):
    """Normal direction is lightlike; the immersion is not pseudo-Riemannian there."""


class EmptyGrid(ValueError):
    """A grid operation received no sample points."""


class InvalidFrame(ValueError):
    """Supplied frame does not satisfy its declared Gram relations."""


@dataclass
class Immersion:
    """A chart into Minkowski 4-space, evaluated on jets.

    ``chart_map`` maps three Jets (the chart variables) to a sequence of four
    Jets (the rectangular components of the image point).  ``domain`` holds
    one (lo, hi) interval per chart variable. ``orientation_sign`` flips the
    computed unit normal, so catalog entries can match stated curvature signs.
    """

    name: str
    chart_map: Callable
    domain: tuple
    orientation_sign: float = 1.0

    def with_orientation(self, sign):
        return Immersion(self.name, self.chart_map, self.domain, float(sign))


@dataclass
class HypersurfaceSample:
    """All pointwise geometric data at one chart point."""

    point: np.ndarray
    tangent_basis: np.ndarray
    metric: np.ndarray
    normal: np.ndarray
    epsilon: float
    shape: np.ndarray
    mean_curvature: float
    ricci_extrinsic: np.ndarray
    ricci_paper_form: np.ndarray
    ricci_intrinsic: np.ndarray
    christoffels: np.ndarray
    support: float
    tangent_position: np.ndarray


def _inner4(a, b):
    """Minkowski inner product of two 4-component jet vectors."""
    return -a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]


def _cross4(r1, r2, r3):
    """Minkowski cross product of three 4-component jet vectors."""
    rows = (r1, r2, r3)

    def minor(cols):
        a, b, c = cols
        return (rows[0][a] * (rows[1][b] * rows[2][c] - rows[1][c] * rows[2][b])
                - rows[0][b] * (rows[1][a] * rows[2][c] - rows[1][c] * rows[2][a])
                + rows[0][c] * (rows[1][a] * rows[2][b] - rows[1][b] * rows[2][a]))

    m0 = minor((1, 2, 3))
    m1 = minor((0, 2, 3))
    m2 = minor((0, 1, 3))
    m3 = minor((0, 1, 2))
    # cofactor signs (+,-,+,-), then raise the index (flip the time slot)
    return [-m0, -m1, m2, -m3]


def _inv3(m, det):
    """Adjugate-over-determinant inverse of a 3x3 jet matrix."""
    adj = [[None] * 3 for _ in range(3)]
    idx = ((0, 1, 2), (0, 1, 2))
    for i in range(3):
        for j in range(3):
            r = [k for k in idx[0] if k != i]
            c = [k for k in idx[1] if k != j]
            cof = m[r[0]][c[0]] * m[r[1]][c[1]] - m[r[0]][c[1]] * m[r[1]][c[0]]
            adj[j][i] = cof * ((-1.0) ** (i + j))
    return [[adj[i][j] / det for j in range(3)] for i in range(3)]


def _det3(m):
    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


class GeometryBatch:
    """Jet-level geometric data for a batch of chart points."""

    def __init__(self, imm, pts):
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        if pts.shape[0] == 0:
            raise EmptyGrid("no sample points supplied")
        self.points = pts
        ju = jets.variable(1, pts[:, 0])
        jv = jets.variable(2, pts[:, 1])
        jw = jets.variable(3, pts[:, 2])
        x = list(imm.chart_map(ju, jv, jw))
        if len(x) != 4:
            raise ValueError("chart map must return four components")
        self.x = x
        self.xi = [[comp.deriv(i + 1) for comp in x] for i in range(3)]

        self.g = [[_inner4(self.xi[i], self.xi[j]) for j in range(3)]
                  for i in range(3)]
        self.det = _det3(self.g)
        g_scale = max(1.0, float(np.max(np.abs(self.metric()))))
        if np.min(np.abs(self.det.value)) < TAU_DEGENERATE * g_scale ** 3:
            raise DegenerateMetric(
                f"induced metric of {imm.name!r} is singular on the batch")
        self.ginv = _inv3(self.g, self.det)

        raw_n = _cross4(self.xi[0], self.xi[1], self.xi[2])
        nn = _inner4(raw_n, raw_n)
        n_scale = max(float(np.max(np.abs([c.value for c in raw_n]))), 1e-300) ** 2
        if np.min(np.abs(nn.value)) < 1e-10 * n_scale:
            raise NullNormalDirection(
                f"normal direction of {imm.name!r} is lightlike on the batch")
        signs = np.sign(nn.value)
        if signs.max() != signs.min():
            raise NullNormalDirection(
                f"normal causal type of {imm.name!r} changes across the batch")
        self.epsilon = float(signs.flat[0])
        norm = jets.sqrt(nn * self.epsilon)
        sign = float(imm.orientation_sign)
        self.N = [comp * sign / norm for comp in raw_n]

        # Weingarten: dN/du^j = -A^i_j (dx/du^i); solve through the metric.
        dN = [[comp.deriv(j + 1) for comp in self.N] for j in range(3)]
        self.A = [[None] * 3 for _ in range(3)]
        for j in range(3):
            rhs = [-_inner4(dN[j], self.xi[k]) for k in range(3)]
            for i in range(3):
                acc = self.ginv[i][0] * rhs[0]
                acc = acc + self.ginv[i][1] * rhs[1]
                acc = acc + self.ginv[i][2] * rhs[2]
                self.A[i][j] = acc
        self.dN = dN
        self.H = (self.A[0][0] + self.A[1][1] + self.A[2][2]) / 3.0

        dg = [[[self.g[i][j].deriv(m + 1) for j in range(3)] for i in range(3)]
              for m in range(3)]
        self.Gamma = [[[None] * 3 for _ in range(3)] for _ in range(3)]
        for k in range(3):
            for i in range(3):
                for j in range(i, 3):
                    acc = None
                    for l in range(3):
                        term = self.ginv[k][l] * (dg[i][j][l] + dg[j][i][l]
                                                  - dg[l][i][j])
                        acc = term if acc is None else acc + term
                    val = acc * 0.5
                    self.Gamma[k][i][j] = val
                    self.Gamma[k][j][i] = val

        self.rho = _inner4(self.x, self.N)
        proj = [_inner4(self.x, self.xi[k]) for k in range(3)]
        self.xT = []
        for i in range(3):
            acc = self.ginv[i][0] * proj[0]
            acc = acc + self.ginv[i][1] * proj[1]
            acc = acc + self.ginv[i][2] * proj[2]
            self.xT.append(acc)
        self.f = _inner4(self.x, self.x) * 0.5

    # -- value extraction ----------------------------------------------------

    def n_points(self):
        return self.points.shape[0]

    def point_values(self):
        return np.stack([c.value for c in self.x], axis=-1)

    def tangent_values(self):
        return np.stack([np.stack([c.value for c in row], axis=-1)
                         for row in self.xi], axis=-2)

    def metric(self):
        return np.stack([np.stack([self.g[i][j].value for j in range(3)], axis=-1)
                         for i in range(3)], axis=-2)

    def metric_inverse(self):
        return np.stack([np.stack([self.ginv[i][j].value for j in range(3)], axis=-1)
                         for i in range(3)], axis=-2)

    def normal_values(self):
        return np.stack([c.value for c in self.N], axis=-1)

    def shape_values(self):
        return np.stack([np.stack([self.A[i][j].value for j in range(3)], axis=-1)
                         for i in range(3)], axis=-2)

    def christoffel_values(self):
        return np.stack([np.stack([np.stack([self.Gamma[k][i][j].value
                                             for j in range(3)], axis=-1)
                                   for i in range(3)], axis=-2)
                         for k in range(3)], axis=-3)

    def tangent_position_values(self):
        return np.stack([c.value for c in self.xT], axis=-1)


def ricci_gauss(A, g, epsilon, corrected=True):
    """Ricci tensor from the shape operator.

    corrected=False evaluates 3H*g(AX,Y) - g(AX,AY) verbatim; corrected=True
    multiplies by epsilon, which is the form the intrinsic oracle validates.
    """
    A = np.asarray(A, dtype=float)
    g = np.asarray(g, dtype=float)
    h = g @ A
    h = 0.5 * (h + np.swapaxes(h, -1, -2))
    H = np.trace(A, axis1=-2, axis2=-1) / 3.0
    sq = np.swapaxes(A, -1, -2) @ g @ A
    ric = 3.0 * H[..., None, None] * h - sq
    return float(epsilon) * ric if corrected else ric


def ricci_intrinsic_batch(geo):
    """Intrinsic Ricci from Christoffel jets: positive on the round sphere."""
    n = geo.n_points()
    ric = np.zeros((n, 3, 3))
    Gv = geo.christoffel_values()
    dG = np.zeros((n, 3, 3, 3, 3))  # dG[:, m, k, i, j] = d_m Gamma^k_ij
    for m in range(3):
        for k in range(3):
            for i in range(3):
                for j in range(i, 3):
                    d = geo.Gamma[k][i][j].deriv(m + 1).value
                    dG[:, m, k, i, j] = d
                    dG[:, m, k, j, i] = d
    for j in range(3):
        for k in range(j, 3):
            term = np.zeros(n)
            for i in range(3):
                term += dG[:, i, i, j, k] - dG[:, j, i, i, k]
                for l in range(3):
                    term += (Gv[:, i, i, l] * Gv[:, l, j, k]
                             - Gv[:, i, j, l] * Gv[:, l, i, k])
            ric[:, j, k] = term
            ric[:, k, j] = term
    return ric


def covariant_shape_derivative(geo):
    """(nabla_i A)^k_j as an (n, 3, 3, 3) array, indices [i, k, j]."""
    n = geo.n_points()
    Av = geo.shape_values()
    Gv = geo.christoffel_values()
    out = np.zeros((n, 3, 3, 3))
    for i in range(3):
        for k in range(3):
            for j in range(3):
                d = geo.A[k][j].deriv(i + 1).value
                corr = np.zeros(n)
                for l in range(3):
                    corr += Gv[:, k, i, l] * Av[:, l, j] - Gv[:, l, i, j] * Av[:, k, l]
                out[:, i, k, j] = d + corr
    return out


def codazzi_residual_batch(geo):
    """Max-norm of the antisymmetric part of nabla A, per point."""
    nab = covariant_shape_derivative(geo)
    asym = nab - np.swapaxes(nab, 1, 3)  # (i, k, j) - (j, k, i)
    return np.max(np.abs(asym), axis=(1, 2, 3))


def identity_diagnostics(geo):
    """Universal pointwise identities; sup over the batch of each residual."""
    Nv = geo.normal_values()
    xv = geo.point_values()
    tv = geo.tangent_values()
    gv = geo.metric()
    Av = geo.shape_values()
    orth = max(float(np.max(np.abs(mink_inner(Nv, tv[:, i, :]))))
               for i in range(3))
    unit = float(np.max(np.abs(np.abs(mink_inner(Nv, Nv)) - 1.0)))
    xT = geo.tangent_position_values()
    recon = np.einsum('ni,nik->nk', xT, tv) + (
        geo.epsilon * geo.rho.value)[:, None] * Nv
    decomp = float(np.max(np.abs(xv - recon)))
    gA = gv @ Av
    selfadj = float(np.max(np.abs(gA - np.swapaxes(gA, -1, -2))))
    dN_val = np.stack([np.stack([c.value for c in geo.dN[j]], axis=-1)
                       for j in range(3)], axis=-2)
    tangency = float(np.max(np.abs(mink_inner(dN_val, Nv[:, None, :]))))
    return {
        "normal_orthogonality": orth,
        "normal_unit": unit,
        "position_decomposition": decomp,
        "shape_self_adjoint": selfadj,
        "weingarten_tangency": tangency,
    }


# -- single point API ---------------------------------------------------------

def sample(imm, p):
    """Full geometric sample at one chart point."""
    geo = GeometryBatch(imm, np.asarray(p, dtype=float)[None, :])
    ric_plain = ricci_gauss(geo.shape_values(), geo.metric(), geo.epsilon,
                            corrected=False)
    return HypersurfaceSample(
        point=geo.point_values()[0],
        tangent_basis=geo.tangent_values()[0],
        metric=geo.metric()[0],
        normal=geo.normal_values()[0],
        epsilon=geo.epsilon,
        shape=geo.shape_values()[0],
        mean_curvature=float(geo.H.value[0]),
        ricci_extrinsic=(geo.epsilon * ric_plain)[0],
        ricci_paper_form=ric_plain[0],
        ricci_intrinsic=ricci_intrinsic_batch(geo)[0],
        christoffels=geo.christoffel_values()[0],
        support=float(geo.rho.value[0]),
        tangent_position=geo.tangent_position_values()[0],
    )


def shape_operator(imm, p):
    geo = GeometryBatch(imm, np.asarray(p, dtype=float)[None, :])
    return geo.shape_values()[0]


def ricci_intrinsic(imm, p):
    geo = GeometryBatch(imm, np.asarray(p, dtype=float)[None, :])
    return ricci_intrinsic_batch(geo)[0]


def codazzi_residual(imm, p):
    geo = GeometryBatch(imm, np.asarray(p, dtype=float)[None, :])
    return float(codazzi_residual_batch(geo)[0])


# -- frames -------------------------------------------------------------------

@dataclass
class FrameAtPoint:
    """An evaluated tangent frame with its connection coefficients."""

    vectors: np.ndarray           # (3, 3) chart components, rows are e_i
    kind: str                     # "orthonormal" or "pseudo_orthonormal"
    connection_forms: np.ndarray  # (3, 3, 3) with [i, j, k] = omega_ij(e_k)


def expected_gram(kind, epsilon):
    if kind == "orthonormal":
        return np.diag([-float(epsilon), 1.0, 1.0])
    if kind == "pseudo_orthonormal":
        return PSEUDO_ORTHONORMAL_GRAM.copy()
    raise ValueError(f"unknown frame kind {kind!r}")


def frame_at_point(imm, p, frame_field, kind):
    """Evaluate a frame field at p and bundle it with its connection forms."""
    pts = np.asarray(p, dtype=float)[None, :]
    ju = jets.variable(1, pts[:, 0])
    jv = jets.variable(2, pts[:, 1])
    jw = jets.variable(3, pts[:, 2])
    E = frame_field(ju, jv, jw)
    vectors = np.array([[E[i][k].value[0] for k in range(3)] for i in range(3)])
    omega = connection_forms(imm, p, frame_field, kind)
    return FrameAtPoint(vectors=vectors, kind=kind, connection_forms=omega)


def connection_forms(imm, p, frame_field, kind):
    """omega_ij(e_k): coefficient of e_j in nabla_{e_k} e_i.

    For an orthonormal frame this equals g(e_j,e_j) * g(nabla_{e_k} e_i, e_j);
    for a pseudo-orthonormal frame the pairing runs through the inverse Gram
    matrix.  ``frame_field`` maps the three chart jets to a 3x3 matrix of jets
    whose rows are the frame vectors in chart components.
    """
    pts = np.asarray(p, dtype=float)[None, :]
    geo = GeometryBatch(imm, pts)
    ju = jets.variable(1, pts[:, 0])
    jv = jets.variable(2, pts[:, 1])
    jw = jets.variable(3, pts[:, 2])
    E = frame_field(ju, jv, jw)
    gv = geo.metric()[0]
    Ev = np.array([[E[i][k].value[0] for k in range(3)] for i in range(3)])
    gram = Ev @ gv @ Ev.T
    target = expected_gram(kind, geo.epsilon)
    if np.max(np.abs(gram - target)) > 1e-6:
        raise InvalidFrame(
            f"frame Gram matrix deviates from the {kind} convention by "
            f"{np.max(np.abs(gram - target)):.3e}")

    Gv = geo.christoffel_values()[0]
    dE = np.array([[[E[i][l].deriv(m + 1).value[0] for l in range(3)]
                    for m in range(3)] for i in range(3)])  # [i, m, l]
    # (nabla_m e_i)^l then contract with e_k^m
    nab = np.empty((3, 3, 3))  # [i, m, l]
    for i in range(3):
        for m in range(3):
            for l in range(3):
                nab[i, m, l] = dE[i, m, l] + Gv[l, m, :] @ Ev[i, :]
    gram_inv = np.linalg.inv(target)
    omega = np.empty((3, 3, 3))
    for i in range(3):
        for k in range(3):
            vec = Ev[k, :] @ nab[i, :, :]          # chart components
            pairing = Ev @ gv @ vec                # g(nabla, e_m)
            coeff = gram_inv @ pairing
            omega[i, :, k] = coeff
    return omega


# -- grids and structural classification --------------------------------------

def grid_points(box, counts):
    """Uniform grid over a box of three intervals; returns (n, 3) points."""
    counts = tuple(int(c) for c in counts)
    if any(c < 2 for c in counts):
        raise ValueError("grid needs at least 2 samples per axis")
    axes = [np.linspace(lo, hi, c) for (lo, hi), c in zip(box, counts)]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


@dataclass
class StructureVerdicts:
    totally_umbilical: bool
    isoparametric: bool
    generalized_constant_ratio: bool
    constant_mean_curvature: bool
    witnesses: dict = field(default_factory=dict)


TAU_CLASS = 1e-6


def classify_structure(imm, grid, tol=TAU_CLASS, geo=None):
    """Grid-level structural verdicts with witness residuals."""
    grid = np.atleast_2d(np.asarray(grid, dtype=float))
    if grid.shape[0] == 0:
        raise EmptyGrid("structural classification needs a nonempty grid")
    from .lorentz import char_poly, minimal_polynomial

    if geo is None:
        geo = GeometryBatch(imm, grid)
    Av = geo.shape_values()
    Hv = geo.H.value
    scale = max(1.0, float(np.max(np.abs(Av))))

    umb = float(np.max(np.abs(Av - Hv[:, None, None] * np.eye(3))))
    char = np.stack([char_poly(Av[n]) for n in range(len(grid))])
    char_spread = float(np.max(np.ptp(char, axis=0)))
    mps = [minimal_polynomial(Av[n]) for n in range(len(grid))]
    degs = {len(mp) for mp in mps}
    if len(degs) == 1:
        mp_spread = float(np.max(np.ptp(np.stack(mps), axis=0)))
    else:
        mp_spread = float("inf")
    iso_witness = max(char_spread, mp_spread)

    xT = geo.tangent_position_values()
    norms = np.linalg.norm(xT, axis=-1)
    live = norms > 1e-8
    if np.any(live):
        v = xT[live]
        Avl = Av[live]
        Axt = np.einsum('nij,nj->ni', Avl, v)
        mu = np.einsum('ni,ni->n', Axt, v) / np.einsum('ni,ni->n', v, v)
        gcr_witness = float(np.max(
            np.linalg.norm(Axt - mu[:, None] * v, axis=-1)
            / norms[live]))
    else:
        gcr_witness = 0.0

    cmc_witness = float(np.max(np.abs(Hv - Hv.mean())))
    return StructureVerdicts(
        totally_umbilical=umb < tol * scale,
        isoparametric=iso_witness < tol * scale,
        generalized_constant_ratio=gcr_witness < tol * scale,
        constant_mean_curvature=cmc_witness < tol * scale,
        witnesses={
            "umbilical": umb,
            "isoparametric": iso_witness,
            "generalized_constant_ratio": gcr_witness,
            "constant_mean_curvature": cmc_witness,
        },
    )
