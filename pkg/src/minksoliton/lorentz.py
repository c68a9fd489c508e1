"""Linear algebra over the Minkowski inner product of index 1.

Covers the 4-dimensional ambient product -u1*v1 + u2*v2 + u3*v3 + u4*v4,
3x3 indefinite tangent metrics, and the eigenstructure machinery that sorts
a self-adjoint tangent endomorphism into one of the four Lorentzian
canonical forms (diagonalizable, complex pair, 2-step or 3-step Jordan
block) via its minimal polynomial.

Eigenvalues of 3x3 matrices come from the closed-form cubic with a Newton
polish, so results are reproducible without a general eigensolver.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

# Decision thresholds.  Jet-based inputs are machine accurate, so two
# decades separate input noise from every decision boundary.
TAU_ALG = 1e-9
TAU_RANK = 1e-7
TAU_CLUSTER = 1e-4
TAU_DEGENERATE = 1e-12

METRIC_SIGNS = np.array([-1.0, 1.0, 1.0, 1.0])


class SingularMetric(np.linalg.LinAlgError):
    """Raised when a tangent metric is numerically degenerate."""


class AmbiguousClassification(ValueError):
    """Eigenvalue separations straddle the clustering threshold."""


class CausalCharacter(enum.Enum):
    TIMELIKE = "timelike"
    SPACELIKE = "spacelike"
    NULL = "null"
    ZERO = "zero"


@dataclass(frozen=True)
class MinkVector:
    """A point or vector of the ambient space, as 4 rectangular components."""

    components: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "components",
                           np.asarray(self.components, dtype=float))

    def inner(self, other):
        return mink_inner(self.components, getattr(other, "components", other))

    def causal_character(self, tol=TAU_ALG):
        return causal_character(self.components, tol)


def mink_inner(u, v):
    """Index-1 inner product; accepts arrays with a trailing axis of length 4."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return (u * v * METRIC_SIGNS).sum(axis=-1)


def causal_character(u, tol=TAU_ALG):
    u = np.asarray(u, dtype=float)
    if np.max(np.abs(u)) < tol:
        return CausalCharacter.ZERO
    s = mink_inner(u, u)
    if abs(s) <= tol:
        return CausalCharacter.NULL
    return CausalCharacter.TIMELIKE if s < 0 else CausalCharacter.SPACELIKE


def mink_cross(a, b, c):
    """Vector Minkowski-orthogonal to a, b, c with <n, v> = det[v; a; b; c]."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    rows = np.stack([a, b, c], axis=-2)
    cof = np.empty(a.shape)
    cols = [0, 1, 2, 3]
    for mu in range(4):
        keep = [col for col in cols if col != mu]
        m = rows[..., keep]
        det = (m[..., 0, 0] * (m[..., 1, 1] * m[..., 2, 2] - m[..., 1, 2] * m[..., 2, 1])
               - m[..., 0, 1] * (m[..., 1, 0] * m[..., 2, 2] - m[..., 1, 2] * m[..., 2, 0])
               + m[..., 0, 2] * (m[..., 1, 0] * m[..., 2, 1] - m[..., 1, 1] * m[..., 2, 0]))
        cof[..., mu] = ((-1.0) ** mu) * det
    return cof * METRIC_SIGNS


def solve_indefinite(g, rhs, tol=TAU_DEGENERATE):
    """Solve g @ y = rhs for a symmetric (possibly indefinite) 3x3 metric."""
    g = np.asarray(g, dtype=float)
    if abs(np.linalg.det(g)) < tol:
        raise SingularMetric("tangent metric is numerically singular")
    return np.linalg.solve(g, np.asarray(rhs, dtype=float))


# -- cubic eigenstructure ---------------------------------------------------

def char_poly(A):
    """Monic characteristic polynomial coefficients, highest degree first."""
    A = np.asarray(A, dtype=float)
    tr = np.trace(A)
    minors = (A[1, 1] * A[2, 2] - A[1, 2] * A[2, 1]
              + A[0, 0] * A[2, 2] - A[0, 2] * A[2, 0]
              + A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0])
    det = np.linalg.det(A)
    return np.array([1.0, -tr, minors, -det])


def _cubic_roots(coeffs):
    """Real roots and optional complex pair of a monic real cubic."""
    _, b, c, d = coeffs
    p = c - b * b / 3.0
    q = 2.0 * b ** 3 / 27.0 - b * c / 3.0 + d
    shift = -b / 3.0
    scale = max(1.0, abs(b), math.sqrt(abs(c)), abs(d) ** (1.0 / 3.0))
    if abs(p) < 1e-14 * scale ** 2 and abs(q) < 1e-14 * scale ** 3:
        return np.array([shift, shift, shift]), None
    disc = (q / 2.0) ** 2 + (p / 3.0) ** 3
    if disc > 0.0:
        s = math.sqrt(disc)
        t1 = -q / 2.0 - math.copysign(s, q)
        u = math.copysign(abs(t1) ** (1.0 / 3.0), t1)
        v = -p / (3.0 * u) if u != 0.0 else 0.0
        y1 = u + v
        re = -y1 / 2.0 + shift
        im = math.sqrt(3.0) / 2.0 * abs(u - v)
        return np.array([y1 + shift]), (re, im)
    m = 2.0 * math.sqrt(max(-p, 0.0) / 3.0)
    if m == 0.0:
        return np.array([shift, shift, shift]), None
    arg = 3.0 * q / (p * m)
    arg = min(1.0, max(-1.0, arg))
    phi = math.acos(arg) / 3.0
    ys = [m * math.cos(phi - 2.0 * math.pi * k / 3.0) for k in range(3)]
    return np.array(sorted(y + shift for y in ys)), None


def _polish(root, coeffs, scale):
    for _ in range(2):
        p = ((coeffs[0] * root + coeffs[1]) * root + coeffs[2]) * root + coeffs[3]
        dp = (3.0 * coeffs[0] * root + 2.0 * coeffs[1]) * root + coeffs[2]
        if abs(dp) < 1e-8 * scale ** 2:
            break
        root -= p / dp
    return root


def eigenvalues_3x3(A):
    """(real_roots, complex_pair) of A;  complex_pair is (re, im) or None."""
    coeffs = char_poly(A)
    scale = max(1.0, float(np.max(np.abs(A))))
    reals, pair = _cubic_roots(coeffs)
    reals = np.array(sorted(_polish(r, coeffs, scale) for r in reals))
    return reals, pair


def _cluster(values, tol):
    """Group sorted values whose gaps are below tol; returns (means, counts)."""
    values = np.sort(np.asarray(values, dtype=float))
    groups = [[values[0]]]
    for v in values[1:]:
        if v - groups[-1][-1] <= tol:
            groups[-1].append(v)
        else:
            groups.append([v])
    return ([float(np.mean(grp)) for grp in groups],
            [len(grp) for grp in groups])


def _refine_by_trace(means, counts, trace):
    """Recompute the repeated root from the trace; multiple roots of the cubic
    are ill-conditioned but the trace identity is exact."""
    if len(means) == 1:
        return [trace / 3.0]
    if len(means) == 2:
        if counts[0] == 2:
            return [(trace - means[1]) / 2.0, means[1]]
        return [means[0], (trace - means[0]) / 2.0]
    return means


def _poly_from_roots(roots):
    coeffs = np.array([1.0])
    for r in roots:
        coeffs = np.convolve(coeffs, [1.0, -r])
    return coeffs


def poly_apply(coeffs, A):
    """Evaluate a monic polynomial (highest-first coefficients) at a matrix."""
    A = np.asarray(A, dtype=float)
    out = np.zeros_like(A)
    for c in coeffs:
        out = out @ A + c * np.eye(3)
    return out


def minimal_polynomial(A, tol=TAU_RANK):
    """Coefficients (highest degree first) of the monic annihilator of least degree."""
    A = np.asarray(A, dtype=float)
    nrm = max(1.0, float(np.linalg.norm(A, 2)))
    reals, pair = eigenvalues_3x3(A)
    if pair is not None and pair[1] >= TAU_CLUSTER * nrm:
        re, im = pair
        quad = np.array([1.0, -2.0 * re, re * re + im * im])
        return np.convolve(quad, [1.0, -reals[0]])
    if pair is not None:
        reals = np.array(sorted([reals[0], pair[0], pair[0]]))
    means, counts = _cluster(reals, TAU_CLUSTER * nrm)
    means = _refine_by_trace(means, counts, float(np.trace(A)))

    candidates = []
    if len(means) == 1:
        lam = means[0]
        candidates = [[lam], [lam, lam], [lam, lam, lam]]
    elif len(means) == 2:
        d = means[0] if counts[0] == 2 else means[1]
        s = means[1] if counts[0] == 2 else means[0]
        candidates = [[d, s], [d, d, s]]
    else:
        candidates = [list(means)]
    for roots in candidates:
        coeffs = _poly_from_roots(roots)
        if np.max(np.abs(poly_apply(coeffs, A))) <= tol * nrm ** len(roots):
            return coeffs
    return char_poly(A)


class FormVariant(enum.Enum):
    DIAGONALIZABLE = "diagonalizable"
    COMPLEX_PAIR = "complex_pair"
    JORDAN_2 = "jordan2"
    JORDAN_3 = "jordan3"


@dataclass(frozen=True)
class ShapeOperatorForm:
    """Canonical form of a g-self-adjoint endomorphism with named parameters.

    parameters:
      diagonalizable -> (a1, a2, a3), repeated eigenvalue listed first
      complex_pair   -> (a1, b1, a2) for eigenvalues a1 +/- i b1 and a2
      jordan2        -> (a1, a2), double root a1 (a2 may equal a1)
      jordan3        -> (a1,), triple defective root
    """

    variant: FormVariant
    parameters: tuple
    minimal_polynomial: np.ndarray

    def min_poly_degree(self):
        return len(self.minimal_polynomial) - 1


def is_self_adjoint(A, g, tol=TAU_ALG):
    A = np.asarray(A, dtype=float)
    g = np.asarray(g, dtype=float)
    m = g @ A
    scale = max(1.0, float(np.max(np.abs(m))))
    return float(np.max(np.abs(m - m.T))) <= tol * scale * 10.0


def classify_shape_operator(A, g, tol_rank=TAU_RANK, tol_cluster=TAU_CLUSTER):
    """Sort A into its Lorentzian canonical form from basis-free invariants.

    Raises AmbiguousClassification when eigenvalue separations land just
    above the clustering threshold (within a factor of ten), where the
    repeated/distinct decision is not numerically trustworthy.
    """
    A = np.asarray(A, dtype=float)
    if not is_self_adjoint(A, g):
        raise ValueError("operator is not self-adjoint for the supplied metric")
    nrm = max(1.0, float(np.linalg.norm(A, 2)))
    reals, pair = eigenvalues_3x3(A)

    if pair is not None and pair[1] >= tol_cluster * nrm:
        if pair[1] < 10.0 * tol_cluster * nrm:
            raise AmbiguousClassification(
                "imaginary part sits in the undecidable band; refine sampling")
        re, im = pair
        quad = np.array([1.0, -2.0 * re, re * re + im * im])
        mp = np.convolve(quad, [1.0, -reals[0]])
        return ShapeOperatorForm(FormVariant.COMPLEX_PAIR,
                                 (re, im, float(reals[0])), mp)
    if pair is not None:
        reals = np.array(sorted([reals[0], pair[0], pair[0]]))

    means, counts = _cluster(reals, tol_cluster * nrm)
    for lo, hi in zip(means[:-1], means[1:]):
        if hi - lo < 10.0 * tol_cluster * nrm:
            raise AmbiguousClassification(
                f"eigenvalue gap {hi - lo:.3e} straddles the cluster "
                "threshold; refine sampling")
    means = _refine_by_trace(means, counts, float(np.trace(A)))

    if len(means) == 3:
        mp = _poly_from_roots(means)
        return ShapeOperatorForm(FormVariant.DIAGONALIZABLE, tuple(means), mp)

    if len(means) == 1:
        lam = means[0]
        if np.max(np.abs(A - lam * np.eye(3))) <= tol_rank * nrm:
            return ShapeOperatorForm(FormVariant.DIAGONALIZABLE,
                                     (lam, lam, lam), np.array([1.0, -lam]))
        sq = poly_apply(np.array([1.0, -2.0 * lam, lam * lam]), A)
        if np.max(np.abs(sq)) <= tol_rank * nrm ** 2:
            return ShapeOperatorForm(FormVariant.JORDAN_2, (lam, lam),
                                     np.array([1.0, -2.0 * lam, lam * lam]))
        return ShapeOperatorForm(FormVariant.JORDAN_3, (lam,),
                                 _poly_from_roots([lam, lam, lam]))

    d = means[0] if counts[0] == 2 else means[1]
    s = means[1] if counts[0] == 2 else means[0]
    prod = poly_apply(_poly_from_roots([d, s]), A)
    if np.max(np.abs(prod)) <= tol_rank * nrm ** 2:
        return ShapeOperatorForm(FormVariant.DIAGONALIZABLE, (d, d, s),
                                 _poly_from_roots([d, s]))
    return ShapeOperatorForm(FormVariant.JORDAN_2, (d, s),
                             _poly_from_roots([d, d, s]))


PSEUDO_ORTHONORMAL_GRAM = np.array([[0.0, -1.0, 0.0],
                                    [-1.0, 0.0, 0.0],
                                    [0.0, 0.0, 1.0]])


def canonical_matrix(variant, parameters, epsilon=1):
    """Materialize (A, g) for a canonical form in its stated frame.

    Diagonalizable and complex-pair forms live in an orthonormal frame with
    g = diag(-epsilon, 1, 1); the Jordan forms live in the pseudo-orthonormal
    frame with g(e1, e2) = -1, g(e3, e3) = 1.
    """
    if variant is FormVariant.DIAGONALIZABLE:
        a1, a2, a3 = parameters
        return np.diag([a1, a2, a3]), np.diag([-float(epsilon), 1.0, 1.0])
    if variant is FormVariant.COMPLEX_PAIR:
        a1, b1, a2 = parameters
        A = np.array([[a1, b1, 0.0], [-b1, a1, 0.0], [0.0, 0.0, a2]])
        return A, np.diag([-1.0, 1.0, 1.0])
    if variant is FormVariant.JORDAN_2:
        a1, a2 = parameters
        A = np.array([[a1, 0.0, 0.0], [1.0, a1, 0.0], [0.0, 0.0, a2]])
        return A, PSEUDO_ORTHONORMAL_GRAM.copy()
    if variant is FormVariant.JORDAN_3:
        (a1,) = parameters
        A = np.array([[a1, 0.0, 0.0], [0.0, a1, 1.0], [-1.0, 0.0, a1]])
        return A, PSEUDO_ORTHONORMAL_GRAM.copy()
    raise ValueError(f"unknown canonical form variant {variant!r}")
