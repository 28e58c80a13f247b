"""Left-invariant Riemannian geometry on a metric Lie algebra.

Sign conventions, fixed once for the whole package:

* curvature        ``R(x, y)z = D_[x,y] z - D_x D_y z + D_y D_x z``
* Ricci            ``Ric(x, y) = trace of z -> R(x, z)y``

With this pair of signs a left-invariant hyperbolic metric (``ad_b = k Id`` on
a codimension-one abelian ideal) has ``Ric = -k^2 (n-1) g``, i.e. negative
Einstein constant, which is what the rest of the package expects.

:func:`ricci` computes the Ricci form along two independent routes, the
curvature trace and a structure-constant formula (Killing form plus frame sums
plus the trace vector), and raises :class:`ConsistencyError` if they disagree.
The second route never touches the connection, so agreement is a strong check
on both.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import frames
from .algebra import LieAlgebra, coefficient_tolerance, validate
from .errors import (
    ConsistencyError,
    DimensionError,
    InvalidAlgebraError,
    MetricError,
    NumericInputError,
    StructureError,
)


@dataclass(frozen=True)
class MetricLieAlgebra:
    """A valid Lie algebra together with a positive definite inner product."""

    algebra: LieAlgebra
    metric: np.ndarray

    def __post_init__(self):
        g = np.array(self.metric, dtype=float)
        n = self.algebra.dim
        if g.shape != (n, n):
            raise StructureError(f"metric must have shape ({n}, {n}), got {g.shape}")
        if not np.isfinite(g).all():
            raise NumericInputError("metric contains NaN or infinity")
        if np.max(np.abs(g - g.T)) > coefficient_tolerance(g):
            raise MetricError("metric is not symmetric")
        try:
            np.linalg.cholesky(g)
        except np.linalg.LinAlgError:
            raise MetricError("metric is not positive definite") from None
        report = validate(self.algebra)
        if not report.ok:
            first = report.violations[0]
            raise InvalidAlgebraError(
                f"structure constants are not a Lie algebra: first violation "
                f"{first.kind} at {first.indices} with magnitude {first.magnitude:.3e} "
                f"({len(report.violations)} total)"
            )
        g.setflags(write=False)
        object.__setattr__(self, "metric", g)

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def c(self) -> np.ndarray:
        return self.algebra.c

    @cached_property
    def frame(self) -> np.ndarray:
        """Columns form a deterministic g-orthonormal basis."""
        return frames.orthonormal_frame(self.metric)

    @cached_property
    def metric_inv(self) -> np.ndarray:
        return np.linalg.inv(self.metric)

    @cached_property
    def tolerance(self) -> float:
        return coefficient_tolerance(self.c, self.metric)

    def inner(self, x: np.ndarray, y: np.ndarray) -> float:
        return float(np.asarray(x, float) @ self.metric @ np.asarray(y, float))

    def raise_covector(self, theta: np.ndarray) -> np.ndarray:
        """The g-dual vector of a covector given in the dual basis."""
        return np.linalg.solve(self.metric, np.asarray(theta, dtype=float))

    def lower_vector(self, x: np.ndarray) -> np.ndarray:
        return self.metric @ np.asarray(x, dtype=float)

    def form_norm(self, form: np.ndarray) -> float:
        """Frobenius norm of a bilinear form in the orthonormal frame."""
        return frames.form_frame_norm(form, self.frame)

    def covector_norm(self, theta: np.ndarray) -> float:
        theta = np.asarray(theta, dtype=float)
        return float(np.sqrt(max(theta @ self.raise_covector(theta), 0.0)))


def change_basis(m: MetricLieAlgebra, basis: np.ndarray) -> MetricLieAlgebra:
    """The same geometry expressed in a new basis (columns of ``basis``)."""
    basis = np.asarray(basis, dtype=float)
    return MetricLieAlgebra(
        LieAlgebra(frames.structure_in_basis(m.c, basis)),
        frames.form_in_basis(m.metric, basis),
    )


@dataclass(frozen=True)
class ConnectionTable:
    """gamma[i, j, k] = coefficient of e_k in (derivative of e_j along e_i)."""

    gamma: np.ndarray


@dataclass(frozen=True)
class CurvatureData:
    riem: np.ndarray  # (1,3) tensor, riem[i, j, k, l]: e_l component of R(e_i, e_j)e_k
    ricci: np.ndarray
    scalar: float


def levi_civita(m: MetricLieAlgebra) -> ConnectionTable:
    """Torsion-free metric connection from the Koszul formula.

    On a Lie algebra with a left-invariant metric the Koszul formula reduces
    to  g(D_x y, z) = (g([x,y],z) - g(x,[y,z]) - g(y,[x,z])) / 2.
    """
    c, g = m.c, m.metric
    t = np.einsum("ijm,mk->ijk", c, g)  # t[i,j,k] = g([e_i, e_j], e_k)
    rhs = 0.5 * (t - np.einsum("jki->ijk", t) - np.einsum("ikj->ijk", t))
    n = m.dim
    gamma = np.linalg.solve(g, rhs.reshape(n * n, n).T).T.reshape(n, n, n)
    return ConnectionTable(gamma)


def torsion_residual(m: MetricLieAlgebra, table: ConnectionTable) -> float:
    gamma = table.gamma
    return float(np.max(np.abs(gamma - np.einsum("ijk->jik", gamma) - m.c)))


def compatibility_residual(m: MetricLieAlgebra, table: ConnectionTable) -> float:
    """Max violation of g(D_i e_j, e_k) + g(e_j, D_i e_k) = 0."""
    dg = np.einsum("ijm,mk->ijk", table.gamma, m.metric)
    return float(np.max(np.abs(dg + np.einsum("ikj->ijk", dg))))


def curvature(m: MetricLieAlgebra, table: ConnectionTable) -> np.ndarray:
    """(1,3) curvature tensor of any connection table on ``m``'s algebra."""
    gamma = table.gamma
    return (
        np.einsum("ijm,mkl->ijkl", m.c, gamma)
        - np.einsum("jkm,iml->ijkl", gamma, gamma)
        + np.einsum("ikm,jml->ijkl", gamma, gamma)
    )


def ricci_trace(riem: np.ndarray) -> np.ndarray:
    """Ricci form as the trace Ric(x, y) = tr(z -> R(x, z)y)."""
    return np.einsum("imjm->ij", riem)


def curvature_lowered(m: MetricLieAlgebra, riem: np.ndarray) -> np.ndarray:
    """(0,4) tensor R(x, y, z, w) = g(R(x, y)z, w)."""
    return np.einsum("ijkm,ml->ijkl", riem, m.metric)


def besse_ricci(m: MetricLieAlgebra) -> np.ndarray:
    """Ricci form from structure constants alone, bypassing the connection.

    In a g-orthonormal frame,
    Ric = P - B/2 - (ad_z + ad_z^*)/2 as bilinear forms, where B is the
    Killing form, z is the g-dual of x -> tr ad_x, and
    P(x, y) = sum_{i,k} ( -g(e_i,[x,e_k]) g(e_i,[y,e_k]) / 2
                          + g(x,[e_i,e_k]) g(y,[e_i,e_k]) / 4 ).
    """
    c, g = m.c, m.metric
    u = m.frame
    cf = frames.structure_in_basis(c, u)
    p_frame = -0.5 * np.einsum("aki,bki->ab", cf, cf) + 0.25 * np.einsum(
        "ika,ikb->ab", cf, cf
    )
    back = np.linalg.inv(u)
    p = frames.form_in_basis(p_frame, back)

    ads = np.einsum("ijk->ikj", c)  # ads[i] = matrix of ad_{e_i}
    killing = np.einsum("ipq,jqp->ij", ads, ads)

    traces = np.einsum("ijj->i", c)
    z = np.linalg.solve(g, traces)
    ad_z = np.einsum("i,ijk->kj", z, c)
    z_form = 0.5 * (ad_z.T @ g + g @ ad_z)

    return p - 0.5 * killing - z_form


def ricci(m: MetricLieAlgebra) -> CurvatureData:
    """Curvature, Ricci form and scalar curvature with a built-in cross-check.

    Raises :class:`ConsistencyError` if the curvature-trace Ricci and the
    structure-constant Ricci disagree beyond the input-scaled tolerance.
    """
    table = levi_civita(m)
    riem = curvature(m, table)
    ric = ricci_trace(riem)
    oracle = besse_ricci(m)
    if m.form_norm(ric - oracle) > m.tolerance * (1.0 + m.form_norm(ric)):
        raise ConsistencyError(
            "curvature-trace Ricci and structure-constant Ricci disagree; "
            "this is an internal bug"
        )
    scalar = float(np.trace(m.metric_inv @ ric))
    return CurvatureData(riem=riem, ricci=ric, scalar=scalar)


def einstein_defect(m: MetricLieAlgebra) -> float:
    """Frame norm of the trace-free Ricci part; zero exactly for Einstein."""
    if m.dim < 3:
        raise DimensionError("Einstein defect needs dimension at least 3")
    data = ricci(m)
    deviation = data.ricci - (data.scalar / m.dim) * m.metric
    return m.form_norm(deviation)


def codifferential_oneform(m: MetricLieAlgebra, theta: np.ndarray) -> float:
    """Codifferential of a left-invariant one-form: tr ad_T with T = g-dual."""
    t = m.raise_covector(theta)
    traces = np.einsum("ijj->i", m.c)
    return float(traces @ t)


def codifferential_sym2(
    m: MetricLieAlgebra, table: ConnectionTable, form: np.ndarray
) -> np.ndarray:
    """Codifferential of a symmetric bilinear form, as a standard-basis covector.

    (delta h)(y) = -sum_i (D_{f_i} h)(f_i, y) over an orthonormal frame; for a
    constant-coefficient form this expands into connection terms only.
    """
    u = m.frame
    gf = frames.structure_in_basis(table.gamma, u)
    hf = frames.form_in_basis(form, u)
    delta_frame = np.einsum("aam,mb->b", gf, hf) + np.einsum("abm,am->b", gf, hf)
    return frames.covector_from_basis(delta_frame, u)
