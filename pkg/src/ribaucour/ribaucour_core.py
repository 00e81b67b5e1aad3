"""Surface patches from pairs of holomorphic functions.

A pair (f1, f2) of holomorphic functions determines a surface whose
middle spheres (centre X + (H/K)N, radius |H/K|) all meet the unit
sphere along great circles.  f1 fixes the unit normal N by inverse
stereographic projection; the support function

    rho = |f1'| (1 + |f2|^2) / (|f2'| (1 + |f1|^2))

recovers the immersion as X = grad rho + rho N (gradient in the sphere
metric).  All shape data comes from second-order jets of rho, so the
checks below operate at rounding precision.

Conventions: shape operator S = -dN dX^{-1}, second fundamental form
II = -<dX, dN>.  The curvature-radius operator

    B = -(e^{-2 tau} Hess rho + rho Id)

has eigenvalues 1/k_i with principal directions as eigenvectors;
II = e^{2 tau} B and I = e^{2 tau} B^2 in chart coordinates.  With f1 =
f2 the patch is the unit sphere itself and k1 = k2 = -1.

The characterising identities, each exposed as a residual check:

* support identity  rho^2 + rho Lap(rho) - 1 - |grad rho|^2 = 0,
* middle-sphere identity  <X,X> + 2 (H/K) <X,N> + 1 = 0,
* holomorphy of the Laguerre-invariant Hopf coefficient
  mu = (Hess_uu - Hess_vv - 2i Hess_uv) / (2 rho).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grids import Domain
from .holoexpr import HoloExpr, eval_jet, parse, to_text
from .jets import RJet2, abs2_jet, jet_finite
from .sphere_geom import (SphereFrame, conformal_hessian, frame_from_jet,
                          sphere_gradient, sphere_laplacian)

__all__ = [
    "RibaucourPatch", "SurfaceFields", "SurfaceSample", "ResidualField",
    "make_patch", "support", "support_jet", "shape_from_support",
    "evaluate_patch", "immerse", "check_support_pde", "support_pde_residual",
    "check_middle_sphere", "hk_from_support", "laguerre_hopf",
    "cauchy_riemann_residual", "unit_sphere_gap",
    "DEGENERATE_TOL", "UMBILIC_TOL",
]

# |det B| below DEGENERATE_TOL times the local operator scale means the
# immersion fails (a principal radius collapses); UMBILIC_TOL is the
# relative principal-curvature gap below which directions are unset.
DEGENERATE_TOL = 1e-10
UMBILIC_TOL = 1e-8


@dataclass(frozen=True)
class RibaucourPatch:
    """A surface patch: defining pair (f1, f2) and a chart rectangle."""

    f1: HoloExpr
    f2: HoloExpr
    domain: Domain = Domain(-1.0, 1.0, -1.0, 1.0)

    def label(self) -> str:
        return f"({to_text(self.f1)}, {to_text(self.f2)})"


def make_patch(f1, f2, domain: Domain | None = None) -> RibaucourPatch:
    """Build a patch from expressions or their source text."""
    e1 = parse(f1) if isinstance(f1, str) else f1
    e2 = parse(f2) if isinstance(f2, str) else f2
    return RibaucourPatch(e1, e2, domain or Domain(-1.0, 1.0, -1.0, 1.0))


# ---------------------------------------------------------------------------
# Support function
# ---------------------------------------------------------------------------

def support_jet(j1, j2) -> RJet2:
    """Support-function jet from order-3 complex jets of f1 and f2."""
    with np.errstate(all="ignore"):
        num = abs2_jet(j1.derivative()) * ((abs2_jet(j2) + 1.0) ** 2)
        den = abs2_jet(j2.derivative()) * ((abs2_jet(j1) + 1.0) ** 2)
        return (num / den).sqrt()


def support(f1: HoloExpr, f2: HoloExpr, z) -> RJet2:
    """Support function rho with exact second-order partials at z
    (complex scalar or array).  Zeros of f2' leave non-finite entries for
    the caller to mask; zeros of f1' give rho = 0 (degenerate sample)."""
    return support_jet(eval_jet(f1, z, 3), eval_jet(f2, z, 3))


# ---------------------------------------------------------------------------
# Principal data of a 2x2 symmetric operator field
# ---------------------------------------------------------------------------

def _principal(b11, b12, b22, umbilic_tol: float):
    """Eigen-decompose the curvature-radius operator [[b11,b12],[b12,b22]].

    Returns (k1, k2, dir1, dir2, umbilic, det, scale): curvatures are the
    reciprocal eigenvalues sorted k1 >= k2, directions are unit chart
    vectors of shape (..., 2) (NaN where umbilic), ``scale`` is a local
    operator magnitude for relative degeneracy thresholds.
    """
    b11 = np.asarray(b11, dtype=float)
    b12 = np.asarray(b12, dtype=float)
    b22 = np.asarray(b22, dtype=float)
    with np.errstate(all="ignore"):
        mean = 0.5 * (b11 + b22)
        half = 0.5 * (b11 - b22)
        disc = np.sqrt(half * half + b12 * b12)
        lam_hi = mean + disc
        lam_lo = mean - disc
        det = lam_hi * lam_lo
        scale = np.maximum(1.0, lam_hi * lam_hi + lam_lo * lam_lo)
        k_a = 1.0 / lam_hi
        k_b = 1.0 / lam_lo
        # eigenvector of lam_hi; pick the numerically larger of the two
        # algebraically equivalent forms
        ex = np.where(b11 >= b22, lam_hi - b22, b12)
        ey = np.where(b11 >= b22, b12, lam_hi - b11)
        norm = np.sqrt(ex * ex + ey * ey)
        ex, ey = ex / norm, ey / norm
        umbilic = np.abs(k_a - k_b) <= umbilic_tol * (np.abs(k_a) + np.abs(k_b))
        umbilic = umbilic | ~np.isfinite(norm) | (np.asarray(norm) == 0.0)
        swap = k_b > k_a
        k1 = np.where(swap, k_b, k_a)
        k2 = np.where(swap, k_a, k_b)
        d_hi = np.stack([ex, ey], axis=-1)
        d_lo = np.stack([-ey, ex], axis=-1)
        dir1 = np.where(swap[..., None], d_lo, d_hi)
        dir2 = np.where(swap[..., None], d_hi, d_lo)
        unset = np.broadcast_to(umbilic[..., None], dir1.shape)
        dir1 = np.where(unset, np.nan, dir1)
        dir2 = np.where(unset, np.nan, dir2)
    return k1, k2, dir1, dir2, umbilic, det, scale


# ---------------------------------------------------------------------------
# Assembled surface data
# ---------------------------------------------------------------------------

@dataclass
class SurfaceFields:
    """Per-sample surface data over a chart grid (or a single point).

    Vector quantities have a trailing axis of length 3 (space) or 2
    (chart directions).  ``first/second/third`` hold fundamental-form
    coefficient triples (uu, uv, vv); ``b11/b12/b22`` the curvature-radius
    operator.  Flag arrays: ``branch`` (frame or support degenerate),
    ``degenerate`` (immersion fails: |det B| below threshold, includes
    branch), ``umbilic`` (principal directions unset).
    """

    frame: SphereFrame
    rho: RJet2
    X: np.ndarray
    N: np.ndarray
    first: tuple
    second: tuple
    third: tuple
    b11: np.ndarray
    b12: np.ndarray
    b22: np.ndarray
    k1: np.ndarray
    k2: np.ndarray
    dir1: np.ndarray
    dir2: np.ndarray
    hover_k: np.ndarray
    mu: np.ndarray
    branch: np.ndarray
    degenerate: np.ndarray
    umbilic: np.ndarray
    Z: np.ndarray | None = None
    patch: RibaucourPatch | None = None

    @property
    def valid(self):
        """Samples where the immersion and frame are trustworthy."""
        return ~np.asarray(self.degenerate)

    @property
    def rho_val(self):
        return np.asarray(self.rho.val, dtype=float)

    @property
    def e2tau(self):
        return self.frame.e2tau


def shape_from_support(frame: SphereFrame, rho: RJet2,
                       det_tol: float = DEGENERATE_TOL,
                       umbilic_tol: float = UMBILIC_TOL) -> SurfaceFields:
    """All shape data of the surface with unit normal ``frame`` and
    support jet ``rho``.  Works for any support field on the sphere, not
    only those coming from holomorphic pairs."""
    with np.errstate(all="ignore"):
        rv = np.asarray(rho.val, dtype=float)
        e2t = np.asarray(frame.e2tau)
        w = np.asarray(np.exp(-2.0 * np.asarray(frame.tau.val, dtype=float)))
        huu, huv, hvv = conformal_hessian(rho, frame.tau)
        b11 = -(w * huu + rv)
        b12 = -(w * huv)
        b22 = -(w * hvv + rv)
        k1, k2, dir1, dir2, umbilic, det, scale = _principal(
            b11, b12, b22, umbilic_tol)
        X = sphere_gradient(rho, frame) + rv[..., None] * frame.normal
        second = (e2t * b11, e2t * b12, e2t * b22)
        first = (e2t * (b11 * b11 + b12 * b12),
                 e2t * b12 * (b11 + b22),
                 e2t * (b12 * b12 + b22 * b22))
        third = (e2t, np.zeros_like(e2t), e2t)
        hover_k = -0.5 * (sphere_laplacian(rho, frame) + 2.0 * rv)
        mu = (huu - hvv - 2.0j * huv) / (2.0 * rv)
    branch = np.asarray(frame.branch) | ~jet_finite(rho)
    degenerate = branch | (np.abs(det) <= det_tol * scale)
    degenerate = degenerate | ~np.isfinite(det)
    return SurfaceFields(frame=frame, rho=rho, X=X, N=frame.normal,
                         first=first, second=second, third=third,
                         b11=np.asarray(b11), b12=np.asarray(b12),
                         b22=np.asarray(b22),
                         k1=k1, k2=k2, dir1=dir1, dir2=dir2,
                         hover_k=np.asarray(hover_k), mu=np.asarray(mu),
                         branch=np.asarray(branch),
                         degenerate=np.asarray(degenerate),
                         umbilic=np.asarray(umbilic) & ~np.asarray(degenerate))


def evaluate_patch(patch: RibaucourPatch, nu: int = 41, nv: int = 41,
                   Z: np.ndarray | None = None) -> SurfaceFields:
    """Evaluate the full shape pipeline on a grid over the patch domain
    (or on explicit sample points ``Z``)."""
    if Z is None:
        _, _, Z = patch.domain.mesh(nu, nv)
    j1 = eval_jet(patch.f1, Z, 3)
    j2 = eval_jet(patch.f2, Z, 3)
    fields = shape_from_support(frame_from_jet(j1), support_jet(j1, j2))
    fields.Z = np.asarray(Z)
    fields.patch = patch
    return fields


@dataclass(frozen=True)
class SurfaceSample:
    """Shape data at a single chart point."""

    X: np.ndarray
    N: np.ndarray
    first_form: tuple
    second_form: tuple
    third_form: tuple
    k1: float
    k2: float
    dir1: np.ndarray
    dir2: np.ndarray
    rho: float
    hover_k: float
    degenerate: bool
    umbilic: bool
    branch: bool


def immerse(patch: RibaucourPatch, z: complex) -> SurfaceSample:
    """Evaluate one chart point.  Degeneracies set flags (values may be
    NaN); a jet that cannot be evaluated at all raises EvalError."""
    fields = evaluate_patch(patch, Z=np.asarray(complex(z)))
    take3 = lambda t: tuple(float(np.asarray(c)) for c in t)
    return SurfaceSample(
        X=np.asarray(fields.X, dtype=float),
        N=np.asarray(fields.N, dtype=float),
        first_form=take3(fields.first),
        second_form=take3(fields.second),
        third_form=take3(fields.third),
        k1=float(fields.k1), k2=float(fields.k2),
        dir1=np.asarray(fields.dir1, dtype=float),
        dir2=np.asarray(fields.dir2, dtype=float),
        rho=float(fields.rho_val), hover_k=float(fields.hover_k),
        degenerate=bool(fields.degenerate), umbilic=bool(fields.umbilic),
        branch=bool(fields.branch))


# ---------------------------------------------------------------------------
# Residual checks
# ---------------------------------------------------------------------------

@dataclass
class ResidualField:
    """A residual sampled over a grid with a validity mask."""

    values: np.ndarray
    valid: np.ndarray
    name: str = ""

    @property
    def n_valid(self) -> int:
        return int(np.count_nonzero(self.valid))

    @property
    def n_excluded(self) -> int:
        return int(np.asarray(self.valid).size - self.n_valid)

    @property
    def max_abs(self) -> float:
        if self.n_valid == 0:
            return float("nan")
        return float(np.max(np.abs(self.values[self.valid])))


def support_pde_residual(fields: SurfaceFields) -> ResidualField:
    """Residual of rho^2 + rho Lap(rho) - 1 - |grad rho|^2 per sample."""
    rho, frame = fields.rho, fields.frame
    with np.errstate(all="ignore"):
        rv = np.asarray(rho.val, dtype=float)
        w = np.asarray(np.exp(-2.0 * np.asarray(frame.tau.val, dtype=float)))
        lap = sphere_laplacian(rho, frame)
        grad_sq = w * (np.asarray(rho.du, dtype=float) ** 2
                       + np.asarray(rho.dv, dtype=float) ** 2)
        r = rv * rv + rv * lap - 1.0 - grad_sq
    valid = ~np.asarray(fields.branch) & np.isfinite(np.asarray(r))
    return ResidualField(np.asarray(r), np.asarray(valid), "support-pde")


def check_support_pde(f1: HoloExpr, f2: HoloExpr, Z) -> ResidualField:
    """Support-identity residual for the pair (f1, f2) on sample points Z."""
    j1 = eval_jet(f1, np.asarray(Z, dtype=complex), 3)
    j2 = eval_jet(f2, np.asarray(Z, dtype=complex), 3)
    fields = shape_from_support(frame_from_jet(j1), support_jet(j1, j2))
    return support_pde_residual(fields)


def check_middle_sphere(fields_or_sample) -> ResidualField | float:
    """Residual of <X,X> + 2 (H/K) <X,N> + 1 per sample.

    Vanishing is equivalent to every middle sphere meeting the unit
    sphere along a great circle.  Accepts a SurfaceFields grid (returns a
    ResidualField) or a single SurfaceSample (returns a float)."""
    if isinstance(fields_or_sample, SurfaceSample):
        s = fields_or_sample
        return float(s.X @ s.X + 2.0 * s.hover_k * (s.X @ s.N) + 1.0)
    fields = fields_or_sample
    with np.errstate(all="ignore"):
        xx = np.sum(fields.X * fields.X, axis=-1)
        xn = np.sum(fields.X * fields.N, axis=-1)
        r = xx + 2.0 * fields.hover_k * xn + 1.0
    valid = fields.valid & np.isfinite(np.asarray(r)) \
        & np.isfinite(np.asarray(fields.hover_k))
    return ResidualField(np.asarray(r), np.asarray(valid), "middle-sphere")


def hk_from_support(fields_or_sample):
    """Mean-to-Gauss curvature ratio H/K = -(Lap rho + 2 rho)/2, computed
    straight from the support jet (no eigendecomposition)."""
    return fields_or_sample.hover_k


def laguerre_hopf(patch: RibaucourPatch, z: complex) -> complex:
    """Hopf coefficient of the Laguerre-invariant quadratic differential,
    mu = (Hess_uu - Hess_vv - 2i Hess_uv)/(2 rho); holomorphic exactly on
    the class of surfaces this module builds.  |mu| measures umbilic
    deviation: |1/k2 - 1/k1| = 2 rho |mu| e^{-2 tau}."""
    fields = evaluate_patch(patch, Z=np.asarray(complex(z)))
    return complex(fields.mu)


def _d1(F: np.ndarray, h: float, axis: int) -> np.ndarray:
    """Fourth-order centred first derivative along an axis; output loses
    two samples at each end of that axis."""
    F = np.moveaxis(F, axis, 0)
    out = (F[:-4] - 8.0 * F[1:-3] + 8.0 * F[3:-1] - F[4:]) / (12.0 * h)
    return np.moveaxis(out, 0, axis)


def cauchy_riemann_residual(mu: np.ndarray, hu: float, hv: float,
                            valid: np.ndarray) -> ResidualField:
    """Discrete holomorphy residual |a_u - b_v| + |a_v + b_u| of
    mu = a + ib over a grid, fourth-order stencils, interior samples whose
    full 5x5 neighbourhood is valid."""
    a, b = np.real(mu), np.imag(mu)
    au = _d1(a, hu, 0)[:, 2:-2]
    av = _d1(a, hv, 1)[2:-2, :]
    bu = _d1(b, hu, 0)[:, 2:-2]
    bv = _d1(b, hv, 1)[2:-2, :]
    r = np.abs(au - bv) + np.abs(av + bu)
    nu, nv = valid.shape
    ok = np.ones((nu - 4, nv - 4), dtype=bool)
    for di in range(5):
        for dj in range(5):
            ok &= valid[di:nu - 4 + di, dj:nv - 4 + dj]
    ok &= np.isfinite(r)
    return ResidualField(r, ok, "laguerre-holomorphy")


def check_laguerre_holomorphy(patch: RibaucourPatch, nu: int = 161,
                              nv: int = 161) -> ResidualField:
    """Discrete Cauchy-Riemann residual of the Hopf coefficient mu over
    the patch, evaluated on its own grid.

    The residual of the fourth-order stencils is truncation-dominated:
    for a holomorphic field sampled with equal steps the h^4 error terms
    of the u- and v-stencils coincide and cancel, so the residual decays
    like h^6.  A moderately fine grid therefore measures holomorphy
    itself rather than the sampling, independent of whatever resolution
    a caller uses for rendering or other residuals.
    """
    fields = evaluate_patch(patch, nu, nv)
    hu, hv = patch.domain.spacing(nu, nv)
    return cauchy_riemann_residual(fields.mu, hu, hv, fields.valid)


def unit_sphere_gap(fields: SurfaceFields) -> float:
    """max |X - N| over valid samples: zero iff the patch degenerates to
    the fixed unit sphere itself (rho = 1, grad rho = 0)."""
    if not np.any(fields.valid):
        return float("nan")
    gap = np.linalg.norm(fields.X - fields.N, axis=-1)
    return float(np.max(gap[fields.valid]))
