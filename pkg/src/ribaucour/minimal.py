"""Built-in minimal surface patches in conformal curvature-line charts.

Each patch is given by a closed-form immersion X(u, v) whose chart is
simultaneously conformal (<X_u,X_v> = 0, |X_u| = |X_v| = phi) and
curvature-line (II diagonal).  The geometry — unit normal with partials,
conformal factor, principal curvatures, and the conformal factor of the
normal's pullback metric — is derived symbolically with sympy from the
immersion alone and compiled to vectorized numpy callables, so no finite
differencing enters the congruence machinery built on top.

The unit normal is oriented so the principal curvature along u is
non-negative at the domain centre; the sphere-congruence data in
:mod:`ribaucour.congruence` depends on this choice of sign.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import sympy as sp

from .grids import Domain
from .jets import RJet2
from .sphere_geom import SphereFrame

__all__ = ["MinimalPatch", "enneper_patch", "catenoid_patch",
           "conformality_residual"]

_U, _V = sp.symbols("u v", real=True)


def _compile(expr):
    """Lambdify one expression; result broadcasts to the common sample
    shape of (U, V) even when the expression drops a variable."""
    fn = sp.lambdify((_U, _V), expr, modules="numpy")
    def call(U, V) -> np.ndarray:
        shape = np.broadcast_shapes(np.shape(U), np.shape(V))
        return np.broadcast_to(np.asarray(fn(U, V), dtype=float), shape)
    return call


def _compile_jet(expr):
    """Lambdify an expression and its partials to second order."""
    orders = [(), (_U,), (_V,), (_U, _U), (_U, _V), (_V, _V)]
    fns = [_compile(sp.diff(expr, *o) if o else expr) for o in orders]
    def jet(U, V) -> RJet2:
        with np.errstate(all="ignore"):
            return RJet2(*(f(U, V) for f in fns))
    return jet


def _compile_vec(exprs):
    fns = [_compile(e) for e in exprs]
    def vec(U, V) -> np.ndarray:
        return np.stack([f(U, V) for f in fns], axis=-1)
    return vec


@dataclass(frozen=True, eq=False)
class MinimalPatch:
    """A minimal immersion with its symbolically derived shape data."""

    name: str
    domain: Domain
    _fns: dict = field(repr=False)

    # -- immersion ----------------------------------------------------------

    def position(self, U, V) -> np.ndarray:
        return self._fns["X"](U, V)

    def position_derivatives(self, U, V) -> dict:
        """First and second partials of X, each of shape (..., 3)."""
        return {k: self._fns[k](U, V)
                for k in ("Xu", "Xv", "Xuu", "Xuv", "Xvv")}

    def normal(self, U, V) -> np.ndarray:
        return self._fns["N"](U, V)

    # -- scalar shape data --------------------------------------------------

    def phi(self, U, V):
        """Conformal factor |X_u| = |X_v|."""
        return self._fns["phi"](U, V)

    def phi_du(self, U, V):
        return self._fns["phi_u"](U, V)

    def phi_dv(self, U, V):
        return self._fns["phi_v"](U, V)

    def phi_jet(self, U, V) -> RJet2:
        return self._fns["phi_jet"](U, V)

    def log_phi_jet(self, U, V) -> RJet2:
        return self.phi_jet(U, V).log()

    def k1(self, U, V):
        """Principal curvature along u."""
        return self._fns["k1"](U, V)

    def k2(self, U, V):
        """Principal curvature along v (= -k1: minimal)."""
        return self._fns["k2"](U, V)

    def second_uv(self, U, V):
        """Off-diagonal second-form coefficient (zero in these charts)."""
        return self._fns["ii_uv"](U, V)

    # -- Gauss-map frame ----------------------------------------------------

    def frame(self, U, V) -> SphereFrame:
        """Unit-normal frame with jets, metric factor e^{2 tau} = k1^2 E.
        Flat samples (k1 = 0) degenerate and are flagged."""
        with np.errstate(all="ignore"):
            nx = self._fns["N_jets"][0](U, V)
            ny = self._fns["N_jets"][1](U, V)
            nz = self._fns["N_jets"][2](U, V)
            tau = self._fns["tau_jet"](U, V)
        finite = np.isfinite(np.asarray(tau.val))
        return SphereFrame(nx, ny, nz, tau, ~finite)


_CACHE: dict = {}


def _build_patch(name: str, xyz, domain: Domain) -> MinimalPatch:
    key = (name, domain)
    if key in _CACHE:
        return _CACHE[key]
    u, v = _U, _V
    X = sp.Matrix([sp.sympify(c) for c in xyz])
    Xu, Xv = X.diff(u), X.diff(v)
    Xuu, Xvv = X.diff(u, 2), X.diff(v, 2)
    Xuv = sp.diff(X, u, v)
    E = sp.factor(sp.expand(Xu.dot(Xu)))
    cross = Xu.cross(Xv)
    nsq = sp.factor(sp.expand(cross.dot(cross)))
    N0 = cross / sp.sqrt(nsq)
    ii_uu0 = sp.simplify(Xuu.dot(N0))
    ii_vv0 = sp.simplify(Xvv.dot(N0))
    ii_uv0 = sp.simplify(Xuv.dot(N0))
    # orient the normal so k1 (the u-direction curvature) >= 0 at centre
    centre = {u: (domain.u0 + domain.u1) / 2, v: (domain.v0 + domain.v1) / 2}
    k1_centre = float((ii_uu0 / E).subs(centre))
    sgn = -1 if k1_centre < 0 else 1
    N = sgn * N0
    k1 = sp.simplify(sgn * ii_uu0 / E)
    k2 = sp.simplify(sgn * ii_vv0 / E)
    phi = sp.sqrt(E)
    e2tau = sp.simplify(k1 * k1 * E)
    # a flat patch (k1 = 0) has a degenerate normal metric; represent tau
    # as NaN so the frame is branch-flagged instead of failing to compile
    tau = sp.nan if e2tau.is_zero else sp.log(e2tau) / 2
    fns = {
        "X": _compile_vec(list(X)),
        "Xu": _compile_vec(list(Xu)), "Xv": _compile_vec(list(Xv)),
        "Xuu": _compile_vec(list(Xuu)), "Xuv": _compile_vec(list(Xuv)),
        "Xvv": _compile_vec(list(Xvv)),
        "N": _compile_vec(list(N)),
        "N_jets": [_compile_jet(c) for c in N],
        "tau_jet": _compile_jet(tau),
        "phi_jet": _compile_jet(phi),
        "phi": _compile(phi),
        "phi_u": _compile(sp.diff(phi, u)),
        "phi_v": _compile(sp.diff(phi, v)),
        "k1": _compile(k1), "k2": _compile(k2),
        "ii_uv": _compile(sgn * ii_uv0),
        "F": _compile(Xu.dot(Xv)),
        "G": _compile(Xv.dot(Xv)),
        "E": _compile(E),
        # symbolic shape data, kept for exact quadrature of congruence data
        "sym": {"phi": phi, "E": E, "k1": k1, "k2": k2},
    }
    patch = MinimalPatch(name=name, domain=domain, _fns=fns)
    _CACHE[key] = patch
    return patch


def enneper_patch(domain: Domain | None = None) -> MinimalPatch:
    """Enneper's surface; chart conformal factor phi = 1 + u^2 + v^2 and
    principal curvatures +-2/phi^2."""
    u, v = _U, _V
    xyz = (u - u**3 / 3 + u * v**2,
           -(v - v**3 / 3 + v * u**2),
           u**2 - v**2)
    return _build_patch("enneper", xyz,
                        domain or Domain(-1.2, 1.2, -1.2, 1.2))


def catenoid_patch(domain: Domain | None = None) -> MinimalPatch:
    """The catenoid around the z-axis; phi = cosh v, curvatures
    +-1/cosh^2 v.  Default domain covers one period less a seam overlap
    and the waist band used by the congruence examples."""
    u, v = _U, _V
    xyz = (sp.cosh(v) * sp.cos(u), sp.cosh(v) * sp.sin(u), v)
    return _build_patch("catenoid", xyz,
                        domain or Domain(-np.pi, np.pi, -1.2, 1.2))


def conformality_residual(patch: MinimalPatch, U, V) -> dict:
    """Max deviations from the chart contract on the samples: inner
    product <X_u,X_v>, length gap ||X_u|-|X_v||, off-diagonal second-form
    coefficient, and minimality |k1+k2|."""
    F = patch._fns["F"](U, V)
    E = patch._fns["E"](U, V)
    G = patch._fns["G"](U, V)
    return {
        "inner": float(np.max(np.abs(F))),
        "length": float(np.max(np.abs(np.sqrt(E) - np.sqrt(G)))),
        "second_uv": float(np.max(np.abs(patch.second_uv(U, V)))),
        "minimality": float(np.max(np.abs(patch.k1(U, V) + patch.k2(U, V)))),
    }
