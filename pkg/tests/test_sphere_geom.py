"""Gauss-sphere frames and conformal differential operators."""

import numpy as np

from _oracles import fd_partials_scalar
from ribaucour.grids import Domain
from ribaucour.holoexpr import eval_jet, parse
from ribaucour.jets import RJet2, re_jet
from ribaucour.ribaucour_core import evaluate_patch, make_patch
from ribaucour.sphere_geom import (conformal_curvature, conformal_hessian,
                                   gauss_map, sphere_gradient,
                                   sphere_hessian, sphere_laplacian)

FRAME_EXPRS = ["z", "exp(z)", "z^2 + 2", "sinh(z)"]

FIELD_EXPRS = ["sin(z)", "exp(z)", "z^3 - z"]


def _grid(n=21, lo=-1.0, hi=1.0):
    u = np.linspace(lo, hi, n)
    U, V = np.meshgrid(u, u, indexing="ij")
    return U + 1j * V


def _tau_value(f1_text):
    e = parse(f1_text)

    def value(u, v):
        f = eval_jet(e, complex(u, v), 1)
        s = abs(f.values[0]) ** 2
        return 0.5 * np.log(4.0 * abs(f.values[1]) ** 2 / (1.0 + s) ** 2)

    return value


# ---------------------------------------------------------------------------
# frame construction
# ---------------------------------------------------------------------------

def test_gauss_map_cardinal_points():
    for z0, expected in ((0.0, (0, 0, -1)), (1.0, (1, 0, 0)),
                         (1j, (0, 1, 0))):
        frame = gauss_map(parse("z"), z0)
        assert np.max(np.abs(frame.normal - np.array(expected))) <= 1e-15
        assert not frame.branch


def test_gauss_map_branch_point_flagged():
    frame = gauss_map(parse("z^2"), 0.0)
    assert bool(frame.branch)
    frame = gauss_map(parse("z^2"), 0.5)
    assert not bool(frame.branch)


def test_frame_invariants():
    Z = _grid(17)
    for text in FRAME_EXPRS:
        frame = gauss_map(parse(text), Z)
        ok = ~np.asarray(frame.branch)
        assert np.count_nonzero(ok) > 0.9 * ok.size
        N = frame.normal
        Nu, Nv = frame.normal_du, frame.normal_dv
        e2t = frame.e2tau
        unit = np.abs(np.sum(N * N, axis=-1) - 1.0)
        assert np.max(unit[ok]) <= 1e-12, text
        tangency = np.maximum(np.abs(np.sum(N * Nu, axis=-1)),
                              np.abs(np.sum(N * Nv, axis=-1)))
        assert np.max(tangency[ok]) <= 1e-10, text
        conf_u = np.abs(np.sum(Nu * Nu, axis=-1) - e2t)[ok]
        conf_v = np.abs(np.sum(Nv * Nv, axis=-1) - e2t)[ok]
        cross = np.abs(np.sum(Nu * Nv, axis=-1))[ok]
        assert np.max(conf_u / e2t[ok]) <= 1e-8, text
        assert np.max(conf_v / e2t[ok]) <= 1e-8, text
        assert np.max(cross / e2t[ok]) <= 1e-8, text


def test_frame_normal_partials_match_finite_differences():
    e = parse("exp(z)")
    for z0 in (0.3 + 0.2j, -0.5 + 0.6j):
        frame = gauss_map(e, z0)
        value = lambda u, v: gauss_map(e, complex(u, v)).normal
        du, dv, duu, duv, dvv = fd_partials_scalar(value, z0.real, z0.imag)
        for got, want in ((frame.normal_du, du), (frame.normal_dv, dv),
                          (frame.normal_duu, duu), (frame.normal_duv, duv),
                          (frame.normal_dvv, dvv)):
            assert np.max(np.abs(got - want)) <= 1e-6


# ---------------------------------------------------------------------------
# gradient
# ---------------------------------------------------------------------------

def test_gradient_of_constant_vanishes():
    frame = gauss_map(parse("exp(z)"), _grid(9))
    grad = sphere_gradient(RJet2.constant(3.0), frame)
    assert np.max(np.abs(grad)) == 0.0


def test_gradient_of_chart_coordinate():
    # field u on the frame of f1 = z at the origin: the gradient is
    # tangent and its squared metric length is e^{-2 tau}
    frame = gauss_map(parse("z"), 0.0)
    grad = sphere_gradient(RJet2.coord_u(0.0), frame)
    assert np.max(np.abs(grad - np.array([0.5, 0.0, 0.0]))) <= 1e-14
    assert abs(float(grad @ frame.normal)) <= 1e-14
    e2t = float(frame.e2tau)
    assert abs(float(grad @ grad) - 1.0 / e2t) <= 1e-14

    # independent route: difference the normal itself for N_u, N_v
    value = lambda u, v: gauss_map(parse("z"), complex(u, v)).normal
    du, dv, *_ = fd_partials_scalar(value, 0.0, 0.0)
    fd_grad = (1.0 * du + 0.0 * dv) / e2t
    assert np.max(np.abs(grad - fd_grad)) <= 1e-6


def test_gradient_matches_finite_differences():
    for f1_text in ("z", "exp(z)"):
        e1 = parse(f1_text)
        for field_text in FIELD_EXPRS:
            ef = parse(field_text)
            for z0 in (0.4 + 0.3j, -0.2 + 0.8j):
                frame = gauss_map(e1, z0)
                field = re_jet(eval_jet(ef, z0, 3))
                grad = sphere_gradient(field, frame)
                nval = lambda u, v: gauss_map(e1, complex(u, v)).normal
                fval = lambda u, v: float(
                    eval_jet(ef, complex(u, v), 0).values[0].real)
                ndu, ndv, *_ = fd_partials_scalar(nval, z0.real, z0.imag)
                fdu, fdv, *_ = fd_partials_scalar(fval, z0.real, z0.imag)
                fd_grad = (fdu * ndu + fdv * ndv) / float(frame.e2tau)
                scale = max(1.0, float(np.max(np.abs(grad))))
                assert np.max(np.abs(grad - fd_grad)) <= 1e-6 * scale


# ---------------------------------------------------------------------------
# Laplacian
# ---------------------------------------------------------------------------

def test_laplacian_of_constant_vanishes():
    frame = gauss_map(parse("z"), _grid(9))
    assert np.max(np.abs(sphere_laplacian(RJet2.constant(2.5), frame))) == 0.0


def test_tau_solves_liouville_equation():
    # the log conformal factor satisfies tau_uu + tau_vv + e^{2 tau} = 0,
    # i.e. the sphere Laplacian of tau is identically -1
    Z = _grid(21)
    for text in ("z", "exp(z)"):
        frame = gauss_map(parse(text), Z)
        ok = ~np.asarray(frame.branch)
        tau = frame.tau
        flat = np.asarray(tau.duu) + np.asarray(tau.dvv) + frame.e2tau
        assert np.max(np.abs(flat[ok])) < 1e-8, text
        lap = sphere_laplacian(tau, frame)
        assert np.max(np.abs(lap[ok] + 1.0)) < 1e-8, text


def test_laplacian_matches_finite_differences():
    e1 = parse("exp(z)")
    for field_text in FIELD_EXPRS:
        ef = parse(field_text)
        for z0 in (0.4 + 0.3j, -0.6 - 0.2j):
            frame = gauss_map(e1, z0)
            field = re_jet(eval_jet(ef, z0, 3))
            lap = sphere_laplacian(field, frame)
            fval = lambda u, v: float(
                eval_jet(ef, complex(u, v), 0).values[0].real)
            _, _, duu, _, dvv = fd_partials_scalar(fval, z0.real, z0.imag)
            fd_lap = (duu + dvv) / float(frame.e2tau)
            assert abs(lap - fd_lap) <= 1e-5 * max(1.0, abs(float(lap)))


# ---------------------------------------------------------------------------
# Hessian
# ---------------------------------------------------------------------------

def test_hessian_of_constant_vanishes():
    frame = gauss_map(parse("exp(z)"), _grid(9))
    huu, huv, hvv = sphere_hessian(RJet2.constant(1.5), frame)
    assert np.max(np.abs(huu)) == 0.0
    assert np.max(np.abs(huv)) == 0.0
    assert np.max(np.abs(hvv)) == 0.0


def test_hessian_trace_recovers_laplacian():
    Z = _grid(15)
    for f1_text, field_text in (("z", "sin(z)"), ("exp(z)", "z^3 - z")):
        frame = gauss_map(parse(f1_text), Z)
        field = re_jet(eval_jet(parse(field_text), Z, 3))
        huu, _, hvv = sphere_hessian(field, frame)
        w = np.exp(-2.0 * np.asarray(frame.tau.val))
        trace = w * (huu + hvv)
        lap = sphere_laplacian(field, frame)
        ok = ~np.asarray(frame.branch)
        scale = np.maximum(1.0, np.abs(lap))
        assert np.max((np.abs(trace - lap) / scale)[ok]) <= 1e-13


def test_hessian_matches_finite_difference_christoffels():
    # oracle: covariant Hessian assembled from finite-differenced field
    # values and finite-differenced Christoffel terms of the conformal
    # metric (Gamma^u_uu = tau_u, Gamma^u_vv = -tau_u, ...)
    e1 = parse("exp(z)")
    tau_val = _tau_value("exp(z)")
    for field_text in FIELD_EXPRS:
        ef = parse(field_text)
        for z0 in (0.5 + 0.4j, -0.3 + 0.7j):
            frame = gauss_map(e1, z0)
            field = re_jet(eval_jet(ef, z0, 3))
            huu, huv, hvv = sphere_hessian(field, frame)
            fval = lambda u, v: float(
                eval_jet(ef, complex(u, v), 0).values[0].real)
            fu, fv, fuu, fuv, fvv = fd_partials_scalar(fval, z0.real, z0.imag)
            tu, tv, *_ = fd_partials_scalar(tau_val, z0.real, z0.imag)
            fd_huu = fuu - tu * fu + tv * fv
            fd_huv = fuv - tv * fu - tu * fv
            fd_hvv = fvv + tu * fu - tv * fv
            scale = max(1.0, abs(float(huu)), abs(float(huv)),
                        abs(float(hvv)))
            assert abs(float(huu) - fd_huu) <= 1e-5 * scale, field_text
            assert abs(float(huv) - fd_huv) <= 1e-5 * scale, field_text
            assert abs(float(hvv) - fd_hvv) <= 1e-5 * scale, field_text


def test_conformal_hessian_works_for_any_log_factor():
    # plain check against directly expanded Christoffel terms
    U, V = np.meshgrid(np.linspace(0.2, 1.0, 5), np.linspace(0.2, 1.0, 5),
                       indexing="ij")
    lam = (RJet2.coord_u(U) * RJet2.coord_v(V) + 2.0).log()
    field = RJet2.coord_u(U) ** 2 * RJet2.coord_v(V)
    huu, huv, hvv = conformal_hessian(field, lam)
    exp_huu = field.duu - lam.du * field.du + lam.dv * field.dv
    exp_huv = field.duv - lam.dv * field.du - lam.du * field.dv
    exp_hvv = field.dvv + lam.du * field.du - lam.dv * field.dv
    assert np.max(np.abs(huu - exp_huu)) == 0.0
    assert np.max(np.abs(huv - exp_huv)) == 0.0
    assert np.max(np.abs(hvv - exp_hvv)) == 0.0


# ---------------------------------------------------------------------------
# conformal curvature
# ---------------------------------------------------------------------------

def test_flat_metric_has_zero_curvature():
    K = conformal_curvature(RJet2.constant(0.7))
    assert K == 0.0


def test_sphere_metric_has_unit_curvature():
    Z = _grid(15)
    for text in FRAME_EXPRS:
        frame = gauss_map(parse(text), Z)
        ok = ~np.asarray(frame.branch)
        K = conformal_curvature(frame.tau)
        assert np.max(np.abs(K[ok] - 1.0)) <= 1e-8, text


def test_support_scaled_metric_has_unit_curvature():
    # the metric (1/rho^2) <dN,dN> has log factor tau - log(rho); its
    # intrinsic curvature is 1 for every surface the library builds
    for f1, f2, dom in (("z", "2*z", Domain(-1, 1, -1, 1)),
                        ("z", "exp(z)", Domain(-1, 1, -1, 1)),
                        ("z^2", "z+2", Domain(0.3, 1.3, 0.2, 1.2))):
        fields = evaluate_patch(make_patch(f1, f2, dom), 21, 21)
        lam = fields.frame.tau - fields.rho.log()
        K = conformal_curvature(lam)
        ok = fields.valid & np.isfinite(K)
        assert np.count_nonzero(ok) > 0.9 * ok.size
        assert np.max(np.abs(K[ok] - 1.0)) <= 1e-6, (f1, f2)
