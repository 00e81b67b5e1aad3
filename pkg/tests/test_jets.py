"""Real second-order jets: chain-rule arithmetic and holomorphic bridges."""

import numpy as np
import pytest

from _oracles import fd_partials_scalar
from ribaucour.holoexpr import eval_jet, parse
from ribaucour.jets import RJet2, abs2_jet, im_jet, jet_finite, re_jet

# composite scalar functions assembled from coordinate jets; each is
# smooth on the sample box [0.2, 1.0]^2
COMPOSITES = [
    lambda u, v: u * u + 3.0 * u * v - v * v * v,
    lambda u, v: (u * u + 1.0) / (v * v + 2.0),
    lambda u, v: (u * u + v * v + 0.5).sqrt(),
    lambda u, v: (u * v + 3.0).log(),
    lambda u, v: (0.3 * u - 0.2 * v).exp(),
    lambda u, v: (u * u + 1.0).sqrt() * (0.1 * v).exp() + 2.0 / (u + v + 4.0),
    lambda u, v: ((u + 2.0 * v) ** 3 - u / (v + 2.0)),
]

SAMPLE_POINTS = [(0.3, 0.4), (0.8, 0.25), (0.55, 0.9), (0.2, 0.7)]


def _jet_at(fn, u0, v0) -> RJet2:
    return fn(RJet2.coord_u(u0), RJet2.coord_v(v0))


def test_coordinate_jets():
    ju = RJet2.coord_u(2.0)
    assert (ju.val, ju.du, ju.dv) == (2.0, 1.0, 0.0)
    jv = RJet2.coord_v(-1.5)
    assert (jv.val, jv.du, jv.dv) == (-1.5, 0.0, 1.0)
    jc = RJet2.constant(4.0)
    assert (jc.val, jc.du, jc.dv, jc.duu, jc.duv, jc.dvv) == (4.0,) + (0.0,) * 5


def test_composite_partials_match_finite_differences():
    for fn in COMPOSITES:
        for u0, v0 in SAMPLE_POINTS:
            j = _jet_at(fn, u0, v0)
            value = lambda u, v: _jet_at(fn, u, v).val
            du, dv, duu, duv, dvv = fd_partials_scalar(value, u0, v0)
            scale = max(1.0, abs(j.val), abs(j.du), abs(j.dv),
                        abs(j.duu), abs(j.duv), abs(j.dvv))
            assert abs(j.du - du) <= 1e-8 * scale
            assert abs(j.dv - dv) <= 1e-8 * scale
            assert abs(j.duu - duu) <= 1e-6 * scale
            assert abs(j.duv - duv) <= 1e-6 * scale
            assert abs(j.dvv - dvv) <= 1e-6 * scale


def test_ring_identities():
    a = _jet_at(COMPOSITES[0], 0.7, 0.3)
    b = _jet_at(COMPOSITES[1], 0.7, 0.3)
    c = _jet_at(COMPOSITES[4], 0.7, 0.3)

    def entries(j):
        return np.array([j.val, j.du, j.dv, j.duu, j.duv, j.dvv])

    lhs = entries((a + b) * c)
    rhs = entries(a * c + b * c)
    assert np.max(np.abs(lhs - rhs)) <= 1e-12 * np.max(np.abs(rhs))

    quot = entries(a / a)
    assert abs(quot[0] - 1.0) <= 1e-14
    assert np.max(np.abs(quot[1:])) <= 1e-13

    cube = entries(a ** 3)
    ref = entries(a * a * a)
    assert np.max(np.abs(cube - ref)) <= 1e-12 * np.max(np.abs(ref))


def test_scalar_mixed_arithmetic():
    j = _jet_at(COMPOSITES[3], 0.5, 0.5)
    assert (2.0 + j).val == 2.0 + j.val
    assert (2.0 - j).val == 2.0 - j.val
    assert (2.0 - j).du == -j.du
    assert (3.0 * j).duv == 3.0 * j.duv
    recip = 1.0 / j
    prod = recip * j
    assert abs(prod.val - 1.0) <= 1e-14
    assert abs(prod.du) <= 1e-14
    with pytest.raises(TypeError):
        j ** 1.5


def test_analytic_inverses():
    j = _jet_at(COMPOSITES[1], 0.6, 0.8)

    def entries(x):
        return np.array([x.val, x.du, x.dv, x.duu, x.duv, x.dvv])

    back = entries(j.exp().log())
    ref = entries(j)
    assert np.max(np.abs(back - ref)) <= 1e-12 * max(1.0, np.max(np.abs(ref)))
    sq = entries(j.sqrt() * j.sqrt())
    assert np.max(np.abs(sq - ref)) <= 1e-12 * max(1.0, np.max(np.abs(ref)))


def test_array_valued_jets_broadcast():
    U, V = np.meshgrid(np.linspace(0.2, 1.0, 7), np.linspace(0.2, 1.0, 5),
                       indexing="ij")
    j = COMPOSITES[5](RJet2.coord_u(U), RJet2.coord_v(V))
    assert j.val.shape == (7, 5)
    single = COMPOSITES[5](RJet2.coord_u(U[3, 2]), RJet2.coord_v(V[3, 2]))
    assert np.isclose(j.val[3, 2], single.val, rtol=0, atol=1e-15)
    assert np.isclose(j.duv[3, 2], single.duv, rtol=0, atol=1e-13)


# ---------------------------------------------------------------------------
# bridges from complex jets
# ---------------------------------------------------------------------------

BRIDGE_EXPRS = ["z^3 - z", "exp(z)", "sin(z)", "exp(z)/(1 + exp(z))",
                "cosh(z - i)"]
BRIDGE_POINTS = [0.4 + 0.3j, -0.6 + 0.7j, 0.9 - 0.5j]


def test_re_im_jets_match_cauchy_riemann_structure():
    for text in BRIDGE_EXPRS:
        e = parse(text)
        for z0 in BRIDGE_POINTS:
            j = eval_jet(e, z0, 3)
            p, q = re_jet(j), im_jet(j)
            f1, f2 = j.values[1], j.values[2]
            assert p.du == f1.real and p.dv == -f1.imag
            assert q.du == f1.imag and q.dv == f1.real
            assert p.duu == f2.real and p.dvv == -f2.real
            assert q.duv == f2.real and p.duv == -f2.imag


def test_bridge_partials_match_finite_differences():
    for text in BRIDGE_EXPRS:
        e = parse(text)
        for z0 in BRIDGE_POINTS:
            for part, pick in ((re_jet, np.real), (im_jet, np.imag)):
                j = part(eval_jet(e, z0, 3))
                value = lambda u, v: float(
                    pick(eval_jet(e, complex(u, v), 0).values[0]))
                du, dv, duu, duv, dvv = fd_partials_scalar(
                    value, z0.real, z0.imag)
                scale = max(1.0, abs(j.val), abs(j.du), abs(j.dv),
                            abs(j.duu), abs(j.duv), abs(j.dvv))
                for got, want in ((j.du, du), (j.dv, dv), (j.duu, duu),
                                  (j.duv, duv), (j.dvv, dvv)):
                    assert abs(got - want) <= 1e-6 * scale, text


def test_abs2_jet_value_and_partials():
    e = parse("z^2*sin(z)")
    z0 = 0.7 + 0.4j
    j = abs2_jet(eval_jet(e, z0, 3))
    f0 = eval_jet(e, z0, 0).values[0]
    assert abs(j.val - abs(f0) ** 2) <= 1e-14 * abs(f0) ** 2
    value = lambda u, v: abs(eval_jet(e, complex(u, v), 0).values[0]) ** 2
    du, dv, duu, duv, dvv = fd_partials_scalar(value, z0.real, z0.imag)
    scale = max(1.0, abs(j.val))
    for got, want in ((j.du, du), (j.dv, dv), (j.duu, duu),
                      (j.duv, duv), (j.dvv, dvv)):
        assert abs(got - want) <= 1e-6 * scale


def test_bridges_require_order_two():
    j = eval_jet(parse("z"), 0.5, 1)
    for bridge in (re_jet, im_jet):
        with pytest.raises(ValueError):
            bridge(j)


def test_jet_finite_masks_bad_entries():
    vals = np.ones(4)
    bad = np.ones(4)
    bad[2] = np.nan
    j = RJet2(vals, bad, vals, vals, vals, vals)
    assert list(jet_finite(j)) == [True, True, False, True]
