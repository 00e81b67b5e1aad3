"""Command-line tools: build and verify surfaces, duals, and congruences.

Subcommands
-----------
``build``       sample the surface of a holomorphic pair (f1, f2), verify
                its defining identities, optionally write OBJ + JSON.
``dual``        build the pair and its dual, verify curvature switching,
                mean-to-Gauss equality and the fundamental-form relations.
``congruence``  run a built-in minimal-surface congruence (closed form or
                grid-integrated), verify the system and its envelope.
``export``      sample and write the OBJ mesh without running checks.

Exit codes: 0 all checks pass, 1 a residual check failed, 2 parse error
in an expression/domain, 3 nothing to check (all samples degenerate, or
the patch coincides with the fixed unit sphere), 4 I/O failure.
"""
from __future__ import annotations

import argparse
import sys

import numpy as np

from . import __version__
from .congruence import (CongruenceState, analytic_example,
                         check_hessian_identities, envelope, first_integral,
                         generated_forms_check, integrate_system,
                         system_residuals)
from .duality import (evaluate_pair, make_dual, verify_c2,
                      verify_form_relations, verify_hk_equality)
from .grids import Domain
from .holoexpr import ParseError
from .mesh import export_obj, mesh_from_fields
from .report import (identity_entry, make_report, report_exit_code,
                     write_report)
from .ribaucour_core import (check_laguerre_holomorphy, check_middle_sphere,
                             evaluate_patch, make_patch, support_pde_residual,
                             unit_sphere_gap)

EXIT_PASS = 0
EXIT_RESIDUAL = 1
EXIT_PARSE = 2
EXIT_DEGENERATE = 3
EXIT_IO = 4

UNIT_SPHERE_TOL = 1e-8
TOL_CR = 1e-5            # discrete holomorphy of the Hopf coefficient
TOL_DIRECTION = 1e-6     # principal-direction switching, radians
TOL_MU = 1e-6            # Hopf-coefficient antisymmetry under duality
TOL_PROP = 1e-5          # second-order congruence identities
TOL_ENVELOPE = 1e-6      # envelope residuals, closed-form route
TOL_ENVELOPE_FD = 1e-4   # envelope residuals, finite-difference route

__all__ = ["main"]


def _print_entries(entries):
    for e in entries:
        if e["vacuous"]:
            print("  %-28s vacuous (%s) -> pass"
                  % (e["name"], e.get("note", "nothing to compare")))
        else:
            mr = e["max_residual"]
            shown = "none" if mr is None else "%.3e" % mr
            print("  %-28s max=%s tol=%.1e samples=%d -> %s"
                  % (e["name"], shown, e["tolerance"], e["samples"],
                     "pass" if e["pass"] else "FAIL"))


def _finish(args, command, inputs, entries, meshes, *,
            all_degenerate=False, unit_sphere=False, notes=(), extra=None):
    report = make_report(command, inputs, entries,
                         all_degenerate=all_degenerate,
                         unit_sphere=unit_sphere, extra=extra, notes=notes)
    code = report_exit_code(report)
    try:
        for mesh, path in meshes:
            export_obj(mesh, path)
        if getattr(args, "report", None):
            write_report(report, args.report)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    _print_entries(entries)
    for note in notes:
        print(f"  note: {note}")
    status = {EXIT_PASS: "PASS", EXIT_RESIDUAL: "FAIL",
              EXIT_DEGENERATE: "DEGENERATE"}[code]
    print(f"{command}: {status} (exit {code})")
    return code


def _residual_entry(res, tolerance, name=None):
    return identity_entry(name or res.name, res.max_abs, tolerance,
                          res.n_valid, res.n_excluded)


def _pair_inputs(args, domain, tolerances):
    return {
        "f1": args.f1,
        "f2": args.f2,
        "domain": [domain.u0, domain.u1, domain.v0, domain.v1],
        "grid": [args.nu, args.nv],
        "tolerances": tolerances,
    }


# ---------------------------------------------------------------------------
# build
# ---------------------------------------------------------------------------

def cmd_build(args) -> int:
    try:
        domain = Domain.parse(args.domain)
        patch = make_patch(args.f1, args.f2, domain)
    except (ParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    fields = evaluate_patch(patch, args.nu, args.nv)
    inputs = _pair_inputs(args, domain, {"pde": args.tol_pde,
                                         "cauchy_riemann": TOL_CR})
    meshes = [(mesh_from_fields(fields), args.out)] if args.out else []
    if not np.any(fields.valid):
        return _finish(args, "build", inputs, [], meshes, all_degenerate=True,
                       notes=("every sample is degenerate "
                              "(branch point or singular shape operator)",))
    pde = support_pde_residual(fields)
    sph = check_middle_sphere(fields)
    cr = check_laguerre_holomorphy(patch, max(args.nu, 161),
                                   max(args.nv, 161))
    entries = [
        _residual_entry(pde, args.tol_pde, "support_pde"),
        _residual_entry(sph, args.tol_pde, "middle_sphere"),
        _residual_entry(cr, TOL_CR, "hopf_holomorphy"),
    ]
    gap = unit_sphere_gap(fields)
    sphere = gap <= UNIT_SPHERE_TOL
    notes = ()
    if sphere:
        notes = ("patch coincides with the fixed unit sphere "
                 "(rho = 1, X = N): nothing nontrivial to build",)
    return _finish(args, "build", inputs, entries, meshes,
                   unit_sphere=sphere, notes=notes,
                   extra={"unit_sphere_gap": gap})


# ---------------------------------------------------------------------------
# dual
# ---------------------------------------------------------------------------

def cmd_dual(args) -> int:
    try:
        domain = Domain.parse(args.domain)
        patch = make_patch(args.f1, args.f2, domain)
    except (ParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    pair = make_dual(patch)
    fa, fb = evaluate_pair(pair, args.nu, args.nv)
    inputs = _pair_inputs(args, domain, {
        "curvature": args.tol_c2, "direction_rad": TOL_DIRECTION,
        "hopf_sum": TOL_MU,
    })
    meshes = []
    if args.out:
        meshes.append((mesh_from_fields(fa), args.out))
        dual_out = args.out_dual
        if dual_out is None:
            from pathlib import Path
            p = Path(args.out)
            dual_out = str(p.with_name(p.stem + "_dual" + p.suffix))
        meshes.append((mesh_from_fields(fb), dual_out))
    if not np.any(fa.valid & fb.valid):
        return _finish(args, "dual", inputs, [], meshes, all_degenerate=True,
                       notes=("no sample is usable on both the patch "
                              "and its dual",))
    gap = unit_sphere_gap(fa)
    if gap <= UNIT_SPHERE_TOL:
        return _finish(args, "dual", inputs, [], meshes, unit_sphere=True,
                       notes=("patch coincides with the fixed unit sphere; "
                              "the dual is the same sphere",),
                       extra={"unit_sphere_gap": gap})
    c2 = verify_c2(pair, args.nu, args.nv, tol_curvature=args.tol_c2,
                   tol_direction=TOL_DIRECTION, fields=(fa, fb))
    hk = verify_hk_equality(pair, args.nu, args.nv, tol_hk=args.tol_c2,
                            tol_mu=TOL_MU, fields=(fa, fb))
    fr = verify_form_relations(pair, args.nu, args.nv, fields=(fa, fb))
    vac = c2.totally_umbilic
    vac_note = ("totally umbilic patch: no principal data to switch"
                if vac else "")
    entries = [
        identity_entry("curvature_switch", c2.max_curvature_switch,
                       c2.tol_curvature, c2.n_comparable, c2.n_excluded,
                       vacuous=vac, note=vac_note),
        identity_entry("direction_switch", c2.max_direction_dev,
                       c2.tol_direction, c2.n_comparable, c2.n_excluded,
                       vacuous=vac, note=vac_note),
        identity_entry("hover_k_equality", hk.max_hk_rel, hk.tol_hk,
                       hk.n_compared, hk.n_excluded),
        identity_entry("hopf_antisymmetry", hk.max_mu_sum, hk.tol_mu,
                       hk.n_compared, hk.n_excluded),
        identity_entry("first_form_relation", fr.max_rel_first, fr.tol_first,
                       fr.n_compared, fr.n_excluded),
        identity_entry("second_form_relation", fr.max_rel_second,
                       fr.tol_second, fr.n_compared, fr.n_excluded),
        identity_entry("third_form_relation", fr.max_rel_third, fr.tol_third,
                       fr.n_compared, fr.n_excluded),
        identity_entry("support_reciprocal_metric", fr.max_tau_shift,
                       fr.tol_tau, fr.n_compared, fr.n_excluded),
    ]
    notes = (vac_note,) if vac else ()
    return _finish(args, "dual", inputs, entries, meshes, notes=notes,
                   extra={"unit_sphere_gap": gap,
                          "curvature_lines": c2.to_dict(),
                          "forms": fr.to_dict(), "hover_k": hk.to_dict()})


# ---------------------------------------------------------------------------
# congruence
# ---------------------------------------------------------------------------

def cmd_congruence(args) -> int:
    try:
        domain = Domain.parse(args.domain)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    ac = analytic_example(args.minimal)
    consts = ac.constants
    inputs = {
        "minimal": args.minimal, "mode": args.mode,
        "domain": [domain.u0, domain.u1, domain.v0, domain.v1],
        "grid": [args.nu, args.nv], "step": args.step,
        "tolerances": {"first_integral": args.tol_fi,
                       "second_order": TOL_PROP},
    }
    details = {
        "constants": {"c": consts.c, "c1": consts.c1,
                      "c2": consts.c2, "c3": consts.c3},
        "omega_source": "quadrature" if ac.used_fallback else "literal",
        "omega": ac.omega_text,
        "literal_system_residual": max(ac.literal_residuals.values()),
        "literal_first_integral_drift": ac.literal_drift,
    }
    notes = ("closed-form data re-derived by quadrature: the published "
             "candidate fails the first-order system (see report details)",
             ) if ac.used_fallback else ()

    if args.mode == "analytic":
        U, V, _ = domain.mesh(args.nu, args.nv)
        wj, oj = ac.w_jet(U, V), ac.omega_jet(U, V)
        sysres = system_residuals(ac.patch, wj, oj, U, V)
        drift = float(np.max(np.abs(first_integral(ac.state(U, V), consts))))
        env = envelope(ac.patch, wj, U, V)
        ms = check_middle_sphere(env)
        hid = check_hessian_identities(ac.patch, wj, oj, consts, U, V,
                                       tol=TOL_PROP)
        gf = generated_forms_check(ac.patch, wj, oj, consts, U, V, env=env,
                                   tol=TOL_PROP)
        n = int(np.asarray(U).size)
        entries = [
            identity_entry("congruence_system", max(sysres.values()),
                           args.tol_fi, n, 0),
            identity_entry("first_integral_drift", drift, args.tol_fi, n, 0),
            _residual_entry(ms, TOL_ENVELOPE, "envelope_middle_sphere"),
            identity_entry("hessian_identity_omega", hid.max_hessian_omega,
                           hid.tol, hid.n_compared, hid.n_excluded),
            identity_entry("hessian_identity_w", hid.max_hessian_w, hid.tol,
                           hid.n_compared, hid.n_excluded),
            identity_entry("gradient_link", hid.max_gradient_link, hid.tol,
                           hid.n_compared, hid.n_excluded),
            identity_entry("generated_forms",
                           max(gf.max_rel_first, gf.max_rel_second,
                               gf.max_rel_third),
                           gf.tol, gf.n_compared, gf.n_excluded),
            identity_entry("envelope_hover_ratio", gf.max_hover_k_rel,
                           TOL_ENVELOPE, gf.n_compared, gf.n_excluded),
        ]
    else:
        st0 = ac.state(0.0, 0.0)
        init = CongruenceState(*(float(np.asarray(x))
                                 for x in st0.as_tuple()))
        integ = integrate_system(ac.patch, init, consts, domain=domain,
                                 step=args.step)
        U, V = integ.U, integ.V
        ref = ac.state(U, V)
        agree = max(float(np.max(np.abs(np.asarray(a) - np.asarray(b))))
                    for a, b in zip(integ.state().as_tuple(), ref.as_tuple()))
        env = envelope(ac.patch, integ.w, U, V)
        ms = check_middle_sphere(env)
        with np.errstate(all="ignore"):
            target = 0.5 * consts.c2 - consts.c * integ.omega
            scale = np.maximum(np.abs(env.hover_k), np.abs(target))
            hov = np.where(scale > 0,
                           np.abs(env.hover_k - target) / scale, 0.0)
        hov_ok = env.valid & np.isfinite(hov)
        hov_max = (float(np.max(hov[hov_ok]))
                   if np.any(hov_ok) else float("nan"))
        n = int(np.asarray(U).size)
        entries = [
            identity_entry("path_independence", integ.path_gap, args.tol_fi,
                           n, 0),
            identity_entry("first_integral_drift", integ.drift, args.tol_fi,
                           n, 0),
            identity_entry("analytic_agreement", agree, args.tol_fi, n, 0),
            _residual_entry(ms, TOL_ENVELOPE_FD, "envelope_middle_sphere"),
            identity_entry("envelope_hover_ratio", hov_max, TOL_ENVELOPE_FD,
                           int(np.count_nonzero(hov_ok)),
                           n - int(np.count_nonzero(hov_ok))),
        ]
        details["integration"] = {"grid": list(np.asarray(U).shape),
                                  "init_node": list(integ.init_node)}
    meshes = [(mesh_from_fields(env), args.out)] if args.out else []
    return _finish(args, "congruence", inputs, entries, meshes,
                   notes=notes, extra=details)


# ---------------------------------------------------------------------------
# export
# ---------------------------------------------------------------------------

def cmd_export(args) -> int:
    try:
        domain = Domain.parse(args.domain)
        patch = make_patch(args.f1, args.f2, domain)
    except (ParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    fields = evaluate_patch(patch, args.nu, args.nv)
    mesh = mesh_from_fields(fields)
    try:
        export_obj(mesh, args.out)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    print("export: wrote %s (%d vertices, %d faces)"
          % (args.out, mesh.n_vertices, 2 * mesh.n_quads))
    return EXIT_PASS


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _add_pair_arguments(sp, out_help, out_required=False):
    sp.add_argument("--f1", required=True,
                    help="holomorphic expression in z for the Gauss map")
    sp.add_argument("--f2", required=True,
                    help="holomorphic expression in z for the companion map")
    sp.add_argument("--domain", default="-1:1:-1:1",
                    help="chart rectangle u0:u1:v0:v1 (default %(default)s)")
    sp.add_argument("--nu", type=int, default=81,
                    help="grid samples along u (default %(default)s)")
    sp.add_argument("--nv", type=int, default=81,
                    help="grid samples along v (default %(default)s)")
    sp.add_argument("--out", required=out_required, help=out_help)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="ribaucour",
        description="Surfaces whose middle spheres cut the unit sphere "
                    "along great circles: build, dualise, and generate "
                    "them from minimal-surface sphere congruences.")
    p.add_argument("--version", action="version",
                   version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="sample a surface from a holomorphic "
                                     "pair and verify its identities")
    _add_pair_arguments(b, "write the sampled mesh to this OBJ path")
    b.add_argument("--report", help="write the JSON verification report here")
    b.add_argument("--tol-pde", type=float, default=1e-8,
                   help="tolerance for the support and middle-sphere "
                        "identities (default %(default)s)")
    b.set_defaults(func=cmd_build)

    d = sub.add_parser("dual", help="build a pair and its dual and verify "
                                    "the curvature-switching laws")
    _add_pair_arguments(d, "write the primary mesh to this OBJ path "
                           "(dual goes to *_dual.obj)")
    d.add_argument("--out-dual", help="explicit path for the dual mesh")
    d.add_argument("--report", help="write the JSON verification report here")
    d.add_argument("--tol-c2", type=float, default=1e-8,
                   help="tolerance for curvature switching and mean-to-Gauss "
                        "equality (default %(default)s)")
    d.set_defaults(func=cmd_dual)

    c = sub.add_parser("congruence",
                       help="run a built-in minimal-surface congruence and "
                            "verify its envelope")
    c.add_argument("--minimal", choices=("enneper", "catenoid"),
                   required=True, help="which built-in minimal patch")
    c.add_argument("--mode", choices=("analytic", "integrate"),
                   default="analytic",
                   help="closed-form fields or grid integration "
                        "(default %(default)s)")
    c.add_argument("--step", type=float, default=0.01,
                   help="integration step (default %(default)s)")
    c.add_argument("--domain", default="-1:1:-1:1",
                   help="chart rectangle u0:u1:v0:v1 (default %(default)s)")
    c.add_argument("--nu", type=int, default=41,
                   help="grid samples along u, analytic mode "
                        "(default %(default)s)")
    c.add_argument("--nv", type=int, default=41,
                   help="grid samples along v, analytic mode "
                        "(default %(default)s)")
    c.add_argument("--out", help="write the envelope mesh to this OBJ path")
    c.add_argument("--report", help="write the JSON verification report here")
    c.add_argument("--tol-fi", type=float, default=1e-6,
                   help="tolerance for the system residuals, first-integral "
                        "drift and integration agreement "
                        "(default %(default)s)")
    c.set_defaults(func=cmd_congruence)

    e = sub.add_parser("export", help="sample a pair and write the OBJ mesh "
                                      "without running checks")
    _add_pair_arguments(e, "OBJ output path", out_required=True)
    e.set_defaults(func=cmd_export)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
