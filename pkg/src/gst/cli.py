"""Command-line front end: fixtures, decompositions, checks, JSON reports.

Exit codes: 0 success, 1 validation error, 2 uncertified result.
Inputs are JSON files, inline JSON, or fixture:NAME references; all
reports carry the schema tag and a deterministic results block.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from . import circle, duality, entropy, fixtures, grids, inner_outer, \
    privalov, roberts, util, weights


class CliError(Exception):
    exit_code = 1


class UncertifiedResult(Exception):
    exit_code = 2


def _resolve_weight(spec: str) -> weights.Weight:
    if spec.startswith("{"):
        return weights.from_spec(json.loads(spec))
    if spec.endswith(".json"):
        return weights.from_spec(util.load_json(spec))
    return weights.from_spec(spec)


def _resolve_measure(spec: str) -> circle.CircleMeasure:
    if spec.startswith("fixture:"):
        obj = fixtures.named_fixture(spec.split(":", 1)[1])
        if not isinstance(obj, circle.CircleMeasure):
            raise CliError(f"{spec} is not a measure fixture")
        return obj
    if spec.startswith("{"):
        return circle.measure_from_json(json.loads(spec))
    return circle.measure_from_json(util.load_json(spec))


def _resolve_set(spec: str) -> circle.ClosedCircleSet:
    if spec.startswith("fixture:"):
        obj = fixtures.named_fixture(spec.split(":", 1)[1])
        if not isinstance(obj, circle.ClosedCircleSet):
            raise CliError(f"{spec} is not a set fixture")
        return obj
    if spec.startswith("{"):
        return circle.set_from_json(json.loads(spec))
    return circle.set_from_json(util.load_json(spec))


def _resolve_grid(spec: str, w: weights.Weight) -> grids.DyadicGrid:
    if spec == "auto":
        return grids.feasible_grid(w, 4, 3.0, 5)
    if spec.startswith("{"):
        return grids.grid_from_json(json.loads(spec))
    if spec.startswith("["):
        return grids.DyadicGrid(tuple(json.loads(spec)))
    return grids.grid_from_json(util.load_json(spec))


def _parse_complex(text: str) -> complex:
    return complex(text.replace("i", "j"))


# -- subcommand handlers -----------------------------------------------------

def cmd_weight(args) -> dict:
    w = _resolve_weight(args.weight)
    moc = weights.check_modulus_of_continuity(w, args.depth)
    maj = weights.check_majorant(w)
    out = {
        "label": w.label(),
        "modulus_of_continuity": {"ok": moc.ok, "witness": moc.witness,
                                  "reason": moc.reason},
        "majorant": {"ok": maj.ok, "lambda": maj.lam},
    }
    try:
        a1 = weights.check_A1(w, args.depth)
        out["A1"] = {"ratio_low": a1.ratio_low, "ratio_high": a1.ratio_high,
                     "ok": a1.ok}
    except weights.InvalidWeightError as exc:
        out["A1"] = {"error": str(exc)}
    if args.alpha is not None:
        a2 = weights.check_A2(w, args.alpha, args.quad_depth)
        out["A2"] = {"dini_integral": a2.dini_integral, "ok": a2.ok}
    return out


def cmd_set_entropy(args) -> dict:
    E = _resolve_set(args.set)
    w = _resolve_weight(args.weight)
    res = entropy.entropy_sum(E, w).result
    out = {"form": "sum", "tag": res.tag, "value": res.value,
           "low": res.low, "high": res.high, "evidence": res.evidence}
    if args.form in ("integral", "both"):
        ri = entropy.entropy_integral(E, w)
        out_i = {"form": "integral", "tag": ri.tag, "value": ri.value,
                 "low": ri.low, "high": ri.high, "evidence": ri.evidence}
        out = {"sum": out, "integral": out_i} if args.form == "both" else out_i
    if (res.tag if args.form == "sum" else out.get("tag", res.tag)) \
            == entropy.UNDECIDED:
        raise UncertifiedResult(json.dumps(out))
    return out


def cmd_grid(args) -> dict:
    w = _resolve_weight(args.weight)
    if args.grid_cmd == "build":
        g = grids.build_grid(w, args.n0, args.C, args.k)
    else:
        g = _resolve_grid(args.grid, w)
    v = grids.verify_grid(g, w)
    return {"depths": list(g.depths), "beta": v.beta,
            "is_w_grid": v.is_w_grid, "superlacunary": v.superlacunary,
            "lambda": g.lam, "C": g.C_param}


def cmd_measure(args) -> dict:
    w = _resolve_weight(args.weight)
    mu = _resolve_measure(args.measure)
    if args.measure_cmd == "classify":
        cls = entropy.classify_measure(mu, w)
        out = {
            "total_mass": mu.total_mass(),
            "mu_P_mass": cls.mu_P.total_mass(),
            "mu_C_mass": cls.mu_C.total_mass(),
            "certificates": list(cls.certificates),
            "undecided_components": len(cls.undecided),
        }
        if cls.undecided:
            raise UncertifiedResult(json.dumps(out))
        return out
    grid = _resolve_grid(args.grid, w)
    dec = roberts.decompose(mu, grid, args.c, w, args.kmax, args.eps)
    levels = []
    for rep in dec.reports:
        levels.append({
            "depth": rep.depth, "threshold": rep.threshold,
            "heavy_count": rep.heavy_count,
            "light_mass_count": len(rep.light_arcs),
            "mass_before": rep.total_mass_before,
        })
    return {
        "levels": levels,
        "piece_masses": [p.total_mass() for p in dec.pieces],
        "residual_mass": dec.residual.total_mass(),
        "mass_balance_error": dec.mass_balance_error(),
        "heavy_nesting": dec.heavy_nesting_ok(),
        "beta": dec.beta,
        "light_entropy_ledger": dec.light_entropy_ledger,
        "carrier_entropy_bound": dec.carrier_entropy_bound,
    }


def cmd_inner(args) -> dict:
    mu = _resolve_measure(args.measure)
    z = _parse_complex(args.z)
    val = inner_outer.eval_singular_inner(mu, z, args.eps)
    out = {"z": {"re": z.real, "im": z.imag},
           "value": {"re": val.value.real, "im": val.value.imag},
           "abs": abs(val.value), "err": val.err}
    if val.err > args.eps:
        raise UncertifiedResult(json.dumps(out))
    return out


def _auto_carleson(E, w, samples):
    D = privalov.PrivalovDomain(E)

    def passes(G):
        return privalov.privalov_boundary_estimate(D, G, max(256,
                                                             samples // 8)).ok
    return inner_outer.auto_carleson_N(E, w, passes)


def cmd_carleson(args) -> dict:
    E = _resolve_set(args.set)
    w = _resolve_weight(args.weight)
    if args.N == "auto":
        G = _auto_carleson(E, w, args.samples)
    else:
        G = inner_outer.carleson_outer(E, w, float(args.N))
    D = privalov.PrivalovDomain(E)
    est = privalov.privalov_boundary_estimate(D, G, args.samples)
    return {"N": G.N, "whitney_arcs": len(G.whitney.arcs),
            "boundary_max_ratio": est.max_ratio, "boundary_ok": est.ok,
            "samples": est.n_samples}


def cmd_privalov(args) -> dict:
    E = _resolve_set(args.set)
    w = _resolve_weight(args.weight)
    G = _auto_carleson(E, w, args.samples) if args.carleson == "auto" \
        else inner_outer.carleson_outer(E, w, float(args.carleson))
    D = privalov.PrivalovDomain(E)
    est = privalov.privalov_boundary_estimate(D, G, args.samples)
    return {"N_used": G.N, "max_ratio": est.max_ratio, "ok": est.ok,
            "samples": est.n_samples}


def cmd_dual(args) -> dict:
    if args.dual_cmd == "pair":
        g = util.load_json(args.g) if args.g.endswith(".json") \
            else json.loads(args.g)
        f = util.load_json(args.f) if args.f.endswith(".json") \
            else json.loads(args.f)
        val = duality.cauchy_pairing_poly(g, f)
        return {"pairing": {"re": val.real, "im": val.imag}}
    w = _resolve_weight(args.weight)
    coeffs = util.load_json(args.f) if args.f.endswith(".json") \
        else json.loads(args.f)
    res = duality.fw_norm(duality.poly_function(coeffs), w, args.quad_depth)
    return {"tag": res.tag, "value": res.value,
            "tail_estimate": res.tail_estimate}


def cmd_report_cyclicity(args) -> dict:
    w = _resolve_weight(args.weight)
    mu = _resolve_measure(args.measure)
    cls = entropy.classify_measure(mu, w)
    out = {
        "measure": mu.name,
        "weight": w.label(),
        "total_mass": mu.total_mass(),
        "mu_P_mass": cls.mu_P.total_mass(),
        "mu_C_mass": cls.mu_C.total_mass(),
        "certificates": list(cls.certificates),
    }
    if cls.undecided:
        out["verdict"] = "undecided"
        raise UncertifiedResult(json.dumps(out, default=util._default))
    total = mu.total_mass()
    if cls.mu_P.total_mass() > 1e-12 * (1.0 + total):
        out["verdict"] = ("not cyclic: mu_P = mu" if
                          cls.mu_C.total_mass() <= 1e-12 * (1.0 + total)
                          else "not cyclic: mu_P nonzero")
        return out
    out["verdict"] = "cyclic evidence: mu_C = mu"
    grid = _resolve_grid(args.grid, w)
    decay_rows = []
    for kmax in (2, 4, 6):
        dec = roberts.decompose(mu, grid, args.c, w, kmax)
        decay_rows.append({"k_max": kmax,
                           "residual_mass": dec.residual.total_mass()})
    out["residual_decay"] = decay_rows
    dec = roberts.decompose(mu, grid, args.c, w,
                            min(args.kmax, len(grid.depths)))
    margins = []
    for piece, rep in zip(dec.pieces, dec.reports):
        if rep.depth > 50:
            continue
        cc = inner_outer.corona_datum_check(piece, rep.depth, args.c, w,
                                            grid_density=32)
        margins.append({"depth": rep.depth, "min_combined": cc.min_combined,
                        "bound": cc.bound, "ok": cc.ok})
    out["corona_margins"] = margins
    out["corona_parameters"] = inner_outer.corona_parameter_report(
        w, args.c, grid.depths[0], K=args.K)
    out["mass_balance_error"] = dec.mass_balance_error()
    out["light_entropy_ledger"] = dec.light_entropy_ledger
    out["carrier_entropy_bound"] = dec.carrier_entropy_bound
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gst",
                                description=__doc__.splitlines()[0])
    p.add_argument("--out", help="write the JSON report to this path")
    p.add_argument("--csv", help="mirror the first results table as CSV")
    sub = p.add_subparsers(dest="command", required=True)

    w = sub.add_parser("weight", help="regularity checks for a weight")
    w.add_argument("weight_cmd", choices=["check"])
    w.add_argument("--weight", required=True)
    w.add_argument("--depth", type=int, default=12)
    w.add_argument("--alpha", type=float)
    w.add_argument("--quad-depth", type=int, default=40)

    s = sub.add_parser("set", help="entropy of a closed null set")
    s.add_argument("set_cmd", choices=["entropy"])
    s.add_argument("--set", required=True)
    s.add_argument("--weight", required=True)
    s.add_argument("--form", choices=["sum", "integral", "both"],
                   default="sum")

    g = sub.add_parser("grid", help="build or verify a dyadic grid")
    g.add_argument("grid_cmd", choices=["build", "verify"])
    g.add_argument("--weight", required=True)
    g.add_argument("--n0", type=int, default=4)
    g.add_argument("--C", type=float, default=3.0)
    g.add_argument("--k", type=int, default=5)
    g.add_argument("--grid")

    m = sub.add_parser("measure", help="decompose or classify a measure")
    m.add_argument("measure_cmd", choices=["decompose", "classify"])
    m.add_argument("--measure", required=True)
    m.add_argument("--weight", required=True)
    m.add_argument("--grid", default="auto")
    m.add_argument("--c", type=float, default=0.1)
    m.add_argument("--kmax", type=int, default=3)
    m.add_argument("--eps", type=float, default=1e-12)

    i = sub.add_parser("inner", help="evaluate a singular inner function")
    i.add_argument("inner_cmd", choices=["eval"])
    i.add_argument("--measure", required=True)
    i.add_argument("--z", required=True)
    i.add_argument("--eps", type=float, default=1e-10)

    c = sub.add_parser("carleson", help="build the gap-family outer function")
    c.add_argument("carleson_cmd", choices=["build"])
    c.add_argument("--set", required=True)
    c.add_argument("--weight", required=True)
    c.add_argument("--N", default="auto")
    c.add_argument("--samples", type=int, default=2048)

    pv = sub.add_parser("privalov", help="inner-boundary estimate")
    pv.add_argument("privalov_cmd", choices=["check"])
    pv.add_argument("--set", required=True)
    pv.add_argument("--weight", required=True)
    pv.add_argument("--carleson", default="auto")
    pv.add_argument("--samples", type=int, default=4096)

    d = sub.add_parser("dual", help="pairings and dual norms")
    d.add_argument("dual_cmd", choices=["pair", "fw-norm"])
    d.add_argument("--g")
    d.add_argument("--f")
    d.add_argument("--weight")
    d.add_argument("--quad-depth", type=int, default=40)

    r = sub.add_parser("report", help="composed evidence dossiers")
    r.add_argument("report_cmd", choices=["cyclicity"])
    r.add_argument("--measure", required=True)
    r.add_argument("--weight", required=True)
    r.add_argument("--grid", default="[4,8,12,16,20,24]")
    r.add_argument("--c", type=float, default=0.1)
    r.add_argument("--kmax", type=int, default=6)
    r.add_argument("--K", type=float, default=10.0,
                   help="solvability constant used in parameter reporting")
    return p


def main(argv=None) -> int:
    started = time.time()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    handlers = {
        "weight": cmd_weight,
        "set": cmd_set_entropy,
        "grid": cmd_grid,
        "measure": cmd_measure,
        "inner": cmd_inner,
        "carleson": cmd_carleson,
        "privalov": cmd_privalov,
        "dual": cmd_dual,
        "report": cmd_report_cyclicity,
    }
    try:
        results = handlers[args.command](args)
    except UncertifiedResult as exc:
        rep = util.report(args.command, vars(args),
                          {"uncertified": json.loads(str(exc))}, started)
        util.emit(rep, args.out, args.csv)
        return 2
    except (CliError, ValueError, KeyError, OSError,
            weights.InvalidWeightError, weights.UncertifiedError,
            grids.GridConstructionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    rep = util.report(args.command, {k: v for k, v in vars(args).items()
                                     if k not in ("out", "csv")}, results,
                      started)
    util.emit(rep, args.out, args.csv)
    return 0


if __name__ == "__main__":
    sys.exit(main())
