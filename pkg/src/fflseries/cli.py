"""Command-line front end.

Exit status: 0 success, 1 verification failure, 2 usage error,
3 enumeration cap exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
from dataclasses import replace

from . import carlitz, charsum, lseries, special, vadic
from .cache import PowerSumCache
from .config import FORMATS, load_config
from .errors import CapExceededError, HypothesisError, InconsistencyError, PrecisionError
from .rings import LaurentSeries, prime_enumerate
from .scalars import FieldElem, get_field
from .serialize import dumps, parse_laurent, parse_padic, parse_poly, to_jsonable

log = logging.getLogger("fflseries")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


# -- argument parsing ---------------------------------------------------------------


def _common(p):
    g = p.add_argument_group("configuration")
    g.add_argument("--config", help="key = value config file")
    g.add_argument("--q", type=int, help="size of the constant field F_q")
    g.add_argument("--n", type=int, help="degree of the scalar extension E over F_q")
    g.add_argument("--prec", type=int, help="target precision N (series known mod θ^-N)")
    g.add_argument("--cap", type=int, help="enumeration cap (monics per degree)")
    g.add_argument("--threads", type=int, help="worker threads for power sums")
    g.add_argument("--cache", help="power-sum cache directory")
    g.add_argument("--no-cache", action="store_true", help="disable the cache")
    g.add_argument("--format", choices=FORMATS, help="output format")
    g.add_argument("--seed", type=int, help="seed for randomized suites")
    g.add_argument("--log-level", default="WARNING", help="logging level")


def _lseries_args(p, jmax=False):
    p.add_argument("--beta", type=int, default=1)
    p.add_argument("--t", default="1", help="t as a Laurent polynomial in θ, e.g. 1+θ^-1")
    p.add_argument("--y", default="1", help="integer, or p-adic digits lowest first as [d0,d1,...]")
    p.add_argument("--alpha", help="α-shift (default θ^δ_t)")
    if jmax:
        p.add_argument("--jmax", type=int, default=6)
        p.add_argument(
            "--floor-margin",
            type=int,
            help="compute each c_j to (q-1)j(j+1)/2 + margin instead of one shared --prec",
        )


def build_parser():
    parser = argparse.ArgumentParser(prog="fflseries", description="Pellarin L-series over F_q[θ]")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("special-poly", help="special polynomial z(χ_t^β, x, -j)")
    _common(p)
    p.add_argument("--beta", type=int, required=True)
    p.add_argument("--j", type=int, required=True)

    p = sub.add_parser("trivial-zeros", help="verify trivial zeroes on a grid of λ")
    _common(p)
    p.add_argument("--beta", type=int, required=True)
    p.add_argument("--lambda-max", type=int, required=True)

    p = sub.add_parser("lseries", help="evaluate L(χ_t^β, (x, y))")
    _common(p)
    _lseries_args(p)
    p.add_argument("--x", help="x as a Laurent polynomial in θ (default θ^y)")

    p = sub.add_parser("coeffs", help="α-shifted coefficients c_j")
    _common(p)
    _lseries_args(p, jmax=True)

    p = sub.add_parser("newton", help="Newton polygon of the c_j")
    _common(p)
    _lseries_args(p, jmax=True)

    p = sub.add_parser("omega", help="π̃Ω(t)")
    _common(p)
    p.add_argument("--t", required=True)

    p = sub.add_parser("verify", help="run a verification suite")
    vsub = p.add_subparsers(dest="suite", required=True)
    v = vsub.add_parser("pellarin", help="L(χ_t, 1) = -π̃Ω(t) on a t-grid")
    _common(v)
    v.add_argument("--t", action="append", help="t value (repeatable; default grid)")
    v = vsub.add_parser("carlitz", help="rationality of ζ(j)/π̃^j")
    _common(v)
    v.add_argument("--j", type=int, help="multiple of q-1 (default q-1)")
    v.add_argument("--num-deg", type=int, help="numerator degree bound (default q+1)")
    v.add_argument("--den-deg", type=int, help="denominator degree bound (default q+1)")
    v = vsub.add_parser("charsum", help="randomized character-sum suites")
    _common(v)
    v.add_argument("--qs", default="2,3,4", help="comma-separated field sizes")
    v.add_argument("--vanishing", type=int, default=500)
    v.add_argument("--valued", type=int, default=200)
    v = vsub.add_parser("bridge", help="special polynomial vs L-series at matched points")
    _common(v)
    v = vsub.add_parser("vadic", help="v-adic congruence grid")
    _common(v)
    v.add_argument("--N", type=int, default=8)
    v.add_argument("--emax", type=int, default=4)

    p = sub.add_parser("vadic", help="congruence exponents modulo P^N")
    _common(p)
    p.add_argument("--prime", required=True, help="monic irreducible P in θ")
    p.add_argument("--N", type=int, default=8)
    p.add_argument("--e", type=int, required=True)
    p.add_argument("--beta", type=int, default=0)
    p.add_argument("--j", type=int, default=1)
    p.add_argument("--M-list", default="0,1,2")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--t-rep", help="representative of t in A/P^N (default θ)")
    p.add_argument("--all-monics", action="store_true", help="do not remove multiples of P")

    p = sub.add_parser("charsum-selftest", help="randomized character-sum suites")
    _common(p)
    p.add_argument("--qs", default="2,3,4")
    p.add_argument("--vanishing", type=int, default=500)
    p.add_argument("--valued", type=int, default=200)
    return parser


# -- helpers ------------------------------------------------------------------------


def _config(args):
    flags = {k: getattr(args, k, None) for k in ("q", "n", "prec", "cap", "threads", "cache", "format", "seed")}
    cfg = load_config(args.config, **flags)
    return replace(cfg, cache=None) if args.no_cache else cfg


def _header(cfg, kind):
    return {
        "kind": kind,
        "field": cfg.field.spec.to_dict(),
        "prec": cfg.prec,
        "cap": cfg.cap,
        "seed": cfg.seed,
    }


def _t(field, text):
    try:
        return parse_laurent(field, text)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _csv(rows, fields):
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n", extrasaction="ignore")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def _val(c):
    """(valuation, zero_to_precision) of a coefficient."""
    if c.is_zero():
        return (None if c.exact else c.prec), True
    return c.valuation(), False


# -- commands -----------------------------------------------------------------------


def cmd_special_poly(args, cfg, field, cache):
    zp = special.special_poly(field, args.beta, args.j, cfg.cap, cfg.threads)
    rows = [{"e": e, "coeff": str(c), "table": to_jsonable(c)} for e, c in enumerate(zp.coeffs)]
    res = _header(cfg, "special_poly") | {"beta": args.beta, "j": args.j, "bound": zp.bound, "text": str(zp), "rows": rows}
    text = f"z(chi_t^{args.beta}, x, -{args.j}) = {zp}\n" + "".join(f"  x^{-r['e']}: {r['coeff']}\n" for r in rows)
    return res, text, _csv(rows, ["e", "coeff"]), True


def cmd_trivial_zeros(args, cfg, field, cache):
    q = field.q
    rows = []
    for lam in range(args.lambda_max + 1):
        admissible = lam > args.beta and (lam + args.beta) % (q - 1) == 0
        if admissible:
            special.trivial_zero_check(field, args.beta, lam, cfg.cap, cfg.threads)
            vanishes = True
        else:
            vanishes = special.vanishes_at_one(field, args.beta, lam, cfg.cap)
        rows.append({
            "beta": args.beta,
            "lambda": lam,
            "admissible": admissible,
            "vanishes": vanishes,
            "note": "" if admissible or not vanishes else "extra zero (not covered by the trivial-zero statement)",
        })
    res = _header(cfg, "trivial_zeros") | {"rows": rows}
    text = "".join(
        f"beta={r['beta']} lambda={r['lambda']} admissible={r['admissible']} vanishes={r['vanishes']}"
        + (f"  [{r['note']}]" if r["note"] else "")
        + "\n"
        for r in rows
    )
    return res, text, _csv(rows, ["beta", "lambda", "admissible", "vanishes", "note"]), True


def _alpha(field, args, t):
    if args.alpha is None:
        return None
    a = _t(field, args.alpha)
    return LaurentSeries.coerce(field, a)


def cmd_lseries(args, cfg, field, cache):
    y = parse_padic(field.p, args.y)
    t = _t(field, args.t)
    if args.x is not None:
        x = LaurentSeries.coerce(field, _t(field, args.x))
    elif y.is_exact:
        x = LaurentSeries.theta(field, y.value)
    else:
        raise UsageError("--x is required when y is a truncated p-adic integer")
    job = lseries.LSeriesJob(field, args.beta, t, lseries.SPoint(x, y), cfg.prec)
    ok, margin = lseries.convergence_check(job)
    value = lseries.lseries_eval(job, cfg.cap, cfg.threads, cache)
    res = _header(cfg, "lseries") | {
        "beta": args.beta,
        "t": lseries.t_descriptor(job.t),
        "x": str(x),
        "y": y.descriptor(),
        "margin": margin,
        "cutoff": lseries.certified_cutoff(job),
        "value": to_jsonable(value),
    }
    text = f"L = {value}\n  cutoff degree {res['cutoff']}, convergence margin {margin}\n"
    return res, text, None, True


def _coeff_rows(args, cfg, field, cache):
    y = parse_padic(field.p, args.y)
    t = lseries.coerce_t(field, _t(field, args.t))
    alpha = _alpha(field, args, t)
    prec = cfg.prec
    if args.floor_margin is not None:
        def prec(j):
            return lseries.valuation_floor(field.q, j) + args.floor_margin

    cs = lseries.continuation_coeffs(field, args.beta, y, t, args.jmax, prec, alpha, cfg.cap, cfg.threads, cache)
    rows = []
    for j, c in enumerate(cs):
        v, z = _val(c)
        rows.append({
            "j": j,
            "val": v,
            "prec": c.prec if not c.exact else None,
            "zero_to_precision": z,
            "floor": lseries.valuation_floor(field.q, j),
            "coeffs": to_jsonable(c),
        })
    a = alpha if alpha is not None else LaurentSeries.theta(field, lseries.delta_t(t))
    return rows, y, t, a, cs


def cmd_coeffs(args, cfg, field, cache):
    rows, y, t, a, _ = _coeff_rows(args, cfg, field, cache)
    res = _header(cfg, "coeffs") | {
        "q": field.q,
        "beta": args.beta,
        "t": lseries.t_descriptor(t),
        "y": y.descriptor(),
        "alpha": str(a),
        "rows": rows,
    }
    text = "".join(
        f"c_{r['j']}: v {'>= ' if r['zero_to_precision'] else '= '}{r['val']}  (floor {r['floor']})  {r['coeffs']['text']}\n"
        for r in rows
    )
    return res, text, _csv(rows, ["j", "val", "prec", "zero_to_precision", "floor"]), True


def cmd_newton(args, cfg, field, cache):
    rows, y, t, a, cs = _coeff_rows(args, cfg, field, cache)
    segs = lseries.newton_polygon(lseries.coefficient_valuations(cs))
    seg_rows = [
        {"slope_num": s.numerator, "slope_den": s.denominator, "length": n} for s, n in segs
    ]
    res = _header(cfg, "newton") | {
        "q": field.q,
        "beta": args.beta,
        "t": lseries.t_descriptor(t),
        "y": y.descriptor(),
        "alpha": str(a),
        "points": [[r["j"], r["val"]] for r in rows if not r["zero_to_precision"]],
        "skipped": [r["j"] for r in rows if r["zero_to_precision"]],
        "segments": seg_rows,
    }
    text = "".join(f"slope {r['slope_num']}/{r['slope_den']}  length {r['length']}\n" for r in seg_rows)
    return res, text, _csv(seg_rows, ["slope_num", "slope_den", "length"]), True


def cmd_omega(args, cfg, field, cache):
    t = _t(field, args.t)
    value = carlitz.pi_omega(field, t, cfg.prec)
    res = _header(cfg, "pi_omega") | {"t": lseries.t_descriptor(t), "value": to_jsonable(value)}
    return res, f"pi*Omega({lseries.t_descriptor(t)}) = {value}\n", None, True


def cmd_verify_pellarin(args, cfg, field, cache):
    ts = [_t(field, s) for s in args.t] if args.t else carlitz.default_t_grid(field)
    rows = []
    for t in ts:
        r = carlitz.pellarin_identity_check(field, t, cfg.prec, cfg.cap, cfg.threads, cache)
        rows.append({"t": lseries.t_descriptor(lseries.coerce_t(field, t)), "agree_to": r["agree_to"], "ok": r["ok"]})
    ok = all(r["ok"] for r in rows)
    res = _header(cfg, "verify_pellarin") | {"rows": rows, "pass": ok}
    text = "".join(f"t={r['t']}: agree to O(θ^-{r['agree_to']}) {'ok' if r['ok'] else 'FAIL'}\n" for r in rows)
    return res, text, _csv(rows, ["t", "agree_to", "ok"]), ok


def cmd_verify_carlitz(args, cfg, field, cache):
    q = field.q
    j = args.j if args.j is not None else q - 1
    dn = args.num_deg if args.num_deg is not None else q + 1
    dd = args.den_deg if args.den_deg is not None else q + 1
    N = cfg.prec
    z = carlitz.zeta_value(field, j, N, cfg.cap, cfg.threads, cache)
    pj = carlitz.pi_power(field, j, N)
    ratio = z.divide(pj, N)
    uv = carlitz.rational_reconstruct(ratio, dn, dd)
    rows = {"j": j, "bounds": [dn, dd], "ratio": to_jsonable(ratio)}
    ok = uv is not None
    if ok:
        u, v = uv
        z2 = carlitz.zeta_value(field, j, 2 * N, cfg.cap, cfg.threads, cache)
        ratio2 = z2.divide(carlitz.pi_power(field, j, 2 * N), 2 * N)
        back = LaurentSeries.from_poly(u).divide(LaurentSeries.from_poly(v), 2 * N)
        agree = back.agreement(ratio2)
        ok = agree >= 2 * N
        rows |= {"u": str(u), "v": str(v), "reexpansion_agree_to": agree}
    res = _header(cfg, "verify_carlitz") | rows | {"pass": ok}
    text = (
        f"zeta({j})/pi^{j} = ({rows.get('u')})/({rows.get('v')})  re-expansion agrees to O(θ^-{rows.get('reexpansion_agree_to')})\n"
        if uv
        else f"no rational reconstruction within degree bounds ({dn}, {dd})\n"
    )
    return res, text, None, ok


def _charsum(args, cfg):
    if cfg.seed is None:
        raise UsageError("--seed is required for the randomized character-sum suites")
    fields = [get_field(type(cfg.spec).from_q(int(q))) for q in args.qs.split(",")]
    rep = charsum.run_selftest(cfg.seed, fields, args.vanishing, args.valued, cfg.cap)
    rep["prec"] = cfg.prec
    text = (
        f"vanishing: {args.vanishing} instances, {len(rep['vanishing']['failures'])} failures\n"
        f"valued: {args.valued} instances ({rep['valued']['nonzero_sums']} nonzero sums), "
        f"{len(rep['valued']['failures'])} failures\n"
        + "".join(f"sharpness {w['label']}: {w['verdict']}\n" for w in rep["sharpness"])
    )
    return rep, text, None, rep["pass"]


def cmd_verify_charsum(args, cfg, field, cache):
    return _charsum(args, cfg)


def cmd_charsum_selftest(args, cfg, field, cache):
    return _charsum(args, cfg)


def cmd_verify_bridge(args, cfg, field, cache):
    rows = []
    for beta, j, x0, t0 in special.bridge_points(field):
        _, _, agree = special.bridge_check(field, beta, j, x0, t0, cfg.prec, cfg.cap)
        rows.append({
            "beta": beta,
            "j": j,
            "x0": str(x0),
            "t0": lseries.t_descriptor(t0),
            "agree_to": agree,
            "ok": agree >= cfg.prec,
        })
    ok = all(r["ok"] for r in rows)
    res = _header(cfg, "verify_bridge") | {"rows": rows, "pass": ok}
    text = "".join(
        f"beta={r['beta']} j={r['j']} x0={r['x0']} t0={r['t0']}: agree to O(θ^-{r['agree_to']})\n" for r in rows
    )
    return res, text, _csv(rows, ["beta", "j", "x0", "t0", "agree_to", "ok"]), ok


def cmd_verify_vadic(args, cfg, field, cache):
    rows = []
    for P in prime_enumerate(field, 2, cfg.cap):
        ctx = vadic.VadicContext(P, args.N)
        for e in range(args.emax + 1):
            for beta in (0, 1, 2):
                for j in (0, 1, 3):
                    r = vadic.vadic_continuity_check(ctx, e, beta, j, [0, 1, 2], cap=cfg.cap)
                    full = vadic.vadic_continuity_check(ctx, e, beta, j, [0], k=0, cap=cfg.cap)
                    rows.append({
                        "P": str(P),
                        "e": e,
                        "beta": beta,
                        "j": j,
                        "g": ",".join(str(x["exponent"]) for x in r["rows"]),
                        "nondecreasing": r["nondecreasing"],
                        "meets_floor": r["meets_floor"],
                        "k0_full": full["rows"][0]["exponent"] == args.N,
                    })
    ok = all(r["nondecreasing"] and r["meets_floor"] and r["k0_full"] for r in rows)
    res = _header(cfg, "verify_vadic") | {"N": args.N, "rows": rows, "pass": ok}
    text = "".join(f"P={r['P']} e={r['e']} beta={r['beta']} j={r['j']}: g(M)={r['g']}\n" for r in rows)
    return res, text, _csv(rows, list(rows[0]) if rows else []), ok


def cmd_vadic(args, cfg, field, cache):
    try:
        P = parse_poly(field, args.prime)
        t_rep = parse_poly(field, args.t_rep) if args.t_rep else None
        M_list = [int(x) for x in args.M_list.split(",")]
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    ctx = vadic.VadicContext(P, args.N, t_rep)
    rep = vadic.vadic_continuity_check(
        ctx, args.e, args.beta, args.j, M_list, k=args.k, restrict_coprime=not args.all_monics, cap=cfg.cap
    )
    res = _header(cfg, "vadic") | rep
    res["kind"] = "vadic"
    text = "".join(
        f"M={r['M']}: g={r['exponent']} (floor {r['floor']}, {r['samples']} samples)\n" for r in rep["rows"]
    )
    ok = rep["nondecreasing"] and rep["meets_floor"] is not False
    return res, text, _csv(rep["rows"], ["M", "samples", "j_prime_max", "exponent", "floor"]), ok


COMMANDS = {
    "special-poly": cmd_special_poly,
    "trivial-zeros": cmd_trivial_zeros,
    "lseries": cmd_lseries,
    "coeffs": cmd_coeffs,
    "newton": cmd_newton,
    "omega": cmd_omega,
    "vadic": cmd_vadic,
    "charsum-selftest": cmd_charsum_selftest,
    ("verify", "pellarin"): cmd_verify_pellarin,
    ("verify", "carlitz"): cmd_verify_carlitz,
    ("verify", "charsum"): cmd_verify_charsum,
    ("verify", "bridge"): cmd_verify_bridge,
    ("verify", "vadic"): cmd_verify_vadic,
}


def run(argv=None, out=None):
    """Run the CLI; returns the exit status."""
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=getattr(logging, str(args.log_level).upper(), logging.WARNING), format="%(levelname)s %(name)s: %(message)s")
    key = (args.command, args.suite) if args.command == "verify" else args.command
    try:
        cfg = _config(args)
        field = cfg.field
        cache = PowerSumCache(cfg.cache) if cfg.cache else None
        res, text, table, ok = COMMANDS[key](args, cfg, field, cache)
    except CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (InconsistencyError, PrecisionError) as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (UsageError, HypothesisError, ValueError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if cfg.format == "json":
        out.write(dumps(to_jsonable(res)))
    elif cfg.format == "csv":
        out.write(table if table is not None else dumps(to_jsonable(res)))
    else:
        out.write(text)
    return EXIT_OK if ok else EXIT_FAIL


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
