"""Command-line interface: ``brieskorn {classify,compare,verify,enumerate,sample}``.

Exit codes: 0 success, 1 a verification row failed, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import csv
import io
import os
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import reporting as rp
from .classifier import (
    Status,
    bilipschitz_equivalent,
    enumerate_lipschitz_classes,
    is_topological_submersion,
    topological_normal_form,
    topologically_equivalent,
)
from .determinacy import weighted_type
from .mixed_core import ExponentData, build_family, multiplicity
from .surface_geometry import (
    ambient_obstruction,
    horn_index,
    never_ambient_to_complex_curve,
    outer_obstruction,
    surface_profile,
    surface_type,
)

SEED_ENV = "BRIESKORN_SEED"
ALL_CHECKS = ("cone", "beta", "ne", "conj", "mult")

CONE_TOL = 1e-2
BETA_RTOL = 0.05
NE_RTOL = 0.10
NE_ATOL = 0.05
CONJ_TOL = 1e-9
SAMPLE_TOL = 1e-8


class InputError(ValueError):
    pass


def parse_vector(text: str) -> tuple:
    try:
        vals = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    return vals


def _exponents(a, b) -> ExponentData:
    try:
        return ExponentData(a, b)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _echo(a, b, E: ExponentData) -> dict:
    return {"a": list(a), "b": list(b), "canonical_a": list(E.a), "canonical_b": list(E.b),
            "canonical_order": [p + 1 for p in E.perm]}


def _seed(arg_seed: Optional[int]) -> Optional[int]:
    env = os.environ.get(SEED_ENV)
    if env is not None and env.strip():
        try:
            return int(env)
        except ValueError:
            raise InputError(f"{SEED_ENV} must be an integer, got {env!r}")
    return arg_seed


def _profile_dict(E: ExponentData) -> dict:
    st = surface_type(E)
    if st.regular:
        return {"type": "Regular"}
    prof = surface_profile(E)
    return {
        "type": str(prof.type),
        "cone": prof.cone.kind,
        "cone_dimension": prof.cone.dimension,
        "cone_rays": list(prof.cone.rays),
        "stated_cone_rays": list(prof.cone.stated_rays),
        "beta": prof.beta,
        "components": prof.components,
        "components_derived": prof.components_derived,
        "normally_embedded": prof.normally_embedded,
    }


def cmd_classify(a, b) -> tuple[dict, int]:
    E = _exponents(a, b)
    nf = topological_normal_form(E)
    m = multiplicity(build_family(E))
    rows = [
        rp.verdict("topological normal form", "topfor", str(nf)),
        rp.verdict("topological submersion", "submfam", is_topological_submersion(E)),
        rp.verdict("multiplicity", "def", m),
    ]
    data = {"family": str(build_family(E)), "normal_form": str(nf),
            "submersion": is_topological_submersion(E), "multiplicity": m,
            "vanishes_at_origin": E.vanishes_at_origin}
    if all(ai >= 1 for ai in E.a):
        w = weighted_type(E)
        data["weighted_type"] = {"r": list(w.r), "d": w.d}
        rows.append(rp.verdict("weighted homogeneous type", "deffam",
                               "r=(" + ", ".join(map(str, w.r)) + f"); d={w.d}"))
    if E.n == 2 and not (E.a[0] == 0 and E.b[0] == 0):
        prof = _profile_dict(E)
        data["surface"] = prof
        rows.append(rp.verdict("surface type", "tgcsup", prof["type"]))
        if prof["type"] != "Regular":
            rows.append(rp.verdict("tangent cone", "tgcsup", prof["cone"]))
            rows.append(rp.verdict("normally embedded", "l17", prof["normally_embedded"]))
            rows.append(rp.verdict("inner horn exponent", "p1", prof["beta"]))
            if never_ambient_to_complex_curve(E):
                rows.append(rp.verdict("never ambient equivalent to a complex plane curve",
                                       "su3", True))
    return rp.make_report("classify", _echo(a, b, E), rows, data=data), 0


def cmd_compare(a, b, c, d, mode: str) -> tuple[dict, int]:
    E1, E2 = _exponents(a, b), _exponents(c, d)
    try:
        if mode == "top":
            v = topologically_equivalent(E1, E2)
        elif mode == "bilip":
            v = bilipschitz_equivalent(E1, E2)
        elif mode == "outer":
            v = outer_obstruction(E1, E2)
        elif mode == "ambient":
            v = ambient_obstruction(E1, E2)
        else:
            raise InputError(f"unknown mode {mode}")
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    ref = v.reason.split("/")[-1].split("+")[0]
    if ref not in rp.REF_TAGS:
        ref = "class1" if mode == "bilip" else "tsam"
    row = rp.verdict(f"{mode} equivalence", ref, v.status, witness=v.witness)
    inputs = {"first": _echo(a, b, E1), "second": _echo(c, d, E2), "mode": mode}
    data = {"status": v.status, "reason": v.reason, "witness": v.witness}
    return rp.make_report("compare", inputs, [row], data=data), 0


def _verify_rows(E: ExponentData, checks, seed) -> tuple[list, dict]:
    from . import numeric_lab as nl

    rows, data = [], {}
    geometric = {"cone", "beta", "ne"} & set(checks)
    if geometric:
        if E.n != 2:
            raise InputError("geometric checks need n = 2")
        try:
            st = surface_type(E)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        if st.regular:
            raise InputError("regular surface germs are not classified")
    if "cone" in checks:
        est = nl.estimate_tangent_cone(E, seed=seed)
        ok = est.matched and est.hausdorff <= CONE_TOL
        rows.append(rp.verdict("tangent cone kind", "tgcsup", est.expected.kind, est.kind,
                               CONE_TOL, ok, witness=f"hausdorff={est.hausdorff:.3g}"))
        data["cone"] = est.summary()
    if "beta" in checks:
        beta = horn_index(E) if st.tag == "T3" else Fraction(1)
        fit = nl.estimate_beta(E, seed=seed)
        ok = abs(fit.slope - float(beta)) <= BETA_RTOL * float(beta) and fit.rational_snap == beta
        rows.append(rp.verdict("inner horn exponent", "l17" if st.tag == "T3" else "p1",
                               beta, fit.slope, BETA_RTOL, ok,
                               witness=f"snap={fit.rational_snap}"))
        data["beta"] = fit.to_json()
    if "ne" in checks:
        res = nl.check_normal_embedding(E, seed=seed)
        expected_ne = st.tag not in ("T1", "T3")
        exp_e = float(res.expected_exponent)
        tol_ok = (abs(res.exponent - exp_e) <= NE_RTOL * exp_e) if exp_e else abs(res.exponent) <= NE_ATOL
        rows.append(rp.verdict("normally embedded", "l17", expected_ne, res.normally_embedded,
                               None, res.normally_embedded == expected_ne))
        rows.append(rp.verdict("inner/outer divergence exponent", "l17", res.expected_exponent,
                               res.exponent, NE_RTOL if exp_e else NE_ATOL, tol_ok))
        data["ne"] = res.to_json()
    if "conj" in checks:
        resid = nl.verify_conjugation(E, seed=seed)
        rows.append(rp.verdict("g o phi = f residual", "topfor", 0.0, resid, CONJ_TOL,
                               resid <= CONJ_TOL))
    if "mult" in checks:
        m_sym = min(E.m)
        m_num = nl.verify_multiplicity_numeric(E, seed=seed)
        rows.append(rp.verdict("multiplicity", "def", m_sym, m_num, 0, m_sym == m_num))
    return rows, data


def cmd_verify(a, b, checks: Sequence[str], seed: Optional[int]) -> tuple[dict, int]:
    E = _exponents(a, b)
    bad = [c for c in checks if c not in ALL_CHECKS]
    if bad:
        raise InputError(f"unknown checks {bad}; choose from {','.join(ALL_CHECKS)}")
    s = 0 if seed is None else seed
    rows, data = _verify_rows(E, checks, s)
    inputs = dict(_echo(a, b, E), checks=list(checks))
    rep = rp.make_report("verify", inputs, rows, seed=s, data=data)
    return rep, 1 if rp.failed(rep) else 0


def enumerate_csv(classes) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["class", "representative_b", "members", "multiplicities",
                "topologically_equivalent_to_class_0", "flagged_undetermined"])
    first = ExponentData(classes.a, classes.representatives[0])
    flagged = set(classes.flagged)
    for i, members in enumerate(classes.classes):
        E = ExponentData(classes.a, members[0])
        top = topologically_equivalent(E, first).status is Status.EQUIVALENT
        w.writerow([i, " ".join(map(str, members[0])),
                    ";".join(" ".join(map(str, m)) for m in members),
                    " ".join(map(str, sorted(E.m))), top, i in flagged])
    return buf.getvalue()


def cmd_enumerate(a, b_bound: int) -> tuple[dict, int, str]:
    if b_bound < 0:
        raise InputError("--b-bound must be >= 0")
    _exponents(a, (0,) * len(a))
    try:
        classes = enumerate_lipschitz_classes(a, b_bound)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    text = enumerate_csv(classes)
    tops = [row.split(",")[4] for row in text.splitlines()[1:]]
    rows = [
        rp.verdict("bi-Lipschitz class count", "corfam", classes.count),
        rp.verdict("topologically trivial family", "corfam", len(set(tops)) == 1),
    ]
    data = {"classes": [[list(m) for m in members] for members in classes.classes],
            "undetermined_pairs": [[list(i), list(j)] for i, j in classes.undetermined_pairs]}
    rep = rp.make_report("enumerate", {"a": list(a), "b_bound": b_bound}, rows, data=data)
    return rep, 0, text


def cmd_sample(a, b, count: int, r_min: float, r_max: float, seed) -> tuple[dict, int, str]:
    import numpy as np

    from .numeric_lab import sample_surface
    from .surface_geometry import to_complex

    E = _exponents(a, b)
    s = 0 if seed is None else seed
    try:
        cloud = sample_surface(E, count, (r_min, r_max), s)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    f = build_family(E).evaluate(to_complex(cloud.points))
    resid = float(np.max(np.abs(f) / np.maximum(1.0, cloud.radii ** min(E.m))))
    rows = [rp.verdict("sampled points lie on the surface", "tgcsup", 0.0, resid, SAMPLE_TOL,
                       resid <= SAMPLE_TOL)]
    inputs = dict(_echo(a, b, E), count=count, r_min=r_min, r_max=r_max)
    rep = rp.make_report("sample", inputs, rows, seed=s,
                         data={"count": len(cloud), "coordinates": "canonical"})
    return rep, 1 if rp.failed(rep) else 0, cloud.to_csv_text()


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="brieskorn", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def exps(sp, a="-a", b="-b"):
        sp.add_argument(a, type=parse_vector, required=True, metavar="A1,A2,...")
        sp.add_argument(b, type=parse_vector, required=True, metavar="B1,B2,...")

    exps(sub.add_parser("classify", help="normal forms, weights and surface profile"))

    cp = sub.add_parser("compare", help="decide an equivalence between two germs")
    exps(cp)
    exps(cp, "-c", "-d")
    cp.add_argument("--mode", choices=["top", "bilip", "outer", "ambient"], default="bilip")

    vp = sub.add_parser("verify", help="check symbolic predictions numerically")
    exps(vp)
    vp.add_argument("--checks", default=",".join(ALL_CHECKS))
    vp.add_argument("--seed", type=int, default=0)
    vp.add_argument("--out", help="also write the JSON report here")

    ep = sub.add_parser("enumerate", help="bi-Lipschitz classes for fixed a")
    ep.add_argument("-a", type=parse_vector, required=True)
    ep.add_argument("--b-bound", type=int, required=True)
    ep.add_argument("--out", help="CSV of classes")

    sp = sub.add_parser("sample", help="seeded point cloud on a surface")
    exps(sp)
    sp.add_argument("--count", type=int, default=1000)
    sp.add_argument("--r-min", type=float, default=1e-3)
    sp.add_argument("--r-max", type=float, default=1.0)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", help="CSV of points")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        csv_text = None
        if args.command == "classify":
            rep, code = cmd_classify(args.a, args.b)
        elif args.command == "compare":
            rep, code = cmd_compare(args.a, args.b, args.c, args.d, args.mode)
        elif args.command == "verify":
            checks = [c.strip() for c in args.checks.split(",") if c.strip()]
            rep, code = cmd_verify(args.a, args.b, checks, _seed(args.seed))
        elif args.command == "enumerate":
            rep, code, csv_text = cmd_enumerate(args.a, args.b_bound)
        else:
            rep, code, csv_text = cmd_sample(args.a, args.b, args.count, args.r_min,
                                             args.r_max, _seed(args.seed))
    except InputError as exc:
        print(f"brieskorn: error: {exc}", file=sys.stderr)
        return 2
    text = rp.dumps(rep)
    sys.stdout.write(text)
    out = getattr(args, "out", None)
    if out:
        rp.write_atomic(out, csv_text if csv_text is not None else text)
    return code


if __name__ == "__main__":
    sys.exit(main())
