"""Batch front end: ``superfields <command> ...``.

Every command prints one report.  JSON reports carry ``"schema": 1`` and
render numbers as exact rationals.  With ``--out DIR`` (or the
``SUPERFIELDS_OUT`` environment variable) the report and its figures are
also written to ``DIR``.

Exit codes: 0 all checks passed, 1 some check failed, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import catalog, jetfock, repkit, toroidal
from .prolong import cross_check, prolong_preserver, prolong_recursive
from .superpoly import Coords
from .svf import GradedSpan, SuperVectorField, bracket
from .textio import ParseError, parse_field, parse_poly, parse_vars

OUT_ENV = "SUPERFIELDS_OUT"


class UsageError(ValueError):
    pass


def q(x) -> str:
    return repkit.qtext(x)


@dataclass
class RunReport:
    command: str
    parameters: dict
    checks_passed: int = 0
    checks_failed: int = 0
    failures: list = field(default_factory=list)
    result: dict = field(default_factory=dict)
    figures: list = field(default_factory=list)
    wall_time: float | None = None

    def check(self, name: str, ok: bool, detail=None):
        if ok:
            self.checks_passed += 1
        else:
            self.checks_failed += 1
            self.failures.append({"check": name, "detail": detail})
        return ok

    def to_json(self) -> dict:
        out = {
            "schema": 1,
            "command": self.command,
            "parameters": self.parameters,
            "checks_passed": self.checks_passed,
            "checks_failed": self.checks_failed,
            "failures": self.failures,
            "result": self.result,
        }
        if self.figures:
            out["figures"] = self.figures
        if self.wall_time is not None:
            out["wall_time"] = f"{self.wall_time:.3f}"
        return out


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _dims(d: dict) -> dict:
    return {str(k): v for k, v in sorted(d.items())}


def _slug(name: str) -> str:
    return "".join(ch if ch.isalnum() else "_" for ch in name).strip("_")


# ---- commands ---------------------------------------------------------------


def cmd_bracket(args, rep: RunReport, out: Path | None):
    if args.algebra:
        C = catalog.build(args.algebra)[0].coords
    elif args.vars:
        C = parse_vars(args.vars)
    else:
        raise UsageError("give --vars or --algebra")
    X, Y = parse_field(args.X, C), parse_field(args.Y, C)
    for lab, F in (("X", X), ("Y", Y)):
        if not F.is_parity_homogeneous():
            raise UsageError(f"{lab} is not parity homogeneous")
    Z = bracket(X, Y)
    rep.result = {
        "variables": C.names(),
        "X": X.to_text(),
        "Y": Y.to_text(),
        "bracket": Z.to_text(),
        "parity": Z.parity() if Z else None,
        "degree": Z.weighted_degree() if Z and isinstance(Z.weighted_degree(), int) else None,
    }


def cmd_verify_algebra(args, rep: RunReport, out: Path | None):
    name = catalog.canonical_name(args.name)
    desc, span = catalog.build(name, kmax=args.kmax)
    rep.parameters["name"] = name
    n_gens = len(span.basis())
    grading = catalog.verify_grading(span)
    rep.check("grading", grading["passed"], grading)
    pres = catalog.verify_preservation(name, span)
    rep.check("preservation", pres.passed, pres.describe()["failures"])
    cons = catalog.consistency_check(span)
    checked, bad = catalog.jacobi_basis_failures(span.basis())
    rep.check("basis_jacobi", not bad, bad[:5])
    result = {
        "descriptor": desc.to_json(),
        "dims": _dims(span.dims()),
        "generators_verified": n_gens,
        "preservation_entries": len(pres.entries),
        "expected_negative": pres.describe()["expected_negative"],
        "consistency": cons,
        "jacobi_triples": checked,
    }
    if name in catalog.CONSISTENT:
        rep.check("consistency", cons == "consistent", cons)
    if name in ("mb(3|8)", "vle(3|6)"):
        g0 = catalog.verify_g0_structure(name)
        rep.check("g0_structure", g0.passed, g0.failures)
        result["g0_relations_checked"] = g0.relations_checked
    if name == "mb(3|8)":
        g = catalog.mb38_generators()
        Z = g.Z
        bad_z = [lab for lab, k, X in g.labelled() if bracket(Z, X) != X.scale(k)]
        rep.check("grading_operator", not bad_z, bad_z)
        result["convention"] = catalog.PINNED.describe()
        result["labels"] = {str(k): v for k, v in catalog.labels_for(name, span).items()}
    rep.result = result
    if out:
        rep.figures.append(plots().graded_dims(span.dims(), name, out / f"dims_{_slug(name)}.png"))


def cmd_prolong(args, rep: RunReport, out: Path | None):
    name = catalog.canonical_name(args.name)
    desc, base = catalog.build(name, kmax=0)
    rep.parameters["name"] = name
    res = {}
    if args.method in ("preserver", "both"):
        res["preserver"] = prolong_preserver(desc.structures, desc.coords, args.kmax)
    if args.method in ("recursion", "both"):
        g_neg = GradedSpan(base.coords, {k: v for k, v in base.pieces.items() if k < 0})
        res["recursion"] = prolong_recursive(g_neg, base.pieces.get(0, []), args.kmax)
    rep.result = {m: _dims(r.dims) for m, r in sorted(res.items())}
    if len(res) == 2:
        cc = cross_check(res["recursion"], res["preserver"])
        rep.check("recursion_equals_preserver", cc.equal, cc.describe())
        rep.result["cross_check"] = cc.describe()
    if name.startswith("vect(") and desc.superdim[1] == 0:
        from .prolong import vect_dim_oracle

        n = desc.superdim[0]
        oracle = {k: vect_dim_oracle(n, k) for k in range(-1, args.kmax + 1)}
        for m, r in sorted(res.items()):
            rep.check(f"{m}_matches_enumeration", r.dims == oracle, _dims(r.dims))
        rep.result["oracle"] = _dims(oracle)
    if out:
        ms = sorted(res)
        other = res[ms[1]].dims if len(ms) == 2 else None
        rep.figures.append(
            plots().graded_dims(
                res[ms[0]].dims, f"{name}, kmax {args.kmax}", out / f"prolong_{_slug(name)}.png", other, tuple(ms) + ("",)
            )
        )


def cmd_toroidal_sweep(args, rep: RunReport, out: Path | None):
    if not 1 <= args.dim <= 3:
        raise UsageError("--dim must be 1, 2 or 3")
    if args.range < 0:
        raise UsageError("--range must be nonnegative")
    sw = toroidal.jacobi_sweep(args.dim, -args.range, args.range)
    rep.check("jacobi_sweep", sw.passed, sw.failures)
    rep.result = {"sweep": sw.describe()}
    if args.dim >= 2:
        nc = toroidal.near_central_report(args.dim)
        rep.check("near_central_identity", nc.identity_holds, None)
        rep.result["near_central"] = nc.describe()
    if args.gauge:
        rng = random.Random(args.seed)
        bad = 0
        for _ in range(args.gauge):
            g = toroidal.GaugeField.random(args.dim, rng)
            if not toroidal.gauge_shift(g).passed:
                bad += 1
        rep.check("gauge_shift", bad == 0, {"failed_fields": bad})
        rep.result["gauge_fields"] = args.gauge
    rep.result["failures"] = sw.failures
    if out:
        rows = [(args.dim, sw.triples_checked, sw.triples_structural, len(sw.failures))]
        rep.figures.append(plots().sweep_counts(rows, out / f"sweep_N{args.dim}.png"))


def _virasoro_series(mmax: int):
    E = toroidal.ToroidalElement
    lam = (toroidal.c1 + toroidal.c2).scale(Fraction(1, 2))
    ms, raw, shifted = [], [], []
    for m in range(-mmax, mmax + 1):
        r = toroidal.tbracket(E.Lgen(1, 0, (m,)), E.Lgen(1, 0, (-m,)))
        a = r.L.get((0, (0,)), toroidal.C12.zero())
        b = r.S.get((0, (0,)), toroidal.C12.zero())
        s = b - a * lam
        # coefficient of c = -(c1 + c2)
        ms.append(m)
        raw.append(-b.partial("c1").constant_term())
        shifted.append(-s.partial("c1").constant_term())
    return ms, raw, shifted, [Fraction(m ** 3 - m) for m in ms]


def cmd_virasoro(args, rep: RunReport, out: Path | None):
    vr = toroidal.reduce_to_virasoro()
    rep.check("s_only_at_zero", vr.s_content_only_at_zero, None)
    rep.check("cubic_match", vr.match, vr.cubic_coefficients)
    ms, raw, shifted, target = _virasoro_series(4)
    rep.check("shifted_series", shifted == target, [q(x) for x in shifted])
    rep.result = vr.describe()
    rep.result["series"] = {
        "m": ms,
        "direct": [q(x) for x in raw],
        "shifted": [q(x) for x in shifted],
        "m3_minus_m": [q(x) for x in target],
    }
    if out:
        rep.figures.append(plots().cubic_match(ms, raw, shifted, target, out / "virasoro.png"))


def _rep_for(kind: str, N: int, weight):
    if kind == "density":
        return jetfock.scalar_density(N, weight)
    if kind == "vector":
        return jetfock.vector_rep(N, weight)
    if kind == "covector":
        return jetfock.covector_rep(N, weight)
    raise UsageError(f"unknown representation {kind!r}")


def _random_jet_field(C: Coords, deg: int, rng: random.Random) -> SuperVectorField:
    import itertools

    X = SuperVectorField(C)
    N = len(C)
    for i in range(N):
        f = C.zero()
        for e in itertools.product(range(deg + 1), repeat=N):
            if sum(e) <= deg and rng.random() < 0.5:
                mono = C.one()
                for j, k in enumerate(e):
                    mono = mono * C.var(j) ** k
                f = f + mono.scale(rng.randint(-3, 3))
        X = X + SuperVectorField.partial(C, i).lmul(f)
    return X


def cmd_jet_check(args, rep: RunReport, out: Path | None):
    if args.dim < 1 or args.order < 0:
        raise UsageError("--dim must be positive and --order nonnegative")
    weight = _fraction(args.weight)
    R = _rep_for(args.rep, args.dim, weight)
    C = jetfock.base_coords(args.dim)
    rng = random.Random(args.seed)
    sample = None
    for i in range(args.pairs):
        xi, eta = _random_jet_field(C, args.degree, rng), _random_jet_field(C, args.degree, rng)
        J = jetfock.jet_matrices(xi, args.order, R)
        sample = sample or (xi, J)
        rep.check(f"triangular[{i}]", J.is_block_triangular(), None)
        r = jetfock.rep_property_check(xi, eta, args.order, R)
        rep.check(f"rep_property[{i}]", r.passed, r.residual)
    if args.dim == 1:
        # hand expansions: weight-0 first jet, and the density term
        x = C.var("x1")
        f = x ** 3 - x
        d = SuperVectorField.partial(C, "x1").lmul(f)
        J0 = jetfock.jet_matrices(d, 1, jetfock.scalar_density(1, 0))
        rep.check(
            "hand_weight0",
            J0.block((1,), (1,))[0][0] == f.partial(0) and not J0.block((0,), (1,))[0][0] and not J0.block((0,), (0,))[0][0],
            None,
        )
        Jl = jetfock.jet_matrices(d, 0, jetfock.scalar_density(1, weight))
        rep.check("hand_density", Jl.block((0,), (0,))[0][0] == f.partial(0).scale(weight), None)
    rep.result = {"rep": R.to_json(), "pairs": args.pairs, "coefficient_degree": args.degree}
    if sample:
        rep.result["sample_field"] = sample[0].to_text()
        rep.result["sample_matrix"] = sample[1].to_json()
        rep.result["sample_realization"] = jetfock.classical_realization(sample[0], min(args.order, 1), R).to_json()
        if out:
            J = sample[1]
            rep.figures.append(
                plots().block_pattern(
                    J.indices, set(J.blocks), out / f"jet_N{args.dim}_p{args.order}.png", f"T^n_m blocks, N={args.dim}, p={args.order}"
                )
            )


def _fraction(text) -> Fraction:
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not a rational number: {text!r}") from exc


def load_kt_setup(path: str) -> tuple:
    """``{"fields": [["phi", 0], ...], "equations": ["phi^2", ...], "cutoff": 4, "gmax": 2}``."""
    try:
        data = json.loads(Path(path).read_text())
        fields = [(str(n), int(p)) for n, p in data["fields"]]
        base = Coords.build([(n, p, 1) for n, p in fields])
        eqs = [parse_poly(str(e), base) for e in data["equations"]]
        return jetfock.KTSetup(fields, eqs, int(data.get("cutoff", 4))), int(data.get("gmax", 2))
    except (OSError, KeyError, TypeError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read KT setup: {exc}") from exc


def cmd_kt(args, rep: RunReport, out: Path | None):
    if args.setup:
        setups = {Path(args.setup).stem: load_kt_setup(args.setup)}
    else:
        toys = jetfock.kt_toys()
        names = [args.toy] if args.toy else sorted(toys)
        if any(n not in toys for n in names):
            raise UsageError(f"unknown toy; choose from {sorted(toys)}")
        setups = {n: (toys[n], 2) for n in names}
    result = {}
    for name, (setup, gmax) in setups.items():
        r = jetfock.kt_cohomology(setup, gmax)
        rep.check(f"{name}:delta_squared_zero", r.delta_squared_zero, None)
        if name.startswith("regular"):
            rep.check(f"{name}:resolution", r.dims.get(0) == 1 and all(r.dims[g] == 0 for g in r.dims if g), r.to_json())
        if name == "trivial":
            rep.check(f"{name}:h1_nonzero", r.dims.get(1, 0) > 0, r.to_json())
        result[name] = r.to_json()
        if out:
            rep.figures.append(plots().cohomology_grid(r.per_degree, out / f"kt_{_slug(name)}.png", name))
    rep.result = result


def cmd_tables(args, rep: RunReport, out: Path | None):
    if args.table == "fermions":
        t = repkit.fermion_table()
        for r in t.rows:
            rep.check(f"charges{r.multiplet}", r.charges_match, None)
        rep.result = t.to_json()
        records = [r.record() for r in t.rows]
        if out:
            rep.figures.append(plots().charge_chart(records, out / "fermions.png"))
    elif args.table == "formmods":
        records = repkit.form_module_table(args.bound)
        rep.result = {"schema": 1, "table": "formmods", "rows": records}
    else:
        records = catalog.regrading_table()
        rep.result = {"schema": 1, "table": "regradings", "rows": records}
    rep.parameters["format"] = args.format
    rep.csv = repkit.records_to_csv(records)


SUITE = [
    ["verify-algebra", "mb38"],
    ["verify-algebra", "vle36"],
    ["verify-algebra", "k(1|2)"],
    ["prolong", "svect(3)", "--kmax", "2", "--method", "both"],
    ["prolong", "vle36", "--kmax", "1", "--method", "both"],
    ["prolong", "mb38", "--kmax", "1", "--method", "both"],
    ["prolong", "vect(2)", "--kmax", "2", "--method", "both"],
    ["toroidal-sweep", "--dim", "1", "--range", "2"],
    ["toroidal-sweep", "--dim", "2", "--range", "2", "--gauge", "20"],
    ["virasoro-reduce"],
    ["jet-check", "--dim", "1", "--order", "2", "--weight", "1/2", "--pairs", "5"],
    ["jet-check", "--dim", "2", "--order", "2", "--rep", "vector", "--pairs", "3"],
    ["kt"],
    ["tables", "fermions"],
    ["tables", "formmods", "--bound", "2"],
    ["tables", "regradings"],
]


def cmd_suite(args, rep: RunReport, out: Path | None):
    runs = []
    for argv in SUITE:
        sub = build_parser().parse_args(argv + (["--timing"] if args.timing else []))
        sub_out = out / _slug("_".join(argv)) if out else None
        if sub_out:
            sub_out.mkdir(parents=True, exist_ok=True)
        r = execute(sub, sub_out)
        rep.checks_passed += r.checks_passed
        rep.checks_failed += r.checks_failed
        for f in r.failures:
            rep.failures.append({"command": " ".join(argv), **f})
        runs.append({"argv": argv, "checks_passed": r.checks_passed, "checks_failed": r.checks_failed})
        if sub_out:
            (sub_out / "report.json").write_text(dumps(r.to_json()))
            rep.figures.extend(f"{sub_out.name}/{f}" for f in r.figures)
    rep.result = {"runs": runs}


# ---- plumbing ---------------------------------------------------------------


def plots():
    from . import plots as p

    return p


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="superfields", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help=f"write report and figures to this directory (default ${OUT_ENV})")
    common.add_argument("--timing", action="store_true", help="include wall_time in the report")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bracket", parents=[common], help="bracket of two vector fields")
    p.add_argument("X")
    p.add_argument("Y")
    p.add_argument("--vars", help='coordinates, e.g. "u1 u2 | th1 th2:2"')
    p.add_argument("--algebra", help="use the coordinates of a catalog algebra")
    p.set_defaults(func=cmd_bracket)

    p = sub.add_parser("verify-algebra", parents=[common], help="build an algebra and run every verifier")
    p.add_argument("name")
    p.add_argument("--kmax", type=int, default=0)
    p.set_defaults(func=cmd_verify_algebra)

    p = sub.add_parser("prolong", parents=[common], help="Cartan prolongation by recursion and/or preservation")
    p.add_argument("name")
    p.add_argument("--kmax", type=int, required=True)
    p.add_argument("--method", choices=["recursion", "preserver", "both"], default="both")
    p.set_defaults(func=cmd_prolong)

    p = sub.add_parser("toroidal-sweep", parents=[common], help="Jacobi sweep of the toroidal algebra")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--range", type=int, default=2)
    p.add_argument("--gauge", type=int, default=0, help="also test this many random gauge fields")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_toroidal_sweep)

    p = sub.add_parser("virasoro-reduce", parents=[common], help="1D reduction to the Virasoro cocycle")
    p.set_defaults(func=cmd_virasoro)

    p = sub.add_parser("jet-check", parents=[common], help="jet matrices and the representation property")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--weight", default="0")
    p.add_argument("--rep", default="density", choices=["density", "vector", "covector"])
    p.add_argument("--pairs", type=int, default=10)
    p.add_argument("--degree", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_jet_check)

    p = sub.add_parser("kt", parents=[common], help="Koszul-Tate cohomology")
    p.add_argument("--setup", help="JSON setup file")
    p.add_argument("--toy", help="one of the built-in toys")
    p.set_defaults(func=cmd_kt)

    p = sub.add_parser("tables", parents=[common], help="fermion, form-module and regrading tables")
    p.add_argument("table", choices=["fermions", "formmods", "regradings"])
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--bound", type=int, default=2)
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("suite", parents=[common], help="run the fixed report suite")
    p.set_defaults(func=cmd_suite)
    return ap


def _params(args) -> dict:
    skip = {"func", "command", "out", "timing"}
    out = {}
    for k, v in sorted(vars(args).items()):
        if k in skip or v is None:
            continue
        out[k] = v if isinstance(v, (int, str, bool)) else str(v)
    return out


def execute(args, out: Path | None) -> RunReport:
    rep = RunReport(args.command, _params(args))
    rep.csv = None
    t0 = time.perf_counter()
    args.func(args, rep, out)
    if args.timing:
        rep.wall_time = time.perf_counter() - t0
    return rep


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out_dir = args.out or os.environ.get(OUT_ENV)
    out = Path(out_dir) if out_dir else None
    try:
        if out:
            out.mkdir(parents=True, exist_ok=True)
        rep = execute(args, out)
    except (UsageError, ParseError, catalog.UnknownAlgebra, catalog.OutOfScope, toroidal.DimensionMismatch) as exc:
        print(f"superfields: error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"superfields: error: {exc}", file=sys.stderr)
        return 2
    fmt = getattr(args, "format", "json")
    text = rep.csv if fmt == "csv" and rep.csv is not None else dumps(rep.to_json())
    sys.stdout.write(text)
    if out:
        (out / ("report.csv" if fmt == "csv" else "report.json")).write_text(text)
    return 0 if rep.checks_failed == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
