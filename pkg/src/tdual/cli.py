"""Scenario runner: declarative JSON in, verification report out.

Exit codes: 0 all checks pass, 1 a check failed, 2 malformed scenario,
3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import sys
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from importlib import resources
from threading import RLock
from typing import Callable, Optional

import numpy as np

from . import cech, crossed, groupcoh, triples
from .errors import ResourceCapError, max_matrix_dim
from .lca import FiniteLcaGroup, Subgroup


class ScenarioError(ValueError):
    def __init__(self, message: str, path: str = "$"):
        super().__init__(f"{path}: {message}")
        self.path = path


def _schema():
    with resources.files("tdual").joinpath("scenario_schema.json").open() as fh:
        return json.load(fh)


def load_scenario(path: str) -> dict:
    """Parse and validate a scenario file; bare names resolve to bundled ones."""
    if os.sep not in path and not os.path.exists(path):
        bundled = resources.files("tdual").joinpath(
            "scenarios", path if path.endswith(".json") else path + ".json")
        if bundled.is_file():
            raw = bundled.read_text()
        else:
            raise ScenarioError(f"no such scenario file or bundled name: {path}")
    else:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                raw = fh.read()
        except OSError as exc:
            raise ScenarioError(str(exc)) from exc
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"invalid JSON: {exc}") from exc

    import jsonschema
    validator = jsonschema.Draft202012Validator(_schema())
    errors = sorted(validator.iter_errors(data), key=lambda e: e.json_path)
    if errors:
        e = errors[0]
        raise ScenarioError(e.message, e.json_path)

    factors = data["groups"]["factors"]
    for i, gen in enumerate(data["groups"]["N"]):
        if len(gen) != len(factors):
            raise ScenarioError(
                f"generator has {len(gen)} coordinates, group has {len(factors)}",
                f"$.groups.N[{i}]")
    nverts = data["nerve"]["vertices"]
    edge_set = set()
    for i, s in enumerate(data["nerve"]["simplices"]):
        if any(v >= nverts for v in s):
            raise ScenarioError("vertex index out of range", f"$.nerve.simplices[{i}]")
        for a, b in itertools.combinations(sorted(set(s)), 2):
            edge_set.add((a, b))
    for key, coords in data.get("twist", {}).items():
        a, b = (int(x) for x in key.split(","))
        if (min(a, b), max(a, b)) not in edge_set:
            raise ScenarioError(f"twist references non-edge ({a},{b})",
                                f"$.twist['{key}']")
        if len(coords) != len(factors):
            raise ScenarioError("twist value has wrong coordinate count",
                                f"$.twist['{key}']")
    if "modulus" in data:
        from math import lcm
        exponent = lcm(*factors)
        if data["modulus"] % exponent != 0:
            raise ScenarioError(
                f"modulus must be a multiple of the group exponent {exponent}",
                "$.modulus")
    return data


class Workspace:
    """Derived objects for one scenario, built lazily and shared by checks."""

    def __init__(self, scenario: dict, seed: Optional[int] = None,
                 tolerance_scale: float = 1.0):
        self.scenario = scenario
        self.seed = seed if seed is not None else scenario.get("seed", 0)
        self.d = scenario.get("fiber_dim", 1)
        self.trials = scenario.get("trials", 10)
        G = FiniteLcaGroup(scenario["groups"]["factors"])
        N = Subgroup(G, [G.element(c) for c in scenario["groups"]["N"]])
        self.ctx = triples.DualityContext(G, N, m=scenario.get("modulus"))
        self.nerve = cech.Nerve(scenario["nerve"]["vertices"],
                                scenario["nerve"]["simplices"])
        tw = scenario.get("twist", {})
        vals = {}
        for e in self.nerve.edges:
            key = f"{e[0]},{e[1]}"
            coords = tw.get(key)
            vals[e] = (self.ctx.quotient.rep(G.element(coords))
                       if coords is not None else self.ctx.quotient.zero())
        try:
            self.twist = cech.TwistCocycle(self.nerve, self.ctx.quotient, vals)
        except ValueError as exc:
            raise ScenarioError(str(exc), "$.twist") from exc
        tols = scenario.get("tolerances", {})
        self.tau_s = tols.get("snap", triples.TAU_S) * tolerance_scale
        self.tau_u = tols.get("operator", triples.TAU_U) * tolerance_scale
        self.tau_pipe = tols.get("pipeline", 1e-8) * tolerance_scale
        self._lock = RLock()
        self._cache: dict = {}

    def _get(self, key: str, builder: Callable):
        with self._lock:
            if key not in self._cache:
                self._cache[key] = builder()
            return self._cache[key]

    def fixture(self) -> triples.TripleLocalData:
        def build():
            t = triples.build_random_triple(
                self.nerve, self.ctx, self.d, self.seed, twist=self.twist)
            t.tau_s, t.tau_u = self.tau_s, self.tau_u
            return t
        return self._get("fixture", build)

    def normalized(self) -> triples.TripleLocalData:
        return self._get("normalized", lambda: triples.make_dualisable(self.fixture()))

    def cocycle(self) -> triples.TotalTwoCocycle:
        return self._get("cocycle",
                         lambda: triples.extract_total_cocycle(self.normalized()))

    def dual(self) -> triples.TripleLocalData:
        return self._get("dual",
                         lambda: triples.dualize(self.normalized(), self.cocycle()))

    def dual_cocycle(self) -> triples.TotalTwoCocycle:
        return self._get("dual_cocycle",
                         lambda: triples.extract_total_cocycle(self.dual()))

    def derived_summary(self) -> dict:
        ctx = self.ctx
        q = ctx.quotient.order
        return {
            "group": repr(ctx.G),
            "group_order": ctx.G.order,
            "exponent": ctx.G.exponent,
            "modulus": ctx.m,
            "N_generators": [list(g.coords) for g in ctx.N.generators],
            "N_order": ctx.N.order,
            "quotient_order": q,
            "annihilator_generators": [list(g.coords) for g in ctx.Nperp.generators],
            "annihilator_order": ctx.Nperp.order,
            "dual_quotient_order": ctx.dual_quotient.order,
            "fiber_dim": self.d,
            "dual_fiber_dim": q * self.d,
            "double_dual_fiber_dim": ctx.dual_quotient.order * q * self.d,
            "crossed_rep_dim": ctx.G.order * q * self.d,
            "nerve": {
                "vertices": self.nerve.vertex_count,
                "edges": len(self.nerve.edges),
                "two_simplices": len(self.nerve.simplices(2)),
            },
            "matrix_dim_cap": max_matrix_dim(),
        }


def _result(name: str, residual: float, tolerance: float, **extra) -> dict:
    out = {"name": name, "residual": float(residual), "tolerance": float(tolerance),
           "passed": bool(residual <= tolerance)}
    out.update(extra)
    return out


def _exact(name: str, ok: bool, **extra) -> dict:
    return _result(name, 0.0 if ok else 1.0, 0.0, **extra)


# --------------------------------------------------------------------------
# checks; each takes a Workspace and returns a list of result dicts

def check_cech(ws: Workspace) -> list[dict]:
    out = []
    rng = np.random.default_rng(ws.seed + 101)
    ctx, nerve = ws.ctx, ws.nerve
    mod = cech.GModule.functions_on_quotient(ctx.m, ctx.quotient)
    ok = True
    for deg in range(nerve.dimension + 1):
        c = cech.TwistedCochain(
            nerve, mod, deg,
            {s: rng.integers(0, ctx.m, size=mod.size) for s in nerve.simplices(deg)})
        if not cech.delta_g(cech.delta_g(c, ws.twist), ws.twist).is_zero():
            ok = False
    out.append(_exact("cech.d2_zero", ok))

    triv = cech.GModule.trivial(ctx.m)
    gtriv = cech.TwistCocycle.trivial(nerve, ctx.quotient)
    factors = {}
    for k in range(nerve.dimension + 1):
        f, _ = cech.cohomology(nerve, triv, gtriv, k)
        factors[str(k)] = f
    out.append(_exact("cech.untwisted_factors", True, factors=factors))

    tw_factors = {}
    for k in range(min(nerve.dimension, 1) + 1):
        f, _ = cech.cohomology(nerve, mod, ws.twist, k)
        tw_factors[str(k)] = f
    out.append(_exact("cech.twisted_factors", True, factors=tw_factors))

    r = {v[0]: ctx.quotient.reps()[int(rng.integers(0, ctx.quotient.order))]
         for v in nerve.vertices}
    gp = cech.r_conjugate_twist(ws.twist, r)
    ok = True
    for deg in range(nerve.dimension):
        c = cech.TwistedCochain(
            nerve, mod, deg,
            {s: rng.integers(0, ctx.m, size=mod.size) for s in nerve.simplices(deg)})
        lhs = cech.delta_g(cech.r_sharp(c, r), ws.twist)
        rhs = cech.r_sharp(cech.delta_g(c, gp), r)
        if not (lhs - rhs).is_zero():
            ok = False
        rneg = {v: ctx.quotient.neg(x) for v, x in r.items()}
        if not (cech.r_sharp(cech.r_sharp(c, r), rneg) - c).is_zero():
            ok = False
    out.append(_exact("cech.r_sharp_chain_map", ok))
    return out


def check_total(ws: Workspace) -> list[dict]:
    out = []
    ctx, nerve = ws.ctx, ws.nerve
    rng = np.random.default_rng(ws.seed + 202)
    ok_d2 = True
    sp = groupcoh.GroupCochainSpace(ctx.G, ctx.quotient, ctx.m, 1)
    f = groupcoh.GroupCochain(sp, rng.integers(0, ctx.m, size=sp.shape()))
    if not groupcoh.d_group(groupcoh.d_group(f)).is_zero():
        ok_d2 = False
    out.append(_exact("total.group_d2_zero", ok_d2))

    ok_t2 = True
    for p in (0, 1, 2):
        t = groupcoh.TotalCochain(nerve, ctx.G, ctx.quotient, ctx.m, p)
        for kl, blk in t.blocks.items():
            for s in nerve.simplices(kl[0]):
                blk.values[s] = rng.integers(0, ctx.m, size=blk.module.size)
        if not groupcoh.total_differential(
                groupcoh.total_differential(t, ws.twist), ws.twist).is_zero():
            ok_t2 = False
    out.append(_exact("total.d2_zero", ok_t2))

    pt = cech.Nerve.point()
    gp = cech.TwistCocycle.trivial(pt, ctx.quotient)
    ok_pt = True
    pt_factors = {}
    skipped = []
    cap = max_matrix_dim()
    for p in (0, 1, 2):
        if (ctx.G.order ** (p + 1)) * ctx.quotient.order > cap:
            skipped.append(p)
            continue
        ft, _ = groupcoh.total_cohomology(pt, ctx.G, ctx.quotient, ctx.m, gp, p)
        fg, _ = groupcoh.group_cohomology(ctx.G, ctx.quotient, ctx.m, p)
        pt_factors[str(p)] = ft
        if ft != fg:
            ok_pt = False
    out.append(_exact("total.point_nerve_matches_group_cohomology", ok_pt,
                      factors=pt_factors, capped_degrees=skipped))

    factors = {}
    capped = False
    for p in (0, 1):
        try:
            f, _ = groupcoh.total_cohomology(nerve, ctx.G, ctx.quotient, ctx.m,
                                             ws.twist, p)
            factors[str(p)] = f
        except ResourceCapError:
            capped = True
    out.append(_exact("total.scenario_factors", True, factors=factors,
                      capped_degrees=capped))

    c = ws.cocycle()
    closed = groupcoh.total_differential(c.to_total_cochain(), ws.normalized().g)
    out.append(_exact("total.triple_cocycle_closure", closed.is_zero()))
    return out


def check_dualize(ws: Workspace) -> list[dict]:
    out = []
    t = ws.fixture()
    v = triples.validate_triple(t)
    out.append(_result("dualize.fixture_laws", max(v.values()), ws.tau_u, detail=v))
    c0 = triples.extract_total_cocycle(t)
    nu = triples.is_dualisable(c0)
    out.append(_exact("dualize.omega_is_boundary", nu is not None))
    tn = ws.normalized()
    cn = ws.cocycle()
    out.append(_exact("dualize.normalized_omega_zero", cn.omega_is_zero()))
    th = ws.dual()
    rep = triples.dual_law_report(tn, th, ws.dual_cocycle())
    out.append(_result("dualize.dual_cech_law", rep["dual_cech_law"], ws.tau_u))
    out.append(_result("dualize.dual_decker_law", rep["dual_decker_law"], ws.tau_u))
    out.append(_exact("dualize.dual_phi_closed_form",
                      rep["dual_phi_closed_form"] == 0.0))
    out.append(_result("dualize.dual_mu_periodicity",
                       rep["dual_mu_periodicity"], ws.tau_u))
    _, krep = triples.build_kappa_top(tn, th)
    out.append(_result("dualize.kappa_top_gluing", krep["kappa_top_gluing"], ws.tau_u))
    out.append(_result("dualize.alpha_factorisation", krep["alpha_factorisation"],
                       ws.tau_u))
    if t.gauge is not None:
        tp = triples.exterior_perturbation(tn, ws.seed + 7)
        er = triples.exterior_family_residuals(tn, tp)
        out.append(_result("dualize.exterior_family_laws",
                           max(er.values()), ws.tau_u))
        cp = triples.extract_total_cocycle(triples.relift(tp, ws.seed + 8))
        cert = triples.cocycle_certificate(cn, cp)
        from .serialize import total_cochain_to_json
        out.append(_exact(
            "dualize.exterior_class_certificate", cert is not None,
            certificate=total_cochain_to_json(cert) if cert is not None else None))
    return out


def check_involution(ws: Workspace) -> list[dict]:
    from .serialize import total_cochain_to_json
    rep = triples.verify_involution(ws.fixture())
    cert_json = (total_cochain_to_json(rep["certificate"])
                 if "certificate" in rep else None)
    out = [
        _result("involution.dual_cech_law", rep["dual_cech_law"], ws.tau_u),
        _result("involution.dual_decker_law", rep["dual_decker_law"], ws.tau_u),
        _exact("involution.dual_omega_zero", rep["dual_omega_zero"] == 0.0),
        _exact("involution.double_dual_base_equals_original",
               rep["double_dual_base_equals_original"] == 0.0),
        _exact("involution.class_certificate",
               rep["double_dual_class_certificate"] == 0.0,
               certificate=cert_json),
    ]
    if "certificate_residual" in rep:
        out.append(_exact("involution.certificate_exact",
                          rep["certificate_residual"] == 0.0))
    return out


def check_poincare(ws: Workspace) -> list[dict]:
    rep = triples.poincare_check(ws.ctx, seed=ws.seed + 11)
    return [
        _exact("poincare.sigma_hat_independence",
               rep["sigma_hat_independence"] == 0.0),
        _result("poincare.kappa_unitary_word", rep["kappa_unitary_word"], ws.tau_u),
        _exact("poincare.q_plus_r_coboundary", rep["q_plus_r_coboundary"] == 0.0),
    ]


def check_crossed_point(ws: Workspace) -> list[dict]:
    out = []
    res = crossed.fourier_roundtrip_residual(ws.ctx, seed=ws.seed + 3)
    out.append(_result("crossed.fourier_inversion", res, 1e-12))
    tn = ws.normalized()
    i0 = ws.nerve.vertices[0][0]
    rep = crossed.verify_point_theorem(ws.ctx, tn.fiber_dim, tn.mu[i0],
                                       trials=min(ws.trials, 5), seed=ws.seed + 4)
    out.append(_result("crossed.mu_cocycle", rep["mu_cocycle"], ws.tau_u))
    out.append(_result("crossed.homomorphism", rep["homomorphism"], ws.tau_pipe))
    out.append(_result("crossed.star_compatibility", rep["star_compatibility"],
                       ws.tau_pipe))
    out.append(_result("crossed.norm_preservation", rep["norm_preservation"],
                       ws.tau_pipe))
    out.append(_result("crossed.equivariance", rep["equivariance"], ws.tau_pipe))
    out.append(_exact("crossed.t_injective", rep["injective_rank_deficit"] == 0.0))
    out.append(_result("crossed.zero_to_zero", rep["zero_to_zero"], 1e-12))
    return out


def check_crossed_glue(ws: Workspace) -> list[dict]:
    rep = crossed.verify_gluing(ws.normalized(), ws.dual(),
                                trials=ws.trials, seed=ws.seed + 5)
    return [
        _result("glue.section_family", rep["section_family"], ws.tau_u),
        _result("glue.section_transition", rep["section_transition"], ws.tau_pipe,
                edges=rep["edges"]),
    ]


COMMANDS = {
    "cohomology": (check_cech,),
    "total-cohomology": (check_total,),
    "dualize": (check_dualize,),
    "involution": (check_involution,),
    "poincare": (check_poincare,),
    "crossed-point": (check_crossed_point,),
    "crossed-glue": (check_crossed_glue,),
}
COMMANDS["all"] = tuple(dict.fromkeys(
    fn for cmd in ("cohomology", "total-cohomology", "dualize", "involution",
                   "poincare", "crossed-point", "crossed-glue")
    for fn in COMMANDS[cmd]))

CHECK_DESCRIPTIONS = {
    "cohomology": [
        "twisted differential squares to zero on random cochains (exact)",
        "untwisted nerve cohomology invariant factors over Z/m",
        "twisted cohomology factors for the scenario twist",
        "the comparison map for twist changes is a chain isomorphism",
    ],
    "total-cohomology": [
        "group differential squares to zero (exact)",
        "total differential squares to zero (exact)",
        "point nerve: total cohomology equals group cohomology",
        "scenario-nerve total factors at low degree (cap permitting)",
        "the extracted triple cocycle is closed under the total differential",
    ],
    "dualize": [
        "fixture satisfies the triple laws up to scalars",
        "the vertex 2-cocycle is a group coboundary (dualisable)",
        "dual transitions satisfy the twisted cocycle law projectively",
        "dual decker law holds with the predicted scalar defect",
        "local topologicalisation unitaries glue through the dual data",
        "exterior-equivalent data yields a cohomologous scalar cocycle",
    ],
    "involution": [
        "dualising twice returns the base cocycle exactly",
        "double-dual scalar cocycle is cohomologous via an exact certificate",
    ],
    "poincare": [
        "the kappa phase class does not depend on the dual section",
        "kappa tensor dual-kappa is implemented by an explicit unitary word",
        "the two tautological-bundle transition families are a coboundary",
    ],
    "crossed-point": [
        "Haar weights give exact Fourier inversion and the Weil identity",
        "the transform is a *-isomorphism onto dual matrix functions",
        "the transform intertwines the dual action",
    ],
    "crossed-glue": [
        "chart transforms of a global section glue through the dual transitions",
    ],
}


def run_checks(ws: Workspace, command: str, only: Optional[str] = None,
               jobs: int = 1) -> list[dict]:
    fns = COMMANDS[command]

    def guarded(f: Callable) -> list[dict]:
        # a law violation inside a check is a falsifying instance: FAIL,
        # not a crash (resource-cap errors still propagate to exit 3)
        from .errors import InvalidTripleError
        group = f.__name__.removeprefix("check_").replace("_", "-")
        try:
            return f(ws)
        except InvalidTripleError as exc:
            return [_result(f"{group}.invalid_triple", 1.0, 0.0, error=str(exc))]

    results: list[dict] = []
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            for chunk in pool.map(guarded, fns):
                results.extend(chunk)
    else:
        for f in fns:
            results.extend(guarded(f))
    if only is not None:
        results = [r for r in results if r["name"] == only]
        if not results:
            raise ScenarioError(f"no check named {only!r} in command {command}")
    return sorted(results, key=lambda r: r["name"])


def build_report(ws: Workspace, command: str, results: list[dict],
                 elapsed: float) -> dict:
    return {
        "scenario": ws.scenario,
        "command": command,
        "seed": ws.seed,
        "derived": ws.derived_summary(),
        "checks": results,
        "all_passed": all(r["passed"] for r in results),
        "timings": {"total_s": round(elapsed, 3)},
    }


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def format_text(report: dict) -> str:
    lines = [f"command: {report['command']}   seed: {report['seed']}"]
    d = report["derived"]
    lines.append(
        f"group {d['group']} (order {d['group_order']}), |N|={d['N_order']}, "
        f"|G/N|={d['quotient_order']}, modulus {d['modulus']}")
    for r in report["checks"]:
        status = "PASS" if r["passed"] else "FAIL"
        lines.append(f"{status}  {r['name']}  residual={r['residual']:.3e}"
                     f"  tol={r['tolerance']:.1e}")
    lines.append("ALL PASS" if report["all_passed"] else "FAILURES PRESENT")
    return "\n".join(lines) + "\n"


def cmd_run(args) -> int:
    try:
        scenario = load_scenario(args.scenario)
    except ScenarioError as exc:
        print(f"scenario error: {exc}", file=sys.stderr)
        return 2
    try:
        ws = Workspace(scenario, seed=args.seed, tolerance_scale=args.tolerance_scale)
        start = time.perf_counter()
        results = run_checks(ws, scenario["command"], only=args.check,
                             jobs=args.jobs)
        elapsed = time.perf_counter() - start
    except ScenarioError as exc:
        print(f"scenario error: {exc}", file=sys.stderr)
        return 2
    except ResourceCapError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return 3
    report = build_report(ws, scenario["command"], results, elapsed)
    if args.format == "json":
        text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    else:
        text = format_text(report)
    if args.output:
        _atomic_write(args.output, text)
    else:
        sys.stdout.write(text)
    return 0 if report["all_passed"] else 1


def cmd_explain(args) -> int:
    try:
        scenario = load_scenario(args.scenario)
        ws = Workspace(scenario)
    except ScenarioError as exc:
        print(f"scenario error: {exc}", file=sys.stderr)
        return 2
    d = ws.derived_summary()
    print(f"command: {scenario['command']}")
    print(f"group: {d['group']} of order {d['group_order']}, exponent "
          f"{d['exponent']}, modulus {d['modulus']}")
    print(f"subgroup N: order {d['N_order']}, generators {d['N_generators']}")
    print(f"annihilator: order {d['annihilator_order']}, generators "
          f"{d['annihilator_generators']}")
    print(f"quotient G/N: order {d['quotient_order']}; dual quotient: order "
          f"{d['dual_quotient_order']}")
    print(f"nerve: {d['nerve']['vertices']} vertices, {d['nerve']['edges']} edges, "
          f"{d['nerve']['two_simplices']} two-simplices")
    if d["nerve"]["edges"] == 0:
        print("warning: the nerve has no overlaps; every positive-degree "
              "cohomology group on it is zero")
    print(f"fiber dims: primal {d['fiber_dim']}, dual {d['dual_fiber_dim']}, "
          f"double dual {d['double_dual_fiber_dim']}")
    print(f"crossed-product representation dimension: {d['crossed_rep_dim']}")
    print(f"matrix dimension cap: {d['matrix_dim_cap']} (env TDUAL_MAX_DIM)")
    cmd = scenario["command"]
    cmds = [cmd] if cmd != "all" else list(CHECK_DESCRIPTIONS)
    for c in cmds:
        print(f"checks [{c}]:")
        for line in CHECK_DESCRIPTIONS[c]:
            print(f"  - {line}")
    return 0


def main(argv: Optional[list[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="tdual",
        description="Verification engine for duality identities of finite "
                    "dynamical triples.")
    sub = parser.add_subparsers(dest="mode", required=True)

    p_run = sub.add_parser("run", help="run a scenario and emit a report")
    p_run.add_argument("scenario", help="path to a scenario JSON (or bundled name)")
    p_run.add_argument("-o", "--output", help="write the report to this path")
    p_run.add_argument("--seed", type=int, default=None,
                       help="override the scenario seed")
    p_run.add_argument("--tolerance-scale", type=float, default=1.0)
    p_run.add_argument("--jobs", type=int, default=1,
                       help="run independent check groups concurrently")
    p_run.add_argument("--format", choices=("json", "text"), default="json")
    p_run.add_argument("--check", default=None,
                       help="run only the check with this exact name")
    p_run.set_defaults(fn=cmd_run)

    p_exp = sub.add_parser("explain", help="describe a scenario without running it")
    p_exp.add_argument("scenario")
    p_exp.set_defaults(fn=cmd_explain)

    args = parser.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    raise SystemExit(main())
