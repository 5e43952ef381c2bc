"""JSON round-trips for triple fixtures, scalar cocycles and algebra elements.

Matrices are stored row-major as [re, im] pairs; exact phases as "k/m"
fraction strings; group elements as coordinate lists.
"""

from __future__ import annotations

from fractions import Fraction
import numpy as np

from .cech import Nerve, TwistCocycle
from .crossed import ConvolutionElement, CrossedContext, DualSection
from .groupcoh import GroupCochain, TotalCochain
from .lca import FiniteLcaGroup, GroupElement, Subgroup
from .triples import DualityContext, TotalTwoCocycle, TripleLocalData


def matrix_to_json(M: np.ndarray) -> list:
    return [[[float(x.real), float(x.imag)] for x in row] for row in np.asarray(M)]


def matrix_from_json(rows: list) -> np.ndarray:
    return np.array([[complex(a, b) for (a, b) in row] for row in rows])


def _elem_key(e: GroupElement) -> str:
    return ",".join(str(c) for c in e.coords)


def _elem_from_key(G: FiniteLcaGroup, key: str) -> GroupElement:
    return G.element(int(c) for c in key.split(","))


def context_to_json(ctx: DualityContext) -> dict:
    return {
        "factors": list(ctx.G.factors),
        "N": [list(g.coords) for g in ctx.N.generators],
        "modulus": ctx.m,
    }


def context_from_json(data: dict) -> DualityContext:
    G = FiniteLcaGroup(data["factors"])
    N = Subgroup(G, [G.element(c) for c in data["N"]])
    return DualityContext(G, N, m=data.get("modulus"))


def triple_to_json(t: TripleLocalData) -> dict:
    nerve_simplices = [list(s) for k in range(t.nerve.dimension + 1)
                       for s in t.nerve.simplices(k)]
    return {
        "context": context_to_json(t.ctx),
        "nerve": {"vertices": t.nerve.vertex_count, "simplices": nerve_simplices},
        "legs": list(t.legs),
        "twist": {f"{e[0]},{e[1]}": list(v.coords)
                  for e, v in t.g.edge_values.items()},
        "zeta": {
            f"{e[0]},{e[1]}": {_elem_key(z): matrix_to_json(U)
                               for z, U in tab.items()}
            for e, tab in t.zeta.items()
        },
        "mu": {
            str(i): {f"{_elem_key(g)}|{_elem_key(z)}": matrix_to_json(U)
                     for (g, z), U in tab.items()}
            for i, tab in t.mu.items()
        },
    }


def triple_from_json(data: dict) -> TripleLocalData:
    ctx = context_from_json(data["context"])
    nerve = Nerve(data["nerve"]["vertices"], data["nerve"]["simplices"])
    G, q = ctx.G, ctx.quotient
    twist_vals = {}
    for key, coords in data["twist"].items():
        a, b = (int(x) for x in key.split(","))
        twist_vals[(a, b)] = q.rep(G.element(coords))
    g = TwistCocycle(nerve, q, twist_vals)
    zeta = {}
    for key, tab in data["zeta"].items():
        a, b = (int(x) for x in key.split(","))
        zeta[(a, b)] = {q.rep(_elem_from_key(G, zk)): matrix_from_json(M)
                        for zk, M in tab.items()}
    mu = {}
    for ik, tab in data["mu"].items():
        entries = {}
        for key, M in tab.items():
            gk, zk = key.split("|")
            entries[(_elem_from_key(G, gk), q.rep(_elem_from_key(G, zk)))] = \
                matrix_from_json(M)
        mu[int(ik)] = entries
    return TripleLocalData(nerve, ctx, tuple(data["legs"]), g, zeta, mu)


def cocycle_to_json(c: TotalTwoCocycle) -> dict:
    m = c.ctx.m

    def frac(k: int) -> str:
        f = Fraction(int(k), m)
        return f"{f.numerator % f.denominator}/{f.denominator}"

    return {
        "modulus": m,
        "psi": {",".join(map(str, s)): [frac(k) for k in v]
                for s, v in c.psi.items()},
        "phi": {f"{e[0]},{e[1]}": [[frac(k) for k in row] for row in v]
                for e, v in c.phi.items()},
        "omega": {str(i): np.vectorize(frac)(v).tolist()
                  for i, v in c.omega.items()},
    }


def element_to_json(f: ConvolutionElement) -> dict:
    cc = f.cc
    return {
        "context": context_to_json(cc.ctx),
        "fiber_dim": cc.d,
        "values": {
            f"{_elem_key(g)}|{_elem_key(z)}": matrix_to_json(f.values[ig, iz])
            for ig, g in enumerate(cc.elems)
            for iz, z in enumerate(cc.reps)
        },
    }


def element_from_json(data: dict) -> ConvolutionElement:
    ctx = context_from_json(data["context"])
    cc = CrossedContext(ctx, data["fiber_dim"])
    vals = np.zeros((cc.n, cc.q, cc.d, cc.d), complex)
    for key, M in data["values"].items():
        gk, zk = key.split("|")
        g = _elem_from_key(ctx.G, gk)
        z = ctx.quotient.rep(_elem_from_key(ctx.G, zk))
        vals[cc.gi[g], cc.zi[z]] = matrix_from_json(M)
    return ConvolutionElement(cc, vals)


def _frac(k: int, m: int) -> str:
    f = Fraction(int(k) % m, m)
    return f"{f.numerator}/{f.denominator}"


def group_cochain_to_json(c: GroupCochain) -> dict:
    """Nested arrays of fraction strings, innermost axis the fiber slot."""
    m = c.space.m
    return {
        "factors": list(c.space.G.factors),
        "modulus": m,
        "arity": c.space.arity,
        "values": np.vectorize(lambda k: _frac(k, m))(c.values).tolist(),
    }


def total_cochain_to_json(t: TotalCochain) -> dict:
    """Certificate chains: per bidegree, per simplex, fraction strings."""
    m = t.m
    out = {"degree": t.degree, "modulus": m, "blocks": {}}
    for (k, l), blk in sorted(t.blocks.items()):
        entries = {}
        for s, v in blk.values.items():
            entries[",".join(map(str, s))] = [_frac(int(x), m) for x in v]
        out["blocks"][f"{k},{l}"] = entries
    return out


def dual_section_to_json(T: DualSection) -> dict:
    return {_elem_key(zhat): matrix_to_json(M) for zhat, M in T.items()}
