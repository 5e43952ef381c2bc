"""Finite nerves, twisted Cech cochain complexes and exact cohomology.

A cochain of degree k assigns a coefficient-module element to every
(sorted) k-simplex of the nerve.  The differential is twisted by a
quotient-valued edge cocycle g:

    delta_g(phi) = delta(phi) + g*(phi),
    (g*phi)_{i0..in} = (-1)^(n-1) (phi_{i0..i(n-1)} - phi_{i0..i(n-1)} . g_{i(n-1) in})

where . is the right translation action on the module.  Cohomology is
computed exactly over Z/m via Smith normal form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import check_dim
from .lca import GroupElement, QuotientGroup
from .zmodlin import kernel_mod, module_quotient

Simplex = tuple[int, ...]


class Nerve:
    """Finite simplicial set of chart intersections, closed under faces."""

    def __init__(self, vertex_count: int, simplices: Iterable[Sequence[int]]):
        if vertex_count < 1:
            raise ValueError("a nerve needs at least one vertex")
        self.vertex_count = vertex_count
        by_dim: dict[int, set[Simplex]] = {0: {(v,) for v in range(vertex_count)}}
        pending = set()
        for s in simplices:
            t = tuple(sorted(set(int(v) for v in s)))
            if not t:
                continue
            if t[0] < 0 or t[-1] >= vertex_count:
                raise ValueError(f"simplex {t} references a vertex outside the nerve")
            pending.add(t)
        # close under taking faces
        while pending:
            t = pending.pop()
            k = len(t) - 1
            if t in by_dim.setdefault(k, set()):
                continue
            by_dim[k].add(t)
            if k > 0:
                for j in range(len(t)):
                    pending.add(t[:j] + t[j + 1:])
        self._simplices = {
            k: tuple(sorted(v)) for k, v in by_dim.items() if v
        }
        self.dimension = max(self._simplices)
        self._index = {
            k: {s: i for i, s in enumerate(v)} for k, v in self._simplices.items()
        }

    def simplices(self, k: int) -> tuple[Simplex, ...]:
        return self._simplices.get(k, ())

    def index(self, s: Simplex) -> int:
        return self._index[len(s) - 1][s]

    @property
    def vertices(self) -> tuple[Simplex, ...]:
        return self.simplices(0)

    @property
    def edges(self) -> tuple[Simplex, ...]:
        return self.simplices(1)

    @staticmethod
    def point() -> "Nerve":
        return Nerve(1, [])

    @staticmethod
    def circle() -> "Nerve":
        """Three charts on a circle: all pairwise overlaps, no triple one."""
        return Nerve(3, [[0, 1], [0, 2], [1, 2]])

    @staticmethod
    def sphere() -> "Nerve":
        """Boundary of the tetrahedron: a simplicial 2-sphere."""
        return Nerve(4, [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]])

    def __repr__(self) -> str:
        counts = {k: len(v) for k, v in self._simplices.items()}
        return f"Nerve(vertices={self.vertex_count}, simplices={counts})"


class GModule:
    """Coefficients (Z/m)^points with a translation action on the index set.

    points index the coordinates; act(x) gives the permutation p with
    (v . x)[i] = v[p[i]], i.e. p[index(z)] = index(z + x).
    """

    def __init__(self, m: int, points: Sequence, perm_of):
        self.m = int(m)
        self.points = tuple(points)
        self.size = len(self.points)
        self._perm_of = perm_of
        self._cache: dict = {}

    def act(self, x) -> np.ndarray:
        key = x
        if key not in self._cache:
            self._cache[key] = self._perm_of(x)
        return self._cache[key]

    def zero(self) -> np.ndarray:
        return np.zeros(self.size, dtype=np.int64)

    @staticmethod
    def trivial(m: int) -> "GModule":
        return GModule(m, [()], lambda x: np.zeros(1, dtype=np.int64))

    @staticmethod
    def functions_on_quotient(m: int, quotient: QuotientGroup) -> "GModule":
        """Fun(G/N, Z/m) with (v . x)(z) = v(z + x); x may lie in G or G/N."""
        reps = quotient.reps()
        index = {r: i for i, r in enumerate(reps)}

        def perm_of(x: GroupElement) -> np.ndarray:
            xr = quotient.rep(x)
            return np.array(
                [index[quotient.add(z, xr)] for z in reps], dtype=np.int64
            )

        return GModule(m, reps, perm_of)


class TwistCocycle:
    """Edge labels in G/N with g_ik = g_ij + g_jk on every 2-simplex."""

    def __init__(self, nerve: Nerve, quotient: QuotientGroup,
                 edge_values: Mapping[Simplex, GroupElement]):
        self.nerve = nerve
        self.quotient = quotient
        vals = {}
        for e in nerve.edges:
            if e not in edge_values:
                raise ValueError(f"missing twist value for edge {e}")
            vals[e] = quotient.rep(edge_values[e])
        extra = set(edge_values) - set(nerve.edges)
        if extra:
            raise ValueError(f"twist labels on non-edges: {sorted(extra)}")
        self.edge_values = vals
        for (a, b, c) in nerve.simplices(2):
            lhs = vals[(a, c)]
            rhs = quotient.add(vals[(a, b)], vals[(b, c)])
            if lhs != rhs:
                raise ValueError(
                    f"twist violates the cocycle law on ({a},{b},{c}): "
                    f"g_ac={lhs}, g_ab+g_bc={rhs}"
                )

    def value(self, i: int, j: int) -> GroupElement:
        if i == j:
            return self.quotient.zero()
        if i < j:
            return self.edge_values[(i, j)]
        return self.quotient.neg(self.edge_values[(j, i)])

    @staticmethod
    def trivial(nerve: Nerve, quotient: QuotientGroup) -> "TwistCocycle":
        z = quotient.zero()
        return TwistCocycle(nerve, quotient, {e: z for e in nerve.edges})

    @staticmethod
    def coboundary(nerve: Nerve, quotient: QuotientGroup,
                   vertex_values: Mapping[int, GroupElement]) -> "TwistCocycle":
        """g_ij = r_j - r_i; always a valid twist."""
        vals = {}
        for (i, j) in nerve.edges:
            vals[(i, j)] = quotient.sub_(vertex_values[j], vertex_values[i])
        return TwistCocycle(nerve, quotient, vals)


@dataclass
class TwistedCochain:
    """Degree-k cochain: one module element per sorted k-simplex."""

    nerve: Nerve
    module: GModule
    degree: int
    values: dict = field(default_factory=dict)

    def __post_init__(self):
        m = self.module.m
        full = {}
        for s in self.nerve.simplices(self.degree):
            v = self.values.get(s)
            full[s] = self.module.zero() if v is None else np.asarray(v, dtype=np.int64) % m
        self.values = full

    def copy(self) -> "TwistedCochain":
        return TwistedCochain(
            self.nerve, self.module, self.degree,
            {s: v.copy() for s, v in self.values.items()},
        )

    def is_zero(self) -> bool:
        return all(not v.any() for v in self.values.values())

    def __add__(self, other: "TwistedCochain") -> "TwistedCochain":
        m = self.module.m
        return TwistedCochain(
            self.nerve, self.module, self.degree,
            {s: (v + other.values[s]) % m for s, v in self.values.items()},
        )

    def __sub__(self, other: "TwistedCochain") -> "TwistedCochain":
        m = self.module.m
        return TwistedCochain(
            self.nerve, self.module, self.degree,
            {s: (v - other.values[s]) % m for s, v in self.values.items()},
        )

    def flatten(self) -> np.ndarray:
        parts = [self.values[s] for s in self.nerve.simplices(self.degree)]
        if not parts:
            return np.zeros(0, dtype=np.int64)
        return np.concatenate(parts)

    @staticmethod
    def from_flat(nerve: Nerve, module: GModule, degree: int,
                  flat: np.ndarray) -> "TwistedCochain":
        sz = module.size
        vals = {}
        for i, s in enumerate(nerve.simplices(degree)):
            vals[s] = np.asarray(flat[i * sz:(i + 1) * sz], dtype=np.int64) % module.m
        return TwistedCochain(nerve, module, degree, vals)


def delta_g(c: TwistedCochain, g: TwistCocycle) -> TwistedCochain:
    """Twisted Cech differential; returns a cochain of degree k+1."""
    nerve, module, k = c.nerve, c.module, c.degree
    m = module.m
    out = TwistedCochain(nerve, module, k + 1)
    for s in nerve.simplices(k + 1):
        acc = module.zero()
        # plain alternating sum over faces
        for j in range(len(s)):
            face = s[:j] + s[j + 1:]
            acc = (acc + (-1) ** j * c.values[face]) % m
        # twist term on the leading face, acted by the last edge label
        lead = s[:-1]
        x = g.value(s[-2], s[-1])
        shifted = c.values[lead][module.act(x)]
        acc = (acc + (-1) ** k * (c.values[lead] - shifted)) % m
        out.values[s] = acc
    return out


def delta_matrix(nerve: Nerve, module: GModule, g: TwistCocycle, k: int) -> np.ndarray:
    """Matrix of delta_g from degree k to k+1 on flattened coordinates."""
    sz = module.size
    n_src = len(nerve.simplices(k)) * sz
    n_dst = len(nerve.simplices(k + 1)) * sz
    check_dim(max(n_src, n_dst))
    A = np.zeros((n_dst, n_src), dtype=np.int64)
    for col in range(n_src):
        e = np.zeros(n_src, dtype=np.int64)
        e[col] = 1
        c = TwistedCochain.from_flat(nerve, module, k, e)
        A[:, col] = delta_g(c, g).flatten()
    return A % module.m


def cohomology(nerve: Nerve, module: GModule, g: TwistCocycle, k: int):
    """Invariant factors and representative cocycles of H^k(nerve, module, g)."""
    if k < 0:
        raise ValueError("degree must be >= 0")
    m = module.m
    n_k = len(nerve.simplices(k)) * module.size
    if n_k == 0:
        return [], []
    A = delta_matrix(nerve, module, g, k)
    gens = kernel_mod(A, m)
    if k == 0:
        rels = np.zeros((n_k, 0), dtype=np.int64)
    else:
        rels = delta_matrix(nerve, module, g, k - 1)
    factors, reps = module_quotient(gens, rels, m)
    rep_cochains = [
        TwistedCochain.from_flat(nerve, module, k, reps[:, i])
        for i in range(reps.shape[1])
    ]
    return factors, rep_cochains


def r_sharp(c: TwistedCochain, r: Mapping[int, GroupElement]) -> TwistedCochain:
    """(r# phi)_s = phi_s . r_{last vertex of s}.

    Intertwines the differentials: delta_g(r# c) = r#(delta_g' c) for
    g'_ij = r_i + g_ij - r_j (see r_conjugate_twist).
    """
    module = c.module
    out = TwistedCochain(c.nerve, module, c.degree)
    for s, v in c.values.items():
        out.values[s] = v[module.act(r[s[-1]])]
    return out


def r_conjugate_twist(g: TwistCocycle, r: Mapping[int, GroupElement]) -> TwistCocycle:
    """The twist g'_ij = r_i + g_ij - r_j matched to r_sharp."""
    q = g.quotient
    vals = {}
    for (i, j) in g.nerve.edges:
        vals[(i, j)] = q.sub_(q.add(q.rep(r[i]), g.edge_values[(i, j)]), q.rep(r[j]))
    return TwistCocycle(g.nerve, q, vals)
