"""Group cohomology of finite G and the mixed Cech/group double complex.

Group cochains of arity l are dense tables G^l -> M.  The differential is

    d f(g_1,...,g_{l+1}) = (-1)^(l+1) f(g_1,...,g_l)
                          + sum_i (-1)^i f(g_1,..,g_i+g_{i+1},..,g_{l+1})
                          + g_1 . f(g_2,...,g_{l+1})

with the translation action of g_1 on M.  The total complex couples this
to the twisted Cech differential with sign:  d_tot = delta_g - (-1)^p d*.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .cech import GModule, Nerve, TwistCocycle, TwistedCochain, delta_g
from .errors import check_dim
from .lca import FiniteLcaGroup, GroupElement, QuotientGroup
from .zmodlin import kernel_mod, module_quotient

MAX_ARITY = 4          # dense tables G^l -> M exist up to this arity
MAX_TOTAL_ARITY = 3    # total-complex blocks keep l <= 3


class GroupCochainSpace:
    """Tables G^l -> Fun(G/N, Z/m), flattened to (Z/m)^(|G|^l * q).

    With quotient None the coefficients are plain Z/m with trivial action.
    The same object doubles as a Cech coefficient module (GModule protocol):
    translations act on the G/N slot only.
    """

    def __init__(self, G: FiniteLcaGroup, quotient: Optional[QuotientGroup],
                 m: int, arity: int):
        if arity < 0 or arity > MAX_ARITY:
            raise ValueError(f"arity {arity} outside supported range 0..{MAX_ARITY}")
        self.G = G
        self.quotient = quotient
        self.m = int(m)
        self.arity = arity
        self.n = G.order
        self.q = quotient.order if quotient is not None else 1
        self.size = self.n ** arity * self.q
        self._gmodule: Optional[GModule] = None

    def zero(self) -> np.ndarray:
        return np.zeros(self.size, dtype=np.int64)

    def shape(self) -> tuple[int, ...]:
        return (self.n,) * self.arity + (self.q,)

    # GModule protocol: quotient translations act on the last (z) slot
    def act(self, x: GroupElement) -> np.ndarray:
        return self.as_gmodule().act(x)

    def as_gmodule(self) -> GModule:
        if self._gmodule is None:
            if self.quotient is None:
                self._gmodule = GModule(
                    self.m, range(self.size),
                    lambda x: np.arange(self.size, dtype=np.int64),
                )
            else:
                base = GModule.functions_on_quotient(self.m, self.quotient)
                size, q, n, arity = self.size, self.q, self.n, self.arity

                def perm_of(x: GroupElement) -> np.ndarray:
                    p = base.act(x)
                    blocks = size // q
                    return (np.repeat(np.arange(blocks, dtype=np.int64) * q, q)
                            + np.tile(p, blocks))

                self._gmodule = GModule(self.m, range(size), perm_of)
        return self._gmodule

    def zidx(self, z: GroupElement) -> int:
        if self.quotient is None:
            return 0
        return self.quotient.index(z)

    def shift_z_perm(self, g: GroupElement) -> np.ndarray:
        """Permutation of the z slot by translation with g (an element of G)."""
        if self.quotient is None:
            return np.arange(1, dtype=np.int64)
        quot = self.quotient
        reps = quot.reps()
        idx = {r: i for i, r in enumerate(reps)}
        gr = quot.rep(g)
        return np.array([idx[quot.add(z, gr)] for z in reps], dtype=np.int64)


@dataclass
class GroupCochain:
    """Arity-l cochain as a dense table, values flattened per z slot."""

    space: GroupCochainSpace
    values: np.ndarray  # shape (n,)*arity + (q,)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.int64) % self.space.m
        if self.values.shape != self.space.shape():
            raise ValueError(
                f"table shape {self.values.shape} != expected {self.space.shape()}"
            )

    @staticmethod
    def zero(space: GroupCochainSpace) -> "GroupCochain":
        return GroupCochain(space, np.zeros(space.shape(), dtype=np.int64))

    def flatten(self) -> np.ndarray:
        return self.values.reshape(-1)

    def is_zero(self) -> bool:
        return not self.values.any()

    def __add__(self, o: "GroupCochain") -> "GroupCochain":
        return GroupCochain(self.space, (self.values + o.values) % self.space.m)

    def __sub__(self, o: "GroupCochain") -> "GroupCochain":
        return GroupCochain(self.space, (self.values - o.values) % self.space.m)


def d_group(f: GroupCochain) -> GroupCochain:
    """Group-cohomology differential, arity l -> l+1."""
    sp = f.space
    G, m, l = sp.G, sp.m, sp.arity
    out_sp = GroupCochainSpace(G, sp.quotient, m, l + 1)
    elems = G.elements()
    n = len(elems)
    idx = {e: i for i, e in enumerate(elems)}
    add = np.zeros((n, n), dtype=np.int64)
    for i, a in enumerate(elems):
        for j, b in enumerate(elems):
            add[i, j] = idx[G.add(a, b)]
    out = np.zeros(out_sp.shape(), dtype=np.int64)
    sign_last = (-1) ** (l + 1)
    for tup in itertools.product(range(n), repeat=l + 1):
        acc = (sign_last * f.values[tup[:-1]]) % m
        for i in range(1, l + 1):
            merged = tup[:i - 1] + (int(add[tup[i - 1], tup[i]]),) + tup[i + 1:]
            acc = (acc + (-1) ** i * f.values[merged]) % m
        if sp.quotient is not None:
            shifted = f.values[tup[1:]][sp.shift_z_perm(elems[tup[0]])]
        else:
            shifted = f.values[tup[1:]]
        acc = (acc + shifted) % m
        out[tup] = acc
    return GroupCochain(out_sp, out)


def d_group_matrix(space: GroupCochainSpace) -> np.ndarray:
    """Matrix of d_group from arity l to l+1 on flattened coordinates."""
    out_sp = GroupCochainSpace(space.G, space.quotient, space.m, space.arity + 1)
    check_dim(max(space.size, out_sp.size))
    A = np.zeros((out_sp.size, space.size), dtype=np.int64)
    for col in range(space.size):
        e = np.zeros(space.size, dtype=np.int64)
        e[col] = 1
        c = GroupCochain(space, e.reshape(space.shape()))
        A[:, col] = d_group(c).flatten()
    return A % space.m


def group_cohomology(G: FiniteLcaGroup, quotient: Optional[QuotientGroup],
                     m: int, k: int):
    """Invariant factors and representatives of H^k(G, M) for the table module."""
    if k < 0:
        raise ValueError("degree must be >= 0")
    sp = GroupCochainSpace(G, quotient, m, k)
    A = d_group_matrix(sp)
    gens = kernel_mod(A, m)
    if k == 0:
        rels = np.zeros((sp.size, 0), dtype=np.int64)
    else:
        below = GroupCochainSpace(G, quotient, m, k - 1)
        rels = d_group_matrix(below)
    factors, reps = module_quotient(gens, rels, m)
    rep_cochains = [GroupCochain(sp, reps[:, i].reshape(sp.shape()))
                    for i in range(reps.shape[1])]
    return factors, rep_cochains


@dataclass
class TotalCochain:
    """Degree-p element of the mixed complex: one block per bidegree (k, l).

    Block (k, l) is a twisted Cech k-cochain valued in arity-l group
    cochains, stored as a TwistedCochain over the matching tensor module.
    """

    nerve: Nerve
    G: FiniteLcaGroup
    quotient: QuotientGroup
    m: int
    degree: int
    blocks: dict = field(default_factory=dict)  # (k, l) -> TwistedCochain

    def __post_init__(self):
        full = {}
        for k in range(self.degree + 1):
            l = self.degree - k
            if l > MAX_TOTAL_ARITY:
                continue
            blk = self.blocks.get((k, l))
            if blk is None:
                sp = self.space(l)
                blk = TwistedCochain(self.nerve, sp.as_gmodule(), k)
            full[(k, l)] = blk
        self.blocks = full

    def space(self, l: int) -> GroupCochainSpace:
        return GroupCochainSpace(self.G, self.quotient, self.m, l)

    def bidegrees(self) -> list[tuple[int, int]]:
        return sorted(self.blocks.keys(), key=lambda kl: -kl[0])

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.blocks.values())

    def flatten(self) -> np.ndarray:
        parts = [self.blocks[kl].flatten() for kl in self.bidegrees()]
        return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)

    def __sub__(self, other: "TotalCochain") -> "TotalCochain":
        out = TotalCochain(self.nerve, self.G, self.quotient, self.m, self.degree)
        for kl, blk in self.blocks.items():
            out.blocks[kl] = blk - other.blocks[kl]
        return out

    @staticmethod
    def from_flat(nerve, G, quotient, m, degree, flat: np.ndarray) -> "TotalCochain":
        t = TotalCochain(nerve, G, quotient, m, degree)
        off = 0
        for kl in t.bidegrees():
            blk = t.blocks[kl]
            n = len(nerve.simplices(kl[0])) * t.space(kl[1]).size
            t.blocks[kl] = TwistedCochain.from_flat(
                nerve, blk.module, kl[0], flat[off:off + n]
            )
            off += n
        return t


def total_dimension(nerve: Nerve, G: FiniteLcaGroup, quotient: QuotientGroup,
                    m: int, p: int) -> int:
    dim = 0
    for k in range(p + 1):
        l = p - k
        if l > MAX_TOTAL_ARITY:
            continue
        dim += len(nerve.simplices(k)) * (G.order ** l) * quotient.order
    return dim


def total_differential(t: TotalCochain, g: TwistCocycle) -> TotalCochain:
    """d_tot = delta_g - (-1)^p d*, collected by bidegree in degree p+1."""
    p = t.degree
    out = TotalCochain(t.nerve, t.G, t.quotient, t.m, p + 1)
    sign = -((-1) ** p)
    for (k, l), blk in t.blocks.items():
        # Cech direction
        up = delta_g(blk, g)
        if (k + 1, l) in out.blocks:
            out.blocks[(k + 1, l)] = out.blocks[(k + 1, l)] + up
        # group direction, simplex-wise
        if l + 1 <= MAX_TOTAL_ARITY and (k, l + 1) in out.blocks:
            sp = t.space(l)
            target = out.blocks[(k, l + 1)]
            for s, v in blk.values.items():
                c = GroupCochain(sp, v.reshape(sp.shape()))
                dv = (sign * d_group(c).flatten()) % t.m
                target.values[s] = (target.values[s] + dv) % t.m
    return out


def total_matrix(nerve: Nerve, G: FiniteLcaGroup, quotient: QuotientGroup,
                 m: int, g: TwistCocycle, p: int) -> np.ndarray:
    """Matrix of the total differential from degree p to p+1."""
    n_src = total_dimension(nerve, G, quotient, m, p)
    n_dst = total_dimension(nerve, G, quotient, m, p + 1)
    check_dim(max(n_src, n_dst))
    A = np.zeros((n_dst, n_src), dtype=np.int64)
    for col in range(n_src):
        e = np.zeros(n_src, dtype=np.int64)
        e[col] = 1
        t = TotalCochain.from_flat(nerve, G, quotient, m, p, e)
        A[:, col] = total_differential(t, g).flatten()
    return A % m


def total_cohomology(nerve: Nerve, G: FiniteLcaGroup, quotient: QuotientGroup,
                     m: int, g: TwistCocycle, p: int):
    """Invariant factors and representatives of the total cohomology at p."""
    if p < 0:
        raise ValueError("degree must be >= 0")
    n_p = total_dimension(nerve, G, quotient, m, p)
    if n_p == 0:
        return [], []
    A = total_matrix(nerve, G, quotient, m, g, p)
    gens = kernel_mod(A, m)
    if p == 0:
        rels = np.zeros((n_p, 0), dtype=np.int64)
    else:
        rels = total_matrix(nerve, G, quotient, m, g, p - 1)
    factors, reps = module_quotient(gens, rels, m)
    rep_cochains = [
        TotalCochain.from_flat(nerve, G, quotient, m, p, reps[:, i])
        for i in range(reps.shape[1])
    ]
    return factors, rep_cochains


def solve_total_coboundary(nerve: Nerve, G: FiniteLcaGroup,
                           quotient: QuotientGroup, m: int, g: TwistCocycle,
                           target: TotalCochain) -> Optional[TotalCochain]:
    """A degree-(p-1) cochain with d_tot(x) = target, or None.

    This is the certificate solver: target is exhibited as a coboundary,
    so two cocycles differing by target are cohomologous.
    """
    p = target.degree
    if p == 0:
        return None if not target.is_zero() else None
    A = total_matrix(nerve, G, quotient, m, g, p - 1)
    from .zmodlin import solve_mod
    x = solve_mod(A, target.flatten(), m)
    if x is None:
        return None
    return TotalCochain.from_flat(nerve, G, quotient, m, p - 1, x)
