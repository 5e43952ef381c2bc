import numpy as np
import pytest

from tdual.cech import Nerve
from tdual.crossed import (
    ConvolutionElement,
    CrossedContext,
    HaarWeights,
    convolve,
    fourier_roundtrip_residual,
    involute,
    mu_is_cocycle,
    operator_norm,
    represent,
    s_reindex_matrix,
    t_linearized,
    t_periodicity_residual,
    t_transform,
    trivial_mu,
    verify_gluing,
    verify_point_theorem,
)
from tdual.lca import FiniteLcaGroup, Subgroup
from tdual.linops import adjoint
from tdual.triples import (
    DualityContext,
    build_random_triple,
    dualize,
    extract_total_cocycle,
    make_dualisable,
)


def ctx_for(factors, gens):
    G = FiniteLcaGroup(factors)
    N = Subgroup(G, [G.element(g) for g in gens])
    return DualityContext(G, N)


@pytest.fixture(scope="module")
def z4ctx():
    return ctx_for([4], [[2]])


@pytest.fixture(scope="module")
def z4mu(z4ctx):
    t = make_dualisable(build_random_triple(Nerve.circle(), z4ctx, d=2, seed=5))
    return t.mu[0]


class TestWeights:
    @pytest.mark.parametrize("factors,gens",
                             [([2], []), ([4], [[2]]), ([6], [[3]]), ([2, 2], [[1, 1]])])
    def test_fourier_inversion_and_weil(self, factors, gens):
        assert fourier_roundtrip_residual(ctx_for(factors, gens), seed=3) < 1e-12

    def test_values(self, z4ctx):
        w = HaarWeights.for_context(z4ctx)
        assert float(w.w_G) == 0.5 and float(w.w_quot) == 0.5
        assert float(w.w_N) == 1.0 and float(w.w_dual) == 0.5


class TestConvolutionAlgebra:
    def test_unit(self, z4ctx):
        cc = CrossedContext(z4ctx, 2)
        rng = np.random.default_rng(0)
        f = ConvolutionElement.random(cc, rng)
        e = ConvolutionElement.unit(cc)
        mu = trivial_mu(cc)
        assert (convolve(e, f, mu) - f).norm_inf() < 1e-12
        assert (convolve(f, e, mu) - f).norm_inf() < 1e-12
        assert abs(operator_norm(e, mu) - 1.0) < 1e-12

    def test_zero_norm(self, z4ctx):
        cc = CrossedContext(z4ctx, 2)
        assert operator_norm(ConvolutionElement.zero(cc), trivial_mu(cc)) == 0.0

    def test_associativity_and_representation(self, z4ctx, z4mu):
        cc = CrossedContext(z4ctx, 2)
        rng = np.random.default_rng(1)
        f1, f2, f3 = (ConvolutionElement.random(cc, rng) for _ in range(3))
        lhs = convolve(convolve(f1, f2, z4mu), f3, z4mu)
        rhs = convolve(f1, convolve(f2, f3, z4mu), z4mu)
        assert (lhs - rhs).norm_inf() < 1e-9
        P = represent(convolve(f1, f2, z4mu), z4mu) \
            - represent(f1, z4mu) @ represent(f2, z4mu)
        assert np.max(np.abs(P)) < 1e-9

    def test_supported_at_zero_multiplies_pointwise(self, z4ctx, z4mu):
        cc = CrossedContext(z4ctx, 2)
        rng = np.random.default_rng(2)
        i0 = cc.gi[z4ctx.G.zero()]
        a = ConvolutionElement.zero(cc)
        b = ConvolutionElement.zero(cc)
        a.values[i0] = rng.normal(size=(cc.q, 2, 2))
        b.values[i0] = rng.normal(size=(cc.q, 2, 2))
        prod = convolve(a, b, z4mu)
        wG = float(cc.weights.w_G)
        for iz in range(cc.q):
            want = wG * a.values[i0, iz] @ b.values[i0, iz]
            assert np.max(np.abs(prod.values[i0, iz] - want)) < 1e-12
        mask = np.ones(cc.n, dtype=bool)
        mask[i0] = False
        assert np.max(np.abs(prod.values[mask])) < 1e-12

    def test_involution_laws(self, z4ctx, z4mu):
        cc = CrossedContext(z4ctx, 2)
        rng = np.random.default_rng(3)
        f1, f2 = (ConvolutionElement.random(cc, rng) for _ in range(2))
        assert (involute(involute(f1, z4mu), z4mu) - f1).norm_inf() < 1e-12
        anti = involute(convolve(f1, f2, z4mu), z4mu) \
            - convolve(involute(f2, z4mu), involute(f1, z4mu), z4mu)
        assert anti.norm_inf() < 1e-9
        r = np.max(np.abs(represent(involute(f1, z4mu), z4mu)
                          - adjoint(represent(f1, z4mu))))
        assert r < 1e-9

    def test_selfadjoint_pointmass_fixed(self, z4ctx):
        cc = CrossedContext(z4ctx, 2)
        H = np.array([[1.0, 1j], [-1j, 2.0]])
        f = ConvolutionElement.zero(cc)
        i0 = cc.gi[z4ctx.G.zero()]
        for iz in range(cc.q):
            f.values[i0, iz] = H
        assert (involute(f, trivial_mu(cc)) - f).norm_inf() < 1e-12

    def test_cstar_identity(self, z4ctx, z4mu):
        cc = CrossedContext(z4ctx, 2)
        rng = np.random.default_rng(4)
        f = ConvolutionElement.random(cc, rng)
        lhs = operator_norm(convolve(involute(f, z4mu), f, z4mu), z4mu)
        rhs = operator_norm(f, z4mu) ** 2
        assert abs(lhs - rhs) < 1e-9


class TestTransform:
    def test_unit_maps_to_identity(self, z4ctx):
        # forced by multiplicativity plus the unit law
        cc = CrossedContext(z4ctx, 1)
        T = t_transform(ConvolutionElement.unit(cc), trivial_mu(cc))
        for M in T.values():
            assert np.max(np.abs(M - np.eye(M.shape[0]))) < 1e-10

    def test_linearity(self, z4ctx, z4mu):
        cc = CrossedContext(z4ctx, 2)
        rng = np.random.default_rng(5)
        f1, f2 = (ConvolutionElement.random(cc, rng) for _ in range(2))
        a, b = 1.3 - 0.2j, -0.7j
        T = t_transform(f1.scaled(a) + f2.scaled(b), z4mu)
        T1 = t_transform(f1, z4mu)
        T2 = t_transform(f2, z4mu)
        for zhat in T:
            assert np.max(np.abs(T[zhat] - a * T1[zhat] - b * T2[zhat])) < 1e-10

    def test_z2_minimal_instance_bijective(self):
        # G = Z/2, N = 0: source dimension 4, target M_2 over a point
        ctx = ctx_for([2], [])
        cc = CrossedContext(ctx, 1)
        assert len(ctx.dual_quotient.reps()) == 1
        A = t_linearized(cc, trivial_mu(cc))
        assert A.shape == (4, 4)
        sv = np.linalg.svd(A, compute_uv=False)
        assert sv[-1] > 1e-12

    @pytest.mark.parametrize("factors,gens,d", [([4], [[2]], 2), ([8], [[2]], 2),
                                                ([6], [[3]], 2)])
    def test_injective_on_spanning_set(self, factors, gens, d):
        # representation dimension |G| |G/N| d stays within the stated bound
        ctx = ctx_for(factors, gens)
        assert ctx.G.order * ctx.quotient.order * d <= 96
        t = make_dualisable(build_random_triple(Nerve.point(), ctx, d=d, seed=21))
        cc = CrossedContext(ctx, d)
        A = t_linearized(cc, t.mu[0])
        src = cc.n * cc.q * d * d
        sv = np.linalg.svd(A, compute_uv=False)
        assert int(np.sum(sv > 1e-9 * sv[0])) == src

    def test_lift_independence_is_automatic(self, z4ctx):
        # conjugating the kernel by Lambda cancels the index shift under
        # N-perp translations of the lift for ANY mu table, so the output
        # is well defined on the dual quotient even for non-cocycles; the
        # cocycle law itself is what detects bad mu (see mu_is_cocycle)
        cc = CrossedContext(z4ctx, 1)
        rng = np.random.default_rng(6)
        bad = {}
        for g in cc.elems:
            for z in cc.reps:
                ph = np.exp(2j * np.pi * rng.random())
                bad[(g, z)] = np.array([[ph]])
        bad[(z4ctx.G.zero(), cc.reps[0])] = np.array([[1.0 + 0j]])
        assert mu_is_cocycle(cc, bad) > 1e-6
        f = ConvolutionElement.random(cc, rng)
        assert t_periodicity_residual(f, bad) < 1e-9
        t_transform(f, bad)   # must not raise: output is lift independent

    def test_periodicity_holds_for_cocycles(self, z4ctx, z4mu):
        cc = CrossedContext(z4ctx, 2)
        rng = np.random.default_rng(7)
        f = ConvolutionElement.random(cc, rng)
        assert t_periodicity_residual(f, z4mu) < 1e-9


class TestLambda:
    def test_extension_property(self, z4ctx):
        # Lambda restricted to N-perp is the regular representation
        cc = CrossedContext(z4ctx, 1)
        ctx = z4ctx
        for beta in ctx.Nperp.elements():
            L = cc.lam(beta)
            P = np.zeros((cc.q, cc.q), complex)
            for j, b in enumerate(cc.nperp):
                P[cc.bi[ctx.Gd.add(b, beta)], j] = 1.0
            assert np.max(np.abs(L - P)) < 1e-12

    def test_homomorphism_and_unitary(self, z4ctx):
        cc = CrossedContext(z4ctx, 1)
        ctx = z4ctx
        for chi1 in ctx.Gd.elements():
            L1 = cc.lam(chi1)
            assert np.max(np.abs(adjoint(L1) @ L1 - np.eye(cc.q))) < 1e-12
            for chi2 in ctx.Gd.elements():
                L12 = cc.lam(ctx.Gd.add(chi1, chi2))
                assert np.max(np.abs(L12 - L1 @ cc.lam(chi2))) < 1e-12

    def test_matches_dual_decker_diagonal(self, z4ctx):
        # Lambda is the DFT transport of the dual-decker phase for the
        # same shared section
        from tdual.triples import dual_decker
        cc = CrossedContext(z4ctx, 1)
        tab = dual_decker(z4ctx, (1,))
        zhat0 = z4ctx.dual_quotient.zero()
        for chi in z4ctx.Gd.elements():
            D = tab[(chi, zhat0)]
            want = cc.dft() @ D @ cc.dft_inv()
            assert np.max(np.abs(cc.lam(chi) - want)) < 1e-12


class TestPointTheorem:
    def test_minimal_z2(self):
        ctx = ctx_for([2], [])
        rep = verify_point_theorem(ctx, 1, trivial_mu(CrossedContext(ctx, 1)),
                                   trials=4, seed=0)
        assert all(v < 1e-8 for v in rep.values()), rep

    def test_z6_fixture_mu(self):
        ctx = ctx_for([6], [[3]])
        t = make_dualisable(build_random_triple(Nerve.circle(), ctx, d=2, seed=42))
        rep = verify_point_theorem(ctx, 2, t.mu[0], trials=3, seed=1)
        assert all(v < 1e-8 for v in rep.values()), rep


class TestGluing:
    def test_circle_z6(self):
        ctx = ctx_for([6], [[3]])
        t = make_dualisable(build_random_triple(Nerve.circle(), ctx, d=2, seed=42))
        th = dualize(t, extract_total_cocycle(t))
        rep = verify_gluing(t, th, trials=10, seed=2)
        assert rep["section_family"] < 1e-9
        assert rep["section_transition"] < 1e-8
        assert rep["edges"] == 3

    def test_trivial_triple(self):
        from tdual.triples import trivial_triple
        ctx = ctx_for([4], [[2]])
        t = trivial_triple(Nerve.circle(), ctx, 1)
        th = dualize(t, extract_total_cocycle(t))
        rep = verify_gluing(t, th, trials=2, seed=3)
        assert rep["section_transition"] < 1e-10

    def test_single_vertex_reduces_to_point(self):
        ctx = ctx_for([4], [[2]])
        t = make_dualisable(build_random_triple(Nerve.point(), ctx, d=2, seed=9))
        th = dualize(t, extract_total_cocycle(t))
        rep = verify_gluing(t, th, trials=2, seed=4)
        assert rep["edges"] == 0 and rep["section_transition"] == 0.0
        prep = verify_point_theorem(ctx, 2, t.mu[0], trials=2, seed=5)
        assert all(v < 1e-8 for v in prep.values())


def test_s_matrix_intertwines_translations(z4ctx):
    ctx = z4ctx
    G, q = ctx.G, ctx.quotient
    S = s_reindex_matrix(ctx)
    nn = ctx.N.elements()
    reps = q.reps()
    ni = {x: i for i, x in enumerate(nn)}
    zi = {z: i for i, z in enumerate(reps)}
    dim = len(nn) * len(reps)
    for g in G.elements():
        lamG = np.zeros((G.order, G.order), complex)
        for i, x in enumerate(G.elements()):
            lamG[G.index(G.add(x, g)), i] = 1.0
        M = np.linalg.inv(S) @ lamG @ S
        E = np.zeros((dim, dim), complex)
        for inn, n in enumerate(nn):
            for iz, z in enumerate(reps):
                n0 = G.sub(G.add(g, ctx.sigma(z)), ctx.sigma(q.add(z, q.rep(g))))
                E[ni[G.add(n, n0)] * len(reps) + zi[q.add(z, q.rep(g))],
                  inn * len(reps) + iz] = 1.0
        assert np.max(np.abs(M - E)) < 1e-12


def test_element_serialization_roundtrip(z4ctx):
    import json
    from tdual.serialize import element_from_json, element_to_json
    cc = CrossedContext(z4ctx, 2)
    rng = np.random.default_rng(8)
    f = ConvolutionElement.random(cc, rng)
    blob = json.dumps(element_to_json(f))
    f2 = element_from_json(json.loads(blob))
    assert (f - f2).norm_inf() < 1e-12
