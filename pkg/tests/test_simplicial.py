import itertools
import random

import conftest as H
from milnor import (
    build_DX,
    cohomology,
    functor_F_of_C,
    functor_G,
    functor_H,
    functor_I,
    homology,
    longexact_check,
    simplicial_isomorphic,
    standard_semisimplex,
    sub_complex_DE,
)
from milnor.simplicial import delta_map, sigma_map, standard_simplex


def test_node_cells(node_model):
    dx = build_DX(node_model)
    assert dx.cell_counts() == [2, 1]


def test_cell_count_identity(i2_model, i3_model):
    for model in (i2_model, i3_model):
        dx = build_DX(model)
        for n, count in enumerate(dx.cell_counts()):
            expected = sum(
                len(model.strata_with_psi(J))
                for J in itertools.combinations(model.components, n + 1)
            )
            assert count == expected


def test_degeneracy_flags(node_model):
    dx = build_DX(node_model)
    # degenerate 1-simplices: constant surjections onto a vertex stratum
    assert not dx.is_nondegenerate(1, ("sA", ("A", "A")))
    assert dx.is_nondegenerate(1, ("sAB", ("A", "B")))
    # the generic criterion: sigma is degenerate iff it factors through s_i
    for s in dx.n_simplices(1):
        factors = any(
            s == dx.act(sigma_map(0, 0), 0, t) for t in dx.n_simplices(0)
        )
        assert factors == (not dx.is_nondegenerate(1, s))


def test_simplicial_identities(i3_model):
    dx = build_DX(i3_model)
    # d_i d_j = d_{j-1} d_i for i < j, checked on all 2-simplices
    for s in dx.n_simplices(2):
        for i in range(2):
            for j in range(i + 1, 3):
                one = dx.act(delta_map(1, i), 1, dx.act(delta_map(2, j), 2, s))
                two = dx.act(delta_map(1, j - 1), 1, dx.act(delta_map(2, i), 2, s))
                assert one == two
    # action through composition agrees with composing actions
    for s in dx.n_simplices(2):
        alpha = (0, 2)
        beta = (1,)
        composed = tuple(alpha[b] for b in beta)
        one = dx.act(beta, 1, dx.act(alpha, 2, s))
        two = dx.act(composed, 2, s)
        assert one == two


def test_homology_node_and_i2(node_model, i2_model):
    assert [(g.rank, g.torsion) for g in homology(build_DX(node_model))] == [
        (1, ()),
        (0, ()),
    ]
    assert [(g.rank, g.torsion) for g in homology(build_DX(i2_model))] == [
        (1, ()),
        (1, ()),
    ]
    assert [(g.rank, g.torsion) for g in cohomology(build_DX(i2_model))] == [
        (1, ()),
        (1, ()),
    ]


def test_sub_complex(node_model):
    sub = sub_complex_DE(node_model, ["A"])
    assert sub.delta_E.cell_counts() == [1]
    assert set(sub.delta_E_cells) == {"sA", "sAB"}
    for s in sub.delta_E.n_simplices(0):
        assert sub.include(0, s) in sub.ambient.n_simplices(0)


def test_functor_H_counts():
    # |H(standard semisimplicial 1-simplex)([2])|: p=0 gives 1*2, p=1 gives 3*2
    s = standard_semisimplex(1)
    h = functor_H(s)
    assert len(h.n_simplices(2)) == 8
    assert len(h.nondegenerate(1)) == len(s.n_simplices(1))


def test_functor_H_left_adjoint_counts():
    # |sSet(H(S), T)| = |ssSet(S, G(T))| on small instances
    rng = random.Random(3)
    model = H.model_from_complex([["A", "B"]])
    S = standard_semisimplex(1)
    T = build_DX(model)
    HS = functor_H(S, top_dim=T.top_dim)
    GT = functor_G(T)

    def semisimplicial_maps(A, B, top):
        """All levelwise maps commuting with the injective-map action."""
        levels = [A.n_simplices(n) for n in range(top + 1)]
        choices = [list(itertools.product(B.n_simplices(n), repeat=len(levels[n]))) for n in range(top + 1)]
        out = 0
        for combo in itertools.product(*choices):
            assign = {}
            for n in range(top + 1):
                for s, t in zip(levels[n], combo[n]):
                    assign[(n, s)] = t
            ok = True
            for n in range(1, top + 1):
                for s in levels[n]:
                    for i in range(n + 1):
                        lhs = assign[(n - 1, A.act(delta_map(n, i), n, s))]
                        rhs = B.act(delta_map(n, i), n, assign[(n, s)])
                        if lhs != rhs:
                            ok = False
                            break
                    if not ok:
                        break
                if not ok:
                    break
            out += ok
        return out

    def simplicial_maps(A, B, top):
        """Maps of simplicial sets are determined on nondegenerate simplices;
        count levelwise maps commuting with faces and degeneracies by brute
        force over all levelwise assignments on low dimensions."""
        levels = [A.n_simplices(n) for n in range(top + 1)]
        choices = [list(itertools.product(B.n_simplices(n), repeat=len(levels[n]))) for n in range(top + 1)]
        out = 0
        for combo in itertools.product(*choices):
            assign = {}
            for n in range(top + 1):
                for s, t in zip(levels[n], combo[n]):
                    assign[(n, s)] = t
            ok = True
            maps = [delta_map, sigma_map]
            for n in range(top + 1):
                for s in levels[n]:
                    for i in range(n + 1):
                        if n >= 1:
                            lhs = assign[(n - 1, A.act(delta_map(n, i), n, s))]
                            rhs = B.act(delta_map(n, i), n, assign[(n, s)])
                            if lhs != rhs:
                                ok = False
                        if n + 1 <= top and i <= n:
                            lhs = assign[(n + 1, A.act(sigma_map(n, i), n, s))]
                            rhs = B.act(sigma_map(n, i), n, assign[(n, s)])
                            if lhs != rhs:
                                ok = False
                    if not ok:
                        break
                if not ok:
                    break
            out += ok
        return out

    # keep the brute force tiny: compare through dimension 1
    n_simp = simplicial_maps(HS, T, 1)
    n_semi = semisimplicial_maps(S, GT, 1)
    assert n_simp == n_semi


def test_H_of_F_of_C_is_DX(node_model, i2_model, i3_model):
    for model in (node_model, i2_model, i3_model):
        left = functor_H(functor_F_of_C(model))
        assert simplicial_isomorphic(left, build_DX(model))


def test_functor_I_nondegenerate_part(i2_model):
    dx = build_DX(i2_model)
    nd = functor_I(dx)
    assert len(nd.n_simplices(0)) == 2
    assert len(nd.n_simplices(1)) == 4  # two cells, two orientations each


def test_not_isomorphic(node_model, i2_model):
    assert not simplicial_isomorphic(build_DX(node_model), build_DX(i2_model))


def test_longexact_node(node_model):
    rep = longexact_check(node_model, ["A"])
    assert rep.exact
    assert [(g.rank, g.torsion) for g in rep.h_total] == [(1, ()), (0, ())]


def test_longexact_random_pairs():
    rng = random.Random(11)
    for _ in range(6):
        model = H.random_model(rng, max_components=4)
        E = rng.sample(model.components, rng.randint(1, len(model.components)))
        rep = longexact_check(model, E)
        assert rep.exact


def test_relative_homology_matches_les(i3_model):
    dx = build_DX(i3_model)
    de = build_DX(i3_model.restrict_to(["A"]))
    rel = cohomology(dx, de)
    rep = longexact_check(i3_model, ["A"])
    assert [(g.rank, g.torsion) for g in rel] == [
        (g.rank, g.torsion) for g in rep.h_relative
    ]


def test_standard_simplex_cells():
    s = standard_simplex(2, 3)
    assert [len(s.cells(n)) for n in range(3)] == [3, 3, 1]
