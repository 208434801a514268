import itertools
import random

import pytest
from sympy import Matrix, Rational

from milnor import (
    ChainMap,
    CocubicalSystem,
    FDComplex,
    SimplicialComplex,
    adjunction_system,
    graded_piece,
    quasi_iso_check,
    simple_complex,
    simple_map,
)
from milnor.errors import (
    FiltrationAbsent,
    NotAChainMap,
    NotACover,
    ShapeMismatch,
)


def random_complex_on(vertices, rng: random.Random, max_faces=4) -> SimplicialComplex:
    faces = []
    for _ in range(rng.randint(1, max_faces)):
        size = rng.randint(1, min(3, len(vertices)))
        faces.append(rng.sample(vertices, size))
    return SimplicialComplex(faces)


def constant_system(C: FDComplex, n: int) -> CocubicalSystem:
    """The same complex everywhere, all face maps the identity."""
    subsets = [
        frozenset(L)
        for q in range(n + 1)
        for L in itertools.combinations(range(n + 1), q + 1)
    ]
    complexes = {L: C for L in subsets}
    eye = {p: Matrix.eye(C.dim(p)) for p in C.degrees()}
    face_maps = {}
    for L in subsets:
        for i in range(n + 1):
            if i not in L:
                face_maps[(L, L | {i})] = eye
    return CocubicalSystem(n, complexes, face_maps)


def test_fdcomplex_validation():
    with pytest.raises(ShapeMismatch):
        FDComplex({0: 1, 1: 1}, {0: Matrix([[1, 1]])})  # wrong shape
    with pytest.raises(ShapeMismatch):
        FDComplex(
            {0: 1, 1: 1, 2: 1}, {0: Matrix([[1]]), 1: Matrix([[1]])}
        )  # d^2 != 0
    C = FDComplex({0: 1, 1: 1, 2: 1}, {0: Matrix([[1]]), 1: Matrix([[0]])})
    assert C.cohomology_ranks() == {0: 0, 1: 0, 2: 1}


def test_chain_map_validation():
    C = FDComplex({0: 1, 1: 1}, {0: Matrix([[1]])})
    D = FDComplex({0: 1, 1: 1}, {0: Matrix([[0]])})
    ChainMap(C, C, {0: Matrix([[1]]), 1: Matrix([[1]])})
    with pytest.raises(NotAChainMap):
        ChainMap(C, D, {0: Matrix([[1]]), 1: Matrix([[1]])})


def test_single_subset_totalization():
    C = FDComplex({0: 2, 1: 1}, {0: Matrix([[1, 0]])})
    sys_ = constant_system(C, 0)
    total = simple_complex(sys_)
    assert total.dims == {k: v for k, v in C.dims.items()}
    assert total.cohomology_ranks() == C.cohomology_ranks()


def test_cech_complex_of_a_point():
    C = FDComplex({0: 1}, {})
    total = simple_complex(constant_system(C, 1))
    assert total.dims == {0: 2, 1: 1}
    assert total.cohomology_ranks() == {0: 1, 1: 0}


def test_d_squared_zero_random_constant_systems():
    rng = random.Random(17)
    for _ in range(30):
        K = random_complex_on(list("abcde"), rng)
        C = K.cochain_complex()
        n = rng.randint(0, 2)
        total = simple_complex(constant_system(C, n))  # asserts d^2 = 0 inside
        assert isinstance(total, FDComplex)


def test_euler_characteristic_of_totalization():
    rng = random.Random(18)
    for _ in range(10):
        K = random_complex_on(list("abcdef"), rng)
        pieces = [random_complex_on(sorted({v for f in K.simplices for v in f}), rng) for _ in range(2)]
        # make it a genuine cover
        union = SimplicialComplex([])
        union.simplices = set().union(*[p.simplices for p in pieces]) | K.simplices
        K.simplices = union.simplices
        sys_, _ = adjunction_system(K, pieces + [K])
        total = simple_complex(sys_)
        want = 0
        for q in range(sys_.n + 1):
            for Lc in itertools.combinations(range(sys_.n + 1), q + 1):
                want += (-1) ** q * sys_.complexes[frozenset(Lc)].euler_characteristic()
        assert total.euler_characteristic() == want


def test_two_point_cover():
    K = SimplicialComplex([["a"], ["b"]])
    sys_, aug = adjunction_system(
        K, [SimplicialComplex([["a"]]), SimplicialComplex([["b"]])]
    )
    total = simple_complex(sys_)
    assert total.dim(0) == 2
    assert all(quasi_iso_check(aug).values())


def test_circle_two_arcs():
    K = SimplicialComplex([["a", "b"], ["b", "c"], ["c", "d"], ["d", "a"]])
    arcs = [
        SimplicialComplex([["a", "b"], ["b", "c"]]),
        SimplicialComplex([["c", "d"], ["d", "a"]]),
    ]
    sys_, aug = adjunction_system(K, arcs)
    total = simple_complex(sys_)
    ranks = total.cohomology_ranks()
    assert ranks[0] == 1 and ranks[1] == 1
    assert all(quasi_iso_check(aug).values())


def test_self_cover_is_identity():
    K = SimplicialComplex([["a", "b"]])
    sys_, aug = adjunction_system(K, [K])
    assert all(quasi_iso_check(aug).values())
    for p, m in aug.mats.items():
        assert m == Matrix.eye(m.rows)


def test_not_a_cover():
    K = SimplicialComplex([["a", "b"]])
    with pytest.raises(NotACover):
        adjunction_system(K, [SimplicialComplex([["a"]])])
    with pytest.raises(NotACover):
        adjunction_system(K, [SimplicialComplex([["a", "c"]]), K])


def test_random_cover_quasi_iso():
    rng = random.Random(19)
    done = 0
    while done < 12:
        K = random_complex_on(list("abcdef"), rng, max_faces=5)
        if len(K.simplices) > 20:
            continue
        verts = sorted({v for f in K.simplices for v in f})
        n_pieces = rng.randint(1, 3)
        maximal = [tuple(sorted(f)) for f in K.simplices]
        pieces = []
        for _ in range(n_pieces):
            chosen = rng.sample(maximal, rng.randint(1, len(maximal)))
            pieces.append(SimplicialComplex(chosen))
        covered = set().union(*[p.simplices for p in pieces])
        if covered != K.simplices:
            # complete the cover with the missing faces as one more piece
            missing = [tuple(sorted(f)) for f in K.simplices - covered]
            pieces.append(SimplicialComplex(missing + [maximal[0]]))
        sys_, aug = adjunction_system(K, pieces)
        assert all(quasi_iso_check(aug).values())
        done += 1


def test_quasi_iso_negative():
    C = FDComplex({0: 1}, {})
    zero = FDComplex({0: 0}, {})
    f = ChainMap(C, zero, {0: Matrix(0, 1, [])})
    assert quasi_iso_check(f) == {0: False}


def test_simple_map_functorial():
    C = FDComplex({0: 1, 1: 1}, {0: Matrix([[0]])})
    D = FDComplex({0: 1, 1: 1}, {0: Matrix([[0]])})
    sys_c = constant_system(C, 1)
    sys_d = constant_system(D, 1)
    f = ChainMap(C, D, {0: Matrix([[2]]), 1: Matrix([[2]])})
    subsets = list(sys_c.complexes)
    total_f = simple_map(sys_c, sys_d, {Lc: f for Lc in subsets})
    for p, m in total_f.mats.items():
        assert m == 2 * Matrix.eye(m.rows)


def test_filtrations_of_totalization():
    # two-step filtered complex, constant over [1]
    F = {
        0: {0: Matrix.eye(2), 1: Matrix([[1], [0]]), 2: Matrix(2, 0, [])},
        1: {0: Matrix.eye(1), 1: Matrix([[1]]), 2: Matrix(1, 0, [])},
    }
    W = {
        0: {-1: Matrix(2, 0, []), 0: Matrix([[1], [0]]), 1: Matrix.eye(2)},
        1: {-1: Matrix(1, 0, []), 0: Matrix([[1]]), 1: Matrix.eye(1)},
    }
    C = FDComplex({0: 2, 1: 1}, {0: Matrix([[1, 0]])}, F=F, W=W)
    total = simple_complex(constant_system(C, 1))
    assert total.F is not None and total.W is not None
    # Gr_F dimensions per degree sum to the total dimension
    for p in total.degrees():
        levels = sorted(total.F[p])
        dims = [
            graded_piece(total, "GrF", r).dim(p)
            for r in range(min(levels), max(levels) + 1)
        ]
        assert sum(dims) == total.dim(p)


def test_graded_piece_trivial_filtration():
    F = {0: {0: Matrix.eye(2), 1: Matrix(2, 0, [])}}
    C = FDComplex({0: 2}, {}, F=F)
    gr = graded_piece(C, "GrF", 0)
    assert gr.dims == {0: 2}
    sub = graded_piece(C, "F", 1)
    assert sub.dims == {0: 0}
    with pytest.raises(FiltrationAbsent):
        graded_piece(C, "GrW", 0)


def test_filtration_respect_checked():
    F = {
        0: {1: Matrix([[1], [0]])},
        1: {1: Matrix(1, 0, [])},
    }
    with pytest.raises(ShapeMismatch):
        FDComplex({0: 2, 1: 1}, {0: Matrix([[1, 0]])}, F=F)
