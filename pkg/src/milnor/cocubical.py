"""Cocubical systems of filtered complexes and their totalization.

A cocubical system assigns a bounded complex of finite-dimensional rational
vector spaces to every non-empty subset of [n], with compatible face maps.
`simple_complex` totalizes it into a single complex with the sign rule
(-1)^(eps(L,i)+p+1) on the vertical differential and the standard filtration
shifts; `adjunction_system` builds the purely topological instance from a
closed cover of a simplicial complex, together with its augmentation
quasi-isomorphism.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from sympy import Matrix, Rational

from .errors import (
    FiltrationAbsent,
    NotAChainMap,
    NotACover,
    ShapeMismatch,
)

Filtration = Mapping[int, Mapping[int, Matrix]]  # degree -> level -> column span


def _zeros(rows: int, cols: int) -> Matrix:
    return Matrix.zeros(rows, cols)


@dataclass(frozen=True)
class FDComplex:
    """Cochain complex of finite-dimensional Q-vector spaces on a degree range.

    `d[p]` maps degree p to degree p+1 and has shape dims[p+1] x dims[p].
    Optional filtrations: `F` decreasing, `W` increasing; each per degree a
    map from level to a column-span matrix.
    """

    dims: Mapping[int, int]
    d: Mapping[int, Matrix]
    F: Optional[Filtration] = None
    W: Optional[Filtration] = None

    def __post_init__(self):
        for p, m in self.d.items():
            expect = (self.dim(p + 1), self.dim(p))
            if m.shape != expect:
                raise ShapeMismatch(f"d[{p}] has shape {m.shape}, expected {expect}")
        for p in self.d:
            if p + 1 in self.d:
                if not (self.d[p + 1] * self.d[p]).is_zero_matrix:
                    raise ShapeMismatch(f"d^2 != 0 at degree {p}")
        for filt, decreasing in ((self.F, True), (self.W, False)):
            if filt is None:
                continue
            for p, m in self.d.items():
                levels = set(filt.get(p, {})) | set(filt.get(p + 1, {}))
                for r in levels:
                    src = self.filtration_piece(filt, p, r, decreasing)
                    dst = self.filtration_piece(filt, p + 1, r, decreasing)
                    if src.cols and not _in_span(dst, m * src):
                        raise ShapeMismatch(
                            f"differential does not respect the filtration at "
                            f"degree {p}, level {r}"
                        )

    def degrees(self) -> list[int]:
        return sorted(self.dims)

    def dim(self, p: int) -> int:
        return self.dims.get(p, 0)

    def diff(self, p: int) -> Matrix:
        return self.d.get(p, _zeros(self.dim(p + 1), self.dim(p)))

    def filtration_piece(self, filt: Filtration, p: int, r: int, decreasing: bool) -> Matrix:
        per_deg = filt.get(p, {})
        if r in per_deg:
            return per_deg[r]
        keys = sorted(per_deg)
        n = self.dim(p)
        if decreasing:
            # below the recorded range the filtration is everything, above it zero
            if not keys or r < keys[0]:
                return Matrix.eye(n)
            return _zeros(n, 0)
        if not keys or r > keys[-1]:
            return Matrix.eye(n)
        return _zeros(n, 0)

    def cohomology_ranks(self) -> dict[int, int]:
        out = {}
        for p in self.degrees():
            out[p] = self.dim(p) - self.diff(p).rank() - self.diff(p - 1).rank()
        return out

    def euler_characteristic(self) -> int:
        return sum((-1) ** p * n for p, n in self.dims.items())


def _in_span(span: Matrix, vectors: Matrix) -> bool:
    if vectors.cols == 0 or vectors.is_zero_matrix:
        return True
    if span.cols == 0:
        return False
    return Matrix.hstack(span, vectors).rank() == span.rank()


@dataclass(frozen=True)
class ChainMap:
    src: FDComplex
    dst: FDComplex
    mats: Mapping[int, Matrix]

    def __post_init__(self):
        for p in set(self.src.dims) | set(self.dst.dims):
            f = self.mat(p)
            if f.shape != (self.dst.dim(p), self.src.dim(p)):
                raise ShapeMismatch(f"chain map has wrong shape in degree {p}")
            lhs = self.dst.diff(p) * f
            rhs = self.mat(p + 1) * self.src.diff(p)
            if not (lhs - rhs).is_zero_matrix:
                raise NotAChainMap(f"square fails at degree {p}")

    def mat(self, p: int) -> Matrix:
        return self.mats.get(p, _zeros(self.dst.dim(p), self.src.dim(p)))


@dataclass(frozen=True)
class CocubicalSystem:
    """Complexes C_L for non-empty L subset of [n], with face maps for the
    one-element extensions (larger inclusions are composites; commutation of
    the codimension-two squares is checked)."""

    n: int
    complexes: Mapping[frozenset, FDComplex]
    face_maps: Mapping[tuple[frozenset, frozenset], Mapping[int, Matrix]] = field(
        default_factory=dict
    )

    def __post_init__(self):
        for L in self.subsets():
            if L not in self.complexes:
                raise ShapeMismatch(f"missing complex for L = {sorted(L)}")
        # chain-map and functoriality checks
        for L in self.subsets():
            for i in range(self.n + 1):
                if i in L:
                    continue
                ChainMap(self.complexes[L], self.complexes[L | {i}], self._mats(L, i))
        for L in self.subsets():
            out = [i for i in range(self.n + 1) if i not in L]
            for i, j in itertools.combinations(out, 2):
                for p in self.complexes[L].degrees():
                    a = self.face(L | {i}, j, p) * self.face(L, i, p)
                    b = self.face(L | {j}, i, p) * self.face(L, j, p)
                    if not (a - b).is_zero_matrix:
                        raise ShapeMismatch(
                            f"face maps fail to commute over L = {sorted(L)}"
                        )

    def subsets(self) -> list[frozenset]:
        out = []
        for q in range(self.n + 1):
            for L in itertools.combinations(range(self.n + 1), q + 1):
                out.append(frozenset(L))
        return out

    def _mats(self, L: frozenset, i: int) -> Mapping[int, Matrix]:
        return self.face_maps.get((L, L | {i}), {})

    def face(self, L: frozenset, i: int, p: int) -> Matrix:
        src, dst = self.complexes[L], self.complexes[L | {i}]
        return self._mats(L, i).get(p, _zeros(dst.dim(p), src.dim(p)))


def _eps(L: frozenset, i: int) -> int:
    return sum(1 for j in L if j < i)


def _blocks(sys: CocubicalSystem, total_deg: int):
    """Ordered blocks (p, L) with p + |L| - 1 = total_deg and their offsets."""
    out = []
    offset = 0
    for q in range(sys.n + 1):
        p = total_deg - q
        for L in itertools.combinations(range(sys.n + 1), q + 1):
            Lf = frozenset(L)
            dim = sys.complexes[Lf].dim(p)
            if dim:
                out.append((p, Lf, offset, dim))
                offset += dim
    return out, offset


def simple_complex(sys: CocubicalSystem) -> FDComplex:
    """Totalization s_box: degree n part is the sum of C^p_L over p+q = n,
    |L| = q+1, with differential d_L + sum_i (-1)^(eps(L,i)+p+1) face_i."""
    p_range: set[int] = set()
    for C in sys.complexes.values():
        p_range.update(C.degrees())
    if not p_range:
        return FDComplex({}, {})
    lo, hi = min(p_range), max(p_range) + sys.n

    dims: dict[int, int] = {}
    layout = {}
    for t in range(lo, hi + 1):
        blocks, total = _blocks(sys, t)
        layout[t] = blocks
        dims[t] = total

    diffs: dict[int, Matrix] = {}
    has_F = all(C.F is not None for C in sys.complexes.values())
    has_W = all(C.W is not None for C in sys.complexes.values())
    F: dict[int, dict[int, Matrix]] = {}
    W: dict[int, dict[int, Matrix]] = {}

    for t in range(lo, hi + 1):
        src_blocks = layout[t]
        dst_blocks = layout.get(t + 1, [])
        dst_index = {(p, L): (off, dim) for p, L, off, dim in dst_blocks}
        m = _zeros(dims.get(t + 1, 0), dims[t])
        for p, L, off, dim in src_blocks:
            C = sys.complexes[L]
            # horizontal part: the internal differential of C_L
            if (p + 1, L) in dst_index:
                doff, _ = dst_index[(p + 1, L)]
                block = C.diff(p)
                m[doff : doff + block.rows, off : off + dim] = block
            # vertical part: face maps to the one-larger subsets
            for i in range(sys.n + 1):
                if i in L or (p, L | {i}) not in dst_index:
                    continue
                doff, _ = dst_index[(p, L | {i})]
                sign = (-1) ** (_eps(L, i) + p + 1)
                block = sign * sys.face(L, i, p)
                m[doff : doff + block.rows, off : off + dim] = block
        diffs[t] = m

        if has_F or has_W:
            f_levels: set[int] = set()
            w_levels: set[int] = set()
            for p, L, off, dim in src_blocks:
                C = sys.complexes[L]
                if has_F:
                    f_levels.update(C.F.get(p, {}))
                if has_W:
                    q = len(L) - 1
                    w_levels.update(r - q for r in C.W.get(p, {}))
            if has_F:
                F[t] = {
                    r: _block_filtration(sys, src_blocks, dims[t], r, "F")
                    for r in f_levels
                }
            if has_W:
                W[t] = {
                    r: _block_filtration(sys, src_blocks, dims[t], r, "W")
                    for r in w_levels
                }

    for t in range(lo, hi):
        if not (diffs[t + 1] * diffs[t]).is_zero_matrix:  # sign identity
            raise ShapeMismatch("total differential fails to square to zero")

    return FDComplex(dims, diffs, F if has_F else None, W if has_W else None)


def _block_filtration(sys, blocks, total_dim, r, kind) -> Matrix:
    cols = []
    for p, L, off, dim in blocks:
        C = sys.complexes[L]
        q = len(L) - 1
        if kind == "F":
            piece = C.filtration_piece(C.F, p, r, True)
        else:
            piece = C.filtration_piece(C.W, p, r + q, False)
        for j in range(piece.cols):
            v = _zeros(total_dim, 1)
            v[off : off + dim, 0] = piece[:, j]
            cols.append(v)
    return Matrix.hstack(*cols) if cols else _zeros(total_dim, 0)


def simple_map(
    src: CocubicalSystem, dst: CocubicalSystem, maps: Mapping[frozenset, ChainMap]
) -> ChainMap:
    """The chain map s_box(f) induced by a per-L morphism of systems."""
    A, B = simple_complex(src), simple_complex(dst)
    mats = {}
    for t in set(A.dims) | set(B.dims):
        src_blocks, _ = _blocks(src, t)
        dst_blocks, _ = _blocks(dst, t)
        dst_index = {(p, L): off for p, L, off, _ in dst_blocks}
        m = _zeros(B.dim(t), A.dim(t))
        for p, L, off, dim in src_blocks:
            if (p, L) not in dst_index:
                continue
            block = maps[L].mat(p)
            doff = dst_index[(p, L)]
            m[doff : doff + block.rows, off : off + dim] = block
        mats[t] = m
    return ChainMap(A, B, mats)


# ---------------------------------------------------------------------------
# simplicial complexes and the adjunction system of a closed cover


class SimplicialComplex:
    """Finite abstract simplicial complex, closed under taking faces."""

    def __init__(self, faces: Iterable[Iterable]):
        simplices: set[frozenset] = set()
        for f in faces:
            fs = frozenset(f)
            for k in range(1, len(fs) + 1):
                for sub in itertools.combinations(sorted(fs), k):
                    simplices.add(frozenset(sub))
        self.simplices = simplices

    def __contains__(self, face):
        return frozenset(face) in self.simplices

    def __le__(self, other: "SimplicialComplex") -> bool:
        return self.simplices <= other.simplices

    def n_faces(self, n: int) -> list[tuple]:
        return sorted(tuple(sorted(s)) for s in self.simplices if len(s) == n + 1)

    def top_dim(self) -> int:
        return max((len(s) - 1 for s in self.simplices), default=-1)

    def cochain_complex(self) -> FDComplex:
        """Simplicial cochains over Q."""
        top = self.top_dim()
        dims = {}
        d = {}
        for p in range(top + 1):
            dims[p] = len(self.n_faces(p))
        for p in range(top):
            lo, hi = self.n_faces(p), self.n_faces(p + 1)
            index = {f: i for i, f in enumerate(lo)}
            m = _zeros(len(hi), len(lo))
            for row, f in enumerate(hi):
                for i in range(len(f)):
                    sub = f[:i] + f[i + 1 :]
                    m[row, index[sub]] += Rational((-1) ** i)
            d[p] = m
        return FDComplex(dims, d)


def _intersection(pieces: Sequence[SimplicialComplex]) -> SimplicialComplex:
    common = set.intersection(*[set(p.simplices) for p in pieces])
    out = SimplicialComplex([])
    out.simplices = common
    return out


def adjunction_system(
    K: SimplicialComplex, pieces: Sequence[SimplicialComplex]
) -> tuple[CocubicalSystem, ChainMap]:
    """The cocubical system C_L = cochains of the intersection of the closed
    pieces indexed by L, with restriction face maps, plus the augmentation
    from the cochains of K into the totalization."""
    for piece in pieces:
        if not piece <= K:
            raise NotACover("each piece must be a subcomplex")
    covered = set.union(*[set(p.simplices) for p in pieces]) if pieces else set()
    if covered != K.simplices:
        raise NotACover("the pieces do not cover the complex")

    n = len(pieces) - 1
    complexes: dict[frozenset, FDComplex] = {}
    inters: dict[frozenset, SimplicialComplex] = {}
    for q in range(n + 1):
        for L in itertools.combinations(range(n + 1), q + 1):
            Lf = frozenset(L)
            inters[Lf] = _intersection([pieces[i] for i in L])
            complexes[Lf] = inters[Lf].cochain_complex()

    def restriction(big: SimplicialComplex, small: SimplicialComplex, p: int) -> Matrix:
        src, dst = big.n_faces(p), small.n_faces(p)
        index = {f: i for i, f in enumerate(src)}
        m = _zeros(len(dst), len(src))
        for row, f in enumerate(dst):
            m[row, index[f]] = 1
        return m

    face_maps = {}
    for Lf, small in inters.items():
        for i in range(n + 1):
            if i in Lf:
                continue
            target = inters[Lf | {i}]
            mats = {
                p: restriction(small, target, p)
                for p in range(target.top_dim() + 1)
            }
            face_maps[(Lf, Lf | {i})] = mats

    sys = CocubicalSystem(n, complexes, face_maps)
    total = simple_complex(sys)

    # augmentation: restrict a cochain of K into every one-element piece
    CK = K.cochain_complex()
    mats = {}
    for t in set(CK.dims) | set(total.dims):
        blocks, _ = _blocks(sys, t)
        m = _zeros(total.dim(t), CK.dim(t))
        for p, L, off, dim in blocks:
            if len(L) != 1 or p != t:
                continue
            block = restriction(K, inters[L], p)
            m[off : off + dim, :] = block
        mats[t] = m
    aug = ChainMap(CK, total, mats)
    return sys, aug


# ---------------------------------------------------------------------------
# quasi-isomorphism verdicts and filtration pieces


def _cohomology_basis(C: FDComplex, p: int):
    dk = C.diff(p)
    if dk.rows == 0 or dk.cols == 0:
        ker = Matrix.eye(C.dim(p))
    else:
        ns = dk.nullspace()
        ker = Matrix.hstack(*ns) if ns else _zeros(C.dim(p), 0)
    prev = C.diff(p - 1)
    if prev.rows == 0 or prev.cols == 0:
        img = _zeros(C.dim(p), 0)
    else:
        cs = prev.columnspace()
        img = Matrix.hstack(*cs) if cs else _zeros(C.dim(p), 0)
    return ker, img


def quasi_iso_check(f: ChainMap) -> dict[int, bool]:
    """Per-degree verdict: does f induce an isomorphism on cohomology?"""
    out = {}
    for p in sorted(set(f.src.dims) | set(f.dst.dims)):
        ker_s, img_s = _cohomology_basis(f.src, p)
        ker_d, img_d = _cohomology_basis(f.dst, p)
        h_src = ker_s.rank() - img_s.rank() if ker_s.cols else 0
        h_dst = ker_d.rank() - img_d.rank() if ker_d.cols else 0
        if h_src != h_dst:
            out[p] = False
            continue
        if h_src == 0:
            out[p] = True
            continue
        # rank of the induced map: image of f on cocycles, modulo coboundaries
        mapped = f.mat(p) * ker_s
        joint = Matrix.hstack(img_d, mapped) if img_d.cols else mapped
        induced_rank = joint.rank() - img_d.rank()
        out[p] = induced_rank == h_src
    return out


def _solve_in_span(span: Matrix, targets: Matrix) -> Matrix:
    """Coordinates of each target column inside the column span (exact)."""
    if span.cols == 0:
        if not targets.is_zero_matrix:
            raise ShapeMismatch("vector outside the subspace")
        return _zeros(0, targets.cols)
    sol = (span.T * span).inv() * span.T * targets
    if not (span * sol - targets).is_zero_matrix:
        raise ShapeMismatch("vector outside the subspace")
    return sol


def graded_piece(C: FDComplex, which: str, r: int) -> FDComplex:
    """F^r (sub complex), Gr_F^r, or Gr_W^r of a filtered complex."""
    if which in ("F", "GrF"):
        filt, decreasing = C.F, True
    elif which == "GrW":
        filt, decreasing = C.W, False
    else:
        raise FiltrationAbsent(f"unknown filtration piece {which!r}")
    if filt is None:
        raise FiltrationAbsent(f"the complex carries no {which[-1]} filtration")

    outer = {p: C.filtration_piece(filt, p, r, decreasing) for p in C.degrees()}
    if which == "F":
        dims = {p: m.cols for p, m in outer.items()}
        d = {
            p: _solve_in_span(outer[p + 1], C.diff(p) * outer[p])
            for p in C.degrees()
            if p + 1 in outer
        }
        return FDComplex(dims, d)

    deeper_level = r + 1 if decreasing else r - 1
    inner = {
        p: C.filtration_piece(filt, p, deeper_level, decreasing) for p in C.degrees()
    }
    # complement of the deeper piece inside the outer piece, per degree
    comp = {}
    for p in C.degrees():
        base, rank = inner[p], inner[p].rank()
        cols = []
        for j in range(outer[p].cols):
            cand = Matrix.hstack(base, outer[p][:, j])
            if cand.rank() > rank:
                base, rank = cand, rank + 1
                cols.append(outer[p][:, j])
        comp[p] = Matrix.hstack(*cols) if cols else _zeros(C.dim(p), 0)
    dims = {p: comp[p].cols for p in C.degrees()}
    d = {}
    for p in C.degrees():
        if p + 1 not in comp:
            continue
        full = Matrix.hstack(inner[p + 1], comp[p + 1])
        coords = _solve_in_span(full, C.diff(p) * comp[p])
        d[p] = coords[inner[p + 1].cols :, :]
    return FDComplex(dims, d)
