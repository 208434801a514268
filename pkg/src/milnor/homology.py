"""Integer (co)homology of finite chain complexes via Smith normal form."""

from __future__ import annotations

from dataclasses import dataclass

from sympy import Matrix
from sympy.matrices.normalforms import smith_normal_form

from .errors import ShapeMismatch


@dataclass(frozen=True)
class GroupDescriptor:
    """A finitely generated abelian group: Z^rank + sum of Z/d for d in torsion."""

    rank: int
    torsion: tuple[int, ...] = ()

    def to_dict(self) -> dict:
        return {"rank": self.rank, "torsion": list(self.torsion)}

    def __str__(self):
        parts = ["Z"] * self.rank + [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"


def _rank_and_divisors(m: Matrix) -> tuple[int, list[int]]:
    if m.rows == 0 or m.cols == 0:
        return 0, []
    d = smith_normal_form(m)
    divisors = [abs(d[i, i]) for i in range(min(d.rows, d.cols)) if d[i, i] != 0]
    return len(divisors), divisors


def homology_of_boundaries(dims: list[int], boundaries: dict[int, Matrix]) -> list[GroupDescriptor]:
    """H_n of a complex with the given per-degree ranks.

    boundaries[n] is the matrix of d: C_n -> C_{n-1}, shape dims[n-1] x dims[n].
    Degrees run 0 .. len(dims)-1; missing matrices are treated as zero.
    """
    top = len(dims) - 1
    ranks = {}
    invariants = {}
    for n in range(top + 2):
        m = boundaries.get(n)
        if m is None:
            ranks[n], invariants[n] = 0, []
            continue
        lo = dims[n - 1] if n >= 1 else 0
        hi = dims[n] if n <= top else 0
        if m.shape != (lo, hi):
            raise ShapeMismatch(f"boundary {n}: got {m.shape}, expected {(lo, hi)}")
        ranks[n], invariants[n] = _rank_and_divisors(m)
    out = []
    for n in range(top + 1):
        free = dims[n] - ranks.get(n, 0) - ranks.get(n + 1, 0)
        torsion = tuple(d for d in invariants.get(n + 1, []) if d > 1)
        out.append(GroupDescriptor(free, torsion))
    return out


def cohomology_of_boundaries(dims: list[int], boundaries: dict[int, Matrix]) -> list[GroupDescriptor]:
    """H^n of the dual complex, computed from transposed boundary matrices."""
    top = len(dims) - 1
    # The dual cochain complex has d^n = boundaries[n+1]^T : C^n -> C^{n+1}.
    ranks = {}
    invariants = {}
    for n in range(top + 1):
        m = boundaries.get(n + 1)
        if m is None:
            ranks[n], invariants[n] = 0, []
        else:
            ranks[n], invariants[n] = _rank_and_divisors(m.T)
    out = []
    for n in range(top + 1):
        free = dims[n] - ranks.get(n, 0) - (ranks.get(n - 1, 0) if n >= 1 else 0)
        torsion = tuple(d for d in invariants.get(n - 1, []) if d > 1) if n >= 1 else ()
        out.append(GroupDescriptor(free, torsion))
    return out
