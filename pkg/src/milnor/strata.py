"""Incidence data of a strictly semi-stable special fiber.

A model records the irreducible components, the strata (connected pieces of
the open intersection loci), the component set psi(s) of each stratum, and
codimension-one face data closed under composition.  Everything downstream
(dual complex, retractions, nearby cycles) is computed from this structure.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

from .errors import (
    DuplicateId,
    EmptyPsi,
    FaceMismatch,
    MissingFace,
    MissingVertexStratum,
    NonCommutingFaces,
    ParseError,
    UnknownComponent,
)


@dataclass(frozen=True)
class Stratum:
    id: str
    psi: frozenset[str]
    faces: Mapping[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class StrataModel:
    """Validated, immutable incidence model.  Build via :func:`validate`."""

    components: tuple[str, ...]
    strata: tuple[Stratum, ...]
    r: float = 0.0
    classes: Mapping[str, "object"] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "_by_id", {s.id: s for s in self.strata})

    def stratum(self, sid: str) -> Stratum:
        return self._by_id[sid]

    def has_stratum(self, sid: str) -> bool:
        return self._by_id.__contains__(sid)

    def psi(self, sid: str) -> frozenset[str]:
        return self._by_id[sid].psi

    def _check_components(self, J: Iterable[str]):
        unknown = set(J) - set(self.components)
        if unknown:
            raise UnknownComponent(f"unknown component(s): {sorted(unknown)}")

    def strata_with_psi(self, J: Iterable[str]) -> list[Stratum]:
        """All strata s with psi(s) == J (several when the locus is disconnected)."""
        Jset = frozenset(J)
        if not Jset:
            raise EmptyPsi("J must be non-empty")
        self._check_components(Jset)
        return [s for s in self.strata if s.psi == Jset]

    def face(self, sid: str, c: str) -> str:
        s = self._by_id[sid]
        if c not in s.psi:
            raise UnknownComponent(f"{c!r} not in psi({sid!r})")
        if len(s.psi) == 1:
            raise MissingFace(f"stratum {sid!r} has no proper faces")
        return s.faces[c]

    def iterated_face(self, sid: str, J: Iterable[str]) -> str:
        """The unique stratum under `sid` with psi equal to J (non-empty subset of psi).

        Face commutation makes the drop order irrelevant.
        """
        Jset = frozenset(J)
        cur = self._by_id[sid]
        if not Jset:
            raise EmptyPsi("target psi must be non-empty")
        if not Jset <= cur.psi:
            raise UnknownComponent(f"{sorted(Jset)} is not a subset of psi({sid!r})")
        for c in sorted(cur.psi - Jset):
            cur = self._by_id[cur.faces[c]]
        return cur.id

    def leq(self, tid: str, sid: str) -> bool:
        """Specialization order: t <= s iff s lies in the closure of t's stratum."""
        t, s = self._by_id[tid], self._by_id[sid]
        if not t.psi <= s.psi:
            return False
        return self.iterated_face(sid, t.psi) == tid

    def restrict_to(self, E: Iterable[str]) -> "StrataModel":
        """The model of the sub-variety given by the components in E."""
        Eset = frozenset(E)
        if not Eset:
            raise EmptyPsi("E must be non-empty")
        self._check_components(Eset)
        keep = [s for s in self.strata if s.psi <= Eset]
        kept_ids = {s.id for s in keep}
        strata = tuple(
            Stratum(s.id, s.psi, {c: f for c, f in s.faces.items() if f in kept_ids})
            for s in keep
        )
        classes = {k: v for k, v in self.classes.items() if k in kept_ids}
        comps = tuple(c for c in self.components if c in Eset)
        return StrataModel(components=comps, strata=strata, r=self.r, classes=classes)

    def max_psi_size(self) -> int:
        return max(len(s.psi) for s in self.strata)

    def to_dict(self) -> dict:
        out = {
            "components": list(self.components),
            "strata": [],
        }
        if self.r:
            out["r"] = self.r
        for s in self.strata:
            rec = {"id": s.id, "psi": sorted(s.psi)}
            if s.faces:
                rec["faces"] = dict(sorted(s.faces.items()))
            out["strata"].append(rec)
        if self.classes:
            out["classes"] = {
                sid: {"L": {str(e): c for e, c in cls.coeffs.items()}}
                for sid, cls in sorted(self.classes.items())
            }
        return out


def validate(raw: Mapping) -> StrataModel:
    """Check a raw model description and return an immutable StrataModel.

    Raises a ModelError subclass naming the first violated axiom.
    """
    try:
        components = list(raw["components"])
        raw_strata = list(raw["strata"])
    except (KeyError, TypeError) as exc:
        raise ParseError(f"model description lacks {exc}") from exc
    if len(set(components)) != len(components):
        raise DuplicateId("duplicate component identifier")
    comp_set = set(components)

    r = float(raw.get("r", 0.0))
    if not 0.0 <= r < 1.0:
        raise ParseError(f"r must lie in [0,1), got {r}")

    strata: list[Stratum] = []
    seen: set[str] = set()
    for rec in raw_strata:
        sid = str(rec["id"])
        if sid in seen:
            raise DuplicateId(f"duplicate stratum id {sid!r}")
        seen.add(sid)
        psi = frozenset(rec.get("psi", ()))
        if not psi:
            raise EmptyPsi(f"stratum {sid!r} has empty psi")
        if not psi <= comp_set:
            raise UnknownComponent(
                f"stratum {sid!r}: psi mentions unknown components {sorted(psi - comp_set)}"
            )
        faces = {str(c): str(f) for c, f in rec.get("faces", {}).items()}
        strata.append(Stratum(sid, psi, faces))

    by_id = {s.id: s for s in strata}
    for s in strata:
        if len(s.psi) >= 2:
            for c in s.psi:
                if c not in s.faces:
                    raise MissingFace(f"stratum {s.id!r}: no face for component {c!r}")
                fid = s.faces[c]
                if fid not in by_id:
                    raise MissingFace(f"stratum {s.id!r}: face {fid!r} does not exist")
                if by_id[fid].psi != s.psi - {c}:
                    raise FaceMismatch(
                        f"stratum {s.id!r}: face for {c!r} has psi "
                        f"{sorted(by_id[fid].psi)}, expected {sorted(s.psi - {c})}"
                    )
        extra = set(s.faces) - s.psi
        if extra:
            raise FaceMismatch(f"stratum {s.id!r}: faces for components {sorted(extra)} not in psi")

    for s in strata:
        if len(s.psi) >= 3:
            for c in s.psi:
                for c2 in s.psi:
                    if c2 <= c:
                        continue
                    a = by_id[by_id[s.faces[c]].faces[c2]]
                    b = by_id[by_id[s.faces[c2]].faces[c]]
                    if a.id != b.id:
                        raise NonCommutingFaces(
                            f"stratum {s.id!r}: dropping {c!r},{c2!r} in either order "
                            f"gives {a.id!r} vs {b.id!r}"
                        )

    vertex_psis = {next(iter(s.psi)) for s in strata if len(s.psi) == 1}
    missing = comp_set - vertex_psis
    if missing:
        raise MissingVertexStratum(
            f"components {sorted(missing)} have no stratum with psi == {{component}}"
        )

    classes = {}
    if raw.get("classes"):
        from .motivic import GClass

        for sid, val in raw["classes"].items():
            if sid not in by_id:
                raise ParseError(f"class attached to unknown stratum {sid!r}")
            try:
                coeffs = {int(e): int(c) for e, c in val["L"].items()}
            except (KeyError, TypeError, ValueError) as exc:
                raise ParseError(f"bad class for stratum {sid!r}: {exc}") from exc
            classes[sid] = GClass(coeffs)

    return StrataModel(
        components=tuple(components),
        strata=tuple(strata),
        r=r,
        classes=classes,
    )


def load(path) -> StrataModel:
    """Read and validate a model from a JSON file."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: {exc}") from exc
    return validate(raw)
