"""Shared fixtures and generators for the test suite."""

from __future__ import annotations

import itertools
import math
import random
from pathlib import Path

import pytest

from milnor import AnalyticSample, StrataModel, load, validate

MODELS = Path(__file__).resolve().parent.parent / "models"


@pytest.fixture(scope="session")
def node_model() -> StrataModel:
    return load(MODELS / "node.json")


@pytest.fixture(scope="session")
def i2_model() -> StrataModel:
    return load(MODELS / "i2.json")


@pytest.fixture(scope="session")
def i3_model() -> StrataModel:
    return load(MODELS / "i3.json")


def simplex_id(face) -> str:
    return "s_" + "".join(sorted(face))


def model_from_complex(maximal_faces, duplicates=(), r: float = 0.0) -> StrataModel:
    """A valid model from a simplicial complex on component names: one stratum
    per face, plus parallel copies of the faces listed in `duplicates` (safe:
    nothing references them from above)."""
    faces: set[frozenset] = set()
    for f in maximal_faces:
        fs = frozenset(f)
        for k in range(1, len(fs) + 1):
            for sub in itertools.combinations(sorted(fs), k):
                faces.add(frozenset(sub))
    components = sorted({c for f in faces for c in f})
    strata = []
    for f in sorted(faces, key=lambda s: (len(s), sorted(s))):
        rec = {"id": simplex_id(f), "psi": sorted(f)}
        if len(f) > 1:
            rec["faces"] = {c: simplex_id(f - {c}) for c in f}
        strata.append(rec)
    for idx, f in enumerate(duplicates):
        fs = frozenset(f)
        rec = {"id": f"{simplex_id(fs)}_dup{idx}", "psi": sorted(fs)}
        if len(fs) > 1:
            rec["faces"] = {c: simplex_id(fs - {c}) for c in fs}
        strata.append(rec)
    return validate({"components": components, "strata": strata, "r": r})


def random_model(rng: random.Random, max_components: int = 5, r: float = 0.0) -> StrataModel:
    """Random valid model: random complex plus random parallel copies."""
    k = rng.randint(1, max_components)
    components = [chr(ord("A") + i) for i in range(k)]
    n_faces = rng.randint(1, 4)
    maximal = []
    for _ in range(n_faces):
        size = rng.randint(1, k)
        maximal.append(rng.sample(components, size))
    for c in components:  # every component must appear
        maximal.append([c])
    closed: set[frozenset] = set()
    for f in maximal:
        fs = frozenset(f)
        for m in range(1, len(fs) + 1):
            for sub in itertools.combinations(sorted(fs), m):
                closed.add(frozenset(sub))
    candidates = [f for f in closed if len(f) > 1]
    dups = rng.sample(candidates, min(len(candidates), rng.randint(0, 2)))
    return model_from_complex(maximal, duplicates=dups, r=r)


def kodaira_In(n: int) -> StrataModel:
    """The cycle of n rational curves, with Grothendieck classes attached."""
    components = [f"X{i}" for i in range(n)]
    strata = [{"id": f"v{i}", "psi": [f"X{i}"]} for i in range(n)]
    classes = {f"v{i}": {"L": {"1": 1, "0": -1}} for i in range(n)}
    for i in range(n):
        j = (i + 1) % n
        a, b = f"X{i}", f"X{j}"
        strata.append(
            {"id": f"e{i}", "psi": sorted([a, b]), "faces": {a: f"v{j}", b: f"v{i}"}}
        )
        classes[f"e{i}"] = {"L": {"0": 1}}
    return validate(
        {"components": components, "strata": strata, "classes": classes, "r": 0.0}
    )


def random_sample_on(
    model: StrataModel, stratum: str, r: float, rng: random.Random, argmin_in=None
) -> AnalyticSample:
    """Random sample over a stratum with product r; if `argmin_in` is given,
    the smallest value (the zero, when r = 0) is placed on one of those
    components."""
    comps = sorted(model.psi(stratum))
    if r == 0.0:
        vals = {c: 0.2 + 0.75 * rng.random() for c in comps}
        target = rng.choice(sorted(set(comps) & set(argmin_in))) if argmin_in else comps[0]
        vals[target] = 0.0
        return AnalyticSample(stratum, vals, 0.0)
    exps = {c: 0.1 + rng.random() for c in comps}
    if argmin_in:
        target = rng.choice(sorted(set(comps) & set(argmin_in)))
        exps[target] = max(exps.values()) + 0.5  # largest exponent = smallest value
    total = sum(exps.values())
    vals = {c: r ** (e / total) for c, e in exps.items()}
    return AnalyticSample(stratum, vals, r)
