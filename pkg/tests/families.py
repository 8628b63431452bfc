"""Random term families and small fixtures shared by the tests."""

from __future__ import annotations

import random

from hotransfer.ainf import AInfinityStructure
from hotransfer.codercalc import ArityCoderivation, ArityMorphism, FFCoderivation
from hotransfer.cooperad import Cooperad, cofree_slice
from hotransfer.gradedcx import ChainComplex, GradedMap, GradedModule
from hotransfer.linalg import Field


def rand_map(F: Field, rng: random.Random, src, tgt, degree: int, density: float = 0.5) -> GradedMap:
    cols: dict = {}
    p = getattr(F, "p", 5)
    for x, d in enumerate(src.degrees):
        for y in tgt.by_degree.get(d + degree, []):
            if rng.random() < density:
                cols.setdefault(x, {})[y] = F(rng.randrange(1, p))
    return GradedMap(F, src, tgt, degree, cols)


def rand_module(rng: random.Random, dim: int, degrees=(-1, 0, 1), prefix: str = "v") -> GradedModule:
    return GradedModule(tuple(f"{prefix}{i}" for i in range(dim)), tuple(rng.choice(degrees) for _ in range(dim)))


def rand_coderivation(C: Cooperad, rng, V: GradedModule, N: int, degree: int = -1, density=0.5) -> ArityCoderivation:
    F = C.field
    return ArityCoderivation(C, V, V, degree,
                             {n: rand_map(F, rng, cofree_slice(C, V, n), V, degree, density) for n in range(1, N + 1)})


def rand_morphism(C: Cooperad, rng, V: GradedModule, W: GradedModule, N: int, density=0.5) -> ArityMorphism:
    F = C.field
    return ArityMorphism(C, V, W, {n: rand_map(F, rng, cofree_slice(C, V, n), W, 0, density) for n in range(1, N + 1)})


def rand_ff(C: Cooperad, rng, V, W, left, right, N: int, density=0.5) -> FFCoderivation:
    F = C.field
    return FFCoderivation(C, V, W, left, right, 1,
                          {n: rand_map(F, rng, cofree_slice(C, V, n), W, 1, density) for n in range(1, N + 1)})


def rand_operations(C: Cooperad, rng, V: GradedModule, N: int, density=0.6) -> AInfinityStructure:
    """Arbitrary operations m_n of degree n - 2 (no relations imposed)."""
    F = C.field
    cx = ChainComplex.build(F, V, None, check=False)
    S = AInfinityStructure(cx, C)
    for n in range(1, N + 1):
        S.ops[n] = rand_map(F, rng, cofree_slice(C, V, n), V, n - 2, density)
    return S
