"""Built-in catalog of named modules, ideals and cyclic presentations.

The verification suites are data-driven: they walk these tables rather
than hard-coding instances.  The catalog is extensible at the CLI through
--module-json.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from .cech import MonomialIdeal, all_local_cohomology
from .homalg import CyclicPresentation
from .multigraded import (
    StraightModule,
    module_E,
    module_localization,
    module_R,
)
from .weyl import WeylElement, parse_weyl


@lru_cache(maxsize=None)
def _antichains(n: int, max_generators: int | None) -> tuple[MonomialIdeal, ...]:
    subsets = [frozenset(c) for size in range(1, n + 1)
               for c in itertools.combinations(range(1, n + 1), size)]
    out = []
    for r in range(1, (max_generators or len(subsets)) + 1):
        for combo in itertools.combinations(subsets, r):
            if all(not (a <= b or b <= a) for a, b in itertools.combinations(combo, 2)):
                out.append(MonomialIdeal(n, combo))
    return tuple(out)


def antichains(n: int, max_generators: int | None = None) -> list[MonomialIdeal]:
    """All squarefree monomial ideals on n variables: the nonempty
    antichains of nonempty subsets of {1..n}."""
    return list(_antichains(n, max_generators))


def straight_catalog(n: int) -> dict[str, StraightModule]:
    """The named standard modules on n variables."""
    out = {"R": module_R(n), "E": module_E(n)}
    for size in range(1, n + 1):
        for S in itertools.combinations(range(1, n + 1), size):
            out["Rx" + "".join(str(i) for i in S)] = module_localization(n, S)
    return out


@lru_cache(maxsize=None)
def _local_cohomology_catalog(n: int, max_generators: int | None
                              ) -> tuple[tuple[MonomialIdeal, int, StraightModule], ...]:
    R = module_R(n)
    out = []
    for ideal in _antichains(n, max_generators):
        for i, H in sorted(all_local_cohomology(R, ideal).items()):
            if not H.is_zero():
                out.append((ideal, i, H))
    return tuple(out)


def local_cohomology_catalog(n: int, max_generators: int | None = None
                             ) -> list[tuple[MonomialIdeal, int, StraightModule]]:
    """Every nonzero H^i_I(R) over the squarefree monomial ideals on n
    variables (all i)."""
    return list(_local_cohomology_catalog(n, max_generators))


def a1_catalog() -> dict[str, tuple[CyclicPresentation, StraightModule]]:
    """The n = 1 catalog: cyclic presentations of lR, R_x and E(1) paired
    with their straight-module realizations.

    lR = A/Ad with generator 1 in degree 0; R_x = (A/A(xd+1))(1) with
    generator x^-1; E(1) = (A/Ax)(1) with generator x^-1 (x kills the
    socle and d acts freely).
    """
    return {
        "lR": (CyclicPresentation(WeylElement.d(1, 1), 0, "left"), module_R(1)),
        "Rx": (CyclicPresentation(parse_weyl("x1*d1 + 1"), 1, "left"),
               module_localization(1, {1})),
        "E1": (CyclicPresentation(WeylElement.x(1, 1), 1, "left"), module_E(1)),
    }


def catalog_module(name: str, n: int) -> StraightModule:
    """Resolve a catalog module name ("R", "E", "Rx12", or "H<i>(...)"
    pipeline syntax) on n variables."""
    table = straight_catalog(n)
    if name in table:
        return table[name]
    if name.startswith("H"):
        from .cech import lyubeznik_pipeline, parse_pipeline

        stages, _ = parse_pipeline(name, n)
        return lyubeznik_pipeline(stages, n)
    raise ValueError(f"unknown catalog module {name!r} for n={n}")
