"""Cech complexes on squarefree monomial generator sets.

Local cohomology H^i_I(M) of a straight module is the i-th cohomology of
the Cech complex on the generators of I; compositions of such functors
stand in for graded Lyubeznik functors with monomial supports.

Only squarefree monomial ideals are supported: every Cech term is then a
straight module with regions of dimension at most dim M.  Non-squarefree
monomial input has the same radical, hence identical local cohomology; the
parser replaces it by its radical and reports a notice.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field

from .config import check_variable_count
from .multigraded import (
    StraightModule,
    StraightMorphism,
    block_morphism,
    compose,
    direct_sum,
    homology_at,
    localization_map,
    localize,
    module_R,
    module_zero,
    regions,
)


@dataclass(frozen=True)
class MonomialIdeal:
    """A squarefree monomial ideal: each generator is the set of variable
    indices (1-based) of one squarefree monomial; generators form an
    antichain (minimal generating set)."""

    n: int
    generators: tuple[frozenset[int], ...]

    def __post_init__(self):
        check_variable_count(self.n)
        gens = tuple(frozenset(int(i) for i in g) for g in self.generators)
        object.__setattr__(self, "generators", gens)
        if not gens:
            raise ValueError("a monomial ideal needs at least one generator")
        for g in gens:
            if not g:
                raise ValueError("the unit ideal (empty generator) is not allowed")
            if any(i < 1 or i > self.n for i in g):
                raise ValueError(f"generator {set(g)} out of range 1..{self.n}")
        for a, b in itertools.combinations(gens, 2):
            if a <= b or b <= a:
                raise ValueError("generators must be pairwise incomparable (minimal)")

    @classmethod
    def from_subsets(cls, n: int, subsets) -> tuple["MonomialIdeal", list[str]]:
        """Build from arbitrary generator subsets, minimalizing; returns the
        ideal together with notices about dropped redundant generators."""
        gens = [frozenset(int(i) for i in g) for g in subsets]
        notices = []
        minimal = []
        for g in sorted(set(gens), key=lambda s: (len(s), sorted(s))):
            if any(h <= g for h in minimal):
                notices.append(f"dropped redundant generator {_gen_str(g)}")
                continue
            minimal.append(g)
        return cls(n, tuple(minimal)), notices

    def __str__(self) -> str:
        return "(" + ", ".join(_gen_str(g) for g in self.generators) + ")"


def _gen_str(g: frozenset[int]) -> str:
    return "*".join(f"x{i}" for i in sorted(g))


def maximal_ideal(n: int) -> MonomialIdeal:
    return MonomialIdeal(n, tuple(frozenset({i}) for i in range(1, n + 1)))


def parse_ideal(text: str, n: int) -> tuple[MonomialIdeal, list[str]]:
    """Parse the CLI syntax ``x1*x2, x2*x3``; exponents are radicalized."""
    notices = []
    subsets = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        vars_seen = set()
        for factor in chunk.split("*"):
            m = re.fullmatch(r"\s*x(\d+)(?:\^(\d+))?\s*", factor)
            if not m:
                raise ValueError(f"bad monomial factor {factor!r}")
            if m.group(2) and int(m.group(2)) != 1:
                notices.append(f"replaced non-squarefree generator {chunk.strip()} by its radical")
            vars_seen.add(int(m.group(1)))
        subsets.append(vars_seen)
    if not subsets:
        raise ValueError(f"no generators in {text!r}")
    ideal, more = MonomialIdeal.from_subsets(n, subsets)
    return ideal, notices + more


@dataclass
class CechComplex:
    """C^0 -> C^1 -> ... -> C^r with C^p the sum of localizations over
    p-subsets of the generators and signed inclusion differentials."""

    module: StraightModule
    ideal: MonomialIdeal
    terms: list[StraightModule]
    diffs: list[StraightMorphism]
    subsets: list[list[tuple[int, ...]]] = field(default_factory=list)

    def length(self) -> int:
        return len(self.terms) - 1


def cech_complex(M: StraightModule, I: MonomialIdeal) -> CechComplex:
    """The Cech complex of M on the generators of I; d.d = 0 is asserted."""
    if M.n != I.n:
        raise ValueError(f"module has n={M.n} but ideal has n={I.n}")
    r = len(I.generators)
    gens = list(I.generators)

    def union(T) -> frozenset[int]:
        out: frozenset[int] = frozenset()
        for t in T:
            out = out | gens[t]
        return out

    spot_subsets: list[list[tuple[int, ...]]] = []
    spot_locs: list[list[StraightModule]] = []
    terms: list[StraightModule] = []
    for p in range(r + 1):
        subs = [tuple(T) for T in itertools.combinations(range(r), p)]
        locs = [localize(M, union(T)) for T in subs]
        spot_subsets.append(subs)
        spot_locs.append(locs)
        terms.append(locs[0] if len(locs) == 1 else direct_sum(locs))
    diffs: list[StraightMorphism] = []
    for p in range(r):
        entries = {}
        tgt_index = {T: k for k, T in enumerate(spot_subsets[p + 1])}
        for si, T in enumerate(spot_subsets[p]):
            for t in range(r):
                if t in T:
                    continue
                Tp = tuple(sorted(T + (t,)))
                sign = (-1) ** Tp.index(t)
                extra = union(Tp) - union(T)
                comp = localization_map(spot_locs[p][si], extra)
                # localize(localize(M, A), B) equals localize(M, A|B) on the nose
                if comp.target != spot_locs[p + 1][tgt_index[Tp]]:
                    raise AssertionError("localization towers disagree (bug)")
                comp = StraightMorphism(spot_locs[p][si], spot_locs[p + 1][tgt_index[Tp]],
                                        comp.mats, check=False)
                entries[(tgt_index[Tp], si)] = (sign, comp)
        diffs.append(block_morphism(spot_locs[p], spot_locs[p + 1], entries,
                                    src_sum=terms[p], tgt_sum=terms[p + 1]))
    for p in range(r - 1):
        if not compose(diffs[p + 1], diffs[p]).is_zero():
            raise AssertionError("Cech differential does not square to zero (bug)")
    return CechComplex(M, I, terms, diffs, spot_subsets)


def _cohomology_of(cx: CechComplex, i: int) -> StraightModule:
    r = cx.length()
    incoming = cx.diffs[i - 1] if i > 0 else None
    outgoing = cx.diffs[i] if i < r else None
    return homology_at(incoming, outgoing)


def local_cohomology(M: StraightModule, I: MonomialIdeal, i: int) -> StraightModule:
    """H^i_I(M) as a straight module (i-th cohomology of the Cech complex)."""
    if i < 0:
        raise ValueError("cohomological index must be non-negative")
    if i > len(I.generators):
        return module_zero(M.n)
    return _cohomology_of(cech_complex(M, I), i)


def all_local_cohomology(M: StraightModule, I: MonomialIdeal) -> dict[int, StraightModule]:
    """Every H^i_I(M) from a single Cech complex build."""
    cx = cech_complex(M, I)
    return {i: _cohomology_of(cx, i) for i in range(cx.length() + 1)}


_PROFILE_CACHE: dict[MonomialIdeal, tuple[int, ...]] = {}


def cd_profile(I: MonomialIdeal) -> list[int]:
    """The exact set of i with H^i_I(R) != 0."""
    if I not in _PROFILE_CACHE:
        spots = all_local_cohomology(module_R(I.n), I)
        _PROFILE_CACHE[I] = tuple(i for i, H in sorted(spots.items()) if not H.is_zero())
    return list(_PROFILE_CACHE[I])


def supported_at_m(M: StraightModule) -> bool:
    """True iff every piece sits in the all-negative region, i.e. every
    element is killed by a power of each x_i."""
    allm = (-1,) * M.n
    return all(d == 0 for eps, d in M.dims.items() if eps != allm)


def lyubeznik_pipeline(stages, n: int) -> StraightModule:
    """Left fold of local-cohomology functors starting from R.

    stages is a list of (MonomialIdeal, cohomological index) applied in
    order: the last entry of the list acts last.
    """
    M = module_R(n)
    for ideal, i in stages:
        if ideal.n != n:
            raise ValueError("pipeline ideal has wrong variable count")
        M = local_cohomology(M, ideal, i)
    return M


_PIPE = re.compile(r"\s*H(\d+)\(([^)]*)\)\s*")


def parse_pipeline(text: str, n: int) -> tuple[list[tuple[MonomialIdeal, int]], list[str]]:
    """Parse the CLI syntax ``H1(x1);H1(x1,x2)`` into pipeline stages."""
    stages = []
    notices = []
    for chunk in text.split(";"):
        if not chunk.strip():
            continue
        m = _PIPE.fullmatch(chunk)
        if not m:
            raise ValueError(f"bad pipeline stage {chunk!r}")
        ideal, notes = parse_ideal(m.group(2), n)
        notices.extend(notes)
        stages.append((ideal, int(m.group(1))))
    if not stages:
        raise ValueError(f"no stages in {text!r}")
    return stages, notices
