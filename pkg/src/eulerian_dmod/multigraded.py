"""Finite signed-region ("straight") representation of Z^n-graded D-modules.

A straight module stores one finite-dimensional Q-vector space per sign
region eps in {0,-1}^n together with crossing matrices:

  - the piece at multidegree a is V_clamp(a + offset), where clamp sends a
    coordinate to 0 if it is >= 0 and to -1 otherwise;
  - x_i acts as the identity on interior steps and as xcross_i on the
    crossing step (a + offset)_i = -1 -> 0;
  - d_i acts as the scalar (a + offset)_i on interior steps and as
    dcross_i on the crossing step (a + offset)_i = 0 -> -1.

The offset realizes degree shifts: a module with offset c represents the
shift of the offset-zero module by sum(c), i.e. its degree-d piece equals
the original piece in degree d + sum(c).  The Euler operator acts on the
piece at multidegree a as sum(a) + sum(offset) times the identity (plus
crossing composites that validation forces to vanish).

This class of modules contains R, the shifted injective hull E(n), every
localization R_{x_S}, and is closed under kernels and cokernels of
multidegree-zero morphisms -- which is everything the Cech/Koszul/Tor
pipelines produce.  Validation checks the Weyl relations on the box
[-2,1]^n; every qualitative combination of interior and crossing steps
occurs inside that box, so the identities checked there hold everywhere.
"""

from __future__ import annotations

import itertools
import json
from fractions import Fraction
from math import comb

from .config import check_variable_count
from .linalg import QMat, cokernel_projection

Q = Fraction

Region = tuple[int, ...]


class Infinite:
    """Distinguished value for infinite graded pieces (never a number)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "infinite"


INFINITE = Infinite()


def _add_dim(a, b):
    if isinstance(a, Infinite) or isinstance(b, Infinite):
        return INFINITE
    return a + b


class GradedDimVector:
    """Finite map total degree -> dimension; zero entries are not stored.

    Dimensions are non-negative integers or INFINITE (localizations have
    legitimately infinite Z-graded pieces and silent truncation would
    corrupt theorem checks).
    """

    __slots__ = ("dims",)

    def __init__(self, dims=None):
        clean = {}
        for d, v in (dims or {}).items():
            if isinstance(v, Infinite):
                clean[int(d)] = INFINITE
            elif v:
                if v < 0:
                    raise ValueError("negative dimension")
                clean[int(d)] = int(v)
        self.dims = clean

    def __getitem__(self, d: int):
        return self.dims.get(d, 0)

    def __eq__(self, other) -> bool:
        return isinstance(other, GradedDimVector) and self.dims == other.dims

    def __hash__(self):
        return hash(frozenset(self.dims.items()))

    def __bool__(self) -> bool:
        return bool(self.dims)

    def items(self):
        return sorted(self.dims.items())

    def support(self) -> list[int]:
        return sorted(self.dims)

    def shifted(self, k: int) -> "GradedDimVector":
        return GradedDimVector({d + k: v for d, v in self.dims.items()})

    def __add__(self, other: "GradedDimVector") -> "GradedDimVector":
        dims = dict(self.dims)
        for d, v in other.dims.items():
            dims[d] = _add_dim(dims.get(d, 0), v)
        return GradedDimVector(dims)

    def is_concentrated_at(self, degree: int) -> bool:
        return all(d == degree for d in self.dims)

    def total(self):
        t = 0
        for v in self.dims.values():
            t = _add_dim(t, v)
        return t

    def to_jsonable(self) -> dict[str, object]:
        return {str(d): ("infinite" if isinstance(v, Infinite) else v) for d, v in self.items()}

    def __repr__(self) -> str:
        return f"GradedDimVector({dict(self.items())!r})"


_REGION_CACHE: dict[int, tuple[Region, ...]] = {}


def regions(n: int) -> tuple[Region, ...]:
    if n not in _REGION_CACHE:
        _REGION_CACHE[n] = tuple(itertools.product((0, -1), repeat=n))
    return _REGION_CACHE[n]


def clamp(b) -> Region:
    return tuple(0 if bi >= 0 else -1 for bi in b)


def flip(eps: Region, i: int) -> Region:
    return tuple(-1 - e if j == i else e for j, e in enumerate(eps))


_BOX_CACHE: dict[int, list[tuple[int, ...]]] = {}


def validation_box(n: int) -> list[tuple[int, ...]]:
    if n not in _BOX_CACHE:
        _BOX_CACHE[n] = [tuple(b) for b in itertools.product((-2, -1, 0, 1), repeat=n)]
    return _BOX_CACHE[n]


_SCALED_ID_CACHE: dict[tuple[int, int], QMat] = {}


def _scaled_identity(dim: int, c: int) -> QMat:
    key = (dim, c)
    if key not in _SCALED_ID_CACHE:
        _SCALED_ID_CACHE[key] = QMat.identity(dim).scale(c)
    return _SCALED_ID_CACHE[key]


class StraightModule:
    """A Z^n-graded holonomic D-module constant on sign regions.

    Treated as immutable after construction; every operation is pure.
    """

    __slots__ = ("n", "offset", "dims", "labels", "xcross", "dcross", "_validated")

    def __init__(self, n, offset, dims, xcross, dcross, labels=None, check=True):
        # n = 0 is the degenerate A_0 = Q case (fully reduced Koszul output).
        check_variable_count(n, allow_zero=True)
        self.n = n
        self.offset = tuple(int(c) for c in offset)
        if len(self.offset) != n:
            raise ValueError("offset length must equal n")
        self.dims = {}
        for eps in regions(n):
            d = int(dims.get(eps, 0))
            if d < 0:
                raise ValueError("negative region dimension")
            self.dims[eps] = d
        self.labels = {}
        for eps in regions(n):
            lab = tuple((labels or {}).get(eps, ())) or tuple(
                f"e{k}" for k in range(self.dims[eps])
            )
            if len(lab) != self.dims[eps]:
                raise ValueError("label count does not match region dimension")
            self.labels[eps] = lab
        self.xcross = {}
        self.dcross = {}
        for eps in regions(n):
            for i in range(n):
                if eps[i] == -1:
                    mat = xcross.get((i, eps))
                    if mat is None:
                        mat = QMat.zeros(self.dims[flip(eps, i)], self.dims[eps])
                    self.xcross[(i, eps)] = mat
                else:
                    mat = dcross.get((i, eps))
                    if mat is None:
                        mat = QMat.zeros(self.dims[flip(eps, i)], self.dims[eps])
                    self.dcross[(i, eps)] = mat
        self._validated = False
        if check:
            self.validate()

    # -- basic queries -------------------------------------------------------

    def dim(self, eps: Region) -> int:
        return self.dims[eps]

    def is_zero(self) -> bool:
        return all(d == 0 for d in self.dims.values())

    def total_offset(self) -> int:
        return sum(self.offset)

    def __eq__(self, other) -> bool:
        """Structural equality of the region data (labels excluded)."""
        return (
            isinstance(other, StraightModule)
            and self.n == other.n
            and self.offset == other.offset
            and self.dims == other.dims
            and self.xcross == other.xcross
            and self.dcross == other.dcross
        )

    def __hash__(self):
        return hash((self.n, self.offset, tuple(sorted(self.dims.items()))))

    def __repr__(self) -> str:
        nz = {e: d for e, d in self.dims.items() if d}
        return f"StraightModule(n={self.n}, offset={self.offset}, dims={nz})"

    # -- reconstituted actions on normalized multidegrees ---------------------
    # b denotes a + offset; crossings happen at b_i = -1 (x) and b_i = 0 (d).

    def act_x(self, i: int, b) -> QMat:
        """Matrix of x_{i+1}: piece(b) -> piece(b + e_i), b normalized."""
        eps = clamp(b)
        if b[i] == -1:
            return self.xcross[(i, eps)]
        return QMat.identity(self.dims[eps])

    def act_d(self, i: int, b) -> QMat:
        """Matrix of d_{i+1}: piece(b) -> piece(b - e_i), b normalized."""
        eps = clamp(b)
        if b[i] == 0:
            return self.dcross[(i, eps)]
        return _scaled_identity(self.dims[eps], b[i])

    def euler_matrix(self, b) -> QMat:
        """Matrix of sum_i x_i d_i on the piece at normalized multidegree b."""
        dim = self.dims[clamp(b)]
        total = QMat.zeros(dim, dim)
        for i in range(self.n):
            b_down = tuple(bj - (1 if j == i else 0) for j, bj in enumerate(b))
            total = total + self.act_x(i, b_down) @ self.act_d(i, b)
        return total

    # -- validation ------------------------------------------------------------

    def crossing_composites_vanish(self) -> bool:
        for eps in regions(self.n):
            for i in range(self.n):
                if eps[i] == 0:
                    down = self.dcross[(i, eps)]
                    up = self.xcross[(i, flip(eps, i))]
                    if not (up @ down).is_zero() or not (down @ up).is_zero():
                        return False
        return True

    def validate(self) -> None:
        """Check shapes and the Weyl relations on the box [-2,1]^n."""
        if self._validated:
            return
        for eps in regions(self.n):
            for i in range(self.n):
                key = (i, eps)
                mat = self.xcross[key] if eps[i] == -1 else self.dcross[key]
                want = (self.dims[flip(eps, i)], self.dims[eps])
                if (mat.nrows, mat.ncols) != want:
                    raise ValueError(f"crossing matrix at {key} has shape "
                                     f"{(mat.nrows, mat.ncols)}, expected {want}")
        if not self.crossing_composites_vanish():
            raise ValueError("crossing composites xcross.dcross / dcross.xcross are nonzero")
        n = self.n
        for b in validation_box(n):
            if self.dims[clamp(b)] == 0:
                # every identity below equates maps out of the piece at b
                continue
            e = [tuple(bj + (1 if j == i else 0) for j, bj in enumerate(b)) for i in range(n)]
            f = [tuple(bj - (1 if j == i else 0) for j, bj in enumerate(b)) for i in range(n)]
            for i in range(n):
                # d_i x_i - x_i d_i = 1 on the piece at b
                lhs = self.act_d(i, e[i]) @ self.act_x(i, b)
                rhs = self.act_x(i, f[i]) @ self.act_d(i, b)
                if lhs - rhs != QMat.identity(self.dims[clamp(b)]):
                    raise ValueError(f"[d_{i+1}, x_{i+1}] != 1 at multidegree {b}")
                for j in range(n):
                    if j == i:
                        continue
                    # d_i x_j = x_j d_i
                    lhs = self.act_d(i, e[j]) @ self.act_x(j, b)
                    rhs = self.act_x(j, f[i]) @ self.act_d(i, b)
                    if lhs != rhs:
                        raise ValueError(f"[d_{i+1}, x_{j+1}] != 0 at multidegree {b}")
                    if j > i:
                        # x_i x_j = x_j x_i and d_i d_j = d_j d_i
                        if self.act_x(i, e[j]) @ self.act_x(j, b) != self.act_x(j, e[i]) @ self.act_x(i, b):
                            raise ValueError(f"[x_{i+1}, x_{j+1}] != 0 at multidegree {b}")
                        if self.act_d(i, f[j]) @ self.act_d(j, b) != self.act_d(j, f[i]) @ self.act_d(i, b):
                            raise ValueError(f"[d_{i+1}, d_{j+1}] != 0 at multidegree {b}")
        self._validated = True

    # -- graded dimensions -------------------------------------------------------

    def graded_dimensions(self, lo: int, hi: int) -> GradedDimVector:
        """Exact dimensions of the total-degree pieces in [lo, hi].

        Per region the count of lattice points with fixed total degree is a
        closed-form simplex count; regions that are unbounded in mixed
        directions report INFINITE.
        """
        if lo > hi:
            raise ValueError("empty window")
        out: dict[int, object] = {}
        shift = self.total_offset()
        for d in range(lo, hi + 1):
            s = d + shift
            total: object = 0
            for eps, dim in self.dims.items():
                if dim == 0:
                    continue
                cnt = _region_degree_count(eps, s)
                if isinstance(cnt, Infinite):
                    total = INFINITE
                    break
                total = _add_dim(total, dim * cnt)
            if total:
                out[d] = total
        return GradedDimVector(out)


def graded_dimensions(M: StraightModule, lo: int, hi: int) -> GradedDimVector:
    """Module-level alias for StraightModule.graded_dimensions."""
    return M.graded_dimensions(lo, hi)


def _region_degree_count(eps: Region, s: int):
    """Number of lattice points a with clamp(a) = eps and sum(a) = s."""
    p = sum(1 for e in eps if e == 0)
    q = len(eps) - p
    if p and q:
        return INFINITE
    if q == 0:
        if p == 0:
            return 1 if s == 0 else 0
        return comb(s + p - 1, p - 1) if s >= 0 else 0
    # all coordinates <= -1
    return comb(-s - 1, q - 1) if s <= -q else 0


# -- standard catalog constructors ------------------------------------------------


def module_zero(n: int) -> StraightModule:
    return StraightModule(n, (0,) * n, {}, {}, {})

def module_R(n: int) -> StraightModule:
    """The polynomial ring R = Q[x_1..x_n] as a straight module."""
    dims = {(0,) * n: 1}
    labels = {(0,) * n: ("1",)}
    return StraightModule(n, (0,) * n, dims, {}, {}, labels)


def module_E(n: int) -> StraightModule:
    """E(n): the shifted injective hull of Q = R/m; socle in degree -n.

    Basis x^a for a <= (-1,..,-1); the only nonzero region is (-1,..,-1).
    """
    allm = (-1,) * n
    dims = {allm: 1}
    labels = {allm: ("x^" + ",".join(["-1"] * n),)}
    return StraightModule(n, (0,) * n, dims, {}, {}, labels)


def module_localization(n: int, S) -> StraightModule:
    """R_{x_S}: the localization of R at the product of x_i, i in S (1-based)."""
    S0 = _to_zero_based(n, S)
    dims = {}
    labels = {}
    for eps in regions(n):
        neg = {i for i, e in enumerate(eps) if e == -1}
        if neg <= S0:
            dims[eps] = 1
            labels[eps] = ("x^(" + ",".join(str(e) for e in eps) + ")",)
    xcross = {}
    for eps in regions(n):
        for i in range(n):
            if eps[i] == -1 and dims.get(eps, 0) and i in S0:
                xcross[(i, eps)] = QMat.identity(1)
    return StraightModule(n, (0,) * n, dims, xcross, {}, labels)


def make_standard(kind: str, n: int, S=None) -> StraightModule:
    """Standard catalog constructor: kind in {"R", "E", "localization"}."""
    if kind == "R":
        return module_R(n)
    if kind in ("E", "E_shifted_n"):
        return module_E(n)
    if kind in ("localization", "loc"):
        return module_localization(n, S or ())
    raise ValueError(f"unknown standard module kind {kind!r}")


def _to_zero_based(n: int, S) -> frozenset[int]:
    S0 = frozenset(int(i) - 1 for i in S)
    if any(i < 0 or i >= n for i in S0):
        raise ValueError(f"variable subset {set(S)} out of range 1..{n}")
    return S0


# -- shift and localization --------------------------------------------------------


def shift(M: StraightModule, c) -> StraightModule:
    """The degree shift: dim shift(M, c)_d = dim M_(d + sum(c))."""
    c = tuple(int(x) for x in c)
    if len(c) != M.n:
        raise ValueError("shift vector length must equal n")
    out = StraightModule(M.n, tuple(a + b for a, b in zip(M.offset, c)),
                         M.dims, M.xcross, M.dcross, M.labels, check=False)
    out._validated = M._validated
    return out


def localize(M: StraightModule, S) -> StraightModule:
    """Invert x_i for i in S (1-based); pieces transported to the ">= 0" side."""
    S0 = _to_zero_based(M.n, S)
    if not S0:
        return M

    def source(eps: Region) -> Region:
        return tuple(0 if i in S0 else e for i, e in enumerate(eps))

    dims = {eps: M.dims[source(eps)] for eps in regions(M.n)}
    labels = {eps: M.labels[source(eps)] for eps in regions(M.n)}
    xcross = {}
    dcross = {}
    for eps in regions(M.n):
        for i in range(M.n):
            if eps[i] == -1:
                if i in S0:
                    xcross[(i, eps)] = QMat.identity(dims[eps])
                else:
                    xcross[(i, eps)] = M.xcross[(i, source(eps))]
            else:
                if i in S0:
                    dcross[(i, eps)] = QMat.zeros(dims[eps], dims[eps])
                else:
                    dcross[(i, eps)] = M.dcross[(i, source(eps))]
    return StraightModule(M.n, M.offset, dims, xcross, dcross, labels)


# -- morphisms ----------------------------------------------------------------------


class StraightMorphism:
    """A multidegree-zero morphism: one matrix per region, commuting with
    all reconstituted x_i and d_i actions (checked on the box [-2,1]^n)."""

    __slots__ = ("source", "target", "mats", "_validated")

    def __init__(self, source: StraightModule, target: StraightModule, mats, check=True):
        if source.n != target.n:
            raise ValueError("morphism endpoints have different n")
        if source.offset != target.offset:
            raise ValueError("morphism endpoints have different offsets")
        self.source = source
        self.target = target
        self.mats = {}
        for eps in regions(source.n):
            mat = mats.get(eps)
            if mat is None:
                mat = QMat.zeros(target.dims[eps], source.dims[eps])
            self.mats[eps] = mat
        self._validated = False
        if check:
            self.validate()

    def validate(self) -> None:
        if self._validated:
            return
        for eps in regions(self.source.n):
            mat = self.mats[eps]
            want = (self.target.dims[eps], self.source.dims[eps])
            if (mat.nrows, mat.ncols) != want:
                raise ValueError(f"morphism matrix at {eps} has shape "
                                 f"{(mat.nrows, mat.ncols)}, expected {want}")
        n = self.source.n
        for b in validation_box(n):
            eps = clamp(b)
            if self.source.dims[eps] == 0:
                # both composites are maps out of the source piece at b
                continue
            for i in range(n):
                up = tuple(bj + (1 if j == i else 0) for j, bj in enumerate(b))
                down = tuple(bj - (1 if j == i else 0) for j, bj in enumerate(b))
                if self.target.act_x(i, b) @ self.mats[eps] != self.mats[clamp(up)] @ self.source.act_x(i, b):
                    raise ValueError(f"morphism does not commute with x_{i+1} at {b}")
                if self.target.act_d(i, b) @ self.mats[eps] != self.mats[clamp(down)] @ self.source.act_d(i, b):
                    raise ValueError(f"morphism does not commute with d_{i+1} at {b}")
        self._validated = True

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.mats.values())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, StraightMorphism)
            and self.source == other.source
            and self.target == other.target
            and self.mats == other.mats
        )

    def __repr__(self) -> str:
        return f"StraightMorphism({self.source!r} -> {self.target!r})"


def identity_morphism(M: StraightModule) -> StraightMorphism:
    return StraightMorphism(M, M, {eps: QMat.identity(M.dims[eps]) for eps in regions(M.n)},
                            check=False)


def zero_morphism(M: StraightModule, N: StraightModule) -> StraightMorphism:
    return StraightMorphism(M, N, {}, check=False)


def compose(g: StraightMorphism, f: StraightMorphism) -> StraightMorphism:
    """g after f."""
    if f.target != g.source:
        raise ValueError("composition mismatch")
    mats = {eps: g.mats[eps] @ f.mats[eps] for eps in regions(f.source.n)}
    out = StraightMorphism(f.source, g.target, mats, check=False)
    out._validated = f._validated and g._validated
    return out


def localization_map(M: StraightModule, S) -> StraightMorphism:
    """The canonical morphism M -> localize(M, S).

    On the region eps it is the composite of the crossing maps xcross_i over
    the i in S with eps_i = -1 (order immaterial by validation).
    """
    S0 = sorted(_to_zero_based(M.n, S))
    L = localize(M, S)
    mats = {}
    for eps in regions(M.n):
        cur = eps
        mat = QMat.identity(M.dims[eps])
        for i in S0:
            if cur[i] == -1:
                mat = M.xcross[(i, cur)] @ mat
                cur = flip(cur, i)
        mats[eps] = mat
    return StraightMorphism(M, L, mats)


# -- kernels, cokernels, homology ------------------------------------------------------


def kernel_with_inclusion(f: StraightMorphism) -> tuple[StraightModule, StraightMorphism]:
    M = f.source
    incl = {}
    dims = {}
    labels = {}
    for eps in regions(M.n):
        basis = f.mats[eps].nullspace()
        incl[eps] = basis
        dims[eps] = basis.ncols
        labels[eps] = tuple(f"k{j}" for j in range(basis.ncols))
    xcross = {}
    dcross = {}
    for eps in regions(M.n):
        for i in range(M.n):
            tgt = flip(eps, i)
            if eps[i] == -1:
                induced = incl[tgt].solve(M.xcross[(i, eps)] @ incl[eps])
                if induced is None:
                    raise ValueError("kernel is not preserved by xcross (invalid morphism)")
                xcross[(i, eps)] = induced
            else:
                induced = incl[tgt].solve(M.dcross[(i, eps)] @ incl[eps])
                if induced is None:
                    raise ValueError("kernel is not preserved by dcross (invalid morphism)")
                dcross[(i, eps)] = induced
    K = StraightModule(M.n, M.offset, dims, xcross, dcross, labels)
    return K, StraightMorphism(K, M, incl)


def cokernel_with_projection(f: StraightMorphism) -> tuple[StraightModule, StraightMorphism]:
    N = f.target
    proj = {}
    sect = {}
    dims = {}
    labels = {}
    for eps in regions(N.n):
        p, s = cokernel_projection(f.mats[eps])
        proj[eps] = p
        sect[eps] = s
        dims[eps] = p.nrows
        # Sections pick ambient standard basis vectors, so reuse their labels.
        idx = [next(i for i in range(N.dims[eps]) if s.rows[i][k] == 1) for k in range(p.nrows)]
        labels[eps] = tuple(N.labels[eps][i] for i in idx)
    xcross = {}
    dcross = {}
    for eps in regions(N.n):
        for i in range(N.n):
            tgt = flip(eps, i)
            if eps[i] == -1:
                xcross[(i, eps)] = proj[tgt] @ N.xcross[(i, eps)] @ sect[eps]
            else:
                dcross[(i, eps)] = proj[tgt] @ N.dcross[(i, eps)] @ sect[eps]
    C = StraightModule(N.n, N.offset, dims, xcross, dcross, labels)
    return C, StraightMorphism(N, C, proj)


def kernel_cokernel(f: StraightMorphism) -> tuple[StraightModule, StraightModule]:
    """Kernel and cokernel, region by region, with induced crossing maps.

    Exactness bookkeeping dim ker - dim src + dim tgt - dim coker = 0 holds
    per region and is asserted.
    """
    f.validate()
    K, _ = kernel_with_inclusion(f)
    C, _ = cokernel_with_projection(f)
    for eps in regions(f.source.n):
        if K.dims[eps] - f.source.dims[eps] + f.target.dims[eps] - C.dims[eps] != 0:
            raise AssertionError("rank bookkeeping violated (this is a bug)")
    return K, C


def factor_through_kernel(f: StraightMorphism, incl: StraightMorphism) -> StraightMorphism:
    """Given f: A -> B with im(f) inside K = incl.source, the map A -> K."""
    mats = {}
    for eps in regions(f.source.n):
        sol = incl.mats[eps].solve(f.mats[eps])
        if sol is None:
            raise ValueError("morphism does not factor through the kernel")
        mats[eps] = sol
    return StraightMorphism(f.source, incl.source, mats)


def homology_at(f: StraightMorphism | None, g: StraightMorphism | None) -> StraightModule:
    """Homology ker(g)/im(f) of a pair of composable morphisms (g.f = 0).

    Either side may be None (treated as a zero map)."""
    if g is None:
        if f is None:
            raise ValueError("homology_at needs at least one morphism")
        C, _ = cokernel_with_projection(f)
        return C
    if f is not None:
        if not compose(g, f).is_zero():
            raise ValueError("maps do not compose to zero")
    K, incl = kernel_with_inclusion(g)
    if f is None:
        return K
    h = factor_through_kernel(f, incl)
    C, _ = cokernel_with_projection(h)
    return C


# -- direct sums and block morphisms -----------------------------------------------------


def direct_sum(mods: list[StraightModule]) -> StraightModule:
    if not mods:
        raise ValueError("direct sum of no modules (pass module_zero instead)")
    n = mods[0].n
    offset = mods[0].offset
    for m in mods:
        if m.n != n or m.offset != offset:
            raise ValueError("direct summands must share n and offset")
    dims = {eps: sum(m.dims[eps] for m in mods) for eps in regions(n)}
    labels = {
        eps: tuple(f"{k}.{lab}" for k, m in enumerate(mods) for lab in m.labels[eps])
        for eps in regions(n)
    }
    xcross = {}
    dcross = {}
    for eps in regions(n):
        for i in range(n):
            blocks = [m.xcross[(i, eps)] if eps[i] == -1 else m.dcross[(i, eps)] for m in mods]
            mat = _block_diag(blocks)
            if eps[i] == -1:
                xcross[(i, eps)] = mat
            else:
                dcross[(i, eps)] = mat
    out = StraightModule(n, offset, dims, xcross, dcross, labels, check=False)
    out._validated = all(m._validated for m in mods)
    return out


def _block_diag(blocks: list[QMat]) -> QMat:
    nr = sum(b.nrows for b in blocks)
    nc = sum(b.ncols for b in blocks)
    rows = [[Q(0)] * nc for _ in range(nr)]
    r0 = c0 = 0
    for b in blocks:
        for i, row in enumerate(b.rows):
            for j, v in enumerate(row):
                rows[r0 + i][c0 + j] = v
        r0 += b.nrows
        c0 += b.ncols
    return QMat(nr, nc, rows)


def block_morphism(src: list[StraightModule], tgt: list[StraightModule],
                   entries: dict[tuple[int, int], tuple[int, StraightMorphism]],
                   src_sum: StraightModule | None = None,
                   tgt_sum: StraightModule | None = None) -> StraightMorphism:
    """Assemble a morphism between direct sums from signed components.

    entries maps (target block, source block) to (sign, component morphism).
    """
    S = src_sum if src_sum is not None else direct_sum(src)
    T = tgt_sum if tgt_sum is not None else direct_sum(tgt)
    n = S.n
    mats = {}
    for eps in regions(n):
        rows = [[Q(0)] * S.dims[eps] for _ in range(T.dims[eps])]
        for (ti, si), (sign, comp) in entries.items():
            r0 = sum(tgt[k].dims[eps] for k in range(ti))
            c0 = sum(src[k].dims[eps] for k in range(si))
            block = comp.mats[eps]
            for i, row in enumerate(block.rows):
                for j, v in enumerate(row):
                    rows[r0 + i][c0 + j] = sign * v
        mats[eps] = QMat(T.dims[eps], S.dims[eps], rows)
    return StraightMorphism(S, T, mats)


# -- structural recognizers ----------------------------------------------------------------


def is_E_power(M: StraightModule) -> int | None:
    """Multiplicity a with M = E(n)^a, or None if M is not of that shape.

    The zero module counts as E(n)^0.  For a nonzero module the offset must
    sum to zero (else the grading is shifted and M cannot equal E(n)^a) and
    every region other than (-1,..,-1) must vanish; any multidegree
    translate with total shift zero is graded-isomorphic to E(n)^a.
    """
    allm = (-1,) * M.n
    if M.is_zero():
        return 0
    if M.total_offset() != 0:
        return None
    for eps, d in M.dims.items():
        if eps != allm and d:
            return None
    return M.dims[allm]


def same_profile(M: StraightModule, N: StraightModule) -> bool:
    """Equality up to region-wise dimensions and crossing-map rank profile."""
    if M.n != N.n or M.offset != N.offset or M.dims != N.dims:
        return False
    for key in M.xcross:
        if M.xcross[key].rank() != N.xcross[key].rank():
            return False
    for key in M.dcross:
        if M.dcross[key].rank() != N.dcross[key].rank():
            return False
    return True


# -- JSON serialization -----------------------------------------------------------------


def _mat_to_json(mat: QMat) -> list[list[str]]:
    return [[str(x) for x in row] for row in mat.rows]


def _mat_from_json(data, nrows: int, ncols: int) -> QMat:
    return QMat(nrows, ncols, [[Q(x) for x in row] for row in data])


def module_to_jsonable(M: StraightModule) -> dict:
    doc = {
        "n": M.n,
        "offset": list(M.offset),
        "regions": [
            {"eps": list(eps), "dim": M.dims[eps], "labels": list(M.labels[eps])}
            for eps in regions(M.n)
            if M.dims[eps]
        ],
        "xcross": [],
        "dcross": [],
    }
    for (i, eps), mat in sorted(M.xcross.items()):
        if mat.nrows and mat.ncols:
            doc["xcross"].append({"dir": i + 1, "eps": list(eps), "mat": _mat_to_json(mat)})
    for (i, eps), mat in sorted(M.dcross.items()):
        if mat.nrows and mat.ncols:
            doc["dcross"].append({"dir": i + 1, "eps": list(eps), "mat": _mat_to_json(mat)})
    return doc


def module_from_jsonable(doc: dict) -> StraightModule:
    n = int(doc["n"])
    offset = tuple(int(c) for c in doc.get("offset", [0] * n))
    dims = {}
    labels = {}
    for reg in doc.get("regions", []):
        eps = tuple(int(e) for e in reg["eps"])
        dims[eps] = int(reg["dim"])
        if reg.get("labels"):
            labels[eps] = tuple(reg["labels"])
    xcross = {}
    dcross = {}
    for kind, store in (("xcross", xcross), ("dcross", dcross)):
        for entry in doc.get(kind, []):
            i = int(entry["dir"]) - 1
            eps = tuple(int(e) for e in entry["eps"])
            store[(i, eps)] = _mat_from_json(
                entry["mat"], dims.get(flip(eps, i), 0), dims.get(eps, 0)
            )
    return StraightModule(n, offset, dims, xcross, dcross, labels)


def module_to_json(M: StraightModule) -> str:
    return json.dumps(module_to_jsonable(M), sort_keys=True)


def module_from_json(text: str) -> StraightModule:
    return module_from_jsonable(json.loads(text))
