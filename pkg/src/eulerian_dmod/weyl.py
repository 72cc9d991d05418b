"""Exact normal-form arithmetic in the graded Weyl algebra A_n(Q).

Elements are stored in normal form: every term is a rational multiple of
x^alpha d^beta with all x-factors to the left of all d-factors.  The
grading puts deg x_i = 1 and deg d_i = -1, so the term x^alpha d^beta is
homogeneous of degree |alpha| - |beta|.

Besides the product, this module provides the tau anti-involution
(tau(h d^alpha) = (-1)^|alpha| d^alpha h), the Euler operator
sum_i x_i d_i, the invariance of the Euler operator under linear changes
of variables, reduction modulo the right ideal generated by the d_i, and
an ASCII parser/printer (syntax: ``3*x1^2*d1 - 1/2*d2^3``).
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import comb, perm

from .config import check_variable_count
from .linalg import QMat

Q = Fraction

# A term key is (alpha, beta): the exponents of the x- and d-factors.
TermKey = tuple[tuple[int, ...], tuple[int, ...]]


class WeylElement:
    """An element of A_n(Q) in normal form; immutable."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: dict[TermKey, Fraction] | None = None):
        check_variable_count(n)
        clean: dict[TermKey, Fraction] = {}
        for (alpha, beta), coeff in (terms or {}).items():
            alpha = tuple(int(a) for a in alpha)
            beta = tuple(int(b) for b in beta)
            if len(alpha) != n or len(beta) != n:
                raise ValueError(f"exponent tuples must have length {n}")
            if any(a < 0 for a in alpha) or any(b < 0 for b in beta):
                raise ValueError("negative exponents are not allowed")
            coeff = Q(coeff)
            if coeff != 0:
                clean[(alpha, beta)] = coeff
        self.n = n
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, n: int) -> "WeylElement":
        return cls(n, {})

    @classmethod
    def one(cls, n: int) -> "WeylElement":
        return cls.monomial(n, (0,) * n, (0,) * n)

    @classmethod
    def monomial(cls, n: int, alpha, beta, coeff=1) -> "WeylElement":
        return cls(n, {(tuple(alpha), tuple(beta)): Q(coeff)})

    @classmethod
    def x(cls, n: int, i: int) -> "WeylElement":
        """The generator x_i (1-based)."""
        return cls.monomial(n, _unit(n, i), (0,) * n)

    @classmethod
    def d(cls, n: int, i: int) -> "WeylElement":
        """The generator d_i (1-based)."""
        return cls.monomial(n, (0,) * n, _unit(n, i))

    # -- ring structure ----------------------------------------------------

    def __add__(self, other: "WeylElement") -> "WeylElement":
        self._check_same_n(other)
        terms = dict(self.terms)
        for key, c in other.terms.items():
            terms[key] = terms.get(key, Q(0)) + c
        return WeylElement(self.n, terms)

    def __sub__(self, other: "WeylElement") -> "WeylElement":
        return self + (-other)

    def __neg__(self) -> "WeylElement":
        return self.scale(-1)

    def scale(self, c) -> "WeylElement":
        c = Q(c)
        return WeylElement(self.n, {k: c * v for k, v in self.terms.items()})

    def __rmul__(self, c) -> "WeylElement":
        if isinstance(c, (int, Fraction)):
            return self.scale(c)
        return NotImplemented

    def __mul__(self, other) -> "WeylElement":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, WeylElement):
            return multiply(self, other)
        return NotImplemented

    def __pow__(self, k: int) -> "WeylElement":
        if k < 0:
            raise ValueError("negative powers are not defined")
        result = WeylElement.one(self.n)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        return isinstance(other, WeylElement) and self.n == other.n and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.n, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    # -- grading -----------------------------------------------------------

    def degree(self) -> int | None:
        """Common degree of all terms, or None if not homogeneous or zero."""
        degs = {sum(a) - sum(b) for a, b in self.terms}
        return degs.pop() if len(degs) == 1 else None

    def is_homogeneous(self) -> bool:
        return len({sum(a) - sum(b) for a, b in self.terms}) <= 1

    def homogeneous_component(self, d: int) -> "WeylElement":
        return WeylElement(
            self.n, {k: c for k, c in self.terms.items() if sum(k[0]) - sum(k[1]) == d}
        )

    # -- misc ---------------------------------------------------------------

    def restrict_beta_zero(self) -> "WeylElement":
        """Keep only terms with no d-factors."""
        zero = (0,) * self.n
        return WeylElement(self.n, {k: c for k, c in self.terms.items() if k[1] == zero})

    def _check_same_n(self, other: "WeylElement") -> None:
        if self.n != other.n:
            raise ValueError(f"variable count mismatch: {self.n} vs {other.n}")

    def __repr__(self) -> str:
        return f"WeylElement({self.n}, {format_weyl(self)!r})"

    def __str__(self) -> str:
        return format_weyl(self)


def _unit(n: int, i: int) -> tuple[int, ...]:
    if not 1 <= i <= n:
        raise ValueError(f"variable index {i} out of range 1..{n}")
    return tuple(1 if j == i - 1 else 0 for j in range(n))


def multiply(a: WeylElement, b: WeylElement) -> WeylElement:
    """Normal-form product, expanding d_i x_i = x_i d_i + 1 as needed."""
    a._check_same_n(b)
    n = a.n
    terms: dict[TermKey, Fraction] = {}
    for (al, be), ca in a.terms.items():
        for (ga, de), cb in b.terms.items():
            # (x^al d^be)(x^ga d^de): commute d^be past x^ga coordinatewise,
            # d^b x^c = sum_k C(b,k) * c!/(c-k)! * x^(c-k) d^(b-k).
            base = ca * cb
            expansions = [((), (), Q(1))]
            for i in range(n):
                bi, ci = be[i], ga[i]
                new = []
                for xs, ds, coeff in expansions:
                    for k in range(min(bi, ci) + 1):
                        new.append((xs + (ci - k,), ds + (bi - k,), coeff * comb(bi, k) * perm(ci, k)))
                expansions = new
            for xs, ds, coeff in expansions:
                alpha = tuple(al[i] + xs[i] for i in range(n))
                beta = tuple(ds[i] + de[i] for i in range(n))
                key = (alpha, beta)
                terms[key] = terms.get(key, Q(0)) + base * coeff
    return WeylElement(n, terms)


def tau(a: WeylElement) -> WeylElement:
    """The anti-involution tau(h d^alpha) = (-1)^|alpha| d^alpha h."""
    n = a.n
    result = WeylElement.zero(n)
    for (alpha, beta), c in a.terms.items():
        sign = -1 if sum(beta) % 2 else 1
        dpart = WeylElement.monomial(n, (0,) * n, beta, c * sign)
        xpart = WeylElement.monomial(n, alpha, (0,) * n)
        result = result + multiply(dpart, xpart)
    return result


def euler_operator(n: int) -> WeylElement:
    """The Euler operator sum_{i=1}^n x_i d_i; homogeneous of degree 0."""
    check_variable_count(n)
    result = WeylElement.zero(n)
    for i in range(1, n + 1):
        result = result + WeylElement.monomial(n, _unit(n, i), _unit(n, i))
    return result


def euler_change_check(b_matrix) -> bool:
    """Whether the Euler operator is invariant under y = B x.

    Expands sum_i y_i dy_i with y = B x and dx = B^T dy, reduces to normal
    form in the x/d variables and compares with sum_i x_i d_i.  Raises for
    a singular B.
    """
    rows = [list(r) for r in b_matrix]
    n = len(rows)
    check_variable_count(n)
    B = QMat.from_rows(rows, ncols=n)
    Binv = B.inverse()  # raises ValueError when singular
    total = WeylElement.zero(n)
    for i in range(n):
        y_i = WeylElement.zero(n)
        dy_i = WeylElement.zero(n)
        for j in range(n):
            if B.rows[i][j] != 0:
                y_i = y_i + B.rows[i][j] * WeylElement.x(n, j + 1)
            # dx = B^T dy  =>  dy_i = sum_j (B^-1)_{ji} dx_j
            if Binv.rows[j][i] != 0:
                dy_i = dy_i + Binv.rows[j][i] * WeylElement.d(n, j + 1)
        total = total + multiply(y_i, dy_i)
    return total == euler_operator(n)


def normal_form_mod_dA(a: WeylElement) -> WeylElement:
    """Representative of a + sum_i d_i*A_n with no d-factors.

    Computed as tau(keep-beta=0-terms(tau(a))): tau carries the right ideal
    dA onto the left ideal Ad, whose normal-form complement is spanned by
    the pure x-monomials.  Idempotent and Q-linear.
    """
    return tau(tau(a).restrict_beta_zero())


# -- ASCII parser / printer --------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<var>[xd]\d+)(?:\^(?P<pow>\d+))?)\s*")


def parse_weyl(text: str, n: int | None = None) -> WeylElement:
    """Parse the ASCII syntax ``3*x1^2*d1 - 1/2*d2^3`` into a WeylElement.

    Factors within a term are joined by '*'; x-factors must come before
    d-factors (input is expected in normal form).  If n is omitted it is
    inferred from the largest variable index.
    """
    text = text.strip()
    if not text:
        raise ValueError("empty element")
    chunks: list[tuple[int, str]] = []
    pending_sign = 1
    for piece in re.findall(r"[+-]|[^+-]+", text):
        if piece == "+":
            continue
        if piece == "-":
            pending_sign = -pending_sign
            continue
        body = piece.strip()
        if body:
            chunks.append((pending_sign, body))
            pending_sign = 1
    if not chunks:
        raise ValueError(f"could not parse {text!r}")

    parsed_terms: list[tuple[int, Fraction, dict[int, int], dict[int, int]]] = []
    max_index = 0
    for sgn, chunk in chunks:
        coeff = Q(1)
        xpow: dict[int, int] = {}
        dpow: dict[int, int] = {}
        seen_d = False
        for factor in chunk.split("*"):
            factor = factor.strip()
            if not factor:
                raise ValueError(f"empty factor in term {chunk!r}")
            m = _TOKEN.fullmatch(factor)
            if not m:
                raise ValueError(f"bad factor {factor!r}")
            if m.group("num"):
                coeff *= Q(m.group("num"))
                continue
            var = m.group("var")
            power = int(m.group("pow") or 1)
            idx = int(var[1:])
            max_index = max(max_index, idx)
            if var[0] == "x":
                if seen_d:
                    raise ValueError(f"x-factor after d-factor in {chunk!r}: input must be in normal form")
                xpow[idx] = xpow.get(idx, 0) + power
            else:
                seen_d = True
                dpow[idx] = dpow.get(idx, 0) + power
        parsed_terms.append((sgn, coeff, xpow, dpow))

    nn = n if n is not None else max(max_index, 1)
    if max_index > nn:
        raise ValueError(f"variable index {max_index} exceeds n={nn}")
    result = WeylElement.zero(nn)
    for sgn, coeff, xpow, dpow in parsed_terms:
        alpha = tuple(xpow.get(i + 1, 0) for i in range(nn))
        beta = tuple(dpow.get(i + 1, 0) for i in range(nn))
        result = result + WeylElement.monomial(nn, alpha, beta, sgn * coeff)
    return result


def format_weyl(a: WeylElement) -> str:
    """Canonical printer; terms in descending lex order on (alpha, beta)."""
    if not a.terms:
        return "0"
    pieces = []
    for (alpha, beta), coeff in sorted(a.terms.items(), reverse=True):
        factors = []
        for i, e in enumerate(alpha):
            if e == 1:
                factors.append(f"x{i + 1}")
            elif e > 1:
                factors.append(f"x{i + 1}^{e}")
        for i, e in enumerate(beta):
            if e == 1:
                factors.append(f"d{i + 1}")
            elif e > 1:
                factors.append(f"d{i + 1}^{e}")
        mag = abs(coeff)
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([str(mag)] + factors)
        pieces.append(("- " if coeff < 0 else "+ ") + body)
    out = " ".join(pieces)
    return out[2:] if out.startswith("+ ") else "-" + out[2:]
