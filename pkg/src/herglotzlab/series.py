"""Truncated multivariate Taylor series on the complex unit ball.

Multi-indices are plain tuples of nonnegative ints.  A ``TruncatedSeries``
stores every coefficient c_alpha with ``|alpha| <= N`` densely, in graded
order (total degree first, descending lexicographic within each grade), so
that every module of the package addresses coefficients through one shared
basis layout.  Indices of degree ``<= m`` always form a prefix of the
enumeration, which the arithmetic below exploits.

Values are immutable after construction and all operations are pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

MAX_DIMENSION = 4
MAX_DEGREE = 16
DEFAULT_DEGREE = 10
WEIGHT_DEGREE_CAP = 20

_EVAL_CHUNK = 65536


class DimensionMismatchError(ValueError):
    """Operands live in a different number of variables."""


class DegreeCapError(ValueError):
    """A size or degree cap of the truncated-series layer was exceeded."""


class SeriesDomainError(ArithmeticError):
    """A series transform hit a pole or a divergence guard."""


def simplex_size(d: int, N: int) -> int:
    """Number of multi-indices alpha in d variables with |alpha| <= N."""
    return math.comb(N + d, d)


@lru_cache(maxsize=None)
def _grade_tuples(d: int, k: int) -> tuple:
    if d == 1:
        return ((k,),)
    out = []
    for a in range(k, -1, -1):
        for rest in _grade_tuples(d - 1, k - a):
            out.append((a,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def enumerate_multiindices(d: int, N: int) -> tuple:
    """All multi-indices with |alpha| <= N in the canonical graded order.

    The order is stable across runs: grades ascend, and inside a grade the
    tuples descend lexicographically, e.g. (2,0), (1,1), (0,2) for d=2, k=2.
    """
    if d < 1:
        raise DimensionMismatchError(f"dimension must be >= 1, got {d}")
    if N < 0:
        raise DegreeCapError(f"degree must be >= 0, got {N}")
    out = []
    for k in range(N + 1):
        out.extend(_grade_tuples(d, k))
    return tuple(out)


@lru_cache(maxsize=None)
def index_map(d: int, N: int) -> dict:
    return {a: i for i, a in enumerate(enumerate_multiindices(d, N))}


@lru_cache(maxsize=None)
def grade_slices(d: int, N: int) -> tuple:
    """(start, end) index ranges of each grade 0..N in the enumeration."""
    out = []
    start = 0
    for k in range(N + 1):
        size = len(_grade_tuples(d, k))
        out.append((start, start + size))
        start += size
    return tuple(out)


@lru_cache(maxsize=None)
def grade_array(d: int, N: int) -> np.ndarray:
    g = np.empty(simplex_size(d, N), dtype=np.int64)
    for k, (a, b) in enumerate(grade_slices(d, N)):
        g[a:b] = k
    g.setflags(write=False)
    return g


def weight(alpha: Sequence[int]) -> int:
    """Multinomial weight |alpha|!/alpha!: the number of distinct words
    with letter multiplicities alpha.  Exact integer arithmetic."""
    alpha = tuple(alpha)
    if any((not isinstance(a, (int, np.integer))) or a < 0 for a in alpha):
        raise ValueError(f"multi-index entries must be nonnegative ints: {alpha}")
    k = sum(int(a) for a in alpha)
    if k > WEIGHT_DEGREE_CAP:
        raise DegreeCapError(
            f"|alpha| = {k} exceeds the exact-weight cap {WEIGHT_DEGREE_CAP}"
        )
    w = math.factorial(k)
    for a in alpha:
        w //= math.factorial(int(a))
    return w


@lru_cache(maxsize=None)
def weight_ratio_array(d: int, N: int) -> np.ndarray:
    """alpha!/|alpha|! = 1/weight(alpha) per index, as float64."""
    arr = np.array(
        [1.0 / weight(a) for a in enumerate_multiindices(d, N)], dtype=float
    )
    arr.setflags(write=False)
    return arr


@lru_cache(maxsize=None)
def _parent_steps(d: int, N: int) -> tuple:
    """For each index i > 0: (variable j, index of alpha - e_j) with j the
    first nonzero coordinate.  Drives monomial-table recursions."""
    idx = index_map(d, N)
    steps_j = np.zeros(simplex_size(d, N), dtype=np.int64)
    steps_parent = np.zeros(simplex_size(d, N), dtype=np.int64)
    for i, a in enumerate(enumerate_multiindices(d, N)):
        if i == 0:
            continue
        j = next(p for p, v in enumerate(a) if v > 0)
        parent = a[:j] + (a[j] - 1,) + a[j + 1:]
        steps_j[i] = j
        steps_parent[i] = idx[parent]
    steps_j.setflags(write=False)
    steps_parent.setflags(write=False)
    return steps_j, steps_parent


@lru_cache(maxsize=None)
def _product_table(d: int, N: int) -> tuple:
    """Per index i, the output indices of alpha_i + beta for every beta with
    |beta| <= N - |alpha_i| (betas are the prefix of the enumeration)."""
    idx = index_map(d, N)
    alphas = enumerate_multiindices(d, N)
    table = []
    for a in alphas:
        rem = N - sum(a)
        row = np.fromiter(
            (idx[tuple(x + y for x, y in zip(a, b))]
             for b in enumerate_multiindices(d, rem)),
            dtype=np.int64,
            count=simplex_size(d, rem),
        )
        row.setflags(write=False)
        table.append(row)
    return tuple(table)


def _check_caps(d: int, N: int) -> None:
    if not 1 <= d <= MAX_DIMENSION:
        raise DegreeCapError(f"dimension {d} outside supported range 1..{MAX_DIMENSION}")
    if not 0 <= N <= MAX_DEGREE:
        raise DegreeCapError(f"degree {N} outside supported range 0..{MAX_DEGREE}")


@dataclass(frozen=True, eq=False)
class TruncatedSeries:
    """Dense complex coefficients on the simplex |alpha| <= N.

    ``from_boundary_measure`` marks truncations that stand for functions
    generated by a boundary-supported measure; the pairing layer refuses the
    r = 1 pairing for those (the underlying function need not extend past
    the sphere).
    """

    d: int
    N: int
    coeffs: np.ndarray
    from_boundary_measure: bool = False

    def __post_init__(self):
        _check_caps(self.d, self.N)
        c = np.array(self.coeffs, dtype=complex)
        if c.shape != (simplex_size(self.d, self.N),):
            raise DimensionMismatchError(
                f"expected {simplex_size(self.d, self.N)} coefficients for "
                f"d={self.d}, N={self.N}, got shape {c.shape}"
            )
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, d: int, N: int) -> "TruncatedSeries":
        return cls(d, N, np.zeros(simplex_size(d, N), dtype=complex))

    @classmethod
    def constant(cls, d: int, N: int, value: complex) -> "TruncatedSeries":
        c = np.zeros(simplex_size(d, N), dtype=complex)
        c[0] = value
        return cls(d, N, c)

    @classmethod
    def monomial(cls, d: int, N: int, alpha: Sequence[int],
                 value: complex = 1.0) -> "TruncatedSeries":
        alpha = tuple(int(a) for a in alpha)
        c = np.zeros(simplex_size(d, N), dtype=complex)
        c[index_map(d, N)[alpha]] = value
        return cls(d, N, c)

    @classmethod
    def coordinate(cls, d: int, N: int, j: int) -> "TruncatedSeries":
        """The coordinate function z_j (0-based j)."""
        alpha = tuple(1 if p == j else 0 for p in range(d))
        return cls.monomial(d, N, alpha)

    # -- basic accessors ----------------------------------------------

    def coeff(self, alpha: Sequence[int]) -> complex:
        return complex(self.coeffs[index_map(self.d, self.N)[tuple(alpha)]])

    @property
    def constant_term(self) -> complex:
        return complex(self.coeffs[0])

    def truncate(self, M: int) -> "TruncatedSeries":
        if M >= self.N:
            return self
        return TruncatedSeries(self.d, M, self.coeffs[:simplex_size(self.d, M)],
                               from_boundary_measure=self.from_boundary_measure)

    # -- arithmetic ----------------------------------------------------

    def _match(self, other: "TruncatedSeries") -> None:
        if not isinstance(other, TruncatedSeries):
            raise TypeError("expected a TruncatedSeries")
        if self.d != other.d:
            raise DimensionMismatchError(
                f"dimension mismatch: {self.d} vs {other.d}")

    def add(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._match(other)
        N = min(self.N, other.N)
        m = simplex_size(self.d, N)
        return TruncatedSeries(self.d, N, self.coeffs[:m] + other.coeffs[:m])

    def scale(self, c: complex) -> "TruncatedSeries":
        return TruncatedSeries(self.d, self.N, self.coeffs * c)

    def multiply(self, other: "TruncatedSeries") -> "TruncatedSeries":
        """Cauchy product, truncated to min(N_f, N_g)."""
        self._match(other)
        N = min(self.N, other.N)
        m = simplex_size(self.d, N)
        cf = self.coeffs[:m]
        cg = other.coeffs[:m]
        table = _product_table(self.d, N)
        out = np.zeros(m, dtype=complex)
        for i in np.nonzero(cf)[0]:
            row = table[i]
            out[row] += cf[i] * cg[: len(row)]
        return TruncatedSeries(self.d, N, out)

    def __add__(self, other):
        return self.add(other)

    def __sub__(self, other):
        return self.add(other.scale(-1.0))

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return self.multiply(other)
        return self.scale(other)

    __rmul__ = __mul__

    def dilate(self, r: float) -> "TruncatedSeries":
        """f(z) -> f(r z): c_alpha -> r^|alpha| c_alpha, 0 <= r <= 1."""
        if not 0.0 <= r <= 1.0:
            raise SeriesDomainError(f"dilation radius must be in [0, 1], got {r}")
        scal = np.power(r, grade_array(self.d, self.N).astype(float))
        return TruncatedSeries(self.d, self.N, self.coeffs * scal,
                               from_boundary_measure=self.from_boundary_measure)

    def reflect(self) -> "TruncatedSeries":
        """c_alpha -> conj(c_alpha); the coefficient form of conj(f(conj z))."""
        return TruncatedSeries(self.d, self.N, np.conj(self.coeffs),
                               from_boundary_measure=self.from_boundary_measure)

    def radial_derivative(self) -> "TruncatedSeries":
        """c_alpha -> |alpha| c_alpha."""
        g = grade_array(self.d, self.N).astype(float)
        return TruncatedSeries(self.d, self.N, self.coeffs * g)

    # -- evaluation ----------------------------------------------------

    def grade_values(self, points: np.ndarray) -> np.ndarray:
        """Values of each homogeneous part: array of shape (N+1, npoints).

        Monomials are built by single-variable recursion over the shared
        enumeration; grades are then contracted separately so callers can
        reweight them (dilations, radial operators) without re-evaluating.
        """
        pts = np.atleast_2d(np.asarray(points, dtype=complex))
        if pts.shape[1] != self.d:
            raise DimensionMismatchError(
                f"points have {pts.shape[1]} coordinates, series has d={self.d}")
        m = simplex_size(self.d, self.N)
        steps_j, steps_parent = _parent_steps(self.d, self.N)
        slices = grade_slices(self.d, self.N)
        out = np.empty((self.N + 1, pts.shape[0]), dtype=complex)
        for lo in range(0, pts.shape[0], _EVAL_CHUNK):
            chunk = pts[lo:lo + _EVAL_CHUNK]
            P = np.empty((chunk.shape[0], m), dtype=complex)
            P[:, 0] = 1.0
            for i in range(1, m):
                P[:, i] = P[:, steps_parent[i]] * chunk[:, steps_j[i]]
            for k, (a, b) in enumerate(slices):
                out[k, lo:lo + chunk.shape[0]] = P[:, a:b] @ self.coeffs[a:b]
        return out

    def values_at(self, points: np.ndarray) -> np.ndarray:
        """Evaluate at an (npoints, d) array, accumulating grade by grade."""
        grades = self.grade_values(points)
        out = grades[0].copy()
        for k in range(1, self.N + 1):
            out += grades[k]
        return out

    def evaluate(self, z: Sequence[complex]) -> complex:
        return complex(self.values_at(np.asarray(z, dtype=complex).reshape(1, -1))[0])

    # -- serialization ---------------------------------------------------

    def to_json(self) -> dict:
        entries = []
        alphas = enumerate_multiindices(self.d, self.N)
        for i in np.nonzero(self.coeffs)[0]:
            c = self.coeffs[i]
            entries.append({"alpha": list(alphas[i]), "re": float(c.real),
                            "im": float(c.imag)})
        return {"d": self.d, "N": self.N, "coeffs": entries}

    @classmethod
    def from_json(cls, obj: dict) -> "TruncatedSeries":
        d, N = int(obj["d"]), int(obj["N"])
        c = np.zeros(simplex_size(d, N), dtype=complex)
        idx = index_map(d, N)
        for entry in obj.get("coeffs", []):
            alpha = tuple(int(a) for a in entry["alpha"])
            if sum(alpha) > N:
                raise DegreeCapError(f"coefficient {alpha} beyond declared degree {N}")
            c[idx[alpha]] = float(entry.get("re", 0.0)) + 1j * float(entry.get("im", 0.0))
        return cls(d, N, c)


def series_arith(f: TruncatedSeries, g, op: str) -> TruncatedSeries:
    """Named dispatcher: op is one of 'add', 'scale', 'multiply'."""
    if op == "add":
        return f.add(g)
    if op == "scale":
        return f.scale(g)
    if op == "multiply":
        return f.multiply(g)
    raise ValueError(f"unknown series operation {op!r}")


def _divide(num: TruncatedSeries, den: TruncatedSeries) -> TruncatedSeries:
    """Grade-recursive back-substitution for num/den, exact at truncation
    order.  Requires den(0) != 0."""
    num._match(den)
    N = min(num.N, den.N)
    m = simplex_size(num.d, N)
    v = num.coeffs[:m]
    u = den.coeffs[:m]
    u0 = u[0]
    if abs(u0) < 1e-12:
        raise SeriesDomainError("division pole: denominator constant term ~ 0")
    table = _product_table(num.d, N)
    res = np.zeros(m, dtype=complex)
    res[0] = v[0] / u0
    for k in range(1, N + 1):
        a, b = grade_slices(num.d, N)[k]
        # grade-k part of (res so far) * u; res entries in grades >= k are 0
        conv = np.zeros(m, dtype=complex)
        for i in np.nonzero(res)[0]:
            row = table[i]
            conv[row] += res[i] * u[: len(row)]
        res[a:b] = (v[a:b] - conv[a:b]) / u0
    return TruncatedSeries(num.d, N, res)


def cayley(f: TruncatedSeries, direction: str) -> TruncatedSeries:
    """Moebius transform between the Schur-class normalization and the
    positive-real-part normalization.

    schur_to_herglotz: phi -> (1 + phi) / (1 - phi),  needs phi(0) != 1
    herglotz_to_schur: f   -> (f - 1) / (f + 1),      needs f(0) != -1
    """
    one = TruncatedSeries.constant(f.d, f.N, 1.0)
    if direction == "schur_to_herglotz":
        return _divide(one.add(f), one.add(f.scale(-1.0)))
    if direction == "herglotz_to_schur":
        return _divide(f.add(one.scale(-1.0)), f.add(one))
    raise ValueError(f"unknown Cayley direction {direction!r}")


def compose_univariate(h: TruncatedSeries, phi: TruncatedSeries) -> TruncatedSeries:
    """h(phi(z)) truncated at phi's degree, via Horner over truncated products.

    h must be univariate with degree >= phi.N.  |phi(0)| < 1 is required so
    the discarded high-order terms of h decay geometrically.
    """
    if h.d != 1:
        raise DimensionMismatchError("outer function of a composition must be univariate")
    if h.N < phi.N:
        raise DegreeCapError(
            f"outer series degree {h.N} is below the target degree {phi.N}")
    if abs(phi.constant_term) >= 1.0:
        raise SeriesDomainError(
            f"composition diverges: |phi(0)| = {abs(phi.constant_term):.3f} >= 1")
    res = TruncatedSeries.constant(phi.d, phi.N, h.coeffs[h.N])
    for k in range(h.N - 1, -1, -1):
        res = res.multiply(phi).add(
            TruncatedSeries.constant(phi.d, phi.N, h.coeffs[k]))
    return res
