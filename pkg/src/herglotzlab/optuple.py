"""Finite-dimensional operator tuples and their Herglotz transforms.

A tuple T = (T_1, ..., T_d) of n x n matrices plays the role of a row
contraction; <z, T> denotes z_1 T_1 + ... + z_d T_d.  The kernel
H(z, T) = 2 (I - <z, T>)^{-1} - I generates functions of positive real part,
and the Taylor coefficients of <H(z,T) xi, xi> are word sums over T that the
symmetrized calculus reproduces by brute-force enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .pairing import qr_pair
from .series import (
    DimensionMismatchError,
    TruncatedSeries,
    enumerate_multiindices,
    index_map,
    weight,
)

WORD_DEGREE_CAP = 12


class SingularPencilError(ArithmeticError):
    """I - <z, T> was numerically singular at a requested point."""


class NonCommutingError(ValueError):
    """An operation that needs a commuting tuple got a non-commuting one."""


@dataclass(frozen=True, eq=False)
class OperatorTuple:
    """d complex matrices of a common size n, immutable after construction."""

    matrices: np.ndarray        # (d, n, n)

    def __post_init__(self):
        m = np.asarray(self.matrices, dtype=complex)
        if m.ndim != 3 or m.shape[1] != m.shape[2]:
            raise DimensionMismatchError(
                f"expected a (d, n, n) stack of square matrices, got {m.shape}")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrices", m)

    @property
    def d(self) -> int:
        return self.matrices.shape[0]

    @property
    def n(self) -> int:
        return self.matrices.shape[1]

    def zeta_dot(self, z: Sequence[complex]) -> np.ndarray:
        """<z, T> = sum_j z_j T_j for a single point z."""
        z = np.asarray(z, dtype=complex)
        return np.tensordot(z, self.matrices, axes=(0, 0))

    def zeta_dot_many(self, pts: np.ndarray) -> np.ndarray:
        """<z, T> for a batch of points: (m, n, n)."""
        pts = np.atleast_2d(np.asarray(pts, dtype=complex))
        return np.tensordot(pts, self.matrices, axes=(1, 0))

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "n": self.n,
            "matrices": [
                [[[float(v.real), float(v.imag)] for v in row] for row in mat]
                for mat in self.matrices
            ],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "OperatorTuple":
        mats = np.array(
            [[[complex(re, im) for re, im in row] for row in mat]
             for mat in obj["matrices"]],
            dtype=complex,
        )
        return cls(mats)


@dataclass(frozen=True, eq=False)
class HerglotzDatum:
    """Generator data (T, xi, t) for f(z) = <H(z,T) xi, xi> + i t."""

    tuple: OperatorTuple
    xi: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        xi = np.asarray(self.xi, dtype=complex).reshape(-1)
        if xi.shape[0] != self.tuple.n:
            raise DimensionMismatchError(
                f"xi has length {xi.shape[0]}, matrices are {self.tuple.n} x {self.tuple.n}")
        xi = xi.copy()
        xi.setflags(write=False)
        object.__setattr__(self, "xi", xi)

    @property
    def d(self) -> int:
        return self.tuple.d

    def values_at(self, points: np.ndarray) -> np.ndarray:
        return herglotz_transform_many(self, points)

    def to_json(self) -> dict:
        out = self.tuple.to_json()
        out["xi"] = [[float(v.real), float(v.imag)] for v in self.xi]
        out["t"] = float(self.t)
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "HerglotzDatum":
        return cls(OperatorTuple.from_json(obj),
                   np.array([complex(re, im) for re, im in obj["xi"]]),
                   float(obj.get("t", 0.0)))


# -- predicates ---------------------------------------------------------


def is_row_contraction(T: OperatorTuple, tol: float = 1e-10):
    """I - sum T_j T_j* >= -tol, reported with the smallest eigenvalue."""
    gram = np.eye(T.n, dtype=complex)
    for M in T.matrices:
        gram -= M @ M.conj().T
    min_eig = float(np.linalg.eigvalsh((gram + gram.conj().T) / 2.0)[0])
    return min_eig >= -tol, min_eig


@dataclass(frozen=True)
class WeakContractionReport:
    is_weak: bool
    sup_estimate: float
    worst_zeta: np.ndarray


def is_weak_row_contraction(T: OperatorTuple, tol: float = 1e-9,
                            samples: int = 2000, refine_steps: int = 50,
                            refine_top: int = 10, seed: int = 0) -> WeakContractionReport:
    """Estimate sup over unit zeta of ||<zeta, T>|| by sphere sampling with
    local ascent refinement.

    One-sided certificate: a violation found is conclusive, a pass only
    accumulates evidence.  The ascent step replaces zeta by the normalized
    conjugate of (u* T_j v) for the current top singular pair (u, v), which
    can only increase the objective.
    """
    if samples < 1 or refine_steps < 0:
        raise ValueError("budget must be >= 1 sample")
    rng = np.random.default_rng(seed)
    zetas = rng.standard_normal((samples, T.d)) + 1j * rng.standard_normal((samples, T.d))
    zetas /= np.linalg.norm(zetas, axis=1, keepdims=True)
    mats = T.zeta_dot_many(zetas)
    svals = np.linalg.svd(mats, compute_uv=False)[:, 0]
    order = np.argsort(svals)[::-1][:refine_top]

    best_val = float(svals[order[0]])
    best_zeta = zetas[order[0]]
    for idx in order:
        zeta = zetas[idx]
        val = float(svals[idx])
        for _ in range(refine_steps):
            U, s, Vh = np.linalg.svd(T.zeta_dot(zeta))
            u, v = U[:, 0], Vh[0].conj()
            grad = np.array([np.vdot(u, M @ v) for M in T.matrices])
            norm = np.linalg.norm(grad)
            if norm < 1e-15:
                break
            new_zeta = np.conj(grad) / norm
            new_val = float(np.linalg.svd(T.zeta_dot(new_zeta), compute_uv=False)[0])
            if new_val <= val + 1e-15:
                break
            zeta, val = new_zeta, new_val
        if val > best_val:
            best_val, best_zeta = val, zeta
    return WeakContractionReport(best_val <= 1.0 + tol, best_val, best_zeta)


def is_commuting(T: OperatorTuple, tol: float = 1e-10):
    """Max over i < j of ||T_i T_j - T_j T_i|| in operator norm."""
    worst = 0.0
    for i in range(T.d):
        for j in range(i + 1, T.d):
            comm = T.matrices[i] @ T.matrices[j] - T.matrices[j] @ T.matrices[i]
            worst = max(worst, float(np.linalg.norm(comm, 2)))
    return worst <= tol, worst


# -- the kernel and its transforms ---------------------------------------


def _resolvent_apply(A: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    pencil = np.eye(A.shape[0], dtype=complex) - A
    sv_min = np.linalg.svd(pencil, compute_uv=False)[-1]
    if sv_min < 1e-14:
        raise SingularPencilError("I - <z, T> is numerically singular")
    return np.linalg.solve(pencil, rhs)


def herglotz_kernel(z: Sequence[complex], T: OperatorTuple) -> np.ndarray:
    """H(z, T) = 2 (I - <z, T>)^{-1} - I, by linear solve (no inverse)."""
    A = T.zeta_dot(z)
    return 2.0 * _resolvent_apply(A, np.eye(T.n, dtype=complex)) - np.eye(T.n)


def re_herglotz_kernel(z: Sequence[complex], T: OperatorTuple) -> np.ndarray:
    """(H + H*) / 2 at the point z."""
    H = herglotz_kernel(z, T)
    return (H + H.conj().T) / 2.0


def herglotz_transform(D: HerglotzDatum, z: Sequence[complex]) -> complex:
    """<H(z, T) xi, xi> + i t at a single point."""
    A = D.tuple.zeta_dot(z)
    y = _resolvent_apply(A, D.xi)
    norm2 = float(np.vdot(D.xi, D.xi).real)
    return complex(2.0 * np.vdot(D.xi, y) - norm2 + 1j * D.t)


def herglotz_transform_many(D: HerglotzDatum, points: np.ndarray) -> np.ndarray:
    """Batched transform values; solves one stacked pencil per point."""
    pts = np.atleast_2d(np.asarray(points, dtype=complex))
    A = D.tuple.zeta_dot_many(pts)
    pencils = np.eye(D.tuple.n, dtype=complex)[None, :, :] - A
    try:
        ys = np.linalg.solve(pencils, np.broadcast_to(
            D.xi, (pts.shape[0], D.tuple.n))[..., None])[..., 0]
    except np.linalg.LinAlgError as exc:
        raise SingularPencilError(str(exc)) from exc
    norm2 = float(np.vdot(D.xi, D.xi).real)
    return 2.0 * (ys @ np.conj(D.xi)) - norm2 + 1j * D.t


def herglotz_taylor(D: HerglotzDatum, N: int) -> TruncatedSeries:
    """Taylor truncation of the transform via the word-sum vector recursion.

    U_0 = xi and U_alpha = sum_j T_j U_(alpha - e_j) accumulates every word
    with content alpha exactly once, so c_alpha = 2 <U_alpha, xi> for
    alpha != 0 and c_0 = ||xi||^2 + i t.  Cost is polynomial in the simplex
    size, unlike the factorial word enumeration kept in sym_monomial as an
    independent cross-check.
    """
    d, n = D.tuple.d, D.tuple.n
    alphas = enumerate_multiindices(d, N)
    idx = index_map(d, N)
    U = np.zeros((len(alphas), n), dtype=complex)
    U[0] = D.xi
    coeffs = np.zeros(len(alphas), dtype=complex)
    coeffs[0] = np.vdot(D.xi, D.xi).real + 1j * D.t
    for i, alpha in enumerate(alphas):
        if i == 0:
            continue
        acc = np.zeros(n, dtype=complex)
        for j in range(d):
            if alpha[j] > 0:
                parent = alpha[:j] + (alpha[j] - 1,) + alpha[j + 1:]
                acc += D.tuple.matrices[j] @ U[idx[parent]]
        U[i] = acc
        coeffs[i] = 2.0 * np.vdot(D.xi, acc)
    return TruncatedSeries(d, N, coeffs)


# -- symmetrized and commuting functional calculus -----------------------


def _distinct_words(alpha: Sequence[int]) -> Iterator[tuple]:
    """All distinct words with letter multiplicities alpha (0-based letters)."""
    counts = list(alpha)
    word = []

    def rec():
        if not any(counts):
            yield tuple(word)
            return
        for j, c in enumerate(counts):
            if c > 0:
                counts[j] -= 1
                word.append(j)
                yield from rec()
                word.pop()
                counts[j] += 1

    yield from rec()


def sym_monomial(alpha: Sequence[int], T: OperatorTuple) -> np.ndarray:
    """Average of T_w over all distinct words w with content alpha:
    (alpha!/|alpha|!) * sum of the word products."""
    alpha = tuple(int(a) for a in alpha)
    if len(alpha) != T.d:
        raise DimensionMismatchError(
            f"multi-index has {len(alpha)} entries, tuple has d={T.d}")
    k = sum(alpha)
    if k > WORD_DEGREE_CAP:
        raise ValueError(
            f"|alpha| = {k} exceeds the word-enumeration cap {WORD_DEGREE_CAP}")
    if k == 0:
        return np.eye(T.n, dtype=complex)
    acc = np.zeros((T.n, T.n), dtype=complex)
    for word in _distinct_words(alpha):
        prod = T.matrices[word[0]]
        for letter in word[1:]:
            prod = prod @ T.matrices[letter]
        acc += prod
    return acc / weight(alpha)


def sym_poly(p: TruncatedSeries, T: OperatorTuple) -> np.ndarray:
    """Linear extension of sym_monomial: sum_alpha c_alpha (z^alpha)^sym(T)."""
    if p.d != T.d:
        raise DimensionMismatchError(f"dimension mismatch: {p.d} vs {T.d}")
    acc = np.zeros((T.n, T.n), dtype=complex)
    alphas = enumerate_multiindices(p.d, p.N)
    for i in np.nonzero(p.coeffs)[0]:
        acc += p.coeffs[i] * sym_monomial(alphas[i], T)
    return acc


def commuting_calculus(p: TruncatedSeries, T: OperatorTuple,
                       tol: float = 1e-10) -> np.ndarray:
    """Evaluate a polynomial on a commuting tuple with cached monomial
    products; rejects non-commuting input."""
    ok, worst = is_commuting(T, tol)
    if not ok:
        raise NonCommutingError(
            f"tuple is not commuting: max commutator norm {worst:.3e}")
    if p.d != T.d:
        raise DimensionMismatchError(f"dimension mismatch: {p.d} vs {T.d}")
    alphas = enumerate_multiindices(p.d, p.N)
    idx = index_map(p.d, p.N)
    powers = np.zeros((len(alphas), T.n, T.n), dtype=complex)
    powers[0] = np.eye(T.n)
    for i, alpha in enumerate(alphas):
        if i == 0:
            continue
        j = next(q for q, v in enumerate(alpha) if v > 0)
        parent = alpha[:j] + (alpha[j] - 1,) + alpha[j + 1:]
        powers[i] = T.matrices[j] @ powers[idx[parent]]
    return np.tensordot(p.coeffs, powers, axes=(0, 0))


def rs_duality_residual(f: TruncatedSeries, D: HerglotzDatum, r: float) -> float:
    """|Q_r(f, g) - (2 conj(<f_check_r(T) xi, xi>) - 2 i t f(0))| for a
    commuting datum, with g the Taylor truncation of the transform at f's
    degree.

    Direct expansion of the pairing gives the conjugate of the calculus side
    (real parts agree, which is what the duality uses); the residual asserts
    the conjugated identity, plus the imaginary-constant correction that the
    unconjugated statement silently drops.
    """
    g = herglotz_taylor(D, f.N)
    lhs = qr_pair(f, g, r)
    p = f.reflect().dilate(r)
    M = commuting_calculus(p, D.tuple)
    inner = np.vdot(D.xi, M @ D.xi)
    rhs = 2.0 * np.conj(inner) - 2j * D.t * f.constant_term
    return float(abs(lhs - rhs))
