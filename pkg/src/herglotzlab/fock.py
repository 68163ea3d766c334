"""Truncated Fock-space models, operator norms, and the separation experiment.

The full Fock side carries left creation operators on words over {1..d}; the
symmetric side carries the coordinate shifts on the normalized monomial
basis.  Sparse structure is one nonzero per column, stored as index arrays so
matvecs never materialize a matrix product.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from .series import enumerate_multiindices, simplex_size, weight

BASIS_SIZE_CAP = 10 ** 6

POWER_ITER_TOL = 1e-10
POWER_ITER_MAX = 5000

DP_POLY_NAME = "z1 + z1*z2"
# Word algebra for p = z1 + z1 z2 on isometries with orthogonal ranges:
# (p^sym)*(p^sym) = (3/2) I + (1/2)(V2 + V2*), so the limiting norm is
# sqrt(5/2).  The truncated value is sqrt(3/2 + cos(pi/(L+2))).
DP_LIMIT_NORM = math.sqrt(2.5)


class SizeCapError(ValueError):
    """A requested basis would exceed the size cap."""


def fock_words(d: int, L: int) -> tuple:
    """All words over {1..d} of length <= L, graded then lexicographic."""
    out = []
    for k in range(L + 1):
        out.extend(itertools.product(range(1, d + 1), repeat=k))
    return tuple(out)


def fock_count(d: int, L: int) -> int:
    return (d ** (L + 1) - 1) // (d - 1) if d >= 2 else L + 1


@dataclass(frozen=True, eq=False)
class FockBasis:
    """Word basis with per-letter creation maps as column-to-row indices."""

    d: int
    L: int
    words: tuple
    index: dict
    creation_rows: tuple    # per letter j: rows[c] = index of (j+1,) + words[c]

    @classmethod
    def create(cls, d: int, L: int) -> "FockBasis":
        if d < 2:
            raise ValueError("full Fock model needs an alphabet of size >= 2")
        if L < 1:
            raise ValueError("word length cap must be >= 1")
        if fock_count(d, L) > BASIS_SIZE_CAP:
            raise SizeCapError(
                f"basis for d={d}, L={L} has {fock_count(d, L)} words, "
                f"cap is {BASIS_SIZE_CAP}")
        words = fock_words(d, L)
        index = {w: i for i, w in enumerate(words)}
        n_prev = fock_count(d, L - 1)
        rows = []
        for j in range(1, d + 1):
            r = np.fromiter((index[(j,) + w] for w in words[:n_prev]),
                            dtype=np.int64, count=n_prev)
            r.setflags(write=False)
            rows.append(r)
        return cls(d, L, words, index, tuple(rows))

    @property
    def size(self) -> int:
        return len(self.words)

    def apply_creation(self, j: int, v: np.ndarray) -> np.ndarray:
        """L_j v: word w -> j w for |w| < L, top grade to zero."""
        rows = self.creation_rows[j]
        out = np.zeros_like(v)
        out[rows] = v[: len(rows)]
        return out

    def apply_creation_adjoint(self, j: int, v: np.ndarray) -> np.ndarray:
        rows = self.creation_rows[j]
        out = np.zeros_like(v)
        out[: len(rows)] = v[rows]
        return out


def creation_operators(d: int, L: int) -> list:
    """The d truncated left creation operators as sparse matrices.

    Exactly one unit entry per column below the top grade; the top grade is
    compressed to zero.
    """
    basis = FockBasis.create(d, L)
    n = basis.size
    ops = []
    for j in range(d):
        rows = basis.creation_rows[j]
        cols = np.arange(len(rows))
        data = np.ones(len(rows))
        ops.append(sp.csr_matrix((data, (rows, cols)), shape=(n, n)))
    return ops


@dataclass(frozen=True, eq=False)
class SymFockBasis:
    """Monomial basis of the ball space with norms sqrt(alpha!/|alpha|!)."""

    d: int
    N: int

    @property
    def monomials(self) -> tuple:
        return enumerate_multiindices(self.d, self.N)

    @property
    def norms(self) -> np.ndarray:
        return np.array([math.sqrt(1.0 / weight(a)) for a in self.monomials])

    @property
    def size(self) -> int:
        return simplex_size(self.d, self.N)


def dshift_operators(d: int, N: int) -> list:
    """Coordinate multiplication operators on the normalized monomial basis.

    S_j e_alpha = sqrt((alpha_j + 1)/(|alpha| + 1)) e_(alpha + e_j); the top
    grade maps to zero.  Returned dense (sizes stay small).
    """
    if d < 1 or N < 1:
        raise ValueError("need d >= 1, N >= 1")
    alphas = enumerate_multiindices(d, N)
    idx = {a: i for i, a in enumerate(alphas)}
    m = len(alphas)
    ops = [np.zeros((m, m), dtype=complex) for _ in range(d)]
    for i, a in enumerate(alphas):
        k = sum(a)
        if k == N:
            continue
        for j in range(d):
            target = a[:j] + (a[j] + 1,) + a[j + 1:]
            ops[j][idx[target], i] = math.sqrt((a[j] + 1) / (k + 1))
    return ops


@dataclass(frozen=True)
class NormResult:
    value: float
    iters: int
    residual: float
    converged: bool


def operator_norm(A, method: str = "auto", iters: int = POWER_ITER_MAX,
                  tol: float = POWER_ITER_TOL, x0: np.ndarray = None) -> NormResult:
    """Largest singular value.

    Dense arrays go through LAPACK unless method forces power iteration;
    anything exposing matvec/rmatvec (or scipy sparse) is handled matrix-free
    by power iteration on A*A.  Non-convergence is reported, not raised.
    """
    if method not in ("auto", "dense-svd", "power-iteration"):
        raise ValueError(f"unknown norm method {method!r}")
    if isinstance(A, np.ndarray) and method in ("auto", "dense-svd"):
        s = np.linalg.svd(A, compute_uv=False)
        top = float(s[0]) if len(s) else 0.0
        return NormResult(top, 0, 0.0, True)

    if isinstance(A, np.ndarray):
        mv = lambda v: A @ v
        rmv = lambda v: A.conj().T @ v
        n = A.shape[1]
    elif sp.issparse(A):
        AH = A.conj().T.tocsr()
        mv = lambda v: A @ v
        rmv = lambda v: AH @ v
        n = A.shape[1]
    else:
        mv, rmv, n = A.matvec, A.rmatvec, A.shape[1]

    rng = np.random.default_rng(0)
    x = x0.astype(complex).copy() if x0 is not None else (
        rng.standard_normal(n) + 1j * rng.standard_normal(n))
    x /= np.linalg.norm(x)
    lam_prev = None
    lam = 0.0
    it = 0
    for it in range(1, iters + 1):
        y = mv(x)
        lam = float(np.vdot(y, y).real)     # = ||A x||^2, x normalized
        z = rmv(y)
        nz = np.linalg.norm(z)
        if nz == 0.0:
            return NormResult(0.0, it, 0.0, True)
        x = z / nz
        if lam_prev is not None and abs(lam - lam_prev) <= tol * max(lam, 1e-300):
            break
        lam_prev = lam
    y = mv(x)
    z = rmv(y)
    resid = float(np.linalg.norm(z - lam * x) / max(lam, 1e-300))
    converged = it < iters or (
        lam_prev is not None and abs(lam - lam_prev) <= tol * max(lam, 1e-300))
    return NormResult(math.sqrt(max(lam, 0.0)), it, resid, converged)


# -- the separation experiment -------------------------------------------


def _sym_shift_norm(N_sym: int) -> float:
    """||(S1 + S1 S2) restricted to monomials of degree <= N_sym||.

    The shifts are built two grades higher so images never hit the
    compression edge; the restriction norm is then exact and nondecreasing
    in N_sym.
    """
    S = dshift_operators(2, N_sym + 2)
    A = S[0] + S[0] @ S[1]
    m = simplex_size(2, N_sym)
    block = A[:, :m]
    return float(np.linalg.svd(block, compute_uv=False)[0])


class _DPFullRestriction:
    """x -> P A* A P x for A = T1 + (T1 T2 + T2 T1)/2 on a word basis built
    two grades above the domain, so the domain never feels the truncation."""

    def __init__(self, L_domain: int):
        self.basis = FockBasis.create(2, L_domain + 2)
        self.n_domain = fock_count(2, L_domain)
        self.shape = (self.basis.size, self.basis.size)

    def _apply(self, v):
        b = self.basis
        t1v = b.apply_creation(0, v)
        t2v = b.apply_creation(1, v)
        return t1v + 0.5 * (b.apply_creation(0, t2v) + b.apply_creation(1, t1v))

    def _apply_adjoint(self, v):
        b = self.basis
        t1s = b.apply_creation_adjoint(0, v)
        t2s = b.apply_creation_adjoint(1, v)
        return (t1s
                + 0.5 * (b.apply_creation_adjoint(1, t1s)
                         + b.apply_creation_adjoint(0, t2s)))

    def matvec(self, v):
        w = v.copy()
        w[self.n_domain:] = 0.0
        return self._apply(w)

    def rmatvec(self, v):
        w = self._apply_adjoint(v)
        w[self.n_domain:] = 0.0
        return w

    def vacuum(self) -> np.ndarray:
        x = np.zeros(self.basis.size, dtype=complex)
        x[0] = 1.0
        return x


def davidson_pitts(L_full: int = 16, N_sym: int = 16,
                   tol: float = POWER_ITER_TOL,
                   max_iters: int = POWER_ITER_MAX) -> dict:
    """Both norms of p = z1 + z1 z2: the commuting shift calculus on the
    monomial basis and the symmetrized calculus on the word basis.

    Reported values are exact norms of the operators restricted to the
    stated degree/length, which increase with the truncation parameter; the
    word-side limit is sqrt(5/2) (the squared norm is 5/2, from the word
    algebra identity in the module header).
    """
    norm_shift = _sym_shift_norm(N_sym)
    op = _DPFullRestriction(L_full)
    res = operator_norm(op, method="power-iteration", iters=max_iters, tol=tol,
                        x0=op.vacuum())
    return {
        "L_full": L_full,
        "N_sym": N_sym,
        "norm_sym_shift": norm_shift,
        "norm_sym_calculus": res.value,
        "iters": res.iters,
        "residual": res.residual,
    }


def davidson_pitts_sweep(L_values: Sequence[int], N_sym: int = 16,
                         tol: float = POWER_ITER_TOL,
                         max_iters: int = POWER_ITER_MAX) -> dict:
    """Norm table across word lengths with a single shift-side computation."""
    norm_shift = _sym_shift_norm(N_sym)
    rows = []
    for L in L_values:
        op = _DPFullRestriction(L)
        res = operator_norm(op, method="power-iteration", iters=max_iters,
                            tol=tol, x0=op.vacuum())
        rows.append({"L": int(L), "norm_sym_calculus": res.value,
                     "iters": res.iters, "residual": res.residual})
    return {"N_sym": N_sym, "norm_sym_shift": norm_shift, "rows": rows,
            "limit_norm": DP_LIMIT_NORM}


# -- multiplicative boundary states ---------------------------------------


def _check_boundary(zeta: np.ndarray) -> np.ndarray:
    zeta = np.asarray(zeta, dtype=complex).reshape(-1)
    if abs(np.linalg.norm(zeta) - 1.0) > 1e-12:
        raise ValueError("state point must lie on the unit sphere to 1e-12")
    return zeta


def cuntz_state_word(zeta: Sequence[complex], i_word: Sequence[int],
                     j_word: Sequence[int]) -> complex:
    """Value of the multiplicative boundary state on V_{i1}..V_{im} V*_{j1}..V*_{jn}:
    the product of the zeta letters over i_word times the conjugated product
    over j_word.  Letters are 1-based."""
    zeta = _check_boundary(zeta)
    val = 1.0 + 0.0j
    for i in i_word:
        val *= zeta[i - 1]
    for j in j_word:
        val *= np.conj(zeta[j - 1])
    return complex(val)


def cuntz_state_herglotz(zeta: Sequence[complex], z: Sequence[complex],
                         K: int) -> complex:
    """Degree-K partial sum of the kernel transform in the boundary state.

    Grade k of the word expansion collapses to <z, zeta>^k (the state is
    evaluated at the conjugate point so the transform reproduces the
    boundary kernel function); the result is 2 sum_{k<=K} <z, zeta>^k - 1.
    Requires |<z, zeta>| < 1.
    """
    zeta = _check_boundary(zeta)
    z = np.asarray(z, dtype=complex).reshape(-1)
    s = complex(np.sum(z * np.conj(zeta)))
    if abs(s) >= 1.0:
        raise ValueError(f"divergence guard: |<z, zeta>| = {abs(s):.3f} >= 1")
    partial = sum(s ** k for k in range(K + 1))
    return complex(2.0 * partial - 1.0)


def cuntz_state_herglotz_bruteforce(zeta: Sequence[complex],
                                    z: Sequence[complex], K: int) -> complex:
    """Word-by-word evaluation of the same partial sum through
    cuntz_state_word; exponential in K, kept as an oracle for small K."""
    zeta = _check_boundary(zeta)
    z = np.asarray(z, dtype=complex).reshape(-1)
    d = len(z)
    total = 0.0 + 0.0j
    for k in range(K + 1):
        for word in itertools.product(range(1, d + 1), repeat=k):
            zw = 1.0 + 0.0j
            for letter in word:
                zw *= z[letter - 1]
            total += zw * cuntz_state_word(np.conj(zeta), word, ())
    return complex(2.0 * total - 1.0)
