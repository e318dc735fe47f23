"""Compound matrices (matrices of k x k minors), their Jacobians in x,
singular values, and the subspace extraction lemmas.

Minor ordering is lexicographic in (row-tuple, col-tuple) everywhere; the
1-based index tuples are exposed so reports and golden files are stable.

Explicit constants: where the underlying inequalities are usually stated
with implicit constants, we derive and hard-code square-root-of-binomial
constants from the Frobenius-norm identity

    sum over (a, w) of (compound entry)^2 = sum_{a} prod_i Lambda_{a_i}^2,

which is orthogonally invariant, and from the cofactor expansion bound
||Delta^(k)|| |v_j| <= k ||Mv||_inf ||Delta^(k-1)||.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import DimensionMismatchError, RankDeficientError, ZeroFormError
from .forms import CubicForm, SymMatrix


@dataclass(frozen=True)
class IndexTupleSet:
    """All strictly increasing k-tuples from {1..l}, lexicographically ordered."""

    k: int
    l: int
    tuples: tuple

    def __len__(self):
        return len(self.tuples)


def index_tuples(k: int, l: int) -> IndexTupleSet:
    if not (1 <= k <= l):
        raise DimensionMismatchError(f"need 1 <= k <= l, got k={k}, l={l}")
    tups = tuple(tuple(t + 1 for t in comb) for comb in itertools.combinations(range(l), k))
    return IndexTupleSet(k, l, tups)


# -- determinants ------------------------------------------------------

def det(rows) -> object:
    """Determinant by cofactor expansion; exact over ints/Fractions, fine for floats at k <= 6."""
    n = len(rows)
    if n == 0:
        return 1
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    if n == 3:
        a, b, c = rows[0]
        d, e, f = rows[1]
        g, h, i = rows[2]
        return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
    total = 0
    for j in range(n):
        a = rows[0][j]
        if a == 0:
            continue
        sub = [[row[t] for t in range(n) if t != j] for row in rows[1:]]
        term = a * det(sub)
        total = total + term if j % 2 == 0 else total - term
    return total


def _rows_of(M):
    if isinstance(M, SymMatrix):
        return [list(r) for r in M.entries]
    if isinstance(M, np.ndarray):
        return [list(r) for r in M.tolist()]
    return [list(r) for r in M]


@dataclass(frozen=True)
class MinorsMatrix:
    """The compound matrix of all k x k minors of an l x m matrix."""

    k: int
    row_tuples: tuple
    col_tuples: tuple
    entries: tuple  # tuple of row tuples

    @property
    def shape(self):
        return (len(self.row_tuples), len(self.col_tuples))

    def to_array(self) -> np.ndarray:
        return np.array([[float(v) for v in row] for row in self.entries])

    def sup_norm(self):
        return max(abs(v) for row in self.entries for v in row)

    def flatten(self) -> tuple:
        """All minors in lex (row-tuple, col-tuple) order."""
        return tuple(v for row in self.entries for v in row)


def minors_matrix(M, k: int) -> MinorsMatrix:
    rows = _rows_of(M)
    l, m = len(rows), len(rows[0])
    if not (1 <= k <= min(l, m)):
        raise DimensionMismatchError(f"k={k} out of range for {l}x{m} matrix")
    rt = index_tuples(k, l)
    ct = index_tuples(k, m)
    ents = []
    for a in rt.tuples:
        out_row = []
        for b in ct.tuples:
            sub = [[rows[i - 1][j - 1] for j in b] for i in a]
            out_row.append(det(sub))
        ents.append(tuple(out_row))
    return MinorsMatrix(k, rt.tuples, ct.tuples, tuple(ents))


def _mat_mul(A, B):
    ra, ca = len(A), len(A[0])
    cb = len(B[0])
    return [[sum(A[i][t] * B[t][j] for t in range(ca)) for j in range(cb)] for i in range(ra)]


def cauchy_binet(L, M, k: int):
    """Compound(LM), compound(L) @ compound(M), and their (exact-zero) difference."""
    Lr, Mr = _rows_of(L), _rows_of(M)
    if len(Lr[0]) != len(Mr):
        raise DimensionMismatchError("inner dimensions of L and M differ")
    if k > min(len(Lr), len(Lr[0]), len(Mr[0])):
        raise DimensionMismatchError("k exceeds min dimension")
    prod_rows = _mat_mul(Lr, Mr)
    lhs = minors_matrix(prod_rows, k)
    cL = minors_matrix(Lr, k)
    cM = minors_matrix(Mr, k)
    prod_entries = _mat_mul([list(r) for r in cL.entries], [list(r) for r in cM.entries])
    rhs = MinorsMatrix(k, cL.row_tuples, cM.col_tuples, tuple(tuple(r) for r in prod_entries))
    diff = MinorsMatrix(
        k,
        lhs.row_tuples,
        lhs.col_tuples,
        tuple(
            tuple(a - b for a, b in zip(ra, rb))
            for ra, rb in zip(lhs.entries, rhs.entries)
        ),
    )
    return lhs, rhs, diff


# -- minors of the Hessian and their Jacobians -------------------------

@dataclass(frozen=True)
class MinorsVector:
    """All k x k minors of H_c(x), lex order in (row-tuple, col-tuple)."""

    k: int
    matrix: MinorsMatrix

    @property
    def entries(self) -> tuple:
        return self.matrix.flatten()

    def sup_norm(self):
        return max(abs(v) for v in self.entries)


def minors_vector(c: CubicForm, x: Sequence, k: int) -> MinorsVector:
    if c.is_zero:
        raise ZeroFormError("minors of the Hessian need a nonzero form")
    if not (1 <= k <= c.n):
        raise DimensionMismatchError(f"k={k} out of range for n={c.n}")
    H = c.hessian(x)
    return MinorsVector(k, minors_matrix(H, k))


@dataclass(frozen=True)
class MinorsJacobian:
    """J^(k): rows indexed like the minors vector, column t = d Delta^(k) / dx_t."""

    k: int
    entries: tuple  # (len Delta^(k)) x n

    def to_array(self) -> np.ndarray:
        return np.array([[float(v) for v in row] for row in self.entries])

    @property
    def shape(self):
        return (len(self.entries), len(self.entries[0]))


def minors_jacobian(c: CubicForm, x: Sequence, k: int) -> MinorsJacobian:
    """Differentiate each k x k minor of H_c(x) in x, using multilinearity of det."""
    if c.is_zero:
        raise ZeroFormError("minors Jacobian needs a nonzero form")
    if not (1 <= k <= c.n):
        raise DimensionMismatchError(f"k={k} out of range for n={c.n}")
    n = c.n
    H = c.hessian(x)
    rows = _rows_of(H)
    # directional Hessians along basis directions: H_c is linear in x
    zero = [0] * n
    dirs = []
    for t in range(n):
        e = list(zero)
        e[t] = 1
        dirs.append(_rows_of(c.hessian(e)))
    rt = index_tuples(k, n).tuples
    out = []
    for a in rt:
        for b in rt:
            sub = [[rows[i - 1][j - 1] for j in b] for i in a]
            row_out = []
            for t in range(n):
                dsub_full = dirs[t]
                val = 0
                for r_idx in range(k):
                    rep = [list(r) for r in sub]
                    rep[r_idx] = [dsub_full[a[r_idx] - 1][j - 1] for j in b]
                    val = val + det(rep)
                row_out.append(val)
            out.append(tuple(row_out))
    return MinorsJacobian(k, tuple(out))


# -- singular values and subspace lemmas -------------------------------

@dataclass(frozen=True)
class SingularSpectrum:
    """Singular values in decreasing order; for symmetric input, sorted |eigenvalues|."""

    values: tuple

    def __getitem__(self, i):
        return self.values[i]

    def __len__(self):
        return len(self.values)

    def product(self, k: int) -> float:
        return float(np.prod(self.values[:k])) if k > 0 else 1.0


def _as_float_array(M) -> np.ndarray:
    if isinstance(M, SymMatrix):
        return M.to_array()
    if isinstance(M, MinorsJacobian) or isinstance(M, MinorsMatrix):
        return M.to_array()
    A = np.asarray(M, dtype=float)
    return A


def singular_values(M) -> SingularSpectrum:
    A = _as_float_array(M)
    if not np.all(np.isfinite(A)):
        raise DimensionMismatchError("matrix entries must be finite")
    vals = np.linalg.svd(A, compute_uv=False)
    return SingularSpectrum(tuple(float(v) for v in vals))


@dataclass(frozen=True)
class MinorSvReport:
    k: int
    sup_minor: float
    sv_product: float
    lower_const: float   # sv_product <= lower_const * sup_minor
    upper_const: float   # sup_minor <= upper_const * sv_product
    passes: bool

    def to_dict(self):
        return {
            "k": self.k,
            "sup_minor": self.sup_minor,
            "sv_product": self.sv_product,
            "lower_const": self.lower_const,
            "upper_const": self.upper_const,
            "pass": self.passes,
        }


def minor_sv_bounds(M, k: int, rel_tol: float = 1e-9) -> MinorSvReport:
    """Check Lambda_1...Lambda_k <= sqrt(C(m,k) C(n,k)) ||Delta^(k)||
    and ||Delta^(k)|| <= sqrt(C(n,k)) Lambda_1...Lambda_k."""
    A = _as_float_array(M)
    m, n = A.shape
    if not (1 <= k <= min(m, n)):
        raise DimensionMismatchError(f"k={k} out of range for {m}x{n}")
    comp = minors_matrix(A, k)
    sup = float(comp.sup_norm())
    spec = singular_values(A)
    prod = spec.product(k)
    c_lower = math.sqrt(math.comb(m, k) * math.comb(n, k))
    c_upper = math.sqrt(math.comb(n, k))
    scale = max(sup, prod, 1.0)
    ok = (prod <= c_lower * sup + rel_tol * scale) and (sup <= c_upper * prod + rel_tol * scale)
    return MinorSvReport(k, sup, prod, c_lower, c_upper, ok)


@dataclass(frozen=True)
class BigSubspace:
    """Span of k standard basis vectors on which ||Mv|| is comparably large."""

    indices: tuple      # 1-based column indices (the column-tuple of the max minor)
    kappa: float        # ||Mv||_inf >= kappa * Lambda_k * ||v||_inf on the span
    max_minor: float
    row_tuple: tuple


def big_subspace(M, k: int) -> BigSubspace:
    A = _as_float_array(M)
    m, n = A.shape
    if not (1 <= k <= min(m, n)):
        raise DimensionMismatchError(f"k={k} out of range for {m}x{n}")
    spec = singular_values(A)
    if spec[k - 1] <= 1e-12 * max(spec[0], 1.0):
        raise RankDeficientError(f"Lambda_{k} vanishes; no big subspace is guaranteed")
    comp = minors_matrix(A, k)
    best = (-1.0, None, None)
    for a, row in zip(comp.row_tuples, comp.entries):
        for b, v in zip(comp.col_tuples, row):
            av = abs(float(v))
            if av > best[0]:
                best = (av, a, b)
    max_minor, row_t, col_t = best
    # cofactor bound: ||Mv|| >= ||Delta^(k)|| / (k ||Delta^(k-1)||) ||v||, then part (i)
    # converts the minor ratio to Lambda_k with the binomial constants below.
    kappa = 1.0 / (
        k
        * math.sqrt(math.comb(m, k) * math.comb(n, k))
        * math.sqrt(math.comb(n, max(k - 1, 0)))
    )
    return BigSubspace(col_t, kappa, max_minor, row_t)


@dataclass(frozen=True)
class SmallSpace:
    """Span of trailing right singular vectors; ||Mv||_inf <= bound_const * Lambda_k * ||v||_inf."""

    basis: tuple        # tuple of n-vectors (rows)
    bound_const: float  # the sqrt(n) sup/Euclid conversion factor
    lambda_k: float


@dataclass(frozen=True)
class BigSpace:
    indices: tuple
    kappa: float
    lambda_k: float


def small_or_big(M, k: int, C: float):
    """Part (iii) dichotomy: a small (n-k+1)-dim space, or a big coordinate k-space.

    Returns SmallSpace when sqrt(n) * Lambda_k <= 1/C (so the certificate
    ||Mv||_inf <= C^-1 ||v||_inf holds on the span of the trailing singular
    vectors), else BigSpace from the max-minor construction.
    """
    if C < 1:
        raise DimensionMismatchError("need C >= 1")
    A = _as_float_array(M)
    m, n = A.shape
    if not (1 <= k <= min(m, n)):
        raise DimensionMismatchError(f"k={k} out of range for {m}x{n}")
    spec = singular_values(A)
    lam_k = spec[k - 1]
    if math.sqrt(n) * lam_k <= 1.0 / C:
        _, _, Vt = np.linalg.svd(A)
        basis = tuple(tuple(float(v) for v in Vt[i]) for i in range(k - 1, n))
        return SmallSpace(basis, math.sqrt(n), lam_k)
    big = big_subspace(A, k)
    return BigSpace(big.indices, big.kappa, lam_k)
