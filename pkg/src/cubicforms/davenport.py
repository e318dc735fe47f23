"""Exact construction of the y-vectors spanning a near-null space of the
Hessian, the unimodular change of basis built from them, the trilinear
smallness bound, the count-or-subspaces dichotomy, and singular-point
extraction for diagonal-like situations.

Everything structural here is exact: minors are Fraction determinants, the
change-of-basis matrix Q has determinant exactly 1, and the identity

    (H' y^(i))_j = (-1)^(n-b) det( H'[rows (j, n-b+1..n), cols (i, n-b+1..n)] )

is checked entry by entry (it follows from cofactor expansion along row j).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .counting import DyadicClass, count_aux, pigeonhole, trichotomy, _log_factor
from .errors import (
    DimensionMismatchError,
    NonDiagonalError,
    VanishingMinorError,
    ZeroEigenvalueError,
)
from .forms import EXACT, CubicForm, SymMatrix
from .minors import det, minors_jacobian, minors_vector, singular_values


def _hessian_rows(c: CubicForm, x: Sequence):
    return [list(r) for r in c.hessian(x).entries]


def _largest_minor(rows, b: int):
    """(abs value, row-tuple, col-tuple, signed det) of the largest b x b minor; lex-first ties."""
    n = len(rows)
    best = None
    for a in itertools.combinations(range(n), b):
        for bb in itertools.combinations(range(n), b):
            d = det([[rows[i][j] for j in bb] for i in a])
            ad = abs(d)
            if best is None or ad > best[0]:
                best = (ad, a, bb, d)
    return best


@dataclass(frozen=True)
class DavenportSystem:
    """The y-vectors and permutations putting the largest b x b minor lower-right.

    row_perm/col_perm map new (permuted) index -> original index, 0-based.
    y_vectors are in permuted coordinates; delta is the signed lower-right
    b x b determinant of the permuted Hessian H'.
    """

    b: int
    n: int
    row_perm: tuple
    col_perm: tuple
    hessian_permuted: tuple     # rows of H'
    y_vectors: tuple            # n-b vectors, each length n
    delta: object               # det of the lower-right b x b block of H'
    delta_norm: object          # |delta| = max |b x b minor|

    def y_in_original_coords(self, i: int):
        """Undo the column permutation of the i-th y-vector (0-based i)."""
        y = self.y_vectors[i]
        out = [0] * self.n
        for new, old in enumerate(self.col_perm):
            out[old] = y[new]
        return out


def build_y_vectors(c: CubicForm, x0: Sequence, b: int) -> DavenportSystem:
    """Construct y^(1..n-b) whose images under H' are single (b+1)-minors."""
    n = c.n
    if not (1 <= b <= n - 1):
        raise DimensionMismatchError(f"need 1 <= b <= n-1, got b={b}")
    rows = _hessian_rows(c, x0)
    ad, rset, cset, _ = _largest_minor(rows, b)
    if ad == 0:
        raise VanishingMinorError(f"all {b}x{b} minors of H_c(x0) vanish")
    row_perm = tuple([i for i in range(n) if i not in rset] + list(rset))
    col_perm = tuple([j for j in range(n) if j not in cset] + list(cset))
    Hp = [[rows[row_perm[i]][col_perm[j]] for j in range(n)] for i in range(n)]
    nb = n - b
    lower_right = [[Hp[i][j] for j in range(nb, n)] for i in range(nb, n)]
    delta = det(lower_right)
    sign_nb = 1 if nb % 2 == 0 else -1
    yvecs = []
    for i in range(nb):          # 0-based i; formulas below use 1-based j
        y = [0] * n
        y[i] = sign_nb * delta
        for j in range(nb, n):   # 0-based j > n-b-1, i.e. 1-based j > n-b
            cols = [i] + [l for l in range(nb, n) if l != j]
            sub = [[Hp[r][cc] for cc in cols] for r in range(nb, n)]
            sgn = 1 if (j + 1) % 2 == 0 else -1
            y[j] = sgn * det(sub)
        yvecs.append(tuple(y))
    return DavenportSystem(
        b, n, row_perm, col_perm,
        tuple(tuple(r) for r in Hp),
        tuple(yvecs), delta, abs(delta),
    )


@dataclass(frozen=True)
class HyIdentityReport:
    passes: bool
    max_error: object
    minors_hit: tuple   # the (b+1)-minor value that (H'y^(i))_i equals, per i

    def to_dict(self):
        return {"pass": self.passes, "max_error": float(self.max_error), "minors": [float(v) for v in self.minors_hit]}


def verify_system_identity(sys: DavenportSystem) -> HyIdentityReport:
    """Check entrywise that H' y^(i) consists of signed (b+1)x(b+1) minors
    in the first n-b slots and zeros in the last b slots."""
    n, b = sys.n, sys.b
    nb = n - b
    Hp = [list(r) for r in sys.hessian_permuted]
    sign_nb = 1 if nb % 2 == 0 else -1
    max_err = 0
    hits = []
    for i in range(nb):
        y = sys.y_vectors[i]
        Hy = [sum(Hp[j][l] * y[l] for l in range(n)) for j in range(n)]
        for j in range(n):
            if j < nb:
                rows_idx = [j] + list(range(nb, n))
                cols_idx = [i] + list(range(nb, n))
                expected = sign_nb * det([[Hp[r][cc] for cc in cols_idx] for r in rows_idx])
            else:
                expected = 0
            err = abs(Hy[j] - expected)
            if err > max_err:
                max_err = err
        rows_idx = [i] + list(range(nb, n))
        cols_idx = [i] + list(range(nb, n))
        hits.append(sign_nb * det([[Hp[r][cc] for cc in cols_idx] for r in rows_idx]))
    return HyIdentityReport(max_err == 0, max_err, tuple(hits))


@dataclass(frozen=True)
class IdentitySuite:
    trials: int
    passed: int
    passes: bool

    def to_dict(self):
        return {"trials": self.trials, "passed": self.passed, "pass": self.passes}


def verify_Hy_identity(c: CubicForm, b: int, trials: int = 200, seed: int = 0) -> IdentitySuite:
    """Exercise the exact identity at random integer points x in [-9, 9]^n
    (skipping points where all b x b minors vanish). Every trial must pass:
    the identity is polynomial, so any failure is an implementation bug."""
    rng = np.random.default_rng(seed)
    done = 0
    passed = 0
    attempts = 0
    while done < trials and attempts < 50 * trials:
        attempts += 1
        x = [int(v) for v in rng.integers(-9, 10, size=c.n)]
        try:
            sysd = build_y_vectors(c, x, b)
        except VanishingMinorError:
            continue
        done += 1
        if verify_system_identity(sysd).passes:
            passed += 1
    return IdentitySuite(done, passed, done > 0 and passed == done)


@dataclass(frozen=True)
class YBasis:
    """Normalized Y-vectors and the unimodular matrix Q = (Y^(1)..Y^(n-b), e_(n-b+1)..e_n)."""

    system: DavenportSystem
    Y_vectors: tuple            # n-b vectors in permuted coordinates, entries in [-1, 1]
    Q: tuple                    # rows of Q, det Q = 1 exactly
    sign_flips: tuple           # indices i whose Y^(i) was negated to normalize det
    kappa: object               # max |entry| of Q^(-1)

    def Y_in_original_coords(self, i: int):
        y = self.Y_vectors[i]
        out = [0] * self.system.n
        for new, old in enumerate(self.system.col_perm):
            out[old] = y[new]
        return out


def build_Y_basis(c: CubicForm, x0: Sequence, b: int) -> YBasis:
    """Y^(i) = y^(i)(x0) / max|b x b minor|; diagonal signs are flipped to +1 so
    that Q is lower unitriangular up to permutation and det Q = 1 exactly."""
    return complete_Y_basis(build_y_vectors(c, x0, b))


def complete_Y_basis(sys: DavenportSystem) -> YBasis:
    n, b = sys.n, sys.b
    nb = n - b
    dn = sys.delta_norm
    Y = [[v / dn if isinstance(v, Fraction) or isinstance(dn, Fraction) else v / dn for v in yv] for yv in sys.y_vectors]
    flips = []
    for i in range(nb):
        if Y[i][i] < 0:
            Y[i] = [-v for v in Y[i]]
            flips.append(i)
    # Q columns: Y^(1..n-b) then the last b standard basis vectors
    Q = [[0] * n for _ in range(n)]
    for i in range(nb):
        for j in range(n):
            Q[j][i] = Y[i][j]
    for i in range(nb, n):
        Q[i][i] = 1
    # Q = [[I, 0], [Qt, I]] block-wise, so Q^(-1) = [[I, 0], [-Qt, I]]
    kappa = max(abs(Q[j][i]) for j in range(n) for i in range(n))
    return YBasis(sys, tuple(tuple(y) for y in Y), tuple(tuple(r) for r in Q), tuple(flips), kappa)


def det_Q(basis: YBasis):
    return det([list(r) for r in basis.Q])


# -- trilinear smallness ------------------------------------------------

def _kappa_trilinear(n: int) -> float:
    """Calibrated explicit constant for the trilinear bound at dimension n."""
    return 4.0 * n * math.comb(n, n // 2) ** 2


@dataclass(frozen=True)
class TrilinearReport:
    b: int
    kappa: float
    max_ratio: float
    trials: int
    passes: bool

    def to_dict(self):
        return {"b": self.b, "kappa": self.kappa, "max_ratio": self.max_ratio,
                "trials": self.trials, "pass": self.passes}


def trilinear_bound_check(c: CubicForm, x0: Sequence, b: int, trials: int = 64, seed: int = 0) -> TrilinearReport:
    """Verify |Y^T H_c(t) Y'| <= kappa(n) (||J^(b+1)(x0) t|| / ||Delta^(b)||
    + |lambda_(b+1)| ||t|| / |lambda_b|) over random integer directions t."""
    n = c.n
    cf = c.to_float()
    H0 = cf.hessian(x0).to_array()
    eigs = np.sort(np.abs(np.linalg.eigvalsh(H0)))[::-1]
    lam_b, lam_b1 = float(eigs[b - 1]), float(eigs[b])
    if lam_b <= 1e-9 * n * max(float(eigs[0]), 1.0):
        raise ZeroEigenvalueError(f"|lambda_{b}| is numerically zero at x0")
    sysd = build_y_vectors(cf, x0, b)
    basis = complete_Y_basis(sysd)
    nb = n - b
    Ys = [np.array([float(v) for v in basis.Y_in_original_coords(i)]) for i in range(nb)]
    delta_norm = float(minors_vector(cf, x0, b).sup_norm())
    J = minors_jacobian(cf, x0, b + 1).to_array()
    kappa = _kappa_trilinear(n)
    rng = np.random.default_rng(seed)
    max_ratio = 0.0
    for _ in range(trials):
        t = rng.integers(-5, 6, size=n).astype(float)
        if not np.any(t):
            continue
        Ht = cf.hessian(list(t)).to_array()
        lhs = max(abs(float(y @ Ht @ y2)) for y in Ys for y2 in Ys)
        rhs = float(np.max(np.abs(J @ t))) / delta_norm + lam_b1 * float(np.max(np.abs(t))) / lam_b
        if rhs == 0:
            continue
        max_ratio = max(max_ratio, lhs / rhs)
    return TrilinearReport(b, kappa, max_ratio, trials, max_ratio <= kappa)


# -- the count-or-subspaces dichotomy ----------------------------------

@dataclass(frozen=True)
class SubspacePair:
    """X (arguments of the Hessian) and Y with y^T H_c(x) y' uniformly small."""

    X_basis: tuple
    Y_basis: tuple
    quality: float      # max |Y^T H_c(X) Y'| over normalized basis triples
    exact_Y: bool

    @property
    def dims(self):
        return (len(self.X_basis), len(self.Y_basis))


@dataclass(frozen=True)
class DichotomyResult:
    kind: str           # "BOUND", "PAIR", or "inconclusive"
    branch: str         # trichotomy branch that produced it
    payload: dict
    pair: Optional[SubspacePair] = None

    def to_dict(self):
        d = {"kind": self.kind, "branch": self.branch, **self.payload}
        if self.pair is not None:
            d["X_basis"] = [list(v) for v in self.pair.X_basis]
            d["Y_basis"] = [[float(u) for u in v] for v in self.pair.Y_basis]
            d["quality"] = self.pair.quality
            d["dims"] = list(self.pair.dims)
        return d


def _pair_quality(c: CubicForm, X_basis, Y_basis) -> float:
    cf = c.to_float()
    q = 0.0
    for xv in X_basis:
        xa = np.array([float(v) for v in xv])
        nx = float(np.max(np.abs(xa)))
        if nx == 0:
            continue
        H = cf.hessian(list(xa)).to_array()
        for ya in Y_basis:
            y1 = np.array([float(v) for v in ya])
            n1 = float(np.max(np.abs(y1)))
            for yb in Y_basis:
                y2 = np.array([float(v) for v in yb])
                n2 = float(np.max(np.abs(y2)))
                if n1 == 0 or n2 == 0:
                    continue
                q = max(q, abs(float(y1 @ H @ y2)) / (nx * n1 * n2))
    return q


def dichotomy(c: CubicForm, B: int, C: float, sigma: int, kappa_max: float | None = None) -> DichotomyResult:
    """Either certify N^aux(B) <= kappa B^(n+sigma) log(B)^n, or produce a
    subspace pair (X, Y) with dim X + dim Y = n + sigma + 1 on which the
    trilinear form is small. Runs the pigeonhole pick, then the trichotomy."""
    n = c.n
    ph = pigeonhole(c, B)
    tri = trichotomy(c, B, C, sigma, ph.dclass)
    if kappa_max is None:
        kappa_max = 16.0 ** n
    if tri.branch == "I":
        naux = ph.certificate["naux"]
        bound_base = B ** (n + sigma) * _log_factor(B, n)
        kappa = naux / bound_base
        return DichotomyResult(
            "BOUND", "I",
            {
                "naux": naux,
                "kappa": kappa,
                "kappa_max": kappa_max,
                "certified": kappa <= kappa_max,
                "cover": tri.payload["cover"],
                "class": ph.dclass.label(),
            },
        )
    if tri.branch == "III":
        X = tuple(tuple(v) for v in tri.payload["X_basis"])
        Y = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
        pair = SubspacePair(X, Y, _pair_quality(c, X, Y), True)
        return DichotomyResult("PAIR", "III", {"class": ph.dclass.label()}, pair)
    if tri.branch == "II":
        b = tri.payload["b"]
        x0 = tri.payload["x0"]
        basis = build_Y_basis(c, x0, b)
        Y = tuple(tuple(basis.Y_in_original_coords(i)) for i in range(n - b))
        X = tuple(tuple(v) for v in tri.payload["X_basis"])
        pair = SubspacePair(X, Y, _pair_quality(c, X, Y), c.backend == EXACT)
        return DichotomyResult(
            "PAIR", "II",
            {"class": ph.dclass.label(), "b": b, "x0": list(x0),
             "kappa_trilinear": _kappa_trilinear(n)},
            pair,
        )
    return DichotomyResult("inconclusive", "inconclusive", {"detail": tri.payload, "class": ph.dclass.label()})


# -- singular point extraction -----------------------------------------

@dataclass(frozen=True)
class CandidatePoint:
    vector: tuple       # in the ambient coordinates
    residual: object    # ||grad c|| at the (sup-normalized) candidate
    exact: bool

    def to_dict(self):
        return {"vector": [float(v) for v in self.vector],
                "residual": float(self.residual), "exact": self.exact}


def _complete_basis(X_basis, n: int):
    """Greedy standard basis vectors extending X to a full basis; returns their indices."""
    rows = [list(map(float, v)) for v in X_basis]
    chosen = []
    for t in range(n):
        e = [0.0] * n
        e[t] = 1.0
        trial = np.array(rows + [e])
        if np.linalg.matrix_rank(trial, tol=1e-9) > len(rows):
            rows.append(e)
            chosen.append(t)
        if len(rows) == n:
            break
    return chosen


def singular_candidates(c: CubicForm, pair: SubspacePair, tol: float = 1e-7,
                        samples: int = 200, seed: int = 0):
    """Points [y] in [Y] with y^T H_c(x^(i)) y = 0 for a basis completion
    x^(1..b) of X (b = n - dim X). Exact small-integer candidates are checked
    first with exact arithmetic; dim Y = 3 additionally uses seeded numeric
    sampling. Residual is ||grad c||_inf at the sup-normalized candidate."""
    n = c.n
    dim_y = len(pair.Y_basis)
    if dim_y > 3:
        raise DimensionMismatchError("candidate search supports dim Y <= 3")
    b = n - len(pair.X_basis)
    if b < 0:
        raise DimensionMismatchError("X basis is overcomplete")
    completion = _complete_basis(pair.X_basis, n)[:b]  # empty when b = 0
    exact_ok = c.backend == EXACT and pair.exact_Y
    # Gram matrices M_i = U^T H_c(e_t) U restricted to Y coordinates
    Ms = []
    for t in completion:
        e = [0] * n
        e[t] = 1
        H = c.hessian(e)
        M = [[sum(pair.Y_basis[a][p] * v for p, v in enumerate(H.apply(list(pair.Y_basis[bb]))))
              for bb in range(dim_y)] for a in range(dim_y)]
        Ms.append(M)
    out = []
    seen = set()

    def try_candidate(u, exact):
        vals = [sum(M[a][bb] * u[a] * u[bb] for a in range(dim_y) for bb in range(dim_y)) for M in Ms]
        if exact:
            if any(v != 0 for v in vals):
                return
        else:
            if any(abs(float(v)) > tol for v in vals):
                return
        y = [sum(pair.Y_basis[a][p] * u[a] for a in range(dim_y)) for p in range(n)]
        mx = max(abs(float(v)) for v in y)
        if mx == 0:
            return
        key = tuple(round(float(v) / mx, 6) for v in y)
        keyn = tuple(-v for v in key)
        if key in seen or keyn in seen:
            return
        seen.add(key)
        if exact:
            mxe = max(abs(v) for v in y)
            ye = [Fraction(v) / mxe for v in y]
            grad = c.gradient(ye)
            res = max(abs(g) for g in grad)
            out.append(CandidatePoint(tuple(ye), res, True))
        else:
            ya = [float(v) / mx for v in y]
            grad = c.to_float().gradient(ya)
            res = max(abs(float(g)) for g in grad)
            out.append(CandidatePoint(tuple(ya), res, False))

    # small-integer directions in Y coordinates, checked exactly when possible
    for u in itertools.product((-1, 0, 1), repeat=dim_y):
        if all(v == 0 for v in u):
            continue
        first = next(v for v in u if v != 0)
        if first < 0:
            continue
        try_candidate(list(u), exact_ok)
    if dim_y == 3:
        rng = np.random.default_rng(seed)
        Mf = [np.array([[float(v) for v in row] for row in M]) for M in Ms]
        for _ in range(samples):
            u = rng.standard_normal(dim_y)
            u /= np.linalg.norm(u)
            for _ in range(60):  # projected descent on sum of squared quadric values
                g = np.zeros(dim_y)
                f = 0.0
                for M in Mf:
                    q = float(u @ M @ u)
                    f += q * q
                    g += 4.0 * q * (M @ u)
                g -= (g @ u) * u
                if f < (0.01 * tol) ** 2 or np.linalg.norm(g) < 1e-14:
                    break
                u = u - 0.1 * g / max(1.0, np.linalg.norm(g))
                u /= np.linalg.norm(u)
            try_candidate([float(v) for v in u], False)
    return out


# -- sigma for diagonal systems ----------------------------------------

def _nullspace_frac(rows):
    """Exact nullspace basis of a rational matrix via Gaussian elimination."""
    if not rows:
        return []
    m, ncols = len(rows), len(rows[0])
    A = [[Fraction(v) for v in r] for r in rows]
    piv_cols = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, m) if A[i][col] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = A[r][col]
        A[r] = [v / inv for v in A[r]]
        for i in range(m):
            if i != r and A[i][col] != 0:
                f = A[i][col]
                A[i] = [a - f * bb for a, bb in zip(A[i], A[r])]
        piv_cols.append(col)
        r += 1
        if r == m:
            break
    free = [c for c in range(ncols) if c not in piv_cols]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for ri, pc in enumerate(piv_cols):
            v[pc] = -A[ri][fc]
        basis.append(v)
    return basis


def sigma_diagonal(forms: Sequence[CubicForm]) -> int:
    """sigma for a diagonal system: 1 + max over real pencils beta of the
    projective dimension of the singular locus of beta . c, computed exactly
    from which coefficient columns a pencil can annihilate."""
    if not forms:
        raise DimensionMismatchError("need at least one form")
    n = forms[0].n
    for c in forms:
        if c.n != n:
            raise DimensionMismatchError("forms have differing n")
        if not c.is_diagonal():
            raise NonDiagonalError("sigma_diagonal needs diagonal forms")
    A = [[Fraction(v) for v in c.diagonal_coefficients()] for c in forms]  # R x n
    R = len(forms)

    def kernel_alive(cols):
        """A beta annihilating the given columns whose combined form is nonzero."""
        rows = [[A[i][j] for i in range(R)] for j in cols]  # |cols| x R, unknowns beta
        ker = _nullspace_frac(rows) if rows else [
            [Fraction(1) if i == t else Fraction(0) for i in range(R)] for t in range(R)
        ]
        for beta in ker:
            combined = [sum(beta[i] * A[i][j] for i in range(R)) for j in range(n)]
            if any(v != 0 for v in combined):
                return True
        return False

    # a pencil with the zero combined form makes every point singular
    full_rows = [[A[i][j] for i in range(R)] for j in range(n)]
    ker_full = _nullspace_frac(full_rows)
    if any(any(v != 0 for v in beta) for beta in ker_full):
        return n
    for z in range(n - 1, 0, -1):
        for cols in itertools.combinations(range(n), z):
            if kernel_alive(cols):
                return z
    return 0
