"""Counting functions for the auxiliary inequality, dyadic eigenvalue classes,
the pigeonhole corollary, and the covering trichotomy.

Counts are exact. For rational forms all inequality tests are carried out in
scaled integer arithmetic: with T the third-derivative tensor and s the lcm
of its denominators, the condition ||H_c(x) y|| < B is equivalent to
6 ||(sT . x) y|| < B max|sT|, which is a comparison of integers.

Enumeration order is lexicographic over the box (first coordinate slowest),
so per-class breakdowns and golden counts are stable. All Vinogradov
constants in certificates are explicit computed numbers.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .errors import DimensionMismatchError, ZeroFormError
from .forms import CubicForm, SymMatrix
from .minors import SingularSpectrum, minors_jacobian, minors_vector, singular_values, small_or_big, SmallSpace, BigSpace

STRICT = "strict"
WEAK = "weak"


@dataclass(frozen=True)
class CountReport:
    count: int
    B: int
    strictness: str
    breakdown: Optional[dict] = None

    def to_dict(self):
        d = {"count": self.count, "B": self.B, "strictness": self.strictness}
        if self.breakdown is not None:
            d["breakdown"] = {label: cnt for label, cnt in sorted(self.breakdown.items())}
        return d


# -- lattice grids -----------------------------------------------------

@lru_cache(maxsize=8)
def _lattice_grid(n: int, B: int) -> np.ndarray:
    """All integer points of the box [-B, B]^n, lexicographic order, shape (m, n)."""
    axes = [np.arange(-B, B + 1, dtype=np.int64)] * n
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack(mesh, axis=-1).reshape(-1, n)


# -- scaled integer view of a rational form ----------------------------

class _IntForm:
    """Integer-scaled third-derivative tensor of a rational cubic form."""

    def __init__(self, c: CubicForm):
        if c.is_zero:
            raise ZeroFormError("counting functions need a nonzero form")
        n = c.n
        T = [[[c.third_derivative(p, q, r) for r in range(n)] for q in range(n)] for p in range(n)]
        dens = [Fraction(v).denominator for plane in T for row in plane for v in row]
        scale = 1
        for d in dens:
            scale = scale * d // math.gcd(scale, d)
        Tz = np.array(
            [[[int(Fraction(v) * scale) for v in row] for row in plane] for plane in T],
            dtype=np.int64,
        )
        self.n = n
        self.scale = scale
        self.Tz = Tz
        self.Tmat = Tz.reshape(n * n, n)  # row (p*n+q) holds T[p,q,:]
        self.max_abs = int(np.max(np.abs(Tz)))  # equals 6 * scale * ||c||
        if self.max_abs == 0:
            raise ZeroFormError("counting functions need a nonzero form")
        diag = c.is_diagonal()
        self.diag_coeffs = [int(Fraction(a) * scale) for a in c.diagonal_coefficients()] if diag else None

    def hessian_int(self, x) -> np.ndarray:
        """6 * scale * ||c|| * H_c(x) as an integer matrix."""
        xv = np.asarray(x, dtype=np.int64)
        return (self.Tmat @ xv).reshape(self.n, self.n)

    def hessian_float(self, x) -> np.ndarray:
        """The normalized Hessian H_c(x) = 6 Tz.x / max|Tz| as floats."""
        return 6.0 * self.hessian_int(x).astype(float) / self.max_abs


# -- core integer box counting -----------------------------------------

def _count_box_int(A: np.ndarray, B: int, thr: int, strict: bool) -> int:
    """#{y in Z^n, |y_i| <= B, ||A y||_inf (<|<=) thr} for an integer matrix A."""
    n = A.shape[1]
    if not np.any(A):
        return (2 * B + 1) ** n
    if n == 1:
        a = int(np.max(np.abs(A[:, 0])))
        if a == 0:
            return 2 * B + 1
        tmax = (thr - 1) // a if strict else thr // a
        return min(2 * B + 1, 2 * max(tmax, -1) + 1) if tmax >= 0 else 0
    rows = [np.array(r, dtype=np.int64) for r in A.tolist()]
    # normalize last coefficient nonnegative
    last = A[:, n - 1]
    flip = last < 0
    A2 = A.copy()
    A2[flip] *= -1
    last = A2[:, n - 1]
    active = last > 0
    prefix = _lattice_grid(n - 1, B)
    P = prefix @ A2[:, : n - 1].T  # (m, rows)
    m = P.shape[0]
    lo = np.full(m, -B, dtype=np.int64)
    hi = np.full(m, B, dtype=np.int64)
    ok = np.ones(m, dtype=bool)
    for i in range(A2.shape[0]):
        p = P[:, i]
        a = int(last[i])
        if a == 0:
            if strict:
                ok &= np.abs(p) < thr
            else:
                ok &= np.abs(p) <= thr
            continue
        if strict:
            row_hi = (thr - p - 1) // a
            row_lo = -((thr + p - 1) // a)
        else:
            row_hi = (thr - p) // a
            row_lo = -((thr + p) // a)
        np.minimum(hi, row_hi, out=hi)
        np.maximum(lo, row_lo, out=lo)
    counts = hi - lo + 1
    np.clip(counts, 0, None, out=counts)
    counts[~ok] = 0
    return int(counts.sum())


def _count_box_float(A: np.ndarray, B: int, thr: float, strict: bool) -> int:
    """Float analogue of _count_box_int, vectorized over the whole box."""
    n = A.shape[1]
    grid = _lattice_grid(n, B).astype(float)
    vals = grid @ A.T
    mx = np.max(np.abs(vals), axis=1)
    return int(np.count_nonzero(mx < thr if strict else mx <= thr))


def _diag_pair_count(a: int, maxabs: int, B: int, strict: bool) -> int:
    """#{(s,t) in [-B,B]^2 : 6|a s t| (<|<=) B*maxabs} for one diagonal coefficient."""
    if a == 0:
        return (2 * B + 1) ** 2
    total = 0
    thr = B * maxabs
    for s in range(-B, B + 1):
        if s == 0:
            total += 2 * B + 1
            continue
        # |H y|_i = 36 |a s t| / maxabs for the scaled diagonal tensor
        d = 36 * abs(a) * abs(s)
        tmax = (thr - 1) // d if strict else thr // d
        total += min(2 * B + 1, 2 * tmax + 1)
    return total


# -- public counting operations ----------------------------------------

def count_NH(H, B: int, strictness: str = WEAK) -> CountReport:
    """Exact #{y in Z^n : ||y|| <= B, ||H y|| (<|<=) B}."""
    if B < 1:
        raise DimensionMismatchError("need B >= 1")
    strict = strictness == STRICT
    if isinstance(H, SymMatrix) and H.entries and isinstance(H.entries[0][0], Fraction):
        n = H.n
        dens = [v.denominator for row in H.entries for v in row]
        den = 1
        for d in dens:
            den = den * d // math.gcd(den, d)
        A = np.array([[int(v * den) for v in row] for row in H.entries], dtype=np.int64)
        cnt = _count_box_int(A, int(B), int(B) * den, strict)
        return CountReport(cnt, B, strictness)
    A = H.to_array() if isinstance(H, SymMatrix) else np.asarray(H, dtype=float)
    n = A.shape[1]
    if (2 * B + 1) ** n <= 2_000_000:
        cnt = _count_box_float(A, int(B), float(B), strict)
    else:
        # interval method over the last coordinate
        cnt = _count_box_float_prefix(A, int(B), float(B), strict)
    return CountReport(cnt, B, strictness)


def _count_box_float_prefix(A: np.ndarray, B: int, thr: float, strict: bool) -> int:
    n = A.shape[1]
    if not np.any(A):
        return (2 * B + 1) ** n
    A2 = A.copy()
    flip = A2[:, n - 1] < 0
    A2[flip] *= -1
    last = A2[:, n - 1]
    prefix = _lattice_grid(n - 1, B).astype(float)
    P = prefix @ A2[:, : n - 1].T
    m = P.shape[0]
    lo = np.full(m, float(-B))
    hi = np.full(m, float(B))
    ok = np.ones(m, dtype=bool)
    for i in range(A2.shape[0]):
        p = P[:, i]
        a = float(last[i])
        if a == 0.0:
            ok &= (np.abs(p) < thr) if strict else (np.abs(p) <= thr)
            continue
        np.minimum(hi, (thr - p) / a, out=hi)
        np.maximum(lo, (-thr - p) / a, out=lo)
    if strict:
        hi_i = np.ceil(hi) - 1
        lo_i = np.floor(lo) + 1
    else:
        hi_i = np.floor(hi)
        lo_i = np.ceil(lo)
    counts = hi_i - lo_i + 1
    np.clip(counts, 0, None, out=counts)
    counts[~ok] = 0
    return int(counts.sum())


def ellipsoid_bound(H, B: int) -> float:
    """A certified upper bound for count_NH(H, B, WEAK).

    The counted points lie in the box and in the ellipsoid y^T H^T H y <= n B^2
    with principal radii sqrt(n) B / Lambda_i. Packing disjoint unit cubes at the
    lattice points and slicing the inflated body along prefixes of the singular
    directions gives, for each 0 <= i <= n,

        count <= prod_{j<=i} 2 (r_j + sqrt(n)/2) * sqrt(2)^i * (2B+1)^(n-i),

    where sqrt(2)^i bounds codimension-i cross-sections of a cube (central
    sections are extremal by Brunn's theorem, and bounded by 2^(i/2) by Ball's
    theorem). The i = 0 term is the exact box count (2 floor(B) + 1)^n and the
    i = n term drops the slice factor. We return the minimum over all prefixes.
    """
    if B < 1:
        raise DimensionMismatchError("need B >= 1")
    A = H.to_array() if isinstance(H, SymMatrix) else np.asarray(H, dtype=float)
    n = A.shape[1]
    spec = singular_values(A)
    box = float((2 * math.floor(B) + 1) ** n)
    best = box
    sqrt_n = math.sqrt(n)
    prefix = 1.0
    for i in range(1, n + 1):
        lam = spec[i - 1]
        r = math.inf if lam == 0 else sqrt_n * B / lam
        r = min(r, sqrt_n * B)  # radii never need to exceed the box scale
        prefix *= 2.0 * (r + sqrt_n / 2.0)
        slice_factor = math.sqrt(2.0) ** i if i < n else 1.0
        cand = prefix * slice_factor * float(2 * B + 1) ** (n - i)
        best = min(best, cand)
    return best


def count_aux(
    c: CubicForm,
    B: int,
    strictness: str = STRICT,
    breakdown: bool = False,
    threads: int = 1,
) -> CountReport:
    """N^aux_c(B): pairs (x, y) in the box with ||H_c(x) y|| (<|<=) B.

    Decomposes as sum over x of N_{H_c(x)}(B). Diagonal forms use the exact
    per-coordinate factorization; the generic path enumerates x.
    """
    if B < 1:
        raise DimensionMismatchError("need B >= 1")
    intf = _IntForm(c)
    strict = strictness == STRICT
    if intf.diag_coeffs is not None and not breakdown:
        total = 1
        for a in intf.diag_coeffs:
            total *= _diag_pair_count(a, intf.max_abs, int(B), strict)
        return CountReport(total, B, strictness)
    grid = _lattice_grid(c.n, int(B))
    if threads > 1:
        chunks = np.array_split(np.arange(grid.shape[0]), threads)
        args = [(c, int(B), strictness, breakdown, int(idx[0]), int(idx[-1]) + 1) for idx in chunks if len(idx)]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(_aux_worker, args))
        total = sum(p[0] for p in parts)
        if breakdown:
            merged: dict = {}
            for _, bd in parts:
                for key, v in bd.items():
                    merged[key] = merged.get(key, 0) + v
            return CountReport(total, B, strictness, merged)
        return CountReport(total, B, strictness)
    total, bd = _aux_range(intf, int(B), strict, breakdown, 0, grid.shape[0])
    return CountReport(total, B, strictness, bd if breakdown else None)


def _aux_worker(args):
    c, B, strictness, breakdown, start, stop = args
    intf = _IntForm(c)
    total, bd = _aux_range(intf, B, strictness == STRICT, breakdown, start, stop)
    return total, (bd or {})


def _aux_range(intf: _IntForm, B: int, strict: bool, breakdown: bool, start: int, stop: int):
    grid = _lattice_grid(intf.n, B)
    thr = B * intf.max_abs
    total = 0
    bd: dict = {} if breakdown else None
    for idx in range(start, stop):
        x = grid[idx]
        G = intf.hessian_int(x)
        # ||H_c(x) y|| < B  <=>  6 ||G y|| < B * max|Tz|
        cnt = _count_box_int(6 * G, B, thr, strict)
        total += cnt
        if breakdown:
            label = _classify_int(intf, x, B).label()
            bd[label] = bd.get(label, 0) + cnt
    return total, bd


def count_aux_eq(c: CubicForm, B: int) -> CountReport:
    """Pairs with H_c(x) y = 0 exactly over the box."""
    if B < 1:
        raise DimensionMismatchError("need B >= 1")
    intf = _IntForm(c)
    if intf.diag_coeffs is not None:
        total = 1
        side = 2 * B + 1
        for a in intf.diag_coeffs:
            total *= side * side if a == 0 else side * side - (2 * B) ** 2
        return CountReport(total, B, "eq")
    grid = _lattice_grid(c.n, int(B))
    total = 0
    for x in grid:
        G = intf.hessian_int(x)
        total += _count_box_int(G, int(B), 0, False)
    return CountReport(total, B, "eq")


# -- dyadic classes ----------------------------------------------------

@dataclass(frozen=True)
class DyadicClass:
    """K_k(2^e_1, ..., 2^e_k, 1); K_0(1) when k = 0."""

    k: int
    exponents: tuple

    def __post_init__(self):
        if self.k != len(self.exponents):
            raise DimensionMismatchError("k must equal len(exponents)")
        es = tuple(int(e) for e in self.exponents)
        if any(e < 1 for e in es):
            raise DimensionMismatchError("exponents must be >= 1")
        if any(es[i] < es[i + 1] for i in range(len(es) - 1)):
            raise DimensionMismatchError("exponents must be nonincreasing")
        object.__setattr__(self, "exponents", es)

    @property
    def bounds(self) -> tuple:
        """E_1 >= ... >= E_k >= E_{k+1} = 1."""
        return tuple(2.0 ** e for e in self.exponents) + (1.0,)

    def label(self) -> str:
        if self.k == 0:
            return "K_0(1)"
        es = ",".join(str(2 ** e) for e in self.exponents)
        return f"K_{self.k}({es},1)"

    def contains_spectrum(self, abs_eigs: Sequence[float]) -> bool:
        E = self.bounds
        n = len(abs_eigs)
        for i in range(n):
            lam = abs_eigs[i]
            if i < self.k:
                if not (E[i] / 2 < lam <= E[i]):
                    return False
            else:
                if lam > 1.0:
                    return False
        return True


def _abs_eigs(H_float: np.ndarray) -> np.ndarray:
    vals = np.abs(np.linalg.eigvalsh(H_float))
    return np.sort(vals)[::-1]


def _classify_spectrum(abs_eigs: np.ndarray) -> DyadicClass:
    exps = []
    for lam in abs_eigs:
        if lam <= 1.0:
            break
        # E/2 < lam <= E with E = 2^e; boundary lam == E/2 goes to the class below
        e = max(1, math.ceil(math.log2(lam) - 1e-12))
        exps.append(e)
    return DyadicClass(len(exps), tuple(exps))


def _classify_int(intf: _IntForm, x, B: int) -> DyadicClass:
    return _classify_spectrum(_abs_eigs(intf.hessian_float(x)))


def classify_dyadic(c: CubicForm, x: Sequence, B: int) -> DyadicClass:
    """The unique class among K_0(1) and K_k(2^e1,...,2^ek,1) containing x."""
    if max(abs(float(v)) for v in x) > B:
        raise DimensionMismatchError("point lies outside the box")
    intf = _IntForm(c)
    return _classify_int(intf, [int(v) for v in x], B)


def class_histogram(c: CubicForm, B: int) -> dict:
    """Lattice-point count of every nonempty class over the box."""
    intf = _IntForm(c)
    grid = _lattice_grid(c.n, int(B))
    hist: dict = {}
    for x in grid:
        label = _classify_int(intf, x, B).label()
        hist[label] = hist.get(label, 0) + 1
    return hist


@dataclass(frozen=True)
class PartitionReport:
    lhs: int
    rhs: int
    equal: bool
    breakdown: dict

    def to_dict(self):
        return {
            "lhs": self.lhs,
            "rhs": self.rhs,
            "equal": self.equal,
            "breakdown": dict(sorted(self.breakdown.items())),
        }


def partition_check(c: CubicForm, B: int, strictness: str = STRICT) -> PartitionReport:
    """Verify N^aux(B) = sum over classes of sum_{x in class} N_{H_c(x)}(B) exactly."""
    lhs = count_aux(c, B, strictness).count
    rep = count_aux(c, B, strictness, breakdown=True)
    rhs = sum(rep.breakdown.values())
    return PartitionReport(lhs, rhs, lhs == rhs, rep.breakdown)


# -- pigeonhole corollary ----------------------------------------------

H_SMALL = "H_SMALL"
PRESCRIBED = "PRESCRIBED"
ALL_PRESCRIBED = "ALL_PRESCRIBED"


@dataclass(frozen=True)
class PigeonholeResult:
    branch: str
    dclass: DyadicClass
    certificate: dict

    def to_dict(self):
        return {
            "branch": self.branch,
            "class": self.dclass.label(),
            "exponents": list(self.dclass.exponents),
            "certificate": self.certificate,
        }


def _log_factor(B: int, n: int) -> float:
    # log B degenerates at B = 1; certificates use log(max(B, 2))^n
    return math.log(max(B, 2)) ** n


def pigeonhole(c: CubicForm, B: int, strictness: str = STRICT) -> PigeonholeResult:
    """Pick the dyadic class carrying the largest share of N^aux and verify its
    pigeonhole inequality with explicit constants.

    Certified chain: N^aux = sum over classes of S_class (exact), the best
    class has S_best >= N^aux / T with T the number of nonempty classes, and
    S_best <= #class * max_{x in class} N_H(x). All three are checked exactly
    and recorded.
    """
    n = c.n
    intf = _IntForm(c)
    grid = _lattice_grid(n, int(B))
    strict = strictness == STRICT
    thr = B * intf.max_abs
    per_class: dict = {}
    for x in grid:
        dc = _classify_int(intf, x, B)
        cnt = _count_box_int(6 * intf.hessian_int(x), int(B), thr, strict)
        key = (dc.k, dc.exponents)
        s, m, npts = per_class.get(key, (0, 0, 0))
        per_class[key] = (s + cnt, max(m, cnt), npts + 1)
    naux = sum(s for s, _, _ in per_class.values())
    T = len(per_class)
    best_key = max(per_class, key=lambda key: (per_class[key][0], key))
    S_best, max_nh, npts = per_class[best_key]
    dc = DyadicClass(best_key[0], best_key[1])
    assert S_best * T >= naux
    assert S_best <= npts * max_nh
    logf = _log_factor(B, n)
    weight = 2.0 ** sum(dc.exponents)
    kappa = weight * naux / (B ** n * logf * npts) if npts else math.inf
    if dc.k == 0:
        branch = H_SMALL
    elif dc.k == n:
        branch = ALL_PRESCRIBED
    else:
        branch = PRESCRIBED
    cert = {
        "naux": naux,
        "num_classes": T,
        "class_points": npts,
        "class_pair_count": S_best,
        "max_NH_in_class": max_nh,
        "kappa": kappa,
        "log_factor": logf,
        "class_table": {
            DyadicClass(k, es).label(): {"points": p, "pairs": s}
            for (k, es), (s, _, p) in sorted(per_class.items())
        },
    }
    return PigeonholeResult(branch, dc, cert)


# -- covering and the trichotomy ---------------------------------------

@dataclass(frozen=True)
class CoverBox:
    center: tuple
    sides: tuple          # per-coordinate side lengths (axis-aligned)

    def contains(self, pt) -> bool:
        return all(abs(float(p) - c) <= s / 2 for p, c, s in zip(pt, self.center, self.sides))


@dataclass(frozen=True)
class CoverWitness:
    dclass: DyadicClass
    boxes: tuple
    point_count: int
    box_count: int
    allowed: float
    kappa: float
    verified: bool

    def to_dict(self):
        return {
            "class": self.dclass.label(),
            "box_count": self.box_count,
            "point_count": self.point_count,
            "allowed": self.allowed,
            "kappa": self.kappa,
            "verified": self.verified,
            "boxes": [{"center": list(b.center), "sides": list(b.sides)} for b in self.boxes],
        }


@dataclass(frozen=True)
class FailureWitness:
    dclass: DyadicClass
    reason: str
    detail: dict

    def to_dict(self):
        return {"class": self.dclass.label(), "reason": self.reason, "detail": self.detail}


def _global_hessian_map(c: CubicForm) -> np.ndarray:
    """Matrix of the linear map x -> H_c(x), shape (n^2, n)."""
    n = c.n
    cols = []
    for t in range(n):
        e = [0] * n
        e[t] = 1
        cols.append(c.to_float().hessian(e).to_array().reshape(-1))
    return np.stack(cols, axis=1)


def _class_points(intf: _IntForm, B: int, dclass: DyadicClass) -> list:
    grid = _lattice_grid(intf.n, int(B))
    key = (dclass.k, dclass.exponents)
    pts = []
    for x in grid:
        dc = _classify_int(intf, x, B)
        if (dc.k, dc.exponents) == key:
            pts.append(tuple(int(v) for v in x))
    return pts


def cover_class(c: CubicForm, B: int, C: float, sigma: int, dclass: DyadicClass, kappa_max: float | None = None):
    """Cover the lattice points of a dyadic class by proof-shaped boxes.

    The subspace V along which the class is 'thin' comes from the big-subspace
    lemma applied to the global map x -> H_c(x) (k = 0) or to the Jacobian of
    the (k+1)-minors at a class representative (k >= 1). Boxes are axis-aligned
    (V is coordinate-spanned), with side E_{k+1} across V-perp and side
    2 C n E_{k+1} along V. Every class point is covered (verified by scan) and
    the box count is compared against kappa * B^sigma (E_1...E_{k+1})
    E_{k+1}^{-sigma-k-1} with kappa = kappa_max (default (4 C n)^n).
    """
    n = c.n
    intf = _IntForm(c)
    k = dclass.k
    E = dclass.bounds
    pts = _class_points(intf, B, dclass)
    allowed_base = (B ** sigma) * math.prod(E) * E[-1] ** (-sigma - k - 1)
    if kappa_max is None:
        kappa_max = (4.0 * C * n) ** n
    allowed = kappa_max * allowed_base
    if not pts:
        return CoverWitness(dclass, (), 0, 0, allowed, 0.0, True)
    if k == 0:
        dim_v = n - sigma
        target = small_or_big(_global_hessian_map(c), dim_v, C)
        src = "global-hessian-map"
    else:
        x0 = pts[0]
        dim_v = n - sigma - k
        if dim_v < 1:
            return FailureWitness(dclass, "no V dimension left", {"k": k, "sigma": sigma})
        J = minors_jacobian(c.to_float(), [float(v) for v in x0], k + 1)
        target = small_or_big(J, dim_v, C)
        src = "minors-jacobian"
    if isinstance(target, SmallSpace):
        return FailureWitness(
            dclass,
            "cone" if k == 0 else "jacobian-small",
            {"source": src, "lambda_k": target.lambda_k, "dim_small": len(target.basis)},
        )
    v_idx = set(i - 1 for i in target.indices)  # 0-based coordinates spanning V
    side_perp = E[-1]
    side_par = 2.0 * C * n * E[-1]
    sides = tuple(side_par if i in v_idx else side_perp for i in range(n))
    boxes = []
    for pt in pts:
        if any(b.contains(pt) for b in boxes):
            continue
        boxes.append(CoverBox(tuple(float(v) for v in pt), sides))
    uncovered = [pt for pt in pts if not any(b.contains(pt) for b in boxes)]
    if uncovered:
        return FailureWitness(dclass, "uncovered point", {"point": list(uncovered[0])})
    kappa = len(boxes) / allowed_base if allowed_base > 0 else math.inf
    ok = len(boxes) <= allowed
    if not ok:
        return FailureWitness(
            dclass,
            "box count exceeded",
            {"box_count": len(boxes), "allowed": allowed, "kappa": kappa},
        )
    return CoverWitness(dclass, tuple(boxes), len(pts), len(boxes), allowed, kappa, True)


@dataclass(frozen=True)
class TrichotomyResult:
    branch: str   # "I", "II", "III", or "inconclusive"
    payload: dict

    def to_dict(self):
        return {"branch": self.branch, **self.payload}


def trichotomy(c: CubicForm, B: int, C: float, sigma: int, dclass: DyadicClass) -> TrichotomyResult:
    """One verified branch of the covering lemma for a dyadic class.

    Branch III: a (sigma+1)-dim X with ||H_c(X)|| <= C^-1 ||X||, found from
    the singular spectrum of the linear map x -> H_c(x). Branch II: a class
    point x0 in K_b with an eigenvalue gap E_{b+1} < C^-1 E_b and a
    (sigma+b+1)-dim X on which J^(b+1)(x0) is small relative to
    ||Delta^(b)(x0)||. Branch I: a verified cover. If no branch certifies
    with our explicit constants the result is 'inconclusive' (reported,
    never raised).
    """
    n = c.n
    intf = _IntForm(c)
    # branch III
    glob = _global_hessian_map(c)
    tgt = small_or_big(glob, n - sigma, C)
    if isinstance(tgt, SmallSpace):
        return TrichotomyResult(
            "III",
            {
                "X_basis": [list(v) for v in tgt.basis],
                "bound_const": tgt.bound_const,
                "lambda": tgt.lambda_k,
                "certified": tgt.bound_const * tgt.lambda_k <= 1.0 / C,
            },
        )
    # branch II: look for a gap E_{b+1} < C^-1 E_b and a small Jacobian space
    pts = _class_points(intf, B, dclass)
    E = dclass.bounds
    for b in range(1, dclass.k + 1):
        if not (E[b] < E[b - 1] / C):
            continue
        for x0 in pts:
            xf = [float(v) for v in x0]
            dim_small = sigma + b + 1
            if n - sigma - b < 1:
                continue
            J = minors_jacobian(c.to_float(), xf, b + 1)
            Jspec = singular_values(J)
            delta_b = float(minors_vector(c.to_float(), xf, b).sup_norm())
            lam = Jspec[n - sigma - b - 1]
            if math.sqrt(n) * lam <= delta_b / C and delta_b > 0:
                _, _, Vt = np.linalg.svd(J.to_array())
                basis = [list(map(float, Vt[i])) for i in range(n - sigma - b - 1, n)]
                # verify the certificate on the basis and on random combinations
                rng = np.random.default_rng(0)
                ok = True
                Jarr = J.to_array()
                for _ in range(32):
                    w = rng.standard_normal(len(basis))
                    v = np.array(basis).T @ w
                    vn = np.max(np.abs(v))
                    if vn == 0:
                        continue
                    if np.max(np.abs(Jarr @ v)) > delta_b / C * vn + 1e-9 * delta_b:
                        ok = False
                        break
                if ok:
                    return TrichotomyResult(
                        "II",
                        {
                            "b": b,
                            "x0": list(x0),
                            "X_basis": basis,
                            "delta_b": delta_b,
                            "jacobian_lambda": lam,
                        },
                    )
    # branch I
    cover = cover_class(c, B, C, sigma, dclass)
    if isinstance(cover, CoverWitness):
        return TrichotomyResult("I", {"cover": cover.to_dict()})
    return TrichotomyResult("inconclusive", {"failure": cover.to_dict()})
