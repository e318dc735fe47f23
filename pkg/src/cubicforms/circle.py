"""Hardy-Littlewood bookkeeping for diagonal cubic systems: exact zero counts
over boxes, exact local densities mod prime powers, the singular series, a
Monte Carlo singular integral, and the convergence table

    N(P)  vs  S * J * P^(n - 3R).

Counting uses a meet-in-the-middle split on the coordinates so that N(P) at
n = 8, P = 32 is a pair of sorted 65^4-element arrays rather than a 65^8
enumeration. Local densities are exact Fractions computed by cyclic
convolution of per-variable value histograms mod p^k; Python integers are
used for R = 1 (counts near q^n overflow 64-bit at q = 512).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import DimensionMismatchError, NonDiagonalError, ZeroPredictionError
from .forms import CubicForm

_MAX_MODULUS = 512


@dataclass(frozen=True)
class DiagonalSystem:
    """R diagonal cubic forms sum_j a_ij x_j^3 with integer coefficients."""

    coeffs: tuple   # R rows of n integers

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in row) for row in self.coeffs)
        if not rows or not rows[0]:
            raise DimensionMismatchError("need at least one form in at least one variable")
        n = len(rows[0])
        for row in rows:
            if len(row) != n:
                raise DimensionMismatchError("coefficient rows have differing length")
        for orig, conv in zip(self.coeffs, rows):
            for a, b in zip(orig, conv):
                if a != b:
                    raise NonDiagonalError("coefficients must be integers")
        object.__setattr__(self, "coeffs", rows)

    @property
    def R(self) -> int:
        return len(self.coeffs)

    @property
    def n(self) -> int:
        return len(self.coeffs[0])

    @staticmethod
    def from_forms(forms: Sequence[CubicForm]) -> "DiagonalSystem":
        rows = []
        for c in forms:
            if not c.is_diagonal():
                raise NonDiagonalError("circle-method routines need diagonal forms")
            row = []
            for a in c.diagonal_coefficients():
                f = Fraction(a)
                if f.denominator != 1:
                    raise NonDiagonalError("circle-method routines need integer coefficients")
                row.append(int(f))
            rows.append(tuple(row))
        return DiagonalSystem(tuple(rows))

    def forms(self) -> list:
        return [CubicForm.diagonal(list(row)) for row in self.coeffs]

    def evaluate(self, x):
        return [sum(a * int(v) ** 3 for a, v in zip(row, x)) for row in self.coeffs]


def _coordinate_ranges(system: DiagonalSystem, P: int, box):
    if box is None:
        box = [(-1, 1)] * system.n
    if len(box) != system.n:
        raise DimensionMismatchError("box must have one interval per variable")
    ranges = []
    for lo, hi in box:
        lo_i = math.ceil(Fraction(lo) * P)
        hi_i = math.floor(Fraction(hi) * P)
        if hi_i < lo_i:
            raise DimensionMismatchError("empty coordinate range")
        ranges.append(np.arange(lo_i, hi_i + 1, dtype=np.int64))
    return ranges


def _partial_values(system: DiagonalSystem, ranges, idx):
    """All values of (c_1, ..., c_R) restricted to the coordinates in idx,
    flattened over the product of their ranges. Shape (m, R), int64."""
    vals = np.zeros((1, system.R), dtype=np.int64)
    for j in idx:
        t = ranges[j]
        contrib = np.stack([system.coeffs[i][j] * t ** 3 for i in range(system.R)], axis=1)
        vals = (vals[:, None, :] + contrib[None, :, :]).reshape(-1, system.R)
    return vals


def _encode(vals: np.ndarray, offsets, base) -> np.ndarray:
    key = np.zeros(vals.shape[0], dtype=np.int64)
    for i in range(vals.shape[1]):
        key = key * base + (vals[:, i] + offsets[i])
    return key


def count_zeros_box(system: DiagonalSystem, P: int, box=None, method: str = "split") -> int:
    """Exact #{x in Z^n, x/P in box, c_i(x) = 0 for all i}. Default box [-1,1]^n."""
    if P < 1:
        raise DimensionMismatchError("need P >= 1")
    ranges = _coordinate_ranges(system, P, box)
    n, R = system.n, system.R
    if method == "brute":
        mesh = np.meshgrid(*ranges, indexing="ij")
        pts = np.stack(mesh, axis=-1).reshape(-1, n)
        ok = np.ones(pts.shape[0], dtype=bool)
        for i in range(R):
            coeff = np.array(system.coeffs[i], dtype=np.int64)
            ok &= (pts.astype(np.int64) ** 3 @ coeff) == 0
        return int(np.count_nonzero(ok))
    if method != "split":
        raise DimensionMismatchError(f"unknown method {method!r}")
    h = n // 2
    left = _partial_values(system, ranges, list(range(h)))
    right = _partial_values(system, ranges, list(range(h, n)))
    # encode R-tuples of partial sums into single int64 keys
    bound = np.maximum(np.max(np.abs(left), axis=0), np.max(np.abs(right), axis=0))
    base = int(2 * np.max(bound) + 3)
    if base ** R >= 2 ** 62:
        raise DimensionMismatchError("partial sums too large to encode; reduce P")
    offsets = [int(b) + 1 for b in bound]
    lk = np.sort(_encode(left, offsets, base))
    rk = _encode(-right, offsets, base)
    lo = np.searchsorted(lk, rk, side="left")
    hi = np.searchsorted(lk, rk, side="right")
    return int(np.sum(hi - lo))


# -- local densities and the singular series ---------------------------

def _value_histogram(a: int, q: int) -> dict:
    """Multiplicities of a*t^3 mod q over t = 0..q-1."""
    hist: dict = {}
    for t in range(q):
        v = (a * t * t * t) % q
        hist[v] = hist.get(v, 0) + 1
    return hist


def local_density(system: DiagonalSystem, p: int, k: int) -> Fraction:
    """sigma_{p,k} = #{x mod p^k : all forms vanish mod p^k} / p^(k(n-R)), exact."""
    if k == 0:
        return Fraction(1)
    q = p ** k
    if q > _MAX_MODULUS:
        raise DimensionMismatchError(f"modulus {q} exceeds the supported cap {_MAX_MODULUS}")
    n, R = system.n, system.R
    if R == 1:
        conv = [0] * q
        conv[0] = 1
        for j in range(n):
            hist = _value_histogram(system.coeffs[0][j], q)
            new = [0] * q
            for w, cw in enumerate(conv):
                if cw:
                    for v, hv in hist.items():
                        new[(v + w) % q] += cw * hv
            conv = new
        count = conv[0]
    elif R == 2:
        # int64 is safe: entries are at most q^n <= 512^? only when q small; guard
        if q ** n >= 2 ** 62:
            # fall back to Python-int dict convolution
            conv = {(0, 0): 1}
            for j in range(n):
                pairs: dict = {}
                for t in range(q):
                    key = ((system.coeffs[0][j] * t ** 3) % q, (system.coeffs[1][j] * t ** 3) % q)
                    pairs[key] = pairs.get(key, 0) + 1
                new: dict = {}
                for (w1, w2), cw in conv.items():
                    for (v1, v2), hv in pairs.items():
                        key = ((w1 + v1) % q, (w2 + v2) % q)
                        new[key] = new.get(key, 0) + cw * hv
                conv = new
            count = conv.get((0, 0), 0)
        else:
            arr = np.zeros((q, q), dtype=np.int64)
            arr[0, 0] = 1
            for j in range(n):
                pairs: dict = {}
                for t in range(q):
                    key = ((system.coeffs[0][j] * t ** 3) % q, (system.coeffs[1][j] * t ** 3) % q)
                    pairs[key] = pairs.get(key, 0) + 1
                new = np.zeros((q, q), dtype=np.int64)
                for (v1, v2), hv in pairs.items():
                    new += hv * np.roll(np.roll(arr, v1, axis=0), v2, axis=1)
                arr = new
            count = int(arr[0, 0])
    else:
        raise DimensionMismatchError("local densities implemented for R <= 2")
    return Fraction(count, p ** (k * (n - R)))


def _primes_upto(m: int):
    sieve = np.ones(m + 1, dtype=bool)
    sieve[:2] = False
    for i in range(2, int(m ** 0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = False
    return [int(p) for p in np.flatnonzero(sieve)]


def _auto_depth(p: int) -> int:
    k = 1
    while p ** (k + 1) <= _MAX_MODULUS:
        k += 1
    return k


@dataclass(frozen=True)
class SeriesReport:
    prime_cutoff: int
    factors: tuple          # (p, depth, sigma_p as float, stable) per prime
    partial_products: tuple
    estimate: float
    obstructed: bool        # some sigma_p = 0: no local solutions

    def to_dict(self):
        return {
            "prime_cutoff": self.prime_cutoff,
            "estimate": self.estimate,
            "obstructed": self.obstructed,
            "factors": [
                {"p": p, "depth": d, "sigma_p": s, "stable": st}
                for (p, d, s, st) in self.factors
            ],
            "partial_products": list(self.partial_products),
        }


def singular_series_estimate(system: DiagonalSystem, prime_cutoff: int = 50,
                             depth: Optional[int] = None) -> SeriesReport:
    """Truncated singular series prod_p sigma_p with sigma_p evaluated at the
    deepest power p^k <= 512 (or the given depth). Records whether the last
    two depths agree ('stable') and flags p-adic obstructions."""
    factors = []
    partials = []
    prod = 1.0
    obstructed = False
    for p in _primes_upto(prime_cutoff):
        d = _auto_depth(p) if depth is None else min(depth, _auto_depth(p))
        sigma = local_density(system, p, d)
        stable = True
        if d >= 2:
            stable = local_density(system, p, d - 1) == sigma
        if sigma == 0:
            obstructed = True
        prod *= float(sigma)
        factors.append((p, d, float(sigma), stable))
        partials.append(prod)
    return SeriesReport(prime_cutoff, tuple(factors), tuple(partials), prod, obstructed)


# -- singular integral -------------------------------------------------

@dataclass(frozen=True)
class IntegralReport:
    estimate: float         # Richardson-extrapolated value
    value_eps: float
    value_half: float
    epsilon: float
    stderr: float
    samples: int
    degenerate: bool        # the eps -> 0 limit does not look finite

    def to_dict(self):
        return {
            "estimate": self.estimate,
            "value_eps": self.value_eps,
            "value_half": self.value_half,
            "epsilon": self.epsilon,
            "stderr": self.stderr,
            "samples": self.samples,
            "degenerate": self.degenerate,
        }


def singular_integral_estimate(system: DiagonalSystem, epsilon: float = 0.05,
                               samples: int = 2_000_000, seed: int = 42) -> IntegralReport:
    """Monte Carlo J = lim vol{u in [-1,1]^n : |c_i(u)| <= eps} / (2 eps)^R.

    Evaluates at eps and eps/2 in one pass over chunked uniform samples, with
    Richardson extrapolation in eps^2. Flags degeneracy when halving eps moves
    the value by far more than the Monte Carlo noise (as for forms whose real
    zero locus has positive-dimensional singularities in the box)."""
    n, R = system.n, system.R
    rng = np.random.default_rng(seed)
    vol_box = 2.0 ** n
    hits_eps = 0
    hits_half = 0
    done = 0
    coeff = np.array(system.coeffs, dtype=float)  # (R, n)
    while done < samples:
        m = min(1_000_000, samples - done)
        u = rng.uniform(-1.0, 1.0, size=(m, n))
        vals = np.abs(u ** 3 @ coeff.T)   # (m, R)
        mx = np.max(vals, axis=1)
        hits_eps += int(np.count_nonzero(mx <= epsilon))
        hits_half += int(np.count_nonzero(mx <= epsilon / 2.0))
        done += m
    def _value(hits, eps):
        p = hits / samples
        val = vol_box * p / (2.0 * eps) ** R
        se = vol_box * math.sqrt(max(p * (1.0 - p), 1e-300) / samples) / (2.0 * eps) ** R
        return val, se
    v_eps, se_eps = _value(hits_eps, epsilon)
    v_half, se_half = _value(hits_half, epsilon / 2.0)
    estimate = (4.0 * v_half - v_eps) / 3.0
    stderr = (4.0 * se_half + se_eps) / 3.0
    drift = abs(v_half - v_eps)
    degenerate = drift > 5.0 * (se_eps + se_half) + 0.10 * max(abs(v_eps), 1e-12)
    return IntegralReport(estimate, v_eps, v_half, epsilon, stderr, samples, degenerate)


# -- the convergence table ---------------------------------------------

@dataclass(frozen=True)
class AsymptoticRow:
    P: int
    count: int
    prediction: float
    ratio: float


@dataclass(frozen=True)
class AsymptoticReport:
    rows: tuple
    series: SeriesReport
    integral: IntegralReport
    exponent: int

    def to_dict(self):
        return {
            "exponent": self.exponent,
            "series": self.series.to_dict(),
            "integral": self.integral.to_dict(),
            "rows": [
                {"P": r.P, "count": r.count, "prediction": r.prediction, "ratio": r.ratio}
                for r in self.rows
            ],
        }

    def csv_rows(self):
        yield ("P", "count", "prediction", "ratio")
        for r in self.rows:
            yield (r.P, r.count, f"{r.prediction:.6f}", f"{r.ratio:.6f}")


def convergence_report(system: DiagonalSystem, P_list: Sequence[int],
                       prime_cutoff: int = 50, depth: Optional[int] = None,
                       epsilon: float = 0.05, samples: int = 2_000_000,
                       seed: int = 42) -> AsymptoticReport:
    """N(P) against S * J * P^(n-3R) for each P. Requires n - 3R >= 1."""
    n, R = system.n, system.R
    exponent = n - 3 * R
    if exponent < 1:
        raise DimensionMismatchError(f"need n - 3R >= 1, got n={n}, R={R}")
    series = singular_series_estimate(system, prime_cutoff, depth)
    integral = singular_integral_estimate(system, epsilon, samples, seed)
    lead = series.estimate * integral.estimate
    if lead == 0:
        raise ZeroPredictionError("predicted main term vanishes (local obstruction or empty real locus)")
    rows = []
    for P in P_list:
        cnt = count_zeros_box(system, int(P))
        pred = lead * float(P) ** exponent
        rows.append(AsymptoticRow(int(P), cnt, pred, cnt / pred))
    return AsymptoticReport(tuple(rows), series, integral, exponent)
