"""Cubic forms, their sup-norms, Hessian matrices and linear combinations.

A cubic form is stored as a canonical monomial map: coefficients a[(i,j,k)]
with 0-based indices i <= j <= k, so that

    c(x) = sum_{i<=j<=k} a[(i,j,k)] x_i x_j x_k.

The symmetric third-derivative tensor is T[p,q,r] = d^3 c / dx_p dx_q dx_r,
which for the sorted triple (i,j,k) equals a[(i,j,k)] times the product of
factorials of the index multiplicities (6 for iii, 2 for iij, 1 for ijk).
The sup-norm of the form is (1/6) max |T|, so the form divided by its
sup-norm has largest coefficient magnitude exactly 1.

Two backends: "exact" keeps Fraction coefficients and all identities hold
bit-for-bit; "float" uses 64-bit floats for spectral work.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DimensionMismatchError, ZeroFormError

EXACT = "exact"
FLOAT = "float"

# factorial-of-multiplicities factor for a sorted index triple
def _mult_factor(i: int, j: int, k: int) -> int:
    if i == j == k:
        return 6
    if i == j or j == k:
        return 2
    return 1


def _canon(i: int, j: int, k: int):
    return tuple(sorted((i, j, k)))


def _to_value(v, backend: str):
    if backend == EXACT:
        return v if isinstance(v, Fraction) else Fraction(v)
    return float(v)


@dataclass(frozen=True)
class CubicForm:
    """A homogeneous cubic form in n variables."""

    n: int
    coeffs: Mapping[tuple, object]
    backend: str = EXACT

    def __post_init__(self):
        if self.n < 1:
            raise DimensionMismatchError("n must be positive")
        clean = {}
        for key, v in self.coeffs.items():
            i, j, k = key
            if not (0 <= i <= j <= k < self.n):
                raise DimensionMismatchError(f"bad monomial index {key} for n={self.n}")
            v = _to_value(v, self.backend)
            if v != 0:
                clean[(i, j, k)] = v
        object.__setattr__(self, "coeffs", clean)

    # -- constructors -------------------------------------------------

    @staticmethod
    def from_coeffs(n: int, coeffs: Mapping[tuple, object], backend: str = EXACT) -> "CubicForm":
        return CubicForm(n, {_canon(*key): v for key, v in coeffs.items()}, backend)

    @staticmethod
    def diagonal(a: Sequence, backend: str = EXACT) -> "CubicForm":
        """The diagonal form sum_i a_i x_i^3."""
        n = len(a)
        return CubicForm(n, {(i, i, i): a[i] for i in range(n)}, backend)

    @staticmethod
    def fermat(n: int, backend: str = EXACT) -> "CubicForm":
        return CubicForm.diagonal([1] * n, backend)

    @staticmethod
    def zero(n: int, backend: str = EXACT) -> "CubicForm":
        return CubicForm(n, {}, backend)

    # -- basic structure ----------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def is_diagonal(self) -> bool:
        return all(i == j == k for (i, j, k) in self.coeffs)

    def diagonal_coefficients(self):
        """Coefficients a_i of a diagonal form, as a list of length n."""
        zero = Fraction(0) if self.backend == EXACT else 0.0
        out = [zero] * self.n
        for (i, j, k), v in self.coeffs.items():
            if not (i == j == k):
                raise DimensionMismatchError("form is not diagonal")
            out[i] = v
        return out

    def third_derivative(self, p: int, q: int, r: int):
        """Entry T[p,q,r] of the symmetric third-derivative tensor."""
        key = _canon(p, q, r)
        v = self.coeffs.get(key)
        if v is None:
            return Fraction(0) if self.backend == EXACT else 0.0
        return v * _mult_factor(*key)

    def tensor(self) -> np.ndarray:
        """The full (n,n,n) third-derivative tensor as a float array."""
        T = np.zeros((self.n, self.n, self.n))
        for (i, j, k), v in self.coeffs.items():
            t = float(v) * _mult_factor(i, j, k)
            for p, q, r in set(itertools.permutations((i, j, k))):
                T[p, q, r] = t
        return T

    # -- evaluation ---------------------------------------------------

    def evaluate(self, x: Sequence):
        if len(x) != self.n:
            raise DimensionMismatchError(f"point has dim {len(x)}, form has n={self.n}")
        total = Fraction(0) if self.backend == EXACT else 0.0
        for (i, j, k), v in self.coeffs.items():
            total += v * x[i] * x[j] * x[k]
        return total

    def gradient(self, x: Sequence):
        """grad c(x); for a cubic this is G(x) x / 2 with G the unnormalized Hessian."""
        G = self.unnormalized_hessian(x)
        half = Fraction(1, 2) if self.backend == EXACT else 0.5
        return [half * sum(G[p][q] * x[q] for q in range(self.n)) for p in range(self.n)]

    def unnormalized_hessian(self, x: Sequence):
        """Matrix of second partials of c at x (entries linear in x), no normalization."""
        if len(x) != self.n:
            raise DimensionMismatchError(f"point has dim {len(x)}, form has n={self.n}")
        n = self.n
        zero = Fraction(0) if self.backend == EXACT else 0.0
        # G[p][q] = sum_r T[p,q,r] x_r
        G = [[zero] * n for _ in range(n)]
        for (i, j, k), v in self.coeffs.items():
            t = v * _mult_factor(i, j, k)
            for p, q, r in set(itertools.permutations((i, j, k))):
                G[p][q] += t * x[r]
        return G

    # -- norms and the normalized Hessian -----------------------------

    def sup_norm(self):
        """||c|| = (1/6) max |third derivative|; the largest-coefficient norm."""
        if self.is_zero:
            raise ZeroFormError("the zero form has no sup-norm normalization")
        best = None
        for key, v in self.coeffs.items():
            t = abs(v) * _mult_factor(*key)
            if best is None or t > best:
                best = t
        if self.backend == EXACT:
            return Fraction(best, 6)
        return best / 6.0

    def hessian(self, x: Sequence) -> "SymMatrix":
        """H_c(x): the Hessian of c/||c|| at x. Linear in x and symmetric."""
        s = self.sup_norm()
        G = self.unnormalized_hessian(x)
        return SymMatrix(tuple(tuple(G[p][q] / s for q in range(self.n)) for p in range(self.n)))

    def scale(self, lam) -> "CubicForm":
        return CubicForm(self.n, {key: v * lam for key, v in self.coeffs.items()}, self.backend)

    def to_float(self) -> "CubicForm":
        return CubicForm(self.n, dict(self.coeffs), FLOAT)


@dataclass(frozen=True)
class SymMatrix:
    """An n x n symmetric matrix (rational or float entries)."""

    entries: tuple

    def __post_init__(self):
        n = len(self.entries)
        rows = tuple(tuple(row) for row in self.entries)
        for row in rows:
            if len(row) != n:
                raise DimensionMismatchError("matrix is not square")
        for p in range(n):
            for q in range(p + 1, n):
                if rows[p][q] != rows[q][p]:
                    raise DimensionMismatchError("matrix is not symmetric")
        object.__setattr__(self, "entries", rows)

    @property
    def n(self) -> int:
        return len(self.entries)

    def to_array(self) -> np.ndarray:
        return np.array([[float(v) for v in row] for row in self.entries])

    def apply(self, y: Sequence):
        if len(y) != self.n:
            raise DimensionMismatchError("vector dim mismatch")
        return [sum(row[q] * y[q] for q in range(self.n)) for row in self.entries]

    def sup_norm(self):
        """Max absolute entry, the matrix norm used throughout."""
        return max(abs(v) for row in self.entries for v in row)

    def is_zero(self) -> bool:
        return all(v == 0 for row in self.entries for v in row)


@dataclass(frozen=True)
class BetaVector:
    """Real weights for a pencil beta_1 c_1 + ... + beta_R c_R."""

    entries: tuple

    def __post_init__(self):
        vals = tuple(self.entries)
        for v in vals:
            if isinstance(v, float) and not math.isfinite(v):
                raise DimensionMismatchError("beta entries must be finite")
        object.__setattr__(self, "entries", vals)

    @property
    def R(self) -> int:
        return len(self.entries)


def linear_combination(beta, forms: Sequence[CubicForm]) -> CubicForm:
    """Coefficientwise beta_1 c_1 + ... + beta_R c_R. The result may be the zero form."""
    entries = beta.entries if isinstance(beta, BetaVector) else tuple(beta)
    if len(entries) != len(forms):
        raise DimensionMismatchError("len(beta) != number of forms")
    if not forms:
        raise DimensionMismatchError("need at least one form")
    n = forms[0].n
    backend = forms[0].backend
    for c in forms:
        if c.n != n:
            raise DimensionMismatchError("forms have differing n")
    out: dict = {}
    for b, c in zip(entries, forms):
        for key, v in c.coeffs.items():
            out[key] = out.get(key, 0) + b * v
    return CubicForm(n, out, backend)


def trilinear(c: CubicForm, x: Sequence, y: Sequence, y2: Sequence):
    """y^T H_c(x) y2; fully symmetric in the three vector arguments."""
    H = c.hessian(x)
    Hy2 = H.apply(y2)
    return sum(y[p] * Hy2[p] for p in range(c.n))


# -- form file I/O -----------------------------------------------------
#
# Text format:
#     n 3
#     R 1
#     backend exact
#     form 1
#     1 1 1 : 1
#     2 2 2 : -1/2
# Indices are 1-based in files, comments start with '#'. Round-trips
# exactly under the exact backend.

def _parse_value(tok: str, backend: str):
    if backend == FLOAT:
        return float(Fraction(tok)) if "/" in tok else float(tok)
    return Fraction(tok)


def parse_form_file(text: str):
    """Parse a form file; returns (list of CubicForm, backend)."""
    n = None
    R = 1
    backend = EXACT
    forms_coeffs: list[dict] = []
    current: dict | None = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "n":
            n = int(parts[1])
        elif parts[0] == "R":
            R = int(parts[1])
        elif parts[0] == "backend":
            backend = parts[1]
            if backend not in (EXACT, FLOAT):
                raise ValueError(f"line {lineno}: unknown backend {backend!r}")
        elif parts[0] == "form":
            current = {}
            forms_coeffs.append(current)
        elif ":" in line:
            lhs, rhs = line.split(":")
            i, j, k = (int(t) for t in lhs.split())
            if current is None:
                current = {}
                forms_coeffs.append(current)
            current[_canon(i - 1, j - 1, k - 1)] = _parse_value(rhs.strip(), backend)
        else:
            raise ValueError(f"line {lineno}: cannot parse {raw!r}")
    if n is None:
        raise ValueError("form file missing 'n'")
    if not forms_coeffs:
        forms_coeffs = [{}]
    if len(forms_coeffs) != R:
        raise ValueError(f"file declares R={R} but contains {len(forms_coeffs)} forms")
    return [CubicForm(n, cf, backend) for cf in forms_coeffs], backend


def load_forms(path) -> list[CubicForm]:
    with open(path, "r", encoding="utf-8") as fh:
        forms, _ = parse_form_file(fh.read())
    return forms


def format_form_file(forms: Sequence[CubicForm]) -> str:
    n = forms[0].n
    backend = forms[0].backend
    lines = [f"n {n}", f"R {len(forms)}", f"backend {backend}"]
    for idx, c in enumerate(forms, 1):
        lines.append(f"form {idx}")
        for (i, j, k) in sorted(c.coeffs):
            v = c.coeffs[(i, j, k)]
            if backend == EXACT:
                sval = str(v) if v.denominator != 1 else str(v.numerator)
            else:
                sval = repr(v)
            lines.append(f"{i + 1} {j + 1} {k + 1} : {sval}")
    return "\n".join(lines) + "\n"


def save_forms(forms: Sequence[CubicForm], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_form_file(forms))
