"""Butcher tableaux of Runge-Kutta sub-integrators and their stability functions.

A tableau stores its coefficients as exact rationals whenever it was built
from rational data; methods with irrational parameters (the SDIRK family at
irrational gamma) carry floats and are compared with a 1e-12 tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import CatalogueMissError, DimensionError
from .rational import FLOAT_TOL, Number, all_exact, format_number, parse_number


@dataclass(frozen=True)
class ButcherTableau:
    """One Runge-Kutta method: weights ``a`` (s x s), ``b`` (row), nodes ``c``.

    The node vector is defined by the row sums of ``a``; ``validate``
    reports any entry where the stored ``c`` disagrees.
    """

    name: str
    a: tuple[tuple[Number, ...], ...]
    b: tuple[Number, ...]
    c: tuple[Number, ...]

    def __post_init__(self):
        s = len(self.a)
        if s < 1:
            raise DimensionError("tableau needs at least one stage")
        if any(len(row) != s for row in self.a):
            raise DimensionError(f"{self.name}: a must be square, got rows "
                                 f"{[len(r) for r in self.a]} for {s} stages")
        if len(self.b) != s or len(self.c) != s:
            raise DimensionError(f"{self.name}: b/c lengths must equal stage count {s}")

    @property
    def stages(self) -> int:
        return len(self.b)

    @property
    def is_explicit(self) -> bool:
        """Strictly lower-triangular a."""
        return all(
            self.a[i][j] == 0
            for i in range(self.stages)
            for j in range(i, self.stages)
        )

    @property
    def is_lower_triangular(self) -> bool:
        return all(
            self.a[i][j] == 0
            for i in range(self.stages)
            for j in range(i + 1, self.stages)
        )

    @property
    def is_exact(self) -> bool:
        return (all_exact(self.b) and all_exact(self.c)
                and all(all_exact(row) for row in self.a))

    def a_array(self, dtype=float) -> np.ndarray:
        return np.array([[dtype(x) for x in row] for row in self.a])

    def b_array(self, dtype=float) -> np.ndarray:
        return np.array([dtype(x) for x in self.b])

    def c_array(self, dtype=float) -> np.ndarray:
        return np.array([dtype(x) for x in self.c])

    def __str__(self):
        rows = [
            f"{format_number(ci):>8} | " + "  ".join(format_number(x) for x in row)
            for ci, row in zip(self.c, self.a)
        ]
        footer = f"{'':>8} | " + "  ".join(format_number(x) for x in self.b)
        return f"{self.name}\n" + "\n".join(rows) + "\n" + "-" * len(footer) + "\n" + footer


def tableau(name, a, b, c=None) -> ButcherTableau:
    """Build a tableau from nested lists; entries go through parse_number.

    When ``c`` is omitted it is filled with the row sums of ``a``.
    """
    a_t = tuple(tuple(parse_number(x) for x in row) for row in a)
    b_t = tuple(parse_number(x) for x in b)
    if c is None:
        c_t = tuple(sum(row, Fraction(0)) for row in a_t)
    else:
        c_t = tuple(parse_number(x) for x in c)
    return ButcherTableau(name=name, a=a_t, b=b_t, c=c_t)


def validate(t: ButcherTableau) -> list[str]:
    """Return a list of invariant violations (empty when the tableau is sound).

    Checks the row-sum condition c_i = sum_j a_ij; exact tableaux are
    compared exactly, float tableaux with tolerance 1e-12. Reports name
    the offending row and the defect magnitude. Never raises.
    """
    violations = []
    for i, (ci, row) in enumerate(zip(t.c, t.a), start=1):
        row_sum = sum(row)
        exact = all_exact(row) and all_exact((ci,))
        defect = row_sum - ci
        if (defect != 0) if exact else (abs(float(defect)) > FLOAT_TOL):
            violations.append(
                f"{t.name}: row {i} sum {format_number(row_sum)} != c_{i} "
                f"= {format_number(ci)} (defect {float(defect):.3e})"
            )
    return violations


# -- catalogue ------------------------------------------------------------

def _fe():
    return tableau("FE", [[0]], [1])


def _be():
    return tableau("BE", [[1]], [1])


def _heun():
    return tableau("Heun", [["0", "0"], ["1", "0"]], ["1/2", "1/2"])


def _crank_nicolson():
    return tableau("CrankNicolson", [["0", "0"], ["1/2", "1/2"]], ["1/2", "1/2"])


def _rk3():
    # Kutta's third-order method, c = [0, 1/2, 1].
    return tableau(
        "RK3",
        [["0", "0", "0"], ["1/2", "0", "0"], ["-1", "2", "0"]],
        ["1/6", "2/3", "1/6"],
    )


def sdirk_gamma(gamma) -> ButcherTableau:
    """Two-stage SDIRK family with free diagonal parameter gamma.

    a = [[g, 0], [1-2g, g]], b = [1/2, 1/2].  Rational gamma gives an
    exact tableau; irrational gamma is carried in double precision.
    """
    g = parse_number(gamma)
    a = ((g, Fraction(0)), (1 - 2 * g, g))
    b = (Fraction(1, 2), Fraction(1, 2))
    c = (g, (1 - 2 * g) + g)
    tag = format_number(g) if all_exact((g,)) else f"{float(g):.12g}"
    return ButcherTableau(name=f"SDIRKgamma({tag})", a=a, b=b, c=c)


def _sdirk22():
    t = sdirk_gamma((2.0 - math.sqrt(2.0)) / 2.0)
    return ButcherTableau(name="SDIRK22", a=t.a, b=t.b, c=t.c)


def _sdirk23():
    t = sdirk_gamma((3.0 + math.sqrt(3.0)) / 6.0)
    return ButcherTableau(name="SDIRK23", a=t.a, b=t.b, c=t.c)


_CATALOGUE = {
    "FE": _fe,
    "BE": _be,
    "Heun": _heun,
    "CrankNicolson": _crank_nicolson,
    "RK3": _rk3,
    "SDIRK22": _sdirk22,
    "SDIRK23": _sdirk23,
    "SDIRKgamma": sdirk_gamma,
}


def catalogue(name: str, **params) -> ButcherTableau:
    """Look up a tableau by name; SDIRKgamma takes gamma=<value>."""
    try:
        builder = _CATALOGUE[name]
    except KeyError:
        raise CatalogueMissError(name, _CATALOGUE) from None
    return builder(**params)


def catalogue_names() -> tuple[str, ...]:
    return tuple(sorted(_CATALOGUE))


# -- stability function ---------------------------------------------------

@dataclass(frozen=True)
class ScalarStabilityFunction:
    """Rational function R(z) = num(z)/den(z), coefficients ascending in z.

    den == (1,) for explicit methods. Coefficients are exact when the
    source tableau is exact.
    """

    num: tuple[Number, ...]
    den: tuple[Number, ...]
    source: str = ""

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return _polyval(self.num, z) / _polyval(self.den, z)

    @property
    def num_degree(self) -> int:
        return len(self.num) - 1

    @property
    def den_degree(self) -> int:
        return len(self.den) - 1

    def den_roots(self) -> np.ndarray:
        """Poles of R in the complex plane (empty for explicit methods)."""
        if self.den_degree == 0:
            return np.array([], dtype=complex)
        return np.roots([float(x) for x in self.den[::-1]])


def _polyval(coeffs: Sequence[Number], z: np.ndarray) -> np.ndarray:
    acc = np.zeros_like(z) + complex(coeffs[-1])
    for coef in reversed(coeffs[:-1]):
        acc = acc * z + complex(coef)
    return acc


def _charpoly(m: list[list[Number]]) -> list[Number]:
    """Faddeev-LeVerrier coefficients of det(lam*I - M), descending from lam^{n-1}.

    Exact when M is exact; works unchanged on float entries.
    """
    n = len(m)
    coeffs = []
    aux = [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    for k in range(1, n + 1):
        prod = [
            [sum(m[i][r] * aux[r][j] for r in range(n)) for j in range(n)]
            for i in range(n)
        ]
        tr = sum(prod[i][i] for i in range(n))
        ck = -(tr / k if not all_exact((tr,)) else Fraction(tr, k))
        aux = [[prod[i][j] + (ck if i == j else 0) for j in range(n)] for i in range(n)]
        coeffs.append(ck)
    return coeffs


def _det_identity_plus_z(m: list[list[Number]]) -> tuple[Number, ...]:
    """Coefficients of det(I + z*M), ascending in z, via the characteristic polynomial."""
    n = len(m)
    cs = _charpoly(m)
    full = [Fraction(0)] * (n + 1)
    full[n] = Fraction(1)
    for k in range(1, n + 1):
        full[n - k] = cs[k - 1]
    out = [((-1) ** deg) * full[n - deg] for deg in range(n + 1)]
    return _trim(out)


def _trim(coeffs: list[Number]) -> tuple[Number, ...]:
    # drop trailing zeros; float coefficients smaller than 1e-14 * scale are
    # cancellation residue (e.g. the SDIRK numerator's vanishing z^2 term)
    exact = all_exact(coeffs)
    scale = max(1.0, max(abs(float(x)) for x in coeffs))
    out = list(coeffs)
    while len(out) > 1:
        tail = out[-1]
        if (tail == 0) if exact else (abs(float(tail)) <= 1e-14 * scale):
            out.pop()
        else:
            break
    return tuple(out)


def stability_function(t: ButcherTableau) -> ScalarStabilityFunction:
    """R(z) = det(I - zA + z*1b) / det(I - zA), with exact coefficients.

    Agrees with 1 + z*b*(I - zA)^{-1}*1 wherever the denominator is nonzero.
    """
    s = t.stages
    neg_a = [[-t.a[i][j] for j in range(s)] for i in range(s)]
    one_b_minus_a = [[t.b[j] - t.a[i][j] for j in range(s)] for i in range(s)]
    return ScalarStabilityFunction(
        num=_det_identity_plus_z(one_b_minus_a),
        den=_det_identity_plus_z(neg_a),
        source=t.name,
    )


def stability_resolvent(t: ButcherTableau, z: complex) -> complex:
    """Reference evaluation 1 + z*b*(I - zA)^{-1}*1 by dense solve."""
    a = t.a_array(complex)
    b = t.b_array(complex)
    s = t.stages
    m = np.eye(s, dtype=complex) - z * a
    x = np.linalg.solve(m, np.ones(s, dtype=complex))
    return 1 + z * (b @ x)


# -- order conditions -----------------------------------------------------

def classical_order(t: ButcherTableau, up_to: int = 3) -> int:
    """Largest p <= up_to (<= 3) with all order-p conditions met to 1e-12."""
    if up_to not in (1, 2, 3):
        raise ValueError("up_to must be 1, 2 or 3")
    b = t.b_array()
    c = t.c_array()
    a = t.a_array()
    conditions = {
        1: [(b.sum(), 1.0)],
        2: [(b @ c, 0.5)],
        3: [(b @ c**2, 1.0 / 3.0), (b @ (a @ c), 1.0 / 6.0)],
    }
    order = 0
    for p in range(1, up_to + 1):
        if all(abs(lhs - rhs) <= FLOAT_TOL for lhs, rhs in conditions[p]):
            order = p
        else:
            break
    return order


@lru_cache(maxsize=None)
def cached_stability_function(t: ButcherTableau) -> ScalarStabilityFunction:
    return stability_function(t)
