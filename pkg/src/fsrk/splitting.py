"""Operator-splitting coefficient tables.

An s-stage method over N operators is the table alpha[k][l]: at stage k,
operator l is advanced over the fraction alpha[k][l] of the step, operators
taken in order l = 1..N within each stage. Entries of zero mean the
operator is skipped (identity sub-flow) at that stage; negative entries are
backward sub-steps.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import CatalogueMissError, ConsistencyError, DimensionError
from .rational import FLOAT_TOL, Number, all_exact, format_number, parse_number

HALF = Fraction(1, 2)
ONE = Fraction(1)
ZERO = Fraction(0)


@dataclass(frozen=True)
class SplittingMethod:
    """Coefficient table of an operator-splitting method.

    Invariant (checked on construction): each operator's fractions sum
    to 1, exactly for rational tables.
    """

    name: str
    alpha: tuple[tuple[Number, ...], ...]
    declared_order: int | None = None

    def __post_init__(self):
        if not self.alpha or not self.alpha[0]:
            raise DimensionError("splitting table must be non-empty")
        n = len(self.alpha[0])
        if any(len(row) != n for row in self.alpha):
            raise DimensionError(f"{self.name}: ragged alpha table")
        for ell in range(n):
            col = [row[ell] for row in self.alpha]
            total = sum(col)
            exact = all_exact(col)
            if (total != 1) if exact else (abs(float(total) - 1.0) > FLOAT_TOL):
                raise ConsistencyError(
                    f"{self.name}: operator {ell + 1} fractions sum to "
                    f"{format_number(total)}, expected 1"
                )

    @property
    def stages(self) -> int:
        return len(self.alpha)

    @property
    def operators(self) -> int:
        return len(self.alpha[0])

    def __str__(self):
        rows = ["  ".join(f"{format_number(x):>8}" for x in row) for row in self.alpha]
        return f"{self.name} (s={self.stages}, N={self.operators})\n" + "\n".join(rows)


def splitting(name, alpha, declared_order=None) -> SplittingMethod:
    """Build a table from nested lists; entries go through parse_number."""
    table = tuple(tuple(parse_number(x) for x in row) for row in alpha)
    return SplittingMethod(name=name, alpha=table, declared_order=declared_order)


# -- catalogue ------------------------------------------------------------

def _godunov(n):
    return SplittingMethod("Godunov", ((ONE,) * n,), declared_order=1)


def _godunov_adjoint(n):
    return adjoint(_godunov(n))


def _strang(n):
    if n < 2:
        raise DimensionError("Strang requires at least 2 operators")
    return compose_halved(_godunov(n), merged=True)


def _ruth(n):
    if n != 2:
        raise DimensionError("the Ruth method is a two-operator table")
    return splitting(
        "Ruth",
        [["7/24", "2/3"], ["3/4", "-2/3"], ["-1/24", "1"]],
        declared_order=3,
    )


def _os3_32(n):
    if n != 3:
        raise DimensionError("OS3_32 is a three-operator table")
    return splitting(
        "OS3_32",
        [["1/3", "1", "1/4"], ["1/3", "-1/2", "1"], ["1/3", "1/2", "-1/4"]],
        declared_order=2,
    )


_CATALOGUE = {
    "Godunov": _godunov,
    "GodunovAdjoint": _godunov_adjoint,
    "Strang": _strang,
    "Ruth": _ruth,
    "OS3_32": _os3_32,
}


def catalogue_splitting(name: str, operators: int) -> SplittingMethod:
    """Look up a splitting table by name for the given operator count."""
    try:
        builder = _CATALOGUE[name]
    except KeyError:
        raise CatalogueMissError(name, _CATALOGUE) from None
    return builder(operators)


def catalogue_splitting_names() -> tuple[str, ...]:
    return tuple(sorted(_CATALOGUE))


# -- derived methods ------------------------------------------------------

def _flatten(m: SplittingMethod) -> list[tuple[int, Number]]:
    """Sub-flow sequence [(operator index, fraction)], zeros skipped."""
    seq = []
    for row in m.alpha:
        for ell, frac in enumerate(row):
            if frac != 0:
                seq.append((ell, frac))
    return seq


def _encode(seq, n) -> tuple[tuple[Number, ...], ...]:
    """Re-encode a sub-flow sequence as a stage table.

    A new stage starts whenever the next operator index does not strictly
    increase, so canonical tables round-trip through flatten/encode.
    """
    stages: list[list[Number]] = []
    last_ell = n  # force a new stage on the first sub-flow
    for ell, frac in seq:
        if ell <= last_ell:
            stages.append([ZERO] * n)
        stages[-1][ell] = frac
        last_ell = ell
    if not stages:
        stages.append([ZERO] * n)
    return tuple(tuple(row) for row in stages)


def adjoint(m: SplittingMethod) -> SplittingMethod:
    """The splitting applying sub-flows in reversed order with the same fractions.

    An involution on tables in canonical (greedy) stage encoding; in
    particular adjoint(adjoint(m)) == m for every catalogue method.
    """
    seq = list(reversed(_flatten(m)))
    return SplittingMethod(
        name=f"{m.name}*",
        alpha=_encode(seq, m.operators),
        declared_order=m.declared_order,
    )


def compose_halved(m: SplittingMethod, merged: bool = True) -> SplittingMethod:
    """Compose a one-stage method with its adjoint at half steps.

    For the Godunov table this is the Strang-Marchuk method. With
    ``merged=True`` the two adjacent half sub-flows of the last operator
    are combined into one full sub-flow (the group property of exact
    flows); with ``merged=False`` the two half-step occurrences are kept
    separate, which is a different numerical method once the sub-flows
    are approximated. The second half is stored in canonical
    (operator-ascending) stage order; see gark.reorder_by_operator for
    row-ordering conventions.
    """
    if m.stages != 1:
        raise DimensionError("compose_halved expects a one-stage method")
    n = m.operators
    half_row = tuple(HALF * x for x in m.alpha[0])
    if merged:
        first = half_row[:-1] + (m.alpha[0][-1],)
        second = half_row[:-1] + (ZERO,)
        rows = [first] + ([second] if any(x != 0 for x in second) else [])
    else:
        rows = [half_row, half_row]
    name = f"Strang({m.name})" if merged else f"Strang({m.name},unmerged)"
    if m.name == "Godunov":
        name = "Strang" if merged else "StrangUnmerged"
    return SplittingMethod(name=name, alpha=tuple(rows), declared_order=2)
