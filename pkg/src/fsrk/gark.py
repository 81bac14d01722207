"""Extended Butcher tableaux of fractional-step Runge-Kutta schemes.

A scheme pairs an s-stage, N-operator splitting table with an s x N grid of
Runge-Kutta tableaux (grid[k][l] integrates operator l at stage k). The
scheme unrolls into one generalized-additive tableau: per-operator blocks
A[l] (S x S), weights b[l] and nodes c[l], where S is the total number of
internal stages. Rows are ordered stage-major (stage 1 operators 1..N,
then stage 2, ...); the operator-major layout used elsewhere in the
literature is available through ``reorder_by_operator``.

Block rules, with alpha the splitting fractions and (tA, tb, tc) the
sub-integrator tableau at (k, l):

* diagonal stage block k of A[l] carries alpha[k][l]*tA in the rows and
  columns owned by (k, l), with alpha[k][l]*1b below it inside the stage;
* every later row repeats the quadrature slice alpha[k][l]*tb in the
  columns owned by (k, l);
* b[l] is that same slice; all other entries vanish;
* c[l] accumulates the operator's fractions: rows before (k, l) inside
  stage k sit at sum(alpha[<k][l]), the (k, l) rows add alpha[k][l]*tc,
  rows after sit at sum(alpha[<=k][l]).

Skipped sub-integrations (alpha == 0) keep their rows, zero-scaled, so the
layout depends only on the grid shape.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import DimensionError, PoleProximityError
from .rational import Number, format_number
from .splitting import SplittingMethod
from .tableau import ButcherTableau, validate

_COND_LIMIT = 1e14


@dataclass(frozen=True)
class FSRKScheme:
    """A splitting table plus the per-(stage, operator) sub-integrator grid."""

    splitting: SplittingMethod
    integrators: tuple[tuple[ButcherTableau, ...], ...]
    name: str = ""

    def __post_init__(self):
        s, n = self.splitting.stages, self.splitting.operators
        if len(self.integrators) != s or any(len(row) != n for row in self.integrators):
            raise DimensionError(
                f"integrator grid must be {s} stages x {n} operators, got "
                f"{len(self.integrators)} x {[len(r) for r in self.integrators]}"
            )
        for row in self.integrators:
            for t in row:
                problems = validate(t)
                if problems:
                    raise DimensionError("; ".join(problems))
        if not self.name:
            label = self.splitting.name + "+" + "/".join(
                ",".join(t.name for t in row) for row in self.integrators
            )
            object.__setattr__(self, "name", label)

    @property
    def stages(self) -> int:
        return self.splitting.stages

    @property
    def operators(self) -> int:
        return self.splitting.operators

    def sub_stages(self, k: int, ell: int) -> int:
        return self.integrators[k][ell].stages


def scheme(splitting: SplittingMethod, integrators, name: str = "") -> FSRKScheme:
    """Build a scheme; a single row of tableaux is broadcast to all stages."""
    rows = list(integrators)
    if rows and isinstance(rows[0], ButcherTableau):
        rows = [list(rows)] * splitting.stages
    grid = tuple(tuple(row) for row in rows)
    return FSRKScheme(splitting=splitting, integrators=grid, name=name)


@dataclass(frozen=True)
class ExtendedTableau:
    """Per-operator blocks A[l], b[l], c[l] plus the (stage, operator) row map.

    ``blocks[k][l]`` is the half-open global row range owned by operator
    l at splitting stage k. ``column_owner[j]`` is the (k, l) pair whose
    sub-integrator owns global column j.
    """

    a: tuple[tuple[tuple[Number, ...], ...], ...]
    b: tuple[tuple[Number, ...], ...]
    c: tuple[tuple[Number, ...], ...]
    blocks: tuple[tuple[tuple[int, int], ...], ...]
    scheme_name: str = ""

    @property
    def total_stages(self) -> int:
        return len(self.b[0])

    @property
    def operators(self) -> int:
        return len(self.a)

    @property
    def splitting_stages(self) -> int:
        return len(self.blocks)

    def block_range(self, k: int, ell: int) -> tuple[int, int]:
        return self.blocks[k][ell]

    def partial_sum(self, k: int, ell: int) -> int:
        """S_k^l: internal stages of operators 1..l at splitting stage k."""
        return self.blocks[k][ell][1] - self.blocks[k][0][0]

    @property
    def column_owner(self) -> tuple[tuple[int, int], ...]:
        owner = [None] * self.total_stages
        for k, row in enumerate(self.blocks):
            for ell, (lo, hi) in enumerate(row):
                for j in range(lo, hi):
                    owner[j] = (k, ell)
        return tuple(owner)

    def a_arrays(self) -> list[np.ndarray]:
        return [np.array([[float(x) for x in row] for row in mat]) for mat in self.a]

    def b_arrays(self) -> list[np.ndarray]:
        return [np.array([float(x) for x in row]) for row in self.b]

    def c_arrays(self) -> list[np.ndarray]:
        return [np.array([float(x) for x in col]) for col in self.c]


@dataclass(frozen=True)
class CompactTableau:
    """Single-matrix layout: A[l] merged column-block-wise, one weight row."""

    matrix: tuple[tuple[Number, ...], ...]
    weights: tuple[Number, ...]
    abscissae: tuple[tuple[Number, ...], ...]
    blocks: tuple[tuple[tuple[int, int], ...], ...]
    scheme_name: str = ""

    @property
    def total_stages(self) -> int:
        return len(self.weights)

    @property
    def operators(self) -> int:
        return len(self.abscissae)


def _block_layout(s: FSRKScheme):
    blocks = []
    cursor = 0
    for k in range(s.stages):
        row = []
        for ell in range(s.operators):
            width = s.sub_stages(k, ell)
            row.append((cursor, cursor + width))
            cursor += width
        blocks.append(tuple(row))
    return tuple(blocks), cursor


def build_extended(s: FSRKScheme) -> ExtendedTableau:
    """Unroll a scheme into its per-operator extended tableau blocks.

    Exact rational output whenever the splitting table and every grid
    tableau are exact.
    """
    blocks, total = _block_layout(s)
    n_ops = s.operators
    zero = Fraction(0)

    a_all, b_all, c_all = [], [], []
    for ell in range(n_ops):
        a_mat = [[zero] * total for _ in range(total)]
        b_row = [zero] * total
        c_col = [zero] * total
        frac_before = zero
        for k in range(s.stages):
            alpha = s.splitting.alpha[k][ell]
            sub = s.integrators[k][ell]
            lo, hi = blocks[k][ell]
            # diagonal block: scaled tableau in own rows/columns
            for i in range(sub.stages):
                for j in range(sub.stages):
                    a_mat[lo + i][lo + j] = alpha * sub.a[i][j]
                c_col[lo + i] = frac_before + alpha * sub.c[i]
            # rows of later operators in this stage, and all later stages,
            # see the completed sub-integration through its weight slice
            stage_end = blocks[k][n_ops - 1][1]
            for r in range(hi, total):
                for j in range(sub.stages):
                    a_mat[r][lo + j] = alpha * sub.b[j]
            # abscissae for rows of this stage not owned by operator ell
            stage_start = blocks[k][0][0]
            for r in range(stage_start, lo):
                c_col[r] = frac_before
            for r in range(hi, stage_end):
                c_col[r] = frac_before + alpha
            for j in range(sub.stages):
                b_row[lo + j] = alpha * sub.b[j]
            frac_before = frac_before + alpha
        a_all.append(tuple(tuple(row) for row in a_mat))
        b_all.append(tuple(b_row))
        c_all.append(tuple(c_col))

    return ExtendedTableau(
        a=tuple(a_all), b=tuple(b_all), c=tuple(c_all),
        blocks=blocks, scheme_name=s.name,
    )


def build_compact(s: FSRKScheme) -> CompactTableau:
    """Merge the per-operator blocks into the single block-lower-triangular matrix.

    Column j of the compact matrix is column j of A[l] for the operator l
    owning that column; the weight row merges the b[l] the same way.
    """
    ext = build_extended(s)
    owner = ext.column_owner
    total = ext.total_stages
    matrix = tuple(
        tuple(ext.a[owner[j][1]][i][j] for j in range(total)) for i in range(total)
    )
    weights = tuple(ext.b[owner[j][1]][j] for j in range(total))
    return CompactTableau(
        matrix=matrix, weights=weights, abscissae=ext.c,
        blocks=ext.blocks, scheme_name=s.name,
    )


@dataclass(frozen=True)
class ConsistencyReport:
    consistent: bool
    witness: tuple[int, int, int] | None = None

    def __bool__(self):
        return self.consistent


def check_internal_consistency(t: ExtendedTableau, tol: float = 1e-12) -> ConsistencyReport:
    """Do all per-operator row sums agree row by row?

    Returns the first failing (row, l, l') triple (0-based) as witness.
    Exact comparison when entries are exact.
    """
    for i in range(t.total_stages):
        sums = [sum(mat[i]) for mat in t.a]
        for ell in range(1, len(sums)):
            diff = sums[ell] - sums[0]
            exact = isinstance(diff, Fraction)
            if (diff != 0) if exact else (abs(float(diff)) > tol):
                return ConsistencyReport(False, (i, 0, ell))
    return ConsistencyReport(True, None)


def operator_major_permutation(t: ExtendedTableau) -> tuple[int, ...]:
    """Row order grouping by operator then stage: Y[1]_{1..s}, ..., Y[N]_{1..s}."""
    order = []
    for ell in range(t.operators):
        for k in range(t.splitting_stages):
            lo, hi = t.blocks[k][ell]
            order.extend(range(lo, hi))
    return tuple(order)


def permute_rows(t: ExtendedTableau, perm: tuple[int, ...]) -> ExtendedTableau:
    """Apply a similarity permutation: rows and columns of A, b columns, c rows.

    The stability function is invariant; applying the inverse permutation
    recovers the input exactly.
    """
    if sorted(perm) != list(range(t.total_stages)):
        raise DimensionError("not a permutation of the stage indices")
    a_new = tuple(
        tuple(tuple(mat[pi][pj] for pj in perm) for pi in perm) for mat in t.a
    )
    b_new = tuple(tuple(row[pj] for pj in perm) for row in t.b)
    c_new = tuple(tuple(col[pi] for pi in perm) for col in t.c)
    # rebuild the block map in the new ordering
    position = {old: new for new, old in enumerate(perm)}
    blocks_new = []
    for k in range(t.splitting_stages):
        row = []
        for ell in range(t.operators):
            lo, hi = t.blocks[k][ell]
            targets = sorted(position[r] for r in range(lo, hi))
            if targets and targets != list(range(targets[0], targets[0] + len(targets))):
                raise DimensionError("permutation splits a sub-integrator block")
            row.append((targets[0], targets[0] + len(targets)) if targets else (0, 0))
        blocks_new.append(tuple(row))
    return ExtendedTableau(
        a=a_new, b=b_new, c=c_new, blocks=tuple(blocks_new),
        scheme_name=t.scheme_name,
    )


def inverse_permutation(perm: tuple[int, ...]) -> tuple[int, ...]:
    inv = [0] * len(perm)
    for new, old in enumerate(perm):
        inv[old] = new
    return tuple(inv)


def reorder_by_operator(t: ExtendedTableau) -> ExtendedTableau:
    """Similarity-permute the tableau into operator-major row grouping."""
    return permute_rows(t, operator_major_permutation(t))


@lru_cache(maxsize=128)
def _float_blocks(t: ExtendedTableau):
    a = [np.array(mat, dtype=float) for mat in t.a]
    b = [np.array(row, dtype=float) for row in t.b]
    return a, b


def ark_stability_eval(t: ExtendedTableau, z) -> complex:
    """Resolvent-form stability value 1 + (sum z_l b_l) (I - sum z_l A_l)^{-1} 1.

    Raises PoleProximityError when the stage matrix is closer to singular
    than condition 1e14.
    """
    z = np.asarray(z, dtype=complex)
    if z.shape != (t.operators,):
        raise DimensionError(f"need {t.operators} spectral arguments, got {z.shape}")
    a_blocks, b_blocks = _float_blocks(t)
    size = t.total_stages
    m = np.eye(size, dtype=complex)
    row = np.zeros(size, dtype=complex)
    for zl, al, bl in zip(z, a_blocks, b_blocks):
        m -= zl * al
        row += zl * bl
    cond = np.linalg.cond(m)
    if not np.isfinite(cond) or cond > _COND_LIMIT:
        raise PoleProximityError(z, float(cond))
    x = np.linalg.solve(m, np.ones(size, dtype=complex))
    return complex(1 + row @ x)


# -- text rendering --------------------------------------------------------

def compact_text(ct: CompactTableau, float_digits: int = 12) -> str:
    """Aligned text dump of the compact tableau (abscissa columns | matrix; weights).

    Entries beyond each row's own diagonal block are structurally zero
    and left blank, matching the block-lower-triangular print layout.
    """

    def fmt(x):
        if isinstance(x, Fraction):
            return format_number(x)
        return f"{float(x):.{float_digits}g}"

    total = ct.total_stages
    row_end = [0] * total
    for stage_blocks in ct.blocks:
        for lo, hi in stage_blocks:
            for r in range(lo, hi):
                row_end[r] = hi
    cells = []
    for i in range(total):
        left = [fmt(col[i]) for col in ct.abscissae]
        right = [fmt(ct.matrix[i][j]) if j < row_end[i] else "" for j in range(total)]
        cells.append(left + ["|"] + right)
    cells.append([""] * ct.operators + ["|"] + [fmt(w) for w in ct.weights])
    widths = [max(len(row[j]) for row in cells) for j in range(len(cells[0]))]
    lines = ["  ".join(cell.rjust(w) for cell, w in zip(row, widths)).rstrip()
             for row in cells]
    lines.insert(-1, "-" * max(len(line) for line in lines))
    header = ct.scheme_name or "compact tableau"
    return header + "\n" + "\n".join(lines) + "\n"
