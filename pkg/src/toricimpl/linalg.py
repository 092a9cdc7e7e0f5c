"""Exact linear algebra over the rationals and over Q[X1..X4].

Rational matrices get fraction-free Gaussian elimination (kernels, rank);
polynomial matrices get Bareiss determinants with exact division and a
probabilistic-then-certified rank/minor search.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import NoSuchMinor, UnsupportedVariables
from .polynomials import Polynomial, ONE, ZERO


@dataclass
class RationalMatrix:
    entries: list                      # list of rows of Fraction
    row_labels: list = field(default_factory=list)
    col_labels: list = field(default_factory=list)

    def __post_init__(self):
        if not self.row_labels:
            self.row_labels = list(range(len(self.entries)))
        if not self.col_labels:
            self.col_labels = list(range(len(self.entries[0]) if self.entries else 0))
        assert len(self.row_labels) == len(self.entries)
        if self.entries:
            assert all(len(r) == len(self.col_labels) for r in self.entries)

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.col_labels)


def _echelon(entries):
    """Row echelon with first-nonzero pivots (integer rows, fraction-free).

    Returns (work, pivot_cols); `work` rows are scaled integers.
    """
    if not entries:
        return [], []
    rows = len(entries)
    cols = len(entries[0])
    # clear denominators row by row
    work = []
    for row in entries:
        den = 1
        for c in row:
            den = den * c.denominator // _gcd(den, c.denominator)
        work.append([int(c * den) for c in row])
    piv_cols = []
    r = 0
    for c in range(cols):
        pr = next((i for i in range(r, rows) if work[i][c]), None)
        if pr is None:
            continue
        work[r], work[pr] = work[pr], work[r]
        piv = work[r][c]
        for i in range(r + 1, rows):
            if work[i][c]:
                f1, f2 = piv, work[i][c]
                work[i] = [f1 * a - f2 * b for a, b in zip(work[i], work[r])]
                g = 0
                for a in work[i]:
                    g = _gcd(g, abs(a))
                if g > 1:
                    work[i] = [a // g for a in work[i]]
        piv_cols.append(c)
        r += 1
        if r == rows:
            break
    return work[:r], piv_cols


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def rank(m: RationalMatrix) -> int:
    _, piv = _echelon(m.entries)
    return len(piv)


def kernel_basis(m: RationalMatrix) -> list:
    """Basis of the right kernel; deterministic (one vector per free column).

    Each basis vector has a 1 in its free column and rationals elsewhere.
    """
    work, piv_cols = _echelon(m.entries)
    cols = m.cols
    free = [c for c in range(cols) if c not in piv_cols]
    basis = []
    for fc in free:
        v = [Fraction(0)] * cols
        v[fc] = Fraction(1)
        # back substitution over the echelon rows
        for ri in range(len(piv_cols) - 1, -1, -1):
            pc = piv_cols[ri]
            s = Fraction(0)
            for c in range(pc + 1, cols):
                if v[c]:
                    s += Fraction(work[ri][c]) * v[c]
            v[pc] = -s / work[ri][pc]
        basis.append(v)
    return basis


def solve_exact(m: RationalMatrix, rhs: list):
    """One solution of m*x = rhs, or None if inconsistent."""
    aug = RationalMatrix([row + [b] for row, b in zip(m.entries, rhs)])
    work, piv = _echelon(aug.entries)
    cols = m.cols
    if any(pc == cols for pc in piv):
        return None
    x = [Fraction(0)] * cols
    for ri in range(len(piv) - 1, -1, -1):
        pc = piv[ri]
        s = Fraction(work[ri][cols])
        for c in range(pc + 1, cols):
            if x[c]:
                s -= Fraction(work[ri][c]) * x[c]
        x[pc] = s / work[ri][pc]
    return x


# -- polynomial matrices -------------------------------------------------------


@dataclass
class PolyMatrix:
    entries: list                      # list of rows of Polynomial
    row_labels: list = field(default_factory=list)
    col_labels: list = field(default_factory=list)

    def __post_init__(self):
        if not self.row_labels:
            self.row_labels = list(range(len(self.entries)))
        if not self.col_labels:
            self.col_labels = list(range(len(self.entries[0]) if self.entries else 0))
        for row in self.entries:
            for p in row:
                if p.uses_params():
                    raise UnsupportedVariables("matrix entries must be s,t-free")

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.col_labels)

    def submatrix(self, row_idx, col_idx) -> "PolyMatrix":
        return PolyMatrix(
            [[self.entries[r][c] for c in col_idx] for r in row_idx],
            [self.row_labels[r] for r in row_idx],
            [self.col_labels[c] for c in col_idx])

    def evaluate(self, binding) -> RationalMatrix:
        rows = []
        for row in self.entries:
            out = []
            for p in row:
                val = p.evaluate(binding)
                out.append(val.constant_value())
            rows.append(out)
        return RationalMatrix(rows, list(self.row_labels), list(self.col_labels))


def _det_cofactor(rows) -> Polynomial:
    n = len(rows)
    if n == 0:
        return ONE
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    det = ZERO
    sign = 1
    for j in range(n):
        if not rows[0][j].is_zero():
            minor = [[rows[i][k] for k in range(n) if k != j]
                     for i in range(1, n)]
            term = rows[0][j] * _det_cofactor(minor)
            det = det + term if sign > 0 else det - term
        sign = -sign
    return det


def det_entries(rows) -> Polynomial:
    """Determinant of a square list-of-lists of Polynomial entries.

    Bareiss fraction-free elimination (exact division by the previous pivot),
    falling back to cofactor expansion for dimension <= 4.
    """
    n = len(rows)
    if n <= 4:
        return _det_cofactor(rows)
    work = [row[:] for row in rows]
    sign = 1
    prev = ONE
    for k in range(n - 1):
        pr = next((i for i in range(k, n) if not work[i][k].is_zero()), None)
        if pr is None:
            return ZERO
        if pr != k:
            work[k], work[pr] = work[pr], work[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = work[k][k] * work[i][j] - work[i][k] * work[k][j]
                work[i][j] = num.exact_div(prev)
            work[i][k] = ZERO
        prev = work[k][k]
    det = work[n - 1][n - 1]
    return det if sign > 0 else -det


def det_poly(m: PolyMatrix) -> Polynomial:
    if m.rows != m.cols:
        raise ValueError(f"determinant of a {m.rows}x{m.cols} matrix")
    return det_entries(m.entries)


class EvaluationStream:
    """Deterministic stream of random rational X-points for rank probing."""

    def __init__(self, seed: int):
        self.seed = seed
        self.rng = random.Random(seed)

    def next_binding(self) -> dict:
        # growing pool keeps entries small early, spreads out over trials
        return {name: Fraction(self.rng.randint(-997, 997),
                               self.rng.randint(1, 97))
                for name in ("X1", "X2", "X3", "X4")}

    def next_param_pair(self):
        return (Fraction(self.rng.randint(-997, 997), self.rng.randint(1, 97)),
                Fraction(self.rng.randint(-997, 997), self.rng.randint(1, 97)))


def generic_rank(m: PolyMatrix, trials: int = 3, seed: int = 0) -> int:
    """Rank after random rational substitution; maximum over trials."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    stream = EvaluationStream(seed)
    best = 0
    for _ in range(trials):
        rm = m.evaluate(stream.next_binding())
        best = max(best, rank(rm))
        if best == min(m.rows, m.cols):
            break
    return best


def _greedy_independent(entries, order, target, required):
    """Greedy row selection (by index list `order`) reaching rank `target`.

    Returns selected row indices or None.  `required` rows come first and
    must all add rank.
    """
    cols = len(entries[0]) if entries else 0
    echelon = []   # (pivot_col, reduced_row)
    chosen = []

    def try_add(ri):
        row = [Fraction(x) for x in entries[ri]]
        for pc, er in echelon:
            if row[pc]:
                f = row[pc] / er[pc]
                row = [a - f * b for a, b in zip(row, er)]
        pc = next((c for c in range(cols) if row[c]), None)
        if pc is None:
            return False
        echelon.append((pc, row))
        chosen.append(ri)
        return True

    for ri in required:
        if not try_add(ri):
            return None
    for ri in order:
        if len(chosen) == target:
            break
        if ri in chosen:
            continue
        try_add(ri)
    return chosen if len(chosen) == target else None


def maximal_minor(m: PolyMatrix, required_rows=(), required_cols=(),
                  seed: int = 0, trials: int = 6):
    """A nonsingular generic-rank-sized minor containing the required labels.

    Rows and columns whose labels are not required are removed greedily at a
    random evaluation, preferring to drop "bezout"/"point" labels before
    Sylvester ones; the result is certified exactly by its nonzero determinant
    at the witness point.  Raises NoSuchMinor when no certified minor through
    the required labels exists.
    """
    req_r = [m.row_labels.index(lbl) for lbl in required_rows]
    req_c = [m.col_labels.index(lbl) for lbl in required_cols]
    target = generic_rank(m, trials=max(trials, 2), seed=seed)
    stream = EvaluationStream(seed + 1)

    def keep_preference(label):
        kind = label[0] if isinstance(label, tuple) else str(label)
        return 0 if kind in ("sylvester", "pair", "plane") else 1

    row_order = sorted(range(m.rows),
                       key=lambda i: (keep_preference(m.row_labels[i]), i))
    col_order = sorted(range(m.cols),
                       key=lambda j: (keep_preference(m.col_labels[j]), j))
    for _ in range(trials):
        binding = stream.next_binding()
        rm = m.evaluate(binding)
        rows_sel = _greedy_independent(rm.entries, row_order, target, req_r)
        if rows_sel is None:
            continue
        transposed = [[rm.entries[r][c] for r in rows_sel]
                      for c in range(m.cols)]
        cols_sel = _greedy_independent(transposed, col_order, target, req_c)
        if cols_sel is None:
            continue
        sub = m.submatrix(sorted(rows_sel), sorted(cols_sel))
        det = det_poly(sub)
        if not det.is_zero():
            return sub, det
    raise NoSuchMinor(
        f"no nonsingular rank-{target} minor through the required labels")
