"""Hybrid resultant matrix blocks via the normal fan of the Newton polygon.

The square hybrid matrix [[B, L], [Lt, 0]] represents the two-term reduction
of the twisted Koszul complex of f1, f2, f3 on the toric surface of Q, with
the twist whose global sections are indexed by the interior points of 2Q.
Levels p = 3..0 carry the line bundles O((2-p)Q + K) tensored with
Lambda^p(C^3); cohomology is computed degree by degree with Cech complexes on
the chart cover of the normal fan, and the cubic block B is the transferred
differential

    B  =  proj_H0 . mult_f . h . mult_f . h . mult_f . incl_H2,

where h is a chosen contracting homotopy of each Cech column.  Sylvester rows
(the Lambda^2 part) come out proportional to coefficient rows of the f_i; a
per-column rational calibration pins them to exact coefficient extraction so
the assembled matrix matches the documented layout.

All choices (homotopies, harmonic representatives) are deterministic; any two
choices differ by row/column operations that fix every determinant identity
the implicitizer relies on.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .errors import DegenerateSupport
from .lattice import Polygon, interior_points, polygon_points
from .polynomials import Polynomial, ONE, ZERO

_LEVEL_COUNT = 4  # Lambda^0 .. Lambda^3


def _lambda_basis(p: int):
    return list(itertools.combinations((1, 2, 3), p))


class _CechColumn:
    """Cech complex of one line bundle at one lattice degree, with splitting.

    Bases per cohomological index q are the (q+1)-subsets of maximal cones on
    whose chart the monomial is a section.  The splitting decomposes each
    cochain space as im(d) + harmonic + pivot-complement, yielding both the
    harmonic projection and a contracting homotopy.
    """

    def __init__(self, rays, cone_rays, offsets, m):
        s = len(rays)
        self.bases = []
        for q in range(4):
            idx = []
            for I in itertools.combinations(range(s), q + 1):
                shared = cone_rays[I[0]]
                for i in I[1:]:
                    shared = shared & cone_rays[i]
                if all(m[0] * rays[j][0] + m[1] * rays[j][1] >= -offsets[j]
                       for j in shared):
                    idx.append(I)
            self.bases.append(idx)
        self.index = [{I: i for i, I in enumerate(b)} for b in self.bases]
        self._dmats = [self._dmat(q) for q in range(3)]
        self._split = [self._decompose(q) for q in range(3)]

    def _dmat(self, q):
        src = self.bases[q]
        dst = self.bases[q + 1]
        pos = self.index[q]
        mat = [[Fraction(0)] * len(src) for _ in range(len(dst))]
        for ri, J in enumerate(dst):
            for k in range(len(J)):
                I = J[:k] + J[k + 1:]
                ci = pos.get(I)
                if ci is not None:
                    mat[ri][ci] += Fraction((-1) ** k)
        return mat

    def _decompose(self, q):
        n = len(self.bases[q])
        if n == 0:
            return {"n_im": 0, "n_h": 0, "harmonic": [], "inv": None,
                    "lifts": []}
        d_here = self._dmats[q]
        d_prev = self._dmats[q - 1] if q >= 1 else None
        im_basis, lifts = _column_space(d_prev) if q >= 1 else ([], [])
        ker = _kernel_vectors(d_here, n)
        harmonic = _extend_independent(im_basis, ker, n)
        pivots = _pivot_columns(d_here, n)
        w_basis = [_unit(n, j) for j in pivots]
        basis = im_basis + harmonic + w_basis
        assert len(basis) == n, "cochain splitting failed"
        inv = _invert_columns(basis, n)
        return {"n_im": len(im_basis), "n_h": len(harmonic),
                "harmonic": harmonic, "inv": inv, "lifts": lifts}

    def homotopy(self, q, vec):
        """h: C^q -> C^{q-1} with dh + hd = 1 - harmonic projection."""
        sq = self._split[q]
        out_dim = len(self.bases[q - 1]) if q >= 1 else 0
        out = [ZERO] * out_dim
        if q == 0 or sq["inv"] is None or out_dim == 0:
            return out
        coords = _apply_inverse(sq["inv"], vec)
        for k in range(sq["n_im"]):
            c = coords[k]
            if c.is_zero():
                continue
            for j, val in sq["lifts"][k]:
                out[j] = out[j] + c.scale(val)
        return out

    def harmonic_coords(self, q, vec):
        """Coefficients of the harmonic components, with the basis vectors."""
        sq = self._split[q]
        if sq["inv"] is None or sq["n_h"] == 0:
            return [], []
        coords = _apply_inverse(sq["inv"], vec)
        return coords[sq["n_im"]: sq["n_im"] + sq["n_h"]], sq["harmonic"]

    def harmonic_basis(self, q):
        return self._split[q]["harmonic"], self.bases[q]


def _unit(n, j):
    v = [Fraction(0)] * n
    v[j] = Fraction(1)
    return v


def _column_space(mat):
    """Basis of the column space + sparse lifts mapping onto each basis vector."""
    if not mat or not mat[0]:
        return [], []
    rows, cols = len(mat), len(mat[0])
    basis, lifts, pivots = [], [], []
    for ci in range(cols):
        vec = [mat[r][ci] for r in range(rows)]
        lift = {ci: Fraction(1)}
        for bvec, blift, prow in zip(basis, lifts, pivots):
            f = vec[prow] / bvec[prow]
            if f:
                vec = [a - f * b for a, b in zip(vec, bvec)]
                for j, val in blift:
                    lift[j] = lift.get(j, Fraction(0)) - f * val
        prow = next((r for r in range(rows) if vec[r]), None)
        if prow is not None:
            basis.append(vec)
            lifts.append(sorted((j, v) for j, v in lift.items() if v))
            pivots.append(prow)
    return basis, lifts


def _pivot_columns(mat, ncols):
    if not mat:
        return []
    rows = len(mat)
    work = [row[:] for row in mat]
    piv = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, rows) if work[i][c]), None)
        if pr is None:
            continue
        work[r], work[pr] = work[pr], work[r]
        for i in range(rows):
            if i != r and work[i][c]:
                f = work[i][c] / work[r][c]
                work[i] = [a - f * b for a, b in zip(work[i], work[r])]
        piv.append(c)
        r += 1
        if r == rows:
            break
    return piv


def _kernel_vectors(mat, ncols):
    if ncols == 0:
        return []
    if not mat:
        return [_unit(ncols, j) for j in range(ncols)]
    rows = len(mat)
    work = [row[:] for row in mat]
    piv = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, rows) if work[i][c]), None)
        if pr is None:
            continue
        work[r], work[pr] = work[pr], work[r]
        for i in range(rows):
            if i != r and work[i][c]:
                f = work[i][c] / work[r][c]
                work[i] = [a - f * b for a, b in zip(work[i], work[r])]
        piv.append(c)
        r += 1
        if r == rows:
            break
    free = [c for c in range(ncols) if c not in piv]
    out = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for ri, pc in enumerate(piv):
            v[pc] = -work[ri][fc] / work[ri][pc]
        out.append(v)
    return out


def _extend_independent(base, candidates, n):
    echelon = []
    for v in base:
        w = v[:]
        for ew, ep in echelon:
            if w[ep]:
                f = w[ep] / ew[ep]
                w = [a - f * b for a, b in zip(w, ew)]
        p = next(i for i in range(n) if w[i])
        echelon.append((w, p))
    extras = []
    for v in candidates:
        w = v[:]
        for ew, ep in echelon:
            if w[ep]:
                f = w[ep] / ew[ep]
                w = [a - f * b for a, b in zip(w, ew)]
        p = next((i for i in range(n) if w[i]), None)
        if p is not None:
            echelon.append((w, p))
            extras.append(v)
    return extras


def _invert_columns(cols, n):
    a = [[cols[c][r] for c in range(n)] for r in range(n)]
    inv = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for c in range(n):
        pr = next(r for r in range(c, n) if a[r][c])
        a[c], a[pr] = a[pr], a[c]
        inv[c], inv[pr] = inv[pr], inv[c]
        f = a[c][c]
        if f != 1:
            a[c] = [x / f for x in a[c]]
            inv[c] = [x / f for x in inv[c]]
        for r in range(n):
            if r != c and a[r][c]:
                g = a[r][c]
                a[r] = [x - g * y for x, y in zip(a[r], a[c])]
                inv[r] = [x - g * y for x, y in zip(inv[r], inv[c])]
    return inv


def _apply_inverse(inv, vec):
    n = len(inv)
    out = []
    for i in range(n):
        acc = ZERO
        for j in range(n):
            if inv[i][j] and not vec[j].is_zero():
                acc = acc + vec[j].scale(inv[i][j])
        out.append(acc)
    return out


class FanComplex:
    """Normal-fan Cech machinery for one polygon, with per-degree caching."""

    def __init__(self, polygon: Polygon):
        if len(polygon.vertices) < 3:
            raise DegenerateSupport("polygon must be two-dimensional")
        self.polygon = polygon
        self.rays = [e.eta for e in polygon.edges]
        s = len(self.rays)
        self.cone_rays = [frozenset((i, (i + 1) % s)) for i in range(s)]
        a = [e.offset for e in polygon.edges]
        self.level_offsets = {p: [(2 - p) * aj - 1 for aj in a]
                              for p in range(_LEVEL_COUNT)}
        self._columns: dict = {}

    def column(self, p: int, m) -> _CechColumn:
        key = (p, m)
        col = self._columns.get(key)
        if col is None:
            col = _CechColumn(self.rays, self.cone_rays,
                              self.level_offsets[p], m)
            self._columns[key] = col
        return col


def _f_terms(f: Polynomial):
    """[(exponent pair, X-coefficient Polynomial), ...] of an s,t-polynomial."""
    out = []
    for pt in sorted(f.support()):
        c = f.coefficient_at(pt)
        if not c.is_zero():
            out.append((pt, c))
    return out


class HybridTransfer:
    """Computes the cubic block and calibrated layout for given sections."""

    def __init__(self, polygon: Polygon, fs):
        self.fan = FanComplex(polygon)
        self.polygon = polygon
        self.fs = list(fs)
        self.fterms = [_f_terms(f) for f in self.fs]

    def _koszul(self, element):
        """Multiply by the section triple: level p -> p-1 Koszul step.

        Elements are dicts (lambda_subset, degree m, cech index I) -> X-poly.
        """
        out: dict = {}
        for (S, m, I), c in element.items():
            for kpos, k in enumerate(S):
                sign = (-1) ** kpos
                S2 = tuple(x for x in S if x != k)
                for gamma, fc in self.fterms[k - 1]:
                    m2 = (m[0] + gamma[0], m[1] + gamma[1])
                    key = (S2, m2, I)
                    term = fc * c
                    if sign < 0:
                        term = -term
                    prev = out.get(key)
                    val = term if prev is None else prev + term
                    if val.is_zero():
                        out.pop(key, None)
                    else:
                        out[key] = val
        return out

    def _apply_homotopy(self, p, q, element):
        groups: dict = {}
        for (S, m, I), c in element.items():
            groups.setdefault((S, m), {})[I] = c
        out: dict = {}
        for (S, m), comps in groups.items():
            col = self.fan.column(p, m)
            basis = col.bases[q]
            vec = [comps.get(I, ZERO) for I in basis]
            hv = col.homotopy(q, vec)
            for I, val in zip(col.bases[q - 1], hv):
                if not val.is_zero():
                    out[(S, m, I)] = val
        return out

    def _project_sections(self, element):
        """Harmonic H^0 part of a level-0 element, as {degree: X-poly}."""
        groups: dict = {}
        for (S, m, I), c in element.items():
            groups.setdefault(m, {})[I] = c
        out = {}
        for m, comps in groups.items():
            col = self.fan.column(0, m)
            basis = col.bases[0]
            vec = [comps.get(I, ZERO) for I in basis]
            coords, hbasis = col.harmonic_coords(0, vec)
            if not hbasis:
                continue
            assert len(hbasis) == 1, "level-0 harmonic space must be a line"
            hvec = hbasis[0]
            j = next(i for i in range(len(hvec)) if hvec[i])
            val = coords[0].scale(hvec[j])
            if not val.is_zero():
                out[m] = val
        return out

    def _project_top(self, element):
        """Harmonic H^2 components of a level-2 element, keyed by lambda pair."""
        groups: dict = {}
        for (S, m, I), c in element.items():
            groups.setdefault((S, m), {})[I] = c
        out: dict = {}
        for (S, m), comps in groups.items():
            col = self.fan.column(2, m)
            basis = col.bases[2]
            vec = [comps.get(I, ZERO) for I in basis]
            coords, hbasis = col.harmonic_coords(2, vec)
            for val in coords:
                if not val.is_zero():
                    assert m == (0, 0), "Sylvester content away from degree 0"
                    out[S] = out.get(S, ZERO) + val
        return out

    def transfer_column(self, alpha):
        """Transfer for one dual-section class; returns (B-column, Syl-column).

        The class of x^(-alpha) spans H^2 at level 3; the B-column lives on
        interior points of 2Q, the Sylvester column on the lambda-pair rows.
        """
        m = (-alpha[0], -alpha[1])
        col3 = self.fan.column(3, m)
        harmonic, basis2 = col3.harmonic_basis(2)
        assert len(harmonic) == 1, f"H^2 at {m} has rank {len(harmonic)}"
        y3 = {}
        for I, c in zip(basis2, harmonic[0]):
            if c:
                y3[((1, 2, 3), m, I)] = Polynomial.constant(c)
        y2 = self._koszul(y3)
        syl = self._project_top(y2)
        w2 = self._apply_homotopy(2, 2, y2)
        y1 = self._koszul(w2)
        w1 = self._apply_homotopy(1, 1, y1)
        y0 = self._koszul(w1)
        return self._project_sections(y0), syl


# lambda-pair row <-> section index, with the Koszul contraction sign
_SYL_ROWS = {(2, 3): (0, 1), (1, 3): (1, -1), (1, 2): (2, 1)}


def hybrid_blocks(polygon: Polygon, fs):
    """B block entries and geometry for the hybrid matrix of three sections.

    Returns (b_entries, q_points, int_q, int_2q) where b_entries maps
    (beta, alpha) to the cubic X-polynomial entry, beta interior to 2Q and
    alpha a lattice point of Q.  Columns are calibrated so the Sylvester rows
    of the assembled matrix are exact coefficient extractions of the f_i.
    """
    transfer = HybridTransfer(polygon, fs)
    q_points = polygon_points(polygon, 1)
    int_q = interior_points(polygon, 1)
    int_2q = interior_points(polygon, 2)
    fcoeffs = [{pt: f.coefficient_at(pt) for pt in f.support()} for f in fs]
    b_entries = {}
    for alpha in q_points:
        bcol, sylcol = transfer.transfer_column(alpha)
        # calibrate the column so Sylvester rows equal coefficient rows
        ratio = None
        for S, (fi, sign) in _SYL_ROWS.items():
            have = sylcol.get(S, ZERO)
            want = fcoeffs[fi].get(alpha, ZERO)
            if sign < 0:
                want = -want
            if want.is_zero():
                assert have.is_zero(), "unexpected Sylvester content"
                continue
            assert not have.is_zero(), "missing Sylvester content"
            quot = have.exact_div(want)
            r = quot.constant_value()
            if ratio is None:
                ratio = r
            else:
                assert ratio == r, "inconsistent Sylvester calibration"
        if ratio is None:
            ratio = Fraction(1)
        inv = Fraction(1) / ratio
        for beta, val in bcol.items():
            scaled = val.scale(inv)
            if not scaled.is_zero():
                b_entries[(beta, alpha)] = scaled
    int_2q_set = set(int_2q)
    assert all(beta in int_2q_set for beta, _ in b_entries), \
        "cubic block entry off the interior of 2Q"
    return b_entries, q_points, int_q, int_2q
