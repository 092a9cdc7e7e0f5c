"""Implicitization through the hybrid resultant matrix of the Newton polygon.

The matrix has block form [[B, L], [Lt, 0]]: rows are interior points of 2Q
plus one Sylvester row per section f_i = x_i - X_i*x4; columns are lattice
points of Q plus one pair column (f_i, a) per interior point a of Q.  With no
base points its determinant is a constant times the implicit equation raised
to the degree of the parameterization; with base points the implicit equation
is recovered from maximal minors and their gcds.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import oracle
from .cech import hybrid_blocks
from .errors import NoSuchMinor, NotImplicitizable, VerificationFailed
from .lattice import Polygon, newton_polygon, degree_formula_check
from .linalg import PolyMatrix, det_poly, generic_rank, maximal_minor
from .polynomials import Polynomial, ZERO, poly_gcd, poly_power_root
from .surfaces import prepare_parameterization


@dataclass
class ChowMatrix:
    poly_matrix: PolyMatrix
    polygon: Polygon
    translation: tuple            # (ds, dt) removed monomial content
    q_points: list
    interior_q: list
    interior_2q: list

    @property
    def size(self) -> int:
        return self.poly_matrix.rows

    def sylvester_row_labels(self):
        return [("sylvester", i) for i in range(3)]

    def pair_col_labels(self):
        return [lbl for lbl in self.poly_matrix.col_labels
                if lbl[0] == "pair"]


@dataclass
class ImplicitResult:
    implicit: Polynomial
    exponent_d: int
    extraneous: Polynomial | None
    basepoint_degree: int
    method: str
    candidate: Polynomial         # normalized pre-root candidate (affine)
    diagnostics: dict = field(default_factory=dict)

    @property
    def degree(self) -> int:
        return self.implicit.total_degree()


def _sections(xs):
    """f_i = x_i - X_i * x4 for the translated parameterization."""
    x4 = xs[3]
    out = []
    for i in range(3):
        xi_var = Polynomial.variable(f"X{i + 1}")
        out.append(xs[i] - xi_var * x4)
    return out


def bezout_block(f1: Polynomial, f2: Polynomial, f3: Polynomial,
                 polygon: Polygon) -> PolyMatrix:
    """The cubic block: rows interior points of 2Q, columns points of Q.

    Entries are cubic forms in the coefficients of the sections (degree <= 3
    in X1..X4); the realization is the transferred differential of the
    twisted Koszul complex, unique up to row/column operations that preserve
    every determinant identity used downstream.
    """
    b_entries, q_points, _int_q, int_2q = hybrid_blocks(polygon, [f1, f2, f3])
    rows = []
    for beta in int_2q:
        rows.append([b_entries.get((beta, alpha), ZERO) for alpha in q_points])
    return PolyMatrix(rows,
                      [("bezout", b) for b in int_2q],
                      [("point", a) for a in q_points])


def build_chow_matrix(xs, presimplified: bool = False) -> ChowMatrix:
    """Assemble the square hybrid matrix for a 4-polynomial parameterization."""
    if presimplified:
        translated, shift = list(xs), (0, 0)
    else:
        translated, shift = prepare_parameterization(xs)
    supports = [p.support() for p in translated]
    polygon = newton_polygon(supports)
    fs = _sections(translated)
    b_entries, q_points, int_q, int_2q = hybrid_blocks(polygon, fs)
    fcoeffs = [{pt: f.coefficient_at(pt) for pt in f.support()} for f in fs]
    row_labels = [("bezout", b) for b in int_2q] + \
                 [("sylvester", i) for i in range(3)]
    col_labels = [("point", a) for a in q_points] + \
                 [("pair", (i, a)) for i in range(3) for a in int_q]
    assert len(row_labels) == len(col_labels), "hybrid matrix must be square"
    entries = []
    for rl in row_labels:
        row = []
        for cl in col_labels:
            if rl[0] == "bezout" and cl[0] == "point":
                row.append(b_entries.get((rl[1], cl[1]), ZERO))
            elif rl[0] == "bezout" and cl[0] == "pair":
                i, a = cl[1]
                beta = rl[1]
                row.append(fcoeffs[i].get((beta[0] - a[0], beta[1] - a[1]),
                                          ZERO))
            elif rl[0] == "sylvester" and cl[0] == "point":
                row.append(fcoeffs[rl[1]].get(cl[1], ZERO))
            else:
                row.append(ZERO)
        entries.append(row)
    pm = PolyMatrix(entries, row_labels, col_labels)
    return ChowMatrix(pm, polygon, shift, q_points, int_q, int_2q)


def _finish(candidate: Polynomial, xs, bp_degree: int, polygon: Polygon,
            method: str, diagnostics: dict) -> ImplicitResult:
    """Common tail: power-root, vanishing check, degree bookkeeping."""
    candidate = candidate.normalized()
    root, d = poly_power_root(candidate)
    if not oracle.verify_vanishing(root, xs):
        raise VerificationFailed(
            "candidate implicit equation does not vanish on the surface")
    clean = degree_formula_check(polygon, root.total_degree(), d, bp_degree)
    extraneous = None
    diagnostics["degree_formula_ok"] = clean
    if not clean:
        # root carries surface-vanishing content but extra factors remain
        diagnostics["extraneous_unresolved"] = True
    return ImplicitResult(implicit=root, exponent_d=d, extraneous=extraneous,
                          basepoint_degree=bp_degree, method=method,
                          candidate=candidate, diagnostics=diagnostics)


def implicitize_chow(xs, seed: int = 0, trials: int = 4) -> ImplicitResult:
    """Implicit equation via the hybrid matrix determinant or its minors."""
    translated, shift = prepare_parameterization(xs)
    cm = build_chow_matrix(translated, presimplified=True)
    m = cm.poly_matrix
    rank = generic_rank(m, trials=trials, seed=seed)
    bp_degree = m.rows - rank
    diag = {
        "method": "chow",
        "size": m.rows,
        "generic_rank": rank,
        "basepoint_degree": bp_degree,
        "seed": seed,
        "translation": list(shift),
        "sylvester_complete": None,
    }
    if bp_degree == 0:
        det = det_poly(m)
        if det.is_zero():
            raise NotImplicitizable("full-rank matrix with zero determinant")
        diag["sylvester_complete"] = True
        return _finish(det, translated, 0, cm.polygon, "chow", diag)
    req_rows = cm.sylvester_row_labels()
    pair_cols = cm.pair_col_labels()
    minors = []
    try:
        _sub, det = maximal_minor(m, req_rows, pair_cols, seed=seed)
        diag["sylvester_complete"] = True
        minors.append(det)
    except NoSuchMinor:
        diag["sylvester_complete"] = False
    if minors:
        result = _finish(minors[0], translated, bp_degree, cm.polygon,
                         "chow", dict(diag))
        if result.diagnostics.get("degree_formula_ok"):
            return result
    # gcd across minors with as many pair columns as possible
    for dropped in range(len(pair_cols)):
        req_c = pair_cols[:dropped] + pair_cols[dropped + 1:]
        try:
            _sub, det = maximal_minor(m, req_rows, req_c,
                                      seed=seed + dropped + 1)
        except NoSuchMinor:
            continue
        if not det.is_zero() and all(not (det - other).is_zero()
                                     for other in minors):
            minors.append(det)
        if len(minors) >= 3:
            break
    if not minors:
        try:
            _sub, det = maximal_minor(m, req_rows, (), seed=seed)
            minors.append(det)
        except NoSuchMinor as exc:
            raise NotImplicitizable("no nonzero maximal minor found") from exc
    g = minors[0].normalized()
    for det in minors[1:]:
        g = poly_gcd(g, det)
    diag["minors_used"] = len(minors)
    return _finish(g, translated, bp_degree, cm.polygon, "chow", diag)


def _divisibility_exponent(candidate: Polynomial, root: Polynomial) -> int:
    from .errors import NotDivisible
    k = 0
    current = candidate
    while True:
        try:
            current = current.exact_div(root)
            k += 1
        except NotDivisible:
            return k


def cross_gcd(a: ImplicitResult, b: ImplicitResult, xs) -> ImplicitResult:
    """Combine two method results: gcd of candidates, verified and stripped.

    Both results must come from the same (translated) parameterization; the
    combined implicit equation is the power root of the candidate gcd, and
    per-side extraneous factors are reported rather than silently dropped.
    """
    translated, _shift = prepare_parameterization(xs)
    if (a.candidate - b.candidate).is_zero():
        combined = a.candidate
    else:
        combined = poly_gcd(a.candidate, b.candidate)
    if combined.is_constant():
        raise VerificationFailed("method candidates share no common factor")
    root, d = poly_power_root(combined)
    samples = oracle.sample_surface(translated, 20, seed=101)
    for sample in samples:
        value = root.evaluate({"X1": sample.image_affine[0],
                               "X2": sample.image_affine[1],
                               "X3": sample.image_affine[2]})
        if not value.is_zero():
            raise VerificationFailed(
                "candidate gcd does not vanish at sampled surface points")
    if not oracle.verify_vanishing(root, translated):
        raise VerificationFailed("candidate gcd fails symbolic vanishing")
    d = min(_divisibility_exponent(a.candidate, root),
            _divisibility_exponent(b.candidate, root))
    d = max(d, 1)
    extraneous = None
    extras = {}
    for side, res in (("a", a), ("b", b)):
        da = _divisibility_exponent(res.candidate, root)
        quotient = res.candidate.exact_div(root ** da).normalized()
        if not quotient.is_constant():
            extras[side] = quotient
            if extraneous is None:
                extraneous = quotient
    diag = {
        "method": "cross_gcd",
        "sides": [a.method, b.method],
        "side_extraneous": {k: str(v) for k, v in extras.items()},
        "a": a.diagnostics,
        "b": b.diagnostics,
    }
    return ImplicitResult(
        implicit=root.normalized(), exponent_d=d, extraneous=extraneous,
        basepoint_degree=max(a.basepoint_degree, b.basepoint_degree),
        method="cross_gcd", candidate=combined.normalized(), diagnostics=diag)
