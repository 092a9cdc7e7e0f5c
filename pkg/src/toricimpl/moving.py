"""The method of moving planes and quadrics adapted to the Newton polygon.

Moving planes are syzygies sum A_i*x_i = 0 with the A_i drawn from the graded
piece whose monomials are the lattice points of Q off a chosen connected edge
chain; moving quadrics are syzygies on the degree-2 products.  Stacking one
row per plane (linear entries) and per complement quadric (quadratic entries)
over the monomial basis of that graded piece yields a matrix whose
determinant is the implicit equation in the base-point-free square case, and
whose maximal minors recover it via gcds otherwise.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import oracle
from .chow import ImplicitResult
from .errors import (InjectivityFailure, NotImplicitizable,
                     VerificationFailed)
from .lattice import (DegreeSpec, EdgeSelection, Polygon, lattice_points,
                      newton_polygon, select_edge_set)
from .linalg import (PolyMatrix, RationalMatrix, det_poly, kernel_basis,
                     rank)
from .polynomials import Polynomial, ZERO, X, poly_gcd, poly_power_root
from .surfaces import prepare_parameterization

# quadratic monomials X_a*X_b with a <= b, fixed ordering (0-indexed)
QUAD_PAIRS = ((0, 0), (0, 1), (0, 2), (0, 3), (1, 1),
              (1, 2), (1, 3), (2, 2), (2, 3), (3, 3))


@dataclass
class MovingPlane:
    """Coefficients A_1..A_4 over the monomial basis, sum A_i*x_i = 0."""
    coeffs: list      # 4 lists of Fraction, aligned with `basis`
    basis: list       # lattice points of Q minus the selected edges

    def row_entries(self):
        out = []
        for m_idx in range(len(self.basis)):
            entry = ZERO
            for i in range(4):
                c = self.coeffs[i][m_idx]
                if c:
                    entry = entry + X[i].scale(c)
            out.append(entry)
        return out


@dataclass
class MovingQuadric:
    """Coefficients over the basis for each quadratic monomial X_a*X_b."""
    coeffs: list      # 10 lists of Fraction, aligned with QUAD_PAIRS x basis
    basis: list

    def row_entries(self):
        out = []
        for m_idx in range(len(self.basis)):
            entry = ZERO
            for p_idx, (a, b) in enumerate(QUAD_PAIRS):
                c = self.coeffs[p_idx][m_idx]
                if c:
                    entry = entry + (X[a] * X[b]).scale(c)
            out.append(entry)
        return out


@dataclass
class MQMatrix:
    poly_matrix: PolyMatrix
    selection: EdgeSelection
    planes: list
    quadrics: list

    @property
    def square(self) -> bool:
        return self.poly_matrix.rows == self.poly_matrix.cols


def _product_support_matrix(factors, sel: EdgeSelection, degree: int):
    """Matrix of (p_1..p_k) -> sum p_j * factors[j] in the monomial bases.

    Columns: one block per factor, each indexed by the basis of Q\\E_I;
    rows: basis of degree*Q \\ E_I.
    """
    polygon = sel.polygon
    dom = lattice_points(DegreeSpec.pushed(polygon, 1, sel.indices))
    cod = lattice_points(DegreeSpec.pushed(polygon, degree, sel.indices))
    cod_index = {pt: i for i, pt in enumerate(cod)}
    entries = [[Fraction(0)] * (len(factors) * len(dom)) for _ in cod]
    col_labels = []
    for blk, f in enumerate(factors):
        fterms = [(pt, f.coefficient_at(pt).constant_value())
                  for pt in sorted(f.support())]
        for m_idx, mon in enumerate(dom):
            col = blk * len(dom) + m_idx
            col_labels.append((blk, mon))
            for pt, c in fterms:
                target = (pt[0] + mon[0], pt[1] + mon[1])
                row = cod_index.get(target)
                assert row is not None, "product escapes the graded piece"
                entries[row][col] += c
    return RationalMatrix(entries, [("mono", p) for p in cod], col_labels), dom


def build_psi1(xs, sel: EdgeSelection):
    """Matrix of (p_1..p_4) -> sum p_i x_i into the degree-2 graded piece."""
    mat, _dom = _product_support_matrix(xs, sel, 2)
    return mat


def build_psi2(xs, sel: EdgeSelection):
    """Matrix of the 10 quadratic products into the degree-3 graded piece."""
    products = [xs[a] * xs[b] for a, b in QUAD_PAIRS]
    mat, _dom = _product_support_matrix(products, sel, 3)
    return mat


def moving_planes(xs, sel: EdgeSelection):
    """Kernel basis of the plane map; returns (planes, mp_max_rank)."""
    mat, dom = _product_support_matrix(xs, sel, 2)
    kernel = kernel_basis(mat)
    nb = len(dom)
    planes = [MovingPlane([vec[i * nb:(i + 1) * nb] for i in range(4)], dom)
              for vec in kernel]
    expected = max(mat.cols - mat.rows, 0)
    return planes, len(planes) == expected


def _plane_times_coordinate(plane: MovingPlane, j: int):
    """The moving quadric X_j * plane, as a vector over QUAD_PAIRS x basis."""
    nb = len(plane.basis)
    vec = [Fraction(0)] * (len(QUAD_PAIRS) * nb)
    pair_index = {p: i for i, p in enumerate(QUAD_PAIRS)}
    for i in range(4):
        pair = (min(i, j), max(i, j))
        blk = pair_index[pair]
        for m_idx in range(nb):
            vec[blk * nb + m_idx] += plane.coeffs[i][m_idx]
    return vec


def moving_quadrics_complement(xs, sel: EdgeSelection, planes,
                               allow_dependent: bool = False):
    """Quadric-kernel basis vectors independent of plane multiples.

    The image of planes x {X_1..X_4} inside the quadric kernel must be
    linearly independent when there are no base points; raises
    InjectivityFailure otherwise unless allow_dependent is set.
    """
    mat, dom = _product_support_matrix(
        [xs[a] * xs[b] for a, b in QUAD_PAIRS], sel, 3)
    kernel = kernel_basis(mat)
    image = []
    for plane in planes:
        for j in range(4):
            image.append(_plane_times_coordinate(plane, j))
    dependent = False
    if image:
        img_rank = rank(RationalMatrix([v[:] for v in image]))
        if img_rank != len(image):
            if not allow_dependent:
                raise InjectivityFailure(
                    f"plane multiples span rank {img_rank} < {len(image)}")
            dependent = True
    # deterministic complement: echelon over plane multiples, then extend
    # with kernel vectors that add rank
    ncols = len(QUAD_PAIRS) * len(dom)
    echelon = []

    def try_add(vec):
        w = list(vec)
        for ew, ep in echelon:
            if w[ep]:
                f = w[ep] / ew[ep]
                w = [a - f * b for a, b in zip(w, ew)]
        p = next((i for i in range(ncols) if w[i]), None)
        if p is None:
            return False
        echelon.append((w, p))
        return True

    for vec in image:
        try_add(vec)
    extras = []
    nb = len(dom)
    for vec in kernel:
        if try_add(vec):
            extras.append(MovingQuadric(
                [vec[i * nb:(i + 1) * nb] for i in range(len(QUAD_PAIRS))],
                dom))
    return extras, dependent


def assemble_mq_matrix(planes, quadrics, sel: EdgeSelection) -> MQMatrix:
    """Stack plane rows (linear forms) then quadric rows over the basis."""
    if not planes and not quadrics:
        raise NotImplicitizable("no moving planes or quadrics found")
    basis = planes[0].basis if planes else quadrics[0].basis
    rows = []
    labels = []
    for k, plane in enumerate(planes):
        rows.append(plane.row_entries())
        labels.append(("plane", k))
    for k, quad in enumerate(quadrics):
        rows.append(quad.row_entries())
        labels.append(("quadric", k))
    pm = PolyMatrix(rows, labels, [("point", m) for m in basis])
    return MQMatrix(pm, sel, planes, quadrics)


def _dehomogenize(p: Polynomial) -> Polynomial:
    return p.evaluate({"X4": 1})


def _mq_result(candidate_hom: Polynomial, xs, polygon: Polygon,
               diag: dict) -> ImplicitResult:
    candidate = _dehomogenize(candidate_hom).normalized()
    root, d = poly_power_root(candidate)
    if not oracle.verify_vanishing(root, xs):
        raise VerificationFailed(
            "moving-surface candidate does not vanish on the surface")
    diag["det_degree"] = candidate_hom.total_degree()
    diag["expected_det_degree"] = polygon.area2
    clean = d * root.total_degree() == candidate.total_degree()
    if not clean:
        diag["extraneous_unresolved"] = True
    bp = diag.get("basepoint_degree", 0)
    return ImplicitResult(implicit=root, exponent_d=d, extraneous=None,
                          basepoint_degree=bp, method="mq",
                          candidate=candidate, diagnostics=diag)


def implicitize_mq(xs, seed: int = 0, edge_override=None,
                   basepoint_degree: int | None = None) -> ImplicitResult:
    """Implicitize via the square moving-plane/quadric matrix or its minors."""
    translated, shift = prepare_parameterization(xs)
    polygon = newton_polygon([p.support() for p in translated])
    sel = select_edge_set(polygon, edge_override)
    planes, mp_max_rank = moving_planes(translated, sel)
    predicted_planes = polygon.boundary_count - 2 * sel.b_selected
    # A - B/2 + B_I; the parity identity area2 + B = 2*(points - 1) makes
    # area2 - B even, so this is always an integer
    predicted_quadrics = (polygon.area2 - polygon.boundary_count) // 2 \
        + sel.b_selected
    quadrics, dependent = moving_quadrics_complement(
        translated, sel, planes, allow_dependent=True)
    mq = assemble_mq_matrix(planes, quadrics, sel)
    diag = {
        "method": "mq",
        "edge_set": list(sel.indices),
        "B_I": sel.b_selected,
        "planes": len(planes),
        "quadrics": len(quadrics),
        "predicted_planes": predicted_planes,
        "predicted_quadrics": predicted_quadrics,
        "square": mq.square,
        "mp_max_rank": mp_max_rank,
        "plane_image_dependent": dependent,
        "seed": seed,
        "translation": list(shift),
    }
    if basepoint_degree is not None:
        diag["basepoint_degree"] = basepoint_degree
    m = mq.poly_matrix
    if mq.square:
        det = det_poly(m)
        if not det.is_zero():
            return _mq_result(det, translated, polygon, diag)
        diag["singular_square"] = True
    if m.rows < m.cols:
        raise NotImplicitizable(
            f"{m.rows}x{m.cols} moving-surface matrix has too few rows")
    # non-square (or singular) case: determinants of maximal minors keeping
    # every plane row, gcd across at least two of them
    plane_count = len(planes)
    drop = m.rows - m.cols
    dets = []
    for removed in itertools.combinations(range(plane_count, m.rows), drop):
        keep = [i for i in range(m.rows) if i not in removed]
        sub = m.submatrix(keep, list(range(m.cols)))
        det = det_poly(sub)
        if not det.is_zero():
            dets.append(det)
        if len(dets) >= 4:
            break
    if not dets:
        raise NotImplicitizable("all moving-surface minors vanish")
    g = _dehomogenize(dets[0]).normalized()
    for det in dets[1:]:
        g = poly_gcd(g, _dehomogenize(det).normalized())
    diag["minors_used"] = len(dets)
    hom_degree = dets[0].total_degree()
    candidate = g
    root, d = poly_power_root(candidate)
    if not oracle.verify_vanishing(root, translated):
        raise VerificationFailed(
            "moving-surface minor gcd does not vanish on the surface")
    diag["det_degree"] = hom_degree
    diag["expected_det_degree"] = polygon.area2
    bp = diag.get("basepoint_degree", 0)
    return ImplicitResult(implicit=root, exponent_d=d, extraneous=None,
                          basepoint_degree=bp, method="mq",
                          candidate=candidate.normalized(), diagnostics=diag)
