"""Newton polygons, lattice-point enumeration, and edge-set selection.

A polygon is stored by its counterclockwise vertex list together with edge
data (primitive inner normal, offset, lattice length), so that
Q = { m : <m, eta_i> >= -a_i for every edge i }.
Graded pieces of the homogeneous coordinate ring are represented as offset
vectors (``DegreeSpec``) whose monomial basis is a lattice-point list.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import AssumptionViolated, DegenerateSupport

Point = tuple  # (x, y) integer pair


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points) -> list:
    """CCW hull vertices starting at the lexicographically smallest point.

    Collinear non-vertex points are dropped; degenerate hulls come back with
    fewer than 3 vertices.
    """
    pts = sorted(set(map(tuple, points)))
    if len(pts) <= 2:
        return pts
    lower = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        return sorted(set(hull))
    return hull


@dataclass(frozen=True)
class Edge:
    eta: Point        # primitive inner normal
    offset: int       # a_i with <m, eta> >= -a_i on Q
    length: int       # lattice length (gcd of coordinate differences)


@dataclass(frozen=True)
class Polygon:
    vertices: tuple
    edges: tuple

    @property
    def area2(self) -> int:
        """Normalized area: twice the Euclidean area (always an integer)."""
        v = self.vertices
        n = len(v)
        return abs(sum(v[i][0] * v[(i + 1) % n][1] - v[(i + 1) % n][0] * v[i][1]
                       for i in range(n)))

    @property
    def area(self) -> Fraction:
        return Fraction(self.area2, 2)

    @property
    def boundary_count(self) -> int:
        """B: number of boundary lattice points = sum of edge lengths."""
        return sum(e.length for e in self.edges)

    def offsets(self) -> list:
        return [e.offset for e in self.edges]

    def contains(self, m, scale: int = 1) -> bool:
        return all(m[0] * e.eta[0] + m[1] * e.eta[1] >= -e.offset * scale
                   for e in self.edges)

    def bounding_box(self, scale: int = 1):
        xs = [p[0] * scale for p in self.vertices]
        ys = [p[1] * scale for p in self.vertices]
        return (min(xs), max(xs)), (min(ys), max(ys))

    def to_record(self) -> dict:
        """JSON-friendly form used by CLI diagnostics."""
        return {
            "vertices": [list(p) for p in self.vertices],
            "edges": [{"eta": list(e.eta), "offset": e.offset,
                       "length": e.length} for e in self.edges],
            "area2": self.area2,
            "boundary": self.boundary_count,
        }


def newton_polygon(supports) -> Polygon:
    """Convex hull of a union of support sets, with full edge data.

    Raises DegenerateSupport when the hull is a point or a segment.
    """
    union = set()
    for sup in supports:
        union |= set(map(tuple, sup))
    verts = convex_hull(union)
    if len(verts) < 3:
        raise DegenerateSupport(
            f"support spans a {max(len(verts) - 1, 0)}-dimensional hull")
    edges = []
    n = len(verts)
    for i in range(n):
        a, b = verts[i], verts[(i + 1) % n]
        dx, dy = b[0] - a[0], b[1] - a[1]
        g = math.gcd(abs(dx), abs(dy))
        eta = (-dy // g, dx // g)
        edges.append(Edge(eta=eta, offset=-(a[0] * eta[0] + a[1] * eta[1]),
                          length=g))
    return Polygon(vertices=tuple(verts), edges=tuple(edges))


@dataclass(frozen=True)
class DegreeSpec:
    """A graded piece: offsets b_i selecting { m : <m, eta_i> >= -b_i }."""

    polygon: Polygon
    offsets: tuple
    scale: int  # k such that the piece sits inside kQ (for the bounding box)

    @staticmethod
    def scaled(polygon: Polygon, k: int) -> "DegreeSpec":
        return DegreeSpec(polygon, tuple(e.offset * k for e in polygon.edges), k)

    @staticmethod
    def pushed(polygon: Polygon, k: int, selected) -> "DegreeSpec":
        """kQ with the selected edges pushed in by one (kQ minus E_I)."""
        sel = set(selected)
        offs = tuple(e.offset * k - (1 if i in sel else 0)
                     for i, e in enumerate(polygon.edges))
        return DegreeSpec(polygon, offs, k)

    def contains(self, m) -> bool:
        return all(m[0] * e.eta[0] + m[1] * e.eta[1] >= -b
                   for e, b in zip(self.polygon.edges, self.offsets))

    def translate_equal(self, other: "DegreeSpec") -> bool:
        """Same grading class: offsets differ by <v, eta_i> for one v in Z^2."""
        if self.polygon is not other.polygon and self.polygon != other.polygon:
            return False
        diffs = [b2 - b1 for b1, b2 in zip(self.offsets, other.offsets)]
        etas = [e.eta for e in self.polygon.edges]
        # solve <v, eta_i> = -diff_i from two independent normals
        for i in range(len(etas)):
            for j in range(i + 1, len(etas)):
                det = etas[i][0] * etas[j][1] - etas[j][0] * etas[i][1]
                if det == 0:
                    continue
                num_x = -diffs[i] * etas[j][1] + diffs[j] * etas[i][1]
                num_y = -etas[i][0] * diffs[j] + etas[j][0] * diffs[i]
                if num_x % det or num_y % det:
                    return False
                v = (num_x // det, num_y // det)
                return all(v[0] * ex + v[1] * ey == -d
                           for (ex, ey), d in zip(etas, diffs))
        return False


def lattice_points(spec: DegreeSpec) -> list:
    """All integer points of the graded piece, ordered lex by (y, x)."""
    (x0, x1), (y0, y1) = spec.polygon.bounding_box(spec.scale)
    out = []
    for y in range(y0, y1 + 1):
        for x in range(x0, x1 + 1):
            if spec.contains((x, y)):
                out.append((x, y))
    return out


def polygon_points(polygon: Polygon, k: int = 1) -> list:
    return lattice_points(DegreeSpec.scaled(polygon, k))


def interior_points(polygon: Polygon, k: int = 1) -> list:
    """Lattice points strictly inside kQ."""
    spec = DegreeSpec(polygon, tuple(e.offset * k - 1 for e in polygon.edges), k)
    return lattice_points(spec)


def ehrhart_counts(polygon: Polygon, k: int):
    """(total, boundary, interior) lattice-point counts of kQ by formula."""
    if k <= 0:
        raise ValueError("k must be positive")
    a2 = polygon.area2
    b = polygon.boundary_count
    total = (a2 * k * k + b * k) // 2 + 1
    boundary = b * k
    interior = (a2 * k * k - b * k) // 2 + 1
    return total, boundary, interior


@dataclass(frozen=True)
class EdgeSelection:
    """A connected chain of edges E_I with B >= 2*B_I (Assumption 4.1)."""

    polygon: Polygon
    indices: tuple      # edge indices forming the chain, in chain order
    b_selected: int     # B_I

    @property
    def slack(self) -> int:
        return self.polygon.boundary_count - 2 * self.b_selected


def _chain(start: int, length: int, n: int):
    return tuple((start + j) % n for j in range(length))


def _is_connected_chain(indices, n: int) -> bool:
    idx = set(indices)
    if not idx or len(idx) >= n or len(idx) != len(indices):
        return False
    for start in idx:
        if (start - 1) % n not in idx:
            chain = _chain(start, len(idx), n)
            return set(chain) == idx
    return False  # all of 0..n-1 (cycle), already excluded by len check


def select_edge_set(polygon: Polygon, override=None) -> EdgeSelection:
    """Pick E_I maximizing B_I subject to B >= 2*B_I, or validate an override.

    Ties break toward the smallest starting edge index, then the shortest
    chain.  Single edges count as chains.
    """
    n = len(polygon.edges)
    lengths = [e.length for e in polygon.edges]
    b_total = polygon.boundary_count
    if override is not None:
        indices = tuple(override)
        if not _is_connected_chain(indices, n):
            raise AssumptionViolated(f"edges {indices} are not a proper connected chain")
        b_sel = sum(lengths[i] for i in set(indices))
        if 2 * b_sel > b_total:
            raise AssumptionViolated(
                f"selected boundary {b_sel} exceeds half of B={b_total}")
        return EdgeSelection(polygon, indices, b_sel)
    best = None
    for start in range(n):
        for size in range(1, n):
            chain = _chain(start, size, n)
            b_sel = sum(lengths[i] for i in chain)
            if 2 * b_sel > b_total:
                continue
            key = (-b_sel, start, size)
            if best is None or key < best[0]:
                best = (key, chain, b_sel)
    if best is None:
        raise AssumptionViolated("no feasible edge chain (degenerate polygon)")
    return EdgeSelection(polygon, best[1], best[2])


def basepoint_free_check(supports):
    """Genericity criterion: every edge of Q must touch at least two hulls.

    Returns (ok, witness_edge_index).  A support touches an edge when some of
    its points achieve the edge's supporting-line value.
    """
    sups = [set(map(tuple, sup)) for sup in supports if sup]
    if len(sups) < 3:
        raise DegenerateSupport("need at least three nonempty supports")
    polygon = newton_polygon(sups)
    for i, e in enumerate(polygon.edges):
        touching = 0
        for sup in sups:
            if min(p[0] * e.eta[0] + p[1] * e.eta[1] for p in sup) == -e.offset:
                touching += 1
                if touching >= 2:
                    break
        if touching < 2:
            return False, i
    return True, None


def degree_formula_check(polygon: Polygon, deg_implicit: int, deg_phi: int,
                         basepoint_degree: int) -> bool:
    """deg(phi) * deg(implicit) == 2*Area(Q) - (degree of the base locus)."""
    if min(deg_implicit, deg_phi, basepoint_degree) < 0:
        raise ValueError("degrees must be nonnegative")
    return deg_phi * deg_implicit == polygon.area2 - basepoint_degree
