"""The twisted toroidal grid diagram.

Combinatorial model
-------------------
The torus is R^2/Z^2.  Two horizontal curves sit at heights 0 (row 0)
and 1/2 (row 1); two curves of slope p/q are the images of y = (p/q)x
and y = (p/q)(x - 1/2).  Vertices are the 4p crossings, at
x = m/(2p) for columns m in 0..2p-1 on each row.  Column parity
determines which slope curve a vertex lies on: on row 0 even columns
lie on the first slope curve, odd on the second; on row 1 the parities
swap (this uses p, q odd).

Faces are quadrilaterals F(s, j) for strip s in {0, 1} (s = 0 between
heights 0 and 1/2) and start column j: the bottom corners are
(row s, cols j, j+1) and the top corners are (row 1-s, cols j+q, j+q+1),
columns mod 2p, because a slope segment gains q columns per half-height.
There are 4p faces.

Four basepoints sit at (e, 1-e), (1/2+e, 1-e), (e, 1/2-e), (1/2+e, 1/2-e)
for an infinitesimal e > 0.  e is handled symbolically: coordinates are
pairs a + b*e of exact rationals ordered lexicographically, so point
location never touches floating point or a concrete small number.

The knot is traced by connecting basepoints: a horizontal arc from the
w to the z on the top line, then straight-line travel turning right at
every basepoint.  The walk closes after exactly four arcs (two
horizontal, two of slope p/q, each slope arc dropping p/2 in height),
and its lift to the plane is a closed parallelogram.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .errors import TraceBroken, UnexpectedPeriodicDomain
from .twobridge import TwoBridgeParams

Vertex = tuple[int, int]  # (row, column)
Face = tuple[int, int]    # (strip, start column)


# ---------------------------------------------------------------------------
# Exact arithmetic with an infinitesimal
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Eps:
    """A number a + b*e with e an infinitesimal positive; ordered lexically."""

    a: Fraction
    b: Fraction = Fraction(0)

    def __add__(self, other):
        o = _as_eps(other)
        return Eps(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other):
        o = _as_eps(other)
        return Eps(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        o = _as_eps(other)
        return Eps(o.a - self.a, o.b - self.b)

    def __mul__(self, scalar):
        s = Fraction(scalar)
        return Eps(self.a * s, self.b * s)

    __rmul__ = __mul__

    def __neg__(self):
        return Eps(-self.a, -self.b)

    def _key(self):
        return (self.a, self.b)

    def __lt__(self, other):
        return self._key() < _as_eps(other)._key()

    def __le__(self, other):
        return self._key() <= _as_eps(other)._key()

    def __gt__(self, other):
        return self._key() > _as_eps(other)._key()

    def __ge__(self, other):
        return self._key() >= _as_eps(other)._key()


def _as_eps(x) -> Eps:
    if isinstance(x, Eps):
        return x
    return Eps(Fraction(x))


EPS = Eps(Fraction(0), Fraction(1))


def mod1(x: Eps) -> Eps:
    """Representative of x mod 1 in [0, 1) under the infinitesimal order."""
    if x.a.denominator == 1:
        k = x.a if x.b >= 0 else x.a - 1
    else:
        k = math.floor(x.a)
    return Eps(x.a - k, x.b)


def grid_floor(x: Eps, n: int) -> int:
    """Largest m with m/n <= x, assuming x is not exactly on a gridline."""
    u = x.a * n
    if u.denominator == 1:
        if x.b == 0:
            raise ValueError("point lies exactly on a gridline")
        return int(u) if x.b > 0 else int(u) - 1
    return math.floor(u)


# ---------------------------------------------------------------------------
# Faces and vertices
# ---------------------------------------------------------------------------

def vertex_count(p: int) -> int:
    return 4 * p


def face_count(p: int) -> int:
    return 4 * p


def face_corners(p: int, q: int, s: int, j: int) -> tuple[Vertex, Vertex, Vertex, Vertex]:
    """(bottom-left, bottom-right, top-left, top-right) of F(s, j)."""
    n = 2 * p
    return (
        (s, j % n),
        (s, (j + 1) % n),
        (1 - s, (j + q) % n),
        (1 - s, (j + q + 1) % n),
    )


def faces_at_vertex(p: int, q: int, r: int, m: int) -> tuple[Face, Face, Face, Face]:
    """The four face-quadrants (NE, NW, SE, SW) around vertex (r, m).

    The strip above row r is strip r; the strip below is strip 1-r, where
    the vertex appears as a top corner shifted by q columns.
    """
    n = 2 * p
    return (
        (r, m % n),
        (r, (m - 1) % n),
        (1 - r, (m - q) % n),
        (1 - r, (m - q - 1) % n),
    )


def on_first_slope_curve(r: int, m: int) -> bool:
    """Membership parity table: row 0 even columns and row 1 odd columns."""
    return (m % 2 == 0) if r == 0 else (m % 2 == 1)


def face_index(p: int, s: int, j: int) -> int:
    return s * 2 * p + (j % (2 * p))


def face_annulus(s: int, j: int) -> int:
    """Which slope annulus a face lies in: 0 when s + j is even, else 1.

    Stacking a face onto the one above it (F(s, j) -> F(1-s, j+q))
    preserves this parity because q is odd.
    """
    return (s + j) % 2


# ---------------------------------------------------------------------------
# Knot trace
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Arc:
    """One straight arc of the knot trace, stored as a lifted segment."""

    start: tuple[Eps, Eps]
    end: tuple[Eps, Eps]
    direction: tuple[Fraction, Fraction]  # unnormalized, (1,0)/( -1,0)/(+-q,+-p)
    kind: str  # "h" horizontal, "s" slope


@dataclass(frozen=True)
class KnotTrace:
    """The closed 4-arc trace, plus the cyclic basepoint visit order.

    `visits` holds the four basepoint positions in walk order starting at
    the top-line w.
    """

    arcs: tuple[Arc, ...]
    visits: tuple[tuple[Eps, Eps], ...]


def _basepoint_positions(half: Fraction = Fraction(1, 2)) -> dict[str, tuple[Eps, Eps]]:
    one = Fraction(1)
    return {
        "top_left": (EPS, Eps(one) - EPS),
        "top_right": (Eps(half) + EPS, Eps(one) - EPS),
        "bottom_left": (EPS, Eps(half) - EPS),
        "bottom_right": (Eps(half) + EPS, Eps(half) - EPS),
    }


def _turn_right(d_old: tuple[Fraction, Fraction], candidates) -> tuple[Fraction, Fraction]:
    """The candidate direction clockwise from d_old (negative cross product)."""
    for d in candidates:
        if d_old[0] * d[1] - d_old[1] * d[0] < 0:
            return d
    raise TraceBroken("no clockwise turn available")


def trace_knot(p: int, q: int) -> KnotTrace:
    """Walk the trace: start eastward along the top line, turn right at
    every basepoint, and require closure after exactly four arcs.

    Each horizontal hop moves 1/2 in x; each slope hop moves (q/2, p/2)
    along the travel direction, because the slope line through a
    basepoint meets exactly one other basepoint, half a period away.
    """
    pos_names = _basepoint_positions()
    positions = {v: k for k, v in pos_names.items()}
    half = Fraction(1, 2)
    start = pos_names["top_left"]
    pos = start
    direction: tuple[Fraction, Fraction] = (Fraction(1), Fraction(0))
    arcs: list[Arc] = []
    visits: list[tuple[Eps, Eps]] = [pos]
    for step in range(4):
        if step > 0:
            if arcs[-1].kind == "h":
                cands = [(Fraction(q), Fraction(p)), (Fraction(-q), Fraction(-p))]
            else:
                cands = [(Fraction(1), Fraction(0)), (Fraction(-1), Fraction(0))]
            direction = _turn_right(arcs[-1].direction, cands)
        if direction[1] == 0:
            delta = (direction[0] * half, Fraction(0))
            kind = "h"
        else:
            # The slope line through a basepoint meets exactly one other
            # basepoint, half a period away: scale so |delta_y| = 1/2.
            t = half / p
            delta = (direction[0] * t, direction[1] * t)
            kind = "s"
        end = (pos[0] + delta[0], pos[1] + delta[1])
        arcs.append(Arc(start=pos, end=end, direction=direction, kind=kind))
        wrapped = (mod1(end[0]), mod1(end[1]))
        if wrapped not in positions:
            raise TraceBroken(f"arc {step} does not land on a basepoint")
        pos = wrapped
        if step < 3:
            visits.append(pos)
    if pos != start:
        raise TraceBroken("walk does not close after four arcs")
    # Lifted total displacement must vanish (the lift is a closed parallelogram).
    disp = (sum((a.end[0] - a.start[0] for a in arcs), Eps(Fraction(0))),
            sum((a.end[1] - a.start[1] for a in arcs), Eps(Fraction(0))))
    if disp[0].a != 0 or disp[0].b != 0 or disp[1].a != 0 or disp[1].b != 0:
        raise TraceBroken("lifted trace has nonzero total displacement")
    return KnotTrace(arcs=tuple(arcs), visits=tuple(visits))


# ---------------------------------------------------------------------------
# The diagram
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GridDiagram:
    """Immutable diagram: parameters, basepoint faces, involution, trace."""

    p: int
    q: int
    basepoints: dict[str, Face]  # labels w1, z1, w2, z2
    trace: KnotTrace

    @property
    def ncols(self) -> int:
        return 2 * self.p

    @property
    def nfaces(self) -> int:
        return 4 * self.p

    def face_idx(self, s: int, j: int) -> int:
        return face_index(self.p, s, j)

    def involution(self, v: Vertex) -> Vertex:
        """180-degree rotation about a basepoint face center, as a vertex map.

        All four basepoint-face centers give the same map:
        (r, m) -> (1 - r, 1 - q - m mod 2p).
        """
        r, m = v
        return (1 - r, (1 - self.q - m) % self.ncols)

    def involution_face(self, f: Face) -> Face:
        s, j = f
        return (s, (-2 * self.q - j) % self.ncols)

    def basepoint_mult(self, domain) -> dict[str, int]:
        return {
            label: int(domain[self.face_idx(*f)])
            for label, f in self.basepoints.items()
        }


def locate_face(p: int, q: int, point: tuple[Eps, Eps]) -> Face:
    """Exact point location of a generic point in the face decomposition.

    Subtract the slope offset accumulated since the strip floor; the
    remaining x determines the start column.
    """
    x, y = point
    ym = mod1(y)
    s = 0 if ym < Eps(Fraction(1, 2)) else 1
    floor_h = Fraction(s, 2)
    x0 = x - (ym - floor_h) * Fraction(q, p)
    j = grid_floor(mod1(x0), 2 * p) % (2 * p)
    return (s, j)


def assign_basepoints(p: int, q: int, trace: KnotTrace) -> dict[str, Face]:
    """Label the four basepoints so the trace alternates correctly.

    The top line is fixed: w at x = e, z at x = 1/2 + e.  The bottom pair
    is then forced: horizontal arcs must run w -> z and slope arcs z -> w,
    and the slope pairing (each slope line holds one top and one bottom
    basepoint) leaves exactly one consistent choice.
    """
    pos_of = _basepoint_positions()
    label_at = {pos_of["top_left"]: "w1", pos_of["top_right"]: "z1"}
    ok_options = []
    for option in (("w2", "z2"), ("z2", "w2")):
        cand = dict(label_at)
        cand[pos_of["bottom_left"]] = option[0]
        cand[pos_of["bottom_right"]] = option[1]
        good = True
        for i, arc in enumerate(trace.arcs):
            src_w = cand[trace.visits[i]].startswith("w")
            dst_w = cand[trace.visits[(i + 1) % 4]].startswith("w")
            if arc.kind == "h" and not (src_w and not dst_w):
                good = False
            if arc.kind == "s" and not (not src_w and dst_w):
                good = False
        if good:
            ok_options.append(cand)
    if len(ok_options) != 1:
        raise TraceBroken(
            f"{len(ok_options)} alternating labelings, expected exactly 1")
    labeling = ok_options[0]
    return {label: locate_face(p, q, point) for point, label in labeling.items()}


def build_diagram(params: TwoBridgeParams) -> GridDiagram:
    """Construct the full diagram: trace the knot, then label basepoints."""
    p, q = params.p, params.q
    trace = trace_knot(p, q)
    basepoints = assign_basepoints(p, q, trace)
    diagram = GridDiagram(p=p, q=q, basepoints=basepoints, trace=trace)
    expected = {
        "w1": (1, (-q) % (2 * p)),
        "z1": (1, (p - q) % (2 * p)),
        "w2": (0, (-q) % (2 * p)),
        "z2": (0, (p - q) % (2 * p)),
    }
    if basepoints != expected:
        raise TraceBroken(f"basepoint faces {basepoints} != derived {expected}")
    return diagram


# ---------------------------------------------------------------------------
# Trace crossings (winding-number infrastructure)
# ---------------------------------------------------------------------------

def crossings_with_horizontal(trace: KnotTrace, h: Fraction) -> list[tuple[Eps, int]]:
    """All transversal crossings of the trace with the line y = h (mod 1).

    Returns (x mod 1, sign) pairs; sign is +1 where the arc heads upward.
    Only slope arcs can cross: horizontal arcs sit at heights offset by
    the infinitesimal.
    """
    out: list[tuple[Eps, int]] = []
    for arc in trace.arcs:
        if arc.kind != "s":
            continue
        dy = arc.direction[1]
        y0, y1 = arc.start[1], arc.end[1]
        lo, hi = (y0, y1) if y0 < y1 else (y1, y0)
        k = math.floor(lo.a - h) - 1
        while True:
            yc = Eps(h + k)
            if yc > hi:
                break
            if lo < yc < hi:
                t_num = yc - y0  # rational + eps parts
                x = arc.start[0] + Eps(t_num.a * Fraction(arc.direction[0], dy),
                                       t_num.b * Fraction(arc.direction[0], dy))
                out.append((mod1(x), 1 if dy > 0 else -1))
            k += 1
    return out


def crossings_with_vertical_segment(trace: KnotTrace, c: Fraction) -> int:
    """Net signed crossings of the segment {x = c, 0 < y < 1/2} (on the
    torus) with the trace; sign +1 where the arc heads left-to-right of
    the upward path (positive determinant with (0,1))."""
    total = 0
    half = Fraction(1, 2)
    for arc in trace.arcs:
        dx, dy = arc.direction
        if arc.kind == "h":
            # y constant = a - e; in window iff its mod-1 value is below 1/2.
            y = mod1(arc.start[1])
            if not (Eps(Fraction(0)) < y < Eps(half)):
                continue
            x0, x1 = arc.start[0], arc.end[0]
            lo, hi = (x0, x1) if x0 < x1 else (x1, x0)
            k = math.floor(lo.a - c) - 1
            while True:
                xc = Eps(c + k)
                if xc > hi:
                    break
                if lo < xc < hi:
                    total += 1 if (0 * dy - 1 * dx) > 0 else -1
                k += 1
        else:
            x0, x1 = arc.start[0], arc.end[0]
            lo, hi = (x0, x1) if x0 < x1 else (x1, x0)
            k = math.floor(lo.a - c) - 1
            while True:
                xc = Eps(c + k)
                if xc > hi:
                    break
                if lo < xc < hi:
                    t = xc - x0
                    y = arc.start[1] + Eps(t.a * Fraction(dy, dx), t.b * Fraction(dy, dx))
                    ym = mod1(y)
                    if Eps(Fraction(0)) < ym < Eps(half):
                        total += 1 if (0 * dy - 1 * dx) > 0 else -1
                k += 1
    return total


def winding_numbers(diagram: GridDiagram, hop_column: int = 0) -> tuple[list[int], list[int]]:
    """Relative winding function at every vertex, pinned to 0 at (row 0,
    column `hop_column`).

    Walking east along a row, the value jumps by the signed crossing
    count with the trace; rows are tied together by a vertical hop at
    `hop_column`.  The function is path-independent because the trace is
    nullhomologous, which the closure checks here enforce.
    """
    p = diagram.p
    n = 2 * p
    rows: list[list[int]] = []
    deltas_by_row = []
    for r, h in ((0, Fraction(0)), (1, Fraction(1, 2))):
        deltas = [0] * n
        for x, sign in crossings_with_horizontal(diagram.trace, h):
            m = grid_floor(x, n) % n
            # path direction (1,0): contribution -sign(det((arc up?)..)):
            # det((1,0),(dx,dy)) = dy, so east walk adds +1 at up-crossings.
            deltas[m] += sign
        deltas_by_row.append(deltas)
        if sum(deltas) != 0:
            raise TraceBroken(f"row {r} winding does not close (net {sum(deltas)})")
    hop = crossings_with_vertical_segment(diagram.trace, Fraction(hop_column, n))
    row0 = [0] * n
    acc = 0
    for m in range(hop_column, hop_column + n - 1):
        acc += deltas_by_row[0][(m) % n]
        row0[(m + 1) % n] = acc
    base1 = row0[hop_column % n] + hop
    row1 = [0] * n
    row1[hop_column % n] = base1
    acc = base1
    for m in range(hop_column, hop_column + n - 1):
        acc += deltas_by_row[1][m % n]
        row1[(m + 1) % n] = acc
    # Re-pin so that (row 0, column 0) is always the zero reference.
    shift = row0[0]
    return [v - shift for v in row0], [v - shift for v in row1]


# ---------------------------------------------------------------------------
# Domains
# ---------------------------------------------------------------------------

def solve_domain(diagram: GridDiagram,
                 x: tuple[int, int],
                 y: tuple[int, int]) -> list[int] | None:
    """One integer domain whose horizontal boundary runs from x to y.

    x and y are generators given as (row-0 column, row-1 column).  The
    boundary condition prescribes, per row, the successive differences of
    the edge coefficients; faces are then propagated along each slope
    annulus.  The two annulus closure sums must agree and be divisible by
    p; otherwise no class exists (the generators lie in different spin-c
    sectors) and None is returned.
    """
    p, q = diagram.p, diagram.q
    n = 2 * p
    base_c = [[0] * n, [0] * n]
    for r in (0, 1):
        acc = 0
        for j in range(1, n):
            jump = (1 if y[r] == j else 0) - (1 if x[r] == j else 0)
            acc -= jump
            base_c[r][j] = acc
        # wrap consistency: one +1 and one -1 jump per row
        jump0 = (1 if y[r] == 0 else 0) - (1 if x[r] == 0 else 0)
        if base_c[r][n - 1] - jump0 != 0:
            raise AssertionError("row jumps do not balance")

    def cycle(j0: int) -> Iterator[tuple[int, int]]:
        r, j = 0, j0
        for _ in range(n):
            yield r, j
            r, j = 1 - r, (j - q) % n

    sums = []
    for j0 in (0, 1):
        sums.append(sum(base_c[r][j] for r, j in cycle(j0)))
    if sums[0] != sums[1] or sums[0] % p != 0:
        return None
    kappa = [0, -sums[0] // p]

    d = [0] * (4 * p)
    for j0 in (0, 1):
        val = 0
        for r, j in cycle(j0):
            d[face_index(p, r, j)] = val
            val -= base_c[r][j] + kappa[r]
    return d


def periodic_domain_basis(diagram: GridDiagram) -> list[list[int]]:
    """Basis of domains with vanishing boundary one-chain.

    Edge coefficients vanish iff the multiplicity is constant across
    every edge, which forces a globally constant vector; the basis is the
    all-ones domain.  Verified directly here.
    """
    p, q = diagram.p, diagram.q
    n = 2 * p
    ones = [1] * (4 * p)

    def boundary_is_zero(d: list[int]) -> bool:
        for r in range(2):
            for j in range(n):
                above = d[face_index(p, r, j)]
                below = d[face_index(p, 1 - r, (j - q) % n)]
                if above != below:
                    return False
        for s in range(2):
            for j in range(n):
                if d[face_index(p, s, j)] != d[face_index(p, s, (j - 1) % n)]:
                    return False
        return True

    if not boundary_is_zero(ones):
        raise UnexpectedPeriodicDomain("all-ones domain has nonzero boundary")
    # Any null-boundary domain is constant: crossing edges forces equality
    # face by face, and the face adjacency graph is connected.
    return [ones]


def point_measure(diagram: GridDiagram, domain, v: Vertex) -> Fraction:
    """Mean of the four quadrant multiplicities around a vertex."""
    total = sum(domain[diagram.face_idx(*f)]
                for f in faces_at_vertex(diagram.p, diagram.q, *v))
    return Fraction(total, 4)


def point_measure_x4(diagram: GridDiagram, domain, v: Vertex) -> int:
    return sum(domain[diagram.face_idx(*f)]
               for f in faces_at_vertex(diagram.p, diagram.q, *v))


def maslov_index(diagram: GridDiagram, domain,
                 x: tuple[int, int], y: tuple[int, int]) -> Fraction:
    """Index of a domain from x to y: the sum of averaged corner
    multiplicities at both generators (all faces are quadrilaterals, so
    there is no curvature term)."""
    total = 0
    for g in (x, y):
        total += point_measure_x4(diagram, domain, (0, g[0]))
        total += point_measure_x4(diagram, domain, (1, g[1]))
    return Fraction(total, 4)
