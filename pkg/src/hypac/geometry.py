"""Poincare disk primitives: ideal arcs, geodesics, Mobius maps, signed distance.

Points of the open unit disk are complex numbers with |z| < 1; the metric is
4|dz|^2/(1-|z|^2)^2 (curvature -1).  Ideal points on the circle at infinity
are stored as angles in [0, 2*pi).  A geodesic is either a diameter or the
arc of a circle meeting the unit circle orthogonally.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

TWO_PI = 2.0 * np.pi

# Angular comparisons near arc endpoints use this slack to avoid boundary
# flapping when data touch (common endpoints are legitimate).
ANGLE_TOL = 1e-12


def normalize_angle(theta: float) -> float:
    """Reduce an angle to [0, 2*pi)."""
    t = float(np.mod(theta, TWO_PI))
    return 0.0 if t == TWO_PI else t


def ideal_point(theta: float) -> complex:
    """Unit-circle point e^{i theta}."""
    return complex(np.cos(theta), np.sin(theta))


def hyperbolic_distance(z, w):
    """Distance 2*artanh |(z-w)/(1-conj(w) z)|; accepts arrays."""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    q = np.abs((z - w) / (1.0 - np.conj(w) * z))
    q = np.clip(q, 0.0, 1.0 - 1e-17)
    return 2.0 * np.arctanh(q)


@dataclass(frozen=True)
class IdealArc:
    """Open arc of the circle at infinity: angles (center-halfwidth, center+halfwidth)."""

    center: float
    halfwidth: float

    def __post_init__(self):
        if not 0.0 < self.halfwidth < np.pi:
            raise ValueError(f"arc halfwidth must lie in (0, pi), got {self.halfwidth}")
        object.__setattr__(self, "center", normalize_angle(self.center))

    @property
    def start(self) -> float:
        return normalize_angle(self.center - self.halfwidth)

    @property
    def end(self) -> float:
        return normalize_angle(self.center + self.halfwidth)

    def contains_angle(self, theta: float, tol: float = ANGLE_TOL) -> bool:
        d = np.mod(theta - self.start, TWO_PI)
        return tol < d < 2.0 * self.halfwidth - tol

    def rotated(self, phi: float) -> "IdealArc":
        return IdealArc(self.center + phi, self.halfwidth)


@dataclass(frozen=True)
class CapPair:
    """A spherical cap C+ together with the complementary cap C- (common boundary)."""

    plus: IdealArc

    @property
    def minus(self) -> IdealArc:
        return IdealArc(self.plus.center + np.pi, np.pi - self.plus.halfwidth)


@dataclass(frozen=True)
class Geodesic:
    """Geodesic with ideal endpoints at angles a, b.

    Orientation convention: the positive side is the region bounded by the
    arc running counterclockwise from a to b, so geodesic_of_cap puts the
    cap on the positive side and to_diameter_map sends the positive side to
    the upper half-disk.
    """

    a: float
    b: float

    def __post_init__(self):
        object.__setattr__(self, "a", normalize_angle(self.a))
        object.__setattr__(self, "b", normalize_angle(self.b))
        if abs(np.mod(self.a - self.b, TWO_PI)) < 1e-15:
            raise ValueError("geodesic endpoints must be distinct")

    def reversed(self) -> "Geodesic":
        return Geodesic(self.b, self.a)


@dataclass(frozen=True)
class MobiusMap:
    """Fractional-linear map z -> (az+b)/(cz+d), optionally after conjugating z.

    Instances produced by the constructors below preserve the unit disk.
    """

    a: complex
    b: complex
    c: complex
    d: complex
    conj: bool = False

    def apply(self, z):
        z = np.asarray(z, dtype=complex)
        if self.conj:
            z = np.conj(z)
        out = (self.a * z + self.b) / (self.c * z + self.d)
        return out if out.ndim else complex(out)

    def __call__(self, z):
        return self.apply(z)

    def compose(self, other: "MobiusMap") -> "MobiusMap":
        """self after other: (self.compose(other))(z) == self(other(z))."""
        oa, ob, oc, od = other.a, other.b, other.c, other.d
        if self.conj:
            oa, ob, oc, od = np.conj(oa), np.conj(ob), np.conj(oc), np.conj(od)
        return MobiusMap(
            self.a * oa + self.b * oc,
            self.a * ob + self.b * od,
            self.c * oa + self.d * oc,
            self.c * ob + self.d * od,
            conj=self.conj ^ other.conj,
        )

    def inverse(self) -> "MobiusMap":
        if not self.conj:
            return MobiusMap(self.d, -self.b, -self.c, self.a)
        return MobiusMap(
            np.conj(self.d), -np.conj(self.b), -np.conj(self.c), np.conj(self.a), conj=True
        )

    @classmethod
    def identity(cls) -> "MobiusMap":
        return cls(1.0, 0.0, 0.0, 1.0)

    @classmethod
    def rotation(cls, phi: float) -> "MobiusMap":
        return cls(np.exp(1j * phi), 0.0, 0.0, 1.0)

    @classmethod
    def disk_translation(cls, w: complex) -> "MobiusMap":
        """Isometry sending 0 to w: z -> (z + w)/(1 + conj(w) z)."""
        if abs(w) >= 1.0:
            raise ValueError("translation target must lie in the open disk")
        return cls(1.0, w, np.conj(w), 1.0)

    @classmethod
    def conjugation(cls) -> "MobiusMap":
        """Reflection across the real axis."""
        return cls(1.0, 0.0, 0.0, 1.0, conj=True)


def transform_geodesic(t: MobiusMap, g: Geodesic) -> Geodesic:
    """Image geodesic with orientation carried along (reflections flip a and b)."""
    ia = np.angle(t(ideal_point(g.a)))
    ib = np.angle(t(ideal_point(g.b)))
    if t.conj:
        ia, ib = ib, ia
    return Geodesic(ia, ib)


def geodesic_of_cap(c: CapPair) -> Geodesic:
    """Geodesic asymptotic to the cap boundary, positive side toward C+."""
    arc = c.plus
    return Geodesic(arc.center - arc.halfwidth, arc.center + arc.halfwidth)


def to_diameter_map(g: Geodesic) -> MobiusMap:
    """Disk isometry with T(a) = 1, T(b) = -1 and positive side mapped up.

    Built as a rotation, a real translation along the axis of symmetry, and a
    final quarter turn; the construction is smooth through the diameter case
    (no orthogonal-circle radius is ever formed).
    """
    delta = np.mod(g.a - g.b, TWO_PI)
    w = 0.5 * delta
    gamma = g.b + w
    x0 = np.tan(0.25 * np.pi - 0.5 * w)
    move = MobiusMap(1.0, -x0, -x0, 1.0)
    quarter = MobiusMap.rotation(-0.5 * np.pi)
    return quarter.compose(move).compose(MobiusMap.rotation(-gamma))


def signed_distance(p, g: Geodesic, t: MobiusMap | None = None):
    """Signed hyperbolic distance from p (|p|<1, array ok) to the geodesic.

    Positive on the positive side; satisfies sinh(d) = 2 Im(T p)/(1 - |T p|^2)
    for the diameter-normalizing map T.
    """
    if t is None:
        t = to_diameter_map(g)
    wp = t.apply(p)
    denom = 1.0 - np.abs(wp) ** 2
    with np.errstate(divide="ignore", over="ignore"):
        s = 2.0 * np.imag(wp) / denom
    return np.arcsinh(s)


def geodesic_circle(g: Geodesic):
    """Euclidean representative: ("diameter", angle) or ("arc", center, radius).

    The diameter branch is taken when the endpoints are antipodal within 1e-9.
    """
    delta = np.mod(g.a - g.b, TWO_PI)
    if abs(delta - np.pi) < 1e-9:
        return ("diameter", normalize_angle(g.a))
    w = 0.5 * delta
    gamma = g.b + w
    center = ideal_point(gamma) / np.cos(w)
    radius = abs(np.tan(w))
    return ("arc", center, radius)


def random_disk_mobius(rng: np.random.Generator, rmax: float = 0.9) -> MobiusMap:
    """Random holomorphic disk automorphism (testing helper)."""
    phi = rng.uniform(0.0, TWO_PI)
    r = rmax * np.sqrt(rng.uniform(0.0, 1.0))
    alpha = rng.uniform(0.0, TWO_PI)
    w = r * np.exp(1j * alpha)
    return MobiusMap.rotation(phi).compose(MobiusMap.disk_translation(w))


# ---------------------------------------------------------------------------
# Boundary data on the circle at infinity


def _arcs_overlap(a1: IdealArc, a2: IdealArc, tol: float = ANGLE_TOL) -> bool:
    gap = np.mod(a2.center - a1.center, TWO_PI)
    gap = min(gap, TWO_PI - gap)
    return gap < a1.halfwidth + a2.halfwidth - tol


@dataclass(frozen=True)
class BoundaryData:
    """Disjoint open sets Omega+ and Omega- on the circle, each a union of arcs."""

    omega_plus: tuple
    omega_minus: tuple

    def __init__(self, omega_plus, omega_minus):
        object.__setattr__(self, "omega_plus", tuple(omega_plus))
        object.__setattr__(self, "omega_minus", tuple(omega_minus))
        self._validate()

    def _validate(self):
        labeled = [("plus", i, a) for i, a in enumerate(self.omega_plus)]
        labeled += [("minus", i, a) for i, a in enumerate(self.omega_minus)]
        for k in range(len(labeled)):
            for m in range(k + 1, len(labeled)):
                s1, i1, a1 = labeled[k]
                s2, i2, a2 = labeled[m]
                if _arcs_overlap(a1, a2):
                    raise ValueError(
                        f"boundary arcs overlap: {s1}[{i1}] and {s2}[{i2}]"
                    )

    @property
    def arcs(self):
        return self.omega_plus + self.omega_minus

    def side_of_angle(self, theta: float) -> int:
        """+1 in Omega+, -1 in Omega-, 0 on the complement F."""
        for a in self.omega_plus:
            if a.contains_angle(theta):
                return 1
        for a in self.omega_minus:
            if a.contains_angle(theta):
                return -1
        return 0

    def side_of_angles(self, thetas):
        """Vectorized side_of_angle."""
        thetas = np.asarray(thetas, dtype=float)
        out = np.zeros(thetas.shape)
        for sign, arcs in ((1.0, self.omega_plus), (-1.0, self.omega_minus)):
            for a in arcs:
                d = np.mod(thetas - a.start, TWO_PI)
                inside = (d > ANGLE_TOL) & (d < 2.0 * a.halfwidth - ANGLE_TOL)
                out = np.where(inside, sign, out)
        return out

    def complement(self, tol: float = 1e-9):
        """Closed complement F as a list of (start, end) arcs; start == end marks a point."""
        arcs = sorted(self.arcs, key=lambda a: a.start)
        if not arcs:
            raise ValueError("no boundary data")
        pieces = []
        for k, a in enumerate(arcs):
            nxt = arcs[(k + 1) % len(arcs)]
            gap = np.mod(nxt.start - a.end, TWO_PI)
            if gap < tol:
                pieces.append((a.end, a.end))
            else:
                pieces.append((a.end, normalize_angle(a.end + gap)))
        return pieces

    def contact_points(self, tol: float = 1e-9):
        """Common endpoints of Omega+ and Omega- closures (the interface trace L)."""
        pts = []
        for p in self.omega_plus:
            for m in self.omega_minus:
                for cand in (p.start, p.end):
                    for other in (m.start, m.end):
                        if np.mod(cand - other, TWO_PI) < tol or np.mod(other - cand, TWO_PI) < tol:
                            if not any(abs(np.mod(cand - q, TWO_PI)) < tol or
                                       abs(np.mod(q - cand, TWO_PI)) < tol for q in pts):
                                pts.append(normalize_angle(cand))
        return sorted(pts)


# ---------------------------------------------------------------------------
# Geodesic convex hulls of closed ideal sets


@dataclass
class ConvexHull:
    """Intersection of the closed positive sides of the bounding geodesics."""

    bounding: list = field(default_factory=list)
    degenerate: bool = False
    _maps: list = field(default_factory=list, repr=False)

    def __post_init__(self):
        if not self._maps:
            self._maps = [to_diameter_map(g) for g in self.bounding]


def _as_closed_pieces(f_set):
    pieces = []
    for item in f_set:
        if np.isscalar(item):
            t = normalize_angle(float(item))
            pieces.append((t, t))
        else:
            s, e = item
            pieces.append((normalize_angle(float(s)), normalize_angle(float(e))))
    return pieces


def convex_hull(f_set) -> ConvexHull:
    """Hull of a closed ideal set given as angles and/or (start, end) closed arcs.

    Bounding geodesics join the endpoints of each maximal open gap of the
    complement, oriented with the hull on the positive side.
    """
    pieces = _as_closed_pieces(f_set)
    if not pieces:
        raise ValueError("empty ideal set")
    total = sum(np.mod(e - s, TWO_PI) for s, e in pieces)
    if total >= TWO_PI - 1e-12:
        return ConvexHull(bounding=[], degenerate=False)
    pieces.sort(key=lambda p: p[0])
    n_pts = sum(1 for s, e in pieces if s == e)
    degenerate = len(pieces) <= 2 and n_pts == len(pieces)
    if len(pieces) == 1 and pieces[0][0] == pieces[0][1]:
        raise ValueError("hull of a single ideal point has no interior")
    bounding = []
    for k, (s, e) in enumerate(pieces):
        nstart = pieces[(k + 1) % len(pieces)][0]
        gap = np.mod(nstart - e, TWO_PI)
        if gap > ANGLE_TOL:
            bounding.append(Geodesic(nstart, e))
    return ConvexHull(bounding=bounding, degenerate=degenerate)


def hull_contains(p, h: ConvexHull, slack: float = 0.0) -> bool:
    """True when p is on the inward side of every bounding geodesic, with slack."""
    for g, t in zip(h.bounding, h._maps):
        if signed_distance(p, g, t) < -slack:
            return False
    return True


def hull_outward_distance(p, h: ConvexHull):
    """Hyperbolic distance by which p violates the hull (0 inside); array ok."""
    p = np.asarray(p, dtype=complex)
    worst = np.full(p.shape, -np.inf)
    for g, t in zip(h.bounding, h._maps):
        worst = np.maximum(worst, -signed_distance(p, g, t))
    out = np.maximum(worst, 0.0)
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# Cones over ideal sets (n = 2: unions of Euclidean radii)


@dataclass(frozen=True)
class IdealCone:
    """Union of open rays from the origin to the listed ideal points."""

    rays: tuple

    def __init__(self, rays):
        object.__setattr__(self, "rays", tuple(normalize_angle(r) for r in rays))
        if not self.rays:
            raise ValueError("cone needs at least one ray")


def _distance_to_ray(p, theta: float, tol: float = 1e-10):
    """Hyperbolic distance from points p to the ray {tanh(s/2) e^{i theta}}.

    Golden-section over the arclength parameter; the distance is convex along
    the ray so the bracket [0, 2 d(0,p) + 1] always contains the minimum.
    """
    p = np.asarray(p, dtype=complex)
    direction = ideal_point(theta)
    d0 = hyperbolic_distance(p, 0.0)
    lo = np.zeros(p.shape)
    hi = 2.0 * d0 + 1.0

    def f(s):
        return hyperbolic_distance(p, np.tanh(0.5 * s) * direction)

    invphi = 0.5 * (np.sqrt(5.0) - 1.0)
    span = float(np.max(hi - lo)) if p.size else 0.0
    n_iter = max(1, int(np.ceil(np.log(max(span, 1.0) / tol) / -np.log(invphi))) + 2)
    c = hi - invphi * (hi - lo)
    d = lo + invphi * (hi - lo)
    fc, fd = f(c), f(d)
    for _ in range(n_iter):
        take_left = fc < fd
        hi = np.where(take_left, d, hi)
        lo = np.where(take_left, lo, c)
        c = hi - invphi * (hi - lo)
        d = lo + invphi * (hi - lo)
        fc, fd = f(c), f(d)
    out = f(0.5 * (lo + hi))
    return out if out.ndim else float(out)


def cone_signed_distance(p, cone: IdealCone, bd: BoundaryData):
    """Signed distance to K(L): positive over Omega+, negative over Omega-."""
    p_arr = np.atleast_1d(np.asarray(p, dtype=complex))
    d = np.full(p_arr.shape, np.inf)
    for theta in cone.rays:
        d = np.minimum(d, _distance_to_ray(p_arr, theta))
    signs = bd.side_of_angles(np.angle(p_arr))
    out = np.where(np.abs(p_arr) < 1e-15, 0.0, signs * d)
    return out if np.ndim(p) else float(out[0])


# ---------------------------------------------------------------------------
# Half-plane conversion (used by the blow-up checker only)


def halfplane_from_disk(z, p_angle: float):
    """Cayley map sending the ideal point e^{i p_angle} to 0 and the disk to Im > 0.

    Angles increase counterclockwise along the circle; their images increase
    along the positive real axis.
    """
    p = ideal_point(p_angle)
    z = np.asarray(z, dtype=complex)
    out = 1j * (p - z) / (p + z)
    return out if out.ndim else complex(out)


def disk_from_halfplane(w, p_angle: float):
    p = ideal_point(p_angle)
    w = np.asarray(w, dtype=complex)
    out = p * (1j - w) / (1j + w)
    return out if out.ndim else complex(out)


def geodesic_csv_row(g: Geodesic) -> str:
    """Serialization used by the CLI: endpoint angles and orientation flag."""
    return f"{g.a:.17g},{g.b:.17g},1"
