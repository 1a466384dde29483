"""Weyl chambers, Weyl vectors and formal Fourier expansions of Borcherds
products on the Hilbert modular surface of Q(sqrt(p)).

A point of the positive quadrant is a pair ``(y1, y2)`` of field elements,
read in the positive embedding.  For a wall vector lambda (``lambda > 0``,
``N(lambda) < 0``) the linear form ``lambda*y1 + lambda'*y2`` is evaluated as
the field element ``lambda*y1 + conj(lambda)*y2``, so every sign test is exact.

Walls of one norm come in orbits ``lambda0 * E^k`` with ``E = eps0^2``.  Along
an orbit the linear form is strictly increasing in k, so a point is located by
the unique k with a sign change; two points lie in the same chamber iff they
produce the same k for every orbit.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce

from . import kernels
from .errors import BorcherdsError, PreconditionError, TruncationError
from .forms import ObstructionReport, ScalarForm, obstruction_check, plus_space_sign_check, s_mult
from .quadfield import (
    CodiffElem,
    QFieldElem,
    codiff_enumerate_pairing_bounded,
    enumerate_norm_orbit_reps,
    fundamental_unit,
    omega,
    pairing,
    unit_square,
)

__all__ = [
    "ObstructionReport", "obstruction_check", "walls_for", "WeylChamber", "weyl_chamber_of",
    "R_set", "WeylVector", "weyl_vector", "HilbertExpansion", "product_expansion",
    "lift_metadata", "integrality_normalize", "required_truncation", "default_grading_direction",
    "standard_basepoint",
]

log = logging.getLogger(__name__)


def _elem(p, x):
    if isinstance(x, QFieldElem):
        if x.p != p:
            raise PreconditionError("field element belongs to a different field")
        return QFieldElem(p, x.u, x.v)
    return QFieldElem(p, Fraction(x), 0)


def _wall_value(lam, y1, y2):
    return lam * y1 + lam.conj() * y2


def _poles(f):
    """``{n: a(n)}`` for n < 0 with a(n) != 0."""
    return {int(e): c for e, c in f.series.principal_part().items()}


def _bracket(lam0, y1, y2):
    """The k with ``g(k) < 0 < g(k+1)`` for ``g(k) = wall value of lam0*E^k``."""
    E = unit_square(lam0.p)
    a = float(lam0) * float(y1)
    b = -float(lam0.conj()) * float(y2)
    k = math.floor(math.log(b / a) / (2 * math.log(float(E)))) if a > 0 and b > 0 else 0

    def g(j):
        return _wall_value(lam0 * E ** j, y1, y2).sign()

    while True:
        s = g(k)
        if s == 0:
            raise PreconditionError(f"point lies on the wall of {lam0 * E ** k}")
        if s > 0:
            k -= 1
            continue
        s1 = g(k + 1)
        if s1 == 0:
            raise PreconditionError(f"point lies on the wall of {lam0 * E ** (k + 1)}")
        if s1 < 0:
            k += 1
            continue
        return k


def _orbit_table(p, poles):
    return {n: tuple(enumerate_norm_orbit_reps(p, n)) for n in sorted(poles)}


def walls_for(f, basepoint=None, reach=1):
    """Wall vectors lambda (``lambda > 0``, ``N(lambda) = n/p``) for the poles of f.

    Each orbit is infinite; this lists ``lambda0 * E^k`` for k within ``reach``
    of the two walls bracketing ``basepoint`` (or of k = 0 without one).
    """
    p = f.p
    E = unit_square(p)
    if basepoint is not None:
        y1, y2 = (_elem(p, y) for y in basepoint)
    out = []
    for n, reps in _orbit_table(p, _poles(f)).items():
        for lam0 in reps:
            k0 = _bracket(lam0, y1, y2) if basepoint is not None else 0
            for k in range(k0 - reach, k0 + reach + 2):
                out.append(CodiffElem.of(lam0 * E ** k))
    out.sort(key=lambda x: (float(x), x.u, x.v))
    return out


def standard_basepoint(p):
    """``(-eps0', eps0)``: the imaginary parts of the point used to name the chamber of f_1."""
    e0 = fundamental_unit(p)
    return (-e0.conj(), e0)


@dataclass(frozen=True)
class WeylChamber:
    """A chamber of the positive quadrant cut out by the walls of one form."""

    p: int
    interior_point: tuple
    orbit_reps: dict = field(default_factory=dict)
    brackets: dict = field(default_factory=dict)

    @property
    def walls(self):
        """The walls adjacent to the interior point, one pair per orbit."""
        E = unit_square(self.p)
        out = []
        for (n, i), k in sorted(self.brackets.items()):
            lam0 = self.orbit_reps[n][i]
            out.append(CodiffElem.of(lam0 * E ** k))
            out.append(CodiffElem.of(lam0 * E ** (k + 1)))
        return out

    @property
    def is_whole_space(self):
        return not self.brackets

    def signs(self):
        y1, y2 = self.interior_point
        return tuple(_wall_value(w, y1, y2).sign() for w in self.walls)

    def contains(self, point):
        y1, y2 = (_elem(self.p, y) for y in point)
        if y1.sign() <= 0 or y2.sign() <= 0:
            return False
        for (n, i), k in self.brackets.items():
            try:
                if _bracket(self.orbit_reps[n][i], y1, y2) != k:
                    return False
            except PreconditionError:
                return False
        return True

    def contains_direction(self, d):
        """Whether the point ``(d, d')`` of a totally positive element lies inside."""
        return d.is_totally_positive() and self.contains((d, d.conj()))


def weyl_chamber_of(f, basepoint):
    p = f.p
    y1, y2 = (_elem(p, y) for y in basepoint)
    if y1.sign() <= 0 or y2.sign() <= 0:
        raise PreconditionError("basepoint must have positive coordinates")
    reps = _orbit_table(p, _poles(f))
    reps = {n: r for n, r in reps.items() if r}
    brackets = {}
    for n, rs in reps.items():
        for i, lam0 in enumerate(rs):
            brackets[(n, i)] = _bracket(lam0, y1, y2)
    return WeylChamber(p, (y1, y2), reps, brackets)


def R_set(W, f, n):
    """``R(W, n)``: one lambda per orbit with the wall of lambda below and that
    of ``E*lambda`` above the chamber."""
    n = int(n)
    if n >= 0:
        raise PreconditionError("n must be negative")
    p = W.p
    E = unit_square(p)
    y1, y2 = W.interior_point
    reps = W.orbit_reps.get(n)
    if reps is None:
        reps = enumerate_norm_orbit_reps(p, n)
    out = []
    for i, lam0 in enumerate(reps):
        k = W.brackets.get((n, i))
        if k is None:
            k = _bracket(lam0, y1, y2)
        out.append(CodiffElem.of(lam0 * E ** k))
    return sorted(out, key=lambda x: (float(x), x.u, x.v))


@dataclass(frozen=True)
class WeylVector:
    rho: QFieldElem

    @property
    def rho_conj(self):
        return self.rho.conj()

    def to_json(self):
        return self.rho.to_json()


def weyl_vector(f, W):
    """``rho_W = (1/tr eps0) sum_n s(n) a(n) sum_{lambda in R(W,n)} eps0*lambda``."""
    p = f.p
    e0 = fundamental_unit(p)
    tr = e0.trace()
    total = QFieldElem(p, 0, 0)
    integral = True
    for n, a in sorted(_poles(f).items()):
        c = s_mult(n, p) * a
        integral = integral and c.denominator == 1
        for lam in R_set(W, f, n):
            total = total + e0 * lam * c
    if integral and not total.in_inverse_different():
        raise BorcherdsError(f"(tr eps0) * rho_W = {total} is not in the inverse different")
    return WeylVector(total / tr)


def lift_metadata(f):
    """Weight ``a(0)`` and divisor ``[(-n, s(n) a(n))]`` of the lift of f."""
    poles = _poles(f)
    div = [(-n, s_mult(n, f.p) * a) for n, a in sorted(poles.items(), reverse=True)]
    return {"weight": f.series[0], "divisor": div}


# ---------------------------------------------------------------------------
# product expansion


@dataclass(frozen=True)
class HilbertExpansion:
    """Formal expansion ``leading + sum_nu c(nu) X^nu`` of the product part.

    Indices are the unshifted exponents nu in the inverse different; the
    full Fourier expansion multiplies by ``X^rho`` with ``rho = weyl.rho``.
    """

    p: int
    weyl: WeylVector
    lattice_scale: Fraction
    terms: dict
    grading_direction: QFieldElem
    grading_bound: Fraction
    caveats: tuple = ()
    leading: Fraction = Fraction(1)

    def pairing(self, nu):
        return pairing(nu, self.grading_direction)

    def sorted_terms(self):
        d = self.grading_direction
        return sorted(self.terms.items(), key=lambda kv: (pairing(kv[0], d), kv[0].u, kv[0].v))

    def coefficient(self, nu):
        nu = _elem(self.p, nu)
        if not nu:
            return self.leading
        t = self.pairing(nu)
        if t > self.grading_bound:
            raise TruncationError(f"pairing {t} exceeds the grading bound {self.grading_bound}")
        return self.terms.get(nu, Fraction(0))

    def all_coefficients(self):
        return [self.leading] + [c for _, c in self.sorted_terms()]

    def coefficient_gcd(self):
        vals = [c for c in self.all_coefficients() if c]
        if not vals or any(c.denominator != 1 for c in vals):
            return None
        return reduce(math.gcd, (int(c) for c in vals))

    def scale(self, c):
        c = Fraction(c)
        return HilbertExpansion(self.p, self.weyl, self.lattice_scale,
                                {k: v * c for k, v in self.terms.items() if v * c},
                                self.grading_direction, self.grading_bound, self.caveats,
                                self.leading * c)

    def __eq__(self, other):
        if not isinstance(other, HilbertExpansion):
            return NotImplemented
        return (self.p == other.p and self.weyl == other.weyl and self.terms == other.terms
                and self.leading == other.leading and self.grading_bound == other.grading_bound
                and self.grading_direction == other.grading_direction)

    __hash__ = None

    def to_json(self):
        return {
            "kind": "hilbert_expansion",
            "header": {
                "p": self.p,
                "rho": self.weyl.rho.to_json(),
                "lattice_scale": str(self.lattice_scale),
                "grading_direction": self.grading_direction.to_json(),
                "grading_bound": str(self.grading_bound),
                "caveats": list(self.caveats),
                "leading": str(self.leading),
            },
            "terms": [{"nu": nu.to_json(), "c": str(c)} for nu, c in self.sorted_terms()],
        }

    @classmethod
    def from_json(cls, data):
        try:
            h = data["header"]
            p = int(h["p"])
            terms = {}
            for t in data["terms"]:
                terms[CodiffElem.from_json(p, t["nu"])] = Fraction(t["c"])
            return cls(p, WeylVector(QFieldElem.from_json(p, h["rho"])),
                       Fraction(h.get("lattice_scale", "1")), terms,
                       QFieldElem.from_json(p, h["grading_direction"]),
                       Fraction(h["grading_bound"]), tuple(h.get("caveats", ())),
                       Fraction(h.get("leading", "1")))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed hilbert expansion object: {exc}") from None


def _into_integers(d):
    """Smallest positive integer multiple of d that lies in O."""
    for k in range(1, 10 ** 6):
        x = d * k
        if x.is_integral():
            return x
    raise BorcherdsError("could not scale direction into O")


def default_grading_direction(W):
    """A totally positive element of O whose point ``(d, d')`` lies in W."""
    p = W.p
    if W.is_whole_space:
        return QFieldElem(p, 1, 0)
    y1, y2 = W.interior_point
    cands = []
    if y2 == y1.conj():
        cands.append(y1)
    if y2 == -y1.conj():
        cands.append(y1 * QFieldElem.sqrt_p(p))
    for d in cands:
        d = _into_integers(d)
        if W.contains_direction(d):
            return d
    w = omega(p)
    best = None
    for size in range(1, 200):
        for b in range(-size, size + 1):
            a = size - abs(b)
            for aa in {a, -a}:
                d = QFieldElem(p, aa, 0) + w * b
                if d.is_totally_positive() and W.contains_direction(d):
                    if best is None or (d.trace(), d.u, d.v) < (best.trace(), best.u, best.v):
                        best = d
        if best is not None:
            return best
    raise BorcherdsError("no small integral direction found inside the chamber")


def binomial_series(c, kmax):
    """Integer coefficients of ``(1 - x)^c`` up to ``x^kmax``."""
    out = [1]
    b = 1
    for k in range(1, kmax + 1):
        b = b * (c - k + 1) // k
        out.append(-b if k % 2 else b)
    return out


@dataclass(frozen=True)
class Factor:
    nu: CodiffElem
    pnorm: int
    exponent: int
    step: int


def product_factors(f, W, direction, bound):
    """The factors ``(1 - X^nu)^c`` with ``0 < tr(nu*d) <= bound`` and c != 0."""
    p = f.p
    poles = _poles(f)
    depth = -min(poles) if poles else 0
    nus = codiff_enumerate_pairing_bounded(p, direction, bound, min_pnorm=-depth)
    need = max((p * nu.norm() for nu in nus), default=0)
    if f.truncation_order <= need:
        raise TruncationError(
            f"f is known below q^{f.truncation_order}; the factors need a({need})")
    y1, y2 = W.interior_point
    out = []
    for nu in nus:
        n = int(p * nu.norm())
        a = f.series[n]
        if not a:
            continue
        c = s_mult(n, p) * a
        if c.denominator != 1:
            raise PreconditionError(f"s({n}) a({n}) = {c} is not an integer")
        if n < 0 and _wall_value(nu, y1, y2).sign() <= 0:
            raise BorcherdsError(f"{nu} has positive pairing with the direction but not with W")
        out.append(Factor(nu, n, int(c), int(pairing(nu, direction))))
    return out


def required_truncation(f, W, direction, bound):
    """Truncation f needs so that every factor exponent up to ``bound`` is known."""
    p = f.p
    d = default_grading_direction(W) if direction is None else _into_integers(_elem(p, direction))
    poles = _poles(f)
    depth = -min(poles) if poles else 0
    nus = codiff_enumerate_pairing_bounded(p, d, bound, min_pnorm=-depth)
    return int(max((p * nu.norm() for nu in nus), default=0)) + 1


def _column_radius(direction, bound, depth, use_x):
    p = direction.p
    d1, d2 = direction.embeddings()
    C = depth * float(direction.norm()) / p
    w = QFieldElem(p, 1, 0) if use_x else omega(p)
    w1, w2 = w.embeddings()
    r = float(bound) * (1 + math.sqrt(C)) * (abs(w1) / d1 + abs(w2) / d2)
    return int(math.ceil(r)) + 2


def product_expansion(f, W, grading_direction=None, grading_bound=10):
    """Expand ``prod (1 - X^nu)^{s(p N nu) a(p N nu)}`` over nu with ``(nu, W) > 0``
    up to ``tr(nu*d) <= grading_bound``.

    Factors are laid on a dense grid whose rows are the grading and whose
    columns are a second integer coordinate of nu.  Each factor is applied in
    place by the compiled kernel in a fixed order, so results are
    deterministic; only the per-factor binomial series are built in threads.
    """
    if not isinstance(f, ScalarForm):
        raise PreconditionError("f must be a ScalarForm")
    if f.weight != 0:
        raise PreconditionError("only weight 0 inputs are lifted")
    if plus_space_sign_check(f) != 1:
        raise PreconditionError("f is not in the plus space")
    p = f.p
    if W.p != p:
        raise PreconditionError("chamber and form have different p")
    B = Fraction(grading_bound)
    if B.denominator != 1 or B < 0:
        raise PreconditionError("grading bound must be a non-negative integer")
    B = int(B)
    if grading_direction is None:
        d = default_grading_direction(W)
    else:
        d = _elem(p, grading_direction)
        if not W.contains_direction(d):
            raise PreconditionError(f"grading direction {d} is not inside the chamber")
        d = _into_integers(d)
    rho = weyl_vector(f, W)
    factors = product_factors(f, W, d, B)
    caveats = ["window: grading <= %d" % B]
    if any(fa.exponent < 0 for fa in factors):
        caveats.append("region-restricted")

    # d = d1 + d2*omega; tr(nu*d) = d1*x + d2*y in the coordinates (x, y) of nu
    d2 = int(2 * d.v)
    d1 = int(d.u - d.v)
    use_x = d2 != 0
    poles = _poles(f)
    depth = -min(poles) if poles else 0
    R = _column_radius(d, B, depth, use_x)
    cols = 2 * R + 1
    rows = B + 1
    grid = [0] * (rows * cols)
    grid[R] = 1

    def series_for(fa):
        return binomial_series(fa.exponent, B // fa.step)

    workers = min(kernels.thread_cap(), max(len(factors), 1))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            coeff_lists = list(pool.map(series_for, factors))
    else:
        coeff_lists = [series_for(fa) for fa in factors]

    for fa, coeffs in zip(factors, coeff_lists):
        x, y = fa.nu.coords()
        ds = x if use_x else y
        if abs(ds) * (B // fa.step) > 2 * R:
            raise BorcherdsError("column window too small for factor %s" % fa.nu)
        kernels.apply_factor_2d(grid, rows, cols, fa.step, ds, coeffs)

    terms = {}
    for t in range(1, rows):
        base = t * cols
        for j in range(cols):
            c = grid[base + j]
            if not c:
                continue
            s = j - R
            if abs(s) >= R:
                raise BorcherdsError("expansion touches the column window edge")
            if use_x:
                x = s
                num = t - d1 * x
                if num % d2:
                    raise BorcherdsError("grid point off the lattice")
                y = num // d2
            else:
                y = s
                if t % d1:
                    raise BorcherdsError("grid point off the lattice")
                x = t // d1
            terms[CodiffElem.from_coords(p, x, y)] = Fraction(c)
    log.debug("product expansion p=%d bound=%d factors=%d grid=%dx%d",
              p, B, len(factors), rows, cols)
    return HilbertExpansion(p, rho, fundamental_unit(p).trace(), terms, d, Fraction(B),
                            tuple(caveats), Fraction(1))


def integrality_normalize(e):
    """``(c, c * e)`` with c the least positive integer clearing all denominators
    on the computed window.

    The gcd of the result is reported by ``coefficient_gcd()`` and is not
    divided out.
    """
    c = 1
    for v in e.all_coefficients():
        c = math.lcm(c, v.denominator)
    if c == 1:
        return 1, e
    out = e.scale(c)
    caveats = tuple(out.caveats) + ("window-only",)
    return c, HilbertExpansion(out.p, out.weyl, out.lattice_scale, out.terms,
                               out.grading_direction, out.grading_bound, caveats, out.leading)
