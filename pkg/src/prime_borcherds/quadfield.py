"""Exact arithmetic in K = Q(sqrt(p)) for a prime p = 1 mod 4.

Elements are ``u + v*sqrt(p)`` with rational u, v.  "Positive" always refers
to the embedding sending sqrt(p) to the positive real root; the conjugate
``x'`` is the value at the other embedding.  The ring of integers is
``Z[(1 + sqrt(p))/2]`` and the inverse different is ``(1/sqrt(p)) O``.
"""

import logging
import math
from fractions import Fraction
from functools import lru_cache

from .characters import is_prime
from .errors import PreconditionError

log = logging.getLogger(__name__)

CLASS_NUMBER_ONE = (5, 13, 17)


def _check_p(p):
    if not (isinstance(p, int) and p % 4 == 1 and is_prime(p)):
        raise PreconditionError(f"p must be a prime congruent to 1 mod 4, got {p!r}")


class QFieldElem:
    """An element ``u + v sqrt(p)`` of Q(sqrt(p))."""

    __slots__ = ("p", "u", "v")

    def __init__(self, p, u=0, v=0):
        self.p = p
        self.u = Fraction(u)
        self.v = Fraction(v)

    def _coerce(self, other):
        if isinstance(other, QFieldElem):
            if other.p != self.p:
                raise PreconditionError(f"mixing Q(sqrt({self.p})) and Q(sqrt({other.p}))")
            return other
        if isinstance(other, (int, Fraction)):
            return QFieldElem(self.p, other, 0)
        return None

    @classmethod
    def sqrt_p(cls, p):
        return cls(p, 0, 1)

    # -- field operations ---------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QFieldElem(self.p, self.u + o.u, self.v + o.v)

    __radd__ = __add__

    def __neg__(self):
        return QFieldElem(self.p, -self.u, -self.v)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QFieldElem(self.p, self.u - o.u, self.v - o.v)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QFieldElem(self.p, self.u * o.u + self.p * self.v * o.v,
                          self.u * o.v + self.v * o.u)

    __rmul__ = __mul__

    def inverse(self):
        n = self.norm()
        if not n:
            raise ZeroDivisionError("inverse of zero in Q(sqrt(p))")
        c = self.conj()
        return QFieldElem(self.p, c.u / n, c.v / n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k):
        k = int(k)
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        out = QFieldElem(self.p, 1, 0)
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def conj(self):
        return QFieldElem(self.p, self.u, -self.v)

    def norm(self):
        return self.u * self.u - self.p * self.v * self.v

    def trace(self):
        return 2 * self.u

    # -- ordering in the fixed real embedding -------------------------
    def sign(self):
        """Exact sign of ``u + v sqrt(p)``."""
        su = (self.u > 0) - (self.u < 0)
        sv = (self.v > 0) - (self.v < 0)
        if su == sv or sv == 0:
            return su
        if su == 0:
            return sv
        # opposite signs: compare u^2 with p v^2
        d = self.u * self.u - self.p * self.v * self.v
        if d == 0:
            return 0
        return su if d > 0 else sv

    def sign_at(self, which):
        """Sign at embedding ``which`` (1 = sqrt(p) > 0, 2 = conjugate)."""
        return self.sign() if which == 1 else self.conj().sign()

    def is_totally_positive(self):
        return self.sign() > 0 and self.conj().sign() > 0

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __eq__(self, other):
        o = self._coerce(other) if not isinstance(other, QFieldElem) else other
        if o is None:
            return NotImplemented
        return self.p == o.p and self.u == o.u and self.v == o.v

    def __hash__(self):
        return hash((self.p, self.u, self.v))

    def __bool__(self):
        return bool(self.u) or bool(self.v)

    def __float__(self):
        return float(self.u) + float(self.v) * math.sqrt(self.p)

    def embeddings(self):
        return float(self), float(self.conj())

    # -- integrality --------------------------------------------------
    def is_integral(self):
        """Membership in O = Z[(1+sqrt p)/2]."""
        a, b = 2 * self.u, 2 * self.v
        return a.denominator == 1 and b.denominator == 1 and (a - b) % 2 == 0

    def in_inverse_different(self):
        return (self * QFieldElem.sqrt_p(self.p)).is_integral()

    def __repr__(self):
        return f"QFieldElem({self.p}, {self.u}, {self.v})"

    def __str__(self):
        if not self.v:
            return str(self.u)
        r = f"sqrt({self.p})"
        vs = "" if self.v == 1 else ("-" if self.v == -1 else f"{self.v}*")
        if not self.u:
            return f"{vs}{r}"
        sign = "+" if self.v > 0 else "-"
        av = abs(self.v)
        vs = "" if av == 1 else f"{av}*"
        return f"{self.u} {sign} {vs}{r}"

    def to_json(self):
        return {"u": str(self.u), "v": str(self.v)}

    @classmethod
    def from_json(cls, p, data):
        return cls(p, Fraction(str(data["u"])), Fraction(str(data["v"])))


def omega(p):
    """The integral basis element ``(1 + sqrt p)/2``."""
    return QFieldElem(p, Fraction(1, 2), Fraction(1, 2))


class CodiffElem(QFieldElem):
    """An element of the inverse different ``(1/sqrt p) O``."""

    __slots__ = ()

    def __init__(self, p, u=0, v=0):
        super().__init__(p, u, v)
        if not self.in_inverse_different():
            raise PreconditionError(f"{self} is not in the inverse different of Q(sqrt({p}))")

    @classmethod
    def of(cls, x):
        return cls(x.p, x.u, x.v)

    @classmethod
    def from_mu(cls, mu):
        """``mu / sqrt(p)`` for ``mu`` in O."""
        return cls.of(mu / QFieldElem.sqrt_p(mu.p))

    @classmethod
    def from_coords(cls, p, x, y):
        """Inverse of :meth:`coords`: the element with ``tr(nu) = x`` and ``tr(nu*omega) = y``."""
        return cls(p, Fraction(x, 2), Fraction(2 * y - x, 2 * p))

    def mu(self):
        return self * QFieldElem.sqrt_p(self.p)

    def coords(self):
        """Integer coordinates ``(tr(nu), tr(nu * omega))`` w.r.t. the trace-dual basis."""
        x = self.trace()
        y = (self * omega(self.p)).trace()
        return int(x), int(y)


def field_ops(p):
    """Bundle of the basic operations for quick interactive use."""
    return {
        "add": lambda a, b: a + b,
        "mul": lambda a, b: a * b,
        "conj": QFieldElem.conj,
        "norm": QFieldElem.norm,
        "trace": QFieldElem.trace,
        "compare_at_embedding": lambda x, which: x.sign_at(which),
    }


def compare_at_embedding(x, which):
    return x.sign_at(which)


# ---------------------------------------------------------------------------
# units


def continued_fraction_quadratic(P, Q, D, terms):
    """Partial quotients of ``(P + sqrt D)/Q``; requires ``Q | D - P^2``."""
    if (D - P * P) % Q:
        raise ValueError("Q must divide D - P^2")
    r = math.isqrt(D)
    out = []
    for _ in range(terms):
        a = (P + r) // Q if Q > 0 else (P + r + 1) // Q
        out.append(a)
        P = a * Q - P
        Q = (D - P * P) // Q
    return out


@lru_cache(maxsize=None)
def fundamental_unit(p):
    """Smallest unit > 1 of O, read off the continued fraction of ``(1+sqrt p)/2``.

    The first convergent h/k with ``N(h - k*omega) = +-1`` yields the unit
    ``h - k*omega'``.
    """
    _check_p(p)
    P, Q = 1, 2
    r = math.isqrt(p)
    h_prev, h = 1, None
    k_prev, k = 0, None
    c = (p - 1) // 4
    for _ in range(10 * p + 10):
        a = (P + r) // Q
        if h is None:
            h, k = a, 1
        else:
            h, h_prev = a * h + h_prev, h
            k, k_prev = a * k + k_prev, k
        N = h * h - h * k - c * k * k
        if N in (1, -1):
            eps = QFieldElem(p, Fraction(2 * h - k, 2), Fraction(k, 2))
            if eps.norm() != -1:
                raise PreconditionError(
                    f"fundamental unit of Q(sqrt({p})) has norm +1; prime discriminant forbids this")
            return eps
        P = a * Q - P
        Q = (p - P * P) // Q
    raise RuntimeError("continued fraction did not produce a unit")


def unit_square(p):
    return fundamental_unit(p) ** 2


# ---------------------------------------------------------------------------
# norm-constrained enumeration


def orbit_search_bound(p, m):
    """Largest ``b`` scanned when searching ``mu = (a + b sqrt p)/2`` with
    ``N(mu) = m`` in one fundamental domain of the eps0^2-action."""
    e2 = float(unit_square(p))
    return int(math.sqrt(m) * (e2 - 1 / e2) / math.sqrt(p)) + 2


def norm_orbit_mus(p, m):
    """Totally positive ``mu`` in O with ``N(mu) = m``, one per eps0^2-orbit.

    The domain is ``1 <= mu/mu' < eps0^4``.
    """
    _check_p(p)
    if m <= 0:
        raise PreconditionError("norm must be positive")
    e4 = unit_square(p) ** 2
    bmax = orbit_search_bound(p, m)
    log.debug("orbit search p=%d m=%d scans b <= %d", p, m, bmax)
    out = []
    for b in range(0, bmax + 1):
        a2 = 4 * m + p * b * b
        a = math.isqrt(a2)
        if a * a != a2 or (a - b) % 2:
            continue
        mu = QFieldElem(p, Fraction(a, 2), Fraction(b, 2))
        if (e4 * mu.conj() - mu).sign() > 0:
            out.append(mu)
    return out


def enumerate_norm_orbit_reps(p, n):
    """Representatives of the eps0^2-orbits of ``{lambda in d^-1 : lambda > 0, N(lambda) = n/p}``."""
    if n >= 0:
        raise PreconditionError("n must be negative")
    return [CodiffElem.from_mu(mu) for mu in norm_orbit_mus(p, -n)]


def is_ideal_norm(m, p):
    """True iff some ideal of O has norm m (element norms suffice: class number one)."""
    if p not in CLASS_NUMBER_ONE:
        raise PreconditionError(f"is_ideal_norm supports p in {CLASS_NUMBER_ONE} only")
    if m <= 0:
        raise PreconditionError("m must be positive")
    return bool(norm_orbit_mus(p, m))


def pairing(nu, direction):
    """``nu*d + nu'*d'`` for a field element direction d."""
    return (nu * direction).trace()


def codiff_enumerate_pairing_bounded(p, direction, bound, min_pnorm=0):
    """All nu in the inverse different with ``0 < tr(nu*d) <= bound`` and
    ``p*N(nu) >= min_pnorm``.

    With the default ``min_pnorm = 0`` this is the totally positive part.  A
    negative ``min_pnorm`` additionally admits the finitely many indefinite
    elements that satisfy both constraints.  Output is sorted by
    ``(pairing, u, v)``.
    """
    _check_p(p)
    if not direction.is_totally_positive():
        raise PreconditionError("direction must be totally positive")
    if min_pnorm > 0:
        raise PreconditionError("min_pnorm must be <= 0")
    bound = Fraction(bound)
    if bound <= 0:
        return []
    d1, d2 = direction.embeddings()
    C = float(-min_pnorm) / p * float(direction.norm())
    slack = math.sqrt(C)
    hi_x = float(bound) + slack
    lo1, hi1 = -slack / d1, hi_x / d1
    lo2, hi2 = -slack / d2, hi_x / d2
    sp = math.sqrt(p)
    b_lo, b_hi = math.floor(lo1 + lo2) - 1, math.ceil(hi1 + hi2) + 1
    a_lo, a_hi = math.floor(sp * (lo1 - hi2)) - 1, math.ceil(sp * (hi1 - lo2)) + 1
    log.debug("pairing search p=%d bound=%s box b=[%d,%d] a=[%d,%d]",
              p, bound, b_lo, b_hi, a_lo, a_hi)
    out = []
    for b in range(b_lo, b_hi + 1):
        for a in range(a_lo, a_hi + 1):
            if (a - b) % 2:
                continue
            nu = QFieldElem(p, Fraction(b, 2), Fraction(a, 2 * p))
            t = pairing(nu, direction)
            if not (0 < t <= bound):
                continue
            if p * nu.norm() < min_pnorm:
                continue
            out.append(CodiffElem.of(nu))
    out.sort(key=lambda x: (pairing(x, direction), x.u, x.v))
    return out
