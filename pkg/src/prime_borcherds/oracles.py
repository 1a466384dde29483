"""Slow independent reference computations used to cross-check the fast paths.

Nothing here shares enumeration or convolution code with the production
modules: elements are found by plain box scans and products are formed by
multiplying dictionaries keyed by field elements.
"""

import math
from fractions import Fraction

from .characters import legendre_chi
from .quadfield import QFieldElem, fundamental_unit


def _s(n, p):
    return 2 if n % p == 0 else 1


def codiff_box_scan(p, direction, bound, min_pnorm=0):
    """Elements ``(a + b sqrt p)/(2 sqrt p)`` of the inverse different (a = b mod 2)
    with ``0 < tr(nu*d) <= bound`` and ``p*N(nu) >= min_pnorm``, by a plain scan."""
    d1, d2 = direction.embeddings()
    C = -min_pnorm / p
    # |nu| and |nu'| are both bounded once tr(nu d) and N(nu) are
    M = (bound + math.sqrt(bound * bound + 4 * C * d1 * d2)) / min(d1, d2) + 1
    sp = math.sqrt(p)
    A = int(2 * M * sp) + 2
    Bb = int(2 * M) + 2
    out = set()
    for a in range(-A, A + 1):
        for b in range(-Bb, Bb + 1):
            if (a - b) % 2:
                continue
            nu = QFieldElem(p, Fraction(b, 2), Fraction(a, 2 * p))
            t = (nu * direction).trace()
            if 0 < t <= bound and p * nu.norm() >= min_pnorm:
                out.add(nu)
    return out


def _mul(x, y, direction, bound):
    out = {}
    for k1, c1 in x.items():
        for k2, c2 in y.items():
            k = k1 + k2
            if (k * direction).trace() > bound:
                continue
            out[k] = out.get(k, 0) + c1 * c2
    return {k: c for k, c in out.items() if c}


def _power(base, e, direction, bound, one):
    result = dict(one)
    while e:
        if e & 1:
            result = _mul(result, base, direction, bound)
        e >>= 1
        if e:
            base = _mul(base, base, direction, bound)
    return result


def brute_force_product(f, basepoint, direction, bound):
    """``prod (1 - X^nu)^c`` over nu with positive wall value at ``basepoint``,
    truncated to ``tr(nu*d) <= bound``.  Returns ``{nu: c}`` including nu = 0."""
    p = f.p
    poles = [int(e) for e in f.series.principal_part()]
    depth = -min(poles) if poles else 0
    y1, y2 = basepoint
    zero = QFieldElem(p, 0, 0)
    one = {zero: 1}
    result = dict(one)
    for nu in sorted(codiff_box_scan(p, direction, bound, -depth), key=lambda x: (x.u, x.v)):
        n = p * nu.norm()
        assert n.denominator == 1
        n = int(n)
        a = f.series[n]
        if not a:
            continue
        c = _s(n, p) * a
        assert c.denominator == 1
        c = int(c)
        if n < 0 and (nu * y1 + nu.conj() * y2).sign() <= 0:
            continue
        t = (nu * direction).trace()
        if c > 0:
            fac = _power({zero: 1, nu: -1}, c, direction, bound, one)
        else:
            geo = {nu * k: 1 for k in range(int(bound // t) + 1)}
            fac = _power(geo, -c, direction, bound, one)
        result = _mul(result, fac, direction, bound)
    return result


def weyl_min_formula(f, y1, y2, orbit_span=60):
    """Numeric ``sum_n s(n) a(n) sum_lambda min(|lambda y1|, |lambda' y2|)`` over
    ``lambda > 0`` with ``N(lambda) = n/p``, walking each unit orbit far enough
    that the tail is negligible."""
    p = f.p
    E = float(fundamental_unit(p)) ** 2
    total = 0.0
    for e, a in f.series.principal_part().items():
        n = int(e)
        for lam in norm_orbit_reps_scan(p, n):
            l1, l2 = float(lam), float(lam.conj())
            for k in range(-orbit_span, orbit_span + 1):
                total += _s(n, p) * float(a) * min(abs(l1 * E ** k * y1), abs(l2 * E ** -k * y2))
    return total


def norm_orbit_reps_scan(p, n, height=400):
    """Orbit reps for ``N(lambda) = n/p`` via a plain scan of ``mu = (a + b sqrt p)/2``
    with ``N(mu) = -n``, ``mu > 0``, ``mu' > 0``, reduced into ``1 <= mu/mu' < E^2``."""
    m = -n
    E = fundamental_unit(p) ** 2
    E2 = E * E
    sq = QFieldElem(p, 0, 1)
    seen = []
    for b in range(-height, height + 1):
        a2 = 4 * m + p * b * b
        a = math.isqrt(a2)
        if a * a != a2 or (a - b) % 2:
            continue
        mu = QFieldElem(p, Fraction(a, 2), Fraction(b, 2))
        ratio = mu / mu.conj()
        if QFieldElem(p, 1, 0) <= ratio < E2:
            if mu not in seen:
                seen.append(mu)
    return [mu / sq for mu in seen]


def r_set_scan(p, n, y1, y2, span=30):
    """``R(W, n)`` by checking both sign conditions for every ``lambda0 * E^k``, |k| <= span."""
    e0 = fundamental_unit(p)
    E = e0 * e0
    Ec = E.conj()
    out = []
    for lam0 in norm_orbit_reps_scan(p, n):
        for k in range(-span, span + 1):
            lam = lam0 * E ** k
            c1 = (lam * y1 + lam.conj() * y2).sign() < 0
            c2 = (E * lam * y1 + Ec * lam.conj() * y2).sign() > 0
            if c1 and c2:
                out.append(lam)
    return out


def plus_space_by_character(coeffs, p, sign):
    """True iff every listed a(n) with chi_p(n) = -sign vanishes."""
    return all(not c or legendre_chi(n, p) != -sign for n, c in coeffs.items())
