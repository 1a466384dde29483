"""Truncated Laurent series in q with exact rational coefficients.

A :class:`FracQSeries` lives on the exponent lattice ``(1/N)Z``: exponents are
stored as integer numerators over a per-series denominator ``N``.  Every
series carries an honest truncation order ``T``; coefficients at exponents
``>= T`` are unknown and asking for them raises :class:`TruncationError`.
Exact (non-truncated) series such as polynomials use ``T = math.inf``.

The classical building blocks (eta, Delta, j and the weight -2 form J) are
at the bottom of the module.
"""

from fractions import Fraction
from math import ceil, gcd, inf, lcm

from . import kernels
from .errors import PreconditionError, TruncationError

INF = inf


def _as_trunc(value):
    if value is None or value == inf:
        return inf
    return Fraction(value)


def _count_below(bound, start, step, den):
    """Number of k >= 0 with (start + step*k)/den < bound."""
    if bound == inf:
        raise ValueError("unbounded")
    x = (Fraction(bound) * den - start) / step
    return max(ceil(x), 0)


def _den_lcm(values):
    d = 1
    for c in values:
        d = lcm(d, c.denominator)
    return d


class FracQSeries:
    """Immutable truncated Laurent series ``sum c_e q^(e/N)``."""

    __slots__ = ("_n", "_terms", "_trunc", "_hash")

    def __init__(self, terms=None, exponent_denominator=1, truncation=inf):
        n = int(exponent_denominator)
        if n <= 0:
            raise ValueError("exponent_denominator must be positive")
        trunc = _as_trunc(truncation)
        clean = {}
        if terms:
            for e, c in terms.items():
                e = int(e)
                c = Fraction(c)
                if c and (trunc == inf or Fraction(e, n) < trunc):
                    clean[e] = c
        self._n = n
        self._terms = clean
        self._trunc = trunc
        self._hash = None

    @classmethod
    def _raw(cls, n, terms, trunc):
        obj = cls.__new__(cls)
        obj._n = n
        obj._terms = terms
        obj._trunc = trunc
        obj._hash = None
        return obj

    # -- constructors -------------------------------------------------
    @classmethod
    def from_coefficients(cls, coeffs, start=0, exponent_denominator=1, truncation=None):
        """Dense constructor: ``coeffs[i]`` sits at exponent ``(start + i)/N``.

        Without an explicit truncation the series is trusted exactly up to the
        end of the list.
        """
        if truncation is None:
            truncation = Fraction(start + len(coeffs), exponent_denominator)
        terms = {start + i: c for i, c in enumerate(coeffs) if c}
        return cls(terms, exponent_denominator, truncation)

    @classmethod
    def constant(cls, c, truncation=inf):
        return cls({0: c}, 1, truncation)

    @classmethod
    def monomial(cls, c, exponent, truncation=inf):
        e = Fraction(exponent)
        return cls({e.numerator: c}, e.denominator, truncation)

    @classmethod
    def zero(cls, truncation=inf, exponent_denominator=1):
        return cls({}, exponent_denominator, truncation)

    # -- inspection ---------------------------------------------------
    @property
    def exponent_denominator(self):
        return self._n

    @property
    def truncation_order(self):
        return self._trunc

    @property
    def is_exact(self):
        return self._trunc == inf

    @property
    def terms(self):
        """Copy of the numerator -> coefficient map."""
        return dict(self._terms)

    def items(self):
        """``(exponent, coefficient)`` pairs, exponents as Fractions, ascending."""
        n = self._n
        return [(Fraction(e, n), self._terms[e]) for e in sorted(self._terms)]

    def is_zero(self):
        return not self._terms

    def valuation(self):
        """Smallest exponent with a nonzero coefficient, or None."""
        if not self._terms:
            return None
        return Fraction(min(self._terms), self._n)

    def leading_coefficient(self):
        if not self._terms:
            raise PreconditionError("series is zero to its truncation order")
        return self._terms[min(self._terms)]

    def degree(self):
        if not self._terms:
            return None
        return Fraction(max(self._terms), self._n)

    def coefficient(self, exponent):
        e = Fraction(exponent)
        if self._trunc != inf and e >= self._trunc:
            raise TruncationError(
                f"coefficient of q^{e} requested but series is only known below q^{self._trunc}")
        num = e * self._n
        if num.denominator != 1:
            return Fraction(0)
        return self._terms.get(int(num), Fraction(0))

    __getitem__ = coefficient

    def principal_part(self):
        return {Fraction(e, self._n): c for e, c in self._terms.items() if e < 0}

    # -- lattice bookkeeping -----------------------------------------
    def with_denominator(self, n):
        """Re-express on the lattice ``(1/n)Z``; raises if an exponent does not fit."""
        n = int(n)
        if n == self._n:
            return self
        terms = {}
        for e, c in self._terms.items():
            num = Fraction(e * n, self._n)
            if num.denominator != 1:
                raise PreconditionError(
                    f"exponent {Fraction(e, self._n)} is not on the lattice (1/{n})Z")
            terms[int(num)] = c
        return FracQSeries._raw(n, terms, self._trunc)

    def _on(self, n):
        if n == self._n:
            return self._terms
        f = n // self._n
        return {e * f: c for e, c in self._terms.items()}

    def truncate(self, order):
        """Forget everything at or above ``order`` (which may not exceed the current one)."""
        order = _as_trunc(order)
        if order > self._trunc:
            raise TruncationError(
                f"cannot raise truncation from {self._trunc} to {order}")
        n = self._n
        terms = {e: c for e, c in self._terms.items() if order == inf or Fraction(e, n) < order}
        return FracQSeries._raw(n, terms, order)

    def restrict(self, predicate):
        """Keep only the terms whose (Fraction) exponent satisfies ``predicate``."""
        n = self._n
        terms = {e: c for e, c in self._terms.items() if predicate(Fraction(e, n))}
        return FracQSeries._raw(n, terms, self._trunc)

    # -- arithmetic ---------------------------------------------------
    def __neg__(self):
        return FracQSeries._raw(self._n, {e: -c for e, c in self._terms.items()}, self._trunc)

    def __add__(self, other):
        if not isinstance(other, FracQSeries):
            try:
                other = FracQSeries.constant(Fraction(other))
            except TypeError:
                return NotImplemented
        n = lcm(self._n, other._n)
        trunc = min(self._trunc, other._trunc)
        out = dict(self._on(n))
        for e, c in other._on(n).items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        if trunc != inf:
            out = {e: c for e, c in out.items() if Fraction(e, n) < trunc}
        return FracQSeries._raw(n, out, trunc)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, FracQSeries):
            try:
                other = FracQSeries.constant(Fraction(other))
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = Fraction(c)
        if not c:
            return FracQSeries._raw(self._n, {}, self._trunc)
        return FracQSeries._raw(self._n, {e: v * c for e, v in self._terms.items()}, self._trunc)

    def __mul__(self, other):
        if isinstance(other, FracQSeries):
            return series_mul(self, other)
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __rmul__(self, other):
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, FracQSeries):
            return series_mul(self, series_invert(other))
        return self.scale(1 / Fraction(other))

    def __pow__(self, e):
        return series_pow(self, e)

    # -- comparison ---------------------------------------------------
    def _key(self):
        n = self._n
        return (frozenset((Fraction(e, n), c) for e, c in self._terms.items()), self._trunc)

    def __eq__(self, other):
        if isinstance(other, FracQSeries):
            return self._key() == other._key()
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def agrees_with(self, other, order=None):
        """Coefficientwise equality below ``order`` (default: both truncations)."""
        bound = min(self._trunc, other._trunc)
        if order is not None:
            order = Fraction(order)
            if order > bound:
                raise TruncationError(f"cannot compare to order {order}; known below {bound}")
            bound = order
        return self.truncate(bound) == other.truncate(bound)

    def __repr__(self):
        return f"FracQSeries({format_series(self, max_terms=8)})"

    # -- serialization ------------------------------------------------
    def to_json(self):
        if self._trunc == inf:
            tn, td = 1, 0
        else:
            tn, td = self._trunc.numerator, self._trunc.denominator
        return {
            "exponent_denominator": self._n,
            "truncation_num": tn,
            "truncation_den": td,
            "terms": [[e, str(self._terms[e])] for e in sorted(self._terms)],
        }

    @classmethod
    def from_json(cls, data):
        try:
            n = int(data["exponent_denominator"])
            tn = int(data["truncation_num"])
            td = int(data["truncation_den"])
            raw = data["terms"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed series object: {exc}") from None
        trunc = inf if td == 0 else Fraction(tn, td)
        terms = {}
        for item in raw:
            e, c = item
            if int(e) in terms:
                raise ValueError(f"duplicate exponent {e}")
            terms[int(e)] = Fraction(str(c))
        return cls(terms, n, trunc)


def format_series(f, max_terms=None, var="q"):
    """Human-readable rendering, e.g. ``q^-1 + 5 + 11*q + O(q^15)``."""
    parts = []
    items = f.items()
    shown = items if max_terms is None else items[:max_terms]
    for e, c in shown:
        if e == 0:
            mono = str(c)
        else:
            ex = "" if e == 1 else f"^{e}"
            if c == 1:
                mono = f"{var}{ex}"
            elif c == -1:
                mono = f"-{var}{ex}"
            else:
                mono = f"{c}*{var}{ex}"
        parts.append(mono)
    if max_terms is not None and len(items) > max_terms:
        parts.append("...")
    if f.truncation_order != inf:
        parts.append(f"O({var}^{f.truncation_order})")
    if not parts:
        return "0"
    out = " + ".join(parts)
    return out.replace("+ -", "- ")


# ---------------------------------------------------------------------------
# dense conversion helpers shared by mul / invert


def _step(terms, base):
    g = 0
    for e in terms:
        g = gcd(g, e - base)
    return g


def _dense_ints(terms, base, step, length):
    """Integer list and common denominator for coefficients at base + step*k."""
    vals = []
    coeffs = []
    for k in range(length):
        c = terms.get(base + step * k)
        coeffs.append(c)
        if c is not None:
            vals.append(c)
    d = _den_lcm(vals)
    return [0 if c is None else (c * d).numerator for c in coeffs], d


def series_add(a, b):
    return a + b


def series_mul(a, b):
    """Cauchy product on the merged exponent lattice with honest truncation."""
    n = lcm(a._n, b._n)
    ta, tb = a._on(n), b._on(n)
    Ta, Tb = a._trunc, b._trunc
    if not ta and Ta == inf:
        return FracQSeries._raw(n, {}, inf)
    if not tb and Tb == inf:
        return FracQSeries._raw(n, {}, inf)
    va = Fraction(min(ta), n) if ta else Ta
    vb = Fraction(min(tb), n) if tb else Tb
    trunc = min(Ta + vb, Tb + va)
    if not ta or not tb:
        return FracQSeries._raw(n, {}, trunc)
    ea, eb = min(ta), min(tb)
    g = gcd(_step(ta, ea), _step(tb, eb))
    if g == 0:
        g = 1
    start = ea + eb
    if trunc == inf:
        length = (max(ta) - ea) // g + (max(tb) - eb) // g + 1
    else:
        length = _count_below(trunc, start, g, n)
    if length == 0:
        return FracQSeries._raw(n, {}, trunc)
    la = min((max(ta) - ea) // g + 1, length)
    lb = min((max(tb) - eb) // g + 1, length)
    A, da = _dense_ints(ta, ea, g, la)
    B, db = _dense_ints(tb, eb, g, lb)
    C = kernels.mul_trunc(A, B, length)
    d = da * db
    terms = {start + g * k: Fraction(c, d) for k, c in enumerate(C) if c}
    return FracQSeries._raw(n, terms, trunc)


def series_invert(a, order=None):
    """Multiplicative inverse, trusted below ``order``.

    The best possible order is ``T - 2v`` for a series with valuation ``v``
    known below ``T``; asking for more raises :class:`TruncationError`.  For
    exact non-monomial input an explicit ``order`` is required.
    """
    if not a._terms:
        raise PreconditionError("cannot invert a series that is zero to its truncation order")
    n = a._n
    e0 = min(a._terms)
    c0 = a._terms[e0]
    v = Fraction(e0, n)
    best = a._trunc - 2 * v if a._trunc != inf else inf
    if len(a._terms) == 1 and a._trunc == inf and order is None:
        return FracQSeries._raw(n, {-e0: 1 / c0}, inf)
    if order is None:
        if best == inf:
            raise PreconditionError("inverting an exact series needs an explicit order")
        order = best
    order = Fraction(order)
    if order > best:
        raise TruncationError(f"inverse is only determined below q^{best}, requested q^{order}")
    g = _step(a._terms, e0) or 1
    length = _count_below(order, -e0, g, n)
    u = {k: c / c0 for k, c in a._terms.items()}
    la = min((max(u) - e0) // g + 1, length) if length else 0
    if length == 0:
        return FracQSeries._raw(n, {}, order)
    U = [u.get(e0 + g * k, Fraction(0)) for k in range(la)]
    du = _den_lcm(U)
    if du == 1:
        B = kernels.inv_trunc_unit([int(x) for x in U], length)
        coeffs = [Fraction(b) for b in B]
    else:
        scaled = [int(U[k] * du ** k) for k in range(la)]
        B = kernels.inv_trunc_unit(scaled, length)
        coeffs = [Fraction(B[k], du ** k) for k in range(length)]
    inv0 = 1 / c0
    terms = {-e0 + g * k: c * inv0 for k, c in enumerate(coeffs) if c}
    return FracQSeries._raw(n, terms, order)


def series_pow(a, e, order=None):
    """Integer power by binary powering; negative powers invert first."""
    e = int(e)
    if e == 0:
        return FracQSeries.constant(1)
    if e < 0:
        a = series_invert(a, order)
        e = -e
    result = None
    base = a
    while e:
        if e & 1:
            result = base if result is None else series_mul(result, base)
        e >>= 1
        if e:
            base = series_mul(base, base)
    return result


def rescale_variable(a, s):
    """Substitute ``tau -> s*tau``: exponents scale by ``s``, coefficients stay."""
    s = int(s)
    if s <= 0:
        raise PreconditionError("rescaling factor must be a positive integer")
    trunc = a._trunc * s if a._trunc != inf else inf
    return FracQSeries._raw(a._n, {e * s: c for e, c in a._terms.items()}, trunc)


# ---------------------------------------------------------------------------
# classical series


def euler_product(length):
    """Integer coefficients of prod_{n>=1} (1 - q^n) below q^length (pentagonal numbers)."""
    out = [0] * max(length, 0)
    if length <= 0:
        return out
    m = 0
    while True:
        hit = False
        for k in ((m, -m) if m else (0,)):
            g = k * (3 * k - 1) // 2
            if g < length:
                out[g] += -1 if k % 2 else 1
                hit = True
        if not hit:
            break
        m += 1
    return out


def divisor_sigma_table(length, power):
    """``table[n] = sigma_power(n)`` for 1 <= n < length (table[0] = 0)."""
    tab = [0] * max(length, 1)
    for d in range(1, length):
        dp = d ** power
        for m in range(d, length, d):
            tab[m] += dp
    return tab


def _ncoeffs(prec, start):
    prec = Fraction(prec)
    if prec <= 0:
        raise PreconditionError("precision must be positive")
    return _count_below(prec, start, 1, 1)


def dedekind_eta(prec):
    """``q^(1/24) prod (1 - q^n)`` below ``q^prec``, on the lattice (1/24)Z."""
    prec = Fraction(prec)
    if prec <= 0:
        raise PreconditionError("precision must be positive")
    length = _count_below(prec, 1, 24, 24)
    coeffs = euler_product(length)
    terms = {1 + 24 * k: c for k, c in enumerate(coeffs) if c}
    return FracQSeries(terms, 24, prec)


def _delta_ints(length):
    """Coefficients of prod (1-q^n)^24 below q^length."""
    base = euler_product(length)
    acc = [1] + [0] * (length - 1)
    sq = base
    e = 24
    while e:
        if e & 1:
            acc = kernels.mul_trunc(acc, sq, length)
        e >>= 1
        if e:
            sq = kernels.mul_trunc(sq, sq, length)
    return acc


def discriminant_delta(prec):
    """``Delta = q prod (1 - q^n)^24`` below ``q^prec``."""
    length = _ncoeffs(prec, 1)
    ints = _delta_ints(length)
    return FracQSeries.from_coefficients(ints, start=1, truncation=Fraction(prec))


def eisenstein_level1(weight, prec):
    """Normalized level-one Eisenstein series E_4 or E_6."""
    consts = {4: 240, 6: -504}
    if weight not in consts:
        raise PreconditionError("only E_4 and E_6 are provided")
    length = _ncoeffs(prec, 0)
    sig = divisor_sigma_table(length, weight - 1)
    coeffs = [1] + [consts[weight] * sig[n] for n in range(1, length)]
    return FracQSeries.from_coefficients(coeffs, truncation=Fraction(prec))


def _over_delta(numer_ints, prec):
    # numer / Delta = q^-1 * numer * prod(1-q^n)^-24 ; exponents -1 + k < prec
    length = _ncoeffs(prec, -1)
    inv = kernels.inv_trunc_unit(_delta_ints(length), length)
    prod = kernels.mul_trunc(numer_ints, inv, length)
    return FracQSeries.from_coefficients(prod, start=-1, truncation=Fraction(prec))


def klein_j(prec):
    """``j = E_4^3 / Delta = q^-1 + 744 + 196884 q + ...`` below ``q^prec``."""
    length = _ncoeffs(prec, -1)
    sig = divisor_sigma_table(length, 3)
    e4 = [1] + [240 * sig[n] for n in range(1, length)]
    e4sq = kernels.mul_trunc(e4, e4, length)
    return _over_delta(kernels.mul_trunc(e4sq, e4, length), prec)


def weight_minus2_J(prec):
    """The weight -2 form ``E_4 E_6 / Delta = q^-1 - 240 + ...`` below ``q^prec``."""
    length = _ncoeffs(prec, -1)
    s3 = divisor_sigma_table(length, 3)
    s5 = divisor_sigma_table(length, 5)
    e4 = [1] + [240 * s3[n] for n in range(1, length)]
    e6 = [1] + [-504 * s5[n] for n in range(1, length)]
    return _over_delta(kernels.mul_trunc(e4, e6, length), prec)
