"""Scalar modular forms for Gamma_0(p) with character chi_p.

Eisenstein series, the plus/minus splitting, the operator U_p, dimension
formulas, the principal-part reduction that produces the forms ``f_m`` of
weight 0, and the exact Fricke transforms used to check the U_p / W_p
characterization of the plus space.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import ceil

from . import kernels
from .characters import FourthRoot, is_prime, l_value_1_minus_kappa, legendre_chi
from .errors import ObstructionError, PreconditionError, TruncationError
from .series import (
    FracQSeries,
    divisor_sigma_table,
    euler_product,
    klein_j,
    rescale_variable,
    series_invert,
    weight_minus2_J,
)

HOLOMORPHY = ("nearly_holomorphic", "holomorphic", "cusp")


def s_mult(n, p):
    """Multiplicity s(n): 2 if p divides n, else 1."""
    return 2 if n % p == 0 else 1


def _check_sign_support(items, p, sign):
    for n, c in items:
        if c and legendre_chi(n, p) == -sign:
            return n
    return None


@dataclass(frozen=True)
class ScalarForm:
    """A q-expansion tagged as an element of A_k(p, chi_p).

    ``sign`` is +1/-1 for the plus/minus space, or None when unknown.  The
    series always lives on the integer exponent lattice.
    """

    p: int
    weight: int
    series: FracQSeries
    sign: int | None = None
    holomorphy: str = "nearly_holomorphic"

    def __post_init__(self):
        if self.sign not in (1, -1, None):
            raise PreconditionError("sign must be +1, -1 or None")
        if self.holomorphy not in HOLOMORPHY:
            raise PreconditionError(f"holomorphy must be one of {HOLOMORPHY}")
        object.__setattr__(self, "series", self.series.with_denominator(1))
        if self.sign is not None:
            bad = _check_sign_support(((int(e), c) for e, c in self.series.items()),
                                      self.p, self.sign)
            if bad is not None:
                raise PreconditionError(
                    f"coefficient at q^{bad} is nonzero but chi_{self.p}({bad}) = {-self.sign}")
        v = self.series.valuation()
        if self.holomorphy != "nearly_holomorphic" and v is not None:
            if v < 0:
                raise PreconditionError(f"{self.holomorphy} form has a pole")
            if self.holomorphy == "cusp" and v == 0:
                raise PreconditionError("cusp form has nonzero constant term")

    def __getitem__(self, n):
        return self.series[n]

    @property
    def truncation_order(self):
        return self.series.truncation_order

    @property
    def constant_term(self):
        return self.series[0]

    def principal_part(self):
        terms = {int(e): c for e, c in self.series.principal_part().items()}
        return PrincipalPart(self.p, self.sign if self.sign is not None else 1, terms)

    def with_series(self, series, **changes):
        kw = dict(p=self.p, weight=self.weight, series=series, sign=self.sign,
                  holomorphy=self.holomorphy)
        kw.update(changes)
        return ScalarForm(**kw)

    def to_json(self):
        return {
            "kind": "scalar_form",
            "header": {"p": self.p, "weight": self.weight, "sign": self.sign,
                       "holomorphy": self.holomorphy},
            "series": self.series.to_json(),
        }

    @classmethod
    def from_json(cls, data):
        try:
            h = data["header"]
            return cls(int(h["p"]), int(h["weight"]), FracQSeries.from_json(data["series"]),
                       h.get("sign"), h.get("holomorphy", "nearly_holomorphic"))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed scalar form object: {exc}") from None


@dataclass(frozen=True)
class PrincipalPart:
    """``sum_{n<0} a(n) q^n`` for a form in the ``sign`` space."""

    p: int
    sign: int
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for n, c in self.terms.items():
            n, c = int(n), Fraction(c)
            if n >= 0:
                raise PreconditionError("principal part exponents must be negative")
            if c:
                clean[n] = c
        bad = _check_sign_support(clean.items(), self.p, self.sign)
        if bad is not None:
            raise PreconditionError(
                f"a({bad}) must vanish: chi_{self.p}({bad}) = {-self.sign}")
        object.__setattr__(self, "terms", clean)

    def s(self, n):
        return s_mult(n, self.p)

    @property
    def depth(self):
        return -min(self.terms) if self.terms else 0

    def to_json(self):
        return {"kind": "principal_part", "p": self.p, "sign": self.sign,
                "terms": [[n, str(self.terms[n])] for n in sorted(self.terms)]}

    @classmethod
    def from_json(cls, data):
        try:
            return cls(int(data["p"]), int(data["sign"]),
                       {int(n): Fraction(str(c)) for n, c in data["terms"]})
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed principal part object: {exc}") from None


# ---------------------------------------------------------------------------
# Eisenstein series


def _ncoeffs(prec):
    prec = Fraction(prec)
    if prec <= 0:
        raise PreconditionError("precision must be positive")
    return ceil(prec)


def _divisor_sums(length, kappa, p, twist_cofactor):
    """``sum_{d|n} d^(kappa-1) chi(d or n/d)`` for 1 <= n < length."""
    out = [0] * length
    for d in range(1, length):
        w = d ** (kappa - 1)
        cd = legendre_chi(d, p)
        for m in range(d, length, d):
            out[m] += w * (legendre_chi(m // d, p) if twist_cofactor else cd)
    return out


def _eis_factor(kappa, p):
    L = l_value_1_minus_kappa(kappa, p)
    if L == 0:
        raise PreconditionError(f"L(1-{kappa}, chi_{p}) vanishes; no Eisenstein series")
    return 2 / L


def eisenstein_G(kappa, p, prec):
    """The Eisenstein series attached to the cusp infinity, constant term 1."""
    if kappa < 2:
        raise PreconditionError("kappa must be at least 2")
    c = _eis_factor(kappa, p)
    n = _ncoeffs(prec)
    sums = _divisor_sums(n, kappa, p, twist_cofactor=False)
    coeffs = [Fraction(1)] + [c * s for s in sums[1:]]
    return ScalarForm(p, kappa, FracQSeries.from_coefficients(coeffs[:n], truncation=prec),
                      None, "holomorphic")


def eisenstein_H(kappa, p, prec):
    """The Eisenstein series attached to the cusp 0 (no constant term)."""
    if kappa < 2:
        raise PreconditionError("kappa must be at least 2")
    n = _ncoeffs(prec)
    sums = _divisor_sums(n, kappa, p, twist_cofactor=True)
    return ScalarForm(p, kappa, FracQSeries.from_coefficients(sums[:n], truncation=prec),
                      None, "holomorphic")


def eisenstein_E_delta(kappa, delta, p, prec):
    """``E = 1 + sum B(n) q^n`` in the delta space of weight kappa."""
    if delta not in (1, -1):
        raise PreconditionError("delta must be +1 or -1")
    if kappa < 2:
        raise PreconditionError("kappa must be at least 2")
    c = _eis_factor(kappa, p)
    n = _ncoeffs(prec)
    a = _divisor_sums(n, kappa, p, twist_cofactor=False)
    b = _divisor_sums(n, kappa, p, twist_cofactor=True)
    coeffs = [Fraction(1)] + [c * (a[m] + delta * b[m]) for m in range(1, n)]
    return ScalarForm(p, kappa, FracQSeries.from_coefficients(coeffs[:n], truncation=prec),
                      delta, "holomorphic")


@lru_cache(maxsize=64)
def eisenstein_B(kappa, delta, p, count):
    """Tuple ``(1, B(1), ..., B(count-1))`` of Eisenstein coefficients."""
    e = eisenstein_E_delta(kappa, delta, p, count)
    return tuple(e.series[m] for m in range(count))


def eisenstein_E2_level(p, prec):
    """Weight 2 Eisenstein series for Gamma_0(p) with trivial character:
    ``1 + 24/(p-1) sum (sigma(n) - p sigma(n/p)) q^n``."""
    if not is_prime(p):
        raise PreconditionError("p must be prime")
    n = _ncoeffs(prec)
    sig = divisor_sigma_table(max(n, 2), 1)
    c = Fraction(24, p - 1)
    coeffs = [Fraction(1)]
    for m in range(1, n):
        t = sig[m] - (p * sig[m // p] if m % p == 0 else 0)
        coeffs.append(c * t)
    return FracQSeries.from_coefficients(coeffs, truncation=prec)


def eisenstein_E2_level5(prec):
    return eisenstein_E2_level(5, prec)


def eta_quotient(exponents, prec):
    """``prod_delta eta(delta*tau)^r_delta`` below ``q^prec``.

    ``exponents`` maps delta to r_delta.  Built from integer Euler products so
    that no rational arithmetic is involved.
    """
    prec = Fraction(prec)
    v = Fraction(sum(d * r for d, r in exponents.items()), 24)
    length = max(ceil(prec - v), 0)
    acc = [1] + [0] * (length - 1) if length else []
    for d, r in exponents.items():
        if not r or not length:
            continue
        base = [0] * length
        for k, c in enumerate(euler_product(ceil(length / d) + 1)):
            if k * d < length:
                base[k * d] = c
        if r < 0:
            base = kernels.inv_trunc_unit(base, length)
        for _ in range(abs(r)):
            acc = kernels.mul_trunc(acc, base, length)
    n = v.denominator
    terms = {v.numerator + n * k: c for k, c in enumerate(acc) if c}
    return FracQSeries(terms, n, prec)


# ---------------------------------------------------------------------------
# operators and space tests


def hecke_Up(f):
    """``f | U_p = p^(1-k/2) sum_{p | n} a(n) q^(n/p)`` on the integer lattice."""
    if f.weight % 2:
        raise PreconditionError("U_p normalization needs even weight")
    p = f.p
    scale = Fraction(p) ** (1 - f.weight // 2)
    s = f.series
    trunc = s.truncation_order / p
    terms = {}
    for e, c in s.items():
        if e.denominator == 1 and int(e) % p == 0:
            terms[int(e) // p] = c * scale
    hol = f.holomorphy if f.holomorphy != "cusp" else "holomorphic"
    return ScalarForm(p, f.weight, FracQSeries(terms, 1, trunc), None,
                      "nearly_holomorphic" if hol == "nearly_holomorphic" else hol)


def plus_space_sign_check(f, p=None):
    """+1 if all stored a(n) vanish on chi(n) = -1, -1 if they vanish on
    chi(n) = +1, otherwise ``"mixed"``.  The zero series reports +1."""
    if isinstance(f, ScalarForm):
        p, series = f.p, f.series
    else:
        series = f
        if p is None:
            raise PreconditionError("p is required for a bare series")
    chis = {legendre_chi(int(e), p) for e, c in series.items() if e.denominator == 1}
    if -1 not in chis:
        return 1
    if 1 not in chis:
        return -1
    return "mixed"


def split_plus_minus(f):
    """``(f+, f-)``: restrictions of f to chi(n) != -1 and chi(n) != +1."""
    p = f.p
    plus = f.series.restrict(lambda e: legendre_chi(int(e), p) != -1)
    minus = f.series.restrict(lambda e: legendre_chi(int(e), p) == -1)
    return f.with_series(plus, sign=None), f.with_series(minus, sign=None)


def dim_S2(p):
    """``dim S_2(p, chi_p) = 2 floor((p-5)/24)`` for primes p = 1 mod 4."""
    if not (is_prime(p) and p % 4 == 1):
        raise PreconditionError("dimension formula needs a prime p = 1 mod 4")
    return 2 * ((p - 5) // 24)


def dim_S2_plus(p):
    return dim_S2(p) // 2


# ---------------------------------------------------------------------------
# obstructions


@dataclass(frozen=True)
class ObstructionReport:
    ok: bool
    a0: Fraction
    pairings: tuple = ()


def obstruction_check(pp, cusp_basis=(), weight=0):
    """Pair a principal part against cusp forms of the dual weight.

    Returns whether every pairing ``sum s(n) a(n) b(-n)`` vanishes, together
    with the constant term ``a(0) = -1/2 sum s(n) a(n) B(-n)`` forced by the
    Eisenstein series of the dual weight and sign.
    """
    p = pp.p
    kappa = 2 - weight
    delta = legendre_chi(-1, p) * pp.sign
    pairings = []
    for g in cusp_basis:
        if g.p != p or g.weight != kappa or g.sign != delta or g.holomorphy != "cusp":
            raise PreconditionError(
                f"basis form must be a cusp form of weight {kappa}, sign {delta} for p={p}")
        total = Fraction(0)
        for n, a in pp.terms.items():
            total += s_mult(n, p) * a * g.series[-n]
        pairings.append(total)
    count = pp.depth + 1
    B = eisenstein_B(kappa, delta, p, count) if pp.terms else ()
    a0 = Fraction(0)
    for n, a in pp.terms.items():
        a0 -= Fraction(1, 2) * s_mult(n, p) * a * B[-n]
    return ObstructionReport(all(x == 0 for x in pairings), a0, tuple(pairings))


# ---------------------------------------------------------------------------
# weight 0 forms with prescribed principal part


def _pole(series):
    v = series.valuation()
    if v is None or v >= 0:
        return 0
    return int(-v)


def reduce_to_principal_part(generators, target, prec, cusp_basis=None):
    """Produce the form in A_0^sign(p, chi_p) whose principal part is ``target``.

    Generators are multiplied by powers of ``j(p*tau)`` to reach every needed
    pole order, then principal-part coefficients are eliminated from the
    deepest pole upwards.  Exact arithmetic means no pivoting tolerance.
    """
    p = target.p
    prec = Fraction(prec)
    if p % 4 == 1 and is_prime(p) and target.sign == 1:
        if dim_S2_plus(p) > 0:
            if cusp_basis is None:
                raise ObstructionError(
                    f"S_2^+({p}, chi_{p}) has dimension {dim_S2_plus(p)}; a cusp form basis is required")
            rep = obstruction_check(target, cusp_basis)
            if not rep.ok:
                raise ObstructionError(f"principal part is obstructed: pairings {rep.pairings}")
    gens = {}
    for g in generators:
        if g.p != p or g.weight != 0:
            raise PreconditionError("generators must be weight 0 forms of the same level")
        if g.sign is not None and g.sign != target.sign:
            raise PreconditionError("generator lies in the wrong plus/minus space")
        n0 = _pole(g.series)
        if n0 == 0:
            raise PreconditionError("generator has no pole")
        lead = g.series.leading_coefficient()
        gens.setdefault(n0, g.series.scale(1 / lead))
    depth = target.depth
    if depth == 0:
        raise PreconditionError("target principal part is empty")
    kmax = max((depth - n0) // p for n0 in gens if n0 <= depth) if any(
        n0 <= depth for n0 in gens) else 0
    jw = ceil((prec + depth) / p) + 2
    jp = rescale_variable(klein_j(jw), p)
    jpow = {0: FracQSeries.constant(1), 1: jp}
    for k in range(2, kmax + 1):
        jpow[k] = jpow[k - 1] * jp

    basis = {}

    def basis_for(n):
        if n in basis:
            return basis[n]
        best = None
        for n0 in gens:
            if n0 <= n and (n - n0) % p == 0 and (best is None or n0 > best):
                best = n0
        if best is None:
            return None
        k = (n - best) // p
        g = gens[best]
        if g.truncation_order < prec + p * k:
            raise TruncationError(
                f"generator with pole {best} known below q^{g.truncation_order}; "
                f"need q^{prec + p * k}")
        basis[n] = g * jpow[k] if k else g
        return basis[n]

    f = FracQSeries.zero()
    for n in range(depth, 0, -1):
        want = target.terms.get(-n, Fraction(0))
        c = want - f[-n]
        if not c:
            continue
        b = basis_for(n)
        if b is None:
            raise PreconditionError(f"pole order {n} is not reachable from the generators")
        f = f + b.scale(c)
    if f.truncation_order < prec:
        raise TruncationError(f"result only known below q^{f.truncation_order}")
    return ScalarForm(p, 0, f.truncate(prec), target.sign, "nearly_holomorphic")


def default_prec(m):
    return m + 25


@lru_cache(maxsize=16)
def _f1_series(prec):
    e2 = eisenstein_E2_level5(prec + 2)
    h2 = eta_quotient({5: 5, 1: -1}, prec + 2)
    return (e2 * series_invert(h2)).truncate(prec)


def construct_f1_p5(prec=None):
    """``f_1 = E2(level 5) / H_2`` with ``H_2 = eta(5 tau)^5 / eta(tau)``."""
    prec = Fraction(default_prec(1) if prec is None else prec)
    return ScalarForm(5, 0, _f1_series(prec), 1, "nearly_holomorphic")


@lru_cache(maxsize=16)
def _f4_series(prec):
    w = prec + 4
    f1 = _f1_series(w)
    g_over_h = eta_quotient({1: 6, 5: -6}, w - 1)
    f1cube = f1 ** 3
    f4 = g_over_h * (f1cube + f1 * 108) - f1cube * 9 + f1 * 1128
    return f4.truncate(prec)


def construct_f4_p5(prec=None):
    """``f_4 = G_2/H_2 (f_1^3 + 108 f_1) - 9 f_1^3 + 1128 f_1``."""
    prec = Fraction(default_prec(4) if prec is None else prec)
    return ScalarForm(5, 0, _f4_series(prec), 1, "nearly_holomorphic")


@lru_cache(maxsize=16)
def _f5_seed(prec):
    e2p = eisenstein_E_delta(2, 1, 5, prec + 5).series
    J5 = rescale_variable(weight_minus2_J(ceil(Fraction(prec + 10, 5)) + 1), 5)
    return (e2p * J5).scale(Fraction(1, 2)).truncate(prec)


def f5_product_seed(prec=None):
    """The raw product ``(1/2) E_2^+(tau) J(5 tau)`` before clearing lower poles."""
    prec = Fraction(default_prec(5) if prec is None else prec)
    return ScalarForm(5, 0, _f5_seed(prec), 1, "nearly_holomorphic")


@lru_cache(maxsize=16)
def _f5_series(prec):
    seed = ScalarForm(5, 0, _f5_seed(prec), 1)
    gens = [seed, construct_f4_p5(prec), construct_f1_p5(prec)]
    target = PrincipalPart(5, 1, {-5: Fraction(1, 2)})
    return reduce_to_principal_part(gens, target, prec).series


def construct_f5_p5(prec=None):
    """``(1/2) E_2^+ J(5 tau)`` with its q^-4 and q^-1 terms cleared by f_4 and f_1."""
    prec = Fraction(default_prec(5) if prec is None else prec)
    return ScalarForm(5, 0, _f5_series(prec), 1, "nearly_holomorphic")


@lru_cache(maxsize=8)
def _p5_generators(prec):
    return (construct_f1_p5(prec), construct_f4_p5(prec), construct_f5_p5(prec))


def fm_principal_part(m, p):
    return PrincipalPart(p, 1, {-m: Fraction(1, s_mult(m, p))})


def construct_fm_p5(m, prec=None):
    """The unique ``f_m`` in A_0^+(5, chi_5) with principal part ``q^-m / s(m)``."""
    m = int(m)
    if m <= 0:
        raise PreconditionError("m must be a positive integer")
    if legendre_chi(m, 5) == -1:
        raise PreconditionError(f"chi_5({m}) = -1: no form with principal part q^-{m}")
    prec = Fraction(default_prec(m) if prec is None else prec)
    if m == 1:
        return construct_f1_p5(prec)
    if m == 4:
        return construct_f4_p5(prec)
    if m == 5:
        return construct_f5_p5(prec)
    work = prec + 5 * ((m + 4) // 5) + 5
    gens = _p5_generators(work)
    return reduce_to_principal_part(gens, fm_principal_part(m, 5), prec)


def construct_fm(p, m, prec=None, seeds=None, cusp_basis=None):
    """``f_m`` for p = 5 from the built-in seeds, otherwise from user seeds."""
    if p == 5 and not seeds:
        return construct_fm_p5(m, prec)
    if legendre_chi(m, p) == -1:
        raise PreconditionError(f"chi_{p}({m}) = -1: no form with principal part q^-{m}")
    if not seeds:
        raise PreconditionError(f"p = {p} needs seed forms (only p = 5 is built in)")
    prec = Fraction(default_prec(m) if prec is None else prec)
    return reduce_to_principal_part(seeds, fm_principal_part(m, p), prec, cusp_basis)


# ---------------------------------------------------------------------------
# Fricke involution on the weight 2 building blocks


@dataclass(frozen=True)
class RootScalar:
    """``coeff * p^(half_power/2)``: enough to track the sqrt(p) factors exactly."""

    p: int
    coeff: Fraction
    half_power: int = 0

    def __mul__(self, other):
        return RootScalar(self.p, self.coeff * other.coeff, self.half_power + other.half_power)

    def __truediv__(self, other):
        return RootScalar(self.p, self.coeff / other.coeff, self.half_power - other.half_power)

    def rational(self):
        if self.half_power % 2:
            raise PreconditionError("value is an odd power of sqrt(p)")
        return self.coeff * Fraction(self.p) ** (self.half_power // 2)


def fricke_eta_quotient(p, r1, rp):
    """Slash ``eta(tau)^r1 eta(p tau)^rp`` with W_p.

    Returns ``(scalar, (rp, r1))``: the image is ``scalar`` times the eta
    quotient with the two exponents swapped.
    """
    if (r1 + rp) % 2:
        raise PreconditionError("odd weight eta quotient")
    k = (r1 + rp) // 2
    if k % 2:
        raise PreconditionError("only even weights are supported")
    sign = -1 if (k // 2) % 2 else 1
    return RootScalar(p, Fraction(sign), r1 - k), (rp, r1)


def fricke_E2_level(p):
    """The level p weight 2 Eisenstein series is an eigenform of W_p with eigenvalue -1."""
    return RootScalar(p, Fraction(-1), 0)


def up_wp_identity_f1(order):
    """Both sides of ``f | U_p = eps * eps_p * sqrt(p) * f | W_p`` for f = f_1, p = 5.

    The right side is assembled from the exact W_5 images of the level 5
    weight 2 Eisenstein series and of ``H_2 = eta(5 tau)^5 / eta(tau)``:
    ``f_1 | W_5 = (E2 | W_5) / (H_2 | W_5)``.
    """
    p = 5
    order = Fraction(order)
    f1 = construct_f1_p5(p * order + 1)
    lhs = hecke_Up(f1).series.truncate(order)
    c_e2 = fricke_E2_level(p)
    c_h2, swapped = fricke_eta_quotient(p, -1, 5)
    image = eta_quotient({1: swapped[0], p: swapped[1]}, order + 2)
    eps, eps_p = 1, FourthRoot.for_prime(p)
    if eps_p is not FourthRoot.ONE:
        raise PreconditionError("only p = 1 mod 4 keeps the identity rational")
    factor = (RootScalar(p, Fraction(eps), 1) * c_e2 / c_h2).rational()
    e2 = eisenstein_E2_level(p, order + 2)
    rhs = (e2 * series_invert(image)).scale(factor).truncate(order)
    return lhs, rhs


def clear_caches():
    """Drop memoized expansions (used to time constructions from a cold start)."""
    for fn in (_f1_series, _f4_series, _f5_seed, _f5_series, _p5_generators, eisenstein_B):
        fn.cache_clear()
