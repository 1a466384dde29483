"""Quadratic characters, Gauss sums, L-values at negative integers and the
signature bookkeeping for a discriminant form of prime order.

Exact quantities (characters, Bernoulli numbers, L-values, the fourth root
of unity tag) never touch floating point.  Gauss and Milgram sums are also
evaluated numerically, but only as verification against the closed forms.
"""

import cmath
import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import PreconditionError

NUMERIC_TOL = 1e-9


def is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    r = math.isqrt(n)
    f = 3
    while f <= r:
        if n % f == 0:
            return False
        f += 2
    return True


def _check_odd_prime(p):
    if not (isinstance(p, int) and p > 2 and is_prime(p)):
        raise PreconditionError(f"p must be an odd prime, got {p!r}")


def legendre_chi(n, p):
    """Legendre symbol (n/p) via Euler's criterion."""
    _check_odd_prime(p)
    r = n % p
    if r == 0:
        return 0
    return 1 if pow(r, (p - 1) // 2, p) == 1 else -1


def e(x):
    """``exp(2 pi i x)`` as a complex float."""
    return cmath.exp(2j * math.pi * x)


class FourthRoot(enum.Enum):
    """The constant ``eps_p``: 1 for p = 1 mod 4 and i for p = 3 mod 4."""

    ONE = "1"
    I = "i"

    @property
    def complex(self):
        return 1 + 0j if self is FourthRoot.ONE else 1j

    @classmethod
    def for_prime(cls, p):
        return cls.ONE if p % 4 == 1 else cls.I


@dataclass(frozen=True)
class PrimeDiscriminant:
    p: int

    def __post_init__(self):
        _check_odd_prime(self.p)

    @property
    def chi_table(self):
        return {n: legendre_chi(n, self.p) for n in range(self.p)}

    def __call__(self, n):
        return legendre_chi(n, self.p)


@dataclass(frozen=True)
class GaussSum:
    """Numeric value of ``sum_x e(alpha x^2 / p)`` next to its closed form
    ``sign * eps_p * sqrt(p)``."""

    p: int
    alpha: int
    numeric: complex
    sign: int
    eps_p: FourthRoot

    @property
    def closed_form(self):
        return self.sign * self.eps_p.complex * math.sqrt(self.p)

    @property
    def agrees(self):
        return abs(self.numeric - self.closed_form) < NUMERIC_TOL

    def describe(self):
        s = "" if self.sign == 1 else "-"
        root = "" if self.eps_p is FourthRoot.ONE else "i*"
        return f"{s}{root}sqrt({self.p})"


def quadratic_gauss_sum(alpha, p):
    _check_odd_prime(p)
    if alpha % p == 0:
        raise PreconditionError("alpha must be a unit modulo p")
    numeric = sum(e(alpha * x * x / p) for x in range(p))
    return GaussSum(p, alpha % p, numeric, legendre_chi(alpha, p), FourthRoot.for_prime(p))


_SIGNATURE_TABLE = {(1, 1): 0, (3, 1): 2, (1, -1): 4, (3, -1): 6}


def signature_mod8(p, epsilon):
    """r mod 8 for a lattice whose discriminant form has order p and type epsilon."""
    _check_odd_prime(p)
    if epsilon not in (1, -1):
        raise PreconditionError("epsilon must be +1 or -1")
    return _SIGNATURE_TABLE[(p % 4, epsilon)]


@dataclass(frozen=True)
class DiscriminantFormInfo:
    """The quadratic module F_p with ``q(x) = alpha x^2 / p``."""

    p: int
    alpha: int
    epsilon: int
    r_mod8: int
    delta: int
    eps_p: FourthRoot

    def q(self, gamma):
        """``q(gamma)`` as a Fraction in [0, 1)."""
        return Fraction(self.alpha * gamma * gamma % self.p, self.p)

    def bilinear(self, gamma, delta):
        return Fraction(2 * self.alpha * gamma * delta % self.p, self.p)

    def dual(self):
        """The discriminant form of L(-1): quadratic form negated."""
        return discriminant_form(self.p, alpha=-self.alpha)

    def to_json(self):
        return {"p": self.p, "alpha": self.alpha, "epsilon": self.epsilon,
                "r_mod8": self.r_mod8}


def least_nonresidue(p):
    for a in range(2, p):
        if legendre_chi(a, p) == -1:
            return a
    raise PreconditionError(f"no quadratic non-residue modulo {p}")


def discriminant_form(p, epsilon=None, alpha=None):
    """Build the discriminant form from ``alpha`` or from the type ``epsilon``.

    With only ``epsilon`` given, alpha is 1 for the square class and the least
    positive non-residue otherwise.
    """
    _check_odd_prime(p)
    if alpha is None:
        if epsilon not in (1, -1):
            raise PreconditionError("give alpha or epsilon = +1/-1")
        alpha = 1 if epsilon == 1 else least_nonresidue(p)
    alpha = alpha % p
    if alpha == 0:
        raise PreconditionError("alpha must be a unit modulo p")
    eps = legendre_chi(alpha, p)
    if epsilon is not None and epsilon != eps:
        raise PreconditionError(f"alpha={alpha} has type {eps}, not {epsilon}")
    r = signature_mod8(p, eps)
    return DiscriminantFormInfo(p, alpha, eps, r, legendre_chi(-1, p) * eps,
                                FourthRoot.for_prime(p))


def milgram_check(info):
    """Compare ``sum_gamma e(q(gamma))`` with ``sqrt(p) e(r/8)`` numerically."""
    lhs = sum(e(info.alpha * g * g / info.p) for g in range(info.p))
    rhs = math.sqrt(info.p) * e(info.r_mod8 / 8)
    return abs(lhs - rhs) < NUMERIC_TOL


def milgram_signature(p, epsilon):
    """Recover r mod 8 from Milgram's formula alone (no table lookup)."""
    info_alpha = 1 if epsilon == 1 else least_nonresidue(p)
    lhs = sum(e(info_alpha * g * g / p) for g in range(p)) / math.sqrt(p)
    hits = [r for r in range(8) if abs(lhs - e(r / 8)) < NUMERIC_TOL]
    if len(hits) != 1:
        raise PreconditionError(f"Milgram sum does not single out r mod 8: {lhs}")
    return hits[0]


# ---------------------------------------------------------------------------
# Bernoulli numbers and L(1 - kappa, chi_p)


@lru_cache(maxsize=None)
def bernoulli_numbers(n):
    """Tuple ``(B_0, ..., B_n)`` with B_1 = -1/2."""
    B = [Fraction(0)] * (n + 1)
    B[0] = Fraction(1)
    for m in range(1, n + 1):
        acc = Fraction(0)
        for k in range(m):
            acc += math.comb(m + 1, k) * B[k]
        B[m] = -acc / (m + 1)
    return tuple(B)


def bernoulli_polynomial(k, x):
    """``B_k(x) = sum_j C(k, j) B_j x^(k-j)`` evaluated exactly."""
    B = bernoulli_numbers(k)
    x = Fraction(x)
    return sum(math.comb(k, j) * B[j] * x ** (k - j) for j in range(k + 1))


def generalized_bernoulli(kappa, p):
    """``B_{kappa, chi_p} = p^(kappa-1) sum_{a=1}^{p} chi_p(a) B_kappa(a/p)``."""
    _check_odd_prime(p)
    total = sum(legendre_chi(a, p) * bernoulli_polynomial(kappa, Fraction(a, p))
                for a in range(1, p + 1))
    return p ** (kappa - 1) * total


@lru_cache(maxsize=None)
def l_value_1_minus_kappa(kappa, p):
    """Exact ``L(1 - kappa, chi_p) = -B_{kappa, chi_p} / kappa``."""
    if kappa < 2:
        raise PreconditionError("kappa must be at least 2")
    return -generalized_bernoulli(kappa, p) / kappa


def signature_table(primes=(5, 7)):
    """Rows ``(p mod 4, epsilon, r mod 8)`` of the r mod 8 table, each entry
    recovered from Milgram's formula for the representative primes."""
    rows = []
    for eps in (1, -1):
        for p in primes:
            rows.append((p % 4, eps, milgram_signature(p, eps)))
    return sorted(rows, key=lambda r: (-r[1], r[0]))
