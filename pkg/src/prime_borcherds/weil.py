"""Vector valued forms for the Weil representation of a prime discriminant form.

The passage between scalar forms in the plus or minus space and vector
valued forms is pure re-indexing of Fourier coefficients, so it stays exact.
The Weil matrices themselves are numeric and only used for verification.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .characters import NUMERIC_TOL, DiscriminantFormInfo, discriminant_form, e
from .errors import PreconditionError
from .forms import ScalarForm
from .series import FracQSeries, rescale_variable


@dataclass(frozen=True)
class VectorForm:
    """``F = sum_gamma F_gamma e_gamma`` with components on the lattice (1/p)Z."""

    info: DiscriminantFormInfo
    weight: int
    components: tuple

    def __post_init__(self):
        p = self.info.p
        comps = tuple(c.with_denominator(p) for c in self.components)
        if len(comps) != p:
            raise PreconditionError(f"expected {p} components, got {len(comps)}")
        for g, comp in enumerate(comps):
            want = self.info.q(g)
            for ex, _ in comp.items():
                if (ex - want).denominator != 1:
                    raise PreconditionError(
                        f"component {g} has exponent {ex} outside Z + {want}")
        for g in range(1, p):
            if comps[g] != comps[p - g]:
                raise PreconditionError(f"components {g} and {p - g} differ")
        object.__setattr__(self, "components", comps)

    @property
    def p(self):
        return self.info.p

    def __getitem__(self, gamma):
        return self.components[gamma % self.p]

    def to_json(self):
        i = self.info
        return {
            "kind": "vector_form",
            "header": {"p": i.p, "alpha": i.alpha, "epsilon": i.epsilon,
                       "r_mod8": i.r_mod8, "weight": self.weight},
            "components": [c.to_json() for c in self.components],
        }

    @classmethod
    def from_json(cls, data):
        try:
            h = data["header"]
            info = discriminant_form(int(h["p"]), alpha=int(h["alpha"]))
            if "epsilon" in h and int(h["epsilon"]) != info.epsilon:
                raise ValueError("epsilon does not match alpha")
            comps = [FracQSeries.from_json(c) for c in data["components"]]
            return cls(info, int(h["weight"]), tuple(comps))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed vector form object: {exc}") from None


def _check_parity(weight, info):
    if (weight - info.r_mod8 // 2) % 2:
        raise PreconditionError(
            f"weight {weight} is not congruent to r/2 = {info.r_mod8 // 2} mod 2")


def lift_scalar_to_vector(f, info=None):
    """Send f in the epsilon space to the vector valued form with the same coefficients."""
    if info is None:
        if f.sign is None:
            raise PreconditionError("form has no plus/minus tag; pass a discriminant form")
        info = discriminant_form(f.p, epsilon=f.sign)
    p = info.p
    if f.p != p:
        raise PreconditionError(f"form has level {f.p}, discriminant form has order {p}")
    if f.sign != info.epsilon:
        raise PreconditionError(f"form sign {f.sign} differs from epsilon {info.epsilon}")
    _check_parity(f.weight, info)
    trunc = f.series.truncation_order / p
    buckets = {}
    for n, c in f.series.items():
        buckets.setdefault(int(n) % p, {})[int(n)] = c
    comps = []
    for g in range(p):
        res = info.alpha * g * g % p
        terms = buckets.get(res, {})
        if g == 0:
            terms = {n: 2 * c for n, c in terms.items()}
        comps.append(FracQSeries(terms, p, trunc))
    return VectorForm(info, f.weight, tuple(comps))


def project_vector_to_scalar(F):
    """``f(tau) = 1/2 sum_gamma F_gamma(p tau)``."""
    p = F.p
    total = FracQSeries.zero()
    for comp in F.components:
        total = total + rescale_variable(comp, p)
    total = total.scale(Fraction(1, 2))
    for ex, _ in total.items():
        if ex.denominator != 1:
            raise PreconditionError(f"non-integral exponent {ex} after projection")
    hol = "nearly_holomorphic"
    return ScalarForm(p, F.weight, total.with_denominator(1), F.info.epsilon, hol)


@dataclass(frozen=True)
class WeilRepMatrices:
    p: int
    r_mod8: int
    alpha: int
    rhoT: np.ndarray
    rhoS: np.ndarray

    def minus_identity(self):
        """``rho(-E) e_gamma = (-1)^(r/2) e_(-gamma)``."""
        p = self.p
        m = np.zeros((p, p), dtype=complex)
        sign = -1 if (self.r_mod8 // 2) % 2 else 1
        for g in range(p):
            m[(-g) % p, g] = sign
        return m


def weil_matrices(info):
    p, a, r = info.p, info.alpha, info.r_mod8
    T = np.diag([e(float(info.q(g))) for g in range(p)])
    pref = (1j) ** (-(r // 2)) / np.sqrt(p)
    S = np.empty((p, p), dtype=complex)
    for d in range(p):
        for g in range(p):
            S[d, g] = pref * e(-(2 * a * g * d % p) / p)
    return WeilRepMatrices(p, r, a, T, S)


@dataclass(frozen=True)
class WeilReport:
    p: int
    epsilon: int
    r_mod8: int
    s_squared_dev: float
    st_cubed_dev: float
    unitary_dev: float

    @property
    def ok(self):
        return max(self.s_squared_dev, self.st_cubed_dev, self.unitary_dev) < NUMERIC_TOL


def verify_weil_relations(mats, epsilon=None):
    S, T = mats.rhoS, mats.rhoT
    S2 = S @ S
    ST = S @ T
    d1 = float(np.max(np.abs(S2 - mats.minus_identity())))
    d2 = float(np.max(np.abs(ST @ ST @ ST - S2)))
    eye = np.eye(mats.p)
    d3 = float(max(np.max(np.abs(S @ S.conj().T - eye)), np.max(np.abs(T @ T.conj().T - eye))))
    return WeilReport(mats.p, epsilon, mats.r_mod8, d1, d2, d3)
