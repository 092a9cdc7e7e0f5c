"""Independent ground truth: implicitization by iterated Sylvester resultants.

Deliberately a different algorithm from the matrix methods, so agreement is
meaningful evidence.  Dense classical resultants eliminate s and then t; the
result is cut down to its squarefree surface-supported part with derivative
gcds and gcds across elimination routes.  Also houses exact vanishing
verification and surface sampling.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import EliminationCollapse, SamplingExhausted
from .linalg import det_entries
from .polynomials import (Polynomial, ONE, ZERO, X_VARS, poly_gcd,
                          poly_power_root)
from .surfaces import prepare_parameterization


@dataclass(frozen=True)
class SurfaceSample:
    parameter: tuple        # (s, t) rational pair
    image: tuple            # projective 4-tuple (x1, x2, x3, x4)

    @property
    def image_affine(self):
        x1, x2, x3, x4 = self.image
        return (x1 / x4, x2 / x4, x3 / x4)


def _coeff_list(p: Polynomial, var: int):
    """Dense coefficient list of p in variable `var` (index 0=s, 1=t)."""
    if p.is_zero():
        return []
    lo = p.min_degree_in(var)
    hi = p.degree_in(var)
    assert lo >= 0, "resultant inputs must be translated to >= 0 exponents"
    out = [dict() for _ in range(hi + 1)]
    for e, c in p.terms.items():
        k = e[var]
        ne = e[:var] + (0,) + e[var + 1:]
        out[k][ne] = c
    return [Polynomial(d) for d in out]


def resultant_in(p: Polynomial, q: Polynomial, var) -> Polynomial:
    """Sylvester resultant of p and q with respect to s or t."""
    from .polynomials import VAR_INDEX
    idx = var if isinstance(var, int) else VAR_INDEX[var]
    if p.is_zero() or q.is_zero():
        return ZERO
    cp = _coeff_list(p, idx)
    cq = _coeff_list(q, idx)
    while cp and cp[-1].is_zero():
        cp.pop()
    while cq and cq[-1].is_zero():
        cq.pop()
    dp, dq = len(cp) - 1, len(cq) - 1
    if dp == 0 and dq == 0:
        return ONE
    if dp == 0:
        return cp[0] ** dq
    if dq == 0:
        return cq[0] ** dp
    n = dp + dq
    rows = []
    for i in range(dq):
        row = [ZERO] * n
        for k, c in enumerate(cp):
            row[i + dp - k] = c
        rows.append(row)
    for i in range(dp):
        row = [ZERO] * n
        for k, c in enumerate(cq):
            row[i + dq - k] = c
        rows.append(row)
    return det_entries(rows)


def _strip_param_monomial(p: Polynomial) -> Polynomial:
    """Drop the largest s^a*t^b monomial factor (harmless on the torus)."""
    if p.is_zero():
        return p
    ds, dt = p.monomial_content()
    return p.shift(-ds, -dt) if (ds or dt) else p


def _squarefree_part(p: Polynomial) -> Polynomial:
    """Full multivariate squarefree part over the X-variables."""
    if p.is_zero() or p.is_constant():
        return p.normalized()
    g = ZERO
    for var in X_VARS:
        if var in p.variables():
            d = p.derivative(var)
            g = poly_gcd(g, d) if not g.is_zero() else d.normalized()
    g = poly_gcd(p, g)
    if g.is_constant():
        return p.normalized()
    return p.exact_div(g).normalized()


def _sections_affine(xs):
    out = []
    for i in range(3):
        out.append(xs[i] - Polynomial.variable(f"X{i + 1}") * xs[3])
    return out


def _reparameterize(xs, rng):
    """Random unimodular monomial change of parameters, then retranslate."""
    while True:
        a, b, c, d = (rng.randint(-2, 2) for _ in range(4))
        if abs(a * d - b * c) == 1:
            break
    remapped = []
    for p in xs:
        acc = {}
        for e, coeff in p.terms.items():
            es, et = e[0], e[1]
            ne = (a * es + c * et, b * es + d * et) + e[2:]
            acc[ne] = acc.get(ne, Fraction(0)) + coeff
        remapped.append(Polynomial({k: v for k, v in acc.items() if v}))
    translated, _shift = prepare_parameterization(remapped)
    return translated


def elim_implicitize(xs, seed: int = 0) -> Polynomial:
    """Implicit equation by resultant elimination with factor stripping."""
    translated, _shift = prepare_parameterization(xs)
    rng = random.Random(seed)
    current = translated
    for attempt in range(5):
        fs = [_strip_param_monomial(f) for f in _sections_affine(current)]
        candidates = []
        for (i, j, k) in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
            r1 = _strip_param_monomial(resultant_in(fs[i], fs[j], "s"))
            r2 = _strip_param_monomial(resultant_in(fs[i], fs[k], "s"))
            if r1.is_zero() or r2.is_zero():
                continue
            r = resultant_in(r1, r2, "t")
            if r.is_zero() or r.is_constant():
                continue
            flat = _squarefree_part(r)
            if not flat.is_constant() and verify_vanishing(flat, current,
                                                           trials=0):
                candidates.append(flat)
            if len(candidates) >= 2:
                break
        if candidates:
            g = candidates[0]
            for c in candidates[1:]:
                g2 = poly_gcd(g, c)
                if not g2.is_constant():
                    g = g2
            root, _d = poly_power_root(g)
            if verify_vanishing(root, current, trials=4):
                return root.normalized()
        current = _reparameterize(translated, rng)
    raise EliminationCollapse(
        "iterated resultants vanished for every route and reparameterization")


def verify_vanishing(p: Polynomial, xs, trials: int = 4, seed: int = 17) -> bool:
    """Exact check that p(X -> parameterization) is identically zero.

    The optional probabilistic pre-check evaluates at `trials` random rational
    parameter points before the full symbolic substitution.  An affine input
    (no X4) is homogenized by clearing x4-denominators; the zero polynomial
    counts as vanishing.
    """
    if p.is_zero():
        return True
    if p.uses_params():
        return False
    uses_x4 = 5 in p.variables()
    degree = p.x_degree()
    if trials > 0:
        rng = random.Random(seed)
        found = 0
        for _ in range(trials * 10):
            if found >= trials:
                break
            s0 = Fraction(rng.randint(-40, 40), rng.randint(1, 12))
            t0 = Fraction(rng.randint(-40, 40), rng.randint(1, 12))
            vals = []
            ok = True
            for xp in xs:
                try:
                    vals.append(xp.evaluate({"s": s0, "t": t0}).constant_value())
                except ZeroDivisionError:
                    ok = False
                    break
            if not ok or vals[3] == 0:
                continue
            found += 1
            binding = {"X1": vals[0], "X2": vals[1], "X3": vals[2]}
            if uses_x4:
                binding["X4"] = vals[3]
                value = p.evaluate(binding)
            else:
                binding = {k: v / vals[3] for k, v in binding.items()}
                value = p.evaluate(binding)
            if not value.is_zero():
                return False
    # full symbolic substitution, clearing denominators for affine input
    total = ZERO
    for e, c in p.terms.items():
        e1, e2, e3, e4 = e[2], e[3], e[4], e[5]
        term = Polynomial.constant(c)
        for power, xp in zip((e1, e2, e3), xs):
            if power:
                term = term * xp ** power
        x4_power = e4 if uses_x4 else degree - (e1 + e2 + e3)
        if x4_power:
            term = term * xs[3] ** x4_power
        total = total + term
    return total.is_zero()


def sample_surface(xs, n: int, seed: int = 0):
    """n exact samples with x4 nonzero; deterministic under the seed."""
    if n < 1:
        raise ValueError("need n >= 1 samples")
    rng = random.Random(seed)
    out = []
    attempts = 0
    limit = 60 + 30 * n
    while len(out) < n:
        attempts += 1
        if attempts > limit:
            raise SamplingExhausted(
                f"only {len(out)} of {n} samples found in {limit} attempts")
        s0 = Fraction(rng.randint(-30, 30), rng.randint(1, 10))
        t0 = Fraction(rng.randint(-30, 30), rng.randint(1, 10))
        try:
            vals = tuple(xp.evaluate({"s": s0, "t": t0}).constant_value()
                         for xp in xs)
        except ZeroDivisionError:
            continue
        if vals[3] == 0 or all(v == 0 for v in vals):
            continue
        out.append(SurfaceSample(parameter=(s0, t0), image=vals))
    return out
