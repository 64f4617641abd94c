"""Rational functions on the character torus of a lattice X.

A :class:`TorusFraction` is a fraction whose numerator is a finite
combination of torus monomials e^x with :class:`~qtalg.scalars.Scalar`
coefficients (x may lie in one half of the lattice), and whose
denominator is a multiset of canonical binomials e^beta - c, with beta
a nonzero integer vector whose first nonzero coordinate is positive and
c a nonzero monomial scalar.  The X-part of a quantum torus is
commutative, so this is ordinary fraction arithmetic.

The binomial shape is closed under every operation used here — Weyl
substitutions and translation twists send binomials to unit multiples
of binomials, with the unit folded into the numerator — and it keeps
poles readable: the stored denominator is the pole divisor.

Fractions cancel on construction: a denominator binomial is dropped
whenever it divides the numerator exactly (classwise synthetic division
along beta).
"""

from __future__ import annotations

from fractions import Fraction as Q
from math import gcd

from .errors import PoleError
from .linalg import unimodular_completion
from .rootdata import LatticePair, WeylElement
from .scalars import Scalar

XKey = tuple[Q, ...]
# denominator binomial e^beta - c, with c stored by monomial data
Factor = tuple[tuple[int, ...], tuple[Q, int, int], Q]

_completion_cache: dict[tuple[int, ...], list[list[int]]] = {}


def _as_scalar(c) -> Scalar:
    return c if isinstance(c, Scalar) else Scalar.const(c)


def _xkey(x) -> XKey:
    return tuple(Q(v) for v in x)


def _factor_value(f: Factor) -> Scalar:
    (qe, te, ve), coeff = f[1], f[2]
    return Scalar.monomial(qexp=qe, texp=te, vexp=ve, coeff=coeff)


def _make_factor(beta, c: Scalar) -> Factor:
    beta = tuple(int(b) for b in beta)
    if not any(beta):
        raise ValueError("binomial direction must be nonzero")
    key, coeff = c.as_monomial()
    if coeff == 0:
        raise ValueError("binomial value must be nonzero")
    return beta, key, coeff


def _beta_coordinate(beta: tuple[int, ...]):
    """Primitive part, content and the dual row functional of beta, via a
    cached unimodular completion of beta/content."""
    content = gcd(*beta)
    prim = tuple(b // content for b in beta)
    if prim not in _completion_cache:
        u, _ = unimodular_completion(prim)
        _completion_cache[prim] = u
    row = _completion_cache[prim][0]
    return prim, content, row


def _scalar_frac_power(tau: Scalar, k: Q) -> Scalar:
    """tau^k for monomial tau; fractional k needs unit coefficient."""
    k = Q(k)
    if k.denominator == 1:
        return tau ** int(k)
    (qe, te, ve), coeff = tau.as_monomial()
    texp, vexp = te * k, ve * k
    if texp.denominator != 1 or vexp.denominator != 1 or coeff != 1:
        raise ValueError(f"cannot take power {k} of the monomial {tau}")
    return Scalar.monomial(qexp=qe * k, texp=int(texp), vexp=int(vexp))


class TorusFraction:
    """Rational function on the torus of X, with binomial denominator."""

    __slots__ = ("pair", "num", "factors")

    def __init__(self, pair: LatticePair, num: dict, factors=(), reduce: bool = True):
        self.pair = pair
        clean: dict[XKey, Scalar] = {}
        for x, c in num.items():
            c = _as_scalar(c)
            if not c.is_zero():
                clean[_xkey(x)] = c
        self.num = clean
        self.factors = tuple(sorted(factors))
        if reduce and self.factors:
            self._reduce()

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, pair: LatticePair) -> TorusFraction:
        return cls(pair, {})

    @classmethod
    def one(cls, pair: LatticePair) -> TorusFraction:
        return cls.monomial(pair, (0,) * pair.rank)

    @classmethod
    def monomial(cls, pair: LatticePair, x, coeff=1) -> TorusFraction:
        return cls(pair, {_xkey(x): _as_scalar(coeff)})

    @classmethod
    def from_scalar(cls, pair: LatticePair, c) -> TorusFraction:
        return cls.monomial(pair, (0,) * pair.rank, c)

    @classmethod
    def ratio(cls, pair: LatticePair, num: dict, den_binomials=()) -> TorusFraction:
        """num / prod (e^beta - c) for the given (beta, c) pairs."""
        factors = []
        unit: dict[XKey, Scalar] = {_xkey((0,) * pair.rank): Scalar.one()}
        for beta, c in den_binomials:
            f = _make_factor(beta, _as_scalar(c))
            f, unit = _canonicalize_factor(f, unit, pair.rank)
            factors.append(f)
        return cls(pair, num) * cls(pair, unit, tuple(factors))

    @classmethod
    def from_two_term_den(cls, pair: LatticePair, num: dict, den: dict) -> TorusFraction:
        """num / den where den is an explicit two-monomial combination;
        the denominator is rewritten as unit * (e^beta - c)."""
        terms = [(x, _as_scalar(c)) for x, c in den.items() if not _as_scalar(c).is_zero()]
        if len(terms) != 2:
            raise ValueError("denominator must have exactly two monomials")
        (x1, a), (x2, b) = terms
        diff = tuple(Q(p) - Q(r) for p, r in zip(x1, x2))
        if any(d.denominator != 1 for d in diff):
            raise ValueError("denominator exponent difference must be integral")
        # den = a e^{x2} (e^{x1-x2} - (-b/a))
        beta = tuple(int(d) for d in diff)
        c = -(b / a)
        inv_unit = {tuple(-Q(v) for v in x2): a.inverse()}
        return cls.ratio(pair, num, [(beta, c)]) * cls(pair, inv_unit)

    # -- structure -------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.num

    def is_polynomial(self) -> bool:
        return not self.factors

    def as_scalar(self) -> Scalar:
        """The value of a constant fraction (no factors, exponent zero)."""
        if self.factors:
            raise ValueError("fraction has a nontrivial denominator")
        if not self.num:
            return Scalar.zero()
        [(x, c)] = self.num.items()
        if any(x):
            raise ValueError("fraction is not constant")
        return c

    def pole_list(self) -> list[tuple[tuple[int, ...], Scalar, int]]:
        """Distinct denominator binomials with multiplicities."""
        out = []
        seen: dict[Factor, int] = {}
        for f in self.factors:
            seen[f] = seen.get(f, 0) + 1
        for f in sorted(seen):
            out.append((f[0], _factor_value(f), seen[f]))
        return out

    # -- reduction ---------------------------------------------------------------

    def _reduce(self) -> None:
        factors = list(self.factors)
        changed = True
        while changed and self.num and factors:
            changed = False
            for f in sorted(set(factors)):
                quotient = _divide_num(self.num, f)
                if quotient is not None:
                    self.num = quotient
                    factors.remove(f)
                    changed = True
                    break
        if not self.num:
            factors = []
        self.factors = tuple(sorted(factors))

    # -- arithmetic -----------------------------------------------------------------

    def __add__(self, other: TorusFraction) -> TorusFraction:
        if not isinstance(other, TorusFraction):
            return NotImplemented
        common, a_extra, b_extra = _split_multisets(self.factors, other.factors)
        num = _num_add(
            _num_mul(self.num, _factors_poly(b_extra, self.pair.rank)),
            _num_mul(other.num, _factors_poly(a_extra, self.pair.rank)),
        )
        return TorusFraction(self.pair, num, common + a_extra + b_extra)

    def __neg__(self) -> TorusFraction:
        out = TorusFraction.__new__(TorusFraction)
        out.pair = self.pair
        out.num = {x: -c for x, c in self.num.items()}
        out.factors = self.factors
        return out

    def __sub__(self, other: TorusFraction) -> TorusFraction:
        return self + (-other)

    def __mul__(self, other: TorusFraction) -> TorusFraction:
        if not isinstance(other, TorusFraction):
            return NotImplemented
        return TorusFraction(
            self.pair, _num_mul(self.num, other.num), self.factors + other.factors
        )

    def scale(self, c) -> TorusFraction:
        c = _as_scalar(c)
        return TorusFraction(
            self.pair, {x: c * v for x, v in self.num.items()}, self.factors, False
        )

    def __truediv__(self, other: TorusFraction) -> TorusFraction:
        """Division by a fraction whose numerator is a single monomial."""
        if not isinstance(other, TorusFraction):
            return NotImplemented
        [(x, c)] = other.num.items()
        inv_num = {tuple(-v for v in x): c.inverse()}
        flipped = TorusFraction(self.pair, inv_num)
        result = self * flipped
        return TorusFraction(
            self.pair,
            _num_mul(result.num, _factors_poly(other.factors, self.pair.rank)),
            result.factors,
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, TorusFraction):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    # -- substitutions -----------------------------------------------------------

    def substitute(self, mat, phi) -> TorusFraction:
        """Apply e^x -> q^{phi.x} e^{M x} (M integral, phi a covector)."""
        phi = tuple(Q(p) for p in phi)
        n = self.pair.rank

        def apply_mat(x):
            return tuple(
                sum(Q(mat[i][k]) * x[k] for k in range(n)) for i in range(n)
            )

        def qform(x) -> Q:
            return sum((p * v for p, v in zip(phi, x)), Q(0))

        num = {}
        for x, c in self.num.items():
            key = apply_mat(x)
            coeff = c * Scalar.q(qform(x))
            num[key] = num[key] + coeff if key in num else coeff
        unit: dict[XKey, Scalar] = {_xkey((0,) * n): Scalar.one()}
        factors = []
        for f in self.factors:
            beta, c = f[0], _factor_value(f)
            new_beta = tuple(int(v) for v in apply_mat(beta))
            shift = qform(beta)
            # e^beta - c  ->  q^shift (e^{M beta} - q^{-shift} c)
            unit = _num_scale(unit, Scalar.q(-shift))
            nf = _make_factor(new_beta, c * Scalar.q(-shift))
            nf, unit = _canonicalize_factor(nf, unit, n)
            factors.append(nf)
        return TorusFraction(self.pair, _num_mul(num, unit), tuple(factors))

    def weyl_act(self, w: WeylElement) -> TorusFraction:
        """The plain action e^x -> e^{wx}."""
        return self.substitute(self.pair.x_matrix(w), (0,) * self.pair.rank)

    def shift_mu(self, mu) -> TorusFraction:
        """Conjugation by the translation mu: e^x -> q^{2<x,mu>} e^x."""
        n = self.pair.rank
        phi = tuple(
            2 * sum(Q(self.pair.pairing[i][j]) * Q(mu[j]) for j in range(n))
            for i in range(n)
        )
        ident = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
        return self.substitute(ident, phi)

    # -- evaluation and residues ------------------------------------------------

    def _matching_factors(self, alpha, tau: Scalar) -> list[tuple[Factor, int]]:
        """Factors (beta, c) vanishing on e^alpha = tau, i.e. beta = k alpha
        with c = tau^k; returns (factor, k) pairs."""
        alpha = tuple(int(a) for a in alpha)
        out = []
        for f in self.factors:
            beta = f[0]
            ratios = {Q(b, a) for a, b in zip(alpha, beta) if a != 0}
            if len(ratios) != 1:
                continue
            k = ratios.pop()
            if k.denominator != 1 or k <= 0:
                continue
            k = int(k)
            if beta != tuple(k * a for a in alpha):
                continue
            if _factor_value(f) == tau**k:
                out.append((f, k))
        return out

    def evaluate_at(self, alpha, tau) -> TorusFraction:
        """Substitute e^alpha = tau (alpha a primitive integer vector, tau a
        monomial scalar).  Raises PoleError if a denominator factor
        vanishes there."""
        tau = _as_scalar(tau)
        alpha = tuple(int(a) for a in alpha)
        if not any(alpha):
            raise ValueError("evaluation direction must be nonzero")
        if self._matching_factors(alpha, tau):
            raise PoleError(f"pole on the divisor e^{list(alpha)} = {tau}")
        prim, content, row = _beta_coordinate(alpha)
        if content != 1:
            raise ValueError("evaluation direction must be primitive")

        def coordinate(x) -> Q:
            return sum((Q(r) * Q(v) for r, v in zip(row, x)), Q(0))

        num = {}
        for x, c in self.num.items():
            k = coordinate(x)
            key = tuple(Q(v) - k * a for v, a in zip(x, alpha))
            coeff = c * _scalar_frac_power(tau, k)
            num[key] = num[key] + coeff if key in num else coeff
        unit: dict[XKey, Scalar] = {_xkey((0,) * self.pair.rank): Scalar.one()}
        factors = []
        for f in self.factors:
            beta, c = f[0], _factor_value(f)
            k = coordinate(beta)
            assert k.denominator == 1
            k = int(k)
            new_beta = tuple(b - k * a for b, a in zip(beta, alpha))
            if not any(new_beta):
                value = tau**k - c  # nonzero: no matching factor
                unit = _num_scale(unit, value.inverse())
                continue
            unit = _num_scale(unit, _scalar_frac_power(tau, Q(-k)))
            nf = _make_factor(new_beta, c * _scalar_frac_power(tau, Q(-k)))
            nf, unit = _canonicalize_factor(nf, unit, self.pair.rank)
            factors.append(nf)
        return TorusFraction(self.pair, _num_mul(num, unit), tuple(factors))

    def pole_order(self, alpha, tau) -> int:
        return len(self._matching_factors(tuple(int(a) for a in alpha), _as_scalar(tau)))

    def residue(self, alpha, tau) -> TorusFraction:
        """Residue along e^alpha = tau: the value of (e^alpha - tau) * self
        on the divisor.  Zero if there is no pole; PoleError if the pole
        has order > 1.

        alpha may have either orientation; tau must be a monomial.
        """
        tau = _as_scalar(tau)
        alpha = tuple(int(a) for a in alpha)
        first = next((a for a in alpha if a), None)
        if first is None:
            raise ValueError("residue direction must be nonzero")
        if first < 0:
            # e^alpha - tau = -tau e^alpha (e^{-alpha} - tau^{-1})
            flipped = self.residue(tuple(-a for a in alpha), tau.inverse())
            return flipped.scale(-(tau**2))
        matching = self._matching_factors(alpha, tau)
        if not matching:
            return TorusFraction.zero(self.pair)
        if len(matching) > 1:
            raise PoleError(
                f"pole of order {len(matching)} on e^{list(alpha)} = {tau}"
            )
        [(f, k)] = matching
        remaining = list(self.factors)
        remaining.remove(f)
        peeled = TorusFraction(self.pair, self.num, tuple(remaining), False)
        value = peeled.evaluate_at(alpha, tau)
        # e^{k alpha} - tau^k = (e^alpha - tau) * S with S -> k tau^{k-1}
        if k != 1:
            value = value.scale((Scalar.const(k) * tau ** (k - 1)).inverse())
        return value

    # -- display and JSON ------------------------------------------------------------

    def __repr__(self) -> str:
        if not self.num:
            return "0"
        num = " + ".join(
            f"({c})*e[{', '.join(str(v) for v in x)}]"
            for x, c in sorted(self.num.items())
        )
        if not self.factors:
            return num
        den = " * ".join(
            f"(e{list(f[0])} - {_factor_value(f)})" for f in self.factors
        )
        return f"[{num}] / [{den}]"

    def to_json(self) -> dict:
        return {
            "num": [
                {"exponent": [str(v) for v in x], "coeff": c.to_json()}
                for x, c in sorted(self.num.items())
            ],
            "den": [
                {"direction": list(f[0]), "value": _factor_value(f).to_json()}
                for f in self.factors
            ],
        }

    @classmethod
    def from_json(cls, pair: LatticePair, data: dict) -> TorusFraction:
        num = {
            tuple(Q(v) for v in item["exponent"]): Scalar.from_json(item["coeff"])
            for item in data["num"]
        }
        dens = [
            (tuple(int(v) for v in item["direction"]), Scalar.from_json(item["value"]))
            for item in data.get("den", ())
        ]
        return cls.ratio(pair, num, dens)


# -- numerator-dict helpers -------------------------------------------------------


def _num_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for x, c in b.items():
        if x in out:
            s = out[x] + c
            if s.is_zero():
                del out[x]
            else:
                out[x] = s
        else:
            out[x] = c
    return out


def _num_mul(a: dict, b: dict) -> dict:
    out: dict[XKey, Scalar] = {}
    for x, cx in a.items():
        for y, cy in b.items():
            key = tuple(p + r for p, r in zip(x, y))
            c = cx * cy
            if key in out:
                s = out[key] + c
                if s.is_zero():
                    del out[key]
                else:
                    out[key] = s
            else:
                out[key] = c
    return out


def _num_scale(a: dict, c: Scalar) -> dict:
    return {x: v * c for x, v in a.items()}


def _factors_poly(factors, rank: int) -> dict:
    """Expand a factor multiset into a numerator dict."""
    out: dict[XKey, Scalar] = {_xkey((0,) * rank): Scalar.one()}
    for f in factors:
        beta, c = f[0], _factor_value(f)
        binom = {_xkey(beta): Scalar.one(), _xkey((0,) * rank): -c}
        out = _num_mul(out, binom)
    return out


def _split_multisets(a: tuple, b: tuple):
    counts: dict[Factor, int] = {}
    for f in a:
        counts[f] = counts.get(f, 0) + 1
    common, b_extra = [], []
    for f in b:
        if counts.get(f, 0) > 0:
            counts[f] -= 1
            common.append(f)
        else:
            b_extra.append(f)
    a_extra = []
    for f, m in counts.items():
        a_extra.extend([f] * m)
    return tuple(common), tuple(a_extra), tuple(b_extra)


def _canonicalize_factor(f: Factor, unit: dict, rank: int):
    """Flip e^beta - c so the first nonzero coordinate of beta is positive;
    1/(e^beta - c) = (-c^{-1} e^{-beta}) / (e^{-beta} - c^{-1})."""
    beta = f[0]
    first = next(v for v in beta if v)
    if first > 0:
        return f, unit
    c = _factor_value(f)
    flipped = _make_factor(tuple(-b for b in beta), c.inverse())
    mult = {_xkey(tuple(-b for b in beta)): -c.inverse()}
    return flipped, _num_mul(unit, mult)


def _divide_num(num: dict, f: Factor) -> dict | None:
    """Exact quotient num / (e^beta - c), or None."""
    beta, c = f[0], _factor_value(f)
    prim, content, row = _beta_coordinate(beta)

    def coordinate(x) -> Q:
        # beta-coordinate: x . row gives the prim coordinate; beta = content*prim
        return sum((Q(r) * Q(v) for r, v in zip(row, x)), Q(0)) / content

    classes: dict[tuple, list] = {}
    for x, coeff in num.items():
        k = coordinate(x)
        rest = tuple(Q(v) - k * b for v, b in zip(x, beta))
        key = (k % 1,) + rest
        classes.setdefault(key, []).append((k, x, coeff))
    quotient: dict[XKey, Scalar] = {}
    for items in classes.values():
        kmin = min(k for k, _, _ in items)
        degree = max(int(k - kmin) for k, _, _ in items)
        coeffs = [Scalar.zero()] * (degree + 1)
        base = None
        for k, x, coeff in items:
            m = int(k - kmin)
            coeffs[m] = coeffs[m] + coeff
            if m == 0:
                base = x
        # synthetic division of sum coeffs[m] u^m by (u - c)
        qcoeffs = [Scalar.zero()] * degree
        carry = Scalar.zero()
        for m in range(degree, 0, -1):
            carry = coeffs[m] + carry * c if m < degree else coeffs[m]
            qcoeffs[m - 1] = carry
        remainder = coeffs[0] + (carry * c if degree > 0 else Scalar.zero())
        if degree == 0 or not remainder.is_zero():
            return None
        for m, qc in enumerate(qcoeffs):
            if qc.is_zero():
                continue
            key = tuple(Q(v) + m * b for v, b in zip(base, beta))
            quotient[key] = quotient.get(key, Scalar.zero()) + qc
    return {x: c for x, c in quotient.items() if not c.is_zero()}
