"""Difference-reflection operators on the character torus.

An operator is a finite sum sum h_{w,mu} D^mu [w] in left-normal form:
[w] substitutes e^x -> e^{wx}, D^mu rescales e^x -> q^{2<x,mu>} e^x, and
the coefficients h_{w,mu} are torus fractions with binomial-factored
denominators.  Node 0 is the affine node, realized through e^{alpha_0} =
q^2 e^{-theta} (equivalently e^delta = q^2) and the affine reflection
[s_0] = D^{-theta_coroot} [s_theta].

The deformed divided-difference generator at node i is

    T_i(v) = t [s_i] + c_i ([s_i] - 1),   c_i = v (t - 1/t) / (e^{alpha_i} - 1),

which satisfies T^2 = v(t - 1/t) T + v + t^2(1 - v) and the braid
relations of the affine Coxeter diagram.

`check_membership` decides whether an operator's coefficients satisfy
the three divisor conditions that cut out the image of the deformed
algebra: poles confined to e^alpha = q^{2k} with order one
("pole-location"), residue cancellation between coefficient partners on
each such divisor ("residue-sum"), and forced vanishing on a family of
t-shifted divisors determined by the sign of <alpha, mu> ("forced-
vanishing"; the exact ranges are documented in the README).
"""

from __future__ import annotations

from fractions import Fraction as Q

from .errors import PoleError
from .rootdata import LatticePair, RootSystem, WeylElement
from .scalars import Scalar
from .torusfn import TorusFraction


def _as_scalar(c) -> Scalar:
    return c if isinstance(c, Scalar) else Scalar.const(c)


def default_pair(system) -> LatticePair:
    """The lattice pair used by default: X = root lattice, Y = coweights."""
    if isinstance(system, str):
        system = RootSystem(system)
    return LatticePair(system, "adjoint")


class Divisor:
    """The locus e^alpha = tau inside the character torus."""

    __slots__ = ("alpha", "tau")

    def __init__(self, alpha, tau):
        self.alpha = tuple(int(a) for a in alpha)
        self.tau = _as_scalar(tau)
        if not any(self.alpha):
            raise ValueError("divisor direction must be nonzero")
        if self.tau.is_zero():
            raise ValueError("divisor value must be nonzero")

    def __repr__(self) -> str:
        return f"Divisor(e^{list(self.alpha)} = {self.tau})"


def residue_at(f: TorusFraction, d: Divisor) -> TorusFraction:
    """Residue of f along the divisor (zero when f is regular there)."""
    return f.residue(d.alpha, d.tau)


class DiffRefOperator:
    """Finite sum of terms h_{w,mu} D^mu [w], keyed by (w, mu)."""

    __slots__ = ("pair", "terms")

    def __init__(self, pair: LatticePair, terms: dict):
        self.pair = pair
        clean = {}
        for (w, mu), h in terms.items():
            if not h.is_zero():
                clean[(w, tuple(int(m) for m in mu))] = h
        self.terms = clean

    # -- constructors -----------------------------------------------------------

    @classmethod
    def zero(cls, pair: LatticePair) -> DiffRefOperator:
        return cls(pair, {})

    @classmethod
    def identity(cls, pair: LatticePair) -> DiffRefOperator:
        return cls.from_function(pair, TorusFraction.one(pair))

    @classmethod
    def from_function(cls, pair: LatticePair, f: TorusFraction) -> DiffRefOperator:
        zero_mu = (0,) * pair.rank
        return cls(pair, {(pair.system.identity, zero_mu): f})

    @classmethod
    def shift_op(cls, pair: LatticePair, mu) -> DiffRefOperator:
        """D^mu: e^x -> q^{2<x,mu>} e^x."""
        return cls(
            pair,
            {(pair.system.identity, tuple(mu)): TorusFraction.one(pair)},
        )

    @classmethod
    def weyl_op(cls, pair: LatticePair, w: WeylElement) -> DiffRefOperator:
        zero_mu = (0,) * pair.rank
        return cls(pair, {(w, zero_mu): TorusFraction.one(pair)})

    # -- ring structure -----------------------------------------------------------

    def __add__(self, other: DiffRefOperator) -> DiffRefOperator:
        terms = dict(self.terms)
        for key, h in other.terms.items():
            terms[key] = terms[key] + h if key in terms else h
        return DiffRefOperator(self.pair, terms)

    def __neg__(self) -> DiffRefOperator:
        return self.scale(Scalar.const(-1))

    def __sub__(self, other: DiffRefOperator) -> DiffRefOperator:
        return self + (-other)

    def scale(self, c) -> DiffRefOperator:
        c = _as_scalar(c)
        return DiffRefOperator(
            self.pair, {key: h.scale(c) for key, h in self.terms.items()}
        )

    def __mul__(self, other: DiffRefOperator) -> DiffRefOperator:
        """Composition, normal-ordered: coefficients move left through
        D^mu and [w] by the substitution rules."""
        terms: dict = {}
        act_y = self.pair.act_y
        for (w1, m1), h1 in self.terms.items():
            for (w2, m2), h2 in other.terms.items():
                coeff = h1 * h2.weyl_act(w1).shift_mu(m1)
                key = (
                    w1 * w2,
                    tuple(a + b for a, b in zip(m1, act_y(w1, m2))),
                )
                terms[key] = terms[key] + coeff if key in terms else coeff
        return DiffRefOperator(self.pair, terms)

    def __pow__(self, n: int) -> DiffRefOperator:
        if n < 0:
            raise ValueError("negative operator powers are not defined")
        out = DiffRefOperator.identity(self.pair)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, DiffRefOperator):
            return NotImplemented
        if set(self.terms) != set(other.terms):
            return False
        return all(self.terms[k] == other.terms[k] for k in self.terms)

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.terms

    # -- action on functions ------------------------------------------------------

    def apply(self, f: TorusFraction) -> TorusFraction:
        out = TorusFraction.zero(self.pair)
        for (w, mu), h in self.terms.items():
            out = out + h * f.weyl_act(w).shift_mu(mu)
        return out

    # -- display and JSON ---------------------------------------------------------

    def support(self) -> list:
        return sorted(
            self.terms, key=lambda key: (key[0].length, key[0].word, key[1])
        )

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for w, mu in self.support():
            bits.append(f"[{self.terms[(w, mu)]!r}] D^{list(mu)} {w!r}")
        return " + ".join(bits)

    def to_json(self) -> list:
        return [
            {
                "w": [i + 1 for i in w.word],
                "mu": list(mu),
                "coeff": self.terms[(w, mu)].to_json(),
            }
            for w, mu in self.support()
        ]

    @classmethod
    def from_json(cls, pair: LatticePair, data: list) -> DiffRefOperator:
        terms: dict = {}
        for item in data:
            w = pair.system.element_by_word([i - 1 for i in item["w"]])
            key = (w, tuple(int(m) for m in item["mu"]))
            h = TorusFraction.from_json(pair, item["coeff"])
            terms[key] = terms[key] + h if key in terms else h
        return cls(pair, terms)


# -- generators ---------------------------------------------------------------


def node_reflection(pair: LatticePair, node: int) -> DiffRefOperator:
    """[s_i] for finite nodes (1..l); D^{-theta_coroot}[s_theta] for node 0."""
    system = pair.system
    if node == 0:
        w = system.reflection(system.highest_root)
        mu = tuple(-m for m in pair.theta_coroot_y())
        return DiffRefOperator(pair, {(w, mu): TorusFraction.one(pair)})
    return DiffRefOperator.weyl_op(pair, system.simple_reflection(node - 1))


def node_cocycle(pair: LatticePair, node: int, v) -> TorusFraction:
    """c_i = v (t - 1/t) / (e^{alpha_i} - 1), with e^{alpha_0} = q^2 e^{-theta}."""
    v = _as_scalar(v)
    t = Scalar.t()
    top = v * (t - t.inverse())
    zero = (0,) * pair.rank
    if node == 0:
        minus_theta = tuple(-a for a in pair.theta_x())
        q2 = Scalar.q() * Scalar.q()
        return TorusFraction.from_two_term_den(
            pair, {zero: top}, {minus_theta: q2, zero: Scalar.const(-1)}
        )
    alpha = pair.simple_root_x(node - 1)
    return TorusFraction.ratio(pair, {zero: top}, [(alpha, Scalar.one())])


def dl_operator(pair: LatticePair, node: int, v=None) -> DiffRefOperator:
    """T_i(v) = t [s_i] + c_i ([s_i] - 1); v defaults to the symbolic variable."""
    v = Scalar.v() if v is None else _as_scalar(v)
    refl = node_reflection(pair, node)
    if v.is_zero():
        return refl.scale(Scalar.t())
    c = node_cocycle(pair, node, v)
    [(w, mu)] = refl.terms.keys()
    terms = {
        (w, mu): TorusFraction.from_scalar(pair, Scalar.t()) + c,
        (pair.system.identity, (0,) * pair.rank): -c,
    }
    return DiffRefOperator(pair, terms)


def quadratic_sides(pair: LatticePair, node: int, v=None):
    """Both sides of T^2 = v(t - 1/t) T + (v + t^2(1 - v))."""
    v = Scalar.v() if v is None else _as_scalar(v)
    t = Scalar.t()
    op = dl_operator(pair, node, v)
    d = v * (t - t.inverse())
    kappa = v + t * t * (Scalar.one() - v)
    lhs = op * op
    rhs = op.scale(d) + DiffRefOperator.identity(pair).scale(kappa)
    return lhs, rhs


def check_quadratic(pair: LatticePair, node: int, v=None) -> bool:
    lhs, rhs = quadratic_sides(pair, node, v)
    return lhs == rhs


def braid_sides(pair: LatticePair, i: int, j: int, v=None):
    """The alternating products T_i T_j T_i ... of Coxeter length m(i,j)."""
    m = pair.system.affine_coxeter_m(i, j)
    if m is None:
        raise ValueError(f"nodes {i}, {j} have infinite Coxeter order")
    a, b = dl_operator(pair, i, v), dl_operator(pair, j, v)
    lhs = DiffRefOperator.identity(pair)
    rhs = DiffRefOperator.identity(pair)
    for k in range(m):
        lhs = lhs * (a if k % 2 == 0 else b)
        rhs = rhs * (b if k % 2 == 0 else a)
    return lhs, rhs


def check_braid(pair: LatticePair, i: int, j: int, v=None) -> bool:
    lhs, rhs = braid_sides(pair, i, j, v)
    return lhs == rhs


def relations_report(pair: LatticePair, v=None) -> dict:
    """Quadratic at every node, braid at every finite-order node pair."""
    nodes = range(pair.rank + 1)
    quad = {node: check_quadratic(pair, node, v) for node in nodes}
    braid = {}
    skipped = []
    for i in nodes:
        for j in nodes:
            if i >= j:
                continue
            if pair.system.affine_coxeter_m(i, j) is None:
                skipped.append((i, j))
                continue
            braid[(i, j)] = check_braid(pair, i, j, v)
    return {
        "quadratic": quad,
        "braid": braid,
        "infinite_order_pairs": skipped,
        "ok": all(quad.values()) and all(braid.values()),
    }


# -- translation bookkeeping ---------------------------------------------------


def affine_to_finite(pair: LatticePair, coeffs: dict) -> DiffRefOperator:
    """Rewrite sum f_{(mu, w)} [mu . w] with [mu . w] = D^mu [w]."""
    terms: dict = {}
    for (mu, w), f in coeffs.items():
        key = (w, tuple(int(m) for m in mu))
        terms[key] = terms[key] + f if key in terms else f
    return DiffRefOperator(pair, terms)


def finite_to_affine(op: DiffRefOperator) -> dict:
    """Inverse of affine_to_finite."""
    return {(mu, w): h for (w, mu), h in op.terms.items()}


def affine_reflection(pair: LatticePair, root, k: int):
    """The reflection for the affine root (root, k) as a pair (mu, w):
    s_{(alpha, k)} = translation by k alpha_coroot times s_alpha."""
    system = pair.system
    root = tuple(int(r) for r in root)
    if not system.is_root(root):
        raise ValueError("not a root")
    coroot = system.coroot_of(root)
    mu = tuple(int(k) * m for m in pair.coroot_to_y(coroot))
    return (mu, system.reflection(root))


def affine_mul(pair: LatticePair, a, b):
    """Product in the extended affine group: (mu1, w1)(mu2, w2) =
    (mu1 + w1 mu2, w1 w2)."""
    (m1, w1), (m2, w2) = a, b
    return (tuple(p + q for p, q in zip(m1, pair.act_y(w1, m2))), w1 * w2)


# -- membership test -------------------------------------------------------------


def _term_json(key) -> dict:
    w, mu = key
    return {"w": [i + 1 for i in w.word], "mu": list(mu)}


def _pure_even_q_power(value: Scalar):
    """The exponent a when value = q^a with a an even integer, else None."""
    if not value.is_monomial():
        return None
    (dq, dt, dv), coeff = value.as_monomial()
    if dt or dv or coeff != 1:
        return None
    if dq.denominator != 1 or int(dq) % 2:
        return None
    return int(dq)


def check_membership(op: DiffRefOperator) -> dict:
    """Report whether every coefficient satisfies the divisor conditions
    characterizing the deformed algebra (at v = 1); see module docstring."""
    pair = op.pair
    system = pair.system
    violations: list[dict] = []
    pos_roots_x = pair.positive_roots_x()
    pos_set = set(pos_roots_x)
    order = op.support()

    # pole locations: only e^alpha = q^{2k}, alpha a root, order <= 1
    clean_poles: dict = {}
    for key in order:
        h = op.terms[key]
        for beta, value, mult in h.pole_list():
            where = {"term": _term_json(key), "divisor": {"alpha": list(beta), "value": str(value)}}
            if beta not in pos_set:
                violations.append(
                    {"rule": "pole-location", "detail": "pole direction is not a root", **where}
                )
                continue
            a = _pure_even_q_power(value)
            if a is None:
                violations.append(
                    {
                        "rule": "pole-location",
                        "detail": "pole value is not an even power of q",
                        **where,
                    }
                )
                continue
            if mult > 1:
                violations.append(
                    {"rule": "pole-location", "detail": f"pole order {mult} > 1", **where}
                )
                continue
            clean_poles.setdefault((beta, a), []).append(key)

    # residue pairing: partner of (w, mu) on e^alpha = q^{-2k} is
    # (s_alpha w, k alpha_coroot + s_alpha mu)
    zero_fn = TorusFraction.zero(pair)
    seen = set()
    for (alpha, a), keys in sorted(clean_poles.items()):
        k = -a // 2
        root = pair.x_to_root(alpha)
        s_alpha = system.reflection(root)
        coroot_y = pair.coroot_to_y(system.coroot_of(root))
        tau = Scalar.q() ** a
        for key in keys:
            w, mu = key
            partner = (
                s_alpha * w,
                tuple(
                    k * c + m for c, m in zip(coroot_y, pair.act_y(s_alpha, mu))
                ),
            )
            pair_id = (alpha, a, frozenset((key, partner)))
            if pair_id in seen:
                continue
            seen.add(pair_id)
            res = op.terms[key].residue(alpha, tau)
            other = op.terms.get(partner, zero_fn).residue(alpha, tau)
            if not (res + other).is_zero():
                violations.append(
                    {
                        "rule": "residue-sum",
                        "term": _term_json(key),
                        "partner": _term_json(partner),
                        "divisor": {"alpha": list(alpha), "value": f"q^{a}"},
                        "detail": "residues do not cancel",
                    }
                )

    # forced vanishing on t-shifted divisors
    t2 = Scalar.t() ** 2
    for key in order:
        w, mu = key
        h = op.terms[key]
        w_inv = w.inverse()
        for alpha in pos_roots_x:
            pairing = pair.pair(alpha, mu)
            moved = pair.x_to_root(pair.act_x(w_inv, alpha))
            eps = 0 if system.is_positive_root(moved) else 1
            targets = []
            if pairing > 0:
                for k in range(0, pairing + eps):
                    targets.append((Scalar.q() ** (-2 * k) * t2.inverse(), k))
            elif pairing == 0 and eps == 1:
                targets.append((t2.inverse(), 0))
            elif pairing < 0:
                for k in range(1, -pairing - eps + 1):
                    targets.append((Scalar.q() ** (2 * k) * t2, k))
            for tau, k in targets:
                where = {
                    "term": _term_json(key),
                    "divisor": {"alpha": list(alpha), "value": str(tau)},
                }
                try:
                    value = h.evaluate_at(alpha, tau)
                except PoleError:
                    violations.append(
                        {
                            "rule": "forced-vanishing",
                            "detail": "pole where vanishing is required",
                            **where,
                        }
                    )
                    continue
                if not value.is_zero():
                    violations.append(
                        {
                            "rule": "forced-vanishing",
                            "detail": "coefficient does not vanish",
                            **where,
                        }
                    )
    return {"ok": not violations, "violations": violations}


# -- rank-one fractional-weight module ----------------------------------------


def mfrac_cocycle(pair: LatticePair, node: int) -> TorusFraction:
    """The factor (q^{-1} e^{a/2} - q e^{-a/2}) / (q^{-1} e^{-a/2} - q e^{a/2})
    for a = alpha_node, with e^{alpha_0 / 2} = q e^{-theta/2}."""
    q = Scalar.q()
    qi = q.inverse()
    if node == 0:
        half = tuple(Q(a, 2) for a in pair.theta_x())
        neg = tuple(-x for x in half)
        # e^{alpha_0/2} = q e^{-theta/2}
        num = {neg: Scalar.one(), half: Scalar.const(-1)}
        den = {half: qi * qi, neg: -(q * q)}
        return TorusFraction.from_two_term_den(pair, num, den)
    alpha = pair.simple_root_x(node - 1)
    half = tuple(Q(a, 2) for a in alpha)
    neg = tuple(-x for x in half)
    num = {half: qi, neg: -q}
    den = {neg: qi, half: -q}
    return TorusFraction.from_two_term_den(pair, num, den)


def mfrac_weyl_act(pair: LatticePair, node: int, f: TorusFraction) -> TorusFraction:
    """The affine Weyl substitution: finite nodes act by s_i; node 0 by
    e^x -> q^{2<x,theta_coroot>} e^{s_theta x}."""
    system = pair.system
    if node == 0:
        mat = pair.x_matrix(system.reflection(system.highest_root))
        theta_y = pair.theta_coroot_y()
        n = pair.rank
        phi = tuple(
            2 * sum(Q(pair.pairing[i][j]) * Q(theta_y[j]) for j in range(n))
            for i in range(n)
        )
        return f.substitute(mat, phi)
    return f.weyl_act(system.simple_reflection(node - 1))


def mfrac_act(pair: LatticePair, node: int, f: TorusFraction) -> TorusFraction:
    """The twisted reflection action on the rank-one module: f |-> s_i(f) c_i."""
    return mfrac_weyl_act(pair, node, f) * mfrac_cocycle(pair, node)
