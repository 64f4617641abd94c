"""Finite Hecke words, spherical idempotents, and the membership test.

The finite Hecke algebra sits inside the operator algebra through the
deformed generators T_i(v) on the finite nodes (1-based).  With
y = t - v(t - 1/t) the symmetrizing idempotent is

    e_v = (1/W(t, v)) * sum_w  y^{-l(w)} T_{w,v},   W(t, v) = sum_w (t/y)^{l(w)},

absorbing each generator with eigenvalue t.  Its sign-side partner
eps_v absorbs with the opposite eigenvalue v(t - 1/t) - t; the bare sum
sum_w (-1)^{l(w)} T_{w,v} is not idempotent, so eps_v is normalized here
as (1/c) sum_w (-t)^{-l(w)} T_{w,v} with c = sum_w (y/t)^{l(w)}, which
makes eps_v the exact image of e_v under the involution Xi.

Membership of a normal-ordered operator h = sum h_{w,mu} D^mu [w] in the
spherical subalgebra e*H*e is equivalent to two coefficient conditions,
for every finite node i and every term (w, mu):

    (left-equivariance)  h_{s_i w, s_i mu} = s_i(h_{w,mu}),
    (right-ratio)        h_{w s_i, mu} = h_{w,mu} * D^mu w(R_i),

where R_i = (t^2 e^{a_i} - 1)/(e^{a_i} - t^2).
"""

from __future__ import annotations

from .daha import DiffRefOperator, dl_operator
from .rootdata import LatticePair, RootSystem, WeylElement
from .scalars import LaurentPoly, Scalar
from .torusfn import TorusFraction

_T = "T"
_X = "X"


def _as_scalar(c) -> Scalar:
    return c if isinstance(c, Scalar) else Scalar.const(c)


def _as_v(v) -> Scalar:
    return Scalar.v() if v is None else _as_scalar(v)


def deformed_y(v=None) -> Scalar:
    """The coefficient scale y = t - v(t - 1/t)."""
    v = _as_v(v)
    t = Scalar.t()
    return t - v * (t - t.inverse())


def reduced_words(system: RootSystem, w: WeylElement) -> list[tuple[int, ...]]:
    """All reduced words for w, as tuples of 1-based finite node indices."""
    if w.is_identity():
        return [()]
    out = []
    for i in range(system.rank):
        shorter = w * system.simple_reflection(i)
        if shorter.length < w.length:
            out.extend(u + (i + 1,) for u in reduced_words(system, shorter))
    return out


def hecke_word_operator(pair: LatticePair, word, v=None) -> DiffRefOperator:
    """T_{w,v} as an operator, from any word in the finite nodes."""
    out = DiffRefOperator.identity(pair)
    for i in word:
        i = int(i)
        if not 1 <= i <= pair.rank:
            raise ValueError("finite Hecke words use nodes 1..rank")
        out = out * dl_operator(pair, i, v)
    return out


class HeckeExpression:
    """Formal linear combination of words in T_i and e^mu, with parameter v.

    Words are tuples of atoms ("T", i) and ("X", mu); this representation
    is what the involution acts on.  Arbitrary quasi-idempotent words can
    be built with the same arithmetic (an experimental hook: no
    correctness claims are attached to them).
    """

    __slots__ = ("v", "terms")

    def __init__(self, v, terms: dict):
        self.v = _as_v(v)
        clean: dict[tuple, Scalar] = {}
        for word, c in terms.items():
            c = _as_scalar(c)
            if not c.is_zero():
                clean[tuple(word)] = c
        self.terms = clean

    @classmethod
    def one(cls, v=None) -> HeckeExpression:
        return cls(v, {(): Scalar.one()})

    @classmethod
    def generator(cls, i: int, v=None) -> HeckeExpression:
        if int(i) < 1:
            raise ValueError("finite Hecke generators are numbered from 1")
        return cls(v, {((_T, int(i)),): Scalar.one()})

    @classmethod
    def monomial(cls, mu, v=None) -> HeckeExpression:
        return cls(v, {((_X, tuple(int(m) for m in mu)),): Scalar.one()})

    @classmethod
    def word(cls, indices, v=None) -> HeckeExpression:
        out = cls.one(v)
        for i in indices:
            out = out * cls.generator(i, v)
        return out

    def _check_same_v(self, other: HeckeExpression) -> None:
        if not self.v == other.v:
            raise ValueError("expressions carry different deformation parameters")

    def __add__(self, other) -> HeckeExpression:
        if not isinstance(other, HeckeExpression):
            return NotImplemented
        self._check_same_v(other)
        terms = dict(self.terms)
        for word, c in other.terms.items():
            terms[word] = terms[word] + c if word in terms else c
        return HeckeExpression(self.v, terms)

    def __neg__(self) -> HeckeExpression:
        return self.scale(Scalar.const(-1))

    def __sub__(self, other) -> HeckeExpression:
        return self + (-other)

    def scale(self, c) -> HeckeExpression:
        c = _as_scalar(c)
        return HeckeExpression(self.v, {w: c * x for w, x in self.terms.items()})

    def __mul__(self, other) -> HeckeExpression:
        if not isinstance(other, HeckeExpression):
            return NotImplemented
        self._check_same_v(other)
        terms: dict[tuple, Scalar] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                key = w1 + w2
                c = c1 * c2
                terms[key] = terms[key] + c if key in terms else c
        return HeckeExpression(self.v, terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, HeckeExpression):
            return NotImplemented
        return self.v == other.v and (self - other).is_zero()

    __hash__ = None

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for word, c in sorted(self.terms.items(), key=lambda kv: (len(kv[0]), str(kv[0]))):
            name = "*".join(
                f"T{p}" if k == _T else f"e{list(p)}" for k, p in word
            ) or "1"
            bits.append(f"({c})*{name}")
        return " + ".join(bits)

    def to_operator(self, pair: LatticePair) -> DiffRefOperator:
        """Evaluate the words into a normal-ordered operator."""
        gens: dict[int, DiffRefOperator] = {}
        out = DiffRefOperator.zero(pair)
        for word, c in self.terms.items():
            op = DiffRefOperator.identity(pair)
            for kind, payload in word:
                if kind == _T:
                    if payload not in gens:
                        if not 1 <= payload <= pair.rank:
                            raise ValueError("finite Hecke words use nodes 1..rank")
                        gens[payload] = dl_operator(pair, payload, self.v)
                    op = op * gens[payload]
                else:
                    op = op * DiffRefOperator.from_function(
                        pair, TorusFraction.monomial(pair, payload)
                    )
            out = out + op.scale(c)
        return out

    def to_json(self) -> dict:
        return {
            "v": self.v.to_json(),
            "terms": [
                {
                    "word": [
                        [k, p if k == _T else list(p)] for k, p in word
                    ],
                    "coeff": c.to_json(),
                }
                for word, c in sorted(
                    self.terms.items(), key=lambda kv: (len(kv[0]), str(kv[0]))
                )
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> HeckeExpression:
        terms = {}
        for item in data["terms"]:
            word = tuple(
                (k, int(p) if k == _T else tuple(int(x) for x in p))
                for k, p in item["word"]
            )
            terms[word] = Scalar.from_json(item["coeff"])
        return cls(Scalar.from_json(data["v"]), terms)


def poincare_sum(system: RootSystem, ratio: Scalar) -> Scalar:
    """Sum of ratio^{l(w)} over the Weyl group."""
    out = Scalar.zero()
    for w in system.elements:
        out = out + ratio**w.length
    return out


def _word_weights(system: RootSystem, v: Scalar, sign: bool) -> dict:
    """Idempotent coefficients per group element, sign=True for eps_v.

    Denominators are cleared against the longest length L, so that every
    coefficient shares one polynomial denominator: for e_v the weight of w
    is y^{L-l(w)} / sum_u t^{l(u)} y^{L-l(u)}, for eps_v it is
    (-1)^{l(w)} t^{L-l(w)} / sum_u y^{l(u)} t^{L-l(u)}.
    """
    longest = system.longest_element.length
    if v.den == LaurentPoly.one():
        t_pos, t_neg = LaurentPoly.t(1), LaurentPoly.t(-1)
        y = t_pos - v.num * (t_pos - t_neg)
        norm = LaurentPoly.zero()
        if sign:
            for w in system.elements:
                norm = norm + y**w.length * LaurentPoly.t(longest - w.length)
        else:
            for w in system.elements:
                norm = norm + LaurentPoly.t(w.length) * y ** (longest - w.length)
        if norm.is_zero():
            raise ValueError(_NORM_ERROR[sign])
        if sign:
            return {
                w: Scalar(
                    LaurentPoly.t(longest - w.length).scale((-1) ** w.length),
                    norm,
                )
                for w in system.elements
            }
        return {
            w: Scalar(y ** (longest - w.length), norm) for w in system.elements
        }
    y = deformed_y(v)
    if sign:
        norm = poincare_sum(system, y * Scalar.t().inverse())
        base = (Scalar.const(-1) * Scalar.t()).inverse()
    else:
        norm = poincare_sum(system, Scalar.t() * y.inverse())
        base = y.inverse()
    if norm.is_zero():
        raise ValueError(_NORM_ERROR[sign])
    norm_inv = norm.inverse()
    return {w: norm_inv * base**w.length for w in system.elements}


_NORM_ERROR = {
    False: "normalization W(t, v) vanishes",
    True: "normalization of the anti-symmetrizer vanishes",
}


def symmetrizer_word(system: RootSystem, v=None) -> HeckeExpression:
    """e_v as a generator-word expression."""
    v = _as_v(v)
    weights = _word_weights(system, v, sign=False)
    terms = {
        tuple((_T, i + 1) for i in w.word): c for w, c in weights.items()
    }
    return HeckeExpression(v, terms)


def antisymmetrizer_word(system: RootSystem, v=None) -> HeckeExpression:
    """eps_v as a generator-word expression, normalized to be idempotent."""
    v = _as_v(v)
    weights = _word_weights(system, v, sign=True)
    terms = {
        tuple((_T, i + 1) for i in w.word): c for w, c in weights.items()
    }
    return HeckeExpression(v, terms)


def idempotent_e_v(pair: LatticePair, v=None) -> DiffRefOperator:
    """The symmetrizing idempotent as a normal-ordered operator."""
    return symmetrizer_word(pair.system, v).to_operator(pair)


def idempotent_eps_v(pair: LatticePair, v=None) -> DiffRefOperator:
    """The sign-side idempotent as a normal-ordered operator."""
    return antisymmetrizer_word(pair.system, v).to_operator(pair)


def check_absorption(pair: LatticePair, node: int, v=None) -> bool:
    """T_{i,v} e_v = t e_v as a symbolic operator identity."""
    v = _as_v(v)
    e = idempotent_e_v(pair, v)
    return dl_operator(pair, node, v) * e == e.scale(Scalar.t())


def check_sign_absorption(pair: LatticePair, node: int, v=None) -> bool:
    """T_{i,v} eps_v = (v(t - 1/t) - t) eps_v as a symbolic identity."""
    v = _as_v(v)
    t = Scalar.t()
    eps = idempotent_eps_v(pair, v)
    eigen = v * (t - t.inverse()) - t
    return dl_operator(pair, node, v) * eps == eps.scale(eigen)


def spherical_ratio(pair: LatticePair, node: int) -> TorusFraction:
    """(t^2 e^{a_i} - 1)/(e^{a_i} - t^2) for the finite node i."""
    if not 1 <= node <= pair.rank:
        raise ValueError("the ratio is attached to finite nodes 1..rank")
    alpha = pair.simple_root_x(node - 1)
    t2 = Scalar.t() * Scalar.t()
    zero = (0,) * pair.rank
    return TorusFraction.ratio(
        pair, {alpha: t2, zero: Scalar.const(-1)}, [(alpha, t2)]
    )


class SphericalReport:
    """Outcome of the spherical membership test, with failure witnesses."""

    __slots__ = ("failures", "terms_checked")

    def __init__(self, failures: list, terms_checked: int):
        self.failures = list(failures)
        self.terms_checked = terms_checked

    @property
    def ok(self) -> bool:
        return not self.failures

    def first_witness(self):
        return self.failures[0] if self.failures else None

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "terms_checked": self.terms_checked,
            "failures": self.failures,
        }

    def __repr__(self) -> str:
        state = "ok" if self.ok else f"{len(self.failures)} failure(s)"
        return f"SphericalReport({state}, {self.terms_checked} term checks)"


def _failure(condition: str, node: int, w: WeylElement, mu) -> dict:
    return {
        "condition": condition,
        "node": node,
        "word": [i + 1 for i in w.word],
        "mu": list(mu),
    }


def check_spherical(h: DiffRefOperator) -> SphericalReport:
    """Check left-equivariance and right-ratio for every term and node."""
    pair = h.pair
    system = pair.system
    zero = TorusFraction.zero(pair)
    failures: list[dict] = []
    checked = 0
    keys = sorted(h.terms, key=lambda key: (key[0].length, key[0].word, key[1]))
    for node in range(1, system.rank + 1):
        si = system.simple_reflection(node - 1)
        ratio = spherical_ratio(pair, node)
        for w, mu in keys:
            coeff = h.terms[(w, mu)]
            checked += 1
            mirrored = h.terms.get((si * w, pair.act_y(si, mu)), zero)
            if mirrored != coeff.weyl_act(si):
                failures.append(_failure("left-equivariance", node, w, mu))
            right = h.terms.get((w * si, mu), zero)
            if right != coeff * ratio.weyl_act(w).shift_mu(mu):
                failures.append(_failure("right-ratio", node, w, mu))
    return SphericalReport(failures, checked)


def im_involution(expr: HeckeExpression) -> HeckeExpression:
    """The involution T_i -> v(t - 1/t) - T_i, e^mu -> e^{-mu} on words."""
    if not isinstance(expr, HeckeExpression):
        raise TypeError("the involution acts on generator-word expressions")
    t = Scalar.t()
    d = expr.v * (t - t.inverse())
    minus_one = Scalar.const(-1)
    out: dict[tuple, Scalar] = {}
    for word, c in expr.terms.items():
        partial: dict[tuple, Scalar] = {(): c}
        for atom in word:
            kind, payload = atom
            if kind == _T:
                images = [((), d), ((atom,), minus_one)]
            else:
                flipped = (_X, tuple(-m for m in payload))
                images = [((flipped,), Scalar.one())]
            nxt: dict[tuple, Scalar] = {}
            for left, cl in partial.items():
                for right, cr in images:
                    key = left + right
                    cc = cl * cr
                    nxt[key] = nxt[key] + cc if key in nxt else cc
            partial = nxt
        for new_word, c2 in partial.items():
            out[new_word] = out[new_word] + c2 if new_word in out else c2
    return HeckeExpression(expr.v, out)


def sign_rep_apply(pair: LatticePair, expr: HeckeExpression, f: TorusFraction,
                   projector: HeckeExpression | None = None) -> TorusFraction:
    """Act by the involuted word on the projected function space.

    The default projector is the anti-symmetrizer; any quasi-idempotent
    word may be supplied instead (experimental, unchecked).
    """
    if not isinstance(expr, HeckeExpression):
        raise TypeError("sign_rep_apply expects a generator-word expression")
    word = projector if projector is not None else antisymmetrizer_word(
        pair.system, expr.v
    )
    proj = word.to_operator(pair)
    if proj.apply(f) != f:
        raise ValueError("function is not in the projected subspace")
    image = im_involution(expr).to_operator(pair).apply(f)
    if proj.apply(image) != image:
        raise ValueError("the image leaves the projected subspace")
    return image
