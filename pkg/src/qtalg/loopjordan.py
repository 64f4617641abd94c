"""Jordan-type normal form for loops under q-twisted conjugation.

A loop is a square matrix of Laurent polynomials in the loop variable z
with ``Scalar`` coefficients.  Loops act on each other by the twisted
conjugation

    g . h = g(qz) h(z) g(z)^{-1},

and a loop with constant monomial diagonal and zeros below it can be
normalized, inside its orbit, to a product s*b of

* a constant diagonal ``s`` of exact torus coordinates, and
* a unitriangular ``b`` that commutes with the twist by s, meaning
  b(qz) s = s b(z) (twist-equivariance), with the extra position rule
  that whenever s_i/s_j is a positive integral power of q the pair
  (i, j) sits strictly above the diagonal.

Twist-equivariance forces each entry of b to be a single monomial
c*z^m with q^m = s_i/s_j, so b is block-diagonal along the groups of
diagonal entries that differ by integral powers of q.  The
normalization is computed one superdiagonal at a time: every entry of
the conjugator satisfies a scalar equation x(qz) - rho*x(z) = target
whose only obstruction is the coefficient at the resonant degree (when
rho = q^l), and that coefficient is absorbed into b.

Constant diagonals are compared exactly: two are equivalent when one is
a Weyl permutation of the other times integral powers of q.  For a
point s of a torus attached to a root system (coordinates on the simple
coroots), the roots alpha with alpha(s) an integral power of q span the
reflection subgroup of the isotropy group of s modulo q^Y; the quotient
is the component group of the corresponding fixed-point centralizer.
"""

from __future__ import annotations

from fractions import Fraction as Q
from itertools import permutations

from .errors import NormalFormError
from .linalg import is_integral, mat_solve, rank
from .mlambda import Character, IsotropyGroup, isotropy_group
from .rootdata import LatticePair, RootSystem, WeylElement
from .scalars import QPower, Scalar


def _as_scalar(c) -> Scalar:
    return c if isinstance(c, Scalar) else Scalar.const(c)


def _as_qpower(c) -> QPower:
    return c if isinstance(c, QPower) else QPower.of(c)


class ZPoly:
    """Laurent polynomial in z with ``Scalar`` coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: dict[int, Scalar] | None = None):
        self.coeffs = {
            int(m): c for m, c in (coeffs or {}).items() if not c.is_zero()
        }

    @classmethod
    def zero(cls) -> ZPoly:
        return cls()

    @classmethod
    def const(cls, c) -> ZPoly:
        return cls({0: _as_scalar(c)})

    @classmethod
    def one(cls) -> ZPoly:
        return cls.const(1)

    @classmethod
    def z(cls, exp: int = 1, coeff=1) -> ZPoly:
        return cls({exp: _as_scalar(coeff)})

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return all(m == 0 for m in self.coeffs)

    def constant_term(self) -> Scalar:
        return self.coeffs.get(0, Scalar.zero())

    def coeff(self, m: int) -> Scalar:
        return self.coeffs.get(m, Scalar.zero())

    def is_monomial(self) -> bool:
        return len(self.coeffs) == 1

    def as_monomial(self) -> tuple[int, Scalar]:
        if not self.is_monomial():
            raise ValueError(f"not a monomial in z: {self}")
        ((m, c),) = self.coeffs.items()
        return m, c

    def __add__(self, other: ZPoly) -> ZPoly:
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            acc = out.get(m, Scalar.zero()) + c
            if acc.is_zero():
                out.pop(m, None)
            else:
                out[m] = acc
        res = ZPoly.__new__(ZPoly)
        res.coeffs = out
        return res

    def __neg__(self) -> ZPoly:
        res = ZPoly.__new__(ZPoly)
        res.coeffs = {m: -c for m, c in self.coeffs.items()}
        return res

    def __sub__(self, other: ZPoly) -> ZPoly:
        return self + (-other)

    def __mul__(self, other: ZPoly) -> ZPoly:
        out: dict[int, Scalar] = {}
        for m1, c1 in self.coeffs.items():
            for m2, c2 in other.coeffs.items():
                m = m1 + m2
                acc = out.get(m, Scalar.zero()) + c1 * c2
                if acc.is_zero():
                    out.pop(m, None)
                else:
                    out[m] = acc
        res = ZPoly.__new__(ZPoly)
        res.coeffs = out
        return res

    def scale(self, c) -> ZPoly:
        c = _as_scalar(c)
        return ZPoly({m: x * c for m, x in self.coeffs.items()})

    def shift_z(self, k: int) -> ZPoly:
        """Multiply by z^k."""
        res = ZPoly.__new__(ZPoly)
        res.coeffs = {m + k: c for m, c in self.coeffs.items()}
        return res

    def at_qz(self) -> ZPoly:
        """Substitute z -> qz, scaling the z^m coefficient by q^m."""
        return ZPoly({m: c * Scalar.q(m) for m, c in self.coeffs.items()})

    def eval_z1(self) -> Scalar:
        """Evaluate at z = 1."""
        total = Scalar.zero()
        for c in self.coeffs.values():
            total = total + c
        return total

    def __eq__(self, other) -> bool:
        if not isinstance(other, ZPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for m in sorted(self.coeffs):
            c = self.coeffs[m]
            if m == 0:
                parts.append(f"({c})")
            elif m == 1:
                parts.append(f"({c})*z")
            else:
                parts.append(f"({c})*z^{m}")
        return " + ".join(parts)

    __repr__ = __str__

    def to_json(self) -> dict:
        return {str(m): self.coeffs[m].to_json() for m in sorted(self.coeffs)}

    @classmethod
    def from_json(cls, data: dict) -> ZPoly:
        return cls({int(m): Scalar.from_json(c) for m, c in data.items()})


def _perm_sign(perm) -> int:
    inv = sum(
        1
        for i in range(len(perm))
        for j in range(i + 1, len(perm))
        if perm[i] > perm[j]
    )
    return -1 if inv % 2 else 1


class MatrixLoop:
    """Square matrix of ``ZPoly`` entries under matrix multiplication."""

    __slots__ = ("n", "rows")

    def __init__(self, rows):
        rows = tuple(tuple(e for e in row) for row in rows)
        n = len(rows)
        if any(len(row) != n for row in rows):
            raise ValueError("matrix loop must be square")
        for row in rows:
            for e in row:
                if not isinstance(e, ZPoly):
                    raise TypeError("matrix loop entries must be ZPoly")
        self.n = n
        self.rows = rows

    @classmethod
    def identity(cls, n: int) -> MatrixLoop:
        return cls.diagonal([ZPoly.one() for _ in range(n)])

    @classmethod
    def diagonal(cls, entries) -> MatrixLoop:
        entries = [
            e if isinstance(e, ZPoly) else ZPoly.const(e) for e in entries
        ]
        n = len(entries)
        return cls(
            [
                [entries[i] if i == j else ZPoly.zero() for j in range(n)]
                for i in range(n)
            ]
        )

    @classmethod
    def permutation(cls, order) -> MatrixLoop:
        """Constant loop p with (p h p^{-1})_{ij} = h_{order[i], order[j]}."""
        n = len(order)
        return cls(
            [
                [
                    ZPoly.one() if j == order[i] else ZPoly.zero()
                    for j in range(n)
                ]
                for i in range(n)
            ]
        )

    def entry(self, i: int, j: int) -> ZPoly:
        return self.rows[i][j]

    def __mul__(self, other: MatrixLoop) -> MatrixLoop:
        if not isinstance(other, MatrixLoop):
            return NotImplemented
        if self.n != other.n:
            raise ValueError("size mismatch in loop product")
        n = self.n
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = ZPoly.zero()
                for k in range(n):
                    e = self.rows[i][k]
                    f = other.rows[k][j]
                    if not (e.is_zero() or f.is_zero()):
                        acc = acc + e * f
                row.append(acc)
            rows.append(row)
        return MatrixLoop(rows)

    def at_qz(self) -> MatrixLoop:
        return MatrixLoop([[e.at_qz() for e in row] for row in self.rows])

    def eval_z1(self) -> tuple[tuple[Scalar, ...], ...]:
        return tuple(tuple(e.eval_z1() for e in row) for row in self.rows)

    def det(self) -> ZPoly:
        total = ZPoly.zero()
        for perm in permutations(range(self.n)):
            term = ZPoly.one()
            for i, j in enumerate(perm):
                e = self.rows[i][j]
                if e.is_zero():
                    term = None
                    break
                term = term * e
            if term is None:
                continue
            total = total + (term if _perm_sign(perm) > 0 else -term)
        return total

    def _minor(self, i: int, j: int) -> MatrixLoop:
        rows = [
            [e for jj, e in enumerate(row) if jj != j]
            for ii, row in enumerate(self.rows)
            if ii != i
        ]
        return MatrixLoop(rows)

    def inverse(self) -> MatrixLoop:
        """Adjugate over determinant; the determinant must be a z-monomial."""
        d = self.det()
        if not d.is_monomial():
            raise ValueError(
                "loop is not invertible: determinant is not a monomial in z"
            )
        m, c = d.as_monomial()
        cinv = c.inverse()
        n = self.n
        if n == 1:
            return MatrixLoop([[ZPoly({-m: cinv})]])
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                cof = self._minor(j, i).det()
                if (i + j) % 2:
                    cof = -cof
                row.append(cof.scale(cinv).shift_z(-m))
            rows.append(row)
        return MatrixLoop(rows)

    def is_unitriangular(self) -> bool:
        for i in range(self.n):
            if not (self.rows[i][i] - ZPoly.one()).is_zero():
                return False
            for j in range(i):
                if not self.rows[i][j].is_zero():
                    return False
        return True

    def __eq__(self, other) -> bool:
        if not isinstance(other, MatrixLoop):
            return NotImplemented
        return self.n == other.n and self.rows == other.rows

    def __str__(self) -> str:
        return "[" + "; ".join(
            ", ".join(str(e) for e in row) for row in self.rows
        ) + "]"

    __repr__ = __str__

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "entries": [[e.to_json() for e in row] for row in self.rows],
        }

    @classmethod
    def from_json(cls, data: dict) -> MatrixLoop:
        return cls(
            [[ZPoly.from_json(e) for e in row] for row in data["entries"]]
        )


def q_conjugate(g: MatrixLoop, h: MatrixLoop) -> MatrixLoop:
    """Twisted conjugation g(qz) h(z) g(z)^{-1}."""
    if g.n != h.n:
        raise ValueError("size mismatch in twisted conjugation")
    return g.at_qz() * h * g.inverse()


class ShiftSolution:
    """Outcome of the scalar equation x(qz) - q^l x(z) = target."""

    __slots__ = ("l", "obstruction", "solution")

    def __init__(self, l: int, obstruction: Scalar, solution: ZPoly | None):
        self.l = l
        self.obstruction = obstruction
        self.solution = solution

    @property
    def solvable(self) -> bool:
        return self.obstruction.is_zero()

    @property
    def kernel_degree(self) -> int:
        """Homogeneous solutions are the multiples of z^kernel_degree."""
        return self.l

    def __repr__(self) -> str:
        if self.solvable:
            return f"ShiftSolution(l={self.l}, solution={self.solution})"
        return f"ShiftSolution(l={self.l}, obstruction={self.obstruction})"


def solve_shift_equation(l: int, target: ZPoly) -> ShiftSolution:
    """Solve x(qz) - q^l x(z) = target coefficient by coefficient.

    Degree m contributes (q^m - q^l) x_m = target_m, invertible except
    at the resonant degree m = l; the coefficient there is returned as
    the obstruction, and the equation is solvable iff it vanishes.  The
    returned solution takes the kernel multiple c*z^l to be zero.
    """
    ql = Scalar.q(l)
    obstruction = target.coeff(l)
    if not obstruction.is_zero():
        return ShiftSolution(l, obstruction, None)
    sol = {
        m: c / (Scalar.q(m) - ql)
        for m, c in target.coeffs.items()
        if m != l
    }
    return ShiftSolution(l, Scalar.zero(), ZPoly(sol))


class QNormalForm:
    """Product decomposition s*b: torus diagonal and twist-commuting part."""

    __slots__ = ("s", "b", "blocks")

    def __init__(self, s, b: MatrixLoop, blocks):
        self.s = tuple(_as_qpower(x) for x in s)
        self.b = b
        self.blocks = tuple(tuple(block) for block in blocks)

    def s_loop(self) -> MatrixLoop:
        return MatrixLoop.diagonal([x.as_scalar() for x in self.s])

    def product(self) -> MatrixLoop:
        return self.s_loop() * self.b

    def check_twist(self) -> bool:
        """b(qz) s = s b(z): b commutes with the twist by s."""
        s = self.s_loop()
        return self.b.at_qz() * s == s * self.b

    def check_position(self) -> bool:
        """s_i/s_j = q^m with m > 0 only strictly above the diagonal."""
        for i in range(len(self.s)):
            for j in range(i + 1):
                k = (self.s[i] / self.s[j]).integral_q_exponent()
                if k is not None and k > 0:
                    return False
        return True

    def to_json(self) -> dict:
        return {
            "s": [x.to_json() for x in self.s],
            "b": self.b.to_json(),
            "blocks": [list(block) for block in self.blocks],
        }


def _diagonal_constants(h: MatrixLoop) -> tuple[QPower, ...]:
    """Diagonal of h as torus coordinates; rejects the non-integral case."""
    out = []
    for i in range(h.n):
        e = h.entry(i, i)
        if not e.is_constant():
            raise NormalFormError(
                f"non-integral loop: diagonal entry {i} depends on z"
            )
        c = e.constant_term()
        if c.is_zero() or not c.is_monomial():
            raise NormalFormError(
                f"diagonal entry {i} is not an exact torus coordinate: {c}"
            )
        (qe, te, ve), coeff = c.as_monomial()
        if te or ve:
            raise NormalFormError(
                f"diagonal entry {i} must involve q only: {c}"
            )
        out.append(QPower(rot=0 if coeff > 0 else Q(1, 2), qexp=qe, mag=abs(coeff)))
    return tuple(out)


def _block_classes(diag) -> list[int]:
    """Class label per index; same class iff the ratio is q^k, k integral."""
    labels = [-1] * len(diag)
    nxt = 0
    for i in range(len(diag)):
        if labels[i] >= 0:
            continue
        labels[i] = nxt
        for j in range(i + 1, len(diag)):
            if labels[j] < 0 and (diag[i] / diag[j]).integral_q_exponent() is not None:
                labels[j] = nxt
        nxt += 1
    return labels


def _order_is_valid(h, diag, labels, order) -> bool:
    n = h.n
    for i in range(n):
        for j in range(i):
            if not h.entry(order[i], order[j]).is_zero():
                return False
    seen: list[int] = []
    for k in range(n):
        lab = labels[order[k]]
        if seen and seen[-1] != lab and lab in seen:
            return False
        if not seen or seen[-1] != lab:
            seen.append(lab)
        elif diag[order[k - 1]].qexp < diag[order[k]].qexp:
            return False
    return True


def _block_order(h, diag, labels) -> tuple[int, ...]:
    """First index order making blocks contiguous with falling q-exponents."""
    n = h.n
    if n > 4:
        ident = tuple(range(n))
        if _order_is_valid(h, diag, labels, ident):
            return ident
        raise NormalFormError(
            "loops larger than 4 x 4 must be supplied with contiguous "
            "blocks, falling q-exponents, and zeros below the diagonal"
        )
    for order in permutations(range(n)):
        if _order_is_valid(h, diag, labels, order):
            return order
    raise NormalFormError(
        "no ordering makes the loop upper-triangular with contiguous "
        "blocks and falling q-exponents"
    )


def _contiguous_blocks(labels) -> tuple[tuple[int, ...], ...]:
    blocks: list[list[int]] = []
    for i, lab in enumerate(labels):
        if blocks and labels[i - 1] == lab:
            blocks[-1].append(i)
        else:
            blocks.append([i])
    return tuple(tuple(b) for b in blocks)


def q_normal_form(
    h: MatrixLoop, basis: MatrixLoop | None = None
) -> tuple[QNormalForm, MatrixLoop]:
    """Normalize h to s*b and return the pair with its conjugator f.

    The input (after the optional basis change) must have constant
    monomial diagonal entries; an index order chosen exhaustively for
    n <= 4 (supplied orderings only above that) must leave zeros below
    the diagonal, group the diagonal into contiguous classes whose
    ratios are integral powers of q, and sort each class by falling
    exponent.  Entries are then cleaned one superdiagonal at a time;
    inside a class the resonant coefficient is absorbed into b, across
    classes the twisted equation is always solvable.  The returned
    conjugator satisfies q_conjugate(f, h) = s*b exactly.
    """
    original = h
    pre = basis
    if pre is not None:
        h = q_conjugate(pre, h)
    diag0 = _diagonal_constants(h)
    labels0 = _block_classes(diag0)
    order = _block_order(h, diag0, labels0)
    p = MatrixLoop.permutation(order)
    h = q_conjugate(p, h)
    n = h.n
    d = [diag0[order[i]] for i in range(n)]
    ds = [x.as_scalar() for x in d]
    labels = [labels0[order[i]] for i in range(n)]

    f = [
        [ZPoly.one() if i == j else ZPoly.zero() for j in range(n)]
        for i in range(n)
    ]
    b = [
        [ZPoly.one() if i == j else ZPoly.zero() for j in range(n)]
        for i in range(n)
    ]
    a = [
        [ZPoly.const(ds[i]) if i == j else ZPoly.zero() for j in range(n)]
        for i in range(n)
    ]
    for span in range(1, n):
        for i in range(n - span):
            j = i + span
            known = -h.entry(i, j)
            for k in range(i + 1, j):
                known = known + a[i][k] * f[k][j]
                known = known - f[i][k].at_qz() * h.entry(k, j)
            dj_inv = ds[j].inverse()
            l = (d[i] / d[j]).integral_q_exponent()
            if l is not None:
                beta = -(known.coeff(l) / ds[i])
                if not beta.is_zero():
                    b[i][j] = ZPoly({l: beta})
                    a[i][j] = ZPoly({l: ds[i] * beta})
                res = solve_shift_equation(l, (a[i][j] + known).scale(dj_inv))
                if not res.solvable:
                    raise NormalFormError(
                        f"resonant obstruction survived at entry ({i}, {j})"
                    )
                f[i][j] = res.solution
            else:
                rho = (d[i] / d[j]).as_scalar()
                target = known.scale(dj_inv)
                f[i][j] = ZPoly(
                    {
                        m: c / (Scalar.q(m) - rho)
                        for m, c in target.coeffs.items()
                    }
                )
    f_loop = MatrixLoop(f)
    conjugator = f_loop * p
    if pre is not None:
        conjugator = conjugator * pre
    nf = QNormalForm(d, MatrixLoop(b), _contiguous_blocks(labels))
    if q_conjugate(conjugator, original) != nf.product():
        raise NormalFormError("conjugator does not reproduce the normal form")
    if not (nf.check_twist() and nf.check_position()):
        raise NormalFormError("normal form violates its defining conditions")
    return nf, conjugator


# -- invariants of the constant diagonal ------------------------------------


def q_centralizer_roots(system: RootSystem, coords) -> tuple:
    """Roots alpha with alpha(s) an integral power of q.

    The point s has coordinates on the simple coroots, so a root alpha
    with simple-root coordinates a_i evaluates to
    prod_j c_j^(sum_i a_i <alpha_i, alpha_j_vee>).
    """
    coords = tuple(_as_qpower(c) for c in coords)
    n = system.rank
    cartan = system.cartan
    out = []
    for root in system.roots:
        val = QPower.one()
        for j in range(n):
            e = sum(root[i] * cartan[i][j] for i in range(n))
            val = val * coords[j] ** int(e)
        if val.integral_q_exponent() is not None:
            out.append(root)
    return tuple(sorted(out))


def character_on_x(pair: LatticePair, coords) -> Character:
    """Character values on the X basis of a point given on simple coroots."""
    coords = tuple(_as_qpower(c) for c in coords)
    if pair.kind == "weight":
        return Character(coords)
    n = pair.system.rank
    cartan = pair.system.cartan
    vals = []
    for i in range(n):
        acc = QPower.one()
        for j in range(n):
            acc = acc * coords[j] ** int(cartan[i][j])
        vals.append(acc)
    return Character(tuple(vals))


def _reflection_closure(system: RootSystem, roots) -> tuple[WeylElement, ...]:
    """Subgroup generated by the reflections in the given roots."""
    gens = [system.reflection(r) for r in roots if system.is_positive_root(r)]
    group = {system.identity}
    frontier = [system.identity]
    while frontier:
        nxt = []
        for w in frontier:
            for g in gens:
                x = g * w
                if x not in group:
                    group.add(x)
                    nxt.append(x)
        frontier = nxt
    return tuple(sorted(group, key=lambda w: (w.length, w.word)))


class ComponentWeyl:
    """Isotropy group of a torus point with its reflection subgroup.

    The roots that evaluate on the point to integral powers of q
    generate a reflection subgroup of the isotropy group; the quotient
    is the component group, listed through a transversal.  When the
    subgroup of isotropy elements preserving the positive half of those
    roots is a complement, the extension splits and that complement is
    the transversal.
    """

    __slots__ = (
        "pair",
        "point",
        "isotropy",
        "roots",
        "reflection_subgroup",
        "transversal",
        "is_split",
    )

    def __init__(self, pair: LatticePair, coords):
        coords = tuple(_as_qpower(c) for c in coords)
        self.pair = pair
        self.point = coords
        self.isotropy = isotropy_group(pair, character_on_x(pair, coords))
        self.roots = q_centralizer_roots(pair.system, coords)
        root_set = set(self.roots)
        for w in self.isotropy.elements():
            for r in self.roots:
                if tuple(w.act_root(r)) not in root_set:
                    raise NormalFormError(
                        "q-centralizer roots are not isotropy-stable"
                    )
        self.reflection_subgroup = _reflection_closure(pair.system, self.roots)
        sub = set(self.reflection_subgroup)
        if not sub <= set(self.isotropy.elements()):
            raise NormalFormError(
                "reflection subgroup escapes the isotropy group"
            )
        pos = [r for r in self.roots if pair.system.is_positive_root(r)]
        keepers = {
            w
            for w in self.isotropy.elements()
            if all(
                pair.system.is_positive_root(tuple(w.act_root(r)))
                for r in pos
            )
        }
        cosets: dict[frozenset, WeylElement] = {}
        for w in sorted(
            self.isotropy.elements(), key=lambda x: (x.length, x.word)
        ):
            cosets.setdefault(frozenset(w * u for u in sub), w)
        closed = all(x * y in keepers for x in keepers for y in keepers)
        one_per_coset = all(
            len(keepers & coset) == 1 for coset in cosets
        )
        self.is_split = closed and one_per_coset
        self.transversal = tuple(
            sorted(
                keepers if self.is_split else cosets.values(),
                key=lambda w: (w.length, w.word),
            )
        )

    @property
    def component_order(self) -> int:
        return len(self.transversal)

    def to_json(self) -> dict:
        return {
            "point": [c.to_json() for c in self.point],
            "isotropy_order": self.isotropy.order,
            "centralizer_roots": [list(r) for r in self.roots],
            "reflection_order": len(self.reflection_subgroup),
            "component_order": self.component_order,
            "is_split": self.is_split,
            "transversal_words": [
                [i + 1 for i in w.word] for w in self.transversal
            ],
        }


def component_weyl(pair: LatticePair, coords) -> ComponentWeyl:
    """Isotropy group, q-centralizer reflection subgroup, and quotient."""
    return ComponentWeyl(pair, coords)


class TorusWitness:
    """Result of the exact search for s2 = w(s1) * q^y."""

    __slots__ = ("equivalent", "w", "y")

    def __init__(self, equivalent: bool, w: WeylElement | None, y):
        self.equivalent = equivalent
        self.w = w
        self.y = None if y is None else tuple(int(x) for x in y)

    def __bool__(self) -> bool:
        return self.equivalent

    def __repr__(self) -> str:
        if not self.equivalent:
            return "TorusWitness(equivalent=False)"
        return f"TorusWitness(w={self.w.word}, y={self.y})"


def constants_equivalent(pair: LatticePair, s1, s2) -> TorusWitness:
    """Search W exhaustively and Y exactly for s2 = w(s1) * q^y."""
    lam1 = character_on_x(pair, tuple(_as_qpower(c) for c in s1))
    lam2 = character_on_x(pair, tuple(_as_qpower(c) for c in s2))
    n = pair.rank
    for w in pair.system.elements:
        moved = lam1.weyl_act(pair, w)
        exps = []
        for target, base in zip(lam2.values, moved.values):
            e = (target / base).plain_q_exponent()
            if e is None:
                break
            exps.append(e)
        else:
            y = mat_solve(pair.pairing, exps)
            if is_integral(y):
                return TorusWitness(True, w, y)
    return TorusWitness(False, None, None)


# -- comparison of normalized loops -----------------------------------------


def _class_key(x: QPower) -> tuple:
    """Invariant of a torus coordinate modulo integral powers of q."""
    return (x.rot, x.mag, x.qexp % 1)


def diagonal_twist_match(d1, d2):
    """Match two constant diagonals up to permutation and integral q-shifts.

    Returns (perm, shifts) with d2[i] = d1[perm[i]] * q^shifts[i], or
    None when no matching exists.  Within a class the pairing takes the
    exponents in sorted order, so the result is deterministic.
    """
    d1 = tuple(_as_qpower(x) for x in d1)
    d2 = tuple(_as_qpower(x) for x in d2)
    if len(d1) != len(d2):
        return None
    groups1: dict[tuple, list[int]] = {}
    groups2: dict[tuple, list[int]] = {}
    for i, x in enumerate(d1):
        groups1.setdefault(_class_key(x), []).append(i)
    for i, x in enumerate(d2):
        groups2.setdefault(_class_key(x), []).append(i)
    if set(groups1) != set(groups2):
        return None
    perm = [0] * len(d1)
    shifts = [0] * len(d1)
    for key, idx2 in groups2.items():
        idx1 = groups1[key]
        if len(idx1) != len(idx2):
            return None
        idx1 = sorted(idx1, key=lambda i: d1[i].qexp)
        idx2 = sorted(idx2, key=lambda i: d2[i].qexp)
        for i2, i1 in zip(idx2, idx1):
            perm[i2] = i1
            shift = (d2[i2] / d1[i1]).integral_q_exponent()
            if shift is None:
                return None
            shifts[i2] = shift
    return tuple(perm), tuple(shifts)


def _scalar_mat_mul(a, b):
    n = len(a)
    return [
        [
            sum((a[i][k] * b[k][j] for k in range(n)), Scalar.zero())
            for j in range(n)
        ]
        for i in range(n)
    ]


def _jordan_type(u) -> tuple[int, ...]:
    """Rank sequence of the powers of u - 1, a complete unipotent invariant."""
    n = len(u)
    nil = [
        [
            u[i][j] - (Scalar.one() if i == j else Scalar.zero())
            for j in range(n)
        ]
        for i in range(n)
    ]
    power = nil
    ranks = []
    for _ in range(n):
        r = rank(power, is_zero=lambda s: s.is_zero())
        ranks.append(r)
        if r == 0:
            break
        power = _scalar_mat_mul(power, nil)
    while len(ranks) < n:
        ranks.append(0)
    return tuple(ranks)


def _block_types(nf: QNormalForm) -> dict[tuple, tuple]:
    """Per-block class key -> (size, rank sequence of the block at z = 1)."""
    u = nf.b.eval_z1()
    out = {}
    for block in nf.blocks:
        sub = [[u[i][j] for j in block] for i in block]
        key = _class_key(nf.s[block[0]])
        out[key] = (len(block), _jordan_type(sub))
    return out


def unipotent_parts_conjugate(nf1: QNormalForm, nf2: QNormalForm) -> bool:
    """Blockwise comparison of the twist-commuting parts at z = 1.

    Blocks correspond through the class of their diagonal modulo
    integral powers of q; within a matched block the rank sequence of
    (b(1) - 1)^k decides conjugacy inside the block's linear group.
    """
    return _block_types(nf1) == _block_types(nf2)
