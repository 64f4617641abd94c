"""Finite permutation groups, exact character tables, Clifford counting.

Groups are given by permutation generators and enumerated breadth-first
up to a configured bound.  Character tables are computed by Dixon's
method: the class-sum structure constants are diagonalized over a prime
field GF(p) with p = 1 mod exp(G), the joint eigenvectors are the
normalized characters mod p, and the true values are recovered as
cyclotomic integers from the eigenvalue multiplicities of each class
representative.  Values live in Q(zeta_N) represented by polynomials
modulo the N-th cyclotomic polynomial, with N the group exponent, so
row and column orthogonality can be verified exactly.

On top of the tables sits the counting layer for a group W_H with a
normal subgroup W0: the conjugation action phi^g(x) = phi(g x g^{-1})
partitions the irreducible characters of W0 into orbits with
stabilizers W^phi, and when the orbit representative extends to an
honest character of its stabilizer the characters of W_H lying over the
orbit correspond to the irreducible characters of W^phi/W0.  Orbit
representatives that fail to extend are flagged and left out of the
predicted count rather than resolved.
"""

from __future__ import annotations

from fractions import Fraction as Q
from math import gcd, isqrt, lcm

from .errors import EnumerationBoundError


# -- cyclotomic polynomials and numbers --------------------------------------

_CYCLO_CACHE: dict[int, tuple[int, ...]] = {}


def _int_poly_div(num: list[int], den: tuple[int, ...]) -> list[int]:
    """Exact quotient of integer polynomials with monic divisor."""
    num = list(num)
    dd = len(den) - 1
    out = [0] * (len(num) - dd)
    for k in range(len(out) - 1, -1, -1):
        c = num[k + dd]
        out[k] = c
        if c:
            for i, d in enumerate(den):
                num[k + i] -= c * d
    assert all(x == 0 for x in num), "division was not exact"
    return out


def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Coefficients of the n-th cyclotomic polynomial, ascending degree."""
    if n in _CYCLO_CACHE:
        return _CYCLO_CACHE[n]
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _int_poly_div(poly, cyclotomic_poly(d))
    out = tuple(poly)
    _CYCLO_CACHE[n] = out
    return out


class Cyc:
    """Element of Q(zeta_n), a polynomial in zeta_n modulo Phi_n."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs):
        phi = cyclotomic_poly(n)
        deg = len(phi) - 1
        work = [Q(c) for c in coeffs]
        for k in range(len(work) - 1, deg - 1, -1):
            c = work[k]
            if c:
                for i in range(deg + 1):
                    work[k - deg + i] -= c * phi[i]
        work = work[:deg] + [Q(0)] * (deg - len(work))
        self.n = n
        self.coeffs = tuple(work[:deg])

    @classmethod
    def const(cls, n: int, c) -> Cyc:
        return cls(n, [Q(c)])

    @classmethod
    def zero(cls, n: int) -> Cyc:
        return cls.const(n, 0)

    @classmethod
    def one(cls, n: int) -> Cyc:
        return cls.const(n, 1)

    @classmethod
    def zeta(cls, n: int, k: int = 1) -> Cyc:
        k %= n
        return cls(n, [0] * k + [1])

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __add__(self, other: Cyc) -> Cyc:
        other = self._match(other)
        return Cyc(self.n, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: Cyc) -> Cyc:
        other = self._match(other)
        return Cyc(self.n, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> Cyc:
        return Cyc(self.n, [-a for a in self.coeffs])

    def __mul__(self, other: Cyc) -> Cyc:
        other = self._match(other)
        out = [Q(0)] * (2 * len(self.coeffs))
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] += a * b
        return Cyc(self.n, out)

    def _match(self, other) -> Cyc:
        if not isinstance(other, Cyc):
            return Cyc.const(self.n, other)
        if other.n != self.n:
            raise ValueError("cyclotomic orders differ; promote first")
        return other

    def galois(self, t: int) -> Cyc:
        """Apply zeta -> zeta^t (t coprime to the order)."""
        if gcd(t, self.n) != 1:
            raise ValueError("not a Galois substitution")
        out = [Q(0)] * self.n
        for k, c in enumerate(self.coeffs):
            if c:
                out[(k * t) % self.n] += c
        return Cyc(self.n, out)

    def conjugate(self) -> Cyc:
        return self.galois(self.n - 1) if self.n > 1 else self

    def promote(self, n2: int) -> Cyc:
        """Re-express in Q(zeta_n2) for a multiple n2 of the order."""
        if n2 % self.n:
            raise ValueError("target order must be a multiple")
        step = n2 // self.n
        out = [Q(0)] * n2
        for k, c in enumerate(self.coeffs):
            out[k * step] = c
        return Cyc(n2, out)

    def rational(self) -> Q | None:
        """The value as a rational, or None when it is irrational."""
        if all(c == 0 for c in self.coeffs[1:]):
            return self.coeffs[0]
        return None

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Q)):
            other = Cyc.const(self.n, other)
        if not isinstance(other, Cyc):
            return NotImplemented
        return self.n == other.n and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.n, self.coeffs))

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if k == 0:
                parts.append(str(c))
            elif k == 1:
                parts.append(f"{c}*zeta{self.n}" if c != 1 else f"zeta{self.n}")
            else:
                head = f"{c}*" if c != 1 else ""
                parts.append(f"{head}zeta{self.n}^{k}")
        return " + ".join(parts)

    __repr__ = __str__

    def to_json(self):
        r = self.rational()
        if r is not None:
            return str(r)
        return {"order": self.n, "coeffs": [str(c) for c in self.coeffs]}


# -- permutation groups -------------------------------------------------------


def _compose(a: tuple, b: tuple) -> tuple:
    """a after b."""
    return tuple(a[x] for x in b)


def _invert(a: tuple) -> tuple:
    out = [0] * len(a)
    for i, x in enumerate(a):
        out[x] = i
    return tuple(out)


def _perm_order(a: tuple) -> int:
    seen = [False] * len(a)
    out = 1
    for i in range(len(a)):
        if seen[i]:
            continue
        length, j = 0, i
        while not seen[j]:
            seen[j] = True
            j = a[j]
            length += 1
        out = lcm(out, length)
    return out


class PermGroup:
    """Finite permutation group enumerated breadth-first from generators."""

    __slots__ = ("degree", "generators", "elements", "index", "_classes", "_table")

    def __init__(self, degree: int, generators, bound: int = 2000):
        self.degree = degree
        gens = tuple(tuple(g) for g in generators)
        for g in gens:
            if sorted(g) != list(range(degree)):
                raise ValueError(f"not a permutation of 0..{degree - 1}: {g}")
        self.generators = gens
        ident = tuple(range(degree))
        elements = [ident]
        seen = {ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = _compose(g, x)
                    if y not in seen:
                        if len(seen) >= bound:
                            raise EnumerationBoundError(
                                f"group enumeration exceeded the bound {bound}"
                            )
                        seen.add(y)
                        elements.append(y)
                        nxt.append(y)
            frontier = nxt
        self.elements = tuple(elements)
        self.index = {x: i for i, x in enumerate(elements)}
        self._classes = None
        self._table = None

    @classmethod
    def from_elements(cls, degree: int, elements, bound: int = 2000) -> PermGroup:
        elements = [tuple(e) for e in elements]
        if not elements:
            elements = [tuple(range(degree))]
        return cls(degree, elements, bound=bound)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> tuple:
        return self.elements[0]

    def __contains__(self, x) -> bool:
        return tuple(x) in self.index

    def exponent(self) -> int:
        out = 1
        for x in self.elements:
            out = lcm(out, _perm_order(x))
        return out

    def conjugacy_classes(self):
        """List of classes as (representative, members tuple), identity first."""
        if self._classes is not None:
            return self._classes
        unseen = set(self.elements)
        classes = []
        for x in self.elements:
            if x not in unseen:
                continue
            members = [x]
            unseen.discard(x)
            frontier = [x]
            while frontier:
                nxt = []
                for y in frontier:
                    for g in self.generators:
                        z = _compose(_compose(g, y), _invert(g))
                        if z in unseen:
                            unseen.discard(z)
                            members.append(z)
                            nxt.append(z)
                frontier = nxt
            classes.append((x, tuple(members)))
        self._classes = classes
        return classes

    def class_map(self) -> dict:
        return {
            y: i for i, (_, members) in enumerate(self.conjugacy_classes())
            for y in members
        }


def check_normal(group: PermGroup, normal: PermGroup) -> None:
    """Verify that the declared normal subgroup really is one."""
    if normal.degree != group.degree:
        raise ValueError("subgroup acts on a different set")
    gset = set(group.elements)
    nset = set(normal.elements)
    if not nset <= gset:
        raise ValueError("declared subgroup is not contained in the group")
    for g in group.generators:
        ginv = _invert(g)
        for x in normal.elements:
            if _compose(_compose(g, x), ginv) not in nset:
                raise ValueError("declared normal subgroup is not normal")


def coset_representatives(group: PermGroup, normal: PermGroup) -> list[tuple]:
    """Coset reps of the subgroup, in enumeration order, identity first."""
    reps = []
    covered = set()
    for x in group.elements:
        if x in covered:
            continue
        reps.append(x)
        covered.update(_compose(x, u) for u in normal.elements)
    return reps


# -- Dixon character tables ---------------------------------------------------


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, isqrt(n) + 1):
        if n % d == 0:
            return False
    return True


def _dixon_prime(order: int, exponent: int) -> int:
    p = exponent + 1
    while not (_is_prime(p) and p * p > 4 * order and order % p):
        p += exponent
    return p


def _primitive_root(p: int) -> int:
    factors = []
    m = p - 1
    d = 2
    while d * d <= m:
        if m % d == 0:
            factors.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        factors.append(m)
    for g in range(2, p):
        if all(pow(g, (p - 1) // f, p) != 1 for f in factors):
            return g
    raise AssertionError("no primitive root found")


def _kernel_mod(mat, p: int):
    """Basis of the kernel of a square matrix over GF(p)."""
    n = len(mat)
    m = [row[:] for row in mat]
    pivots = []
    row = 0
    for col in range(n):
        piv = next((r for r in range(row, n) if m[r][col] % p), None)
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        inv = pow(m[row][col], p - 2, p)
        m[row] = [(x * inv) % p for x in m[row]]
        for r in range(n):
            if r != row and m[r][col] % p:
                f = m[r][col]
                m[r] = [(x - f * y) % p for x, y in zip(m[r], m[row])]
        pivots.append(col)
        row += 1
    basis = []
    for free in range(n):
        if free in pivots:
            continue
        vec = [0] * n
        vec[free] = 1
        for prow, pcol in zip(m, pivots):
            vec[pcol] = (-prow[free]) % p
        basis.append(vec)
    return basis


def _express(basis, targets, p: int):
    """Coordinates of each target vector in the given independent basis."""
    n = len(basis[0])
    d = len(basis)
    aug = [[basis[j][i] % p for j in range(d)] + [t[i] % p for t in targets]
           for i in range(n)]
    row = 0
    pivots = []
    for col in range(d):
        piv = next((r for r in range(row, n) if aug[r][col]), None)
        if piv is None:
            raise AssertionError("basis vectors are dependent")
        aug[row], aug[piv] = aug[piv], aug[row]
        inv = pow(aug[row][col], p - 2, p)
        aug[row] = [(x * inv) % p for x in aug[row]]
        for r in range(n):
            if r != row and aug[r][col]:
                f = aug[r][col]
                aug[r] = [(x - f * y) % p for x, y in zip(aug[r], aug[row])]
        pivots.append(col)
        row += 1
    for r in range(row, n):
        if any(x % p for x in aug[r][d:]):
            raise AssertionError("target escapes the invariant subspace")
    return [[aug[i][d + t] for i in range(d)] for t in range(len(targets))]


class CharacterTable:
    """Exact character table: classes, cyclotomic rows, orthogonality."""

    __slots__ = ("group", "reps", "sizes", "conductor", "rows", "degrees")

    def __init__(self, group, reps, sizes, conductor, rows):
        self.group = group
        self.reps = tuple(reps)
        self.sizes = tuple(sizes)
        self.conductor = conductor
        self.rows = tuple(tuple(r) for r in rows)
        self.degrees = tuple(
            int(row[0].rational()) for row in self.rows
        )

    def value(self, row_index: int, element) -> Cyc:
        return self.rows[row_index][self.group.class_map()[tuple(element)]]

    def restriction(self, row_index: int, subgroup: PermGroup) -> tuple:
        """The row restricted to the classes of a subgroup."""
        return tuple(
            self.value(row_index, rep)
            for rep, _ in subgroup.conjugacy_classes()
        )

    def verify_orthogonality(self) -> bool:
        n = self.conductor
        order = Cyc.const(n, self.group.order)
        for a, ra in enumerate(self.rows):
            for b, rb in enumerate(self.rows):
                acc = Cyc.zero(n)
                for size, x, y in zip(self.sizes, ra, rb):
                    acc = acc + Cyc.const(n, size) * x * y.conjugate()
                if acc != (order if a == b else Cyc.zero(n)):
                    return False
        for i in range(len(self.reps)):
            for j in range(len(self.reps)):
                acc = Cyc.zero(n)
                for row in self.rows:
                    acc = acc + row[i] * row[j].conjugate()
                want = (
                    Cyc.const(n, Q(self.group.order, self.sizes[i]))
                    if i == j
                    else Cyc.zero(n)
                )
                if acc != want:
                    return False
        return sum(d * d for d in self.degrees) == self.group.order

    def to_json(self) -> dict:
        return {
            "order": self.group.order,
            "classes": [
                {"representative": list(rep), "size": size}
                for rep, size in zip(self.reps, self.sizes)
            ],
            "conductor": self.conductor,
            "degrees": list(self.degrees),
            "rows": [[v.to_json() for v in row] for row in self.rows],
        }


def character_table(group: PermGroup) -> CharacterTable:
    """Dixon's method: diagonalize the class algebra mod p, then lift."""
    if group._table is not None:
        return group._table
    classes = group.conjugacy_classes()
    r = len(classes)
    reps = [rep for rep, _ in classes]
    sizes = [len(members) for _, members in classes]
    class_of = group.class_map()
    e = group.exponent()
    p = _dixon_prime(group.order, e)

    mats = []
    for i in range(r):
        mat = [[0] * r for _ in range(r)]
        for k in range(r):
            zk = reps[k]
            for x in classes[i][1]:
                j = class_of[_compose(_invert(x), zk)]
                mat[j][k] += 1
        mats.append([[c % p for c in row] for row in mat])

    spaces = [[[1 if i == j else 0 for i in range(r)] for j in range(r)]]
    for mat in mats[1:]:
        if all(len(s) == 1 for s in spaces):
            break
        refined = []
        for basis in spaces:
            if len(basis) == 1:
                refined.append(basis)
                continue
            images = [
                [sum(mat[i][k] * vec[k] for k in range(r)) % p for i in range(r)]
                for vec in basis
            ]
            x = _express(basis, images, p)
            d = len(basis)
            found = 0
            for t in range(p):
                shifted = [
                    [(x[j][i] - (t if i == j else 0)) % p for j in range(d)]
                    for i in range(d)
                ]
                kern = _kernel_mod(shifted, p)
                if kern:
                    refined.append(
                        [
                            [
                                sum(kv[j] * basis[j][i] for j in range(d)) % p
                                for i in range(r)
                            ]
                            for kv in kern
                        ]
                    )
                    found += len(kern)
                    if found == d:
                        break
            if found != d:
                raise AssertionError("class-sum matrix failed to diagonalize")
        spaces = refined
    if not all(len(s) == 1 for s in spaces):
        raise AssertionError("class algebra did not split into lines")

    omegas = []
    for (vec,) in spaces:
        inv0 = pow(vec[0], p - 2, p)
        omegas.append([(x * inv0) % p for x in vec])

    inv_class = [class_of[_invert(rep)] for rep in reps]
    rows_modp = []
    degrees = []
    for w in omegas:
        s = sum(
            w[j] * w[inv_class[j]] * pow(sizes[j], p - 2, p) for j in range(r)
        ) % p
        d2 = (group.order * pow(s, p - 2, p)) % p
        d = next(t for t in range(1, p // 2 + 1) if (t * t) % p == d2)
        degrees.append(d)
        rows_modp.append(
            [(d * w[j] * pow(sizes[j], p - 2, p)) % p for j in range(r)]
        )

    g0 = _primitive_root(p)
    z_e = pow(g0, (p - 1) // e, p)
    power_class = []
    for rep in reps:
        m = _perm_order(rep)
        chain = []
        cur = group.identity
        for _ in range(m):
            chain.append(class_of[cur])
            cur = _compose(rep, cur)
        power_class.append(chain)

    rows = []
    for d, chi in zip(degrees, rows_modp):
        row = []
        for j in range(r):
            m = len(power_class[j])
            w = pow(z_e, e // m, p)
            inv_m = pow(m, p - 2, p)
            coeffs = [0] * e
            total = 0
            for k in range(m):
                acc = 0
                for u in range(m):
                    acc += chi[power_class[j][u]] * pow(w, (-k * u) % m, p)
                mk = (acc * inv_m) % p
                if mk > d:
                    raise AssertionError("eigenvalue multiplicity escaped its bound")
                total += mk
                if mk:
                    coeffs[(k * (e // m)) % e] += mk
            if total != d:
                raise AssertionError("multiplicities do not sum to the degree")
            row.append(Cyc(e, coeffs))
        rows.append(row)

    rows.sort(key=lambda row: (int(row[0].rational()), [v.coeffs for v in row]))
    table = CharacterTable(group, reps, sizes, e, rows)
    if not table.verify_orthogonality():
        raise AssertionError("character table failed exact orthogonality")
    group._table = table
    return table


# -- semidirect structure -----------------------------------------------------


class SemidirectStructure:
    """Transversal of a normal subgroup, with a complement when one is found."""

    __slots__ = ("split", "complement", "transversal", "quotient_order")

    def __init__(self, split, complement, transversal, quotient_order):
        self.split = split
        self.complement = complement
        self.transversal = transversal
        self.quotient_order = quotient_order

    def to_json(self) -> dict:
        return {
            "split": self.split,
            "quotient_order": self.quotient_order,
            "complement": None
            if self.complement is None
            else [list(x) for x in self.complement],
        }


def _closure_bounded(degree, gens, limit):
    """Closure of the generators, or None once it exceeds the limit."""
    ident = tuple(range(degree))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = _compose(g, x)
                if y not in seen:
                    if len(seen) >= limit:
                        return None
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def semidirect_structure(
    group: PermGroup, normal: PermGroup, complement_hint=None
) -> SemidirectStructure:
    """Complement search for a normal subgroup, splitting the extension.

    A supplied hint (for instance the positivity-preserving transversal
    of a component group) is verified directly.  Otherwise candidate
    complements generated by up to three elements of order dividing the
    index are tried exhaustively, which settles every index up to 8.
    """
    check_normal(group, normal)
    index = group.order // normal.order
    reps = coset_representatives(group, normal)
    nset = set(normal.elements)

    def as_complement(candidate) -> tuple | None:
        if candidate is None or len(candidate) != index:
            return None
        cset = set(candidate)
        if len(cset & nset) != 1 or group.identity not in cset:
            return None
        if any(x not in group.index for x in cset):
            return None
        if any(_compose(a, b) not in cset for a in cset for b in cset):
            return None
        return tuple(sorted(cset))

    if complement_hint is not None:
        comp = as_complement([tuple(x) for x in complement_hint])
        if comp is not None:
            return SemidirectStructure(True, comp, comp, index)
    if index == 1:
        ident = (group.identity,)
        return SemidirectStructure(True, ident, ident, index)

    candidates = [
        x
        for x in group.elements
        if x != group.identity and index % _perm_order(x) == 0
    ]
    for size in (1, 2, 3):
        if size > 1 and len(candidates) ** size > 400_000:
            break
        for combo in _tuples(candidates, size):
            closure = _closure_bounded(group.degree, combo, index)
            comp = as_complement(closure)
            if comp is not None:
                return SemidirectStructure(True, comp, comp, index)
    return SemidirectStructure(False, None, tuple(reps), index)


def _tuples(pool, size):
    if size == 1:
        for x in pool:
            yield (x,)
    else:
        for i, x in enumerate(pool):
            for rest in _tuples(pool[i + 1 :], size - 1):
                yield (x,) + rest


# -- Clifford orbits and counting ---------------------------------------------


class CliffordOrbit:
    """One orbit of the conjugation action on the characters of the subgroup."""

    __slots__ = ("members", "stabilizer")

    def __init__(self, members, stabilizer):
        self.members = tuple(members)
        self.stabilizer = stabilizer


def clifford_orbits(group: PermGroup, normal: PermGroup) -> list[CliffordOrbit]:
    """Orbits of the character rows of the subgroup under conjugation.

    A coset representative g sends a character phi to phi^g with
    phi^g(x) = phi(g x g^{-1}); the stabilizer of each orbit
    representative is returned as a subgroup containing the normal one.
    """
    check_normal(group, normal)
    table = character_table(normal)
    class_of = normal.class_map()
    row_index = {row: i for i, row in enumerate(table.rows)}
    reps = coset_representatives(group, normal)

    def act(g, row_i):
        ginv = _invert(g)
        moved = tuple(
            table.rows[row_i][class_of[_compose(_compose(g, rep), ginv)]]
            for rep, _ in normal.conjugacy_classes()
        )
        return row_index[moved]

    orbits = []
    assigned = set()
    for start in range(len(table.rows)):
        if start in assigned:
            continue
        members = []
        stab_cosets = []
        for g in reps:
            image = act(g, start)
            if image == start:
                stab_cosets.append(g)
            if image not in members:
                members.append(image)
        assigned.update(members)
        stab_elements = [
            _compose(g, u) for g in stab_cosets for u in normal.elements
        ]
        stabilizer = PermGroup.from_elements(
            group.degree, stab_elements, bound=group.order + 1
        )
        orbits.append(CliffordOrbit(sorted(members), stabilizer))
    return orbits


def quotient_group(group: PermGroup, normal: PermGroup) -> PermGroup:
    """The quotient as a permutation group on the cosets."""
    check_normal(group, normal)
    cosets = [frozenset(_compose(r, u) for u in normal.elements)
              for r in coset_representatives(group, normal)]
    where = {x: i for i, coset in enumerate(cosets) for x in coset}
    gens = [
        tuple(where[_compose(g, min(coset))] for coset in cosets)
        for g in group.generators
    ]
    return PermGroup(len(cosets), gens, bound=len(cosets) + 1)


class CliffordCount:
    """Predicted character count over a normal subgroup, with the breakdown."""

    __slots__ = ("orbits", "breakdown", "predicted", "direct", "flagged", "matches")

    def __init__(self, orbits, breakdown, predicted, direct, flagged):
        self.orbits = orbits
        self.breakdown = tuple(breakdown)
        self.predicted = predicted
        self.direct = direct
        self.flagged = tuple(flagged)
        self.matches = not flagged and predicted == direct

    def to_json(self) -> dict:
        return {
            "predicted": self.predicted,
            "direct": self.direct,
            "matches": self.matches,
            "flagged_orbits": list(self.flagged),
            "breakdown": [dict(b) for b in self.breakdown],
        }


def clifford_count(group: PermGroup, normal: PermGroup) -> CliffordCount:
    """Count the characters of the group from the orbits over the subgroup.

    Each orbit whose representative extends to an honest character of
    its stabilizer contributes the class count of stabilizer/normal;
    orbits that fail to extend are flagged and excluded.  The total is
    compared with the directly computed table of the full group.
    """
    orbits = clifford_orbits(group, normal)
    table_n = character_table(normal)
    predicted = 0
    flagged = []
    breakdown = []
    for pos, orbit in enumerate(orbits):
        stab = orbit.stabilizer
        table_s = character_table(stab)
        phi = orbit.members[0]
        target = tuple(
            v.promote(table_s.conductor) for v in table_n.restriction(phi, normal)
        )
        extends = any(
            table_s.restriction(i, normal) == target
            for i in range(len(table_s.rows))
        )
        entry = {
            "orbit": list(orbit.members),
            "stabilizer_order": stab.order,
            "extends": extends,
        }
        if extends:
            contribution = len(quotient_group(stab, normal).conjugacy_classes())
            entry["contribution"] = contribution
            predicted += contribution
        else:
            entry["contribution"] = None
            flagged.append(pos)
        breakdown.append(entry)
    direct = len(character_table(group).rows)
    return CliffordCount(orbits, breakdown, predicted, direct, flagged)


def weyl_permutation_group(elements, system, bound: int = 2000) -> PermGroup:
    """Weyl elements as permutations of the roots of the ambient system."""
    roots = list(system.roots)
    where = {r: i for i, r in enumerate(roots)}
    perms = [
        tuple(where[tuple(w.act_root(r))] for r in roots) for w in elements
    ]
    return PermGroup.from_elements(len(roots), perms, bound=bound)
