"""Finite root systems and their Weyl groups on explicit lattice pairs.

Roots are stored by their coordinates on the simple roots, coroots by
their coordinates on the simple coroots; ``cartan[i][j]`` is the pairing
of the i-th simple root with the j-th simple coroot.  Weyl group
elements carry exact integer matrices for both actions plus a reduced
word, and a :class:`LatticePair` fixes which lattices (and hence which
coordinate charts) a computation runs on:

* ``"root"``    — X = root lattice (simple-root basis),
                  Y = coroot lattice (simple-coroot basis), pairing = Cartan;
* ``"weight"``  — X = weight lattice (fundamental-weight basis),
                  Y = coroot lattice, pairing = identity;
* ``"adjoint"`` — X = root lattice, Y = coweight lattice
                  (fundamental-coweight basis), pairing = identity.
"""

from __future__ import annotations

from fractions import Fraction as Q

from .errors import EnumerationBoundError
from .linalg import mat_det, mat_inv

Coords = tuple[int, ...]
Mat = tuple[tuple[int, ...], ...]

WEYL_BOUND = 10_000

BUILTIN_CARTAN: dict[str, list[list[int]]] = {
    "A1": [[2]],
    "A2": [[2, -1], [-1, 2]],
    "A3": [[2, -1, 0], [-1, 2, -1], [0, -1, 2]],
    "A4": [[2, -1, 0, 0], [-1, 2, -1, 0], [0, -1, 2, -1], [0, 0, -1, 2]],
    "B2": [[2, -2], [-1, 2]],
    "C2": [[2, -1], [-2, 2]],
    "D4": [[2, -1, 0, 0], [-1, 2, -1, -1], [0, -1, 2, 0], [0, -1, 0, 2]],
    "G2": [[2, -1], [-3, 2]],
}

_COXETER_M = {0: 2, 1: 3, 2: 4, 3: 6}


def _unit(n: int, i: int) -> Coords:
    return tuple(1 if k == i else 0 for k in range(n))


def _identity_mat(n: int) -> Mat:
    return tuple(_unit(n, i) for i in range(n))


def _mat_mul_int(a: Mat, b: Mat) -> Mat:
    n = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n))
        for i in range(n)
    )


def _mat_vec_int(m: Mat, v: Coords) -> Coords:
    return tuple(sum(row[k] * v[k] for k in range(len(v))) for row in m)


def validate_cartan(cartan: list[list[int]]) -> None:
    """Check the generalized Cartan conditions plus finite type
    (symmetrizable with positive definite symmetrization)."""
    n = len(cartan)
    if any(len(row) != n for row in cartan):
        raise ValueError("Cartan matrix must be square")
    for i in range(n):
        if cartan[i][i] != 2:
            raise ValueError("diagonal Cartan entries must equal 2")
        for j in range(n):
            if int(cartan[i][j]) != cartan[i][j]:
                raise ValueError("Cartan entries must be integers")
            if i != j and cartan[i][j] > 0:
                raise ValueError("off-diagonal Cartan entries must be <= 0")
            if (cartan[i][j] == 0) != (cartan[j][i] == 0):
                raise ValueError("zero pattern must be symmetric")
    # symmetrizer by graph propagation
    d: list[Q | None] = [None] * n
    for start in range(n):
        if d[start] is not None:
            continue
        d[start] = Q(1)
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(n):
                if i != j and cartan[i][j] != 0:
                    dj = d[i] * Q(cartan[i][j], cartan[j][i])
                    if d[j] is None:
                        d[j] = dj
                        stack.append(j)
                    elif d[j] != dj:
                        raise ValueError("Cartan matrix is not symmetrizable")
    sym = [[d[i] * cartan[i][j] for j in range(n)] for i in range(n)]
    for k in range(1, n + 1):
        minor = [row[:k] for row in sym[:k]]
        if mat_det(minor) <= 0:
            raise ValueError("Cartan matrix is not of finite type")


class WeylElement:
    """Group element with exact actions on root and coroot coordinates."""

    __slots__ = ("system", "mat_root", "mat_coroot", "word", "length")

    def __init__(self, system, mat_root: Mat, mat_coroot: Mat, word: tuple[int, ...]):
        self.system = system
        self.mat_root = mat_root
        self.mat_coroot = mat_coroot
        self.word = word
        self.length = len(word)

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeylElement):
            return NotImplemented
        return self.mat_root == other.mat_root

    def __hash__(self) -> int:
        return hash(self.mat_root)

    def __mul__(self, other: WeylElement) -> WeylElement:
        """Composition: (self * other) acts by other first, then self."""
        if not isinstance(other, WeylElement):
            return NotImplemented
        return self.system.element_by_matrix(
            _mat_mul_int(self.mat_root, other.mat_root)
        )

    def inverse(self) -> WeylElement:
        inv = mat_inv(self.mat_root)
        key = tuple(tuple(int(x) for x in row) for row in inv)
        return self.system.element_by_matrix(key)

    def is_identity(self) -> bool:
        return self.length == 0

    def sign(self) -> int:
        return -1 if self.length % 2 else 1

    def act_root(self, coords) -> Coords:
        return _mat_vec_int(self.mat_root, tuple(coords))

    def act_coroot(self, coords) -> Coords:
        return _mat_vec_int(self.mat_coroot, tuple(coords))

    def __repr__(self) -> str:
        return "s[" + " ".join(str(i + 1) for i in self.word) + "]" if self.word else "e"


class RootSystem:
    """A finite root system from a Cartan matrix (or a built-in name)."""

    def __init__(self, cartan, name: str | None = None):
        if isinstance(cartan, str):
            name = cartan
            try:
                cartan = BUILTIN_CARTAN[cartan]
            except KeyError:
                raise ValueError(
                    f"unknown root system {cartan!r}; "
                    f"known: {sorted(BUILTIN_CARTAN)}"
                ) from None
        validate_cartan(cartan)
        self.name = name
        self.cartan: Mat = tuple(tuple(int(x) for x in row) for row in cartan)
        self.rank = len(cartan)
        self._enumerate_roots()
        self._enumerate_weyl()

    # -- roots -------------------------------------------------------------

    def _reflect_root(self, j: int, r: Coords) -> Coords:
        pairing = sum(r[i] * self.cartan[i][j] for i in range(self.rank))
        return tuple(r[k] - (pairing if k == j else 0) for k in range(self.rank))

    def _reflect_coroot(self, j: int, c: Coords) -> Coords:
        pairing = sum(self.cartan[j][i] * c[i] for i in range(self.rank))
        return tuple(c[k] - (pairing if k == j else 0) for k in range(self.rank))

    def _enumerate_roots(self) -> None:
        n = self.rank
        coroot: dict[Coords, Coords] = {}
        frontier = [(_unit(n, i), _unit(n, i)) for i in range(n)]
        for r, c in frontier:
            coroot[r] = c
        while frontier:
            nxt = []
            for r, c in frontier:
                for j in range(n):
                    r2, c2 = self._reflect_root(j, r), self._reflect_coroot(j, c)
                    if r2 not in coroot:
                        coroot[r2] = c2
                        nxt.append((r2, c2))
                    elif coroot[r2] != c2:
                        raise ValueError("inconsistent root/coroot enumeration")
            frontier = nxt
        self._coroot_of = coroot
        self.roots: tuple[Coords, ...] = tuple(sorted(coroot))
        self.positive_roots: tuple[Coords, ...] = tuple(
            r for r in self.roots if min(r) >= 0
        )
        self.simple_roots: tuple[Coords, ...] = tuple(_unit(n, i) for i in range(n))
        self.highest_root: Coords = max(self.positive_roots, key=sum)
        self.highest_root_coroot: Coords = coroot[self.highest_root]

    def coroot_of(self, root) -> Coords:
        return self._coroot_of[tuple(root)]

    def is_root(self, coords) -> bool:
        return tuple(coords) in self._coroot_of

    def is_positive_root(self, coords) -> bool:
        c = tuple(coords)
        return c in self._coroot_of and min(c) >= 0

    def root_coroot_pairing(self, root, coroot) -> int:
        """Pairing of a root-lattice vector with a coroot-lattice vector."""
        return sum(
            root[i] * self.cartan[i][j] * coroot[j]
            for i in range(self.rank)
            for j in range(self.rank)
        )

    # -- Weyl group -----------------------------------------------------------

    def _simple_mats(self, i: int) -> tuple[Mat, Mat]:
        n = self.rank
        root = tuple(
            tuple(
                (1 if k == j else 0) - (self.cartan[j][i] if k == i else 0)
                for j in range(n)
            )
            for k in range(n)
        )
        coroot = tuple(
            tuple(
                (1 if k == j else 0) - (self.cartan[i][j] if k == i else 0)
                for j in range(n)
            )
            for k in range(n)
        )
        return root, coroot

    def _enumerate_weyl(self) -> None:
        n = self.rank
        simple = [self._simple_mats(i) for i in range(n)]
        table: dict[Mat, WeylElement] = {}
        ident = WeylElement(self, _identity_mat(n), _identity_mat(n), ())
        table[ident.mat_root] = ident
        frontier = [ident]
        while frontier:
            nxt = []
            for w in frontier:
                for i in range(n):
                    mr = _mat_mul_int(w.mat_root, simple[i][0])
                    if mr in table:
                        continue
                    mc = _mat_mul_int(w.mat_coroot, simple[i][1])
                    elt = WeylElement(self, mr, mc, w.word + (i,))
                    table[mr] = elt
                    nxt.append(elt)
                    if len(table) > WEYL_BOUND:
                        raise EnumerationBoundError(
                            f"Weyl group has more than {WEYL_BOUND} elements"
                        )
            frontier = nxt
        self._table = table
        self.elements: tuple[WeylElement, ...] = tuple(
            sorted(table.values(), key=lambda w: (w.length, w.word))
        )
        self.identity = ident
        self.longest_element = self.elements[-1]
        self.order = len(self.elements)

    def simple_reflection(self, i: int) -> WeylElement:
        return self.element_by_matrix(self._simple_mats(i)[0])

    def element_by_matrix(self, mat_root) -> WeylElement:
        key = tuple(tuple(int(x) for x in row) for row in mat_root)
        try:
            return self._table[key]
        except KeyError:
            raise ValueError("matrix is not a Weyl group element") from None

    def element_by_word(self, word) -> WeylElement:
        w = self.identity
        for i in word:
            w = w * self.simple_reflection(i)
        return w

    def reflection(self, root) -> WeylElement:
        """The reflection attached to any root, as a group element."""
        root = tuple(root)
        cor = self.coroot_of(root)
        n = self.rank
        mat = tuple(
            tuple(
                (1 if k == j else 0)
                - root[k] * sum(self.cartan[j][m] * cor[m] for m in range(n))
                for j in range(n)
            )
            for k in range(n)
        )
        return self.element_by_matrix(mat)

    # -- affinization -------------------------------------------------------

    def affine_coxeter_m(self, i: int, j: int) -> int | None:
        """Coxeter exponent m(i, j) of the affine diagram (node 0 affine);
        None means infinity."""
        if i == j:
            return 1

        def pairing(a: int, b: int) -> int:
            # <alpha_a, alpha_b^vee> with 0 the affine node (-theta part)
            if a == 0 and b == 0:
                return 2
            if a == 0:
                return -sum(
                    self.highest_root[k] * self.cartan[k][b - 1]
                    for k in range(self.rank)
                )
            if b == 0:
                return -sum(
                    self.cartan[a - 1][k] * self.highest_root_coroot[k]
                    for k in range(self.rank)
                )
            return self.cartan[a - 1][b - 1]

        c = pairing(i, j) * pairing(j, i)
        return _COXETER_M.get(c)


class LatticePair:
    """W-stable lattices (X, Y) with an integral pairing, in fixed bases."""

    KINDS = ("root", "weight", "adjoint")

    def __init__(self, system: RootSystem, kind: str = "root"):
        if kind not in self.KINDS:
            raise ValueError(f"kind must be one of {self.KINDS}")
        self.system = system
        self.kind = kind
        n = system.rank
        a = [[Q(x) for x in row] for row in system.cartan]
        if kind == "root":
            self.pairing = tuple(tuple(int(x) for x in row) for row in a)
        else:
            self.pairing = _identity_mat(n)
        # coordinate change from root coords to X coords, coroot to Y coords
        at = [[a[j][i] for j in range(n)] for i in range(n)]
        self._x_change = at if kind == "weight" else None  # c = A^T r
        self._x_change_inv = mat_inv(at) if kind == "weight" else None
        self._y_change = a if kind == "adjoint" else None  # d = A m
        self._y_change_inv = mat_inv(a) if kind == "adjoint" else None
        self._x_cache: dict[Mat, Mat] = {}
        self._y_cache: dict[Mat, Mat] = {}

    @property
    def rank(self) -> int:
        return self.system.rank

    @staticmethod
    def _convert(mat: Mat, change, change_inv, cache: dict[Mat, Mat]) -> Mat:
        if change is None:
            return mat
        if mat not in cache:
            n = len(mat)
            prod = [
                [
                    sum(
                        change[i][k] * mat[k][l] * change_inv[l][j]
                        for k in range(n)
                        for l in range(n)
                    )
                    for j in range(n)
                ]
                for i in range(n)
            ]
            out = []
            for row in prod:
                orow = []
                for x in row:
                    if Q(x).denominator != 1:
                        raise ValueError("lattice is not stable under the action")
                    orow.append(int(x))
                out.append(tuple(orow))
            cache[mat] = tuple(out)
        return cache[mat]

    def x_matrix(self, w: WeylElement) -> Mat:
        """Matrix of w on X coordinates."""
        return self._convert(
            w.mat_root, self._x_change, self._x_change_inv, self._x_cache
        )

    def y_matrix(self, w: WeylElement) -> Mat:
        """Matrix of w on Y coordinates."""
        return self._convert(
            w.mat_coroot, self._y_change, self._y_change_inv, self._y_cache
        )

    def act_x(self, w: WeylElement, coords) -> tuple:
        m = self.x_matrix(w)
        return tuple(sum(row[k] * coords[k] for k in range(len(coords))) for row in m)

    def act_y(self, w: WeylElement, coords) -> tuple:
        m = self.y_matrix(w)
        return tuple(sum(row[k] * coords[k] for k in range(len(coords))) for row in m)

    def pair(self, x, y):
        """The pairing <x, y> of X and Y coordinates."""
        n = self.rank
        return sum(
            x[i] * self.pairing[i][j] * y[j] for i in range(n) for j in range(n)
        )

    # -- distinguished vectors, in pair coordinates -------------------------

    def root_to_x(self, root_coords) -> tuple:
        """X coordinates of a root-lattice vector (given on simple roots)."""
        if self._x_change is None:
            return tuple(root_coords)
        n = self.rank
        return tuple(
            sum(self._x_change[i][k] * root_coords[k] for k in range(n))
            for i in range(n)
        )

    def x_to_root(self, x_coords) -> tuple:
        """Simple-root coordinates (possibly fractional) of an X vector."""
        if self._x_change is None:
            return tuple(x_coords)
        n = self.rank
        return tuple(
            sum(self._x_change_inv[i][k] * Q(x_coords[k]) for k in range(n))
            for i in range(n)
        )

    def coroot_to_y(self, coroot_coords) -> tuple:
        """Y coordinates of a coroot-lattice vector (given on simple coroots)."""
        if self._y_change is None:
            return tuple(coroot_coords)
        n = self.rank
        return tuple(
            sum(self._y_change[i][k] * coroot_coords[k] for k in range(n))
            for i in range(n)
        )

    def simple_root_x(self, i: int) -> tuple:
        return self.root_to_x(_unit(self.rank, i))

    def simple_coroot_y(self, i: int) -> tuple:
        return self.coroot_to_y(_unit(self.rank, i))

    def theta_x(self) -> tuple:
        return self.root_to_x(self.system.highest_root)

    def theta_coroot_y(self) -> tuple:
        return self.coroot_to_y(self.system.highest_root_coroot)

    def positive_roots_x(self) -> list[tuple]:
        return [self.root_to_x(r) for r in self.system.positive_roots]

    def roots_x(self) -> list[tuple]:
        return [self.root_to_x(r) for r in self.system.roots]
