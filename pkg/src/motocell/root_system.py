"""Finite root systems, Weyl groups and Bruhat cells of flag varieties G/P.

Nodes use Bourbaki numbering (1-based).  The Cartan matrix is
``A[i][j] = <alpha_i^vee, alpha_j> = 2 (alpha_i, alpha_j) / (alpha_i, alpha_i)``,
so row ``i`` belongs to the coroot of node ``i``.

Weyl group elements are stored by their action on the simple roots: column
``j`` of the element matrix is the image of ``alpha_j`` in simple-root
coordinates.  Parabolic quotients are enumerated by BFS over the orbit of a
weight that is strictly dominant exactly off the parabolic, so ``W`` itself is
never materialized.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from math import prod

import numpy as np

from motocell import _kernels
from motocell.cells import CellInventory, SignedTatePolynomial
from motocell.errors import InvalidType, ResourceLimit, ValidationError

DEFAULT_BUDGET = 10**6

FAMILIES = "ABCDEFG"

_E_EDGES = [(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4)]

# degrees of the basic invariants; |W| is their product
_DEGREES = {
    ("E", 6): (2, 5, 6, 8, 9, 12),
    ("E", 7): (2, 6, 8, 10, 12, 14, 18),
    ("E", 8): (2, 8, 12, 14, 18, 20, 24, 30),
    ("F", 4): (2, 6, 8, 12),
    ("G", 2): (2, 6),
}


def _check_family_rank(family, rank):
    if family not in FAMILIES or not isinstance(rank, int) or rank < 1:
        raise InvalidType(f"no finite root system {family}{rank}")
    valid = {
        "A": rank >= 1,
        "B": rank >= 1,
        "C": rank >= 1,
        "D": rank >= 2,
        "E": rank in (6, 7, 8),
        "F": rank == 4,
        "G": rank == 2,
    }[family]
    if not valid:
        raise InvalidType(f"no finite root system {family}{rank}")


def gram_matrix(family: str, rank: int) -> list:
    """Symmetric bilinear form on simple roots (short roots have squared length 2)."""
    _check_family_rank(family, rank)
    n = rank
    g = [[0] * n for _ in range(n)]

    def edge(i, j, v):
        g[i - 1][j - 1] = g[j - 1][i - 1] = v

    if family == "A":
        for i in range(n):
            g[i][i] = 2
        for i in range(1, n):
            edge(i, i + 1, -1)
    elif family == "B":
        for i in range(n):
            g[i][i] = 4
        g[n - 1][n - 1] = 2
        for i in range(1, n):
            edge(i, i + 1, -2)
    elif family == "C":
        for i in range(n):
            g[i][i] = 2
        g[n - 1][n - 1] = 4
        for i in range(1, n - 1):
            edge(i, i + 1, -1)
        if n > 1:
            edge(n - 1, n, -2)
    elif family == "D":
        for i in range(n):
            g[i][i] = 2
        for i in range(1, n - 1):
            edge(i, i + 1, -1)
        if n >= 3:
            edge(n - 2, n, -1)
    elif family == "E":
        for i in range(n):
            g[i][i] = 2
        for i, j in _E_EDGES:
            if j <= n:
                edge(i, j, -1)
    elif family == "F":
        for i, d in enumerate((4, 4, 2, 2)):
            g[i][i] = d
        edge(1, 2, -2)
        edge(2, 3, -2)
        edge(3, 4, -1)
    elif family == "G":
        g[0][0], g[1][1] = 2, 6
        edge(1, 2, -3)
    return g


def _leading_minors_positive(m) -> bool:
    """Sylvester's criterion by exact fraction-free elimination."""
    a = [[Fraction(x) for x in row] for row in m]
    n = len(a)
    for k in range(n):
        if a[k][k] <= 0:
            return False
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            for j in range(k, n):
                a[i][j] -= f * a[k][j]
    return True


def _symmetrizer(cartan):
    """Positive ``d`` with ``d_i A_ij = d_j A_ji``, or None if none exists."""
    n = len(cartan)
    d = [None] * n
    for root in range(n):
        if d[root] is not None:
            continue
        d[root] = Fraction(1)
        stack = [root]
        while stack:
            i = stack.pop()
            for j in range(n):
                if i == j or cartan[i][j] == 0:
                    continue
                if cartan[j][i] == 0:
                    return None
                dj = d[i] * cartan[i][j] / cartan[j][i]
                if d[j] is None:
                    d[j] = dj
                    stack.append(j)
                elif d[j] != dj:
                    return None
    return d


@dataclass(frozen=True)
class CartanDatum:
    family: str
    rank: int
    cartan_matrix: tuple
    node_labels: tuple = ()

    def __post_init__(self):
        _check_family_rank(self.family, self.rank)
        a = self.cartan_matrix
        n = self.rank
        if len(a) != n or any(len(row) != n for row in a):
            raise InvalidType("Cartan matrix has the wrong shape")
        if not self.node_labels:
            object.__setattr__(self, "node_labels", tuple(range(1, n + 1)))
        if tuple(self.node_labels) != tuple(range(1, n + 1)):
            raise InvalidType("node labels must be 1..rank")
        for i in range(n):
            if a[i][i] != 2:
                raise InvalidType("Cartan diagonal must be 2")
            for j in range(n):
                if i != j and a[i][j] > 0:
                    raise InvalidType("off-diagonal Cartan entries must be <= 0")
        d = _symmetrizer(a)
        if d is None:
            raise InvalidType("Cartan matrix is not symmetrizable")
        sym = [[d[i] * a[i][j] for j in range(n)] for i in range(n)]
        if not _leading_minors_positive(sym):
            raise InvalidType("Cartan matrix is not of finite type")

    @property
    def name(self) -> str:
        return f"{self.family}{self.rank}"

    @cached_property
    def matrix(self) -> np.ndarray:
        return np.array(self.cartan_matrix, dtype=np.int64)

    @cached_property
    def roots(self) -> tuple:
        """All roots in simple-root coordinates, sorted."""
        return _roots(self.cartan_matrix)

    @cached_property
    def positive_roots(self) -> tuple:
        return tuple(r for r in self.roots if all(c >= 0 for c in r))

    def parabolic_positive_roots(self, parabolic_nodes) -> tuple:
        idx = {label - 1 for label in parabolic_nodes}
        return tuple(r for r in self.positive_roots
                     if all(c == 0 or i in idx for i, c in enumerate(r)))


def _roots(a) -> tuple:
    n = len(a)
    simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    seen = set(simple)
    stack = list(simple)
    while stack:
        beta = stack.pop()
        for i in range(n):
            pairing = sum(a[i][k] * beta[k] for k in range(n))
            if pairing:
                img = list(beta)
                img[i] -= pairing
                img = tuple(img)
                if img not in seen:
                    seen.add(img)
                    stack.append(img)
    return tuple(sorted(seen))


def order_from_heights(cartan) -> int:
    """|W| from the height distribution of the positive roots.

    The number of positive roots of height ``k`` equals the number of
    exponents ``>= k``, and ``|W| = prod(m_i + 1)``.  Works for reducible
    Cartan matrices too (the counts simply add).
    """
    a = [list(map(int, row)) for row in cartan]
    if not a:
        return 1
    heights = [sum(r) for r in _roots(a) if sum(r) > 0]
    top = max(heights)
    at_least = [0] + [sum(1 for h in heights if h == k) for k in range(1, top + 2)]
    return prod((k + 1) ** (at_least[k] - at_least[k + 1]) for k in range(1, top + 1))


def build_cartan(family: str, rank: int) -> CartanDatum:
    family = str(family).upper()
    g = gram_matrix(family, rank)
    a = tuple(tuple(2 * g[i][j] // g[i][i] for j in range(rank)) for i in range(rank))
    return CartanDatum(family, rank, a)


@dataclass(frozen=True)
class WeylElement:
    canonical_form: tuple  # images of the simple roots
    length: int = field(default=0, compare=False)

    @classmethod
    def from_matrix(cls, m, length=0) -> "WeylElement":
        m = np.asarray(m)
        return cls(tuple(tuple(int(x) for x in m[:, j]) for j in range(m.shape[1])), int(length))

    def matrix(self) -> np.ndarray:
        return np.array(self.canonical_form, dtype=np.int64).T

    def apply(self, root) -> tuple:
        return tuple(int(x) for x in self.matrix() @ np.asarray(root, dtype=np.int64))

    def sort_key(self):
        return (self.length, self.canonical_form)


def identity_element(datum: CartanDatum) -> WeylElement:
    return WeylElement.from_matrix(np.eye(datum.rank, dtype=np.int64), 0)


def inversion_count(datum: CartanDatum, elem: WeylElement) -> int:
    """Number of positive roots sent to negative roots."""
    m = elem.matrix()
    pos = np.array(datum.positive_roots, dtype=np.int64)
    images = pos @ m.T
    return int(np.sum(np.all(images <= 0, axis=1)))


def is_minimal_representative(elem: WeylElement, parabolic_nodes) -> bool:
    """``w`` is in ``W^P`` iff it keeps every parabolic simple root positive."""
    return all(all(c >= 0 for c in elem.canonical_form[label - 1]) for label in parabolic_nodes)


def _check_nodes(datum, nodes) -> frozenset:
    nodes = frozenset(int(x) for x in nodes)
    bad = nodes - set(datum.node_labels)
    if bad:
        raise ValidationError(f"nodes {sorted(bad)} not in {datum.name}")
    return nodes


@dataclass(frozen=True)
class ParabolicQuotient:
    datum: CartanDatum
    parabolic_nodes: frozenset
    representatives: tuple

    def __len__(self):
        return len(self.representatives)

    @property
    def omitted_nodes(self) -> tuple:
        return tuple(x for x in self.datum.node_labels if x not in self.parabolic_nodes)

    @property
    def lengths(self) -> list:
        return [w.length for w in self.representatives]

    @property
    def dimension(self) -> int:
        return max(self.lengths)

    def length_polynomial(self) -> SignedTatePolynomial:
        """Poincare polynomial ``sum_w x**l(w)``."""
        out = {}
        for ell in self.lengths:
            out[ell] = out.get(ell, 0) + 1
        return SignedTatePolynomial(out)


def _check_budget(size, budget):
    if budget is not None and size > budget:
        raise ResourceLimit(f"{size} elements exceed the budget of {budget}")


def weyl_order(datum: CartanDatum, budget: int = DEFAULT_BUDGET, backend=None) -> int:
    """|W| as the size of the orbit of a regular dominant weight."""
    _check_budget(order_from_heights(datum.cartan_matrix), budget)
    total = 0
    for level, _ in _kernels.orbit_levels(datum.matrix, [1] * datum.rank, track=False,
                                          budget=budget, backend=backend):
        total += len(level)
    return total


def levi_order(datum: CartanDatum, parabolic_nodes, budget: int = DEFAULT_BUDGET) -> int:
    """|W_P| for the parabolic subgroup generated by ``parabolic_nodes``."""
    idx = sorted(label - 1 for label in _check_nodes(datum, parabolic_nodes))
    if not idx:
        return 1
    sub = datum.matrix[np.ix_(idx, idx)]
    _check_budget(order_from_heights(sub), budget)
    return sum(len(level) for level, _ in
               _kernels.orbit_levels(sub, [1] * len(idx), track=False, budget=budget))


def weyl_order_by_degrees(datum: CartanDatum) -> int:
    """|W| as the product of the degrees of the basic invariants."""
    n = datum.rank
    if datum.family == "A":
        degrees = range(2, n + 2)
    elif datum.family in "BC":
        degrees = range(2, 2 * n + 1, 2)
    elif datum.family == "D":
        degrees = [*range(2, 2 * n - 1, 2), n]
    else:
        degrees = _DEGREES[(datum.family, n)]
    return prod(degrees)


def parabolic_quotient(datum: CartanDatum, parabolic_nodes, budget: int = DEFAULT_BUDGET,
                       backend=None) -> ParabolicQuotient:
    nodes = _check_nodes(datum, parabolic_nodes)
    idx = sorted(label - 1 for label in nodes)
    levi = order_from_heights(datum.matrix[np.ix_(idx, idx)]) if idx else 1
    _check_budget(order_from_heights(datum.cartan_matrix) // levi, budget)
    start = [0 if label in nodes else 1 for label in datum.node_labels]
    reps = []
    for depth, (_, elems) in enumerate(
            _kernels.orbit_levels(datum.matrix, start, track=True, budget=budget, backend=backend)):
        reps.extend(WeylElement.from_matrix(e, depth) for e in elems)
    reps.sort(key=WeylElement.sort_key)
    return ParabolicQuotient(datum, nodes, tuple(reps))


@lru_cache(maxsize=None)
def flag_variety(family: str, rank: int, parabolic_nodes: frozenset) -> ParabolicQuotient:
    return parabolic_quotient(build_cartan(family, rank), parabolic_nodes)


def omit(datum: CartanDatum, omitted) -> frozenset:
    """Parabolic node set containing every node except ``omitted``."""
    omitted = _check_nodes(datum, omitted)
    return frozenset(datum.node_labels) - omitted


def flag_cell_inventory(quotient: ParabolicQuotient) -> CellInventory:
    """Bruhat cells ``{(2l, l)}`` of the plus-pointed flag variety."""
    return CellInventory.of([(2 * ell, ell) for ell in quotient.lengths])


def weyl_group_elements(datum: CartanDatum, budget: int = DEFAULT_BUDGET) -> list:
    """All of ``W`` by BFS on the Cayley graph; lengths are BFS depths.

    Independent of the weight-orbit kernels; used as a brute-force check.
    """
    n = datum.rank
    a = datum.matrix
    gens = []
    for i in range(n):
        s = np.eye(n, dtype=np.int64)
        s[i, :] -= a[i, :]
        gens.append(s)
    ident = np.eye(n, dtype=np.int64)
    prev_keys = set()
    level = [ident]
    cur_keys = {ident.tobytes()}
    out = []
    depth = 0
    while level:
        out.extend(WeylElement.from_matrix(m, depth) for m in level)
        if len(out) > budget:
            raise ResourceLimit(f"group exceeds budget of {budget} elements")
        nxt, nxt_keys = [], set()
        stack = np.array(level)
        for s in gens:
            for m in np.einsum("ij,kjl->kil", s, stack):
                key = m.tobytes()
                if key not in prev_keys and key not in cur_keys and key not in nxt_keys:
                    nxt_keys.add(key)
                    nxt.append(m)
        prev_keys, cur_keys = cur_keys, nxt_keys
        level = nxt
        depth += 1
    out.sort(key=WeylElement.sort_key)
    return out
