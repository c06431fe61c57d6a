"""Complements of affine subspace arrangements in A^n.

``complement_cells`` follows the inductive purity argument: remove one
subspace ``L0`` at a time.  With ``X' = A^n - (other members)`` and
``Z = L0 ∩ X'`` (itself an arrangement complement inside ``L0``), the purity
cofiber sequence ``X -> X' -> Th(N) -> Sigma X`` with trivial normal bundle of
rank ``n - dim L0`` shows ``X`` is one suspension worse than the worse of
``X'`` and ``Z``.  An arrangement of ``r + 1`` subspaces therefore lands at
suspension level at most ``r``.

The point-count oracle (inclusion-exclusion, and the Mobius function of the
intersection lattice) never touches the recursion.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import NamedTuple

from motocell import linalg
from motocell.cells import (
    EMPTY,
    POINT,
    CellInventory,
    SignedTatePolynomial,
    leveled_purity,
    signed_poly,
)
from motocell.certificate import CellCertificate, TraceBuilder
from motocell.errors import (
    AmbientMismatch,
    EmptyArrangement,
    NonNormalized,
    NotHyperplanes,
    ValidationError,
)


@dataclass(frozen=True)
class Subspace:
    """Affine subspace ``offset + span(basis)``, kept in canonical form.

    The basis is in reduced row echelon form and the offset is zero in every
    pivot column, so two subspaces are equal iff their fields are equal.
    """

    ambient_dim: int
    offset: tuple
    basis: tuple = ()

    def __post_init__(self):
        n = self.ambient_dim
        offset = tuple(linalg.parse_rational(x) for x in self.offset)
        basis = [tuple(linalg.parse_rational(x) for x in v) for v in self.basis]
        if len(offset) != n or any(len(v) != n for v in basis):
            raise AmbientMismatch(f"vectors must have length {n}")
        red, pivots = linalg.rref(basis, n)
        if len(red) != len(basis):
            raise ValidationError("basis vectors are linearly dependent")
        offset = linalg.reduce_against(offset, red, pivots)
        object.__setattr__(self, "offset", offset)
        object.__setattr__(self, "basis", tuple(red))

    @classmethod
    def linear(cls, basis, ambient_dim=None) -> "Subspace":
        n = ambient_dim if ambient_dim is not None else len(basis[0])
        return cls(n, (0,) * n, tuple(basis))

    @classmethod
    def whole(cls, n: int) -> "Subspace":
        return cls(n, (0,) * n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def coordinate_hyperplane(cls, n: int, i: int, value=0) -> "Subspace":
        """``{x_i = value}``."""
        offset = tuple(value if j == i else 0 for j in range(n))
        return cls(n, offset, tuple(tuple(int(j == k) for j in range(n)) for k in range(n) if k != i))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def codim(self) -> int:
        return self.ambient_dim - self.dim

    @property
    def pivots(self) -> tuple:
        return tuple(next(i for i, x in enumerate(v) if x != 0) for v in self.basis)

    def sort_key(self):
        return (self.dim, self.offset, self.basis)

    def contains_point(self, point) -> bool:
        diff = [linalg.parse_rational(a) - b for a, b in zip(point, self.offset)]
        return not any(linalg.reduce_against(diff, self.basis, self.pivots))

    def contains(self, other: "Subspace") -> bool:
        if other.ambient_dim != self.ambient_dim:
            raise AmbientMismatch("different ambient spaces")
        if not self.contains_point(other.offset):
            return False
        return all(not any(linalg.reduce_against(v, self.basis, self.pivots)) for v in other.basis)

    def equations(self):
        """``(normals, values)`` with ``self = {x : normal . x = value}``."""
        normals = linalg.nullspace(self.basis, self.ambient_dim)
        values = [sum(a * b for a, b in zip(nv, self.offset)) for nv in normals]
        return normals, values

    def coordinates(self, point) -> tuple:
        """Coordinates of a point of ``self`` in the chart ``offset + sum t_j basis_j``."""
        return tuple(linalg.parse_rational(point[p]) - self.offset[p] for p in self.pivots)

    def chart(self, sub: "Subspace") -> "Subspace":
        """A subspace of ``self`` rewritten in ``self``'s own coordinates."""
        piv = self.pivots
        return Subspace(self.dim, self.coordinates(sub.offset),
                        tuple(tuple(v[p] for p in piv) for v in sub.basis))

    def transform(self, matrix, shift) -> "Subspace":
        """Image under ``x -> matrix . x + shift`` (matrix invertible)."""
        mat = [[linalg.parse_rational(x) for x in row] for row in matrix]
        apply = lambda v: tuple(sum(a * b for a, b in zip(row, v)) for row in mat)  # noqa: E731
        off = tuple(a + linalg.parse_rational(b) for a, b in zip(apply(self.offset), shift))
        return Subspace(self.ambient_dim, off, tuple(apply(v) for v in self.basis))

    def to_dict(self) -> dict:
        return {
            "offset": [linalg.format_rational(x) for x in self.offset],
            "basis": [[linalg.format_rational(x) for x in v] for v in self.basis],
        }


def intersect(a: Subspace, b: Subspace):
    """``a ∩ b`` in canonical form, or None when empty."""
    if a.ambient_dim != b.ambient_dim:
        raise AmbientMismatch(f"ambient dimensions {a.ambient_dim} and {b.ambient_dim} differ")
    na, va = a.equations()
    nb, vb = b.equations()
    sol = linalg.solve_affine(na + nb, va + vb, a.ambient_dim)
    if sol is None:
        return None
    point, directions = sol
    return Subspace(a.ambient_dim, point, tuple(directions))


@dataclass(frozen=True)
class Arrangement:
    ambient_dim: int
    subspaces: tuple = ()

    def __post_init__(self):
        subs = tuple(self.subspaces)
        for s in subs:
            if s.ambient_dim != self.ambient_dim:
                raise AmbientMismatch(f"subspace in A^{s.ambient_dim} inside A^{self.ambient_dim}")
        object.__setattr__(self, "subspaces", subs)

    def __len__(self):
        return len(self.subspaces)

    def is_normalized(self) -> bool:
        return normalize(self) == self

    def to_dict(self) -> dict:
        return {"ambient_dim": self.ambient_dim, "subspaces": [s.to_dict() for s in self.subspaces]}

    @classmethod
    def from_dict(cls, data) -> "Arrangement":
        try:
            n = int(data["ambient_dim"])
            subs = tuple(Subspace(n, tuple(s["offset"]), tuple(tuple(v) for v in s.get("basis", [])))
                         for s in data["subspaces"])
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"malformed arrangement: {exc}") from exc
        return cls(n, subs)

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def loads(cls, text: str) -> "Arrangement":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"invalid JSON: {exc}") from exc
        return cls.from_dict(data)


def coordinate_hyperplanes(r: int, n: int | None = None) -> Arrangement:
    n = r if n is None else n
    return Arrangement(n, tuple(Subspace.coordinate_hyperplane(n, i) for i in range(r)))


def normalize(arr: Arrangement) -> Arrangement:
    """Drop duplicates and members contained in another member; sort canonically."""
    unique = sorted(set(arr.subspaces), key=Subspace.sort_key)
    keep = [s for s in unique if not any(t != s and t.contains(s) for t in unique)]
    return Arrangement(arr.ambient_dim, tuple(keep))


def restrict(arr: Arrangement, target: Subspace) -> Arrangement:
    """The induced arrangement ``{target ∩ L}`` in ``target``'s coordinates, normalized."""
    pieces = []
    for s in arr.subspaces:
        meet = intersect(target, s)
        if meet is not None:
            pieces.append(target.chart(meet))
    return normalize(Arrangement(target.dim, tuple(pieces)))


# -- cell recursion ----------------------------------------------------------


@dataclass(frozen=True)
class RecursionTrace:
    ambient_dim: int
    n_subspaces: int
    level: int
    bound: int
    pivot: int | None = None
    children: tuple = field(default=())  # (rest, induced) for inductive steps

    def as_dict(self) -> dict:
        return {
            "ambient_dim": self.ambient_dim,
            "n_subspaces": self.n_subspaces,
            "level": self.level,
            "bound": self.bound,
            "pivot": self.pivot,
            "children": [c.as_dict() for c in self.children],
        }

    def nodes(self):
        yield self
        for c in self.children:
            yield from c.nodes()


class ComplementCells(NamedTuple):
    """Cells of ``Sigma^level (X_+)`` for the complement ``X``, with certificate and trace."""

    inventory: CellInventory
    certificate: CellCertificate
    trace: RecursionTrace

    @property
    def level(self) -> int:
        return self.trace.level

    @property
    def bound(self) -> int:
        return self.trace.bound

    def unsuspended_poly(self) -> SignedTatePolynomial:
        """Signed polynomial of ``X_+`` itself: ``(-1)**level chi``."""
        return signed_poly(self.inventory) * (-1) ** self.level


def _pivot_chooser(pivot):
    if callable(pivot):
        return pivot
    if pivot == "first":
        return lambda members: 0
    if pivot == "last":
        return lambda members: len(members) - 1
    if isinstance(pivot, int):
        return lambda members: min(pivot, len(members) - 1)
    raise ValidationError(f"unknown pivot rule {pivot!r}")


def _recurse(members, n, choose, tb):
    if not members:
        step = tb.add("contractible", 0, ambient_dim=n)
        return POINT, 0, RecursionTrace(n, 0, 0, 0), step
    if len(members) == 1:
        (sub,) = members
        c = n - sub.dim
        inv = EMPTY if c == 0 else CellInventory.of([(0, 0), (2 * c - 1, c)])
        step = tb.add("arrangement-base", 0, ambient_dim=n, subspace_dim=sub.dim)
        return inv, 0, RecursionTrace(n, 1, 0, 0), step
    idx = choose(members)
    pivot = members[idx]
    rest = members[:idx] + members[idx + 1:]
    induced = restrict(Arrangement(n, rest), pivot).subspaces
    inv_rest, a, tr_rest, s_rest = _recurse(rest, n, choose, tb)
    inv_ind, b, tr_ind, s_ind = _recurse(induced, pivot.dim, choose, tb)
    c = n - pivot.dim
    inv, level = leveled_purity(inv_rest, a, inv_ind, b, c)
    s_thom = tb.add("thom", b, [s_ind], codim=c)
    step = tb.add("purity", level, [s_rest, s_thom], ambient_dim=n, n_subspaces=len(members))
    trace = RecursionTrace(n, len(members), level, len(members) - 1, idx, (tr_rest, tr_ind))
    return inv, level, trace, step


def complement_cells(arr: Arrangement, pivot="first", check: bool = True) -> ComplementCells:
    """Cell inventory of ``Sigma^level (A^n - union)_+`` with ``level <= #subspaces - 1``.

    ``pivot`` picks the subspace removed at each step (``"first"``, ``"last"``,
    an index, or a callable on the member tuple).  Different pivots may give
    different redundant inventories with the same signed polynomial.
    """
    if not arr.subspaces:
        raise EmptyArrangement("complement_cells needs at least one subspace")
    if not arr.is_normalized():
        raise NonNormalized("normalize the arrangement first")
    tb = TraceBuilder()
    inv, level, trace, _ = _recurse(arr.subspaces, arr.ambient_dim, _pivot_chooser(pivot), tb)
    result = ComplementCells(inv, tb.certificate(), trace)
    if level > trace.bound:
        raise AssertionError(f"level {level} exceeds bound {trace.bound}")
    if check:
        oracle = complement_poly_oracle(arr)
        if result.unsuspended_poly() != oracle:
            raise AssertionError(f"chi {result.unsuspended_poly()} != oracle {oracle}")
    return result


# -- oracles -----------------------------------------------------------------


@dataclass(frozen=True)
class IntersectionLattice:
    """Nonempty intersections ordered by inclusion; ``elements[0]`` is A^n."""

    ambient_dim: int
    elements: tuple
    mobius: dict  # (i, j) -> mu(x_i, x_j) for x_i ⊆ x_j
    covers_ambient: bool = False  # some member is all of A^n

    def leq(self, i: int, j: int) -> bool:
        return (i, j) in self.mobius

    def point_count(self, q: int) -> int:
        if self.covers_ambient:
            return 0
        return sum(self.mobius[(i, 0)] * q ** e.dim for i, e in enumerate(self.elements))


def intersection_lattice(arr: Arrangement) -> IntersectionLattice:
    n = arr.ambient_dim
    top = Subspace.whole(n)
    found = {top}
    frontier = [top]
    while frontier:
        nxt = []
        for e in frontier:
            for s in arr.subspaces:
                meet = intersect(e, s)
                if meet is not None and meet not in found:
                    found.add(meet)
                    nxt.append(meet)
        frontier = nxt
    others = sorted(found - {top}, key=lambda s: (-s.dim, s.offset, s.basis))
    elements = (top, *others)
    m = len(elements)
    below = {(i, j) for i in range(m) for j in range(m) if elements[j].contains(elements[i])}
    mobius = {}
    # mu(x, y) = -sum_{x <= z < y} mu(x, z); visit y by increasing dimension
    order = sorted(range(m), key=lambda k: elements[k].dim)
    for i in range(m):
        for j in order:
            if (i, j) not in below:
                continue
            if i == j:
                mobius[(i, j)] = 1
            else:
                mobius[(i, j)] = -sum(mobius[(i, z)] for z in range(m)
                                      if z != j and (i, z) in below and (z, j) in below)
    covers = any(s.dim == n for s in arr.subspaces)
    return IntersectionLattice(n, elements, mobius, covers)


def complement_poly_oracle(arr: Arrangement) -> SignedTatePolynomial:
    """``sum_z mu(z, A^n) x**(n - dim z)``: point count of the complement in weight form."""
    lat = intersection_lattice(arr)
    n = arr.ambient_dim
    if lat.covers_ambient:
        return SignedTatePolynomial({})
    out = {}
    for i, e in enumerate(lat.elements):
        out[n - e.dim] = out.get(n - e.dim, 0) + lat.mobius[(i, 0)]
    return SignedTatePolynomial(out)


def point_count_inclusion_exclusion(arr: Arrangement, q: int) -> int:
    """``#(A^n - union)(F_q)`` by inclusion-exclusion over all subsets of members."""
    n = arr.ambient_dim
    members = arr.subspaces
    union = 0
    for k in range(1, len(members) + 1):
        for combo in combinations(members, k):
            meet = combo[0]
            for s in combo[1:]:
                meet = intersect(meet, s)
                if meet is None:
                    break
            if meet is not None:
                union += (-1) ** (k + 1) * q ** meet.dim
    return q**n - union


def linearity_degree(arr: Arrangement) -> tuple:
    """``(r - 1, r)``: linearity degrees of the union of ``r`` hyperplanes and of its complement."""
    n = arr.ambient_dim
    if any(s.dim != n - 1 for s in arr.subspaces):
        raise NotHyperplanes("linearity_degree needs hyperplanes")
    r = len(normalize(arr))
    if r == 0:
        return (0, 0)
    return (r - 1, r)

