"""Bigraded cell inventories and the operators acting on them.

A cell inventory is a multiset of motivic-sphere bidegrees ``(p, w)``; attaching
maps are never represented.  Inventories are pointed:

* ``plus``: a disjoint basepoint was added to a variety, so each connected
  component contributes a ``(0, 0)`` cell (the ``S^0`` summand).
* ``reduced``: the basepoint already lies in the space (suspensions, Thom
  spaces).

Suspension sends ``(p, w) -> (p + 1, w)``; a Thom twist by a trivial rank-``c``
bundle sends ``(p, w) -> (p + 2c, w + c)``.

The signed Tate polynomial ``chi(I) = sum (-1)**p * x**w`` is additive under
disjoint union, multiplicative under products and satisfies
``chi(suspend(I, k)) = (-1)**k chi(I)`` and ``chi(twist(I, c)) = x**c chi(I)``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple

from motocell.errors import (
    DimensionTooSmall,
    NonSplit,
    NotEvenPure,
    PointingMismatch,
    ValidationError,
)

PLUS = "plus"
REDUCED = "reduced"
_POINTINGS = (PLUS, REDUCED)


class Bidegree(NamedTuple):
    p: int
    w: int


def _cell_key(item):
    (p, w), _ = item
    return (w, p)


@dataclass(frozen=True)
class CellInventory:
    """Multiset of bidegrees, stored as ``((Bidegree, mult), ...)`` sorted by (w, p)."""

    cells: tuple = ()
    pointing: str = PLUS

    def __post_init__(self):
        if self.pointing not in _POINTINGS:
            raise ValidationError(f"unknown pointing {self.pointing!r}")
        for (p, w), mult in self.cells:
            if mult <= 0:
                raise ValidationError(f"non-positive multiplicity {mult} at {(p, w)}")
            if w < 0 or p < w:
                raise ValidationError(f"bidegree {(p, w)} is not a motivic sphere")

    @classmethod
    def of(cls, cells=(), pointing: str = PLUS) -> "CellInventory":
        """Build from a mapping ``{(p, w): mult}`` or an iterable of ``(p, w)`` pairs."""
        if isinstance(cells, Mapping):
            counts = Counter()
            for key, mult in cells.items():
                counts[Bidegree(*key)] += mult
        else:
            counts = Counter(Bidegree(*c) for c in cells)
        items = sorted(((k, m) for k, m in counts.items() if m != 0), key=_cell_key)
        return cls(tuple(items), pointing)

    def counter(self) -> Counter:
        return Counter(dict(self.cells))

    def multiplicity(self, p: int, w: int) -> int:
        return dict(self.cells).get(Bidegree(p, w), 0)

    def expanded(self) -> list:
        """All cells with repetition, in canonical (w, p) order."""
        return [bd for bd, mult in self.cells for _ in range(mult)]

    def __len__(self):
        return sum(m for _, m in self.cells)

    def __iter__(self):
        return iter(self.cells)

    @property
    def max_weight(self) -> int:
        return max((w for (_, w), _ in self.cells), default=0)

    def is_even_pure(self) -> bool:
        return all(p == 2 * w for (p, w), _ in self.cells)

    def same_cells(self, other: "CellInventory") -> bool:
        return self.cells == other.cells

    def to_records(self) -> list:
        return [{"p": p, "w": w, "mult": m} for (p, w), m in self.cells]

    @classmethod
    def from_records(cls, records, pointing: str = PLUS) -> "CellInventory":
        counts = Counter()
        for rec in records:
            counts[(int(rec["p"]), int(rec["w"]))] += int(rec["mult"])
        return cls.of(counts, pointing)

    def __repr__(self):
        body = ", ".join(f"({p},{w})" + (f"x{m}" if m > 1 else "") for (p, w), m in self.cells)
        return f"CellInventory[{self.pointing}]{{{body}}}"


EMPTY = CellInventory((), REDUCED)
POINT = CellInventory.of([(0, 0)])
GM = CellInventory.of([(0, 0), (1, 1)])


class SignedTatePolynomial:
    """Integer polynomial in the weight variable ``x``; immutable."""

    __slots__ = ("_coeffs",)

    def __init__(self, coefficients: Mapping[int, int] | None = None):
        coeffs = {}
        for w, c in (coefficients or {}).items():
            if c:
                coeffs[int(w)] = coeffs.get(int(w), 0) + int(c)
        self._coeffs = {w: coeffs[w] for w in sorted(coeffs) if coeffs[w]}

    @classmethod
    def from_list(cls, coeffs: Iterable[int]) -> "SignedTatePolynomial":
        return cls(dict(enumerate(coeffs)))

    @classmethod
    def monomial(cls, w: int, c: int = 1) -> "SignedTatePolynomial":
        return cls({w: c})

    @property
    def coefficients(self) -> dict:
        return dict(self._coeffs)

    def coefficient(self, w: int) -> int:
        return self._coeffs.get(w, 0)

    def to_list(self) -> list:
        if not self._coeffs:
            return []
        if min(self._coeffs) < 0:
            raise ValueError("negative weight")
        return [self._coeffs.get(i, 0) for i in range(max(self._coeffs) + 1)]

    @property
    def degree(self) -> int:
        return max(self._coeffs, default=-1)

    def is_zero(self) -> bool:
        return not self._coeffs

    def __eq__(self, other):
        if isinstance(other, int):
            other = SignedTatePolynomial({0: other})
        if not isinstance(other, SignedTatePolynomial):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self):
        return hash(tuple(self._coeffs.items()))

    def __add__(self, other):
        out = dict(self._coeffs)
        for w, c in other._coeffs.items():
            out[w] = out.get(w, 0) + c
        return SignedTatePolynomial(out)

    def __neg__(self):
        return SignedTatePolynomial({w: -c for w, c in self._coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return SignedTatePolynomial({w: c * other for w, c in self._coeffs.items()})
        out = {}
        for w1, c1 in self._coeffs.items():
            for w2, c2 in other._coeffs.items():
                out[w1 + w2] = out.get(w1 + w2, 0) + c1 * c2
        return SignedTatePolynomial(out)

    __rmul__ = __mul__

    def shift(self, c: int) -> "SignedTatePolynomial":
        """Multiply by ``x**c``."""
        return SignedTatePolynomial({w + c: v for w, v in self._coeffs.items()})

    def __call__(self, x):
        return sum(c * x**w for w, c in self._coeffs.items())

    def to_json(self) -> dict:
        return {str(w): c for w, c in self._coeffs.items()}

    def __repr__(self):
        if not self._coeffs:
            return "0"
        out = ""
        for w, c in self._coeffs.items():
            mono = "" if w == 0 else ("x" if w == 1 else f"x^{w}")
            mag = "" if mono and abs(c) == 1 else str(abs(c))
            sign = "-" if c < 0 else "+"
            out += (f" {sign} " if out else ("-" if c < 0 else "")) + mag + mono
        return out


# -- operators ---------------------------------------------------------------


def union(*invs: CellInventory) -> CellInventory:
    """Disjoint union of cell multisets (a wedge of the cell summands)."""
    counts = Counter()
    for inv in invs:
        counts.update(dict(inv.cells))
    pointing = PLUS if any(inv.pointing == PLUS for inv in invs) else REDUCED
    return CellInventory.of(counts, pointing)


def suspend(inv: CellInventory, k: int) -> CellInventory:
    if k < 0:
        raise ValidationError("suspension degree must be nonnegative")
    if k == 0:
        return inv
    return CellInventory.of({(p + k, w): m for (p, w), m in inv.cells}, REDUCED)


def tate_twist(inv: CellInventory, c: int) -> CellInventory:
    """Thom space of the trivial rank-``c`` bundle: smash with ``S^{2c,c}``."""
    if c < 0:
        raise ValidationError("twist must be nonnegative")
    if c == 0:
        return inv
    return CellInventory.of({(p + 2 * c, w + c): m for (p, w), m in inv.cells}, REDUCED)


def product_inventory(a: CellInventory, b: CellInventory) -> CellInventory:
    """Kunneth convolution of two plus inventories.

    Only meaningful stably: cartesian products of unstably cellular spaces are
    not known to be unstably cellular.
    """
    if a.pointing != PLUS or b.pointing != PLUS:
        raise PointingMismatch("product_inventory needs plus-pointed inputs")
    counts = Counter()
    for (p1, w1), m1 in a.cells:
        for (p2, w2), m2 in b.cells:
            counts[(p1 + p2, w1 + w2)] += m1 * m2
    return CellInventory.of(counts, PLUS)


def signed_poly(inv: CellInventory) -> SignedTatePolynomial:
    out = {}
    for (p, w), m in inv.cells:
        out[w] = out.get(w, 0) + (-1) ** p * m
    return SignedTatePolynomial(out)


def count_from_poly(poly: SignedTatePolynomial, d: int, q: int) -> int:
    """Evaluate ``sum c_w q**(d - w)`` exactly."""
    if poly.degree > d:
        raise DimensionTooSmall(f"dimension {d} below weight {poly.degree}")
    return sum(c * q ** (d - w) for w, c in poly.coefficients.items())


def point_count_eval(inv: CellInventory, d: int, q: int) -> int:
    """Finite-field point count predicted by a plus inventory of a ``d``-dimensional variety.

    Consistency oracle only; valid for the mixed Tate varieties handled here.
    """
    if inv.pointing != PLUS:
        raise PointingMismatch("point counts need a plus inventory")
    if inv.max_weight > d:
        raise DimensionTooSmall(f"dimension {d} below weight {inv.max_weight}")
    return sum((-1) ** p * m * q ** (d - w) for (p, w), m in inv.cells)


def purity_extend(ambient: CellInventory, closed: CellInventory, c: int, k: int = 0) -> CellInventory:
    """Cells of ``Sigma^{k+1}(X_+)`` for ``X = ambient - closed``.

    Both inputs are plus inventories of the ambient variety and of the closed
    piece of codimension ``c``, each ``k``-suspended cellular.  Suspending the
    purity cofiber sequence ``X_+ -> ambient_+ -> Th(N)`` ``k`` times and
    continuing one step gives ``Sigma^{k+1} X_+`` as the cofiber of
    ``Sigma^k ambient_+ -> Sigma^k Th(N)``.  The result is redundant: cells that
    would cancel through attaching maps are all kept.
    """
    if ambient.pointing != PLUS or (len(closed) and closed.pointing != PLUS):
        raise PointingMismatch("purity_extend needs plus inventories")
    if c < 1:
        raise ValidationError("codimension must be at least 1")
    inv, _ = leveled_purity(ambient, k, closed, k, c)
    return inv


def leveled_purity(open_inv: CellInventory, open_level: int,
                   closed_inv: CellInventory, closed_level: int, c: int):
    """One purity step on already-suspended inventories.

    ``open_inv`` holds the cells of ``Sigma^a(Y_+)`` and ``closed_inv`` those of
    ``Sigma^b(Z_+)`` for a closed ``Z`` of codimension ``c`` in ``Y``.  Returns
    the cells of ``Sigma^{k+1}((Y - Z)_+)`` with ``k = max(a, b)``, and ``k + 1``.
    """
    k = max(open_level, closed_level)
    thom = tate_twist(suspend(closed_inv, k - closed_level), c)
    out = union(thom, suspend(open_inv, k - open_level + 1))
    out = CellInventory(out.cells, REDUCED)
    expected = (signed_poly(open_inv) * (-1) ** open_level
                - signed_poly(closed_inv).shift(c) * (-1) ** closed_level) * (-1) ** (k + 1)
    if signed_poly(out) != expected:
        raise AssertionError(f"purity chi mismatch: {signed_poly(out)} != {expected}")
    return out, k + 1


def even_pure_lift(poly: SignedTatePolynomial) -> CellInventory:
    """The inventory ``{(2w, w): coeff}``; coefficients must be nonnegative."""
    neg = {w: c for w, c in poly.coefficients.items() if c < 0}
    if neg:
        raise NonSplit(f"negative coefficients {neg} admit no even-pure lift")
    return CellInventory.of({(2 * w, w): c for w, c in poly.coefficients.items()}, PLUS)


def stable_solve(total: CellInventory, thom: CellInventory) -> CellInventory:
    """Minimal stable inventory of the open complement, assuming the purity sequence splits.

    The splitting holds for even-pure inventories, where every attaching map
    vanishes motivically for weight reasons.
    """
    for name, inv in (("total", total), ("thom", thom)):
        if not inv.is_even_pure():
            raise NotEvenPure(f"{name} inventory {inv} has cells off the line p = 2w")
    return even_pure_lift(signed_poly(total) - signed_poly(thom))
