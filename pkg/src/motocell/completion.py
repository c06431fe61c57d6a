"""Two-orbit completions ``X ⊂ Xbar ⊃ D`` with ``Xbar`` and ``D`` flag varieties.

The registry hard-codes the parabolic data (Bourbaki numbering):

=========  ==========================  ==========================  ========
name       ambient ``Xbar``            boundary ``D``              dim X
=========  ==========================  ==========================  ========
HPn(n)     Gr(2, 2n+2) = A_{2n+1}/P_2  SpGr(2, 2n+2) = C_{n+1}/P_2  4n
OP2        E6/P_1                      F4/P_4                      16
AQ_even(n) Q_{2n} = D_{n+1}/P_1        Q_{2n-1} = B_n/P_1          2n
=========  ==========================  ==========================  ========

``AQ_odd(n)`` is a sphere ``S^{2n-1,n}`` outright.  For ``D_2 = A_1 x A_1`` the
quadric ``Q_2 = P^1 x P^1`` omits both nodes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product

from motocell.cells import (
    CellInventory,
    purity_extend,
    signed_poly,
    stable_solve,
    tate_twist,
)
from motocell.certificate import STABLE, CellCertificate, TraceBuilder
from motocell.errors import InvalidParam, UnknownName
from motocell.root_system import flag_cell_inventory, flag_variety, levi_order, weyl_order_by_degrees

NAMES = ("HPn", "OP2", "AQ_odd", "AQ_even")


@dataclass(frozen=True)
class FlagData:
    family: str
    rank: int
    omitted: tuple  # Bourbaki labels not in the parabolic

    @property
    def parabolic_nodes(self) -> frozenset:
        return frozenset(range(1, self.rank + 1)) - frozenset(self.omitted)

    def quotient(self):
        return flag_variety(self.family, self.rank, self.parabolic_nodes)

    def cells(self) -> CellInventory:
        return flag_cell_inventory(self.quotient())

    @property
    def dimension(self) -> int:
        return self.quotient().dimension

    def describe(self) -> str:
        return f"{self.family}{self.rank}/P(omit {','.join(map(str, self.omitted))})"

    def to_dict(self) -> dict:
        return {"family": self.family, "rank": self.rank, "omit": list(self.omitted),
                "parabolic_nodes": sorted(self.parabolic_nodes)}


@dataclass(frozen=True)
class TwoOrbitRecord:
    name: str
    dim_X: int
    ambient: FlagData
    boundary: FlagData
    codim: int = 1
    expected_stable_cells: CellInventory | None = None

    def to_dict(self) -> dict:
        return {
            "kind": "two_orbit",
            "name": self.name,
            "dim_X": self.dim_X,
            "ambient": self.ambient.to_dict(),
            "boundary": self.boundary.to_dict(),
            "codim": self.codim,
            "expected_stable_cells": (None if self.expected_stable_cells is None
                                      else self.expected_stable_cells.to_records()),
        }


@dataclass(frozen=True)
class SphereRecord:
    name: str
    dim: int
    inventory: CellInventory

    def to_dict(self) -> dict:
        return {"kind": "sphere", "name": self.name, "dim": self.dim,
                "inventory": self.inventory.to_records()}


def _even_line(weights) -> CellInventory:
    return CellInventory.of([(2 * w, w) for w in weights])


def registry(name: str, n: int | None = None):
    if name not in NAMES:
        raise UnknownName(f"unknown registry entry {name!r}; choose from {', '.join(NAMES)}")
    if name == "OP2":
        return TwoOrbitRecord("OP2", 16, FlagData("E", 6, (1,)), FlagData("F", 4, (4,)),
                              expected_stable_cells=_even_line([0, 4, 8]))
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise InvalidParam(f"{name} needs an integer parameter n >= 1, got {n!r}")
    if name == "HPn":
        return TwoOrbitRecord(f"HP{n}", 4 * n, FlagData("A", 2 * n + 1, (2,)),
                              FlagData("C", n + 1, (2,)),
                              expected_stable_cells=_even_line(range(0, 2 * n + 1, 2)))
    if name == "AQ_odd":
        return SphereRecord(f"AQ{2 * n - 1}", 2 * n - 1, CellInventory.of([(0, 0), (2 * n - 1, n)]))
    ambient = FlagData("D", n + 1, (1, 2) if n == 1 else (1,))
    return TwoOrbitRecord(f"AQ{2 * n}", 2 * n, ambient, FlagData("B", n, (1,)),
                          expected_stable_cells=_even_line([0, n]))


def registry_dump(entries) -> str:
    return json.dumps([e.to_dict() for e in entries], indent=2) + "\n"


def minimal_stable_cells(rec: TwoOrbitRecord) -> CellInventory:
    """Stable cells of ``X`` from ``chi(Xbar) - x^codim chi(D)`` (even-pure splitting)."""
    out = stable_solve(rec.ambient.cells(), tate_twist(rec.boundary.cells(), rec.codim))
    if rec.expected_stable_cells is not None and not out.same_cells(rec.expected_stable_cells):
        raise AssertionError(f"{rec.name}: stable cells {out} != expected {rec.expected_stable_cells}")
    return out


def minimal_stable_certificate(rec: TwoOrbitRecord) -> CellCertificate:
    tb = TraceBuilder()
    a = tb.add("bruhat", STABLE, flag=rec.ambient.describe())
    b = tb.add("bruhat", STABLE, flag=rec.boundary.describe())
    tb.add("stable-split", STABLE, [a, b], codim=rec.codim)
    return tb.certificate("minimal")


def suspended_unstable_cells(rec: TwoOrbitRecord):
    """Cells of ``Sigma(X_+)`` from the Bruhat cells of ``Xbar`` and ``D`` (level 1)."""
    inv = purity_extend(rec.ambient.cells(), rec.boundary.cells(), rec.codim, 0)
    tb = TraceBuilder()
    a = tb.add("bruhat", 0, flag=rec.ambient.describe())
    b = tb.add("bruhat", 0, flag=rec.boundary.describe())
    t = tb.add("atacc", 0, piece=rec.boundary.describe(), reason="Bruhat cells are affine spaces")
    thom = tb.add("thom", 0, [b, t], codim=rec.codim)
    tb.add("purity", 1, [a, thom], components=1)
    return inv, tb.certificate()


def completion_level(ambient_level: int, n_components: int) -> int:
    """Suspension level of ``X`` when ``Xbar`` sits at ``ambient_level`` and the
    boundary divisor has ``n_components`` smooth atacc components."""
    if ambient_level < 0 or n_components < 0:
        raise InvalidParam("levels and component counts are nonnegative")
    return ambient_level + n_components


def brute_force_odd_quadric(n: int, q: int) -> int:
    """``#{(x, y) in F_q^n x F_q^n : sum x_i y_i = 1}`` for prime ``q``."""
    count = 0
    for x in product(range(q), repeat=n):
        for y in product(range(q), repeat=n):
            if sum(a * b for a, b in zip(x, y)) % q == 1:
                count += 1
    return count


def _closed_form_quadric(d: int):
    """Poincare polynomial coefficients of a smooth projective quadric of dim ``d``."""
    coeffs = [1] * (d + 1)
    if d % 2 == 0:
        coeffs[d // 2] += 1
    return coeffs


def verify_record(rec) -> dict:
    """Named pass/fail checks for a registry record."""
    report = {}
    if isinstance(rec, SphereRecord):
        cells = rec.inventory.expanded()
        report["sphere_shape"] = (len(cells) == 2 and cells[0] == (0, 0)
                                  and cells[1].p >= cells[1].w)
        report["dimension"] = rec.inventory.max_weight <= rec.dim
        return report
    report["ambient_dim"] = rec.ambient.dimension == rec.dim_X
    report["boundary_dim"] = rec.boundary.dimension == rec.dim_X - rec.codim
    chi_amb = signed_poly(rec.ambient.cells())
    chi_bdy = signed_poly(rec.boundary.cells())
    if rec.expected_stable_cells is not None:
        chi_x = signed_poly(rec.expected_stable_cells)
        report["chi_identity"] = chi_amb == chi_x + chi_bdy.shift(rec.codim)
        report["coset_counts"] = (len(rec.ambient.quotient())
                                  == len(rec.expected_stable_cells) + len(rec.boundary.quotient()))
    diff = chi_amb - chi_bdy.shift(rec.codim)
    report["nonnegative_split"] = all(c >= 0 for c in diff.coefficients.values())
    for label, flag in (("ambient", rec.ambient), ("boundary", rec.boundary)):
        q = flag.quotient()
        coeffs = q.length_polynomial().to_list()
        report[f"{label}_poincare_symmetric"] = coeffs == coeffs[::-1]
        report[f"{label}_coset_index"] = (
            weyl_order_by_degrees(q.datum) == levi_order(q.datum, q.parabolic_nodes) * len(q))
    if rec.name.startswith("AQ"):
        report["ambient_quadric_closed_form"] = (
            signed_poly(rec.ambient.cells()).to_list() == _closed_form_quadric(rec.ambient.dimension))
        report["boundary_quadric_closed_form"] = (
            signed_poly(rec.boundary.cells()).to_list() == _closed_form_quadric(rec.boundary.dimension))
    return report

