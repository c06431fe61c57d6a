"""Closure filtrations with strata ``A^n x G_m^r`` (B-orbit decompositions of
spherical varieties) and the cell inventories they produce.

Strata are listed in filtration order, closed-most first.  Only codimensions
are checked; which orbit lies in which closure is not.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from motocell.cells import (
    GM,
    POINT,
    CellInventory,
    product_inventory,
    tate_twist,
    union,
)
from motocell.certificate import STABLE, TraceBuilder
from motocell.errors import (
    InconsistentDimensions,
    NotAtacc,
    ShapeMismatch,
    ValidationError,
)


@dataclass(frozen=True)
class Stratum:
    label: str
    affine_rank: int
    torus_rank: int
    codim: int
    atacc: bool = True

    @property
    def dim(self) -> int:
        return self.affine_rank + self.torus_rank

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "affine_rank": self.affine_rank,
            "torus_rank": self.torus_rank,
            "codim": self.codim,
            "atacc": self.atacc,
        }


@dataclass(frozen=True)
class Stratification:
    total_dim: int
    strata: tuple

    def __post_init__(self):
        object.__setattr__(self, "strata", tuple(self.strata))
        problems = _problems(self.total_dim, self.strata)
        if problems:
            raise InconsistentDimensions("; ".join(problems))

    def to_dict(self) -> dict:
        return {"total_dim": self.total_dim, "strata": [s.to_dict() for s in self.strata]}

    @classmethod
    def from_dict(cls, data) -> "Stratification":
        return cls(*_parse(data))

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def loads(cls, text: str) -> "Stratification":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"invalid JSON: {exc}") from exc
        return cls.from_dict(data)


def _problems(total_dim, strata) -> list:
    out = []
    if total_dim < 0:
        out.append("negative total dimension")
    labels = [s.label for s in strata]
    if len(set(labels)) != len(labels):
        out.append("duplicate labels")
    for s in strata:
        if min(s.affine_rank, s.torus_rank, s.codim) < 0:
            out.append(f"{s.label}: negative rank or codimension")
        elif total_dim - s.dim != s.codim:
            out.append(f"{s.label}: dim {s.dim} + codim {s.codim} != {total_dim}")
    n_open = sum(1 for s in strata if s.codim == 0)
    if n_open != 1:
        out.append(f"expected exactly one open stratum, found {n_open}")
    return out


def _parse(data):
    try:
        total = data["total_dim"]
        strata = tuple(
            Stratum(str(s["label"]), s["affine_rank"], s["torus_rank"], s["codim"], s.get("atacc", True))
            for s in data["strata"]
        )
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed stratification: {exc}") from exc
    for v in (total, *(x for s in strata for x in (s.affine_rank, s.torus_rank, s.codim))):
        if not isinstance(v, int) or isinstance(v, bool):
            raise ValidationError(f"expected an integer, got {v!r}")
    if not all(isinstance(s.atacc, bool) for s in strata):
        raise ValidationError("atacc must be a boolean")
    return total, strata


def very_linear_validate(f) -> bool:
    """True iff every stratum is of the form ``A^n x G_m^r`` with consistent dimensions.

    Accepts a ``Stratification`` or raw ingested data (dict or JSON text).
    """
    if isinstance(f, Stratification):
        return not _problems(f.total_dim, f.strata)
    try:
        if isinstance(f, str):
            f = json.loads(f)
        total, strata = _parse(f)
    except (ValidationError, ValueError):
        return False
    return not _problems(total, strata)


def stratum_cells(s: Stratum) -> CellInventory:
    """Plus inventory of ``A^n x G_m^r``: ``{(i, i): C(r, i)}``."""
    inv = POINT
    for _ in range(s.torus_rank):
        inv = product_inventory(inv, GM)
    return inv


def stable_cells_from_filtration(f: Stratification):
    """Union of every stratum's cells twisted by its codimension; not minimal."""
    tb = TraceBuilder()
    pieces = []
    for s in f.strata:
        pieces.append(tate_twist(stratum_cells(s), s.codim))
        tb.add("stable-purity", STABLE, stratum=s.label, codim=s.codim, torus_rank=s.torus_rank)
    inv = union(*pieces)
    return CellInventory(inv.cells, "plus"), tb.certificate()


def tower_cells_unstable(f: Stratification, bundle_ranks=None):
    """Unstable cells from an iterated purity tower ``M_0 = * ⊂ M_1 ⊂ ... ⊂ M_n``.

    Stratum ``i`` is the contractible open piece ``X_i = M_i - V_i``; ``V_i`` is
    a rank ``r_i`` vector bundle over ``M_{i-1}``, closed of codimension
    ``c_i = codim(stratum i-1) - codim(stratum i)``.  Each step replaces
    ``M_i`` by the Thom space over ``V_i ~ M_{i-1}``, so the plus inventory
    grows as ``{(0,0)} ⊔ twist(previous, c_i)``.  Bundle ranks only move
    dimensions around and must fit: ``dim M_0 = 0`` and every ``dim M_i >= 0``.
    """
    strata = f.strata
    ranks = list(bundle_ranks) if bundle_ranks is not None else [0] * len(strata)
    bad = [s.label for s in strata if not s.atacc]
    if bad:
        raise NotAtacc(f"strata {bad} are not flagged atacc")
    if len(ranks) != len(strata):
        raise ShapeMismatch(f"{len(ranks)} bundle ranks for {len(strata)} strata")
    if ranks[0] != 0 or any(r < 0 for r in ranks):
        raise ShapeMismatch("bundle ranks must be nonnegative with no bundle over M_0")
    if any(s.torus_rank for s in strata):
        raise ShapeMismatch("tower pieces must be contractible (torus rank 0)")
    codims = [s.codim for s in strata]
    if any(a <= b for a, b in zip(codims, codims[1:])) or codims[-1] != 0:
        raise ShapeMismatch("codimensions must strictly decrease to the open stratum")
    for i, s in enumerate(strata):
        tail = sum(ranks[i + 1:])
        dim_m = s.affine_rank - tail
        if dim_m < 0 or (i == 0 and dim_m != 0):
            raise ShapeMismatch(f"stratum {s.label}: bundle ranks do not fit the dimensions")

    tb = TraceBuilder()
    step = tb.add("atacc", 0, stratum=strata[0].label, note="M_0 is a point")
    inv = POINT
    for i in range(1, len(strata)):
        c = codims[i - 1] - codims[i]
        inv = union(POINT, tate_twist(inv, c))
        atacc = tb.add("atacc", 0, stratum=strata[i].label)
        step = tb.add("tower", 0, [step, atacc], codim=c, bundle_rank=ranks[i])
    return CellInventory(inv.cells, "plus"), tb.certificate()


def point_count_stratified(f: Stratification, q: int) -> int:
    """``sum_s q**n_s (q - 1)**r_s``."""
    return sum(q**s.affine_rank * (q - 1) ** s.torus_rank for s in f.strata)


def projective_space(n: int) -> Stratification:
    """Schubert cells of P^n, point first."""
    return Stratification(n, tuple(Stratum(f"A{i}", i, 0, n - i) for i in range(n + 1)))


def euler_bookkeeping(f: Stratification) -> int:
    """Strata with a torus factor contribute 0, affine cells 1."""
    return sum(1 for s in f.strata if s.torus_rank == 0)
