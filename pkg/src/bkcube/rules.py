"""Single inference rules on degrees and profiles.

Each minimisation rule returns a RuleOutcome carrying every candidate it
weighed, so a derivation can be replayed and displayed term by term.  The
face-relation helpers (``fr_*``) and the stable shifts return bare degrees;
callers wanting them in a trace wrap the inputs into candidates themselves.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .core import Degree, Mode, Profile, as_degree, deg_min, integer_partitions


@dataclass(frozen=True, slots=True)
class Candidate:
    """One term of a minimisation.

    Identified either by the partition blocks that produced it or by a
    short label; ``terms`` holds the addends when the value is a sum.
    """

    value: Degree
    blocks: tuple[int, ...] | None = None
    label: str | None = None
    terms: tuple[Degree, ...] = ()

    def describe(self) -> str:
        name = f"[{','.join(map(str, self.blocks))}]" if self.blocks is not None else self.label
        if len(self.terms) > 1:
            addends = "+".join(str(t) for t in self.terms).replace("+-", "-")
            return f"{name}: {addends} = {self.value}"
        return f"{name}: {self.value}"


@dataclass(frozen=True, slots=True)
class RuleOutcome:
    """A rule application: its candidates and the minimum it settled on."""

    rule: str
    dim: int
    candidates: tuple[Candidate, ...]
    result: Degree

    def __post_init__(self) -> None:
        if self.candidates:
            expect = deg_min([c.value for c in self.candidates])
            if self.result != expect:
                raise ValueError(
                    f"{self.rule}: result {self.result} is not the candidate minimum {expect}"
                )

    def describe(self) -> str:
        if not self.candidates:
            return f"{self.rule} d={self.dim} => {self.result}"
        listing = "; ".join(c.describe() for c in self.candidates)
        return f"{self.rule} d={self.dim}: minimum of {listing} => {self.result}"


def _minimised(rule: str, dim: int, candidates: Iterable[Candidate]) -> RuleOutcome:
    candidates = tuple(candidates)
    return RuleOutcome(rule, dim, candidates, deg_min([c.value for c in candidates]))


def _degree_table(
    d: int, conn1: Degree | int, by_dim: Mapping[int, Degree | int], what: str
) -> dict[int, Degree]:
    table = {1: as_degree(conn1)}
    for s in range(2, d + 1):
        if s not in by_dim:
            raise ValueError(f"missing {what} degree for dimension {s}")
        table[s] = as_degree(by_dim[s])
    return table


def _partition_minimum(rule: str, d: int, base: int, table: dict[int, Degree]) -> RuleOutcome:
    candidates = []
    for blocks in integer_partitions(d):
        value = Degree(base)
        terms = [value]
        for s in blocks:
            terms.append(table[s])
            value = value + table[s]
        candidates.append(Candidate(value=value, blocks=blocks, terms=tuple(terms)))
    return _minimised(rule, d, candidates)


def hbm_cartesian(
    d: int, conn1: Degree | int, cocart: Mapping[int, Degree | int]
) -> RuleOutcome:
    """Cartesian degree of a d-cube from cocartesian data (higher
    Blakers-Massey shape).

    Minimises 1 - d + sum of c(s) over the integer partitions of d, with
    c(1) = conn1 and c(s) = cocart[s] for larger blocks.
    """
    if d < 2:
        raise ValueError(f"hbm_cartesian needs d >= 2, got {d}")
    return _partition_minimum("hbm_cartesian", d, 1 - d, _degree_table(d, conn1, cocart, "cocartesian"))


def dual_hbm_cocartesian(
    d: int, conn1: Degree | int, cart: Mapping[int, Degree | int]
) -> RuleOutcome:
    """Cocartesian degree of a d-cube from cartesian data (dual shape):
    minimises d - 1 + sum of c(s) over the integer partitions of d."""
    if d < 2:
        raise ValueError(f"dual_hbm_cocartesian needs d >= 2, got {d}")
    return _partition_minimum("dual_hbm_cocartesian", d, d - 1, _degree_table(d, conn1, cart, "cartesian"))


def stable_cart_from_cocart(d: int, k: Degree | int) -> Degree:
    """k-cocartesian to cartesian for a d-cube of spectra: k - d + 1.

    Stably the total cofibre of a d-cube is the d-fold suspension of its
    total fibre, so the two degrees sit exactly d - 1 apart; the infinite
    estimate is preserved.
    """
    if d < 1:
        raise ValueError(f"stable shift needs d >= 1, got {d}")
    return as_degree(k) + (1 - d)


def stable_cocart_from_cart(d: int, k: Degree | int) -> Degree:
    """Inverse shift of stable_cart_from_cocart at the same d: k + d - 1."""
    if d < 1:
        raise ValueError(f"stable shift needs d >= 1, got {d}")
    return as_degree(k) + (d - 1)


def fr_square_from_legs(m: Degree | int) -> Degree:
    """Cartesian degree of a square whose two parallel legs are
    m-connected: m - 1."""
    return as_degree(m) - 1


def fr_source_from_total(total: Degree | int, target_face: Degree | int) -> Degree:
    """Cartesian degree of the source face of a cube, from the whole cube
    and the target face: the minimum of the two."""
    return deg_min([total, target_face])


def fr_total_from_faces(source_face: Degree | int, target_face: Degree | int) -> Degree:
    """Cartesian degree of a whole cube from its source and target faces:
    min(source, target - 1)."""
    return deg_min([as_degree(source_face), as_degree(target_face) - 1])


def fr_parallel_map(square_cart: Degree | int, other_map_conn: Degree | int) -> Degree:
    """Connectivity of one leg of a square from the square's cartesian
    degree and the opposite leg: the minimum of the two."""
    return deg_min([square_cart, other_map_conn])


def compose_connectivity(conns: Iterable[Degree | int]) -> Degree:
    """Connectivity of a composite of maps: the minimum of the stages."""
    return deg_min(conns)


def object_to_map_connectivity(k: Degree | int) -> Degree:
    """A k-connected retractive object has a (k+1)-connected structure
    map."""
    return as_degree(k) + 1


def fiber_transfer(total: Profile, base: Profile) -> Profile:
    """Cartesian profile of the fibrewise fibre of a map of cubes.

    Supported exactly when both inputs are cartesian cubes of one
    dimension with conn1 = 3 and degree(d) = d + 2 throughout; the fibre
    cube then carries conn1 = 2 and degree(d) = d + 1.  Anything else is
    an error rather than a guess.
    """
    if total.dim != base.dim:
        raise ValueError(f"fiber_transfer needs equal dims, got {total.dim} and {base.dim}")
    for name, p in (("total", total), ("base", base)):
        if p.mode is not Mode.CARTESIAN:
            raise ValueError(f"fiber_transfer needs cartesian profiles; {name} is {p.mode.value}")
        for d in range(1, p.dim + 1):
            if p.degree(d) != Degree(d + 2):
                raise ValueError(
                    f"fiber_transfer supports only conn1=3, degree(d)=d+2 inputs; "
                    f"{name} has degree {p.degree(d)} at dimension {d}"
                )
    dim = total.dim
    return Profile(dim, Degree(2), Mode.CARTESIAN, {d: Degree(d + 1) for d in range(2, dim + 1)})
