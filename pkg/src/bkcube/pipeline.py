"""Profile transforms and the iterated loop-suspension pipeline.

A transform takes a profile and hands back a new one; the traced variants
also report the rule applications they made.  ``iterate`` drives the
loop-suspension step until the profile stops moving and records the whole
run as a Derivation.

Conventions: the connectivity of a comparison map is read off a profile as
its full-cube cartesian degree.  An extent r >= 2 is applied as one block
shift per step (the records carry the extent, so traces show it).  A 1-cube
profile is accepted by every transform in either mode; only its tag flips.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, replace
from typing import Callable

from .core import Degree, Mode, Profile, check_r
from .rules import (
    Candidate,
    RuleOutcome,
    dual_hbm_cocartesian,
    fiber_transfer,
    hbm_cartesian,
    stable_cart_from_cocart,
)

DEFAULT_MAX_ITERS = 32
MAX_ITERS_ENV = "BKCUBE_MAX_ITERS"


def default_max_iters() -> int:
    """Iteration bound: BKCUBE_MAX_ITERS when set, else 32."""
    raw = os.environ.get(MAX_ITERS_ENV)
    if raw is None:
        return DEFAULT_MAX_ITERS
    try:
        bound = int(raw)
    except ValueError:
        bound = 0
    if bound < 1:
        raise ValueError(f"{MAX_ITERS_ENV} must be a positive integer, got {raw!r}")
    return bound


@dataclass(frozen=True, slots=True)
class StepRecord:
    """One transform inside a step: what ran, the rule applications it
    made, and the profile it produced."""

    transform: str
    amount: int | float | None
    outcomes: tuple[RuleOutcome, ...]
    profile: Profile


@dataclass(frozen=True, slots=True)
class IterationStep:
    """One pass of the pipeline: its 1-based index, the transform records
    in order, and the resulting profile."""

    index: int
    records: tuple[StepRecord, ...]
    profile: Profile


@dataclass(frozen=True, slots=True)
class Derivation:
    """A full traced run: initial profile, the steps taken, and the first
    index (if any) at which the output repeated its input."""

    label: str
    initial: Profile
    r: int | float | None
    steps: tuple[IterationStep, ...]
    stabilized_at: int | None


def _require_mode(p: Profile, mode: Mode, op: str) -> None:
    if p.dim >= 2 and p.mode is not mode:
        raise ValueError(f"{op} needs a {mode.value} profile, got {p.mode.value}")


def _check_shift(r: int, op: str) -> int:
    if isinstance(r, bool) or not isinstance(r, int) or r < 0:
        raise ValueError(f"{op} extent must be a non-negative integer, got {r!r}")
    return r


def suspend(p: Profile, r: int = 1) -> Profile:
    """r suspensions: every degree climbs by r.  Needs a cocartesian
    profile (1-cubes excepted); r >= 2 lands as a single block."""
    _require_mode(p, Mode.COCARTESIAN, "suspend")
    _check_shift(r, "suspend")
    return p.shifted(r) if r else p


def loop(p: Profile, r: int = 1) -> Profile:
    """r loopings: every degree drops by r.  Needs a cartesian profile
    (1-cubes excepted)."""
    _require_mode(p, Mode.CARTESIAN, "loop")
    _check_shift(r, "loop")
    return p.shifted(-r) if r else p


def _dualize(p: Profile) -> tuple[Profile, tuple[RuleOutcome, ...]]:
    _require_mode(p, Mode.CARTESIAN, "dualize")
    if p.dim == 1:
        return p.with_mode(Mode.COCARTESIAN), ()
    outcomes = []
    degrees = {}
    for d in range(2, p.dim + 1):
        out = dual_hbm_cocartesian(d, p.conn1, {s: p.degree(s) for s in range(2, d + 1)})
        outcomes.append(out)
        degrees[d] = out.result
    return Profile(p.dim, p.conn1, Mode.COCARTESIAN, degrees), tuple(outcomes)


def _cartesianize(p: Profile) -> tuple[Profile, tuple[RuleOutcome, ...]]:
    _require_mode(p, Mode.COCARTESIAN, "cartesianize")
    if p.dim == 1:
        return p.with_mode(Mode.CARTESIAN), ()
    outcomes = []
    degrees = {}
    for d in range(2, p.dim + 1):
        out = hbm_cartesian(d, p.conn1, {s: p.degree(s) for s in range(2, d + 1)})
        outcomes.append(out)
        degrees[d] = out.result
    return Profile(p.dim, p.conn1, Mode.CARTESIAN, degrees), tuple(outcomes)


def _stabilize(p: Profile) -> tuple[Profile, tuple[RuleOutcome, ...]]:
    _require_mode(p, Mode.COCARTESIAN, "stabilize")
    if p.dim == 1:
        return p.with_mode(Mode.CARTESIAN), ()
    outcomes = []
    degrees = {}
    for d in range(2, p.dim + 1):
        value = stable_cart_from_cocart(d, p.degree(d))
        cand = Candidate(
            value=value, label="stable shift", terms=(p.degree(d), Degree(1 - d))
        )
        outcomes.append(RuleOutcome("stable_shift", d, (cand,), value))
        degrees[d] = value
    return Profile(p.dim, p.conn1, Mode.CARTESIAN, degrees), tuple(outcomes)


def dualize(p: Profile) -> Profile:
    """Cocartesian degrees of a cartesian profile, one dual minimisation
    per dimension."""
    return _dualize(p)[0]


def cartesianize(p: Profile) -> Profile:
    """Cartesian degrees of a cocartesian profile, one minimisation per
    dimension."""
    return _cartesianize(p)[0]


def stabilize_spectra(p: Profile) -> Profile:
    """Stable (r = inf) passage: cartesian degree d reads the cocartesian
    one shifted down by d - 1; conn1 is untouched."""
    return _stabilize(p)[0]


def omega_sigma_step(
    p: Profile, r: int | float = 1, first_step: bool = False
) -> tuple[Profile, tuple[StepRecord, ...]]:
    """One pass of the loop-suspension pipeline.

    Unless this is the first step the profile arrives cartesian and is
    dualized first.  A finite extent then suspends, takes cartesian
    degrees, and loops back down; the infinite extent stabilises instead.
    """
    r = check_r(r)
    records: list[StepRecord] = []
    current = p

    def record(transform: str, amount: int | float | None, out: Profile, outcomes) -> Profile:
        records.append(StepRecord(transform, amount, tuple(outcomes), out))
        return out

    if first_step:
        _require_mode(current, Mode.COCARTESIAN, "first step")
    else:
        out, oc = _dualize(current)
        current = record("dualize", None, out, oc)
    if r == math.inf:
        out, oc = _stabilize(current)
        current = record("stabilize", None, out, oc)
    else:
        current = record("suspend", r, suspend(current, r), ())
        out, oc = _cartesianize(current)
        current = record("cartesianize", None, out, oc)
        current = record("loop", r, loop(current, r), ())
    return current, tuple(records)


def iterate(
    p: Profile,
    r: int | float = 1,
    max_iters: int | None = None,
    label: str = "",
) -> Derivation:
    """Drive omega_sigma_step from p until the profile repeats or the
    bound runs out.

    The first step is taken as such exactly when p arrives cocartesian.
    ``stabilized_at`` is the first index whose output equals its input
    (the initial profile counts as iteration zero's output), so a fixed
    point stabilises at 1.
    """
    r = check_r(r)
    if max_iters is None:
        max_iters = default_max_iters()
    if isinstance(max_iters, bool) or not isinstance(max_iters, int) or max_iters < 1:
        raise ValueError(f"max_iters must be a positive integer, got {max_iters!r}")
    steps: list[IterationStep] = []
    current = p
    stabilized = None
    for index in range(1, max_iters + 1):
        first = index == 1 and p.mode is Mode.COCARTESIAN
        nxt, records = omega_sigma_step(current, r, first_step=first)
        steps.append(IterationStep(index, records, nxt))
        if nxt == current:
            stabilized = index
            break
        current = nxt
    return Derivation(label, p, r, tuple(steps), stabilized)


_plain: dict[str, Callable[[Profile], tuple[Profile, tuple[RuleOutcome, ...]]]] = {
    "dualize": _dualize,
    "cartesianize": _cartesianize,
    "stabilize": _stabilize,
}


def apply_transform(
    p: Profile, transform: str, amount: int | float | None = None
) -> tuple[Profile, tuple[RuleOutcome, ...]]:
    """Apply one named transform; the vocabulary of StepRecord.transform."""
    if transform in _plain:
        return _plain[transform](p)
    if transform == "suspend":
        return suspend(p, 1 if amount is None else amount), ()
    if transform == "loop":
        return loop(p, 1 if amount is None else amount), ()
    if transform == "fiber_transfer":
        return fiber_transfer(p, p), ()
    if transform == "declare":
        raise ValueError("declare records replay from their stored profile")
    raise ValueError(f"unknown transform {transform!r}")


def replay(derivation: Derivation) -> Derivation:
    """Re-execute a derivation record by record from its initial profile.

    Produces a fresh Derivation with recomputed profiles, outcomes and
    stabilisation index; equality with the original is the determinism
    check.  ``declare`` records (from scripts) reinstate their stored
    profile.
    """
    current = derivation.initial
    previous = derivation.initial
    steps = []
    stabilized = None
    for step in derivation.steps:
        records = []
        for rec in step.records:
            if rec.transform == "declare":
                current, outcomes = rec.profile, ()
            else:
                current, outcomes = apply_transform(current, rec.transform, rec.amount)
            records.append(replace(rec, outcomes=tuple(outcomes), profile=current))
        steps.append(IterationStep(step.index, tuple(records), current))
        if stabilized is None and current == previous:
            stabilized = step.index
        previous = current
    return Derivation(derivation.label, derivation.initial, derivation.r, tuple(steps), stabilized)
