"""Replayable verifiers for the headline connectivity claims.

Each verifier recomputes a claim from the rules and pipeline alone and
returns a Verdict: the expected values, the values the engine found, and
the traces behind them.  A Verdict never fudges; when the engine cannot
reproduce a claim the verdict fails and says what it got.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import INF, Degree, Mode, ParameterSet, Profile, check_r, fmt_r
from .pipeline import (
    Derivation,
    IterationStep,
    StepRecord,
    _cartesianize,
    default_max_iters,
    iterate,
    loop,
)
from .rules import (
    Candidate,
    RuleOutcome,
    compose_connectivity,
    fiber_transfer,
    fr_parallel_map,
    fr_source_from_total,
    fr_square_from_legs,
    fr_total_from_faces,
    object_to_map_connectivity,
)


@dataclass(frozen=True, slots=True)
class Verdict:
    """Outcome of replaying one claim.

    Passes exactly when expected and computed agree pointwise (same
    length, same values) and every side condition the verifier checks
    held.  ``trace_refs`` names the supporting derivations by label.
    """

    claim_id: str
    parameters: dict[str, int | str]
    expected: tuple[Degree, ...]
    computed: tuple[Degree, ...]
    passed: bool
    trace_refs: tuple[str, ...]
    traces: tuple[Derivation, ...] = ()
    outcomes: tuple[RuleOutcome, ...] = ()
    notes: tuple[str, ...] = ()


def _check_count(value: int, name: str, floor: int) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < floor:
        raise ValueError(f"{name} must be an integer >= {floor}, got {value!r}")
    return value


def fixed_point_profile(dim: int) -> Profile:
    """The cartesian profile with conn1 = 2 and degree(d) = d + 1; fixed
    by the loop-suspension step in every extent."""
    _check_count(dim, "dim", 1)
    return Profile(dim, Degree(2), Mode.CARTESIAN, {d: Degree(d + 1) for d in range(2, dim + 1)})


def verify_comparison(k: int, r: int | float = 1) -> Verdict:
    """Connectivity of the stabilisation comparison for a k-connected
    retractive object: 2k+1.

    Stage j builds the square over the j-fold suspension, whose 1-faces
    are (k+j+1)-connected and whose pushout square is infinitely
    cocartesian, reads its cartesian degree, and loops back down j times.
    Finite r folds r stages through compose_connectivity; the infinite
    extent folds a prefix of the (increasing) stage sequence.
    """
    _check_count(k, "k", 0)
    ps = ParameterSet(Degree(k), r, 0)
    r = ps.r
    stages = 4 if r == math.inf else int(r)
    claim = f"comparison k={k} r={fmt_r(r)}"
    traces = []
    stage_values = []
    for j in range(stages):
        conn = object_to_map_connectivity(Degree(k + j))
        init = Profile(2, conn, Mode.COCARTESIAN, {2: INF})
        current, outcomes = _cartesianize(init)
        records = [StepRecord("cartesianize", None, outcomes, current)]
        if j:
            current = loop(current, j)
            records.append(StepRecord("loop", j, (), current))
        traces.append(
            Derivation(
                f"{claim} stage {j}", init, None, (IterationStep(1, tuple(records), current),), None
            )
        )
        stage_values.append(current.full_degree)
    fold = RuleOutcome(
        "compose_connectivity",
        1,
        tuple(Candidate(value=v, label=f"stage {j}") for j, v in enumerate(stage_values)),
        compose_connectivity(stage_values),
    )
    expected = (Degree(2 * k + 1),)
    computed = (fold.result,)
    notes = ()
    if r == math.inf:
        notes = ("stable extent folds the first 4 stages; the stage values increase",)
    elif r >= 2:
        notes = ("each stage applies its suspensions as one block",)
    return Verdict(
        claim,
        {"k_rel": k, "r": fmt_r(r), "n": 0},
        expected,
        computed,
        computed == expected,
        tuple(t.label for t in traces),
        tuple(traces),
        (fold,),
        notes,
    )


def coface_profile(k: int, n: int, r: int | float = 1) -> Profile:
    """Cartesian profile of the (n+1)-cube of iterated cofaces at a
    k-connected input: degree(d) = k(d+1) + 1, so conn1 = 2k+1.

    The 1-cube value is cross-checked against verify_comparison on every
    call; disagreement means the engine is inconsistent and raises.
    """
    _check_count(k, "k", 1)
    _check_count(n, "n", 0)
    r = check_r(r)
    conn1 = Degree(2 * k + 1)
    base = verify_comparison(k, r)
    if base.computed != (conn1,):
        raise RuntimeError(
            f"coface base case k={k} disagrees with the comparison verifier: {base.computed}"
        )
    return Profile(
        n + 1, conn1, Mode.CARTESIAN, {d: Degree(k * (d + 1) + 1) for d in range(2, n + 2)}
    )


def completion_schedule(k: int, r: int | float = 1, N: int = 5) -> Verdict:
    """Full-cube connectivities of the coface cubes for n = 0..N: the
    schedule k(n+2)+1, which must climb strictly."""
    _check_count(k, "k", 1)
    _check_count(N, "N", 0)
    r = check_r(r)
    claim = f"schedule k={k} r={fmt_r(r)} N={N}"
    computed = tuple(coface_profile(k, n, r).full_degree for n in range(N + 1))
    expected = tuple(Degree(k * (n + 2) + 1) for n in range(N + 1))
    increasing = all(a < b for a, b in zip(computed, computed[1:]))
    return Verdict(
        claim,
        {"k_rel": k, "r": fmt_r(r), "N": N},
        expected,
        computed,
        computed == expected and increasing,
        (),
        notes=("closed form k(n+2)+1 against engine-built coface profiles",),
    )


def verify_excisive_comparison(
    n: int, r: int | float = 1, iterate_bound: int | None = None
) -> Verdict:
    """Iterated loop-suspension estimates for the (n+1)-cube comparison.

    Starting from 1-connected maps and infinitely cocartesian higher
    faces, every iterate must be at least (n+1)-cartesian over the whole
    cube and the estimates must settle at exactly n+1 within the bound.
    """
    _check_count(n, "n", 1)
    r = check_r(r)
    bound = default_max_iters() if iterate_bound is None else _check_count(iterate_bound, "iterate_bound", 1)
    dim = n + 1
    conn = object_to_map_connectivity(Degree(0))
    init = Profile(dim, conn, Mode.COCARTESIAN, {d: INF for d in range(2, dim + 1)})
    claim = f"excisive n={n} r={fmt_r(r)}"
    deriv = iterate(init, r, bound, label=claim)
    computed = tuple(step.profile.full_degree for step in deriv.steps)
    settle = Degree(n + 1)
    first = INF if r == math.inf else Degree(1 + n * int(r))
    model = [first, settle, settle]
    if first == settle:
        model = model[1:]
    expected = tuple(model)
    passed = (
        computed == expected
        and deriv.stabilized_at == len(expected)
        and all(not value < settle for value in computed)
    )
    return Verdict(
        claim,
        {"n": n, "r": fmt_r(r), "iterate_bound": bound},
        expected,
        computed,
        passed,
        (claim,),
        (deriv,),
        notes=(f"stabilised at {deriv.stabilized_at}",),
    )


def tower_vs_taylor(n: int, k: int, iterate_bound: int | None = None) -> Verdict:
    """Connectivity of the n-th tower comparison at a k-connected input:
    n+1, independent of k.

    For k >= 1 the chain peels a (k+1)-cube whose legs carry the
    established estimate at stage n+k: squares from the legs, cube totals
    from parallel faces, source faces back out, and finally one leg of
    the last square against its (better-connected) parallel map.
    """
    _check_count(n, "n", 1)
    _check_count(k, "k", 0)
    claim = f"tower n={n} k={k}"
    expected = (Degree(n + 1),)
    if k == 0:
        sub = verify_excisive_comparison(n, 1, iterate_bound)
        computed = (sub.computed[-1],)
        return Verdict(
            claim,
            {"n": n, "k_rel": 0},
            expected,
            computed,
            sub.passed and computed == expected,
            sub.trace_refs,
            sub.traces,
            notes=("k=0 is the excisive comparison itself",),
        )
    sub = verify_excisive_comparison(n + k, 1, iterate_bound)
    m = sub.computed[-1]
    chain = [
        RuleOutcome(
            "tower_legs", 1, (Candidate(value=m, label=f"estimate at stage {n + k}"),), m
        )
    ]
    square = fr_square_from_legs(m)
    chain.append(
        RuleOutcome(
            "fr_square_from_legs",
            2,
            (Candidate(value=square, label="legs-1", terms=(m, Degree(-1))),),
            square,
        )
    )
    for j in range(3, k + 2):
        total = fr_total_from_faces(square, square)
        chain.append(
            RuleOutcome(
                "fr_total_from_faces",
                j,
                (
                    Candidate(value=square, label="source face"),
                    Candidate(value=square - 1, label="target face -1", terms=(square, Degree(-1))),
                ),
                total,
            )
        )
        source = fr_source_from_total(total, square)
        chain.append(
            RuleOutcome(
                "fr_source_from_total",
                j - 1,
                (
                    Candidate(value=total, label="total"),
                    Candidate(value=square, label="target face"),
                ),
                source,
            )
        )
        square = source
    final = fr_parallel_map(square, m)
    chain.append(
        RuleOutcome(
            "fr_parallel_map",
            1,
            (
                Candidate(value=square, label="square"),
                Candidate(value=m, label="parallel map"),
            ),
            final,
        )
    )
    computed = (final,)
    return Verdict(
        claim,
        {"n": n, "k_rel": k},
        expected,
        computed,
        sub.passed and computed == expected,
        sub.trace_refs,
        sub.traces,
        tuple(chain),
        (f"legs carry {m} from the stage {n + k} comparison",),
    )


def verify_id_plus_one_preserved(N: int, r: int | float = 1) -> Verdict:
    """The fixed-point family is preserved: for every dimension up to N
    one loop-suspension step reproduces the profile exactly."""
    _check_count(N, "N", 1)
    r = check_r(r)
    claim = f"fixed-point N={N} r={fmt_r(r)}"
    expected: list[Degree] = []
    computed: list[Degree] = []
    traces = []
    fixed = True
    for dim in range(1, N + 1):
        p = fixed_point_profile(dim)
        deriv = iterate(p, r, 2, label=f"{claim} dim {dim}")
        traces.append(deriv)
        out = deriv.steps[0].profile
        for d in range(1, dim + 1):
            expected.append(p.degree(d))
            computed.append(out.degree(d))
        fixed = fixed and deriv.stabilized_at == 1
    return Verdict(
        claim,
        {"N": N, "r": fmt_r(r)},
        tuple(expected),
        tuple(computed),
        fixed and computed == expected,
        tuple(t.label for t in traces),
        tuple(traces),
        notes=("expected and computed list every degree, dimension by dimension",),
    )


def verify_fibration_completion(N: int, r: int | float = 1) -> Verdict:
    """Fibrewise fibres of the k=1 coface cubes land on the fixed-point
    family, so their full-cube degrees give the strictly climbing
    schedule n+2 for n = 0..N."""
    _check_count(N, "N", 0)
    r = check_r(r)
    claim = f"fibration N={N} r={fmt_r(r)}"
    expected = tuple(Degree(n + 2) for n in range(N + 1))
    computed = []
    traces = []
    shapes = True
    for n in range(N + 1):
        total = coface_profile(1, n, r)
        fib = fiber_transfer(total, total)
        record = StepRecord("fiber_transfer", None, (), fib)
        traces.append(
            Derivation(
                f"{claim} stage {n}", total, None, (IterationStep(1, (record,), fib),), None
            )
        )
        computed.append(fib.full_degree)
        shapes = shapes and fib == fixed_point_profile(n + 1)
    preservation = verify_id_plus_one_preserved(N + 1, r)
    computed = tuple(computed)
    increasing = all(a < b for a, b in zip(computed, computed[1:]))
    passed = shapes and preservation.passed and computed == expected and increasing
    return Verdict(
        claim,
        {"N": N, "r": fmt_r(r)},
        expected,
        computed,
        passed,
        tuple(t.label for t in traces) + preservation.trace_refs,
        tuple(traces) + preservation.traces,
        notes=(
            "fibre profiles land on the fixed-point family",
            f"preservation checked by {preservation.claim_id}",
        ),
    )


def taylor_interchange_report(n_max: int, k_max: int, r: int | float = 1) -> Verdict:
    """Premises for interchanging completion with the excisive tower.

    (a) the coface connectivity k(n+2)+1 meets the agreement bound
        (n+2)k+1 for k in 1..8, n up to n_max (with c = -1 the bound is
        an equality);
    (b) every tower comparison with n <= n_max, k <= k_max is
        (n+1)-connected.
    """
    _check_count(n_max, "n_max", 1)
    _check_count(k_max, "k_max", 0)
    r = check_r(r)
    claim = f"interchange n<={n_max} k<={k_max} r={fmt_r(r)}"
    expected: list[Degree] = []
    computed: list[Degree] = []
    ok = True
    for n in range(n_max + 1):
        for k in range(1, 9):
            lhs = coface_profile(k, n, r).full_degree
            rhs = Degree((n + 2) * k + 1)
            expected.append(rhs)
            computed.append(lhs)
            ok = ok and not lhs < rhs
    refs = []
    for n in range(1, n_max + 1):
        for k in range(k_max + 1):
            sub = tower_vs_taylor(n, k)
            expected.append(Degree(n + 1))
            computed.append(sub.computed[0])
            ok = ok and sub.passed
            refs.append(sub.claim_id)
    return Verdict(
        claim,
        {"n_max": n_max, "k_max": k_max, "r": fmt_r(r), "agreement_c": -1, "kappa": 1},
        tuple(expected),
        tuple(computed),
        ok and computed == expected,
        tuple(refs),
        notes=(
            "agreement bound holds with equality: k(n+2)+1 = (n+2)k+1",
            "bound grid k in 1..8; tower grid as parameterised",
        ),
    )


def standard_battery() -> tuple[Verdict, ...]:
    """The full report battery behind ``bkcube verify-paper``."""
    inf = math.inf
    verdicts = [verify_comparison(1, r) for r in (1, 2, inf)]
    for n in (1, 2):
        for r in (1, inf):
            verdicts.append(verify_excisive_comparison(n, r))
    verdicts += [tower_vs_taylor(1, 1), tower_vs_taylor(2, 1), tower_vs_taylor(1, 2)]
    verdicts += [verify_id_plus_one_preserved(3, r) for r in (1, 2, inf)]
    verdicts += [completion_schedule(1, r, 5) for r in (1, inf)]
    verdicts += [verify_fibration_completion(4, r) for r in (1, inf)]
    verdicts.append(taylor_interchange_report(4, 4, 1))
    return tuple(verdicts)
