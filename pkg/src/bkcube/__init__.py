"""Connectivity estimates for cubical diagrams under suspension and loop
passes: extended-integer degree arithmetic, the minimisation rules, the
iteration pipeline, claim verifiers, a small scripting language, and
serialized derivation traces."""

from .core import (
    INF,
    Degree,
    Mode,
    ParameterSet,
    Profile,
    as_degree,
    check_r,
    deg_add,
    deg_min,
    fmt_r,
    integer_partitions,
    parse_r,
)
from .pipeline import (
    DEFAULT_MAX_ITERS,
    MAX_ITERS_ENV,
    Derivation,
    IterationStep,
    StepRecord,
    apply_transform,
    cartesianize,
    default_max_iters,
    dualize,
    iterate,
    loop,
    omega_sigma_step,
    replay,
    stabilize_spectra,
    suspend,
)
from .rules import (
    Candidate,
    RuleOutcome,
    compose_connectivity,
    dual_hbm_cocartesian,
    fiber_transfer,
    fr_parallel_map,
    fr_source_from_total,
    fr_square_from_legs,
    fr_total_from_faces,
    hbm_cartesian,
    object_to_map_connectivity,
    stable_cart_from_cocart,
    stable_cocart_from_cart,
)
from .script import (
    Script,
    ScriptParseError,
    ScriptResult,
    ScriptRuntimeError,
    execute,
    parse,
    print_script,
)
from .theorems import (
    Verdict,
    coface_profile,
    completion_schedule,
    fixed_point_profile,
    standard_battery,
    taylor_interchange_report,
    tower_vs_taylor,
    verify_comparison,
    verify_excisive_comparison,
    verify_fibration_completion,
    verify_id_plus_one_preserved,
)
from .tracedoc import TRACE_SCHEMA, document, render_json, render_markdown

__version__ = "0.1.0"

__all__ = [
    "INF",
    "Degree",
    "Mode",
    "ParameterSet",
    "Profile",
    "as_degree",
    "check_r",
    "deg_add",
    "deg_min",
    "fmt_r",
    "integer_partitions",
    "parse_r",
    "DEFAULT_MAX_ITERS",
    "MAX_ITERS_ENV",
    "Derivation",
    "IterationStep",
    "StepRecord",
    "apply_transform",
    "cartesianize",
    "default_max_iters",
    "dualize",
    "iterate",
    "loop",
    "omega_sigma_step",
    "replay",
    "stabilize_spectra",
    "suspend",
    "Candidate",
    "RuleOutcome",
    "compose_connectivity",
    "dual_hbm_cocartesian",
    "fiber_transfer",
    "fr_parallel_map",
    "fr_source_from_total",
    "fr_square_from_legs",
    "fr_total_from_faces",
    "hbm_cartesian",
    "object_to_map_connectivity",
    "stable_cart_from_cocart",
    "stable_cocart_from_cart",
    "Script",
    "ScriptParseError",
    "ScriptResult",
    "ScriptRuntimeError",
    "execute",
    "parse",
    "print_script",
    "Verdict",
    "coface_profile",
    "completion_schedule",
    "fixed_point_profile",
    "standard_battery",
    "taylor_interchange_report",
    "tower_vs_taylor",
    "verify_comparison",
    "verify_excisive_comparison",
    "verify_fibration_completion",
    "verify_id_plus_one_preserved",
    "TRACE_SCHEMA",
    "document",
    "render_json",
    "render_markdown",
]
