"""Finiteness and orbit structure of bounded invertible Mealy automaton groups.

The pipeline, end to end:

1.  parse / normalize an automaton (:mod:`.automaton`),
2.  check boundedness and cut out the circuit part (:mod:`.structure`),
3.  collect the post-critical sequences and the identifications between
    their one-letter extensions (:mod:`.structure`),
4.  refine the partition of post-critical sequences to a fixed point
    (:mod:`.partitions`),
5.  assemble two finite machines that track, level by level, how orbits
    of tree words grow (:mod:`.recognizer`),
6.  read verdicts off the machines: group finiteness, level transitivity,
    orbit finiteness for eventually periodic infinite words,
7.  cross-validate everything against brute-force orbit enumeration
    (:mod:`.oracle`).
"""

from .errors import (
    AutomatonFormatError,
    CapExceededError,
    ConsistencyError,
    EmptyPostCriticalSetError,
    MealyError,
    NotBoundedError,
    NotInvertibleError,
    UnsupportedAutomatonError,
)
from .words import Alphabet, EvPeriodicWord, OmegaWord
from .automaton import (
    MealyAutomaton,
    automaton_from_json,
    compose,
    parse_automaton,
    union_with_inverse,
)
from .structure import (
    PathPair,
    PostCriticalData,
    circuit_part,
    compute_E,
    compute_Ee,
    is_bounded,
    path_pairs,
    post_critical_data,
    post_critical_set,
)
from .partitions import Partition, PartitionChain, RefineResult, refine_step, stabilize
from .recognizer import (
    Analysis,
    FinitenessResult,
    Lasso,
    MachineState,
    OrbitVerdict,
    Recognizer,
    RunTrace,
    analyze,
    build_eorbit_recognizer,
    build_orbit_recognizer,
    classify_omega_orbit,
    classify_postcritical,
    decide_finite,
    decide_level_transitive,
    export_machine,
    recognizer_from_json,
)
from .oracle import (
    CheckRecord,
    CrossCheckReport,
    OrbitTables,
    cross_check,
    default_max_level,
    e_orbits_level,
    enumerate_group,
    orbit_growth,
    orbits_level,
)

__version__ = "0.1.0"

__all__ = [
    "Alphabet",
    "Analysis",
    "AutomatonFormatError",
    "CapExceededError",
    "CheckRecord",
    "ConsistencyError",
    "CrossCheckReport",
    "EmptyPostCriticalSetError",
    "EvPeriodicWord",
    "FinitenessResult",
    "Lasso",
    "MachineState",
    "MealyAutomaton",
    "MealyError",
    "NotBoundedError",
    "NotInvertibleError",
    "OmegaWord",
    "OrbitTables",
    "OrbitVerdict",
    "Partition",
    "PartitionChain",
    "PathPair",
    "PostCriticalData",
    "Recognizer",
    "RefineResult",
    "RunTrace",
    "UnsupportedAutomatonError",
    "analyze",
    "automaton_from_json",
    "build_eorbit_recognizer",
    "build_orbit_recognizer",
    "circuit_part",
    "classify_omega_orbit",
    "classify_postcritical",
    "compose",
    "compute_E",
    "compute_Ee",
    "cross_check",
    "decide_finite",
    "decide_level_transitive",
    "default_max_level",
    "e_orbits_level",
    "enumerate_group",
    "export_machine",
    "is_bounded",
    "orbit_growth",
    "orbits_level",
    "parse_automaton",
    "path_pairs",
    "post_critical_data",
    "post_critical_set",
    "recognizer_from_json",
    "refine_step",
    "stabilize",
    "union_with_inverse",
]
