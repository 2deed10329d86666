"""Minimal trap spaces of locally monotone Boolean networks, and two problems
about them: perturbations that make every minimal trap space match a marker
(reprogramming), and networks over an influence graph with the same property
(synthesis)."""

from .cegar import (CegarResult, CegarStats, CounterExampleFinder, ReprogrammingCegar, SynthesisCegar,
                    Variant, enumerate_reprogramming, find_counter_example, solve_reprogramming,
                    solve_synthesis)
from .cube import Subcube, config_from_str, config_to_str
from .network import (BnetError, BooleanNetwork, InfluenceGraph, NotLocallyMonotoneError, UnateDnf,
                      apply_perturbation, eval_local, influence_graph, is_locally_monotone, matches,
                      parse_bnet, parse_influence_graph, read_bnet)
from .qdimacs import export_qdimacs
from .sat import SatEngine
from .trapspace import (can_output, descend_to_mts, enumerate_mts, in_mts, is_minimal, is_trap_space,
                        saturation_trace, ts_of)

__version__ = "0.1.0"

__all__ = [
    "BnetError",
    "BooleanNetwork",
    "CegarResult",
    "CegarStats",
    "CounterExampleFinder",
    "InfluenceGraph",
    "NotLocallyMonotoneError",
    "ReprogrammingCegar",
    "SatEngine",
    "Subcube",
    "SynthesisCegar",
    "UnateDnf",
    "Variant",
    "apply_perturbation",
    "can_output",
    "config_from_str",
    "config_to_str",
    "descend_to_mts",
    "enumerate_mts",
    "enumerate_reprogramming",
    "eval_local",
    "export_qdimacs",
    "find_counter_example",
    "in_mts",
    "influence_graph",
    "is_locally_monotone",
    "is_minimal",
    "is_trap_space",
    "matches",
    "parse_bnet",
    "parse_influence_graph",
    "read_bnet",
    "saturation_trace",
    "solve_reprogramming",
    "solve_synthesis",
    "ts_of",
]
