"""Finite commutative rings, ring extensions and their lattices of intermediate rings."""
from .closures import canonical_tower, chain_condition_report, local_chain, seminormalization, t_closure
from .errors import RingError
from .extension import Extension, extension_from_subring, make_extension
from .fixtures import fixture, fixture_names
from .lattice import (bell_number, enumerate_interval, hasse_dot, maximal_chain,
                      partition_count_check, powerset_subrings)
from .polyquot import construct_polyquot
from .ring import (FiniteRing, construct_gf, construct_product, construct_zmod, product_index,
                   quotient_by_ideal, subring_closure)
from .ringspec import parse_ringspec
from .spectrum import enumerate_ideals, fmir_decomposition, ideal_generated, maximal_ideals
from .suite import check_ids, random_instances, run_check, run_suite

__version__ = "0.1.0"

__all__ = [
    "Extension", "FiniteRing", "RingError", "bell_number", "canonical_tower", "check_ids",
    "construct_gf", "construct_polyquot", "construct_product", "construct_zmod", "enumerate_ideals",
    "enumerate_interval", "extension_from_subring", "fixture", "fixture_names", "fmir_decomposition",
    "hasse_dot", "ideal_generated", "chain_condition_report", "local_chain", "make_extension", "maximal_chain",
    "maximal_ideals", "parse_ringspec", "partition_count_check", "powerset_subrings", "product_index",
    "quotient_by_ideal", "random_instances", "run_check", "run_suite", "seminormalization",
    "subring_closure", "t_closure",
]
