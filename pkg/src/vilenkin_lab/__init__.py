"""Vilenkin groups, characters, Dirichlet kernels, Hardy-space atoms and maximal operators of partial sums."""
from .errors import CapacityError, DomainError, UsageError, VilenkinError
from .families import SubsequenceFamily, family_members, family_rho_sup
from .group import GroupPoint, Interval, RadixSequence, add, annulus, contains, expand, measure, neg, rank, unrank
from .hardy import (Atom, AtomicDecomposition, CounterexampleSpec, Martingale, assemble, build_counterexample,
                    condexp, hardy_norm, maximal_function, select_subsequence, validate_atom)
from .kernels import (dirichlet_block, dirichlet_closed, dirichlet_direct, lemma3_minorant_check,
                      local_kernel_integral, lp_quasinorm, weak_lp_norm)
from .maximal import probe_operator_norm, restricted_maximal, weighted_maximal
from .system import character_table, rademacher, rademacher_run_modulus, vilenkin
from .transform import CylinderFunction, Spectrum, forward, inverse, partial_sum

__version__ = "0.1.0"
