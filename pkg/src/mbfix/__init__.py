"""Counting fixes of permutations acting on monotone Boolean functions.

The lattice D_n of monotone Boolean functions of n variables carries an
action of the symmetric group permuting variables.  This package counts
the functions fixed by each permutation, aggregates them through
Burnside's lemma into the number of inequivalent functions r_n, and
cross-validates every value by independent routes: brute force, up-set
counting over cycle posets, matrix entry sums, coprime factorisation,
and the Down*Up scan.
"""

from .errors import InconsistencyError, OutOfScopeError, ResourceLimitError
from .poset import (Poset, UpsetMask, antichain, boolean_cube, chain,
                    count_chain_maps, count_monotone_maps, count_upsets,
                    disjoint_sum, empty, enumerate_upsets, principal_upset,
                    product, upset_lattice, validate_poset)
from .matrix import (CountMatrix, count_matrix, interval_matrix_via_bitsets,
                     mat_power, sum_entries, sum_of_power, sum_squares,
                     sum_squares_of_square)
from .mbf import (FunctionFamily, MonotoneFunction, dedekind, generate_dn,
                  is_monotone, leq)
from .perm import (CyclePoset, CycleType, Permutation, act_on_point,
                   class_size, cycle_poset, cycle_type, enumerate_cycle_types,
                   parse_cycles)
from .engines import (FixSet, MethodReport, apply_perm, downup_trace,
                      fix_count, fix_count_bruteforce, fix_count_coprime,
                      fix_count_downup, fix_count_extend, fix_count_upsets,
                      fix_generate)
from .burnside import (BurnsideLedger, PaperTable, class_count,
                       verify_paper_tables)

__version__ = "0.1.0"
