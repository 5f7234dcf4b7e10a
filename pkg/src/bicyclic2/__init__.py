"""Bicyclic 2-groups, essential-subgroup candidates and fusion-system counts."""

from .core import (BadParameters, FamilySpec, GroupError, GroupTable,
                   SubgroupRef, construct, construct_family, generated_subgroup,
                   load_group, product, quotient, save_group, verify_table)
from .invariants import (InvariantRecord, ShapeTags, classify_shape,
                         localizers, structural_invariants)
from .subgroups import SubgroupLattice, all_subgroups
from .morphisms import AutGroup, Fingerprint, IsoWitness, automorphisms, \
    fingerprint, isomorphic
from .fusion import (EssentialReport, FusionVerdict, admits_nonnilpotent,
                     essential_candidates, fs_multiplicity, structural_checks)
from .census import (bicyclic_census, central_extensions, cocycle_space,
                     count_table, verify_suite)
from .numtheory import (group_exponent, phi_at_2, section_bound_verify)

__version__ = "0.1.0"
