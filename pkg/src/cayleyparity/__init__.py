"""Exact association-scheme spectra of finite groups and parity checks on their Cayley graphs."""

from .catalogue import enumerate_builtin_groups, load_group, odd_order_suite
from .cayley import (
    ConnectionSet,
    SignedConnectionSet,
    SpectrumReport,
    VerificationReport,
    cayley_adjacency,
    even_order_demo,
    oracle_agreement,
    signed_adjacency,
    signed_spectrum_via_scheme,
    spectrum_via_scheme,
    verify_godsil_spiga,
    verify_odd_eigenvalue,
    verify_signed_corollary,
)
from .classalg import (
    ModPEigenmatrix,
    MultiplicityVector,
    admissible_primes,
    conjugacy_eigenmatrix_modp,
    conjugacy_report,
    frame_quotient_conjugacy,
    multiplicities_modp,
    pc_quotient_check,
)
from .groups import (
    FiniteGroup,
    Partition,
    conjugacy_classes,
    cyclic,
    direct_product,
    group_builtin,
    group_from_permutations,
    group_from_table,
    heisenberg,
    join,
    pc_classes,
    power_classes,
    semidirect,
)
from .linalg import IntPolynomial, RationalMatrix, char_poly, det, det_parity, integer_roots, inverse
from .modp import modp_eigen_split
from .schemes import (
    AssociationScheme,
    IntersectionNumbers,
    is_subscheme,
    scheme_from_partition,
    valencies,
    verify_scheme_axioms,
)
from .spectra import (
    Eigensystem,
    dual_eigenmatrix,
    eigensystem_integral,
    equitable_quotient_check,
    frame_quotient,
    verify_identities,
)

__version__ = "0.1.0"
