"""Exact invariants of normal affine semigroup rings in prime characteristic:
divisor class groups, Frobenius splitting decompositions, F-signatures, and
a verifier for the torsion bound |tors Cl(R)| <= 1/s(R)."""

from .divisors import (
    CapExceededError,
    ClassElement,
    ClassGroupData,
    WeilDivisor,
    class_group,
    class_of,
    divisorial_points,
    order_of_class,
    principal_divisor,
    torsion_elements,
)
from .frobenius import (
    FrobeniusContext,
    FrobeniusDecomposition,
    box_count_oracle,
    decompose,
    free_rank,
    multiplicity_of,
    simultaneous_torsion_count,
)
from .fsignature import (
    ExactFSignature,
    FSignatureEstimate,
    convergence_report,
    exact_signature_volume,
    signature_sequence,
    singh_determinantal_signature,
)
from .linalg import (
    IntMat,
    SmithDecomposition,
    cokernel_invariants,
    hermite_normal_form,
    kernel_basis,
    smith_normal_form,
)
from .rings import (
    FacetFunctional,
    Lattice,
    RingFormatError,
    RingSpec,
    builtin_ring,
    contains,
    dump_ring_file,
    load_ring_file,
    parse_builtin,
    validate,
)
from .verify import (
    TheoremVerdict,
    default_corpus,
    run_corpus,
    verify_per_class_convergence,
    verify_ring,
)

__version__ = "0.1.0"

__all__ = [
    "CapExceededError",
    "ClassElement",
    "ClassGroupData",
    "ExactFSignature",
    "FSignatureEstimate",
    "FacetFunctional",
    "FrobeniusContext",
    "FrobeniusDecomposition",
    "IntMat",
    "Lattice",
    "RingFormatError",
    "RingSpec",
    "SmithDecomposition",
    "TheoremVerdict",
    "WeilDivisor",
    "box_count_oracle",
    "builtin_ring",
    "class_group",
    "class_of",
    "cokernel_invariants",
    "contains",
    "convergence_report",
    "decompose",
    "default_corpus",
    "divisorial_points",
    "dump_ring_file",
    "exact_signature_volume",
    "free_rank",
    "hermite_normal_form",
    "kernel_basis",
    "load_ring_file",
    "multiplicity_of",
    "order_of_class",
    "parse_builtin",
    "principal_divisor",
    "run_corpus",
    "signature_sequence",
    "simultaneous_torsion_count",
    "singh_determinantal_signature",
    "smith_normal_form",
    "torsion_elements",
    "validate",
    "verify_per_class_convergence",
    "verify_ring",
]
