"""Level-one branching for conformal embeddings attached to symmetric pairs."""

from .branching import (
    Component,
    Decomposition,
    Label,
    basic_vector_by_cosets,
    decompose_basic_vector,
    decompose_hermitian,
    decompose_spin,
    psi0_star,
    psi1_star,
    spin_by_cosets,
    typec_lattice_paths,
)
from .charoracle import TruncatedCharacter, VerifyReport, irreducible_character, product_character, verify
from .rootdata import (
    AffineDatum,
    AffineRoot,
    AffineWeight,
    InvolutionSpec,
    KWeight,
    LieType,
    build_affine_datum,
    build_lprime,
    classify_roots,
    order_two_involutions,
    positive_p_roots,
)
from .weylcomb import (
    WeylElement,
    abelian_subspaces,
    alcove_stabilizer,
    enumerate_minuscule,
    even_coset_reps,
    hermitian_fundamental_subspaces,
    odd_coset_reps,
    w_sigma,
    w_sigma_involution,
)

__all__ = [
    "AffineDatum",
    "AffineRoot",
    "AffineWeight",
    "Component",
    "Decomposition",
    "InvolutionSpec",
    "KWeight",
    "Label",
    "LieType",
    "TruncatedCharacter",
    "VerifyReport",
    "WeylElement",
    "abelian_subspaces",
    "alcove_stabilizer",
    "basic_vector_by_cosets",
    "build_affine_datum",
    "build_lprime",
    "classify_roots",
    "decompose_basic_vector",
    "decompose_hermitian",
    "decompose_spin",
    "enumerate_minuscule",
    "even_coset_reps",
    "hermitian_fundamental_subspaces",
    "irreducible_character",
    "odd_coset_reps",
    "order_two_involutions",
    "positive_p_roots",
    "product_character",
    "psi0_star",
    "psi1_star",
    "spin_by_cosets",
    "typec_lattice_paths",
    "verify",
    "w_sigma",
    "w_sigma_involution",
]
