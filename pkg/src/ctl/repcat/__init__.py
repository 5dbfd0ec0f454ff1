"""The module category: Hom, Ext, projective covers, syzygies, Krull-Schmidt."""
from ..modules import ModuleMap, Representation, biproduct, cokernel, direct_sum, kernel, zero_module
from .catalog import (
    Catalog,
    VerificationReport,
    catalog_verify,
    load_catalog,
    load_module,
    module_from_json,
    module_to_json,
)
from .homology import (
    ExtSpace,
    HomSpace,
    Presentation,
    cosyzygy,
    ext_dim,
    ext_space,
    global_dimension,
    hom_dim,
    hom_space,
    injective_dimension,
    injective_envelope,
    is_injective,
    is_projective,
    presentation,
    projective_cover,
    projective_dimension,
    syzygy,
    top_dims,
)
from .krull import (
    decompose,
    decompose_with_maps,
    is_indecomposable,
    is_isomorphic,
    isomorphism,
    split_embedding,
)
