"""Frobenius structures in CPM(fHilb) and their canonicalization."""

from .canonicalize import (
    CanonicalizationResult,
    IsometryDecomposition,
    canonicalize_comonoid,
    decompose_cp_isometry,
    verify_canonical,
)
from .cpmap import (
    CpMap,
    PurityVerdict,
    add,
    choi,
    choi_distance,
    compose,
    cpm_double,
    dagger,
    discard,
    from_choi,
    identity_channel,
    is_pure,
    purify,
    purity_witness,
    tensor,
)
from .frobenius import (
    AxiomReport,
    CpComonoid,
    FrobeniusAlgebra,
    PhaseReport,
    change_basis,
    check_cp_comonoid,
    check_fhilb_algebra,
    cyclic_group_algebra,
    direct_sum,
    double_algebra,
    matrix_algebra,
    measure_phases,
    mix_comonoids,
    normalize_phases,
    perturb_phases,
    spider,
)
from .linalg import frob_dist, herm_eig, kron, partial_trace, swap

__version__ = "0.1.0"
