"""Realizability tests for combinatorial line arrangements via branched covers.

Modules:

``arrangement``  incidence structures, families, sub-arrangement and (n_k) search
``gf``           exact linear algebra over prime fields, minimum weights
``blowup``       homology of blow-ups, proper transforms, relation codes
``cover``        invariants of cyclic branched covers
``obstruct``     the obstruction engine and its JSON reports
``wiring``       wiring diagrams, braid moves, homotopy certificates
``symplectic``   grid check of area-form positivity after stretching
``plumbing``     plumbing matrices and the positive G-S criterion
"""

from __future__ import annotations

from .arrangement import (
    Arrangement,
    NkCertificate,
    SubArrangementEmbedding,
    b_alpha_beta,
    canonical_form,
    fano,
    find_subarrangement,
    generic,
    is_isomorphic,
    pencil,
    projective_plane,
    search_nk,
    search_nk_detailed,
    validate,
)
from .blowup import (
    BlowupModel,
    H2Class,
    intersection_number,
    proper_transforms,
    relation_code,
    verify_relation,
)
from .cover import CoverInvariants, bpab_invariants, branched_euler, casson_gordon_epsilon
from .gf import CodeSummary, FpMatrix, FpVector, kernel_basis, min_weight, rank
from .obstruct import (
    ObstructionReport,
    obstruct_arrangement,
    obstruct_deletion,
    obstruct_projective_plane,
    standard_branch,
)
from .plumbing import gs_all_ones, gs_criterion, plumbing_matrix
from .symplectic import StrandFunction, area_form_value, find_epsilon
from .wiring import (
    WiringDiagram,
    apply_move,
    canonical_word,
    canonicalize,
    format_word,
    homotopy_to_pencil,
    parse_word,
    search_wiring,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
