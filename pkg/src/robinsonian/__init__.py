"""Robinsonian matrix recognition by multisweep Similarity-First Search."""

from .matrix import (
    AsymmetryError,
    DissimilarityMatrix,
    DuplicateEntryError,
    MatrixError,
    MatrixFormatError,
    NegativeEntryError,
    SimilarityMatrix,
    VertexSet,
    connected_components,
    from_dissimilarity,
    load,
    load_dense_csv,
    load_dissimilarity,
    load_matrix_market,
    permute,
    restrict,
    shift_nonnegative,
    write_matrix_market,
)
from .partition import OrderedPartition, SimilarityPartition, pop_pivot, refine, similarity_partition
from .recognize import (
    NOT_ROBINSONIAN,
    ROBINSONIAN,
    RecognitionReport,
    Violation,
    multisweep,
    recognize,
    recognize_binary_3sweep,
    recognize_dissimilarity,
    robinson_violation,
    verify_robinson,
)
from .sfs import LinearOrder, SweepTrace, disfs, disfs_plus, find_sfs_violation, is_sfs_ordering, sfs, sfs_plus

__version__ = "0.1.0"
