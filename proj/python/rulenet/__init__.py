"""Random rule networks of linear polymers.

The compiled core lives in ``rulenet._core``; ``rulenet.tables`` reads the
versioned CSV and JSON files written by the command-line tool.
"""

from rulenet._core import (  # noqa: F401
    CapacityError,
    EnsembleBudgetError,
    GwSchedule,
    Kind,
    MemoryBudgetError,
    ModelParams,
    acceptance,
    anabolic_lemma_roots,
    build_tree,
    catabolic_lemma_roots,
    component_counts,
    config_hash,
    derive_seed,
    n0_model_one,
    phi,
    psi,
    run_ensemble,
    theory_curves,
)
from rulenet.tables import SchemaError, read_json, read_table  # noqa: F401

__all__ = [
    "CapacityError",
    "EnsembleBudgetError",
    "GwSchedule",
    "Kind",
    "MemoryBudgetError",
    "ModelParams",
    "SchemaError",
    "acceptance",
    "anabolic_lemma_roots",
    "build_tree",
    "catabolic_lemma_roots",
    "component_counts",
    "config_hash",
    "derive_seed",
    "n0_model_one",
    "phi",
    "psi",
    "read_json",
    "read_table",
    "run_ensemble",
    "theory_curves",
]
