"""Skyline and sky-band discovery over hidden databases behind top-k search interfaces."""

from .bench import BenchReport, ExperimentConfig, baseline_crawl, run_experiment
from .cost import (
    adversarial_sq_instance,
    binom_bound,
    cost_bounds,
    exp_bound,
    expected_cost,
    expected_cost_closed,
    expected_cost_closed_corrected,
    expected_cost_recurrence,
    pqdb_cost_bound,
    theorem1_threshold,
)
from .data import (
    AttributeConfig,
    GeneratorConfig,
    IngestReport,
    SchemaConfig,
    discretize,
    export_csv,
    gen_synthetic,
    ingest_csv,
    load_dataset,
)
from .interface import (
    BudgetExhausted,
    Comparator,
    DiscoverySession,
    InterfaceViolation,
    Lexicographic,
    Predicate,
    Query,
    RandomLinearExtension,
    RandomMatchingSkyline,
    WeightedSum,
)
from .model import (
    AttributeSchema,
    Dataset,
    InterfaceClass,
    InvalidParameterError,
    MalformedInputError,
    Record,
    Role,
    dominates,
    make_schema,
    oracle_skyband,
    oracle_skyline,
    paper_example,
)
from .mq import mq_discover
from .pq import pq2d_cost_formula, pq2d_discover, pq2dsub_discover, pqdb_discover
from .result import DiscoveryResult
from .rq import rq_discover
from .skyband import SkybandResult, pq_skyband, rq_skyband, sq_skyband_partial
from .sq import sq_discover

__version__ = "0.1.0"
