"""Prime spectra of complete local rings as cardinality-annotated posets,
minfeasible partitions, and the predicted spectrum of a precompletion."""

from .cardinality import ALEPH0, CONTINUUM, ONE, Cardinality
from .chains import (chain_report, coheight, is_catenary, maximal_chains, saturated_chains,
                     verify_chain_theorems)
from .errors import (CycleDetected, DocumentSyntaxError, EmptyX, InvariantViolation, MissingFlags,
                     NotAPartition, NotConstructive, NotMinimal, PartitionInvalid,
                     ProvenanceMismatch, SpecPosetError, UnknownNode)
from .io import InstanceDocument, load, load_fixture, parse, render_dot, serialize
from .partition import (MinfeasiblePartition, ValidationReport, fiber_classes, over_set,
                        under_set, validate_minfeasible)
from .poset import (PrimeNode, RingFlags, SpecDiagram, closure, coalesce, minimal_nodes,
                    transitive_reduction)
from .precompletion import (Mode, PrecompletionDiagram, fiber_report, quotient_order, s_sets,
                            spec_A)
from .ring_conditions import (Characteristic, ConditionReport, Verdict,
                              check_construction_applicability, check_remark_conditions)

__version__ = "0.1.0"
