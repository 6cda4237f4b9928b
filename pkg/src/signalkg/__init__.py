"""SignalKG: reason about the underlying causes of sensor observations.

Parses a signal knowledge base, compiles it into a Boolean Bayesian network,
and infers the posterior probability of causes (entities, actions) from
sensor evidence; includes a forward simulator and a serving layer.
"""

from importlib import resources

from .compiler import BayesianNetwork, Cpt, NodeId, compile_bn, export_bn, import_bn, node_label
from .errors import (
    ConflictingEvidence,
    InvalidKnowledgeBase,
    NetworkTooLarge,
    ParseError,
    RecompilationNeeded,
    SignalKgError,
    UnknownEvidence,
    UnknownNode,
    ZeroProbabilityEvidence,
    ZeroWeightEvidence,
)
from .inference import (
    Evidence,
    Posterior,
    SamplerConfig,
    evidence_from_observations,
    exact_enumeration,
    likelihood_weighting,
)
from .kgmodel import (
    ActionSpec,
    AssetType,
    AttenuationLaw,
    Barrier,
    ClassifierSpec,
    Diagnostic,
    EntityKind,
    KnowledgeBase,
    Room,
    SensorSpec,
    SignalClass,
    SignalSpec,
    class_matches,
    eligible_rooms,
    format_diagnostic,
    parse_kb,
    serialize_kb,
    validate,
)
from .observations import (
    ObservationRecord,
    export_observations,
    observations_to_plain_json,
    parse_observations,
)
from .propagation import Point2D, crossings, detection_prob, distance, received_level
from .simulator import Scenario, forced_scenario, sample_assignments, simulate

__version__ = "0.1.0"


def demo_kb_path(name: str = "building"):
    """Path to a bundled knowledge base: "building" (two-entity scene) or "chain"."""
    return resources.files("signalkg").joinpath("data", f"{name}.ttl")


def load_demo_kb(name: str = "building") -> KnowledgeBase:
    return parse_kb(demo_kb_path(name).read_text(encoding="utf-8"))
