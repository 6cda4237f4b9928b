"""HTTP service backing the interactive scenario explorer.

Stateless per request: the knowledge base and its compiled network are an
immutable snapshot, swapped atomically by POST /api/reload. Requests whose
evidence mentions classes without a detected node get a request-local
recompile instead of mutating the shared snapshot.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from .compiler import BayesianNetwork, NodeId, compile_bn, export_bn, node_label
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
    ENUMERATION_GUARD,
    Posterior,
    SamplerConfig,
    evidence_from_observations,
    exact_enumeration,
    likelihood_weighting,
)
from .kgmodel import KnowledgeBase, parse_kb, validate
from .observations import parse_observation_items
from .simulator import forced_scenario


@dataclass(frozen=True)
class ServiceConfig:
    port: int = 8000
    kb_path: str = ""
    default_samples: int = 20000
    cors_allowed: bool = True
    static_dir: str | None = None

    def __post_init__(self):
        if not 1 <= self.port <= 65535:
            raise ValueError(f"port {self.port} outside [1, 65535]")


@dataclass(frozen=True)
class _Snapshot:
    kb: KnowledgeBase
    bn: BayesianNetwork


def _load_snapshot(kb_path: str) -> _Snapshot:
    kb = parse_kb(Path(kb_path).read_text(encoding="utf-8"))
    errors = [d for d in validate(kb) if d.severity == "error"]
    if errors:
        raise InvalidKnowledgeBase(f"{kb_path}: {len(errors)} validation error(s)")
    return _Snapshot(kb, compile_bn(kb))


def _point(p) -> list[float]:
    return [p.x, p.y]


def _model_summary(snap: _Snapshot) -> dict:
    kb = snap.kb
    return {
        "entities": [
            {"id": e.id, "label": e.label, "prior_presence": e.prior_presence}
            for e in sorted(kb.entities.values(), key=lambda r: r.id)
        ],
        "actions": [
            {
                "id": a.id,
                "label": a.label,
                "performed_by": a.performed_by,
                "acts_on": a.acts_on,
                "prob_given_present": a.prob_given_present,
                "creates_signal": a.creates_signal,
            }
            for a in sorted(kb.actions.values(), key=lambda r: r.id)
        ],
        "signals": [
            {
                "id": s.id,
                "label": s.label,
                "signal_class": s.signal_class,
                "source_level": s.source_level,
            }
            for s in sorted(kb.signals.values(), key=lambda r: r.id)
        ],
        "signal_classes": [
            {"id": c.id, "label": c.label, "broader": c.broader}
            for c in sorted(kb.signal_classes.values(), key=lambda r: r.id)
        ],
        "sensors": [
            {
                "id": s.id,
                "label": s.label,
                "position": _point(s.position),
                "classifier": s.classifier,
                "detects_classes": list(kb.classifiers[s.classifier].detects_classes),
            }
            for s in sorted(kb.sensors.values(), key=lambda r: r.id)
        ],
        "rooms": [
            {
                "id": r.id,
                "label": r.label,
                "centroid": _point(r.centroid),
                "contains_assets": list(r.contains_assets),
            }
            for r in sorted(kb.rooms.values(), key=lambda r: r.id)
        ],
        "barriers": [
            {
                "id": b.id,
                "segment": [_point(b.segment[0]), _point(b.segment[1])],
                "attenuation_db": b.attenuation,
            }
            for b in sorted(kb.barriers.values(), key=lambda r: r.id)
        ],
        "bn_node_count": len(snap.bn.nodes),
        "enumeration_guard": ENUMERATION_GUARD,
    }


def _posterior_payload(posterior: Posterior, method: str) -> dict:
    ess = posterior.effective_sample_size
    return {
        "posteriors": {node_label(nid): p for nid, p in posterior.p_true.items()},
        "nodes": [
            {
                "label": node_label(nid),
                "key": {"kind": nid.kind, "parts": list(nid.key)},
                "p_true": p,
            }
            for nid, p in posterior.p_true.items()
        ],
        "method": method,
        "n_samples": posterior.n_samples,
        "effective_sample_size": None if ess == float("inf") else ess,
        "seed": posterior.seed,
    }


class _BadRequest(Exception):
    pass


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise _BadRequest(message)


def create_app(config: ServiceConfig) -> FastAPI:
    app = FastAPI(title="signalkg", version="0.1.0")
    app.state.config = config
    app.state.snapshot = _load_snapshot(config.kb_path)

    if config.cors_allowed:
        from fastapi.middleware.cors import CORSMiddleware

        app.add_middleware(
            CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
        )

    @app.exception_handler(RequestValidationError)
    async def _on_validation(request: Request, exc):  # malformed body is a 400 here
        return JSONResponse(status_code=400, content={"error": "bad-request", "message": str(exc)})

    @app.exception_handler(_BadRequest)
    async def _on_bad_request(request: Request, exc):
        return JSONResponse(status_code=400, content={"error": "bad-request", "message": str(exc)})

    @app.exception_handler(SignalKgError)
    async def _on_domain_error(request: Request, exc: SignalKgError):
        status = 500
        if isinstance(exc, (UnknownEvidence, ConflictingEvidence, UnknownNode, NetworkTooLarge, RecompilationNeeded)):
            status = 422
        elif isinstance(exc, (ZeroWeightEvidence, ZeroProbabilityEvidence)):
            status = 409
        elif isinstance(exc, (ParseError, InvalidKnowledgeBase)):
            status = 400
        return JSONResponse(status_code=status, content={"error": exc.code, "message": str(exc)})

    @app.get("/healthz")
    async def healthz():
        return {"status": "ok"}

    @app.get("/api/model")
    async def model():
        return _model_summary(app.state.snapshot)

    @app.get("/api/bn")
    async def bn():
        return Response(content=export_bn(app.state.snapshot.bn), media_type="application/json")

    @app.post("/api/infer")
    async def infer(body: dict):
        snap: _Snapshot = app.state.snapshot
        _require(isinstance(body.get("observations", []), list), "'observations' must be a list")
        try:
            records = parse_observation_items(body.get("observations", []))
        except ValueError as exc:
            raise _BadRequest(str(exc)) from exc
        pairs = sorted({(r.sensor, r.observed_class) for r in records})
        network = snap.bn
        try:
            evidence = evidence_from_observations(records, network, snap.kb)
        except RecompilationNeeded:
            network = compile_bn(snap.kb, evidence_classes=pairs)
            evidence = evidence_from_observations(records, network, snap.kb)
        if body.get("exact", False):
            return _posterior_payload(exact_enumeration(network, evidence), "exact")
        samples = body.get("samples", config.default_samples)
        seed = body.get("seed", 0)
        workers = body.get("workers", 1)
        _require(isinstance(samples, int) and samples >= 1, "'samples' must be a positive integer")
        _require(isinstance(seed, int), "'seed' must be an integer")
        _require(isinstance(workers, int) and workers >= 1, "'workers' must be a positive integer")
        posterior = likelihood_weighting(
            network, evidence, SamplerConfig(n_samples=samples, seed=seed, workers=workers)
        )
        return _posterior_payload(posterior, "likelihood-weighting")

    @app.post("/api/simulate")
    async def simulate_endpoint(body: dict):
        snap: _Snapshot = app.state.snapshot
        seed = body.get("seed", 0)
        _require(isinstance(seed, int), "'seed' must be an integer")
        force_map = body.get("force", {})
        _require(isinstance(force_map, dict), "'force' must be an object of node -> bool")
        forced: dict[NodeId, bool] = {}
        for name, value in force_map.items():
            _require(isinstance(value, bool), f"force value for {name!r} must be a boolean")
            try:
                forced[NodeId.parse(name.replace(", ", ","))] = value
            except ValueError as exc:
                raise _BadRequest(str(exc)) from exc
        scenario, records = forced_scenario(snap.bn, snap.kb, forced, seed)
        return {
            "seed": seed,
            "scenario": {node_label(nid): v for nid, v in scenario.assignment.items()},
            "observations": [
                {"sensor": r.sensor, "class": r.observed_class, "result": r.result, "time": r.time}
                for r in records
            ],
        }

    @app.post("/api/reload")
    async def reload():
        app.state.snapshot = _load_snapshot(config.kb_path)
        return {"status": "reloaded", "bn_node_count": len(app.state.snapshot.bn.nodes)}

    if config.static_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=config.static_dir, html=True), name="ui")

    return app
