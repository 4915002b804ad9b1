"""Read-only HTTP analysis service.

One immutable corpus snapshot serves every request; POST /api/admin/reload
builds a replacement off to the side and swaps it atomically, bumping the
snapshot version and clearing the response cache.  Responses are cached as
encoded bytes keyed by (canonical request, snapshot version), so repeating a
request returns the identical body; concurrent misses on one key compute it
once and share the result.

Every error body is {"error": {"code", "message"[, "param"]}}.
"""
from __future__ import annotations

import json
import os
import threading
from collections import OrderedDict
from dataclasses import dataclass
from typing import Any, Callable, Mapping

from fastapi import FastAPI, Request
from fastapi.responses import Response

from .corpus import Corpus, PeriodFilter, drop_invalid, load_corpus, validate_corpus
from .geo import (
    CountryActivity,
    ROLE_STUDIED,
    ROLES,
    build_contingency,
    classify_countries,
    country_activity,
    representation_residuals,
    residual_label,
    trim_contingency,
)
from .network import (
    SCOPE_SEED,
    SCOPES,
    build_cooccurrence,
    cut_level,
    detect_communities,
    graph_document,
    layout,
)
from .text import (
    Gazetteer,
    Lexicon,
    bundled_gazetteer,
    bundled_lexicons,
    load_gazetteer,
    load_lexicons,
)
from .themes import ThemeModel, extract_themes, word_cloud

DEFAULT_PORT = 8000
PORT_ENV_VAR = "BIBLIONET_PORT"

_LOOPBACK_HOSTS = frozenset({"127.0.0.1", "::1", "localhost", "testclient"})


@dataclass
class ServiceConfig:
    """Everything the server needs; paths default to the bundled data files."""

    corpus_path: str
    port: int = DEFAULT_PORT
    seed: int = 0
    lexicons_path: str | None = None
    gazetteer_path: str | None = None
    drop_invalid: bool = False
    cache_max_entries: int | None = None
    host: str = "127.0.0.1"
    ui_dir: str | None = None


@dataclass(frozen=True)
class CorpusSnapshot:
    """Immutable view every in-flight request reads from."""

    corpus: Corpus
    version: int
    lexicons: tuple[Lexicon, ...]
    gazetteer: Gazetteer


class CorpusLoadError(ValueError):
    """Corpus file unreadable or failing validation without --drop-invalid."""


def build_snapshot(config: ServiceConfig, version: int) -> CorpusSnapshot:
    """Load, validate, and freeze one corpus snapshot."""
    try:
        corpus = load_corpus(config.corpus_path)
    except (OSError, ValueError) as exc:
        raise CorpusLoadError(f"cannot load corpus: {exc}") from exc
    report = validate_corpus(corpus)
    if report:
        if config.drop_invalid:
            corpus = drop_invalid(corpus, report)
        else:
            first = report[0]
            raise CorpusLoadError(
                f"corpus has {len(report)} validation violation(s); first: "
                f"record {first.record_id!r}, rule {first.rule}: {first.detail}"
            )
    lexicons = (
        tuple(load_lexicons(config.lexicons_path))
        if config.lexicons_path
        else tuple(bundled_lexicons())
    )
    gazetteer = (
        load_gazetteer(config.gazetteer_path)
        if config.gazetteer_path
        else bundled_gazetteer()
    )
    return CorpusSnapshot(
        corpus=corpus, version=version, lexicons=lexicons, gazetteer=gazetteer
    )


@dataclass(frozen=True)
class AnalysisRequest:
    """Endpoint name plus parameters in canonical (sorted, stringified) form."""

    endpoint: str
    params: tuple[tuple[str, str], ...]


def canonical_request(endpoint: str, params: Mapping[str, Any]) -> AnalysisRequest:
    return AnalysisRequest(
        endpoint=endpoint,
        params=tuple(sorted((k, str(v)) for k, v in params.items())),
    )


def cache_key(request: AnalysisRequest, snapshot_version: int) -> str:
    query = "&".join(f"{k}={v}" for k, v in request.params)
    return f"{request.endpoint}?{query}@v{snapshot_version}"


class ResultCache:
    """LRU byte cache with single-flight computation per key.

    A second requester for a key that is being computed waits for the first
    instead of recomputing.
    """

    def __init__(self, max_entries: int | None = None):
        if max_entries is not None and max_entries < 1:
            raise ValueError(f"max_entries must be >= 1, got {max_entries}")
        self._max = max_entries
        self._lock = threading.Lock()
        self._data: OrderedDict[str, bytes] = OrderedDict()
        self._inflight: dict[str, threading.Event] = {}

    def __len__(self) -> int:
        with self._lock:
            return len(self._data)

    def clear(self) -> None:
        with self._lock:
            self._data.clear()

    def get_or_compute(self, key: str, compute: Callable[[], bytes]) -> bytes:
        while True:
            with self._lock:
                if key in self._data:
                    self._data.move_to_end(key)
                    return self._data[key]
                event = self._inflight.get(key)
                if event is None:
                    self._inflight[key] = threading.Event()
                    break
            event.wait()
        try:
            value = compute()
        except BaseException:
            with self._lock:
                self._inflight.pop(key).set()
            raise
        with self._lock:
            self._data[key] = value
            if self._max is not None:
                while len(self._data) > self._max:
                    self._data.popitem(last=False)
            self._inflight.pop(key).set()
        return value


class ApiError(Exception):
    """Maps to an error response body with machine-readable fields."""

    def __init__(self, status: int, code: str, message: str, param: str | None = None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.param = param

    def body(self) -> dict:
        error: dict[str, Any] = {"code": self.code, "message": self.message}
        if self.param is not None:
            error["param"] = self.param
        return {"error": error}


def _encode(payload: Any) -> bytes:
    return json.dumps(
        payload, sort_keys=True, ensure_ascii=False, separators=(",", ":")
    ).encode("utf-8")


def _json_response(payload: Any, status: int = 200) -> Response:
    return Response(content=_encode(payload), status_code=status, media_type="application/json")


def _parse_int(
    raw: str | None,
    name: str,
    default: int | None,
    minimum: int | None = None,
) -> int:
    if raw is None:
        if default is None:
            raise ApiError(400, "invalid_parameter", f"missing required parameter '{name}'", name)
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ApiError(
            400, "invalid_parameter", f"'{name}' must be an integer, got {raw!r}", name
        ) from None
    if minimum is not None and value < minimum:
        raise ApiError(
            400, "invalid_parameter", f"'{name}' must be >= {minimum}, got {value}", name
        )
    return value


def _parse_choice(raw: str | None, name: str, choices: tuple[str, ...], default: str) -> str:
    if raw is None:
        return default
    if raw not in choices:
        raise ApiError(
            400,
            "invalid_parameter",
            f"'{name}' must be one of {', '.join(choices)}; got {raw!r}",
            name,
        )
    return raw


def _reject_unknown_params(request: Request, allowed: frozenset[str]) -> None:
    unknown = set(request.query_params) - set(allowed)
    if unknown:
        name = sorted(unknown)[0]
        raise ApiError(400, "invalid_parameter", f"unknown parameter '{name}'", name)


# ---------------------------------------------------------------------------
# Payload builders: pure functions of snapshot data, shared with the CLI.

def summary_payload(corpus: Corpus) -> dict:
    years = corpus.year_range()
    return {
        "papers": len(corpus),
        "years": list(years) if years is not None else None,
        "keywords": len(corpus.keyword_index),
    }


def activity_payload(activity: CountryActivity) -> dict:
    return {
        "period": {"from": activity.period.from_year, "to": activity.period.to_year},
        "authored": dict(sorted(activity.authored.items())),
        "studied": dict(sorted(activity.studied.items())),
    }


def classes_payload(
    corpus: Corpus,
    lexicons: tuple[Lexicon, ...],
    role: str,
    k: int,
    gazetteer: Gazetteer | None,
) -> dict:
    """Classification plus residuals over the same trimmed table.

    All-zero rows and columns carry no signal and break residual totals, so
    they are dropped up front and reported in the payload.
    """
    table = build_contingency(corpus, list(lexicons), role, gazetteer)
    trimmed, excluded_countries, excluded_columns = trim_contingency(table)
    if not trimmed.rows or not trimmed.cols:
        raise ApiError(
            400, "unprocessable", "contingency table has no non-zero rows or columns"
        )
    if not 1 <= k <= len(trimmed.rows):
        raise ApiError(
            400,
            "invalid_parameter",
            f"'k' must be between 1 and {len(trimmed.rows)} (countries with data), got {k}",
            "k",
        )
    classification = classify_countries(trimmed, k)
    residuals = representation_residuals(trimmed)
    return {
        "role": role,
        "k": k,
        "countries": list(trimmed.rows),
        "columns": list(trimmed.cols),
        "counts": [[int(v) for v in row] for row in trimmed.n],
        "assignment": {code: classification.assignment[code] for code in trimmed.rows},
        "residuals": [[float(v) for v in row] for row in residuals],
        "labels": [[residual_label(float(v)) for v in row] for row in residuals],
        "merges": [[a, b, h] for a, b, h in classification.merges],
        "excluded_countries": list(excluded_countries),
        "excluded_columns": list(excluded_columns),
    }


def network_payload(
    corpus: Corpus, scope: str, min_weight: int, level: int | None, seed: int
) -> dict:
    graph = build_cooccurrence(corpus, scope=scope, min_weight=min_weight)
    if not graph.nodes:
        return {"level": 0, "max_level": 0, "modularity": None, "nodes": [], "edges": []}
    hierarchy = detect_communities(graph, seed)
    chosen = hierarchy.max_level if level is None else min(level, hierarchy.max_level)
    partition = cut_level(hierarchy, chosen)
    positions = layout(graph, seed)
    doc = graph_document(graph, partition, positions)
    return {
        "level": chosen,
        "max_level": hierarchy.max_level,
        "modularity": hierarchy.modularity[chosen],
        "nodes": doc["nodes"],
        "edges": doc["edges"],
    }


def _cloud_dict(model: ThemeModel, theme_id: int, top_n: int) -> dict:
    cloud = word_cloud(model, theme_id, top_n=top_n)
    return {
        "id": cloud.theme_id,
        "doc_count": cloud.doc_count,
        "color_rank": cloud.color_rank,
        "top_terms": [
            {"term": e.term, "frequency": e.frequency, "size": float(e.relative_size)}
            for e in cloud.entries
        ],
    }


def themes_payload(model: ThemeModel, top_n: int = 50) -> dict:
    return {
        "k": model.k,
        "seed": model.seed,
        "themes": [_cloud_dict(model, theme.id, top_n) for theme in model.themes],
    }


def cloud_payload(model: ThemeModel, theme_id: int, top_n: int) -> dict:
    return _cloud_dict(model, theme_id, top_n)


# ---------------------------------------------------------------------------
# Application wiring.

def create_app(config: ServiceConfig, preload: bool = True) -> FastAPI:
    """Build the service around one snapshot.

    With preload, a corpus that fails to load prevents startup; without it
    the app starts empty and every data endpoint answers 503 until a reload
    succeeds.
    """
    app = FastAPI(title="biblionet", docs_url=None, redoc_url=None, openapi_url=None)
    app.state.config = config
    app.state.cache = ResultCache(config.cache_max_entries)
    app.state.reload_lock = threading.Lock()
    app.state.snapshot = build_snapshot(config, 1) if preload else None

    @app.exception_handler(ApiError)
    async def _api_error(request: Request, exc: ApiError) -> Response:
        return _json_response(exc.body(), status=exc.status)

    def snapshot() -> CorpusSnapshot:
        snap = app.state.snapshot
        if snap is None:
            raise ApiError(503, "corpus_not_loaded", "no corpus snapshot is loaded")
        return snap

    def respond(endpoint: str, params: Mapping[str, Any], build: Callable[[CorpusSnapshot], Any]) -> Response:
        snap = snapshot()
        key = cache_key(canonical_request(endpoint, params), snap.version)
        body = app.state.cache.get_or_compute(key, lambda: _encode(build(snap)))
        return Response(content=body, media_type="application/json")

    @app.get("/api/summary")
    def api_summary(request: Request) -> Response:
        _reject_unknown_params(request, frozenset())
        return respond("summary", {}, lambda snap: summary_payload(snap.corpus))

    @app.get("/api/geo/activity")
    def api_activity(request: Request) -> Response:
        _reject_unknown_params(request, frozenset({"from", "to"}))
        years = snapshot().corpus.year_range()
        fallback = years if years is not None else (0, 0)
        from_year = _parse_int(request.query_params.get("from"), "from", fallback[0])
        to_year = _parse_int(request.query_params.get("to"), "to", fallback[1])
        if from_year > to_year:
            raise ApiError(
                400, "invalid_parameter", f"'from' {from_year} exceeds 'to' {to_year}", "from"
            )

        def build(snap: CorpusSnapshot) -> dict:
            period = PeriodFilter(from_year=from_year, to_year=to_year)
            return activity_payload(country_activity(snap.corpus, period, snap.gazetteer))

        return respond("geo/activity", {"from": from_year, "to": to_year}, build)

    @app.get("/api/geo/classes")
    def api_classes(request: Request) -> Response:
        _reject_unknown_params(request, frozenset({"k", "role"}))
        k = _parse_int(request.query_params.get("k"), "k", 2, minimum=1)
        role = _parse_choice(request.query_params.get("role"), "role", ROLES, ROLE_STUDIED)

        def build(snap: CorpusSnapshot) -> dict:
            try:
                return classes_payload(snap.corpus, snap.lexicons, role, k, snap.gazetteer)
            except ValueError as exc:
                raise ApiError(400, "unprocessable", str(exc)) from exc

        return respond("geo/classes", {"k": k, "role": role}, build)

    @app.get("/api/network")
    def api_network(request: Request) -> Response:
        _reject_unknown_params(request, frozenset({"scope", "minWeight", "level"}))
        scope = _parse_choice(request.query_params.get("scope"), "scope", SCOPES, SCOPE_SEED)
        min_weight = _parse_int(request.query_params.get("minWeight"), "minWeight", 1, minimum=1)
        raw_level = request.query_params.get("level")
        level = None if raw_level is None else _parse_int(raw_level, "level", None, minimum=0)

        def build(snap: CorpusSnapshot) -> dict:
            return network_payload(
                snap.corpus, scope, min_weight, level, app.state.config.seed
            )

        params = {"scope": scope, "minWeight": min_weight}
        if level is not None:
            params["level"] = level
        return respond("network", params, build)

    @app.get("/api/themes")
    def api_themes(request: Request) -> Response:
        _reject_unknown_params(request, frozenset({"k", "top"}))
        k = _parse_int(request.query_params.get("k"), "k", 10, minimum=1)
        top_n = _parse_int(request.query_params.get("top"), "top", 50, minimum=1)

        def build(snap: CorpusSnapshot) -> dict:
            try:
                model = extract_themes(snap.corpus, k, seed=app.state.config.seed)
            except ValueError as exc:
                raise ApiError(400, "invalid_parameter", str(exc), "k") from exc
            return themes_payload(model, top_n)

        return respond("themes", {"k": k, "top": top_n}, build)

    @app.get("/api/themes/{theme_id}/cloud")
    def api_cloud(theme_id: str, request: Request) -> Response:
        _reject_unknown_params(request, frozenset({"k", "top"}))
        try:
            tid = int(theme_id)
        except ValueError:
            raise ApiError(
                400, "invalid_parameter", f"theme id must be an integer, got {theme_id!r}", "theme_id"
            ) from None
        k = _parse_int(request.query_params.get("k"), "k", 10, minimum=1)
        top_n = _parse_int(request.query_params.get("top"), "top", 50, minimum=1)

        def build(snap: CorpusSnapshot) -> dict:
            try:
                model = extract_themes(snap.corpus, k, seed=app.state.config.seed)
            except ValueError as exc:
                raise ApiError(400, "invalid_parameter", str(exc), "k") from exc
            if not 0 <= tid < model.k:
                raise ApiError(
                    404, "unknown_theme", f"no theme {tid}; themes run 0..{model.k - 1}"
                )
            return cloud_payload(model, tid, top_n)

        return respond(f"themes/{tid}/cloud", {"k": k, "top": top_n}, build)

    @app.post("/api/admin/reload")
    def api_reload(request: Request) -> Response:
        host = request.client.host if request.client else None
        if host is not None and host not in _LOOPBACK_HOSTS:
            raise ApiError(403, "forbidden", "reload is restricted to loopback clients")
        with app.state.reload_lock:
            current = app.state.snapshot
            next_version = (current.version if current else 0) + 1
            try:
                snap = build_snapshot(app.state.config, next_version)
            except CorpusLoadError as exc:
                raise ApiError(503, "reload_failed", str(exc)) from exc
            app.state.snapshot = snap
            app.state.cache.clear()
        return _json_response({"version": snap.version})

    if config.ui_dir and os.path.isdir(config.ui_dir):
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=config.ui_dir, html=True), name="ui")

    return app


def serve(config: ServiceConfig) -> None:
    """Run the service; BIBLIONET_PORT overrides the configured port."""
    import uvicorn

    app = create_app(config)
    port = config.port
    env_port = os.environ.get(PORT_ENV_VAR)
    if env_port:
        try:
            port = int(env_port)
        except ValueError:
            raise ValueError(
                f"{PORT_ENV_VAR} must be an integer, got {env_port!r}"
            ) from None
    uvicorn.run(app, host=config.host, port=port)
