"""HTTP REST interface: submission, retrieval, search, meta-directory, auth.

All mutations require a session token; reads are public. Invariant values
travel with explicit status tags ("computed", "timed_out", "undefined",
"pending", "failed") so a missing value is never ambiguous on the wire.
"""

from __future__ import annotations

import secrets
import time
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from fastapi import FastAPI, Header, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import HTMLResponse, JSONResponse, RedirectResponse
from pydantic import BaseModel, ConfigDict

from . import invariants, query as query_mod, store as store_mod
from .formula import FormulaSyntaxError, NonNumericalInvariant
from .graphs import (
    Graph,
    GraphError,
    from_adjacency_matrix,
    from_edge_list,
    from_graph6,
    to_adjacency_matrix,
    to_edge_list,
    to_graph6,
)
from .invariants import InvariantValue, UnknownInvariant
from .query import BudgetOutOfRange, InvalidConstraint, SearchQuery
from .scheduler import Job, MlfqScheduler, ShuttingDown
from .store import LoginOutcome, Store

SESSION_TTL_SECONDS = 30 * 24 * 3600  # 30-day expiry


class ApiError(Exception):
    def __init__(self, status_code: int, message: str, **extra):
        super().__init__(message)
        self.status_code = status_code
        self.payload = {"error": message, **extra}


class RegisterBody(BaseModel):
    login: str
    password: str
    email: str = ""


class LoginBody(BaseModel):
    login: str
    password: str


class PasswordResetBody(BaseModel):
    login: str
    token: Optional[str] = None
    new_password: Optional[str] = None


class SubmitBody(BaseModel):
    format: str
    data: str
    comment: str
    name: Optional[str] = None
    interesting_invariants: List[str] = []


class CommentBody(BaseModel):
    body: str


class EmbeddingBody(BaseModel):
    # positions only: the schema structurally rejects edge payloads
    model_config = ConfigDict(extra="forbid")
    positions: List[Tuple[float, float]]


class InterestingBody(BaseModel):
    invariant: str


_PARSERS = {
    "graph6": from_graph6,
    "adjacency_matrix": from_adjacency_matrix,
    "edge_list": from_edge_list,
}


def _parse_graph(fmt: str, data: str) -> Graph:
    parser = _PARSERS.get(fmt)
    if parser is None:
        raise ApiError(400, f"unknown format {fmt!r}; expected one of {sorted(_PARSERS)}")
    try:
        return parser(data)
    except GraphError as exc:
        raise ApiError(400, f"{type(exc).__name__}: {exc}")


def _wire_value(value) -> object:
    if isinstance(value, bool) or isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return int(value) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
    return value


def _wire_number(raw, what: str) -> Fraction:
    if isinstance(raw, bool) or not isinstance(raw, (int, float, str)):
        raise ApiError(400, f"{what} must be a number")
    try:
        return Fraction(str(raw))
    except (ValueError, ZeroDivisionError):
        raise ApiError(400, f"{what} must be a number") from None


def _constraint_from_wire(obj: dict) -> query_mod.Constraint:
    if not isinstance(obj, dict) or "type" not in obj:
        raise ApiError(400, "each constraint needs a 'type' field")
    kind = obj["type"]
    try:
        if kind == "invariant_range":
            lo = obj.get("min")
            hi = obj.get("max")
            return query_mod.InvariantRange(
                obj["invariant"],
                None if lo is None else _wire_number(lo, "min"),
                None if hi is None else _wire_number(hi, "max"),
            )
        if kind == "invariant_exact":
            return query_mod.InvariantExact(obj["invariant"], _wire_number(obj["value"], "value"))
        if kind == "invariant_parity":
            return query_mod.InvariantParity(obj["invariant"], obj["parity"])
        if kind == "boolean_class":
            return query_mod.BooleanClass(obj["invariant"], obj.get("mode", "include"))
        if kind == "interesting":
            return query_mod.InterestingMark(obj["invariant"])
        if kind == "text":
            return query_mod.TextSearch(obj["text"], obj.get("scope", "both"))
        if kind == "formula":
            return query_mod.Formula(obj["formula"])
        if kind == "subgraph":
            pattern = _parse_graph(obj.get("pattern_format", "graph6"), obj["pattern"])
            return query_mod.Subgraph(
                pattern, obj.get("mode", "induced"), obj.get("operation", "include")
            )
    except KeyError as exc:
        raise ApiError(400, f"constraint {kind!r} is missing field {exc.args[0]!r}") from None
    raise ApiError(400, f"unknown constraint type {kind!r}")


def _record_view(record: store_mod.GraphRecord) -> dict:
    g = record.graph
    return {
        "id": record.id,
        "canonical_key": record.canonical_key.key,
        "algorithm_version": record.canonical_key.algorithm_version,
        "name": record.name,
        "uploader": record.uploader,
        "order": g.order,
        "edges": g.num_edges(),
        "formats": {
            "graph6": to_graph6(g),
            "adjacency_matrix": to_adjacency_matrix(g),
            "edge_list": to_edge_list(g),
        },
        "comments": [
            {"author": c.author, "created_at": c.created_at, "body": c.body}
            for c in record.comments
        ],
        "embeddings": [
            {"author": e.author, "positions": [list(p) for p in e.positions]}
            for e in record.embeddings
        ],
        "interesting_marks": sorted(record.interesting_marks),
        "invariant_values": [
            {
                "invariant": inv,
                "status": value.status.value,
                "value": _wire_value(value.value),
            }
            for inv, value in sorted(record.invariant_values.items())
        ],
        "related": record.related,
    }


class _Sessions:
    def __init__(self, clock):
        self._clock = clock
        self._tokens: Dict[str, Tuple[int, str, float]] = {}

    def issue(self, user_id: int, login: str) -> str:
        token = secrets.token_hex(16)
        self._tokens[token] = (user_id, login, self._clock() + SESSION_TTL_SECONDS)
        return token

    def resolve(self, token: Optional[str]) -> Tuple[int, str]:
        if token and token in self._tokens:
            user_id, login, expires = self._tokens[token]
            if self._clock() < expires:
                return user_id, login
            del self._tokens[token]
        raise ApiError(401, "a valid session is required")

    def drop_user(self, user_id: int) -> None:
        self._tokens = {t: v for t, v in self._tokens.items() if v[0] != user_id}


def create_app(
    store: Store,
    scheduler: Optional[MlfqScheduler] = None,
    rate_limit_seconds: float = 10.0,
    clock=time.monotonic,
) -> FastAPI:
    app = FastAPI(title="graphhaus", docs_url=None, redoc_url=None)
    sessions = _Sessions(clock)
    last_submission: Dict[int, float] = {}

    @app.exception_handler(ApiError)
    async def handle_api_error(request: Request, exc: ApiError):
        return JSONResponse(exc.payload, status_code=exc.status_code)

    @app.exception_handler(RequestValidationError)
    async def handle_validation_error(request: Request, exc: RequestValidationError):
        return JSONResponse({"error": "invalid request body", "detail": exc.errors()}, status_code=400)

    def auth(authorization: Optional[str]) -> Tuple[int, str]:
        token = None
        if authorization and authorization.startswith("Bearer "):
            token = authorization[len("Bearer "):]
        user_id, login = sessions.resolve(token)
        try:
            # an account disabled after login must not keep mutating
            store.resolve_account(user_id)
        except store_mod.Unauthenticated:
            sessions.drop_user(user_id)
            raise ApiError(401, "account is disabled")
        return user_id, login

    def enqueue_pending(graph_id: int) -> None:
        if scheduler is None:
            return
        for gid, inv in store.pending_jobs():
            if gid == graph_id:
                try:
                    scheduler.submit(Job(gid, inv))
                except ShuttingDown:
                    return

    # -- auth ---------------------------------------------------------------

    @app.post("/api/register", status_code=201)
    def register(body: RegisterBody):
        try:
            user_id = store.create_user(body.login, body.password, body.email)
        except store_mod.NameTaken:
            raise ApiError(409, f"login {body.login!r} is taken")
        except store_mod.StoreError as exc:
            raise ApiError(400, str(exc))
        return {"user_id": user_id}

    @app.post("/api/login")
    def login(body: LoginBody):
        result = store.verify_login(body.login, body.password)
        if result.outcome is LoginOutcome.OK:
            return {"token": sessions.issue(result.user_id, body.login)}
        if result.outcome is LoginOutcome.RESET_REQUIRED:
            raise ApiError(423, "password reset required", reset_required=True)
        raise ApiError(401, "invalid credentials")

    @app.post("/api/password-reset")
    def password_reset(body: PasswordResetBody):
        try:
            if body.token is None:
                # delivery is stubbed: the token comes back in the response
                return {"reset_token": store.begin_password_reset(body.login)}
            if not body.new_password:
                raise ApiError(400, "new_password is required")
            store.complete_password_reset(body.login, body.token, body.new_password)
            return {"status": "password updated"}
        except store_mod.NotFound:
            raise ApiError(404, "unknown account")
        except store_mod.Unauthenticated as exc:
            raise ApiError(401, str(exc))

    # -- graphs ---------------------------------------------------------------

    @app.post("/api/graphs", status_code=201)
    def submit_graph(body: SubmitBody, authorization: Optional[str] = Header(None)):
        user_id, login = auth(authorization)
        g = _parse_graph(body.format, body.data)
        # a duplicate is answered before the throttle: the submitter is
        # invited to comment on the existing record, which costs nothing
        key = store.canonicalizer.canonical_key(g)
        existing = store.find_graph_by_key(key.key)
        if existing is not None:
            raise ApiError(409, "an isomorphic graph is already stored", existing_id=existing)
        now = clock()
        previous = last_submission.get(user_id)
        if previous is not None and now - previous < rate_limit_seconds:
            raise ApiError(429, "one graph at a time: submission throttled")
        try:
            result = store.insert_graph(
                g,
                user_id,
                body.comment,
                name=body.name,
                interesting_marks=body.interesting_invariants,
                precomputed_key=key,
            )
        except store_mod.MissingComment as exc:
            raise ApiError(400, str(exc))
        except UnknownInvariant as exc:
            raise ApiError(400, f"unknown invariant: {exc}")
        except store_mod.Unauthenticated as exc:
            raise ApiError(401, str(exc))
        if result.status == "duplicate":
            raise ApiError(409, "an isomorphic graph is already stored",
                           existing_id=result.graph_id)
        last_submission[user_id] = now
        enqueue_pending(result.graph_id)
        return {"id": result.graph_id}

    @app.get("/api/graphs/{graph_id}")
    def get_graph(graph_id: int):
        try:
            return _record_view(store.get_record(graph_id))
        except store_mod.NotFound:
            raise ApiError(404, f"no graph {graph_id}")

    @app.post("/api/graphs/search")
    def search(body: dict):
        constraints = body.get("constraints", [])
        if not isinstance(constraints, list):
            raise ApiError(400, "constraints must be a list")
        q = SearchQuery(
            [_constraint_from_wire(c) for c in constraints],
            time_budget=float(body.get("time_budget_seconds", query_mod.DEFAULT_BUDGET_SECONDS)),
        )
        try:
            result = query_mod.execute_search(q, store, clock=clock)
        except BudgetOutOfRange as exc:
            raise ApiError(400, str(exc))
        except InvalidConstraint as exc:
            extra = {} if exc.position is None else {"position": exc.position}
            raise ApiError(400, str(exc), **extra)
        except FormulaSyntaxError as exc:
            raise ApiError(400, str(exc), position=exc.position)
        except (NonNumericalInvariant, UnknownInvariant) as exc:
            raise ApiError(400, str(exc))
        return {"ids": result.ids, "complete": result.complete}

    @app.post("/api/graphs/{graph_id}/comments", status_code=201)
    def add_comment(graph_id: int, body: CommentBody, authorization: Optional[str] = Header(None)):
        user_id, _ = auth(authorization)
        try:
            store.add_comment(graph_id, user_id, body.body)
        except store_mod.NotFound:
            raise ApiError(404, f"no graph {graph_id}")
        except store_mod.MissingComment as exc:
            raise ApiError(400, str(exc))
        return {"status": "created"}

    @app.post("/api/graphs/{graph_id}/embeddings", status_code=201)
    def add_embedding(graph_id: int, body: EmbeddingBody, authorization: Optional[str] = Header(None)):
        user_id, _ = auth(authorization)
        try:
            store.add_embedding(graph_id, user_id, body.positions)
        except store_mod.NotFound:
            raise ApiError(404, f"no graph {graph_id}")
        except (store_mod.PositionCountMismatch, store_mod.InvalidPosition) as exc:
            raise ApiError(400, str(exc))
        return {"status": "created"}

    @app.post("/api/graphs/{graph_id}/interesting", status_code=201)
    def add_interesting(graph_id: int, body: InterestingBody, authorization: Optional[str] = Header(None)):
        user_id, _ = auth(authorization)
        try:
            store.mark_interesting(graph_id, user_id, body.invariant)
        except store_mod.NotFound:
            raise ApiError(404, f"no graph {graph_id}")
        except UnknownInvariant as exc:
            raise ApiError(400, f"unknown invariant: {exc}")
        return {"status": "created"}

    # -- registry and meta-directory -------------------------------------------

    @app.get("/api/invariants")
    def list_invariants():
        return [
            {
                "id": d.id,
                "display_name": d.display_name,
                "kind": d.kind.value,
                "hardness": d.hardness.value,
            }
            for d in invariants.registry()
        ]

    @app.get("/api/meta/{family}")
    def meta_family(family: str):
        try:
            meta = store.get_meta_list(family)
        except store_mod.NotFound:
            raise ApiError(404, f"no meta list {family!r}")
        return {
            "family": meta.family,
            "description": meta.description,
            "generator_url": meta.generator_url,
            "entries": [
                {"order": e.order, "count": e.count, "file_ref": e.file_ref}
                for e in meta.entries
            ],
        }

    @app.get("/api/health")
    def health():
        return {"status": "ok", "graphs": store.graph_count()}

    # -- UI pages and the legacy URL scheme -------------------------------------

    @app.get("/ViewGraphInfo.action")
    def legacy_graph_url(id: str = ""):
        if not id.isdigit():
            raise ApiError(400, "id must be numeric")
        return RedirectResponse(url=f"/graphs/{int(id)}", status_code=301)

    @app.get("/graphs/{graph_id}", response_class=HTMLResponse)
    def graph_page(graph_id: int):
        try:
            record = store.get_record(graph_id)
        except store_mod.NotFound:
            raise ApiError(404, f"no graph {graph_id}")
        title = record.name or f"Graph {record.id}"
        return HTMLResponse(
            "<!doctype html><html><head><meta charset='utf-8'>"
            f"<title>{title} - graphhaus</title></head>"
            f"<body><h1>{title}</h1>"
            f"<p>graph6: <code>{record.canonical_key.key}</code></p>"
            f"<p>See <a href='/api/graphs/{record.id}'>the JSON record</a>.</p>"
            "</body></html>"
        )

    app.state.sessions = sessions
    return app
