"""HTTP front door (FastAPI) over a Workspace.

Token auth against a static users file; mutating endpoints need the
annotator, curator or admin role; curation endpoints need curator/admin and
run as background jobs holding the graph writer exclusively.  Every response
carries the graph snapshot version in the X-Graph-Version header.
"""

from __future__ import annotations

import json
import threading
import uuid
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from pathlib import Path

from fastapi import Depends, FastAPI, Request, Response
from pydantic import BaseModel, Field

from .errors import (
    AnnotationPermissionError,
    BindError,
    ConfigError,
    KoshagraphError,
    NoSuchAnnotationError,
    NoSuchLineError,
    NoSuchNodeError,
    UnknownEntityError,
    UnknownTypeError,
)
from .workspace import Workspace, dumps


class UserRole(str, Enum):
    annotator = "annotator"
    curator = "curator"
    querier = "querier"
    admin = "admin"


MUTATING_ROLES = {UserRole.annotator, UserRole.curator, UserRole.admin}
CURATOR_ROLES = {UserRole.curator, UserRole.admin}


@dataclass(frozen=True)
class User:
    token: str
    name: str
    role: UserRole


@dataclass
class ServiceConfig:
    data_dir: Path
    users_file: Path
    ontology_path: Path | None = None
    templates_path: Path | None = None
    port: int = 8000
    host: str = "127.0.0.1"
    load_fixtures: bool = True


def default_users_path() -> Path:
    return Path(str(resources.files("koshagraph").joinpath("data/users.json")))


def load_users(path: Path) -> dict[str, User]:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
        users = {u["token"]: User(u["token"], u["name"], UserRole(u["role"])) for u in raw}
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        raise ConfigError(f"cannot load users file {path}: {exc}") from exc
    if not users:
        raise ConfigError(f"users file {path} defines no users")
    return users


class ApiError(KoshagraphError):
    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code

    def payload(self) -> dict:
        return {"type": self.code, "message": str(self)}


_STATUS_BY_ERROR = (
    (NoSuchLineError, 404),
    (NoSuchNodeError, 404),
    (NoSuchAnnotationError, 404),
    (UnknownEntityError, 404),
    (UnknownTypeError, 400),
    (AnnotationPermissionError, 403),
)


def _status_for(exc: KoshagraphError) -> int:
    if isinstance(exc, ApiError):
        return exc.status
    for cls, status in _STATUS_BY_ERROR:
        if isinstance(exc, cls):
            return status
    return 400


@dataclass
class JobManager:
    jobs: dict[str, dict] = field(default_factory=dict)
    lock: threading.Lock = field(default_factory=threading.Lock)

    def start(self, fn) -> str:
        job_id = uuid.uuid4().hex
        with self.lock:
            self.jobs[job_id] = {"status": "running"}

        def run():
            try:
                report = fn()
                with self.lock:
                    self.jobs[job_id] = {"status": "done", "report": report}
            except Exception as exc:  # surfaced when polled
                with self.lock:
                    self.jobs[job_id] = {"status": "error", "error": str(exc)}

        threading.Thread(target=run, daemon=True).start()
        return job_id

    def get(self, job_id: str) -> dict:
        with self.lock:
            job = self.jobs.get(job_id)
        if job is None:
            raise ApiError(404, "no_such_job", f"no curation job {job_id!r}")
        return dict(job)


class EntityBody(BaseModel):
    line_id: int
    entity_type: str
    lemma: str | None = None
    unnamed_ordinal: int | None = None


class RelationBody(BaseModel):
    line_id: int
    src: str
    relation_type: str
    dst: str
    detail: str | None = None


class QueryBody(BaseModel):
    template_id: str | None = None
    args: list[str] = []
    raw: str | None = None


class CurateBody(BaseModel):
    pass_: str = Field(alias="pass")
    dry_run: bool = False

    model_config = {"populate_by_name": True}


class ResolveBody(BaseModel):
    entity_type: str


class LinkBody(BaseModel):
    lemma_a: str
    lemma_b: str


def create_app(config: ServiceConfig) -> FastAPI:
    workspace = Workspace(config.data_dir, config.ontology_path, config.templates_path)
    if config.load_fixtures and len(workspace.corpus) == 0:
        workspace.load_fixtures()
    users = load_users(config.users_file)
    jobs = JobManager()

    app = FastAPI(title="koshagraph", version="0.1.0")
    app.state.workspace = workspace

    def reply(payload: dict, status: int = 200) -> Response:
        return Response(content=dumps(payload) + "\n", status_code=status,
                        media_type="application/json",
                        headers={"X-Graph-Version": str(workspace.graph.version)})

    def authenticate(request: Request) -> User:
        token = request.headers.get("X-Auth-Token")
        if token is None:
            auth = request.headers.get("Authorization", "")
            if auth.startswith("Bearer "):
                token = auth[len("Bearer "):]
        user = users.get(token or "")
        if user is None:
            raise ApiError(401, "unauthorized", "missing or unknown auth token")
        return user

    def require(user: User, roles: set[UserRole]) -> None:
        if user.role not in roles:
            raise ApiError(403, "forbidden", f"role {user.role.value!r} may not do this")

    @app.exception_handler(KoshagraphError)
    async def on_error(_request, exc: KoshagraphError):
        return Response(content=dumps({"error": exc.payload()}) + "\n",
                        status_code=_status_for(exc), media_type="application/json",
                        headers={"X-Graph-Version": str(workspace.graph.version)})

    @app.get("/api/corpus/{chapter}")
    def get_corpus(chapter: str, request: Request,
                   user: User = Depends(authenticate)):
        params = request.query_params
        from_verse = int(params.get("from", 1))
        to_verse = int(params.get("to", from_verse if "from" in params else 10**9))
        return reply(workspace.corpus_payload(chapter, from_verse, to_verse))

    @app.get("/api/annotate")
    def list_annotations(line_id: int, user: User = Depends(authenticate)):
        return reply(workspace.annotations_payload(line_id))

    @app.post("/api/annotate/entity")
    def annotate_entity(body: EntityBody, user: User = Depends(authenticate)):
        require(user, MUTATING_ROLES)
        return reply(workspace.annotate_entity(
            body.line_id, body.entity_type, user.name,
            lemma=body.lemma, unnamed_ordinal=body.unnamed_ordinal), 201)

    @app.post("/api/annotate/relation")
    def annotate_relation(body: RelationBody, user: User = Depends(authenticate)):
        require(user, MUTATING_ROLES)
        return reply(workspace.annotate_relation(
            body.line_id, body.src, body.relation_type, body.dst, user.name,
            detail=body.detail), 201)

    @app.delete("/api/annotate/{ann_id}")
    def delete_annotation(ann_id: int, user: User = Depends(authenticate)):
        require(user, MUTATING_ROLES)
        return reply(workspace.delete_annotation(
            ann_id, user.name, is_curator=user.role in CURATOR_ROLES))

    @app.get("/api/suggest")
    def suggest(q: str = "", user: User = Depends(authenticate)):
        return reply(workspace.suggest_payload(q))

    @app.get("/api/templates")
    def templates(user: User = Depends(authenticate)):
        return reply(workspace.templates_payload())

    @app.post("/api/query")
    def query(body: QueryBody, user: User = Depends(authenticate)):
        return reply(workspace.query_payload(body.template_id, body.args, body.raw))

    @app.post("/api/curate")
    def curate(body: CurateBody, user: User = Depends(authenticate)):
        require(user, CURATOR_ROLES)
        job_id = jobs.start(lambda: workspace.curate(body.pass_, body.dry_run))
        return reply({"job_id": job_id, "graph_version": workspace.graph.version}, 202)

    @app.get("/api/curate/{job_id}")
    def curate_status(job_id: str, user: User = Depends(authenticate)):
        return reply(jobs.get(job_id))

    @app.get("/api/conflicts")
    def conflicts(user: User = Depends(authenticate)):
        return reply(workspace.conflicts_payload())

    @app.post("/api/conflicts/{lemma}/resolve")
    def resolve(lemma: str, body: ResolveBody, user: User = Depends(authenticate)):
        require(user, CURATOR_ROLES)
        return reply(workspace.resolve_conflict(lemma, body.entity_type, user.name))

    @app.post("/api/link")
    def link(body: LinkBody, user: User = Depends(authenticate)):
        require(user, CURATOR_ROLES)
        return reply(workspace.link_equivalent(body.lemma_a, body.lemma_b, user.name))

    @app.get("/api/graph/export")
    def export_graph(user: User = Depends(authenticate)):
        return reply(workspace.export_payload())

    @app.get("/api/graph/stats")
    def stats(user: User = Depends(authenticate)):
        return reply(workspace.stats_payload())

    return app


def serve(config: ServiceConfig) -> None:
    """Run the service; raises ConfigError/BindError on startup problems."""
    import uvicorn

    app = create_app(config)
    try:
        uvicorn.run(app, host=config.host, port=config.port, log_level="warning")
    except OSError as exc:
        raise BindError(f"cannot bind {config.host}:{config.port}: {exc}") from exc
