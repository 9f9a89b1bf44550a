"""HTTP/JSON service over the store.

Authentication is pre-shared bearer tokens defined in the config file as
``auth.token.<token> = <role>:<subject>`` with roles ``chw`` and
``supervisor``. Supervisors see everything; a CHW sees only their own
quests, efficiency, and assigned children.
"""

from __future__ import annotations

from datetime import datetime

from fastapi import Depends, FastAPI, HTTPException, Request
from fastapi.responses import JSONResponse

from ..errors import DomainError
from ..timefmt import parse_instant
from .store import Store, SyncBatch


class Principal:
    def __init__(self, role: str, subject: str):
        self.role = role
        self.subject = subject

    @property
    def is_supervisor(self) -> bool:
        return self.role == "supervisor"


def parse_tokens(config) -> dict[str, Principal]:
    tokens = {}
    for token, value in config.section("auth.token").items():
        role, _, subject = value.partition(":")
        if role not in ("chw", "supervisor") or not subject:
            raise DomainError(f"bad auth token definition for {token!r}: {value!r}")
        tokens[token] = Principal(role=role, subject=subject)
    return tokens


def _parse_instant(value: str | None, name: str) -> datetime | None:
    if value is None:
        return None
    try:
        return parse_instant(value)
    except ValueError:
        raise HTTPException(status_code=422, detail=f"bad {name} timestamp")


def create_app(store: Store) -> FastAPI:
    app = FastAPI(title="nutriquest", version="0.1.0")
    tokens = parse_tokens(store.config)

    def authenticate(request: Request) -> Principal:
        header = request.headers.get("authorization", "")
        if not header.lower().startswith("bearer "):
            raise HTTPException(status_code=401, detail="bearer token required")
        principal = tokens.get(header[7:].strip())
        if principal is None:
            raise HTTPException(status_code=401, detail="unknown token")
        return principal

    def require_supervisor(principal: Principal = Depends(authenticate)) -> Principal:
        if not principal.is_supervisor:
            raise HTTPException(status_code=403, detail="supervisor role required")
        return principal

    @app.get("/v1/healthz")
    def healthz():
        return {"status": "ok", "accepted_measurements": len(store.measurements)}

    @app.post("/v1/sync")
    def sync(body: dict, principal: Principal = Depends(authenticate)):
        try:
            batch = SyncBatch.from_dict(body)
        except DomainError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        if not principal.is_supervisor and principal.subject != batch.chw_id:
            raise HTTPException(status_code=403,
                                detail="token does not match batch chw_id")
        outcomes = store.submit_batch(batch)
        return {"batch_id": batch.batch_id, "outcomes": outcomes}

    @app.post("/v1/zscore")
    def zscore_preview(body: dict, principal: Principal = Depends(authenticate)):
        try:
            return store.zscore_preview(
                child_id=body.get("child_id"),
                sex=body.get("sex"),
                age_days=body.get("age_days"),
                weight=body.get("weight"),
                height=body.get("height"),
                height_mode=body.get("height_mode", "standing"),
                muac=body.get("muac"),
                timestamp=_parse_instant(body.get("timestamp"), "timestamp"),
            )
        except KeyError as exc:
            raise HTTPException(status_code=404, detail=f"unknown child {exc}")
        except (DomainError, ValueError) as exc:
            raise HTTPException(status_code=422, detail=str(exc))

    @app.get("/v1/quests")
    def quests(chw_id: str | None = None, max_quests: int | None = None,
               principal: Principal = Depends(authenticate)):
        subject = chw_id or (principal.subject if not principal.is_supervisor else None)
        if subject is None:
            raise HTTPException(status_code=422, detail="chw_id required")
        if not principal.is_supervisor and subject != principal.subject:
            raise HTTPException(status_code=403, detail="not your quest list")
        if subject not in store.registry.chws:
            raise HTTPException(status_code=404, detail=f"unknown chw {subject}")
        return store.quests_payload(subject, max_quests)

    @app.get("/v1/leaderboard")
    def get_leaderboard(start: str | None = None, end: str | None = None,
                        principal: Principal = Depends(authenticate)):
        return store.leaderboard_payload(_parse_instant(start, "start"),
                                         _parse_instant(end, "end"))

    @app.get("/v1/hotspots")
    def hotspots(layer: str = "gistar", indicator: str | None = None,
                 principal: Principal = Depends(authenticate)):
        try:
            return store.hotspot_payload(layer=layer, indicator=indicator)
        except KeyError as exc:
            raise HTTPException(status_code=404, detail=f"unknown layer {exc}")

    @app.get("/v1/coverage")
    def coverage(principal: Principal = Depends(authenticate)):
        return store.coverage_payload()

    @app.get("/v1/alerts")
    def alerts(chw_id: str | None = None, kind: str | None = None,
               severity: str | None = None, include_resolved: bool = True,
               principal: Principal = Depends(require_supervisor)):
        return store.alerts_payload(chw_id=chw_id, kind=kind, severity=severity,
                                    include_resolved=include_resolved)

    @app.post("/v1/alerts/{alert_id}/resolution")
    def resolve_alert(alert_id: str, body: dict,
                      principal: Principal = Depends(require_supervisor)):
        resolution = body.get("resolution")
        if resolution not in ("confirmed", "dismissed"):
            raise HTTPException(status_code=422,
                                detail="resolution must be confirmed|dismissed")
        try:
            return store.resolve_alert(alert_id, resolution).to_dict()
        except KeyError:
            raise HTTPException(status_code=404, detail=f"unknown alert {alert_id}")

    @app.get("/v1/efficiency")
    def efficiency(chw_id: str | None = None, start: str | None = None,
                   end: str | None = None,
                   principal: Principal = Depends(authenticate)):
        subject = chw_id or (principal.subject if not principal.is_supervisor else None)
        if subject is None:
            raise HTTPException(status_code=422, detail="chw_id required")
        if not principal.is_supervisor and subject != principal.subject:
            raise HTTPException(status_code=403,
                                detail="supervisor role required for other CHWs")
        if subject not in store.registry.chws:
            raise HTTPException(status_code=404, detail=f"unknown chw {subject}")
        return store.efficiency_payload(subject, _parse_instant(start, "start"),
                                        _parse_instant(end, "end"))

    @app.get("/v1/children")
    def children(principal: Principal = Depends(authenticate)):
        if principal.is_supervisor:
            return store.children_payload()
        return store.children_payload(principal.subject)

    @app.post("/v1/recompute")
    def recompute(body: dict | None = None,
                  principal: Principal = Depends(require_supervisor)):
        now = _parse_instant((body or {}).get("now"), "now")
        layers = store.recompute_layers(now)
        return {"generated_at": layers.generated_at.isoformat(),
                "indicator": layers.indicator}

    @app.exception_handler(DomainError)
    def domain_error_handler(request: Request, exc: DomainError):
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    return app


def serve(store: Store, host: str = "127.0.0.1", port: int = 8080) -> None:
    import uvicorn
    uvicorn.run(create_app(store), host=host, port=port, log_level="warning")
