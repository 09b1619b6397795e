"""Session-oriented HTTP API for the interactive abstraction loop.

Sessions are in-memory.  Mutations of one session are serialized by a
per-session lock; snapshots are immutable, so readers never block.
Step certification runs on a background thread: a step is created with
status "pending", which resolves to "certified" or "failed".
"""

from __future__ import annotations

import itertools
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from .abstraction import apply_rule_logged, list_applicable
from .core import ActionSet, DEFAULT_MAX_STATES, Family, Relabelling, build_lts, coname, name
from .errors import CcsError, ParseError, PathError, RuleError, TruncatedLtsError
from .logic import Formula, check as check_formula, classify
from .parsing import Path, RuleStep, parse_ccs, parse_mu, print_family
from .simulation import verify_step, weakly_simulated_by


# ---------------------------------------------------------------------------
# Wire formats


class CreateSession(BaseModel):
    ccs: str
    mu: Optional[str] = None


class StepRequest(BaseModel):
    rule: str
    target: Optional[str] = None
    params: dict[str, object] = {}
    certify: bool = False


class CheckRequest(BaseModel):
    prop: str


class SimulateRequest(BaseModel):
    fromIndex: int
    toIndex: int


def _decode_param(key: str, value: object) -> object:
    if isinstance(value, list):
        acts = [
            coname(v[1:]) if isinstance(v, str) and v.startswith("'") else name(str(v))
            for v in value
        ]
        return ActionSet(frozenset(acts))
    if isinstance(value, dict):
        return Relabelling.of({str(k): str(v) for k, v in value.items()})
    return str(value)


def _encode_param(value: object) -> object:
    if isinstance(value, ActionSet):
        return [str(a) for a in sorted(value.members)]
    if isinstance(value, Relabelling):
        return dict(value.pairs)
    return value


# ---------------------------------------------------------------------------
# Sessions


@dataclass
class HistoryItem:
    step: RuleStep
    family: Family
    state_count: int
    certified: str  # certified | failed | pending | skipped
    new_constants: tuple[str, ...] = ()


@dataclass
class Session:
    id: str
    source: str
    family: Family
    formulas: dict[str, Formula]
    history: list[HistoryItem] = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock)

    @property
    def current(self) -> Family:
        return self.history[-1].family if self.history else self.family


def _family_view(family: Family) -> list[dict]:
    from .parsing import print_expr

    return [{"name": n, "body": print_expr(b)} for n, b in family.defs]


def _history_view(session: Session) -> list[dict]:
    return [
        {
            "rule": h.step.rule,
            "target": str(h.step.target) if h.step.target else None,
            "params": {k: _encode_param(v) for k, v in h.step.params},
            "family": _family_view(h.family),
            "stateCount": h.state_count,
            "certified": h.certified,
            "newConstants": list(h.new_constants),
        }
        for h in session.history
    ]


def create_app(max_states: int = DEFAULT_MAX_STATES, certify_cap: int = 100_000) -> FastAPI:
    app = FastAPI(title="ccsabst service")
    app.add_middleware(
        CORSMiddleware,
        allow_origin_regex=r"http://(localhost|127\.0\.0\.1)(:\d+)?",
        allow_methods=["*"],
        allow_headers=["*"],
    )
    sessions: dict[str, Session] = {}
    ids = itertools.count(1)
    store_lock = threading.Lock()
    executor = ThreadPoolExecutor(max_workers=2)

    def get_session(sid: str) -> Session:
        s = sessions.get(sid)
        if s is None:
            raise HTTPException(404, f"unknown session {sid}")
        return s

    def state_count(family: Family) -> int:
        lts = build_lts(family, max_states)
        if lts.truncated:
            raise HTTPException(422, f"state limit {max_states} exceeded")
        return lts.num_states

    @app.post("/sessions")
    def create(req: CreateSession):
        try:
            src = parse_ccs(req.ccs)
            formulas = parse_mu(req.mu, src.sets) if req.mu else {}
        except (ParseError, CcsError) as exc:
            raise HTTPException(400, str(exc))
        with store_lock:
            sid = str(next(ids))
            session = Session(sid, req.ccs, src.family, formulas)
            sessions[sid] = session
        return {
            "id": sid,
            "family": _family_view(src.family),
            "stateCount": state_count(src.family),
            "formulas": sorted(formulas),
        }

    @app.get("/sessions/{sid}")
    def view(sid: str):
        s = get_session(sid)
        with s.lock:
            return {
                "id": s.id,
                "family": _family_view(s.current),
                "initialFamily": _family_view(s.family),
                "stateCount": state_count(s.current),
                "formulas": sorted(s.formulas),
                "history": _history_view(s),
            }

    @app.get("/sessions/{sid}/applicable")
    def applicable(sid: str, path: str):
        s = get_session(sid)
        with s.lock:
            try:
                rules = list_applicable(s.current, Path.parse(path))
            except PathError as exc:
                raise HTTPException(404, str(exc))
        return [
            {
                "rule": r.rule,
                "target": str(r.target) if r.target else None,
                "requiredParams": list(r.required_params),
                "note": r.note,
            }
            for r in rules
        ]

    @app.post("/sessions/{sid}/steps")
    def add_step(sid: str, req: StepRequest):
        s = get_session(sid)
        params = tuple(
            (k, _decode_param(k, v)) for k, v in sorted(req.params.items())
        )
        target = Path.parse(req.target) if req.target else None
        step = RuleStep(req.rule, target, params)
        with s.lock:
            before = s.current
            try:
                after, created = apply_rule_logged(before, step)
            except (RuleError, PathError) as exc:
                raise HTTPException(409, str(exc))
            item = HistoryItem(
                step, after, state_count(after),
                "pending" if req.certify else "skipped", created,
            )
            s.history.append(item)
        if req.certify:
            def certify_job():
                try:
                    ok = verify_step(before, after, certify_cap)
                    item.certified = "certified" if ok else "failed"
                except CcsError:
                    item.certified = "failed"

            executor.submit(certify_job)
        return {
            "index": len(s.history) - 1,
            "family": _family_view(after),
            "stateCount": item.state_count,
            "certified": item.certified,
            "newConstants": list(created),
        }

    @app.delete("/sessions/{sid}/steps/last")
    def undo(sid: str):
        s = get_session(sid)
        with s.lock:
            if not s.history:
                raise HTTPException(409, "history is empty")
            s.history.pop()
            return {
                "family": _family_view(s.current),
                "stateCount": state_count(s.current),
                "historyLength": len(s.history),
            }

    @app.post("/sessions/{sid}/check")
    def check_prop(sid: str, req: CheckRequest):
        s = get_session(sid)
        with s.lock:
            phi = s.formulas.get(req.prop)
            if phi is None:
                raise HTTPException(404, f"unknown prop {req.prop}")
            lts = build_lts(s.current, max_states)
            if lts.truncated:
                raise HTTPException(422, f"state limit {max_states} exceeded")
            try:
                holds = check_formula(lts, phi)
            except CcsError as exc:
                raise HTTPException(400, str(exc))
            return {"holds": holds, "fragment": classify(phi)}

    @app.post("/sessions/{sid}/simulate")
    def simulate(sid: str, req: SimulateRequest):
        s = get_session(sid)
        with s.lock:
            snaps = [s.family] + [h.family for h in s.history]
            for i in (req.fromIndex, req.toIndex):
                if not 0 <= i < len(snaps):
                    raise HTTPException(404, f"no history snapshot {i}")
            left = build_lts(snaps[req.fromIndex], max_states)
            right = build_lts(snaps[req.toIndex], max_states)
            if left.truncated or right.truncated:
                raise HTTPException(422, f"state limit {max_states} exceeded")
            holds, _ = weakly_simulated_by(left, right)
            return {"holds": holds}

    @app.get("/sessions/{sid}/export")
    def export(sid: str):
        s = get_session(sid)
        with s.lock:
            abst = "".join(f"{h.step}\n" for h in s.history)
            return {
                "ccs": s.source,
                "abst": abst,
                "finalFamily": print_family(s.current),
            }

    return app
