"""The stateful core tying all modules together.

Offline-first sync contract: clients generate measurement ids; the first
accepted payload for an id wins, an identical resubmission is a
duplicate no-op, and a conflicting payload for a known id is rejected.
Every accepted measurement is processed atomically - validated, scored
against growth references, screened, gamified - and written as one log
record; rebuild_from_log() reruns the same deterministic pipeline over
the log, so a crash-recovery rebuild reproduces every ledger exactly.

Writes are serialized under one lock; reads take consistent snapshots;
layer recomputes swap a published reference.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

from ..anthro import (CutoffTable, EngineSettings, GrowthReference,
                      Measurement, bundled_reference, evaluate_measurement)
from ..analytics import EfficiencyWeights, efficiency_score
from ..config import Config
from ..errors import DomainError
from ..game import (BadgeConfig, Campaign, CellContext, GameState, RewardConfig,
                    ScoreEvent, generate_quests, leaderboard, score_submission)
from ..geostat import (GridSpec, build_hotspot_layer, coverage_geojson,
                       coverage_map, density_geojson, hotspot_geojson,
                       kde_density)
from ..integrity import (Alert, Finding, ScreeningConfig, ScreeningResult,
                         digit_preference, screen_measurement)
from ..timefmt import parse_instant
from .log import RecordLog, read_log
from .registry import Registry

UTC = timezone.utc

# metric -> decimal place examined by the terminal-digit rule
DIGIT_METRICS = (("weight", 1), ("height", 1), ("muac", 0))


@dataclass(frozen=True)
class SyncBatch:
    batch_id: str
    chw_id: str
    client_timestamp: datetime
    measurements: tuple   # raw payload dicts, client-generated unique ids

    @classmethod
    def from_dict(cls, d: dict) -> "SyncBatch":
        try:
            return cls(batch_id=str(d["batch_id"]), chw_id=str(d["chw_id"]),
                       client_timestamp=parse_instant(d["client_timestamp"]),
                       measurements=tuple(d["measurements"]))
        except (KeyError, ValueError, TypeError) as exc:
            raise DomainError(f"malformed sync batch: {exc}") from exc


@dataclass
class PublishedLayers:
    generated_at: datetime
    hotspot: object
    density: np.ndarray
    density_cases: int
    coverage: object
    quests: dict                  # chw_id -> list[Quest]
    indicator: str


def parse_campaigns(cfg: Config) -> list:
    campaigns = []
    ids = sorted({k.split(".")[0] for k in cfg.section("campaign")})
    for cid in ids:
        sec = cfg.section(f"campaign.{cid}")
        cells = tuple(int(c) for c in sec.get("cells", "").split(",") if c.strip())
        campaigns.append(Campaign(
            id=cid, name=sec.get("name", cid),
            start=parse_instant(sec["start"]),
            end=parse_instant(sec["end"]),
            multiplier=float(sec.get("multiplier", "1")),
            narrative_stage=int(sec.get("stage", "0")),
            cells=cells,
        ))
    return campaigns


class Store:
    def __init__(self, config: Config, registry: Registry,
                 reference: GrowthReference | None = None,
                 cutoffs: CutoffTable | None = None,
                 log_path=None):
        self.config = config
        self.registry = registry
        self.reference = reference or bundled_reference()
        self.cutoffs = cutoffs or CutoffTable.default()
        self.grid = GridSpec(
            origin_lat=config.get_float("grid.origin_lat"),
            origin_lon=config.get_float("grid.origin_lon"),
            cell_size_m=config.get_float("grid.cell_size_m"),
            rows=config.get_int("grid.rows"),
            cols=config.get_int("grid.cols"),
        )
        self.rewards = RewardConfig.from_config(config)
        self.badges = BadgeConfig.from_config(config)
        self.screening_config = ScreeningConfig.from_config(config)
        self.engine_settings = EngineSettings(
            recumbent_offset_cm=config.get_float("anthro.recumbent_offset_cm"),
            standing_age_days=config.get_int("anthro.standing_age_days"),
        )
        self.efficiency_weights = EfficiencyWeights.from_config(config)
        self.campaigns = parse_campaigns(config)
        self.bandwidth_m = config.get_float("kde.bandwidth_m")
        self.gi_radius = config.get_int("gistar.radius")
        self.gi_fdr = config.get_str("gistar.fdr") not in ("0", "false", "no")
        self.coverage_window_days = config.get_float("coverage.window_days")
        self.indicator = config.get_str("layers.indicator")
        self.max_quests = config.get_int("quests.max")
        self.quest_expiry_days = config.get_float("quests.expiry_days")
        self.digit_min_n = config.get_int("integrity.digit.min_n")
        self.digit_chi2 = config.get_float("integrity.digit.chi2")
        self.digit_window = config.get_int("integrity.digit.window")
        self.dup_window_days = config.get_float("integrity.duplicate.window_days")
        self.dup_min_children = config.get_int("integrity.duplicate.min_children")

        self._lock = threading.RLock()
        self.measurements: dict[str, Measurement] = {}
        self.order: list[str] = []                       # acceptance order
        self.zscores: dict[str, object] = {}
        self.child_history: dict[str, list] = {}
        self.chw_measurements: dict[str, list] = {}
        self.game_states: dict[str, GameState] = {}
        self.alerts: list[Alert] = []
        self.alerts_by_id: dict[str, Alert] = {}
        self.flagged_measurements: set[str] = set()
        self._alert_seq = 0
        self._digit_flags: dict[tuple, bool] = {}
        self._cell_latest: dict[tuple, datetime] = {}
        self._dup_index: dict[tuple, list] = {}
        self.layers: PublishedLayers | None = None

        self._log = None
        if log_path is not None:
            existing = list(read_log(log_path))
            if existing:
                self._replay_records(existing)
            self._log = RecordLog(log_path)

    # --- game state helpers -------------------------------------------------

    def _game_state(self, chw_id: str) -> GameState:
        state = self.game_states.get(chw_id)
        if state is None:
            chw = self.registry.chws.get(chw_id)
            state = GameState(chw_id=chw_id,
                              team_id=chw.team_id if chw else None)
            self.game_states[chw_id] = state
        return state

    # --- sync pipeline --------------------------------------------------------

    def submit_batch(self, batch: SyncBatch) -> list:
        """Process a batch; per-measurement outcomes, idempotent on replay."""
        with self._lock:
            outcomes = []
            for payload in batch.measurements:
                outcomes.append(self._submit_one(payload, batch.chw_id))
            return outcomes

    def _submit_one(self, payload: dict, batch_chw_id: str | None) -> dict:
        try:
            m = Measurement.from_dict(payload)
        except DomainError as exc:
            return {"id": payload.get("id"), "status": "rejected",
                    "reason": "malformed", "detail": str(exc)}
        if batch_chw_id is not None and m.chw_id != batch_chw_id:
            return {"id": m.id, "status": "rejected", "reason": "chw_mismatch",
                    "detail": f"measurement chw {m.chw_id} != batch chw {batch_chw_id}"}
        try:
            m.validate()
        except DomainError as exc:
            return {"id": m.id, "status": "rejected", "reason": "validation",
                    "detail": str(exc)}
        existing = self.measurements.get(m.id)
        if existing is not None:
            if existing == m:
                return {"id": m.id, "status": "duplicate"}
            return {"id": m.id, "status": "rejected", "reason": "conflict",
                    "detail": "id already accepted with different payload"}
        record, outcome = self._evaluate(m)
        if self._log is not None:
            self._log.append(record)
        self._apply(record, m)
        return outcome

    def _evaluate(self, m: Measurement) -> tuple[dict, dict]:
        """Pure pipeline pass over current state; no mutation here."""
        child = self.registry.children.get(m.child_id)
        if child is not None:
            age_days = float((m.timestamp.date() - child.birth_date).days)
            sex = child.sex
            home = (child.home_lat, child.home_lon)
        else:
            age_days, sex, home = None, None, None
        if sex is None:
            from ..anthro.reference import Sex
            sex = Sex.M  # unregistered children get WHZ only; sex moot without age
        zr = evaluate_measurement(m, sex, age_days, self.reference, self.cutoffs,
                                  self.engine_settings)

        history = sorted(self.child_history.get(m.child_id, ()),
                         key=lambda p: (p.timestamp, p.id))
        screening = screen_measurement(m, zr, history, home, self.screening_config)
        findings = list(screening.findings)

        # terminal-digit screening fires once per non-overlapping window:
        # the chi-square rule has a designed false-positive rate, and
        # re-testing every submission over sliding windows would multiply it
        digit_transitions = []
        for metric, decimal_place in DIGIT_METRICS:
            value = getattr(m, metric)
            if value is None:
                continue
            values = [getattr(p, metric) for p in
                      self.chw_measurements.get(m.chw_id, ())
                      if getattr(p, metric) is not None]
            values.append(value)
            if len(values) % self.digit_window != 0:
                continue
            window = values[-self.digit_window:]
            result = digit_preference(window, decimal_place,
                                      min_n=self.digit_min_n,
                                      threshold=self.digit_chi2)
            was = self._digit_flags.get((m.chw_id, metric), False)
            if result.flag and not was:
                findings.append(Finding(
                    kind="digit_preference", severity="warn",
                    statistic=result.chi2, threshold=result.threshold,
                    detail=f"{metric} terminal digits chi2 = {result.chi2:.1f} "
                           f"over last {result.n}"))
            if result.flag != was:
                # JSON-shaped (list, not tuple): the record must compare
                # equal after a serialization round trip
                digit_transitions.append([metric, result.flag])

        dup_ids = self._duplicate_group_with(m)
        if dup_ids is not None:
            findings.append(Finding(
                kind="duplicate", severity="warn", statistic=float(len(dup_ids)),
                threshold=float(self.dup_min_children),
                detail=f"identical values for {len(dup_ids)} records across children"))

        screening = ScreeningResult(findings=tuple(findings))
        ctx = self._cell_context(m)
        score_event = None
        new_badges: set = set()
        if not screening.blocked:
            state = self._game_state(m.chw_id)
            score_event = score_submission(m, ctx, state, self.campaigns,
                                           self.rewards, screening=screening)
            # badge preview against a copy; real state mutates in _apply
            preview = GameState(chw_id=state.chw_id, points=state.points,
                                streak_days=state.streak_days,
                                last_active=state.last_active,
                                badges=set(state.badges),
                                uncharted_count=state.uncharted_count)
            preview.apply(score_event)
            from ..game import award_badges
            new_badges = award_badges(preview, self.badges)

        alerts = []
        seq = self._alert_seq
        for f in findings:
            seq += 1
            alerts.append(Alert(
                id=f"a-{seq:06d}", kind=f.kind, severity=f.severity,
                chw_id=m.chw_id,
                measurement_ids=tuple(dup_ids) if f.kind == "duplicate" else (m.id,),
                child_id=m.child_id, statistic=f.statistic,
                threshold=f.threshold, detail=f.detail, created_at=m.timestamp))

        record = {
            "t": "measurement",
            "m": m.to_dict(),
            "z": zr.to_dict(),
            "blocked": screening.blocked,
            "score": score_event.to_dict() if score_event else None,
            "badges": sorted(new_badges),
            "alerts": [a.to_dict() for a in alerts],
            "digit_flags": digit_transitions,
            "ctx": {"uncharted": ctx.uncharted, "staleness_days": ctx.staleness_days},
        }
        outcome = {
            "id": m.id,
            "status": "accepted",
            "blocked": screening.blocked,
            "points": score_event.points if score_event else 0.0,
            "zscores": zr.to_dict(),
            "findings": [{"kind": f.kind, "severity": f.severity} for f in findings],
            "new_badges": sorted(new_badges),
        }
        return record, outcome

    def _apply(self, record: dict, m: Measurement) -> None:
        """Mutate state exactly as described by one log record."""
        from ..anthro.classify import ZScoreResult
        self.measurements[m.id] = m
        self.order.append(m.id)
        self.zscores[m.id] = record["z"]
        self.child_history.setdefault(m.child_id, []).append(m)
        self.chw_measurements.setdefault(m.chw_id, []).append(m)
        key = self._dup_key(m)
        if key is not None:
            self._dup_index.setdefault(key, []).append(m)
        cell = self.grid.cell_of(m.lat, m.lon)
        if cell is not None:
            prev = self._cell_latest.get(cell)
            if prev is None or m.timestamp > prev:
                self._cell_latest[cell] = m.timestamp
        for metric, flag in record["digit_flags"]:
            self._digit_flags[(m.chw_id, metric)] = flag
        for alert_dict in record["alerts"]:
            alert = Alert.from_dict(alert_dict)
            self.alerts.append(alert)
            self.alerts_by_id[alert.id] = alert
            self._alert_seq += 1
            if alert.severity in ("warn", "block"):
                self.flagged_measurements.add(m.id)
        if record["score"] is not None:
            event = ScoreEvent.from_dict(record["score"])
            state = self._game_state(m.chw_id)
            state.apply(event, self.badges)

    def _dup_key(self, m: Measurement):
        present = sum(v is not None for v in (m.weight, m.height, m.muac))
        if present < 2:
            return None
        return (m.chw_id, m.weight, m.height, m.muac)

    def _duplicate_group_with(self, m: Measurement):
        """Ids of the identical-tuple group m would complete, if it crosses
        the distinct-children threshold; None otherwise."""
        key = self._dup_key(m)
        if key is None:
            return None
        window_s = self.dup_window_days * 86400.0
        members = [p for p in self._dup_index.get(key, ())
                   if abs((m.timestamp - p.timestamp).total_seconds()) <= window_s]
        children = {p.child_id for p in members} | {m.child_id}
        if len(children) >= self.dup_min_children:
            return sorted([p.id for p in members] + [m.id])
        return None

    def _cell_context(self, m: Measurement) -> CellContext:
        cell = self.grid.cell_of(m.lat, m.lon)
        if cell is None:
            return CellContext(uncharted=False, staleness_days=None)
        latest = self._cell_latest.get(cell)
        if latest is None:
            return CellContext(uncharted=True, staleness_days=None)
        staleness = max(0.0, (m.timestamp - latest).total_seconds() / 86400.0)
        return CellContext(uncharted=False, staleness_days=staleness)

    # --- alert workflow ----------------------------------------------------------

    def resolve_alert(self, alert_id: str, resolution: str) -> Alert:
        with self._lock:
            alert = self.alerts_by_id.get(alert_id)
            if alert is None:
                raise KeyError(alert_id)
            record = {"t": "alert_resolution", "alert_id": alert_id,
                      "resolution": resolution}
            if self._log is not None:
                self._log.append(record)
            return self._apply_resolution(record)

    def _apply_resolution(self, record: dict) -> Alert:
        from dataclasses import replace
        alert = self.alerts_by_id[record["alert_id"]]
        updated = replace(alert, resolved=True, resolution=record["resolution"])
        self.alerts_by_id[updated.id] = updated
        self.alerts[self.alerts.index(alert)] = updated
        return updated

    # --- rebuild -------------------------------------------------------------------

    def _replay_records(self, records) -> None:
        for record in records:
            if record["t"] == "measurement":
                m = Measurement.from_dict(record["m"])
                recomputed, _ = self._evaluate(m)
                if recomputed != record:
                    raise DomainError(
                        f"log replay diverged for measurement {m.id}; "
                        "store state is not consistent with this log")
                self._apply(record, m)
            elif record["t"] == "alert_resolution":
                self._apply_resolution(record)

    @classmethod
    def rebuild_from_log(cls, config: Config, registry: Registry, log_path,
                         reference=None, cutoffs=None) -> "Store":
        """Reconstruct state by rerunning the pipeline over the log."""
        return cls(config, registry, reference=reference, cutoffs=cutoffs,
                   log_path=log_path)

    def snapshot(self) -> dict:
        """Canonical digest of all rebuildable state, for audit comparison."""
        with self._lock:
            return {
                "accepted": sorted(self.measurements),
                "flagged": sorted(self.flagged_measurements),
                "alerts": [a.to_dict() for a in self.alerts],
                "game": {
                    chw: {
                        "points": s.points,
                        "streak": s.streak_days,
                        "badges": sorted(s.badges),
                        "uncharted": s.uncharted_count,
                        "events": [e.to_dict() for e in s.history],
                    } for chw, s in sorted(self.game_states.items())
                },
            }

    # --- layers ----------------------------------------------------------------------

    def recompute_layers(self, now: datetime | None = None) -> PublishedLayers:
        """Rebuild hotspot/density/coverage layers and refresh quests.

        Deterministic given the store snapshot and ``now``; previously
        issued, unexpired quests are preserved verbatim.
        """
        with self._lock:
            now = now or datetime.now(UTC)
            prevalence = self._prevalence_field()
            hotspot = build_hotspot_layer(prevalence, self.grid, self.gi_radius,
                                          now, fdr=self.gi_fdr)
            case_points = self._case_points()
            density = kde_density(case_points, self.grid, self.bandwidth_m)
            children = [(c.id, c.home_lat, c.home_lon)
                        for c in self.registry.children.values()]
            events = [(m.child_id, m.lat, m.lon, m.timestamp)
                      for m in self.measurements.values()]
            coverage = coverage_map(children, events, self.grid,
                                    self.coverage_window_days, now)
            previous = self.layers.quests if self.layers else {}
            quests = {}
            for chw in self.registry.chws.values():
                fresh = generate_quests(coverage, (chw.home_lat, chw.home_lon),
                                        self.max_quests, now, self.rewards,
                                        self.quest_expiry_days)
                kept = [q for q in previous.get(chw.id, ())
                        if q.expires_at > now]
                kept_ids = {q.id for q in kept}
                merged = kept + [q for q in fresh if q.id not in kept_ids]
                quests[chw.id] = merged[:max(self.max_quests, len(kept))]
                for campaign in self.campaigns:
                    if campaign.active_at(now) and campaign.cells:
                        quests[chw.id] = quests[chw.id] + [
                            self._campaign_quest(campaign, idx, now)
                            for idx in campaign.cells
                            if not any(q.kind == "campaign" and q.target_index == idx
                                       for q in quests[chw.id])]
            self.layers = PublishedLayers(
                generated_at=now, hotspot=hotspot, density=density,
                density_cases=len(case_points), coverage=coverage,
                quests=quests, indicator=self.indicator)
            return self.layers

    def _campaign_quest(self, campaign: Campaign, cell_index: int, now: datetime):
        from ..game import Quest
        row, col = divmod(cell_index, self.grid.cols)
        return Quest(id=f"q-campaign-{campaign.id}-{cell_index}",
                     target_row=row, target_col=col, target_index=cell_index,
                     kind="campaign", bonus_multiplier=campaign.multiplier,
                     generated_at=now, expires_at=campaign.end)

    def _indicator_z(self, record_z: dict) -> float | None:
        return record_z.get(self.indicator)

    def _prevalence_field(self) -> np.ndarray:
        counts = np.zeros((self.grid.rows, self.grid.cols))
        cases = np.zeros((self.grid.rows, self.grid.cols))
        for mid in self.order:
            m = self.measurements[mid]
            z = self._indicator_z(self.zscores[mid])
            if z is None:
                continue
            cell = self.grid.cell_of(m.lat, m.lon)
            if cell is None:
                continue
            counts[cell] += 1
            if z < -2.0:
                cases[cell] += 1
        with np.errstate(invalid="ignore"):
            prevalence = np.where(counts > 0, cases / np.maximum(counts, 1), 0.0)
        return prevalence

    def _case_points(self) -> list:
        points = []
        for mid in self.order:
            z = self._indicator_z(self.zscores[mid])
            if z is not None and z < -2.0:
                m = self.measurements[mid]
                points.append((m.lat, m.lon))
        return points

    def _ensure_layers(self) -> PublishedLayers:
        if self.layers is None:
            self.recompute_layers()
        return self.layers

    # --- read views ----------------------------------------------------------------------

    def quests_payload(self, chw_id: str, max_quests: int | None = None) -> dict:
        layers = self._ensure_layers()
        quests = layers.quests.get(chw_id, [])
        if max_quests is not None:
            quests = quests[:max_quests]
        return {"chw_id": chw_id, "generated_at": layers.generated_at.isoformat(),
                "quests": [q.to_dict() for q in quests]}

    def leaderboard_payload(self, start=None, end=None) -> dict:
        board = leaderboard(self.game_states.values(),
                            team_ids=self.registry.team_ids(),
                            start=start, end=end)
        return {
            "period_start": start.isoformat() if start else None,
            "period_end": end.isoformat() if end else None,
            "individual": [{"chw_id": e.subject_id, "points": e.points,
                            "rank": e.rank} for e in board.individual],
            "teams": [{"team_id": e.subject_id, "points": e.points,
                       "rank": e.rank} for e in board.teams],
        }

    def hotspot_payload(self, layer: str = "gistar",
                        indicator: str | None = None) -> dict:
        if indicator is not None and indicator != self.indicator:
            raise KeyError(indicator)
        layers = self._ensure_layers()
        if layer == "density":
            return density_geojson(layers.density, self.grid, layers.generated_at)
        if layer == "gistar":
            return hotspot_geojson(layers.hotspot)
        raise KeyError(layer)

    def coverage_payload(self) -> dict:
        layers = self._ensure_layers()
        return coverage_geojson(layers.coverage)

    def alerts_payload(self, chw_id=None, kind=None, severity=None,
                       include_resolved=True) -> dict:
        alerts = [a for a in self.alerts
                  if (chw_id is None or a.chw_id == chw_id)
                  and (kind is None or a.kind == kind)
                  and (severity is None or a.severity == severity)
                  and (include_resolved or not a.resolved)]
        return {"alerts": [a.to_dict() for a in alerts]}

    def efficiency_payload(self, chw_id: str, start=None, end=None) -> dict:
        assigned = [c.id for c in self.registry.children_of(chw_id)]
        score = efficiency_score(chw_id, self.chw_measurements.get(chw_id, ()),
                                 self.flagged_measurements, assigned,
                                 self.efficiency_weights, start, end)
        return score.to_dict()

    def children_payload(self, chw_id: str | None = None) -> dict:
        children = (self.registry.children_of(chw_id) if chw_id is not None
                    else sorted(self.registry.children.values(), key=lambda c: c.id))
        return {"children": [{
            "id": c.id, "sex": c.sex.value, "birth_date": c.birth_date.isoformat(),
            "home_lat": c.home_lat, "home_lon": c.home_lon, "chw_id": c.chw_id,
        } for c in children]}

    def zscore_preview(self, child_id=None, sex=None, age_days=None,
                       weight=None, height=None, height_mode="standing",
                       muac=None, timestamp=None) -> dict:
        """Read-only z computation for entry-form preview; nothing stored."""
        from ..anthro.reference import Sex
        from ..anthro.measurement import HeightMode
        ts = timestamp or datetime.now(UTC)
        if child_id is not None:
            child = self.registry.children.get(child_id)
            if child is None:
                raise KeyError(child_id)
            sex_val = child.sex
            age = float((ts.date() - child.birth_date).days)
            lat, lon = child.home_lat, child.home_lon
        else:
            sex_val = Sex(sex) if sex else Sex.M
            age = float(age_days) if age_days is not None else None
            lat, lon = self.grid.origin_lat, self.grid.origin_lon
        m = Measurement(id="preview", child_id=child_id or "anon",
                        chw_id="preview", timestamp=ts, lat=lat, lon=lon,
                        weight=weight, height=height,
                        height_mode=HeightMode(height_mode), muac=muac)
        zr = evaluate_measurement(m, sex_val, age, self.reference, self.cutoffs,
                                  self.engine_settings)
        payload = zr.to_dict()
        # reference rows used, so offline clients can produce a local
        # (clearly non-authoritative) estimate with the same math
        from ..anthro.engine import adjusted_height_cm
        from ..anthro.reference import Indicator
        from ..errors import ReferenceGapError
        rows = {}
        adj_height = (None if height is None else
                      adjusted_height_cm(height, HeightMode(height_mode), age,
                                         self.engine_settings))
        for name, indicator, key in (
                ("wfa", Indicator.WFA, age),
                ("hfa", Indicator.HFA, age),
                ("wfh", Indicator.WFH,
                 None if adj_height is None else adj_height * 10.0),
                ("muacfa", Indicator.MUACFA, age)):
            if key is None:
                continue
            try:
                row = self.reference.lookup(indicator, sex_val, key)
            except ReferenceGapError:
                continue
            rows[name] = {"key": row.key, "L": row.L, "M": row.M, "S": row.S}
        payload["rows"] = rows
        payload["age_days"] = age
        return payload

    def close(self) -> None:
        if self._log is not None:
            self._log.close()
            self._log = None
