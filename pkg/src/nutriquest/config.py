"""Plain-text key=value configuration shared by all pipelines.

Format: one ``key = value`` per line, ``#`` comments, blank lines ignored.
Keys are dotted paths (``rewards.base``). Values are free text; typed
accessors parse on demand. Unknown keys are kept (campaign and auth token
definitions are open-ended).
"""

from __future__ import annotations

from .errors import ParseError

# Invented defaults; the stated reward/threshold magnitudes are program
# policy, not measured values, and are expected to be overridden per site.
DEFAULTS = {
    "grid.origin_lat": "19.00",
    "grid.origin_lon": "72.80",
    "grid.cell_size_m": "250",
    "grid.rows": "10",
    "grid.cols": "10",
    "kde.bandwidth_m": "500",
    "gistar.radius": "1",
    "gistar.fdr": "0",
    "coverage.window_days": "30",
    "layers.indicator": "waz",
    "rewards.base": "10",
    "rewards.uncharted_mult": "3",
    "rewards.stale_mult": "2",
    "rewards.stale_days": "30",
    "rewards.streak_step": "0.1",
    "rewards.streak_cap": "10",
    "badges.points": "100,500,2000",
    "badges.uncharted_cells": "10",
    "badges.streak_days": "7",
    "quests.expiry_days": "7",
    "quests.max": "5",
    "anthro.recumbent_offset_cm": "0.7",
    "anthro.standing_age_days": "731",
    "integrity.limit.haz": "-6,6",
    "integrity.limit.whz": "-5,5",
    "integrity.limit.waz": "-6,5",
    "integrity.velocity.height_loss_cm": "1.0",
    "integrity.velocity.weight_g_per_day": "200",
    "integrity.location_m": "2000",
    "integrity.digit.min_n": "20",
    "integrity.digit.chi2": "16.92",
    "integrity.digit.window": "30",
    "integrity.duplicate.window_days": "14",
    "integrity.duplicate.min_children": "3",
    "efficiency.w_accuracy": "0.5",
    "efficiency.w_speed": "0.3",
    "efficiency.w_coverage": "0.2",
    "efficiency.target_per_hour": "12",
    "efficiency.scale": "1",
    "streak.utc_offset_minutes": "0",
}


class Config:
    """Immutable view over parsed key=value pairs with typed accessors."""

    def __init__(self, values: dict[str, str] | None = None):
        merged = dict(DEFAULTS)
        if values:
            merged.update(values)
        self._values = merged

    @classmethod
    def load(cls, path) -> "Config":
        values = {}
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise ParseError("expected 'key = value'", path=str(path),
                                     line=lineno, column=1)
                key, _, value = line.partition("=")
                key = key.strip()
                if not key:
                    raise ParseError("empty key", path=str(path),
                                     line=lineno, column=1)
                values[key] = value.strip()
        return cls(values)

    def get(self, key: str, default: str | None = None) -> str | None:
        return self._values.get(key, default)

    def get_str(self, key: str) -> str:
        try:
            return self._values[key]
        except KeyError:
            raise KeyError(f"missing config key {key!r}") from None

    def get_int(self, key: str) -> int:
        return int(self.get_str(key))

    def get_float(self, key: str) -> float:
        return float(self.get_str(key))

    def get_floats(self, key: str) -> list[float]:
        return [float(p) for p in self.get_str(key).split(",") if p.strip()]

    def get_ints(self, key: str) -> list[int]:
        return [int(p) for p in self.get_str(key).split(",") if p.strip()]

    def section(self, prefix: str) -> dict[str, str]:
        """All keys under ``prefix.`` with the prefix stripped."""
        dot = prefix + "."
        return {k[len(dot):]: v for k, v in self._values.items()
                if k.startswith(dot)}

    def as_dict(self) -> dict[str, str]:
        return dict(self._values)
