"""Synthetic registry generation: households on the map, CHWs, teams, and
each child's latent nutrition status drawn from the spatial field."""

from __future__ import annotations

import math
from datetime import timedelta

import numpy as np

from ..anthro.reference import Sex
from ..platform.registry import CHW, Child, Registry, Team
from .config import SimConfig


def field_z(cfg: SimConfig, spec, x: float, y: float) -> float:
    """Mean latent z at projected meters (x, y): base + Gaussian bumps."""
    z = cfg.base_z
    for bump in cfg.bumps:
        bx, by = spec.centroid_xy(bump.row, bump.col)
        d2 = (x - bx) ** 2 + (y - by) ** 2
        z += bump.amplitude * math.exp(-d2 / (2.0 * bump.sigma_m ** 2))
    return z


def generate_population(cfg: SimConfig):
    """Registry plus per-child latent z; deterministic under cfg.seed."""
    rng = np.random.default_rng(cfg.seed)
    spec = cfg.grid_spec()
    width = spec.cols * spec.cell_size_m
    height = spec.rows * spec.cell_size_m

    registry = Registry()
    for t in range(cfg.n_teams):
        registry.add_team(Team(id=f"team{t + 1:02d}", name=f"Team {t + 1}"))
    chw_xy = []
    for i in range(cfg.n_chws):
        x = float(rng.uniform(0, width))
        y = float(rng.uniform(0, height))
        lat, lon = spec.to_latlon(x, y)
        team = f"team{(i % cfg.n_teams) + 1:02d}" if cfg.n_teams else None
        registry.add_chw(CHW(id=f"chw{i + 1:03d}", name=f"CHW {i + 1}",
                             home_lat=lat, home_lon=lon, team_id=team))
        chw_xy.append((f"chw{i + 1:03d}", x, y))

    latent: dict[str, float] = {}
    start_date = cfg.start.date()
    for i in range(cfg.n_children):
        x = float(rng.uniform(0, width))
        y = float(rng.uniform(0, height))
        lat, lon = spec.to_latlon(x, y)
        age_days = int(rng.integers(cfg.age_min_days, cfg.age_max_days + 1))
        sex = Sex.M if rng.uniform() < 0.5 else Sex.F
        # nearest CHW serves the household; ties break on chw id
        assigned = min(chw_xy,
                       key=lambda c: (math.hypot(c[1] - x, c[2] - y), c[0]))[0]
        cid = f"child{i + 1:04d}"
        z = field_z(cfg, spec, x, y) + cfg.child_sd * float(rng.standard_normal())
        latent[cid] = float(np.clip(z, cfg.latent_clamp[0], cfg.latent_clamp[1]))
        registry.add_child(Child(id=cid, sex=sex,
                                 birth_date=start_date - timedelta(days=age_days),
                                 home_lat=lat, home_lon=lon, chw_id=assigned))
    registry.validate()
    return registry, latent
