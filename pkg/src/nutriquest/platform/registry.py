"""Beneficiary and worker registry with referential integrity.

Loaded from three delimited files in one directory:
  teams.csv     id,name
  chws.csv      id,name,home_lat,home_lon,team_id   (team_id may be empty)
  children.csv  id,sex,birth_date,home_lat,home_lon,chw_id
"""

from __future__ import annotations

import pathlib
from dataclasses import dataclass, field
from datetime import date

from ..anthro.reference import Sex
from ..errors import DomainError, ParseError


@dataclass(frozen=True)
class Child:
    id: str
    sex: Sex
    birth_date: date
    home_lat: float
    home_lon: float
    chw_id: str


@dataclass(frozen=True)
class CHW:
    id: str
    name: str
    home_lat: float
    home_lon: float
    team_id: str | None = None


@dataclass(frozen=True)
class Team:
    id: str
    name: str


@dataclass
class Registry:
    children: dict = field(default_factory=dict)
    chws: dict = field(default_factory=dict)
    teams: dict = field(default_factory=dict)

    def validate(self) -> None:
        for chw in self.chws.values():
            if chw.team_id is not None and chw.team_id not in self.teams:
                raise DomainError(f"chw {chw.id} references unknown team {chw.team_id}")
        for child in self.children.values():
            if child.chw_id not in self.chws:
                raise DomainError(f"child {child.id} assigned to unknown CHW "
                                  f"{child.chw_id}")

    def add_child(self, child: Child) -> None:
        if child.id in self.children:
            raise DomainError(f"duplicate child id {child.id}")
        self.children[child.id] = child

    def add_chw(self, chw: CHW) -> None:
        if chw.id in self.chws:
            raise DomainError(f"duplicate chw id {chw.id}")
        self.chws[chw.id] = chw

    def add_team(self, team: Team) -> None:
        if team.id in self.teams:
            raise DomainError(f"duplicate team id {team.id}")
        self.teams[team.id] = team

    def children_of(self, chw_id: str) -> list:
        return sorted((c for c in self.children.values() if c.chw_id == chw_id),
                      key=lambda c: c.id)

    def team_ids(self) -> list:
        return sorted(self.teams)

    @classmethod
    def load(cls, directory) -> "Registry":
        directory = pathlib.Path(directory)
        reg = cls()
        teams_path = directory / "teams.csv"
        if teams_path.exists():
            for lineno, parts in _rows(teams_path, 2, "id,name"):
                reg.add_team(Team(id=parts[0], name=parts[1]))
        chws_path = directory / "chws.csv"
        for lineno, parts in _rows(chws_path, 5, "id,name,home_lat,home_lon,team_id"):
            try:
                reg.add_chw(CHW(id=parts[0], name=parts[1],
                                home_lat=float(parts[2]), home_lon=float(parts[3]),
                                team_id=parts[4] or None))
            except ValueError as exc:
                raise ParseError(str(exc), path=str(chws_path), line=lineno) from exc
        children_path = directory / "children.csv"
        for lineno, parts in _rows(children_path, 6,
                                   "id,sex,birth_date,home_lat,home_lon,chw_id"):
            try:
                reg.add_child(Child(id=parts[0], sex=Sex(parts[1]),
                                    birth_date=date.fromisoformat(parts[2]),
                                    home_lat=float(parts[3]), home_lon=float(parts[4]),
                                    chw_id=parts[5]))
            except ValueError as exc:
                raise ParseError(str(exc), path=str(children_path), line=lineno) from exc
        reg.validate()
        return reg

    def save(self, directory) -> None:
        directory = pathlib.Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        lines = ["id,name"] + [f"{t.id},{t.name}" for t in
                               sorted(self.teams.values(), key=lambda t: t.id)]
        (directory / "teams.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
        lines = ["id,name,home_lat,home_lon,team_id"]
        for c in sorted(self.chws.values(), key=lambda c: c.id):
            lines.append(f"{c.id},{c.name},{c.home_lat!r},{c.home_lon!r},"
                         f"{c.team_id or ''}")
        (directory / "chws.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
        lines = ["id,sex,birth_date,home_lat,home_lon,chw_id"]
        for c in sorted(self.children.values(), key=lambda c: c.id):
            lines.append(f"{c.id},{c.sex.value},{c.birth_date.isoformat()},"
                         f"{c.home_lat!r},{c.home_lon!r},{c.chw_id}")
        (directory / "children.csv").write_text("\n".join(lines) + "\n",
                                                encoding="utf-8")


def _rows(path, n_fields, header):
    with open(path, "r", encoding="utf-8") as fh:
        first = fh.readline().strip()
        if first.replace(" ", "") != header:
            raise ParseError(f"expected header {header!r}", path=str(path),
                             line=1, column=1)
        for lineno, raw in enumerate(fh, start=2):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = [p.strip() for p in line.split(",")]
            if len(parts) != n_fields:
                raise ParseError(f"expected {n_fields} fields, got {len(parts)}",
                                 path=str(path), line=lineno, column=1)
            yield lineno, parts
