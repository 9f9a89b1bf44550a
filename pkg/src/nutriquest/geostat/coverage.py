"""Coverage and staleness per grid cell; the input to quest generation."""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime

from .grid import GridSpec

SECONDS_PER_DAY = 86400.0


@dataclass(frozen=True)
class CoverageCell:
    row: int
    col: int
    n_children_known: int       # registered children whose home is in the cell
    n_measured_window: int      # of those, measured at least once in the window
    last_measurement: datetime | None   # latest measurement located in the cell
    staleness_days: float | None        # None = never measured (uncharted)

    @property
    def uncharted(self) -> bool:
        return self.last_measurement is None


@dataclass(frozen=True)
class CoverageGrid:
    spec: GridSpec
    cells: tuple                # row-major tuple of CoverageCell
    generated_at: datetime
    window_days: float

    def cell(self, row: int, col: int) -> CoverageCell:
        return self.cells[row * self.spec.cols + col]

    def uncharted_cells(self):
        return [c for c in self.cells if c.uncharted]


def coverage_map(children, measurements, spec: GridSpec, window_days: float,
                 now: datetime) -> CoverageGrid:
    """Aggregate registry and measurement history into per-cell coverage.

    children: iterable of (child_id, home_lat, home_lon).
    measurements: iterable of (child_id, lat, lon, timestamp).

    ``n_measured_window`` counts distinct registered children of the cell
    with any measurement inside the window, wherever it was taken, so it
    can never exceed ``n_children_known``. Staleness instead is about the
    place: days since the newest measurement located in the cell.
    """
    home_cell: dict[str, tuple[int, int]] = {}
    known: dict[tuple[int, int], set] = {}
    for child_id, lat, lon in children:
        cell = spec.cell_of(lat, lon)
        if cell is None:
            continue
        home_cell[child_id] = cell
        known.setdefault(cell, set()).add(child_id)

    latest: dict[tuple[int, int], datetime] = {}
    measured_in_window: dict[tuple[int, int], set] = {}
    window_start_delta = window_days * SECONDS_PER_DAY
    for child_id, lat, lon, ts in measurements:
        cell = spec.cell_of(lat, lon)
        if cell is not None:
            prev = latest.get(cell)
            if prev is None or ts > prev:
                latest[cell] = ts
        home = home_cell.get(child_id)
        if home is not None and (now - ts).total_seconds() <= window_start_delta:
            measured_in_window.setdefault(home, set()).add(child_id)

    cells = []
    for row in range(spec.rows):
        for col in range(spec.cols):
            key = (row, col)
            last = latest.get(key)
            staleness = (None if last is None
                         else max(0.0, (now - last).total_seconds() / SECONDS_PER_DAY))
            cells.append(CoverageCell(
                row=row, col=col,
                n_children_known=len(known.get(key, ())),
                n_measured_window=len(measured_in_window.get(key, ())),
                last_measurement=last,
                staleness_days=staleness,
            ))
    return CoverageGrid(spec=spec, cells=tuple(cells), generated_at=now,
                        window_days=window_days)
