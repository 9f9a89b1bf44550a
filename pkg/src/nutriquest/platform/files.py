"""Delimited measurement-batch files (the offline ingest format).

Header: id,child_id,chw_id,timestamp,lat,lon,weight,height,height_mode,
muac,entry_duration. Empty fields mean absent optional values.
"""

from __future__ import annotations

from ..errors import ParseError

HEADER = ("id,child_id,chw_id,timestamp,lat,lon,weight,height,height_mode,"
          "muac,entry_duration")


def measurements_to_csv(payloads) -> str:
    lines = [HEADER]
    for p in payloads:
        lines.append(",".join([
            str(p["id"]), str(p["child_id"]), str(p["chw_id"]),
            str(p["timestamp"]), repr(float(p["lat"])), repr(float(p["lon"])),
            "" if p.get("weight") is None else repr(float(p["weight"])),
            "" if p.get("height") is None else repr(float(p["height"])),
            str(p.get("height_mode", "standing")),
            "" if p.get("muac") is None else repr(float(p["muac"])),
            "" if p.get("entry_duration") is None else repr(float(p["entry_duration"])),
        ]))
    return "\n".join(lines) + "\n"


def read_measurements_csv(path) -> list:
    payloads = []
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header.replace(" ", "") != HEADER:
            raise ParseError(f"expected header {HEADER!r}", path=str(path),
                             line=1, column=1)
        for lineno, raw in enumerate(fh, start=2):
            line = raw.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split(",")
            if len(parts) != 11:
                raise ParseError(f"expected 11 fields, got {len(parts)}",
                                 path=str(path), line=lineno, column=1)
            try:
                payloads.append({
                    "id": parts[0], "child_id": parts[1], "chw_id": parts[2],
                    "timestamp": parts[3],
                    "lat": float(parts[4]), "lon": float(parts[5]),
                    "weight": float(parts[6]) if parts[6] else None,
                    "height": float(parts[7]) if parts[7] else None,
                    "height_mode": parts[8] or "standing",
                    "muac": float(parts[9]) if parts[9] else None,
                    "entry_duration": float(parts[10]) if parts[10] else None,
                })
            except ValueError as exc:
                raise ParseError(str(exc), path=str(path), line=lineno,
                                 column=1) from exc
    return payloads
