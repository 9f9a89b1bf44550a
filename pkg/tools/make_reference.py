"""Regenerates the bundled synthetic growth-reference table.

The bundled table is NOT the WHO standard: it is a smooth synthetic LMS
surface with plausible magnitudes, shipped so the test suite stays
hermetic and the repo redistributes no licensed data. Production use
should load a real WHO export via the same file format.

Run: python tools/make_reference.py
"""

import math
import pathlib

OUT = pathlib.Path(__file__).resolve().parents[1] / "src/nutriquest/anthro/data/synthetic_reference.csv"

AGE_KNOTS = list(range(0, 1857, 28))          # 0..1856 days, 4-week knots
LEN_KNOTS = [x / 10 for x in range(4500, 13001, 100)]  # 450..1300 mm, 10 mm knots


def wfa(age, male):
    base = 3.3 if male else 3.1
    m = base + 7.3 * (age / 365.0) ** 0.56
    l = 0.30 - 0.00025 * age          # crosses 0 near day 1200
    s = 0.115 + 0.00001 * age
    return l, m, s


def hfa(age, male):
    base = 49.9 if male else 49.1
    m = base + 26.8 * (age / 365.0) ** 0.63
    l = 1.0                           # height is close to normal
    s = 0.036 + 0.0000035 * age
    return l, m, s


def wfh(length_mm, male):
    base = 3.45 if male else 3.35
    m = base * (length_mm / 500.0) ** 2.15
    l = -0.35 + 0.0001 * (length_mm - 450.0)
    s = 0.082 + 0.000008 * (length_mm - 450.0)
    return l, m, s


def muacfa(age, male):
    base = 115.0 if male else 113.5
    m = base + 45.0 * (1.0 - math.exp(-age / 300.0))
    l = 0.28 - 0.00004 * age
    s = 0.072 + 0.000004 * age
    return l, m, s


def main():
    lines = ["indicator,sex,key,L,M,S"]
    for sex, male in (("M", True), ("F", False)):
        for age in AGE_KNOTS:
            for name, fn in (("WFA", wfa), ("HFA", hfa), ("MUACFA", muacfa)):
                l, m, s = fn(age, male)
                lines.append(f"{name},{sex},{age},{l:.6f},{m:.6f},{s:.6f}")
        for length in LEN_KNOTS:
            l, m, s = wfh(length, male)
            lines.append(f"WFH,{sex},{length:g},{l:.6f},{m:.6f},{s:.6f}")
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {OUT} ({len(lines) - 1} rows)")


if __name__ == "__main__":
    main()
