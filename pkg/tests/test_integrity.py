"""Screening-rule tests. The chi-square fixture values are evaluated by
hand from the formula; duplicate recovery is checked against an
exhaustive pairwise oracle."""

from datetime import datetime, timedelta, timezone
from itertools import combinations

import pytest

from nutriquest.anthro import Classification, Measurement, ZScoreResult
from nutriquest.integrity import (ScreeningConfig, chw_risk_report,
                                  digit_preference, distance_m,
                                  find_duplicates, screen_measurement)
from nutriquest.integrity.alerts import Alert

UTC = timezone.utc
NOW = datetime(2026, 4, 1, 9, 0, tzinfo=UTC)
HOME = (19.0, 72.8)


def zr(waz=None, haz=None, whz=None, muacz=None):
    cls = Classification(stunting=None, wasting=None, underweight=None,
                         muac_band=None)
    return ZScoreResult(waz=waz, haz=haz, whz=whz, muacz=muacz,
                        flags=frozenset(), classification=cls)


def meas(mid="m1", child="c1", chw="w1", ts=NOW, lat=HOME[0], lon=HOME[1],
         weight=10.0, height=80.0, muac=140.0):
    return Measurement(id=mid, child_id=child, chw_id=chw, timestamp=ts,
                       lat=lat, lon=lon, weight=weight, height=height,
                       muac=muac)


# --- screen_measurement ------------------------------------------------------

def test_clean_measurement_no_flags():
    res = screen_measurement(meas(), zr(waz=0.0, haz=0.0, whz=0.0), [], HOME)
    assert res.findings == ()
    assert res.clean and not res.blocked


def test_extreme_z_blocks():
    res = screen_measurement(meas(), zr(whz=6.1), [], HOME)
    kinds = [(f.kind, f.severity) for f in res.findings]
    assert ("extreme_z", "block") in kinds
    assert res.blocked
    f = next(f for f in res.findings if f.kind == "extreme_z")
    assert f.statistic == 6.1
    assert f.threshold == 5.0  # upper whz default limit


@pytest.mark.parametrize("axis,z,expect_block", [
    ("haz", -6.5, True), ("haz", -5.9, False),
    ("whz", 5.2, True), ("whz", 4.9, False),
    ("waz", 5.5, True), ("waz", -5.9, False), ("waz", -6.3, True),
])
def test_extreme_z_limit_table(axis, z, expect_block):
    res = screen_measurement(meas(), zr(**{axis: z}), [], HOME)
    assert res.blocked == expect_block


def test_height_velocity_flag():
    earlier = meas(mid="m0", ts=NOW - timedelta(days=7), height=95.0)
    res = screen_measurement(meas(mid="m1", height=92.0), zr(), [earlier], HOME)
    velocity = [f for f in res.findings if f.kind == "velocity"]
    assert len(velocity) == 1
    assert velocity[0].severity == "warn"
    assert velocity[0].statistic == pytest.approx(-3.0)


def test_weight_velocity_flag():
    earlier = meas(mid="m0", ts=NOW - timedelta(days=2), weight=10.0)
    res = screen_measurement(meas(mid="m1", weight=11.0), zr(), [earlier], HOME)
    velocity = [f for f in res.findings if f.kind == "velocity"]
    assert len(velocity) == 1  # 500 g/day > 200 g/day
    slow = screen_measurement(meas(mid="m2", weight=10.3), zr(),
                              [earlier], HOME)
    assert not any(f.kind == "velocity" for f in slow.findings)


def test_location_mismatch():
    res = screen_measurement(meas(lat=19.03), zr(), [], HOME)  # ~3.3 km north
    loc = [f for f in res.findings if f.kind == "location_mismatch"]
    assert len(loc) == 1 and loc[0].severity == "warn"
    assert loc[0].statistic > 2000


def test_unregistered_child_is_info():
    res = screen_measurement(meas(), zr(), [], home=None)
    assert [f.kind for f in res.findings] == ["unregistered_child"]
    assert res.findings[0].severity == "info"
    assert res.clean  # info does not count against accuracy


def test_screening_pure():
    args = (meas(), zr(whz=-2.0), [meas(mid="m0", ts=NOW - timedelta(days=3))], HOME)
    assert screen_measurement(*args) == screen_measurement(*args)


def test_distance_m_sanity():
    # one degree of latitude is ~111 km
    assert distance_m((19.0, 72.8), (20.0, 72.8)) == pytest.approx(111195, rel=1e-3)


# --- digit preference ----------------------------------------------------------

def test_digit_uniform_no_flag():
    values = [10.0 + d / 10 + i for i, d in
              enumerate(list(range(10)) * 2)]  # exactly 2 of each digit
    res = digit_preference(values)
    assert res.chi2 == 0.0
    assert not res.flag and not res.indeterminate


def test_digit_all_zero_flagged():
    # 20 values ending in .0: chi2 = 18^2/2 + 9 * 2^2/2 = 180
    values = [float(10 + i) for i in range(20)]
    res = digit_preference(values)
    assert res.chi2 == pytest.approx(180.0)
    assert res.flag


def test_digit_below_min_indeterminate():
    res = digit_preference([10.0] * 19)
    assert res.indeterminate and res.chi2 is None and not res.flag


def test_digit_extraction_precision():
    from nutriquest.integrity import terminal_digit
    assert terminal_digit(12.3, 1) == 3
    assert terminal_digit(95.7, 1) == 7
    assert terminal_digit(140.0, 0) == 0
    assert terminal_digit(138.0, 0) == 8


# --- duplicates -------------------------------------------------------------------

def test_distinct_tuples_no_groups():
    ms = [meas(mid=f"m{i}", child=f"c{i}", weight=9.0 + i / 10) for i in range(6)]
    assert find_duplicates(ms) == []


def test_copied_tuple_four_children_warns():
    ms = [meas(mid=f"m{i}", child=f"c{i}") for i in range(4)]
    groups = find_duplicates(ms)
    assert len(groups) == 1
    g = groups[0]
    assert g.size == 4 and len(g.child_ids) == 4
    assert g.warn


def test_same_child_repeat_not_flagged():
    ms = [meas(mid="m1", ts=NOW), meas(mid="m2", ts=NOW + timedelta(days=3))]
    assert find_duplicates(ms) == []


def test_two_children_group_returned_not_warned():
    ms = [meas(mid="m1", child="c1"), meas(mid="m2", child="c2")]
    groups = find_duplicates(ms)
    assert len(groups) == 1 and not groups[0].warn


def test_window_splits_groups():
    ms = [meas(mid="m1", child="c1", ts=NOW),
          meas(mid="m2", child="c2", ts=NOW + timedelta(days=1)),
          meas(mid="m3", child="c3", ts=NOW + timedelta(days=40))]
    groups = find_duplicates(ms, window_days=14)
    assert len(groups) == 1
    assert groups[0].measurement_ids == ("m1", "m2")


def test_planted_duplicates_recovered_exactly():
    import numpy as np
    rng = np.random.default_rng(17)
    ms = []
    for i in range(60):
        ms.append(meas(mid=f"r{i}", child=f"c{i}", chw=f"w{i % 4}",
                       ts=NOW + timedelta(hours=float(rng.uniform(0, 72))),
                       weight=round(float(rng.uniform(6, 16)), 2),
                       height=round(float(rng.uniform(60, 110)), 2),
                       muac=round(float(rng.uniform(120, 180)), 1)))
    planted = [meas(mid=f"p{i}", child=f"pc{i}", chw="w9",
                    ts=NOW + timedelta(hours=i), weight=10.4, height=81.2,
                    muac=139.0) for i in range(5)]
    groups = find_duplicates(ms + planted)
    warned = [g for g in groups if g.warn]
    assert len(warned) == 1
    assert set(warned[0].measurement_ids) == {f"p{i}" for i in range(5)}
    # exhaustive pairwise oracle: every identical pair for different
    # children of one CHW must appear together in some group
    all_records = ms + planted
    grouped_ids = [set(g.measurement_ids) for g in groups]
    for a, b in combinations(all_records, 2):
        if (a.chw_id == b.chw_id and a.child_id != b.child_id
                and (a.weight, a.height, a.muac) == (b.weight, b.height, b.muac)):
            assert any({a.id, b.id} <= ids for ids in grouped_ids)


# --- risk report --------------------------------------------------------------------

def alert(chw="w1", kind="velocity", severity="warn", ts=NOW, aid="a1"):
    return Alert(id=aid, kind=kind, severity=severity, chw_id=chw,
                 measurement_ids=("m1",), child_id="c1", statistic=1.0,
                 threshold=0.5, detail="", created_at=ts)


def test_risk_report_empty():
    report = chw_risk_report([])
    assert report.rows == ()


def test_risk_report_counts_match_recount():
    alerts = [alert(aid=f"a{i}", chw=f"w{i % 2}",
                    kind="velocity" if i % 3 else "extreme_z",
                    severity="warn" if i % 3 else "block")
              for i in range(12)]
    report = chw_risk_report(alerts)
    for row in report.rows:
        expected = sum(1 for a in alerts if (a.chw_id, a.kind, a.severity)
                       == (row.chw_id, row.kind, row.severity))
        assert row.count == expected
    assert report.total("w0") == sum(1 for a in alerts if a.chw_id == "w0")


def test_risk_report_period_filter():
    alerts = [alert(aid="a1", ts=NOW), alert(aid="a2", ts=NOW + timedelta(days=5))]
    report = chw_risk_report(alerts, start=NOW + timedelta(days=1))
    assert report.total("w1") == 1


def test_risk_report_mixed_severities_grouped():
    alerts = [alert(aid="a1", severity="warn"), alert(aid="a2", severity="warn"),
              alert(aid="a3", severity="block", kind="extreme_z")]
    report = chw_risk_report(alerts)
    assert {(r.kind, r.severity, r.count) for r in report.rows} == {
        ("velocity", "warn", 2), ("extreme_z", "block", 1)}
