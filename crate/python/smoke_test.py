"""Smoke test for the hexloc_py extension module.

Build and install first:  pip install --no-build-isolation -e crates/py
"""

import math

import hexloc_py as hx


def main():
    p = hx.Params.with_divisor(10.0, 10)
    assert p.is_safe_spacing()

    q, q_mirror = hx.candidate_positions((-9.5, 0.0), (9.5, 0.0), p)
    assert math.isclose(q[0], 0.0, abs_tol=1e-9) and math.isclose(q[1], -q_mirror[1])
    assert hx.error_bound(18.0, p) < 5.0

    margin = hx.coverage_margin(10.0, 1.0)
    assert 0.0 < margin < 1.0
    assert math.isclose(hx.d_hexagon_formula(200.0, 10.0, 1.0), 5400.0)
    lengths = hx.competitor_lengths(200.0, 10.0, 10)
    assert math.isclose(lengths["chia_ho_ou"], 5945.0)

    plan = hx.plan_rect_path(60.0, 60.0, p)
    assert plan.waypoints()[0] == (0.0, 0.0, "transit")
    report = plan.verify(2.0)
    assert report["uncovered"] == [] and report["worst_error"] < 5.0

    sensors = hx.gen_connected_network(20, 50.0, 50.0, 15.0, seed=3)
    res = hx.run_localization(sensors, hx.Params.with_divisor(15.0, 8), seed=3)
    assert all(e is not None and e < 7.5 for e in res["errors"])
    assert res["events"][-1][2] == "done"

    print(
        f"ok: plan {plan.total_length:.1f} m over {plan.hexagon_count} hexagons, "
        f"network of {len(sensors)} localized with path {res['path_length']:.1f} m"
    )


if __name__ == "__main__":
    main()
