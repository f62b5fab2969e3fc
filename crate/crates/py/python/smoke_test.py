"""Smoke test for the diracsea extension module.

Build and install first, e.g.

    pip install --no-build-isolation ./crates/py
    python crates/py/python/smoke_test.py
"""

import math

import diracsea as ds


def main():
    p = ds.WalkParams.from_mass_phase("dirac", 0.2)
    assert abs(p.dt - 1.0) < 1e-15
    r = ds.dispersion(0.0, p, "dirac")
    assert abs(r.e_plus - 0.2) < 1e-12 and abs(r.e_minus + 0.2) < 1e-12
    assert len(r.s_plus) == 2 and isinstance(r.s_plus[0], complex)

    u = ds.bloch_matrix(0.7, p, "dirac")
    det = u[0][0] * u[1][1] - u[0][1] * u[1][0]
    assert abs(abs(det) - 1.0) < 1e-12

    theta = ds.find_theta(0.2)
    lo, hi = ds.feasible_theta_interval(0.2)
    assert lo < theta < hi
    q = ds.WalkParams.from_mass_phase("modified", 0.2, 3 * math.pi / 8)
    cert = ds.gap_certificate(q, 4096)
    assert cert.gapped and cert.max_abs_energy_dt < math.pi / 2
    half_trace = (ds.bloch_matrix(1.3, q, "modified")[0][0] + ds.bloch_matrix(1.3, q, "modified")[1][1]).real / 2
    assert abs(half_trace - ds.cos_energy_closed_form(1.3, q)) < 1e-12

    s = ds.LatticeState.delta(64, 32).evolve(q, "modified", 20)
    assert abs(s.norm_sqr() - 1.0) < 1e-12
    assert max(abs(n - 32) for n in s.support(0.0)) <= 40
    assert abs(sum(s.probabilities()) - 1.0) < 1e-12

    worst, sectors = ds.equivalence_report("modified", 2, q)
    assert worst < 1e-10 and sum(d for _, d, _ in sectors) == 16

    min_de, negative, rows = ds.pair_creation_scan(16, q, "modified")
    assert negative == 0 and min_de > 0 and len(rows) == 256

    e = ds.dispersion3((0.01, 0.02, 0.0), ds.WalkParams.from_mass_phase("dirac", 0.0), "dirac")
    assert len(e) == 4 and e == sorted(e)
    mx, gapped, _ = ds.gap_scan3(q, "modified", 16)
    assert gapped and mx < math.pi / 2

    try:
        ds.WalkParams.from_mass_phase("modified", 1.6)
    except ValueError:
        pass
    else:
        raise AssertionError("mass phase outside the hypothesis must be rejected")

    print("diracsea smoke test passed")


if __name__ == "__main__":
    main()
