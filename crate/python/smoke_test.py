"""Smoke test for the cuspcenter Python extension."""

import json
from fractions import Fraction

import cuspcenter


def frac(pair):
    return Fraction(pair[0], pair[1])


def main():
    p1 = cuspcenter.ParameterSet(2, 3, 2)
    assert (p1.w, p1.r, p1.ell_r) == (2, 1, 3)

    ring = cuspcenter.invariant_ring(p1)
    assert [frac(c) for c in ring.m] == [-2, -1, 1], ring.m_display
    assert ring.degree == 2 and ring.m_is_power_mod_ell

    unreduced = cuspcenter.ParameterSet(2, 5, 4, d=2)
    assert unreduced.reduced() == cuspcenter.ParameterSet(4, 5, 2)

    endo = cuspcenter.verify_endo_ring(unreduced)
    assert endo.m_display == cuspcenter.verify_endo_ring(cuspcenter.ParameterSet(4, 5, 2)).m_display
    assert endo.bucket_counts["realized-witness"] == 1

    p2 = cuspcenter.verify_endo_ring(cuspcenter.ParameterSet(2, 7, 3))
    assert [frac(c) for c in p2.m] == [-6, -1, -2, 1], p2.m_display
    assert frac(p2.g_of_gamma_constant) == 14 and p2.g_of_gamma_valuation == 1

    sizes = sorted(c.size for c in cuspcenter.class_types(2, 2))
    assert sizes == [1, 2, 3], sizes

    deformation = cuspcenter.deformation_check(p1)
    assert deformation.sampled_a == [0, 1, 2]
    assert "T_2^(+-1)" in deformation.presentation

    try:
        cuspcenter.ParameterSet(2, 3, 3)
    except ValueError:
        pass
    else:
        raise AssertionError("n = 3 should be rejected for q = 2, ell = 3")

    code, report = cuspcenter.run_command("oracle", 16, n=3)
    assert code == 2 and "scale limit" in json.loads(report)["error"]
    code, report = cuspcenter.run_command("endo-ring", 2, ell=3, n=2)
    assert code == 0 and json.loads(report)["status"] == "pass"

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
