"""Bound formulas, their identities, the chain audit, and the optimizer."""

import math
import random

import pytest

from qcover import (
    BoundParams,
    InfeasibleParamsError,
    RecurrenceSpec,
    classic_bound,
    closed_form_bound,
    closed_form_chain_check,
    feasibility,
    nested_parametric_bound,
    optimize_parametric_bound,
    parametric_bound,
    parametric_bound_factored,
    parametric_bound_geometric,
    recurrence_depth,
    recurrence_limit_bound,
    simulate_recurrence,
    telescoped_error_bound,
)
from qcover.bounds import BOUND_TABLE_HEADER, bound_table_rows, floor_div_real

from oracles import (
    mp_classic_bound,
    mp_closed_form_bound,
    mp_nested_bound,
    mp_parametric_bound,
    sample_feasible_params,
)


def rel_err(a, b):
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


def chain_params(R):
    y = R * math.log(R) + 1.0
    x = R * math.log(y) + 2.0 * math.log(R)
    return x, y


# ---------------------------------------------------------------------------
# feasibility
# ---------------------------------------------------------------------------


def test_feasibility_boundary_is_one():
    y = 2.0
    p = BoundParams(R=3, x=3 * math.log(y), y=y)
    assert feasibility(p) == 1.0


@pytest.mark.parametrize("R", [6, 17, 100])
def test_feasibility_at_chain_params_is_inverse_square(R):
    x, y = chain_params(R)
    t = feasibility(BoundParams(R=R, x=x, y=y))
    assert rel_err(t, R**-2.0) < 1e-9


# ---------------------------------------------------------------------------
# parametric bound
# ---------------------------------------------------------------------------


def test_parametric_bound_simple_value():
    # R=1, y=2, x=ln4: the tail factor is 1 + 1/(4/2 - 1) = 2, so the whole
    # expression collapses to 4*ln(4)
    p = BoundParams(R=1, x=math.log(4), y=2.0)
    assert rel_err(parametric_bound(p), 4 * math.log(4)) < 1e-14
    assert rel_err(parametric_bound(p), 5.545177444479562) < 1e-12
    assert rel_err(parametric_bound(p), float(mp_parametric_bound(1, math.log(4), 2))) < 1e-13


def test_parametric_bound_matches_high_precision_oracle():
    rng = random.Random(101)
    for _ in range(200):
        R, x, y = sample_feasible_params(rng, r_max=60, margin_lo=0.05)
        got = parametric_bound(BoundParams(R=R, x=x, y=y))
        want = float(mp_parametric_bound(R, x, y))
        assert rel_err(got, want) < 1e-11, (R, x, y)


def test_parametric_bound_forms_agree():
    rng = random.Random(7)
    for _ in range(1000):
        R, x, y = sample_feasible_params(rng)
        p = BoundParams(R=R, x=x, y=y)
        assert rel_err(parametric_bound_factored(p), parametric_bound_geometric(p)) <= 1e-12


def test_parametric_bound_limit_for_large_x():
    # as x grows with y fixed, the tail factor vanishes and the bound tends
    # to x * (y/(y-1))^R
    R, y = 4, 3.0
    for x, tol in [(20.0, 1e-6), (40.0, 1e-14)]:
        p = BoundParams(R=R, x=x, y=y)
        plain = x * (y / (y - 1.0)) ** R
        assert rel_err(parametric_bound(p), plain) < tol


def test_parametric_bound_increases_toward_feasibility_boundary():
    R, y = 5, 2.0
    floor_x = R * math.log(y)
    values = [
        parametric_bound(BoundParams(R=R, x=floor_x + eps, y=y))
        for eps in (2.0, 1.0, 0.5, 0.1, 0.01, 1e-4)
    ]
    assert all(a < b for a, b in zip(values, values[1:]))
    assert values[-1] > 1e4  # blowing up as t -> 1


def test_parametric_bound_rejects_infeasible():
    with pytest.raises(InfeasibleParamsError):
        parametric_bound(BoundParams(R=2, x=2 * math.log(3), y=3.0))
    with pytest.raises(InfeasibleParamsError):
        BoundParams(R=0, x=1.0, y=2.0)
    with pytest.raises(InfeasibleParamsError):
        BoundParams(R=2, x=-1.0, y=2.0)
    with pytest.raises(InfeasibleParamsError):
        BoundParams(R=2, x=1.0, y=0.5)


# ---------------------------------------------------------------------------
# nested bound
# ---------------------------------------------------------------------------


def test_nested_reduces_to_parametric_bit_for_bit():
    rng = random.Random(13)
    for _ in range(300):
        R, x, y = sample_feasible_params(rng)
        if R < 2:
            continue
        p0 = BoundParams(R=R, x=x, y=y, R1=0, mu_star=1.0)
        assert nested_parametric_bound(p0) == parametric_bound_factored(
            BoundParams(R=R, x=x, y=y)
        )


def test_nested_bound_example_value():
    # R=2, R1=1, y=2, x=ln16, mu=1: (1/2)*2*2*(4/3)*ln16 = (8/3)*ln16
    p = BoundParams(R=2, x=math.log(16), y=2.0, R1=1, mu_star=1.0)
    got = nested_parametric_bound(p)
    assert rel_err(got, (8.0 / 3.0) * math.log(16)) < 1e-14
    assert rel_err(got, 7.39356992597275) < 1e-13
    assert rel_err(got, float(mp_nested_bound(2, 1, math.log(16), 2, 1))) < 1e-13


def test_nested_bound_linear_in_mu():
    base = BoundParams(R=3, x=4.0, y=2.0, R1=1, mu_star=1.0)
    double = BoundParams(R=3, x=4.0, y=2.0, R1=1, mu_star=2.0)
    assert nested_parametric_bound(double) == 2.0 * nested_parametric_bound(base)


def test_nested_bound_mu_defaults():
    p0 = BoundParams(R=4, x=6.0, y=2.0, R1=0)
    assert nested_parametric_bound(p0) == nested_parametric_bound(
        BoundParams(R=4, x=6.0, y=2.0, R1=0, mu_star=1.0)
    )
    p1 = BoundParams(R=4, x=6.0, y=2.0, R1=1)
    mu1 = optimize_parametric_bound(1).bound
    expected = nested_parametric_bound(BoundParams(R=4, x=6.0, y=2.0, R1=1, mu_star=mu1))
    assert rel_err(nested_parametric_bound(p1), expected) < 1e-12


def test_nested_bound_rejects_bad_inner_radius():
    with pytest.raises(InfeasibleParamsError):
        BoundParams(R=3, x=4.0, y=2.0, R1=3)
    with pytest.raises(InfeasibleParamsError):
        BoundParams(R=3, x=4.0, y=2.0, R1=-1)


# ---------------------------------------------------------------------------
# closed-form and classic bounds
# ---------------------------------------------------------------------------


def test_closed_form_bound_values():
    assert rel_err(closed_form_bound(6), 40.651906045065284) < 1e-9
    assert rel_err(closed_form_bound(6), float(mp_closed_form_bound(6))) < 1e-12
    expected_100 = math.exp((1.8 + math.log(math.log(100))) / math.log(100)) * 100 * math.log(100)
    assert rel_err(closed_form_bound(100), expected_100) < 1e-12
    assert rel_err(closed_form_bound(100), 948.4581704747035) < 1e-9
    with pytest.raises(InfeasibleParamsError):
        closed_form_bound(5)


def test_closed_form_bound_monotone():
    values = [closed_form_bound(R) for R in range(6, 10_001)]
    assert all(a < b for a, b in zip(values, values[1:]))


def test_classic_bound_values():
    assert rel_err(classic_bound(2, 6), 41.115410845506104) < 1e-9
    assert rel_err(classic_bound(2, 6), float(mp_classic_bound(2, 6))) < 1e-12
    assert classic_bound(3, 6) == 2.0 * classic_bound(2, 6)
    assert classic_bound(7, 11) == 2.0 * classic_bound(2, 11)
    with pytest.raises(InfeasibleParamsError):
        classic_bound(2, 2)
    with pytest.raises(InfeasibleParamsError):
        classic_bound(1, 6)


def test_new_bound_beats_classic_everywhere():
    assert all(closed_form_bound(R) < classic_bound(2, R) for R in range(6, 10_001))
    assert all(closed_form_bound(R) < classic_bound(3, R) for R in range(6, 10_001))


# ---------------------------------------------------------------------------
# chain check
# ---------------------------------------------------------------------------


def test_chain_check_holds_at_six_and_large():
    for R in (6, 7, 50, 10_000):
        report = closed_form_chain_check(R)
        assert report.holds, (R, report.failed_step)
        assert report.bound_at_params <= report.closed_form


def test_chain_check_reports_failure_at_five():
    report = closed_form_chain_check(5)
    assert not report.holds
    assert report.failed_step == "i"
    assert report.lhs_i > report.rhs_i
    assert report.closed_form is None  # not claimed below six


def test_chain_check_step_values_at_six():
    report = closed_form_chain_check(6)
    assert rel_err(report.t, 1 / 36) < 1e-9
    assert report.lhs_i < report.rhs_i
    assert report.ratio_pow <= report.ratio_pow_cap
    assert rel_err(report.bound_at_params, 32.21334194386763) < 1e-9


def test_chain_check_rejects_tiny_R():
    with pytest.raises(ValueError):
        closed_form_chain_check(1)


# ---------------------------------------------------------------------------
# optimizer
# ---------------------------------------------------------------------------


def test_optimizer_beats_simple_sample_at_R1():
    opt = optimize_parametric_bound(1)
    assert opt.bound <= 4 * math.log(4)
    assert 4.0 < opt.bound <= 4.911  # grid-scan reference value 4.91082
    assert rel_err(
        opt.bound, parametric_bound_factored(BoundParams(R=1, x=opt.x, y=opt.y))
    ) == 0.0


def test_optimizer_dominates_chain_params():
    for R in (6, 10):
        x, y = chain_params(R)
        reference = parametric_bound_factored(BoundParams(R=R, x=x, y=y))
        opt = optimize_parametric_bound(R)
        assert opt.bound <= reference
        assert opt.bound <= closed_form_bound(R)
        assert feasibility(BoundParams(R=R, x=opt.x, y=opt.y)) < 1.0


def test_optimizer_dominates_random_feasible_samples():
    rng = random.Random(55)
    for R in (2, 7):
        opt = optimize_parametric_bound(R)
        for _ in range(50):
            y = 1.0 + math.exp(rng.uniform(math.log(1e-2), math.log(10.0 * R)))
            x = R * math.log(y) + math.exp(rng.uniform(math.log(0.05), math.log(10.0)))
            assert opt.bound <= parametric_bound_factored(BoundParams(R=R, x=x, y=y))


def test_optimizer_invariant_to_region_doubling():
    for R in (3, 6):
        base = optimize_parametric_bound(R)
        wide = optimize_parametric_bound(
            R,
            y_hi=2.0 * (10.0 * R * math.log(R + 2.0) + 10.0),
            x_span=2.0 * 20.0 * math.log(R + 2.0),
        )
        assert rel_err(base.bound, wide.bound) < 1e-6


def test_optimizer_rejects_bad_R():
    with pytest.raises(InfeasibleParamsError):
        optimize_parametric_bound(0)


# ---------------------------------------------------------------------------
# recurrence machinery
# ---------------------------------------------------------------------------


def test_recurrence_limit_bound_values():
    assert recurrence_limit_bound(1.0, 0.0) == 1.0
    assert recurrence_limit_bound(0.0, 0.9) == 0.0
    with pytest.raises(InfeasibleParamsError):
        recurrence_limit_bound(1.0, 1.0)
    with pytest.raises(InfeasibleParamsError):
        recurrence_limit_bound(1.0, -0.1)


def test_recurrence_limit_matches_parametric_bound():
    # with a = x*(y/(y-1))^R and b = e^-x*y^R the limit a/(1-b) is the bound
    rng = random.Random(19)
    for _ in range(100):
        R, x, y = sample_feasible_params(rng, r_max=40, margin_lo=0.05)
        a = x * math.exp(R * math.log1p(1.0 / (y - 1.0)))
        b = math.exp(R * math.log(y) - x)
        got = recurrence_limit_bound(a, b)
        assert rel_err(got, parametric_bound(BoundParams(R=R, x=x, y=y))) < 1e-12


def test_simulate_recurrence_seeds_and_b_zero():
    spec = RecurrenceSpec.constant(3.0, 0.0, 2.5, s_base=7.0)
    s = simulate_recurrence(spec, 20)
    assert s[1] == 7.0 and s[2] == 7.0  # floor(2/2.5) = 0 keeps the seed
    assert all(s[n] == 3.0 for n in range(3, 21))


def test_simulate_recurrence_converges_geometrically():
    spec = RecurrenceSpec.constant(1.0, 0.5, 2.0, s_base=0.0)
    s = simulate_recurrence(spec, 2**10)
    assert abs(s[2**10] - 2.0) <= 2.0**-9
    assert abs(s[2**10] - 2.0) <= telescoped_error_bound(spec, 2**10)


def test_recurrence_depth_matches_iterated_floor():
    assert recurrence_depth(2**10, 2.0) == 10
    assert recurrence_depth(10, 1.5) == 4  # 10 -> 6 -> 4 -> 2 -> 1
    assert recurrence_depth(1, 2.0) == 0
    assert floor_div_real(10, 1.5) == 6


def test_telescoped_bound_holds_everywhere_constant_case():
    rng = random.Random(3)
    for k in range(20):
        a = rng.uniform(0.1, 5.0)
        b = rng.uniform(0.05, 0.95)
        y = rng.uniform(1.2, 4.0)
        s_base = rng.choice([0.0, rng.uniform(0.0, 3.0)])
        spec = RecurrenceSpec.constant(a, b, y, s_base=s_base)
        limit = recurrence_limit_bound(a, b)
        s = simulate_recurrence(spec, 512)
        for n in range(1, 513):
            slack = 1e-9 * (1.0 + limit)  # float accumulation headroom
            assert abs(s[n] - limit) <= telescoped_error_bound(spec, n) + slack, (k, n)


def test_recurrence_spec_validation():
    with pytest.raises(InfeasibleParamsError):
        RecurrenceSpec.constant(1.0, 1.2, 2.0)
    with pytest.raises(InfeasibleParamsError):
        RecurrenceSpec.constant(1.0, 0.5, 1.0)


# ---------------------------------------------------------------------------
# bound table rows
# ---------------------------------------------------------------------------


def test_bound_table_rows_schema():
    rows = list(bound_table_rows(5, 7))
    assert len(rows) == 3
    assert len(BOUND_TABLE_HEADER) == len(rows[0]) == 9
    by_r = {row[0]: row for row in rows}
    assert math.isnan(by_r[5][5]) and math.isnan(by_r[5][8])  # no closed form below 6
    assert by_r[6][8] < 1.0  # ratio_new_over_ksv2
    for row in rows:
        assert row[1] < 1.0  # optimized parameters stay feasible
        assert row[4] <= row[6] or math.isnan(row[6])  # bound_opt <= cor_ksv_q2
