from __future__ import annotations

import random
from fractions import Fraction

import pytest

from datahub.instances import random_asymmetric, random_distribution, random_monotone_table, random_poly
from engine.costs import AsymmetricPoly, SymmetricPoly, Tabulated, TargetDistribution, bivariate_from_asymmetric, pricing
from engine.errors import SearchInputError, SizeLimitError
from engine.graph import path
from engine.line_solver import (
    LinePolyProgram,
    binary_search_strategy,
    bs_cost_upper_bound,
    expected_cost,
    gamma_strategy,
    opt_lower_bounds,
    power_sums,
    seqcost_eval,
    solve_line_bivariate,
    solve_line_distributional,
    solve_line_poly,
    threshold_instance,
)
from engine.oracle import brute_force_expected_line, brute_force_line
from engine.strategy import validate_stt, worst_case_cost
from infra.settings import SolverLimits

LINEAR = SymmetricPoly((0, 1))


def test_power_sums():
    assert power_sums([2, 5], 2).coeffs == (2, 7, 29)
    assert power_sums([], 3).coeffs == (0, 0, 0, 0)
    with pytest.raises(SearchInputError):
        power_sums([1], -1)


def test_seqcost_eval_matches_direct_sum():
    c = AsymmetricPoly((0, 1), (0, 1))
    assert seqcost_eval(c, power_sums([2], 1, "minus"), power_sums([], 1, "plus"), 5) == 3
    assert seqcost_eval(c, power_sums([], 1, "minus"), power_sums([], 1, "plus"), 5) == 0


def test_seqcost_eval_random_histories(rng):
    for _ in range(50):
        c = random_asymmetric(rng.randint(0, 3), rng)
        t = rng.randint(5, 15)
        below = rng.sample(range(1, t), rng.randint(0, 3))
        above = rng.sample(range(t + 1, 25), rng.randint(0, 3))
        expected = sum(c.h_minus(t - q) for q in below) + sum(c.h_plus(q - t) for q in above)
        assert seqcost_eval(c, power_sums(below, c.degree), power_sums(above, c.degree, "plus"), t) == expected


@pytest.mark.parametrize("n, expected", [(1, 0), (2, 1), (3, 1), (10, 6)])
def test_solve_line_poly_linear_values(n, expected):
    result = solve_line_poly(n, LINEAR)
    assert result.value == expected
    t = path(n)
    assert validate_stt(t, result.strategy).ok
    assert worst_case_cost(t, LINEAR, result.strategy)[0] == expected


def test_pricing_solver_and_binary_search():
    result = solve_line_bivariate(19, pricing())
    assert result.value == 17
    t = path(19)
    assert worst_case_cost(t, pricing(), result.strategy)[0] == 17
    assert worst_case_cost(t, pricing(), binary_search_strategy(19))[0] == 23


def test_solve_line_poly_rejects_bad_inputs():
    with pytest.raises(SearchInputError):
        solve_line_poly(0, LINEAR)
    with pytest.raises(SearchInputError):
        solve_line_poly(5, Tabulated((1, 2, 3, 4)))
    with pytest.raises(SearchInputError):
        solve_line_poly(10, SymmetricPoly((0, 5, -1)))
    with pytest.raises(SearchInputError):
        solve_line_bivariate(5, LINEAR)


def test_state_limit_is_enforced():
    with pytest.raises(SizeLimitError):
        solve_line_poly(30, SymmetricPoly((0, 0, 1)), SolverLimits(line_max_states=5))


def test_translation_invariant_keys_share_entries():
    program = LinePolyProgram(LINEAR, 10_000)
    root = program.root(12)
    shifted_a = program.children(root, 4)[1]
    shifted_b = program.children(root, 9)[0]
    key_a, _ = program.encode(shifted_a)
    key_b, _ = program.encode(shifted_b)
    assert shifted_a.R - shifted_a.L == 9
    assert shifted_b.R - shifted_b.L == 9
    assert key_a[0] == key_b[0]


def test_solver_matches_oracle_on_random_polynomials(rng):
    for _ in range(40):
        n = rng.randint(1, 9)
        p = rng.randint(0, 3)
        c = random_poly(p, rng) if rng.random() < 0.5 else random_asymmetric(p, rng)
        oracle = brute_force_line(n, c)
        assert solve_line_poly(n, c).value == oracle.value
        assert solve_line_bivariate(n, bivariate_from_asymmetric(c)).value == oracle.value


@pytest.mark.parametrize("n, expected", [(1, 0), (10, 8)])
def test_binary_search_cost(n, expected):
    assert worst_case_cost(path(n), LINEAR, binary_search_strategy(n))[0] == expected


def test_binary_search_uses_lower_median():
    s = binary_search_strategy(10)
    assert s.label == 5
    assert [child.label for child in s.children] == [2, 8]


def test_bounds_examples():
    assert bs_cost_upper_bound(10, LINEAR) == 8
    assert bs_cost_upper_bound(1, LINEAR) == 0
    assert bs_cost_upper_bound(16, SymmetricPoly((1,))) == 4
    assert opt_lower_bounds(10, LINEAR) == (5, 3, 0)
    assert opt_lower_bounds(1, LINEAR) == (0, 0, 0)


def test_binary_search_four_approximation_on_random_tables():
    rng = random.Random(41)
    for _ in range(60):
        n = rng.randint(1, 10)
        c = random_monotone_table(n, rng)
        opt = brute_force_line(n, c).value
        bs = worst_case_cost(path(n), c, binary_search_strategy(n))[0]
        assert bs <= 4 * opt
        assert bs <= bs_cost_upper_bound(n, c)
        assert all(bound <= opt for bound in opt_lower_bounds(n, c))


@pytest.mark.parametrize("n", [15, 31, 63])
def test_threshold_instance(n):
    cost, strategy = threshold_instance(n)
    t = path(n)
    assert validate_stt(t, strategy).ok
    assert worst_case_cost(t, cost, strategy)[0] == 1
    assert worst_case_cost(t, cost, binary_search_strategy(n))[0] == 2


@pytest.mark.parametrize("n", [7, 16, 30])
def test_threshold_instance_rejects_bad_sizes(n):
    with pytest.raises(SearchInputError):
        threshold_instance(n)


def test_gamma_strategy_small_and_valid():
    assert worst_case_cost(path(2), LINEAR, gamma_strategy(2))[0] == 1
    for n in (5, 17, 100):
        assert validate_stt(path(n), gamma_strategy(n)).ok


@pytest.mark.slow
def test_gamma_strategy_beats_binary_search():
    n = 4096
    t = path(n)
    gamma, _ = worst_case_cost(t, LINEAR, gamma_strategy(n))
    bs, _ = worst_case_cost(t, LINEAR, binary_search_strategy(n))
    assert bs / gamma >= 1.40


@pytest.mark.slow
@pytest.mark.parametrize("n", [32, 64, 128])
def test_opt_over_n_is_bracketed(n):
    value = solve_line_poly(n, LINEAR).value
    assert 0.60 <= value / n <= 0.66


def test_distributional_examples():
    uniform = solve_line_distributional(3, LINEAR, TargetDistribution.uniform(3))
    assert uniform.value == Fraction(2, 3)
    assert uniform.strategy.label == 2
    point = solve_line_distributional(6, LINEAR, TargetDistribution.point_mass(6, 4))
    assert point.value == 0
    assert point.strategy.label == 4


def test_distributional_matches_oracle(rng):
    for _ in range(100):
        n = rng.randint(1, 10)
        d = random_distribution(n, rng)
        c = random_monotone_table(n, rng) if rng.random() < 0.5 else random_asymmetric(rng.randint(0, 2), rng)
        result = solve_line_distributional(n, c, d)
        assert result.value == brute_force_expected_line(n, c, d).value
        assert expected_cost(n, c, d, result.strategy) == result.value


def test_distributional_rejects_mismatched_length():
    with pytest.raises(SearchInputError):
        solve_line_distributional(4, LINEAR, TargetDistribution.uniform(3))


def test_power_sums_add_over_disjoint_histories(rng):
    for _ in range(30):
        p = rng.randint(0, 4)
        queries = rng.sample(range(1, 40), rng.randint(0, 10))
        cut = rng.randint(0, len(queries))
        left, right = queries[:cut], queries[cut:]
        assert power_sums(left, p) + power_sums(right, p) == power_sums(queries, p)
    with pytest.raises(SearchInputError):
        power_sums([1], 1) + power_sums([1], 2)


def test_line_states_track_history_costs():
    rng = random.Random(52)
    for _ in range(30):
        c = random_asymmetric(rng.randint(0, 3), rng)
        n = rng.randint(2, 25)
        program = LinePolyProgram(c, 10_000)
        state = program.root(n)
        asked = []
        while True:
            key, base = program.encode(state)
            local = (base,) + tuple(key[1])
            for t in state.feasible:
                direct = sum(c.h_minus(t - q) if q < t else c.h_plus(q - t) for q in asked)
                assert program.hit_cost(state, t) == direct
                assert sum(coef * (t - state.L) ** j for j, coef in enumerate(local)) == direct
            q = rng.choice(list(program.candidates(state)))
            kids = program.children(state, q)
            if not kids:
                break
            asked.append(q)
            state = rng.choice(kids)


@pytest.mark.parametrize("c", [LINEAR, SymmetricPoly((0, 0, 1)), SymmetricPoly((1, 1))])
def test_opt_is_nondecreasing_in_n(c):
    values = [solve_line_poly(n, c).value for n in range(1, 17)]
    assert values == sorted(values)


@pytest.mark.slow
@pytest.mark.parametrize("c", [LINEAR, SymmetricPoly((1, 1))])
def test_opt_is_nondecreasing_up_to_64(c):
    values = [solve_line_poly(n, c).value for n in range(1, 65)]
    assert values == sorted(values)


@pytest.mark.slow
def test_solver_matches_oracle_on_many_random_polynomials():
    rng = random.Random(42)
    for _ in range(200):
        n = rng.randint(1, 12)
        p = rng.randint(0, 3)
        c = random_poly(p, rng) if rng.random() < 0.5 else random_asymmetric(p, rng)
        oracle = brute_force_line(n, c)
        assert solve_line_poly(n, c).value == oracle.value
        assert solve_line_bivariate(n, bivariate_from_asymmetric(c)).value == oracle.value


@pytest.mark.slow
def test_binary_search_four_approximation_on_many_tables():
    rng = random.Random(43)
    for _ in range(200):
        n = rng.randint(1, 12)
        c = random_monotone_table(n, rng)
        opt = brute_force_line(n, c).value
        bs = worst_case_cost(path(n), c, binary_search_strategy(n))[0]
        assert bs <= 4 * opt
        assert all(bound <= opt for bound in opt_lower_bounds(n, c))
