import pytest

import sinrsched


def line_instance(beta=2.0):
    return {
        "alpha": 2.0,
        "noise": 0.1,
        "p_max": "inf",
        "metric": {"type": "euclidean", "dim": 1, "points": [[0], [1], [1000], [1001]]},
        "links": [
            {"id": 0, "s": 0, "r": 1, "beta": beta},
            {"id": 1, "s": 2, "r": 3, "beta": beta},
        ],
    }


def test_single_link_sinr():
    inst = line_instance()
    assert sinrsched.sinr(inst, [0], {0: 1.0}, 0) == pytest.approx(10.0)


def test_solve_and_verify():
    inst = sinrsched.generate(n=15, seed=3, beta_range=[1.0, 4.0])
    for algorithm in ("unlimited", "limited"):
        sol = sinrsched.solve(inst, algorithm)
        assert sinrsched.verify(inst, sol)["ok"]


def test_generate_is_deterministic():
    assert sinrsched.generate(n=10, seed=9) == sinrsched.generate(n=10, seed=9)


def test_tampered_solution_is_rejected():
    inst = line_instance()
    sol = sinrsched.solve(inst)
    sol["powers"]["0"] /= 2
    sol["sinr"]["0"] = sinrsched.sinr(inst, sol["selected"], {0: sol["powers"]["0"],
                                                              1: sol["powers"]["1"]}, 0)
    report = sinrsched.verify(inst, sol)
    assert not report["ok"]
    assert report["first_violated"] == 0


def test_oracles_agree_on_far_links():
    inst = line_instance()
    assert sinrsched.check_admissible(inst)["feasible"]
    assert sinrsched.spectral(inst)["feasible"]
    assert sinrsched.brute_force(inst)["subset"] == [0, 1]


def test_schedule_fulfills_demands():
    inst = sinrsched.generate(n=6, seed=4, utility_family="step", demand_range=[0.5, 2.0])
    sched = sinrsched.schedule(inst)
    assert sched["fulfilled"]
    assert sinrsched.verify(inst, sched)["ok"]


def test_experiment_report():
    rep = sinrsched.experiment("feasibility", seed=1, trials=5)
    assert rep["passed"]
    assert rep["csv"].startswith("trial,instance_digest,")
    assert "aloha" in sinrsched.experiment_names


def test_unknown_generator_field():
    with pytest.raises(sinrsched.InvalidInput):
        sinrsched.generate(n=3, seed=1, beta_max=4.0)


def test_errors_map_to_python_exceptions():
    with pytest.raises(sinrsched.InvalidInput):
        sinrsched.solve({"links": []})
    with pytest.raises(ValueError):
        sinrsched.solve(line_instance(), "nonsense")
