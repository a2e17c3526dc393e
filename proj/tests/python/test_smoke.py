import pytest

import kurisym

C11 = "0,-1,1,-10,-20"
C37 = "0,0,1,-1,0"


def test_parse_curve():
    assert kurisym.parse_curve(C11) == ["0", "-1", "1", "-10", "-20"]


def test_analyze_rank_zero(tmp_path):
    r = kurisym.analyze(C11, 7, cache_dir=str(tmp_path))
    assert r["curve"]["N"] == 11
    assert r["numeric"]["delta_one"]["ok"]
    assert "timings" not in r


def test_sweep_is_deterministic(tmp_path):
    a = kurisym.sweep(C37, 3, lmax=150, cache_dir=str(tmp_path))
    b = kurisym.sweep(C37, 3, lmax=150)
    assert a == b
    assert a["sweep"]["verdict"] in {"CONSISTENT_WITNESS", "COUNTEREXAMPLE_SIGNAL", "INCONCLUSIVE"}


def test_heegner():
    r = kurisym.heegner(C11, 5, 7)
    assert r["heegner"]["predictions"]["heeg"] == 1


@pytest.mark.parametrize(
    "spec, code",
    [("0,0,0,0,0", 2), ("0,0,1", 4), ("@/definitely/not/here.txt:1", 5)],
)
def test_errors_carry_exit_codes(spec, code):
    with pytest.raises(kurisym.KurisymError) as e:
        kurisym.parse_curve(spec)
    assert e.value.args[1] == code


def test_budget_refusal():
    with pytest.raises(kurisym.KurisymError) as e:
        kurisym.sweep(C37, 3, lmax=3000, rmax=3, budget=1e6)
    assert e.value.args[1] == 3
