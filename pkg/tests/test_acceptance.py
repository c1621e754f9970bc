import pytest

from skeleta.acceptance import CASES, run_case


@pytest.mark.parametrize("case", sorted(CASES))
def test_acceptance(case, capsys):
    r = run_case(case)
    with capsys.disabled():
        print("\n" + r.line())
    assert r.ok, r.detail
    assert r.in_budget, f"took {r.seconds:.2f}s, budget {r.budget}s"
