import re

CRITERIA = {
    1: "5 concurrent lines: decomposition P_0..P_4 and the nontrivial V^q_i",
    2: "quasi-polynomial h^1(N) agrees with direct summation, h^1(2) = 5 = genus",
    3: "cyclic covers of P^1: h^{1,0} equals the Riemann-Hurwitz genus",
    4: "Ehrhart quasi-polynomials agree with brute-force counts",
    5: "coset counting agrees with the definitional count",
    6: "group axioms, inverse formula, pullback homomorphism and injectivity",
    7: "building data linear relation and epsilon symmetry",
    8: "cohomology oracle: Euler characteristic, h^0(dH), Serre duality",
}

_results: dict[int, list[str]] = {}
_pattern = re.compile(r"test_acceptance\.py::test_c(\d+)_")


def pytest_runtest_logreport(report):
    m = _pattern.search(report.nodeid)
    if not m:
        return
    if report.when == "call" or report.outcome != "passed":
        _results.setdefault(int(m.group(1)), []).append(report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(CRITERIA):
        outcomes = _results.get(k)
        if not outcomes:
            status = "NOT RUN"
        elif all(o == "passed" for o in outcomes):
            status = "PASS"
        else:
            status = "FAIL"
        terminalreporter.write_line(f"criterion {k}: {status}  {CRITERIA[k]}")
