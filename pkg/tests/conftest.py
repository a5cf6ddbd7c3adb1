def pytest_runtest_logreport(report):
    # One visible pass/fail line per acceptance criterion.
    if report.when != "call" or "test_acceptance" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    status = "PASSED" if report.passed else "FAILED"
    print(f"\n[ACCEPTANCE] {name}: {status}", flush=True)
