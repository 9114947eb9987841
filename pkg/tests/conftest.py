import hypothesis

hypothesis.settings.register_profile(
    "su3char",
    deadline=None,
    derandomize=True,
    max_examples=60,
    print_blob=False,
)
hypothesis.settings.load_profile("su3char")

# One line per acceptance criterion, printed after the run so the summary
# survives pytest's output capture.  test_acceptance.py appends to this.
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
