import random
import sys
from pathlib import Path

from hypothesis import HealthCheck, settings, strategies as st

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile(
    "repo", deadline=None, derandomize=True, max_examples=200,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")

from stepcbn.generators import GenConfig, gen_any_term, gen_typed_term  # noqa: E402

seeds = st.integers(min_value=0, max_value=2**32 - 1)


@st.composite
def any_surface(draw, size=14):
    return gen_any_term(GenConfig(max_term_size=size), random.Random(draw(seeds)))


@st.composite
def typed_surface(draw, size=14):
    return gen_typed_term(GenConfig(max_term_size=size), random.Random(draw(seeds)))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
