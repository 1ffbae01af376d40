"""Named example schemes shipped with the package.

The corpus spans the interesting corners of the design space: plain
uniform symmetric schemes for every legal mask popcount, their
profile-tuned counterparts, a symmetric but non-uniform scheme, a scheme
with overlapping masks, and a two-connection example with an uncovered
port.
"""

from __future__ import annotations

from importlib import resources

from .scheme import SchemeMatrix, parse_scheme

FIXTURE_NAMES = (
    "shared_pairs",
    "symmetric_7mask",
    "overlap_9mask",
    "uniform1_plain",
    "uniform2_plain",
    "uniform4_plain",
    "uniform1_tuned",
    "uniform2_tuned",
    "uniform4_tuned",
)


def fixture_text(name: str) -> str:
    if name not in FIXTURE_NAMES:
        raise KeyError(f"unknown fixture {name!r}; see FIXTURE_NAMES")
    return (
        resources.files("portshare.data").joinpath(f"{name}.scheme").read_text()
    )


def load_fixture(name: str) -> SchemeMatrix:
    return parse_scheme(fixture_text(name))


def all_fixtures() -> dict[str, SchemeMatrix]:
    return {name: load_fixture(name) for name in FIXTURE_NAMES}
