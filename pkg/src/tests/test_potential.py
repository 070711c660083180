from pathlib import Path

import numpy as np
import pytest

from program.potential import (
    FREE,
    ConfigParseError,
    DeltaTerm,
    PotentialSpec,
    PotentialValidationError,
    RegularPart,
    double_delta_spec,
    gamma1,
    load_potential,
    parse_potential,
    single_delta_spec,
    tail_integral,
    validate,
    weighted_l1_norm,
)

TEST_DATA = Path(__file__).parent / "test_data"


@pytest.fixture
def box():
    return PotentialSpec(regular=RegularPart(kind="box", params={"height": 0.5, "left": -1.0, "right": 1.0}))


def test_load_json_and_toml():
    single = load_potential(TEST_DATA / "single_delta.json")
    double = load_potential(TEST_DATA / "double_delta.toml")
    assert single == single_delta_spec(1.0), "c = 2q for a single delta"
    assert double == double_delta_spec(1.0, 1.0), "c = -2q at +-L for the pair"


def test_malformed_file_reports_line():
    with pytest.raises(ConfigParseError, match="line 3"):
        load_potential(TEST_DATA / "malformed.json")


def test_schema_violation_names_field():
    with pytest.raises(ConfigParseError, match="deltas.0.c"):
        parse_potential('{"deltas": [{"c": "strong", "y": 0}]}')


def test_missing_file():
    with pytest.raises(ConfigParseError, match="not found"):
        load_potential(TEST_DATA / "nothing_here.json")


def test_validate_collects_every_violation():
    spec = PotentialSpec(deltas=[DeltaTerm(c=0.0, y=1.0), DeltaTerm(c=1.0, y=-1.0)], gamma=-1.0)
    with pytest.raises(PotentialValidationError) as error:
        validate(spec)
    violations = error.value.violations
    assert any("zero strength" in v for v in violations)
    assert any("strictly increasing" in v for v in violations)
    assert any("gamma" in v for v in violations)


def test_trivial_potential_must_be_flagged_free():
    with pytest.raises(PotentialValidationError):
        validate(PotentialSpec())
    assert validate(FREE).passed


def test_unknown_regular_kind_is_a_violation():
    spec = PotentialSpec.model_construct(deltas=[], regular=RegularPart.model_construct(kind="wedge", params={}, support=None, mirrored=False), gamma=1.6, free=False)
    with pytest.raises(PotentialValidationError, match="Unknown regular potential kind"):
        validate(spec)


def test_weighted_norm_of_box(box):
    assert weighted_l1_norm(box, 0.0) == pytest.approx(1.0, rel=1e-10)
    assert weighted_l1_norm(box, 1.0) == pytest.approx(1.5, rel=1e-10)
    assert weighted_l1_norm(single_delta_spec(1.0)) == 0.0, "deltas are not part of the weighted norm"


def test_tails_count_deltas():
    spec = PotentialSpec(deltas=[DeltaTerm(c=-2.0, y=-1.0), DeltaTerm(c=3.0, y=1.0)])
    assert tail_integral(spec, 0.0) == pytest.approx(3.0)
    assert tail_integral(spec, 1.0) == pytest.approx(1.5), "half a delta sitting on s"
    assert tail_integral(spec, -5.0, absolute=False) == pytest.approx(1.0)
    assert gamma1(spec, 0.0) == pytest.approx(3.0)


def test_reflection_and_symmetry(box):
    spec = PotentialSpec(deltas=[DeltaTerm(c=1.0, y=-2.0), DeltaTerm(c=3.0, y=0.5)])
    mirrored = spec.reflected()
    assert [d.y for d in mirrored.deltas] == [-0.5, 2.0]
    assert [d.c for d in mirrored.deltas] == [3.0, 1.0]
    assert mirrored.reflected() == spec
    assert not spec.is_symmetric
    assert double_delta_spec(1.0, 2.0).is_symmetric
    assert box.is_symmetric


def test_window_and_radius(box):
    spec = PotentialSpec(deltas=[DeltaTerm(c=1.0, y=3.0)], regular=box.regular)
    assert spec.window == (-1.0, 3.0)
    assert spec.support_radius == 3.0
    assert FREE.window is None


def test_box_takes_midpoint_at_edges(box):
    values = box.evaluate(np.array([-2.0, -1.0, 0.0, 1.0, 2.0]))
    assert np.allclose(values, [0.0, 0.25, 0.5, 0.25, 0.0])
