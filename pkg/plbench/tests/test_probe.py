from dataclasses import replace
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from plbench.workbench.algebra.grammar import parse_polynomial
from plbench.workbench.algebra.poly import Polynomial
from plbench.workbench.core.exceptions import InputError
from plbench.workbench.probe.candidates import (
    LINEAR_IMAGINARY,
    LOG_ABS,
    PSH_COMBINATION,
    candidate_from_spec,
    default_candidates,
)
from plbench.workbench.probe.phragmen import (
    GROWING,
    STABLE,
    UNIQUENESS,
    VACUOUS,
    _trend,
    probe,
    replay,
    uniqueness_probe,
)
from plbench.workbench.probe.sampler import sample_curve
from plbench.workbench.system.models import CandidateSpec, RegionDocument
from plbench.workbench.system.parser import build_region, parse_document
from plbench.workbench.weights.families import weight_function

DATA_DIR = Path(__file__).parent / "data"
Z = ("z1", "z2")


def curve(text):
    return parse_polynomial(text, Z)


def box(half_width):
    bounds = [(-half_width, half_width)] * 2
    return build_region(RegionDocument(kind="box", bounds=bounds, exhaustion="constant"), 2)


@pytest.fixture(scope="module")
def line():
    document = parse_document((DATA_DIR / "line_probe.json").read_bytes())
    sampler = sample_curve(document.curve, r_max=1e4, radii=5, angles=8)
    return document, sampler


def test_line_sampler_covers_every_radius(line):
    _, sampler = line
    assert sampler.points.shape == (40, 2)
    assert np.allclose(sampler.points[:, 1], 0.0)
    assert np.count_nonzero(sampler.within(0)) == 8
    assert np.allclose(np.abs(sampler.points[sampler.radius_index == 4, 0]), 1e4)
    assert sampler.notices == ()


def test_cusp_sampler_finds_both_sheets():
    sampler = sample_curve(curve("z2^2 - z1^3"), r_max=1e3, radii=4, angles=8)
    assert sampler.points.shape == (64, 2)
    z1, z2 = sampler.points[:, 0], sampler.points[:, 1]
    assert np.allclose(np.abs(z2), np.abs(z1) ** 1.5, rtol=1e-8)


def test_sampler_strips_z1_factor():
    sampler = sample_curve(curve("z1*z2"), r_max=10, radii=2, angles=4)
    assert sampler.curve == curve("z2")
    assert any("z1^1" in notice for notice in sampler.notices)


@pytest.mark.parametrize("text", ["z1^2 - 1", "0"])
def test_sampler_rejects_curves_without_fibres(text):
    with pytest.raises(InputError):
        sample_curve(curve(text), r_max=10, radii=2, angles=4)


def test_sampler_needs_a_plane_curve():
    with pytest.raises(InputError):
        sample_curve(Polynomial.variable(3, 0), r_max=10, radii=2, angles=4)


def test_candidate_labels():
    log = candidate_from_spec(CandidateSpec(LOG_ABS, polynomial=curve("z1^2 + 1")), 2)
    assert log.label == "log|z1^2 + 1|"
    assert log.holomorphic
    linear = candidate_from_spec(CandidateSpec(LINEAR_IMAGINARY, direction=(Fraction(1, 2), Fraction(-1))), 2)
    assert linear.label == "Im<1/2,-1>"
    assert not linear.holomorphic
    part = CandidateSpec(LOG_ABS, polynomial=curve("z1"))
    combined = candidate_from_spec(CandidateSpec(PSH_COMBINATION, parts=(part,)), 2)
    assert combined.label == "max(log|z1|)"


def test_candidate_values():
    points = np.array([[3j, 1 + 2j], [-1j, 0]])
    linear = candidate_from_spec(CandidateSpec(LINEAR_IMAGINARY, direction=(Fraction(1), Fraction(1))), 2)
    assert np.allclose(linear(points), [5.0, -1.0])
    log = candidate_from_spec(CandidateSpec(LOG_ABS, polynomial=curve("z1")), 2)
    assert np.allclose(log(points), [np.log(3.0), 0.0])


def test_candidate_dimension_mismatch():
    with pytest.raises(InputError):
        candidate_from_spec(CandidateSpec(LINEAR_IMAGINARY, direction=(Fraction(1),)), 2)


def test_default_candidates():
    candidates = default_candidates(2)
    assert len(candidates) == 17
    assert candidates[0].label == "log|1|"
    assert sum(1 for c in candidates if c.kind == LINEAR_IMAGINARY) == 8
    assert candidates[-1].kind == PSH_COMBINATION


def run_line_probe(document, sampler, **overrides):
    settings = document.probe
    K1, K2 = document.regions
    candidates = [candidate_from_spec(spec, 2) for spec in settings.candidates]
    options = {"c_max": settings.c_max, "beta_max": settings.beta_max, "alpha_u_max": settings.alpha_u_max}
    options.update(overrides)
    return probe(sampler, K1, K2, weight_function(document.weights[0]), settings.alpha, candidates, **options)


def test_line_probe_is_stable(line):
    document, sampler = line
    verdict = run_line_probe(document, sampler)
    assert verdict.beta_empirical == (1, 1, 1, 1, 1)
    assert verdict.c_empirical == (0.0, 0.0, 0.0, 0.0, 0.0)
    assert verdict.trend == STABLE
    assert verdict.replay_passed is True
    assert verdict.exit_code == 0
    assert verdict.pass_rate == 1.0
    outcome = verdict.candidates[0]
    assert (outcome.alpha_u, outcome.c_u) == (1, 0.0)


def test_verdict_payload(line):
    document, sampler = line
    payload = run_line_probe(document, sampler).as_dict()
    assert payload["mode"] == "probe"
    assert payload["caveat"].startswith("Finite-sample falsifier")
    assert [row["beta_empirical"] for row in payload["per_radius"]] == [1] * 5
    assert payload["candidates"][0]["label"] == "Im<1,0>"


def test_identical_regions_keep_beta_at_alpha(line):
    _, sampler = line
    weight = weight_function(parse_document((DATA_DIR / "line_probe.json").read_bytes()).weights[0])
    verdict = probe(sampler, box(2), box(2), weight, 2, default_candidates(2))
    assert verdict.pass_rate > 0
    for outcome in verdict.candidates:
        if outcome.admissible:
            assert set(outcome.betas) == {2}
            assert set(outcome.constants) == {0.0}
    assert verdict.beta_empirical == (2, 2, 2, 2, 2)
    assert verdict.trend == STABLE


def test_candidate_violating_the_bound_is_vacuous(line):
    _, sampler = line
    weight = weight_function(parse_document((DATA_DIR / "line_probe.json").read_bytes()).weights[0])
    cubic = candidate_from_spec(CandidateSpec(LOG_ABS, polynomial=curve("z1^3")), 2)
    verdict = probe(sampler, box(1), box(1), weight, 1, [cubic])
    assert verdict.trend == VACUOUS
    assert verdict.exit_code == 3
    assert verdict.beta_empirical == (None,) * 5
    assert verdict.candidates[0].failure.startswith("exceeds psi2_alpha")
    assert verdict.replay_passed is True


def test_probe_rejects_bad_settings(line):
    document, sampler = line
    with pytest.raises(InputError):
        run_line_probe(document, sampler, beta_max=0)
    with pytest.raises(InputError):
        run_line_probe(document, sampler, c_max=-1.0)


def test_replay_catches_understated_constants(line):
    document, sampler = line
    verdict = run_line_probe(document, sampler)
    outcome = verdict.candidates[0]
    tampered = replace(outcome, constants=(-1.0,) * len(outcome.constants))
    assert replay(replace(verdict, candidates=(tampered,)), sampler) is False


def test_uniqueness_probe_reports_multiplicative_constant(line):
    document, sampler = line
    K1, K2 = document.regions
    weight = weight_function(document.weights[0])
    one = candidate_from_spec(CandidateSpec(LOG_ABS, polynomial=Polynomial.one(2)), 2)
    verdict = uniqueness_probe(sampler, K1, K2, weight, 1, [one])
    assert verdict.mode == UNIQUENESS
    assert verdict.beta_empirical == (1,) * 5
    assert verdict.c_empirical == pytest.approx((1.0,) * 5)
    assert verdict.replay_passed is True


def test_uniqueness_probe_needs_holomorphic_candidates(line):
    document, sampler = line
    K1, K2 = document.regions
    weight = weight_function(document.weights[0])
    linear = candidate_from_spec(document.probe.candidates[0], 2)
    with pytest.raises(InputError):
        uniqueness_probe(sampler, K1, K2, weight, 1, [linear])
    one = candidate_from_spec(CandidateSpec(LOG_ABS, polynomial=Polynomial.one(2)), 2)
    with pytest.raises(InputError):
        uniqueness_probe(sampler, K1, K2, weight, 1, [one], c_max=0.5)


@pytest.mark.parametrize(
    ("betas", "expected"),
    [((1, 1, 2), GROWING), ((1, 2, 2), STABLE), ((3, 3, 3), STABLE), ((1, None, 2), STABLE)],
)
def test_trend_compares_one_decade_in(betas, expected):
    assert _trend((1.0, 10.0, 100.0), betas) == expected
