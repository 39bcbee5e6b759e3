"""Smoke tests for the python extension: a few pinned values per area."""

import json
import math
import os

import pytest

import complearn as cl


def test_gaussian_closed_forms():
    assert cl.gaussian_drf(1.0, 1.0) == pytest.approx(0.25, abs=1e-15)
    assert cl.gaussian_drf(0.5, 3.0) == pytest.approx(0.00390625, abs=1e-15)
    assert cl.gaussian_root_risk_bound(0.5, 2.0) == pytest.approx(0.75, abs=1e-15)


def test_entropy_and_divergence():
    joint = cl.FiniteJoint(["a", "b"], [0.0, 1.0], [0.25, 0.25, 0.25, 0.25])
    assert cl.entropy_bits(joint, "Y") == pytest.approx(1.0, abs=1e-12)
    assert cl.mutual_information_bits(joint) == pytest.approx(0.0, abs=1e-12)

    kl_nats, kl_bits, dv = cl.kl_and_variational([0.9, 0.1], [0.5, 0.5])
    assert dv == pytest.approx(0.8, abs=1e-12)
    assert kl_bits == pytest.approx(kl_nats / math.log(2.0), abs=1e-12)

    with pytest.raises(cl.UsageError):
        cl.entropy_bits(joint, "Yhat|X")


def test_rd_solver_bernoulli():
    source = cl.FiniteJoint(["*"], [0.0, 1.0], [0.5, 0.5])
    point = cl.solve_at_rate(source, cl.LossFunction.hamming(), 0.5)
    assert point.converged
    assert point.distortion == pytest.approx(0.110027864438, abs=2e-3)

    curve = cl.rd_curve(source, cl.LossFunction.hamming())
    curve.validate()
    assert curve.zero_rate_distortion() == pytest.approx(0.5, abs=1e-9)


def test_codec_round_trip():
    xs = [0.1, 0.4, 0.6, 0.9]
    ys = [0.0, 0.25, 0.75, 1.0]
    codec = cl.train_codec(cl.CodecKind.uniform, xs, ys, 2.0, cl.LossFunction.squared())
    block = cl.encode(codec, xs, ys)
    yhat = cl.decode(codec, xs, block)
    assert yhat == pytest.approx([0.125, 0.375, 0.625, 0.875], abs=1e-12)

    raw = block.serialize(codec.bits_per_index())
    back = cl.EncodedBlock.deserialize(raw)
    assert list(back.indices) == list(block.indices)


def test_erm_and_risks():
    grid = cl.HypothesisGrid.with_levels(0.0, 1.0, 1, [0.0, 1.0])
    index, risk = cl.erm(grid, [0.2, 0.8], [1.0, 1.0], cl.LossFunction.squared())
    assert index == 1
    assert risk == pytest.approx(0.0, abs=1e-15)

    model = cl.RegressionModel([(0.0, 0.0), (1.0, 0.0)], sigma=0.5)
    assert cl.true_risk_regression(grid, 0, model, cl.LossFunction.squared()) == pytest.approx(
        0.25, abs=1e-14
    )


def test_covering():
    count, net = cl.covering_number(0.0, 0.0, 1.0, 0.25)
    assert count == 2
    assert list(net.levels) == pytest.approx([0.25, 0.75])


def test_verify_appendix_instance():
    here = os.path.dirname(os.path.abspath(__file__))
    instance_path = os.path.join(here, "..", "..", "data", "appendix_tiny.json")
    with open(instance_path) as fh:
        report = json.loads(cl.verify_appendix(fh.read()))
    assert report["chain"]["worst_slack"] >= -1e-9
    assert report["lstar_dominates"]
