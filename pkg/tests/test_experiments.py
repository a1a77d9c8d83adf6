"""
Tests for the experiment runner and its output files
"""

import csv
import json

import pytest

from qadd.middleware.error_handler import ParameterError, PreconditionError
from qadd.models.schemas import ExperimentConfig, ExperimentName
from qadd.services.experiment_service import (
    ExperimentService,
    config_echo_path,
    format_value,
    in_boundary_band,
)


@pytest.fixture
def experiment_service():
    return ExperimentService(seed=1234)


def _config(experiment: ExperimentName, out, **kwargs) -> ExperimentConfig:
    return ExperimentConfig(experiment=experiment, out=str(out), seed=1234, **kwargs)


def _csv_lines(path) -> list[str]:
    return path.read_text(encoding="utf-8").splitlines()


class TestFormatting:
    """Test cases for CSV cell formatting"""

    def test_format_value(self):
        """Test booleans, floats and integers"""
        assert format_value(True) == "true"
        assert format_value(False) == "false"
        assert format_value(0.0) == "0"
        assert format_value(0.5) == "0.5"
        assert format_value(1.0 / 3.0) == "0.3333333333"
        assert format_value(7) == "7"

    def test_config_echo_path(self, out_dir):
        """Test the echo sits next to the output"""
        assert config_echo_path(out_dir / "q.csv").name == "q.csv.config.json"


class TestSurfaces:
    """Test cases for the Platypus surfaces"""

    def test_coherent_info_surface(self, experiment_service, out_dir):
        """Test a 3x3 grid keeps the six simplex points in order with Q1 = 0 for t >= 1/2"""
        out = out_dir / "q1.csv"
        config = _config(
            ExperimentName.COHERENT_INFO_SURFACE, out, params={"s_steps": 3, "t_steps": 3}
        )

        path = experiment_service.run(config)

        lines = _csv_lines(path)
        assert lines[0] == "s,t,u_star,q1"
        assert len(lines) == 7
        assert lines[1].startswith("0,0,")
        assert config_echo_path(out).exists()
        rows = list(csv.DictReader(lines))
        anti_degradable = [row for row in rows if float(row["t"]) >= 0.5]
        assert len(anti_degradable) == 3
        assert all(abs(float(row["q1"])) <= 1e-6 for row in anti_degradable)

    def test_surface_is_deterministic(self, out_dir):
        """Test two runs with one seed write identical bytes"""
        first, second = out_dir / "a.csv", out_dir / "b.csv"
        params = {"s_steps": 3, "t_steps": 3}

        ExperimentService(seed=7).run(
            _config(ExperimentName.COHERENT_INFO_SURFACE, first, params=params)
        )
        ExperimentService(seed=7).run(
            _config(ExperimentName.COHERENT_INFO_SURFACE, second, params=params)
        )

        assert first.read_bytes() == second.read_bytes()

    def test_config_echo_contents(self, experiment_service, out_dir):
        """Test the echo records the experiment, seed and sorted parameters"""
        out = out_dir / "q1.csv"
        experiment_service.run(
            _config(ExperimentName.COHERENT_INFO_SURFACE, out, params={"t_steps": 2, "s_steps": 2})
        )

        echo = json.loads(config_echo_path(out).read_text())

        assert echo["experiment"] == "coherent-info-surface"
        assert echo["seed"] == 1234
        assert list(echo["params"]) == ["s_steps", "t_steps"]

    def test_private_info_surface(self, experiment_service, out_dir):
        """Test the private-information surface header and flag column"""
        out = out_dir / "p1.csv"

        experiment_service.run(
            _config(ExperimentName.PRIVATE_INFO_SURFACE, out, params={"s_steps": 2, "t_steps": 2})
        )

        lines = _csv_lines(out)
        assert lines[0] == "s,t,p,u,p1,flagged"
        assert len(lines) == 4
        assert all(line.endswith(",false") for line in lines[1:])

    def test_grid_steps_range(self, experiment_service, out_dir):
        """Test a grid with one step is rejected"""
        config = _config(
            ExperimentName.COHERENT_INFO_SURFACE, out_dir / "q1.csv", params={"s_steps": 1}
        )

        with pytest.raises(ParameterError):
            experiment_service.run(config)


class TestFlaggedRegionScan:
    """Test cases for the flagged AD region scan"""

    def test_scan_agrees(self, experiment_service, out_dir):
        """Test the interior points off the boundary bands all agree"""
        out = out_dir / "scan.csv"
        params = {"p_steps": 3, "gamma_steps": 3, "eta_steps": 3}

        experiment_service.run(_config(ExperimentName.FLAGGED_REGION_SCAN, out, params=params))

        lines = _csv_lines(out)
        assert lines[0] == "p,gamma,eta,analytic_verdict,numeric_verdict,agree"
        assert len(lines) == 5
        assert all(line.endswith(",true") for line in lines[1:])

    @pytest.mark.parametrize(
        "point, expected",
        [((0.5, 0.3, 0.3), False), ((0.3, 0.49, 0.2), True), ((0.51, 0.3, 0.3), True)],
    )
    def test_boundary_band(self, point, expected):
        """Test the band around the region edges keeps p = 1/2 itself"""
        assert in_boundary_band(*point) is expected


class TestChannelExperiments:
    """Test cases for certify and q1"""

    def test_certify(self, experiment_service, out_dir):
        """Test the certificate JSON of A_0.3"""
        out = out_dir / "cert.json"

        experiment_service.run(_config(ExperimentName.CERTIFY, out, family="ad:0.3"))

        payload = json.loads(out.read_text())
        assert payload["verdict"] == "degradable"
        assert payload["degradable"] is True

    def test_q1(self, experiment_service, out_dir):
        """Test the Q1 JSON of a dephasing channel"""
        out = out_dir / "q1.json"

        experiment_service.run(
            _config(ExperimentName.Q1, out, family="dephasing:0.4", params={"strategy": "auto"})
        )

        payload = json.loads(out.read_text())
        assert payload["strategy"] == "diagonal_grid"
        assert payload["value"] == pytest.approx(0.1187091007, abs=1e-8)

    def test_unknown_strategy(self, experiment_service, out_dir):
        """Test an unknown strategy name is rejected"""
        config = _config(
            ExperimentName.Q1, out_dir / "q1.json", family="ad:0.3", params={"strategy": "newton"}
        )

        with pytest.raises(ParameterError):
            experiment_service.run(config)

    @pytest.mark.parametrize("family, channel_file", [(None, None), ("ad:0.3", "channel.json")])
    def test_exactly_one_source(self, family, channel_file):
        """Test certify needs exactly one channel source"""
        with pytest.raises(ParameterError):
            ExperimentService.resolve_channel(family, channel_file)


class TestDemos:
    """Test cases for the JSON demos"""

    def test_smith_yard_demo(self, experiment_service, out_dir):
        """Test the default demo point satisfies the half-private-information identity"""
        out = out_dir / "sy.json"

        experiment_service.run(_config(ExperimentName.SMITH_YARD_DEMO, out))

        payload = json.loads(out.read_text())
        assert payload["residual"] <= 1e-8
        assert payload["coherent_information"] > 0.0

    def test_smith_yard_demo_needs_private_information(self, experiment_service, out_dir):
        """Test an anti-degradable point is a precondition failure"""
        config = _config(
            ExperimentName.SMITH_YARD_DEMO, out_dir / "sy.json", params={"s": 0.2, "t": 0.6}
        )

        with pytest.raises(PreconditionError):
            experiment_service.run(config)

    def test_scaling_demo(self, experiment_service, out_dir):
        """Test the scaling demo writes a passing report"""
        out = out_dir / "scaling.json"

        experiment_service.run(_config(ExperimentName.SCALING_DEMO, out, params={"gamma": 0.3}))

        payload = json.loads(out.read_text())
        assert payload["passed"] is True
        assert payload["gamma"] == 0.3
