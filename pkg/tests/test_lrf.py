import math

import numpy as np
import pytest

from diffdrive_ekf.lrf import (
    ALPHA_MAX,
    LrfSample,
    Point3,
    load_sweep,
    parse_sweep_text,
    project,
    sweep_to_cloud,
    unproject,
    write_cloud,
)


def random_samples(n, seed):
    rng = np.random.default_rng(seed)
    for _ in range(n):
        yield LrfSample(
            alpha=rng.uniform(0.0, ALPHA_MAX),
            beta=rng.uniform(-math.pi / 2, math.pi / 2),
            range_m=rng.uniform(0.04, 80.0),
        )


class TestProject:
    def test_boresight(self):
        p = project(LrfSample(0.0, 0.0, 1.0))
        assert (p.x, p.y, p.z) == (1.0, 0.0, 0.0)

    def test_extreme_left_at_minimum_range(self):
        p = project(LrfSample(0.0, math.pi / 2, 0.04))
        assert p.x == pytest.approx(0.0, abs=1e-12)
        assert p.y == pytest.approx(0.04)
        assert p.z == pytest.approx(0.0, abs=1e-12)

    def test_full_pitch(self):
        p = project(LrfSample(math.radians(25.0), 0.0, 2.0))
        assert p.x == pytest.approx(1.8126155740732999, abs=1e-9)
        assert p.y == 0.0
        assert p.z == pytest.approx(0.8452365234813989, abs=1e-9)

    def test_norm_preserved(self):
        for s in random_samples(10_000, seed=0):
            p = project(s)
            norm = math.sqrt(p.x**2 + p.y**2 + p.z**2)
            assert abs(norm - s.range_m) <= 1e-9 * s.range_m

    def test_beta_sweeps_counterclockwise(self):
        # at alpha = 0, increasing beta rotates points ccw about z
        betas = np.linspace(-math.pi / 2, math.pi / 2, 50)
        points = [project(LrfSample(0.0, float(b), 1.0)) for b in betas]
        for a, b in zip(points, points[1:]):
            assert a.x * b.y - a.y * b.x > 0.0


class TestSampleValidation:
    @pytest.mark.parametrize(
        "alpha,beta,range_m",
        [
            (0.0, 0.0, 0.03),
            (0.0, 0.0, 81.0),
            (0.0, math.pi / 2 + 0.01, 1.0),
            (0.0, -math.pi / 2 - 0.01, 1.0),
            (-0.01, 0.0, 1.0),
            (math.radians(26.0), 0.0, 1.0),
        ],
    )
    def test_out_of_range_rejected(self, alpha, beta, range_m):
        with pytest.raises(ValueError):
            LrfSample(alpha=alpha, beta=beta, range_m=range_m)

    def test_point_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            Point3(math.nan, 0.0, 0.0)


class TestUnproject:
    def test_boresight(self):
        s = unproject(Point3(1.0, 0.0, 0.0))
        assert (s.alpha, s.beta, s.range_m) == (0.0, 0.0, 1.0)

    def test_round_trip(self):
        for s in random_samples(10_000, seed=1):
            back = unproject(project(s))
            assert back.alpha == pytest.approx(s.alpha, abs=1e-9)
            assert back.beta == pytest.approx(s.beta, abs=1e-9)
            assert back.range_m == pytest.approx(s.range_m, rel=1e-9)

    def test_rejects_point_above_field_of_view(self):
        with pytest.raises(ValueError):
            unproject(Point3(0.0, 0.0, 1.0))

    def test_rejects_origin(self):
        with pytest.raises(ValueError):
            unproject(Point3(0.0, 0.0, 0.0))


class TestSweepToCloud:
    def test_empty_sweep(self):
        assert sweep_to_cloud([]) == ([], 0)

    def test_order_and_cardinality(self):
        sweep = [
            (0.0, [(-0.1, 1.0), (0.0, 2.0), (0.1, 3.0)]),
            (0.2, [(-0.1, 1.5), (0.0, 2.5), (0.1, 3.5)]),
        ]
        points, rejected = sweep_to_cloud(sweep)
        assert rejected == 0
        assert len(points) == 6
        ranges = [math.sqrt(p.x**2 + p.y**2 + p.z**2) for p in points]
        assert ranges == pytest.approx([1.0, 2.0, 3.0, 1.5, 2.5, 3.5])

    def test_invalid_samples_tallied_not_fatal(self):
        sweep = [(0.0, [(0.0, 1.0), (0.0, 100.0), (2.0, 1.0)])]
        points, rejected = sweep_to_cloud(sweep)
        assert len(points) == 1
        assert rejected == 2

    def test_flat_wall_oracle(self):
        # ranges generated by intersecting beams with the plane x = 5
        wall_x = 5.0
        sweep = []
        for alpha_deg in range(0, 26, 5):
            alpha = math.radians(alpha_deg)
            beams = []
            for beta_deg in range(-80, 81, 2):
                beta = math.radians(beta_deg)
                r = wall_x / (math.cos(alpha) * math.cos(beta))
                if r <= 80.0:
                    beams.append((beta, r))
            sweep.append((alpha, beams))
        points, rejected = sweep_to_cloud(sweep)
        assert rejected == 0
        assert len(points) > 100
        for p in points:
            assert abs(p.x - wall_x) <= 1e-9


class TestSweepIO:
    def test_parse_groups_by_pitch(self):
        rows = parse_sweep_text("0 0 1.0\n0 10 1.5\n5 0 2.0\n")
        assert len(rows) == 2
        assert rows[0][0] == 0.0
        assert rows[0][1] == [(0.0, 1.0), (math.radians(10.0), 1.5)]
        assert rows[1][0] == pytest.approx(math.radians(5.0))

    def test_parse_skips_blank_and_comments(self):
        rows = parse_sweep_text("# header\n\n0 0 1.0\n")
        assert len(rows) == 1

    def test_parse_rejects_malformed_line(self):
        with pytest.raises(ValueError, match="line 2"):
            parse_sweep_text("0 0 1.0\n0 0\n")
        with pytest.raises(ValueError, match="line 1"):
            parse_sweep_text("a b c\n")

    def test_file_round_trip(self, tmp_path):
        sweep_path = tmp_path / "sweep.txt"
        sweep_path.write_text("0 0 1.0\n0 45 2.0\n", encoding="utf-8")
        rows = load_sweep(sweep_path)
        points, rejected = sweep_to_cloud(rows)
        assert rejected == 0
        cloud_path = tmp_path / "cloud.txt"
        write_cloud(points, cloud_path)
        lines = cloud_path.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "1 0 0"
        x, y, z = (float(v) for v in lines[1].split())
        assert x == pytest.approx(2.0 * math.cos(math.radians(45.0)), rel=1e-8)
        assert y == pytest.approx(2.0 * math.sin(math.radians(45.0)), rel=1e-8)
        assert z == 0.0
