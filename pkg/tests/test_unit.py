"""
Unit tests for grids, the pyramid, low-level information content,
PGM I/O and output digests.
"""
import itertools
import json
import math
import numpy as np
import pytest
from numpy.testing import assert_array_equal
from app.exceptions import (
    DimensionMismatchError, GridError, NoInformationContentError, OutOfBoundsError,
    PgmError, ThresholdError, UsageError,
)
from app.models.grid import ImageGrid
from app.models.lowlevel import EdgeMark, InfoMaps, StatusMap, Tier
from app.models.pyramid import Pyramid
from app.services.grid import from_array, neighborhood, new_grid
from app.services.hashing import digest_file, verify_manifest, write_manifest
from app.services.lowlevel import (
    cumulative_histogram, default_edge_threshold, edge_map, intensity_info, local_info_map,
    prominence_mark, prominence_thresholds, status_map, topology_info,
)
from app.services.pyramid import build_pyramid, expand, level_count, reduce
from app.utils.export import (
    read_residual_map, write_gray_map, write_histogram_csv, write_label_map, write_residual_map,
    write_tier_map,
)
from app.utils.pgm import read_pgm, write_pgm
from tests.conftest import fractal_noise, step_values


def _info_from_loc(i_loc) -> InfoMaps:
    """InfoMaps carrying only an I_loc map (for histogram tests)."""
    i_loc = np.asarray(i_loc, dtype=float)
    zeros = ImageGrid(np.zeros_like(i_loc))
    return InfoMaps(
        status=StatusMap(np.ones(i_loc.shape)), i_int=zeros, i_top=zeros, i_loc=ImageGrid(i_loc),
    )


_AROUND = [(-1, -1), (-1, 0), (-1, 1), (0, 1), (1, 1), (1, 0), (1, -1), (0, -1)]


def _equation_maps(rows):
    """Status, I_int, I_top and I_loc of a list-of-rows grid, pixel by pixel."""
    h, w = len(rows), len(rows[0])
    interior = [(y, x) for y in range(1, h - 1) for x in range(1, w - 1)]

    status = [[1] * w for _ in range(h)]
    for y, x in interior:
        laplacian = 8 * rows[y][x] - sum(rows[y + dy][x + dx] for dy, dx in _AROUND)
        status[y][x] = 1 if laplacian >= 0 else 0

    i_int = [[0.0] * w for _ in range(h)]
    i_top = [[0] * w for _ in range(h)]
    i_loc = [[0.0] * w for _ in range(h)]
    for y, x in interior:
        differing = [abs(rows[y][x] - rows[y + dy][x + dx]) for dy, dx in _AROUND]
        differing = [d for d in differing if d != 0]
        i_int[y][x] = sum(differing) / len(differing) if differing else 0.0
        m = sum(1 for dy, dx in _AROUND if status[y + dy][x + dx] == status[y][x])
        i_top[y][x] = m * (8 - m)
        i_loc[y][x] = i_int[y][x] * i_top[y][x]
    return status, i_int, i_top, i_loc


def _assert_matches_equations(rows):
    info = local_info_map(ImageGrid(np.array(rows, dtype=float)))
    status, i_int, i_top, i_loc = _equation_maps(rows)

    assert_array_equal(info.status.values, status)
    assert_array_equal(info.i_top.values, i_top)
    np.testing.assert_allclose(info.i_int.values, i_int, rtol=0, atol=1e-9)
    np.testing.assert_allclose(info.i_loc.values, i_loc, rtol=0, atol=1e-9)


class TestGrid:
    """Tests for grid construction and neighborhoods."""
    
    def test_new_grid_row_major(self):
        """Test that values are laid out row by row."""
        grid = new_grid(3, 2, [1, 2, 3, 4, 5, 6])
        
        assert grid.width == 3 and grid.height == 2
        assert grid.at(2, 0) == 3
        assert grid.at(0, 1) == 4
        
    def test_new_grid_wrong_count(self):
        """Test that a value count mismatch is rejected."""
        with pytest.raises(GridError):
            new_grid(3, 3, [0] * 8)
            
    def test_new_grid_non_finite_names_index(self):
        """Test that a NaN sample is reported with its index."""
        with pytest.raises(GridError) as excinfo:
            new_grid(2, 2, [0, 1, float("nan"), 3])
        
        assert excinfo.value.index == 2
        
    def test_empty_grid_rejected(self):
        """Test that empty dimensions are rejected."""
        with pytest.raises(GridError):
            new_grid(0, 3, [])
            
    def test_grid_is_read_only(self):
        """Test that grid values cannot be mutated."""
        grid = from_array(np.zeros((3, 3)))
        
        with pytest.raises(ValueError):
            grid.values[0, 0] = 1
            
    def test_neighborhood_clockwise_order(self):
        """Test neighbor order starting at the top-left."""
        grid = new_grid(3, 3, range(9))
        nbhd = neighborhood(grid, 1, 1)
        
        assert nbhd.interior
        assert nbhd.center == 4
        assert nbhd.neighbors == (0, 1, 2, 5, 8, 7, 6, 3)
        
    def test_neighborhood_border(self):
        """Test that border pixels report no neighborhood."""
        grid = new_grid(3, 3, range(9))
        nbhd = neighborhood(grid, 0, 1)
        
        assert not nbhd.interior
        assert nbhd.neighbors == ()
        
    def test_neighborhood_out_of_bounds(self):
        """Test access outside the grid."""
        grid = new_grid(3, 3, range(9))
        
        with pytest.raises(OutOfBoundsError):
            neighborhood(grid, 3, 0)


class TestPyramid:
    """Tests for Reduce, Expand and level counting."""
    
    def test_reduce_two_by_two(self):
        """Test a single block average."""
        assert_array_equal(reduce(new_grid(2, 2, [10, 20, 30, 40])).values, [[25]])
        
    def test_reduce_constant(self):
        """Test that constants stay constant."""
        reduced = reduce(ImageGrid(np.full((4, 4), 77.0)))
        
        assert_array_equal(reduced.values, np.full((2, 2), 77.0))
        
    def test_reduce_odd_dimensions_replicate(self):
        """Test replication padding on a 3x3 grid."""
        reduced = reduce(new_grid(3, 3, range(1, 10)))
        
        assert_array_equal(reduced.values, [[3, 4.5], [7.5, 9]])
        
    def test_reduce_preserves_mean(self, rng):
        """Test mean preservation on even dimensions."""
        grid = ImageGrid(rng.uniform(0, 255, (16, 24)))
        
        assert reduce(grid).values.mean() == pytest.approx(grid.values.mean(), abs=1e-9)
        
    def test_expand_one_pixel(self):
        """Test parent value copied to four children."""
        assert_array_equal(expand(new_grid(1, 1, [25]), 2, 2).values, np.full((2, 2), 25.0))
        
    def test_expand_row(self):
        """Test expanding a 2x1 grid to 4x2."""
        expanded = expand(new_grid(2, 1, [3, 9]), 4, 2)
        
        assert_array_equal(expanded.values, [[3, 3, 9, 9], [3, 3, 9, 9]])
        
    def test_expand_dimension_mismatch(self):
        """Test that a target not halving to the grid is rejected."""
        with pytest.raises(DimensionMismatchError):
            expand(new_grid(2, 2, [1, 2, 3, 4]), 6, 4)
            
    def test_expand_reduce_constant_round_trip(self):
        """Test expand(reduce(g)) == g for a constant grid."""
        grid = ImageGrid(np.full((6, 8), 13.0))
        
        assert_array_equal(expand(reduce(grid), 8, 6).values, grid.values)
        
    @pytest.mark.parametrize("width,height,target,expected", [
        (640, 480, 12, 6),
        (12, 12, 12, 1),
        (100, 100, 12, 4),
        (1, 1, 12, 1),
        (8, 8, 2, 3),
    ])
    def test_level_count(self, width, height, target, expected):
        """Test the halving stop rule."""
        assert level_count(width, height, target) == expected
        
    def test_level_count_rejects_zero(self):
        """Test invalid arguments."""
        with pytest.raises(GridError):
            level_count(10, 10, 0)
            
    def test_empty_pyramid_rejected(self):
        """Test that a pyramid needs at least one level."""
        with pytest.raises(GridError):
            Pyramid(levels=(), top_target=12)
            
    def test_build_pyramid_dimensions(self):
        """Test that every level ceil-halves the one below."""
        pyramid = build_pyramid(ImageGrid(np.zeros((480, 640))), 12)
        
        assert pyramid.dims == [(640, 480), (320, 240), (160, 120), (80, 60), (40, 30), (20, 15)]
        
    def test_build_pyramid_single_pixel(self):
        """Test that a 1x1 input is its own pyramid."""
        assert len(build_pyramid(new_grid(1, 1, [5]), 12)) == 1
        
    def test_build_pyramid_levels_are_reductions(self, rng):
        """Test level L+1 == reduce(level L)."""
        pyramid = build_pyramid(ImageGrid(rng.uniform(0, 255, (37, 50))), 4)
        
        for lower, upper in zip(pyramid.levels, pyramid.levels[1:]):
            assert_array_equal(reduce(lower).values, upper.values)


class TestLowLevel:
    """Tests for status, I_int, I_top and I_loc."""
    
    def test_status_of_single_neighborhood(self):
        """Test the Laplacian-sign status rule."""
        grid = new_grid(3, 3, [0, 0, 0, 0, 10, 0, 0, 0, 0])
        status = status_map(grid)
        
        assert status.values[1, 1] == 1
        assert status.values[0, 0] == 1
        assert status_map(new_grid(3, 3, [10] * 4 + [0] + [10] * 4)).values[1, 1] == 0
        
    def test_intensity_info_ignores_equal_neighbors(self):
        """Test I_int averages only the differing neighbors."""
        grid = new_grid(3, 3, [10, 10, 10, 10, 10, 20, 30, 10, 10])
        
        assert intensity_info(neighborhood(grid, 1, 1)) == 15.0
        assert intensity_info(neighborhood(new_grid(3, 3, [7] * 9), 1, 1)) == 0.0
        
    def test_intensity_info_border_rejected(self):
        """Test that a border neighborhood has no I_int."""
        with pytest.raises(GridError):
            intensity_info(neighborhood(new_grid(3, 3, range(9)), 0, 0))
            
    def test_topology_info_exhaustive(self):
        """Test m(8-m) over all 2^9 status blocks."""
        for bits in itertools.product((0, 1), repeat=9):
            block = np.array(bits).reshape(3, 3)
            m = sum(1 for i, b in enumerate(bits) if i != 4 and b == bits[4])
            
            assert topology_info(block) == m * (8 - m)
            assert topology_info(block) in (0, 7, 12, 15, 16)
            assert (topology_info(block) == 16) == (m == 4)
            
    def test_local_info_matches_equations_on_random_grids(self, rng):
        """Test all four maps against a direct evaluation on 10^4 grids of 3x3 to 6x6."""
        for _ in range(10_000):
            h, w = rng.integers(3, 7, size=2)
            _assert_matches_equations(rng.integers(0, 256, (h, w)).tolist())

    def test_local_info_matches_equations_on_three_level_grids(self, rng):
        """Test every 3x3 grid over {0, 128, 255} and random 3x4 to 4x4 ones."""
        levels = (0, 128, 255)
        for cells in itertools.product(levels, repeat=9):
            _assert_matches_equations([list(cells[0:3]), list(cells[3:6]), list(cells[6:9])])

        for h, w in [(3, 4), (4, 3), (4, 4)]:
            for _ in range(1_000):
                _assert_matches_equations(rng.choice(levels, size=(h, w)).tolist())

    def test_single_bright_pixel(self):
        """Test a lone 255 in a 5x5 zero field: no I_loc at the pixel, some on each neighbor."""
        values = np.zeros((5, 5))
        values[2, 2] = 255
        i_loc = local_info_map(ImageGrid(values)).i_loc.values

        assert i_loc[2, 2] == 0
        for dy, dx in _AROUND:
            assert i_loc[2 + dy, 2 + dx] > 0
        assert np.count_nonzero(i_loc) == 8

    def test_step_information_beside_the_step(self):
        """Test that a vertical step carries I_loc only in the two columns around it."""
        i_loc = local_info_map(ImageGrid(step_values(width=16, height=10, at=8))).i_loc.values

        assert np.all(i_loc[1:-1, 7] > 0)
        assert np.all(i_loc[1:-1, 8] > 0)
        assert np.count_nonzero(i_loc) == 2 * 8

    def test_border_pixels_are_zero(self, rng):
        """Test that border pixels carry no information."""
        info = local_info_map(ImageGrid(rng.integers(0, 256, (9, 11)).astype(float)))
        
        for grid in (info.i_int, info.i_top, info.i_loc):
            values = grid.values
            assert not values[0].any() and not values[-1].any()
            assert not values[:, 0].any() and not values[:, -1].any()
        assert info.status.values[0].all()
        
    def test_constant_grid_has_no_information(self):
        """Test I_loc == 0 everywhere on a constant grid."""
        info = local_info_map(ImageGrid(np.full((5, 5), 42.0)))
        
        assert info.total == 0
        
    def test_local_info_needs_three_by_three(self):
        """Test grids too small for a neighborhood."""
        with pytest.raises(GridError):
            local_info_map(new_grid(2, 5, range(10)))
            
    def test_brightness_shift_invariance(self, rng):
        """Test that adding a constant changes none of the four maps over 100 images."""
        for _ in range(100):
            values = fractal_noise(rng, size=32)
            base = local_info_map(ImageGrid(values))
            shifted = local_info_map(ImageGrid(values + int(rng.integers(-200, 200))))

            assert_array_equal(base.status.values, shifted.status.values)
            assert_array_equal(base.i_int.values, shifted.i_int.values)
            assert_array_equal(base.i_top.values, shifted.i_top.values)
            assert_array_equal(base.i_loc.values, shifted.i_loc.values)
        
    @pytest.mark.parametrize("factor", [2, 4])
    def test_contrast_scale_covariance(self, rng, factor):
        """Test that scaling intensities scales I_int and keeps tiers."""
        values = fractal_noise(rng, size=32)
        base = local_info_map(ImageGrid(values))
        scaled = local_info_map(ImageGrid(values * factor))
        
        assert_array_equal(base.status.values, scaled.status.values)
        assert_array_equal(base.i_top.values, scaled.i_top.values)
        assert_array_equal(base.i_int.values * factor, scaled.i_int.values)
        
        base_tiers = prominence_mark(base, prominence_thresholds(cumulative_histogram(base)))
        scaled_tiers = prominence_mark(scaled, prominence_thresholds(cumulative_histogram(scaled)))
        assert_array_equal(base_tiers.values, scaled_tiers.values)
        
    @pytest.mark.parametrize("factor", [0.5, 3, 7.25])
    def test_scaling_on_many_images(self, rng, factor):
        """Test status and I_top invariance and I_int, I_loc covariance over 100 images."""
        for _ in range(100):
            values = fractal_noise(rng, size=32)
            base = local_info_map(ImageGrid(values))
            scaled = local_info_map(ImageGrid(values * factor))
            
            assert_array_equal(base.status.values, scaled.status.values)
            assert_array_equal(base.i_top.values, scaled.i_top.values)
            np.testing.assert_allclose(scaled.i_int.values, base.i_int.values * factor, rtol=1e-9, atol=1e-9)
            np.testing.assert_allclose(scaled.i_loc.values, base.i_loc.values * factor, rtol=1e-9, atol=1e-9)


class TestHistogram:
    """Tests for the cumulative histogram and prominence thresholds."""
    
    def test_worked_example(self):
        """Test bins of {1, 1, 2, 4} over six unit bins."""
        hist = cumulative_histogram(_info_from_loc([[1, 1], [2, 4]]), bin_count=6)
        
        assert hist.bin_width == 1.0
        assert_array_equal(hist.lower_bounds, [0, 1, 2, 3, 4, 5])
        assert_array_equal(hist.bins, [8, 8, 6, 4, 4, 0])
        assert_array_equal(hist.normalized, [1, 1, 0.75, 0.5, 0.5, 0])
        
    def test_worked_example_thresholds(self):
        """Test thresholds for the default fractions."""
        hist = cumulative_histogram(_info_from_loc([[1, 1], [2, 4]]), bin_count=6)
        
        assert prominence_thresholds(hist, [0.50, 0.70, 0.85]) == [4.0, 2.0, 1.0]
        
    def test_single_value(self):
        """Test a map whose information sits in one pixel."""
        hist = cumulative_histogram(_info_from_loc([[0, 0], [0, 12]]), bin_count=4)
        
        assert hist.bin_width == 2.25
        assert_array_equal(hist.bins, [12, 12, 12, 12])
        
    def test_all_zero_rejected(self):
        """Test the degenerate histogram."""
        with pytest.raises(NoInformationContentError) as excinfo:
            cumulative_histogram(_info_from_loc(np.zeros((3, 3))))
        
        assert excinfo.value.detail == "no information content"
        
    def test_bin_count_too_small(self):
        """Test bin_count below two."""
        with pytest.raises(ThresholdError):
            cumulative_histogram(_info_from_loc([[1, 2]]), bin_count=1)
            
    def test_histogram_properties_on_random_maps(self, rng):
        """Test monotone bins, unit first bin and total mass on random images."""
        for _ in range(50):
            info = local_info_map(ImageGrid(fractal_noise(rng, size=32)))
            hist = cumulative_histogram(info)
            
            assert np.all(np.diff(hist.bins) <= 0)
            assert hist.normalized[0] == 1.0
            assert hist.bins[0] == info.total
            
            t50, t70, t85 = prominence_thresholds(hist)
            assert t50 >= t70 >= t85 >= 0
            
    def test_first_bin_is_exact_total(self, rng):
        """Test bins[0] == sum of I_loc to the last bit on non-square random images."""
        for _ in range(200):
            info = local_info_map(ImageGrid(rng.uniform(0, 255, (29, 31))))
            hist = cumulative_histogram(info)

            assert hist.bins[0] == math.fsum(info.i_loc.values.ravel().tolist())
            assert hist.bins[0] == info.total
            assert np.all(np.diff(hist.bins) <= 0)

    def test_fraction_out_of_range(self):
        """Test fractions outside (0, 1)."""
        hist = cumulative_histogram(_info_from_loc([[1, 2]]), bin_count=4)
        
        with pytest.raises(ThresholdError):
            prominence_thresholds(hist, [0.5, 1.0])


class TestTiersAndEdges:
    """Tests for prominence marking and the double-line edge map."""
    
    def test_tier_ordering(self):
        """Test marking against hand-picked thresholds."""
        info = _info_from_loc([[0, 1, 2], [3, 4, 5]])
        tiers = prominence_mark(info, [4, 2, 1])
        
        assert_array_equal(tiers.values, [
            [Tier.NONE, Tier.TIER85, Tier.TIER70],
            [Tier.TIER70, Tier.TIER50, Tier.TIER50],
        ])
        
    def test_zero_information_never_marked(self):
        """Test that zero thresholds still leave empty pixels unmarked."""
        tiers = prominence_mark(_info_from_loc([[0, 1]]), [0, 0, 0])
        
        assert tiers.values[0, 0] == Tier.NONE
        assert tiers.values[0, 1] == Tier.TIER50
        
    def test_unordered_thresholds_rejected(self):
        """Test t50 < t70."""
        with pytest.raises(ThresholdError):
            prominence_mark(_info_from_loc([[1]]), [1, 2, 0.5])
            
    def test_tier_coverage_bounded(self, rng):
        """Test that the top tier carries about half of the total information."""
        for _ in range(50):
            info = local_info_map(ImageGrid(fractal_noise(rng, size=32)))
            hist = cumulative_histogram(info)
            tiers = prominence_mark(info, prominence_thresholds(hist))
            
            top = info.i_loc.values[tiers.values == Tier.TIER50].sum()
            assert top / info.total >= 0.5 - 1e-9
            assert top / info.total <= 0.5 + hist.bin_masses.max() + 1e-9
            
    @pytest.mark.parametrize("turns", [0, 1, 2, 3])
    def test_edge_sides_follow_step(self, turns):
        """Test that the dark side of a 64|192 step is low and the bright side high."""
        values = np.rot90(step_values(8, 8, at=4), turns)
        info = local_info_map(ImageGrid(values))
        edges = edge_map(info, info.status, threshold=100.0)
        
        marked = edges.values != EdgeMark.NONE
        assert marked.any()
        assert np.all(edges.values[marked & (values == 64)] == EdgeMark.LOW_SIDE)
        assert np.all(edges.values[marked & (values == 192)] == EdgeMark.HIGH_SIDE)
        assert edges.count(EdgeMark.LOW_SIDE) == edges.count(EdgeMark.HIGH_SIDE) == 6
        
    def test_edge_threshold_must_be_positive(self):
        """Test a zero edge threshold."""
        info = local_info_map(ImageGrid(step_values(8, 8, at=4)))
        
        with pytest.raises(ThresholdError):
            edge_map(info, info.status, 0.0)
            
    def test_default_edge_threshold_positive(self):
        """Test that the default threshold is never below one bin."""
        hist = cumulative_histogram(_info_from_loc([[0, 0], [0, 12]]), bin_count=4)
        
        assert default_edge_threshold(hist, [0.0, 0.0, 0.0]) == hist.bin_width


class TestPgm:
    """Tests for PGM reading and writing."""
    
    def test_read_binary(self, tmp_path):
        """Test a 2x2 P5 payload."""
        path = tmp_path / "a.pgm"
        path.write_bytes(b"P5\n2 2\n255\n" + bytes([0, 85, 170, 255]))
        
        assert_array_equal(read_pgm(path).values, [[0, 85], [170, 255]])
        
    def test_read_ascii_with_comments(self, tmp_path):
        """Test that header and payload comments are skipped."""
        path = tmp_path / "a.pgm"
        path.write_bytes(b"P2\n# made by hand\n3 1 # size\n255\n1 2\n# mid\n3\n")
        
        assert_array_equal(read_pgm(path).values, [[1, 2, 3]])
        
    def test_truncated_payload(self, tmp_path):
        """Test that a short payload fails with its byte offset."""
        path = tmp_path / "a.pgm"
        path.write_bytes(b"P5\n2 2\n255\n" + bytes([1, 2, 3]))
        
        with pytest.raises(PgmError) as excinfo:
            read_pgm(path)
        
        assert excinfo.value.offset == 14
        assert "byte offset 14" in excinfo.value.detail
        
    def test_bad_magic(self, tmp_path):
        """Test a non-PGM file."""
        path = tmp_path / "a.pgm"
        path.write_bytes(b"P6\n1 1\n255\n\x00\x00\x00")
        
        with pytest.raises(PgmError) as excinfo:
            read_pgm(path)
        
        assert excinfo.value.offset == 0
        
    def test_maxval_too_large(self, tmp_path):
        """Test 16-bit input rejected for images."""
        path = tmp_path / "a.pgm"
        path.write_bytes(b"P5\n1 1\n65535\n\x00\x01")
        
        with pytest.raises(PgmError):
            read_pgm(path)
        assert read_pgm(path, allow_16bit=True).values[0, 0] == 1
        
    @pytest.mark.parametrize("encoding", ["P2", "P5"])
    def test_integer_round_trip(self, tmp_path, rng, encoding):
        """Test bit-exact write/read of integer grids."""
        values = rng.integers(0, 256, (5, 7))
        path = write_pgm(values, tmp_path / "a.pgm", encoding=encoding)
        
        assert_array_equal(read_pgm(path).values, values)
        
    def test_real_values_round_half_up(self, tmp_path):
        """Test rounding and clamping of gray maps."""
        path = write_pgm(np.array([[0.5, 1.49, -3.0, 300.0]]), tmp_path / "a.pgm")
        
        assert_array_equal(read_pgm(path).values, [[1, 1, 0, 255]])
        
    def test_many_labels_written_16_bit(self, tmp_path):
        """Test that 300 labels force maxval 65535."""
        labels = np.arange(1, 301).reshape(15, 20)
        path = write_label_map(labels, tmp_path / "labels.pgm")
        
        assert path.read_bytes().startswith(b"P5\n20 15\n65535\n")
        assert_array_equal(read_pgm(path, allow_16bit=True).values, labels)
        
    def test_gray_map_bit_depth(self, tmp_path):
        """Test that gray maps stay 8-bit up to 255 and switch to 16-bit above."""
        small = write_gray_map(np.array([[0.0, 254.6, -2.0]]), tmp_path / "small.pgm")
        large = write_gray_map(np.array([[0.0, 254.6, 4080.0]]), tmp_path / "large.pgm")
        
        assert small.read_bytes().startswith(b"P5\n3 1\n255\n")
        assert_array_equal(read_pgm(small).values, [[0, 255, 0]])
        assert large.read_bytes().startswith(b"P5\n3 1\n65535\n")
        assert_array_equal(read_pgm(large, allow_16bit=True).values, [[0, 255, 4080]])
        
    def test_tier_palette(self, tmp_path):
        """Test the fixed tier gray levels."""
        info = _info_from_loc([[0, 1, 2, 4]])
        path = write_tier_map(prominence_mark(info, [4, 2, 1]), tmp_path / "tiers.pgm")
        
        assert_array_equal(read_pgm(path).values, [[255, 170, 85, 0]])
        
    def test_residual_offset(self, tmp_path):
        """Test signed residuals survive the 16-bit offset encoding."""
        residual = np.array([[-255, 0], [1, 255]])
        path = write_residual_map(residual, tmp_path / "residual.pgm")
        
        assert_array_equal(read_residual_map(path), residual)
        
    def test_histogram_csv(self, tmp_path):
        """Test CSV header and 9-digit formatting."""
        hist = cumulative_histogram(_info_from_loc([[1, 1], [2, 4]]), bin_count=6)
        lines = write_histogram_csv(hist, tmp_path / "h.csv").read_text().splitlines()
        
        assert lines[0] == "lower_bound,sum,normalized"
        assert lines[1] == "0,8,1"
        assert lines[3] == "2,6,0.75"
        assert len(lines) == 7


class TestHashing:
    """Tests for output digests and the manifest."""
    
    def test_digest_deterministic(self, tmp_path):
        """Test that equal contents hash equally."""
        a = tmp_path / "a.bin"
        b = tmp_path / "b.bin"
        a.write_bytes(b"pyramid")
        b.write_bytes(b"pyramid")
        
        assert digest_file(a) == digest_file(b)
        assert len(digest_file(a)) == 64
        
    def test_manifest_lists_relative_names(self, tmp_path):
        """Test manifest contents."""
        (tmp_path / "x.pgm").write_bytes(b"x")
        manifest = write_manifest(tmp_path, [tmp_path / "x.pgm"])
        
        entries = json.loads(manifest.read_text())["files"]
        assert list(entries) == ["x.pgm"]
        
    def test_verify_manifest_detects_change(self, tmp_path):
        """Test that a modified file fails verification."""
        path = tmp_path / "x.pgm"
        path.write_bytes(b"x")
        write_manifest(tmp_path, [path])
        
        assert verify_manifest(tmp_path) == {"x.pgm": True}
        path.write_bytes(b"y")
        assert verify_manifest(tmp_path) == {"x.pgm": False}


class TestRunConfig:
    """Tests for run configuration validation."""
    
    def test_defaults(self):
        """Test default values."""
        from app.schemas import RunConfig
        
        config = RunConfig()
        assert config.top_target == 12
        assert config.fractions == [0.50, 0.70, 0.85]
        
    def test_flags_override(self):
        """Test that parsed flags override defaults."""
        from app.dependencies import get_run_config
        from app.main import create_parser
        
        args = create_parser().parse_args(["segment", "in.pgm", "--top-size", "8", "--fractions", "0.4,0.6,0.9"])
        config = get_run_config(args)
        
        assert config.top_target == 8
        assert config.fractions == [0.4, 0.6, 0.9]
        assert config.similarity_delta == 16.0
        
    @pytest.mark.parametrize("fractions", ["0.85,0.7,0.5", "0.5,0.7", "0.5,0.7,1.0", "a,b,c"])
    def test_bad_fractions(self, fractions):
        """Test that invalid fractions are a usage error."""
        from app.dependencies import get_run_config
        from app.main import create_parser
        
        args = create_parser().parse_args(["tiers", "in.pgm", "--fractions", fractions])
        
        with pytest.raises(UsageError):
            get_run_config(args)
