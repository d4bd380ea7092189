"""
Unit tests for the utilities module.
"""

import pytest

from meshsim.utilities import Stream, clean_filename, deep_merge, format_duration, make_rng


@pytest.mark.unit
class TestMakeRng:
    """Tests for seeded random streams."""

    def test_same_keys_same_stream(self):
        """Test that a (seed, keys) pair always yields the same draws."""
        first = make_rng(7, Stream.BACKOFF, 3).integers(0, 1000, size=20)
        second = make_rng(7, Stream.BACKOFF, 3).integers(0, 1000, size=20)

        assert first.tolist() == second.tolist()

    def test_distinct_keys_distinct_streams(self):
        """Test that purpose and node keys separate streams."""
        base = make_rng(7, Stream.BACKOFF, 3).integers(0, 1 << 30, size=8).tolist()

        assert make_rng(7, Stream.BACKOFF, 4).integers(0, 1 << 30, size=8).tolist() != base
        assert make_rng(7, Stream.NONCE, 3).integers(0, 1 << 30, size=8).tolist() != base
        assert make_rng(8, Stream.BACKOFF, 3).integers(0, 1 << 30, size=8).tolist() != base

    def test_large_seed_accepted(self):
        """Test that seeds beyond 32 bits are folded, not rejected."""
        rng = make_rng(2 ** 40 + 5, Stream.PUBLISH)

        assert 0 <= rng.random() < 1


@pytest.mark.unit
class TestCleanFilename:
    """Tests for filename cleaning."""

    def test_clean_invalid_characters(self):
        """Test cleaning invalid characters."""
        assert clean_filename("ndn/line:one-to-many") == "ndn_line_one-to-many"

    def test_whitespace_replaced(self):
        """Test that spaces inside names are replaced."""
        assert clean_filename("mesh line run") == "mesh_line_run"

    def test_strip_dots_and_spaces(self):
        """Test stripping leading/trailing dots and spaces."""
        assert clean_filename("...scenario...") == "scenario"

    def test_empty_filename_handling(self):
        """Test handling of empty filename."""
        assert clean_filename("") == "unnamed"

    def test_custom_replacement(self):
        """Test custom replacement character."""
        assert clean_filename("a<>b", replacement="-") == "a--b"


@pytest.mark.unit
class TestDeepMerge:
    """Tests for nested dictionary merging."""

    def test_nested_sections_merge(self):
        base = {"nodes": 10, "radio": {"loss_mesh_adv": 0.0, "scan_window_us": 30000}}
        overrides = {"radio": {"loss_mesh_adv": 0.1}, "seed": 4}

        merged = deep_merge(base, overrides)

        assert merged == {
            "nodes": 10,
            "seed": 4,
            "radio": {"loss_mesh_adv": 0.1, "scan_window_us": 30000},
        }

    def test_inputs_not_mutated(self):
        base = {"radio": {"loss_mesh_adv": 0.0}}
        overrides = {"radio": {"loss_mesh_adv": 0.2}}

        merged = deep_merge(base, overrides)
        merged["radio"]["loss_mesh_adv"] = 0.9

        assert base == {"radio": {"loss_mesh_adv": 0.0}}
        assert overrides == {"radio": {"loss_mesh_adv": 0.2}}

    def test_scalar_replaces_dict(self):
        assert deep_merge({"a": {"b": 1}}, {"a": 3}) == {"a": 3}


@pytest.mark.unit
class TestFormatDuration:
    """Tests for duration formatting."""

    def test_duration_formatting(self):
        test_cases = [
            (0, "0.0 us"),
            (320, "320.0 us"),
            (1_500, "1.5 ms"),
            (30_000, "30.0 ms"),
            (10_000_000, "10.0 s"),
        ]

        for microseconds, expected in test_cases:
            assert format_duration(microseconds) == expected
