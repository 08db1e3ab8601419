"""
Unit tests for report_store.py module.
"""
import hashlib
import json
import os

import pytest

from report_store import ReportStore


@pytest.fixture
def sample_report():
    return {"command": "suite", "seed": 7, "verified": 3, "total": 3}


class TestReportStore:
    """Test cases for ReportStore class."""

    def test_init_creates_empty_index(self, temp_dir):
        """Test that a fresh directory starts with an empty index."""
        store = ReportStore(os.path.join(temp_dir, "reports"))
        assert store.index == {"reports": {}}
        assert os.path.isdir(store.report_dir)

    def test_init_handles_corrupted_index(self, temp_dir):
        """Test that an unreadable index is replaced by an empty one."""
        with open(os.path.join(temp_dir, "index.json"), "w", encoding="utf-8") as f:
            f.write("invalid json content {")
        assert ReportStore(temp_dir).index == {"reports": {}}

    def test_init_handles_empty_index(self, temp_dir):
        """Test that an empty index file is treated as missing."""
        open(os.path.join(temp_dir, "index.json"), "w").close()
        assert ReportStore(temp_dir).index == {"reports": {}}

    def test_save_and_get_report(self, temp_dir, sample_report):
        """Test that a saved report reads back and is indexed."""
        store = ReportStore(temp_dir)
        path = store.save_report("suite-q-7", sample_report)
        assert path == os.path.join(temp_dir, "suite-q-7.json")
        assert store.get_report("suite-q-7") == sample_report
        assert store.get_all_report_names() == ["suite-q-7"]

    def test_report_hash(self, temp_dir, sample_report):
        """Test that the index records the md5 of the written JSON."""
        store = ReportStore(temp_dir)
        store.save_report("r", sample_report)
        expected = hashlib.md5(json.dumps(sample_report, indent=2, sort_keys=True).encode("utf-8")).hexdigest()
        assert store.get_report_hash("r") == expected
        assert store.get_report_hash("missing") is None

    def test_index_persists(self, temp_dir, sample_report):
        """Test that a second store sees the reports of the first."""
        ReportStore(temp_dir).save_report("r", sample_report)
        reopened = ReportStore(temp_dir)
        assert reopened.get_all_report_names() == ["r"]
        assert reopened.get_report("r") == sample_report

    def test_get_unknown_report(self, temp_dir):
        """Test that an unindexed name gives None."""
        assert ReportStore(temp_dir).get_report("nothing") is None

    def test_get_report_with_missing_file(self, temp_dir, sample_report):
        """Test that a deleted file gives None instead of raising."""
        store = ReportStore(temp_dir)
        path = store.save_report("r", sample_report)
        os.remove(path)
        assert store.get_report("r") is None

    def test_remove_report(self, temp_dir, sample_report):
        """Test that removal deletes the file and the index entry."""
        store = ReportStore(temp_dir)
        path = store.save_report("r", sample_report)
        store.remove_report("r")
        assert not os.path.exists(path)
        assert store.get_all_report_names() == []

    def test_save_report_write_error(self, temp_dir, sample_report, mocker):
        """Test that write errors propagate and are logged."""
        store = ReportStore(temp_dir)
        mock_logging = mocker.patch("report_store.logging")
        mocker.patch("builtins.open", side_effect=OSError("disk full"))
        with pytest.raises(OSError):
            store.save_report("r", sample_report)
        mock_logging.error.assert_called_once()
        assert store.get_all_report_names() == []
