import datetime
import hashlib
import json
import logging
import os


class ReportStore:
    """Keeps structured reports as JSON files in a directory, with an index."""

    def __init__(self, report_dir):
        """Initializes the ReportStore and loads the index.

        Args:
            report_dir (str): Directory holding ``<name>.json`` and ``index.json``.
        """
        self.report_dir = report_dir
        self.index_path = os.path.join(report_dir, "index.json")
        os.makedirs(report_dir, exist_ok=True)
        self.index = self._load_index()

    def _load_index(self):
        """Loads the index.

        Returns:
            dict: The loaded index, or an empty one if the file is missing or unreadable.
        """
        if not os.path.exists(self.index_path):
            logging.info("No report index yet, starting fresh.")
            return {"reports": {}}
        try:
            with open(self.index_path, "r", encoding="utf-8") as f:
                content = f.read()
            if not content.strip():
                return {"reports": {}}
            return json.loads(content)
        except (OSError, json.JSONDecodeError) as e:
            logging.warning(f"Error loading report index: {e}. Starting fresh.")
            return {"reports": {}}

    def _save_index(self):
        try:
            with open(self.index_path, "w", encoding="utf-8") as f:
                json.dump(self.index, f, indent=2)
        except OSError as e:
            logging.error(f"Error saving report index: {e}")
            raise

    def _report_path(self, name):
        return os.path.join(self.report_dir, f"{name}.json")

    def save_report(self, name, payload):
        """Writes a report and records it in the index.

        Args:
            name (str): Report name, used as the file stem.
            payload (dict): JSON-serializable report.

        Returns:
            str: Path of the written file.
        """
        text = json.dumps(payload, indent=2, sort_keys=True)
        path = self._report_path(name)
        try:
            with open(path, "w", encoding="utf-8") as f:
                f.write(text + "\n")
        except OSError as e:
            logging.error(f"Error saving report {name}: {e}")
            raise
        self.index["reports"][name] = {
            "hash": hashlib.md5(text.encode("utf-8")).hexdigest(),
            "saved_at": datetime.datetime.now().isoformat(),
        }
        self._save_index()
        logging.info(f"Report {name} saved to {path}")
        return path

    def get_report(self, name):
        """Reads a stored report; None if it is not in the index or the file is gone."""
        if name not in self.index["reports"]:
            return None
        try:
            with open(self._report_path(name), "r", encoding="utf-8") as f:
                return json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            logging.warning(f"Error reading report {name}: {e}")
            return None

    def get_report_hash(self, name):
        return self.index["reports"].get(name, {}).get("hash")

    def get_all_report_names(self):
        return list(self.index["reports"].keys())

    def remove_report(self, name):
        """Deletes a report file and its index entry."""
        if name in self.index["reports"]:
            del self.index["reports"][name]
            self._save_index()
        path = self._report_path(name)
        if os.path.exists(path):
            os.remove(path)
