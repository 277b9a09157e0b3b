import json
import os
from pathlib import Path

_DEFAULT_PATH = Path(__file__).resolve().parent / "settings.json"


class Config:
    _config = None

    @classmethod
    def get_config(cls):
        if cls._config is None:
            cls.reload_config()
        return cls._config

    @classmethod
    def reload_config(cls):
        path = os.environ.get("WEYLFORMS_SETTINGS")
        if path is None:
            path = "settings.json" if os.path.exists("settings.json") else _DEFAULT_PATH
        with open(path, "r") as f:
            cls._config = json.load(f)
        precision = os.environ.get("WEYLFORMS_PRECISION")
        if precision:
            cls._config["series_precision"] = int(precision)

    @classmethod
    def get(cls, key: str, default=None):
        """Look up a dotted key such as ``verify.bounds.word_length``."""
        node = cls.get_config()
        for part in key.split("."):
            if not isinstance(node, dict) or part not in node:
                return default
            node = node[part]
        return node
