"""Registry for discovering scenario and parameter files."""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Any

import yaml

from compute_market.exceptions import ScenarioNotFoundError

logger = logging.getLogger(__name__)

LIBRARY_DIR = Path(__file__).parent / "library"


def file_kind(content: dict[str, Any]) -> str:
    """``game`` or ``legacy`` for parameter files, ``scenario`` otherwise."""
    for kind in ("game", "legacy"):
        if kind in content:
            return kind
    return "scenario"


class ScenarioRegistry:
    """Discover scenario and parameter files across directories.

    The built-in library comes last, so a user directory can shadow a
    built-in name.
    """

    def __init__(self, scenario_dirs: list[Path] | None = None):
        self._dirs = [*(scenario_dirs or []), LIBRARY_DIR]
        self._cache: list[dict[str, Any]] | None = None

    @property
    def scenarios(self) -> list[dict[str, Any]]:
        """All discoverable files with their metadata (cached)."""
        if self._cache is None:
            self._cache = self._discover()
        return self._cache

    def _discover(self) -> list[dict[str, Any]]:
        found = []
        seen = set()
        for directory in self._dirs:
            if not directory.exists():
                continue
            for path in sorted(list(directory.glob("*.yml")) + list(directory.glob("*.yaml"))):
                name = path.stem
                if name in seen:
                    continue
                seen.add(name)
                try:
                    content = yaml.safe_load(path.read_text(encoding="utf-8"))
                except (OSError, yaml.YAMLError) as e:
                    logger.warning("skipping unreadable scenario file %s: %s", path, e)
                    continue
                if not isinstance(content, dict):
                    continue
                meta = content.get("meta") or {}
                found.append(
                    {
                        "name": name,
                        "path": str(path),
                        "kind": file_kind(content),
                        "description": meta.get("description", ""),
                        "tags": meta.get("tags", []),
                    }
                )
        return found

    def list_names(self) -> list[str]:
        return [s["name"] for s in self.scenarios]

    def get_info(self, name: str) -> dict[str, Any] | None:
        for s in self.scenarios:
            if s["name"] == name:
                return s
        return None

    def search(self, keyword: str) -> list[dict[str, Any]]:
        """Search by keyword in name, description, or tags."""
        keyword_lower = keyword.lower()
        results = []
        for s in self.scenarios:
            if keyword_lower in s["name"].lower():
                results.append(s)
            elif keyword_lower in s.get("description", "").lower():
                results.append(s)
            elif any(keyword_lower in tag.lower() for tag in s.get("tags", [])):
                results.append(s)
        return results

    def resolve(self, name_or_path: str) -> Path:
        """A path to an existing file, or the file of a registered name."""
        path = Path(name_or_path)
        if path.is_file():
            return path
        info = self.get_info(name_or_path.removesuffix(".yml").removesuffix(".yaml"))
        if info is None:
            raise ScenarioNotFoundError(name_or_path, self.list_names())
        return Path(info["path"])

    def invalidate_cache(self) -> None:
        self._cache = None
