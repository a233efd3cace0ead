"""Configuration file discovery."""

from pathlib import Path


def get_config_path() -> Path:
    """Get path to the default run config.

    Looks for config.json in:
    1. Current working directory
    2. config/ in the current working directory
    3. config/ in the project root (where pyproject.toml is)

    Returns:
        Path to config.json (config/config.json under the project root if none exists).
    """
    current_dir = Path.cwd()
    for candidate in (current_dir / "config.json", current_dir / "config" / "config.json"):
        if candidate.exists():
            return candidate

    project_root = find_project_root()
    if project_root:
        config_path = project_root / "config" / "config.json"
        if config_path.exists():
            return config_path

    return (project_root or current_dir) / "config" / "config.json"


def find_project_root() -> Path | None:
    """Find project root by looking for pyproject.toml."""
    current = Path.cwd()
    while current != current.parent:
        if (current / "pyproject.toml").exists():
            return current
        current = current.parent
    return None
