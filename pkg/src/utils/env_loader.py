"""Environment variable loader with .env file support.

Values from a project .env file are loaded into the process environment on import,
without overriding variables that are already set.
"""

from pathlib import Path

from dotenv import load_dotenv

from src.utils.config import find_project_root


def _find_env_file() -> Path | None:
    """Find .env in the current directory, then in the project root."""
    env_path = Path.cwd() / ".env"
    if env_path.exists():
        return env_path

    project_root = find_project_root()
    if project_root:
        env_path = project_root / ".env"
        if env_path.exists():
            return env_path

    return None


def load_env_file() -> Path | None:
    """Load .env into the environment, keeping variables that are already set.

    Returns:
        The file loaded, or None if there is none
    """
    env_file = _find_env_file()
    if env_file:
        load_dotenv(env_file, override=False)
    return env_file


load_env_file()
