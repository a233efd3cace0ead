"""Run configuration loading with located diagnostics."""

import json
from pathlib import Path

from pydantic import ValidationError

from src.config.run_config import RunConfig
from src.domain.errors import E_CONFIG_INVALID, E_CONFIG_MISSING_FILE, E_CONFIG_PARSE, ConfigError
from src.utils.config import get_config_path
from src.utils.logging_config import get_logger

logger = get_logger("ecosim.config")


def load_run_config(path: Path | None = None) -> RunConfig:
    """Load and validate a run configuration.

    Relative workload paths resolve against the configuration file's directory, and the
    referenced file must exist.

    Args:
        path: Config file; None looks up config.json (see get_config_path)

    Returns:
        Validated RunConfig

    Raises:
        ConfigError: Missing file (E_CONFIG_MISSING_FILE), malformed JSON with line:col
            (E_CONFIG_PARSE) or invalid fields with dotted locations (E_CONFIG_INVALID)
    """
    config_path = path or get_config_path()
    try:
        text = config_path.read_text()
    except OSError as e:
        raise ConfigError(
            f"cannot read config {config_path}",
            E_CONFIG_MISSING_FILE,
            [(str(config_path), str(e))],
        ) from e

    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(
            f"config {config_path} is not valid JSON",
            E_CONFIG_PARSE,
            [(f"{e.lineno}:{e.colno}", e.msg)],
        ) from e

    try:
        config = RunConfig.model_validate(raw)
    except ValidationError as e:
        diagnostics = [
            (".".join(str(part) for part in err["loc"]) or "<root>", err["msg"]) for err in e.errors()
        ]
        raise ConfigError(f"config {config_path} is invalid", E_CONFIG_INVALID, diagnostics) from e

    workload_path = config.workload.path
    if workload_path is not None:
        if not workload_path.is_absolute():
            workload_path = (config_path.parent / workload_path).resolve()
        if not workload_path.exists():
            raise ConfigError(
                f"workload file {workload_path} not found",
                E_CONFIG_MISSING_FILE,
                [("workload.path", str(workload_path))],
            )
        config = config.model_copy(
            update={"workload": config.workload.model_copy(update={"path": workload_path})}
        )

    logger.debug("Config loaded", extra={"context": {"path": str(config_path)}})
    return config
