"""Logging set-up for ramseypy.

The handlers live in ``logging.json``: one console handler and three
rotating files (info, debug, errors) that are placed in
``prms.Paths.filelogdir``.
"""

import datetime
import json
import logging
import logging.config
import os
import pathlib
import shutil
import warnings

from ramseypy.parameters import prms

logging.raiseExceptions = False

FILE_HANDLERS = ("error_file_handler", "info_file_handler", "debug_file_handler")
ACCEPTED_LEVELS = ("INFO", "DEBUG", "WARNING", "CRITICAL")
DEFAULT_JSON = pathlib.Path(__file__).resolve().parent / "logging.json"


def _level_name(level):
    if isinstance(level, int):
        level = logging.getLevelName(level)
    return level if level in ACCEPTED_LEVELS else None


def _log_dir(custom_log_dir):
    log_dir = pathlib.Path(custom_log_dir or prms.Paths.filelogdir).resolve()
    if log_dir.is_dir():
        return log_dir
    logging.warning(
        f"log directory {log_dir} does not exist, logging to {pathlib.Path.cwd()}"
    )
    return pathlib.Path.cwd()


def _keep_copy_if_big(log_file, max_size):
    if log_file.is_file() and log_file.lstat().st_size > max_size:
        stamp = datetime.datetime.now().strftime("%Y_%m_%d_%H_%M")
        shutil.copy(log_file, log_file.with_name(f"{stamp}_{log_file.name}"))


def setup_logging(
    default_json_path=None,
    default_level=None,
    env_key="LOG_CFG",
    custom_log_dir=None,
    reset_big_log=False,
    max_size=5_000_000,
):
    """Setup logging configuration.

    Args:
        default_json_path: path to the dictConfig json file.
        default_level: console level ("INFO", "DEBUG", "WARNING" or "CRITICAL").
            DEBUG also switches the console to the time-stamped format.
        env_key (str): environment variable that overrides default_json_path.
        custom_log_dir: directory for the log files (default prms.Paths.filelogdir).
        reset_big_log (bool): keep a dated copy of log files larger than max_size.
        max_size (int): size limit used by reset_big_log.
    """
    path = pathlib.Path(os.getenv(env_key) or default_json_path or DEFAULT_JSON)
    level = default_level or "CRITICAL"

    if not path.is_file():
        logging.basicConfig(level=level)
        return

    config = json.loads(path.read_text())
    log_dir = _log_dir(custom_log_dir)

    handlers = config.get("handlers", {})
    for name in FILE_HANDLERS:
        if name not in handlers:
            warnings.warn(f"logging config has no handler called {name}")
            continue
        log_file = log_dir / handlers[name]["filename"]
        if reset_big_log:
            _keep_copy_if_big(log_file, max_size)
        handlers[name]["filename"] = str(log_file)

    level_name = _level_name(level)
    if level_name is None:
        warnings.warn(
            f"unsupported console level {level!r}, use one of {', '.join(ACCEPTED_LEVELS)}"
        )
    else:
        handlers["console"]["level"] = level_name
        if level_name == "DEBUG":
            handlers["console"]["formatter"] = "stamped"

    logging.config.dictConfig(config)
    logging.captureWarnings(True)
