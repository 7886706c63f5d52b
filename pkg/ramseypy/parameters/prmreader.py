# -*- coding: utf-8 -*-
"""Reading and writing the ramseypy prm (configuration) file.

The prm file is a yaml document with one mapping per section of
:mod:`ramseypy.parameters.prms`. Reading it updates the sections in place,
so every ``from_prms`` constructor in the package picks up the user's
bath, quadrature and protocol defaults.
"""

import getpass
import logging
import math
import os
import pathlib

import box
from ruamel.yaml import YAML
from ruamel.yaml.error import YAMLError

from ramseypy.parameters import prms
from ramseypy.exceptions import ConfigFileNotRead, ConfigFileNotWritten

DEFAULT_FILENAME_START = ".ramseypy_prms_"
DEFAULT_FILENAME_END = ".conf"

DEFAULT_FILENAME = DEFAULT_FILENAME_START + "default" + DEFAULT_FILENAME_END

SAVEABLE_SECTIONS = [
    "Paths",
    "Quadrature",
    "Model",
    "Protocol",
    "Estimation",
    "Randomized",
    "Enumeration",
    "Output",
]


def _yaml():
    yaml = YAML()
    yaml.allow_unicode = True
    yaml.default_flow_style = False
    yaml.explicit_start = True
    yaml.explicit_end = True
    return yaml


def get_user_name():
    """get the user name of the current user (cross platform)"""
    return getpass.getuser()


def create_custom_init_filename(user_name=None):
    """creates a custom prms filename"""
    return f"{DEFAULT_FILENAME_START}{user_name or get_user_name()}{DEFAULT_FILENAME_END}"


def get_user_dir():
    """the directory holding the user's prm file (home, or documents on windows)"""
    user_dir = pathlib.Path.home().resolve()
    documents = user_dir / "documents"
    if os.name == "nt" and documents.is_dir():
        return documents
    return user_dir


def get_user_dir_and_dst(init_filename=None):
    """gets the name of the user directory and full prm filepath"""
    user_dir = get_user_dir()
    return user_dir, user_dir / (init_filename or create_custom_init_filename())


def _coerce(default, value):
    # yaml gives ints for "1" where the section holds floats
    if isinstance(default, float) and isinstance(value, int) and not isinstance(value, bool):
        return float(value)
    if isinstance(default, int) and not isinstance(default, bool):
        if isinstance(value, float) and math.isfinite(value) and value.is_integer():
            return int(value)
    return value


def _update_prms(config_dict):
    """update the prms sections from a (section -> mapping) dictionary"""
    if not config_dict:
        return
    logging.debug("updating prms with sections %s" % list(config_dict))
    for section, values in config_dict.items():
        if section not in SAVEABLE_SECTIONS:
            logging.info("\n  not-supported prm: %s" % section)
            continue
        target = getattr(prms, section)
        for key, value in (values or {}).items():
            if key not in target:
                logging.info("\n  not-supported prm: %s.%s" % (section, key))
                continue
            target[key] = _coerce(target[key], value)


def _pack_prms():
    """collects the 'save-able' parameter sections (listed in
    SAVEABLE_SECTIONS) into a plain dictionary"""
    return {section: getattr(prms, section).to_dict() for section in SAVEABLE_SECTIONS}


def _write_prm_file(file_name=None):
    file_name = pathlib.Path(file_name or get_user_dir_and_dst()[1])
    logging.debug("saving configuration to %s" % file_name)
    try:
        with open(file_name, "w") as config_file:
            _yaml().dump(_pack_prms(), config_file)
    except (YAMLError, OSError) as e:
        raise ConfigFileNotWritten(str(file_name)) from e


def _read_prm_file_without_updating(prm_filename):
    """read the prm file but do not update the params"""
    logging.debug("reading prm file %s" % prm_filename)
    with open(prm_filename, "r") as config_file:
        try:
            return _yaml().load(config_file)
        except YAMLError as e:
            raise ConfigFileNotRead(str(prm_filename)) from e


def _read_prm_file(prm_filename):
    """read the prm file and update prms"""
    _update_prms(_read_prm_file_without_updating(prm_filename))


def _get_prm_file(file_name=None):
    """returns the name of the prm file to read.

    A given file name wins if it exists. Otherwise the user directory is
    searched for the current user's file, then any other
    ``.ramseypy_prms*.conf``, then the default file. The default name is
    returned when nothing is found (reading it raises FileNotFoundError).
    """
    if file_name is not None:
        if os.path.isfile(file_name):
            return file_name
        logging.info("Could not find the prm-file %s" % file_name)

    user_dir, own_file = get_user_dir_and_dst()
    if own_file.is_file():
        return str(own_file)

    default_file = user_dir / prms._prm_default_name
    for candidate in sorted(user_dir.glob(prms._prm_globtxt)):
        if candidate.name != default_file.name:
            return str(candidate)
    return str(default_file)


def info():
    """this function will show only the 'box'-type
    attributes and their content in the ramseypy.prms module"""
    print(f"prm file: {_get_prm_file()}")

    for section, values in vars(prms).items():
        if not isinstance(values, box.Box):
            continue
        print()
        print(80 * "=")
        print(f"prms.{section}:")
        print(80 * "-")
        for key, value in values.items():
            print(f"prms.{section}.{key} = {value}")
        print(80 * "=")
