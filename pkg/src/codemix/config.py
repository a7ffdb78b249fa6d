"""Layered run configuration for the CLI.

Precedence, strongest first: command-line flag, environment variable
(CMF_<KEY>), config file entry, built-in default. Config files are
flat "key = value" lines with '#' comments; keys are spelled with
either '-' or '_'. Unknown file keys are rejected so typos fail loudly
instead of silently running on defaults.
"""

import os

ENV_PREFIX = "CMF_"


class ConfigError(Exception):
    pass


def normalize_key(key):
    return key.strip().replace("_", "-").lower()


def parse_config_file(path):
    """Parse "key = value" lines into a dict with normalized keys."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}: line {lineno}: expected 'key = value'")
            key, value = line.split("=", 1)
            key = normalize_key(key)
            if not key:
                raise ConfigError(f"{path}: line {lineno}: empty key")
            out[key] = value.strip()
    return out


def env_key(key):
    return ENV_PREFIX + normalize_key(key).replace("-", "_").upper()


def resolve(defaults, known, config_path=None, environ=None, cli_values=None):
    """Merge the four layers into one dict keyed by normalized key.

    `defaults` seeds the result; `known` is the full set of accepted
    keys (normalized). File keys outside it raise ConfigError. The
    environment is only consulted for known keys, and `cli_values`
    should contain only flags the user actually passed.

    Returns (resolved, origins) where origins names the winning layer
    per key: "default", "file", "env", or "cli".
    """
    environ = os.environ if environ is None else environ
    resolved = {normalize_key(k): v for k, v in defaults.items()}
    origins = {k: "default" for k in resolved}
    known = {normalize_key(k) for k in known} | set(resolved)

    if config_path:
        for key, value in parse_config_file(config_path).items():
            if key not in known:
                raise ConfigError(f"{config_path}: unknown key {key!r}")
            resolved[key] = value
            origins[key] = "file"

    for key in sorted(known):
        env_val = environ.get(env_key(key))
        if env_val is not None:
            resolved[key] = env_val
            origins[key] = "env"

    for key, value in (cli_values or {}).items():
        key = normalize_key(key)
        resolved[key] = value
        origins[key] = "cli"

    return resolved, origins
