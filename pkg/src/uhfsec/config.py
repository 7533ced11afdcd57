"""YAML experiment configs flattened onto CLI option names.

A config names a ``command`` (e.g. ``"wiretap eval"``), an optional
``master_seed`` and option values, either flat or grouped in blocks::

    command: wiretap eval
    master_seed: 7
    code: hamming74
    uhf: {l: 4, k: 2}
    channels: {T: noiseless, W: "bsc:0.3"}
    eps: [0, 0.01]

Errors carry the offending field and its line number.
"""

from pathlib import Path

import yaml

from uhfsec.errors import ConfigError

# block name -> {key inside block: flat option name}
BLOCKS = {
    "uhf": {"kind": "kind", "l": "l", "k": "k"},
    "channels": {"T": "T", "W": "W", "V": "V"},
    "protocol": None,  # keys pass through unchanged
    "budgets": {"enumeration": "budget"},
}

TOP_LEVEL = {"command", "master_seed", "out", "timing"}


def _err(msg, field, node):
    raise ConfigError(msg, field=field, line=node.start_mark.line + 1 if node is not None else None)


def _scalar_or_seq(node):
    return yaml.safe_load(yaml.serialize(node))


def _walk_mapping(node, prefix=""):
    if not isinstance(node, yaml.MappingNode):
        _err("expected a mapping", prefix or "<root>", node)
    for key_node, value_node in node.value:
        if not isinstance(key_node, yaml.ScalarNode):
            _err("keys must be plain scalars", prefix or "<root>", key_node)
        yield key_node.value, key_node, value_node


def load_config(path_or_text):
    """Parse a config into ``(command, {option: (value, line)})``.

    ``master_seed``, ``out`` and ``timing`` are returned as ordinary options.
    """
    if isinstance(path_or_text, Path) or (isinstance(path_or_text, str) and "\n" not in path_or_text
                                          and path_or_text and Path(path_or_text).is_file()):
        text = Path(path_or_text).read_text()
    else:
        text = str(path_or_text)
    try:
        root = yaml.compose(text, Loader=yaml.SafeLoader)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise ConfigError(f"invalid YAML: {getattr(exc, 'problem', exc)}",
                          field="<root>", line=mark.line + 1 if mark else None) from None
    if root is None:
        raise ConfigError("config is empty", field="command")
    options = {}
    command = None
    for key, key_node, value_node in _walk_mapping(root):
        line = key_node.start_mark.line + 1
        if key == "command":
            command = _scalar_or_seq(value_node)
            if not isinstance(command, str) or not command.split():
                _err("command must be a non-empty string such as 'wiretap eval'", "command", value_node)
            continue
        if key in BLOCKS:
            mapping = BLOCKS[key]
            for sub, sub_node, sub_value in _walk_mapping(value_node, key):
                if mapping is not None and sub not in mapping:
                    _err(f"unknown key in '{key}' block", f"{key}.{sub}", sub_node)
                name = sub if mapping is None else mapping[sub]
                options[name] = (_scalar_or_seq(sub_value), sub_node.start_mark.line + 1, f"{key}.{sub}")
            continue
        options[key] = (_scalar_or_seq(value_node), line, key)
    if command is None:
        raise ConfigError("config has no command", field="command")
    return command, options


def coerce(value, kind, field, line):
    """Convert a config value to the option's type or raise ConfigError."""
    try:
        if kind is bool:
            if not isinstance(value, bool):
                raise TypeError
            return value
        if kind is int:
            if isinstance(value, bool) or (isinstance(value, float) and not value.is_integer()):
                raise TypeError
            return int(value, 0) if isinstance(value, str) else int(value)
        if kind is float:
            if isinstance(value, bool):
                raise TypeError
            return float(value)
        if kind == "hex":
            if isinstance(value, bool):
                raise TypeError
            return value if isinstance(value, int) else int(str(value), 16)
        if kind == "floats":
            seq = value if isinstance(value, list) else [value]
            return [float(v) for v in seq]
        if kind is str:
            if isinstance(value, (dict, list)):
                raise TypeError
            return str(value)
        if kind == "any":
            return value
    except (TypeError, ValueError):
        pass
    name = kind if isinstance(kind, str) else kind.__name__
    raise ConfigError(f"value {value!r} is not a valid {name}", field=field, line=line)
