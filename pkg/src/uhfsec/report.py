"""Stable JSON reports: fixed key order, 12 significant digits."""

from fractions import Fraction
import json
import math
import sys

import numpy as np

from uhfsec import __version__

SIG_DIGITS = 12


def normalize(obj):
    """Plain JSON types; floats rounded to 12 significant digits."""
    if isinstance(obj, dict):
        return {str(k): normalize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [normalize(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return normalize(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, Fraction):
        return {"fraction": f"{obj.numerator}/{obj.denominator}", "value": normalize(float(obj))}
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return float(f"{x:.{SIG_DIGITS}g}")
    if obj is None or isinstance(obj, str):
        return obj
    if hasattr(obj, "as_dict"):
        return normalize(obj.as_dict())
    return str(obj)


class Report:
    """Checks plus free-form results for one command."""

    def __init__(self, command, config, master_seed):
        self.command = command
        self.config = config
        self.master_seed = master_seed
        self.checks = []
        self.results = {}
        self.wall_time = None

    def check(self, name, value, bound, passed):
        self.checks.append({"name": name, "value": value, "bound": bound, "pass": bool(passed)})
        return passed

    @property
    def passed(self):
        return all(c["pass"] for c in self.checks)

    def as_dict(self):
        out = {
            "tool": "uhfsec",
            "version": __version__,
            "command": self.command,
            "config": self.config,
            "master_seed": self.master_seed,
            "checks": self.checks,
            "results": self.results,
            "passed": self.passed,
        }
        if self.wall_time is not None:
            out["wall_time_s"] = self.wall_time
        return out

    def to_json(self):
        return json.dumps(normalize(self.as_dict()), sort_keys=True, indent=2) + "\n"

    def summary(self, stream=None):
        stream = sys.stderr if stream is None else stream
        status = "PASS" if self.passed else "FAIL"
        print(f"[{status}] {self.command}", file=stream)
        for c in self.checks:
            mark = "ok  " if c["pass"] else "FAIL"
            print(f"  {mark} {c['name']}: value={_short(c['value'])} bound={_short(c['bound'])}",
                  file=stream)


def _short(v):
    v = normalize(v)
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)
