"""Run configuration: config file, environment, then command-line flags.

Config file grammar: one ``key = value`` per line, ``#`` or ``;`` starts a
comment, blank lines ignored.  Keys:

    q, n              field sizes (E = F_{q^n})
    modulus_q         coefficients of the F_q modulus over F_p, lowest first, comma separated
    modulus_E         same for the E modulus over F_q (as field codes)
    prec              target precision N
    cap               enumeration cap (monics per degree)
    threads           worker threads for power sums
    cache             cache directory (empty disables the cache)
    format            text | json | csv
    seed              RNG seed for randomized suites

Environment overrides: FFLSERIES_CACHE, FFLSERIES_THREADS.
"""

from __future__ import annotations

import configparser
import os
from dataclasses import dataclass, replace

from .scalars import DEFAULT_CAP, FieldSpec, get_field

_SECTION = "fflseries"
KEYS = ("q", "n", "modulus_q", "modulus_E", "prec", "cap", "threads", "cache", "format", "seed")
FORMATS = ("text", "json", "csv")


@dataclass(frozen=True)
class RunConfig:
    q: int = 2
    n: int = 1
    modulus_q: tuple = None
    modulus_E: tuple = None
    prec: int = 30
    cap: int = DEFAULT_CAP
    threads: int = 1
    cache: str = None
    format: str = "text"
    seed: int = None

    def __post_init__(self):
        if self.prec < 1:
            raise ValueError("precision N must be >= 1")
        if self.cap < self.q:
            raise ValueError("enumeration cap must be at least q")
        if self.threads < 1:
            raise ValueError("thread count must be >= 1")
        if self.format not in FORMATS:
            raise ValueError(f"format must be one of {', '.join(FORMATS)}")

    @property
    def spec(self):
        return FieldSpec.from_q(self.q, self.n, self.modulus_q, self.modulus_E)

    @property
    def field(self):
        return get_field(self.spec)

    def with_overrides(self, **kw):
        return replace(self, **{k: v for k, v in kw.items() if v is not None})


def _int_list(s):
    s = s.strip()
    return tuple(int(x) for x in s.replace("[", "").replace("]", "").split(",") if x.strip()) if s else None


def _convert(key, raw):
    raw = raw.strip()
    if key in ("modulus_q", "modulus_E"):
        return _int_list(raw)
    if key in ("cache", "format"):
        return raw or None
    return int(raw)


def parse_config_text(text):
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"), interpolation=None)
    cp.optionxform = str
    cp.read_string(f"[{_SECTION}]\n" + text)
    out = {}
    for key, raw in cp[_SECTION].items():
        if key not in KEYS:
            raise ValueError(f"unknown config key {key!r}")
        out[key] = _convert(key, raw)
    return out


def load_config(path=None, env=None, **flags):
    """Defaults < config file < environment < explicit flags."""
    env = os.environ if env is None else env
    values = {}
    if path:
        with open(path, encoding="utf-8") as fh:
            values.update(parse_config_text(fh.read()))
    if env.get("FFLSERIES_CACHE") is not None:
        values["cache"] = env["FFLSERIES_CACHE"] or None
    if env.get("FFLSERIES_THREADS"):
        values["threads"] = int(env["FFLSERIES_THREADS"])
    values.update({k: v for k, v in flags.items() if v is not None})
    return RunConfig(**values)
