"""Flat key=value pipeline configuration with section prefixes.

Example file:

    paths.edges=data/cora.edges
    walk.p=1.0
    train.alpha=1.0

Every key can be overridden by a same-named command-line flag
(``--walk.p 1.0``); flags win over the file.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .communities import BigClamConfig
from .errors import ConfigError
from .training import TrainConfig
from .walks import WalkConfig


def _bool(text):
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _ratio_list(text):
    if isinstance(text, list):
        return text
    vals = [float(t) for t in str(text).split(",") if t.strip()]
    if not vals or any(not (0 < v < 1) for v in vals):
        raise ValueError(f"ratios must lie in (0,1): {text!r}")
    return vals


# key -> (parser, default, help)
SCHEMA = {
    "paths.edges": (str, "", "edge-list input file"),
    "paths.labels": (str, "", "node-label input file (optional)"),
    "paths.affiliations": (str, "", "affiliation import file (optional)"),
    "paths.output": (str, "out", "output directory"),
    "seed": (int, 0, "global random seed"),
    "threads": (int, 1, "worker threads; 1 = fully deterministic"),
    "community.strategy": (str, "bigclam",
                           'community strategy: "bigclam[:m=K]", "import:PATH", "cc"'),
    "structure.pair_budget": (int, 10 ** 8,
                              "max pair expansion for a single community"),
    "walk.walks_per_node": (int, 10, "walks started from each node"),
    "walk.walk_length": (int, 80, "nodes per walk"),
    "walk.window": (int, 5, "co-occurrence window radius"),
    "walk.p": (float, 1.0, "return parameter"),
    "walk.q": (float, 1.0, "in-out parameter"),
    "walk.binary_counts": (_bool, False, "cap co-occurrence counts at 1"),
    "train.d": (int, 128, "embedding dimension"),
    "train.alpha": (float, 1.0, "triad proximity weight"),
    "train.beta": (float, 1.0, "community proximity weight"),
    "train.epochs": (int, 5, "SGD passes over the positive pairs"),
    "train.negatives_per_positive": (int, 5, "negative samples per positive"),
    "train.lr_init": (float, 0.025, "initial learning rate"),
    "train.lr_final": (float, 0.0001, "final learning rate"),
    "train.sigmoid_clip": (float, 6.0, "dot-product clamp bound"),
    "train.sample_by_weight": (_bool, False,
                               "draw pairs proportional to weight instead of "
                               "weighting the gradient"),
    "train.max_weight": (float, 25.0, "cap on combined pair weight; 0 = none"),
    "bigclam.m": (int, 0, "community count; 0 = auto"),
    "bigclam.max_iters": (int, 100, "max row sweeps"),
    "bigclam.step_init": (float, 0.05, "initial ascent step"),
    "bigclam.step_backtrack": (float, 0.5, "backtracking factor"),
    "bigclam.backtrack_tries": (int, 10, "backtracking attempts per row"),
    "bigclam.tol": (float, 1e-4, "relative improvement stop threshold"),
    "bigclam.threshold_delta": (float, 0.0, "membership cutoff; 0 = auto"),
    "eval.ratios": (_ratio_list, [round(0.1 * k, 1) for k in range(1, 10)],
                    "comma-separated train ratios"),
    "eval.repetitions": (int, 5, "repetitions per ratio"),
    "eval.l2": (float, 1.0, "logistic regression L2 strength"),
    "eval.max_iters": (int, 200, "logistic regression iteration cap"),
    "eval.tol": (float, 1e-6, "logistic regression gradient tolerance"),
}


def parse_config_file(path):
    values = {}
    try:
        fh = open(path, "r", encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    with fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith(("#", "%")):
                continue
            key, sep, val = line.partition("=")
            if not sep:
                raise ConfigError(f"{path}:{line_no}: expected key=value")
            values[key.strip()] = val.strip()
    return values


def resolve(raw_values):
    """Validate raw string values against the schema and apply defaults."""
    resolved = {}
    for key, (parser, default, _help) in SCHEMA.items():
        if key in raw_values:
            try:
                resolved[key] = parser(raw_values[key])
            except (ValueError, TypeError) as exc:
                raise ConfigError(f"bad value for {key}: {exc}") from exc
        else:
            resolved[key] = default
    unknown = set(raw_values) - set(SCHEMA)
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    return resolved


@dataclass
class PipelineConfig:
    values: dict = field(default_factory=dict)

    @classmethod
    def load(cls, config_path=None, overrides=None):
        raw = parse_config_file(config_path) if config_path else {}
        if overrides:
            raw.update({k: v for k, v in overrides.items() if v is not None})
        return cls(values=resolve(raw))

    def __getitem__(self, key):
        return self.values[key]

    def _section(self, prefix):
        plen = len(prefix) + 1
        return {k[plen:]: v for k, v in self.values.items()
                if k.startswith(prefix + ".")}

    def walk_config(self):
        return WalkConfig(seed=self.values["seed"], **self._section("walk"))

    def train_config(self):
        return TrainConfig(seed=self.values["seed"], **self._section("train"))

    def bigclam_config(self):
        return BigClamConfig(seed=self.values["seed"],
                             **self._section("bigclam"))
