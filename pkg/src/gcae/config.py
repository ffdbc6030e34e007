"""Flat ``key=value`` run configurations and the JSON run report."""

import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from .encoder import Hyperparameters
from .errors import DataError, ValidationError

# config spelling -> Hyperparameters field
_ALIASES = {"lambda": "lam"}
_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


def parse_kv(text, source="<config>"):
    """Parse ``key=value`` lines; ``#`` starts a comment line."""
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise ValidationError(f"{source}:{lineno}: expected key=value, got {line!r}")
        if key in out:
            raise ValidationError(f"{source}:{lineno}: duplicate key {key!r}")
        out[key] = value
    return out


def read_kv(path):
    path = Path(path)
    if not path.is_file():
        raise DataError(f"missing config file: {path}")
    try:
        text = path.read_text()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    return text, parse_kv(text, str(path))


def _as_bool(key, value):
    v = value.lower()
    if v in _TRUE:
        return True
    if v in _FALSE:
        return False
    raise ValidationError(f"{key}: expected a boolean, got {value!r}")


def _coerce(key, value, kind):
    try:
        if kind is bool:
            return _as_bool(key, value)
        if kind is int:
            f = float(value)
            if f != int(f):
                raise ValueError
            return int(f)
        if kind is float:
            return float(value)
    except ValueError:
        raise ValidationError(f"{key}: expected {kind.__name__}, got {value!r}") from None
    return value


_HYPER_TYPES = {
    "lam": float, "k": int, "t": int, "eta": float, "theta": float, "b": int, "r": int,
    "rho0": float, "rho_max": float, "mu": float, "inner_iter": int, "outer_iter": int,
    "qh_iter": int, "qh_restarts": int, "seed": int,
}


@dataclass
class RunConfig:
    manifest: Path
    clusters: int
    output: Path
    hyper: Hyperparameters = field(default_factory=Hyperparameters)
    baseline: bool = False
    baseline_only: bool = False
    text: str = ""

    @classmethod
    def from_file(cls, path):
        path = Path(path)
        text, kv = read_kv(path)
        return cls.from_dict(kv, base=path.parent, text=text)

    @classmethod
    def from_dict(cls, kv, base=Path("."), text=""):
        kv = dict(kv)
        missing = [k for k in ("manifest", "clusters", "output") if k not in kv]
        if missing:
            raise ValidationError(f"config is missing required keys: {', '.join(missing)}")
        base = Path(base)
        manifest = base / kv.pop("manifest")
        output = base / kv.pop("output")
        clusters = _coerce("clusters", kv.pop("clusters"), int)
        baseline = _coerce("baseline", kv.pop("baseline", "false"), bool)
        baseline_only = _coerce("baseline_only", kv.pop("baseline_only", "false"), bool)
        hyper_kw = {}
        for key, value in kv.items():
            name = _ALIASES.get(key, key)
            if name not in _HYPER_TYPES:
                raise ValidationError(f"unknown config key {key!r}")
            if name == "eta" and value.lower() == "auto":
                hyper_kw[name] = None
                continue
            hyper_kw[name] = _coerce(key, value, _HYPER_TYPES[name])
        hyper = Hyperparameters(**hyper_kw).validate()
        if clusters < 1:
            raise ValidationError("clusters must be at least 1")
        return cls(manifest, clusters, output, hyper, baseline, baseline_only, text)


@dataclass
class SynthConfig:
    n_samples: int
    n_clusters: int
    dims: list
    output: Path
    separation: float = 8.0
    noise: float = 1.0
    seed: int = 0

    @classmethod
    def from_file(cls, path):
        path = Path(path)
        _, kv = read_kv(path)
        known = {f.name for f in fields(cls)}
        unknown = set(kv) - known
        if unknown:
            raise ValidationError(f"unknown config key(s): {', '.join(sorted(unknown))}")
        for key in ("n_samples", "n_clusters", "dims", "output"):
            if key not in kv:
                raise ValidationError(f"config is missing required key {key!r}")
        try:
            dims = [int(d) for d in kv["dims"].split(",") if d.strip()]
        except ValueError:
            raise ValidationError(f"dims: expected comma-separated integers, got {kv['dims']!r}") from None
        return cls(
            n_samples=_coerce("n_samples", kv["n_samples"], int),
            n_clusters=_coerce("n_clusters", kv["n_clusters"], int),
            dims=dims,
            output=path.parent / kv["output"],
            separation=_coerce("separation", kv.get("separation", "8"), float),
            noise=_coerce("noise", kv.get("noise", "1"), float),
            seed=_coerce("seed", kv.get("seed", "0"), int),
        )


@dataclass
class RunReport:
    method: str
    n_samples: int
    n_views: int
    n_clusters: int
    code_bits: int
    seed: int
    runtime_seconds: float
    metrics: dict | None = None
    metric_warnings: list = field(default_factory=list)
    loss_trajectory: list = field(default_factory=list)
    view_weights: list = field(default_factory=list)
    decorrelation: float | None = None
    label_values: list = field(default_factory=list)
    config: dict = field(default_factory=dict)
    config_text: str = ""
    baseline: dict | None = None

    def to_json(self):
        return json.dumps(asdict(self), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text):
        return cls(**json.loads(text))

    def write(self, path):
        Path(path).write_text(self.to_json() + "\n")
