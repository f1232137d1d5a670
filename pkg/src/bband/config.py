"""Configuration for the banding detection pipeline.

Every numeric constant used by the pipeline lives here so it can be
overridden from a config file or from repeated ``--set key=value`` flags.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from pathlib import Path


class ConfigError(ValueError):
    """Raised when a configuration value or override is invalid."""


@dataclass
class MaskingParams:
    """Constants of the three masking transfer functions.

    ``alpha``, ``beta`` and ``mu0`` shape the luminance curve, ``gamma`` and
    ``lambda0`` the texture curve, ``c0`` and ``eta`` the edge-cardinality
    curve.
    """

    alpha: float = 1.6e-5
    beta: float = 2.0
    mu0: float = 81.0
    gamma: float = 5.0
    lambda0: float = 0.32
    c0: int = 16
    eta: float = 0.5

    def validate(self) -> None:
        if self.alpha <= 0:
            raise ConfigError(f"alpha must be positive, got {self.alpha}")
        if self.beta <= 0:
            raise ConfigError(f"beta must be positive, got {self.beta}")
        if not 0 <= self.mu0 <= 255:
            raise ConfigError(f"mu0 must be within [0, 255], got {self.mu0}")
        if self.gamma <= 0:
            raise ConfigError(f"gamma must be positive, got {self.gamma}")
        if self.lambda0 < 0:
            raise ConfigError(f"lambda0 must be non-negative, got {self.lambda0}")
        if self.c0 < 1:
            raise ConfigError(f"c0 must be at least 1, got {self.c0}")
        if self.eta <= 0:
            raise ConfigError(f"eta must be positive, got {self.eta}")


@dataclass
class PoolingParams:
    """Constants for percentile pooling and the SI/TI transfer weights."""

    percentile: float = 80.0
    a_si: float = 1e-6
    b_si: float = 3.0
    a_ti: float = 2.5e-3
    b_ti: float = 2.0

    def validate(self) -> None:
        if not 0 < self.percentile <= 100:
            raise ConfigError(
                f"percentile must be within (0, 100], got {self.percentile}"
            )
        for name in ("a_si", "b_si", "a_ti", "b_ti"):
            value = getattr(self, name)
            if value < 0:
                raise ConfigError(f"{name} must be non-negative, got {value}")


@dataclass
class BbandConfig:
    """Full pipeline configuration with per-field defaults.

    Attributes:
        t1: Gradient magnitude below which a pixel is Flat.
        t2: Gradient magnitude above which a pixel is Texture.
        guided_radius: Half-size of the self-guided pre-filter window.
        guided_epsilon: Regularizer of the pre-filter; large values smooth
            everything short of extreme contrast edges.
        blob_radius: Gap-filling reach; CBP pixels in distinct components at
            Euclidean distance <= 2*blob_radius get bridged.
        min_edge_length: Components with fewer pixels than this are noise.
        window_half_height: Half-height K of the 2K+1 local-statistics window.
        window_half_width: Half-width L of the 2L+1 local-statistics window.
        gaussian_sigma: Std-dev of the Gaussian weights in that window.
        masking: Transfer-function constants for the visibility map.
        pooling: Percentile pooling and SI/TI weighting constants.
        use_smoothed_gradient: Whether the visibility product uses the
            post-smoothing gradient magnitude (default) or the raw one.
        workers: Worker count for multi-frame analysis; None = all cores.
    """

    t1: float = 2.0
    t2: float = 12.0
    guided_radius: int = 6
    guided_epsilon: float = 5000.0
    blob_radius: int = 2
    min_edge_length: int = 16
    window_half_height: int = 4
    window_half_width: int = 4
    gaussian_sigma: float = 1.5
    masking: MaskingParams = dataclasses.field(default_factory=MaskingParams)
    pooling: PoolingParams = dataclasses.field(default_factory=PoolingParams)
    use_smoothed_gradient: bool = True
    workers: int | None = None

    def validate(self) -> None:
        if not 0 <= self.t1 < self.t2:
            raise ConfigError(
                f"thresholds must satisfy 0 <= t1 < t2, got t1={self.t1} t2={self.t2}"
            )
        if self.guided_radius < 1:
            raise ConfigError(f"guided_radius must be >= 1, got {self.guided_radius}")
        if self.guided_epsilon <= 0:
            raise ConfigError(
                f"guided_epsilon must be positive, got {self.guided_epsilon}"
            )
        if self.blob_radius < 1:
            raise ConfigError(f"blob_radius must be >= 1, got {self.blob_radius}")
        if self.min_edge_length < 1:
            raise ConfigError(
                f"min_edge_length must be >= 1, got {self.min_edge_length}"
            )
        if self.window_half_height < 1 or self.window_half_width < 1:
            raise ConfigError("local-statistics window half-sizes must be >= 1")
        if self.gaussian_sigma <= 0:
            raise ConfigError(
                f"gaussian_sigma must be positive, got {self.gaussian_sigma}"
            )
        if self.workers is not None and self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")
        self.masking.validate()
        self.pooling.validate()

    def to_dict(self) -> dict:
        """Flat key/value view of the config, as echoed into reports."""
        out: dict = {}
        for field in dataclasses.fields(self):
            value = getattr(self, field.name)
            if dataclasses.is_dataclass(value):
                for sub in dataclasses.fields(value):
                    out[f"{field.name}.{sub.name}"] = getattr(value, sub.name)
            else:
                out[field.name] = value
        return out

    def apply_override(self, key: str, raw_value: str) -> None:
        """Apply one ``key=value`` override, with dotted keys for subgroups."""
        target: object = self
        name = key
        if "." in key:
            group, name = key.split(".", 1)
            if group == "masking":
                target = self.masking
            elif group == "pooling":
                target = self.pooling
            else:
                raise ConfigError(f"unknown config group {group!r} in {key!r}")
        else:
            # Accept bare names of nested fields too, since they are unique.
            if hasattr(self.masking, name):
                target = self.masking
            elif hasattr(self.pooling, name):
                target = self.pooling
        if not hasattr(target, name):
            raise ConfigError(f"unknown config key {key!r}")
        current = getattr(target, name)
        try:
            setattr(target, name, _coerce(raw_value, current))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad value for {key!r}: {exc}") from exc

    @classmethod
    def from_file(cls, path: str | Path) -> "BbandConfig":
        """Load a config from a flat ``key = value`` text file.

        Blank lines and ``#`` comments are ignored.  Unknown keys and
        malformed lines raise ConfigError.
        """
        config = cls()
        text = Path(path).read_text(encoding="utf-8")
        for lineno, line in enumerate(text.splitlines(), start=1):
            stripped = line.split("#", 1)[0].strip()
            if not stripped:
                continue
            if "=" not in stripped:
                raise ConfigError(f"{path}:{lineno}: expected key = value")
            key, _, value = stripped.partition("=")
            config.apply_override(key.strip(), value.strip())
        config.validate()
        return config


def _coerce(raw: str, current: object):
    """Parse a string override to the type of the current field value."""
    if isinstance(current, bool):
        lowered = raw.lower()
        if lowered in ("1", "true", "yes", "on"):
            return True
        if lowered in ("0", "false", "no", "off"):
            return False
        raise ValueError(f"expected a boolean, got {raw!r}")
    if current is None or isinstance(current, int):
        value = float(raw)
        if not value.is_integer():
            raise ValueError(f"expected an integer, got {raw!r}")
        return int(value)
    if isinstance(current, float):
        value = float(raw)
        if not math.isfinite(value):
            raise ValueError(f"expected a finite number, got {raw!r}")
        return value
    return raw
