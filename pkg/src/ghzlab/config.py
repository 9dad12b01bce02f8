"""Experiment configuration: a flat INI document with typed, closed schemas.

Sections group related knobs; every key is validated against the schema and
unknown sections or keys are rejected outright rather than silently ignored.
``parse_config`` fills defaults so the resolved configuration echoed into the
run manifest is complete.
"""

from __future__ import annotations

import configparser
import io
from dataclasses import dataclass, field

from .hamiltonian import OPEN, PERIODIC, Couplings, FEATURED_SET_A, FEATURED_SET_B

EXPERIMENTS = ("purity", "delta", "timeseries", "qindex", "qgrid", "ethmodel")
PRESETS = ("featured", "A", "B", "grid", "custom")


class ConfigError(Exception):
    """Invalid configuration document."""


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    sizes: tuple[int, ...]
    seed: int
    threads: int
    output_dir: str
    enable_n12: bool
    cache_dir: str | None
    preset: str
    couplings: Couplings
    theta_points: int
    phi_points: int
    refine_tolerance: float
    oracle_enabled: bool
    horizon: float
    step: float
    time_points: int
    eth_samples: int
    eth_kind: str
    resolved: dict = field(repr=False, default_factory=dict)

    def coupling_sets(self) -> list[Couplings]:
        from .hamiltonian import parameter_grid

        if self.preset == "featured":
            return [FEATURED_SET_A, FEATURED_SET_B]
        if self.preset == "A":
            return [FEATURED_SET_A]
        if self.preset == "B":
            return [FEATURED_SET_B]
        if self.preset == "grid":
            return parameter_grid()
        return [self.couplings]


def _parse_bool(raw: str, where: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in ("true", "yes", "on", "1"):
        return True
    if lowered in ("false", "no", "off", "0"):
        return False
    raise ConfigError(f"{where}: expected a boolean, got {raw!r}")


def _parse_int(raw: str, where: str) -> int:
    try:
        return int(raw.strip())
    except ValueError:
        raise ConfigError(f"{where}: expected an integer, got {raw!r}") from None


def _parse_float(raw: str, where: str) -> float:
    try:
        return float(raw.strip())
    except ValueError:
        raise ConfigError(f"{where}: expected a number, got {raw!r}") from None


def _parse_int_list(raw: str, where: str) -> tuple[int, ...]:
    items = [piece.strip() for piece in raw.split(",") if piece.strip()]
    if not items:
        raise ConfigError(f"{where}: expected a comma-separated list of integers")
    return tuple(_parse_int(piece, where) for piece in items)


# section -> key -> (parser, default-as-string); None default means required
_SCHEMA = {
    "run": {
        "experiment": (str, None),
        "sizes": (_parse_int_list, "4, 6, 8, 10"),
        "seed": (_parse_int, "12345"),
        "threads": (_parse_int, "1"),
        "output_dir": (str, "results"),
        "enable_n12": (_parse_bool, "false"),
        "cache_dir": (str, ""),
    },
    "couplings": {
        "preset": (str, "featured"),
        "j1": (_parse_float, "1.0"),
        "j2": (_parse_float, "1.35"),
        "d": (_parse_float, "0.5"),
        "h_x": (_parse_float, "0.2"),
        "h_z": (_parse_float, "0.6"),
        "e": (_parse_float, "0.2"),
        "boundary": (str, OPEN),
    },
    "search": {
        "theta_points": (_parse_int, "64"),
        "phi_points": (_parse_int, "128"),
        "refine_tolerance": (_parse_float, "1e-6"),
    },
    "time": {
        "horizon": (_parse_float, "5000.0"),
        "step": (_parse_float, "0.01"),
        "points": (_parse_int, "400"),
    },
    "oracle": {
        "enabled": (_parse_bool, "false"),
    },
    "eth": {
        "samples_per_size": (_parse_int, "20"),
        "kind": (str, "fully_correlated"),
    },
}


def parse_config(text: str, overrides: dict[str, str] | None = None) -> ExperimentConfig:
    """Parse and fully validate a configuration document.

    ``overrides`` maps dotted ``section.key`` names to raw string values
    (used for command-line flags); they are applied before validation so
    flag-supplied values face the same checks as file-supplied ones.
    """
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str  # keep key case
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from None
    for dotted, raw in (overrides or {}).items():
        section, _, key = dotted.partition(".")
        if section not in _SCHEMA or key not in _SCHEMA[section]:
            raise ConfigError(f"unknown override {dotted!r}")
        if not parser.has_section(section):
            parser.add_section(section)
        parser.set(section, key, raw)

    values: dict[str, dict[str, object]] = {}
    for section in parser.sections():
        if section not in _SCHEMA:
            raise ConfigError(f"unknown section [{section}]")
        for key in parser[section]:
            if key not in _SCHEMA[section]:
                raise ConfigError(f"unknown key '{key}' in section [{section}]")

    for section, keys in _SCHEMA.items():
        values[section] = {}
        for key, (convert, default) in keys.items():
            if parser.has_option(section, key):
                raw = parser.get(section, key)
            elif default is not None:
                raw = default
            else:
                raise ConfigError(f"missing required key '{key}' in section [{section}]")
            if convert is str:
                values[section][key] = raw.strip()
            else:
                values[section][key] = convert(raw, f"[{section}].{key}")

    run = values["run"]
    if run["experiment"] == "":
        raise ConfigError("missing required key 'experiment' in section [run]")
    if run["experiment"] not in EXPERIMENTS:
        raise ConfigError(
            f"[run].experiment must be one of {', '.join(EXPERIMENTS)}; "
            f"got {run['experiment']!r}"
        )
    coup = values["couplings"]
    if coup["preset"] not in PRESETS:
        raise ConfigError(
            f"[couplings].preset must be one of {', '.join(PRESETS)}; "
            f"got {coup['preset']!r}"
        )
    if coup["boundary"] not in (OPEN, PERIODIC):
        raise ConfigError(
            f"[couplings].boundary must be '{OPEN}' or '{PERIODIC}'"
        )

    sizes = tuple(sorted(set(run["sizes"])))
    if any(n < 2 for n in sizes):
        raise ConfigError("[run].sizes entries must be >= 2")
    cap = 12 if run["enable_n12"] else 10
    if any(n > cap for n in sizes):
        raise ConfigError(
            f"[run].sizes entries above {cap} need enable_n12 = true"
            if cap == 10
            else "[run].sizes entries must be <= 12"
        )
    if run["threads"] < 1:
        raise ConfigError("[run].threads must be >= 1")
    search = values["search"]
    if search["theta_points"] < 2 or search["phi_points"] < 2:
        raise ConfigError("[search] grid needs at least 2 points per angle")
    if search["refine_tolerance"] <= 0:
        raise ConfigError("[search].refine_tolerance must be positive")
    timing = values["time"]
    if timing["horizon"] <= 0 or timing["step"] <= 0:
        raise ConfigError("[time].horizon and [time].step must be positive")
    if timing["points"] < 2:
        raise ConfigError("[time].points must be >= 2")
    eth = values["eth"]
    if eth["samples_per_size"] < 1:
        raise ConfigError("[eth].samples_per_size must be >= 1")
    if eth["kind"] not in ("local_additive", "fully_correlated"):
        raise ConfigError(
            "[eth].kind must be 'local_additive' or 'fully_correlated'"
        )

    try:
        couplings = Couplings(
            j1=coup["j1"],
            j2=coup["j2"],
            d=coup["d"],
            h_x=coup["h_x"],
            h_z=coup["h_z"],
            e=coup["e"],
            boundary=coup["boundary"],
        )
    except ValueError as exc:
        raise ConfigError(f"[couplings]: {exc}") from None

    resolved = {
        section: {key: values[section][key] for key in keys}
        for section, keys in _SCHEMA.items()
    }
    resolved["run"]["sizes"] = list(sizes)

    return ExperimentConfig(
        experiment=run["experiment"],
        sizes=sizes,
        seed=run["seed"],
        threads=run["threads"],
        output_dir=run["output_dir"],
        enable_n12=run["enable_n12"],
        cache_dir=run["cache_dir"] or None,
        preset=coup["preset"],
        couplings=couplings,
        theta_points=search["theta_points"],
        phi_points=search["phi_points"],
        refine_tolerance=search["refine_tolerance"],
        oracle_enabled=values["oracle"]["enabled"],
        horizon=timing["horizon"],
        step=timing["step"],
        time_points=timing["points"],
        eth_samples=eth["samples_per_size"],
        eth_kind=eth["kind"],
        resolved=resolved,
    )


def render_config(config: ExperimentConfig) -> str:
    """Serialize the resolved configuration back to the input format."""
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    for section, keys in config.resolved.items():
        parser[section] = {}
        for key, value in keys.items():
            if isinstance(value, (list, tuple)):
                parser[section][key] = ", ".join(str(v) for v in value)
            else:
                parser[section][key] = str(value)
    buffer = io.StringIO()
    parser.write(buffer)
    return buffer.getvalue()
