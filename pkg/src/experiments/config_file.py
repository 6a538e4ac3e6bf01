# Copyright (c) 2026 Pl4yer-ONE
# This file is part of DualTap.
# Licensed under GPLv3 or commercial license.

"""
Config File Loader
Reads an ExperimentConfig from an INI file.

    [experiment]
    M = 128
    blocks = 20:4, 70:4
    input = white            ; white | ar1
    noise = snr              ; snr | gaussian | bernoulli
    snr_db = 35
    n_iters = 2000
    n_trials = 50

    [algorithm:DD-SAF]
    kind = ddsaf
    mu = 0.01
    rho0 = 0.0028

Omitted experiment keys fall back to the experiment-1 defaults; keys are
case-insensitive and unknown keys are rejected.
"""

import configparser
from pathlib import Path
from typing import Callable, List, Tuple

from src.config import (
    ACTIVE_BLOCKS,
    AR1_CORRELATION,
    AR1_INNOVATION_VARIANCE,
    DDSAF_PARAMS,
    DEFAULT_MASTER_SEED,
    FILTER_LENGTH,
    IMPULSIVE_NOISE,
    INPUT_VARIANCE,
    MONTE_CARLO_TRIALS,
    SNR_DB,
)
from src.errors import InvalidConfigurationError
from src.filters import AlgorithmConfig, AlgorithmKind
from src.signal_model import (
    AR1Input,
    BernoulliGaussianNoise,
    GaussianNoise,
    SnrNoise,
    SystemSpec,
    WhiteInput,
)
from .presets import ExperimentConfig, tail_window

ALGORITHM_PREFIX = "algorithm:"

EXPERIMENT_KEYS = {
    "name", "m", "blocks", "normalize",
    "input", "input_variance", "ar_rho", "ar_innovation_variance",
    "noise", "snr_db", "noise_variance",
    "spike_probability", "background_variance", "spike_scale", "global_scale",
    "n_iters", "n_trials", "master_seed", "steady_state_window",
    "theory_overlay", "mu_grid", "sbar",
}
ALGORITHM_KEYS = {"kind", "mu", "rho0", "epsilon", "beta_w", "beta_q", "gamma_q", "n_warm"}


def parse_blocks(text: str) -> Tuple[Tuple[int, int], ...]:
    """'20:4, 70:4' -> ((20, 4), (70, 4))."""
    blocks = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        start, sep, length = item.partition(":")
        if not sep:
            raise InvalidConfigurationError(f"block {item!r} must be start:length")
        blocks.append((int(start), int(length)))
    return tuple(blocks)


def parse_float_list(text: str) -> Tuple[float, ...]:
    return tuple(float(v) for v in text.split(",") if v.strip())


def _check_keys(section: configparser.SectionProxy, allowed: set) -> None:
    unknown = sorted(set(section.keys()) - allowed)
    if unknown:
        raise InvalidConfigurationError(f"unknown keys in [{section.name}]: {', '.join(unknown)}")


def _get(section: configparser.SectionProxy, key: str, convert: Callable, default):
    if key not in section:
        return default
    try:
        return convert(section[key])
    except ValueError as exc:
        raise InvalidConfigurationError(f"[{section.name}] {key}: {exc}") from exc


def _boolean(text: str) -> bool:
    value = configparser.ConfigParser.BOOLEAN_STATES.get(text.strip().lower())
    if value is None:
        raise ValueError(f"not a boolean: {text!r}")
    return value


def _input_spec(exp: configparser.SectionProxy):
    kind = _get(exp, "input", str, "white").strip().lower()
    if kind == "white":
        return WhiteInput(_get(exp, "input_variance", float, INPUT_VARIANCE))
    if kind == "ar1":
        return AR1Input(
            rho=_get(exp, "ar_rho", float, AR1_CORRELATION),
            innovation_variance=_get(exp, "ar_innovation_variance", float, AR1_INNOVATION_VARIANCE),
        )
    raise InvalidConfigurationError(f"unknown input kind {kind!r}")


def _noise_spec(exp: configparser.SectionProxy):
    kind = _get(exp, "noise", str, "snr").strip().lower()
    if kind == "snr":
        return SnrNoise(_get(exp, "snr_db", float, SNR_DB))
    if kind == "gaussian":
        if "noise_variance" not in exp:
            raise InvalidConfigurationError("noise = gaussian needs noise_variance")
        return GaussianNoise(_get(exp, "noise_variance", float, None))
    if kind == "bernoulli":
        return BernoulliGaussianNoise(**{
            key: _get(exp, key, float, default) for key, default in IMPULSIVE_NOISE.items()
        })
    raise InvalidConfigurationError(f"unknown noise kind {kind!r}")


def _algorithm(section: configparser.SectionProxy) -> AlgorithmConfig:
    _check_keys(section, ALGORITHM_KEYS)
    if "kind" not in section or "mu" not in section:
        raise InvalidConfigurationError(f"[{section.name}] needs kind and mu")
    kind = AlgorithmKind.parse(section["kind"])
    defaults = DDSAF_PARAMS if kind is AlgorithmKind.DDSAF else {}
    return AlgorithmConfig(
        kind=kind,
        mu=_get(section, "mu", float, None),
        rho0=_get(section, "rho0", float, 0.0),
        epsilon=_get(section, "epsilon", float, 0.0),
        beta_w=_get(section, "beta_w", float, defaults.get("beta_w", 0.0)),
        beta_q=_get(section, "beta_q", float, defaults.get("beta_q", 0.0)),
        gamma_q=_get(section, "gamma_q", float, defaults.get("gamma_q", 0.97)),
        n_warm=_get(section, "n_warm", int, defaults.get("n_warm", 0)),
    )


def load_config(config_path: str) -> ExperimentConfig:
    """
    Parse an INI experiment description.

    Raises:
        FileNotFoundError: missing file
        InvalidConfigurationError: malformed or inconsistent content
    """
    path = Path(config_path)
    if not path.exists():
        raise FileNotFoundError(f"Config file not found: {config_path}")

    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        parser.read(path, encoding="utf-8")
    except configparser.Error as exc:
        raise InvalidConfigurationError(f"cannot parse {config_path}: {exc}") from exc

    if not parser.has_section("experiment"):
        raise InvalidConfigurationError(f"{config_path} has no [experiment] section")
    for section in parser.sections():
        if section != "experiment" and not section.startswith(ALGORITHM_PREFIX):
            raise InvalidConfigurationError(f"unknown section [{section}]")

    exp = parser["experiment"]
    _check_keys(exp, EXPERIMENT_KEYS)

    algorithms: List[Tuple[str, AlgorithmConfig]] = [
        (section[len(ALGORITHM_PREFIX):].strip(), _algorithm(parser[section]))
        for section in parser.sections()
        if section.startswith(ALGORITHM_PREFIX)
    ]
    if not algorithms:
        raise InvalidConfigurationError(f"{config_path} defines no [algorithm:<name>] section")

    n_iters = _get(exp, "n_iters", int, 2000)
    return ExperimentConfig(
        system=SystemSpec(
            M=_get(exp, "m", int, FILTER_LENGTH),
            blocks=_get(exp, "blocks", parse_blocks, ACTIVE_BLOCKS),
            normalize=_get(exp, "normalize", _boolean, True),
        ),
        input_spec=_input_spec(exp),
        noise_spec=_noise_spec(exp),
        n_iters=n_iters,
        n_trials=_get(exp, "n_trials", int, MONTE_CARLO_TRIALS),
        master_seed=_get(exp, "master_seed", int, DEFAULT_MASTER_SEED),
        algorithms=tuple(algorithms),
        steady_state_window=_get(exp, "steady_state_window", int, tail_window(n_iters)),
        theory_overlay=_get(exp, "theory_overlay", _boolean, False),
        mu_grid=_get(exp, "mu_grid", parse_float_list, ()),
        sbar_mode=_get(exp, "sbar", lambda s: s.strip().lower(), "plugin"),
        name=_get(exp, "name", str, path.stem),
    )
