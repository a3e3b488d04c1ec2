"""CSV and JSON plumbing: series files, result tables and run configs.

Every file written here starts with ``#``-prefixed metadata lines and prints
reals with 17 significant digits, so a write/read cycle is lossless and two
identical runs produce identical bytes.
"""
from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from dataclasses import asdict

import jsonschema
import numpy as np

from . import __version__
from .experiments import EstimatorSpec, ExperimentConfig, ResultRow
from .simulators import RNG_IDENTITY


class DataError(ValueError):
    """Malformed input data (CSV contents)."""


class ConfigError(ValueError):
    """Run config failed validation."""


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    return format(x, ".17g")


def config_hash(obj) -> str:
    blob = json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


def metadata_lines(**fields) -> list[str]:
    lines = [f"# extremalindex {__version__}", f"# rng: {RNG_IDENTITY}"]
    lines += [f"# {key}: {value}" for key, value in fields.items()]
    return lines


def write_table(stream, header: list[str], rows, meta: list[str]) -> None:
    for line in meta:
        stream.write(line + "\n")
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([cell if isinstance(cell, str) else fmt(cell) for cell in row])


def series_to_csv(values: np.ndarray, meta: list[str], names=None) -> str:
    values = np.asarray(values)
    names = names or [f"x{i + 1}" for i in range(values.shape[1])]
    buf = io.StringIO()
    write_table(buf, list(names), values.tolist(), meta)
    return buf.getvalue()


def read_series_csv(path) -> tuple[list[str], np.ndarray]:
    """Read a header + rows CSV (``#`` lines skipped). Raises :class:`DataError` with a row number."""
    with open(path, newline="") as fh:
        lines = [(i + 1, line) for i, line in enumerate(fh) if line.strip() and not line.startswith("#")]
    if not lines:
        raise DataError(f"{path}: no header row")
    reader = csv.reader([line for _, line in lines])
    header = next(reader)
    width = len(header)
    rows = []
    for (lineno, _), cells in zip(lines[1:], reader):
        if len(cells) != width:
            raise DataError(f"{path}: line {lineno}: expected {width} fields, got {len(cells)}")
        try:
            vals = [float(cell) for cell in cells]
        except ValueError:
            raise DataError(f"{path}: line {lineno}: non-numeric value in {cells}") from None
        if not all(math.isfinite(v) for v in vals):
            raise DataError(f"{path}: line {lineno}: non-finite value in {cells}")
        rows.append(vals)
    if not rows:
        raise DataError(f"{path}: no data rows")
    return header, np.array(rows, dtype=float)


RESULT_HEADER = [
    "process", "estimator", "k_n", "r_n", "angle_index", "phi", "tau_1", "tau_2",
    "theta_true", "mean", "bias", "rmse", "sample_variance", "variance_ratio",
    "successes", "failures",
]


def result_rows_to_csv(rows: list[ResultRow], meta: list[str]) -> str:
    buf = io.StringIO()
    write_table(
        buf,
        RESULT_HEADER,
        (
            [r.process, r.estimator, r.k_n, r.r_n, r.angle_index, r.phi, *r.tau, r.theta_true,
             r.mean, r.bias, r.rmse, r.sample_variance, r.variance_ratio, r.successes, r.failures]
            for r in rows
        ),
        meta,
    )
    return buf.getvalue()


_POS_NUM = {"type": "number", "exclusiveMinimum": 0}

RUN_CONFIG_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["process", "n", "replications", "k_n_grid", "estimators"],
    "properties": {
        "process": {"enum": ["iid", "arch", "ar1"]},
        "process_params": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "eta1": _POS_NUM, "eta2": _POS_NUM,
                "lambda1": {"type": "number", "minimum": 0}, "lambda2": {"type": "number", "minimum": 0},
                "rho1": _POS_NUM, "rho2": _POS_NUM, "alpha": _POS_NUM,
                "burnin": {"type": "integer", "minimum": 0},
                "theta_components": {"type": "array", "items": _POS_NUM, "minItems": 2, "maxItems": 2},
            },
        },
        "n": {"type": "integer", "minimum": 2},
        "replications": {"type": "integer", "minimum": 1},
        "k_n_grid": {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 1},
        "estimators": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["kind"],
                "properties": {
                    "kind": {"enum": ["theta1", "theta2", "theta3"]},
                    "c": _POS_NUM, "a": _POS_NUM, "kappa": _POS_NUM,
                    "sigma": _POS_NUM, "phi": _POS_NUM,
                    "quad_points": {"type": "integer", "minimum": 2},
                },
            },
        },
        "angle_count": {"type": "integer", "minimum": 1},
        "base_seed": {"type": "integer", "minimum": 0, "maximum": 2**64 - 1},
        "output": {"type": "string"},
        "rng": {"type": "string"},
    },
    "allOf": [
        {
            "if": {"properties": {"process": {"const": "arch"}}},
            "then": {"properties": {"process_params": {"propertyNames": {
                "enum": ["eta1", "eta2", "lambda1", "lambda2", "burnin", "theta_components"]}}}},
        },
        {
            "if": {"properties": {"process": {"const": "ar1"}}},
            "then": {"properties": {"process_params": {"propertyNames": {
                "enum": ["rho1", "rho2", "alpha", "burnin"]}}}},
        },
        {
            "if": {"properties": {"process": {"const": "iid"}}},
            "then": {"properties": {"process_params": {"maxProperties": 0}}},
        },
    ],
}


def parse_run_config(doc: dict) -> tuple[ExperimentConfig, str | None]:
    """Validate a run-config document; returns the experiment config and output path."""
    try:
        jsonschema.validate(doc, RUN_CONFIG_SCHEMA)
    except jsonschema.ValidationError as err:
        where = "/".join(str(p) for p in err.absolute_path) or "<root>"
        raise ConfigError(f"config key {where}: {err.message}") from None
    rng = doc.get("rng")
    if rng is not None and rng != RNG_IDENTITY:
        raise ConfigError(f"config key rng: {rng!r} does not match this build's {RNG_IDENTITY!r}")
    try:
        config = ExperimentConfig(
            process=doc["process"],
            process_params=dict(doc.get("process_params", {})),
            n=doc["n"],
            replications=doc["replications"],
            k_n_grid=tuple(doc["k_n_grid"]),
            estimators=tuple(EstimatorSpec(**spec) for spec in doc["estimators"]),
            angle_count=doc.get("angle_count", 10),
            base_seed=doc.get("base_seed", 0),
        )
        config.simulator_params()
    except ValueError as err:
        raise ConfigError(str(err)) from None
    return config, doc.get("output")


def load_run_config(path) -> tuple[ExperimentConfig, str | None, dict]:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as err:
        raise ConfigError(f"{path}: invalid JSON: {err}") from None
    config, output = parse_run_config(doc)
    return config, output, doc


def config_document(config: ExperimentConfig) -> dict:
    """Canonical JSON form of an experiment config (used for hashing)."""
    return {
        "process": config.process,
        "process_params": dict(config.process_params),
        "n": config.n,
        "replications": config.replications,
        "k_n_grid": list(config.k_n_grid),
        "estimators": [asdict(spec) for spec in config.estimators],
        "angle_count": config.angle_count,
        "base_seed": config.base_seed,
        "rng": RNG_IDENTITY,
    }
