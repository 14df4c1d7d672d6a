"""Instance and result files: JSON schemas, loading, serialization.

An instance file carries the target geometry, the metric, optionally the
shared channel constants (with the SNR threshold in dB; converted to the
linear scale internally), and the fleet. Each agent either states its
radius ``r`` outright or carries a transmit ``power`` so the radius can be
derived from the channel constants.
"""

from __future__ import annotations

import json
import math
from typing import Any, Optional

import jsonschema

from .errors import InvalidInstanceError
from .minmax import MinMaxSolution
from .minsum import MinSumSolution
from .model import BoundReport, Deployment, Instance, Placement, RadioParams, Uav, bounds

INSTANCE_SCHEMA: dict[str, Any] = {
    "type": "object",
    "required": ["beta", "d", "uavs"],
    "additionalProperties": False,
    "properties": {
        "beta": {"type": "number", "exclusiveMinimum": 0},
        "d": {"type": "number", "minimum": 0},
        "metric": {"enum": ["euclidean", "manhattan"]},
        "radio": {
            "type": "object",
            "required": ["xi", "sigma2", "gamma_th_db"],
            "additionalProperties": False,
            "properties": {
                "xi": {"type": "number", "exclusiveMinimum": 0},
                "sigma2": {"type": "number", "exclusiveMinimum": 0},
                "gamma_th_db": {"type": "number"},
            },
        },
        "uavs": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["id", "x", "h", "v"],
                "additionalProperties": False,
                "properties": {
                    "id": {"type": "integer"},
                    "x": {"type": "number"},
                    "z": {"type": "number"},
                    "r": {"type": "number", "exclusiveMinimum": 0},
                    "h": {"type": "number", "minimum": 0},
                    "v": {"type": "number", "exclusiveMinimum": 0},
                    "power": {"type": "number", "exclusiveMinimum": 0},
                },
            },
        },
    },
}

RESULT_SCHEMA: dict[str, Any] = {
    "type": "object",
    "required": ["objective", "method", "placements", "per_delay"],
    "properties": {
        "objective": {"type": "number"},
        "method": {"type": "string"},
        "placements": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "y"],
                "properties": {
                    "id": {"type": "integer"},
                    "y": {"type": "number"},
                    "zp": {"type": ["number", "null"]},
                },
            },
        },
        "per_delay": {"type": "object"},
    },
}


def gamma_db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def gamma_linear_to_db(linear: float) -> float:
    return 10.0 * math.log10(linear)


def _validate(document: Any, schema: dict[str, Any], what: str) -> None:
    validator = jsonschema.Draft202012Validator(schema)
    errors = sorted(validator.iter_errors(document), key=lambda e: e.json_path)
    if errors:
        first = errors[0]
        raise InvalidInstanceError(f"{what} schema violation at {first.json_path}: {first.message}")


def instance_from_dict(document: dict[str, Any]) -> Instance:
    """Parse and validate an instance document; derives missing radii from
    the link budget when the channel constants and a power are present."""
    _validate(document, INSTANCE_SCHEMA, "instance")
    radio = None
    if "radio" in document:
        r = document["radio"]
        radio = RadioParams(
            xi=r["xi"], sigma2=r["sigma2"], gamma_th=gamma_db_to_linear(r["gamma_th_db"])
        )
    uavs = []
    for k, entry in enumerate(document["uavs"]):
        if "r" in entry:
            radius = entry["r"]
        else:
            if radio is None or "power" not in entry:
                raise InvalidInstanceError(
                    f"instance schema violation at $.uavs[{k}]: no 'r' and no "
                    "'radio'+'power' pair to derive it from"
                )
            from .model import radius_from_snr

            radius = radius_from_snr(radio.with_power(entry["power"]), entry["h"])
        uavs.append(
            Uav(
                id=entry["id"],
                x=entry["x"],
                r=radius,
                h=entry["h"],
                v=entry["v"],
                z=entry.get("z", 0.0),
            )
        )
    return Instance(
        beta=document["beta"],
        d=document["d"],
        uavs=tuple(uavs),
        radio=radio,
        metric=document.get("metric", "euclidean"),
    )


def instance_to_dict(instance: Instance, powers: Optional[dict[int, float]] = None) -> dict[str, Any]:
    """Serialize an instance; radii are always written explicitly so the
    round trip is exact even for link-budget-derived fleets."""
    doc: dict[str, Any] = {
        "beta": instance.beta,
        "d": instance.d,
        "metric": instance.metric,
        "uavs": [],
    }
    if instance.radio is not None:
        doc["radio"] = {
            "xi": instance.radio.xi,
            "sigma2": instance.radio.sigma2,
            "gamma_th_db": gamma_linear_to_db(instance.radio.gamma_th),
        }
    for u in instance.uavs:
        entry: dict[str, Any] = {"id": u.id, "x": u.x, "r": u.r, "h": u.h, "v": u.v}
        if u.z != 0.0:
            entry["z"] = u.z
        if powers and u.id in powers:
            entry["power"] = powers[u.id]
        doc["uavs"].append(entry)
    return doc


def load_instance(path: str) -> Instance:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            document = json.load(fh)
    except OSError as exc:
        raise InvalidInstanceError(f"cannot read instance file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidInstanceError(f"instance file is not valid JSON: {exc}") from exc
    if not isinstance(document, dict):
        raise InvalidInstanceError("instance schema violation at $: document must be an object")
    return instance_from_dict(document)


def save_instance(instance: Instance, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(instance_to_dict(instance), fh, indent=2, sort_keys=True)
        fh.write("\n")


def _finite_or_none(value: float) -> Optional[float]:
    return value if math.isfinite(value) else None


def result_to_dict(
    instance: Instance,
    deployment: Deployment,
    objective: float,
    method: str,
    extra: Optional[dict[str, Any]] = None,
) -> dict[str, Any]:
    report: BoundReport = bounds(instance)
    doc: dict[str, Any] = {
        "objective": objective,
        "method": method,
        "placements": [
            {"id": p.uav_id, "y": p.y, **({"zp": p.zp} if p.zp is not None else {})}
            for p in deployment.placements
        ],
        "per_delay": {str(uid): t for uid, t in sorted(deployment.per_delay.items())},
        "max_delay": deployment.max_delay,
        "total_delay": deployment.total_delay,
        "bounds": {
            "t_l": report.t_l,
            "t_u": report.t_u,
            "gamma_u": report.gamma_u,
            "kappa": _finite_or_none(report.kappa),
            "tau": report.tau,
        },
    }
    if extra:
        doc.update(extra)
    return doc


def solution_to_dict(instance: Instance, solution: MinMaxSolution | MinSumSolution) -> dict[str, Any]:
    extra: dict[str, Any] = {}
    if isinstance(solution, MinMaxSolution):
        if solution.epsilon is not None:
            extra["epsilon"] = solution.epsilon
        if solution.grid_step is not None:
            extra["grid_step"] = solution.grid_step
    else:
        if solution.grid_unit is not None:
            extra["grid_unit"] = solution.grid_unit
    return result_to_dict(instance, solution.deployment, solution.objective, solution.method, extra)


def placements_from_result(document: dict[str, Any]) -> tuple[tuple[Placement, ...], dict[int, float]]:
    """Extract placements and the declared per-agent delays from a result
    document (validating its schema)."""
    _validate(document, RESULT_SCHEMA, "result")
    placements = tuple(
        Placement(entry["id"], entry["y"], entry.get("zp")) for entry in document["placements"]
    )
    declared = {int(k): float(v) for k, v in document["per_delay"].items()}
    return placements, declared


def load_result(path: str) -> dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            document = json.load(fh)
    except OSError as exc:
        raise InvalidInstanceError(f"cannot read result file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidInstanceError(f"result file is not valid JSON: {exc}") from exc
    return document


def save_result(document: dict[str, Any], path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(document, fh, indent=2, sort_keys=True)
        fh.write("\n")
