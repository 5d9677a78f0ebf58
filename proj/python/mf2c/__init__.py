"""Fog-to-cloud orchestration simulator with an airport proximity workload."""

import json

from ._core import (
    HeatMap,
    Mf2cError,
    Outcome,
    PlacementDecision,
    Topology,
    default_calibration_json,
    detect_clusters,
    distance_to_rssi,
    rssi_to_distance,
    trilaterate,
)
from ._core import generate_scenario_json, run_presets_json

PRESETS = ("Fog1", "CloudOnly", "Mf2c1Fog", "Mf2c2Fog")


def generate_scenario(params=None, seed=1):
    """Expanded scenario as a dict. `params` follows docs/scenario_schema.md."""
    return json.loads(generate_scenario_json(json.dumps(params) if params else "", seed))


def default_calibration():
    return json.loads(default_calibration_json())


def run_presets(presets=PRESETS, rates=None, duration_s=None, seed=1, travelers=None, calibration=None, threads=0):
    """Runs a sweep for each preset and returns the summary document as a dict."""
    text = run_presets_json(
        list(presets),
        rates=rates,
        duration_s=duration_s,
        seed=seed,
        travelers=travelers,
        calibration_json=json.dumps(calibration) if calibration else "",
        threads=threads,
    )
    return json.loads(text)


def topology_from_nodes(nodes):
    """Builds a Topology from a list of node dicts (id, kind, parent, ...)."""
    return Topology.from_json(json.dumps({"nodes": nodes}))


__all__ = [
    "HeatMap",
    "Mf2cError",
    "Outcome",
    "PRESETS",
    "PlacementDecision",
    "Topology",
    "default_calibration",
    "detect_clusters",
    "distance_to_rssi",
    "generate_scenario",
    "rssi_to_distance",
    "run_presets",
    "topology_from_nodes",
    "trilaterate",
]
