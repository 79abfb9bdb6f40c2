"""Discrete trigonometric systems, CRT reindexing and series reduction."""

import json

from ._trigeq import (
    ConsistencyError,
    DtsSystem,
    JsonInputError,
    Plan,
    PlanSystem,
    System,
    TrigSystem,
    check_crt,
    crt_tau,
    crt_tau_bar,
    crt_tau_bar_inverse,
    crt_tau_inverse,
    dts_eval,
    dts_fourier_coeff,
    dts_truncate,
    dts_truncation_error,
    ks_distance,
    random_multi_indices,
    reduce,
    verify_prob_equiv,
)
from . import _trigeq


def cell_map(moduli):
    """List of {"from": residues, "to": cell} entries."""
    return json.loads(_trigeq.cell_map_json(list(moduli)))


def joint_distribution(moduli, reindexed=False):
    return json.loads(_trigeq.joint_distribution_json(list(moduli), reindexed))


def reduce_input(doc, n_max):
    """Reduce an input document ({"mode", "dim", "indices" | "polys"})."""
    return _trigeq.reduce_input_json(json.dumps(doc), n_max)


def check_structure(plan):
    return json.loads(plan.check_structure_json())


def plan_to_dict(plan, compact=False):
    return json.loads(plan.to_json(compact))


def plan_from_dict(doc):
    return Plan.from_json(json.dumps(doc))


def weight_check(w, n_max):
    return json.loads(_trigeq.weight_check_json(w, n_max))


def block_maxima(system, a, k_max, resolution):
    return json.loads(_trigeq.block_maxima_json(system, list(a), k_max, list(resolution)))


__all__ = [
    "ConsistencyError", "DtsSystem", "JsonInputError", "Plan", "PlanSystem", "System", "TrigSystem",
    "block_maxima", "cell_map", "check_crt", "check_structure", "crt_tau", "crt_tau_bar", "crt_tau_bar_inverse",
    "crt_tau_inverse", "dts_eval", "dts_fourier_coeff", "dts_truncate", "dts_truncation_error", "joint_distribution",
    "ks_distance", "plan_from_dict", "plan_to_dict", "random_multi_indices", "reduce", "reduce_input",
    "verify_prob_equiv", "weight_check",
]
