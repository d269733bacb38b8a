"""Trafficking-network interdiction: generation, instances and solvers.

Networks, instances and reports are plain dicts in the same JSON layout the
command-line tool reads and writes.
"""

import json

from . import _htnet
from ._htnet import ConfigError, FormatError, OracleRefusal, SolverError, SCHEMA_VERSION

__all__ = [
    "ConfigError",
    "FormatError",
    "OracleRefusal",
    "SolverError",
    "SCHEMA_VERSION",
    "default_config",
    "generate_network",
    "validate_network",
    "metrics_csv",
    "centrality",
    "build_instance",
    "max_flow",
    "solve_mfnip",
    "solve_mfnip_r",
    "solve_defender",
    "oracle",
]


def _text(doc):
    return doc if isinstance(doc, str) else json.dumps(doc)


def _ids(ids):
    return [int(i) for i in ids]


def default_config():
    """Default generator and schedule settings as `key = value` text."""
    return _htnet.default_config()


def generate_network(operations, seed=None, config=None):
    return json.loads(_htnet.generate_network(operations, seed, dict(config or {})))


def validate_network(network):
    return _htnet.validate_network(_text(network))


def metrics_csv(network, include_bottom=True):
    return _htnet.metrics_csv(_text(network), include_bottom)


def centrality(n, edges):
    """Density and centralizations of an undirected graph on 0..n-1."""
    return _htnet.centrality(n, [tuple(e) for e in edges])


def build_instance(network, seed=None, config=None):
    return json.loads(_htnet.build_instance(_text(network), seed, dict(config or {})))


def max_flow(instance, interdicted=()):
    return _htnet.max_flow(_text(instance), _ids(interdicted))


def solve_mfnip(instance, budget):
    return json.loads(_htnet.solve(_text(instance), "mfnip", budget))


def solve_mfnip_r(instance, budget):
    return json.loads(_htnet.solve(_text(instance), "mfnip-r", budget))


def solve_defender(instance, interdicted):
    return json.loads(_htnet.solve_defender(_text(instance), _ids(interdicted)))


def oracle(instance, model, budget=0, interdicted=()):
    """Exhaustive reference solve; refuses instances that are too large."""
    return json.loads(_htnet.oracle(_text(instance), model, budget, _ids(interdicted)))
