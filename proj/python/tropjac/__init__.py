"""Tropical Jacobians, metric graphs and outer space.

Graphs, markings, points, paths and polynomials are plain dicts in the same
JSON layout the command-line tool reads.
"""

import json

import numpy as np

from . import _core
from ._core import EnumerationOverflow, GraphError, InputError, NoRouteError, OuterSpaceError

__all__ = [
    "EnumerationOverflow", "GraphError", "InputError", "NoRouteError", "OuterSpaceError",
    "validate", "genus", "cycle_basis", "period_matrix", "principality_check", "d_inv",
    "shortest_vector", "glnz_equivalent", "c1_sets", "connectivize", "cyclically_equivalent",
    "torelli_equal", "period_map", "tensor", "distance_interval", "distance_upper_bound",
    "path_length", "simplex_area", "tropical_eval", "corner_locus", "run_criterion", "run_cli",
]


def _doc(obj):
    return obj if isinstance(obj, str) else json.dumps(obj)


def validate(graph):
    return json.loads(_core.validate(_doc(graph)))


def genus(graph):
    return _core.genus(_doc(graph))


def cycle_basis(graph):
    return {"basis": _core.cycle_basis(_doc(graph))}


def period_matrix(graph, marking=None, exact=False):
    """Float matrix, or with exact=True a nested list of "p/q" strings."""
    m = "" if marking is None else _doc(marking)
    if exact:
        return json.loads(_core.period_matrix_exact(_doc(graph), m))
    return _core.period_matrix(_doc(graph), m)


def principality_check(graph, marking):
    return _core.principality_check(_doc(graph), _doc(marking))


def d_inv(a, b):
    return _core.d_inv(np.asarray(a, dtype=float), np.asarray(b, dtype=float))


def shortest_vector(q, node_budget=50_000_000):
    return _core.shortest_vector(np.asarray(q, dtype=float), node_budget)


def glnz_equivalent(a, b, radius=3):
    return _core.glnz_equivalent(np.asarray(a, dtype=float), np.asarray(b, dtype=float), radius)


def c1_sets(graph):
    return _core.c1_sets(_doc(graph))


def connectivize(graph, seed=None):
    return json.loads(_core.connectivize(_doc(graph), seed))


def cyclically_equivalent(first, second):
    return _core.cyclically_equivalent(_doc(first), _doc(second))


def torelli_equal(first, second):
    return _core.torelli_equal(_doc(first), _doc(second))


def period_map(point):
    return _core.period_map(_doc(point))


def tensor(point, kind="ds2", eps=0.0):
    return _core.tensor(_doc(point), kind, eps)


def distance_interval(p, q, metric="d1", budget=1):
    return _core.distance_interval(_doc(p), _doc(q), metric, budget)


def distance_upper_bound(p, q, kind="ds2", eps=0.0, refinements=3):
    return _core.distance_upper_bound(_doc(p), _doc(q), kind, eps, refinements)


def path_length(path, kind="ds2", eps=0.0, tol=1e-6):
    return _core.path_length(_doc(path), kind, eps, tol)


def simplex_area(type=None, marking=None, kind="ds2", eps=0.0, tol=1e-3):
    """Area of a 2-simplex; the theta simplex when no type is given."""
    t = "" if type is None else _doc(type)
    m = "" if marking is None else _doc(marking)
    return _core.simplex_area(t, m, kind, eps, tol)


def tropical_eval(polynomial, x, y):
    """Exact max-plus value as a "p/q" string; x and y are numbers or strings."""
    return _core.tropical_eval(_doc(polynomial), str(x), str(y))


def corner_locus(polynomial):
    return json.loads(_core.corner_locus(_doc(polynomial)))


def run_criterion(id, seed=20261014):
    return _core.run_criterion(id, seed)


def run_cli(args):
    """(exit code, stdout, stderr) of one command-line invocation."""
    return _core.run_cli([str(a) for a in args])
