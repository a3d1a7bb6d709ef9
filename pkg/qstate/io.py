"""
JSON reading and writing of states and graphs.

Floats are written with Python's shortest round-trip repr, so finite
doubles survive a write/read cycle bit for bit.
"""

import json
import logging
from pathlib import Path

from core.exceptions import InvalidArgument
from .serializers import GraphSerializer, PureStateSerializer
from .states import Graph, PureState

logger = logging.getLogger(__name__)


def validated(serializer_class, data, what):
    """Run a payload through its serializer, raising InvalidArgument on errors."""
    serializer = serializer_class(data=data)
    if not serializer.is_valid():
        raise InvalidArgument(f'Invalid {what}: {serializer.errors}')
    return serializer.validated_data


def state_to_dict(psi):
    return {'n': psi.n, 'amplitudes': PureStateSerializer(psi).data['amplitudes']}


def state_from_dict(data):
    payload = validated(PureStateSerializer, data, 'state file')
    return PureState(payload['amplitudes'])


def graph_to_dict(graph):
    return GraphSerializer(graph).data


def graph_from_dict(data):
    payload = validated(GraphSerializer, data, 'graph file')
    return Graph(payload['num_vertices'], frozenset(tuple(e) for e in payload['edges']))


def _read_json(path):
    try:
        with open(path, 'r', encoding='utf-8') as handle:
            return json.load(handle)
    except (OSError, json.JSONDecodeError) as e:
        raise InvalidArgument(f'Cannot read {path}: {e}')


def _write_json(data, path):
    Path(path).write_text(json.dumps(data, sort_keys=True) + '\n', encoding='utf-8')
    logger.info(f'Wrote {path}')


def load_state(path):
    return state_from_dict(_read_json(path))


def dump_state(psi, path):
    _write_json(state_to_dict(psi), path)


def load_graph(path):
    return graph_from_dict(_read_json(path))


def dump_graph(graph, path):
    _write_json(graph_to_dict(graph), path)
