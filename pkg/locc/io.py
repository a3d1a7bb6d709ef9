"""
JSON reading and writing of measurement protocols.
"""

from qstate.io import _read_json, _write_json, validated
from .protocol import MeasureStep, Protocol
from .serializers import ProtocolSerializer


def protocol_to_dict(protocol):
    return {
        'steps': [
            {'qubit': step.qubit, 'theta': step.theta, 'phi': step.phi, 'ff': dict(step.feedforward)}
            for step in protocol.steps
        ],
        'outputs': list(protocol.outputs),
        'corrections': {bits: list(letters) for bits, letters in protocol.corrections.items()},
    }


def protocol_from_dict(data):
    payload = validated(ProtocolSerializer, data, 'protocol file')
    steps = tuple(
        MeasureStep(step['qubit'], step['theta'], step['phi'], step['feedforward']) for step in payload['steps']
    )
    return Protocol(steps, tuple(payload['outputs']), payload['corrections'])


def load_protocol(path):
    return protocol_from_dict(_read_json(path))


def dump_protocol(protocol, path):
    _write_json(protocol_to_dict(protocol), path)
