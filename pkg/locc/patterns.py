"""
One-way measurement patterns on graph states.

A wire pattern Z-measures every vertex off an induced path and then measures
the path qubits in equatorial bases. Measuring an input qubit at angle phi
with outcome s teleports it to the next path qubit as X^s H P(-phi), where
P(a) = diag(1, e^{ia}). Byproducts are tracked as a Pauli frame and undone
by feedforward just before each measurement and at read-out, so every
branch returns the same output state.
"""

import itertools
import logging
import math

import numpy as np

from core.exceptions import InvalidArgument
from qstate.states import Graph
from .protocol import MeasureStep, Protocol

logger = logging.getLogger(__name__)

HADAMARD = np.array([[1, 1], [1, -1]], dtype=np.complex128) / math.sqrt(2.0)
PLUS = np.array([1, 1], dtype=np.complex128) / math.sqrt(2.0)


def phase_gate(angle):
    return np.diag([1.0, complex(math.cos(angle), math.sin(angle))])


def _frame_letters(x, z):
    """Correction X^x Z^z, the inverse of the byproduct Z^z X^x up to phase."""
    return ('X' if x else '') + ('Z' if z else '')


def _check_line(graph, line):
    line = [int(v) for v in line]
    if len(line) < 2 or len(set(line)) != len(line):
        raise InvalidArgument('A wire needs at least two distinct vertices')
    if not all(0 <= v < graph.num_vertices for v in line):
        raise InvalidArgument(f'Wire {line} leaves the graph')
    on_line = set(line)
    for index, v in enumerate(line):
        expected = {line[j] for j in (index - 1, index + 1) if 0 <= j < len(line)}
        if set(graph.neighbors(v)) & on_line != expected:
            raise InvalidArgument(f'Wire {line} is not an induced path of the graph')
    return line


def _frames(graph, line, off_line, record):
    """
    Pauli frame (x, z) of every wire qubit after the outcomes in `record`.

    Steps are the off-line Z measurements followed by the wire measurements.
    """
    frame = {v: [0, 0] for v in line}
    for v, bit in zip(off_line, record):
        if bit == '1':
            for u in graph.neighbors(v):
                if u in frame:
                    frame[u][1] ^= 1
    for index, bit in enumerate(record[len(off_line):]):
        s = int(bit)
        frame[line[index + 1]][0] = s
        if index + 2 < len(line):
            frame[line[index + 2]][1] ^= s
    return frame


def wire_unitary(angles):
    """Logical map prod_j H P(-phi_j) applied by a wire with these angles."""
    u = np.eye(2, dtype=np.complex128)
    for phi in angles:
        u = HADAMARD @ phase_gate(-phi) @ u
    return u


def one_way_line(graph, line, angles):
    """
    Deterministic wire pattern on `graph` along the induced path `line`.

    The input qubit line[0] starts in |+>; angles give the equatorial
    measurement angle of every wire qubit but the last, which is the output.
    Returns (protocol, unitary) with output = unitary |+> in every branch.
    """
    if not isinstance(graph, Graph):
        raise InvalidArgument('one_way_line needs a Graph')
    line = _check_line(graph, line)
    angles = [float(a) for a in angles]
    if len(angles) != len(line) - 1:
        raise InvalidArgument(f'Need {len(line) - 1} angles for a wire of {len(line)} qubits, got {len(angles)}')
    off_line = [v for v in range(graph.num_vertices) if v not in set(line)]

    steps = [MeasureStep(v, 0.0, 0.0) for v in off_line]
    for index, (v, phi) in enumerate(zip(line[:-1], angles)):
        k = len(steps)
        feedforward = {}
        for bits in itertools.product('01', repeat=k):
            record = ''.join(bits)
            x, z = _frames(graph, line, off_line, record)[v]
            if x or z:
                feedforward[record] = _frame_letters(x, z)
        steps.append(MeasureStep(v, math.pi / 2, phi, feedforward))

    output = line[-1]
    corrections = {}
    for bits in itertools.product('01', repeat=len(steps)):
        record = ''.join(bits)
        x, z = _frames(graph, line, off_line, record)[output]
        corrections[record] = (_frame_letters(x, z),)
    logger.debug(f'Wire {line} with {len(off_line)} removed vertices: {len(steps)} steps')
    return Protocol(tuple(steps), (output,), corrections), wire_unitary(angles)


def one_way_rotation(angles):
    """
    Arbitrary single-qubit rotation on a 5-qubit 1D cluster.

    With Euler angles (a, b, c) the wire angles are (0, -a, -b, -c), so the
    output is H P(c) H P(b) H P(a) H |+>. Returns (protocol, unitary).
    """
    if len(angles) != 3:
        raise InvalidArgument(f'Need three Euler angles, got {len(angles)}')
    a, b, c = (float(x) for x in angles)
    return one_way_line(Graph.path(5), range(5), [0.0, -a, -b, -c])


def target_state(unitary):
    return unitary @ PLUS
