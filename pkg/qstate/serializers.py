"""
Serializers for the state and graph file formats.

State file: {"n": int, "amplitudes": [[re, im], ...]}
Graph file: {"vertices": int, "edges": [[u, v], ...]}
"""

import math

from rest_framework import serializers

from .states import NORM_TOL


class ComplexPairField(serializers.ListField):
    """A complex number stored as [re, im] 64-bit floats."""

    child = serializers.FloatField()

    def to_representation(self, value):
        return [float(value.real), float(value.imag)]

    def to_internal_value(self, data):
        if not isinstance(data, (list, tuple)) or len(data) != 2:
            raise serializers.ValidationError('Each amplitude must be an [re, im] pair.')
        re, im = super().to_internal_value(data)
        if not (math.isfinite(re) and math.isfinite(im)):
            raise serializers.ValidationError('Amplitudes must be finite.')
        return complex(re, im)


class PureStateSerializer(serializers.Serializer):
    """Serializer for the state file format."""

    n = serializers.IntegerField(min_value=1)
    amplitudes = serializers.ListField(child=ComplexPairField())

    def validate(self, data):
        """Validate amplitude count and normalization."""
        if len(data['amplitudes']) != 2 ** data['n']:
            raise serializers.ValidationError(
                f"Expected {2 ** data['n']} amplitudes for n={data['n']}, got {len(data['amplitudes'])}."
            )
        norm2 = math.fsum(abs(a) ** 2 for a in data['amplitudes'])
        if abs(norm2 - 1.0) > NORM_TOL:
            raise serializers.ValidationError(f'State is not normalized (norm^2 = {norm2!r}).')
        return data


class GraphSerializer(serializers.Serializer):
    """Serializer for the graph file format."""

    vertices = serializers.IntegerField(min_value=1, source='num_vertices')
    edges = serializers.ListField(
        child=serializers.ListField(child=serializers.IntegerField(min_value=0), min_length=2, max_length=2)
    )

    def to_representation(self, instance):
        return {
            'vertices': instance.num_vertices,
            'edges': [[u, v] for u, v in sorted(instance.edges)],
        }

    def validate(self, data):
        """Validate edge endpoints and self-loops."""
        for u, v in data['edges']:
            if u == v:
                raise serializers.ValidationError(f'Self-loop on vertex {u}.')
            if max(u, v) >= data['num_vertices']:
                raise serializers.ValidationError(f'Edge ({u}, {v}) leaves the vertex range.')
        return data
