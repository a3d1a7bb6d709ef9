"""
Serializers for monotone results, witnesses and axiom reports.
"""

import numpy as np
from rest_framework import serializers

from .results import MonotoneKind
from .trees import SubcubicTree


class MonotoneResultSerializer(serializers.Serializer):
    """
    Serializer for MonotoneResult.

    The witness (product state or tree) is only included when the context
    sets include_witness.
    """

    value = serializers.FloatField()
    kind = serializers.ChoiceField(choices=MonotoneKind.choices)
    method = serializers.CharField()
    iterations = serializers.IntegerField(min_value=0)
    restarts = serializers.IntegerField(min_value=0)
    converged = serializers.BooleanField()
    details = serializers.JSONField()

    def to_representation(self, instance):
        data = super().to_representation(instance)
        if self.context.get('include_witness'):
            data['witness'] = witness_to_representation(instance.witness)
        return data


def witness_to_representation(witness):
    if witness is None:
        return None
    if isinstance(witness, SubcubicTree):
        return {'leaves': witness.n, 'edges': [list(edge) for edge in witness.edges]}
    return [[[float(a.real), float(a.imag)] for a in np.asarray(vec)] for vec in witness]


class AxiomReportSerializer(serializers.Serializer):
    axiom = serializers.CharField()
    checked = serializers.IntegerField()
    violations = serializers.IntegerField()
    max_excess = serializers.FloatField()
    tolerance = serializers.FloatField()
    passed = serializers.BooleanField()
    details = serializers.JSONField()
