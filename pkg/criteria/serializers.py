"""
Serializers for verdicts and frontier points.
"""

from rest_framework import serializers

from .verdicts import Decision


class TraceEntrySerializer(serializers.Serializer):
    quantity = serializers.CharField()
    value = serializers.JSONField(allow_null=True)
    provenance = serializers.CharField(allow_blank=True)


class VerdictSerializer(serializers.Serializer):
    """Serializer for Verdict, including its provenance trace."""

    family = serializers.CharField()
    epsilon = serializers.FloatField(allow_null=True)
    delta = serializers.FloatField(allow_null=True)
    measure = serializers.CharField()
    family_value = serializers.FloatField(allow_null=True)
    required_value = serializers.FloatField(allow_null=True)
    decision = serializers.ChoiceField(choices=Decision.choices)
    trace = TraceEntrySerializer(many=True)
    note = serializers.CharField(allow_blank=True)


class FrontierPointSerializer(serializers.Serializer):
    eps_prime = serializers.FloatField()
    delta_prime = serializers.FloatField()
    admissible = serializers.BooleanField()
