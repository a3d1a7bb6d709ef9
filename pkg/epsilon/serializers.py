"""
Serializers for epsilon bounds and lemma reports.
"""

from rest_framework import serializers

from .bounds import BoundFormula


class EpsilonBoundSerializer(serializers.Serializer):
    """Serializer for EpsilonBound."""

    value = serializers.FloatField(min_value=0.0)
    eta_used = serializers.FloatField()
    validity_ok = serializers.BooleanField()
    formula = serializers.ChoiceField(choices=BoundFormula.choices)
    clamped = serializers.BooleanField()
    eg = serializers.FloatField(allow_null=True)
    delta_star = serializers.FloatField(allow_null=True)
    details = serializers.JSONField()


class LemmaReportSerializer(serializers.Serializer):
    lemma = serializers.CharField()
    lhs = serializers.FloatField()
    rhs = serializers.FloatField()
    passed = serializers.BooleanField()
    details = serializers.JSONField()


class SamplingReportSerializer(serializers.Serializer):
    """Serializer for aggregated randomized lemma checks."""

    lemma = serializers.CharField()
    trials = serializers.IntegerField(min_value=0)
    violations = serializers.IntegerField(min_value=0)
    worst_margin = serializers.FloatField()
    seed = serializers.IntegerField(allow_null=True)
    passed = serializers.BooleanField()
    failures = serializers.JSONField()
