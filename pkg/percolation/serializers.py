"""
Serializers for percolation estimates and sampled lattices.
"""

from rest_framework import serializers


class PercolationEstimateSerializer(serializers.Serializer):
    """Serializer for PercolationEstimate."""

    p_site = serializers.FloatField(min_value=0.0, max_value=1.0)
    side = serializers.IntegerField(min_value=2)
    trials = serializers.IntegerField(min_value=1)
    spanning_probability = serializers.FloatField(min_value=0.0, max_value=1.0)
    std_error = serializers.FloatField(min_value=0.0)
    seed = serializers.IntegerField()


class LatticeSerializer(serializers.Serializer):
    side = serializers.IntegerField(min_value=2)
    occupied_fraction = serializers.FloatField()
    holes = serializers.ListField(child=serializers.IntegerField(min_value=0))
