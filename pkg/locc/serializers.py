"""
Serializers for the protocol file format and for protocol run reports.

Protocol file:
    {"steps": [{"qubit": k, "theta": t, "phi": f, "ff": {"<bits>": "<pauli>"}}, ...],
     "outputs": [...], "corrections": {"<bits>": ["<pauli>", ...]}}
"""

from rest_framework import serializers

from qstate.serializers import PureStateSerializer


class PauliStringField(serializers.RegexField):
    def __init__(self, **kwargs):
        kwargs.setdefault('allow_blank', True)
        super().__init__(r'^[IXYZixyz]*$', **kwargs)


class MeasureStepSerializer(serializers.Serializer):
    qubit = serializers.IntegerField(min_value=0)
    theta = serializers.FloatField()
    phi = serializers.FloatField()
    ff = serializers.DictField(child=PauliStringField(), required=False, default=dict, source='feedforward')


class ProtocolSerializer(serializers.Serializer):
    """Serializer for the protocol file format."""

    steps = MeasureStepSerializer(many=True)
    outputs = serializers.ListField(child=serializers.IntegerField(min_value=0))
    corrections = serializers.DictField(
        child=serializers.ListField(child=PauliStringField()),
        required=False,
        default=dict,
    )

    def validate_steps(self, value):
        qubits = [step['qubit'] for step in value]
        if len(set(qubits)) != len(qubits):
            raise serializers.ValidationError('Each qubit may be measured at most once.')
        return value


class BranchLeafSerializer(serializers.Serializer):
    record = serializers.CharField(allow_blank=True)
    probability = serializers.FloatField(min_value=0.0)
    pure = serializers.BooleanField(source='is_pure')

    def to_representation(self, instance):
        data = super().to_representation(instance)
        if self.context.get('include_states') and instance.is_pure:
            data['state'] = PureStateSerializer(instance.state).data
        return data


class BranchTreeSerializer(serializers.Serializer):
    leaves = BranchLeafSerializer(many=True)
    pruned = serializers.ListField(child=serializers.ListField())
    total_probability = serializers.FloatField()


class FidelityReportSerializer(serializers.Serializer):
    fidelity = serializers.FloatField()
    required = serializers.FloatField()
    eps = serializers.FloatField()
    delta = serializers.FloatField()
    passed = serializers.BooleanField()


class NoisyClusterReportSerializer(serializers.Serializer):
    """Serializer for NoisyClusterReport."""

    p = serializers.FloatField()
    branches = serializers.IntegerField()
    measured_qubits = serializers.IntegerField()
    max_distance = serializers.FloatField()
    distances = serializers.ListField(child=serializers.FloatField())
    probabilities_match = serializers.BooleanField()
    uniform = serializers.BooleanField()
    fidelity = FidelityReportSerializer()
    passed = serializers.BooleanField()
    details = serializers.JSONField()


class StabilityReportSerializer(serializers.Serializer):
    mu = serializers.FloatField()
    eps = serializers.FloatField()
    delta = serializers.FloatField()
    output_distance = serializers.FloatField()
    distance_bound = serializers.FloatField()
    measured_fidelity = serializers.FloatField()
    fidelity_bound = serializers.FloatField()
    passed = serializers.BooleanField()


class StabilityTrialsSerializer(serializers.Serializer):
    """Serializer for aggregated stability trials; per-trial reports are omitted."""

    mu = serializers.FloatField()
    kind = serializers.CharField()
    trials = serializers.IntegerField()
    violations = serializers.IntegerField()
    worst_margin = serializers.FloatField()
    frontier_ok = serializers.BooleanField()
    seed = serializers.IntegerField()
    passed = serializers.BooleanField()
