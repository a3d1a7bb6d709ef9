"""
Serializers for the report envelope and the run ledger.
"""

from rest_framework import serializers

from .models import RunRecord

SCHEMA_VERSION = '1'


class ProvenanceSerializer(serializers.Serializer):
    """Where a reported number came from."""

    quantity = serializers.CharField(max_length=200)
    value = serializers.JSONField(allow_null=True)
    source = serializers.CharField(max_length=200)
    anchor = serializers.CharField(allow_blank=True, default='')


class ReportSerializer(serializers.Serializer):
    """Envelope every subcommand emits in machine-readable formats."""

    schema_version = serializers.CharField()
    subcommand = serializers.CharField(max_length=50)
    action = serializers.CharField(max_length=50, allow_blank=True, default='')
    config = serializers.DictField()
    payload = serializers.JSONField()
    provenance = ProvenanceSerializer(many=True)

    def validate_schema_version(self, value):
        if value != SCHEMA_VERSION:
            raise serializers.ValidationError(f'Unsupported schema version {value!r}')
        return value


class RunRecordSerializer(serializers.ModelSerializer):
    """Serializer for ledger entries."""

    succeeded = serializers.BooleanField(read_only=True)

    class Meta:
        model = RunRecord
        fields = [
            'id', 'created_at', 'subcommand', 'action', 'seed', 'output_format',
            'output_path', 'config', 'payload', 'exit_code', 'error_message',
            'wall_time', 'succeeded',
        ]
        read_only_fields = fields
