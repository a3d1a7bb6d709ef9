from django.db import models
from django.utils import timezone


class RunRecord(models.Model):
    """
    Ledger entry for one toolkit command invocation.

    Written only when a command is run with --record. Wall time is kept here
    and in the log, never in the emitted report.
    """

    class OutputFormat(models.TextChoices):
        HUMAN = 'human', 'Human readable'
        JSON = 'json', 'JSON'
        CSV = 'csv', 'CSV'

    created_at = models.DateTimeField(default=timezone.now, db_index=True)
    subcommand = models.CharField(max_length=50, db_index=True)
    action = models.CharField(max_length=50, blank=True)
    seed = models.CharField(max_length=20, blank=True, help_text='64-bit seed, stored as text')
    output_format = models.CharField(max_length=10, choices=OutputFormat.choices, default=OutputFormat.HUMAN)
    output_path = models.CharField(max_length=500, blank=True)

    config = models.JSONField(default=dict, help_text='Echo of every parameter the command ran with')
    payload = models.JSONField(null=True, blank=True)
    exit_code = models.IntegerField(default=0)
    error_message = models.TextField(blank=True)
    wall_time = models.FloatField(null=True, blank=True, help_text='Seconds')

    class Meta:
        verbose_name = "Run Record"
        verbose_name_plural = "Run Records"
        ordering = ['-created_at']
        indexes = [
            models.Index(fields=['subcommand', 'created_at'], name='core_runrec_subcomm_3f1c2a_idx'),
        ]

    def __str__(self):
        return f"{self.created_at.strftime('%Y-%m-%d %H:%M:%S')} - {self.subcommand} (exit {self.exit_code})"

    @property
    def succeeded(self):
        return self.exit_code == 0

    @classmethod
    def log_run(cls, subcommand, config, payload=None, exit_code=0, seed=None,
                output_format='human', output_path='', action='', error_message='', wall_time=None):
        """
        Create a ledger entry.
        """
        return cls.objects.create(
            subcommand=subcommand,
            action=action or '',
            seed='' if seed is None else str(seed),
            output_format=output_format,
            output_path=output_path or '',
            config=config,
            payload=payload,
            exit_code=exit_code,
            error_message=error_message,
            wall_time=wall_time,
        )
