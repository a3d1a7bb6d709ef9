# Generated by Django 5.2.6 on 2026-10-18 09:12

import django.utils.timezone
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='RunRecord',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('created_at', models.DateTimeField(db_index=True, default=django.utils.timezone.now)),
                ('subcommand', models.CharField(db_index=True, max_length=50)),
                ('action', models.CharField(blank=True, max_length=50)),
                ('seed', models.CharField(blank=True, help_text='64-bit seed, stored as text', max_length=20)),
                ('output_format', models.CharField(choices=[('human', 'Human readable'), ('json', 'JSON'), ('csv', 'CSV')], default='human', max_length=10)),
                ('output_path', models.CharField(blank=True, max_length=500)),
                ('config', models.JSONField(default=dict, help_text='Echo of every parameter the command ran with')),
                ('payload', models.JSONField(blank=True, null=True)),
                ('exit_code', models.IntegerField(default=0)),
                ('error_message', models.TextField(blank=True)),
                ('wall_time', models.FloatField(blank=True, help_text='Seconds', null=True)),
            ],
            options={
                'verbose_name': 'Run Record',
                'verbose_name_plural': 'Run Records',
                'ordering': ['-created_at'],
                'indexes': [models.Index(fields=['subcommand', 'created_at'], name='core_runrec_subcomm_3f1c2a_idx')],
            },
        ),
    ]
