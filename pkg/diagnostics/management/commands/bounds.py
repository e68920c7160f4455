"""
Comando de Django para comparar e_C con sus cotas de dos copias.
Ejecutar: python manage.py bounds --channel cz-phase-damping --option g=1.5 --option Gamma=1
"""

from diagnostics.management.experiment_command import ExperimentCommand
from diagnostics.services.sweep_service import SweepService


class Command(ExperimentCommand):
    help = 'Barre las cotas 2·max(0, δ̄_P) ≤ e_C ≤ √(2 e_L) y la impureza global frente a e_C Monte Carlo'

    command_name = 'bounds'
    uses_analytic_only = True

    def run(self, options):
        spec = self.resolve_channel(options['channel'], self.parse_options(options['option']))
        validated = self.resolve_config(options)
        config = self.run_config(validated)
        grid = self.default_grid(spec, validated['param_grid'])

        table = SweepService().bounds_sweep(spec, grid, config)
        self.emit_table(table, config)
