"""
Comando de Django para barrer fidelidades promedio, producto y χ_F.
Ejecutar: python manage.py fidelity --channel correlated-dephasing --param 0:1:11
"""

from diagnostics.management.experiment_command import ExperimentCommand
from diagnostics.services.sweep_service import SweepService


class Command(ExperimentCommand):
    help = 'Barre F_avg, F_prod y χ_F de una familia de canales (con estimaciones Monte Carlo)'

    command_name = 'fidelity'
    uses_target = True
    uses_analytic_only = True

    def run(self, options):
        spec = self.resolve_channel(options['channel'], self.parse_options(options['option']))
        validated = self.resolve_config(options)
        config = self.run_config(validated)
        grid = self.default_grid(spec, validated['param_grid'])
        sample = spec.build(grid.values()[0])
        target, target_name = self.resolve_target(options['target'], sample.D)

        self.logger.info(f"Barrido de fidelidad de {spec.describe()['name']} sobre {grid.describe()}")
        table = SweepService().fidelity_sweep(spec, grid, config, target=target, target_name=target_name)
        self.emit_table(table, config)
