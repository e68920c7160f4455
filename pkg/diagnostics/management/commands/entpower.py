"""
Comando de Django para barrer potencias de entrelazamiento y sus cotas.
Ejecutar: python manage.py entpower --channel controlled-phase --param 0:2pi:9
"""

from diagnostics.management.experiment_command import ExperimentCommand
from diagnostics.services.sweep_service import SweepService


class Command(ExperimentCommand):
    help = 'Barre e_C, e_N, e_L y e_{C²} de un canal de dos qubits junto con las cotas analíticas'

    command_name = 'entpower'

    def run(self, options):
        spec = self.resolve_channel(options['channel'], self.parse_options(options['option']))
        validated = self.resolve_config(options)
        config = self.run_config(validated)
        grid = self.default_grid(spec, validated['param_grid'])

        table = SweepService().entpower_sweep(spec, grid, config)
        self.emit_table(table, config)
