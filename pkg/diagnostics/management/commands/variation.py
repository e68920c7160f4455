"""
Comando de Django para mapas de variación de entrelazamiento sobre (t, θ).
Ejecutar: python manage.py variation --channel phase-damping --param 0:3:41 --theta 0:pi/4:33
"""

from diagnostics.config import GRID_CONFIG
from diagnostics.management.experiment_command import ExperimentCommand
from diagnostics.services.sweep_service import GridSpec, SweepService


class Command(ExperimentCommand):
    help = 'Tabla larga de Δe_C, Δe_N y Δe_L con sus cotas sobre la rejilla (parámetro, θ)'

    command_name = 'variation'
    uses_theta = True

    def run(self, options):
        spec = self.resolve_channel(options['channel'], self.parse_options(options['option']))
        validated = self.resolve_config(options)
        config = self.run_config(validated)
        grid = self.default_grid(spec, validated['param_grid'])
        theta_grid = validated['theta_grid'] or GridSpec.from_tuple(GRID_CONFIG['theta'])

        table = SweepService().variation_sweep(spec, grid, theta_grid, config)
        self.emit_table(table, config)
