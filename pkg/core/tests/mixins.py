import numpy as np

# Holgura de las comprobaciones Monte Carlo de la suite (validate usa 3σ)
TEST_SIGMAS = 4.0


class MonteCarloAssertionsMixin:

    def assertWithinSigma(self, estimate, expected, sigmas: float = TEST_SIGMAS, atol: float = 1e-12):
        diff = np.abs(np.asarray(estimate.mean) - np.asarray(expected))
        limit = sigmas * np.asarray(estimate.stderr) + atol
        if not np.all(diff <= limit):
            worst = float(np.max(diff - limit))
            self.fail(f"Estimación {estimate.mean!r} ± {estimate.stderr!r} lejos de {expected!r} "
                      f"({sigmas}σ, exceso {worst:.3e})")
