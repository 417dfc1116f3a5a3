"""Darboux partner oscillators from alpha-beta factorizations."""

from .errors import (DivisionBySingularAlpha, NonFiniteState, NumericalError,
                     SingularDenominator, SingularTime)
from .factorize import (CoefficientPair, FactorSolution, PartnerODE, RiccatiSeed,
                        alpha_numeric, bernoulli_residual, partner_coefficients,
                        reconstruct_fg, riccati_residual, undamped_condition)
from .families import (FamilyParams, FamilySnapshot, SuperpositionConstants,
                       singularity_scan, snapshot, solution)
from .funcs import SampledField, TimeGrid, cumulative_integral, make_grid, sample
from .verify import (IvpState, VerificationReport, asymptotics_report, crosscheck_family,
                     integrate_ivp, ode_residual, residual_report, wronskian)

__version__ = "0.1.0"
