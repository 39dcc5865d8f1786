"""Numerical lab for optimal magnetic Sobolev constants."""
from .fields import FieldSpec, ScalarField, eval_field, eval_potential, gauge_transform
from .lattice import (LatticeDomain, LinkPhases, WaveFunction, build_links,
                      quadratic_form, apply_operator, rayleigh_quotient, lp_norm)
from .montgomery import band_value, minimize_band
from .solver import (SolveOptions, RayleighResult, linear_ground_state,
                     minimize_rayleigh, model_constant, min_param_constant)

__version__ = "0.1.0"
