"""Generalized (Hahn) series with Hardy-type derivations, logarithms and exponentials."""

from .derivation import (
    NOT_ATTAINED, RecurrentDerivation, TableDerivation, ThetaFamily, derive,
    log_derivative, validate_hardy,
)
from .el_tower import Big, Tower
from .errors import (
    ConfigurationError, DepthError, DomainError, HahnFieldError, HookUndefined,
    MathError, NoAsymptoticIntegral, ParseError, PrecisionError,
)
from .fields import Field, load_field
from .hahn_group import ZERO, Exponent, Spine, archimedean_equiv, compare_exponents, v_gamma
from .integration import IntegrationResult, integrate, monomial_ai, rosenlicht_ai
from .logarithm import log1p_unit, log_series, prelog_monomial, validate_prelog
from .parser import parse_expression
from .render import render_series, series_to_json
from .series import Series, compare_series, invert

__version__ = "0.1.0"
