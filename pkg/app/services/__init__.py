"""
Services Package - Calculus and Observability Services
"""

from .calculus_service import CalculusService
from .observability_service import ObservabilityService

__all__ = ['CalculusService', 'ObservabilityService']
