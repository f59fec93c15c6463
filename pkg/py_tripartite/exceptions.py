from typing import Optional


class TeleportationException(Exception):
    pass


class QuantumStateException(TeleportationException):
    pass


class DimensionMismatch(QuantumStateException):
    pass


class NonFiniteAmplitude(QuantumStateException):
    pass


class QubitIndexError(QuantumStateException):
    pass


class NotNormalized(QuantumStateException):
    pass


class CatalogException(TeleportationException):
    pass


class UnknownStateType(CatalogException):
    pass


class UnknownProtocol(CatalogException):
    pass


class InvalidRoles(CatalogException):
    pass


class InvalidTable(CatalogException):
    pass


class FidelityException(TeleportationException):
    pass


class InsufficientNodes(FidelityException):
    pass


class InsufficientSamples(FidelityException):
    pass


class ValidationResidualExceeded(FidelityException):
    def __init__(self, residual: float, tolerance: float, context: Optional[str] = None):
        self.residual = residual
        self.tolerance = tolerance
        self.context = context

    def __str__(self):
        text = f'validation residual {self.residual:.3e} exceeds {self.tolerance:.1e}'
        if self.context:
            text += f' ({self.context})'

        return text


class OracleDisagreement(FidelityException):
    def __init__(self, name: str, expected: float, actual: float):
        self.name = name
        self.expected = expected
        self.actual = actual

    def __str__(self):
        return f'{self.name}: expected {self.expected!r}, got {self.actual!r}'


class ReportException(TeleportationException):
    pass


class UnsupportedFormat(ReportException):
    pass
