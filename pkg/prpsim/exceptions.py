
class PrpsimError(Exception):
    pass


class SingularConfiguration(PrpsimError):

    def __init__(self, message, phi=None, t=None):
        super().__init__(message, phi, t)
        self.message = message
        self.phi = phi
        self.t = t

    def __str__(self):
        return self.message

    def at_time(self, t):
        return SingularConfiguration(f"t = {t!r} s: {self}", phi=self.phi, t=t)


class OracleMismatch(PrpsimError):

    def __init__(self, quantity, magnitude, tolerance):
        super().__init__(quantity, magnitude, tolerance)
        self.quantity = quantity
        self.magnitude = magnitude
        self.tolerance = tolerance

    def __str__(self):
        return f"{self.quantity}: {self.magnitude:.3e} exceeds {self.tolerance:.1e}"


class ConfigError(PrpsimError):
    pass


class SimIOError(PrpsimError):

    def __init__(self, path, error):
        super().__init__(path, error)
        self.path = path
        self.error = error

    def __str__(self):
        return f"{self.path}: {self.error}"
