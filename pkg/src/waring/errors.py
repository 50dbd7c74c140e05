"""Exception hierarchy. Every error raised on purpose by the package derives from WaringError."""


class WaringError(ValueError):
    pass


class NotPrime(WaringError):
    def __init__(self, n):
        super().__init__(f"{n} is not prime")
        self.n = n


class SizeCapExceeded(WaringError):
    def __init__(self, q, cap):
        super().__init__(f"field size {q} exceeds the cap {cap}")
        self.q = q
        self.cap = cap


class DivisionByZero(WaringError, ZeroDivisionError):
    def __init__(self):
        super().__init__("inverse of the zero element")


class NotADivisor(WaringError):
    def __init__(self, k, n):
        super().__init__(f"{k} does not divide {n}")
        self.k = k
        self.n = n


class NotNormalized(NotADivisor):
    pass


class NotCoprime(WaringError):
    def __init__(self, x, n):
        super().__init__(f"gcd({x}, {n}) != 1")
        self.x = x
        self.n = n


class DegreeCapExceeded(WaringError):
    def __init__(self, d, cap):
        super().__init__(f"cyclotomic index {d} exceeds the cap {cap}")
        self.d = d
        self.cap = cap


class Disconnected(WaringError):
    """The Waring number does not exist: the k-th powers lie in a proper subfield."""

    def __init__(self, k, q, subfield_degree=None):
        msg = f"Gamma({k},{q}) is disconnected; g({k},{q}) does not exist"
        if subfield_degree is not None:
            msg += f" (R_{k} lies in the subfield of degree {subfield_degree})"
        super().__init__(msg)
        self.k = k
        self.q = q
        self.subfield_degree = subfield_degree


class OracleCapExceeded(SizeCapExceeded):
    pass


class WorkCapExceeded(WaringError):
    def __init__(self, work, cap):
        super().__init__(f"BFS work estimate {work} exceeds the work cap {cap}")
        self.work = work
        self.cap = cap
