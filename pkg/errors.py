from numpy.linalg import LinAlgError

class SStepGmresError(Exception):
    '''root of every error raised by the solver package'''

class DimensionError(SStepGmresError, ValueError):
    '''vector or matrix sizes do not agree'''

class RankDeficiencyError(SStepGmresError, LinAlgError):
    '''a QR pivot fell below the rank threshold

    column is the 0-based index of the first deficient column. For block steps
    it indexes the whole Q of the QR state, and the block has already been
    committed when this is raised.'''
    def __init__(self, column: int, message: str = "", Q=None, R=None):
        super().__init__(message or f"rank deficient at column {column}")
        self.column = column
        self.Q = Q
        self.R = R

class SvdNotConvergedError(SStepGmresError, LinAlgError):
    '''the Jacobi SVD stopped before converging, values holds its best estimate'''
    def __init__(self, info: int, values):
        super().__init__(f"Jacobi SVD did not converge (LAPACK info {info})")
        self.info = info
        self.values = values

class ZeroColumnError(SStepGmresError, ValueError):
    def __init__(self, column: int):
        super().__init__(f"column {column} has zero norm")
        self.column = column

class SingularTriangularError(SStepGmresError, LinAlgError):
    def __init__(self, column: int):
        super().__init__(f"triangular factor is numerically singular at column {column}")
        self.column = column

class MatrixMarketError(SStepGmresError, ValueError):
    '''malformed Matrix Market input, line is 1-based'''
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line

class CliUsageError(SStepGmresError):
    '''bad command line, the CLI prints usage and exits with 1'''
