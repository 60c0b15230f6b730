import numpy as np
from models.givens_rotation import GivensRotation

class LsState:
    '''Givens QR of the Hessenberg matrix H and the rotated right-hand side

    after p columns: T is p x p upper triangular and g has p + 1 entries,
    |g[p]| is the least-squares residual estimate'''
    def __init__(self, beta: float):
        self.beta = float(beta)
        self.chain: list[GivensRotation] = list()
        self.T = np.zeros((0, 0), order="F")
        self.g = np.array([self.beta])

    @property
    def p(self) -> int:
        return self.T.shape[1]

    @property
    def residual_estimate(self) -> float:
        return float(abs(self.g[-1]))
