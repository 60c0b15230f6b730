import numpy as np

class GivensRotation:
    '''rotation in the (row, row + 1) plane that zeroes the entry at row + 1'''
    def __init__(self, c: float, s: float, row: int):
        self.c = c
        self.s = s
        self.row = row

    def apply(self, a: float, b: float) -> tuple:
        '''rotate the pair (a, b)'''
        return self.c * a + self.s * b, -self.s * a + self.c * b

    def apply_to(self, v: np.ndarray):
        '''rotate rows row and row + 1 of v in place (vector or matrix)'''
        top = v[self.row].copy()
        bottom = v[self.row + 1].copy()
        v[self.row] = self.c * top + self.s * bottom
        v[self.row + 1] = -self.s * top + self.c * bottom
