import numpy as np

class RitzSet:
    '''Ritz values of the warm-up Arnoldi pass, closed under conjugation'''
    def __init__(self, values):
        self.values = np.asarray(values, dtype=np.complex128)
        if len(self.values) == 0:
            raise ValueError("a Ritz set needs at least one value")
        scale = max(np.max(np.abs(self.values)), 1.0)
        conj = np.sort_complex(np.conj(self.values))
        if np.max(np.abs(np.sort_complex(self.values) - conj)) > 1e-8 * scale:
            raise ValueError("Ritz values are not closed under conjugation")

    def __len__(self):
        return len(self.values)

    @property
    def real(self) -> np.ndarray:
        return self.values.real

    @property
    def imag(self) -> np.ndarray:
        return self.values.imag
