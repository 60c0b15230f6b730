import numpy as np

class BasisKind:
    '''polynomial family used to build each s-column Krylov block

    monomial: no parameters
    newton: Leja-ordered shifts, complex values in adjacent conjugate pairs
    chebyshev: ellipse center d, focal distance c and a positive scale'''
    def __init__(self, name: str, shifts=None, center: float = 0.0, focal: float = 1.0, scale: float = 1.0):
        if name not in ("monomial", "newton", "chebyshev"):
            raise ValueError(f"unknown basis kind {name!r}")
        self.name = name
        self.shifts = np.asarray(shifts if shifts is not None else [], dtype=np.complex128)
        self.center = float(center)
        self.focal = float(focal)
        self.scale = float(scale)

        if name == "newton":
            if len(self.shifts) == 0:
                raise ValueError("newton basis needs at least one shift")
            check_conjugate_pairs(self.shifts)
        if name == "chebyshev" and self.scale <= 0:
            raise ValueError("chebyshev scale must be positive")

    @classmethod
    def monomial(cls) -> 'BasisKind':
        return cls("monomial")

    @classmethod
    def newton(cls, shifts) -> 'BasisKind':
        return cls("newton", shifts=shifts)

    @classmethod
    def chebyshev(cls, center: float, focal: float, scale: float = 1.0) -> 'BasisKind':
        return cls("chebyshev", center=center, focal=focal, scale=scale)

    def __repr__(self):
        if self.name == "newton":
            return f"BasisKind(newton, {len(self.shifts)} shifts)"
        if self.name == "chebyshev":
            return f"BasisKind(chebyshev, d={self.center:.6g}, c={self.focal:.6g})"
        return "BasisKind(monomial)"

def check_conjugate_pairs(shifts: np.ndarray):
    '''every strictly complex shift must be followed by its conjugate'''
    i = 0
    while i < len(shifts):
        if shifts[i].imag != 0:
            if i + 1 >= len(shifts) or shifts[i + 1] != np.conj(shifts[i]):
                raise ValueError(f"shift {i} is complex but its conjugate does not follow it")
            i += 2
        else:
            i += 1
