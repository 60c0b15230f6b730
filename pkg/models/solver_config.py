import math
from dataclasses import dataclass, replace

from dense_kernels import UNIT_ROUNDOFF

@dataclass
class SolverConfig:
    '''settings of one s-step GMRES run, defaults match the reference experiments'''
    s: int = 1
    max_outer: int = None
    max_restarts: int = 10
    basis: str = "monomial"
    variant: str = "classical"
    scheme: str = "bcgsi+"
    tol: float = None
    tol_ls: float = None
    tol_h: float = None
    restart: int = None
    precond: str = "none"
    precond_side: str = "right"
    basis_operator: str = "plain"
    check_backward_every: int = 1
    check_key_dimension: bool = True
    ls_advisory: bool = True
    diag_every: int = 1
    seed: int = 0
    verbose: bool = False

    def resolve(self, n: int) -> 'SolverConfig':
        '''copy with the n-dependent defaults filled in, validated against n'''
        tol = self.tol if self.tol is not None else n * UNIT_ROUNDOFF
        cfg = replace(
            self,
            tol=tol,
            tol_ls=self.tol_ls if self.tol_ls is not None else tol,
            tol_h=self.tol_h if self.tol_h is not None else math.sqrt(n) * UNIT_ROUNDOFF,
        )
        if cfg.max_outer is None:
            if cfg.restart is None:
                cfg.max_outer = math.ceil(n / cfg.s)
            else:
                cfg.max_outer = math.ceil(cfg.restart / cfg.s) * cfg.max_restarts
        cfg.validate(n)
        return cfg

    def validate(self, n: int):
        if self.s < 1:
            raise ValueError("block size s must be at least 1")
        if self.s > n:
            raise ValueError(f"block size s={self.s} exceeds the dimension n={n}")
        if self.restart is not None and not self.s <= self.restart <= n:
            raise ValueError(f"restart length must satisfy s <= restart <= n, got {self.restart}")
        if self.basis not in ("monomial", "newton", "chebyshev"):
            raise ValueError(f"unknown basis {self.basis!r}")
        if self.basis != "monomial" and self.s > 64:
            raise ValueError("Newton and Chebyshev bases support s <= 64")
        if self.variant not in ("classical", "modified"):
            raise ValueError(f"unknown Arnoldi variant {self.variant!r}")
        if self.scheme not in ("bcgsi+", "bmgs"):
            raise ValueError(f"unknown orthogonalization scheme {self.scheme!r}")
        if self.precond not in ("none", "jacobi"):
            raise ValueError(f"unknown preconditioner {self.precond!r}")
        if self.precond_side not in ("left", "right"):
            raise ValueError(f"preconditioner side must be left or right")
        if self.basis_operator not in ("plain", "preconditioned"):
            raise ValueError(f"unknown basis operator {self.basis_operator!r}")
        for name in ("tol", "tol_ls", "tol_h"):
            value = getattr(self, name)
            if value is not None and value <= 0:
                raise ValueError(f"{name} must be positive")
        if self.check_backward_every < 1:
            raise ValueError("check_backward_every must be at least 1")
        if self.diag_every < 0:
            raise ValueError("diag_every must be nonnegative")
        if self.max_outer is not None and self.max_outer < 1:
            raise ValueError("max_outer must be at least 1")
        if self.max_restarts < 1:
            raise ValueError("max_restarts must be at least 1")
