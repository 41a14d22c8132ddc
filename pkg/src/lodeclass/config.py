from dataclasses import dataclass


@dataclass(frozen=True)
class Config:
    """Truncation order and the three numerical thresholds.

    ``tol`` decides when a jet coefficient counts as zero, ``reg_tol`` when a
    value at the base point counts as nonvanishing, and ``rank_tol`` is the
    pivot threshold of the symmetry rank computation.
    """

    order: int = 12
    tol: float = 1e-9
    reg_tol: float = 1e-6
    rank_tol: float = 1e-8

    def __post_init__(self):
        if self.order < 4:
            raise ValueError(f"order must be >= 4, got {self.order}")
        if not 0 < self.tol < self.reg_tol < 1:
            raise ValueError("need 0 < tol < reg_tol < 1")
        if self.rank_tol <= 0:
            raise ValueError("rank_tol must be positive")


DEFAULT = Config()


def resolve(config):
    return DEFAULT if config is None else config
