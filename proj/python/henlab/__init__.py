from ._henlab import (
    ConfigError,
    ConvergenceError,
    DomainError,
    cli,
    escape_steps,
    ladder,
    lyapunov,
    maps,
    normalize_word,
    piece,
    renorm_window,
    renormalize,
    special_parameters,
    step,
    superstable_c1,
    swallow_tag,
    sweep,
)

__all__ = [
    "ConfigError",
    "ConvergenceError",
    "DomainError",
    "cli",
    "escape_steps",
    "ladder",
    "lyapunov",
    "maps",
    "normalize_word",
    "piece",
    "renorm_window",
    "renormalize",
    "special_parameters",
    "step",
    "superstable_c1",
    "swallow_tag",
    "sweep",
]
