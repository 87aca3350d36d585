"""Fast convolution quadrature for Riemann-Liouville fractional derivatives.

Thin re-export of the compiled module: quadrature rules, CQ weight tables,
compressed kernels with O(1)-per-step history recursions, and the two-state
fractional Fokker-Planck solver.
"""

try:
    from . import _fraq as _impl  # installed wheel: extension inside the package
except ImportError:  # in-tree use: extension on sys.path (CMake build dir)
    import _fraq as _impl

__all__ = [
    "BeHistory",
    "FastKernelBE",
    "FastKernelSBD",
    "HistoryVariant",
    "JacobiRule",
    "KernelConfig",
    "KernelErrorReport",
    "ProblemSpec",
    "RunResult",
    "SbdHistory",
    "Scheme",
    "StateField",
    "WeightTable",
    "be_weights",
    "build_be_kernel",
    "build_sbd_kernel",
    "compute_rates",
    "coupling_from_transition",
    "default_sbd_head",
    "gauss_jacobi",
    "initial_field",
    "jacobi_moment",
    "kernel_error_report",
    "l2_norm",
    "parse_fraction",
    "run",
    "sbd_weights",
]

globals().update({name: getattr(_impl, name) for name in __all__})
