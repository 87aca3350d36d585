from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

ext = Pybind11Extension(
    "fraq._fraq",
    sources=[
        "bindings/fraq_py.cpp",
        "src/gauss_jacobi.cpp",
        "src/cq_weights.cpp",
        "src/fast_kernel.cpp",
        "src/block_solver.cpp",
        "src/fpfp.cpp",
        "src/bench.cpp",
    ],
    include_dirs=["include"],
    cxx_std=20,
    extra_compile_args=["-O3"],
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
