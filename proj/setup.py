"""CMake-backed extension build: the pybind11 module is a regular CMake
target, so pip builds delegate to the same build the C++ tests use."""

import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name):
        super().__init__(name, sources=[])


class CMakeBuild(build_ext):
    def build_extension(self, ext):
        import pybind11

        source_dir = Path(__file__).resolve().parent
        build_dir = Path(self.build_temp).resolve()
        build_dir.mkdir(parents=True, exist_ok=True)
        subprocess.run(
            [
                "cmake",
                "-S", str(source_dir),
                "-B", str(build_dir),
                f"-DCMAKE_PREFIX_PATH={pybind11.get_cmake_dir()}",
                f"-DPython3_EXECUTABLE={sys.executable}",
            ],
            check=True,
        )
        subprocess.run(
            ["cmake", "--build", str(build_dir), "--target", "_nestedmzi", "-j"],
            check=True,
        )
        built = next(build_dir.glob("_nestedmzi*.so"))
        target = Path(self.get_ext_fullpath(ext.name)).resolve()
        target.parent.mkdir(parents=True, exist_ok=True)
        self.copy_file(str(built), str(target))


setup(
    packages=["nestedmzi"],
    package_dir={"": "python"},
    ext_modules=[CMakeExtension("nestedmzi._nestedmzi")],
    cmdclass={"build_ext": CMakeBuild},
)
