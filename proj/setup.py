import os
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
        source_dir = Path(__file__).parent.resolve()
        out_dir = Path(self.get_ext_fullpath(ext.name)).parent.resolve()
        build_dir = Path(self.build_temp) / "cmake"
        build_dir.mkdir(parents=True, exist_ok=True)

        cfg = "Debug" if self.debug else "Release"
        args = [
            f"-DCMAKE_BUILD_TYPE={cfg}",
            f"-DCMAKE_LIBRARY_OUTPUT_DIRECTORY={out_dir}",
            f"-DPython3_EXECUTABLE={sys.executable}",
            "-DSCLGEO_BUILD_TESTS=OFF",
            "-DSCLGEO_BUILD_PYTHON=ON",
        ]
        if extra := os.environ.get("SCLGEO_CMAKE_ARGS"):
            args += extra.split()

        subprocess.run(["cmake", "-S", str(source_dir), "-B", str(build_dir)] + args,
                       check=True)
        subprocess.run(["cmake", "--build", str(build_dir), "--target", "_sclgeo"],
                       check=True)


setup(
    ext_modules=[CMakeExtension("sclgeo._sclgeo")],
    cmdclass={"build_ext": CMakeBuild},
)
