import os

from setuptools import find_packages, setup

package_name = "wavepack"
here = os.path.abspath(os.path.dirname(__file__))

# read version
version_path = os.path.join(here, package_name, "version.py")
exec(open(version_path).read())

extras = {
    "dev": [
        "PyWavelets",  # cross-check oracle in tests
        "pandas",  # load_history(as_dataframe=True)
        "psutil",  # memory info
    ],
}

setup(
    name=package_name,
    packages=[package for package in find_packages() if package.startswith(package_name)],
    version=VERSION,
    license="MIT",
    description="boundary wavelet transforms and 2D wavelet packets as sparse operators, with packet statistics and linear classifiers",
    long_description=open(os.path.join(here, "README.md"), encoding="utf-8").read().replace("\r", ""),
    long_description_content_type="text/markdown",
    install_requires=["numpy", "scipy", "pillow"],
    extras_require=extras,
    entry_points={"console_scripts": ["wavepack = wavepack.runner.cli:main"]},
    python_requires=">=3.8",
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Programming Language :: Python",
        "Programming Language :: Python :: 3",
    ],
)
