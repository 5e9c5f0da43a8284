"""Setup script for the cuspidal-torsion package."""

from setuptools import setup, find_packages
from pathlib import Path

# Read the README file
readme_file = Path(__file__).parent / "README.md"
long_description = readme_file.read_text(encoding="utf-8") if readme_file.exists() else ""

setup(
    name="cuspidal-torsion",
    version="0.1.0",
    description="Exact rational torsion of Jacobians and generalized Jacobians of X_0(N) for squarefree N",
    long_description=long_description,
    long_description_content_type="text/markdown",
    author="Cuspidal Torsion Contributors",
    packages=find_packages(exclude=("examples", "examples.*")),
    install_requires=[
        "sympy>=1.12",
        "numpy>=1.24",
        "galois>=0.3.8",
    ],
    extras_require={
        "docs": [
            "sphinx>=7.0.0",
            "sphinx-rtd-theme>=2.0.0",
        ],
        "test": [
            "pytest>=7.0",
        ],
    },
    entry_points={
        "console_scripts": [
            "cuspidal-torsion=cuspidal_torsion.cli:main",
        ],
    },
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Mathematics",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
    ],
    python_requires=">=3.9",
)
