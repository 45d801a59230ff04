from setuptools import setup, find_packages
from pathlib import Path

with Path("README.md").open() as readme:
    readme = readme.read()

version = "0.1"

setup(
    name="pylaneemden",
    version=version if isinstance(version, str) else str(version),
    keywords="Lane-Emden system, critical Sobolev hyperbola, blow-up rates, Green's function, Pohozaev identity",
    description="Numerical laboratory for Lane-Emden systems near the critical hyperbola",
    long_description=readme,
    long_description_content_type="text/markdown",
    license="mit",
    python_requires=">=3.9.0",
    packages=find_packages(exclude=["runtests", "examples", "examples.*"]),
    entry_points={"console_scripts": ["lane-emden=py_lane_emden.cli:main"]},
    install_requires=["attrs", "numpy", "scipy>=1.12"],
    platforms="any",
    classifiers=[
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "Programming Language :: Python :: Implementation :: CPython",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    zip_safe=False,
)
