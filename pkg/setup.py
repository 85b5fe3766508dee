import pathlib
from setuptools import setup

# The directory containing this file
HERE = pathlib.Path(__file__).parent

# The text of the README file
with open((HERE / "README.md"), encoding="utf-8") as f:
    README = f.read()

# This call to setup() does all the work
setup(
    name="pyfastgate",
    version="1.0.0",
    description="Design ultrafast two-ion phase gates from split laser pulses",
    long_description=README,
    long_description_content_type="text/markdown",
    license="MIT",
    classifiers=[
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
    ],
    packages=["pyfastgate", "pyfastgate/core", "pyfastgate/schemes", "pyfastgate/optics", "pyfastgate/optimize",
              "pyfastgate/oracle", "pyfastgate/robustness", "pyfastgate/utils", "pyfastgate/examples"],
    include_package_data=True,
    install_requires=["scipy", "numpy", "shapely"],
    extras_require={"test": ["pytest"]},
    entry_points={"console_scripts": ["pyfastgate=pyfastgate.cli:main"]},
)
